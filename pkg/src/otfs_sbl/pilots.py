"""Time-domain pilots and the sparse sensing model r_p = Omega h + eta.

The dictionary column for delay bin i and fine Doppler bin j applies an
i-sample forward circular shift and a Doppler phase ramp to the pilot
sequence.  On wrapped rows the phase exponent continues below zero (the
wrapped sample was transmitted before the block started), which keeps
the dictionary consistent with the sampled channel law for fractional
Doppler.
"""

from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization, complex_awgn
from .errors import DimensionMismatch, EmptyGrid, OutOfGrid

_QPSK_POINTS = np.array([1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j], dtype=np.complex128) / np.sqrt(2.0)


@dataclass(frozen=True)
class PilotSpec:
    """Unit-modulus pilot sequence of length N_p plus the seed that built it."""

    n_p: int
    sequence: np.ndarray
    seed: int

    def __post_init__(self):
        if self.sequence.shape != (self.n_p,):
            raise DimensionMismatch("sequence length must equal n_p")


def generate_pilot(n_p: int, seed: int) -> PilotSpec:
    """Deterministic unit-modulus QPSK-alphabet pilot."""
    if n_p < 1:
        raise ValueError("n_p must be at least 1")
    rng = np.random.default_rng(seed)
    seq = _QPSK_POINTS[rng.integers(0, 4, size=n_p)]
    seq.setflags(write=False)
    return PilotSpec(n_p=n_p, sequence=seq, seed=seed)


@dataclass(frozen=True)
class Dictionary:
    """Sensing matrix Omega (N_p x D) with the (delay, Doppler-bin) column map.

    D = m_tau * g_nu; column index of bin (i, j) is i * g_nu + j.  The
    fine Doppler bin j carries the real Doppler index c_j = j * n_nu / g_nu.
    """

    omega: np.ndarray
    pilot: PilotSpec
    m_tau: int
    n_nu: int
    g_nu: int
    M: int
    N: int

    @property
    def n_p(self) -> int:
        return self.pilot.n_p

    @property
    def D(self) -> int:
        return self.m_tau * self.g_nu

    @property
    def base_phase(self) -> float:
        """Phase of the dictionary's Doppler unit omega = exp(j*2*pi*n_nu/(g_nu*M*N))."""
        return 2.0 * np.pi * self.n_nu / (self.g_nu * self.M * self.N)

    def col_of(self, i: int, j: int) -> int:
        if not (0 <= i < self.m_tau and 0 <= j < self.g_nu):
            raise OutOfGrid(f"bin ({i}, {j}) outside {self.m_tau}x{self.g_nu} grid")
        return i * self.g_nu + j

    def bin_of(self, col: int) -> tuple:
        if not (0 <= col < self.D):
            raise OutOfGrid(f"column {col} outside dictionary of width {self.D}")
        return divmod(col, self.g_nu)

    def doppler_index(self, j: int) -> float:
        """Real Doppler index c represented by fine bin j."""
        return j * self.n_nu / self.g_nu

    def doppler_bin(self, c: float) -> int:
        """Nearest fine bin for a real Doppler index, clamped to the grid."""
        return int(min(max(round(c * self.g_nu / self.n_nu), 0), self.g_nu - 1))


def build_dictionary(pilot: PilotSpec, m_tau: int, n_nu: int, g_nu: int, M: int, N: int) -> Dictionary:
    """Stack the shifted/modulated pilot copies column-wise into Omega."""
    if m_tau < 1 or g_nu < 1:
        raise EmptyGrid(f"grid {m_tau}x{g_nu} has no bins")
    if n_nu < 1:
        raise ValueError("n_nu must be at least 1")
    n_p = pilot.n_p
    base = 2.0 * np.pi * n_nu / (g_nu * M * N)
    p = np.arange(n_p)
    j = np.arange(g_nu)
    omega = np.empty((n_p, m_tau * g_nu), dtype=np.complex128)
    for i in range(m_tau):
        shifted = np.roll(pilot.sequence, i)
        # exponent (p - i): negative on the first i rows (wrap-around phases)
        ramp = np.exp(1j * base * np.outer(p - i, j))
        omega[:, i * g_nu : (i + 1) * g_nu] = shifted[:, None] * ramp
    omega.setflags(write=False)
    return Dictionary(omega=omega, pilot=pilot, m_tau=m_tau, n_nu=n_nu, g_nu=g_nu, M=M, N=N)


def forward_model(
    dictionary: Dictionary,
    h: np.ndarray,
    sigma2: float,
    rng: np.random.Generator,
    snapshots: int = 1,
) -> np.ndarray:
    """Noisy pilot observations r_i = Omega h + eta_i, shape (N_p, snapshots).

    The channel vector is held fixed across snapshots; only the noise is
    redrawn.
    """
    h = np.asarray(h, dtype=np.complex128)
    if h.shape != (dictionary.D,):
        raise DimensionMismatch(f"h must have length {dictionary.D}, got {h.shape}")
    if snapshots < 1:
        raise ValueError("snapshot count must be at least 1")
    clean = dictionary.omega @ h
    out = np.tile(clean[:, None], (1, snapshots))
    if sigma2 > 0:
        out = out + complex_awgn(rng, out.shape, sigma2)
    return out


def sparse_truth(ch: ChannelRealization, dictionary: Dictionary) -> np.ndarray:
    """Place path gains on the dictionary grid (delay bin = l, nearest fine Doppler bin)."""
    h = np.zeros(dictionary.D, dtype=np.complex128)
    for path in ch.paths:
        if not (0 <= path.l < dictionary.m_tau):
            raise OutOfGrid(f"delay tap {path.l} outside the {dictionary.m_tau}-bin grid")
        j = dictionary.doppler_bin(path.c)
        h[dictionary.col_of(path.l, j)] += path.h
    return h


def true_support(ch: ChannelRealization, dictionary: Dictionary) -> np.ndarray:
    """Sorted dictionary columns occupied by the (grid-mapped) true paths."""
    cols = {dictionary.col_of(p.l, dictionary.doppler_bin(p.c)) for p in ch.paths}
    return np.array(sorted(cols), dtype=int)


def pilot_overhead(n_p: int, M: int, N: int) -> float:
    """Fraction of transmitted samples spent on pilots, N_p / (M*N + N_p)."""
    if n_p < 0 or M <= 0 or N <= 0:
        raise ValueError("n_p must be nonnegative and M, N positive")
    return n_p / (M * N + n_p)
