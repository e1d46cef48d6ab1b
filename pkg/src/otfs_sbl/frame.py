"""Delay-Doppler / time-frequency / time-domain transforms for one OTFS frame.

DD and TF grids are plain ``M x N`` complex arrays (delay or frequency
along rows, Doppler or time along columns).  Vectorization is
column-major throughout, matching ``vec(A B C) = (C^T kron A) vec(B)``.

Rectangular pulses make the transmit/receive pulse matrices identity;
they are kept as optional diagonal arguments so other shapes can be
substituted.
"""

from dataclasses import dataclass

import numpy as np

from .errors import CpTooLong, DimensionMismatch, NonPositiveNoise


@dataclass(frozen=True)
class FrameConfig:
    """OTFS grid geometry and physical constants.

    ``M`` subcarriers (delay bins), ``N`` symbols (Doppler bins),
    subcarrier spacing ``delta_f`` in Hz, symbol interval ``T = 1/delta_f``
    seconds, cyclic prefix of ``cp_len`` samples, carrier ``f_c`` in Hz.
    """

    M: int
    N: int
    delta_f: float = 15e3
    T: float | None = None
    cp_len: int = 16
    f_c: float = 4e9

    def __post_init__(self):
        if self.T is None:
            object.__setattr__(self, "T", 1.0 / self.delta_f)
        if self.M <= 0 or self.N <= 0 or self.cp_len <= 0:
            raise ValueError("M, N and cp_len must be positive")
        if self.cp_len >= self.M * self.N:
            raise ValueError("cp_len must be smaller than the frame length M*N")
        if abs(self.T * self.delta_f - 1.0) > 1e-12:
            raise ValueError(f"T*delta_f = {self.T * self.delta_f!r} violates T*delta_f = 1")

    @property
    def frame_len(self) -> int:
        return self.M * self.N

    @property
    def frame_duration(self) -> float:
        return self.N * self.T

    @property
    def bandwidth(self) -> float:
        return self.M * self.delta_f


def _as_grid(x, m: int, n: int) -> np.ndarray:
    x = np.asarray(x, dtype=np.complex128)
    if x.shape != (m, n):
        raise DimensionMismatch(f"expected a {m}x{n} grid, got {x.shape}")
    return x


def _diag_or_identity(g, m: int) -> np.ndarray:
    if g is None:
        return np.ones(m, dtype=np.complex128)
    g = np.asarray(g, dtype=np.complex128)
    if g.shape != (m,):
        raise DimensionMismatch(f"pulse diagonal must have length {m}, got {g.shape}")
    return g


def isfft(x_dd: np.ndarray) -> np.ndarray:
    """Inverse symplectic finite Fourier transform, X_TF = F_M X_DD F_N^H."""
    x_dd = np.asarray(x_dd, dtype=np.complex128)
    if x_dd.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D grid, got shape {x_dd.shape}")
    return np.fft.ifft(np.fft.fft(x_dd, axis=0, norm="ortho"), axis=1, norm="ortho")


def sfft(y_tf: np.ndarray) -> np.ndarray:
    """Symplectic finite Fourier transform, Y_DD = F_M^H Y_TF F_N."""
    y_tf = np.asarray(y_tf, dtype=np.complex128)
    if y_tf.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D grid, got shape {y_tf.shape}")
    return np.fft.fft(np.fft.ifft(y_tf, axis=0, norm="ortho"), axis=1, norm="ortho")


def modulate(x_dd: np.ndarray, cfg: FrameConfig, g_tx=None) -> np.ndarray:
    """Map a DD symbol grid to the length-MN transmit sample vector.

    Computes s = (F_N^H kron G_tx) vec(X_DD), realized as
    vec(G_tx X_DD F_N^H) with the sampled Heisenberg transform collapsed
    to G_tx X_DD F_N^H for rectangular pulses.
    """
    x_dd = _as_grid(x_dd, cfg.M, cfg.N)
    g = _diag_or_identity(g_tx, cfg.M)
    s_mat = g[:, None] * np.fft.ifft(x_dd, axis=1, norm="ortho")
    return s_mat.flatten(order="F")


def demodulate(r: np.ndarray, cfg: FrameConfig, g_rx=None) -> np.ndarray:
    """Wigner transform plus SFFT: time samples -> DD grid, Y_DD = G_rx R F_N."""
    r = np.asarray(r, dtype=np.complex128)
    if r.shape != (cfg.frame_len,):
        raise DimensionMismatch(f"expected {cfg.frame_len} samples, got {r.shape}")
    g = _diag_or_identity(g_rx, cfg.M)
    r_mat = r.reshape((cfg.M, cfg.N), order="F")
    return g[:, None] * np.fft.fft(r_mat, axis=1, norm="ortho")


def add_cp(s: np.ndarray, cp_len: int) -> np.ndarray:
    """Prepend the last ``cp_len`` samples as a cyclic prefix."""
    s = np.asarray(s)
    if cp_len >= s.shape[0]:
        raise CpTooLong(f"cp_len {cp_len} >= block length {s.shape[0]}")
    return np.concatenate([s[-cp_len:], s])


def remove_cp(r: np.ndarray, cp_len: int) -> np.ndarray:
    """Drop the first ``cp_len`` samples."""
    r = np.asarray(r)
    if cp_len >= r.shape[0]:
        raise CpTooLong(f"cp_len {cp_len} >= received length {r.shape[0]}")
    return r[cp_len:]


def dd_effective_channel(h_td: np.ndarray, cfg: FrameConfig, g_tx=None, g_rx=None) -> np.ndarray:
    """Effective DD channel H_DD = (F_N kron G_rx) H (F_N^H kron G_tx).

    The Kronecker factors are applied as DFTs along the symbol-block axes,
    which matches the explicit matrix product to working precision.
    """
    m, n = cfg.M, cfg.N
    h_td = np.asarray(h_td, dtype=np.complex128)
    if h_td.shape != (m * n, m * n):
        raise DimensionMismatch(f"expected {m * n}x{m * n} channel, got {h_td.shape}")
    gt = _diag_or_identity(g_tx, m)
    gr = _diag_or_identity(g_rx, m)
    # Index (m1, n1, m2, n2) with sample index g = m + M*n on both sides.
    h4 = h_td.reshape((m, n, m, n), order="F")
    h4 = gr[:, None, None, None] * h4 * gt[None, None, :, None]
    h4 = np.fft.fft(h4, axis=1, norm="ortho")
    h4 = np.fft.ifft(h4, axis=3, norm="ortho")
    return h4.reshape((m * n, m * n), order="F")


def noise_cov_dd(cfg: FrameConfig, sigma2: float, g_rx=None) -> np.ndarray:
    """Covariance of the DD-domain noise, sigma^2 [I_N kron (G_rx G_rx^H)]."""
    if sigma2 <= 0:
        raise NonPositiveNoise(f"sigma2 must be positive, got {sigma2}")
    gr = _diag_or_identity(g_rx, cfg.M)
    block = np.abs(gr) ** 2
    return sigma2 * np.diag(np.tile(block, cfg.N)).astype(np.complex128)
