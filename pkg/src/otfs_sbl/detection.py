"""QPSK mapping, LMMSE detection and the NMSE/SER metrics.

The Gray table maps bit pairs (b0, b1) to ((1-2*b0) + 1j*(1-2*b1))/sqrt(2),
so 00 -> (1+j)/sqrt(2).  NMSE is evaluated on effective DD channel
matrices; SER on minimum-distance QPSK decisions.
"""

import numpy as np
import scipy.sparse as sp

from .channel import ChannelRealization, PathSpec, shift_diagonals
from .errors import (
    DimensionMismatch,
    LengthMismatch,
    OddBitCount,
    SingularCovariance,
    ZeroReference,
)
from .frame import FrameConfig, dd_effective_channel
from .linalg import cholesky_hpd
from .pilots import Dictionary
from scipy.linalg import cho_solve

_SCALE = 1.0 / np.sqrt(2.0)


def qpsk_mod(bits) -> np.ndarray:
    """Gray-map a flat bit array (even length) to unit-power QPSK symbols."""
    bits = np.asarray(bits, dtype=int).reshape(-1)
    if bits.size % 2 != 0:
        raise OddBitCount(f"bit count {bits.size} is odd")
    pairs = bits.reshape(-1, 2)
    return _SCALE * ((1 - 2 * pairs[:, 0]) + 1j * (1 - 2 * pairs[:, 1]))


def qpsk_demod(symbols) -> np.ndarray:
    """Minimum-distance QPSK decisions back to bits."""
    symbols = np.asarray(symbols, dtype=np.complex128).reshape(-1)
    bits = np.empty((symbols.size, 2), dtype=int)
    bits[:, 0] = (symbols.real < 0).astype(int)
    bits[:, 1] = (symbols.imag < 0).astype(int)
    return bits.reshape(-1)


def qpsk_decide(symbols) -> np.ndarray:
    """Project noisy symbols onto the nearest QPSK constellation point."""
    symbols = np.asarray(symbols, dtype=np.complex128)
    re = np.where(symbols.real >= 0, 1.0, -1.0)
    im = np.where(symbols.imag >= 0, 1.0, -1.0)
    return _SCALE * (re + 1j * im)


def lmmse_detect(y_dd: np.ndarray, h_dd: np.ndarray, r_v: np.ndarray) -> np.ndarray:
    """Linear MMSE symbol estimate (H^H R^-1 H + I)^-1 H^H R^-1 y."""
    y = np.asarray(y_dd, dtype=np.complex128).reshape(-1)
    h = np.asarray(h_dd, dtype=np.complex128)
    rv = np.asarray(r_v, dtype=np.complex128)
    n = y.shape[0]
    if h.shape != (n, n) or rv.shape != (n, n):
        raise DimensionMismatch(f"inconsistent detector shapes: y {y.shape}, H {h.shape}, R_v {rv.shape}")
    try:
        rv_factor = cholesky_hpd(rv)
    except Exception as exc:
        raise SingularCovariance(str(exc)) from exc
    rinv_h = cho_solve(rv_factor, h)
    g = h.conj().T @ rinv_h
    g[np.diag_indices_from(g)] += 1.0
    rhs = rinv_h.conj().T @ y
    return cho_solve(cholesky_hpd(g), rhs)


def lmmse_detect_td(diags: dict, r_td: np.ndarray, sigma2: float, M: int, N: int) -> np.ndarray:
    """LMMSE detection done in the time domain for rectangular pulses.

    ``diags`` is the {delay: diagonal} representation of the (estimated)
    TD channel.  Because the DD conjugation is unitary and the DD noise
    covariance is sigma2*I, the detector reduces to
    x = (F_N kron I_M) (H^H H + sigma2 I)^-1 H^H r, which avoids ever
    forming the MN x MN effective DD matrix.  Matches the dense
    ``lmmse_detect`` applied after ``demodulate``.
    """
    size = M * N
    r_td = np.asarray(r_td, dtype=np.complex128).reshape(-1)
    if r_td.shape[0] != size:
        raise DimensionMismatch(f"expected {size} samples, got {r_td.shape[0]}")
    if sigma2 <= 0:
        raise SingularCovariance("sigma2 must be positive")
    if diags:
        p = np.arange(size)
        rows = np.concatenate([p for _ in diags])
        cols = np.concatenate([(p - l) % size for l in diags])
        data = np.concatenate([np.asarray(d, dtype=np.complex128) for d in diags.values()])
        h = sp.csr_matrix((data, (rows, cols)), shape=(size, size))
        g = np.asarray((h.conj().T @ h).todense())
        z = h.conj().T.dot(r_td)
    else:
        g = np.zeros((size, size), dtype=np.complex128)
        z = np.zeros(size, dtype=np.complex128)
    g[np.diag_indices_from(g)] += sigma2
    w = cho_solve(cholesky_hpd(g), z)
    x = np.fft.fft(w.reshape((M, N), order="F"), axis=1, norm="ortho")
    return x.flatten(order="F")


def paths_from_grid(h_hat: np.ndarray, dictionary: Dictionary) -> ChannelRealization:
    """Expand a dictionary-domain vector into DD paths (l = i, c = j * n_nu / g_nu)."""
    h_hat = np.asarray(h_hat, dtype=np.complex128).reshape(-1)
    if h_hat.shape[0] != dictionary.D:
        raise DimensionMismatch(f"expected length {dictionary.D}, got {h_hat.shape[0]}")
    paths = []
    for col in np.flatnonzero(h_hat):
        i, j = dictionary.bin_of(int(col))
        paths.append(PathSpec(l=i, c=dictionary.doppler_index(j), h=complex(h_hat[col])))
    return ChannelRealization(paths=tuple(paths), origin="grid-estimate")


def reconstruct_hdd(h_hat: np.ndarray, dictionary: Dictionary, cfg: FrameConfig) -> np.ndarray:
    """Estimated effective DD channel from a dictionary-domain estimate.

    The grid estimate is expanded to paths, materialized as the MN x MN
    time-domain matrix, and conjugated into the DD domain.  Exact when
    the true channel sits on the grid and the estimate is exact.
    """
    ch = paths_from_grid(h_hat, dictionary)
    size = cfg.frame_len
    h_td = np.zeros((size, size), dtype=np.complex128)
    p = np.arange(size)
    for l, diag in shift_diagonals(ch, size, 2.0 * np.pi / size).items():
        h_td[p, (p - l) % size] += diag
    return dd_effective_channel(h_td, cfg)


def nmse(h_hat_dd: np.ndarray, h_true_dd: np.ndarray) -> float:
    """Squared-Frobenius error of the estimate, normalized by the reference."""
    a = np.asarray(h_hat_dd)
    b = np.asarray(h_true_dd)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes {a.shape} and {b.shape} differ")
    ref = np.linalg.norm(b) ** 2
    if ref == 0:
        raise ZeroReference("reference channel has zero norm")
    return float(np.linalg.norm(a - b) ** 2 / ref)


def ser(x_hat, x_true) -> float:
    """Fraction of minimum-distance QPSK decisions differing from the truth."""
    x_hat = np.asarray(x_hat, dtype=np.complex128).reshape(-1)
    x_true = np.asarray(x_true, dtype=np.complex128).reshape(-1)
    if x_hat.shape != x_true.shape:
        raise LengthMismatch(f"lengths {x_hat.shape[0]} and {x_true.shape[0]} differ")
    return float(np.mean(qpsk_decide(x_hat) != qpsk_decide(x_true)))
