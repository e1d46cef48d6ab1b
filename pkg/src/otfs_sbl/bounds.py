"""Performance references: BCRLB (closed form and Monte Carlo) and the
sparsity-envelope check of the mixture prior.

The Bayesian information splits into a data term (L/sigma2) Omega^H Omega
and a prior term.  For a single zero-mean Gaussian the prior term is
Gamma^-1 in closed form; for a general mixture it is estimated by Monte
Carlo over prior draws using the local-weight decomposition of the
log-density Hessian.
"""

from dataclasses import dataclass

import numpy as np

from .channel import GmmSpec
from .errors import NotPositiveDefinite, SingularInformation
from .linalg import cholesky_hpd
from scipy.linalg import cho_solve


@dataclass(frozen=True)
class DiagonalGmm:
    """K-component complex Gaussian mixture on C^D with diagonal covariances."""

    weights: np.ndarray  # (K,)
    means: np.ndarray  # (K, D) complex
    variances: np.ndarray  # (K, D) positive

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if abs(w.sum() - 1.0) > 1e-12 or np.any(w < 0):
            raise ValueError("weights must form a probability simplex")
        if self.means.shape != self.variances.shape or self.means.ndim != 2:
            raise ValueError("means and variances must both be (K, D)")
        if np.any(np.asarray(self.variances) <= 0):
            raise ValueError("variances must be strictly positive")

    @property
    def K(self) -> int:
        return self.means.shape[0]

    @property
    def D(self) -> int:
        return self.means.shape[1]

    @staticmethod
    def expand(gmm: GmmSpec, d: int) -> "DiagonalGmm":
        """Replicate a scalar mixture across ``d`` i.i.d. dimensions."""
        k = gmm.K
        return DiagonalGmm(
            weights=np.asarray(gmm.weights, dtype=float),
            means=np.tile(np.asarray(gmm.means, dtype=np.complex128)[:, None], (1, d)),
            variances=np.tile(np.asarray(gmm.variances, dtype=float)[:, None], (1, d)),
        )

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        comps = rng.choice(self.K, size=count, p=np.asarray(self.weights, dtype=float))
        sd = np.sqrt(self.variances[comps] / 2.0)
        noise = rng.standard_normal((count, self.D)) + 1j * rng.standard_normal((count, self.D))
        return self.means[comps] + sd * noise

    def log_component_densities(self, h: np.ndarray) -> np.ndarray:
        """(n, K) log CN(h; mu_k, Gamma_k) for rows of ``h``."""
        h = np.atleast_2d(h)
        out = np.empty((h.shape[0], self.K))
        for k in range(self.K):
            delta = h - self.means[k][None, :]
            quad = np.sum(np.abs(delta) ** 2 / self.variances[k][None, :], axis=1)
            out[:, k] = -(quad + np.sum(np.log(np.pi * self.variances[k])))
        return out

    def log_density(self, h: np.ndarray) -> np.ndarray:
        logs = self.log_component_densities(h) + np.log(np.asarray(self.weights, dtype=float))[None, :]
        top = logs.max(axis=1)
        return top + np.log(np.exp(logs - top[:, None]).sum(axis=1))

    def local_weights(self, h: np.ndarray) -> np.ndarray:
        """(n, K) posterior component weights w_k(h), computed in the log domain."""
        logs = self.log_component_densities(h) + np.log(np.asarray(self.weights, dtype=float))[None, :]
        top = logs.max(axis=1, keepdims=True)
        scaled = np.exp(logs - top)
        return scaled / scaled.sum(axis=1, keepdims=True)


@dataclass(frozen=True)
class FimEstimate:
    """Bayesian Fisher information pieces and the resulting MSE bound."""

    j_data: np.ndarray
    j_prior: np.ndarray
    bound: float
    mc_samples: int = 0


def _bound_from_fim(j_data: np.ndarray, j_prior: np.ndarray, mc_samples: int) -> FimEstimate:
    j_total = j_data + j_prior
    j_total = 0.5 * (j_total + j_total.conj().T)
    try:
        factor = cholesky_hpd(j_total)
    except NotPositiveDefinite as exc:
        raise SingularInformation(str(exc)) from exc
    inv = cho_solve(factor, np.eye(j_total.shape[0], dtype=np.complex128))
    return FimEstimate(j_data=j_data, j_prior=j_prior, bound=float(np.trace(inv).real), mc_samples=mc_samples)


def bcrlb_closed_form(dictionary, sigma2: float, snapshots: int, gamma: np.ndarray) -> FimEstimate:
    """tr([(L/sigma2) Omega^H Omega + Gamma^-1]^-1) for a zero-mean Gaussian prior."""
    omega = dictionary.omega if hasattr(dictionary, "omega") else np.asarray(dictionary, dtype=np.complex128)
    gamma = np.asarray(gamma, dtype=float)
    if np.any(gamma <= 0):
        raise ValueError("gamma must be strictly positive")
    j_data = (snapshots / sigma2) * (omega.conj().T @ omega)
    j_prior = np.diag(1.0 / gamma).astype(np.complex128)
    return _bound_from_fim(j_data, j_prior, mc_samples=0)


def prior_fim_mc(
    gmm: DiagonalGmm,
    samples: int,
    rng: np.random.Generator,
    shards: int = 16,
) -> np.ndarray:
    """Monte Carlo prior Fisher information of a mixture density.

    Draws h from the prior and averages the three local-weight terms of
    the log-density Hessian: sum_k w_k Gamma_k^-1, minus the weighted
    outer-product quadratic term, plus E[b b^H] with
    b(h) = sum_k w_k (-Gamma_k^-1 (h - mu_k)).  Accumulation is sharded
    with per-shard substreams and reduced in fixed order, so the result
    is deterministic for a given (generator state, shard count).
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    d = gmm.D
    shards = max(1, min(shards, samples))
    sizes = [samples // shards + (1 if s < samples % shards else 0) for s in range(shards)]
    streams = rng.spawn(shards)

    acc = np.zeros((d, d), dtype=np.complex128)
    inv_var = 1.0 / gmm.variances  # (K, D)
    for size, stream in zip(sizes, streams):
        if size == 0:
            continue
        h = gmm.sample(size, stream)  # (n, D)
        w = gmm.local_weights(h)  # (n, K)
        term1 = np.diag(np.einsum("nk,kd->d", w, inv_var) / samples).astype(np.complex128)
        term2 = np.zeros((d, d), dtype=np.complex128)
        b = np.zeros((size, d), dtype=np.complex128)
        for k in range(gmm.K):
            v = (h - gmm.means[k][None, :]) * inv_var[k][None, :]  # Gamma_k^-1 (h - mu_k)
            vw = v * np.sqrt(w[:, k])[:, None]
            term2 += (vw.conj().T @ vw) / samples
            b -= w[:, k][:, None] * v
        term3 = (b.conj().T @ b) / samples
        acc += term1 - term2 + term3
    return 0.5 * (acc + acc.conj().T)


def bcrlb_gmm_mc(
    dictionary,
    sigma2: float,
    snapshots: int,
    gmm: DiagonalGmm,
    samples: int,
    rng: np.random.Generator,
) -> FimEstimate:
    """BCRLB with the prior information estimated by Monte Carlo."""
    omega = dictionary.omega if hasattr(dictionary, "omega") else np.asarray(dictionary, dtype=np.complex128)
    j_data = (snapshots / sigma2) * (omega.conj().T @ omega)
    j_prior = prior_fim_mc(gmm, samples, rng)
    return _bound_from_fim(j_data, j_prior, mc_samples=samples)


def theorem1_bound_check(gmm: DiagonalGmm, trial_points: int, rng: np.random.Generator) -> dict:
    """Verify the sparsity envelope p(h) <= C * prod_r |h_r|^-2 on sampled points.

    Zero-mean components only.  The per-component constant comes from the
    scalar envelope x * exp(-x) <= exp(-1): each dimension contributes
    1/(pi*e), so C_k = (pi*e)^-D and C = sum_k rho_k C_k.
    """
    if np.any(np.abs(gmm.means) != 0):
        raise ValueError("the sparsity envelope applies to zero-mean components")
    d = gmm.D
    log_c = -d * (np.log(np.pi) + 1.0)  # C = (pi*e)^-D, identical for every component
    h = gmm.sample(trial_points, rng)
    log_p = gmm.log_density(h)
    with np.errstate(divide="ignore"):
        log_envelope = log_c - 2.0 * np.sum(np.log(np.abs(h)), axis=1)
    # tiny absolute slack covers the exact-equality boundary case
    violations = int(np.sum(log_p > log_envelope + 1e-9))
    return {
        "points": trial_points,
        "violations": violations,
        "log_constant": float(log_c),
        "max_log_ratio": float(np.max(log_p - log_envelope)),
    }
