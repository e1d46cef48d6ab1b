"""Sparse channel estimators: GMM-SBL and the classical baselines.

The central estimator runs expectation-maximization under a K-component
Gaussian-mixture prior with per-component diagonal variance vectors.
Responsibilities are computed in the log domain, hyperparameter updates
are responsibility-weighted means of posterior second moments, and the
final estimate is the responsibility-weighted combination of posterior
means (conditional-mean estimate).

Baselines: single-Gaussian SBL (the K=1 special case), OMP, FOCUSS,
LASSO, and the genie-aided Oracle-MMSE restricted to the true support.
"""

import dataclasses
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .errors import (
    DimensionMismatch,
    EmptySupport,
    NoSnapshots,
    NotPositiveDefinite,
    NumericalBreakdown,
)
from .linalg import cholesky_hpd
from .pilots import Dictionary
from scipy.linalg import cho_solve

# Initial variance-scale spread for K > 1 components.  The scales are
# log-spaced with geometric mean 1 so the mixture starts from distinct
# prior energies; a symmetric start would keep all components identical
# at every iteration.
DEFAULT_INIT_SPREAD = 2.5


@dataclass(frozen=True)
class GmmSblConfig:
    """Mixture order, iteration caps and floors for the EM estimator."""

    K: int
    sigma2: float
    T_max: int = 100
    gamma_floor: float = 1e-12
    conv_tol: float = 1e-6
    init_scales: tuple | None = None

    def __post_init__(self):
        if self.K < 1 or self.T_max < 1:
            raise ValueError("K and T_max must be at least 1")
        if self.gamma_floor <= 0 or self.sigma2 <= 0:
            raise ValueError("gamma_floor and sigma2 must be positive")

    def initial_scales(self) -> np.ndarray:
        if self.init_scales is not None:
            if len(self.init_scales) != self.K:
                raise ValueError("init_scales must provide one scale per component")
            return np.asarray(self.init_scales, dtype=float)
        if self.K == 1:
            return np.ones(1)
        a = np.log10(DEFAULT_INIT_SPREAD)
        return 10.0 ** np.linspace(-a, a, self.K)


@dataclass
class GmmSblState:
    """Hyperparameters plus the posterior quantities of the latest E-step."""

    gamma: np.ndarray  # (K, D) per-component prior variances
    rho: np.ndarray  # (K,) mixture weights
    mu: np.ndarray | None = None  # (K, D, L) posterior means
    sigma_diag: np.ndarray | None = None  # (K, D) posterior variances
    resp: np.ndarray | None = None  # (L, K) responsibilities
    log_marginal: np.ndarray | None = None  # (L, K) log p(r_i | k)
    evidence: list = field(default_factory=list)


@dataclass(frozen=True)
class EstimateResult:
    """Channel estimate plus convergence bookkeeping."""

    h_hat: np.ndarray  # (D,) fused estimate (snapshot average)
    iterations: int
    converged: bool
    method: str
    h_snapshots: np.ndarray | None = None  # (D, L) per-snapshot estimates


def _omega_of(dictionary) -> np.ndarray:
    if isinstance(dictionary, Dictionary):
        return dictionary.omega
    return np.asarray(dictionary, dtype=np.complex128)


def _as_snapshot_matrix(snapshots, n_p: int) -> np.ndarray:
    """Stack snapshots into an (N_p, L) array."""
    if isinstance(snapshots, np.ndarray) and snapshots.ndim == 2:
        r = np.asarray(snapshots, dtype=np.complex128)
    else:
        seq = list(snapshots) if not isinstance(snapshots, np.ndarray) else [snapshots]
        if len(seq) == 0:
            raise NoSnapshots("at least one pilot snapshot is required")
        r = np.stack([np.asarray(s, dtype=np.complex128) for s in seq], axis=1)
    if r.shape[0] != n_p:
        raise DimensionMismatch(f"snapshots have length {r.shape[0]}, dictionary rows {n_p}")
    if r.shape[1] == 0:
        raise NoSnapshots("at least one pilot snapshot is required")
    return r


def init_state(cfg: GmmSblConfig, d: int) -> GmmSblState:
    scales = cfg.initial_scales()
    gamma = np.tile(scales[:, None], (1, d)).astype(float)
    rho = np.full(cfg.K, 1.0 / cfg.K)
    return GmmSblState(gamma=gamma, rho=rho)


def e_step(state: GmmSblState, snapshots, dictionary, cfg: GmmSblConfig) -> GmmSblState:
    """Posterior means/variances, responsibilities and evidence for the current hyperparameters."""
    omega = _omega_of(dictionary)
    n_p, d = omega.shape
    r = _as_snapshot_matrix(snapshots, n_p)
    n_snap = r.shape[1]
    k_comp = cfg.K

    mu = np.empty((k_comp, d, n_snap), dtype=np.complex128)
    sigma_diag = np.empty((k_comp, d))
    log_marginal = np.empty((n_snap, k_comp))
    omega_h = omega.conj().T

    for k in range(k_comp):
        gam = state.gamma[k]
        a = (omega * gam) @ omega_h
        a[np.diag_indices_from(a)] += cfg.sigma2
        try:
            factor = cholesky_hpd(a)
        except NotPositiveDefinite as exc:
            raise NumericalBreakdown(f"marginal covariance of component {k} lost definiteness: {exc}") from exc
        u = cho_solve(factor, r)  # A_k^{-1} r_i for every snapshot
        v = cho_solve(factor, omega)  # A_k^{-1} Omega
        mu[k] = gam[:, None] * (omega_h @ u)
        quad_cols = np.einsum("pr,pr->r", omega.conj(), v).real
        sigma_diag[k] = np.maximum(gam - gam**2 * quad_cols, 0.0)
        log_det = 2.0 * np.sum(np.log(np.diag(factor[0]).real))
        quad = np.einsum("pi,pi->i", r.conj(), u).real
        log_marginal[:, k] = -(quad + log_det + n_p * np.log(np.pi))

    with np.errstate(divide="ignore"):
        log_weighted = log_marginal + np.log(state.rho)[None, :]
    top = np.max(log_weighted, axis=1, keepdims=True)
    scaled = np.exp(log_weighted - top)
    norm = scaled.sum(axis=1, keepdims=True)
    resp = scaled / norm
    evidence = float(np.sum(top[:, 0] + np.log(norm[:, 0])))

    return GmmSblState(
        gamma=state.gamma,
        rho=state.rho,
        mu=mu,
        sigma_diag=sigma_diag,
        resp=resp,
        log_marginal=log_marginal,
        evidence=state.evidence + [evidence],
    )


def m_step(state: GmmSblState, cfg: GmmSblConfig) -> GmmSblState:
    """Responsibility-weighted hyperparameter updates (variances and weights)."""
    if state.resp is None or state.mu is None:
        raise ValueError("m_step requires a preceding e_step")
    n_snap = state.resp.shape[0]
    n_k = state.resp.sum(axis=0)  # (K,)

    second = np.abs(state.mu) ** 2 + state.sigma_diag[:, :, None]  # (K, D, L)
    weighted = np.einsum("ik,kri->kr", state.resp, second)
    gamma = state.gamma.copy()
    for k in range(state.gamma.shape[0]):
        if n_k[k] > 1e-12:
            gamma[k] = weighted[k] / n_k[k]
        # else: a dead component keeps its previous variances
    gamma = np.maximum(gamma, cfg.gamma_floor)

    rho = n_k / n_snap
    rho = rho / rho.sum()

    return dataclasses.replace(state, gamma=gamma, rho=rho)


def gmm_sbl_fit(snapshots, dictionary, cfg: GmmSblConfig):
    """Run the EM loop until the evidence stalls or ``T_max`` is reached.

    Returns ``(EstimateResult, GmmSblState)``; the state carries the
    final hyperparameters, posteriors and the per-iteration evidence
    trace.  The estimate is the snapshot-averaged conditional mean.
    """
    omega = _omega_of(dictionary)
    r = _as_snapshot_matrix(snapshots, omega.shape[0])
    state = init_state(cfg, omega.shape[1])

    converged = False
    iterations = 0
    for t in range(cfg.T_max):
        state = e_step(state, r, omega, cfg)
        iterations = t + 1
        if t > 0:
            prev, cur = state.evidence[-2], state.evidence[-1]
            if abs(cur - prev) <= cfg.conv_tol * max(1.0, abs(prev)):
                converged = True
                break
        if t < cfg.T_max - 1:
            state = m_step(state, cfg)

    h_snapshots = np.einsum("ik,kri->ri", state.resp, state.mu)
    result = EstimateResult(
        h_hat=h_snapshots.mean(axis=1),
        iterations=iterations,
        converged=converged,
        method="gmm_sbl",
        h_snapshots=h_snapshots,
    )
    return result, state


def sbl_fit(snapshots, dictionary, cfg: GmmSblConfig) -> EstimateResult:
    """Single-Gaussian SBL: the K=1 special case of the mixture estimator."""
    single = dataclasses.replace(cfg, K=1, init_scales=None)
    result, _ = gmm_sbl_fit(snapshots, dictionary, single)
    return dataclasses.replace(result, method="sbl")


def omp(r_p: np.ndarray, dictionary, sigma2: float) -> EstimateResult:
    """Orthogonal matching pursuit with a noise-dependent residual stopping rule.

    Atom selection uses norm-normalized correlations; the support is
    refit by least squares each round.  Iteration stops once the
    relative drop in residual energy falls below 1e-2, the residual
    energy reaches the noise floor ``N_p * sigma2``, or the support size
    hits ``N_p``.
    """
    omega = _omega_of(dictionary)
    n_p, d = omega.shape
    r = np.asarray(r_p, dtype=np.complex128).reshape(-1)
    if r.shape[0] != n_p:
        raise DimensionMismatch(f"snapshot length {r.shape[0]} != dictionary rows {n_p}")

    h = np.zeros(d, dtype=np.complex128)
    norms = np.linalg.norm(omega, axis=0)
    norms[norms == 0] = 1.0
    r_energy = float(np.vdot(r, r).real)
    if r_energy == 0.0:
        return EstimateResult(h_hat=h, iterations=0, converged=True, method="omp")

    support: list = []
    residual = r.copy()
    res_energy = r_energy
    noise_floor = n_p * sigma2
    rel_tol = 1e-2
    coeffs = np.zeros(0, dtype=np.complex128)
    while len(support) < min(n_p, d):
        corr = np.abs(omega.conj().T @ residual) / norms
        if support:
            corr[support] = -1.0
        support.append(int(np.argmax(corr)))
        sub = omega[:, support]
        coeffs, *_ = np.linalg.lstsq(sub, r, rcond=None)
        residual = r - sub @ coeffs
        new_energy = float(np.vdot(residual, residual).real)
        if new_energy <= max(noise_floor, 1e-24 * r_energy):
            break
        if (res_energy - new_energy) <= rel_tol * res_energy:
            break
        res_energy = new_energy
    h[support] = coeffs
    return EstimateResult(h_hat=h, iterations=len(support), converged=True, method="omp")


def focuss(
    r_p: np.ndarray,
    dictionary,
    sigma2: float,
    p: float = 0.8,
    tol: float = 1e-6,
    max_iter: int = 500,
) -> EstimateResult:
    """FOCUSS: iteratively reweighted minimum-norm recovery.

    Weights are |h_r|^(1 - p/2); the reweighted system is regularized by
    ``sigma2`` on the measurement side.  Coefficients whose weight falls
    ten orders of magnitude below the largest are pruned from the
    active set.
    """
    omega = _omega_of(dictionary)
    n_p, d = omega.shape
    r = np.asarray(r_p, dtype=np.complex128).reshape(-1)
    if r.shape[0] != n_p:
        raise DimensionMismatch(f"snapshot length {r.shape[0]} != dictionary rows {n_p}")
    if not np.any(r):
        return EstimateResult(h_hat=np.zeros(d, dtype=np.complex128), iterations=0, converged=True, method="focuss")

    h = omega.conj().T @ r / n_p  # matched-filter start (unit-modulus columns)
    converged = False
    iterations = 0
    for it in range(max_iter):
        iterations = it + 1
        w2 = np.abs(h) ** (2.0 - p)
        active = np.flatnonzero(w2 > 1e-10 * w2.max())
        sub = omega[:, active]
        w2a = w2[active]
        new_h = np.zeros(d, dtype=np.complex128)
        solved = False
        if sigma2 > 0:
            g = (sub * w2a) @ sub.conj().T
            g[np.diag_indices_from(g)] += sigma2
            try:
                u = cho_solve(cholesky_hpd(g), r)
                new_h[active] = w2a * (sub.conj().T @ u)
                solved = True
            except NotPositiveDefinite:
                solved = False
        if not solved:
            # noiseless/degenerate case: minimum-norm solution of the weighted system
            w = np.sqrt(w2a)
            z, *_ = np.linalg.lstsq(sub * w, r, rcond=None)
            new_h[active] = w * z
        step = np.linalg.norm(new_h - h) / max(np.linalg.norm(h), 1e-300)
        h = new_h
        if step < tol:
            converged = True
            break
    return EstimateResult(h_hat=h, iterations=iterations, converged=converged, method="focuss")


def lasso_objective(omega, r, h, lam: float = 1e-3) -> float:
    """||r - Omega h||^2 + lam * ||h||_1 (the quantity lasso minimizes)."""
    omega = _omega_of(omega)
    res = r - omega @ h
    return float(np.vdot(res, res).real + lam * np.abs(h).sum())


@njit(cache=True)
def _lasso_cd_sweeps(atoms, col_energy, r, lam, tol, max_iter):
    """Cyclic complex coordinate descent; ``atoms`` is Omega^T (one row per column)."""
    d, n_p = atoms.shape
    h = np.zeros(d, dtype=np.complex128)
    residual = r.copy()
    iterations = 0
    converged = False
    for _ in range(max_iter):
        iterations += 1
        max_move = 0.0
        h_max = 0.0
        for idx in range(d):
            n_r = col_energy[idx]
            if n_r == 0.0:
                continue
            old = h[idx]
            rho = n_r * old
            for p in range(n_p):
                rho += np.conj(atoms[idx, p]) * residual[p]
            mag = abs(rho)
            shrunk = mag - lam / 2.0
            if shrunk > 0.0:
                new = (shrunk / n_r) * (rho / mag)
            else:
                new = 0.0 + 0.0j
            if new != old:
                delta = old - new
                for p in range(n_p):
                    residual[p] += atoms[idx, p] * delta
                h[idx] = new
                move = abs(delta)
                if move > max_move:
                    max_move = move
            a = abs(new)
            if a > h_max:
                h_max = a
        if h_max < 1.0:
            h_max = 1.0
        if max_move <= tol * h_max:
            converged = True
            break
    return h, iterations, converged


def lasso(
    r_p: np.ndarray,
    dictionary,
    lam: float = 1e-3,
    tol: float = 1e-8,
    max_iter: int = 5000,
) -> EstimateResult:
    """Complex LASSO, min ||r - Omega h||^2 + lam * ||h||_1.

    Cyclic proximal coordinate updates on complex scalars: each
    coordinate is minimized exactly by soft-thresholding its residual
    correlation (phase preserved), so the objective never increases.
    One iteration is a full sweep over the coordinates; stops when the
    largest coordinate move in a sweep drops below ``tol`` (relative to
    the largest coefficient) or at the sweep cap.
    """
    omega = _omega_of(dictionary)
    n_p, d = omega.shape
    r = np.asarray(r_p, dtype=np.complex128).reshape(-1)
    if r.shape[0] != n_p:
        raise DimensionMismatch(f"snapshot length {r.shape[0]} != dictionary rows {n_p}")

    atoms = np.ascontiguousarray(omega.T)
    col_energy = np.sum(np.abs(omega) ** 2, axis=0)
    h, iterations, converged = _lasso_cd_sweeps(
        atoms, col_energy, r.astype(np.complex128), float(lam), float(tol), int(max_iter)
    )
    return EstimateResult(h_hat=h, iterations=iterations, converged=bool(converged), method="lasso")


def oracle_mmse(r_p: np.ndarray, dictionary, support, sigma2: float) -> EstimateResult:
    """Genie-aided MMSE restricted to the true support (unit prior variance)."""
    omega = _omega_of(dictionary)
    support = np.asarray(support, dtype=int)
    if support.size == 0:
        raise EmptySupport("oracle estimator needs at least one support index")
    if sigma2 <= 0:
        raise ValueError("sigma2 must be positive")
    r = np.asarray(r_p, dtype=np.complex128).reshape(-1)
    sub = omega[:, support]
    g = sub.conj().T @ sub / sigma2
    g[np.diag_indices_from(g)] += 1.0
    rhs = sub.conj().T @ r / sigma2
    coeffs = cho_solve(cholesky_hpd(g), rhs)
    h = np.zeros(omega.shape[1], dtype=np.complex128)
    h[support] = coeffs
    return EstimateResult(h_hat=h, iterations=1, converged=True, method="oracle_mmse")


def _snapshot_average(fit_one, snapshots, n_p: int, method: str) -> EstimateResult:
    """Run a single-snapshot estimator per snapshot and average the estimates."""
    r = _as_snapshot_matrix(snapshots, n_p)
    results = [fit_one(r[:, i]) for i in range(r.shape[1])]
    stacked = np.stack([res.h_hat for res in results], axis=1)
    return EstimateResult(
        h_hat=stacked.mean(axis=1),
        iterations=max(res.iterations for res in results),
        converged=all(res.converged for res in results),
        method=method,
        h_snapshots=stacked,
    )


ESTIMATOR_NAMES = ("gmm_sbl", "sbl", "omp", "focuss", "lasso", "oracle_mmse")


def run_estimator(
    name: str,
    snapshots,
    dictionary,
    sigma2: float,
    k_model: int = 2,
    support=None,
    em_config: GmmSblConfig | None = None,
) -> EstimateResult:
    """Dispatch an estimator by name on a common snapshot matrix.

    Multi-snapshot handling: the EM estimators consume all snapshots
    jointly; OMP/FOCUSS/LASSO and the oracle run per snapshot and
    average their estimates.
    """
    omega = _omega_of(dictionary)
    n_p = omega.shape[0]
    if name == "gmm_sbl":
        cfg = em_config or GmmSblConfig(K=k_model, sigma2=sigma2)
        result, _ = gmm_sbl_fit(snapshots, dictionary, cfg)
        return result
    if name == "sbl":
        cfg = em_config or GmmSblConfig(K=1, sigma2=sigma2)
        return sbl_fit(snapshots, dictionary, cfg)
    if name == "omp":
        return _snapshot_average(lambda r: omp(r, dictionary, sigma2), snapshots, n_p, "omp")
    if name == "focuss":
        return _snapshot_average(lambda r: focuss(r, dictionary, sigma2), snapshots, n_p, "focuss")
    if name == "lasso":
        return _snapshot_average(lambda r: lasso(r, dictionary), snapshots, n_p, "lasso")
    if name == "oracle_mmse":
        if support is None:
            raise EmptySupport("oracle_mmse requires the true support")
        return _snapshot_average(
            lambda r: oracle_mmse(r, dictionary, support, sigma2), snapshots, n_p, "oracle_mmse"
        )
    raise KeyError(f"unknown estimator {name!r}; expected one of {ESTIMATOR_NAMES}")
