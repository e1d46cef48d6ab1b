"""Monte Carlo harness: scenario configs, seeded trials, sweeps, CSV output.

Every trial owns an RNG substream derived from (base_seed, trial_index),
so results are independent of worker count and scheduling; reduction
happens in trial-index order to keep floating-point sums reproducible.
All estimators inside a trial consume the identical true channel and
pilot snapshots.

The per-trial NMSE is evaluated between time-domain channel matrices in
their shifted-diagonal representation; this equals the effective
DD-domain NMSE exactly because the DD conjugation is unitary for
rectangular pulses (covered by tests against the dense path).
"""

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace
from functools import lru_cache
from itertools import product

import numpy as np

from .channel import (
    ChannelRealization,
    GmmSpec,
    PathSpec,
    complex_awgn,
    default_mixture,
    gmm_case,
    load_dd_profile,
    profile_to_taps,
    sample_channel,
    sample_gains,
    shift_diagonals,
)
from .detection import lmmse_detect_td, qpsk_mod, ser as ser_metric
from .errors import ConfigError
from .estimators import ESTIMATOR_NAMES, run_estimator
from .frame import FrameConfig, modulate
from .pilots import build_dictionary, generate_pilot, true_support

__all__ = [
    "RunConfig",
    "ResultRow",
    "run_trial",
    "sweep",
    "emit_csv",
    "parse_results_csv",
    "parse_config_text",
    "load_config",
]

CSV_HEADER = "scenario,estimator,snr_db,nmse,nmse_db,ser,trials,elapsed_ms,seed"

_CHANNEL_MODES = ("gmm", "profile", "case_a", "case_b", "case_c", "case_d")


@dataclass(frozen=True)
class RunConfig:
    """Scenario description; list-valued fields are sweep axes.

    Defaults reproduce the reference parameterisation: 32x32 grid at
    15 kHz spacing and 4 GHz carrier, 16-tap delay and 10-tap Doppler
    spread on a 20-bin fine grid, 16-sample CP, 80 pilots, 5 reflectors,
    10 snapshots, QPSK, rectangular pulses.
    """

    M: int = 32
    N: int = 32
    delta_f: float = 15e3
    f_c: float = 4e9
    cp_len: int = 16
    m_tau: int = 16
    n_nu: int = 10
    g_nu: int = 20
    n_p: tuple = (80,)
    snapshots: tuple = (10,)
    l_p: int = 5
    snr_db: tuple = (0.0,)
    estimators: tuple = ("gmm_sbl",)
    channel: str = "gmm"
    k_true: int = 1
    k_model: tuple = (2,)
    trials: int = 500
    base_seed: int = 1234
    frac_doppler: bool = False
    out: str = "results.csv"
    pilot_seed: int = 7
    workers: int = 1
    timing: bool = False
    profile_path: str | None = None

    def __post_init__(self):
        for name in ("n_p", "snapshots", "snr_db", "k_model", "estimators"):
            value = getattr(self, name)
            if not isinstance(value, tuple):
                value = tuple(value) if isinstance(value, (list, np.ndarray)) else (value,)
                object.__setattr__(self, name, value)
        if self.channel not in _CHANNEL_MODES:
            raise ConfigError(f"channel mode {self.channel!r} not one of {_CHANNEL_MODES}")
        for est in self.estimators:
            if est not in ESTIMATOR_NAMES:
                raise ConfigError(f"unknown estimator {est!r}; expected one of {ESTIMATOR_NAMES}")
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        if self.l_p > self.m_tau:
            raise ConfigError(f"l_p={self.l_p} exceeds the delay spread m_tau={self.m_tau}")

    def frame(self) -> FrameConfig:
        return FrameConfig(M=self.M, N=self.N, delta_f=self.delta_f, cp_len=self.cp_len, f_c=self.f_c)

    def channel_tag(self) -> str:
        if self.channel == "gmm":
            tag = f"gmm{self.k_true}"
        elif self.channel == "profile":
            tag = "profile"
        else:
            tag = self.channel
        return tag + ("-frac" if self.frac_doppler else "")

    def points(self):
        """Scalar point-configs in deterministic sweep order."""
        for n_p, snaps, k_model, snr in product(self.n_p, self.snapshots, self.k_model, self.snr_db):
            yield replace(self, n_p=(n_p,), snapshots=(snaps,), k_model=(k_model,), snr_db=(snr,))

    def scalar(self, name: str):
        value = getattr(self, name)
        if len(value) != 1:
            raise ConfigError(f"{name} must be a single value here, got {value}")
        return value[0]


@dataclass(frozen=True)
class ResultRow:
    scenario: str
    estimator: str
    snr_db: float
    nmse: float
    nmse_db: float
    ser: float
    trials: int
    elapsed_ms: float
    seed: int


@lru_cache(maxsize=32)
def _cached_dictionary(n_p: int, pilot_seed: int, m_tau: int, n_nu: int, g_nu: int, m: int, n: int):
    return build_dictionary(generate_pilot(n_p, pilot_seed), m_tau, n_nu, g_nu, m, n)


@lru_cache(maxsize=8)
def _cached_profile_taps(path: str, m: int, n: int, delta_f: float, cp_len: int, f_c: float, m_tau: int, n_nu: int):
    frame = FrameConfig(M=m, N=n, delta_f=delta_f, cp_len=cp_len, f_c=f_c)
    return tuple(profile_to_taps(load_dd_profile(path), frame, m_tau, n_nu))


def _draw_channel(cfg: RunConfig, rng: np.random.Generator) -> ChannelRealization:
    if cfg.channel == "gmm":
        spec = default_mixture(cfg.k_true)
        return sample_channel(spec, cfg.l_p, cfg.m_tau, cfg.n_nu, cfg.frac_doppler, rng)
    if cfg.channel.startswith("case_"):
        spec = gmm_case(cfg.channel[-1])
        return sample_channel(spec, cfg.l_p, cfg.m_tau, cfg.n_nu, cfg.frac_doppler, rng)
    # fixed DD profile: taps from the table, gains from the k_true mixture
    if not cfg.profile_path:
        raise ConfigError("channel mode 'profile' requires profile_path")
    taps = _cached_profile_taps(
        cfg.profile_path, cfg.M, cfg.N, cfg.delta_f, cfg.cp_len, cfg.f_c, cfg.m_tau, cfg.n_nu
    )
    gains, _ = sample_gains(default_mixture(cfg.k_true), len(taps), rng)
    paths = tuple(PathSpec(l=l, c=c, h=complex(g)) for (l, c), g in zip(taps, gains))
    return ChannelRealization(paths=paths, origin="profile")


def _apply_diagonals(diags: dict, s: np.ndarray) -> np.ndarray:
    """Multiply a shifted-diagonal channel by a vector."""
    out = np.zeros_like(s)
    for l, d in diags.items():
        out += d * np.roll(s, l)
    return out


def _estimate_diagonals(h_hat: np.ndarray, dictionary, size: int) -> dict:
    """Shifted diagonals of the TD channel implied by a grid-domain estimate."""
    phase_base = 2.0 * np.pi / size
    p = np.arange(size)
    c_bins = np.array([dictionary.doppler_index(j) for j in range(dictionary.g_nu)])
    diags = {}
    for i in range(dictionary.m_tau):
        coeffs = h_hat[i * dictionary.g_nu : (i + 1) * dictionary.g_nu]
        if not np.any(coeffs):
            continue
        ramp = np.exp(1j * phase_base * np.outer(p - i, c_bins))
        diags[i] = ramp @ coeffs
    return diags


def _diag_nmse(est: dict, truth: dict) -> float:
    err = 0.0
    ref = 0.0
    for l in set(est) | set(truth):
        t = truth.get(l)
        e = est.get(l)
        if t is None:
            err += float(np.vdot(e, e).real)
        elif e is None:
            err += float(np.vdot(t, t).real)
        else:
            d = e - t
            err += float(np.vdot(d, d).real)
        if t is not None:
            ref += float(np.vdot(t, t).real)
    return err / ref


def run_trial(cfg: RunConfig, trial_index: int, compute_ser: bool = True) -> dict:
    """One seeded Monte Carlo trial; returns {estimator: (nmse, ser, elapsed_ms)}.

    ``cfg`` must be a single sweep point (scalar axes).  The trial draws
    one channel, one set of pilot snapshots and one QPSK data frame; all
    requested estimators see identical data.  With ``compute_ser=False``
    the detection stage is skipped and ser is reported as NaN (used by
    NMSE-only studies; the sweep always keeps it on).
    """
    n_p = cfg.scalar("n_p")
    n_snap = cfg.scalar("snapshots")
    k_model = cfg.scalar("k_model")
    snr_db = cfg.scalar("snr_db")
    sigma2 = 10.0 ** (-snr_db / 10.0)
    frame = cfg.frame()
    size = frame.frame_len
    phase_base = 2.0 * np.pi / size

    rng = np.random.default_rng((cfg.base_seed, trial_index))
    ch = _draw_channel(cfg, rng)
    dictionary = _cached_dictionary(n_p, cfg.pilot_seed, cfg.m_tau, cfg.n_nu, cfg.g_nu, cfg.M, cfg.N)

    pilot_diags = shift_diagonals(ch, n_p, phase_base)
    clean = _apply_diagonals(pilot_diags, dictionary.pilot.sequence.astype(np.complex128))
    snapshots = clean[:, None] + complex_awgn(rng, (n_p, n_snap), sigma2)

    truth_diags = shift_diagonals(ch, size, phase_base)
    support = true_support(ch, dictionary)

    # one QPSK data frame through the true channel, shared by all estimators
    bits = rng.integers(0, 2, size=2 * size)
    x_dd = qpsk_mod(bits)
    s_td = modulate(x_dd.reshape((cfg.M, cfg.N), order="F"), frame)
    r_td = _apply_diagonals(truth_diags, s_td) + complex_awgn(rng, size, sigma2)

    out = {}
    for name in cfg.estimators:
        t0 = time.perf_counter() if cfg.timing else 0.0
        result = run_estimator(name, snapshots, dictionary, sigma2, k_model=k_model, support=support)
        est_diags = _estimate_diagonals(result.h_hat, dictionary, size)
        nmse_val = _diag_nmse(est_diags, truth_diags)
        if compute_ser:
            x_hat = lmmse_detect_td(est_diags, r_td, sigma2, cfg.M, cfg.N)
            ser_val = ser_metric(x_hat, x_dd)
        else:
            ser_val = float("nan")
        elapsed = (time.perf_counter() - t0) * 1e3 if cfg.timing else 0.0
        out[name] = (nmse_val, ser_val, elapsed)
    return out


def _trial_star(args):
    return run_trial(*args)


def sweep(cfg: RunConfig, executor: ProcessPoolExecutor | None = None, stats_out: dict | None = None) -> list:
    """Cartesian sweep over (n_p, snapshots, k_model, snr_db) x estimators.

    Trials may fan out across processes; accumulation always happens in
    trial-index order so repeated runs are bit-identical regardless of
    worker count.  When ``stats_out`` is a dict it receives
    {(scenario, estimator, snr_db): nmse standard error} for reporting.
    """
    rows = []
    own_executor = None
    if executor is None and cfg.workers > 1:
        executor = own_executor = ProcessPoolExecutor(max_workers=cfg.workers)
    try:
        for point in cfg.points():
            tasks = ((point, t) for t in range(cfg.trials))
            if executor is not None:
                results = list(executor.map(_trial_star, tasks, chunksize=8))
            else:
                results = [run_trial(point, t) for t in range(cfg.trials)]
            scenario = f"np{point.scalar('n_p')}-L{point.scalar('snapshots')}-K{point.scalar('k_model')}-{point.channel_tag()}"
            for name in point.estimators:
                nmse_sum = 0.0
                nmse_sq_sum = 0.0
                ser_sum = 0.0
                elapsed_sum = 0.0
                for res in results:  # fixed trial order
                    nmse_val, ser_val, elapsed = res[name]
                    nmse_sum += nmse_val
                    nmse_sq_sum += nmse_val * nmse_val
                    ser_sum += ser_val
                    elapsed_sum += elapsed
                nmse_mean = nmse_sum / cfg.trials
                if stats_out is not None:
                    var = max(nmse_sq_sum / cfg.trials - nmse_mean**2, 0.0)
                    stats_out[(scenario, name, float(point.scalar("snr_db")))] = float(
                        np.sqrt(var / cfg.trials)
                    )
                rows.append(
                    ResultRow(
                        scenario=scenario,
                        estimator=name,
                        snr_db=float(point.scalar("snr_db")),
                        nmse=nmse_mean,
                        nmse_db=10.0 * np.log10(nmse_mean) if nmse_mean > 0 else float("-inf"),
                        ser=ser_sum / cfg.trials,
                        trials=cfg.trials,
                        elapsed_ms=elapsed_sum,
                        seed=cfg.base_seed,
                    )
                )
    finally:
        if own_executor is not None:
            own_executor.shutdown()
    return rows


def _fmt(x: float) -> str:
    return f"{x:.10e}"


def emit_csv(rows, path) -> None:
    """Write rows under the documented header; deterministic bytes for equal rows."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(CSV_HEADER + "\n")
        for row in rows:
            fh.write(
                ",".join(
                    [
                        row.scenario,
                        row.estimator,
                        _fmt(row.snr_db),
                        _fmt(row.nmse),
                        _fmt(row.nmse_db),
                        _fmt(row.ser),
                        str(row.trials),
                        _fmt(row.elapsed_ms),
                        str(row.seed),
                    ]
                )
                + "\n"
            )


def parse_results_csv(path) -> list:
    """Read back a results CSV into ResultRow objects."""
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != CSV_HEADER:
            raise ConfigError(f"unexpected CSV header: {header!r}")
        for line in fh:
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            rows.append(
                ResultRow(
                    scenario=parts[0],
                    estimator=parts[1],
                    snr_db=float(parts[2]),
                    nmse=float(parts[3]),
                    nmse_db=float(parts[4]),
                    ser=float(parts[5]),
                    trials=int(parts[6]),
                    elapsed_ms=float(parts[7]),
                    seed=int(parts[8]),
                )
            )
    return rows


_LIST_FIELDS = {"n_p", "snapshots", "snr_db", "k_model", "estimators"}
_INT_FIELDS = {"M", "N", "cp_len", "m_tau", "n_nu", "g_nu", "l_p", "k_true", "trials", "base_seed", "pilot_seed", "workers"}
_FLOAT_FIELDS = {"delta_f", "f_c"}
_BOOL_FIELDS = {"frac_doppler", "timing"}


def _parse_value(key: str, raw: str):
    raw = raw.strip()
    if key in _LIST_FIELDS:
        items = [v.strip() for v in raw.split(",") if v.strip()]
        if key == "estimators":
            return tuple(items)
        if key in ("snr_db",):
            return tuple(float(v) for v in items)
        return tuple(int(v) for v in items)
    if key in _INT_FIELDS:
        return int(raw)
    if key in _FLOAT_FIELDS:
        return float(raw)
    if key in _BOOL_FIELDS:
        if raw.lower() in ("true", "1", "yes", "on"):
            return True
        if raw.lower() in ("false", "0", "no", "off"):
            return False
        raise ConfigError(f"cannot parse boolean {key} = {raw!r}")
    return raw


def parse_config_text(text: str) -> dict:
    """Parse the plain-text key = value grammar (one pair per line, # comments)."""
    known = {f.name for f in fields(RunConfig)}
    out = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = line.split("=", 1)
        key = key.strip()
        if key not in known:
            raise ConfigError(f"line {lineno}: unknown config key {key!r}")
        out[key] = _parse_value(key, raw)
    return out


def load_config(path=None, overrides: dict | None = None) -> RunConfig:
    """Build a RunConfig from an optional file plus explicit overrides."""
    values: dict = {}
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            values.update(parse_config_text(fh.read()))
    if overrides:
        values.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig(**values)
