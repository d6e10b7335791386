"""Experiment runner: learner x environment x noise x horizon x trials.

Trials are mutually independent with RNG substreams hashed from
(seed, trial, purpose), so results do not depend on chunking or on the worker
count, and a (config, seed) pair reproduces byte-identical CSV.  The hot
combinations run in a vectorized engine that advances all trials of a chunk
in lockstep; its recursions mirror the scalar learner classes and the
agreement is pinned by tests.  Remaining combinations fall back to a scalar
per-trial loop.
"""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .baselines import BancoLearner, OgdAdaptive, OgdFixed
from .betting import BettingConfig, NoiseSpec, bet_uniform, regret_ceiling
from .environments import (
    Absolute1D,
    LinearFixed,
    PrivateConvex,
    RampHardInstance,
    sphere_mean_abs_coord,
)
from .errors import ConfigError, InsufficientTrials
from .noise import make_oracle, substream
from .reduction import BanachLearnerState, banach_predict, banach_update

__all__ = [
    "ExperimentSpec",
    "TrialRecord",
    "CSV_HEADER",
    "parse_config",
    "spec_from_mapping",
    "checkpoints_pow2",
    "run_experiment",
    "write_csv",
    "estimate_expected_regret",
    "run_private_sgd",
    "PrivateSgdResult",
]

CSV_HEADER = [
    "trial",
    "t",
    "algorithm",
    "comparator",
    "regret_lin",
    "regret_true",
    "wealth",
    "bet",
    "iterate_norm",
    "ceiling",
]

_ALGORITHMS = ("banco", "naive", "ogd_fixed", "ogd_adaptive", "banco_banach")
_ENVIRONMENTS = ("absolute1d", "linear", "hard_ramp", "private_convex")
_NOISES = ("none", "gaussian", "laplace", "bounded_uniform")

# trials-per-chunk sized so one chunk's noise block stays around 3e7 floats
_CHUNK_BUDGET = 3e7


@dataclass(frozen=True)
class ExperimentSpec:
    """Everything a run needs; ``params`` holds component-specific keys."""

    algorithm: str
    environment: str
    noise: str
    T: int
    trials: int
    comparators: tuple[float, ...]
    seed: int
    out: str | None = None
    params: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.algorithm not in _ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.algorithm!r}")
        if self.environment not in _ENVIRONMENTS:
            raise ConfigError(f"unknown environment {self.environment!r}")
        if self.noise not in _NOISES:
            raise ConfigError(f"unknown noise {self.noise!r}")
        if self.T < 1:
            raise ConfigError("T must be >= 1")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if not self.comparators:
            raise ConfigError("need at least one comparator")

    def param(self, key: str, default=None):
        return self.params.get(key, default)


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    t: int
    comparator: float
    regret_lin: float
    regret_true: float
    wealth: float
    bet: float
    iterate_norm: float
    ceiling: float


def checkpoints_pow2(T: int) -> list[int]:
    """Powers of two up to T, plus the final round."""
    pts = []
    k = 1
    while k <= T:
        pts.append(k)
        k *= 2
    if pts[-1] != T:
        pts.append(T)
    return pts


def log_checkpoints(spec: "ExperimentSpec") -> list[int]:
    """Rounds to log: the default power-of-two stride, or every k-th round
    when the config sets ``log_stride = k``."""
    stride = spec.param("log_stride", "pow2")
    if stride == "pow2":
        return checkpoints_pow2(spec.T)
    k = int(stride)
    if k < 1:
        raise ConfigError("log_stride must be 'pow2' or a positive integer")
    pts = list(range(k, spec.T + 1, k))
    if not pts or pts[-1] != spec.T:
        pts.append(spec.T)
    return pts


# ---------------------------------------------------------------------------
# config file parsing
# ---------------------------------------------------------------------------

_KNOWN_KEYS = {
    "algorithm",
    "environment",
    "noise",
    "T",
    "trials",
    "comparators",
    "seed",
    "out",
    # algorithm params
    "tau",
    "G",
    "eta",
    "eta0",
    # environment params
    "u_star",
    "g_value",
    "d",
    "delta",
    "r",
    "q",
    "sigma",
    "oracle",
    "alpha_seed",
    "w_star_norm",
    # noise params
    "noise_s2",
    "noise_epsilon",
    "noise_r",
    "log_stride",
}

_FLOAT_KEYS = {
    "tau",
    "G",
    "eta",
    "eta0",
    "u_star",
    "g_value",
    "delta",
    "r",
    "q",
    "sigma",
    "w_star_norm",
    "noise_s2",
    "noise_epsilon",
    "noise_r",
    "log_stride",
}
_INT_KEYS = {"T", "trials", "seed", "d", "alpha_seed"}


def parse_config(text: str) -> dict:
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    out: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in _FLOAT_KEYS:
            out[key] = float(value)
        elif key in _INT_KEYS:
            out[key] = int(value)
        elif key == "comparators":
            out[key] = tuple(float(v) for v in value.split(",") if v.strip())
        else:
            out[key] = value
    return out


def spec_from_mapping(cfg: dict) -> ExperimentSpec:
    cfg = dict(cfg)
    try:
        spec = ExperimentSpec(
            algorithm=cfg.pop("algorithm"),
            environment=cfg.pop("environment"),
            noise=cfg.pop("noise", "none"),
            T=cfg.pop("T"),
            trials=cfg.pop("trials", 1),
            comparators=tuple(cfg.pop("comparators", ()) or ()),
            seed=cfg.pop("seed", 0),
            out=cfg.pop("out", None),
            params=cfg,
        )
    except KeyError as exc:
        raise ConfigError(f"missing required key {exc.args[0]!r}") from None
    return spec


# ---------------------------------------------------------------------------
# component wiring
# ---------------------------------------------------------------------------


def _env_dim(spec: ExperimentSpec) -> int:
    if spec.environment in ("absolute1d",):
        return 1
    return int(spec.param("d", 1))


def _noise_params(spec: ExperimentSpec) -> dict:
    return {
        "gaussian": lambda: {"s2": spec.param("noise_s2", 1.0)},
        "laplace": lambda: {"epsilon": spec.param("noise_epsilon", 1.0)},
        "bounded_uniform": lambda: {"r": spec.param("noise_r", 1.0)},
        "none": lambda: {},
    }[spec.noise]()


def _noise_oracle(spec: ExperimentSpec, trial: int):
    return make_oracle(spec.noise, _env_dim(spec), substream(spec.seed, trial, 1), **_noise_params(spec))


def bettor_config_for(spec: ExperimentSpec) -> BettingConfig:
    """Betting configuration wired to the experiment's noise oracle.

    The potential's discount must use an MGF-certified variance parameter, so
    the scalar coin takes the oracle's directional parameter sigma_1d^2 (for
    isotropic Gaussian coins in 1-d the two coincide; for the Laplace
    mechanism the raw second moment is not a valid MGF bound).
    """
    oracle_spec = make_oracle(spec.noise, _env_dim(spec), None, **_noise_params(spec)).spec()
    effective = NoiseSpec(
        sigma2=oracle_spec.sigma2_1d, sigma2_1d=oracle_spec.sigma2_1d, b=oracle_spec.b
    )
    if spec.algorithm == "naive":
        effective = NoiseSpec(0.0, 0.0, 0.0)
    return BettingConfig.build(
        tau=spec.param("tau", 1.0), G=spec.param("G", 1.0), noise=effective
    )


def _make_env(spec: ExperimentSpec, trial: int):
    noise = _noise_oracle(spec, trial)
    env_rng = substream(spec.seed, trial, 0)
    kind = spec.environment
    if kind == "absolute1d":
        return Absolute1D(spec.param("u_star", 1.0), noise)
    if kind == "linear":
        d = _env_dim(spec)
        g = spec.param("g_value", 1.0) * np.ones(d) / math.sqrt(d)
        return LinearFixed([g], noise)
    if kind == "hard_ramp":
        d = _env_dim(spec)
        # a fresh sign vector per trial; any fixed one is already a hard instance
        alpha = np.where(substream(spec.param("alpha_seed", 0), trial).random(d) < 0.5, -1.0, 1.0)
        return RampHardInstance(
            alpha=alpha,
            delta=spec.param("delta", 0.25),
            r=spec.param("r", 1.0),
            q=spec.param("q", 2.0),
            sigma=spec.param("sigma", 2.0),
            oracle=spec.param("oracle", "A"),
            rng=env_rng,
        )
    if kind == "private_convex":
        d = _env_dim(spec)
        w_star = spec.param("w_star_norm", 1.0) * np.ones(d) / math.sqrt(d)
        return PrivateConvex(w_star, noise, env_rng)
    raise ConfigError(f"unknown environment {kind!r}")


def _make_learner(spec: ExperimentSpec, dim: int):
    algo = spec.algorithm
    if algo in ("banco", "naive"):
        return BancoLearner(bettor_config_for(spec))
    if algo == "ogd_fixed":
        eta = spec.param("eta")
        if eta is None:
            raise ConfigError("ogd_fixed needs an 'eta' parameter")
        return OgdFixed(eta, dim)
    if algo == "ogd_adaptive":
        return OgdAdaptive(spec.param("eta0", 1.0), dim)
    if algo == "banco_banach":
        return _BanachWrapper(BanachLearnerState.fresh(bettor_config_for(spec), dim))
    raise ConfigError(f"unknown algorithm {algo!r}")


class _BanachWrapper:
    def __init__(self, state: BanachLearnerState):
        self.state = state

    def predict(self) -> np.ndarray:
        return banach_predict(self.state)

    def update(self, g_hat) -> None:
        self.state = banach_update(self.state, np.asarray(g_hat, dtype=float))

    @property
    def wealth(self) -> float:
        return self.state.bettor.wealth


def _comparator_vector(spec: ExperimentSpec, c: float, dim: int) -> np.ndarray:
    if dim == 1:
        return np.array([c])
    return c * np.ones(dim) / math.sqrt(dim)


def _ceiling(spec: ExperimentSpec, config: BettingConfig | None, c: float, t: int) -> float:
    if spec.algorithm in ("banco", "banco_banach") and config is not None:
        base = regret_ceiling(abs(c), t, config)
        if spec.algorithm == "banco_banach":
            # provable direction-learner term: 3/sqrt(lam) * sqrt(t*(G^2 + sigma^2))
            oracle_spec = make_oracle(
                spec.noise, _env_dim(spec), None, **_noise_params(spec)
            ).spec()
            base += abs(c) * 3.0 * math.sqrt(t * (config.G**2 + oracle_spec.sigma2))
        return base
    if spec.algorithm == "ogd_fixed":
        s2 = make_oracle(spec.noise, _env_dim(spec), None, **_noise_params(spec)).spec().sigma2
        return (c * c + 1.0) * math.sqrt((s2 + 1.0) * t)
    return float("nan")


# ---------------------------------------------------------------------------
# engines
# ---------------------------------------------------------------------------


def _run_chunk_scalar(spec: ExperimentSpec, trials: Sequence[int]) -> list[TrialRecord]:
    """Reference per-trial loop; handles every component combination."""
    marks = set(log_checkpoints(spec))
    records: list[TrialRecord] = []
    config = bettor_config_for(spec) if spec.algorithm in ("banco", "naive", "banco_banach") else None
    for trial in trials:
        env = _make_env(spec, trial)
        dim = _env_dim(spec)
        learner = _make_learner(spec, dim)
        g_sum = np.zeros(dim)
        gx_sum = 0.0
        loss_sum = 0.0
        cmp_loss = {c: 0.0 for c in spec.comparators}
        for t in range(1, spec.T + 1):
            x_t = np.atleast_1d(learner.predict())
            sample = env.query(x_t, t - 1)
            g_sum += sample.g_true
            gx_sum += float(np.dot(sample.g_true, x_t))
            loss_sum += sample.loss_true
            for c in spec.comparators:
                cmp_loss[c] += env.comparator_loss(_comparator_vector(spec, c, dim))
            learner.update(sample.g_hat)
            if t in marks:
                wealth = getattr(learner, "wealth", float("nan"))
                bet = float(np.linalg.norm(x_t)) if dim > 1 else float(x_t[0])
                for c in spec.comparators:
                    u = _comparator_vector(spec, c, dim)
                    records.append(
                        TrialRecord(
                            trial=trial,
                            t=t,
                            comparator=c,
                            regret_lin=float(np.dot(g_sum, u)) - gx_sum,
                            regret_true=loss_sum - cmp_loss[c],
                            wealth=wealth,
                            bet=bet,
                            iterate_norm=float(np.linalg.norm(x_t)),
                            ceiling=_ceiling(spec, config, c, t),
                        )
                    )
        del learner, env
    return records


def _batch_supported(spec: ExperimentSpec) -> bool:
    one_d = spec.algorithm in ("banco", "naive", "ogd_fixed", "ogd_adaptive")
    if one_d and spec.environment in ("absolute1d", "linear") and _env_dim(spec) == 1:
        return True
    if spec.algorithm == "banco_banach" and spec.environment in ("linear", "private_convex"):
        return True
    return False


def _run_chunk_batch(spec: ExperimentSpec, trials: Sequence[int]) -> list[TrialRecord]:
    """Vectorized engine advancing a chunk of trials in lockstep."""
    n = len(trials)
    T = spec.T
    marks = set(log_checkpoints(spec))
    xi = np.stack([_noise_oracle(spec, trial).sample_block(T) for trial in trials])
    config = bettor_config_for(spec) if spec.algorithm in ("banco", "naive", "banco_banach") else None

    records: list[TrialRecord] = []
    if spec.algorithm == "banco_banach":
        records.extend(_banach_batch_core(spec, trials, xi, config, marks))
        return records

    # one-dimensional engines
    xi = xi[:, :, 0]
    u_star = spec.param("u_star", 1.0) if spec.environment == "absolute1d" else None
    g_lin = spec.param("g_value", 1.0) if spec.environment == "linear" else None
    algo = spec.algorithm
    if algo in ("banco", "naive"):
        a = config.prior.a
        tau = config.tau
        y_rate = config.y_rate
        x_sum = np.zeros(n)
        wealth = np.full(n, tau)
    else:
        w = np.zeros(n)
        eta = spec.param("eta") if algo == "ogd_fixed" else None
        eta0 = spec.param("eta0", 1.0)
        gss = np.zeros(n)
    g_cum = np.zeros(n)
    gx_cum = np.zeros(n)
    loss_cum = np.zeros(n)

    for t in range(1, T + 1):
        if algo in ("banco", "naive"):
            iterate = bet_uniform(x_sum, (t - 1) * y_rate, a, tau)
            iterate = np.atleast_1d(iterate)
        else:
            iterate = w
        if u_star is not None:
            g_true = np.sign(u_star - iterate)
            loss = np.abs(iterate - u_star)
        else:
            g_true = np.full(n, g_lin)
            loss = -g_lin * iterate
        g_hat = g_true + xi[:, t - 1]
        g_cum += g_true
        gx_cum += g_true * iterate
        loss_cum += loss
        if algo in ("banco", "naive"):
            x_sum = x_sum + g_hat
            wealth = wealth + g_hat * iterate
        elif algo == "ogd_fixed":
            w = w + eta * g_hat
        else:
            gss += g_hat * g_hat
            step = np.where(gss > 0, eta0 / np.sqrt(np.maximum(gss, 1e-300)), 0.0)
            w = w + step * g_hat
        if t in marks:
            for c in spec.comparators:
                if u_star is not None:
                    cmp_l = abs(c - u_star) * t
                else:
                    cmp_l = -g_lin * c * t
                ceiling = _ceiling(spec, config, c, t)
                r_lin = g_cum * c - gx_cum
                r_true = loss_cum - cmp_l
                wl = wealth if algo in ("banco", "naive") else np.full(n, float("nan"))
                for j, trial in enumerate(trials):
                    records.append(
                        TrialRecord(
                            trial=trial,
                            t=t,
                            comparator=c,
                            regret_lin=float(r_lin[j]),
                            regret_true=float(r_true[j]),
                            wealth=float(wl[j]),
                            bet=float(iterate[j]),
                            iterate_norm=float(abs(iterate[j])),
                            ceiling=ceiling,
                        )
                    )
    return records


def _banach_batch_core(spec, trials, xi, config, marks) -> list[TrialRecord]:
    dim = _env_dim(spec)
    n = len(trials)
    T = spec.T
    a = config.prior.a
    tau = config.tau
    y_rate = config.y_rate
    if spec.environment == "private_convex":
        w_star = spec.param("w_star_norm", 1.0) * np.ones(dim) / math.sqrt(dim)
        data = np.stack(
            [substream(spec.seed, trial, 0).standard_normal((T, dim)) for trial in trials]
        )
        data /= np.linalg.norm(data, axis=2, keepdims=True)
        g_fixed = None
    else:
        g_fixed = spec.param("g_value", 1.0) * np.ones(dim) / math.sqrt(dim)
        data = None

    x_sum = np.zeros(n)
    wealth = np.full(n, tau)
    y = np.zeros((n, dim))
    gss = np.zeros(n)
    g_cum = np.zeros((n, dim))
    gx_cum = np.zeros(n)
    loss_cum = np.zeros(n)
    cmp_loss = {c: np.zeros(n) for c in spec.comparators}
    records: list[TrialRecord] = []

    for t in range(1, T + 1):
        w_bet = np.atleast_1d(bet_uniform(x_sum, (t - 1) * y_rate, a, tau))
        x_t = w_bet[:, None] * y
        if data is not None:
            d_t = data[:, t - 1, :]
            margin = np.sum((x_t - w_star) * d_t, axis=1)
            g_true = -np.sign(margin)[:, None] * d_t
            loss = np.abs(margin)
            for c in spec.comparators:
                u = _comparator_vector(spec, c, dim)
                cmp_loss[c] += np.abs(d_t @ (u - w_star))
        else:
            g_true = np.broadcast_to(g_fixed, (n, dim))
            loss = -(x_t @ g_fixed)
            for c in spec.comparators:
                u = _comparator_vector(spec, c, dim)
                cmp_loss[c] += -float(g_fixed @ u)
        g_hat = g_true + xi[:, t - 1, :]
        g_cum += g_true
        gx_cum += np.sum(g_true * x_t, axis=1)
        loss_cum += loss
        # bettor feedback and update
        s = np.sum(g_hat * y, axis=1)
        x_sum = x_sum + s
        wealth = wealth + s * w_bet
        # direction learner update (Euclidean)
        gss += np.sum(g_hat * g_hat, axis=1)
        step = np.where(gss > 0, 1.0 / np.sqrt(np.maximum(gss, 1e-300)), 0.0)
        y = y + step[:, None] * g_hat
        norms = np.linalg.norm(y, axis=1)
        scale = np.where(norms > 1.0, 1.0 / np.maximum(norms, 1e-300), 1.0)
        y = y * scale[:, None]
        if t in marks:
            for c in spec.comparators:
                u = _comparator_vector(spec, c, dim)
                ceiling = _ceiling(spec, config, c, t)
                r_lin = g_cum @ u - gx_cum
                r_true = loss_cum - cmp_loss[c]
                for j, trial in enumerate(trials):
                    records.append(
                        TrialRecord(
                            trial=trial,
                            t=t,
                            comparator=c,
                            regret_lin=float(r_lin[j]),
                            regret_true=float(r_true[j]),
                            wealth=float(wealth[j]),
                            bet=float(w_bet[j]),
                            iterate_norm=float(np.linalg.norm(x_t[j])),
                            ceiling=ceiling,
                        )
                    )
    return records


def _chunks(spec: ExperimentSpec) -> list[list[int]]:
    per = max(1, int(_CHUNK_BUDGET / max(spec.T * _env_dim(spec), 1)))
    ids = list(range(spec.trials))
    return [ids[i : i + per] for i in range(0, len(ids), per)]


def _run_chunk(spec: ExperimentSpec, trials: Sequence[int]) -> list[TrialRecord]:
    if _batch_supported(spec):
        return _run_chunk_batch(spec, trials)
    return _run_chunk_scalar(spec, trials)


def run_experiment(spec: ExperimentSpec, workers: int | None = None) -> list[TrialRecord]:
    """Run all trials; deterministic given (spec, seed) regardless of workers.

    Worker count comes from the BANCO_WORKERS environment variable unless
    passed explicitly.  Records come back sorted by (trial, t, comparator).
    """
    if workers is None:
        workers = int(os.environ.get("BANCO_WORKERS", "1"))
    chunks = _chunks(spec)
    if workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_chunk, [spec] * len(chunks), chunks))
    else:
        results = [_run_chunk(spec, chunk) for chunk in chunks]
    records = [rec for part in results for rec in part]
    records.sort(key=lambda r: (r.trial, r.t, r.comparator))
    return records


def write_csv(path: str, spec: ExperimentSpec, records: Iterable[TrialRecord]) -> None:
    """Stable schema: header exactly ``trial,t,algorithm,comparator,...``."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for r in records:
            writer.writerow(
                [
                    r.trial,
                    r.t,
                    spec.algorithm,
                    repr(r.comparator),
                    repr(r.regret_lin),
                    repr(r.regret_true),
                    repr(r.wealth),
                    repr(r.bet),
                    repr(r.iterate_norm),
                    repr(r.ceiling),
                ]
            )


def estimate_expected_regret(
    records: Sequence[TrialRecord], field_name: str = "regret_lin"
) -> dict[tuple[float, int], tuple[float, float]]:
    """Sample mean and standard error across trials per (comparator, round)."""
    groups: dict[tuple[float, int], list[float]] = {}
    for r in records:
        groups.setdefault((r.comparator, r.t), []).append(getattr(r, field_name))
    out = {}
    for key, vals in groups.items():
        if len(vals) < 2:
            raise InsufficientTrials("need at least 2 trials per cell")
        arr = np.asarray(vals)
        out[key] = (float(arr.mean()), float(arr.std(ddof=1) / math.sqrt(arr.size)))
    return out


@dataclass(frozen=True)
class PrivateSgdResult:
    checkpoints: tuple[int, ...]
    mean_gap: tuple[float, ...]
    se_gap: tuple[float, ...]


def run_private_sgd(spec: ExperimentSpec) -> PrivateSgdResult:
    """Private stochastic subgradient descent with parameter-free magnitudes.

    Runs the Banach reduction under Laplace sanitization noise, averages the
    iterates online, and reports the exact population gap of the averaged
    iterate at power-of-two checkpoints, aggregated across trials.
    """
    if spec.environment != "private_convex":
        raise ConfigError("run_private_sgd needs the private_convex environment")
    if spec.noise not in ("laplace", "none"):
        # "none" is admitted as the sanitization-free reference run
        raise ConfigError("run_private_sgd needs laplace (or none) noise")
    if spec.algorithm != "banco_banach":
        raise ConfigError("run_private_sgd needs the banco_banach algorithm")
    dim = _env_dim(spec)
    T = spec.T
    config = bettor_config_for(spec)
    a, tau, y_rate = config.prior.a, config.tau, config.y_rate
    w_star = spec.param("w_star_norm", 1.0) * np.ones(dim) / math.sqrt(dim)
    c_d = sphere_mean_abs_coord(dim)
    marks = checkpoints_pow2(T)
    mark_set = set(marks)
    gaps = {t: [] for t in marks}

    for chunk in _chunks(spec):
        n = len(chunk)
        xi = np.stack([_noise_oracle(spec, trial).sample_block(T) for trial in chunk])
        data = np.stack(
            [substream(spec.seed, trial, 0).standard_normal((T, dim)) for trial in chunk]
        )
        data /= np.linalg.norm(data, axis=2, keepdims=True)
        x_sum = np.zeros(n)
        y = np.zeros((n, dim))
        gss = np.zeros(n)
        iter_sum = np.zeros((n, dim))
        for t in range(1, T + 1):
            w_bet = np.atleast_1d(bet_uniform(x_sum, (t - 1) * y_rate, a, tau))
            x_t = w_bet[:, None] * y
            iter_sum += x_t
            d_t = data[:, t - 1, :]
            margin = np.sum((x_t - w_star) * d_t, axis=1)
            g_true = -np.sign(margin)[:, None] * d_t
            g_hat = g_true + xi[:, t - 1, :]
            s = np.sum(g_hat * y, axis=1)
            x_sum = x_sum + s
            gss += np.sum(g_hat * g_hat, axis=1)
            step = np.where(gss > 0, 1.0 / np.sqrt(np.maximum(gss, 1e-300)), 0.0)
            y = y + step[:, None] * g_hat
            norms = np.linalg.norm(y, axis=1)
            y = y * np.where(norms > 1.0, 1.0 / np.maximum(norms, 1e-300), 1.0)[:, None]
            if t in mark_set:
                w_bar = iter_sum / t
                gap = c_d * np.linalg.norm(w_bar - w_star, axis=1)
                gaps[t].extend(gap.tolist())

    means, ses = [], []
    for t in marks:
        arr = np.asarray(gaps[t])
        means.append(float(arr.mean()))
        ses.append(float(arr.std(ddof=1) / math.sqrt(arr.size)) if arr.size > 1 else 0.0)
    return PrivateSgdResult(tuple(marks), tuple(means), tuple(ses))
