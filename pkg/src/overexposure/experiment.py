"""Appeal sweeps over sampled thresholds, averaged across trials, written as CSV."""
from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import IO, Iterable, Sequence

import numpy as np

from .cascade import exposure_mask, scaled_payoff
from .network import DISTRIBUTIONS, Network, Product, classify, sample_params
from .optimize import baseline_seeds, optimal_scaled_payoff

STRATEGIES = ("optimal", "T3", "T3_and_T4", "tau_leq_phi", "upper_bound")
CSV_FIELDS = ("phi", "strategy", "mean_payoff", "std_payoff", "trials",
              "mean_mincut_seconds", "mean_total_seconds")


@dataclass(frozen=True)
class SweepConfig:
    """Sweep settings.

    With ``timing`` off the timing fields are reported as 0.0 so that output
    depends only on the inputs.
    """

    phi_count: int = 100
    trials: int = 100
    distribution: str = "uniform"
    p: Fraction = Fraction(1)
    q: Fraction = Fraction(1)
    rng_seed: int = 0
    strategies: tuple[str, ...] = STRATEGIES
    timing: bool = False
    workers: int = 1

    def __post_init__(self):
        if self.phi_count < 1 or self.trials < 1:
            raise ValueError("phi_count and trials must be at least 1")
        if self.distribution not in DISTRIBUTIONS:
            raise ValueError(f"distribution must be one of {DISTRIBUTIONS}")
        unknown = set(self.strategies) - set(STRATEGIES)
        if unknown:
            raise ValueError(f"unknown strategies {sorted(unknown)}")
        object.__setattr__(self, "strategies", tuple(self.strategies))
        Product(0.0, self.p, self.q)  # validates p, q

    def phis(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.phi_count)


@dataclass(frozen=True)
class SweepRecord:
    phi: float
    strategy: str
    mean_payoff: float
    std_payoff: float
    trials: int
    mean_mincut_seconds: float
    mean_total_seconds: float


def trial_seed(rng_seed: int, trial: int) -> np.random.SeedSequence:
    """Independent, reproducible stream for one trial."""
    return np.random.SeedSequence(rng_seed, spawn_key=(trial,))


@dataclass
class TrialResult:
    payoffs: np.ndarray  # (phi_count, strategies) scaled integers
    mincut_seconds: np.ndarray
    total_seconds: np.ndarray
    log: list = field(default_factory=list)


def run_trial(net: Network, cfg: SweepConfig, trial: int, want_log: bool = False, backend=None) -> TrialResult:
    P, Q, scale = Product(0.0, cfg.p, cfg.q).scaled()
    t_sample = time.perf_counter()
    params = sample_params(cfg.distribution, trial_seed(cfg.rng_seed, trial), net.node_count)
    t_sample = time.perf_counter() - t_sample
    phis = cfg.phis()
    out = np.zeros((phis.size, len(cfg.strategies)), dtype=np.int64)
    mincut = np.zeros(phis.size)
    total = np.zeros(phis.size)
    log = []
    for i, phi in enumerate(phis.tolist()):
        t0 = time.perf_counter()
        types = classify(params, phi)
        for j, name in enumerate(cfg.strategies):
            if name == "optimal":
                value, mincut[i], nseeds = optimal_scaled_payoff(net, types, P, Q, backend)
            elif name == "upper_bound":
                nseeds = 0
                value = P * int(np.count_nonzero(params.theta <= phi))
            else:
                seeds = baseline_seeds(types, name)
                nseeds = int(np.count_nonzero(seeds))
                value = scaled_payoff(types, exposure_mask(net, types, seeds, backend), P, Q)
            out[i, j] = value
            if want_log:
                log.append({"trial": trial, "phi": phi, "strategy": name,
                            "payoff": float(Fraction(value, scale)), "seeds": nseeds})
        total[i] = time.perf_counter() - t0 + t_sample / phis.size
    return TrialResult(out, mincut, total, log)


def _trial_worker(args):
    return run_trial(*args)


def run_sweep(net: Network, cfg: SweepConfig, log: IO[str] | None = None, backend=None) -> list[SweepRecord]:
    """Average every strategy over ``cfg.trials`` sampled threshold sets at each appeal value.

    Thresholds are drawn once per trial and shared by all appeal values of
    that trial. Trials may run in worker processes; results are combined in
    trial order, so the output does not depend on ``cfg.workers``. Timing
    means skip trial 0 as warm-up when there is more than one trial.
    """
    jobs = [(net, cfg, t, log is not None, backend) for t in range(cfg.trials)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_trial_worker, jobs))
    else:
        results = [_trial_worker(j) for j in jobs]
    if log is not None:
        for r in results:
            for entry in r.log:
                log.write(json.dumps(entry, sort_keys=True) + "\n")

    _, _, scale = Product(0.0, cfg.p, cfg.q).scaled()
    values = np.stack([r.payoffs for r in results]).astype(np.float64) / scale
    mean = values.mean(axis=0)
    std = values.std(axis=0, ddof=1) if cfg.trials > 1 else np.zeros_like(mean)
    timed = results[1:] if cfg.trials > 1 else results
    mincut = np.mean([r.mincut_seconds for r in timed], axis=0)
    total = np.mean([r.total_seconds for r in timed], axis=0)
    if not cfg.timing:
        mincut = np.zeros_like(mincut)
        total = np.zeros_like(total)

    records = []
    for i, phi in enumerate(cfg.phis().tolist()):
        for j, name in enumerate(cfg.strategies):
            records.append(SweepRecord(phi, name, float(mean[i, j]), float(std[i, j]), cfg.trials,
                                       float(mincut[i]), float(total[i])))
    return sorted(records, key=lambda r: (r.phi, r.strategy))


def emit_csv(records: Iterable[SweepRecord]) -> str:
    """CSV text with a fixed header; rows sorted by (phi, strategy), floats at full precision."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in sorted(records, key=lambda r: (r.phi, r.strategy)):
        w.writerow([repr(r.phi), r.strategy, repr(r.mean_payoff), repr(r.std_payoff), r.trials,
                    repr(r.mean_mincut_seconds), repr(r.mean_total_seconds)])
    return buf.getvalue()


def parse_csv(text: str) -> list[SweepRecord]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != CSV_FIELDS:
        raise ValueError("missing or unexpected CSV header")
    return [SweepRecord(float(a), s, float(m), float(sd), int(t), float(mc), float(tt))
            for a, s, m, sd, t, mc, tt in rows[1:]]


def curves(records: Sequence[SweepRecord]) -> tuple[np.ndarray, dict[str, np.ndarray]]:
    """``(phis, {strategy: mean payoff per phi})`` from sweep records."""
    phis = np.array(sorted({r.phi for r in records}))
    out: dict[str, np.ndarray] = {}
    for r in records:
        out.setdefault(r.strategy, np.full(phis.size, np.nan))[np.searchsorted(phis, r.phi)] = r.mean_payoff
    return phis, out
