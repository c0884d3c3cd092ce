"""Monte Carlo failure/repair simulation used to cross-check the Markov model.

Series chains: every element fails after an exponential up-time and is
repaired after an exponential repair time. While any element is under
repair the failure clocks of all others are frozen, so faults never
overlap in time. Under that rule element ``i`` fails at the cumulative sums
of its own up-times measured on the *system up-time* axis, which lets a
replication be generated with a handful of vectorised draws per element.

Parallel pairs: two identical units with independent failures and
independent repairs; the pair is down only while both units are down.

Every element owns two random streams (up-times, repair times) seeded from
``(seed, replication, crc32(element id))``, so results do not depend on
element order or worker count.
"""

from __future__ import annotations

import math
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from statistics import NormalDist, fmean

import numpy as np

from .model import HOURS_PER_YEAR

MIN_REPLICATIONS = 2
NORMAL_CI_REPLICATIONS = 30


@dataclass(frozen=True)
class SimConfig:
    horizon_years: float = 1.0e4
    replications: int = 30
    seed: int = 0
    confidence: float = 0.95

    def __post_init__(self):
        if not (isinstance(self.horizon_years, (int, float)) and self.horizon_years > 0):
            raise ValueError(f"horizon_years must be positive, got {self.horizon_years!r}")
        if not isinstance(self.replications, int) or self.replications < MIN_REPLICATIONS:
            raise ValueError(
                f"replications must be an integer >= {MIN_REPLICATIONS}, got {self.replications!r}")
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        if not 0 < self.confidence < 1:
            raise ValueError(f"confidence must be in (0, 1), got {self.confidence!r}")


@dataclass(frozen=True)
class SimEstimate:
    mean_downtime: float  # hours/year
    half_width: float  # hours/year
    samples: int
    confidence: float = 0.95

    @property
    def interval(self) -> tuple:
        return (self.mean_downtime - self.half_width, self.mean_downtime + self.half_width)

    def to_dict(self) -> dict:
        return {
            "mean_downtime": self.mean_downtime,
            "half_width": self.half_width,
            "samples": self.samples,
            "confidence": self.confidence,
        }


def _stream(seed, rep, name, which):
    key = zlib.crc32(name.encode("utf-8"))
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(rep, key, which))))


def _arrival_times(rng, mean, horizon):
    """Cumulative sums of exponential gaps that fall within ``horizon``."""
    expected = horizon / mean
    chunk = int(expected + 6.0 * math.sqrt(expected) + 16)
    offset = 0.0
    parts = []
    while True:
        cs = offset + np.cumsum(rng.exponential(mean, chunk))
        if cs[-1] > horizon:
            parts.append(cs[cs <= horizon])
            return np.concatenate(parts)
        parts.append(cs)
        offset = cs[-1]


def _elements(chain):
    elements = list(getattr(chain, "elements", chain))
    if not elements:
        raise ValueError("chain must contain at least one element")
    return elements


def _series_replication(elements, horizon_years, seed, rep) -> float:
    horizon = horizon_years * HOURS_PER_YEAR
    up_axis, repairs = [], []
    for e in elements:
        mttr = getattr(e, "effective_mttr", None) or e.mttr
        failures = _arrival_times(_stream(seed, rep, e.component_id, 0),
                                  HOURS_PER_YEAR / e.failure_rate, horizon)
        up_axis.append(failures)
        repairs.append(_stream(seed, rep, e.component_id, 1).exponential(mttr, failures.size))
    u = np.concatenate(up_axis)
    r = np.concatenate(repairs)
    if u.size == 0:
        return 0.0
    order = np.argsort(u, kind="stable")
    u, r = u[order], r[order]
    start = u + (np.cumsum(r) - r)
    live = start < horizon
    down = np.minimum(start[live] + r[live], horizon) - start[live]
    return float(down.sum()) / horizon_years


def _down_intervals(seed, rep, name, failure_rate, mttr, horizon):
    """Alternating up/down renewal process of one unit up to ``horizon``."""
    up_rng = _stream(seed, rep, name, 0)
    down_rng = _stream(seed, rep, name, 1)
    mean_up = HOURS_PER_YEAR / failure_rate
    expected = horizon / (mean_up + mttr)
    chunk = int(expected + 6.0 * math.sqrt(expected) + 16)
    t = 0.0
    starts, ends = [], []
    while t <= horizon:
        ups = up_rng.exponential(mean_up, chunk)
        downs = down_rng.exponential(mttr, chunk)
        cycle_end = t + np.cumsum(ups + downs)
        down_start = cycle_end - downs
        starts.append(down_start)
        ends.append(cycle_end)
        t = cycle_end[-1]
    return np.concatenate(starts), np.concatenate(ends)


def _pair_replication(unit, horizon_years, seed, rep) -> float:
    horizon = horizon_years * HOURS_PER_YEAR
    times, deltas = [], []
    for k in (1, 2):
        s, e = _down_intervals(seed, rep, f"{unit.id}#{k}", unit.failure_rate, unit.mttr, horizon)
        times += [s, e]
        deltas += [np.ones(s.size, dtype=np.int8), -np.ones(e.size, dtype=np.int8)]
    t = np.concatenate(times)
    d = np.concatenate(deltas)
    order = np.argsort(t, kind="stable")
    t = np.minimum(t[order], horizon)
    count = np.cumsum(d[order])
    both = np.diff(t)[count[:-1] == 2].sum()
    return float(both) / horizon_years


def _quantile(confidence, n):
    p = 0.5 + confidence / 2.0
    if n >= NORMAL_CI_REPLICATIONS:
        return NormalDist().inv_cdf(p)
    from scipy.stats import t as student_t
    return float(student_t.ppf(p, n - 1))


def summarize(samples, confidence) -> SimEstimate:
    x = np.asarray(samples, dtype=float)
    n = x.size
    if n < MIN_REPLICATIONS:
        raise ValueError(f"need at least {MIN_REPLICATIONS} replications")
    sd = float(x.std(ddof=1))
    return SimEstimate(float(x.mean()), _quantile(confidence, n) * sd / math.sqrt(n), n, confidence)


def _run(fn, cfg, workers):
    reps = range(cfg.replications)
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, reps))
    return [fn(rep) for rep in reps]


def replicate_chain(chain, cfg: SimConfig, workers: int = 1) -> np.ndarray:
    """Per-replication annual downtime (hours/year) of a series chain."""
    elements = _elements(chain)
    for e in elements:
        if not e.failure_rate > 0:
            raise ValueError(f"element {e.component_id!r} needs a positive failure rate")
    return np.array(_run(lambda rep: _series_replication(elements, cfg.horizon_years, cfg.seed, rep),
                         cfg, workers))


def simulate_chain(chain, cfg: SimConfig, workers: int = 1) -> SimEstimate:
    return summarize(replicate_chain(chain, cfg, workers), cfg.confidence)


def replicate_parallel_pair(unit, cfg: SimConfig, workers: int = 1) -> np.ndarray:
    if not (unit.failure_rate and unit.failure_rate > 0 and unit.mttr and unit.mttr > 0):
        raise ValueError(f"unit {unit.id!r} needs positive failure_rate and mttr")
    return np.array(_run(lambda rep: _pair_replication(unit, cfg.horizon_years, cfg.seed, rep),
                         cfg, workers))


def simulate_parallel_pair(unit, cfg: SimConfig, workers: int = 1) -> SimEstimate:
    """Downtime of a 1-out-of-2 redundant pair of identical units."""
    return summarize(replicate_parallel_pair(unit, cfg, workers), cfg.confidence)


def simulate_architecture(arch, cfg: SimConfig, basis=None, workers: int = 1) -> dict:
    """Simulate every subsystem of an architecture next to its analytic value.

    In override mode each subsystem is one equivalent element; in graph
    mode every load chain is simulated and the subsystem takes the mean of
    its chains, as the analytic aggregation does.
    """
    from .chains import ChainElement, chains_by_subsystem
    from .kpi import BASIS_GRAPH, BASIS_OVERRIDE
    from .markov import evaluate_chain, series_availability
    from .model import Subsystem

    if basis is None:
        basis = BASIS_OVERRIDE if arch.chain_overrides else BASIS_GRAPH
    groups = {}
    if basis == BASIS_OVERRIDE:
        for subsystem in Subsystem:
            o = arch.chain_overrides.get(subsystem)
            if o is not None:
                groups[subsystem] = [[ChainElement(subsystem.value, o.lambda_eq, o.mttr_eq)]]
    elif basis == BASIS_GRAPH:
        for subsystem, chains in chains_by_subsystem(arch.topology).items():
            if chains:
                groups[subsystem] = [c.elements for c in chains]
    else:
        raise ValueError(f"unknown basis {basis!r}")

    out = []
    for subsystem, chains in groups.items():
        estimates = [simulate_chain(c, cfg, workers) for c in chains]
        analytic = fmean(evaluate_chain(c).annual_downtime for c in chains)
        mean = fmean(e.mean_downtime for e in estimates)
        half = math.sqrt(sum(e.half_width ** 2 for e in estimates)) / len(estimates)
        out.append({
            "subsystem": subsystem.value,
            "analytic_downtime": analytic,
            "mean_downtime": mean,
            "half_width": half,
            "samples": sum(e.samples for e in estimates),
            "delta": mean - analytic,
            "within_half_width": abs(mean - analytic) <= half,
        })
    label = arch.name if basis == BASIS_OVERRIDE else f"{arch.name} (graph)"
    return {
        "architecture": arch.name,
        "basis": basis,
        "label": label,
        "config": {
            "horizon_years": cfg.horizon_years,
            "replications": cfg.replications,
            "seed": cfg.seed,
            "confidence": cfg.confidence,
        },
        "subsystems": out,
    }
