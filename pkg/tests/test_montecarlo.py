import json

import numpy as np
import pytest
from scipy import stats

from oracles import HOURS, pair_downtime_ctmc
from spsavail.chains import ChainElement
from spsavail.markov import evaluate_chain, series_availability
from spsavail.model import Component
from spsavail.montecarlo import (
    SimConfig,
    replicate_chain,
    replicate_parallel_pair,
    simulate_architecture,
    simulate_chain,
    simulate_parallel_pair,
)


@pytest.mark.parametrize("lam, mttr", [(0.1, 8.0), (50.0, 40.0), (0.012, 168.0)])
def test_ctmc_oracle_matches_independent_units(lam, mttr):
    lh = lam / HOURS
    q = lh / (lh + 1 / mttr)
    assert pair_downtime_ctmc(lam, mttr) == pytest.approx(q * q * HOURS, rel=1e-9)


def test_single_breaker():
    cfg = SimConfig(horizon_years=1e4, replications=30, seed=7)
    est = simulate_chain([ChainElement("BRK", 0.01, 4.0)], cfg)
    analytic = series_availability(0.01, 4.0).annual_downtime
    assert analytic == pytest.approx(0.040, abs=1e-4)
    assert abs(est.mean_downtime - analytic) <= est.half_width
    assert est.samples == 30


def test_rare_failures():
    est = simulate_chain([ChainElement("X", 1e-6, 4.0)], SimConfig(1e4, 30, seed=1))
    assert est.mean_downtime < 0.02
    assert est.half_width >= 0


def test_propulsion_a_equivalent_element():
    cfg = SimConfig(horizon_years=1e4, replications=30, seed=3)
    est = simulate_chain([ChainElement("prop", 0.094, 35.085)], cfg)
    assert abs(est.mean_downtime - 3.297) <= max(est.half_width, 0.02 * 3.297)


def test_multi_element_chain_matches_markov():
    chain = [ChainElement("TR", 0.012, 168), ChainElement("LN", 0.056, 8),
             ChainElement("VSC", 0.006, 1), ChainElement("BRK", 0.01, 4)]
    est = simulate_chain(chain, SimConfig(2e4, 30, seed=11))
    analytic = evaluate_chain(chain).annual_downtime
    assert abs(est.mean_downtime - analytic) <= max(est.half_width, 0.02 * analytic)


def test_deterministic_for_seed():
    chain = [ChainElement("a", 0.5, 3.0), ChainElement("b", 0.2, 12.0)]
    cfg = SimConfig(2e3, 5, seed=42)
    assert np.array_equal(replicate_chain(chain, cfg), replicate_chain(chain, cfg))
    other = replicate_chain(chain, SimConfig(2e3, 5, seed=43))
    assert not np.array_equal(replicate_chain(chain, cfg), other)


def test_workers_do_not_change_results():
    chain = [ChainElement("a", 0.5, 3.0), ChainElement("b", 0.2, 12.0)]
    cfg = SimConfig(2e3, 8, seed=5)
    assert np.array_equal(replicate_chain(chain, cfg, workers=1), replicate_chain(chain, cfg, workers=4))
    unit = Component("G", "converter", failure_rate=2.0, mttr=10.0)
    assert np.array_equal(replicate_parallel_pair(unit, cfg), replicate_parallel_pair(unit, cfg, workers=3))


def test_element_order_irrelevant():
    chain = [ChainElement(f"e{i}", 0.05 * (i + 1), 2.0 + i) for i in range(5)]
    cfg = SimConfig(1e3, 10, seed=9)
    ref = replicate_chain(chain, cfg)
    rng = np.random.default_rng(0)
    for _ in range(3):
        perm = [chain[i] for i in rng.permutation(len(chain))]
        assert np.array_equal(replicate_chain(perm, cfg), ref)


def test_permutation_same_distribution_across_seeds():
    chain = [ChainElement(f"e{i}", 0.3, 5.0 + i) for i in range(4)]
    a = np.concatenate([replicate_chain(chain, SimConfig(200, 20, seed=s)) for s in range(5)])
    b = np.concatenate([replicate_chain(chain[::-1], SimConfig(200, 20, seed=100 + s)) for s in range(5)])
    assert stats.ks_2samp(a, b).pvalue > 0.01


@pytest.mark.parametrize("lam, mttr, years", [(0.1, 8.0, 1e6), (50.0, 40.0, 2e3)])
def test_parallel_pair_matches_ctmc(lam, mttr, years):
    unit = Component("U", "converter", failure_rate=lam, mttr=mttr)
    est = simulate_parallel_pair(unit, SimConfig(years, 30, seed=2024))
    oracle = pair_downtime_ctmc(lam, mttr)
    assert abs(est.mean_downtime - oracle) <= max(est.half_width, 0.02 * oracle)


def test_pair_never_worse_than_single():
    unit = Component("U", "converter", failure_rate=20.0, mttr=30.0)
    cfg = SimConfig(500, 10, seed=1)
    pair = replicate_parallel_pair(unit, cfg)
    single = replicate_chain([ChainElement("U#1", 20.0, 30.0)], cfg)
    # streams differ between the two runs, so compare means
    assert pair.mean() <= single.mean()


def test_pair_of_near_perfect_units():
    unit = Component("U", "converter", failure_rate=1e-9, mttr=1.0)
    est = simulate_parallel_pair(unit, SimConfig(1e3, 5, seed=0))
    assert est.mean_downtime == 0.0 and est.half_width == 0.0


@pytest.mark.slow
def test_confidence_interval_coverage():
    chain = [ChainElement("a", 0.2, 6.0)]
    analytic = evaluate_chain(chain).annual_downtime
    hits = 0
    for seed in range(50):
        est = simulate_chain(chain, SimConfig(2e3, 30, seed=seed))
        lo, hi = est.interval
        hits += lo <= analytic <= hi
    assert hits >= 45


@pytest.mark.parametrize("kwargs", [
    {"replications": 1}, {"replications": 0}, {"horizon_years": 0}, {"horizon_years": -1.0},
    {"confidence": 1.0}, {"seed": -1}, {"replications": 2.5},
])
def test_invalid_config(kwargs):
    with pytest.raises(ValueError):
        SimConfig(**kwargs)


def test_few_replications_use_student_t():
    chain = [ChainElement("a", 0.5, 3.0)]
    samples = replicate_chain(chain, SimConfig(1e3, 5, seed=1))
    est = simulate_chain(chain, SimConfig(1e3, 5, seed=1))
    expected = stats.t.ppf(0.975, 4) * samples.std(ddof=1) / np.sqrt(5)
    assert est.half_width == pytest.approx(expected, rel=1e-12)


def test_empty_chain_rejected():
    with pytest.raises(ValueError):
        simulate_chain([], SimConfig())


def test_simulate_architecture_override(presets):
    res = simulate_architecture(presets["C"].architecture, SimConfig(2e3, 10, seed=42))
    assert res["basis"] == "override" and res["label"] == "C"
    assert len(res["subsystems"]) == 5
    for s in res["subsystems"]:
        assert s["delta"] == pytest.approx(s["mean_downtime"] - s["analytic_downtime"])
    json.dumps(res)


def test_simulate_architecture_graph(presets):
    res = simulate_architecture(presets["A"].architecture, SimConfig(5e3, 10, seed=1), basis="graph")
    assert res["label"] == "A (graph)"
    for s in res["subsystems"]:
        assert abs(s["delta"]) <= max(3 * s["half_width"], 0.05 * s["analytic_downtime"])
