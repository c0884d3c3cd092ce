import pytest

from spsavail.chains import ChainElement, ReliabilityChain, chains_by_subsystem, derive_chain
from spsavail.errors import AmbiguityError, NotFoundError
from spsavail.markov import equivalent_failure_rate, equivalent_mttr
from spsavail.model import (
    TIE_BREAKER_TIME_H,
    TRANSFER_SWITCH_TIME_H,
    Bypass,
    Component,
    Edge,
    LoadTag,
    Subsystem,
    Topology,
)


def _ids(chain):
    return sorted(e.component_id for e in chain.elements)


def test_ppl_chain_in_a_uses_transfer_switch_time(presets):
    chain = derive_chain(presets["A"].topology, "PPL1")
    assert _ids(chain) == ["BRK_PPL1", "BUS_PPL1", "LN_PPL1", "MSB_DC1"]
    by_id = {e.component_id: e for e in chain.elements}
    for cid in ("LN_PPL1", "MSB_DC1"):
        assert by_id[cid].effective_mttr == pytest.approx(0.5)
        assert by_id[cid].bypassed_by == "TS_PPL1"
    assert by_id["BUS_PPL1"].effective_mttr == 8
    assert by_id["BRK_PPL1"].bypassed_by is None
    # bypass never changes failure rates
    assert by_id["LN_PPL1"].failure_rate == pytest.approx(0.03)


def test_bypass_constants():
    assert TRANSFER_SWITCH_TIME_H == 0.5
    assert TIE_BREAKER_TIME_H == pytest.approx(1 / 60)


def test_one_hop_chain():
    t = Topology("one", [Component("SRC", "source"), Component("BRK", "breaker"), Component("L", "load")],
                 [Edge("SRC", "BRK"), Edge("BRK", "L")], ["SRC"], [LoadTag("L", "propulsion")])
    chain = derive_chain(t, "L")
    assert [(e.component_id, e.failure_rate, e.effective_mttr) for e in chain] == [("BRK", 0.01, 4.0)]


def _tie_topology(bypass):
    comps = [Component("MSB1", "bus"), Component("MSB2", "bus"), Component("TB", "tie_breaker"),
             Component("BUS", "bus"), Component("BRK", "breaker"), Component("L", "load")]
    edges = [Edge("MSB1", "TB"), Edge("TB", "MSB2"), Edge("MSB1", "BUS"), Edge("BUS", "BRK"), Edge("BRK", "L")]
    return Topology("tie", comps, edges, ["MSB1", "MSB2"], [LoadTag("L", "propulsion")], bypass)


def test_tie_breaker_bypass_uses_one_minute():
    t = _tie_topology([Bypass("TB", ("BUS",), TIE_BREAKER_TIME_H)])
    by_id = {e.component_id: e for e in derive_chain(t, "L")}
    assert by_id["BUS"].effective_mttr == pytest.approx(1 / 60)
    assert by_id["BUS"].bypassed_by == "TB"
    assert by_id["MSB1"].effective_mttr == 8


def test_bypass_does_not_cover_adjacent_breaker():
    t = _tie_topology([Bypass("TB", ("BUS",), TIE_BREAKER_TIME_H)])
    by_id = {e.component_id: e for e in derive_chain(t, "L")}
    assert by_id["BRK"].bypassed_by is None and by_id["BRK"].effective_mttr == 4


def test_applies_to_restricts_bypass():
    t = _tie_topology([Bypass("TB", ("BUS",), 0.5, applies_to=("OTHER",))])
    by_id = {e.component_id: e for e in derive_chain(t, "L")}
    assert by_id["BUS"].bypassed_by is None


def test_transfer_switch_bypass_scoped_to_its_path(presets):
    # MSB_DC1 is bypassable for PPL1 but not for the ESS connected to it
    ess = {e.component_id: e for e in derive_chain(presets["A"].topology, "ESS1")}
    assert ess["MSB_DC1"].bypassed_by is None
    assert ess["MSB_DC1"].effective_mttr == 8


def test_unknown_load():
    with pytest.raises(NotFoundError):
        derive_chain(_tie_topology([]), "NOPE")


def test_ambiguous_supply():
    comps = [Component("MSB", "bus"), Component("B1", "breaker"), Component("B2", "breaker"),
             Component("L", "load")]
    edges = [Edge("MSB", "B1"), Edge("MSB", "B2"), Edge("B1", "L"), Edge("B2", "L")]
    t = Topology("amb", comps, edges, ["MSB"], [LoadTag("L", "propulsion")])
    with pytest.raises(AmbiguityError):
        derive_chain(t, "L")
    t2 = Topology("ok", comps, edges[:3] + [Edge("B2", "L", normally_open=True)], ["MSB"],
                  [LoadTag("L", "propulsion")])
    assert _ids(derive_chain(t2, "L")) == ["B1", "MSB"]


def test_generator_chain_runs_towards_switchboard(presets):
    chain = derive_chain(presets["A"].topology, "SG1")
    assert _ids(chain) == ["BRK_SG1", "LN_SG1", "MSB_MV1"]


def test_chains_by_subsystem_groups(preset):
    grouped = chains_by_subsystem(preset.topology)
    assert set(grouped) == set(Subsystem)
    assert all(grouped[s] for s in Subsystem)
    loads = [c.load_id for chains in grouped.values() for c in chains]
    assert sorted(loads) == sorted(preset.topology.load_ids)


def test_subsystem_without_loads_is_empty():
    grouped = chains_by_subsystem(_tie_topology([]))
    assert grouped[Subsystem.PULSE_POWER_LOADS] == []
    assert len(grouped[Subsystem.PROPULSION]) == 1


def test_zonal_ppl_chains_avoid_main_network(presets):
    t = presets["C"].topology
    for chain in chains_by_subsystem(t)[Subsystem.PULSE_POWER_LOADS]:
        for e in chain:
            comp = t.component(e.component_id)
            assert comp.meta.get("role") != "msb"
            assert comp.kind.value != "line"


def test_derive_chain_deterministic(preset):
    t = preset.topology
    for load in t.load_ids:
        assert derive_chain(t, load).normalized() == derive_chain(t, load).normalized()


def test_chain_rejects_empty_and_duplicates():
    with pytest.raises(ValueError):
        ReliabilityChain("L", [])
    e = ChainElement("x", 0.01, 4)
    with pytest.raises(ValueError):
        ReliabilityChain("L", [e, e])


def test_graph_chains_reproduce_exact_table_rows(presets):
    """Rows whose chain composition is implied by the tabulated numbers."""
    cases = [
        ("A", "LOAD1", 0.020, 6.000),
        ("A", "PPL1", 0.060, 2.333),
        ("B", "LOAD1", 0.026, 4.846),
        ("B", "PPL3", 0.060, 2.333),
        ("C", "PPL_a", 0.020, 6.000),
        ("C", "ESS_b", 0.026, 4.846),
        ("C", "LOAD2", 0.026, 4.846),
    ]
    for name, load, lam, mttr in cases:
        chain = derive_chain(presets[name].topology, load)
        assert equivalent_failure_rate(chain) == pytest.approx(lam, abs=5e-4)
        assert equivalent_mttr(chain) == pytest.approx(mttr, abs=5e-4)
