"""Domain types for shipboard power system topologies.

Units used everywhere in the package:

* failure rates in failures per year
* repair and intervention times in hours
* weights in tonnes, volumes in cubic metres

The only place a per-year rate meets a per-hour rate is :func:`per_hour`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Optional

import networkx as nx

HOURS_PER_YEAR = 8760.0

LINE_RATE_PER_METER = 0.001

TRANSFER_SWITCH_TIME_H = 0.5
TIE_BREAKER_TIME_H = 1.0 / 60.0


def per_hour(rate_per_year: float) -> float:
    """Convert a failure rate from failures/year to failures/hour."""
    return rate_per_year / HOURS_PER_YEAR


class ComponentKind(str, enum.Enum):
    TRANSFORMER = "transformer"
    LINE = "line"
    BUS = "bus"
    CONVERTER = "converter"
    BREAKER = "breaker"
    TRANSFER_SWITCH = "transfer_switch"
    TIE_BREAKER = "tie_breaker"
    SOURCE = "source"
    LOAD = "load"

    @property
    def is_infrastructure(self) -> bool:
        """True for the kinds whose failures interrupt supply."""
        return self in INFRASTRUCTURE_KINDS

    @property
    def is_switch(self) -> bool:
        return self in (ComponentKind.TRANSFER_SWITCH, ComponentKind.TIE_BREAKER)


INFRASTRUCTURE_KINDS = frozenset({
    ComponentKind.TRANSFORMER,
    ComponentKind.LINE,
    ComponentKind.BUS,
    ComponentKind.CONVERTER,
    ComponentKind.BREAKER,
})

# (failures/year, MTTR hours); the line rate is per metre of cable
DEFAULT_RELIABILITY = {
    ComponentKind.TRANSFORMER: (0.012, 168.0),
    ComponentKind.LINE: (LINE_RATE_PER_METER, 8.0),
    ComponentKind.BUS: (0.01, 8.0),
    ComponentKind.CONVERTER: (0.006, 1.0),
    ComponentKind.BREAKER: (0.01, 4.0),
}

# breakers and switches sit inside switchboards and are not weighed separately
_NOT_COUNTED_BY_DEFAULT = frozenset({
    ComponentKind.BREAKER,
    ComponentKind.TRANSFER_SWITCH,
    ComponentKind.TIE_BREAKER,
})


class Subsystem(str, enum.Enum):
    AC_GENERATION = "ac_generation"
    PROPULSION = "propulsion"
    EXTRA_PROPULSIVE_LOADS = "extra_propulsive_loads"
    PULSE_POWER_LOADS = "pulse_power_loads"
    DC_GENERATION = "dc_generation"

    @property
    def label(self) -> str:
        return _SUBSYSTEM_LABELS[self]

    @classmethod
    def parse(cls, text: str) -> "Subsystem":
        """Accept enum values, member names or display labels, case-insensitive."""
        key = text.strip().lower().replace("-", "_").replace(" ", "_")
        for member in cls:
            if key in (member.value, member.name.lower(),
                       member.label.lower().replace(" ", "_")):
                return member
        aliases = {"ppl": cls.PULSE_POWER_LOADS, "extra": cls.EXTRA_PROPULSIVE_LOADS}
        if key in aliases:
            return aliases[key]
        raise ValueError(f"unknown subsystem {text!r}")


_SUBSYSTEM_LABELS = {
    Subsystem.AC_GENERATION: "AC generation",
    Subsystem.PROPULSION: "Propulsion",
    Subsystem.EXTRA_PROPULSIVE_LOADS: "Extra propulsive loads",
    Subsystem.PULSE_POWER_LOADS: "Pulse power loads",
    Subsystem.DC_GENERATION: "DC generation",
}

# SAIDI customers used when a configuration does not name its own
DEFAULT_CUSTOMERS = (
    Subsystem.PROPULSION,
    Subsystem.EXTRA_PROPULSIVE_LOADS,
    Subsystem.PULSE_POWER_LOADS,
)


def line_failure_rate(length_m: float) -> float:
    """Failure rate (failures/year) of a cable of the given length in metres."""
    if not length_m > 0:
        raise ValueError(f"line length must be positive, got {length_m!r}")
    return LINE_RATE_PER_METER * length_m


def _check_positive(name, value):
    if value is not None and not value > 0:
        raise ValueError(f"{name} must be positive, got {value!r}")


@dataclass(frozen=True)
class Component:
    """One element of the grid.

    Infrastructure kinds always carry a failure rate and MTTR; when omitted
    they are filled from the default reliability table (lines need
    ``length_m``). Weight, volume and TRL are optional catalog data.
    """

    id: str
    kind: ComponentKind
    failure_rate: Optional[float] = None
    mttr: Optional[float] = None
    length_m: Optional[float] = None
    weight: Optional[float] = None
    volume: Optional[float] = None
    trl: Optional[int] = None
    countable: Optional[bool] = None
    meta: Mapping[str, str] = field(default_factory=dict, hash=False, compare=True)

    def __post_init__(self):
        kind = ComponentKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if not self.id or not isinstance(self.id, str):
            raise ValueError(f"component id must be a non-empty string, got {self.id!r}")
        if kind is ComponentKind.LINE and self.length_m is None and self.failure_rate is None:
            raise ValueError(f"line {self.id!r} needs length_m or an explicit failure_rate")
        _check_positive("length_m", self.length_m)
        if kind.is_infrastructure:
            rate, mttr = DEFAULT_RELIABILITY[kind]
            if self.failure_rate is None:
                if kind is ComponentKind.LINE:
                    rate = line_failure_rate(self.length_m)
                object.__setattr__(self, "failure_rate", float(rate))
            if self.mttr is None:
                object.__setattr__(self, "mttr", float(mttr))
        _check_positive("failure_rate", self.failure_rate)
        _check_positive("mttr", self.mttr)
        for name in ("weight", "volume"):
            value = getattr(self, name)
            if value is not None and value < 0:
                raise ValueError(f"{name} of {self.id!r} must be >= 0, got {value!r}")
        if self.trl is not None and not (isinstance(self.trl, int) and 1 <= self.trl <= 9):
            raise ValueError(f"trl of {self.id!r} must be an integer 1-9, got {self.trl!r}")
        if self.countable is None:
            object.__setattr__(self, "countable", kind not in _NOT_COUNTED_BY_DEFAULT)
        object.__setattr__(self, "meta", dict(self.meta))

    @property
    def repair_rate(self) -> Optional[float]:
        """Repair rate in repairs/hour, derived from the MTTR."""
        return None if self.mttr is None else 1.0 / self.mttr

    def has_default_reliability(self) -> bool:
        if not self.kind.is_infrastructure:
            return self.failure_rate is None and self.mttr is None
        rate, mttr = DEFAULT_RELIABILITY[self.kind]
        if self.kind is ComponentKind.LINE:
            if self.length_m is None:
                return False
            rate = line_failure_rate(self.length_m)
        return self.failure_rate == rate and self.mttr == mttr


@dataclass(frozen=True)
class Edge:
    src: str
    dst: str
    normally_open: bool = False


@dataclass(frozen=True)
class Bypass:
    """Switching action that restores supply around ``protects``.

    Chains listing any protected component use ``intervention_h`` as that
    component's effective MTTR. ``applies_to`` restricts the bypass to the
    named loads; when empty the bypass applies to chains whose supply path
    runs through the switch, or, for tie-breakers (never on a normal path),
    to every chain containing a protected component.
    """

    switch: str
    protects: tuple
    intervention_h: float
    applies_to: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "protects", tuple(self.protects))
        object.__setattr__(self, "applies_to", tuple(self.applies_to))
        _check_positive("intervention_h", self.intervention_h)


@dataclass(frozen=True)
class LoadTag:
    id: str
    subsystem: Subsystem

    def __post_init__(self):
        object.__setattr__(self, "subsystem", Subsystem(self.subsystem))


@dataclass(frozen=True)
class Topology:
    """Component graph with explicit source and load roles.

    ``sources`` are the entry points where generation is pooled (usually
    main switchboards); supply chains end there. ``loads`` are the main
    elements, consumers or generating units, analysed for availability.
    Edges point in the supply direction. Tie-breakers and edges flagged
    ``normally_open`` carry no power in the normal configuration.
    """

    name: str
    components: tuple
    edges: tuple = ()
    sources: tuple = ()
    loads: tuple = ()
    bypasses: tuple = ()

    def __post_init__(self):
        for attr in ("components", "edges", "sources", "loads", "bypasses"):
            object.__setattr__(self, attr, tuple(getattr(self, attr)))

    @cached_property
    def by_id(self) -> dict:
        return {c.id: c for c in self.components}

    def component(self, component_id: str) -> Component:
        return self.by_id[component_id]

    @cached_property
    def load_ids(self) -> tuple:
        return tuple(tag.id for tag in self.loads)

    def subsystem_of(self, load_id: str) -> Subsystem:
        for tag in self.loads:
            if tag.id == load_id:
                return tag.subsystem
        raise KeyError(load_id)

    @cached_property
    def normal_graph(self) -> nx.DiGraph:
        """Graph of energised connections with tie-breakers open."""
        g = nx.DiGraph()
        for c in self.components:
            if c.kind is not ComponentKind.TIE_BREAKER:
                g.add_node(c.id)
        for e in self.edges:
            if e.normally_open or e.src not in g or e.dst not in g:
                continue
            g.add_edge(e.src, e.dst)
        return g

    def supply_paths(self, load_id: str) -> list:
        """All normal-configuration paths from ``load_id`` to a source.

        Paths follow edges in either orientation (generating units feed
        towards their switchboard, consumers are fed from it) but never in
        mixed orientation, and never pass through another source or load.
        Each path is returned as a list of ids starting at the load.
        """
        g = self.normal_graph
        if load_id not in g:
            return []
        blocked = (set(self.sources) | set(self.load_ids)) - {load_id}
        paths = []
        for source in self.sources:
            if source == load_id or source not in g:
                continue
            inner = g.subgraph((set(g.nodes) - blocked) | {source})
            for path in nx.all_simple_paths(inner, source, load_id):
                paths.append(list(reversed(path)))
            for path in nx.all_simple_paths(inner, load_id, source):
                paths.append(list(path))
        return paths


@dataclass
class Violation:
    code: str
    message: str
    ids: tuple = ()


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return bool(self.violations)

    def __len__(self):
        return len(self.violations)

    def add(self, code, message, *ids):
        self.violations.append(Violation(code, message, tuple(ids)))

    def format(self) -> str:
        return "\n".join(f"{v.code}: {v.message}" for v in self.violations)


def validate_topology(t: Topology) -> ValidationReport:
    """Check structural invariants; violations are returned, not raised."""
    report = ValidationReport()
    seen = set()
    for c in t.components:
        if c.id in seen:
            report.add("duplicate-id", f"duplicate component id {c.id!r}", c.id)
        seen.add(c.id)

    for e in t.edges:
        for end in (e.src, e.dst):
            if end not in seen:
                report.add("unknown-id", f"edge {e.src!r} -> {e.dst!r} references unknown id {end!r}", end)
        if e.src == e.dst:
            report.add("self-loop", f"self-loop on {e.src!r}", e.src)

    for s in t.sources:
        if s not in seen:
            report.add("unknown-id", f"source {s!r} is not a component", s)

    load_seen = set()
    for tag in t.loads:
        if tag.id not in seen:
            report.add("unknown-id", f"load {tag.id!r} is not a component", tag.id)
        if tag.id in load_seen:
            report.add("duplicate-load", f"load {tag.id!r} is tagged more than once", tag.id)
        load_seen.add(tag.id)

    for b in t.bypasses:
        sw = t.by_id.get(b.switch)
        if sw is None:
            report.add("unknown-id", f"bypass switch {b.switch!r} is not a component", b.switch)
        elif not sw.kind.is_switch:
            report.add("bad-bypass-switch",
                       f"bypass switch {b.switch!r} is a {sw.kind.value}, not a transfer switch or tie-breaker",
                       b.switch)
        for pid in b.protects + b.applies_to:
            if pid not in seen:
                report.add("unknown-id", f"bypass via {b.switch!r} references unknown id {pid!r}", pid)

    for tag in t.loads:
        if tag.id in seen and not t.supply_paths(tag.id):
            report.add("unreachable-load",
                       f"load {tag.id!r} is not reachable from any source with tie-breakers open",
                       tag.id)
    return report


def components_of_kind(t: Topology, kind: ComponentKind) -> list:
    return [c for c in t.components if c.kind is ComponentKind(kind)]


def iter_counted(t: Topology) -> Iterable[Component]:
    return (c for c in t.components if c.countable)
