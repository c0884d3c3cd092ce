"""YAML configuration files for topologies and component catalogs.

Topology file (``schema_version: 1``)::

    schema_version: 1
    name: A
    components:
      - {id: MSB1, kind: bus}
      - {id: L1, kind: line, length_m: 30}
      - {id: TS1, kind: transfer_switch}
      - {id: PPL1, kind: load, meta: {voltage: 1 kV dc}}
    edges:
      - [MSB1, L1]
      - [L1, TS1]
      - {from: MSB2, to: TS1, normally_open: true}
      - [TS1, PPL1]
    sources: [MSB1, MSB2]
    loads:
      - {id: PPL1, subsystem: pulse_power_loads}
    bypasses:
      - {switch: TS1, protects: [L1, MSB1], intervention: 30 min}
    customers: [propulsion, extra_propulsive_loads, pulse_power_loads]
    chain_overrides:
      pulse_power_loads: {lambda_eq: 0.060, mttr_eq: 2.333}

Component keys: ``id``, ``kind``, and optionally ``failure_rate``
(failures/year), ``mttr`` (hours), ``length_m``, ``weight`` (t),
``volume`` (m3), ``trl``, ``countable`` and a free-form ``meta`` mapping.
Intervention times accept ``"30 min"``, ``"1 minute"``, ``"0.5 h"`` or a
bare number of hours.

Catalog file::

    schema_version: 1
    components:
      SG1: {weight: 60.0, volume: 45.0, trl: 9}
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

import yaml

from .errors import ConfigError
from .model import (
    DEFAULT_CUSTOMERS,
    Bypass,
    Component,
    ComponentKind,
    Edge,
    LoadTag,
    Subsystem,
    Topology,
)

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class ChainOverride:
    """Subsystem-level equivalent parameters entered directly."""

    lambda_eq: float
    mttr_eq: float

    def __post_init__(self):
        if not self.lambda_eq > 0 or not self.mttr_eq > 0:
            raise ValueError("override lambda_eq and mttr_eq must be positive")


@dataclass(frozen=True)
class CatalogEntry:
    weight: Optional[float] = None
    volume: Optional[float] = None
    trl: Optional[int] = None


@dataclass(frozen=True)
class Catalog:
    entries: dict = field(default_factory=dict)
    documented_totals: Optional[tuple] = None  # (weight t, volume m3)
    note: str = ""

    def apply(self, t: Topology) -> Topology:
        """Copy catalog weight/volume/TRL onto the topology's components."""
        comps = []
        for c in t.components:
            entry = self.entries.get(c.id)
            if entry is None:
                comps.append(c)
                continue
            comps.append(replace(
                c,
                weight=entry.weight if entry.weight is not None else c.weight,
                volume=entry.volume if entry.volume is not None else c.volume,
                trl=entry.trl if entry.trl is not None else c.trl,
            ))
        return replace(t, components=tuple(comps))


@dataclass(frozen=True)
class Architecture:
    """A parsed topology file: the graph plus analysis settings."""

    topology: Topology
    customers: tuple = DEFAULT_CUSTOMERS
    chain_overrides: dict = field(default_factory=dict, hash=False)
    catalog: Optional[Catalog] = field(default=None, compare=False, hash=False)

    @property
    def name(self) -> str:
        return self.topology.name


# -- YAML loading with positions ---------------------------------------------

class _Map(dict):
    line = None
    column = None


class _Seq(list):
    line = None
    column = None


class _Loader(yaml.SafeLoader):
    pass


def _construct_map(loader, node):
    m = _Map(loader.construct_mapping(node, deep=True))
    m.line, m.column = node.start_mark.line + 1, node.start_mark.column + 1
    return m


def _construct_seq(loader, node):
    s = _Seq(loader.construct_sequence(node, deep=True))
    s.line, s.column = node.start_mark.line + 1, node.start_mark.column + 1
    return s


_Loader.add_constructor(yaml.resolver.BaseResolver.DEFAULT_MAPPING_TAG, _construct_map)
_Loader.add_constructor(yaml.resolver.BaseResolver.DEFAULT_SEQUENCE_TAG, _construct_seq)


def _load_yaml(text: str, source: Optional[str]):
    try:
        return yaml.load(text, Loader=_Loader)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark or exc.context_mark
        raise ConfigError(exc.problem or str(exc),
                          line=mark.line + 1 if mark else None,
                          column=mark.column + 1 if mark else None,
                          source=source) from None
    except yaml.YAMLError as exc:
        raise ConfigError(str(exc), source=source) from None


class _Ctx:
    def __init__(self, source):
        self.source = source

    def fail(self, message, node=None):
        raise ConfigError(message, line=getattr(node, "line", None),
                          column=getattr(node, "column", None), source=self.source)

    def mapping(self, node, what):
        if not isinstance(node, dict):
            self.fail(f"{what} must be a mapping", node)
        return node

    def sequence(self, node, what):
        if node is None:
            return []
        if not isinstance(node, list):
            self.fail(f"{what} must be a list", node)
        return node


_DURATION = re.compile(r"^\s*([0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)\s*([a-zA-Z]*)\s*$")
_MINUTES = {"m", "min", "mins", "minute", "minutes"}
_HOURS = {"", "h", "hr", "hrs", "hour", "hours"}


def parse_duration_hours(value) -> float:
    """Parse an intervention time into hours."""
    if isinstance(value, bool):
        raise ValueError(f"bad duration {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    match = _DURATION.match(str(value))
    if not match:
        raise ValueError(f"bad duration {value!r}")
    number, unit = float(match.group(1)), match.group(2).lower()
    if unit in _MINUTES:
        return number / 60.0
    if unit in _HOURS:
        return number
    raise ValueError(f"unknown duration unit {unit!r} in {value!r}")


def _check_version(ctx, doc):
    version = doc.get("schema_version")
    if version is None:
        ctx.fail("missing schema_version", doc)
    if version != SCHEMA_VERSION:
        ctx.fail(f"unsupported schema_version {version!r} (expected {SCHEMA_VERSION})", doc)


_COMPONENT_KEYS = {"id", "kind", "failure_rate", "mttr", "length_m", "weight",
                   "volume", "trl", "countable", "meta"}


def _parse_component(ctx, node):
    ctx.mapping(node, "component")
    unknown = set(node) - _COMPONENT_KEYS
    if unknown:
        ctx.fail(f"unknown component keys: {', '.join(sorted(unknown))}", node)
    if "id" not in node or "kind" not in node:
        ctx.fail("component needs 'id' and 'kind'", node)
    try:
        kind = ComponentKind(str(node["kind"]).lower())
    except ValueError:
        ctx.fail(f"unknown component kind {node['kind']!r}", node)
    meta = node.get("meta") or {}
    ctx.mapping(meta, "meta")
    try:
        return Component(
            id=str(node["id"]),
            kind=kind,
            failure_rate=_opt_float(node.get("failure_rate")),
            mttr=_opt_float(node.get("mttr")),
            length_m=_opt_float(node.get("length_m")),
            weight=_opt_float(node.get("weight")),
            volume=_opt_float(node.get("volume")),
            trl=node.get("trl"),
            countable=node.get("countable"),
            meta={str(k): str(v) for k, v in meta.items()},
        )
    except (TypeError, ValueError) as exc:
        ctx.fail(f"component {node.get('id')!r}: {exc}", node)


def _opt_float(value):
    if value is None:
        return None
    if isinstance(value, bool):
        raise ValueError(f"expected a number, got {value!r}")
    return float(value)


def _parse_edge(ctx, node):
    if isinstance(node, list):
        if len(node) != 2:
            ctx.fail("edge list form must be [from, to]", node)
        return Edge(str(node[0]), str(node[1]))
    ctx.mapping(node, "edge")
    if "from" not in node or "to" not in node:
        ctx.fail("edge needs 'from' and 'to'", node)
    return Edge(str(node["from"]), str(node["to"]), bool(node.get("normally_open", False)))


def _parse_subsystem(ctx, value, node):
    try:
        return Subsystem.parse(str(value))
    except ValueError as exc:
        ctx.fail(str(exc), node)


def parse_architecture(text: str, source: Optional[str] = None) -> Architecture:
    ctx = _Ctx(source)
    doc = _load_yaml(text, source)
    ctx.mapping(doc, "top level")
    _check_version(ctx, doc)
    if "name" not in doc:
        ctx.fail("missing 'name'", doc)

    components = [_parse_component(ctx, n) for n in ctx.sequence(doc.get("components"), "components")]
    edges = [_parse_edge(ctx, n) for n in ctx.sequence(doc.get("edges"), "edges")]
    sources = [str(s) for s in ctx.sequence(doc.get("sources"), "sources")]

    loads = []
    for n in ctx.sequence(doc.get("loads"), "loads"):
        ctx.mapping(n, "load")
        if "id" not in n or "subsystem" not in n:
            ctx.fail("load needs 'id' and 'subsystem'", n)
        loads.append(LoadTag(str(n["id"]), _parse_subsystem(ctx, n["subsystem"], n)))

    bypasses = []
    for n in ctx.sequence(doc.get("bypasses"), "bypasses"):
        ctx.mapping(n, "bypass")
        for key in ("switch", "protects", "intervention"):
            if key not in n:
                ctx.fail(f"bypass needs '{key}'", n)
        try:
            hours = parse_duration_hours(n["intervention"])
            bypasses.append(Bypass(
                switch=str(n["switch"]),
                protects=tuple(str(p) for p in ctx.sequence(n["protects"], "protects")),
                intervention_h=hours,
                applies_to=tuple(str(p) for p in ctx.sequence(n.get("applies_to"), "applies_to")),
            ))
        except ValueError as exc:
            ctx.fail(str(exc), n)

    customers = DEFAULT_CUSTOMERS
    if "customers" in doc:
        node = ctx.sequence(doc["customers"], "customers")
        customers = tuple(_parse_subsystem(ctx, c, node) for c in node)
        if not customers:
            ctx.fail("customers must not be empty", node)

    overrides = {}
    raw = doc.get("chain_overrides") or {}
    ctx.mapping(raw, "chain_overrides")
    for key, n in raw.items():
        ctx.mapping(n, "chain override")
        try:
            overrides[_parse_subsystem(ctx, key, raw)] = ChainOverride(
                float(n["lambda_eq"]), float(n["mttr_eq"]))
        except (KeyError, TypeError, ValueError) as exc:
            ctx.fail(f"chain override {key!r}: {exc}", n)

    topology = Topology(str(doc["name"]), components, edges, sources, loads, bypasses)
    return Architecture(topology, customers, overrides)


def parse_catalog(text: str, source: Optional[str] = None) -> Catalog:
    ctx = _Ctx(source)
    doc = _load_yaml(text, source)
    ctx.mapping(doc, "top level")
    _check_version(ctx, doc)
    entries = {}
    comps = ctx.mapping(doc.get("components") or {}, "components")
    for cid, n in comps.items():
        ctx.mapping(n, f"catalog entry {cid!r}")
        trl = n.get("trl")
        if trl is not None and not (isinstance(trl, int) and 1 <= trl <= 9):
            ctx.fail(f"trl of {cid!r} must be an integer 1-9", n)
        try:
            entries[str(cid)] = CatalogEntry(_opt_float(n.get("weight")), _opt_float(n.get("volume")), trl)
        except ValueError as exc:
            ctx.fail(f"catalog entry {cid!r}: {exc}", n)
    totals = doc.get("documented_totals")
    documented = None
    if totals is not None:
        ctx.mapping(totals, "documented_totals")
        documented = (float(totals["weight_t"]), float(totals["volume_m3"]))
    return Catalog(entries, documented, str(doc.get("note", "")))


def load_architecture(path, catalog_path=None) -> Architecture:
    path = Path(path)
    arch = parse_architecture(path.read_text(), source=str(path))
    if catalog_path is not None:
        catalog_path = Path(catalog_path)
        arch = with_catalog(arch, parse_catalog(catalog_path.read_text(), source=str(catalog_path)))
    return arch


def with_catalog(arch: Architecture, catalog: Catalog) -> Architecture:
    return replace(arch, topology=catalog.apply(arch.topology), catalog=catalog)


# -- serialisation ------------------------------------------------------------

def _fmt_hours(hours: float) -> str:
    return f"{hours!r} h"


def _component_doc(c: Component) -> dict:
    d = {"id": c.id, "kind": c.kind.value}
    if c.length_m is not None:
        d["length_m"] = c.length_m
    if not c.has_default_reliability():
        if c.failure_rate is not None:
            d["failure_rate"] = c.failure_rate
        if c.mttr is not None:
            d["mttr"] = c.mttr
    for key in ("weight", "volume", "trl"):
        value = getattr(c, key)
        if value is not None:
            d[key] = value
    d["countable"] = c.countable
    if c.meta:
        d["meta"] = dict(c.meta)
    return d


def architecture_to_dict(arch: Architecture) -> dict:
    t = arch.topology
    doc = {
        "schema_version": SCHEMA_VERSION,
        "name": t.name,
        "components": [_component_doc(c) for c in t.components],
        "edges": [
            {"from": e.src, "to": e.dst, "normally_open": True} if e.normally_open else [e.src, e.dst]
            for e in t.edges
        ],
        "sources": list(t.sources),
        "loads": [{"id": tag.id, "subsystem": tag.subsystem.value} for tag in t.loads],
        "bypasses": [],
        "customers": [s.value for s in arch.customers],
    }
    for b in t.bypasses:
        entry = {"switch": b.switch, "protects": list(b.protects), "intervention": _fmt_hours(b.intervention_h)}
        if b.applies_to:
            entry["applies_to"] = list(b.applies_to)
        doc["bypasses"].append(entry)
    if arch.chain_overrides:
        doc["chain_overrides"] = {
            s.value: {"lambda_eq": o.lambda_eq, "mttr_eq": o.mttr_eq}
            for s, o in arch.chain_overrides.items()
        }
    return doc


def dump_architecture(arch: Architecture) -> str:
    return yaml.safe_dump(architecture_to_dict(arch), sort_keys=False, default_flow_style=None)
