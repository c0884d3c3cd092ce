"""Series reliability chains for each load of a topology."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import AmbiguityError, NotFoundError
from .model import ComponentKind, Subsystem, Topology


@dataclass(frozen=True)
class ChainElement:
    component_id: str
    failure_rate: float
    effective_mttr: float
    bypassed_by: Optional[str] = None

    def __post_init__(self):
        if not self.failure_rate > 0:
            raise ValueError(f"failure_rate must be positive, got {self.failure_rate!r}")
        if not self.effective_mttr > 0:
            raise ValueError(f"effective_mttr must be positive, got {self.effective_mttr!r}")


@dataclass(frozen=True)
class ReliabilityChain:
    load_id: str
    elements: tuple

    def __post_init__(self):
        elements = tuple(self.elements)
        if not elements:
            raise ValueError(f"chain for {self.load_id!r} has no elements")
        ids = [e.component_id for e in elements]
        if len(set(ids)) != len(ids):
            raise ValueError(f"chain for {self.load_id!r} repeats a component")
        object.__setattr__(self, "elements", elements)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def normalized(self) -> "ReliabilityChain":
        """Same chain with elements sorted by component id."""
        return ReliabilityChain(self.load_id, sorted(self.elements, key=lambda e: e.component_id))


def _bypass_for(t: Topology, load_id: str, path: list, component_id: str):
    on_path = set(path)
    for b in t.bypasses:
        if component_id not in b.protects:
            continue
        if b.applies_to:
            if load_id in b.applies_to:
                return b
            continue
        switch = t.by_id.get(b.switch)
        if b.switch in on_path or (switch is not None and switch.kind is ComponentKind.TIE_BREAKER):
            return b
    return None


def derive_chain(t: Topology, load_id: str) -> ReliabilityChain:
    """Series chain of infrastructure elements between a load and its source.

    The load itself is excluded; switches on the path carry no failure rate
    and are skipped. Elements covered by an applicable bypass get the
    switch intervention time as effective MTTR.
    """
    if load_id not in t.load_ids:
        raise NotFoundError(f"unknown load {load_id!r} in topology {t.name!r}")
    paths = t.supply_paths(load_id)
    if not paths:
        raise NotFoundError(f"load {load_id!r} has no normal-configuration supply path")
    if len(paths) > 1:
        shown = "; ".join(" -> ".join(reversed(p)) for p in paths[:4])
        raise AmbiguityError(
            f"load {load_id!r} has {len(paths)} normal supply paths ({shown}); "
            "open a tie-breaker or mark alternates normally_open")
    path = paths[0]
    elements = []
    for cid in path[1:]:
        comp = t.component(cid)
        if not comp.kind.is_infrastructure:
            continue
        bypass = _bypass_for(t, load_id, path, cid)
        if bypass is None:
            elements.append(ChainElement(cid, comp.failure_rate, comp.mttr))
        else:
            elements.append(ChainElement(cid, comp.failure_rate, bypass.intervention_h, bypass.switch))
    return ReliabilityChain(load_id, elements)


def chains_by_subsystem(t: Topology) -> dict:
    """Map every subsystem to the chains of its loads (possibly empty)."""
    grouped = {s: [] for s in Subsystem}
    for tag in t.loads:
        grouped[tag.subsystem].append(derive_chain(t, tag.id))
    return grouped
