"""Subsystem aggregation and architecture-level KPIs."""

from __future__ import annotations

from dataclasses import dataclass, field
from statistics import fmean
from typing import Optional

from .chains import chains_by_subsystem
from .errors import MissingDataError, NotFoundError
from .markov import evaluate_chain, series_availability
from .model import Subsystem, Topology, iter_counted

BASIS_OVERRIDE = "override"
BASIS_GRAPH = "graph"


@dataclass(frozen=True)
class SubsystemResult:
    subsystem: Subsystem
    lambda_eq: float
    mttr_eq: float
    annual_downtime: float
    n_chains: int = 1


@dataclass
class KpiReport:
    architecture: str
    basis: str
    saidi: float
    ppl_interruption: Optional[float]
    weight: Optional[float]
    volume: Optional[float]
    trl: Optional[int]
    customers: tuple = ()
    subsystem_results: list = field(default_factory=list)

    @property
    def label(self) -> str:
        if self.basis == BASIS_GRAPH:
            return f"{self.architecture} (graph)"
        return self.architecture

    def to_dict(self) -> dict:
        return {
            "architecture": self.architecture,
            "basis": self.basis,
            "saidi": self.saidi,
            "ppl_interruption": self.ppl_interruption,
            "weight": self.weight,
            "volume": self.volume,
            "trl": self.trl,
            "customers": [c.value for c in self.customers],
            "subsystems": [
                {
                    "subsystem": r.subsystem.value,
                    "lambda_eq": r.lambda_eq,
                    "mttr_eq": r.mttr_eq,
                    "annual_downtime": r.annual_downtime,
                    "n_chains": r.n_chains,
                }
                for r in self.subsystem_results
            ],
        }


def aggregate_subsystem(subsystem: Subsystem, results) -> SubsystemResult:
    """Component-wise mean of per-load series results."""
    results = list(results)
    if not results:
        raise ValueError(f"no results to aggregate for {Subsystem(subsystem).value}")
    return SubsystemResult(
        Subsystem(subsystem),
        fmean(r.lambda_eq for r in results),
        fmean(r.mttr_eq for r in results),
        fmean(r.annual_downtime for r in results),
        len(results),
    )


def _lookup(subsystems, wanted):
    for r in subsystems:
        if r.subsystem is wanted:
            return r
    raise NotFoundError(f"no results for subsystem {wanted.value!r}")


def saidi(subsystems, customers) -> float:
    """Mean annual downtime over the selected customer subsystems."""
    customers = [Subsystem(c) for c in customers]
    if not customers:
        raise ValueError("customer selection must not be empty")
    return sum(_lookup(subsystems, c).annual_downtime for c in customers) / len(customers)


def ppl_interruption_index(subsystems) -> float:
    return _lookup(subsystems, Subsystem.PULSE_POWER_LOADS).annual_downtime


def totals(t: Topology, catalog=None) -> tuple:
    """Total (weight t, volume m3) of the counted components."""
    if catalog is not None:
        t = catalog.apply(t)
    counted = list(iter_counted(t))
    missing = [c.id for c in counted if c.weight is None or c.volume is None]
    if missing:
        raise MissingDataError("weight/volume", missing)
    return (float(sum(c.weight for c in counted)), float(sum(c.volume for c in counted)))


def system_trl(t: Topology) -> int:
    """Lowest TRL among counted components."""
    counted = list(iter_counted(t))
    missing = [c.id for c in counted if c.trl is None]
    if missing:
        raise MissingDataError("TRL", missing)
    if not counted:
        raise MissingDataError("TRL", ["<no counted components>"])
    return min(c.trl for c in counted)


def subsystem_results_from_graph(t: Topology) -> list:
    out = []
    for subsystem, chains in chains_by_subsystem(t).items():
        if chains:
            out.append(aggregate_subsystem(subsystem, [evaluate_chain(c) for c in chains]))
    return out


def subsystem_results_from_overrides(overrides: dict) -> list:
    out = []
    for subsystem in Subsystem:
        o = overrides.get(subsystem)
        if o is not None:
            r = series_availability(o.lambda_eq, o.mttr_eq)
            out.append(SubsystemResult(subsystem, r.lambda_eq, r.mttr_eq, r.annual_downtime))
    return out


def evaluate(arch, basis: Optional[str] = None) -> KpiReport:
    """Build the KPI report of an architecture.

    ``basis`` selects override parameters or graph-derived chains; by
    default overrides are used when the architecture has any.
    """
    t = arch.topology
    if basis is None:
        basis = BASIS_OVERRIDE if arch.chain_overrides else BASIS_GRAPH
    if basis == BASIS_OVERRIDE:
        if not arch.chain_overrides:
            raise NotFoundError(f"architecture {arch.name!r} has no chain overrides")
        results = subsystem_results_from_overrides(arch.chain_overrides)
    elif basis == BASIS_GRAPH:
        results = subsystem_results_from_graph(t)
    else:
        raise ValueError(f"unknown basis {basis!r}")

    present = {r.subsystem for r in results}
    ppl = ppl_interruption_index(results) if Subsystem.PULSE_POWER_LOADS in present else None
    counted = list(iter_counted(t))
    weight, volume = totals(t)
    trl = system_trl(t) if counted else None
    return KpiReport(
        architecture=arch.name,
        basis=basis,
        saidi=saidi(results, arch.customers),
        ppl_interruption=ppl,
        weight=weight,
        volume=volume,
        trl=trl,
        customers=tuple(arch.customers),
        subsystem_results=results,
    )
