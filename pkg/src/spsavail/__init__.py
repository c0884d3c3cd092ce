"""Availability and KPI analysis of shipboard power system architectures."""

from .chains import ChainElement, ReliabilityChain, chains_by_subsystem, derive_chain
from .config import Architecture, Catalog, ChainOverride, load_architecture, parse_architecture
from .errors import AmbiguityError, ConfigError, MissingDataError, NotFoundError, SpsError
from .kpi import (
    KpiReport,
    SubsystemResult,
    aggregate_subsystem,
    evaluate,
    ppl_interruption_index,
    saidi,
    system_trl,
    totals,
)
from .markov import (
    SeriesResult,
    annual_downtime,
    equivalent_failure_rate,
    equivalent_mttr,
    series_availability,
)
from .model import (
    HOURS_PER_YEAR,
    Component,
    ComponentKind,
    Subsystem,
    Topology,
    line_failure_rate,
    validate_topology,
)
from .montecarlo import SimConfig, SimEstimate, simulate_chain, simulate_parallel_pair
from .presets import load_preset

__version__ = "0.1.0"
