"""Steady-state availability of a series system of repairable items.

Each item fails at a constant rate and is repaired at a constant rate; a
failure of any item takes the series system down. The system behaves as a
two-state Markov process with an equivalent failure rate (sum of item
rates) and an equivalent MTTR (failure-rate weighted mean of item MTTRs).
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import HOURS_PER_YEAR, per_hour


@dataclass(frozen=True)
class SeriesResult:
    lambda_eq: float  # failures/year
    mttr_eq: float  # hours
    availability: float
    annual_downtime: float  # hours/year


def _elements(chain):
    elements = getattr(chain, "elements", chain)
    elements = list(elements)
    if not elements:
        raise ValueError("chain must contain at least one element")
    return elements


def _mttr(element):
    mttr = getattr(element, "effective_mttr", None)
    return element.mttr if mttr is None else mttr


def equivalent_failure_rate(chain) -> float:
    """Sum of element failure rates (failures/year)."""
    return sum(e.failure_rate for e in _elements(chain))


def equivalent_mttr(chain) -> float:
    """Failure-rate weighted mean of effective MTTRs (hours)."""
    elements = _elements(chain)
    total = sum(e.failure_rate for e in elements)
    if not total > 0:
        raise ValueError("chain failure rates must be positive")
    return sum(e.failure_rate * _mttr(e) for e in elements) / total


def series_availability(lambda_eq: float, mttr_eq: float) -> SeriesResult:
    if not lambda_eq > 0:
        raise ValueError(f"lambda_eq must be positive, got {lambda_eq!r}")
    if not mttr_eq > 0:
        raise ValueError(f"mttr_eq must be positive, got {mttr_eq!r}")
    mu = 1.0 / mttr_eq
    lam = per_hour(lambda_eq)
    availability = mu / (lam + mu)
    # 1 - A written without cancellation
    unavailability = lam / (lam + mu)
    return SeriesResult(lambda_eq, mttr_eq, availability, unavailability * HOURS_PER_YEAR)


def evaluate_chain(chain) -> SeriesResult:
    return series_availability(equivalent_failure_rate(chain), equivalent_mttr(chain))


def annual_downtime(chain) -> float:
    """Expected hours per year the chain leaves its load unsupplied."""
    return evaluate_chain(chain).annual_downtime
