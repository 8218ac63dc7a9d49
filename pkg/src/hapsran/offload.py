"""Hourly BS deactivation: least-traffic-first greedy plus an exact oracle.

Each hour is independent: BSs are scanned in ascending rate order and put to
sleep while both constraints hold, namely the active count may not drop below
ceil(min_active_frac * N) and the total offloaded rate may not exceed the
HAPS capacity.  The brute-force oracle enumerates all feasible active sets
for small instances and is used to validate the greedy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .energymodel import EnergyParams, bs_energy, sleep_energy
from .errors import (
    InstanceTooLargeError,
    InvalidArgumentError,
    LoadExceedsCapacityError,
)
from .traffic import HOURS_PER_WEEK, TrafficScenario

_ORACLE_MAX_N = 20


@dataclass(frozen=True)
class OffloadConstraints:
    min_active_frac: float = 0.4
    c_haps: float = 0.0

    def __post_init__(self):
        if not 0 <= self.min_active_frac <= 1:
            raise InvalidArgumentError("min_active_frac must be in [0,1]")
        if self.c_haps < 0:
            raise InvalidArgumentError("c_haps must be >= 0")

    def max_offloadable(self, n: int) -> int:
        """Largest sleeper count that keeps ceil(min_active_frac*n) BSs active."""
        # small slack absorbs float noise in frac*n at exact integers
        return n - math.ceil(self.min_active_frac * n - 1e-9)


@dataclass(frozen=True)
class OffloadSchedule:
    """Weekly decision matrix with per-hour bookkeeping."""

    active: np.ndarray  # (T, N) bool, True = BS stays on
    offloaded_rate: np.ndarray  # (T,) Mbps
    offloaded_count: np.ndarray  # (T,) int
    energy_per_hour: np.ndarray  # (T,)

    @property
    def total_energy(self) -> float:
        return float(self.energy_per_hour.sum())

    @property
    def never_active_count(self) -> int:
        """Number of BSs that sleep through the whole week."""
        return int((~self.active).all(axis=0).sum())


def _check_instance(rates: np.ndarray, capacities: np.ndarray) -> None:
    if rates.shape != capacities.shape or rates.ndim != 1 or rates.size == 0:
        raise InvalidArgumentError("rates and capacities must be equal-length 1-D and non-empty")
    if np.any(rates < 0) or np.any(capacities <= 0):
        raise InvalidArgumentError("rates must be >= 0 and capacities > 0")
    if np.any(rates > capacities * (1 + 1e-9)):
        raise LoadExceedsCapacityError("an hourly rate exceeds its BS capacity")


def offload_hour(
    rates, capacities, params: EnergyParams, cons: OffloadConstraints
) -> tuple[np.ndarray, float, float, int]:
    """Greedy single-hour solve.

    Returns (active flags, hour energy, offloaded rate, offloaded count).
    Ties in rate are broken by ascending BS index; the scan stops at the
    first BS that would overshoot the HAPS capacity, since every later BS
    carries at least as much traffic.
    """
    rates = np.asarray(rates, dtype=float)
    capacities = np.asarray(capacities, dtype=float)
    _check_instance(rates, capacities)
    n = rates.size
    order = np.argsort(rates, kind="stable")
    cum = np.cumsum(rates[order])
    k_count = cons.max_offloadable(n)
    k_capacity = int(np.searchsorted(cum, cons.c_haps, side="right"))
    k = min(k_count, k_capacity)
    active = np.ones(n, dtype=bool)
    active[order[:k]] = False
    offloaded_rate = float(cum[k - 1]) if k > 0 else 0.0
    energy = float(
        bs_energy(params, rates[active], capacities[active]).sum() + k * sleep_energy(params)
    )
    return active, energy, offloaded_rate, k


def offload_week(
    scenario: TrafficScenario, params: EnergyParams, cons: OffloadConstraints
) -> OffloadSchedule:
    """Apply the greedy solve independently to each of the 168 hours."""
    rates = scenario.rate_matrix  # (N, T)
    capacities = scenario.capacities
    n = scenario.n_bs
    active = np.ones((HOURS_PER_WEEK, n), dtype=bool)
    off_rate = np.zeros(HOURS_PER_WEEK)
    off_count = np.zeros(HOURS_PER_WEEK, dtype=int)
    energy = np.zeros(HOURS_PER_WEEK)
    for h in range(HOURS_PER_WEEK):
        active[h], energy[h], off_rate[h], off_count[h] = offload_hour(
            rates[:, h], capacities, params, cons
        )
    return OffloadSchedule(
        active=active, offloaded_rate=off_rate, offloaded_count=off_count, energy_per_hour=energy
    )


def baseline_energy_per_hour(scenario: TrafficScenario, params: EnergyParams) -> np.ndarray:
    """Per-hour energy with every BS active (no offloading)."""
    loads = scenario.rate_matrix / scenario.capacities[:, None]
    return (params.static_energy + params.full_load_dynamic * loads).sum(axis=0)


def baseline_energy(scenario: TrafficScenario, params: EnergyParams) -> float:
    return float(baseline_energy_per_hour(scenario, params).sum())


def exact_oracle_hour(
    rates, capacities, params: EnergyParams, cons: OffloadConstraints
) -> tuple[np.ndarray, float]:
    """Exhaustive single-hour minimizer over all feasible active sets.

    Ties are broken by the lexicographically smallest active index set.
    Limited to N <= 20 (2^N enumeration).
    """
    rates = np.asarray(rates, dtype=float)
    capacities = np.asarray(capacities, dtype=float)
    _check_instance(rates, capacities)
    n = rates.size
    if n > _ORACLE_MAX_N:
        raise InstanceTooLargeError(f"oracle limited to N <= {_ORACLE_MAX_N}, got {n}")
    masks = np.arange(2**n, dtype=np.uint32)
    bits = ((masks[:, None] >> np.arange(n)) & 1).astype(bool)  # True = active
    per_bs = bs_energy(params, rates, capacities)
    active_count = bits.sum(axis=1)
    offloaded = (~bits) @ rates
    min_active = n - cons.max_offloadable(n)
    feasible = (active_count >= min_active) & (offloaded <= cons.c_haps * (1 + 1e-12) + 1e-12)
    if not np.any(feasible):
        raise InvalidArgumentError("no feasible active set under the given constraints")
    energies = bits @ per_bs + (n - active_count) * sleep_energy(params)
    energies[~feasible] = np.inf
    best = energies.min()
    tied = np.flatnonzero(np.isclose(energies, best, rtol=1e-12, atol=1e-12))
    choice = min(tied, key=lambda m: tuple(np.flatnonzero(bits[m])))
    return bits[choice].copy(), float(energies[choice])
