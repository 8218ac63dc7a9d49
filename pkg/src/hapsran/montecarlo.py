"""The parametric Monte Carlo study: many trials over one fixed scenario.

Every trial draws an elevation angle, an indoor-UE fraction and a
traditional-building share, samples a fresh UE population, computes the
HAPS capacity and solves the weekly offloading problem.  Per-trial RNG
streams are derived from (master_seed, trial index), so trials are
independent, order-insensitive and safe to run in parallel.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .energymodel import EnergyParams
from .errors import InvalidArgumentError
from .hapscapacity import TrialConfig, aggregate_capacity, sample_ue_population
from .linkbudget import ChannelTables, LinkParams
from .offload import OffloadConstraints, baseline_energy_per_hour, offload_week
from .traffic import TrafficScenario

# stream tags keeping config draws and trial draws disjoint
_CONFIG_STREAM = 1
_TRIAL_STREAM = 2


@dataclass
class StudyConfig:
    scenario: TrafficScenario
    tables: ChannelTables
    link: LinkParams = field(default_factory=LinkParams)
    energy: EnergyParams = field(default_factory=EnergyParams)
    n_trials: int = 1000
    master_seed: int = 0
    min_active_frac: float = 0.4
    elevation_set: tuple[float, ...] = (60.0, 70.0, 80.0, 90.0)
    indoor_range: tuple[float, float] = (0.6, 0.9)
    traditional_range: tuple[float, float] = (0.3, 0.7)
    ue_density_per_km2: float = 3000.0
    n_carriers: int = 6
    use_shadow_fading: bool = True
    use_building_entry_loss: bool = True
    aggregation: str = "mean"
    n_workers: int = 1

    def __post_init__(self):
        if self.n_trials < 1:
            raise InvalidArgumentError("n_trials must be >= 1")
        for lo, hi in (self.indoor_range, self.traditional_range):
            if not 0 <= lo <= hi <= 1:
                raise InvalidArgumentError("ranges must be well-ordered within [0,1]")
        if not self.elevation_set:
            raise InvalidArgumentError("elevation_set must be non-empty")


@dataclass(frozen=True)
class TrialResult:
    trial_idx: int
    elevation_deg: float
    indoor_frac: float
    traditional_frac: float
    c_haps_mbps: float
    total_energy: float
    baseline_energy: float
    energy_per_hour: np.ndarray
    baseline_energy_per_hour: np.ndarray
    offloaded_rate_per_hour: np.ndarray
    offloaded_count_per_hour: np.ndarray
    active_count_per_hour: np.ndarray
    active_capacity_per_hour: np.ndarray
    never_active_bs_count: int

    def __post_init__(self):
        if not self.baseline_energy >= self.total_energy > 0:
            raise InvalidArgumentError("expected baseline_energy >= total_energy > 0")


def sample_trial_config(study: StudyConfig, trial_idx: int) -> TrialConfig:
    """Draw one trial's parameters; deterministic in (master_seed, trial_idx)."""
    if not 0 <= trial_idx < study.n_trials:
        raise InvalidArgumentError(f"trial_idx {trial_idx} outside [0, {study.n_trials})")
    rng = np.random.default_rng(
        np.random.SeedSequence([study.master_seed, trial_idx, _CONFIG_STREAM])
    )
    elevation = study.elevation_set[rng.integers(len(study.elevation_set))]
    indoor = rng.uniform(*study.indoor_range)
    traditional = rng.uniform(*study.traditional_range)
    return TrialConfig(
        elevation_deg=float(elevation),
        indoor_frac=float(indoor),
        traditional_frac=float(traditional),
        rng_stream=(study.master_seed, trial_idx, _TRIAL_STREAM),
        ue_density_per_km2=study.ue_density_per_km2,
        area_km2=study.scenario.area_km2,
        n_carriers=study.n_carriers,
    )


def run_trial(study: StudyConfig, cfg: TrialConfig, trial_idx: int = 0) -> TrialResult:
    """Sample the UE population, compute c_haps, solve the week, collect metrics."""
    pop = sample_ue_population(cfg, study.tables)
    c_haps = aggregate_capacity(
        cfg,
        study.link,
        study.tables,
        pop,
        use_shadow_fading=study.use_shadow_fading,
        use_building_entry_loss=study.use_building_entry_loss,
        aggregation=study.aggregation,
    )
    cons = OffloadConstraints(min_active_frac=study.min_active_frac, c_haps=c_haps)
    schedule = offload_week(study.scenario, study.energy, cons)
    baseline_ph = baseline_energy_per_hour(study.scenario, study.energy)
    capacities = study.scenario.capacities
    return TrialResult(
        trial_idx=trial_idx,
        elevation_deg=cfg.elevation_deg,
        indoor_frac=cfg.indoor_frac,
        traditional_frac=cfg.traditional_frac,
        c_haps_mbps=c_haps,
        total_energy=schedule.total_energy,
        baseline_energy=float(baseline_ph.sum()),
        energy_per_hour=schedule.energy_per_hour,
        baseline_energy_per_hour=baseline_ph,
        offloaded_rate_per_hour=schedule.offloaded_rate,
        offloaded_count_per_hour=schedule.offloaded_count,
        active_count_per_hour=schedule.active.sum(axis=1),
        active_capacity_per_hour=schedule.active.astype(float) @ capacities,
        never_active_bs_count=schedule.never_active_count,
    )


def run_study(study: StudyConfig) -> list[TrialResult]:
    """Execute all trials; results are identical for any worker count."""

    def one(idx: int) -> TrialResult:
        return run_trial(study, sample_trial_config(study, idx), trial_idx=idx)

    indices = range(study.n_trials)
    if study.n_workers <= 1:
        return [one(i) for i in indices]
    with ThreadPoolExecutor(max_workers=study.n_workers) as pool:
        return list(pool.map(one, indices))
