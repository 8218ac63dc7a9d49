"""Post-processing of trial results into the reported study metrics.

Savings are reported per time mask (whole week, nights, weekdays, weekend),
alongside the hourly offloaded-traffic fraction, the utilization of the
combined HAPS-plus-active-BS capacity, and never-active BS counts.  All CSV
emitters use a stable column order so outputs are byte-reproducible.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InvalidArgumentError, UndefinedMetricError
from .montecarlo import StudyConfig, TrialResult
from .traffic import HOURS_PER_WEEK, TrafficScenario


@dataclass(frozen=True)
class PeriodMask:
    name: str
    hours: tuple[int, ...]

    def __post_init__(self):
        hours = tuple(sorted(set(self.hours)))
        if not hours:
            raise InvalidArgumentError("mask must contain at least one hour")
        if hours[0] < 0 or hours[-1] >= HOURS_PER_WEEK:
            raise InvalidArgumentError("mask hours must lie within 0..167")
        object.__setattr__(self, "hours", hours)

    @property
    def index(self) -> np.ndarray:
        return np.array(self.hours)


WEEK_MASK = PeriodMask("week", tuple(range(HOURS_PER_WEEK)))
# "night" covers 0-5 AM inclusive on each of the seven days
NIGHT_MASK = PeriodMask("night", tuple(h for h in range(HOURS_PER_WEEK) if h % 24 <= 5))
WEEKDAY_MASK = PeriodMask("weekday", tuple(range(120)))
WEEKEND_MASK = PeriodMask("weekend", tuple(range(120, HOURS_PER_WEEK)))
DEFAULT_MASKS = (WEEK_MASK, NIGHT_MASK, WEEKDAY_MASK, WEEKEND_MASK)


def energy_saving(result: TrialResult, mask: PeriodMask) -> float:
    """Fractional energy reduction over the masked hours."""
    idx = mask.index
    base = float(result.baseline_energy_per_hour[idx].sum())
    if base <= 0:
        raise UndefinedMetricError(f"zero baseline energy over mask {mask.name!r}")
    return 1.0 - float(result.energy_per_hour[idx].sum()) / base


def offloaded_fraction(result: TrialResult, scenario: TrafficScenario, hour: int) -> float:
    """Share of the hour's total demand carried by the HAPS."""
    total = float(scenario.rate_matrix[:, hour].sum())
    if total <= 0:
        raise UndefinedMetricError(f"zero traffic demand at hour {hour}")
    return float(result.offloaded_rate_per_hour[hour]) / total


def capacity_utilization(result: TrialResult, scenario: TrafficScenario, hour: int) -> float:
    """Total demand over combined HAPS plus active terrestrial capacity."""
    denom = result.c_haps_mbps + float(result.active_capacity_per_hour[hour])
    if denom <= 0:
        raise UndefinedMetricError(f"zero available capacity at hour {hour}")
    return float(scenario.rate_matrix[:, hour].sum()) / denom


def sorted_saving_curves(
    results: list[TrialResult], masks: tuple[PeriodMask, ...] = DEFAULT_MASKS
) -> dict[str, np.ndarray]:
    """Each mask's per-trial savings, sorted ascending independently per mask."""
    if not results:
        raise InvalidArgumentError("no trial results")
    return {
        mask.name: np.sort([energy_saving(r, mask) for r in results]) for mask in masks
    }


def _fmt(x: float) -> str:
    return repr(float(x))


def write_figure2_csv(path: str | Path, results: list[TrialResult]) -> None:
    curves = sorted_saving_curves(results, DEFAULT_MASKS)
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["rank", "week", "night", "weekday", "weekend"])
        for rank in range(len(results)):
            writer.writerow(
                [rank]
                + [_fmt(curves[name][rank]) for name in ("week", "night", "weekday", "weekend")]
            )


def write_figure3_csv(path: str | Path, results: list[TrialResult]) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["trial", "elevation", "indoor_frac", "traditional_frac", "saving"])
        for r in results:
            writer.writerow(
                [
                    r.trial_idx,
                    _fmt(r.elevation_deg),
                    _fmt(r.indoor_frac),
                    _fmt(r.traditional_frac),
                    _fmt(energy_saving(r, WEEK_MASK)),
                ]
            )


def write_figure45_csv(
    path: str | Path, results: list[TrialResult], scenario: TrafficScenario
) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["trial", "hour", "offloaded_frac", "utilization"])
        for r in results:
            for h in range(HOURS_PER_WEEK):
                writer.writerow(
                    [
                        r.trial_idx,
                        h,
                        _fmt(offloaded_fraction(r, scenario, h)),
                        _fmt(capacity_utilization(r, scenario, h)),
                    ]
                )


def write_trials_csv(path: str | Path, results: list[TrialResult]) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [
                "trial",
                "elevation",
                "indoor_frac",
                "traditional_frac",
                "c_haps_mbps",
                "total_energy",
                "baseline_energy",
                "week_saving",
                "night_saving",
                "never_active_bs",
            ]
        )
        for r in results:
            writer.writerow(
                [
                    r.trial_idx,
                    _fmt(r.elevation_deg),
                    _fmt(r.indoor_frac),
                    _fmt(r.traditional_frac),
                    _fmt(r.c_haps_mbps),
                    _fmt(r.total_energy),
                    _fmt(r.baseline_energy),
                    _fmt(energy_saving(r, WEEK_MASK)),
                    _fmt(energy_saving(r, NIGHT_MASK)),
                    r.never_active_bs_count,
                ]
            )


def study_config_digest(study: StudyConfig) -> str:
    """Stable hash of the study settings (scenario identified by shape/sums)."""
    doc = {
        "n_trials": study.n_trials,
        "master_seed": study.master_seed,
        "min_active_frac": study.min_active_frac,
        "elevation_set": list(study.elevation_set),
        "indoor_range": list(study.indoor_range),
        "traditional_range": list(study.traditional_range),
        "ue_density_per_km2": study.ue_density_per_km2,
        "n_carriers": study.n_carriers,
        "use_shadow_fading": study.use_shadow_fading,
        "use_building_entry_loss": study.use_building_entry_loss,
        "aggregation": study.aggregation,
        "link": repr(study.link),
        "energy": repr(study.energy),
        "scenario_n_bs": study.scenario.n_bs,
        "scenario_checksum": repr(float(study.scenario.rate_matrix.sum())),
    }
    blob = json.dumps(doc, sort_keys=True, default=repr).encode()
    return hashlib.sha256(blob).hexdigest()


def write_manifest(path: str | Path, study: StudyConfig, wall_clock_s: float, created_utc: str) -> None:
    doc = {
        "artifact": "hapsran",
        "version": "0.1.0",
        "master_seed": study.master_seed,
        "n_trials": study.n_trials,
        "n_workers": study.n_workers,
        "config_sha256": study_config_digest(study),
        "wall_clock_s": wall_clock_s,
        "created_utc": created_utc,
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")
