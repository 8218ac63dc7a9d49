"""Synthetic weekly traffic traces and the scale-and-match pipeline.

A scenario consists of M per-BS hourly rate traces covering one typical week
(hour 0 = Monday 00:00) plus per-BS capacity/load metadata.  Base traces are
generated with a parametric diurnal shape, then affinely rescaled so that each
BS trace reproduces a target peak and 5th-percentile hourly volume.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DegenerateTraceError, InvalidArgumentError, NoCandidateError

HOURS_PER_WEEK = 168
HOURS_PER_DAY = 24
DAYS_PER_WEEK = 7

# nearest-rank index of the 5th percentile over 168 hourly samples
_P5_RANK = math.ceil(0.05 * HOURS_PER_WEEK) - 1


def percentile_nearest_rank(values: np.ndarray, fraction: float) -> float:
    """Nearest-rank percentile: the ceil(fraction*n)-th smallest sample."""
    v = np.sort(np.asarray(values, dtype=float))
    if v.size == 0:
        raise InvalidArgumentError("percentile of empty sample")
    rank = max(1, math.ceil(fraction * v.size))
    return float(v[rank - 1])


@dataclass(frozen=True)
class WeeklyTrace:
    """Hourly traffic rates (Mbps) for one typical week."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (HOURS_PER_WEEK,):
            raise InvalidArgumentError(
                f"weekly trace must have {HOURS_PER_WEEK} hourly values, got {v.shape}"
            )
        if not np.all(np.isfinite(v)) or np.any(v < 0):
            raise InvalidArgumentError("trace values must be finite and >= 0")
        object.__setattr__(self, "values", v)

    @property
    def peak(self) -> float:
        return float(self.values.max())

    @property
    def p5(self) -> float:
        return float(np.partition(self.values, _P5_RANK)[_P5_RANK])

    @property
    def mean(self) -> float:
        return float(self.values.mean())


@dataclass(frozen=True)
class BSStats:
    """Target per-BS statistics: traffic quantiles plus capacity and load cap."""

    peak: float
    p5: float
    mean: float
    capacity: float
    max_load: float

    def __post_init__(self):
        if not (0 <= self.p5 <= self.mean <= self.peak):
            raise InvalidArgumentError(
                f"need 0 <= p5 <= mean <= peak, got {self.p5}, {self.mean}, {self.peak}"
            )
        if not (0 < self.max_load <= 1):
            raise InvalidArgumentError(f"max_load must be in (0,1], got {self.max_load}")
        if self.capacity <= 0:
            raise InvalidArgumentError("capacity must be positive")
        if self.peak > self.max_load * self.capacity * (1 + 1e-9):
            raise InvalidArgumentError("peak exceeds max_load * capacity")


@dataclass(frozen=True)
class TrafficScenario:
    """M matched weekly traces with their per-BS stats."""

    traces: tuple[WeeklyTrace, ...]
    stats: tuple[BSStats, ...]
    area_km2: float = 30.0
    _rate_matrix: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        traces = tuple(self.traces)
        stats = tuple(self.stats)
        if len(traces) != len(stats) or not traces:
            raise InvalidArgumentError("traces and stats must be equal-length and non-empty")
        rates = np.stack([t.values for t in traces])
        caps = np.array([s.max_load * s.capacity for s in stats])
        if np.any(rates > caps[:, None] * (1 + 1e-9)):
            raise InvalidArgumentError("a trace exceeds max_load * capacity for its BS")
        object.__setattr__(self, "traces", traces)
        object.__setattr__(self, "stats", stats)
        object.__setattr__(self, "_rate_matrix", rates)

    @property
    def n_bs(self) -> int:
        return len(self.traces)

    @property
    def rate_matrix(self) -> np.ndarray:
        """(N, 168) array of hourly rates in Mbps."""
        return self._rate_matrix

    @property
    def capacities(self) -> np.ndarray:
        return np.array([s.capacity for s in self.stats])


def _diurnal_profile(rng: np.random.Generator) -> np.ndarray:
    """One week of a double-peaked day shape with a deep night trough."""
    hod = np.arange(HOURS_PER_DAY, dtype=float)
    jitter = rng.uniform(-2.0, 2.0)  # per-trace phase shift, at most 2 h
    morning = np.exp(-0.5 * ((hod - (9.5 + jitter)) / 2.2) ** 2)
    evening = np.exp(-0.5 * ((hod - (20.0 + jitter)) / 2.8) ** 2)
    w_m = rng.uniform(0.5, 0.9)
    day = 0.06 + w_m * morning + evening
    week = np.tile(day, DAYS_PER_WEEK)
    weekend_scale = rng.uniform(0.7, 0.9)
    week[5 * HOURS_PER_DAY:] *= weekend_scale
    return week


def generate_base_traces(n: int, seed: int) -> list[WeeklyTrace]:
    """Generate n synthetic weekly base traces, deterministic per seed."""
    if n < 1:
        raise InvalidArgumentError(f"need n >= 1, got {n}")
    rng = np.random.default_rng(np.random.SeedSequence([seed, 0x7AFF]))
    traces = []
    for _ in range(n):
        shape = _diurnal_profile(rng)
        amplitude = rng.uniform(0.5, 2.0)
        noise = rng.lognormal(mean=0.0, sigma=0.08, size=HOURS_PER_WEEK)
        traces.append(WeeklyTrace(amplitude * shape * noise))
    return traces


def generate_target_stats(
    m: int,
    seed: int,
    capacity_range: tuple[float, float] = (100.0, 400.0),
    p5_ratio_range: tuple[float, float] = (0.05, 0.4),
    max_load_range: tuple[float, float] = (0.5, 0.9),
    peak_load_range: tuple[float, float] = (0.08, 0.35),
) -> list[BSStats]:
    """Draw m per-BS target statistics satisfying all BSStats invariants.

    The peak is placed at a random fraction of the admissible ceiling
    max_load * capacity, the 5th percentile at a random fraction of the peak,
    and the mean strictly between the two.
    """
    if m < 1:
        raise InvalidArgumentError(f"need m >= 1, got {m}")
    rng = np.random.default_rng(np.random.SeedSequence([seed, 0x57A7]))
    out = []
    for _ in range(m):
        capacity = rng.uniform(*capacity_range)
        max_load = rng.uniform(*max_load_range)
        peak = capacity * max_load * rng.uniform(*peak_load_range)
        p5 = peak * rng.uniform(*p5_ratio_range)
        mean = p5 + (peak - p5) * rng.uniform(0.25, 0.5)
        out.append(BSStats(peak=peak, p5=p5, mean=mean, capacity=capacity, max_load=max_load))
    return out


def scale_trace(base: WeeklyTrace, target: BSStats) -> WeeklyTrace:
    """Affinely rescale a base trace to hit the target peak and 5th percentile.

    The two-point fit v -> a*v + b maps (base.p5, base.peak) onto
    (target.p5, target.peak); negative outputs are clipped to zero.  Clipping
    can only touch values strictly below the target 5th percentile, so both
    matched statistics are exact.
    """
    bp, bp5 = base.peak, base.p5
    if bp <= bp5:
        raise DegenerateTraceError("base trace is constant; cannot fit peak and p5")
    a = (target.peak - target.p5) / (bp - bp5)
    b = target.p5 - a * bp5
    return WeeklyTrace(np.clip(a * base.values + b, 0.0, None))


def _match_index(
    base_matrix: np.ndarray, base_peaks: np.ndarray, base_p5s: np.ndarray, target: BSStats
) -> tuple[int, np.ndarray]:
    """Index and values of the scaled candidate with the closest mean."""
    usable = base_peaks > base_p5s
    if not np.any(usable):
        raise NoCandidateError("all candidate base traces are degenerate")
    a = np.where(usable, (target.peak - target.p5) / np.where(usable, base_peaks - base_p5s, 1.0), np.nan)
    b = target.p5 - a * base_p5s
    scaled = np.clip(a[:, None] * base_matrix + b[:, None], 0.0, None)
    dev = np.abs(scaled.mean(axis=1) - target.mean)
    dev[~usable] = np.inf
    idx = int(np.argmin(dev))  # argmin keeps the lowest index on ties
    return idx, scaled[idx]


def match_trace(bases: list[WeeklyTrace], target: BSStats) -> WeeklyTrace:
    """Pick the scaled base trace whose mean is nearest the target mean."""
    if not bases:
        raise NoCandidateError("no base traces supplied")
    base_matrix = np.stack([t.values for t in bases])
    peaks = base_matrix.max(axis=1)
    p5s = np.partition(base_matrix, _P5_RANK, axis=1)[:, _P5_RANK]
    _, values = _match_index(base_matrix, peaks, p5s, target)
    return WeeklyTrace(values)


def build_scenario(
    n_bases: int,
    m_targets: int,
    seed: int,
    area_km2: float = 30.0,
    **stats_kwargs,
) -> TrafficScenario:
    """Generate bases and targets, then match one scaled trace per target."""
    bases = generate_base_traces(n_bases, seed)
    stats = generate_target_stats(m_targets, seed, **stats_kwargs)
    base_matrix = np.stack([t.values for t in bases])
    peaks = base_matrix.max(axis=1)
    p5s = np.partition(base_matrix, _P5_RANK, axis=1)[:, _P5_RANK]
    traces = []
    for target in stats:
        _, values = _match_index(base_matrix, peaks, p5s, target)
        traces.append(WeeklyTrace(values))
    return TrafficScenario(traces=tuple(traces), stats=tuple(stats), area_km2=area_km2)


def save_scenario(scenario: TrafficScenario, csv_path: str | Path, stats_path: str | Path) -> None:
    """Write the trace CSV (bs_id,hour,rate_mbps) and the JSON stats sidecar."""
    csv_path, stats_path = Path(csv_path), Path(stats_path)
    with csv_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["bs_id", "hour", "rate_mbps"])
        for i, trace in enumerate(scenario.traces):
            for h, rate in enumerate(trace.values):
                writer.writerow([i, h, repr(float(rate))])
    sidecar = {
        "area_km2": scenario.area_km2,
        "n_bs": scenario.n_bs,
        "stats": [
            {
                "peak": s.peak,
                "p5": s.p5,
                "mean": s.mean,
                "capacity": s.capacity,
                "max_load": s.max_load,
            }
            for s in scenario.stats
        ],
    }
    stats_path.write_text(json.dumps(sidecar, indent=2) + "\n")


def load_scenario(csv_path: str | Path, stats_path: str | Path) -> TrafficScenario:
    sidecar = json.loads(Path(stats_path).read_text())
    n_bs = sidecar["n_bs"]
    rates = np.zeros((n_bs, HOURS_PER_WEEK))
    with Path(csv_path).open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["bs_id", "hour", "rate_mbps"]:
            raise InvalidArgumentError(f"unexpected scenario CSV header: {header}")
        for bs_id, hour, rate in reader:
            rates[int(bs_id), int(hour)] = float(rate)
    stats = tuple(BSStats(**entry) for entry in sidecar["stats"])
    traces = tuple(WeeklyTrace(row) for row in rates)
    return TrafficScenario(traces=traces, stats=stats, area_km2=sidecar["area_km2"])
