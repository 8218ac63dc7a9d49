"""UE population sampling and aggregation into the scalar HAPS capacity.

Each trial deploys a dense UE population, evaluates every UE's downlink rate
through the link budget, and condenses the result into one capacity figure:
carriers times the aggregate per-UE rate.  Indoor/traditional/LOS flags are
assigned by thresholding shared uniform draws so that parameter sweeps under
common random numbers are monotone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError
from .linkbudget import (
    ChannelTables,
    LinkParams,
    UESample,
    building_entry_loss_db,
    fspl_db,
    los_probability,
    slant_range_km,
    snr_db,
    ue_rate_bps,
)

AGGREGATIONS = ("mean", "median", "p5")

SeedLike = int | tuple[int, ...]


@dataclass(frozen=True)
class TrialConfig:
    """Sampled parameters of one Monte Carlo trial."""

    elevation_deg: float
    indoor_frac: float
    traditional_frac: float
    rng_stream: SeedLike
    ue_density_per_km2: float = 3000.0
    area_km2: float = 30.0
    n_carriers: int = 6

    def __post_init__(self):
        if not 0 <= self.indoor_frac <= 1 or not 0 <= self.traditional_frac <= 1:
            raise InvalidArgumentError("fractions must be in [0,1]")
        if self.n_carriers < 1:
            raise InvalidArgumentError("n_carriers must be >= 1")
        if self.ue_density_per_km2 <= 0 or self.area_km2 <= 0:
            raise InvalidArgumentError("density and area must be positive")


@dataclass(frozen=True)
class UEPopulation:
    """Column-wise UE sample set; behaves as a sequence of UESample."""

    elevation_deg: float
    los: np.ndarray
    indoor: np.ndarray
    traditional: np.ndarray
    sf_draw: np.ndarray
    bel_p: np.ndarray

    def __len__(self) -> int:
        return len(self.los)

    def __getitem__(self, i: int) -> UESample:
        return UESample(
            los=bool(self.los[i]),
            indoor=bool(self.indoor[i]),
            traditional=bool(self.traditional[i]),
            sf_draw=float(self.sf_draw[i]),
            bel_p=float(self.bel_p[i]),
            elevation_deg=self.elevation_deg,
        )


def _seed_sequence(stream: SeedLike) -> np.random.SeedSequence:
    entropy = list(stream) if isinstance(stream, tuple) else [stream]
    return np.random.SeedSequence(entropy)


def sample_ue_population(cfg: TrialConfig, tables: ChannelTables) -> UEPopulation:
    """Draw the trial's UE features, deterministic per rng_stream.

    Separate sub-streams feed the categorical thresholds, the shadow-fading
    draws and the entry-loss probabilities, so paired experiments can hold
    individual noise sources fixed.
    """
    n = math.ceil(cfg.ue_density_per_km2 * cfg.area_km2)
    pop_ss, sf_ss, bel_ss = _seed_sequence(cfg.rng_stream).spawn(3)
    rng = np.random.default_rng(pop_ss)
    u_los = rng.random(n)
    u_indoor = rng.random(n)
    u_trad = rng.random(n)
    sf = np.random.default_rng(sf_ss).standard_normal(n)
    bel_p = np.random.default_rng(bel_ss).random(n)
    bel_p = np.clip(bel_p, 1e-12, 1 - 1e-12)  # keep draws in the open interval
    p_los = los_probability(tables, cfg.elevation_deg)
    indoor = u_indoor < cfg.indoor_frac
    return UEPopulation(
        elevation_deg=cfg.elevation_deg,
        los=u_los < p_los,
        indoor=indoor,
        traditional=u_trad < cfg.traditional_frac,
        sf_draw=sf,
        bel_p=bel_p,
    )


def _as_population(ues) -> UEPopulation:
    if isinstance(ues, UEPopulation):
        return ues
    samples = list(ues)
    if not samples:
        raise InvalidArgumentError("UE population is empty")
    return UEPopulation(
        elevation_deg=samples[0].elevation_deg,
        los=np.array([s.los for s in samples]),
        indoor=np.array([s.indoor for s in samples]),
        traditional=np.array([s.traditional for s in samples]),
        sf_draw=np.array([s.sf_draw for s in samples]),
        bel_p=np.array([s.bel_p for s in samples]),
    )


def ue_rates_mbps(
    params: LinkParams,
    tables: ChannelTables,
    pop: UEPopulation,
    use_shadow_fading: bool = True,
    use_building_entry_loss: bool = True,
) -> np.ndarray:
    """Vectorized per-UE achievable rate in Mbps."""
    idx = tables.bucket_index(pop.elevation_deg)
    d = slant_range_km(params.haps_height_km, pop.elevation_deg)
    pl = np.full(len(pop), fspl_db(d, params.f_c_ghz))
    sigma = np.where(pop.los, tables.sf_sigma_los[idx], tables.sf_sigma_nlos[idx])
    clutter = np.where(pop.los, tables.clutter_los[idx], tables.clutter_nlos[idx])
    pl += clutter
    if use_shadow_fading:
        pl += pop.sf_draw * sigma
    if use_building_entry_loss and np.any(pop.indoor):
        for cls, mask in (
            ("traditional", pop.indoor & pop.traditional),
            ("thermally_efficient", pop.indoor & ~pop.traditional),
        ):
            if np.any(mask):
                pl[mask] += building_entry_loss_db(
                    tables.bel[cls], params.f_c_ghz, pop.elevation_deg, pop.bel_p[mask]
                )
    return ue_rate_bps(params, snr_db(params, pl)) / 1e6


def aggregate_capacity(
    cfg: TrialConfig,
    params: LinkParams,
    tables: ChannelTables,
    ues,
    use_shadow_fading: bool = True,
    use_building_entry_loss: bool = True,
    aggregation: str = "mean",
) -> float:
    """Condense per-UE rates into the HAPS capacity in Mbps.

    The default rule is carriers times the population-mean rate, modeling
    round-robin sharing of each carrier; "median" and "p5" (cell-edge style)
    are available as alternatives.
    """
    pop = _as_population(ues)
    if len(pop) == 0:
        raise InvalidArgumentError("UE population is empty")
    rates = ue_rates_mbps(params, tables, pop, use_shadow_fading, use_building_entry_loss)
    if aggregation == "mean":
        per_carrier = float(rates.mean())
    elif aggregation == "median":
        per_carrier = float(np.median(rates))
    elif aggregation == "p5":
        per_carrier = float(np.percentile(rates, 5))
    else:
        raise InvalidArgumentError(f"aggregation must be one of {AGGREGATIONS}")
    return cfg.n_carriers * per_carrier
