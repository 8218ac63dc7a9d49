"""HAPS downlink link budget: FSPL, shadow fading, clutter and building entry loss.

All large-scale terms combine additively in dB.  Elevation-dependent LOS
probability, shadow-fading sigma and clutter loss come from an embedded
S-band dense-urban table file that users may replace with their own JSON.
Building entry loss follows the dual-lognormal "loss not exceeded with
probability p" model with separate coefficient sets for traditional and
thermally efficient buildings.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np
from scipy.special import ndtri

from .errors import InvalidArgumentError

_DEFAULT_TABLE_FILE = "channel_tables_s_band_dense_urban.json"

# fixed pieces of the dual-lognormal entry-loss model
_BEL_ELEVATION_SLOPE = 0.212  # dB per degree of path elevation
_BEL_FLOOR_DB = -3.0


@dataclass(frozen=True)
class BelCoefficients:
    """Coefficient set of the dual-lognormal building entry loss model."""

    r: float
    s: float
    t: float
    u: float
    v: float
    w: float
    x: float
    y: float
    z: float


@dataclass(frozen=True)
class ChannelTables:
    """Elevation-bucket-indexed channel data plus entry-loss coefficients."""

    environment: str
    band: str
    angles_deg: tuple[float, ...]
    los_prob: tuple[float, ...]
    sf_sigma_los: tuple[float, ...]
    sf_sigma_nlos: tuple[float, ...]
    clutter_los: tuple[float, ...]
    clutter_nlos: tuple[float, ...]
    bel: dict[str, BelCoefficients]

    def __post_init__(self):
        n = len(self.angles_deg)
        for name in ("los_prob", "sf_sigma_los", "sf_sigma_nlos", "clutter_los", "clutter_nlos"):
            if len(getattr(self, name)) != n:
                raise InvalidArgumentError(f"{name} must have one entry per angle bucket")
        if any(not 0 <= p <= 1 for p in self.los_prob):
            raise InvalidArgumentError("LOS probabilities must be in [0,1]")
        if any(s < 0 for s in self.sf_sigma_los + self.sf_sigma_nlos):
            raise InvalidArgumentError("shadow-fading sigma must be >= 0")
        if any(c < 0 for c in self.clutter_los + self.clutter_nlos):
            raise InvalidArgumentError("clutter loss must be >= 0")
        for cls in ("traditional", "thermally_efficient"):
            if cls not in self.bel:
                raise InvalidArgumentError(f"missing entry-loss coefficients for {cls!r}")

    def bucket_index(self, elevation_deg: float) -> int:
        lo, hi = self.angles_deg[0], self.angles_deg[-1]
        if not lo <= elevation_deg <= hi:
            raise InvalidArgumentError(
                f"elevation {elevation_deg} outside covered range [{lo}, {hi}]"
            )
        # nearest 10-degree bucket, rounding halves up
        idx = int(math.floor(elevation_deg / 10.0 + 0.5)) - 1
        return min(max(idx, 0), len(self.angles_deg) - 1)


def load_channel_tables(path: str | Path | None = None) -> ChannelTables:
    """Load channel tables from a JSON file; default is the embedded dataset."""
    if path is None:
        raw = resources.files("hapsran.data").joinpath(_DEFAULT_TABLE_FILE).read_text()
    else:
        raw = Path(path).read_text()
    doc = json.loads(raw)
    return ChannelTables(
        environment=doc["environment"],
        band=doc["band"],
        angles_deg=tuple(doc["angles_deg"]),
        los_prob=tuple(doc["los_prob"]),
        sf_sigma_los=tuple(doc["sf_sigma"]["los"]),
        sf_sigma_nlos=tuple(doc["sf_sigma"]["nlos"]),
        clutter_los=tuple(doc["clutter"]["los"]),
        clutter_nlos=tuple(doc["clutter"]["nlos"]),
        bel={cls: BelCoefficients(**coeffs) for cls, coeffs in doc["bel"].items()},
    )


@dataclass(frozen=True)
class LinkParams:
    """HAPS downlink radio parameters; defaults reproduce the reference setup."""

    p_tx_dbm: float = 43.0
    g_element_dbi: float = 8.0
    n_rows: int = 1
    m_cols: int = 4
    g_rx_dbi: float = 0.0
    f_c_ghz: float = 2.0
    haps_height_km: float = 20.0
    noise_dbm: float = -100.96
    bandwidth_hz: float = 20e6

    def __post_init__(self):
        if self.n_rows < 1 or self.m_cols < 1:
            raise InvalidArgumentError("array dimensions must be >= 1")
        if self.bandwidth_hz <= 0 or self.haps_height_km <= 0 or self.f_c_ghz <= 0:
            raise InvalidArgumentError("bandwidth, height and frequency must be positive")


@dataclass(frozen=True)
class UESample:
    """Random features of one UE in one trial."""

    los: bool
    indoor: bool
    traditional: bool
    sf_draw: float
    bel_p: float
    elevation_deg: float

    def __post_init__(self):
        if not 10 <= self.elevation_deg <= 90:
            raise InvalidArgumentError("elevation must be within [10, 90] degrees")
        if not 0 < self.bel_p < 1:
            raise InvalidArgumentError("bel_p must be in (0, 1)")


def fspl_db(d_km: float, f_c_ghz: float) -> float:
    """Free-space path loss for distance in km and frequency in GHz."""
    if d_km <= 0 or f_c_ghz <= 0:
        raise InvalidArgumentError("distance and frequency must be positive")
    return 92.45 + 20 * math.log10(f_c_ghz) + 20 * math.log10(d_km)


def slant_range_km(height_km: float, elevation_deg: float) -> float:
    """HAPS-to-ground separation along the line of sight."""
    if elevation_deg <= 0 or elevation_deg > 90:
        raise InvalidArgumentError("elevation must be in (0, 90] degrees")
    if height_km <= 0:
        raise InvalidArgumentError("height must be positive")
    return height_km / math.sin(math.radians(elevation_deg))


def tx_array_gain_dbi(g_element_dbi: float, n_rows: int, m_cols: int) -> float:
    """Peak array gain: single-element gain plus 10*log10 of the element count."""
    if n_rows * m_cols < 1:
        raise InvalidArgumentError("array must contain at least one element")
    return g_element_dbi + 10 * math.log10(n_rows * m_cols)


def los_probability(tables: ChannelTables, elevation_deg: float) -> float:
    return tables.los_prob[tables.bucket_index(elevation_deg)]


def building_entry_loss_db(coeffs: BelCoefficients, f_c_ghz: float, elevation_deg: float, p):
    """Entry loss not exceeded with probability p; vectorized over p.

    Two lognormal components (median and spread depending on frequency and on
    the path elevation through the building face) are power-combined with a
    fixed floor; the result is strictly increasing in p.
    """
    p = np.asarray(p, dtype=float)
    if np.any(p <= 0) or np.any(p >= 1):
        raise InvalidArgumentError("p must be in the open interval (0, 1)")
    if f_c_ghz <= 0:
        raise InvalidArgumentError("frequency must be positive")
    lf = math.log10(f_c_ghz)
    l_h = coeffs.r + coeffs.s * lf + coeffs.t * lf * lf
    l_e = _BEL_ELEVATION_SLOPE * abs(elevation_deg)
    mu1 = l_h + l_e
    mu2 = coeffs.w + coeffs.x * lf
    sigma1 = coeffs.u + coeffs.v * lf
    sigma2 = coeffs.y + coeffs.z * lf
    z = ndtri(p)
    a = mu1 + sigma1 * z
    b = mu2 + sigma2 * z
    out = 10 * np.log10(10 ** (0.1 * a) + 10 ** (0.1 * b) + 10 ** (0.1 * _BEL_FLOOR_DB))
    return float(out) if out.ndim == 0 else out


def path_loss_db(tables: ChannelTables, params: LinkParams, ue: UESample) -> float:
    """Total path loss for one UE: basic loss plus entry loss when indoors."""
    idx = tables.bucket_index(ue.elevation_deg)
    d = slant_range_km(params.haps_height_km, ue.elevation_deg)
    basic = fspl_db(d, params.f_c_ghz)
    if ue.los:
        basic += ue.sf_draw * tables.sf_sigma_los[idx] + tables.clutter_los[idx]
    else:
        basic += ue.sf_draw * tables.sf_sigma_nlos[idx] + tables.clutter_nlos[idx]
    entry = 0.0
    if ue.indoor:
        cls = "traditional" if ue.traditional else "thermally_efficient"
        entry = building_entry_loss_db(tables.bel[cls], params.f_c_ghz, ue.elevation_deg, ue.bel_p)
    return basic + entry


def snr_db(params: LinkParams, pl_db) -> float:
    """Received SNR in dB for a given total path loss."""
    gain = tx_array_gain_dbi(params.g_element_dbi, params.n_rows, params.m_cols)
    out = params.p_tx_dbm + gain + params.g_rx_dbi - np.asarray(pl_db, dtype=float) - params.noise_dbm
    return float(out) if out.ndim == 0 else out


def ue_rate_bps(params: LinkParams, snr_db):
    """Shannon rate over the configured channel bandwidth."""
    snr_lin = 10 ** (np.asarray(snr_db, dtype=float) / 10)
    out = params.bandwidth_hz * np.log2(1 + snr_lin)
    return float(out) if out.ndim == 0 else out
