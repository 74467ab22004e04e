"""Entropy estimates from block profiles, with reliability diagnostics.

The point estimate is h_m = ln(b_count(m))/m at the largest m whose
window count still dominates the distinct-block count (coverage rule).
ln b_count is subadditive, so over the infinite sequence h = inf_m h_m;
the largest reliable m is the least-biased finite surrogate.  A least
squares slope over the reliable range is reported as a secondary
readout only.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .blockcount import BlockProfile, profile
from .seqcore import DataError, SymbolicSequence

__all__ = ["EntropyReport", "estimate", "entropy_of", "zigzag_lower_bound"]

LN2 = math.log(2.0)


@dataclass(frozen=True)
class EntropyReport:
    profile: BlockProfile
    h_values: tuple          # (m, ln b_count / m), in the report's units
    h_regular: tuple         # (m, ln r_count / m)
    point_estimate: float
    m_star: int
    saturated: bool
    reliability_ratio: float
    regression_slope: float  # secondary readout, never drives acceptance
    units: str = "nats"

    def to_json_dict(self) -> dict:
        return {
            "estimate": self.point_estimate,
            "units": self.units,
            "m_star": self.m_star,
            "saturated": self.saturated,
            "reliability_ratio": self.reliability_ratio,
            "regression_slope": self.regression_slope,
            "profile": self.profile.to_json_dict(),
            "h": [{"m": m, "h_m": h} for m, h in self.h_values],
            "h_regular": [{"m": m, "h_m": h} for m, h in self.h_regular],
        }


def estimate(prof: BlockProfile, min_coverage: float = 50.0,
             units: str = "nats") -> EntropyReport:
    """Turn a profile into a point estimate with diagnostics.

    m_star is the largest m with positions_b(m) >= min_coverage * b_count(m).
    If no m >= 2 qualifies the estimate is flagged saturated and falls back
    to argmin_m h_m, which is biased low; treat it as an upper-bound hint.
    """
    if units not in ("nats", "bits"):
        raise DataError(f"unknown units {units!r}")
    if min_coverage <= 0:
        raise DataError("min_coverage must be positive")
    rows = prof.rows
    if not rows:
        raise DataError("empty profile")
    h_nats = [(r.m, math.log(r.b_count) / r.m) for r in rows]
    hr_nats = [(r.m, math.log(r.r_count) / r.m) for r in rows]
    qualified = [r.m for r in rows
                 if r.m >= 2 and r.positions_b >= min_coverage * r.b_count]
    if qualified:
        m_star = max(qualified)
        saturated = False
    else:
        m_star = min(h_nats, key=lambda t: (t[1], t[0]))[0]
        saturated = True
        warnings.warn(
            "no m >= 2 meets the coverage rule; falling back to argmin h_m "
            "(estimate unreliable)", stacklevel=2)
    row = prof.row(m_star)
    point = math.log(row.b_count) / m_star
    ratio = row.positions_b / row.b_count
    # secondary readout: least squares slope of ln b_count(m) on m <= m_star
    ms = np.arange(1, m_star + 1, dtype=float)
    lnb = np.asarray([math.log(prof.row(int(m)).b_count) for m in ms])
    slope = float(np.polyfit(ms, lnb, 1)[0]) if len(ms) >= 2 else 0.0
    scale = 1.0 if units == "nats" else 1.0 / LN2
    return EntropyReport(
        profile=prof,
        h_values=tuple((m, h * scale) for m, h in h_nats),
        h_regular=tuple((m, h * scale) for m, h in hr_nats),
        point_estimate=point * scale,
        m_star=m_star,
        saturated=saturated,
        reliability_ratio=ratio,
        regression_slope=slope * scale,
        units=units,
    )


def entropy_of(seq: SymbolicSequence, m_max: int | None = None,
               min_coverage: float = 50.0, units: str = "nats") -> EntropyReport:
    """profile + estimate in one step."""
    return estimate(profile(seq, m_max), min_coverage, units)


def zigzag_lower_bound(m: int) -> float:
    """ln(a_m)/(m+1) with a_m = sum_{j=0}^{4m} 2^(j^2), in nats.

    a_m counts the distinct monotone laps of the (m+1)-st iterate of the
    zigzag interval map on [0, 2^(-2m)]; the bound exceeds
    (4m)^2 ln(2)/(m+1), which is unbounded in m.  Exact big-integer sum,
    so no float overflow for any m.
    """
    if m < 1:
        raise DataError("m must be >= 1")
    a_m = sum(1 << (j * j) for j in range(4 * m + 1))
    return math.log(a_m) / (m + 1)
