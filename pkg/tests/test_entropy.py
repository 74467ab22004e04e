import json
import math

import numpy as np
import pytest

from anqie.blockcount import profile
from anqie.entropy import (EntropyReport, entropy_of, estimate,
                           zigzag_lower_bound)
from anqie.generators import GeneratorSpec, generate
from anqie.seqcore import DataError, SymbolicSequence


def seq_of(labels):
    return SymbolicSequence.from_labels(list(labels))


def test_point_estimate_is_h_at_m_star():
    s = generate(GeneratorSpec(kind="iid_random", n=20000,
                               probs=(0.5, 0.5), seed=3))
    rep = entropy_of(s, 14)
    row = rep.profile.row(rep.m_star)
    assert rep.point_estimate == pytest.approx(math.log(row.b_count) / rep.m_star)
    assert not rep.saturated
    assert rep.reliability_ratio >= 50.0


def test_m_star_largest_covered():
    # period 2: b(m) = 2 everywhere, coverage holds up to m = n/100
    s = seq_of([0, 1] * 500)
    rep = entropy_of(s, 10)
    assert rep.m_star == 10
    assert rep.point_estimate == pytest.approx(math.log(2) / 10)


def test_saturated_fallback_warns():
    s = seq_of([0, 1, 1, 0, 1, 0, 0, 1])
    with pytest.warns(UserWarning):
        rep = estimate(profile(s, 4))
    assert rep.saturated
    # argmin of h_m over the profile
    h = [(m, v) for m, v in rep.h_values]
    best = min(h, key=lambda t: (t[1], t[0]))[0]
    assert rep.m_star == best


def test_min_coverage_knob():
    s = seq_of([0, 1] * 50)
    strict = estimate(profile(s, 5), min_coverage=45.0)
    assert strict.m_star == 5
    with pytest.warns(UserWarning):
        impossible = estimate(profile(s, 5), min_coverage=1e6)
    assert impossible.saturated


def test_units_bits_rescales_everything():
    s = generate(GeneratorSpec(kind="iid_random", n=50000,
                               probs=(0.5, 0.5), seed=9))
    nats = entropy_of(s, 12)
    bits = entropy_of(s, 12, units="bits")
    assert bits.units == "bits"
    assert bits.point_estimate == pytest.approx(nats.point_estimate / math.log(2))
    for (m1, h1), (m2, h2) in zip(nats.h_values, bits.h_values):
        assert m1 == m2
        assert h2 == pytest.approx(h1 / math.log(2))


def test_bad_units_rejected():
    s = seq_of([0, 1, 0, 1])
    with pytest.raises(DataError):
        entropy_of(s, 2, units="shannons")


def test_regression_slope_secondary():
    s = generate(GeneratorSpec(kind="iid_random", n=10**5,
                               probs=(0.5, 0.5), seed=4))
    rep = entropy_of(s, 14)
    # slope of ln b over the pre-saturation ramp stays near ln 2
    assert abs(rep.regression_slope - math.log(2)) < 0.08


def test_report_json_shape():
    s = seq_of([0, 1, 0, 0, 1, 1, 0, 1, 0, 0] * 30)
    rep = entropy_of(s, 6)
    d = rep.to_json_dict()
    assert set(d) >= {"estimate", "units", "m_star", "saturated",
                      "reliability_ratio", "regression_slope", "profile", "h"}
    json.dumps(d)  # must be serializable as-is
    assert len(d["h"]) == 6


def test_sturmian_estimate_drops_below_one_percent():
    s = generate(GeneratorSpec(kind="sturmian", n=10**5, theta="sqrt2-1"))
    rep = entropy_of(s, 1000)
    # b(m) = m+1 so h_1000 = ln(1001)/1000
    assert rep.point_estimate < 0.01
    assert rep.point_estimate == pytest.approx(math.log(1001) / 1000)


def test_zigzag_lower_bound_values():
    direct = math.log(sum(2 ** (j * j) for j in range(5))) / 2
    assert zigzag_lower_bound(1) == pytest.approx(direct, abs=1e-12)
    assert zigzag_lower_bound(1) == pytest.approx(math.log(66067) / 2, abs=1e-9)
    with pytest.raises(DataError):
        zigzag_lower_bound(0)


def test_zigzag_lower_bound_unbounded_growth():
    vals = [zigzag_lower_bound(m) for m in (1, 2, 4, 8, 16, 50)]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert vals[-1] > (4 * 50) ** 2 * math.log(2) / 51
    # far beyond float range for 2^(j^2): exactness of the big-int path
    assert zigzag_lower_bound(200) > (4 * 200) ** 2 * math.log(2) / 201


def test_comparative_entropy_zigzag_band_counts():
    # the m-th lower bound already dwarfs the doubling map's ln 2 rate
    assert zigzag_lower_bound(3) > 10 * math.log(2)
