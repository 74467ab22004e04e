import math

import numpy as np
import pytest

from anqie.blockcount import count_sliding, profile
from anqie.generators import (GeneratorSpec, KINDS, generate, resolve_theta,
                              theta_fixed_point, zigzag_map)
from anqie.seqcore import DataError, NumericSequence, SymbolicSequence


def spec(**kw):
    return GeneratorSpec(**kw)


def test_kind_validation():
    with pytest.raises(DataError):
        spec(kind="nope", n=10)
    with pytest.raises(DataError):
        spec(kind="periodic", n=0, pattern=(0, 1))
    with pytest.raises(DataError):
        GeneratorSpec.from_dict({"kind": "periodic", "n": 4,
                                 "pattern": [0, 1], "bogus": 1})


def test_spec_dict_round_trip():
    s = spec(kind="iid_random", n=100, probs=(0.25, 0.75), seed=5)
    assert GeneratorSpec.from_dict(s.to_dict()) == s


def test_periodic_tiling():
    s = generate(spec(kind="periodic", n=7, pattern=(4, 5, 6)))
    assert s.labels() == [4, 5, 6, 4, 5, 6, 4]


def test_periodic_block_count_equals_period():
    s = generate(spec(kind="periodic", n=2000, pattern=tuple(range(12))))
    assert count_sliding(s, 5) == 12


def test_sturmian_complexity_m_plus_one():
    s = generate(spec(kind="sturmian", n=10**5, theta="sqrt2-1"))
    p = profile(s, 31)
    assert [r.b_count for r in p.rows] == [m + 1 for m in range(1, 32)]


def test_sturmian_density_matches_theta():
    s = generate(spec(kind="sturmian", n=10**5, theta="sqrt2-1"))
    ones = sum(s.labels())
    assert ones / s.n == pytest.approx(math.sqrt(2) - 1, abs=1e-3)


def test_sturmian_theta_outside_unit_interval_rejected():
    with pytest.raises(DataError):
        generate(spec(kind="sturmian", n=10, theta="sqrt2"))
    with pytest.raises(DataError):
        generate(spec(kind="rotation_orbit", n=10, theta=0.0))


def test_named_thetas_resolve():
    assert float(resolve_theta("golden")) == pytest.approx((5**0.5 - 1) / 2)
    assert float(resolve_theta("0.125")) == 0.125
    with pytest.raises(DataError):
        resolve_theta("one half")


def test_theta_fixed_point_is_exact_for_dyadics():
    assert theta_fixed_point(0.5) == 1 << 95
    assert theta_fixed_point(2.25) == 1 << 94


def test_quadratic_phase_numeric_lies_on_circle():
    s = generate(spec(kind="quadratic_phase", n=500, theta="sqrt2"))
    assert isinstance(s, NumericSequence)
    assert np.abs(np.abs(s.values) - 1.0).max() < 1e-12
    assert s.values[0] == 1.0 + 0j  # n = 0 term


def test_quadratic_phase_binned_is_symbolic():
    s = generate(spec(kind="quadratic_phase", n=2000, theta="sqrt2", bins=8))
    assert isinstance(s, SymbolicSequence)
    assert s.alphabet.size <= 8


def test_rotation_orbit_matches_slow_rotation():
    s = generate(spec(kind="rotation_orbit", n=1000, theta="sqrt2-1", x0=0.25))
    th = math.sqrt(2) - 1
    slow = [(0.25 + k * th) % 1.0 for k in range(1000)]
    assert np.abs(s.values.real - np.array(slow)).max() < 1e-9
    assert np.all(s.values.imag == 0)


def test_rotation_orbit_x0_validation():
    with pytest.raises(DataError):
        generate(spec(kind="rotation_orbit", n=10, theta="sqrt2-1", x0=1.5))


def test_doubling_orbit_binned_full_complexity():
    s = generate(spec(kind="doubling_orbit", n=5000, seed=3, bins=4))
    assert s.alphabet.size == 4
    # 4 bins = 2-bit windows; consecutive windows share a bit, so an
    # m-block is determined by m+1 raw bits
    assert count_sliding(s, 2) == 8
    assert count_sliding(s, 5) == 64


def test_doubling_orbit_bins_must_be_power_of_two():
    with pytest.raises(DataError):
        generate(spec(kind="doubling_orbit", n=100, seed=1, bins=5))


def test_doubling_orbit_numeric_halving():
    s = generate(spec(kind="doubling_orbit", n=200, seed=9))
    x = s.values.real
    # consecutive samples satisfy the doubling relation up to the one bit
    # that scrolls into the 53-bit window
    err = np.abs((2 * x[:-1]) % 1.0 - x[1:])
    assert np.minimum(err, 1.0 - err).max() <= 2.0**-53


def test_zigzag_map_anchor_values():
    assert zigzag_map(0.0) == 0.0
    assert zigzag_map(1.0) == 0.0
    # band 0 tent of height 1 over [0, 1/2]
    assert zigzag_map(0.25) == pytest.approx(1.0)
    assert zigzag_map(0.125) == pytest.approx(0.5)
    with pytest.raises(DataError):
        zigzag_map(-0.1)
    with pytest.raises(DataError):
        zigzag_map(1.1)


def test_zigzag_map_endpoint_zeros():
    # subinterval endpoints in band n = 1 (on [1/2, 3/4], 2 subintervals)
    for x in (0.5, 0.625, 0.75):
        assert zigzag_map(x) == 0.0


def test_zigzag_second_iterate_linear_on_small_interval():
    xs = np.linspace(0.0, 2.0**-4, 257)
    for x in xs:
        assert abs(zigzag_map(zigzag_map(float(x))) - 16 * float(x)) < 1e-12


def test_zigzag_orbit_reaches_absorbing_zero():
    s = generate(spec(kind="zigzag_orbit", n=64, x0=0.2907))
    x = s.values.real
    dead = np.flatnonzero(x == 0.0)
    assert dead.size > 0
    first = dead[0]
    assert np.all(x[first:] == 0.0)


def test_champernowne_contains_every_short_word():
    s = generate(spec(kind="champernowne", n=10**4))
    assert count_sliding(s, 3) == 8
    # digits of 0, 1, 10, 11, 100, 101, ...
    assert s.labels()[:12] == [0, 1, 1, 0, 1, 1, 1, 0, 0, 1, 0, 1]


def test_champernowne_base_10_digits():
    s = generate(spec(kind="champernowne", n=15, base=10))
    assert s.labels() == [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 1, 0, 1, 1, 1]


def test_prime_indicator_values():
    s = generate(spec(kind="prime_indicator", n=12))
    assert s.labels() == [0, 0, 1, 1, 0, 1, 0, 1, 0, 0, 0, 1]


def test_delta_sequence():
    s = generate(spec(kind="delta", n=8, support=3))
    assert s.labels() == [0, 0, 0, 1, 0, 0, 0, 0]
    t = generate(spec(kind="delta", n=4, support=9))
    assert t.labels() == [0, 0, 0, 0]


def test_iid_deterministic_given_seed():
    a = generate(spec(kind="iid_random", n=1000, probs=(0.3, 0.7), seed=42))
    b = generate(spec(kind="iid_random", n=1000, probs=(0.3, 0.7), seed=42))
    c = generate(spec(kind="iid_random", n=1000, probs=(0.3, 0.7), seed=43))
    assert np.array_equal(a.symbols, b.symbols)
    assert not np.array_equal(a.symbols, c.symbols)


def test_iid_probs_validation():
    with pytest.raises(DataError):
        generate(spec(kind="iid_random", n=10, probs=(0.5, 0.4), seed=1))


def test_iid_frequencies_roughly_match():
    s = generate(spec(kind="iid_random", n=10**5, probs=(0.2, 0.8), seed=8))
    freq = np.mean(np.array(s.labels()) == 0)
    assert freq == pytest.approx(0.2, abs=0.01)


def test_every_kind_generates():
    base = {
        "periodic": {"pattern": (0, 1)},
        "sturmian": {},
        "quadratic_phase": {},
        "rotation_orbit": {},
        "doubling_orbit": {"seed": 1},
        "zigzag_orbit": {},
        "champernowne": {},
        "prime_indicator": {},
        "delta": {"support": 2},
        "iid_random": {"probs": (0.5, 0.5), "seed": 1},
    }
    assert set(base) == set(KINDS)
    for kind, kw in base.items():
        out = generate(spec(kind=kind, n=50, **kw))
        assert len(out) == 50


def test_generate_is_cached_and_stable():
    a = generate(spec(kind="sturmian", n=500, theta="sqrt2-1"))
    b = generate(spec(kind="sturmian", n=500, theta="sqrt2-1"))
    assert a is b
