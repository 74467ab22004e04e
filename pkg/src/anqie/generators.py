"""Deterministic generators for the concrete sequence families under study.

Irrational rotation parameters are resolved symbolically (mpmath) and
then frozen to 96-bit fixed point, so fractional parts, Sturmian
comparisons, and angular bins are computed exactly in integer arithmetic
over the generated prefix.  Claims downstream are about the generated
finite prefix, not the ideal irrational.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from mpmath import mp

from .seqcore import Alphabet, DataError, NumericSequence, SymbolicSequence

__all__ = ["GeneratorSpec", "generate", "zigzag_map", "resolve_theta",
           "theta_fixed_point", "KINDS"]

KINDS = ("periodic", "sturmian", "quadratic_phase", "rotation_orbit",
         "doubling_orbit", "zigzag_orbit", "champernowne",
         "prime_indicator", "delta", "iid_random")

_FP_BITS = 96
_FP_ONE = 1 << _FP_BITS
_FP_MASK = _FP_ONE - 1

_NAMED_THETA = {
    "sqrt2": lambda: mp.sqrt(2),
    "sqrt2-1": lambda: mp.sqrt(2) - 1,
    "sqrt3": lambda: mp.sqrt(3),
    "golden": lambda: (mp.sqrt(5) - 1) / 2,
    "e": lambda: mp.e,
    "pi": lambda: mp.pi,
}


def resolve_theta(theta) -> "mp.mpf":
    """Resolve a rotation parameter: a named constant or a numeric literal."""
    with mp.workdps(60):
        if isinstance(theta, str):
            key = theta.strip().lower()
            if key in _NAMED_THETA:
                return _NAMED_THETA[key]()
            try:
                return mp.mpf(key)
            except ValueError:
                raise DataError(f"cannot parse theta {theta!r}") from None
        return mp.mpf(theta)


def theta_fixed_point(theta) -> int:
    """Fractional part of theta as a 96-bit fixed-point integer."""
    with mp.workdps(60):
        t = resolve_theta(theta)
        return int(mp.floor(mp.frac(t) * _FP_ONE)) % _FP_ONE


@dataclass(frozen=True)
class GeneratorSpec:
    """One reproducible sequence request; identical specs generate
    bit-identical output."""

    kind: str
    n: int
    pattern: tuple = None        # periodic
    theta: object = None         # sturmian / quadratic_phase / rotation_orbit
    bins: int = None             # angular or value bins -> symbolic output
    x0: float = None             # rotation_orbit / zigzag_orbit start point
    base: int = None             # champernowne digit base
    support: int = None          # delta: the single index carrying a 1
    probs: tuple = None          # iid_random symbol probabilities
    seed: int = None             # iid_random / doubling_orbit

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DataError(f"unknown generator kind {self.kind!r}")
        if self.n < 1:
            raise DataError("n must be >= 1")
        if self.pattern is not None:
            object.__setattr__(self, "pattern", tuple(self.pattern))
        if self.probs is not None:
            object.__setattr__(self, "probs", tuple(float(p) for p in self.probs))

    @classmethod
    def from_dict(cls, d: dict) -> "GeneratorSpec":
        allowed = {"kind", "n", "pattern", "theta", "bins", "x0", "base",
                   "support", "probs", "seed"}
        extra = set(d) - allowed
        if extra:
            raise DataError(f"unknown generator fields: {sorted(extra)}")
        return cls(**d)

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "n": self.n}
        for name in ("pattern", "theta", "bins", "x0", "base", "support",
                     "probs", "seed"):
            v = getattr(self, name)
            if v is not None:
                out[name] = list(v) if isinstance(v, tuple) else v
        return out


def _require_unit_interval_theta(tf: int, theta) -> None:
    if tf == 0:
        raise DataError(f"theta {theta!r} has zero fractional part")


def _unit_theta_fp(theta, default: str) -> int:
    """Fixed point of a rotation angle that must lie strictly in (0,1)."""
    theta = theta if theta is not None else default
    with mp.workdps(60):
        t = resolve_theta(theta)
        if not 0 < t < 1:
            raise DataError(f"theta {theta!r} must be in (0,1)")
    return theta_fixed_point(theta)


def _frac_fixed(theta_fp: int, n: int, x0_fp: int = 0) -> list[int]:
    """Exact fixed-point fractional parts x0 + k*theta mod 1, k = 0..n-1."""
    out = []
    acc = x0_fp % _FP_ONE
    for _ in range(n):
        out.append(acc)
        acc = (acc + theta_fp) & _FP_MASK
    return out


def _quad_frac_fixed(theta_fp: int, n: int, start: int = 0) -> list[int]:
    """Exact fixed-point fractional parts of k^2 * theta, k = start..start+n-1."""
    out = []
    acc = (start * start * theta_fp) & _FP_MASK
    odd = ((2 * start + 1) * theta_fp) & _FP_MASK
    two = (2 * theta_fp) & _FP_MASK
    for _ in range(n):
        out.append(acc)
        acc = (acc + odd) & _FP_MASK
        odd = (odd + two) & _FP_MASK
    return out


def _fp_to_float(fps) -> np.ndarray:
    return np.asarray([f / _FP_ONE for f in fps], dtype=np.float64)


def _fp_to_bins(fps, k: int) -> np.ndarray:
    # floor(frac * k) is exact in integer arithmetic
    return np.asarray([(f * k) >> _FP_BITS for f in fps], dtype=np.int32)


def _bin_symbolic(sym: np.ndarray) -> SymbolicSequence:
    return SymbolicSequence.from_labels(int(s) for s in sym)


def _float_bins(x: np.ndarray, k: int) -> SymbolicSequence:
    b = np.minimum((x * k).astype(np.int64), k - 1).astype(np.int32)
    return _bin_symbolic(b)


def zigzag_map(x: float) -> float:
    """Tent cascade on [0,1]: band n = [1-2^-n, 1-2^-n-1) is split into
    2^(n^2) equal subintervals, each carrying a tent of height 2^(-n/2)
    with zeros at the subinterval endpoints; F(1) = 0.

    Bands past n = 40 are below float resolution and map to 0.
    """
    if not 0.0 <= x <= 1.0:
        raise DataError(f"zigzag_map domain is [0,1], got {x}")
    u = 1.0 - x
    if u == 0.0:
        return 0.0
    band = int(math.floor(-math.log2(u)))
    if band > 40:
        return 0.0
    left = 1.0 - 2.0 ** (-band)
    if x < left:            # float log slipped across the band edge
        band -= 1
        left = 1.0 - 2.0 ** (-band)
    width = 2.0 ** (-band - 1 - band * band)
    off = x - left
    i = min(max(int(math.floor(off / width)), 0), (1 << (band * band)) - 1)
    pos = off - i * width
    height = 2.0 ** (-band / 2.0)
    return height * (1.0 - abs(2.0 * pos / width - 1.0))


def _gen_periodic(spec) -> SymbolicSequence:
    if not spec.pattern:
        raise DataError("periodic needs a nonempty pattern")
    reps = -(-spec.n // len(spec.pattern))
    labels = (list(spec.pattern) * reps)[: spec.n]
    return SymbolicSequence.from_labels(labels)


def _gen_sturmian(spec) -> SymbolicSequence:
    tf = _unit_theta_fp(spec.theta, "sqrt2-1")
    sym = np.empty(spec.n, dtype=np.int32)
    prev = 0
    acc = tf
    for i in range(spec.n):
        # 1 exactly when frac((i+1) theta) < frac(i theta)
        sym[i] = 1 if acc < prev else 0
        prev = acc
        acc = (acc + tf) & _FP_MASK
    alpha = Alphabet((0, 1)) if sym.max() == 1 else Alphabet((0,))
    return SymbolicSequence(alpha, sym)


def _gen_quadratic_phase(spec):
    tf = theta_fixed_point(spec.theta if spec.theta is not None else "sqrt2")
    _require_unit_interval_theta(tf, spec.theta)
    fps = _quad_frac_fixed(tf, spec.n)
    if spec.bins is not None:
        if spec.bins < 1:
            raise DataError("bins must be >= 1")
        return _bin_symbolic(_fp_to_bins(fps, spec.bins))
    frac = _fp_to_float(fps)
    return NumericSequence(np.exp(2j * np.pi * frac))


def _gen_rotation(spec):
    tf = _unit_theta_fp(spec.theta, "sqrt2-1")
    x0 = spec.x0 if spec.x0 is not None else 0.0
    if not 0.0 <= x0 < 1.0:
        raise DataError("rotation x0 must be in [0,1)")
    x0_fp = int(x0 * _FP_ONE)
    fps = _frac_fixed(tf, spec.n, x0_fp)
    if spec.bins is not None:
        return _bin_symbolic(_fp_to_bins(fps, spec.bins))
    return NumericSequence(_fp_to_float(fps).astype(np.complex128))


def _gen_doubling(spec):
    # sliding 53-bit windows over a seeded bit stream: exact doubling
    # dynamics with no float bit decay
    seed = spec.seed if spec.seed is not None else 0
    rng = np.random.default_rng(seed)
    bits = rng.integers(0, 2, spec.n + 52, dtype=np.int64)
    if spec.bins is not None:
        k = spec.bins
        if k < 1 or k & (k - 1):
            raise DataError("doubling bins must be a power of two")
        w = k.bit_length() - 1
        win = np.zeros(spec.n, dtype=np.int64)
        for j in range(w):
            win = win * 2 + bits[j:j + spec.n]
        return _bin_symbolic(win.astype(np.int32))
    x = np.zeros(spec.n, dtype=np.float64)
    for j in range(53):
        x += bits[j:j + spec.n] * 2.0 ** (-j - 1)
    return NumericSequence(x.astype(np.complex128))


def _gen_zigzag(spec):
    x = spec.x0 if spec.x0 is not None else 0.2907
    if not 0.0 <= x <= 1.0:
        raise DataError("zigzag x0 must be in [0,1]")
    vals = np.empty(spec.n, dtype=np.float64)
    for i in range(spec.n):
        vals[i] = x
        x = zigzag_map(x)
    if spec.bins is not None:
        return _float_bins(vals, spec.bins)
    return NumericSequence(vals.astype(np.complex128))


def _gen_champernowne(spec) -> SymbolicSequence:
    base = spec.base if spec.base is not None else 2
    if not 2 <= base <= 36:
        raise DataError("champernowne base must be in 2..36")
    digits = []
    i = 0
    while len(digits) < spec.n:
        if i == 0:
            digits.append(0)
        else:
            chunk = []
            v = i
            while v:
                chunk.append(v % base)
                v //= base
            digits.extend(reversed(chunk))
        i += 1
    sym = np.asarray(digits[: spec.n], dtype=np.int32)
    return _bin_symbolic(sym)


def _gen_prime_indicator(spec) -> SymbolicSequence:
    n = spec.n
    sieve = np.ones(n, dtype=bool)
    sieve[: min(2, n)] = False
    p = 2
    while p * p < n:
        if sieve[p]:
            sieve[p * p:: p] = False
        p += 1
    return _bin_symbolic(sieve.astype(np.int32))


def _gen_delta(spec) -> SymbolicSequence:
    m = spec.support if spec.support is not None else 0
    if m < 0:
        raise DataError("delta support must be >= 0")
    sym = np.zeros(spec.n, dtype=np.int32)
    if m < spec.n:
        sym[m] = 1
    return _bin_symbolic(sym)


def _gen_iid(spec) -> SymbolicSequence:
    probs = spec.probs if spec.probs is not None else (0.5, 0.5)
    if any(p < 0 for p in probs) or abs(sum(probs) - 1.0) > 1e-9:
        raise DataError("probs must be nonnegative and sum to 1")
    seed = spec.seed if spec.seed is not None else 0
    rng = np.random.default_rng(seed)
    edges = np.cumsum(probs)
    draws = np.searchsorted(edges, rng.random(spec.n), side="right")
    draws = np.minimum(draws, len(probs) - 1).astype(np.int32)
    return _bin_symbolic(draws)


_DISPATCH = {
    "periodic": _gen_periodic,
    "sturmian": _gen_sturmian,
    "quadratic_phase": _gen_quadratic_phase,
    "rotation_orbit": _gen_rotation,
    "doubling_orbit": _gen_doubling,
    "zigzag_orbit": _gen_zigzag,
    "champernowne": _gen_champernowne,
    "prime_indicator": _gen_prime_indicator,
    "delta": _gen_delta,
    "iid_random": _gen_iid,
}


@functools.lru_cache(maxsize=32)
def _generate_cached(spec: GeneratorSpec):
    return _DISPATCH[spec.kind](spec)


def generate(spec: GeneratorSpec):
    """Produce the sequence for a spec.  Outputs are immutable and cached,
    so repeated requests for the same spec share one object."""
    return _generate_cached(spec)
