"""Epsilon-net quantization, block recoding, and zero-entropy separation.

All tie-breaking is by lowest index over deterministic first-occurrence
orderings, so repeated runs are bit-identical.  Ball membership is the
strict inequality |v - c| < eps throughout (open balls).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .seqcore import Alphabet, DataError, NumericSequence, SymbolicSequence

__all__ = [
    "Codebook",
    "PatternSet",
    "build_codebook",
    "quantize",
    "implify",
    "implify_staged",
    "separate",
    "approximate_orbit",
]

_CHUNK = 4096


@dataclass(frozen=True)
class Codebook:
    """Ordered ball centers; every trained value is strictly within radius."""

    centers: tuple
    radius: float

    def __post_init__(self):
        if self.radius <= 0:
            raise DataError("radius must be positive")
        object.__setattr__(self, "centers",
                           tuple(complex(c) for c in self.centers))

    @property
    def size(self) -> int:
        return len(self.centers)

    def to_json_dict(self) -> dict:
        return {
            "epsilon": self.radius,
            "centers": [{"re": c.real, "im": c.imag} for c in self.centers],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "Codebook":
        centers = tuple(complex(c["re"], c["im"]) for c in d["centers"])
        return cls(centers, float(d["epsilon"]))


@dataclass(frozen=True)
class PatternSet:
    """Chosen length-t center-index tuples, in greedy selection order."""

    t: int
    patterns: tuple

    def __post_init__(self):
        object.__setattr__(self, "patterns",
                           tuple(tuple(int(i) for i in p) for p in self.patterns))

    @property
    def size(self) -> int:
        return len(self.patterns)

    def to_json_dict(self) -> dict:
        return {"t": self.t, "patterns": [list(p) for p in self.patterns]}

    @classmethod
    def from_json_dict(cls, d: dict) -> "PatternSet":
        return cls(int(d["t"]), tuple(tuple(p) for p in d["patterns"]))


def build_codebook(values: NumericSequence, epsilon: float) -> Codebook:
    """First-fit cover: scan in order, new center whenever nothing covers.

    Centers come out pairwise >= epsilon apart and every training value
    lies strictly within epsilon of some center.
    """
    if epsilon <= 0:
        raise DataError("epsilon must be positive")
    vals = values.values
    centers: list[complex] = []
    arr = np.empty(0, dtype=np.complex128)
    i = 0
    n = len(vals)
    while i < n:
        if not centers:
            centers.append(complex(vals[0]))
            arr = np.asarray(centers)
            i = 1
            continue
        chunk = vals[i:i + _CHUNK]
        covered = (np.abs(chunk[:, None] - arr[None, :]) < epsilon).any(axis=1)
        miss = np.flatnonzero(~covered)
        if len(miss) == 0:
            i += len(chunk)
        else:
            j = int(miss[0])
            centers.append(complex(chunk[j]))
            arr = np.asarray(centers)
            i += j + 1
    return Codebook(tuple(centers), float(epsilon))


def _assign(vals: np.ndarray, codebook: Codebook) -> np.ndarray:
    """Lowest-index covering center per value; DataError if one is uncovered."""
    arr = np.asarray(codebook.centers)
    eps = codebook.radius
    out = np.empty(len(vals), dtype=np.int32)
    for i in range(0, len(vals), _CHUNK):
        chunk = vals[i:i + _CHUNK]
        near = np.abs(chunk[:, None] - arr[None, :]) < eps
        ok = near.any(axis=1)
        if not ok.all():
            bad = i + int(np.flatnonzero(~ok)[0])
            raise DataError(f"value {bad} uncovered by codebook")
        out[i:i + len(chunk)] = np.argmax(near, axis=1)
    return out


def _centers_alphabet(codebook: Codebook) -> Alphabet:
    return Alphabet(tuple(codebook.centers))


def quantize(values: NumericSequence, codebook: Codebook) -> SymbolicSequence:
    """Map each value to its lowest-index covering center."""
    return SymbolicSequence(_centers_alphabet(codebook),
                            _assign(values.values, codebook))


def _greedy_cover(cov: np.ndarray) -> list[int]:
    """Greedy set cover over a candidates-by-blocks boolean matrix.

    Returns candidate row indices in selection order: most uncovered
    blocks first, ties to the lowest row.  When no candidate gains more
    than one block the rest of the cover is forced (coverers are then
    pairwise disjoint on the remainder), so it is emitted in one pass.
    """
    uncovered = np.ones(cov.shape[1], dtype=bool)
    chosen: list[int] = []
    while uncovered.any():
        gains = (cov[:, uncovered]).sum(axis=1)
        k = int(np.argmax(gains))
        if gains[k] == 0:
            raise DataError("uncoverable block (inconsistent candidates)")
        if gains[k] == 1:
            rest = np.flatnonzero(uncovered)
            sub = cov[:, rest]
            if not sub.any(axis=0).all():
                raise DataError("uncoverable block (inconsistent candidates)")
            firsts = np.argmax(sub, axis=0)
            for k2 in sorted(set(int(x) for x in firsts)):
                chosen.append(k2)
            break
        chosen.append(k)
        uncovered &= ~cov[k]
    return chosen


def _first_occurrence_rows(mat: np.ndarray) -> np.ndarray:
    """Row indices of the distinct rows of mat, in first-occurrence order."""
    _, first = np.unique(mat, axis=0, return_index=True)
    return np.sort(first)


def _cover_matrix(cand_centers: np.ndarray, uniq_raw: np.ndarray,
                  eps: float) -> np.ndarray:
    """cov[k, u] = candidate k covers raw block u in every coordinate."""
    K = len(cand_centers)
    U = len(uniq_raw)
    cov = np.empty((K, U), dtype=bool)
    step = max(1, int(2e6) // max(1, U * uniq_raw.shape[1]))
    for k0 in range(0, K, step):
        part = cand_centers[k0:k0 + step]
        cov[k0:k0 + step] = (
            np.abs(uniq_raw[None, :, :] - part[:, None, :]) < eps
        ).all(axis=2)
    return cov


def _recode_blocks(vals: np.ndarray, codes: np.ndarray, codebook: Codebook,
                   t: int) -> tuple[np.ndarray, PatternSet]:
    """One recoding pass: cover the observed raw t-blocks by code-block
    patterns chosen greedily, then rewrite each aligned block to the first
    chosen pattern that covers it."""
    vals = vals + 0.0  # normalize signed zeros so bitwise block keys agree
    n = len(vals)
    centers = np.asarray(codebook.centers)
    eps = codebook.radius
    n0 = n - n % t
    code_blocks = codes[:n0].reshape(-1, t)
    raw_blocks = vals[:n0].reshape(-1, t)
    cand_rows = _first_occurrence_rows(code_blocks)
    cands = code_blocks[cand_rows]
    raw_view = np.stack([raw_blocks.real, raw_blocks.imag], axis=2)
    uniq_rows = _first_occurrence_rows(raw_view.reshape(len(raw_blocks), -1))
    uniq_raw = raw_blocks[uniq_rows]
    cov = _cover_matrix(centers[cands], uniq_raw, eps)
    chosen = _greedy_cover(cov)
    chosen_cov = cov[chosen]
    pat_of_uniq = np.argmax(chosen_cov, axis=0)
    # map every aligned block to its distinct-raw-block id
    keys = {raw_blocks[r].tobytes(): i for i, r in enumerate(uniq_rows)}
    out = codes.copy()
    pats = [cands[k] for k in chosen]
    for pos in range(len(raw_blocks)):
        u = keys[raw_blocks[pos].tobytes()]
        out[pos * t:(pos + 1) * t] = pats[pat_of_uniq[u]]
    return out, PatternSet(t, tuple(tuple(int(c) for c in p) for p in pats))


def implify(values: NumericSequence, epsilon: float,
            t: int) -> tuple[SymbolicSequence, PatternSet]:
    """Quantize pointwise, then merge regular t-blocks onto a greedy
    subcover of the observed quantized blocks.

    The output stays strictly within epsilon of the input everywhere, and
    its distinct regular t-block count never exceeds that of the pointwise
    quantization.  Cost is quadratic in the distinct-block count; meant
    for low-complexity quantized data.
    """
    if t < 1:
        raise DataError("t must be >= 1")
    if t > values.n:
        raise DataError(f"t={t} exceeds length {values.n}")
    codebook = build_codebook(values, epsilon)
    codes = _assign(values.values, codebook)
    if t == 1:
        pats = tuple((int(c),) for c in dict.fromkeys(codes.tolist()))
        return (SymbolicSequence(_centers_alphabet(codebook), codes),
                PatternSet(1, pats))
    out, patset = _recode_blocks(values.values, codes, codebook, t)
    return SymbolicSequence(_centers_alphabet(codebook), out), patset


def implify_staged(values: NumericSequence, epsilon: float,
                   schedule) -> tuple[SymbolicSequence, PatternSet]:
    """Iterated recoding with block lengths t_l = s_1 * ... * s_l.

    Stage one is implify at t = schedule[0]; each later stage re-derives
    patterns over blocks of the previous stage's output, against the same
    codebook and the original values.
    """
    schedule = [int(s) for s in schedule]
    if not schedule:
        raise DataError("schedule must be nonempty")
    if any(s < 2 for s in schedule):
        raise DataError("every schedule entry must be >= 2")
    total = 1
    for s in schedule:
        total *= s
    if total > values.n:
        raise DataError(f"schedule product {total} exceeds length {values.n}")
    codebook = build_codebook(values, epsilon)
    codes = _assign(values.values, codebook)
    t = 1
    patset = None
    for s in schedule:
        t *= s
        codes, patset = _recode_blocks(values.values, codes, codebook, t)
    return SymbolicSequence(_centers_alphabet(codebook), codes), patset


def approximate_orbit(orbit: NumericSequence, epsilon: float,
                      t: int) -> tuple[SymbolicSequence, PatternSet]:
    """implify applied to a generated orbit: a finite-range sequence that
    eps-shadows the orbit pointwise."""
    return implify(orbit, epsilon, t)


_FREE = 2


def separate(values: NumericSequence, a: float, b: float,
             t: int) -> SymbolicSequence:
    """0/1 indicator with {v >= b} forced to 1, {v <= a} forced to 0.

    Coordinates strictly between the thresholds are free; they are filled
    per distinct forced-mask t-block by reusing the first consistent
    previously chosen pattern (free coordinates default to 0 when a new
    pattern is needed, and the trailing partial block is filled
    pointwise).  The output's distinct regular t-block count is at most
    the input's distinct mask-block count.
    """
    if a >= b:
        raise DataError("need a < b")
    if t < 1:
        raise DataError("t must be >= 1")
    reals = values.real_values()
    n = len(reals)
    mask = np.where(reals >= b, 1, np.where(reals <= a, 0, _FREE)).astype(np.int8)
    out = np.empty(n, dtype=np.int32)
    n0 = n - n % t
    chosen: list[tuple] = []
    assigned: dict = {}
    mblocks = mask[:n0].reshape(-1, t)
    for pos in range(len(mblocks)):
        key = mblocks[pos].tobytes()
        sel = assigned.get(key)
        if sel is None:
            mb = mblocks[pos]
            for idx, p in enumerate(chosen):
                if all(mk == _FREE or mk == pv for mk, pv in zip(mb, p)):
                    sel = idx
                    break
            if sel is None:
                chosen.append(tuple(0 if mk == _FREE else int(mk) for mk in mb))
                sel = len(chosen) - 1
            assigned[key] = sel
        out[pos * t:(pos + 1) * t] = chosen[sel]
    tail = mask[n0:]
    out[n0:] = np.where(tail == _FREE, 0, tail)
    return SymbolicSequence(Alphabet((0, 1)), out)
