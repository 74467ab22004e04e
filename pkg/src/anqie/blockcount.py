"""Distinct m-block counting, sliding and regular (aligned).

Two routes by design: a naive hashed-window counter kept as the oracle,
and a suffix-array engine that yields sliding counts for every m in one
pass.  Block identity is always the symbol-index tuple, never label
arithmetic.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .seqcore import DataError, SymbolicSequence

__all__ = [
    "ProfileRow",
    "BlockProfile",
    "count_sliding",
    "count_regular",
    "profile",
    "FactorCounter",
    "default_m_max",
    "sat_pow",
]

_SAT_CAP = 1 << 62


def sat_pow(base: int, exp: int, cap: int = _SAT_CAP) -> int:
    """base**exp saturated at cap, for overflow-free invariant checks."""
    out = 1
    for _ in range(exp):
        out *= base
        if out >= cap:
            return cap
    return out


def default_m_max(n: int) -> int:
    # beyond ~log2(n) the counts saturate and estimates mean nothing
    return min(n, int(math.floor(math.log2(n))) + 4) if n > 1 else 1


def _window_views(symbols: np.ndarray, m: int):
    """Iterate hashable views of all sliding m-windows."""
    if symbols.max(initial=0) < 256 and symbols.min(initial=0) >= 0:
        buf = symbols.astype(np.uint8).tobytes()
        return (buf[i:i + m] for i in range(len(symbols) - m + 1))
    data = symbols.tobytes()
    w = symbols.itemsize
    return (data[i * w:(i + m) * w] for i in range(len(symbols) - m + 1))


def count_sliding(seq: SymbolicSequence, m: int) -> int:
    """|B_m|: distinct length-m contiguous windows (naive hashed oracle)."""
    if not 1 <= m <= seq.n:
        raise DataError(f"m={m} out of range for length {seq.n}")
    return len(set(_window_views(seq.symbols, m)))


def count_regular(seq: SymbolicSequence, m: int) -> int:
    """|R_m|: distinct blocks at offsets 0, m, 2m, ... fully inside the prefix."""
    if not 1 <= m <= seq.n:
        raise DataError(f"m={m} out of range for length {seq.n}")
    symbols = seq.symbols
    if symbols.max(initial=0) < 256 and symbols.min(initial=0) >= 0:
        buf = symbols.astype(np.uint8).tobytes()
        return len({buf[i:i + m] for i in range(0, seq.n - m + 1, m)})
    data = symbols.tobytes()
    w = symbols.itemsize
    return len({data[i * w:(i + m) * w] for i in range(0, seq.n - m + 1, m)})


class FactorCounter:
    """Suffix-array engine over one immutable sequence.

    Build once (prefix doubling, O(n log n) with numpy lexsort), then read
    b_count for all m via the adjacent-suffix LCP array: window i is the
    first occurrence of its m-block iff lcp_prev(i) < m <= suffix_len(i),
    so a bincount difference array gives every m at once.
    """

    def __init__(self, symbols):
        if isinstance(symbols, SymbolicSequence):
            symbols = symbols.symbols
        sym = np.ascontiguousarray(symbols, dtype=np.int32)
        n = len(sym)
        if n < 1:
            raise DataError("empty sequence")
        self.n = n
        rank = np.unique(sym, return_inverse=True)[1].astype(np.int32)
        levels = [(1, rank)]
        k = 1
        sa = np.argsort(rank, kind="stable")
        while rank[sa[-1]] != n - 1 and k < n:
            second = np.full(n, -1, dtype=np.int32)
            second[: n - k] = rank[k:]
            sa = np.lexsort((second, rank))
            r_s = rank[sa]
            s_s = second[sa]
            changed = np.empty(n, dtype=np.int32)
            changed[0] = 0
            np.cumsum((r_s[1:] != r_s[:-1]) | (s_s[1:] != s_s[:-1]),
                      out=changed[1:])
            rank = np.empty(n, dtype=np.int32)
            rank[sa] = changed
            k *= 2
            levels.append((k, rank))
        self._sa = sa
        self._levels = levels
        self._lcp = self._adjacent_lcp()

    def _adjacent_lcp(self) -> np.ndarray:
        """LCP of neighbors in suffix order, via binary lifting on stored ranks."""
        n = self.n
        if n < 2:
            return np.zeros(0, dtype=np.int64)
        i = self._sa[:-1].astype(np.int64).copy()
        j = self._sa[1:].astype(np.int64).copy()
        lcp = np.zeros(n - 1, dtype=np.int64)
        for k, rank in reversed(self._levels):
            ok = (i + k <= n) & (j + k <= n)
            if not ok.any():
                continue
            eq = np.zeros(n - 1, dtype=bool)
            eq[ok] = rank[i[ok]] == rank[j[ok]]
            lcp[eq] += k
            i[eq] += k
            j[eq] += k
        return lcp

    def sliding_counts(self, m_max: int) -> np.ndarray:
        """b_count(m) for m = 1..m_max as an int64 array."""
        n = self.n
        suf_len = n - self._sa.astype(np.int64)
        lcp_full = np.concatenate(([0], self._lcp))
        lo = np.minimum(lcp_full + 1, m_max + 1)
        hi = np.minimum(suf_len, m_max)
        valid = lo <= hi
        add = np.bincount(lo[valid], minlength=m_max + 2)
        sub = np.bincount(hi[valid] + 1, minlength=m_max + 2)
        return np.cumsum(add - sub)[1:m_max + 1]

    def regular_count(self, m: int) -> int:
        """r_count(m) via m-prefix classes read off the suffix order.

        Suffixes sharing an m-prefix are contiguous among the suffixes of
        length >= m (a shorter suffix cannot sort strictly inside such a
        run), so class boundaries are exactly index gaps and lcp < m.
        """
        n = self.n
        sa = self._sa
        valid = sa <= n - m
        idx = np.flatnonzero(valid)
        gap = np.diff(idx) > 1
        low = self._lcp[idx[1:] - 1] < m
        newcls = np.concatenate(([True], gap | low))
        cls_sorted = np.cumsum(newcls) - 1
        cls = np.empty(n, dtype=np.int64)
        cls[sa[idx]] = cls_sorted
        aligned = np.arange(0, n - m + 1, m)
        return int(len(np.unique(cls[aligned])))


@dataclass(frozen=True)
class ProfileRow:
    m: int
    b_count: int
    r_count: int
    positions_b: int
    positions_r: int


@dataclass(frozen=True)
class BlockProfile:
    """Per-m distinct-block counts over one prefix."""

    n: int
    rows: tuple

    def row(self, m: int) -> ProfileRow:
        if not 1 <= m <= len(self.rows):
            raise DataError(f"no profile row for m={m}")
        return self.rows[m - 1]

    def b_counts(self) -> np.ndarray:
        return np.asarray([r.b_count for r in self.rows], dtype=np.int64)

    def r_counts(self) -> np.ndarray:
        return np.asarray([r.r_count for r in self.rows], dtype=np.int64)

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "rows": [
                {"m": r.m, "b": r.b_count, "r": r.r_count,
                 "pos_b": r.positions_b, "pos_r": r.positions_r}
                for r in self.rows
            ],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "BlockProfile":
        rows = tuple(
            ProfileRow(r["m"], r["b"], r["r"], r["pos_b"], r["pos_r"])
            for r in d["rows"]
        )
        return cls(int(d["n"]), rows)

    def to_csv(self) -> str:
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["m", "b", "r", "pos_b", "pos_r"])
        for r in self.rows:
            w.writerow([r.m, r.b_count, r.r_count, r.positions_b, r.positions_r])
        return out.getvalue()


def profile(seq: SymbolicSequence, m_max: int | None = None) -> BlockProfile:
    """Counts for every m in 1..m_max, b by the fast engine, r aligned."""
    n = seq.n
    if m_max is None:
        m_max = default_m_max(n)
    if not 1 <= m_max <= n:
        raise DataError(f"m_max={m_max} out of range for length {n}")
    eng = FactorCounter(seq.symbols)
    b = eng.sliding_counts(m_max)
    rows = []
    for m in range(1, m_max + 1):
        rows.append(ProfileRow(
            m=m,
            b_count=int(b[m - 1]),
            r_count=eng.regular_count(m),
            positions_b=n - m + 1,
            positions_r=n // m,
        ))
    return BlockProfile(n, tuple(rows))
