"""Exact combinatorial verification of the entropy inequalities.

Every inequality is checked at the block-count level, where it is a
theorem of finite combinatorics on any prefix; a failure is an
implementation bug, never a tolerance issue.  Entropy-estimate
comparisons are reported as informational only.
"""

from __future__ import annotations

import cmath
import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .blockcount import profile
from .generators import GeneratorSpec, generate
from .seqcore import DataError, SymbolicSequence, joint, recode, shift

__all__ = [
    "LawVerdict",
    "law_joint_domination",
    "law_pointwise_function",
    "law_shift_invariance",
    "law_levelset",
    "law_recode_invariance",
    "independence_check",
    "weyl_sums",
    "default_lattice",
    "law_suite",
    "DEFAULT_BATTERY",
    "thread_count",
]


@dataclass(frozen=True)
class LawVerdict:
    """Outcome of one law on one input (pair)."""

    law: str
    subject: str
    passed: bool
    exact: bool               # integer comparisons only when True
    lhs: float
    rhs: float
    details: tuple            # per-m rows: (m, lhs, rhs)
    slack: float = 0.0

    def to_json_dict(self) -> dict:
        return {
            "law": self.law,
            "subject": self.subject,
            "passed": self.passed,
            "exact": self.exact,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "details": [list(row) for row in self.details],
        }


def _worst(details):
    # representative lhs/rhs: the row with the smallest margin
    row = min(details, key=lambda r: (r[2] - r[1], r[0]))
    return row[1], row[2]


def law_joint_domination(f: SymbolicSequence, g: SymbolicSequence,
                         m_max: int, subject: str = "") -> LawVerdict:
    """|B_m(f,g)| <= |B_m(f)| * |B_m(g)| for every m, exactly."""
    if f.n != g.n:
        raise DataError("joint domination needs equal lengths")
    bj = profile(joint([f, g]).as_symbolic(), m_max).b_counts()
    bf = profile(f, m_max).b_counts()
    bg = profile(g, m_max).b_counts()
    details = tuple((m + 1, int(bj[m]), int(bf[m] * bg[m]))
                    for m in range(m_max))
    lhs, rhs = _worst(details)
    return LawVerdict("joint_domination", subject,
                      all(l <= r for _, l, r in details), True, lhs, rhs,
                      details)


def law_pointwise_function(f: SymbolicSequence, g: SymbolicSequence,
                           op, m_max: int, subject: str = "") -> LawVerdict:
    """|B_m(op(f,g))| <= |B_m(f,g)| for every m: a symbolwise image of the
    joint sequence cannot have more blocks than the joint sequence."""
    if f.n != g.n:
        raise DataError("pointwise law needs equal lengths")
    jt = joint([f, g]).as_symbolic()
    out = recode(jt, lambda pair: op(pair[0], pair[1]))
    bo = profile(out, m_max).b_counts()
    bj = profile(jt, m_max).b_counts()
    details = tuple((m + 1, int(bo[m]), int(bj[m])) for m in range(m_max))
    lhs, rhs = _worst(details)
    return LawVerdict("pointwise_function", subject,
                      all(l <= r for _, l, r in details), True, lhs, rhs,
                      details)


def law_shift_invariance(f: SymbolicSequence, k: int, m_max: int,
                         subject: str = "") -> LawVerdict:
    """B_m(shift(f,k)) is a subset of B_m(f), and the count gap is <= k."""
    sh = shift(f, k)
    m_top = min(m_max, sh.n)
    details = []
    ok = True
    for m in range(1, m_top + 1):
        full = set(_windows(f, m))
        sub = set(_windows(sh, m))
        inc = sub <= full
        gap_ok = len(full) <= len(sub) + k
        ok = ok and inc and gap_ok
        details.append((m, len(sub), len(full)))
    lhs, rhs = _worst(details)
    return LawVerdict("shift_invariance", subject, ok, True, lhs, rhs,
                      tuple(details))


def _windows(seq: SymbolicSequence, m: int):
    buf = seq.symbols.tobytes()
    w = seq.symbols.itemsize
    return (buf[i * w:(i + m) * w] for i in range(seq.n - m + 1))


def law_levelset(f: SymbolicSequence, label, m_max: int,
                 subject: str = "") -> LawVerdict:
    """|B_m(chi_{f=label})| <= |B_m(f)| for every m, exactly."""
    from .seqcore import _label_key
    key = _label_key(label)
    chi = recode(f, lambda lab: 1 if _label_key(lab) == key else 0)
    bc = profile(chi, m_max).b_counts()
    bf = profile(f, m_max).b_counts()
    details = tuple((m + 1, int(bc[m]), int(bf[m])) for m in range(m_max))
    lhs, rhs = _worst(details)
    return LawVerdict("levelset", subject,
                      all(l <= r for _, l, r in details), True, lhs, rhs,
                      details)


def law_recode_invariance(f: SymbolicSequence, m_max: int,
                          subject: str = "") -> LawVerdict:
    """An injective symbolwise map leaves every block count unchanged."""
    injected = recode(f, lambda lab: ("inj", lab))
    pf = profile(f, m_max)
    pi = profile(injected, m_max)
    details = tuple(
        (m + 1, int(pi.b_counts()[m]), int(pf.b_counts()[m]))
        for m in range(m_max)
    )
    same_r = np.array_equal(pf.r_counts(), pi.r_counts())
    same_idx = np.array_equal(f.symbols, injected.symbols)
    ok = all(l == r for _, l, r in details) and same_r and same_idx
    lhs, rhs = _worst(details)
    return LawVerdict("recode_invariance", subject, ok, True, lhs, rhs,
                      details)


def independence_check(f: SymbolicSequence, g: SymbolicSequence,
                       m_max: int, subject: str = "") -> LawVerdict:
    """Report whether b_joint(m) = b_f(m) * b_g(m) at every tested m.

    Equality at all tested m is necessary for anqie independence but not
    sufficient, so the flag means "consistent with independence".
    """
    if f.n != g.n:
        raise DataError("independence check needs equal lengths")
    bj = profile(joint([f, g]).as_symbolic(), m_max).b_counts()
    bf = profile(f, m_max).b_counts()
    bg = profile(g, m_max).b_counts()
    details = tuple((m + 1, int(bj[m]), int(bf[m] * bg[m]))
                    for m in range(m_max))
    flag = all(l == r for _, l, r in details)
    lhs, rhs = _worst(details)
    return LawVerdict("independence", subject, flag, True, lhs, rhs, details)


def default_lattice(dim: int, bound: int = 3) -> list[tuple]:
    """All nonzero integer vectors with sup-norm <= bound."""
    vecs = [v for v in itertools.product(range(-bound, bound + 1), repeat=dim)
            if any(v)]
    return vecs


def weyl_sums(points, lattice, N: int) -> tuple[float, list[float]]:
    """max over lattice vectors l of |1/N sum_n e^(2 pi i l.x_n)|.

    The dot product is reduced mod 1 before exponentiating, so rational
    inputs whose multiples are integers give exactly 1.0.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts[:, None]
    if N > len(pts) or N < 1:
        raise DataError(f"N={N} exceeds available points {len(pts)}")
    lattice = [tuple(int(c) for c in l) for l in lattice]
    if not lattice:
        raise DataError("lattice must be nonempty")
    for l in lattice:
        if len(l) != pts.shape[1]:
            raise DataError(f"lattice vector {l} has wrong dimension")
        if not any(l):
            raise DataError("lattice contains the zero vector")
    pts = pts[:N]
    per = []
    for l in lattice:
        phase = (pts @ np.asarray(l, dtype=np.float64)) % 1.0
        s = np.exp(2j * np.pi * phase).sum() / N
        per.append(float(abs(s)))
    return max(per), per


def weyl_sums_naive(points, lattice, N: int) -> tuple[float, list[float]]:
    """Second route for the same quantity: sequential scalar accumulation
    in point order, kept independent of the vectorized path."""
    pts = [tuple(float(c) for c in (p if hasattr(p, "__len__") else (p,)))
           for p in points[:N]]
    per = []
    for l in lattice:
        acc = 0 + 0j
        for p in pts:
            phase = math.fsum(c * x for c, x in zip(l, p)) % 1.0
            acc += cmath.exp(2j * math.pi * phase)
        per.append(abs(acc) / N)
    return max(per), per


def thread_count() -> int:
    """Worker cap for the law suite, from ANQIE_THREADS when set."""
    env = os.environ.get("ANQIE_THREADS", "").strip()
    if env:
        try:
            v = int(env)
        except ValueError:
            raise DataError(f"ANQIE_THREADS not an integer: {env!r}") from None
        return max(1, v)
    return min(8, os.cpu_count() or 1)


DEFAULT_BATTERY = {
    "m_max": 8,
    "laws": ["joint_domination", "pointwise_function", "shift_invariance",
             "levelset", "recode_invariance"],
    "specs": [
        {"kind": "periodic", "n": 20000, "pattern": [0, 1]},
        {"kind": "periodic", "n": 20000, "pattern": [0, 1, 2]},
        {"kind": "periodic", "n": 20000,
         "pattern": list(range(12))},
        {"kind": "sturmian", "n": 20000, "theta": "sqrt2-1"},
        {"kind": "quadratic_phase", "n": 20000, "theta": "sqrt2", "bins": 8},
        {"kind": "champernowne", "n": 20000},
        {"kind": "prime_indicator", "n": 20000},
        {"kind": "delta", "n": 2000, "support": 5},
        {"kind": "iid_random", "n": 20000, "probs": [0.5, 0.5], "seed": 1},
        {"kind": "iid_random", "n": 20000,
         "probs": [0.25, 0.25, 0.25, 0.25], "seed": 2},
    ],
}


def _battery_sequences(config) -> list[tuple[str, SymbolicSequence]]:
    out = []
    for d in config["specs"]:
        spec = GeneratorSpec.from_dict(dict(d))
        seq = generate(spec)
        if not isinstance(seq, SymbolicSequence):
            raise DataError(f"battery spec {d} is not symbolic")
        name = spec.kind
        if spec.kind == "periodic":
            name += f"[{len(spec.pattern)}]"
        if spec.seed is not None:
            name += f"#s{spec.seed}"
        out.append((name, seq))
    return out


def _truncate_pair(f, g):
    n = min(f.n, g.n)
    return (SymbolicSequence(f.alphabet, f.symbols[:n]),
            SymbolicSequence(g.alphabet, g.symbols[:n]))


def law_suite(config=None) -> list[LawVerdict]:
    """Run the selected laws over a battery of generated sequences.

    Tasks fan out over a thread pool (capped by ANQIE_THREADS) and the
    verdict list is assembled in task submission order, so output is
    deterministic regardless of worker count.
    """
    if config is None:
        config = DEFAULT_BATTERY
    m_max = int(config.get("m_max", 8))
    laws = list(config.get("laws", DEFAULT_BATTERY["laws"]))
    seqs = _battery_sequences(config)
    tasks = []

    def add(fn, *args):
        tasks.append((fn, args))

    pairs = list(itertools.combinations(range(len(seqs)), 2))
    pairs += [(0, 0)]
    for law in laws:
        if law == "joint_domination":
            for i, j in pairs:
                (ni, si), (nj, sj) = seqs[i], seqs[j]
                f, g = _truncate_pair(si, sj)
                add(law_joint_domination, f, g, m_max, f"{ni}|{nj}")
        elif law == "pointwise_function":
            for i, j in pairs:
                (ni, si), (nj, sj) = seqs[i], seqs[j]
                f, g = _truncate_pair(si, sj)
                add(law_pointwise_function, f, g, _label_pair_op, m_max,
                    f"{ni}|{nj}")
        elif law == "shift_invariance":
            for k in (1, 3):
                for name, s in seqs:
                    if k < s.n:
                        add(law_shift_invariance, s, k, m_max, f"{name}+{k}")
        elif law == "levelset":
            for name, s in seqs:
                add(law_levelset, s, s.alphabet.values[0], m_max, name)
        elif law == "recode_invariance":
            for name, s in seqs:
                add(law_recode_invariance, s, m_max, name)
        else:
            raise DataError(f"unknown law {law!r}")

    workers = thread_count()
    if workers == 1:
        return [fn(*args) for fn, args in tasks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futs = [pool.submit(fn, *args) for fn, args in tasks]
        return [f.result() for f in futs]


def _label_pair_op(a, b):
    # a stand-in for f*g that stays total on arbitrary label pairs
    if isinstance(a, (int, float)) and isinstance(b, (int, float)):
        return a * b
    return (a, b, "prod")
