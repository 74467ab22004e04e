"""Core sequence types: finite prefixes of arithmetic sequences.

A symbolic sequence stores indices into a finite alphabet of labels; a
numeric sequence stores bounded complex values.  Everything is immutable
after construction so downstream counting can share data freely.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = [
    "Alphabet",
    "SymbolicSequence",
    "NumericSequence",
    "JointSequence",
    "DataError",
    "load_sequence",
    "save_sequence",
    "shift",
    "recode",
    "joint",
]


class DataError(ValueError):
    """Malformed or unusable input data (files, values, parameters)."""


def _label_key(label):
    # Exact identity for alphabet labels. Floats and complex parts are
    # compared bitwise via hex so 0.0 and -0.0 stay distinct.
    if isinstance(label, bool):
        raise DataError(f"bool label not supported: {label!r}")
    if isinstance(label, int):
        return ("i", label)
    if isinstance(label, str):
        return ("s", label)
    if isinstance(label, float):
        return ("f", label.hex())
    if isinstance(label, complex):
        return ("c", label.real.hex(), label.imag.hex())
    if isinstance(label, tuple):
        return ("t",) + tuple(_label_key(x) for x in label)
    raise DataError(f"unsupported label type: {type(label).__name__}")


def _label_token(label) -> str:
    """Single-line text form of a label, used by the tokens format."""
    if isinstance(label, (int, str)):
        tok = str(label)
    elif isinstance(label, float):
        tok = repr(float(label))
    elif isinstance(label, complex):
        tok = f"({float(label.real)!r},{float(label.imag)!r})"
    elif isinstance(label, tuple):
        tok = "|".join(_label_token(x) for x in label)
    else:
        raise DataError(f"unsupported label type: {type(label).__name__}")
    if "\n" in tok or "\r" in tok:
        raise DataError(f"label not representable as a token: {label!r}")
    return tok


def _label_to_json(label):
    if isinstance(label, int):
        return {"kind": "int", "value": label}
    if isinstance(label, str):
        return {"kind": "str", "value": label}
    if isinstance(label, float):
        return {"kind": "float", "value": label.hex()}
    if isinstance(label, complex):
        return {"kind": "complex", "re": label.real.hex(), "im": label.imag.hex()}
    if isinstance(label, tuple):
        return {"kind": "tuple", "items": [_label_to_json(x) for x in label]}
    raise DataError(f"unsupported label type: {type(label).__name__}")


def _label_from_json(d):
    kind = d["kind"]
    if kind == "int":
        return int(d["value"])
    if kind == "str":
        return str(d["value"])
    if kind == "float":
        return float.fromhex(d["value"])
    if kind == "complex":
        return complex(float.fromhex(d["re"]), float.fromhex(d["im"]))
    if kind == "tuple":
        return tuple(_label_from_json(x) for x in d["items"])
    raise DataError(f"unknown label kind in sidecar: {kind!r}")


@dataclass(frozen=True)
class Alphabet:
    """Ordered list of pairwise-distinct labels."""

    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if len(self.values) < 1:
            raise DataError("alphabet must have size >= 1")
        keys = [_label_key(v) for v in self.values]
        if len(set(keys)) != len(keys):
            raise DataError("alphabet labels must be pairwise distinct")

    @property
    def size(self) -> int:
        return len(self.values)

    def index_map(self) -> dict:
        return {_label_key(v): i for i, v in enumerate(self.values)}

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class SymbolicSequence:
    """Finite prefix over a finite alphabet, stored as label indices."""

    alphabet: Alphabet
    symbols: np.ndarray

    def __post_init__(self):
        arr = np.ascontiguousarray(self.symbols, dtype=np.int32)
        if arr.ndim != 1 or len(arr) < 1:
            raise DataError("symbols must be a nonempty 1-d array")
        if arr.min() < 0 or arr.max() >= self.alphabet.size:
            raise DataError("symbol index out of alphabet range")
        arr.setflags(write=False)
        object.__setattr__(self, "symbols", arr)

    @classmethod
    def from_labels(cls, labels) -> "SymbolicSequence":
        """Build with the alphabet in first-occurrence order."""
        seen = {}
        order = []
        idx = []
        for lab in labels:
            k = _label_key(lab)
            if k not in seen:
                seen[k] = len(order)
                order.append(lab)
            idx.append(seen[k])
        return cls(Alphabet(tuple(order)), np.asarray(idx, dtype=np.int32))

    @property
    def n(self) -> int:
        return len(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def labels(self) -> list:
        return [self.alphabet.values[i] for i in self.symbols]


@dataclass(frozen=True)
class NumericSequence:
    """Finite prefix of a bounded complex-valued sequence."""

    values: np.ndarray
    bound: float = field(default=None)

    def __post_init__(self):
        arr = np.ascontiguousarray(self.values, dtype=np.complex128)
        if arr.ndim != 1 or len(arr) < 1:
            raise DataError("values must be a nonempty 1-d array")
        if not np.isfinite(arr).all():
            raise DataError("values must be finite (no NaN/inf)")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)
        b = float(np.abs(arr).max())
        if self.bound is None:
            object.__setattr__(self, "bound", b)
        elif not math.isclose(self.bound, b, rel_tol=0, abs_tol=0):
            raise DataError("bound must equal max |value|")

    @property
    def n(self) -> int:
        return len(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def real_values(self) -> np.ndarray:
        if np.any(self.values.imag != 0):
            raise DataError("sequence is not real-valued")
        return self.values.real


@dataclass(frozen=True)
class JointSequence:
    """Tuple sequence over >= 2 components with the observed product alphabet."""

    components: tuple
    alphabet: Alphabet
    symbols: np.ndarray

    @property
    def n(self) -> int:
        return len(self.symbols)

    def as_symbolic(self) -> SymbolicSequence:
        return SymbolicSequence(self.alphabet, self.symbols)


def joint(seqs) -> JointSequence:
    """Combine sequences into the tuple sequence z(n) = (f_1(n), ..., f_k(n)).

    The product alphabet holds exactly the observed tuples, in
    first-occurrence order.  Lengths must already agree; truncate first.
    """
    seqs = tuple(seqs)
    if len(seqs) < 2:
        raise DataError("joint needs at least 2 sequences")
    n = seqs[0].n
    if any(s.n != n for s in seqs):
        raise DataError("joint components must have equal lengths")
    rows = np.stack([s.symbols for s in seqs], axis=1)
    # first-occurrence ids for the observed tuples
    _, first_idx, inverse = np.unique(rows, axis=0, return_index=True,
                                      return_inverse=True)
    order = np.argsort(first_idx, kind="stable")
    rank_of = np.empty(len(order), dtype=np.int32)
    rank_of[order] = np.arange(len(order), dtype=np.int32)
    symbols = rank_of[inverse]
    tuples = []
    for row_idx in first_idx[order]:
        tuples.append(tuple(s.alphabet.values[s.symbols[row_idx]] for s in seqs))
    return JointSequence(seqs, Alphabet(tuple(tuples)), symbols)


def shift(seq: SymbolicSequence, k: int) -> SymbolicSequence:
    """Drop the first k symbols; the alphabet is unchanged."""
    if not 0 <= k < seq.n:
        raise DataError(f"shift by {k} out of range for length {seq.n}")
    if k == 0:
        return seq
    return SymbolicSequence(seq.alphabet, seq.symbols[k:])


def recode(seq: SymbolicSequence, mapping) -> SymbolicSequence:
    """Apply a symbolwise map to the labels.

    The output alphabet is the distinct images in first-occurrence order
    as the input alphabet is traversed, so an injective map leaves the
    index array untouched.
    """
    if callable(mapping):
        get = mapping
    else:
        m = {_label_key(k): v for k, v in dict(mapping).items()}

        def get(lab):
            k = _label_key(lab)
            if k not in m:
                raise DataError(f"recode map undefined on label {lab!r}")
            return m[k]

    images = []
    seen = {}
    old_to_new = np.empty(seq.alphabet.size, dtype=np.int32)
    for i, lab in enumerate(seq.alphabet.values):
        img = get(lab)
        k = _label_key(img)
        if k not in seen:
            seen[k] = len(images)
            images.append(img)
        old_to_new[i] = seen[k]
    return SymbolicSequence(Alphabet(tuple(images)), old_to_new[seq.symbols])


def _parse_tokens(text: str, path):
    lines = text.splitlines()
    tokens = [ln for ln in lines if ln != ""]
    if not tokens:
        raise DataError(f"{path}: empty input")
    return tokens


def load_sequence(path, format: str):
    """Read a sequence file.

    tokens      one token per line; sidecar alphabet JSON honored if present
    csv-complex header re,im then one value per row
    raw-bytes   each byte is a symbol
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"{path}: no such file")
    if format == "tokens":
        text = path.read_text(encoding="utf-8")
        tokens = _parse_tokens(text, path)
        sidecar = path.with_name(path.name + ".alphabet.json")
        if sidecar.exists():
            doc = json.loads(sidecar.read_text(encoding="utf-8"))
            labels = [_label_from_json(d) for d in doc["labels"]]
            alpha = Alphabet(tuple(labels))
            tok_to_idx = {_label_token(lab): i for i, lab in enumerate(labels)}
            idx = []
            for lineno, tok in enumerate(tokens, 1):
                if tok not in tok_to_idx:
                    raise DataError(f"{path}:{lineno}: token {tok!r} not in alphabet sidecar")
                idx.append(tok_to_idx[tok])
            return SymbolicSequence(alpha, np.asarray(idx, dtype=np.int32))
        # no sidecar: integer tokens if every token parses, else strings
        try:
            labels = [int(t) for t in tokens]
        except ValueError:
            labels = tokens
        return SymbolicSequence.from_labels(labels)
    if format == "csv-complex":
        vals = []
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise DataError(f"{path}: empty input") from None
            if [h.strip() for h in header] != ["re", "im"]:
                raise DataError(f"{path}:1: expected header 're,im'")
            for lineno, row in enumerate(reader, 2):
                if not row:
                    continue
                if len(row) != 2:
                    raise DataError(f"{path}:{lineno}: expected two fields")
                try:
                    vals.append(complex(float(row[0]), float(row[1])))
                except ValueError as e:
                    raise DataError(f"{path}:{lineno}: {e}") from None
        if not vals:
            raise DataError(f"{path}: empty input")
        return NumericSequence(np.asarray(vals, dtype=np.complex128))
    if format == "raw-bytes":
        data = path.read_bytes()
        if not data:
            raise DataError(f"{path}: empty input")
        return SymbolicSequence.from_labels(data)
    raise DataError(f"unknown format {format!r}")


def save_sequence(seq, path) -> None:
    """Write a sequence in its canonical format (see load_sequence)."""
    path = Path(path)
    if isinstance(seq, JointSequence):
        seq = seq.as_symbolic()
    if isinstance(seq, SymbolicSequence):
        toks = [_label_token(seq.alphabet.values[i]) for i in seq.symbols]
        path.write_text("\n".join(toks) + "\n", encoding="utf-8")
        sidecar = path.with_name(path.name + ".alphabet.json")
        doc = {"labels": [_label_to_json(v) for v in seq.alphabet.values]}
        sidecar.write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")
        return
    if isinstance(seq, NumericSequence):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            fh.write("re,im\n")
            for v in seq.values:
                fh.write(f"{float(v.real)!r},{float(v.imag)!r}\n")
        return
    raise DataError(f"cannot save object of type {type(seq).__name__}")


def save_raw_bytes(seq: SymbolicSequence, path) -> None:
    """Write symbols as raw bytes; labels must be ints in 0..255."""
    out = bytearray()
    for i in seq.symbols:
        lab = seq.alphabet.values[i]
        if not isinstance(lab, int) or not 0 <= lab <= 255:
            raise DataError(f"label {lab!r} not a byte value")
        out.append(lab)
    Path(path).write_bytes(bytes(out))
