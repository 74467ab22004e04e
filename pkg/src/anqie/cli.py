"""Command line surface.

Every subcommand resolves its options against an optional --config JSON
(CLI flags win, then config values, then built-in defaults) and echoes
the fully resolved configuration into whatever artifact it writes, so
any output can be replayed with --config alone.  The timestamp is the
only field allowed to differ between identical runs.

Exit codes: 0 success, 1 law failure, 2 usage error, 3 data error.
"""

from __future__ import annotations

import argparse
import datetime
import json
import sys
from pathlib import Path

from .blockcount import default_m_max, profile
from .entropy import estimate
from .generators import GeneratorSpec, generate, theta_fixed_point, _frac_fixed, \
    _quad_frac_fixed, _fp_to_float
from .laws import (default_lattice, independence_check, law_suite,
                   weyl_sums, DEFAULT_BATTERY)
from .quantize import (Codebook, build_codebook, implify, implify_staged,
                       quantize, separate)
from .seqcore import (DataError, NumericSequence, SymbolicSequence, joint,
                      load_sequence, save_raw_bytes, save_sequence)

__all__ = ["main"]


def _now() -> str:
    return datetime.datetime.now(datetime.timezone.utc).isoformat()


def _write_json(path, doc) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _load_config(path) -> dict:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise DataError(f"{path}: no such file") from None
    except json.JSONDecodeError as e:
        raise DataError(f"{path}: {e}") from None
    if not isinstance(doc, dict):
        raise DataError(f"{path}: config must be a JSON object")
    # accept a previously written artifact directly
    if "config" in doc and isinstance(doc["config"], dict):
        return doc["config"]
    return doc


def _resolve(args, defaults: dict) -> dict:
    """CLI value if given, else config value, else default."""
    stored = _load_config(args.config) if getattr(args, "config", None) else {}
    out = {}
    for key, default in defaults.items():
        cli_val = getattr(args, key, None)
        if cli_val is not None:
            out[key] = cli_val
        elif key in stored:
            out[key] = stored[key]
        else:
            out[key] = default
    return out


def _csv_ints(text: str) -> list[int]:
    try:
        return [int(t) for t in str(text).split(",") if t != ""]
    except ValueError:
        raise DataError(f"expected comma-separated integers, got {text!r}") from None


def _csv_floats(text: str) -> list[float]:
    try:
        return [float(t) for t in str(text).split(",") if t != ""]
    except ValueError:
        raise DataError(f"expected comma-separated numbers, got {text!r}") from None


def _infer_format(path, override) -> str:
    if override:
        return override
    suffix = Path(path).suffix.lower()
    if suffix == ".csv":
        return "csv-complex"
    if suffix in (".bin", ".raw", ".bytes"):
        return "raw-bytes"
    return "tokens"


def _load_symbolic(path, fmt) -> SymbolicSequence:
    seq = load_sequence(path, _infer_format(path, fmt))
    if not isinstance(seq, SymbolicSequence):
        raise DataError(f"{path}: numeric input; quantize it first")
    return seq


def _load_numeric(path, fmt) -> NumericSequence:
    seq = load_sequence(path, _infer_format(path, fmt))
    if not isinstance(seq, NumericSequence):
        raise DataError(f"{path}: expected csv-complex numeric input")
    return seq


# -- subcommands ----------------------------------------------------------

def _cmd_gen(args) -> int:
    cfg = _resolve(args, {
        "subcommand": "gen", "kind": None, "n": None, "pattern": None,
        "theta": None, "bins": None, "x0": None, "base": None,
        "support": None, "probs": None, "seed": None, "out": None,
        "format": None,
    })
    if cfg["kind"] is None:
        raise DataError("gen: --kind is required")
    if cfg["n"] is None:
        raise DataError("gen: --n is required")
    if cfg["out"] is None:
        raise DataError("gen: --out is required")
    spec_fields = {k: cfg[k] for k in ("kind", "n", "pattern", "theta", "bins",
                                       "x0", "base", "support", "probs", "seed")
                   if cfg[k] is not None}
    spec = GeneratorSpec.from_dict(spec_fields)
    seq = generate(spec)
    cfg["n"] = spec.n
    out = cfg["out"]
    fmt = cfg["format"]
    if fmt == "raw-bytes":
        if not isinstance(seq, SymbolicSequence):
            raise DataError("raw-bytes output needs a symbolic sequence")
        save_raw_bytes(seq, out)
    else:
        save_sequence(seq, out)
    _write_json(str(out) + ".run.json",
                {"config": cfg, "timestamp": _now(), "n": len(seq)})
    print(f"wrote {out} ({spec.kind}, n={len(seq)})")
    return 0


def _cmd_blocks(args) -> int:
    cfg = _resolve(args, {
        "subcommand": "blocks", "in": None, "format": None, "m_max": None,
        "out": "-", "csv": None,
    })
    if cfg["in"] is None:
        raise DataError("blocks: --in is required")
    seq = _load_symbolic(cfg["in"], cfg["format"])
    m_max = cfg["m_max"] if cfg["m_max"] is not None else default_m_max(seq.n)
    cfg["m_max"] = m_max
    prof = profile(seq, m_max)
    doc = {"config": cfg, "timestamp": _now()}
    doc.update(prof.to_json_dict())
    _write_json(cfg["out"], doc)
    if cfg["csv"]:
        Path(cfg["csv"]).write_text(prof.to_csv(), encoding="utf-8")
    return 0


def _cmd_entropy(args) -> int:
    cfg = _resolve(args, {
        "subcommand": "entropy", "in": None, "format": None, "m_max": None,
        "min_coverage": 50.0, "units": "nats", "out": "-",
    })
    if cfg["in"] is None:
        raise DataError("entropy: --in is required")
    seq = _load_symbolic(cfg["in"], cfg["format"])
    m_max = cfg["m_max"] if cfg["m_max"] is not None else default_m_max(seq.n)
    cfg["m_max"] = m_max
    rep = estimate(profile(seq, m_max), cfg["min_coverage"], cfg["units"])
    doc = {"config": cfg, "timestamp": _now()}
    doc.update(rep.to_json_dict())
    _write_json(cfg["out"], doc)
    if cfg["out"] != "-":
        flag = " saturated" if rep.saturated else ""
        print(f"estimate {rep.point_estimate!r} {rep.units} "
              f"at m*={rep.m_star}{flag}")
    return 0


def _cmd_quantize(args) -> int:
    cfg = _resolve(args, {
        "subcommand": "quantize", "in": None, "format": None, "epsilon": None,
        "codebook_in": None, "out": None, "codebook_out": None,
    })
    if cfg["in"] is None:
        raise DataError("quantize: --in is required")
    if cfg["out"] is None:
        raise DataError("quantize: --out is required")
    vals = _load_numeric(cfg["in"], cfg["format"])
    if cfg["codebook_in"]:
        book = Codebook.from_json_dict(
            json.loads(Path(cfg["codebook_in"]).read_text(encoding="utf-8")))
    elif cfg["epsilon"] is not None:
        book = build_codebook(vals, cfg["epsilon"])
    else:
        raise DataError("quantize: need --epsilon or --codebook-in")
    seq = quantize(vals, book)
    save_sequence(seq, cfg["out"])
    if cfg["codebook_out"]:
        _write_json(cfg["codebook_out"], book.to_json_dict())
    _write_json(str(cfg["out"]) + ".run.json",
                {"config": cfg, "timestamp": _now(),
                 "centers": len(book.centers)})
    print(f"wrote {cfg['out']} ({len(book.centers)} centers)")
    return 0


def _cmd_implify(args) -> int:
    cfg = _resolve(args, {
        "subcommand": "implify", "in": None, "format": None, "epsilon": None,
        "t": None, "schedule": None, "out": None, "patterns_out": None,
    })
    if cfg["in"] is None:
        raise DataError("implify: --in is required")
    if cfg["out"] is None:
        raise DataError("implify: --out is required")
    if cfg["epsilon"] is None:
        raise DataError("implify: --epsilon is required")
    vals = _load_numeric(cfg["in"], cfg["format"])
    if cfg["schedule"] is not None:
        sched = _csv_ints(cfg["schedule"]) if isinstance(cfg["schedule"], str) \
            else list(cfg["schedule"])
        cfg["schedule"] = sched
        seq, pats = implify_staged(vals, cfg["epsilon"], sched)
    else:
        t = cfg["t"] if cfg["t"] is not None else 1
        cfg["t"] = t
        seq, pats = implify(vals, cfg["epsilon"], t)
    save_sequence(seq, cfg["out"])
    if cfg["patterns_out"]:
        _write_json(cfg["patterns_out"], pats.to_json_dict())
    _write_json(str(cfg["out"]) + ".run.json",
                {"config": cfg, "timestamp": _now(),
                 "patterns": len(pats.patterns)})
    print(f"wrote {cfg['out']} ({len(pats.patterns)} patterns, t={pats.t})")
    return 0


def _cmd_separate(args) -> int:
    cfg = _resolve(args, {
        "subcommand": "separate", "in": None, "format": None,
        "a": None, "b": None, "t": None, "out": None,
    })
    for key in ("in", "out", "a", "b", "t"):
        if cfg[key] is None:
            raise DataError(f"separate: --{key} is required")
    vals = _load_numeric(cfg["in"], cfg["format"])
    seq = separate(vals, cfg["a"], cfg["b"], cfg["t"])
    save_sequence(seq, cfg["out"])
    _write_json(str(cfg["out"]) + ".run.json",
                {"config": cfg, "timestamp": _now()})
    print(f"wrote {cfg['out']}")
    return 0


def _cmd_joint(args) -> int:
    cfg = _resolve(args, {
        "subcommand": "joint", "in": None, "format": None, "out": None,
        "m_max": None, "check_independence": False,
    })
    paths = cfg["in"]
    if not paths or isinstance(paths, str) or len(paths) < 2:
        raise DataError("joint: need at least two --in paths")
    seqs = [_load_symbolic(p, cfg["format"]) for p in paths]
    n = min(s.n for s in seqs)
    seqs = [SymbolicSequence(s.alphabet, s.symbols[:n]) for s in seqs]
    jt = joint(seqs)
    doc = {"config": cfg, "timestamp": _now(),
           "n": jt.n, "alphabet_size": jt.alphabet.size}
    code = 0
    if cfg["check_independence"]:
        if len(seqs) != 2:
            raise DataError("independence check needs exactly two inputs")
        m_max = cfg["m_max"] if cfg["m_max"] is not None else 8
        cfg["m_max"] = m_max
        v = independence_check(seqs[0], seqs[1], m_max)
        doc["independence"] = v.to_json_dict()
        doc["consistent_with_independence"] = v.passed
    if cfg["out"] and cfg["out"] != "-":
        save_sequence(jt, cfg["out"])
        _write_json(str(cfg["out"]) + ".run.json", doc)
        print(f"wrote {cfg['out']}")
    else:
        _write_json("-", doc)
    return code


def _render_table(verdicts) -> str:
    rows = [("law", "subject", "pass", "lhs", "rhs")]
    for v in verdicts:
        rows.append((v.law, v.subject, "yes" if v.passed else "NO",
                     str(v.lhs), str(v.rhs)))
    widths = [max(len(r[i]) for r in rows) for i in range(5)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip()
             for r in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _cmd_laws(args) -> int:
    if getattr(args, "config", None):
        suite_cfg = _load_config(args.config)
    else:
        suite_cfg = dict(DEFAULT_BATTERY)
    if args.m_max is not None:
        suite_cfg["m_max"] = args.m_max
    verdicts = law_suite(suite_cfg)
    all_passed = all(v.passed for v in verdicts)
    doc = {"config": suite_cfg, "timestamp": _now(),
           "all_passed": all_passed,
           "verdicts": [v.to_json_dict() for v in verdicts]}
    out = args.out if args.out is not None else "-"
    _write_json(out, doc)
    if out != "-" or args.table:
        print(_render_table(verdicts))
        print(f"{sum(v.passed for v in verdicts)}/{len(verdicts)} laws hold")
    return 0 if all_passed else 1


_WEYL_KINDS = ("linear", "rational", "golden", "quadpair")


def _weyl_points(kind: str, theta, n: int) -> list:
    tf = theta_fixed_point(theta)
    if kind in ("linear", "rational", "golden"):
        # n*theta mod 1 for n = 1..N, exact fixed point then float
        fps = _frac_fixed(tf, n + 1)[1:]
        return [float(x) for x in _fp_to_float(fps)]
    if kind == "quadpair":
        # consecutive-square pairs (frac(k^2 t), frac((k+1)^2 t)), k = 1..N
        quad = _fp_to_float(_quad_frac_fixed(tf, n + 2))
        return [(float(quad[k]), float(quad[k + 1])) for k in range(1, n + 1)]
    raise DataError(f"unknown weyl kind {kind!r}")


def _cmd_weyl(args) -> int:
    cfg = _resolve(args, {
        "subcommand": "weyl", "kind": None, "theta": None, "l": None,
        "N": None, "bound": 3, "out": None,
    })
    if cfg["kind"] is None:
        raise DataError("weyl: --kind is required")
    if cfg["kind"] not in _WEYL_KINDS:
        raise DataError(f"weyl: unknown kind {cfg['kind']!r}")
    if cfg["N"] is None:
        raise DataError("weyl: --N is required")
    theta = cfg["theta"]
    if theta is None:
        theta = "golden" if cfg["kind"] == "golden" else "sqrt2"
        cfg["theta"] = theta
    dim = 2 if cfg["kind"] == "quadpair" else 1
    if cfg["l"] is not None:
        vec = tuple(_csv_ints(cfg["l"]) if isinstance(cfg["l"], str)
                    else cfg["l"])
        if len(vec) != dim:
            raise DataError(f"weyl: frequency vector {vec} is not {dim}-dim")
        lattice = [vec]
        cfg["l"] = list(vec)
    else:
        lattice = default_lattice(dim, cfg["bound"])
    pts = _weyl_points(cfg["kind"], theta, cfg["N"])
    top, per = weyl_sums(pts, lattice, cfg["N"])
    if cfg["out"] != "-":
        print(repr(top))
    if cfg["out"]:
        _write_json(cfg["out"], {
            "config": cfg, "timestamp": _now(), "max": top,
            "per_vector": [{"l": list(l), "value": v}
                           for l, v in zip(lattice, per)],
        })
    return 0


def _cmd_report(args) -> int:
    cfg = _resolve(args, {
        "subcommand": "report", "in": None, "format": None, "m_max": None,
        "min_coverage": 50.0, "units": "nats", "out_dir": ".",
        "stem": "entropy",
    })
    if cfg["in"] is None:
        raise DataError("report: --in is required")
    from .report import write_bundle
    seq = _load_symbolic(cfg["in"], cfg["format"])
    m_max = cfg["m_max"] if cfg["m_max"] is not None else default_m_max(seq.n)
    cfg["m_max"] = m_max
    rep = estimate(profile(seq, m_max), cfg["min_coverage"], cfg["units"])
    paths = write_bundle(rep, cfg["out_dir"], cfg, cfg["stem"], _now())
    for p in [paths["report"], paths["profile"], *paths["figures"]]:
        print(f"wrote {p}")
    return 0


# -- wiring ---------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="anqie",
        description="block-complexity entropy toolkit for bounded sequences")
    sub = ap.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config or prior artifact")

    p = sub.add_parser("gen", help="generate a sequence file")
    common(p)
    p.add_argument("--kind")
    p.add_argument("--n", type=int)
    p.add_argument("--pattern", type=_csv_ints)
    p.add_argument("--theta")
    p.add_argument("--bins", type=int)
    p.add_argument("--x0", type=float)
    p.add_argument("--base", type=int)
    p.add_argument("--support", type=int)
    p.add_argument("--probs", type=_csv_floats)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.add_argument("--format", choices=["tokens", "csv-complex", "raw-bytes"])
    p.set_defaults(fn=_cmd_gen)

    p = sub.add_parser("blocks", help="distinct-block profile")
    common(p)
    p.add_argument("--in", dest="in_")
    p.add_argument("--format", choices=["tokens", "raw-bytes"])
    p.add_argument("--m-max", dest="m_max", type=int)
    p.add_argument("--out")
    p.add_argument("--csv", help="also write the profile as CSV here")
    p.set_defaults(fn=_cmd_blocks)

    p = sub.add_parser("entropy", help="entropy estimate from a profile")
    common(p)
    p.add_argument("--in", dest="in_")
    p.add_argument("--format", choices=["tokens", "raw-bytes"])
    p.add_argument("--m-max", dest="m_max", type=int)
    p.add_argument("--min-coverage", dest="min_coverage", type=float)
    p.add_argument("--units", choices=["nats", "bits"])
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_entropy)

    p = sub.add_parser("quantize", help="codebook quantization of csv input")
    common(p)
    p.add_argument("--in", dest="in_")
    p.add_argument("--format", choices=["csv-complex"])
    p.add_argument("--epsilon", type=float)
    p.add_argument("--codebook-in", dest="codebook_in")
    p.add_argument("--codebook-out", dest="codebook_out")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_quantize)

    p = sub.add_parser("implify", help="finite-range approximation")
    common(p)
    p.add_argument("--in", dest="in_")
    p.add_argument("--format", choices=["csv-complex"])
    p.add_argument("--epsilon", type=float)
    p.add_argument("--t", type=int)
    p.add_argument("--schedule", help="comma ints; staged recoding")
    p.add_argument("--patterns-out", dest="patterns_out")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_implify)

    p = sub.add_parser("separate", help="two-threshold 0/1 coding")
    common(p)
    p.add_argument("--in", dest="in_")
    p.add_argument("--format", choices=["csv-complex"])
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--t", type=int)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_separate)

    p = sub.add_parser("joint", help="pair/tuple sequence, independence check")
    common(p)
    p.add_argument("--in", dest="in_", action="append")
    p.add_argument("--format", choices=["tokens", "raw-bytes"])
    p.add_argument("--m-max", dest="m_max", type=int)
    p.add_argument("--check-independence", dest="check_independence",
                   action="store_true", default=None)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_joint)

    p = sub.add_parser("laws", help="exact inequality suite")
    common(p)
    p.add_argument("--m-max", dest="m_max", type=int)
    p.add_argument("--out")
    p.add_argument("--table", action="store_true")
    p.set_defaults(fn=_cmd_laws)

    p = sub.add_parser("weyl", help="equidistribution exponential sums")
    common(p)
    p.add_argument("--kind", choices=list(_WEYL_KINDS))
    p.add_argument("--theta")
    p.add_argument("--l", help="single frequency vector, comma ints")
    p.add_argument("--N", type=int)
    p.add_argument("--bound", type=int)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_weyl)

    p = sub.add_parser("report", help="JSON + CSV + figures bundle")
    common(p)
    p.add_argument("--in", dest="in_")
    p.add_argument("--format", choices=["tokens", "raw-bytes"])
    p.add_argument("--m-max", dest="m_max", type=int)
    p.add_argument("--min-coverage", dest="min_coverage", type=float)
    p.add_argument("--units", choices=["nats", "bits"])
    p.add_argument("--out-dir", dest="out_dir")
    p.add_argument("--stem")
    p.set_defaults(fn=_cmd_report)

    return ap


def main(argv=None) -> int:
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors and 0 on --help
        return int(e.code or 0)
    # map "--in" (a keyword) onto the config key "in"
    if hasattr(args, "in_"):
        setattr(args, "in", args.in_)
    try:
        return args.fn(args)
    except DataError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
