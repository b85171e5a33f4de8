"""Command line entry point: ``grasscode <subcommand> ...``.

Exit status: 0 success, 2 bad arguments, 3 cap exceeded, 4 verification
failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import logging
import os
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from . import __version__
from .bounds import (
    BoundError,
    closed_form,
    covering_bound,
    iterated_johnson,
    iterated_schonheim,
    packing_bound,
    packing_ratio,
    ratio_json,
)
from .codefile import dumps, read_code
from .config import CAPS
from .errors import CapExceeded, GrasscodeError, VerificationError
from .gf import build_field, field_of_order, find_primitive, parse_modulus
from .grassmann import SubspaceCode, enumerate_grassmannian

SCHEMA_VERSION = 1
log = logging.getLogger("grasscode")

EXIT_OK, EXIT_USAGE, EXIT_CAP, EXIT_VERIFY = 0, 2, 3, 4
_NOT_ECHOED = {"func", "subcommand", "verbose", "out", "stats", "report", "sidecar"}


@dataclass
class RunConfig:
    subcommand: str
    options: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"subcommand": self.subcommand, "options": self.options, "version": __version__}

    def header(self) -> str:
        return "config: " + json.dumps(self.to_json(), sort_keys=True)


# -- argument helpers --------------------------------------------------------------

def int_range(text: str) -> list[int]:
    """``3``, ``2,3,5`` or ``4..8`` (inclusive)."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            try:
                a, b = int(lo), int(hi)
            except ValueError:
                raise argparse.ArgumentTypeError(f"bad range {part!r}") from None
            if b < a:
                raise argparse.ArgumentTypeError(f"empty range {part!r}")
            out.extend(range(a, b + 1))
        else:
            try:
                out.append(int(part))
            except ValueError:
                raise argparse.ArgumentTypeError(f"bad integer {part!r}") from None
    return out


def field_arg(text: str) -> str:
    if not text.replace("^", "").isdigit():
        raise argparse.ArgumentTypeError(f"bad field order {text!r}; use q or p^e")
    return text


def resolve_field(q: str, modulus: Optional[str] = None):
    if "^" in q:
        p, e = (int(x) for x in q.split("^"))
    else:
        f = field_of_order(int(q))
        p, e = f.p, f.e
    mod = parse_modulus(modulus, p, e) if modulus else None
    return build_field(p, e, mod)


def seed_arg(text: str) -> int:
    s = int(text, 0)
    if not 0 <= s < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return s


def write_atomic(path: str | Path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def emit(text: str, out: Optional[str]) -> None:
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


def emit_json(obj: dict, out: Optional[str], cfg: RunConfig) -> None:
    obj = {"schema_version": SCHEMA_VERSION, "config": cfg.to_json(), **obj}
    emit(json.dumps(obj, indent=2, sort_keys=False) + "\n", out)


def write_codefile(path: Optional[str], code: SubspaceCode, cfg: RunConfig, extra=()) -> None:
    emit(dumps(code, [cfg.header(), *extra]), path)


# -- subcommands ------------------------------------------------------------------------

def cmd_bounds(args, cfg: RunConfig) -> int:
    if args.closed_form:
        params = {k: getattr(args, k) for k in ("t", "r", "v", "m") if getattr(args, k) is not None}
        reports = []
        for q in args.q or [2]:
            for extra in _grid(params, args):
                try:
                    reports.append(closed_form(args.closed_form, q=q, **extra).to_json())
                except (BoundError, KeyError) as exc:
                    log.warning("skipping %s q=%s %s: %s", args.closed_form, q, extra, exc)
        emit_json({"results": reports}, args.out, cfg)
        return EXIT_OK

    rows = []
    for q, n, k, delta in itertools.product(args.q, args.n, args.k, args.delta):
        if not 0 <= delta <= k <= n or q < 2:
            log.info("skipping invalid cell q=%d n=%d k=%d delta=%d", q, n, k, delta)
            continue
        row = {"q": q, "n": n, "k": k, "delta": delta,
               "packing": packing_bound(q, n, k, delta),
               "iterated_johnson": iterated_johnson(q, n, k, delta),
               "covering": covering_bound(q, n, k, delta),
               "iterated_schonheim": iterated_schonheim(q, n, k, k - delta) if delta < k else None}
        rows.append(row)
    if args.format == "csv":
        buf = io.StringIO()
        buf.write(f"# {cfg.header()}\n")
        cols = ["q", "n", "k", "delta", "packing", "iterated_johnson", "covering", "iterated_schonheim"]
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({c: ("" if row[c] is None else row[c]) for c in cols})
        emit(buf.getvalue(), args.out)
        return EXIT_OK
    results = []
    for row in rows:
        q, n, k, delta = row["q"], row["n"], row["k"], row["delta"]
        ref = packing_ratio(q, n, k, delta)
        params = {"q": q, "n": n, "k": k, "delta": delta, "d": 2 * delta + 2, "r": k - delta}
        for kind, exactness in (("packing", "upper"), ("iterated_johnson", "upper"),
                                ("covering", "lower"), ("iterated_schonheim", "lower")):
            if row[kind] is None:
                continue
            results.append({"params": params, "kind": kind, "value": str(row[kind]),
                            "exactness": exactness,
                            "ratio": ratio_json(row[kind] / ref)})
    emit_json({"results": results}, args.out, cfg)
    return EXIT_OK


def _grid(params: dict, args) -> list[dict]:
    extra_keys = {"spread_even": ["n"], "spread_odd_lb": ["n"], "covering_cor3": ["n"],
                  "turan_thm5": ["delta"]}.get(args.closed_form, [])
    params = dict(params)
    for key in extra_keys:
        if getattr(args, key, None):
            params[key] = getattr(args, key)
    keys = sorted(params)
    return [dict(zip(keys, combo)) for combo in itertools.product(*(params[k] for k in keys))]


def cmd_enumerate(args, cfg: RunConfig) -> int:
    F = resolve_field(args.q, args.modulus)
    stream = enumerate_grassmannian(F, args.n, args.k)
    if args.out:
        write_codefile(args.out, SubspaceCode(F, args.n, args.k, stream), cfg)
    else:
        print(sum(1 for _ in stream))
    return EXIT_OK


def cmd_spread(args, cfg: RunConfig) -> int:
    from .designs import spread_construct
    F = resolve_field(args.q, args.modulus)
    code = spread_construct(F, args.n, args.k)
    write_codefile(args.out, code, cfg, [f"spread size={len(code)} min_distance={2 * args.k}"])
    return EXIT_OK


def cmd_match(args, cfg: RunConfig) -> int:
    from .matcher import build_index, greedy_matching, matching_to_code, nibble_matching, trivial_code
    q = int(args.q)
    if args.delta in (0, args.k):
        code = trivial_code(q, args.n, args.k, args.delta)
        log.info("delta in {0, k}: emitting the trivial optimal code")
        write_codefile(args.out, code, cfg, ["trivial optimal code"])
        if args.stats:
            emit_json({"size": len(code), "trivial": True}, args.stats, cfg)
        return EXIT_OK
    idx = build_index(q, args.n, args.k, args.delta)
    if args.algo == "greedy":
        res = greedy_matching(idx, args.seed)
    else:
        res = nibble_matching(idx, args.seed, args.epsilon, args.rounds)
    code = matching_to_code(res)
    write_codefile(args.out, code, cfg, res.header())
    if args.stats:
        emit_json(res.stats(), args.stats, cfg)
    return EXIT_OK


def cmd_verify(args, cfg: RunConfig) -> int:
    from .designs import verify_code, verify_covering, verify_turan
    code, _ = read_code(args.file)
    if args.min_distance is not None:
        rep = verify_code(code, args.min_distance)
    elif args.covering is not None:
        rep = verify_covering(code, args.covering)
    else:
        rep = verify_turan(code, args.turan)
    emit_json(rep.to_json(), args.report, cfg)
    return EXIT_OK if rep.valid else EXIT_VERIFY


def cmd_convert(args, cfg: RunConfig) -> int:
    from .designs import code_to_covering, covering_to_code
    code, _ = read_code(args.file)
    if args.to == "covering":
        out = code_to_covering(code, args.delta).code
    else:
        out = covering_to_code(code, args.delta)
    write_codefile(args.out, out, cfg, [f"converted to {args.to} size={len(out)}"])
    return EXIT_OK


def cmd_dual(args, cfg: RunConfig) -> int:
    from .designs import dual_code
    code, _ = read_code(args.file)
    write_codefile(args.out, dual_code(code, args.min_distance), cfg)
    return EXIT_OK


def cmd_lift(args, cfg: RunConfig) -> int:
    from .designs import lift_covering
    code, _ = read_code(args.file)
    design = lift_covering(code, args.r)
    write_codefile(args.out, design.code, cfg, [f"covering r={args.r}"])
    return EXIT_OK


def cmd_turan_dual(args, cfg: RunConfig) -> int:
    from .designs import covering_to_turan, turan_to_covering
    code, _ = read_code(args.file)
    if args.role == "covering":
        design = covering_to_turan(code, args.param)
        note = f"turan k={design.k}"
    else:
        design = turan_to_covering(code, args.param)
        note = f"covering r={design.r}"
    write_codefile(args.out, design.code, cfg, [note])
    return EXIT_OK


def cmd_cyclic(args, cfg: RunConfig) -> int:
    from .cyclic import cyclic_greedy_search
    F = resolve_field(args.q, args.modulus)
    ext = find_primitive(F, args.n)
    res = cyclic_greedy_search(ext, args.k, args.d, args.seed)
    write_codefile(args.out, res.code, cfg,
                   [f"cyclic prng=numpy-pcg64-v1 seed={args.seed} orbits={len(res.orbits)}"])
    sidecar = args.sidecar or (args.out + ".orbits.json" if args.out else None)
    if sidecar:
        emit_json(res.sidecar(), sidecar, cfg)
    return EXIT_OK


# -- parser ------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="grasscode", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("--cap", type=int, help="enumeration cap (default $GRASSCODE_CAP or 10^7)")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="subcommand", required=True, metavar="SUBCOMMAND")

    p = sub.add_parser("bounds", help="packing/Johnson/covering/Schonheim tables and closed forms")
    p.add_argument("--q", type=int_range, default=[2])
    p.add_argument("--n", type=int_range)
    p.add_argument("--k", type=int_range)
    p.add_argument("--delta", type=int_range)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--closed-form", choices=["spread_even", "spread_odd_lb", "turan_thm5",
                                             "covering_cor3", "covering_thm6"])
    for name in ("t", "r", "v", "m"):
        p.add_argument(f"--{name}", type=int_range)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("enumerate", help="list G_q(n,k) as a code file, or print its size")
    _field_args(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("spread", help="Desarguesian spread of k-subspaces (k | n)")
    _field_args(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_spread)

    p = sub.add_parser("match", help="greedy or nibble matching -> code of distance 2delta+2")
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--algo", choices=["greedy", "nibble"], default="greedy")
    p.add_argument("--seed", type=seed_arg, required=True)
    p.add_argument("--epsilon", type=float, default=0.05)
    p.add_argument("--rounds", type=int, default=50)
    p.add_argument("--out")
    p.add_argument("--stats")
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("verify", help="verify a code, covering design or Turan design")
    p.add_argument("--file", required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--min-distance", type=int)
    g.add_argument("--covering", type=int, metavar="R")
    g.add_argument("--turan", type=int, metavar="K")
    p.add_argument("--report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("convert", help="code <-> covering conversions")
    p.add_argument("--file", required=True)
    p.add_argument("--to", choices=["covering", "code"], required=True)
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("dual", help="orthogonal complement of every codeword")
    p.add_argument("--file", required=True)
    p.add_argument("--min-distance", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("lift", help="lift C_q(n,k,r) to C_q(n+1,k+1,r)")
    p.add_argument("--file", required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("turan-dual", help="covering <-> Turan design duality")
    p.add_argument("--file", required=True)
    p.add_argument("--role", choices=["covering", "turan"], required=True)
    p.add_argument("--param", type=int, required=True,
                   help="r for a covering, k for a Turan design")
    p.add_argument("--out")
    p.set_defaults(func=cmd_turan_dual)

    p = sub.add_parser("cyclic-search", help="greedy search for cyclic codes")
    _field_args(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--seed", type=seed_arg, required=True)
    p.add_argument("--out")
    p.add_argument("--sidecar")
    p.set_defaults(func=cmd_cyclic)
    return ap


def _field_args(p):
    p.add_argument("--q", type=field_arg, default="2", help="field order q or p^e")
    p.add_argument("--modulus", help="e+1 base-p digits, constant term first")


def main(argv: Optional[list[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.subcommand == "bounds" and not args.closed_form:
        missing = [f for f in ("n", "k", "delta") if getattr(args, f) is None]
        if missing:
            ap.error(f"bounds needs --{', --'.join(missing)} (or --closed-form)")
    # output locations are left out so identical runs give identical bytes
    options = {k: v for k, v in vars(args).items()
               if k not in _NOT_ECHOED and v is not None}
    cfg = RunConfig(args.subcommand, options)
    old_cap = CAPS.enumeration
    if args.cap is not None:
        CAPS.enumeration = args.cap
    try:
        return args.func(args, cfg)
    except CapExceeded as exc:
        print(f"grasscode: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except VerificationError as exc:
        print(f"grasscode: verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except GrasscodeError as exc:
        print(f"grasscode: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        CAPS.enumeration = old_cap


if __name__ == "__main__":
    sys.exit(main())
