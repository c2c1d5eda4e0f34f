"""The ``rl`` command line.

Exit status: 0 for any report without a VIOLATION verdict, 2 when a check
reports VIOLATION, 1 for usage, parse and input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from importlib import resources

from . import __version__
from .groebner import Ideal, NotProper, PrimeSpec, height
from .homology import BoundTooSmall, ElementNotInMaximalIdeal, ext_table, koszul_homology, rank_at_prime, tor_table
from .invariants import INF, depth, fmt_value, invariant_report, maximal_prime
from .lexer import ParseError
from .modres import FreeComplex, InhomogeneousInput, ModulePresentation, free_resolution, sup_inf_homology, EMPTY
from .polyring import UnitIdeal
from .rigidity import (
    NotMaximal,
    PrimeListIncomplete,
    check_ab_and_bass,
    check_chouinard,
    check_ext_rigidity_global_maximal,
    check_ext_rigidity_local,
    check_nonvanishing_window,
    check_tor_rigidity,
    fixture_corpus,
    gallery_example4,
)
from .session import Session, parse_session

USAGE_ERRORS = (
    ParseError,
    UnitIdeal,
    NotProper,
    NotMaximal,
    PrimeListIncomplete,
    InhomogeneousInput,
    BoundTooSmall,
    ElementNotInMaximalIdeal,
    KeyError,
    TypeError,
    ValueError,
    OSError,
)

CHECKS = ("t1", "t2", "t3max", "p34", "ab", "bass", "chouinard")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def threads() -> int:
    """Worker cap from RL_THREADS (default 1)."""
    raw = os.environ.get("RL_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"RL_THREADS must be a positive integer, got {raw!r}")
    if n < 1:
        raise UsageError(f"RL_THREADS must be a positive integer, got {raw!r}")
    return n


# ---------------------------------------------------------------------------
# sessions


def builtin_text(name: str) -> str:
    path = resources.files("rlab").joinpath("gallery", f"{name}.rig")
    if not path.is_file():
        raise UsageError(f"unknown builtin session {name!r}")
    return path.read_text(encoding="utf-8")


def read_session(spec: str | None) -> Session:
    if spec is None:
        raise UsageError("--input is required")
    if spec.startswith("builtin:"):
        text = builtin_text(spec[len("builtin:"):])
    elif spec == "-":
        text = sys.stdin.read()
    else:
        with open(spec, encoding="utf-8") as fh:
            text = fh.read()
    return parse_session(text)


def _module(S: Session, name: str | None):
    if name is None:
        raise UsageError("--module is required")
    obj = S.get(name)
    if not isinstance(obj, (ModulePresentation, FreeComplex)):
        raise UsageError(f"{name} is not a module or complex")
    return obj


def _prime(S: Session, name: str | None) -> PrimeSpec:
    if name is None or name == "m" and "m" not in S.objects:
        return maximal_prime(S.ring)
    obj = S.get(name)
    if isinstance(obj, Ideal):
        return PrimeSpec(obj, name=name)
    if not isinstance(obj, PrimeSpec):
        raise UsageError(f"{name} is not a prime")
    return obj


def _ideal(S: Session, name: str | None):
    if name is None:
        return None
    obj = S.get(name)
    if isinstance(obj, PrimeSpec):
        return obj.ideal
    if not isinstance(obj, Ideal):
        raise UsageError(f"{name} is not an ideal")
    return obj


def _sup_h(M) -> int:
    if isinstance(M, ModulePresentation):
        return 0
    b = sup_inf_homology(M)
    return 0 if b == EMPTY else b[1]


# ---------------------------------------------------------------------------
# rendering


def emit_json(payload: dict, out) -> None:
    out.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def table(header: list[str], rows: list[list], mark_row: int | None = None, mark: str = "") -> str:
    cells = [header] + [[str(fmt_value(c)) for c in r] for r in rows]
    widths = [max(len(r[k]) for r in cells) for k in range(len(header))]
    lines = []
    for idx, r in enumerate(cells):
        line = "  ".join(c.rjust(w) for c, w in zip(r, widths))
        if idx > 0 and mark_row is not None and idx - 1 == mark_row:
            line += "  " + mark
        lines.append(line.rstrip())
    return "\n".join(lines) + "\n"


def render_report(rep, out) -> None:
    d = rep.as_dict()
    out.write(f"{d['theorem_id']}: {d['verdict']}\n")
    out.write(f"threshold {d['threshold']}  bound {d['bound']}  first zero {d['first_zero']}\n")
    if d["values"]:
        rows = [[i, v] for i, v in enumerate(d["values"])]
        thr = d["threshold"] if isinstance(d["threshold"], int) and d["threshold"] >= 0 else None
        out.write(table(["i", "value"], rows, thr, "<- threshold"))
    if d["formula_lhs"] is not None or d["formula_rhs"] is not None:
        out.write(f"formula: {d['formula_lhs']} == {d['formula_rhs']}\n")
    for k, v in d["extra"].items():
        out.write(f"{k}: {v}\n")


# ---------------------------------------------------------------------------
# commands


def cmd_tor(args, S, out):
    M = _module(S, args.module)
    p = _prime(S, args.prime)
    T = tor_table(M, p, args.bound)
    thr = height(p).pick(args.height_mode) + _sup_h(M)
    payload = {
        "ring": S.ring_name,
        "object": args.module,
        "prime": p.name,
        "bound": args.bound,
        "ranks": list(T.ranks),
        "localized_nonzero": [t > 0 for t in T.ranks],
        "threshold": thr,
    }
    if args.json:
        payload["session_hash"] = S.content_hash()
        emit_json(payload, out)
    else:
        out.write(f"Tor_i(k({p.name}), {args.module}) over {S.ring_name}\n")
        rows = [[i, t] for i, t in enumerate(T.ranks)]
        out.write(table(["i", "t_i"], rows, thr if thr <= args.bound else None, "<- threshold"))
    return 0


def cmd_ext(args, S, out):
    M = _module(S, args.module)
    p = _prime(S, args.prime)
    E = ext_table(M, p, args.bound)
    if E.maximal:
        ranks = E.mus
    else:
        ranks = [rank_at_prime(E.module(i), p) if E.localized(i) else 0 for i in range(args.bound + 1)]
    thr = height(p).pick(args.height_mode)
    payload = {
        "ring": S.ring_name,
        "object": args.module,
        "prime": p.name,
        "bound": args.bound,
        "ranks": ranks,
        "localized_nonzero": list(E.localized_nonzero),
        "threshold": thr,
    }
    if args.json:
        payload["session_hash"] = S.content_hash()
        emit_json(payload, out)
    else:
        out.write(f"Ext^i(k({p.name}), {args.module}) over {S.ring_name}\n")
        rows = [[i, r, "yes" if z else "no"] for i, (r, z) in enumerate(zip(ranks, payload["localized_nonzero"]))]
        out.write(table(["i", "mu_i", "nonzero at p"], rows, thr if thr <= args.bound else None, "<- threshold"))
    return 0


def cmd_invariants(args, S, out):
    M = _module(S, args.module)
    if not isinstance(M, ModulePresentation):
        raise UsageError("invariants takes a module")
    a = _ideal(S, args.ideal)
    rep = invariant_report(M, a, args.bound)
    payload = rep.as_dict()
    if args.json:
        payload["session_hash"] = S.content_hash()
        payload["object"] = args.module
        emit_json(payload, out)
    else:
        for k, v in payload.items():
            out.write(f"{k}: {v}\n")
    return 0


def cmd_resolve(args, S, out):
    M = _module(S, args.module)
    if not isinstance(M, ModulePresentation):
        raise UsageError("resolve takes a module")
    res = free_resolution(M, args.bound)
    graded = sorted(res.graded_betti().items())
    payload = {
        "object": args.module,
        "bound": args.bound,
        "betti": res.betti,
        "graded_betti": [[i, j, b] for (i, j), b in graded],
        "terminated": res.terminated,
    }
    if args.json:
        payload["session_hash"] = S.content_hash()
        emit_json(payload, out)
    else:
        out.write(table(["i", "beta_i"], [[i, b] for i, b in enumerate(res.betti)]))
        out.write("graded: " + ", ".join(f"b({i},{j})={b}" for i, j, b in payload["graded_betti"]) + "\n")
        if res.terminated:
            out.write("resolution terminated\n")
    return 0


def cmd_koszul(args, S, out):
    M = _module(S, args.module)
    a = _ideal(S, args.ideal) or maximal_prime(S.ring).ideal
    gens = list(a.generators)
    H = koszul_homology(gens, M, S.ring)
    rows = []
    for j in sorted(H):
        h = H[j]
        zero = h.is_zero()
        rows.append({"j": j, "zero": zero, "k_dim": 0 if zero else h.k_dim()})
    dep = depth(a, M)
    payload = {"object": args.module, "elements": len(gens), "homology": rows, "depth": fmt_value(dep)}
    if args.json:
        payload["session_hash"] = S.content_hash()
        emit_json(payload, out)
    else:
        body = [[r["j"], "0" if r["zero"] else "nonzero", "-" if r["k_dim"] is None else r["k_dim"]] for r in rows]
        out.write(table(["j", "H_j", "dim_k"], body))
        out.write(f"depth: {fmt_value(dep)}\n")
    return 0


def cmd_check(args, S, out):
    M = _module(S, args.module)
    kind = args.kind
    if kind == "t1":
        rep = check_tor_rigidity(M, _prime(S, args.prime), args.bound, args.height_mode)
    elif kind == "t2":
        rep = check_ext_rigidity_local(M, _prime(S, args.prime), args.bound, args.height_mode)
    elif kind == "t3max":
        rep = check_ext_rigidity_global_maximal(M, _prime(S, args.prime), args.bound)
    elif kind == "p34":
        rep = check_nonvanishing_window(M, args.bound)
    elif kind in ("ab", "bass"):
        rep = check_ab_and_bass(M, args.bound, kind)
    else:
        if not args.primes:
            raise UsageError("chouinard needs --primes")
        primes = [_prime(S, n.strip()) for n in args.primes.split(",") if n.strip()]
        rep = check_chouinard(M, primes, args.mode, args.bound)
    return _finish(rep, args, out, S.content_hash())


def _finish(rep, args, out, digest):
    if args.json:
        payload = rep.as_dict()
        payload["session_hash"] = digest
        emit_json(payload, out)
    else:
        render_report(rep, out)
    return 2 if rep.violation else 0


def cmd_gallery(args, out):
    if args.which == "example4":
        name = f"example4-d{args.d}"
        try:
            text = builtin_text(name)
        except UsageError:
            raise UsageError("--d must be 1, 2 or 3")
        S = parse_session(text)
        bound = args.bound if args.bound_given else args.d + 8
        rep = gallery_example4(args.d, bound, S.field)
        return _finish(rep, args, out, S.content_hash())
    return cmd_fixtures(args, out)


def _fixture_verdicts(fx, bound):
    reps = [
        check_tor_rigidity(fx.module, fx.prime, bound),
        check_ext_rigidity_local(fx.module, fx.prime, bound),
        check_nonvanishing_window(fx.module, bound),
        check_ab_and_bass(fx.module, bound),
    ]
    return fx.ident, [(r.theorem_id, r.verdict) for r in reps]


def cmd_fixtures(args, out):
    seed = args.seed
    if args.fresh:
        seed = int.from_bytes(os.urandom(4), "big")
    fixtures, rejected = fixture_corpus(args.count, seed, args.bound)
    n = threads()
    if n > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(n) as ex:
            results = list(ex.map(_fixture_verdicts, fixtures, [args.bound] * len(fixtures)))
    else:
        results = [_fixture_verdicts(fx, args.bound) for fx in fixtures]
    results.sort()
    counts: dict = {}
    violations = []
    for ident, verdicts in results:
        for tid, v in verdicts:
            counts.setdefault(tid, {}).setdefault(v, 0)
            counts[tid][v] += 1
            if v == "VIOLATION":
                violations.append([ident, tid])
    payload = {
        "seed": seed,
        "count": len(fixtures),
        "rejected": rejected,
        "bound": args.bound,
        "verdicts": counts,
        "violations": violations,
    }
    if args.json:
        emit_json(payload, out)
    else:
        out.write(f"{len(fixtures)} fixtures (seed {seed}, {rejected} rejected by the size cap)\n")
        for tid in sorted(counts):
            parts = ", ".join(f"{v} {c}" for v, c in sorted(counts[tid].items()))
            out.write(f"{tid}: {parts}\n")
    return 2 if violations else 0


# ---------------------------------------------------------------------------
# argument parsing


def _global_flags(p: argparse.ArgumentParser, sub: bool):
    d = argparse.SUPPRESS if sub else None
    p.add_argument("--json", action="store_true", default=d if sub else False, help="emit JSON")
    p.add_argument("--bound", type=int, default=d if sub else 8, help="homological bound (default 8)")
    p.add_argument("--seed", type=int, default=d if sub else 20240601, help="fixture seed")
    p.add_argument("--timings", action="store_true", default=d if sub else False, help="print elapsed time (human mode)")
    p.add_argument(
        "--height-mode",
        choices=("equidim", "conservative"),
        default=d if sub else "equidim",
        help="how heights of primes are computed",
    )


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="rl", description="Rigidity of Tor and Ext against residue fields.")
    ap.add_argument("--version", action="version", version=f"rl {__version__}")
    _global_flags(ap, False)
    subs = ap.add_subparsers(dest="command", parser_class=_Parser)
    subs.required = True

    def sub(name, help_text, module=True, prime=False):
        sp = subs.add_parser(name, help=help_text)
        _global_flags(sp, True)
        sp.add_argument("--input", "-i", help="session file, '-' for stdin, or builtin:<name>")
        if module:
            sp.add_argument("--module", "-m", help="module or complex name")
        if prime:
            sp.add_argument("--prime", "-p", help="prime name (default: the maximal ideal)")
        return sp

    sub("tor", "Tor_i(k(p), M) ranks", prime=True)
    sub("ext", "Ext^i(R/p, M) at p", prime=True)
    sp = sub("invariants", "depth, width, dimensions")
    sp.add_argument("--ideal", help="ideal for depth (default: the maximal ideal)")
    sub("resolve", "minimal free resolution")
    sp = sub("koszul", "Koszul homology")
    sp.add_argument("--ideal", help="ideal whose generators are used (default: the variables)")
    sp = sub("check", "run a rigidity check", prime=True)
    sp.add_argument("kind", choices=CHECKS)
    sp.add_argument("--primes", help="comma separated prime names (chouinard)")
    sp.add_argument("--mode", choices=("flat", "injective"), default="flat", help="chouinard mode")
    sp = subs.add_parser("gallery", help="built-in examples and fixture corpus")
    _global_flags(sp, True)
    sp.add_argument("which", choices=("example4", "fixtures"))
    sp.add_argument("--d", type=int, default=1, help="dimension for example4 (1..3)")
    sp.add_argument("--count", type=int, default=20, help="number of fixtures")
    sp.add_argument("--fresh", action="store_true", help="fresh random seed for fixtures")
    return ap


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    args = ap.parse_args(argv)
    args.bound_given = any(a == "--bound" or a.startswith("--bound=") for a in argv)
    out = sys.stdout
    if args.bound < 0:
        ap.error("--bound must be nonnegative")
    start = time.perf_counter()
    try:
        threads()
        if args.command == "gallery":
            code = cmd_gallery(args, out)
        else:
            S = read_session(args.input)
            code = COMMANDS[args.command](args, S, out)
    except UsageError as e:
        print(f"rl: {e}", file=sys.stderr)
        return 1
    except USAGE_ERRORS as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"rl: {type(e).__name__}: {msg}", file=sys.stderr)
        return 1
    if args.timings and not args.json:
        out.write(f"elapsed: {time.perf_counter() - start:.3f}s\n")
    return code


COMMANDS = {
    "tor": cmd_tor,
    "ext": cmd_ext,
    "invariants": cmd_invariants,
    "resolve": cmd_resolve,
    "koszul": cmd_koszul,
    "check": cmd_check,
}


if __name__ == "__main__":
    sys.exit(main())
