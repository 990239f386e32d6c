"""Command-line front end: ``ppf <subcommand> ...``.

Reports are JSON (sorted keys) and always carry the tool version; reports about
a field also carry its defining polynomial.  Exit status is 0 on success, 1 when
a verification comes out negative and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import families as fam
from .functions import (
    DOQuad,
    bruteforce_witness,
    criterion_witness,
    format_function_spec,
    is_pp_bruteforce,
    is_pp_criterion,
    parse_function_spec,
)
from .gf2 import FieldCtx, FieldError, parse_field_spec
from .gring import GaloisRing, rds_from_function, verify_rds
from .search import LongRunRequired, default_jobs, run_search
from .sfield import Presemifield, derive_semifield, is_associative, nuclei
from .signal import (
    codebook_from_function,
    codebook_to_csv,
    codebook_to_dict,
    levenstein_bound_sq,
    meets_levenstein,
    mub_from_function,
    verify_mub,
    welch_bound_sq,
)

LISTING_STDOUT_MAX = 10_000

log = logging.getLogger("ppf")


class UsageError(Exception):
    pass


# ---------- helpers


def _field_info(ctx: FieldCtx) -> dict:
    return {"n": ctx.n, "poly": f"0x{ctx.poly:x}", "m": ctx.m, "spec": ctx.spec()}


def _report(**kw) -> dict:
    return {"version": __version__, **kw}


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _frac(x) -> str:
    return f"{x.numerator}/{x.denominator}"


def _float(x) -> float:
    return float(f"{float(x):.17g}")


def _param_value(raw: str, ctx: FieldCtx, rng):
    if raw == "random":
        return int(rng.integers(1, ctx.size))
    if raw == "g":
        return ctx.generator
    return int(raw, 0)


def _params(items) -> dict[str, str]:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"--param expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _family(ctx: FieldCtx, name: str, params: dict[str, str], seed: int) -> DOQuad:
    rng = np.random.default_rng(seed)

    def val(key, default=None):
        if key not in params:
            if default is None:
                raise UsageError(f"family {name} needs --param {key}=...")
            return default
        return _param_value(params[key], ctx, rng)

    def vals(key):
        if key not in params:
            raise UsageError(f"family {name} needs --param {key}=a,b,...")
        return [_param_value(v, ctx, rng) for v in params[key].split(",")]

    builders = {
        "t3-binomial": lambda: fam.fam_t3_binomial(ctx, val("c")),
        "t3-quad": lambda: fam.fam_t3_quadrinomial(ctx),
        "t3-trinomial": lambda: fam.trinomial_t3(ctx, val("c1"), val("c2"), val("c3")),
        "t3-alpha": lambda: fam.fam_t3_trinomial_alpha(ctx),
        "t3-mono": lambda: fam.mono_t3(ctx, val("c")),
        "hu-a": lambda: fam.hu_binomial_a(ctx, val("a")),
        "t4-quad": lambda: fam.fam_t4_quadrinomial(ctx),
        "t4-tri": lambda: fam.fam_t4_trinomial(ctx),
        "t2-mono": lambda: fam.mono_t2(ctx, val("c")),
        "t2-general": lambda: fam.t2_general(ctx, vals("c")),
        "kantor": lambda: fam.kantor(ctx, [int(x) for x in params.get("chain", "").split(",") if x], vals("zeta")),
    }
    if name not in builders:
        raise UsageError(f"unknown family {name!r}; choose from {', '.join(sorted(builders))}")
    return builders[name]()


def _function(args, ctx: FieldCtx) -> DOQuad:
    if bool(args.function) == bool(args.family):
        raise UsageError("give exactly one of --function or --family")
    if args.family:
        if ctx.m is None:
            raise UsageError("--family needs a split in --field (e.g. n=6,m=2)")
        return _family(ctx, args.family, _params(args.param), args.seed)
    return parse_function_spec(ctx, args.function, generic=args.generic)


def _function_info(F: DOQuad) -> dict:
    info = {"generic": format_function_spec(F, generic=True)}
    if F.is_family_form:
        info["structured"] = format_function_spec(F)
    return info


def _ctx_and_function(args):
    ctx = parse_field_spec(args.field)
    F = _function(args, ctx)
    return F.ctx, F


# ---------- subcommands


def cmd_verify(args) -> int:
    ctx, F = _ctx_and_function(args)
    method = args.method
    rep = _report(field=_field_info(ctx), function=_function_info(F), method=method)
    results = {}
    if method in ("auto", "generic", "specialized", "both"):
        if ctx.m is None:
            raise UsageError("the determinant criterion needs a split m in --field")
        crit = "auto" if method == "both" else method
        results["criterion"] = is_pp_criterion(F, crit)
        if not results["criterion"]:
            w = criterion_witness(F)
            rep["criterion_witness_b"] = None if w is None else f"{w:#x}"
    if method in ("bruteforce", "both"):
        results["bruteforce"] = is_pp_bruteforce(F)
        if not results["bruteforce"]:
            w = bruteforce_witness(ctx, F.table())
            rep["bruteforce_witness_a"] = None if w is None else f"{w:#x}"
    if len(set(results.values())) > 1:  # pragma: no cover - would be a library bug
        rep["disagreement"] = True
    rep["results"] = results
    rep["pseudo_planar"] = all(results.values())
    _emit(_dumps(rep), args.out)
    return 0 if rep["pseudo_planar"] else 1


def cmd_search(args) -> int:
    jobs = args.jobs or default_jobs()
    res = run_search(args.kind, args.m, jobs=jobs, long_run=args.long_run, checkpoint=args.checkpoint)
    ctx = parse_field_spec(res.field_spec)
    if args.format == "text":
        text = f"count: {res.count}\n"
        if args.list:
            text += "".join(",".join(f"{c:#x}" for c in row) + "\n" for row in res.members)
    else:
        rep = _report(field=_field_info(ctx), kind=res.kind, m=res.m, candidates=res.candidates, count=res.count)
        if args.list:
            rep["members"] = [[f"{c:#x}" for c in row] for row in res.members]
        text = _dumps(rep)
    if args.list and res.count > LISTING_STDOUT_MAX and not args.out:
        raise UsageError(f"listing {res.count} members needs --out")
    _emit(text, args.out)
    return 0


def cmd_rds(args) -> int:
    ctx, F = _ctx_and_function(args)
    D = rds_from_function(F)
    rep = _report(field=_field_info(ctx), function=_function_info(F), size=len(D))
    ok = True
    if args.verify:
        r = verify_rds(GaloisRing(ctx), D)
        ok = r.ok
        rep.update(
            rds=r.ok,
            coverage_histogram=r.histogram(),
            forbidden_hits=r.forbidden_hits,
            first_violation=None if r.first_violation is None else list(r.first_violation),
        )
    if args.list:
        rep["elements"] = [[d.a, d.b] for d in D]
    _emit(_dumps(rep), args.out)
    return 0 if ok else 1


def _require_pp(ctx, F, args) -> bool:
    if is_pp_bruteforce(F):
        return True
    _emit(_dumps(_report(field=_field_info(ctx), function=_function_info(F), pseudo_planar=False)), args.out)
    return False


def cmd_codebook(args) -> int:
    ctx, F = _ctx_and_function(args)
    if not _require_pp(ctx, F, args):
        return 1
    cb = codebook_from_function(F)
    if args.format == "csv":
        if not args.out and cb.N > LISTING_STDOUT_MAX:
            raise UsageError("large codebooks need --out")
        _emit(codebook_to_csv(cb), args.out)
        return 0
    body = codebook_to_dict(cb, ctx.n)
    lev = levenstein_bound_sq(cb.N, cb.K)
    body.update(_report(field=_field_info(ctx), function=_function_info(F)))
    body.update(levenstein_sq=_frac(lev), meets_levenstein=meets_levenstein(cb))
    if not args.out:
        if cb.N > LISTING_STDOUT_MAX:
            raise UsageError("large codebooks need --out")
        if args.summary:
            body.pop("vectors")
            body.pop("vector_denominator_sq")
    _emit(_dumps(body), args.out)
    return 0


def cmd_mub(args) -> int:
    ctx, F = _ctx_and_function(args)
    if not _require_pp(ctx, F, args):
        return 1
    B = mub_from_function(F, check=False)
    rep = _report(field=_field_info(ctx), function=_function_info(F), bases=len(B), dimension=ctx.size)
    ok = True
    if args.verify:
        r = verify_mub(B)
        ok = r.ok
        rep["verification"] = r.as_dict()
    _emit(_dumps(rep), args.out)
    return 0 if ok else 1


def cmd_semifield(args) -> int:
    ctx, F = _ctx_and_function(args)
    try:
        P = Presemifield(F)
    except FieldError as exc:
        _emit(_dumps(_report(field=_field_info(ctx), function=_function_info(F), error=str(exc))), args.out)
        return 1
    S = derive_semifield(P, args.e)
    rep = _report(
        field=_field_info(ctx),
        function=_function_info(F),
        e=f"{args.e:#x}",
        identity=f"{S.identity:#x}",
        commutative=S.commutative,
        associative=is_associative(S, allow_large=args.allow_large),
    )
    if args.nuclei:
        rep["nuclei"] = nuclei(S, allow_large=args.allow_large).sizes()
    _emit(_dumps(rep), args.out)
    return 0


def cmd_bounds(args) -> int:
    N, K = args.N, args.K
    rep = _report(N=N, K=K)
    try:
        w = welch_bound_sq(N, K)
        rep.update(welch_sq=_frac(w), welch_sq_float=_float(w), welch=_float(w**0.5))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        lev = levenstein_bound_sq(N, K)
        rep.update(levenstein_sq=_frac(lev), levenstein_sq_float=_float(lev), levenstein=_float(lev**0.5))
    except ValueError as exc:
        rep.update(levenstein_sq=None, levenstein_note=str(exc))
    _emit(_dumps(rep), args.out)
    return 0


# ---------- parser


def _int(x: str) -> int:
    return int(x, 0)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ppf", description="Quadratic pseudo-planar functions over GF(2^n).")
    p.add_argument("--version", action="version", version=f"ppf {__version__}")
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, function=True):
        sp.add_argument("--out", help="write the report here instead of stdout")
        if function:
            sp.add_argument("--field", required=True, help="n=<int>[,poly=0x<hex>][,m=<int>]")
            sp.add_argument("--function", help='coefficients "k,i=0xC;..." (or "i,j=0xC;..." with --generic)')
            sp.add_argument("--generic", action="store_true", help="--function lists pairs (i, j) of x^(2^i+2^j)")
            sp.add_argument("--family", help="named family instead of --function")
            sp.add_argument("--param", action="append", help="family parameter key=value (value: int, hex, g, random)")
            sp.add_argument("--seed", type=int, default=0, help="seed for random family parameters")

    sp = sub.add_parser("verify", help="test pseudo-planarity")
    common(sp)
    sp.add_argument("--method", default="auto", choices=["auto", "generic", "specialized", "bruteforce", "both"])
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("search", help="exhaustive structured searches")
    common(sp, function=False)
    sp.add_argument("kind", choices=["trinomial-t3", "t2-general"])
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--jobs", type=int, default=None, help="worker processes (default: $PPF_JOBS or 1)")
    sp.add_argument("--long-run", action="store_true", help="allow searches beyond the default size guard")
    sp.add_argument("--checkpoint", help="JSON checkpoint file for range resume")
    sp.add_argument("--list", action="store_true", help="include the members")
    sp.add_argument("--format", default="json", choices=["json", "text"])
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("rds", help="relative difference set in GR(4^n)")
    common(sp)
    sp.add_argument("--verify", action="store_true")
    sp.add_argument("--list", action="store_true", help="include the elements as [a, b] pairs")
    sp.set_defaults(func=cmd_rds)

    sp = sub.add_parser("codebook", help="optimal codebook from the MUB set")
    common(sp)
    sp.add_argument("--format", default="json", choices=["json", "csv"])
    sp.add_argument("--summary", action="store_true", help="omit the vectors on stdout")
    sp.set_defaults(func=cmd_codebook)

    sp = sub.add_parser("mub", help="complete set of mutually unbiased bases")
    common(sp)
    sp.add_argument("--verify", action="store_true")
    sp.set_defaults(func=cmd_mub)

    sp = sub.add_parser("semifield", help="derived semifield and nuclei")
    common(sp)
    sp.add_argument("--e", type=_int, default=1, help="nonzero element fixing the isotope (default 1)")
    sp.add_argument("--nuclei", action="store_true")
    sp.add_argument("--allow-large", action="store_true", help="lift the n <= 8 scan guard")
    sp.set_defaults(func=cmd_semifield)

    sp = sub.add_parser("bounds", help="Welch and Levenstein bounds for an (N, K) codebook")
    common(sp, function=False)
    sp.add_argument("N", type=int)
    sp.add_argument("K", type=int)
    sp.set_defaults(func=cmd_bounds)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, LongRunRequired, FieldError) as exc:
        print(f"ppf {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
