"""Command line interface: `vdgv <command> ...`, JSON on stdout.

Exit codes: 0 success, 2 malformed arguments, 3 a mathematical failure
(reported as {"schema": 1, "error": {"reason": ..., "message": ...}}).
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import List, Optional

from . import __version__
from .errors import CountMismatch, InvariantViolation, PreconditionFailed, VdgvError
from .field2k import FieldCtx, default_field
from .lpolynomial import (FAMILIES, CurveJob, LData, compare_twist, elliptic_quotient, family,
                          l_polynomial, run_job)
from .oracle import brute_force_L, count_affine, count_affine_naive, verify_curve
from .skewpoly import LinPoly
from .witt2 import gauss_sum_direct, gauss_sum_formula

SCHEMA = 1


# -- argument types ----------------------------------------------------------------

def _hex(s: str) -> int:
    try:
        v = int(s, 16)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a hex value: {s!r}")
    if v < 0:
        raise argparse.ArgumentTypeError(f"negative value: {s!r}")
    return v


def _hex_list(s: str) -> List[int]:
    return [_hex(t) for t in s.split(",") if t.strip()]


def _field_spec(s: str):
    parts = s.split("/")
    try:
        k = int(parts[0])
        f0 = int(parts[1]) if len(parts) > 1 else 1
    except (ValueError, IndexError):
        raise argparse.ArgumentTypeError(f"field must look like k or k/f0, got {s!r}")
    if len(parts) > 2 or k < 1 or f0 < 1 or k % f0:
        raise argparse.ArgumentTypeError(f"bad field {s!r}: need f0 | k")
    return k, f0


def _positive(s: str) -> int:
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {s!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {s!r}")
    return v


def _ctx(args) -> FieldCtx:
    k, f0 = args.field
    if args.irred is None:
        return default_field(k, f0)
    return FieldCtx(k, args.irred, f0)


def _curve_job(args) -> CurveJob:
    if getattr(args, "job", None):
        with open(args.job) as fh:
            return CurveJob.from_json(json.load(fh))
    if args.field is None or args.R is None:
        raise _Usage("--field and --R are required unless --job is given")
    ctx = _ctx(args)
    if any(c >= ctx.q for c in args.R):
        raise _Usage("a coefficient of R does not fit in the field")
    return CurveJob(ctx, LinPoly(ctx, args.R), A_bar=args.A_bar,
                    twist_t=getattr(args, "t", None), classify_m=args.m)


class _Usage(Exception):
    pass


# -- output --------------------------------------------------------------------------

def _emit(payload: dict, table: bool) -> None:
    payload = {"schema": SCHEMA, **payload}
    if table:
        for key, val in payload.items():
            if key == "taus":
                print("taus:")
                for row in val:
                    lab = row["label"]
                    print(f"  a={lab['a']} b={lab['b']} u={','.join(lab['u']) or '-'}"
                          f"  c={row['c']}  tau={row['tau']['re']}{row['tau']['im']:+d}i")
            else:
                print(f"{key}: {json.dumps(val, sort_keys=True)}")
    else:
        print(json.dumps(payload, sort_keys=True, indent=2))


def _ldata_payload(ld: LData, job: Optional[CurveJob] = None) -> dict:
    out = ld.to_json()
    out["field"] = ld.ctx.to_json()
    out["R"] = ld.R.to_json()["coeffs"]
    if job is not None and job.expected is not None:
        out["expected"] = job.expected
        out["name"] = job.name
        if job.extra:
            out["extra"] = job.extra
    return out


# -- commands ------------------------------------------------------------------------

def cmd_lpoly(args) -> int:
    job = _curve_job(args)
    ld = run_job(job)
    out = _ldata_payload(ld, job)
    if args.verify:
        out["verified_counts"] = [r.to_json() for r in verify_curve(ld, args.m_max)]
    _emit(out, args.table)
    return 0


def cmd_verify(args) -> int:
    job = _curve_job(args)
    ld = run_job(job)
    out = _ldata_payload(ld, job)
    out["verified_counts"] = [r.to_json() for r in verify_curve(ld, args.m_max)]
    _emit(out, args.table)
    return 0


def cmd_count(args) -> int:
    job = _curve_job(args)
    aff = count_affine(job.R, args.m)
    out = {"field": job.ctx.to_json(), "R": job.R.to_json()["coeffs"], "m": args.m,
           "affine": aff, "projective": aff + 1}
    if args.naive:
        naive = count_affine_naive(job.R, args.m)
        out["naive_affine"] = naive
        if naive != aff:
            raise CountMismatch("trace criterion and pair enumeration disagree")
    _emit(out, args.table)
    return 0


def cmd_twist(args) -> int:
    if args.t is None:
        raise _Usage("--t is required")
    job = _curve_job(args)
    job.twist_t = None
    if args.t >= job.ctx.q:
        raise _Usage("--t does not fit in the field")
    ld = run_job(job)
    cmp = compare_twist(ld, args.t, fresh=not args.no_fresh)
    out = {
        "field": job.ctx.to_json(),
        "R": job.R.to_json()["coeffs"],
        "t": format(args.t, "x"),
        "R_t": cmp.R_t.to_json()["coeffs"],
        "rows": [{"label": lab.to_json(), "tau_direct": a.to_json(), "tau_formula": b.to_json()}
                 for lab, a, b in cmp.rows],
        "L_t": cmp.L_direct,
        "L_fresh": cmp.L_fresh,
        "ok": cmp.ok,
    }
    if not cmp.ok:
        raise InvariantViolation("twist formula disagrees with the direct computation")
    _emit(out, args.table)
    return 0


def cmd_family(args) -> int:
    params = {"p": args.p}
    if args.name in ("prop_2pp", "cor_abc") and args.a0 is not None:
        params["a0"] = args.a0
    if args.name == "cor_abcd" and args.a is not None:
        params["a"] = args.a
    if args.name == "cor_maximal_example":
        params["n"] = args.n
        if args.t is not None:
            params["t"] = args.t
    job = family(args.name, **params)
    ld = run_job(job)
    out = _ldata_payload(ld, job)
    if args.verify:
        m = job.classify_m
        rep = verify_curve(ld, m, strict=False)
        if len(rep) < m:
            raise PreconditionFailed(f"F_(q^{m}) exceeds the enumeration gate")
        out["verified_counts"] = [r.to_json() for r in rep]
        if not all(r.match for r in rep):
            raise CountMismatch("brute-force count disagrees with the L-polynomial")
        if ld.classification != job.expected:
            raise InvariantViolation(f"expected {job.expected}, got {ld.classification}")
    _emit(out, args.table)
    return 0


def cmd_gauss(args) -> int:
    formula = gauss_sum_formula(args.n)
    out = {"n": args.n, "value": formula.to_json()}
    if args.check:
        direct = gauss_sum_direct(args.n)
        out["direct"] = direct.to_json()
        out["match"] = direct == formula
    if args.check and not out["match"]:
        raise InvariantViolation("direct Gauss sum differs from (-1-i)^n")
    _emit(out, args.table)
    return 0


def cmd_elliptic(args) -> int:
    ctx = _ctx(args)
    E = elliptic_quotient(ctx, args.alpha, (args.a, args.b))
    out = {"field": ctx.to_json(), "alpha": format(args.alpha, "x"), "c": format(E.c, "x"),
           "curve": f"z^2 + z = x^3 + {E.a2:x} x^2", "L": E.L_formula()}
    if args.check:
        bf = brute_force_L(E.R)
        out["L_brute_force"] = bf
        out["match"] = bf == out["L"]
    if args.check and not out["match"]:
        raise CountMismatch("brute-force L-polynomial of E_c differs from the formula")
    _emit(out, args.table)
    return 0


def selftest(seed: int = 0) -> dict:
    """Small exhaustive checks across the pipeline; raises on the first failure."""
    results = {}
    ctx = default_field(2)
    ld = l_polynomial(LinPoly(ctx, [1, 1]))
    verify_curve(ld, 3)
    results["worked_example"] = ld.L_coeffs == [1, 0, 4]
    results["gauss_sums"] = all(gauss_sum_direct(n) == gauss_sum_formula(n) for n in range(1, 11))
    fams = []
    for name, kw in (("cor_abc", {"p": 2}), ("prop_2pp", {"p": 4}), ("cor_abcd", {"p": 8})):
        job = family(name, **kw)
        fl = run_job(job)
        verify_curve(fl, job.classify_m)
        fams.append(fl.classification == job.expected)
    results["families"] = all(fams)
    rng = random.Random(seed)
    done = twists = 0
    while done < 10:
        c = default_field(rng.choice([4, 6]))
        R = LinPoly(c, [rng.randrange(c.q), rng.randrange(c.q), rng.randrange(1, c.q)])
        try:
            rl = l_polynomial(R)
        except VdgvError:
            continue
        verify_curve(rl, 2)
        twists += compare_twist(rl, rng.randrange(c.q)).ok
        done += 1
    results["random_instances"] = done == 10
    results["twists"] = twists == 10
    for key, ok in results.items():
        if not ok:
            raise InvariantViolation(f"selftest failed: {key}")
    return results


def cmd_selftest(args) -> int:
    _emit({"selftest": selftest(args.seed), "version": __version__}, args.table)
    return 0


# -- parser ----------------------------------------------------------------------------

def _add_output(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--json", action="store_true", help="JSON output (default)")
    g.add_argument("--table", action="store_true", help="plain-text output")


def _add_curve(p, twist: bool = False):
    p.add_argument("--field", type=_field_spec, help="k or k/f0: F_(2^k) over F_(2^f0)")
    p.add_argument("--irred", type=_hex, help="defining polynomial (hex, bit i = x^i)")
    p.add_argument("--R", type=_hex_list, help="coefficients a_0,..,a_e of R (hex)")
    p.add_argument("--A-bar", dest="A_bar", type=_hex_list, help="F_p-basis of a Lagrangian (hex)")
    p.add_argument("--job", help="CurveJob JSON file instead of --field/--R")
    p.add_argument("--m", type=_positive, default=1, help="classify over F_(q^m)")
    if twist:
        p.add_argument("--t", type=_hex, help="twist parameter in F_q (hex)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="vdgv", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lpoly", help="L-polynomial of y^p + y = xR(x)")
    _add_curve(p, twist=True)
    p.add_argument("--verify", action="store_true", help="also check point counts")
    p.add_argument("--m-max", type=_positive, default=1)
    _add_output(p)
    p.set_defaults(func=cmd_lpoly)

    p = sub.add_parser("verify", help="L-polynomial checked against brute-force counts")
    _add_curve(p, twist=True)
    p.add_argument("--m-max", type=_positive, default=3)
    _add_output(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("count", help="brute-force point count over F_(q^m)")
    _add_curve(p)
    p.add_argument("--naive", action="store_true", help="also count (x, y) pairs directly")
    _add_output(p)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("twist", help="eigenvalues of R + F_A^*(t)^2 x, two ways")
    _add_curve(p, twist=True)
    p.add_argument("--no-fresh", action="store_true", help="skip the independent rerun on R_t")
    _add_output(p)
    p.set_defaults(func=cmd_twist)

    p = sub.add_parser("family", help="named families of maximal curves")
    p.add_argument("--name", required=True, choices=sorted(FAMILIES))
    p.add_argument("--p", type=_positive, required=True)
    p.add_argument("--a0", type=_hex)
    p.add_argument("--a", type=_hex)
    p.add_argument("--n", type=_positive, default=2)
    p.add_argument("--t", type=_hex)
    p.add_argument("--verify", action="store_true", help="count points over the target field")
    _add_output(p)
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("gauss-sum", help="the Gauss sum of xi over F_(2^n)")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--check", action="store_true", help="also sum over the field")
    _add_output(p)
    p.set_defaults(func=cmd_gauss)

    p = sub.add_parser("elliptic-quotient", help="z^2 + z = x^3 + (c^2+c+1) x^2 from (alpha, a, b)")
    p.add_argument("--field", type=_field_spec, required=True)
    p.add_argument("--irred", type=_hex)
    p.add_argument("--alpha", type=_hex, required=True)
    p.add_argument("--a", type=_hex, required=True)
    p.add_argument("--b", type=_hex, default=0)
    p.add_argument("--check", action="store_true", help="compare with a brute-force L-polynomial")
    _add_output(p)
    p.set_defaults(func=cmd_elliptic)

    p = sub.add_parser("selftest", help="run small exhaustive checks")
    p.add_argument("--seed", type=int, default=0)
    _add_output(p)
    p.set_defaults(func=cmd_selftest)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except _Usage as ex:
        ap.print_usage(sys.stderr)
        print(f"vdgv: error: {ex}", file=sys.stderr)
        return 2
    except VdgvError as ex:
        err = {"schema": SCHEMA, "error": {"reason": ex.reason, "message": str(ex)}}
        if getattr(ex, "detail", None):
            err["error"]["detail"] = {k: str(v) for k, v in ex.detail.items()}
        print(json.dumps(err, sort_keys=True, indent=2))
        print(f"vdgv: {ex.reason}: {ex}", file=sys.stderr)
        return 3
    except (OSError, ValueError, KeyError) as ex:
        ap.print_usage(sys.stderr)
        print(f"vdgv: error: {ex}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
