"""Command-line driver: batch verifications with JSON reports.

Exit codes: 0 success, 2 verification mismatch, 3 resource limit,
4 invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import building as bd
from . import cache, ggp, padic, quadspace, strata
from .acceptance import verify_all
from .errors import InvalidInput, ResourceLimit, StrataError, Unsupported
from .gf import GF

EXIT_OK = 0
EXIT_MISMATCH = 2
EXIT_RESOURCE = 3
EXIT_INVALID = 4


def _emit(args, payload: dict):
    if getattr(args, "table", False):
        for key, value in payload.items():
            print(f"{key:32} {value}")
    else:
        print(json.dumps(payload, sort_keys=True, indent=2))


def _odd_prime(value):
    p = int(value)
    if p < 3 or p % 2 == 0:
        raise argparse.ArgumentTypeError("odd prime required")
    return p


def _with_cache(args, command, config, compute):
    directory = cache.cache_dir(args.cache_dir)
    hit = cache.fetch(directory, command, config)
    if hit is not None:
        return hit
    result = compute()
    cache.store(directory, command, config, result)
    return result


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_quad_counts(args):
    p = args.p
    F = GF(p)
    rows = []
    checks = [
        ("isotropic lines in H + line", quadspace.split_odd_space(F, 1), 1, p + 1),
        ("isotropic lines in H^2 + line", quadspace.split_odd_space(F, 2), 1, 1 + p + p * p + p ** 3),
        ("isotropic planes in H^2 + line", quadspace.split_odd_space(F, 2), 2, (p + 1) * (p * p + 1)),
        ("isotropic planes in H^2", quadspace.split_even_space(F, 2), 2, 2 * (p + 1)),
        ("isotropic lines in H", quadspace.split_even_space(F, 1), 1, 2),
    ]
    mismatch = False
    for name, V, d, formula in checks:
        got = quadspace.count_isotropic_subspaces(V, d)
        rows.append({"check": name, "enumerated": got, "formula": formula, "agree": got == formula})
        mismatch = mismatch or got != formula
    V4 = quadspace.split_even_space(F, 2)
    lag = quadspace.enumerate_isotropic_subspaces(V4, 2)
    comps = sorted({quadspace.complementary_lagrangians(V4, W) for W in lag})
    rows.append({"check": "complementary lagrangians", "enumerated": comps, "formula": [p], "agree": comps == [p]})
    mismatch = mismatch or comps != [p]
    payload = {"p": p, "rows": rows}
    _emit(args, payload if not args.table else {r["check"]: f"{r['enumerated']} vs {r['formula']}" for r in rows})
    return EXIT_MISMATCH if mismatch else EXIT_OK


def _both_balls(args):
    config = {"p": args.p, "radius": args.radius}

    def compute():
        amb, T0 = bd.standard_V0(args.p)
        bball = bd.building_ball(bd.vertex_of(T0), args.radius)
        vball = padic.vrt_ball(padic.standard_vertex_lattices(args.p)[5], args.radius)
        res = bd.typed_iso_check(bball, vball)
        return {
            "building_ball": bball.to_json(),
            "vertex_ball": vball.to_json(),
            "isomorphic": res.found,
            "mapping": {str(k): v for k, v in sorted(res.mapping.items())} if res.found else None,
            "certificate": res.certificate,
        }

    return _with_cache(args, "balls", config, compute)


def cmd_vrt(args):
    data = _both_balls(args)
    _emit(args, {"p": args.p, "radius": args.radius, "ball": data["vertex_ball"], "isomorphic": data["isomorphic"]})
    return EXIT_OK if data["isomorphic"] else EXIT_MISMATCH


def cmd_building(args):
    data = _both_balls(args)
    _emit(args, {"p": args.p, "radius": args.radius, "ball": data["building_ball"], "isomorphic": data["isomorphic"]})
    return EXIT_OK if data["isomorphic"] else EXIT_MISMATCH


def cmd_correspondence(args):
    data = _both_balls(args)
    _emit(args, {
        "p": args.p,
        "radius": args.radius,
        "isomorphic": data["isomorphic"],
        "mapping": data["mapping"],
        "certificate": data["certificate"],
    })
    return EXIT_OK if data["isomorphic"] else EXIT_MISMATCH


def cmd_strata(args):
    sub = args.surface
    config = {"surface": sub, "p": args.p, "k": args.k, "m": args.m}

    def compute():
        if sub == "count":
            return strata.count_S(args.m, args.p, args.k).to_json()
        if sub == "fermat":
            return {"p": args.p, "k": args.k, "count": strata.fermat_count(args.p, args.k)}
        if sub == "klingen":
            return {"p": args.p, "k": args.k, "count": strata.klingen_count(args.p, args.k)}
        if sub == "local-model":
            pts = strata.local_model_singular(args.p, args.k)
            return {"p": args.p, "k": args.k, "points": [list(x) for x in pts]}
        if sub == "even-model":
            return strata.even_model_check(args.p).to_json()
        raise InvalidInput(f"unknown strata surface {sub!r}")

    _emit(args, _with_cache(args, "strata", config, compute))
    return EXIT_OK


def _parse_poly(text):
    try:
        return [int(c) for c in text.split(",")]
    except ValueError as exc:
        raise InvalidInput(f"bad polynomial spec {text!r}") from exc


def cmd_ggp(args):
    if args.action == "report":
        if not args.poly:
            raise InvalidInput("--poly required for ggp report")
        coeffs = _parse_poly(args.poly)
        config = {"p": args.p, "poly": coeffs}

        def compute():
            inp = ggp.validate(args.p, coeffs)
            return ggp.report(inp).to_json()

        payload = _with_cache(args, "ggp-report", config, compute)
        _emit(args, payload)
        return EXIT_OK if payload["agree"] else EXIT_MISMATCH
    # catalog
    config = {"p": args.p, "degrees": list(args.degrees)}

    def compute():
        return [r.to_json() for r in ggp.catalog(args.p, degrees=tuple(args.degrees))]

    payload = _with_cache(args, "ggp-catalog", config, compute)
    bad = [r for r in payload if not r["agree"]]
    _emit(args, {"p": args.p, "entries": len(payload), "disagreements": len(bad), "reports": payload})
    return EXIT_MISMATCH if bad else EXIT_OK


def cmd_verify(args):
    results = verify_all(radius=args.radius)
    for r in results:
        print(r.line(), file=sys.stderr)
    payload = {
        "radius": args.radius,
        "criteria": [
            {"number": r.number, "name": r.name, "passed": r.passed, "details": r.details}
            for r in results
        ],
        "all_passed": all(r.passed for r in results),
    }
    _emit(args, payload)
    return EXIT_OK if payload["all_passed"] else EXIT_MISMATCH


def build_parser():
    ap = argparse.ArgumentParser(
        prog="strata-lab",
        description="exact finite verifications: quadratic-space counts, "
        "vertex-lattice/building balls, stratum point counts and "
        "intersection multiplicities",
    )
    ap.add_argument("--cache-dir", default=None, help="cache directory (or $STRATA_LAB_CACHE)")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, k=False, radius=False):
        sp.add_argument("--p", type=_odd_prime, default=3)
        if k:
            sp.add_argument("--k", type=int, default=1)
        if radius:
            sp.add_argument("--radius", type=int, default=1)
        sp.add_argument("--json", dest="table", action="store_false", default=False)
        sp.add_argument("--table", dest="table", action="store_true")
        sp.add_argument("--budget-subspaces", type=int, default=quadspace.SUBSPACE_BUDGET)

    sp = sub.add_parser("quad-counts", help="counting-formula table")
    common(sp)
    sp.set_defaults(fn=cmd_quad_counts)

    for name, fn in (("vrt", cmd_vrt), ("building", cmd_building), ("correspondence", cmd_correspondence)):
        sp = sub.add_parser(name, help=f"{name} ball report with isomorphism verdict")
        common(sp, radius=True)
        sp.set_defaults(fn=fn)

    sp = sub.add_parser("strata", help="stratum / surface point counts")
    sp.add_argument("surface", choices=["count", "fermat", "klingen", "local-model", "even-model"])
    common(sp, k=True)
    sp.add_argument("--m", type=int, default=2)
    sp.set_defaults(fn=cmd_strata)

    sp = sub.add_parser("ggp", help="intersection reports")
    sp.add_argument("action", choices=["report", "catalog"])
    common(sp)
    sp.add_argument("--poly", default=None, help="coefficients, constant term first")
    sp.add_argument("--degrees", type=int, nargs="+", default=[2, 4, 6])
    sp.set_defaults(fn=cmd_ggp)

    sp = sub.add_parser("verify", help="run the acceptance suite")
    sp.add_argument("what", choices=["all"])
    common(sp, radius=True)
    sp.set_defaults(fn=cmd_verify)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except ResourceLimit as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (InvalidInput, Unsupported) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except StrataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
