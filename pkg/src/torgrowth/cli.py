"""Command-line interface: the `growthlab` entry point.

Subcommands: alexander, fox, branched, mahler, torsion, growth,
groupalg-check.  Errors exit nonzero with a machine-readable JSON object on
stderr.
"""

from __future__ import annotations

import argparse
import json
import pathlib
import sys

from . import growthlab
from .laurent import LaurentPoly, parse_poly, poly_from_json, poly_to_json
from .lattices import Subgroup
from .mahler import mahler_lawton, mahler_quadrature, mahler_univariate
from .presmod import (
    PresentedModule,
    alexander_complex,
    alexander_module,
    all_alexander,
    branched_module,
    delta,
    parse_presentation,
    rank,
)
from .torsion import betti as betti_of
from .torsion import torsion_order


def _read_poly(text: str, nvars: int | None) -> LaurentPoly:
    text = text.strip()
    if text.startswith("["):
        data = json.loads(text)
        if nvars is None:
            if not data:
                raise ValueError("JSON polynomial needs --nvars when empty")
            nvars = len(data[0][0])
        return poly_from_json(data, nvars)
    return parse_poly(text, nvars)


def _load_module(args) -> PresentedModule:
    if getattr(args, "matrix", None):
        data = json.loads(pathlib.Path(args.matrix).read_text())
        return PresentedModule.from_json(data)
    pres = parse_presentation(pathlib.Path(args.presentation).read_text())
    mod = alexander_module(pres)
    if getattr(args, "branched", False):
        mod = branched_module(mod, pres.nvars)
    return mod


def _subgroup_from_args(args, nvars: int) -> Subgroup:
    chosen = [
        name
        for name in ("cyclic", "diagonal", "gamma")
        if getattr(args, name, None) not in (None, False)
    ]
    if len(chosen) != 1:
        raise ValueError("choose exactly one of --cyclic, --diagonal, --gamma")
    if args.cyclic is not None:
        if nvars != 1:
            raise ValueError("--cyclic needs a one-variable module")
        return Subgroup.cyclic(args.cyclic)
    if args.diagonal is not None:
        return Subgroup.diagonal(nvars, args.diagonal)
    return Subgroup.from_json(json.loads(args.gamma))


def cmd_alexander(args) -> int:
    mod = _load_module(args)
    polys = all_alexander(mod)
    r = rank(mod)
    out = {
        "rank": r,
        "alexander": [str(p.poly) for p in polys],
        "delta": str(delta(mod).poly),
    }
    if args.presentation and not getattr(args, "branched", False):
        out["note"] = (
            "indices follow the relation-module convention; the homological "
            "numbering of the covering space is shifted down by one"
        )
    print(json.dumps(out, indent=2) if args.json else _fmt_alexander(out))
    return 0


def _fmt_alexander(out: dict) -> str:
    lines = [f"rank = {out['rank']}"]
    for j, p in enumerate(out["alexander"]):
        lines.append(f"Delta_{j} = {p}")
    lines.append(f"Delta(M) = {out['delta']}")
    if "note" in out:
        lines.append(f"note: {out['note']}")
    return "\n".join(lines)


def cmd_fox(args) -> int:
    pres = parse_presentation(pathlib.Path(args.presentation).read_text())
    cx = alexander_complex(pres)
    out = {
        "nvars": pres.nvars,
        "ranks": list(cx.ranks),
        "d1": [[poly_to_json(e) for e in row] for row in cx.diffs[0]],
        "d2": [[poly_to_json(e) for e in row] for row in cx.diffs[1]],
        "module": alexander_module(pres).to_json(),
    }
    print(json.dumps(out, indent=2))
    return 0


def cmd_branched(args) -> int:
    pres = parse_presentation(pathlib.Path(args.presentation).read_text())
    mod = branched_module(alexander_module(pres), pres.nvars)
    print(json.dumps(mod.to_json(), indent=2))
    return 0


def cmd_mahler(args) -> int:
    f = _read_poly(args.poly, args.nvars)
    if args.method == "jensen" or (args.method == "auto" and f.nvars == 1):
        est = mahler_univariate(f)
    elif args.method == "quadrature":
        est = mahler_quadrature(f, samples=args.samples, seed=args.seed)
    else:
        schedule = json.loads(args.schedule) if args.schedule else None
        est = mahler_lawton(f, schedule)
    print(json.dumps(est.to_json(), indent=2))
    return 0


def cmd_torsion(args) -> int:
    mod = _load_module(args)
    gamma = _subgroup_from_args(args, mod.nvars)
    tor = torsion_order(mod, gamma)
    b = betti_of(mod, gamma)
    print(json.dumps({"torsion_order": str(tor), "betti": b}, indent=2))
    return 0


def cmd_growth(args) -> int:
    config = growthlab.ExperimentConfig.from_file(
        args.config, seed=args.seed, jobs=args.jobs, force=args.force
    )
    report = growthlab.run(config, out_dir=args.out)
    summary = {
        "delta": str(report.delta_poly),
        "target": report.target.to_json(),
        "samples": len(report.samples),
        "final_gap": report.final_gap,
        "out": args.out,
    }
    print(json.dumps(summary, indent=2))
    return 0


def cmd_groupalg_check(args) -> int:
    results = growthlab.groupalg_identity_suite(
        cases=args.cases, max_order=args.max_order, seed=args.seed
    )
    passed = sum(1 for r in results if r["ok"])
    failed = len(results) - passed
    for r in results:
        if not r["ok"] or args.verbose:
            status = "PASS" if r["ok"] else "FAIL"
            print(f"[{status}] case {r['case']} {r['group']}: {r['check']} {r['detail']}")
    print(f"passed {passed} / {len(results)} checks ({failed} failures)")
    return 0 if failed == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="growthlab",
        description="Torsion growth of modules over Laurent polynomial rings",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_module_source(p, branched_flag=True):
        p.add_argument("--matrix", help="JSON file with a presentation matrix")
        p.add_argument("--presentation", help="group presentation text file")
        if branched_flag:
            p.add_argument(
                "--branched", action="store_true",
                help="use the branched-cover module of the presentation",
            )

    p = sub.add_parser("alexander", help="Alexander polynomials of a module")
    add_module_source(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_alexander)

    p = sub.add_parser("fox", help="chain complex and module from a presentation")
    p.add_argument("--presentation", required=True)
    p.set_defaults(func=cmd_fox)

    p = sub.add_parser("branched", help="branched-cover module of a presentation")
    p.add_argument("--presentation", required=True)
    p.set_defaults(func=cmd_branched)

    p = sub.add_parser("mahler", help="Mahler measure of a Laurent polynomial")
    p.add_argument("--poly", required=True, help="polynomial string or JSON terms")
    p.add_argument("--nvars", type=int)
    p.add_argument("--method", choices=["auto", "jensen", "lawton", "quadrature"],
                   default="auto")
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--schedule", help="JSON list of k-vectors for lawton")
    p.set_defaults(func=cmd_mahler)

    p = sub.add_parser("torsion", help="torsion order over one finite quotient")
    add_module_source(p)
    p.add_argument("--cyclic", type=int, help="cyclic cover order (one variable)")
    p.add_argument("--diagonal", type=int, help="diagonal subgroup d*Z^n")
    p.add_argument("--gamma", help="JSON matrix whose columns generate Gamma")
    p.set_defaults(func=cmd_torsion)

    p = sub.add_parser("growth", help="run a growth experiment from a config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="output directory for samples.csv / report.json")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("--force", action="store_true", help="override the SNF size guard")
    p.set_defaults(func=cmd_growth)

    p = sub.add_parser("groupalg-check", help="randomized group-algebra identity suite")
    p.add_argument("--cases", type=int, default=20)
    p.add_argument("--max-order", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_groupalg_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError, json.JSONDecodeError) as exc:
        payload = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(payload), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
