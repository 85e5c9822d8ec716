"""Command-line front end.

Exit codes: 0 success, 1 I/O or format error, 2 failed precondition,
3 failed verification.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import bounds, charging, generators, packing, transforms
from .geometry import GeneralPositionError, GeneralizedTile, Instance, InvalidTileError, Tile
from .render import RenderStyle, default_style, render_svg

EXIT_OK, EXIT_IO, EXIT_PRECONDITION, EXIT_VERIFY = 0, 1, 2, 3

CHECKS = ("partition", "crowns", "pentagon", "ratios", "exclusive")


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _read_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise CliError(EXIT_IO, f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise CliError(EXIT_IO, f"{path} is not valid JSON: {e}") from e


def _write_text(path, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as e:
        raise CliError(EXIT_IO, f"cannot write {path}: {e}") from e


def _emit(obj, out=None) -> None:
    text = json.dumps(obj, indent=2) + "\n"
    if out:
        _write_text(out, text)
    else:
        sys.stdout.write(text)


def _load_instance(path) -> Instance:
    data = _read_json(path)
    try:
        return Instance.from_json(data)
    except (KeyError, TypeError) as e:
        raise CliError(EXIT_IO, f"{path} is not an instance file: {e}") from e


def _load_packing_or_instance(path) -> packing.TilePacking:
    data = _read_json(path)
    try:
        if "tiles" in data:
            return packing.packing_from_json(data)
        return packing.pack(Instance.from_json(data))
    except (KeyError, TypeError) as e:
        raise CliError(EXIT_IO, f"{path} is neither an instance nor a packing: {e}") from e


def _style(args) -> RenderStyle:
    if getattr(args, "style", None):
        try:
            return RenderStyle.load(args.style)
        except OSError as e:
            raise CliError(EXIT_IO, f"cannot read style {args.style}: {e}") from e
    return default_style()


# --------------------------------------------------------------------------
# commands


def cmd_pack(args) -> int:
    inst = _load_instance(args.input)
    pk = packing.pack(inst)
    pc = charging.compute_crowns(pk)
    data = packing.packing_to_json(pk, pc.crown_areas)
    data["total_charge"] = charging.total_charge(pc)
    _emit(data, args.output)
    if args.svg:
        render_svg(pc, _style(args), args.svg, show_pentagon=not args.no_pentagon)
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.family == "diagonal":
        inst = generators.gen_diagonal(args.n)
    elif args.family == "random":
        inst = generators.gen_random(args.n, args.seed)
    elif args.family == "crown-tight":
        inst = generators.gen_crown_tight(args.eps)
    else:
        params = generators.AdversarialParams(
            A=args.A, k=args.k, eps=args.eps, perturb_delta=args.delta, spacing=args.spacing, strict=args.strict
        )
        inst, cf = generators.gen_adversarial(params)
        if args.curves:
            try:
                cf.write_csv(args.curves)
            except OSError as e:
                raise CliError(EXIT_IO, f"cannot write {args.curves}: {e}") from e
    _emit(inst.to_json(), args.out)
    return EXIT_OK


def run_checks(pk: packing.TilePacking, checks, samples: int = 100_000) -> list[packing.Report]:
    pc = charging.compute_crowns(pk)
    reports = []
    for c in checks:
        if c == "partition":
            reports.append(packing.verify_partition(pk, samples=samples))
        elif c == "crowns":
            reports.append(charging.crowns_disjoint(pc))
        elif c == "pentagon":
            reports.append(charging.crowns_in_pentagon(pc))
        elif c == "ratios":
            r = charging.charging_ratio_report(pc, bounds.bound_function("strong"))
            r.details.pop("tiles", None)
            reports.append(r)
        elif c == "exclusive":
            reports.append(packing.verify_exclusive_areas(None, pk))
    return reports


def _parse_checks(text: str) -> list[str]:
    names = [c.strip() for c in text.split(",") if c.strip()]
    if not names:
        raise CliError(EXIT_PRECONDITION, "no checks given")
    if "all" in names:
        return list(CHECKS)
    bad = [c for c in names if c not in CHECKS]
    if bad:
        raise CliError(EXIT_PRECONDITION, f"unknown checks {bad}; choose from all, {', '.join(CHECKS)}")
    return names


def _verify_one(path: str, checks: list[str], samples: int) -> dict:
    """Verify one file; never raises, so a bad file cannot sink a batch."""
    try:
        pk = _load_packing_or_instance(path)
        reports = run_checks(pk, checks, samples)
        return {"input": path, "pass": all(r.passed for r in reports), "reports": [r.to_json() for r in reports]}
    except CliError as e:
        return {"input": path, "pass": False, "error": str(e), "code": e.code}
    except GeneralPositionError as e:
        return {"input": path, "pass": False, "error": str(e), "code": EXIT_PRECONDITION}
    except (ValueError, InvalidTileError) as e:
        return {"input": path, "pass": False, "error": str(e), "code": EXIT_PRECONDITION}


def cmd_verify(args) -> int:
    checks = _parse_checks(args.checks)
    if args.batch:
        files = sorted(str(p) for p in Path(args.batch).glob("*.json"))
        if not files:
            raise CliError(EXIT_IO, f"no JSON files in {args.batch}")
        with ProcessPoolExecutor(max_workers=args.workers) as ex:
            results = list(ex.map(_verify_one, files, [checks] * len(files), [args.samples] * len(files)))
        _emit({"pass": all(r["pass"] for r in results), "results": results})
        codes = [r.get("code", EXIT_OK if r["pass"] else EXIT_VERIFY) for r in results]
        return max(codes)
    result = _verify_one(args.input, checks, args.samples)
    _emit(result)
    if "code" in result:
        return result["code"]
    return EXIT_OK if result["pass"] else EXIT_VERIFY


def cmd_bounds(args) -> int:
    out = {}
    for kind in ("weak", "strong"):
        r = bounds.rho_star(kind)
        out[kind] = {
            "rho_star": r,
            "xi_at_rho_star": bounds.xi(kind, r),
            "xi_prime_at_rho_star": bounds.xi_prime(kind, r),
            "tangent_at_half": bounds.tangent(kind, r)(0.5),
            "point_convex": bounds.check_point_convexity(kind, r).passed,
        }
    if args.rho is not None:
        out["at"] = {"rho": args.rho, "xi_weak": bounds.xi("weak", args.rho), "xi_strong": bounds.xi("strong", args.rho)}
    _emit(out)
    return EXIT_OK


def cmd_certify(args) -> int:
    pk = _load_packing_or_instance(args.input)
    cert = bounds.certify(pk, kind=args.kind)
    _emit(cert.to_json())
    return EXIT_OK if cert.valid else EXIT_VERIFY


def cmd_transform(args) -> int:
    data = _read_json(args.input)
    try:
        t = transforms.tile_from_json(data)
    except (KeyError, TypeError) as e:
        raise CliError(EXIT_IO, f"{args.input} is not a tile file: {e}") from e
    partial = False
    if args.op == "shorter-side":
        if not isinstance(t, GeneralizedTile):
            raise CliError(EXIT_PRECONDITION, "shorter-side needs a tile given by sections")
        idx = args.step_index if args.step_index is not None else transforms.find_step_slide(t)
        if idx is None:
            raise CliError(EXIT_PRECONDITION, "no step followed by a slide in this tile")
        after = transforms.shorter_side_swap(t, idx)
    else:
        if not isinstance(t, Tile):
            raise CliError(EXIT_PRECONDITION, f"{args.op} needs a tile given by anchor and gamma")
        if args.op == "normalize":
            after = transforms.normalize(t)
        elif args.op == "prune":
            after = transforms.prune_degenerate(t)
        else:
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always", transforms.IncompleteTransformWarning)
                after = transforms.two_point_slide(t, max_iter=args.max_iter)
            partial = any(issubclass(w.category, transforms.IncompleteTransformWarning) for w in caught)
    res = transforms.check_precedes(t, after)
    out = res.to_json()
    out["partial"] = partial
    _emit(out, args.output)
    return EXIT_VERIFY if partial or not res.precedes_ok else EXIT_OK


def cmd_render(args) -> int:
    pk = _load_packing_or_instance(args.input)
    pc = charging.compute_crowns(pk) if not args.no_crowns else pk
    render_svg(pc, _style(args), args.out, show_pentagon=not args.no_pentagon)
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tilepack", description="Greedy anchored rectangle packing toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("pack", help="run TilePacking on an instance")
    sp.add_argument("input")
    sp.add_argument("-o", "--output", help="packing JSON (default: stdout)")
    sp.add_argument("--svg", help="also draw the packing")
    sp.add_argument("--style", help="render style JSON (default: $TILEPACK_STYLE)")
    sp.add_argument("--no-pentagon", action="store_true")
    sp.set_defaults(func=cmd_pack)

    sp = sub.add_parser("gen", help="generate an instance")
    fam = sp.add_subparsers(dest="family", required=True)
    g = fam.add_parser("diagonal")
    g.add_argument("--n", type=int, required=True)
    g = fam.add_parser("random")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g = fam.add_parser("crown-tight")
    g.add_argument("--eps", type=float, required=True)
    g = fam.add_parser("adversarial")
    g.add_argument("--A", type=float, default=math.exp(-2.0))
    g.add_argument("--k", type=int, default=16)
    g.add_argument("--eps", type=float, default=2.0**-8 * math.sqrt(2.0))
    g.add_argument("--delta", type=float, default=None, help="perturbation size (default adapts to n)")
    g.add_argument("--spacing", choices=("x", "angle"), default="x")
    g.add_argument("--strict", action="store_true", help="fail instead of merging collapsed curves")
    g.add_argument("--curves", help="write the curve family as CSV")
    for fp in fam.choices.values():
        fp.add_argument("--out", help="instance JSON (default: stdout)")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("verify", help="run structural and charging checks")
    sp.add_argument("input", nargs="?")
    sp.add_argument("--checks", default="all", help=f"comma list of: all, {', '.join(CHECKS)}")
    sp.add_argument("--batch", help="verify every *.json in this directory")
    sp.add_argument("--workers", type=int, default=None)
    sp.add_argument("--samples", type=int, default=100_000, help="Monte-Carlo samples for the partition check")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("bounds", help="print the bound constants")
    sp.add_argument("--rho", type=float, default=None)
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("certify", help="certified coverage lower bound of a packing")
    sp.add_argument("input")
    sp.add_argument("--kind", choices=("weak", "strong"), default="strong")
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("transform", help="apply a tile transformation")
    sp.add_argument("input")
    sp.add_argument("--op", choices=("normalize", "prune", "two-point", "shorter-side"), required=True)
    sp.add_argument("-o", "--output")
    sp.add_argument("--step-index", type=int, default=None)
    sp.add_argument("--max-iter", type=int, default=10_000)
    sp.set_defaults(func=cmd_transform)

    sp = sub.add_parser("render", help="draw an instance or packing as SVG")
    sp.add_argument("input")
    sp.add_argument("--out", required=True)
    sp.add_argument("--style")
    sp.add_argument("--no-pentagon", action="store_true")
    sp.add_argument("--no-crowns", action="store_true")
    sp.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify" and not args.batch and not args.input:
        parser.error("verify needs an input file or --batch DIR")
    try:
        return args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except (GeneralPositionError, generators.CurveOrderingError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
