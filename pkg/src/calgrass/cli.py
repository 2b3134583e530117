"""Command-line interface: ``calgrass <command> ...``.

Exit codes
----------
0  every requested check passed
1  a check ran and failed (or a scenario is inconsistent)
2  usage error
3  malformed input file
4  unknown name
5  numerically inconclusive
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from . import calibrations as cal
from .acceptance import CRITERIA, run_acceptance
from .fgab import ChainComplex, format_list, uct_cohomology, uct_with_coefficients
from .registry import Registry, RegistryError
from .ring import duality_pairing_check, ring_matches_cohomology, verify_ring_hom
from .slfree import (
    CATALOG,
    RefineGridError,
    dimension_equation_solutions,
    gauss_degree,
    get_surface,
    scan_to_csv,
    sl_tangent_scan,
)
from .spectral import FibrationScenario, describe, solve, summary

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_PARSE, EXIT_UNKNOWN, EXIT_INCONCLUSIVE = range(6)

# free dimensions are indexed by the real ambient dimension
FREEDIM_ALIASES = {"sl4": "sl2", "sl6": "sl3"}
RING_ALIASES = {"slag": "slag_ring"}


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _unknown(kind: str, name: str, valid) -> CliError:
    return CliError(f"unknown {kind} {name!r}; valid: {', '.join(sorted(valid))}", EXIT_UNKNOWN)


def _read_json(path: Path):
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}", EXIT_PARSE) from None
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror}", EXIT_PARSE) from None


def _resolve_file_or_name(arg: str, names, kind: str):
    """A path if it exists, otherwise a corpus name (a trailing .json is ignored)."""
    path = Path(arg)
    if path.exists():
        return path, None
    name = path.name[:-5] if path.name.endswith(".json") else arg
    if name in names:
        return None, name
    raise _unknown(kind, arg, names)


def _corpus_names(reg: Registry, sub: str) -> list[str]:
    dirs = [Path(__file__).parent / "data" / sub]
    if reg.root is not None:
        dirs.append(reg.root / sub)
    return sorted({p.stem for d in dirs if d.is_dir() for p in d.glob("*.json")})


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("CALGRASS_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise CliError(f"CALGRASS_SEED must be an integer, got {env!r}", EXIT_USAGE) from None


def _emit(args, payload: dict, text: str) -> None:
    if args.output == "json":
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(text)


# -- commands ------------------------------------------------------------------------


def cmd_comass(args, reg) -> int:
    specs = cal.builtin_calibrations()
    if args.form not in specs:
        raise _unknown("form", args.form, specs)
    spec = specs[args.form]
    if args.k is not None and args.k != spec.k:
        raise CliError(f"form {spec.name} has degree {spec.k}, not {args.k}", EXIT_USAGE)
    rep = cal.comass(spec, starts=args.starts, seed=_seed(args))
    payload = {"form": spec.name, "n": spec.n, "k": spec.k, **rep.to_dict()}
    payload.pop("argmax")
    text = (f"comass({spec.name}) = {rep.max_value:.10f} over G_{spec.k}^+ R^{spec.n}\n"
            f"Hessian at maximizer: index {rep.index}, nullity {rep.nullity}, positive {rep.positive}\n"
            f"converged starts: {rep.converged_fraction:.0%} of {rep.starts_used}")
    _emit(args, payload, text)
    return EXIT_INCONCLUSIVE if rep.inconclusive else EXIT_OK


def cmd_freedim(args, reg) -> int:
    specs = cal.builtin_calibrations()
    name = FREEDIM_ALIASES.get(args.cal, args.cal)
    if name not in specs:
        raise _unknown("calibration", args.cal, list(specs) + list(FREEDIM_ALIASES))
    rep = cal.free_dimension(specs[name], trials=args.trials, seed=_seed(args))
    payload = {"requested": args.cal, **rep.to_dict()}
    if rep.value is None:
        text = f"fd({args.cal}) inconclusive: between {rep.low} and {rep.high}"
    else:
        text = (f"fd({args.cal}) = {rep.value}; "
                f"{rep.not_free_count} of {len(rep.witnesses)} sampled {rep.value + 1}-subspaces not free")
    _emit(args, payload, text)
    return EXIT_INCONCLUSIVE if rep.value is None else EXIT_OK


def cmd_morse(args, reg) -> int:
    rep = cal.morse_scan(starts=args.starts, seed=_seed(args))
    lines = ["value      index  nullity  count"]
    for c in rep.classes():
        lines.append(f"{c['value']:+.6f}  {c['index']:5d}  {c['nullity']:7d}  {c['count']:5d}")
    lines.append(f"unresolved starts: {len(rep.unresolved)}; level set 0 dimension: {rep.level_set_dimension}")
    _emit(args, rep.to_dict(), "\n".join(lines))
    return EXIT_INCONCLUSIVE if rep.unresolved else EXIT_OK


def cmd_homology(args, reg) -> int:
    path, name = _resolve_file_or_name(args.complex, _corpus_names(reg, "complexes"), "complex")
    if path is not None:
        data = _read_json(path)
        try:
            cx = ChainComplex.from_dict(data)
        except (KeyError, TypeError, ValueError) as exc:
            raise CliError(f"{path}: malformed chain complex: {exc}", EXIT_PARSE) from None
    else:
        cx = reg.complex(name)
    H = cx.homology()
    if args.coeff is not None:
        if args.coeff < 2:
            raise CliError("--coeff must be at least 2", EXIT_USAGE)
        H = uct_with_coefficients(H, args.coeff)
        label = f"H(Z{args.coeff})"
    else:
        label = "H"
    _emit(args, {"groups": [str(g) for g in H], "coefficients": args.coeff or "Z"},
          f"{label} = {format_list(H)}")
    return EXIT_OK


def cmd_ss(args, reg) -> int:
    path, name = _resolve_file_or_name(args.scenario, _corpus_names(reg, "scenarios"), "scenario")
    try:
        s = FibrationScenario.from_dict(_read_json(path)) if path is not None else reg.scenario(name)
        result = solve(s, bound=args.bound)
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(f"{args.scenario}: malformed scenario: {exc}", EXIT_PARSE) from None
    payload = {**result.to_dict(), "citation": s.citation}
    text = summary(result) + "\n" + describe(result)
    if s.citation:
        text += f"\n  [{s.citation}]"
    _emit(args, payload, text)
    if result.partial:
        return EXIT_INCONCLUSIVE
    return EXIT_OK if result.consistent else EXIT_FAILED


def cmd_ring(args, reg) -> int:
    key = RING_ALIASES.get(args.name, args.name)
    if key not in reg.keys("rings"):
        raise _unknown("ring", args.name, list(RING_ALIASES) + reg.keys("rings"))
    ring = reg.ring(key)
    entry = reg.ring_entry(key)
    checks = []
    if entry.get("space"):
        Hc = uct_cohomology(reg.homology(entry["space"]))
        checks.append(("cohomology", ring_matches_cohomology(ring, Hc), entry.get("citation", "")))
    if key in reg.keys("duality_pairings"):
        pairing = reg.duality_pairing(key)
        checks.append(("duality pairing", duality_pairing_check(ring, pairing["dim"]),
                       pairing.get("citation", "")))
    if args.hom:
        if args.hom not in reg.keys("ring_homs"):
            raise _unknown("ring homomorphism", args.hom, reg.keys("ring_homs"))
        mapping, source, target = reg.ring_hom(args.hom)
        checks.append((f"homomorphism {args.hom}", verify_ring_hom(mapping, source, target),
                       reg.citation("ring_homs", args.hom)))
    lines = [f"ring {key}: {ring}"]
    for label, res, cite in checks:
        lines.append(f"  {'PASS' if res.passed else 'FAIL'} {label}: {res.detail} [{cite}]")
    payload = {"ring": key, "checks": [
        {"check": label, "passed": res.passed, "detail": res.detail, "citation": cite}
        for label, res, cite in checks]}
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if all(res.passed for _, res, _ in checks) else EXIT_FAILED


def _surface(name):
    try:
        return get_surface(name)
    except KeyError:
        raise _unknown("surface", name, CATALOG) from None


def cmd_slfree(args, reg) -> int:
    if args.slcmd == "dimeq":
        sols = dimension_equation_solutions(args.kmax)
        text = ", ".join(f"({k},{n})" for k, n in sols) or "no solutions"
        _emit(args, {"kmax": args.kmax, "solutions": [list(s) for s in sols]}, text)
        return EXIT_OK
    s = _surface(args.surface)
    if args.slcmd == "degree":
        try:
            d = gauss_degree(s, (args.grid, args.grid))
        except RefineGridError as exc:
            raise CliError(str(exc), EXIT_INCONCLUSIVE) from None
        text = (f"{s.name} ({s.topology}, chi = {s.euler_characteristic}): "
                f"deg p+ = {d.deg_plus}, deg p- = {d.deg_minus} (residual {d.residual:.1e})")
        _emit(args, {**d.to_dict(), "euler_characteristic": s.euler_characteristic}, text)
        return EXIT_OK
    pts = sl_tangent_scan(s, (args.grid, args.grid), args.tol)
    if args.csv:
        scan_to_csv(pts, args.csv)
    text = f"{s.name}: {len(pts)} special Lagrangian tangent plane(s)"
    if pts:
        text += "\n" + "\n".join(f"  u = {p.u:.6f}, v = {p.v:.6f}, |Re Omega| = {p.abs_re_omega:.9f}"
                                 for p in pts[: args.show])
        if len(pts) > args.show:
            text += f"\n  ... {len(pts) - args.show} more"
    payload = {"surface": s.name, "count": len(pts),
               "points": [[p.u, p.v, p.abs_re_omega, p.omega, p.im_omega] for p in pts]}
    _emit(args, payload, text)
    return EXIT_OK


def cmd_verify(args, reg) -> int:
    only = None
    if args.only:
        try:
            only = {int(x) for x in args.only.split(",")}
        except ValueError:
            raise CliError(f"--only takes comma-separated criterion numbers, got {args.only!r}", EXIT_USAGE) from None
        bad = only - set(CRITERIA)
        if bad:
            raise _unknown("criterion", ",".join(map(str, sorted(bad))), [str(n) for n in CRITERIA])
    results = run_acceptance(reg, _seed(args), only)
    text = "\n".join(r.line() for r in results)
    passed = sum(r.passed for r in results)
    text += f"\n{passed}/{len(results)} criteria passed"
    _emit(args, {"seed": _seed(args), "criteria": [r.to_dict() for r in results]}, text)
    return EXIT_OK if passed == len(results) else EXIT_FAILED


# -- parser --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    def global_options(suppress: bool) -> argparse.ArgumentParser:
        # subcommands accept the same options; SUPPRESS keeps them from resetting
        # a value given before the subcommand
        d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        g = argparse.ArgumentParser(add_help=False)
        g.add_argument("--seed", type=int, default=d(None), help="RNG seed (default: $CALGRASS_SEED or 0)")
        g.add_argument("--registry", type=Path, default=d(None), help="registry JSON overriding the bundled one")
        g.add_argument("--output", choices=("text", "json"), default=d("text"))
        return g

    common = global_options(suppress=True)
    p = argparse.ArgumentParser(prog="calgrass", parents=[global_options(suppress=False)],
                                description="Calibrations, Grassmannian topology and SL-free surfaces.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("comass", parents=[common], help="comass of a built-in form")
    c.add_argument("--form", required=True)
    c.add_argument("--k", type=int, default=None)
    c.add_argument("--starts", type=int, default=64)
    c.set_defaults(func=cmd_comass)

    c = sub.add_parser("freedim", parents=[common], help="free dimension by sampling")
    c.add_argument("--cal", required=True)
    c.add_argument("--trials", type=int, default=50)
    c.set_defaults(func=cmd_freedim)

    c = sub.add_parser("morse", parents=[common], help="critical points of the SL(3) form on G_3^+ R^6")
    c.add_argument("--starts", type=int, default=32)
    c.set_defaults(func=cmd_morse)

    c = sub.add_parser("homology", parents=[common], help="homology of a chain complex")
    c.add_argument("--complex", required=True, help="JSON file or bundled name")
    c.add_argument("--coeff", type=int, default=None, help="coefficients Z/m")
    c.set_defaults(func=cmd_homology)

    ss = sub.add_parser("ss", help="spectral sequences").add_subparsers(dest="sscmd", required=True)
    c = ss.add_parser("solve", parents=[common], help="solve a fibration scenario")
    c.add_argument("--scenario", required=True, help="JSON file or bundled name")
    c.add_argument("--bound", type=int, default=4)
    c.set_defaults(func=cmd_ss)

    rg = sub.add_parser("ring", help="cohomology rings").add_subparsers(dest="ringcmd", required=True)
    c = rg.add_parser("check", parents=[common], help="check a registry ring")
    c.add_argument("--name", required=True)
    c.add_argument("--hom", default=None)
    c.set_defaults(func=cmd_ring)

    sl = sub.add_parser("slfree", help="SL-free surfaces").add_subparsers(dest="slcmd", required=True)
    c = sl.add_parser("dimeq", parents=[common], help="solutions of the dimension equation")
    c.add_argument("--kmax", type=int, default=10)
    c.set_defaults(func=cmd_slfree)
    c = sl.add_parser("scan", parents=[common], help="special Lagrangian tangent planes")
    c.add_argument("--surface", required=True)
    c.add_argument("--grid", type=int, default=64)
    c.add_argument("--tol", type=float, default=1e-6)
    c.add_argument("--csv", type=Path, default=None)
    c.add_argument("--show", type=int, default=10, help="points listed in text output")
    c.set_defaults(func=cmd_slfree)
    c = sl.add_parser("degree", parents=[common], help="degrees of the split Gauss map")
    c.add_argument("--surface", required=True)
    c.add_argument("--grid", type=int, default=200)
    c.set_defaults(func=cmd_slfree)

    c = sub.add_parser("verify-paper", parents=[common], help="run the acceptance battery")
    c.add_argument("--only", default=None, help="comma-separated criterion numbers")
    c.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        try:
            reg = Registry.load(args.registry)
        except json.JSONDecodeError as exc:
            raise CliError(f"{args.registry}:{exc.lineno}:{exc.colno}: {exc.msg}", EXIT_PARSE) from None
        except OSError as exc:
            raise CliError(f"{args.registry}: {exc.strerror}", EXIT_PARSE) from None
        return args.func(args, reg)
    except CliError as exc:
        print(f"calgrass: error: {exc}", file=sys.stderr)
        return exc.code
    except RegistryError as exc:
        print(f"calgrass: error: {exc.args[0]}", file=sys.stderr)
        return EXIT_UNKNOWN


if __name__ == "__main__":
    sys.exit(main())
