"""Command-line entry point: ``python -m prescheck <group> <command> [options]``.

Exit codes: 0 when every verdict passes, 1 on a failed verdict, 2 on bad input.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from . import bundled, report as report_mod, suites
from .cech_descent import METHODS
from .dataclasses import REPORT_VERSION, FiniteMap, Lattice, RunReport, SimplicialComplex
from .errors import EnumerationTooLarge, SpecParseError
from .finite_ring import parse_module_spec
from .join_homotopy import complex_from_json, discrete_complex, simplex, sphere
from .lattice_core import (
    check_element,
    element_by_label,
    free_bounded_distributive_lattice,
    lattice_from_json,
    lattice_to_json,
)
from .set_site import BUILTIN_PRESENTATIONS, map_from_json, parse_presentation

logger = logging.getLogger(__name__)

FORMATS = ("json", "jsonl", "text", "html")
FLATNESS_KINDS = ("not-flat", "flat", "faithfully-flat")

# pairs (i, j) swept by simplicial-check before --bound has to be raised
DEFAULT_PAIR_BOUND = 10_000


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    """Flags accepted both before the group and after the leaf command."""
    default = argparse.SUPPRESS if suppress else None
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=FORMATS, default=default if suppress else "json")
    p.add_argument("--seed", type=int, default=default if suppress else suites.DEFAULT_SEED)
    p.add_argument("--bound", type=int, default=default)
    p.add_argument("--samples", type=int, default=default if suppress else suites.DEFAULT_SAMPLES)
    p.add_argument("--out", type=Path, default=default)
    p.add_argument("--timings", action="store_true", default=default if suppress else False)
    p.add_argument("-v", "--verbose", action="count", default=default if suppress else 0)
    return p


def _int_list(text: str) -> List[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}") from exc


def _lattice_options(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--gens", type=int, help="free distributive lattice FD(n)")
    g.add_argument("--lattice", help="bundled lattice name")
    g.add_argument("--lattice-json", type=Path, help="lattice JSON file")


def _complex_options(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--complex", type=Path, help="complex JSON file")
    g.add_argument("--discrete", type=int, help="m isolated points")
    g.add_argument("--sphere", type=int, help="hollow simplex S^a")
    g.add_argument("--simplex", type=int, help="solid k-simplex")
    p.add_argument("--power", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    leaf = _global_flags(suppress=True)
    parser = argparse.ArgumentParser(prog="prescheck", parents=[_global_flags(suppress=False)],
                                     description="Finite-model checks for presentations and descent.")
    groups = parser.add_subparsers(dest="group", required=True)

    lat = groups.add_parser("lattice").add_subparsers(dest="command", required=True)
    p = lat.add_parser("free", parents=[leaf])
    p.add_argument("--gens", type=int, action="append")
    p = lat.add_parser("validate", parents=[leaf])
    _lattice_options(p)
    p.add_argument("--emit-lattice", type=Path, help="write the validated lattice as JSON")
    p = lat.add_parser("congruence", parents=[leaf])
    _lattice_options(p)
    p.add_argument("--congruence", type=Path, help='congruence JSON {"lattice": <inline or path>, "classes": [...]}')
    p = lat.add_parser("simplicial-check", parents=[leaf])
    _lattice_options(p)
    p = lat.add_parser("chain", parents=[leaf])
    _lattice_options(p)
    p.add_argument("--constraints", required=True, help="a<=b pairs by label or #id, comma separated")

    ring = groups.add_parser("ring").add_subparsers(dest="command", required=True)
    p = ring.add_parser("localize", parents=[leaf])
    p.add_argument("--ring", required=True)
    p.add_argument("--element", type=int, action="append")
    for name in ("spec", "flat"):
        p = ring.add_parser(name, parents=[leaf])
        p.add_argument("--ring", required=True)
        p.add_argument("--algebra", required=True)
        if name == "spec":
            p.add_argument("--expect-points", type=int)
        if name == "flat":
            p.add_argument("--expect", choices=FLATNESS_KINDS)
    p = ring.add_parser("h1", parents=[leaf])
    p.add_argument("--ring", required=True)
    p.add_argument("--module", default="self")
    p.add_argument("--cover", type=_int_list)
    p.add_argument("--method", choices=METHODS, default="auto")
    p.add_argument("--corrupt", action="store_true", help="negative control with d0 forced to zero")
    p.add_argument("--max-cover-size", type=int, default=3)
    p = ring.add_parser("glue", parents=[leaf])
    p.add_argument("--ring", required=True)
    p.add_argument("--module", default="self")
    p.add_argument("--cover", type=_int_list)
    p.add_argument("--max-cover-size", type=int, default=3)

    site = groups.add_parser("site").add_subparsers(dest="command", required=True)
    p = site.add_parser("presentation", parents=[leaf])
    p.add_argument("--presentation", action="append")
    p = site.add_parser("check-cover", parents=[leaf])
    p.add_argument("--map", type=Path)
    p.add_argument("--presentation", action="append")
    p = site.add_parser("sheaf", parents=[leaf])
    p.add_argument("--map", type=Path)
    p.add_argument("--target", type=int)
    p = site.add_parser("local-choice", parents=[leaf])
    p.add_argument("--g", type=Path)
    p.add_argument("--f", type=Path)
    p.add_argument("--presentation", action="append")
    p = site.add_parser("projective", parents=[leaf])
    p.add_argument("--target", type=int)
    p.add_argument("--fibers", type=_int_list)

    join = groups.add_parser("join").add_subparsers(dest="command", required=True)
    for name in ("build", "homology"):
        _complex_options(join.add_parser(name, parents=[leaf]))
    p = join.add_parser("stabilize", parents=[leaf])
    p.add_argument("--set", type=int, dest="set_size")
    p.add_argument("--target", type=int)
    p = join.add_parser("fibers", parents=[leaf])
    p.add_argument("--f", type=Path)
    p.add_argument("--g", type=Path)

    suite = groups.add_parser("suite").add_subparsers(dest="command", required=True)
    suite.add_parser("all", parents=[leaf])
    return parser


# --- input resolution -----------------------------------------------------

def _read_json(path: Path) -> Any:
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise SpecParseError(f"cannot read {path}: {exc}", str(path)) from exc


def _lattice(args: argparse.Namespace, default_gens: Optional[int] = 2) -> Optional[Lattice]:
    if getattr(args, "lattice_json", None):
        return lattice_from_json(_read_json(args.lattice_json), name=args.lattice_json.stem)
    if getattr(args, "lattice", None):
        return bundled.lattice(args.lattice)
    gens = args.gens if getattr(args, "gens", None) is not None else default_gens
    return None if gens is None else free_bounded_distributive_lattice(gens)


def _element(L: Lattice, token: str) -> int:
    """A label, or ``#i`` for the element with id ``i``."""
    token = token.strip()
    if token.startswith("#") and token[1:].isdigit():
        a = int(token[1:])
        check_element(L, a)
        return a
    return element_by_label(L, token)


def write_lattice(L: Lattice, path: Path) -> None:
    path.write_text(json.dumps(lattice_to_json(L), ensure_ascii=False) + "\n", encoding="utf-8")


def read_congruence(path: Path) -> Tuple[Lattice, List[int]]:
    data = _read_json(path)
    if not isinstance(data, dict) or "lattice" not in data or not isinstance(data.get("classes"), list):
        raise SpecParseError(f"{path}: congruence JSON needs 'lattice' and 'classes'", str(path))
    inline = data["lattice"]
    if isinstance(inline, str):
        source = Path(inline) if Path(inline).is_absolute() else path.parent / inline
        L = lattice_from_json(_read_json(source), name=source.stem)
    else:
        L = lattice_from_json(inline, name=path.stem)
    try:
        return L, [int(c) for c in data["classes"]]
    except (TypeError, ValueError) as exc:
        raise SpecParseError(f"{path}: class ids must be integers", str(path)) from exc


def parse_constraints(L: Lattice, text: str) -> List[Tuple[int, int]]:
    out = []
    for part in text.split(","):
        a, sep, b = part.partition("<=")
        if not sep:
            raise SpecParseError(f"constraint {part!r} is not of the form a<=b", part)
        out.append((_element(L, a), _element(L, b)))
    return out


def _map(path: Optional[Path]) -> Optional[FiniteMap]:
    return None if path is None else map_from_json(_read_json(path))


def _complex(args: argparse.Namespace) -> Tuple[SimplicialComplex, str, Optional[int]]:
    if args.complex:
        return complex_from_json(_read_json(args.complex)), args.complex.stem, None
    if args.sphere is not None:
        return sphere(args.sphere), f"S^{args.sphere}", None
    if args.simplex is not None:
        return simplex(args.simplex), f"Δ^{args.simplex}", None
    m = args.discrete if args.discrete is not None else 2
    return discrete_complex(m), f"{m}pts", m


# --- dispatch -------------------------------------------------------------

def execute(args: argparse.Namespace) -> RunReport:
    verbose = bool(args.verbose)
    key = (args.group, args.command)
    if key == ("lattice", "free"):
        return suites.run_lattice_free(args.gens, verbose=verbose)
    if key == ("lattice", "validate"):
        L = _lattice(args)
        if args.emit_lattice:
            write_lattice(L, args.emit_lattice)
        return suites.run_lattice_validate(L, verbose=verbose)
    if key == ("lattice", "congruence"):
        if args.congruence:
            L, classes = read_congruence(args.congruence)
            return suites.run_lattice_given_congruence(L, classes, verbose=verbose)
        L = _lattice(args, default_gens=None)
        if L is None:
            lattices = [free_bounded_distributive_lattice(2), free_bounded_distributive_lattice(3),
                        *bundled.lattices()]
        else:
            lattices = [L]
        return suites.run_lattice_congruence(lattices, verbose=verbose)
    if key == ("lattice", "simplicial-check"):
        L = _lattice(args)
        bound = args.bound if args.bound is not None else DEFAULT_PAIR_BOUND
        if L.size ** 2 > bound:
            raise EnumerationTooLarge(L.size ** 2, bound)
        return suites.run_lattice_simplicial(L, verbose=verbose)
    if key == ("lattice", "chain"):
        L = _lattice(args)
        return suites.run_lattice_chain(L, parse_constraints(L, args.constraints), verbose=verbose)

    if args.group == "ring":
        R = bundled.ring(args.ring)
        if args.command == "localize":
            return suites.run_ring_localize(R, args.element, verbose=verbose)
        if args.command == "spec":
            return suites.run_ring_spec(R, args.algebra, args.expect_points, verbose=verbose)
        if args.command == "flat":
            return suites.run_ring_flat(R, args.algebra, args.expect, verbose=verbose)
        M = parse_module_spec(R, args.module)
        if args.command == "h1":
            return suites.run_ring_h1(R, M, args.cover, method=args.method, corrupt=args.corrupt,
                                      bound=args.bound, max_cover_size=args.max_cover_size, verbose=verbose)
        return suites.run_ring_glue(R, M, args.cover, max_cover_size=args.max_cover_size, verbose=verbose)

    if args.group == "site":
        names = getattr(args, "presentation", None) or []
        if args.command == "presentation":
            return suites.run_site_presentation(names or sorted(BUILTIN_PRESENTATIONS),
                                                bound=args.bound or 6, verbose=verbose)
        if args.command == "check-cover":
            f = _map(args.map)
            if f is not None:
                return suites.run_site_check_cover(f, parse_presentation(names[0] if names else "nonempty"),
                                                   verbose=verbose)
            return suites.run_site_cover_laws(names or ["odd-cardinality", "nonempty"], args.samples, args.seed,
                                              verbose=verbose)
        if args.command == "sheaf":
            return suites.run_site_sheaf(args.target, _map(args.map), args.samples, args.seed, args.bound,
                                         verbose=verbose)
        if args.command == "local-choice":
            return suites.run_site_local_choice(names or ["nonempty"], _map(args.g), _map(args.f),
                                                args.samples, args.seed, verbose=verbose)
        return suites.run_site_projective(args.target, bound=args.bound or 4, fibers=args.fibers, verbose=verbose)

    if args.group == "join":
        if args.command in ("build", "homology"):
            K, name, points = _complex(args)
            if args.command == "build":
                return suites.run_join_build(K, args.power, name, verbose=verbose)
            return suites.run_join_homology(K, args.power, name, discrete=points, verbose=verbose)
        if args.command == "stabilize":
            return suites.run_join_stabilize(args.set_size, args.target, verbose=verbose)
        return suites.run_join_fibers(_map(args.f), _map(args.g), args.samples, args.seed, verbose=verbose)

    return suites.run_all(seed=args.seed, samples=args.samples, verbose=verbose)


def diagnostic(exc: ValueError) -> Dict[str, Any]:
    return {
        "v": REPORT_VERSION,
        "error": type(exc).__name__,
        "message": str(exc),
        "witness": getattr(exc, "witness", None),
    }


def render(rep: RunReport, fmt: str = "json", timings: bool = False) -> str:
    data = rep.as_dict(timings)
    if fmt == "json":
        return json.dumps(data, ensure_ascii=False, indent=2)
    if fmt == "jsonl":
        lines = [json.dumps({"v": REPORT_VERSION, **c}, ensure_ascii=False) for c in data["checks"]]
        lines.append(json.dumps({"v": REPORT_VERSION, "subcommand": rep.subcommand, "summary": data["summary"]},
                                ensure_ascii=False))
        return "\n".join(lines)
    if fmt == "html":
        return report_mod.report(data)
    lines = [f"{rep.subcommand}: {rep.passed} passed, {rep.failed} failed"]
    for c in rep.checks:
        line = f"{'PASS' if c.verdict else 'FAIL'} {c.name}"
        if not c.verdict and c.witness is not None:
            line += f"  witness={json.dumps(c.witness, ensure_ascii=False)}"
        if timings:
            line += f"  ({c.duration:.3f}s)"
        lines.append(line)
    lines.extend(rep.proof)
    return "\n".join(lines)


def run_args(args: argparse.Namespace) -> Tuple[Optional[RunReport], int, Optional[Dict[str, Any]]]:
    try:
        rep = execute(args)
    except ValueError as exc:
        logger.info("input error: %s", exc)
        return None, 2, diagnostic(exc)
    return rep, rep.exit_code, None


def run(argv: Sequence[str]) -> Tuple[Optional[RunReport], int, Optional[Dict[str, Any]], argparse.Namespace]:
    """Parse and execute; returns the report, exit code, diagnostic and parsed flags.

    Parse errors raise ``SystemExit(2)`` as argparse does.
    """
    args = build_parser().parse_args(list(argv))
    return (*run_args(args), args)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(sys.argv[1:] if argv is None else list(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    levels = (logging.WARNING, logging.INFO, logging.DEBUG)
    logging.basicConfig(
        level=levels[min(args.verbose, 2)],
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    rep, code, diag = run_args(args)
    if diag is not None:
        text = json.dumps(diag, ensure_ascii=False)
    else:
        text = render(rep, args.format, args.timings)
    if args.out:
        args.out.write_text(text + "\n", encoding="utf-8")
    else:
        sys.stdout.write(text + "\n")
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
