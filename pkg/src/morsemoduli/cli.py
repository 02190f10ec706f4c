"""Command line front end: ``morsemoduli <command> [flags]``.

Exit codes: 0 success, 2 invalid input (message names the offending JSON
field), 3 search budget exhausted (the partial result is still written).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Any, Callable, Sequence

from . import arrangement as arr
from . import discrete_morse as dm
from .barcode import barcode_edit_distance, induced_barcode
from .cw_complex import Complex
from .editpath import Distance
from .io import (
    InputError,
    dumps,
    function_to_dict,
    load_json,
    parse_barcode,
    parse_complex,
    parse_function,
    parse_map,
    parse_tree,
)
from .merge_tree import edit_distance, induced_merge_tree
from .morphisms import classify, pullback, pushforward_checked
from .values import format_value

EXIT_OK, EXIT_INVALID, EXIT_BUDGET = 0, 2, 3


class Budget(Exception):
    """Raised with a partial result when a search budget runs out."""

    def __init__(self, result: dict) -> None:
        super().__init__("budget exhausted")
        self.result = result


def _flag_error(flag: str, exc: InputError | ValueError) -> InputError:
    if isinstance(exc, InputError):
        return InputError(f"{flag}#{exc.pointer}", exc.message)
    return InputError(f"{flag}#/", str(exc))


def _load(flag: str, path: str | None, parse: Callable[[Any], Any]):
    if path is None:
        raise InputError(flag, "flag is required for this command")
    try:
        return parse(load_json(path))
    except (InputError, ValueError) as exc:
        raise _flag_error(flag, exc) from None


def _complex(args) -> Complex:
    return _load("--complex", args.complex, parse_complex)


def _function(args, X: Complex, index: int = 0, count: int = 1):
    paths = args.function or []
    if len(paths) != count:
        raise InputError("--function", f"expected {count} function file(s), got {len(paths)}")
    return _load("--function", paths[index], lambda o: parse_function(o, X))


def _pairs(pairs) -> list[dict[str, str]]:
    return [{"lower": lo, "upper": up} for lo, up in pairs]


def _distance(d: Distance) -> dict:
    return {"radicands": [format_value(r) for r in d.radicands], "value": f"{d.value:.12f}"}


# -- commands ------------------------------------------------------------------------


def cmd_check(args) -> dict:
    X = _complex(args)
    f = _function(args, X)
    check = dm.is_discrete_morse(X, f)
    out: dict[str, Any] = {
        "morse": check.ok,
        "signs": arr.sign_vector(X, f).to_dict(),
        "violation": None if check.ok else {"cell": check.cell, "condition": check.condition},
    }
    if X.regular:
        out["mb"] = dm.is_morse_benedetti(X, f)
        out["weak_mb"] = dm.is_weak_morse_benedetti(X, f)
    else:
        out["mb"] = out["weak_mb"] = None
    out["essential"] = arr.is_essential(X, f)
    return out


def cmd_matching(args) -> dict:
    X = _complex(args)
    f = _function(args, X)
    try:
        m = dm.induced_matching(X, f)
    except dm.MorseError as exc:
        raise InputError("--function#/values", str(exc)) from None
    crit = dm.critical_cells(X, f)
    return {
        "matching": _pairs(m),
        "critical": {str(k): v for k, v in crit.items()},
        "acyclic": dm.is_acyclic_matching(X, m),
    }


def cmd_regions(args) -> dict:
    X = _complex(args)
    if args.facets_of_critical:
        facets = arr.facets_of_critical_region(X)
        return {"count": len(facets), "facets": _pairs(facets), "essential_rank": arr.essential_rank(X)}
    try:
        if args.count:
            return {"count": arr.count_regions(X, args.morse_only, jobs=args.jobs)}
        regions = [v.to_dict() for v in arr.enumerate_regions(X, args.morse_only)]
    except arr.EnumerationGuardError as exc:
        raise Budget({"count": None, "reason": str(exc)}) from None
    return {"count": len(regions), "regions": [{"signs": s} for s in regions]}


def cmd_matching_complex(args) -> dict:
    X = _complex(args)
    simplices = [_pairs(m) for m in arr.matching_complex(X, args.max_card)]
    counts: dict[str, int] = {}
    for s in simplices:
        counts[str(len(s) - 1)] = counts.get(str(len(s) - 1), 0) + 1
    return {"simplices": simplices, "counts": counts}


def cmd_merge_tree(args) -> dict:
    X = _complex(args)
    f = _function(args, X)
    try:
        return induced_merge_tree(X, f).to_dict()
    except ValueError as exc:
        raise InputError("--function#/values", str(exc)) from None


def _trees(args, count: int):
    paths = args.tree or []
    if len(paths) != count:
        raise InputError("--tree", f"expected {count} tree file(s), got {len(paths)}")
    return [_load("--tree", p, parse_tree) for p in paths]


def _barcodes(args, count: int):
    paths = args.barcode or []
    if len(paths) != count:
        raise InputError("--barcode", f"expected {count} barcode file(s), got {len(paths)}")
    return [_load("--barcode", p, parse_barcode) for p in paths]


def cmd_barcode(args) -> dict:
    (theta,) = _trees(args, 1)
    try:
        return induced_barcode(theta).to_dict()
    except ValueError as exc:
        raise InputError("--tree#/nodes", str(exc)) from None


def _finish(result, payload: dict) -> dict:
    payload.update(
        distance=_distance(result.distance),
        exact=result.exact,
        evaluations=result.evaluations,
    )
    if not result.exact:
        raise Budget(payload)
    return payload


def cmd_tree_dist(args) -> dict:
    a, b = _trees(args, 2)
    try:
        res = edit_distance(a, b, args.max_nodes, args.max_steps)
    except ValueError as exc:
        raise InputError("--tree#/nodes", str(exc)) from None
    return _finish(res, {"path": [t.to_dict() for t in res.path]})


def cmd_bar_dist(args) -> dict:
    a, b = _barcodes(args, 2)
    res = barcode_edit_distance(a, b, args.max_nodes, args.max_steps)
    return _finish(res, {"path": [x.to_dict() for x in res.path]})


def _map(args):
    if args.map is None:
        raise InputError("--map", "flag is required for this command")
    base = Path(args.map).parent
    return _load("--map", args.map, lambda o: parse_map(o, base))


def cmd_pushforward(args) -> dict:
    phi = _map(args)
    f = _function(args, phi.source)
    try:
        g, check = pushforward_checked(phi, f)
    except ValueError as exc:
        raise InputError("--map#/assignment", str(exc)) from None
    out = function_to_dict(g)
    out["morse"] = check.ok
    return out


def cmd_pullback(args) -> dict:
    phi = _map(args)
    g = _function(args, phi.target)
    f = pullback(phi, g)
    out = function_to_dict(f)
    out["morse"] = dm.is_discrete_morse(phi.source, f).ok
    return out


def cmd_classify(args) -> dict:
    return classify(_map(args))


def cmd_crossings(args) -> dict:
    X = _complex(args)
    f = _function(args, X, 0, 2)
    g = _function(args, X, 1, 2)
    seps = arr.crossed_hyperplanes(X, f, g)
    return {"count": len(seps), "separators": [s.to_dict() for s in seps]}


COMMANDS: dict[str, tuple[Callable[[Any], dict], str]] = {
    "check": (cmd_check, "Morse, MB and weak MB classification plus the sign vector"),
    "matching": (cmd_matching, "induced matching, critical cells and acyclicity"),
    "regions": (cmd_regions, "enumerate or count regions, or list facets of the critical region"),
    "matching-complex": (cmd_matching_complex, "acyclic matchings up to a cardinality"),
    "merge-tree": (cmd_merge_tree, "induced merge tree of a discrete Morse function"),
    "barcode": (cmd_barcode, "elder-rule barcode of a well-branched merge tree"),
    "tree-dist": (cmd_tree_dist, "euclidean edit distance between two merge trees"),
    "bar-dist": (cmd_bar_dist, "euclidean edit distance between two barcodes"),
    "pushforward": (cmd_pushforward, "push a function forward along a cell map"),
    "pullback": (cmd_pullback, "pull a function back along a cell map"),
    "classify-map": (cmd_classify, "simplicial / non-degenerate / injective flags of a map"),
    "crossings": (cmd_crossings, "braid hyperplanes separating two functions"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="morsemoduli", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--complex", metavar="PATH")
        p.add_argument("--function", metavar="PATH", action="append")
        p.add_argument("--tree", metavar="PATH", action="append")
        p.add_argument("--barcode", metavar="PATH", action="append")
        p.add_argument("--map", metavar="PATH")
        p.add_argument("--max-card", type=int, default=None, metavar="N")
        p.add_argument("--max-nodes", type=int, default=None, metavar="N",
                       help="largest intermediate tree (nodes) or barcode (bars)")
        p.add_argument("--max-steps", type=int, default=3, metavar="N")
        p.add_argument("--jobs", type=int, default=1, metavar="N")
        p.add_argument("--output", metavar="PATH")
        if name == "regions":
            p.add_argument("--morse-only", action="store_true")
            p.add_argument("--count", action="store_true")
            p.add_argument("--facets-of-critical", action="store_true")
    return parser


def _emit(payload: dict, output: str | None) -> None:
    text = dumps(payload)
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handler = COMMANDS[args.command][0]
    for flag in ("max_card", "max_nodes", "max_steps", "jobs"):
        value = getattr(args, flag)
        if value is not None and value < (0 if flag == "max_card" else 1):
            sys.stderr.write(dumps({"error": "must be positive", "pointer": "--" + flag.replace("_", "-")}))
            return EXIT_INVALID
    try:
        payload = handler(args)
    except InputError as exc:
        sys.stderr.write(dumps({"error": exc.message, "pointer": exc.pointer}))
        return EXIT_INVALID
    except Budget as exc:
        _emit(exc.result, args.output)
        return EXIT_BUDGET
    _emit(payload, args.output)
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
