"""JSON file formats.  State labels in files are 1-based.

matrix    {"m": int, "rows": [[entry, ...], ...]}   entry: number or "a/b"
graph     {"m": int, "A": [[int, ...], ...]}         A[y][x] = edges x -> y
coloring  {"d": int, "colors": [[image], ...]}
law       {"m": int, "support": [{"image": [...], "weight": "a/b"}, ...]}
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .chain import StochasticMatrix, ratio_str, rationalize, to_fraction
from .coloring import AdjacencyMatrix, MappingTable, RoadColoring
from .law import MappingLaw


class FormatError(ValueError):
    pass


def dumps(obj) -> str:
    """Deterministic JSON text (sorted keys, fixed indentation, trailing newline)."""
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write_json(path, obj) -> None:
    Path(path).write_text(dumps(obj), encoding="utf-8")


def read_json(path):
    try:
        # decimal literals stay exact
        return json.loads(Path(path).read_text(encoding="utf-8"), parse_float=Fraction)
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc


def _require(obj, *keys):
    if not isinstance(obj, dict) or any(k not in obj for k in keys):
        raise FormatError(f"expected an object with keys {keys}")


def matrix_to_json(Q: StochasticMatrix) -> dict:
    return {"m": Q.m, "rows": [[ratio_str(v) for v in row] for row in Q]}


def matrix_from_json(obj, maxden: int | None = None) -> StochasticMatrix:
    """Parse a matrix object; if given, ``maxden`` rounds inexact rows via :func:`rationalize`."""
    _require(obj, "m", "rows")
    rows = obj["rows"]
    if len(rows) != obj["m"]:
        raise FormatError(f"m={obj['m']} but {len(rows)} rows")
    try:
        exact = [[to_fraction(v) for v in row] for row in rows]
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad matrix entry: {exc}") from exc
    try:
        return StochasticMatrix(exact)
    except ValueError as exc:
        if maxden is None:
            raise FormatError(str(exc)) from exc
        try:
            return rationalize(exact, maxden)
        except ValueError as exc2:
            raise FormatError(str(exc2)) from exc2


def graph_to_json(A: AdjacencyMatrix) -> dict:
    return {"m": A.m, "A": [list(row) for row in A.rows]}


def graph_from_json(obj) -> AdjacencyMatrix:
    _require(obj, "m", "A")
    try:
        return AdjacencyMatrix(obj["A"])
    except (TypeError, ValueError) as exc:
        raise FormatError(str(exc)) from exc


def coloring_to_json(coloring: RoadColoring) -> dict:
    return {"d": coloring.d, "colors": [s.labels() for s in coloring.colors]}


def coloring_from_json(obj) -> RoadColoring:
    _require(obj, "d", "colors")
    try:
        coloring = RoadColoring.from_colors([MappingTable.from_labels(c) for c in obj["colors"]])
    except (TypeError, ValueError) as exc:
        raise FormatError(str(exc)) from exc
    if coloring.d != obj["d"]:
        raise FormatError(f"d={obj['d']} but {coloring.d} colors")
    return coloring


def law_to_json(mu: MappingLaw) -> dict:
    return {"m": mu.m, "support": [{"image": s.labels(), "weight": ratio_str(w)} for s, w in mu.items()]}


def law_from_json(obj) -> MappingLaw:
    _require(obj, "m", "support")
    try:
        mu = MappingLaw([(MappingTable.from_labels(e["image"]), e["weight"]) for e in obj["support"]])
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad law: {exc}") from exc
    if mu.m != obj["m"]:
        raise FormatError(f"m={obj['m']} but maps act on {mu.m} states")
    return mu
