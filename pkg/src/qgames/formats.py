"""JSON table/game files and number formatting shared by the CLI and the scanner."""
from __future__ import annotations

import json
import math
from pathlib import Path

from .game import JointProbabilityTable, PayoffMatrix


class FormatError(ValueError):
    pass


def _numbers(values, n, key):
    if not isinstance(values, list) or len(values) != n:
        raise FormatError(f'"{key}" must be an array of {n} numbers')
    out = []
    for v in values:
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            raise FormatError(f'"{key}" contains a non-numeric or non-finite entry: {v!r}')
        out.append(float(v))
    return out


def _load(path):
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise FormatError(f"{path}: top level must be an object")
    return doc


def table_from_json(doc: dict) -> JointProbabilityTable:
    if "p" not in doc:
        raise FormatError('missing key "p"')
    return JointProbabilityTable(_numbers(doc["p"], 16, "p"))


def table_to_json(table: JointProbabilityTable, meta: dict | None = None) -> dict:
    doc = {"p": table.p.tolist()}
    if meta:
        doc["meta"] = meta
    return doc


def read_table(path) -> JointProbabilityTable:
    return table_from_json(_load(path))


def write_table(path, table: JointProbabilityTable, meta: dict | None = None) -> None:
    Path(path).write_text(json.dumps(table_to_json(table, meta), indent=2) + "\n")


def game_from_json(doc: dict) -> PayoffMatrix:
    if "a" not in doc:
        raise FormatError('missing key "a"')
    return PayoffMatrix(*_numbers(doc["a"], 4, "a"))


def read_game(path) -> PayoffMatrix:
    return game_from_json(_load(path))


def write_game(path, m: PayoffMatrix) -> None:
    Path(path).write_text(json.dumps({"a": list(m)}) + "\n")


def fmt(v: float) -> str:
    """Shortest round-trip decimal for a float; integral values keep a trailing .0."""
    v = float(v)
    return "0.0" if v == 0 else repr(v)
