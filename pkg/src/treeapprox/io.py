"""File formats: metric matrices, tree documents, value tables.

Metric files come in two forms: a plain matrix file (n, labels, rows of
rationals) and a JSON document with "points" and "distances".  Rationals
are written as "p/q" strings; finite decimals are accepted on input and
converted exactly.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .errors import InputError
from .metric import MetricSpace, validate_metric
from .trees import WeightedTree, make_tree


def _parse_rational(tok: str) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError) as e:
        raise InputError(f"bad rational {tok!r}: {e}") from None


def rational_str(x: Fraction) -> str:
    return str(Fraction(x))


def load_metric(path: str | Path) -> MetricSpace:
    text = Path(path).read_text(encoding="utf-8")
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return _metric_from_json(stripped, path)
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise InputError(f"{path}: empty metric file")
    try:
        n = int(lines[0].strip())
    except ValueError:
        raise InputError(f"{path}: first line must be the point count") from None
    if len(lines) != 1 + 2 * n:
        raise InputError(
            f"{path}: expected {1 + 2 * n} nonempty lines for n = {n}, got {len(lines)}"
        )
    labels = [ln.strip() for ln in lines[1 : 1 + n]]
    rows = []
    for ln in lines[1 + n :]:
        toks = ln.split()
        if len(toks) != n:
            raise InputError(f"{path}: matrix row with {len(toks)} entries, expected {n}")
        rows.append([_parse_rational(t) for t in toks])
    return validate_metric(labels, rows)


def _metric_from_json(text: str, path) -> MetricSpace:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: bad JSON: {e}") from None
    if "points" not in doc or "distances" not in doc:
        raise InputError(f"{path}: JSON metric needs 'points' and 'distances'")
    labels = [str(p) for p in doc["points"]]
    rows = [[_parse_rational(str(x)) for x in row] for row in doc["distances"]]
    if len(rows) != len(labels) or any(len(r) != len(labels) for r in rows):
        raise InputError(f"{path}: distance matrix shape does not match points")
    return validate_metric(labels, rows)


def save_metric(X: MetricSpace, path: str | Path) -> None:
    lines = [str(X.n)]
    lines.extend(X.points)
    for i in range(X.n):
        lines.append(" ".join(rational_str(X.dist[i][j]) for j in range(X.n)))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_tree(path: str | Path) -> WeightedTree:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: bad JSON: {e}") from None
    if "vertices" not in doc or "edges" not in doc:
        raise InputError(f"{path}: tree document needs 'vertices' and 'edges'")
    vertices = [str(v) for v in doc["vertices"]]
    edges = []
    for e in doc["edges"]:
        try:
            edges.append((int(e["u"]), int(e["v"]), _parse_rational(str(e["w"]))))
        except (KeyError, TypeError, ValueError):
            raise InputError(f"{path}: edge entries need integer u, v and rational w") from None
    return make_tree(vertices, edges)


def save_tree(T: WeightedTree, path: str | Path) -> None:
    doc = {
        "vertices": list(T.vertices),
        "edges": [
            {"u": u, "v": v, "w": rational_str(w)} for u, v, w in T.edges
        ],
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def load_labels(path: str | Path) -> list[str]:
    lines = [ln.strip() for ln in Path(path).read_text(encoding="utf-8").splitlines()]
    labels = [ln for ln in lines if ln]
    if not labels:
        raise InputError(f"{path}: empty label list")
    return labels


def load_values(path: str | Path, labels: list[str]) -> dict[str, tuple[float, ...]]:
    lines = [ln for ln in Path(path).read_text(encoding="utf-8").splitlines() if ln.strip()]
    if len(lines) != len(labels):
        raise InputError(
            f"{path}: {len(lines)} value rows for {len(labels)} subset labels"
        )
    out = {}
    width = None
    for lbl, ln in zip(labels, lines):
        try:
            vec = tuple(float(t) for t in ln.split())
        except ValueError:
            raise InputError(f"{path}: non-numeric value row {ln!r}") from None
        if width is None:
            width = len(vec)
        elif len(vec) != width:
            raise InputError(f"{path}: ragged value rows")
        out[lbl] = vec
    return out


def save_values(values: dict[str, tuple[float, ...]], order: list[str], path: str | Path) -> None:
    lines = []
    for lbl in order:
        vec = values[lbl]
        lines.append(lbl + " " + " ".join(repr(x) for x in vec))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
