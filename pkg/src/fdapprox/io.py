"""JSON forms of operators, conditions, recipes, families and reports."""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .blockop import BlockOperator, ColumnShape, Rect
from .poset.condition import Condition
from .poset.recipe import Recipe, recipe_from_json
from .report import Report, _jsonable


def _matrix(b: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in b]


def _from_matrix(rows) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in rows], dtype=complex)


def operator_to_json(a: BlockOperator) -> dict:
    return a.to_dump()


def operator_from_json(data) -> BlockOperator:
    return BlockOperator.from_dump(data)


def condition_to_json(p: Condition) -> dict:
    """``{support, widths, generators: [{xi, m, n, operator}], witnesses}``.

    Generator operators list only their nonzero columns; the shape comes from
    ``widths``.
    """
    gens = []
    for (xi, m, n) in sorted(p.generators):
        a = p.generators[(xi, m, n)]
        gens.append({"xi": xi, "m": m, "n": n,
                     "operator": {str(c): _matrix(a.blocks[c]) for c in a.nonzero_columns()}})
    wit = sorted(([a, rect.to_json()] for a, rect in p.witnesses), key=lambda t: json.dumps(t))
    return {"support": list(p.support), "widths": {str(c): w for c, w in p.widths.items()},
            "generators": gens, "witnesses": wit}


def condition_from_json(data) -> Condition:
    shape = ColumnShape({int(c): int(w) for c, w in data["widths"].items()})
    gens = {}
    for g in data["generators"]:
        blocks = {int(c): _from_matrix(rows) for c, rows in g["operator"].items()}
        gens[(int(g["xi"]), int(g["m"]), int(g["n"]))] = BlockOperator(shape, blocks)
    wit = frozenset((int(a), Rect.from_json(r)) for a, r in data.get("witnesses", []))
    return Condition(shape, gens, wit)


def recipe_to_json(r: Recipe) -> dict:
    return r.to_json()


def family_to_json(family) -> dict:
    return family.to_json()


def family_from_json(data):
    """Rebuild a :class:`FamilyBuild` from its dump (no re-verification)."""
    from .limit import FamilyBuild
    from .scheme import scheme_from_json
    if isinstance(data, str):
        data = json.loads(data)
    scheme = scheme_from_json(data["scheme"])
    conds = {tuple(c["F"]): condition_from_json(c["condition"]) for c in data["conditions"]}
    recipes = {(tuple(r["F"]), tuple(r["G"])): recipe_from_json(r["recipe"]) for r in data["recipes"]}
    vectors = {}
    for k, d in data.get("vectors", {}).items():
        v = np.array([complex(*z) for z in d["v"]])
        w = np.array([complex(*z) for z in d["w"]])
        vectors[int(k)] = (int(d["m"]), v, w)
    return FamilyBuild(scheme, tuple(data["assignment"]), conds, recipes, tuple(data["l_seq"]),
                       {int(k): v for k, v in data.get("kinds", {}).items()}, vectors)


def dumps(obj) -> str:
    """Deterministic JSON text: sorted keys, fixed indentation."""
    if isinstance(obj, Report):
        obj = obj.to_json()
    return json.dumps(obj, sort_keys=True, indent=1, default=_jsonable) + "\n"


def write_json(path, obj) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(obj))
    return path


def read_json(path):
    return json.loads(Path(path).read_text())
