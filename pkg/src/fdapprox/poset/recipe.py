"""Composable descriptions of the *-embeddings ``i_{pq}: B_{X_q} -> B_{X_p}``.

Every embedding used by the density and amalgamation operations is one of

* ``Identity``: zero-padding into a larger rectangle,
* ``Mirror``: ``A + i_r(A)`` where ``i_r`` copies the action above column
  ``alpha`` into fresh coordinates of column ``alpha``,
* ``UCopy``: ``A + U j_sigma(A) U*`` for a partial isometry ``U`` on the columns
  of the lower condition outside the common root,

or a composition of those.  Evaluation is lazy and per operator.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..blockop import BlockOperator, ColumnShape, Rect, matrix_unit
from ..report import Report


def _shape_json(shape: ColumnShape) -> dict:
    return {str(c): w for c, w in shape.widths.items()}


def _shape_from_json(d) -> ColumnShape:
    return ColumnShape({int(c): int(w) for c, w in d.items()})


class Recipe:
    kind = "abstract"
    target: ColumnShape

    def evaluate(self, a: BlockOperator) -> BlockOperator:
        raise NotImplementedError

    def __call__(self, a):
        return self.evaluate(a)

    def to_json(self) -> dict:
        raise NotImplementedError

    def then(self, other: "Recipe") -> "Compose":
        """Apply ``self`` first, then ``other``."""
        return compose(self, other)


@dataclass(frozen=True)
class Identity(Recipe):
    target: ColumnShape
    kind = "identity"

    def evaluate(self, a):
        return a.extend(self.target)

    def to_json(self):
        return {"kind": self.kind, "target": _shape_json(self.target)}


@dataclass(frozen=True)
class Mirror(Recipe):
    """Fresh coordinate ``offset + i`` of column ``alpha`` receives ``order[i]``."""

    alpha: int
    order: tuple  # ((column, coordinate), ...) enumerated column by column
    offset: int
    target: ColumnShape
    kind = "mirror"

    def evaluate(self, a):
        out = a.extend(self.target)
        w = self.target.width(self.alpha)
        big = out.block(self.alpha).copy()
        groups: dict = {}
        for i, (c, k) in enumerate(self.order):
            groups.setdefault(c, ([], []))
            groups[c][0].append(self.offset + i)
            groups[c][1].append(k)
        touched = False
        for c, (pos, ks) in groups.items():
            src = a.blocks.get(c)
            if src is None:
                continue
            big[np.ix_(pos, pos)] = src[np.ix_(ks, ks)]
            touched = True
        if not touched:
            return out
        blocks = dict(out.blocks)
        blocks[self.alpha] = big
        assert big.shape == (w, w)
        return BlockOperator(self.target, blocks, a.tol)

    def to_json(self):
        return {"kind": self.kind, "alpha": self.alpha, "offset": self.offset,
                "order": [list(x) for x in self.order], "target": _shape_json(self.target)}


@dataclass(frozen=True)
class UCopy(Recipe):
    """``A + U j_sigma(A) U*``; ``sigma`` maps lower columns to upper ones."""

    sigma: tuple  # ((lower column, upper column), ...) for the columns where U lives
    unitary: BlockOperator
    target: ColumnShape
    kind = "u_copy"

    def evaluate(self, a):
        out = a.extend(self.target)
        blocks = dict(out.blocks)
        for eta, xi in self.sigma:
            src = a.blocks.get(xi)
            u = self.unitary.blocks.get(eta)
            if src is None or u is None:
                continue
            add = u @ src @ u.conj().T
            blocks[eta] = blocks[eta] + add if eta in blocks else add
        return BlockOperator(self.target, blocks, a.tol)

    def to_json(self):
        return {"kind": self.kind, "sigma": [list(x) for x in self.sigma],
                "unitary": self.unitary.to_dump(), "target": _shape_json(self.target)}


@dataclass(frozen=True)
class Compose(Recipe):
    steps: tuple
    kind = "compose"

    @property
    def target(self):
        return self.steps[-1].target

    def evaluate(self, a):
        for s in self.steps:
            a = s.evaluate(a)
        return a

    def to_json(self):
        return {"kind": self.kind, "steps": [s.to_json() for s in self.steps]}


def compose(*recipes: Recipe) -> Recipe:
    """Sequential composition, first argument applied first, nesting flattened."""
    steps = []
    for r in recipes:
        for s in (r.steps if isinstance(r, Compose) else [r]):
            # consecutive zero-paddings collapse into the last one
            if steps and isinstance(s, Identity) and isinstance(steps[-1], Identity):
                steps[-1] = s
            else:
                steps.append(s)
    if len(steps) == 1:
        return steps[0]
    return Compose(tuple(steps))


def recipe_from_json(d) -> Recipe:
    kind = d["kind"]
    if kind == "identity":
        return Identity(_shape_from_json(d["target"]))
    if kind == "mirror":
        return Mirror(int(d["alpha"]), tuple((int(c), int(k)) for c, k in d["order"]),
                      int(d["offset"]), _shape_from_json(d["target"]))
    if kind == "u_copy":
        target = _shape_from_json(d["target"])
        u = BlockOperator.from_dump(d["unitary"])
        return UCopy(tuple((int(a), int(b)) for a, b in d["sigma"]), u.extend(target), target)
    if kind == "compose":
        return Compose(tuple(recipe_from_json(s) for s in d["steps"]))
    raise ValueError(f"unknown recipe kind {kind!r}")


def _unit_sample(shape: ColumnShape, rng, limit):
    units = [(c, a, b) for c in shape.columns for a in range(shape.width(c)) for b in range(shape.width(c))]
    if len(units) > limit:
        idx = rng.choice(len(units), size=limit, replace=False)
        units = [units[i] for i in sorted(idx)]
    return units


def extension_report(p, q, recipe: Recipe, tol: float = 1e-9, unit_limit: int = 400,
                     seed: int = 0) -> Report:
    """Check ``p <= q`` as witnessed by ``recipe``: clauses (a)-(d) and *-embedding."""
    rep = Report("extension", inputs={"p": p.widths, "q": q.widths})
    if not set(p.support) >= set(q.support):
        rep.violation("support", None, {"missing": sorted(set(q.support) - set(p.support))})
        return rep
    if not p.shape.dominates(q.shape):
        rep.violation("widths", None, {"p": p.widths, "q": q.widths})
        return rep
    if recipe.target != p.shape:
        rep.violation("target-shape", None, {"target": recipe.target.widths})
        return rep
    worst_gen = worst_iso = 0.0
    for key in q.keys():
        a = q.generators[key]
        img = recipe.evaluate(a)
        worst_gen = max(worst_gen, (img - p.generators[key]).norm())
        worst_iso = max(worst_iso, abs(img.norm() - a.norm()))
    rep.add("generators", None, worst_gen, tol, worst_gen <= tol)
    rep.add("isometry-generators", None, worst_iso, tol, worst_iso <= tol)

    rng = np.random.default_rng(seed)
    qrect = q.X
    worst_res = worst_star = worst_mult = 0.0
    units = _unit_sample(q.shape, rng, unit_limit)
    images = {}
    for c, a, b in units:
        e = matrix_unit(q.shape, c, a, b)
        img = recipe.evaluate(e)
        images[(c, a, b)] = img
        worst_res = max(worst_res, (img.restrict(_lift(qrect, p.shape)) - e.extend(p.shape)).norm())
        star = recipe.evaluate(e.adjoint())
        worst_star = max(worst_star, (star - img.adjoint()).norm())
    keys = list(images)
    npairs = min(len(keys) ** 2, 3 * unit_limit)
    for _ in range(npairs):
        u1 = keys[rng.integers(len(keys))]
        u2 = keys[rng.integers(len(keys))]
        if rng.random() < 0.5 and u1[0] == u2[0]:
            # chain E_ab E_bd so that the product is nonzero as often as zero
            c, a, b = u1
            u2 = (c, b, u2[2])
        e1 = matrix_unit(q.shape, *u1)
        e2 = matrix_unit(q.shape, *u2)
        lhs = images.get(u1, None) or recipe.evaluate(e1)
        rhs = images.get(u2, None) or recipe.evaluate(e2)
        worst_mult = max(worst_mult, (lhs @ rhs - recipe.evaluate(e1 @ e2)).norm())
    rep.add("restriction-law", None, worst_res, tol, worst_res <= tol)
    rep.add("star", None, worst_star, tol, worst_star <= tol)
    rep.add("multiplicative", None, worst_mult, tol, worst_mult <= tol)
    return rep


def _lift(rect: Rect, shape: ColumnShape) -> Rect:
    return Rect({c: rect.coords(c) for c in rect.columns if c in shape})


def check_extension(p, q, recipe: Recipe, tol: float = 1e-9) -> bool:
    return extension_report(p, q, recipe, tol).passed
