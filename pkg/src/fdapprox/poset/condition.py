"""Conditions: finite supports, column widths and generator operators."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..algebra import SubalgebraBasis, star_closure
from ..blockop import BlockOperator, ColumnShape, Rect, matrix_unit, random_block
from ..errors import OutOfShape, SizeMismatch
from ..report import Report
from ..scheme import OrderIso

DEFAULT_WIDTH_CAP = 1024


@dataclass(frozen=True, eq=False)
class Condition:
    """``p = (a_p, {n_xi}, {A_{xi,m,n}})`` with generators in ``B_{X_p}``.

    ``witnesses`` holds ``(alpha, X)`` pairs certifying membership in
    ``F_{X,alpha}``: column ``alpha`` carries a unitary copy of everything above
    it for the generators indexed in ``X``.  Extensions inherit them.
    """

    shape: ColumnShape
    generators: dict
    witnesses: frozenset = frozenset()
    meta: dict = field(default_factory=dict)

    @property
    def support(self) -> tuple:
        return self.shape.columns

    @property
    def widths(self) -> dict:
        return self.shape.widths

    def width(self, xi) -> int:
        return self.shape.width(xi)

    @property
    def X(self) -> Rect:
        return self.shape.rect()

    def gen(self, xi, m, n) -> BlockOperator:
        return self.generators[(xi, m, n)]

    def keys(self):
        for xi in self.support:
            w = self.width(xi)
            for m in range(w):
                for n in range(w):
                    yield (xi, m, n)

    def keys_in(self, rect: Rect):
        for xi, m, n in self.keys():
            ks = rect.coords(xi)
            if m in ks and n in ks:
                yield (xi, m, n)

    def __repr__(self):
        return f"Condition(widths={self.widths})"


def trivial_condition(xi: int) -> Condition:
    shape = ColumnShape({xi: 1})
    return Condition(shape, {(xi, 0, 0): matrix_unit(shape, xi, 0, 0)})


def condition_from_lower_parts(widths, lower=None) -> Condition:
    """Condition whose generators are ``1_{xi,m,n}`` plus ``lower[(xi,m,n)]`` on columns below ``xi``."""
    shape = ColumnShape(widths)
    gens = {}
    lower = lower or {}
    for xi in shape.columns:
        w = shape.width(xi)
        for m in range(w):
            for n in range(w):
                a = matrix_unit(shape, xi, m, n)
                extra = lower.get((xi, m, n))
                if extra is not None:
                    a = a + extra.extend(shape).head(xi)
                gens[(xi, m, n)] = a
    return Condition(shape, gens)


def random_condition(widths, rng: np.random.Generator, scale: float = 1.0) -> Condition:
    """Random lower parts: every generator is a matrix unit plus noise on lower columns."""
    shape = ColumnShape(widths)
    lower = {}
    for xi in shape.columns:
        below = [c for c in shape.columns if c < xi]
        w = shape.width(xi)
        for m in range(w):
            for n in range(w):
                lower[(xi, m, n)] = BlockOperator(
                    shape, {c: random_block(shape.width(c), rng, scale) for c in below})
    return condition_from_lower_parts(widths, lower)


def validate_condition(p: Condition, tol: float = 0.0) -> Report:
    """Structural clauses: generators in ``B_{X_p}`` and ``A = A|xi + 1_{xi,m,n}``."""
    rep = Report("condition", inputs={"widths": p.widths})
    if not p.support:
        rep.violation("empty-support")
    expected = set(p.keys())
    for key in sorted(set(p.generators) - expected):
        rep.violation("extra-generator", list(key))
    for key in sorted(expected - set(p.generators)):
        rep.violation("missing-generator", list(key))
    for key in sorted(expected & set(p.generators)):
        xi, m, n = key
        a = p.generators[key]
        if a.shape != p.shape:
            rep.violation("shape", list(key), {"shape": a.shape.widths})
            continue
        unit = np.zeros((p.width(xi),) * 2)
        unit[m, n] = 1.0
        if np.max(np.abs(a.block(xi) - unit), initial=0.0) > tol:
            rep.violation("own-column", list(key))
        for c in a.blocks:
            if c > xi and np.max(np.abs(a.blocks[c])) > tol:
                rep.violation("above-column", list(key), {"column": c})
    return rep


def generated_subalgebra(p: Condition, rect: Rect | None = None) -> SubalgebraBasis:
    """Basis of ``A^p_X``, generated by ``A^p_{xi,m,n}`` with ``(xi,m), (xi,n)`` in ``X``."""
    rect = p.X if rect is None else rect
    if not rect.within(p.shape):
        raise OutOfShape(f"{rect} not inside X_p")
    gens = [p.generators[k] for k in p.keys_in(rect)]
    return star_closure(gens, p.shape)


def j_sigma(sigma: OrderIso, a: BlockOperator, shape: ColumnShape | None = None) -> BlockOperator:
    """``j_sigma``: the block of column ``sigma(xi)`` becomes the block of ``xi``."""
    inv = sigma.inverse().mapping
    if shape is None:
        shape = ColumnShape({inv[c]: w for c, w in a.shape.widths.items() if c in inv})
    return a.relabel(inv, shape)


def transport_condition(q: Condition, sigma: OrderIso) -> Condition:
    """Relabel ``q`` along ``sigma: a_q -> b``; an exact *-isomorphic copy on ``b``."""
    if tuple(sigma.source) != tuple(q.support):
        raise SizeMismatch(f"sigma source {sigma.source} is not a_q = {q.support}")
    mp = sigma.mapping
    shape = ColumnShape({mp[c]: w for c, w in q.widths.items()})
    gens = {(mp[xi], m, n): a.relabel(mp, shape) for (xi, m, n), a in q.generators.items()}
    wit = frozenset((mp[a], Rect({mp[c]: rect.coords(c) for c in rect.columns if c in mp}))
                    for a, rect in q.witnesses if a in mp)
    return Condition(shape, gens, wit, dict(q.meta))


def sample_f_membership(p: Condition, rect: Rect, alpha: int, rng: np.random.Generator,
                        samples: int = 100, tol: float = 1e-9) -> dict:
    """Sample ``A`` in ``A^p_X`` and test ``||A|{alpha}|| >= ||A|[alpha, inf)||``."""
    basis = generated_subalgebra(p, rect)
    worst = np.inf
    violations = 0
    for _ in range(samples):
        a = basis.random_element(rng)
        nrm = a.norm()
        if nrm == 0:
            continue
        a = a / nrm
        gap = a.at(alpha).norm() - a.tail(alpha).norm()
        worst = min(worst, gap)
        if gap < -tol:
            violations += 1
    return {"samples": samples, "violations": violations, "worst_gap": float(worst), "dim": basis.dim}


def has_f_witness(p: Condition, rect: Rect, alpha: int) -> bool:
    """Structural certificate for ``p`` in ``F_{X,alpha}``: a recorded witness covering ``X``."""
    return any(a == alpha and rect.issubset(w) for a, w in p.witnesses)
