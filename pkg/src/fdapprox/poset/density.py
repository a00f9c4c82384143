"""The three density operations: new column, wider column, dominating column."""
from __future__ import annotations

from ..blockop import ColumnShape, Rect, matrix_unit
from ..errors import AlreadyPresent, NotInSupport, OutOfShape, WidthCapExceeded
from .condition import DEFAULT_WIDTH_CAP, Condition
from .recipe import Identity, Mirror


def _check_cap(shape: ColumnShape, cap):
    if cap is None:
        return
    for w in shape.widths.values():
        if w > cap:
            raise WidthCapExceeded(w, cap)


def extend_domain(q: Condition, xi: int):
    """Add column ``xi`` of width one with ``A_{xi,0,0} = 1_{xi,0,0}``."""
    if xi in q.shape:
        raise AlreadyPresent(f"column {xi} already in a_q")
    shape = q.shape.union(ColumnShape({xi: 1}))
    gens = {k: a.extend(shape) for k, a in q.generators.items()}
    gens[(xi, 0, 0)] = matrix_unit(shape, xi, 0, 0)
    return Condition(shape, gens, q.witnesses, dict(q.meta)), Identity(shape)


def grow_column(q: Condition, xi: int, k: int, width_cap=DEFAULT_WIDTH_CAP):
    """Widen column ``xi`` to at least ``k``; the new generators are pure matrix units."""
    if xi not in q.shape:
        raise NotInSupport(f"column {xi} not in a_q")
    old = q.width(xi)
    if k <= old:
        return q, Identity(q.shape)
    shape = q.shape.with_width(xi, k)
    _check_cap(shape, width_cap)
    gens = {key: a.extend(shape) for key, a in q.generators.items()}
    for m in range(k):
        for n in range(k):
            if max(m, n) >= old:
                gens[(xi, m, n)] = matrix_unit(shape, xi, m, n)
    return Condition(shape, gens, q.witnesses, dict(q.meta)), Identity(shape)


def mirror_order(q: Condition, alpha: int) -> tuple:
    """The bijection of the above-``alpha`` rectangle onto fresh coordinates, column by column."""
    return tuple((c, k) for c in q.support if c > alpha for k in range(q.width(c)))


def dominate_column(q: Condition, rect: Rect | None, alpha: int, width_cap=DEFAULT_WIDTH_CAP):
    """Put a copy of everything above ``alpha`` into fresh coordinates of column ``alpha``.

    The result lies in ``F_{X, alpha}`` for every ``X`` inside ``X_q``; the
    witness ``(alpha, X_q)`` is recorded on it.
    """
    if alpha not in q.shape:
        raise NotInSupport(f"column {alpha} not in a_q")
    rect = q.X if rect is None else rect
    if not rect.within(q.shape):
        raise OutOfShape(f"{rect} not inside X_q")
    witnesses = q.witnesses | {(alpha, q.X)}
    order = mirror_order(q, alpha)
    if not order:
        return Condition(q.shape, q.generators, witnesses, dict(q.meta)), Identity(q.shape)
    old = q.width(alpha)
    new = old + len(order)
    shape = q.shape.with_width(alpha, new)
    _check_cap(shape, width_cap)
    recipe = Mirror(alpha, order, old, shape)
    gens = {key: recipe.evaluate(a) for key, a in q.generators.items()}
    for m in range(new):
        for n in range(new):
            if max(m, n) >= old:
                gens[(alpha, m, n)] = matrix_unit(shape, alpha, m, n)
    return Condition(shape, gens, witnesses, dict(q.meta)), recipe
