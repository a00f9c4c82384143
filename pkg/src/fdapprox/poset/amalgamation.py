"""Convenient position and the amalgamations built on it.

Every amalgamation returns ``(r, recipes)`` where ``recipes[i]`` witnesses
``r <= inputs[i]``.
"""
from __future__ import annotations

import numpy as np

from ..blockop import BlockOperator, ColumnShape, Rect, unit_projection
from ..errors import BadIsometry, NotConvenient, NotOrthonormal, WidthMismatch
from ..scheme import OrderIso, is_initial_fragment, precedes
from .condition import DEFAULT_WIDTH_CAP, Condition, j_sigma
from .density import dominate_column, grow_column
from .recipe import Identity, UCopy, compose

_ISO_TOL = 1e-9
_HALF = 1 / np.sqrt(2)
V_HALF = np.array([[-_HALF, _HALF], [_HALF, _HALF]])


def convenient_position(p: Condition, q: Condition, tol: float = 0.0) -> OrderIso | None:
    """The witness ``sigma: a_p -> a_q`` if ``p`` and ``q`` are in the convenient position."""
    ap, aq = p.support, q.support
    if len(ap) != len(aq):
        return None
    delta = tuple(sorted(set(ap) & set(aq)))
    if not (is_initial_fragment(delta, ap) and is_initial_fragment(delta, aq)):
        return None
    if not precedes(ap[len(delta):], aq[len(delta):]):
        return None
    sigma = OrderIso(ap, aq)
    mp = sigma.mapping
    if any(p.width(x) != q.width(mp[x]) for x in ap):
        return None
    for (xi, m, n), a in p.generators.items():
        b = j_sigma(sigma, q.generators[(mp[xi], m, n)], p.shape)
        if tol == 0.0:
            if not b.equals(a):
                return None
        elif (b - a).norm() > tol:
            return None
    return sigma


def _require(p, q, sigma=None):
    found = convenient_position(p, q)
    if found is None or (sigma is not None and tuple(sigma.pairs) != tuple(found.pairs)):
        raise NotConvenient(f"{p} and {q} are not in the convenient position")
    return found


def _merge(p: Condition, q: Condition, shape: ColumnShape, q_gens: dict) -> Condition:
    gens = {k: a.extend(shape) for k, a in p.generators.items()}
    for k, a in q_gens.items():
        if k[0] not in p.shape:
            gens[k] = a
    return Condition(shape, gens, p.witnesses | q.witnesses, {})


def amalgamate_disjoint(p: Condition, q: Condition, sigma: OrderIso | None = None):
    """Union of supports, both embeddings zero-padding."""
    _require(p, q, sigma)
    shape = p.shape.union(q.shape)
    r = _merge(p, q, shape, {k: a.extend(shape) for k, a in q.generators.items()})
    return r, (Identity(shape), Identity(shape))


def _tail_rect(p: Condition, q: Condition) -> Rect:
    """``X_p \\ X_q`` for conditions in the convenient position."""
    return Rect({c: range(p.width(c)) for c in p.support if c not in q.shape})


def amalgamate_including(p: Condition, q: Condition, sigma: OrderIso | None = None,
                         unitary: BlockOperator | None = None):
    """``i_{r,q}(A) = A + U j_sigma(A) U*`` with ``UU* = U*U = P_{X_p \\ X_q}``."""
    sigma = _require(p, q, sigma)
    shape = p.shape.union(q.shape)
    tail = _tail_rect(p, q)
    proj = unit_projection(shape, tail)
    u = proj if unitary is None else unitary.extend(shape)
    err = max((u @ u.adjoint() - proj).norm(), (u.adjoint() @ u - proj).norm())
    if err > _ISO_TOL:
        raise BadIsometry(f"U is not a partial isometry onto X_p minus X_q (error {err:.3g})")
    pairs = tuple((eta, sigma(eta)) for eta in tail.columns)
    rq = UCopy(pairs, u, shape)
    r = _merge(p, q, shape, {k: rq.evaluate(a) for k, a in q.generators.items()})
    return r, (Identity(shape), rq)


def anticommuting_unitary(v1, v2, n: int) -> np.ndarray:
    """Unitary acting as ``V`` on ``span(v1, v2)`` and as the identity on its complement.

    Shorter vectors are zero-padded into ``C^n``.
    """
    if n < 2:
        raise NotOrthonormal("need n >= 2")
    vs = []
    for v in (v1, v2):
        v = np.asarray(v, dtype=complex).ravel()
        if v.size > n:
            raise NotOrthonormal(f"vector of length {v.size} does not fit in C^{n}")
        vs.append(np.concatenate([v, np.zeros(n - v.size, dtype=complex)]))
    w = np.column_stack(vs)
    gram = w.conj().T @ w
    if np.max(np.abs(gram - np.eye(2))) > _ISO_TOL:
        raise NotOrthonormal("v1, v2 must be orthogonal unit vectors")
    return w @ V_HALF @ w.conj().T + (np.eye(n) - w @ w.conj().T)


def _uniform_width(cond: Condition, cols) -> int:
    ws = {cond.width(c) for c in cols}
    if len(ws) != 1:
        raise WidthMismatch(f"widths {sorted(ws)} on the non-root columns are not uniform")
    return ws.pop()


def amalgamate_anticommuting(p: Condition, q: Condition, v1, v2, sigma: OrderIso | None = None):
    """``U``-including amalgamation with ``U`` the anticommuting unitary on each lower column."""
    sigma = _require(p, q, sigma)
    tail = _tail_rect(p, q)
    upper = [c for c in q.support if c not in p.shape]
    if not upper:
        raise WidthMismatch("q has no columns outside the root")
    n = _uniform_width(q, upper)
    block = anticommuting_unitary(v1, v2, n)
    shape = p.shape.union(q.shape)
    u = BlockOperator(shape, {eta: block for eta in tail.columns})
    return amalgamate_including(p, q, sigma, u)


def _triple(p1, p2, p3):
    s21 = _require(p1, p2)
    s31 = _require(p1, p3)
    s32 = _require(p2, p3)
    return s21, s31, s32


def _second_stage(s2: Condition, s3: Condition, rec2, rec3, rec1):
    """Disjoint amalgamation of two amalgamations sharing ``p_1``."""
    r, (i2, i3) = amalgamate_disjoint(s2, s3)
    return r, (compose(rec1, i2), compose(rec2, i2), compose(rec3, i3))


def amalgamate_type2(p1: Condition, p2: Condition, p3: Condition):
    """Two including amalgamations over ``p_1`` glued disjointly."""
    _triple(p1, p2, p3)
    s2, (a1, a2) = amalgamate_including(p1, p2)
    s3, (_, a3) = amalgamate_including(p1, p3)
    return _second_stage(s2, s3, a2, a3, a1)


def amalgamate_type3(p1: Condition, p2: Condition, p3: Condition, v1, v2):
    """Two ``(v1, v2)``-anticommuting amalgamations over ``p_1`` glued disjointly."""
    _triple(p1, p2, p3)
    ws = {p.width(c) for p in (p1, p2, p3) for c in p.support}
    if len(ws) != 1:
        raise WidthMismatch(f"type 3 needs one common width, got {sorted(ws)}")
    if ws.pop() < 2:
        raise WidthMismatch("type 3 needs width n > 1")
    s2, (a1, a2) = amalgamate_anticommuting(p1, p2, v1, v2)
    s3, (_, a3) = amalgamate_anticommuting(p1, p3, v1, v2)
    return _second_stage(s2, s3, a2, a3, a1)


def amalgamate_type1(p1: Condition, p2: Condition, p3: Condition, increment: int = 2,
                     width_cap=DEFAULT_WIDTH_CAP):
    """Dominate every column of each ``p_i``, equalize widths, glue disjointly.

    The same operations are applied at corresponding columns of ``p_2`` and
    ``p_3``, so the three results stay in the convenient position.
    """
    if increment < 1:
        raise ValueError("increment must be positive")
    s21, s31, _ = _triple(p1, p2, p3)
    maps = [None, s21, s31]
    conds = [p1, p2, p3]
    recipes = [[], [], []]
    for alpha in p1.support:
        for i in range(3):
            a = alpha if maps[i] is None else maps[i](alpha)
            rect = [p1, p2, p3][i].X
            conds[i], rec = dominate_column(conds[i], rect, a, width_cap)
            recipes[i].append(rec)
    n = max(max(c.widths.values()) for c in conds) + increment
    for i in range(3):
        for c in conds[i].support:
            conds[i], rec = grow_column(conds[i], c, n, width_cap)
            recipes[i].append(rec)
    q1, q2, q3 = conds
    s1, (i11, i12) = amalgamate_disjoint(q1, q2)
    s2, (i21, i23) = amalgamate_disjoint(q1, q3)
    r, (j1, j2) = amalgamate_disjoint(s1, s2)
    chains = (
        compose(*recipes[0], i11, j1),
        compose(*recipes[1], i12, j1),
        compose(*recipes[2], i23, j2),
    )
    return r, chains
