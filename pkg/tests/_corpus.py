"""Seeded corpus of poset steps ``(p, q, recipe, label)`` for the property tests."""
from __future__ import annotations

import numpy as np

from fdapprox.poset import (amalgamate_anticommuting, amalgamate_disjoint, amalgamate_including,
                            amalgamate_type1, amalgamate_type2, amalgamate_type3, dominate_column,
                            extend_domain, grow_column, random_condition, transport_condition)
from fdapprox.scheme import order_iso


def random_widths(rng, cols, lo=1, hi=3):
    return {c: int(rng.integers(lo, hi + 1)) for c in cols}


def triple(rng, root=1, block=1, width=None, scale=0.5):
    """Three conditions in pairwise convenient position on ``root`` + three increasing blocks."""
    base_cols = list(range(root + block))
    if width is None:
        widths = random_widths(rng, base_cols, 1, 2)
    else:
        widths = {c: width for c in base_cols}
    p1 = random_condition(widths, rng, scale)
    out = [p1]
    for i in (1, 2):
        target = tuple(range(root)) + tuple(range(root + i * block, root + (i + 1) * block))
        out.append(transport_condition(p1, order_iso(base_cols, target)))
    return out


def pair(rng, root=1, block=2, width=None, scale=0.5):
    p, q, _ = triple(rng, root, block, width, scale)
    return p, q


def steps(seed=0, count=200):
    """At least ``count`` steps mixing every density operation and amalgamation."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        kind = len(out) % 9
        if kind == 0:
            q = random_condition(random_widths(rng, sorted(rng.choice(8, size=2, replace=False))), rng)
            xi = next(c for c in range(10) if c not in q.shape)
            p, rec = extend_domain(q, xi)
            out.append((p, q, rec, "extend_domain"))
        elif kind == 1:
            q = random_condition(random_widths(rng, [0, 2, 5]), rng)
            xi = int(rng.choice(q.support))
            p, rec = grow_column(q, xi, q.width(xi) + int(rng.integers(1, 3)))
            out.append((p, q, rec, "grow_column"))
        elif kind == 2:
            q = random_condition(random_widths(rng, [0, 1, 3]), rng)
            alpha = int(rng.choice(q.support))
            p, rec = dominate_column(q, None, alpha)
            out.append((p, q, rec, "dominate_column"))
        elif kind == 3:
            a, b = pair(rng, root=int(rng.integers(0, 2)), block=int(rng.integers(1, 3)))
            r, (ra, rb) = amalgamate_disjoint(a, b)
            out += [(r, a, ra, "disjoint"), (r, b, rb, "disjoint")]
        elif kind == 4:
            a, b = pair(rng, root=int(rng.integers(0, 2)), block=int(rng.integers(1, 3)))
            r, (ra, rb) = amalgamate_including(a, b)
            out += [(r, a, ra, "including"), (r, b, rb, "including")]
        elif kind == 5:
            n = int(rng.integers(2, 4))
            a, b = pair(rng, root=int(rng.integers(0, 2)), block=int(rng.integers(1, 3)), width=n)
            v1, v2 = _random_orthonormal(rng, n)
            r, (ra, rb) = amalgamate_anticommuting(a, b, v1, v2)
            out += [(r, a, ra, "anticommuting"), (r, b, rb, "anticommuting")]
        elif kind == 6:
            ps = triple(rng, root=int(rng.integers(0, 2)), block=1)
            r, recs = amalgamate_type1(*ps)
            out += [(r, p, rec, "type1") for p, rec in zip(ps, recs)]
        elif kind == 7:
            ps = triple(rng, root=int(rng.integers(0, 2)), block=int(rng.integers(1, 3)))
            r, recs = amalgamate_type2(*ps)
            out += [(r, p, rec, "type2") for p, rec in zip(ps, recs)]
        else:
            n = int(rng.integers(2, 4))
            ps = triple(rng, root=int(rng.integers(0, 2)), block=int(rng.integers(1, 3)), width=n)
            v1, v2 = _random_orthonormal(rng, n)
            r, recs = amalgamate_type3(*ps, v1, v2)
            out += [(r, p, rec, "type3") for p, rec in zip(ps, recs)]
    return out


def _random_orthonormal(rng, n):
    z = rng.standard_normal((n, 2)) + 1j * rng.standard_normal((n, 2))
    q, _ = np.linalg.qr(z)
    return q[:, 0], q[:, 1]
