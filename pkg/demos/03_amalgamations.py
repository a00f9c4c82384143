"""
Three ways to glue three copies
===============================

Three conditions sharing a root and placed on increasing blocks can be joined
so that embedded copies of one operator multiply like a single copy (type 2),
fail to commute by exactly 1/2 (type 3), or are first dominated and widened
(type 1).
"""

import numpy as np

from fdapprox.blockop import matrix_unit, random_operator
from fdapprox.poset import (amalgamate_type1, amalgamate_type2, amalgamate_type3, check_extension,
                            random_condition, transport_condition)
from fdapprox.scheme import order_iso

rng = np.random.default_rng(2)
p1 = random_condition({0: 2, 1: 2}, rng)
p2 = transport_condition(p1, order_iso((0, 1), (0, 2)))
p3 = transport_condition(p1, order_iso((0, 1), (0, 3)))
move = {name: order_iso((0, 3), b).mapping for name, b in (("p1", (0, 1)), ("p2", (0, 2)))}

# %%
# Type 2: i3(A) i2(jA) equals i1(jA)^2 for every A on p3.
r, (i1, i2, i3) = amalgamate_type2(p1, p2, p3)
A = random_operator(p3.shape, rng)
lhs = i3(A) @ i2(A.relabel(move["p2"], p2.shape))
rhs = i1(A.relabel(move["p1"], p1.shape)) @ i1(A.relabel(move["p1"], p1.shape))
print("type 2 identity error:", (lhs - rhs).norm())

# %%
# Type 3 with v1 = e0, v2 = e1: the copies of the projection onto e0 at the
# new column do not commute.
r, (i1, i2, i3) = amalgamate_type3(p1, p2, p3, [1, 0], [0, 1])
E = matrix_unit(p2.shape, 2, 0, 0)
x, y = i2(E), i1(E.relabel(order_iso((0, 2), (0, 1)).mapping, p1.shape))
print("type 3 commutator:", (x @ y - y @ x).norm())

# %%
# Type 1 dominates every column of every input and grows all widths.
r, recs = amalgamate_type1(p1, p2, p3)
print("type 1 widths:", r.widths)
print("all three embeddings valid:", all(check_extension(r, p, rec) for p, rec in zip((p1, p2, p3), recs)))
