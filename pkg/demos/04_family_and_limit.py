"""
A family over a construction scheme
===================================

The canonical scheme with three blocks per rank and empty roots has 27 points.
Each rank is built by one amalgamation type, and the top condition holds a
finite window of the limit algebra.
"""

from fdapprox.limit import build_family, check_directed, ideal_chain, materialize_window
from fdapprox.scheme import build_scheme, validate_params
from fdapprox.verify import dichotomy_scan, template_projection, theorem_main_suite

scheme = build_scheme(validate_params([0, 3, 3, 3], [0, 0, 0, 0], 3))
family = build_family(scheme)
print("m_k:", scheme.params.m_seq, "widths l_k:", family.l_seq, "kinds:", family.kinds)
print("directed:", check_directed(family).passed)

# %%
# The window reads generators off the top condition and compares them with
# every condition that covers them.
window = materialize_window(family)
print("window generators:", len(window.generators), "algebra dim:", window.algebra().dim)
print("ideal chain:", [f.value for f in ideal_chain(family, window).findings][0])

# %%
# Projections transported across a type-2 rank nearly multiply and commute;
# across the type-3 rank they keep a commutator of 1/2.
rep = theorem_main_suite(family, eps=0.1)
for f in rep.findings:
    if f.kind in ("a", "b", "c"):
        print(f.kind, f.value)

# %%
# The commutator graph of the transported projections at the type-3 rank.
k = 1
v = family.vectors[k][1]
ops = []
for g in scheme.levels[k]:
    q = template_projection(family.conditions[g].shape, g[-1], v)
    ops.append(family.embedding(family.top, g).evaluate(q))
g = dichotomy_scan(ops, 0.1)
print("clique:", g.clique, "independent:", g.independent)
