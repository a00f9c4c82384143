"""
The rotating unitary and the one-half bound
===========================================

A unitary that swaps two orthonormal vectors up to a reflection moves a rank
one projection into a position where the commutator has norm exactly 1/2.
No pair of positive contractions can do better.
"""

import numpy as np

from fdapprox.poset import V_HALF, anticommuting_unitary
from fdapprox.verify import stampfli_suite

# %%
# P projects onto the first coordinate; V is the real 2x2 rotation-reflection.
P = np.diag([1.0, 0.0])
UPU = V_HALF @ P @ V_HALF.T
print("UPU* =\n", UPU.round(12))
print("||[UPU*, P]|| =", np.linalg.norm(UPU @ P - P @ UPU, 2))

# %%
# Inside a bigger column the unitary acts as V on span(v1, v2) and as the
# identity elsewhere.
U = anticommuting_unitary([0, 1, 0], [0, 0, 1], 3)
print("U on C^3 =\n", U.round(6))

# %%
# Random positive contractions stay well below the ceiling.
rep = stampfli_suite(trials=1000, seed=0)
print("largest commutator over 1000 random pairs:", rep.findings[0].value)
