"""
Irredundant families of matrices
================================

A family is irredundant when no member lies in the *-algebra generated by the
others.  The closure test is compared with brute force over products.
"""

import numpy as np

from fdapprox.blockop import BlockOperator
from fdapprox.verify import brute_force_irredundance, irredundance_test


def op(m):
    m = np.array(m, dtype=complex)
    return BlockOperator({0: m.shape[0]}, {0: m})


families = {
    "units E11, E12": [op([[1, 0], [0, 0]]), op([[0, 1], [0, 0]])],
    "E11 and the flip": [op([[1, 0], [0, 0]]), op([[0, 1], [1, 0]])],
    "diag(1,2,3), diag(1,0,0)": [op(np.diag([1, 2, 3])), op(np.diag([1, 0, 0]))],
}
for name, fam in families.items():
    res = irredundance_test(fam)
    ref = brute_force_irredundance(fam)
    print(f"{name:28s} {res.verdicts} oracle agrees: {res.verdicts == ref['verdicts']}")
