"""Approximating an operator that is not in a context.

A = [[1,1,0],[1,1,0],[0,0,5]] has eigenvalues 0, 2, 5 with the e3 direction
isolated.  Inside the diagonal context the best approximations from above
and below in the spectral order are diag(2,2,5) and diag(0,0,5).
"""

import numpy as np

from toposq import build_poset, basis_context
from toposq.daseinisation import inner_sa, outer_sa
from toposq.presheaf import GelfandPoint
from toposq.quantity import quantity_pair

A = np.array([[1, 1, 0], [1, 1, 0], [0, 0, 5]], dtype=float)
poset = build_poset([basis_context(np.eye(3))])

for vid, ctx in poset.contexts():
    print(vid, "outer", np.diag(outer_sa(A, ctx)).real, "inner", np.diag(inner_sa(A, ctx)).real)

# coarser contexts widen the bracket
top = poset.maximal()[0]
pair = quantity_pair(poset, A, GelfandPoint(top, 2))
print("\nvalue range seen from the e3 point of", top)
for w in pair.mu:
    print(f"  at {w}: [{pair.mu[w]:g}, {pair.nu[w]:g}]")
