"""Contexts of C^3 and the spectral presheaf over them.

A context is a commutative subalgebra, stored by its atoms.  Starting from
the diagonal matrices we get the full poset of coarse-grainings, and each
context carries one spectral point per atom.
"""

import numpy as np

from toposq import build_poset, basis_context
from toposq.presheaf import GelfandPoint, restrict_point, spectrum

poset = build_poset([basis_context(np.eye(3))])
print(f"{len(poset)} contexts, maximal: {poset.maximal()}")
for vid, ctx in poset.contexts():
    blocks = [np.flatnonzero(np.diag(a).real > 0.5).tolist() for a in ctx.atoms]
    print(f"  {vid}: atoms on basis indices {blocks}")

print("\norder (sub <= sup):", poset.order_pairs())

top = poset.maximal()[0]
print(f"\nspectral points of {top}: {len(spectrum(poset, top))}")
p = GelfandPoint(top, 2)
for w in sorted(poset.down(top)):
    print(f"  point {top}:2 restricts to {w}:{restrict_point(poset, p, w).atom}")
