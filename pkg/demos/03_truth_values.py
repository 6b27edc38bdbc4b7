"""Truth values of "A lies in [4, 6]" in several states.

Truth values are sieves: at each context, the set of coarser contexts where
the proposition is already certain.  They form a Heyting algebra, so two
states can give incomparable answers.
"""

import numpy as np

from toposq import build_poset, basis_context
from toposq.quantity import IntervalWindow, daseinised_proposition
from toposq.truth import compare_truth_values, truth_object, valuate

A = np.array([[1, 1, 0], [1, 1, 0], [0, 0, 5]], dtype=float)
poset = build_poset([basis_context(np.eye(3))])
top = poset.maximal()[0]
prop = daseinised_proposition(poset, A, IntervalWindow(4, 6))

e = np.eye(3)
states = {
    "e3": e[2],
    "(e2+e3)/sqrt2": (e[1] + e[2]) / np.sqrt(2),
    "(e1+e3)/sqrt2": (e[0] + e[2]) / np.sqrt(2),
    "e1": e[0],
}
values = {}
for name, psi in states.items():
    values[name] = valuate(prop, truth_object(psi, poset))
    print(f"{name:>15}: sieve at {top} = {sorted(values[name][top])}")

a, b = values["(e2+e3)/sqrt2"], values["(e1+e3)/sqrt2"]
print("\nthe two superpositions compare as:", compare_truth_values(a, b))
lem = a | ~a
print("a or not a at the top:", sorted(lem[top]), "of", sorted(poset.down(top)))
