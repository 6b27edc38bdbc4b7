"""Presheaf-topos truth values for finite-dimensional quantum systems."""

from .config import DEFAULT_TOLERANCES, Tolerances
from .context import (
    Context,
    ContextPoset,
    basis_context,
    build_poset,
    generate_context,
    is_subcontext,
    subcontexts,
)
from .daseinisation import inner_projection, inner_sa, outer_projection, outer_sa
from .ks import find_global_section, section_to_valuation
from .linalg import (
    expectation,
    hermitian_eig,
    is_positive_semidefinite,
    spectral_family,
    spectral_leq,
)
from .presheaf import ClopenSubobject, GelfandPoint, OmegaElement, Sieve
from .quantity import (
    IntervalWindow,
    daseinised_proposition,
    pullback_proposition,
    quantity_pair,
)
from .truth import compare_truth_values, truth_constants, truth_object, valuate

__version__ = "0.1.0"
