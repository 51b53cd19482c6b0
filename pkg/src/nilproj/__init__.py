"""Oblique projections along subalgebras of nilpotent Lie algebras."""
from . import catalog, errors, io
from .errors import *  # noqa: F401,F403
from .grassmann import (
    AdaptedBasis,
    Flag,
    JumpSet,
    beta_basis,
    chi,
    chi_inverse,
    jump_indices,
    jump_indices_dual,
    jump_indices_sums,
    schubert_cell_contains,
)
from .lie_core import (
    LieAlgebra,
    ad_matrix,
    bch_inverse,
    bch_multiply,
    bch_product,
    bch_term,
    bracket,
    center,
    derived_algebra,
    derived_bracket_probe,
    is_jordan_holder_basis,
    is_subalgebra,
    lower_central_series,
    validate_algebra,
)
from .linalg import (
    Subspace,
    graph_projection,
    is_transversal,
    moore_penrose,
    oblique_projection_direct,
    oblique_projection_mp,
    orthogonal_projection,
)
from .nlproj import (
    NonlinearProjector,
    beta_continuity_probe,
    bipartite_factorize,
    block_factorize,
    coordinates_in_basis,
    nonlinear_factorization,
    nonlinear_projection,
    projection_idempotence_check,
    smoothness_probe,
)
from .scalars import EXACT, FLOAT, exact_array, float_array

__version__ = "0.1.0"
