"""vvtheta: vector-valued Siegel theta functions of even lattices.

Lattices are integer Gram matrices; discriminant forms carry exact Q/Z
values; theta functions are computed by certified truncation over majorant
ellipsoids and transform under Weil representations of the metaplectic
group.  See the README for the CLI and the verification suite.
"""

from .errors import *  # noqa: F401,F403
from .lattice import (  # noqa: F401
    Lattice,
    OverlatticeEmbedding,
    Sublattice,
    construct_lattice,
    direct_sum,
    dual_data,
    orthogonal_complement,
    rescale,
    sublattice,
    trivial_embedding,
)
from .discforms import (  # noqa: F401
    DiscriminantGroup,
    IsotropicSubgroup,
    check_isotropic,
    disc_eval,
    disc_product_iso,
    disc_projection,
    discriminant_group,
    gauss_sum_check,
    glue_map,
    orthogonal_subgroup,
    overlattice_from_isotropic,
    two_pi_e,
)
from .weil import (  # noqa: F401
    Axis,
    GeneratorWord,
    MetaplecticElement,
    MP_IDENTITY,
    MP_S,
    MP_T,
    MP_Z,
    RepVector,
    down_arrow,
    identity_vector,
    mp_power,
    pair,
    reindex_axis,
    rho_apply,
    rho_generator,
    rho_matrix,
    up_arrow,
    word_decompose,
)
from .grassmann import (  # noqa: F401
    GrassmannPoint,
    HomogeneousPolynomial,
    Polynomial,
    VectorPair,
    block_swapped_poly,
    constant_poly,
    coordinate_poly,
    direct_sum_grassmann,
    exp_laplacian,
    lift_product,
    make_grassmann_point,
    split_product_check,
    swap_blocks_point,
)
from .theta import (  # noqa: F401
    TermRecord,
    ThetaEvaluator,
    ThetaValue,
    enumerate_vectors,
    mixed_theta_composed,
    mixed_theta_direct,
    mixed_theta_family,
    modularity_defect,
    pairing_expression_residuals,
    seesaw_pairing_residual,
    seesaw_split_residual,
    siegel_theta,
    siegel_theta_evaluator,
    siegel_theta_family,
    split_data,
    term_multiset,
    theta_negation_residual,
    theta_value_difference,
)
from .contraction import (  # noqa: F401
    ContractionResult,
    QExpansionForm,
    contract_pointwise,
    contract_symbolic,
    expected_weights,
    lift_integrand,
    naive_truncated_lift,
    restriction_residual,
    theta_series_coset,
)
from .cli import emit_expansion, load_expansion, run_scenario  # noqa: F401

__version__ = "0.1.0"
