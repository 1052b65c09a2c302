"""wstar: a desk-scale verification engine for finite-dimensional
W*-algebras, their tensor products, and the categorical universal
properties that characterize them."""

__version__ = "0.1.0"

from .algebra import (
    AlgebraElement,
    BlockStructure,
    Functional,
    WStarAlgebra,
    add,
    adjoint,
    element,
    from_coords,
    functional,
    make_algebra,
    mul,
    norming_functional,
    op_norm,
    pair,
    random_element,
    random_functional,
    random_selfadjoint,
    random_unitary,
    scale,
    to_coords,
    tr_norm,
    tr_norm_maximizer,
)
from .category import (
    ProductStructure,
    orthogonal_sum_mediator,
    product,
    product_mediator,
    unique_from_zero,
    unique_to_zero,
    zero_morphism,
    zero_object,
)
from .duality import (
    IdealSummand,
    LinearSubspace,
    annihilator,
    double_dual_check,
    ideal_summand_from_subspace,
    partial_evaluate,
    partial_evaluate_left,
    predual_tensor_check,
    quotient_by_ideal,
    span_of_elements,
    subspace_dual_isometry,
    subspace_from_vectors,
)
from .engine import builtin_suite_script, run, run_text
from .monoidal import (
    TensorRealization,
    associator,
    braiding,
    canonical_realization,
    equivalence_check,
    flipped_realization,
    unit_object,
    unitors,
)
from .morphisms import (
    MultiplicityData,
    StarHom,
    apply,
    canonical_form,
    compose,
    from_multiplicity,
    identity_hom,
    is_unital,
    random_hom,
    random_multiplicity,
    star_hom,
    verify_hom,
    zero_hom,
)
from .reports import CheckReport, emit_report, render_reports
from .script import Script, parse, pretty_print
from .tensor import (
    TensorStructure,
    commutative_tensor_check,
    max_norm_lower_bound,
    mediator,
    min_norm,
    random_commuting_pair,
    ranges_commute,
    tensor_algebra,
    tensor_elements,
    tensor_functionals,
    tensor_homs,
)
