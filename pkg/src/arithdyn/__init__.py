"""Heights, dynamical degrees and arithmetic degrees of rational self-maps.

Exact integer and rational arithmetic throughout; floats appear only in
logarithms, ratio tables and spectral brackets.
"""

from .canheight import (
    CanonicalHeightEstimate,
    CanonicalStatus,
    canonical_height,
    defect_sequence,
    telescoping_residuals,
    transform_check,
)
from .config import ExperimentConfig, config_from_dict, load_config
from .corpus import corpus_config, corpus_names
from .degrees import (
    DegreeSequence,
    DynDegEstimate,
    MonomialMap,
    Stability,
    degree_sequence,
    estimate_dyndeg,
    matrix_dyndeg,
    monomial_dyndeg,
    power_degree_consistency,
)
from .errors import (
    ArithDynError,
    ZeroLog,
    PolySyntaxError,
    UnknownVariable,
    NegativeExponent,
    ArityMismatch,
    InhomogeneousInput,
    ZeroPolynomial,
    BudgetExceeded,
    AllZero,
    IndeterminatePoint,
    DegenerateComposite,
    ConvergenceFailure,
    SingularMatrix,
    TooShort,
    DeltaNotGreaterThanOne,
    NotStable,
    NegativeConstant,
    BoundViolated,
    SchemaError,
    NotCertifiedMorphism,
)
from .harness import (
    VerificationReport,
    run_suite,
    verify_canheight,
    verify_main,
    verify_morphism_bounds,
    verify_picard_one,
    verify_power,
    verify_seqlem,
)
from .orbits import (
    OrbitRecord,
    Termination,
    check_power_consistency,
    compute_orbit,
    estimate_arith_degree,
    fit_uniform_bound,
    torus_point,
)
from .poly import MultiPoly, compose, content_and_primitive, gcd_list, parse_poly
from .projmap import (
    MorphismStatus,
    ProjPoint,
    RationalMap,
    compose_maps,
    evaluate,
    is_morphism,
    iterate_map,
    normalize_point,
    weil_height,
)
from .seqlem import (
    lemma0_constants,
    lemma0_worst_sequence,
    sweep,
    verify_lemma0,
    verify_lemma_sum,
)
from .spectral import SpectralEstimate, char_poly, gelfand_sequence, spectral_radius

__version__ = "0.1.0"
