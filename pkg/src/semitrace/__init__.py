"""semitrace: trace ideals, conductors, and Ext/Tor annihilators over
numerical semigroup rings, with an exact verification harness."""

from .field import DEFAULT_PRIME, PrimeField
from .fracideal import (
    MonomialFractionalIdeal,
    colon,
    conductor,
    enumerate_ideals,
    make_ideal,
    normalization_ideal,
    normalize,
    product,
    trace_ideal,
    unit_ideal,
)
from .graded import (
    FPGradedModule,
    GradedFreeModule,
    Resolution,
    TermMatrix,
    compose,
    is_mcm,
    kernel,
    minimalize,
    present,
    quotient_module,
    resolve,
    syzygy,
    transpose,
)
from .homology import (
    FiniteLengthGradedModule,
    annihilator,
    ext,
    hom_free_into,
    stable_hom_dim,
    tensor_free,
    tor,
)
from .semigroup import (
    NumericalSemigroup,
    SemigroupError,
    enumerate_by_genus,
    from_generators,
)
from .theorems import (
    RunConfig,
    SemigroupContext,
    check_conductor_annihilation,
    check_gorenstein_conductor,
    check_oracles,
    check_trace_identity,
    check_witness_equality,
    factorization_witness,
    run_corpus,
)

__version__ = "0.1.0"
