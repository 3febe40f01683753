"""paramlat: a desk-scale workbench for the order structure of
parameterizations over step-bounded abstract machines."""

from .config import DESK, Horizon, env_step_cap
from .universe import (
    Universe,
    cantor_pair,
    cantor_unpair,
    nat_to_str,
    pair_bits,
    pair_str,
    split_bits,
    str_to_nat,
    unpair_str,
)
from .machines import (
    Approximation,
    NotTotalOnUniverse,
    Outcome,
    Program,
    RunResult,
    VirtualApproximation,
    assemble,
    domain,
    is_approximation_for,
    program_from_hex,
    program_to_hex,
    restrict,
    run,
)
from .spaces import NAT, FiniteSpace, NatSpace, ProductSpace, check_space_laws, encode_len
from .params import (
    Parameterization,
    SliceUnspecified,
    by_length,
    from_coverage,
    from_function,
    from_runtime,
    from_slices,
    full,
    join,
    meet,
)
from .order import (
    below_nu,
    below_uniform,
    cardinality_bound,
    check_filter,
    check_glb,
    check_lub,
    gap,
    gap_table,
    has_imix,
    mu,
)
from .slices import (
    ALL,
    EMPTY,
    MAJORITY,
    PARITY,
    PREFIX1,
    DecidedSet,
    DomainMismatch,
    Reduction,
    SliceFamily,
    core_complement_duality,
    extend_slice_via_reduction,
    is_core_for,
    is_slice_for,
    lli_cylinder,
    make_family,
    maximal_slice_probe,
    transform_symdiff,
    xor_combine,
)
from .constructions import (
    ABOVE_M,
    Certificate,
    DiagonalSet,
    UnverifiedCertificate,
    accelerate,
    diag_decide,
    diag_invalidation_experiment,
    diagonal_set,
    ic_parameterization,
    ic_slice_dispatcher,
    instance_complexity,
    make_certificate,
    search_parameterization,
    universal_search_decide,
    verify_certificate,
)
from .verdict import (
    UNRESOLVED,
    BudgetExhausted,
    HorizonVerdict,
    InfinityWitness,
)

__version__ = "0.1.0"
