"""Toolkit for the distribution of alpha*p modulo one over primes lying in
the intersection of two Piatetski-Shapiro sets."""

__version__ = "0.1.0"

from .realnum import (  # noqa: F401
    DEFAULT_POLICY,
    PrecisionPolicy,
    UnitComplex,
    UnresolvableBoundaryError,
    dist_nearest,
    e_phase,
    frac,
    pow_floor_frac,
    sawtooth,
)
from .sieve import ArithmeticTables, load_cache, save_cache, sieve_range, tau_k  # noqa: F401
from .psset import (  # noqa: F401
    GammaPair,
    PrimeRecord,
    count_joint,
    enumerate_intersection,
    is_member,
    main_term,
    single_main_term,
    witness,
)
from .diophantine import (  # noqa: F401
    Convergent,
    IrrationalTarget,
    convergents,
    dirichlet_approx,
    karatsuba_bound,
    min_linear_sum,
    parse_target,
)
from .fourier import (  # noqa: F401
    E_H_envelope,
    M_H,
    SawtoothExpansion,
    WindowParams,
    envelope_g,
    min_product_sum,
    psi_truncated,
    window_expansion_envelope,
    window_expansion_main,
    window_F,
    zhai_bound,
)
from .expsum import (  # noqa: F401
    ExpSumReport,
    HarmonicParams,
    TypeIIConfig,
    case_split,
    gamma_star,
    gamma_star_decomposed,
    heath_brown_terms,
    linear_prime_sum,
    segment_phase_sum,
    type1_sum,
    type2_sum,
    weyl_shift_check,
)
from .experiments import (  # noqa: F401
    MinimaRecord,
    TheoremReport,
    WindowExcessReport,
    counting_report,
    discrepancy_estimate,
    record_minima_scan,
    theorem_witness_count,
    upsilon_eval,
)
