"""Exact capacity and coded schemes for symmetric private information retrieval
under arbitrary collusion and eavesdropping patterns."""

from .capacity import (
    CapacityReport,
    pir_eavesdrop_capacity,
    pir_eavesdrop_report,
    spir_capacity,
    t_espir_capacity,
)
from .field import PrimeField, choose_field
from .grs import build_grs, check_mds
from .lp import solve_lp1, solve_lp2, verify_duality
from .patterns import (
    Pattern,
    complete_coverage,
    incidence_matrix,
    join_patterns,
    load_patterns,
    reduce_maximal,
    validate,
)
from .protocol import (
    MessageStore,
    decode,
    generate_queries,
    measure_rate,
    plan_scheme,
    run_session,
)
from .verifier import exhaustive_privacy, verify_all

__version__ = "0.1.0"
