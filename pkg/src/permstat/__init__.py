"""permstat: reduced-word repetition statistics versus 321/3412 pattern counts.

For any permutation w, the number of repeated letters in a reduced word,
rep(w) = length(w) - |support(w)|, never exceeds the combined number of 321-
and 3412-occurrences in w, with equality exactly when w avoids ten blocking
patterns.  This package computes the statistics, realizes the per-level
assignment behind the equality as an explicit injection, and verifies every
claim exhaustively over small symmetric groups.
"""

from .perm_core import (
    CannotReduceError,
    MalformedPermutationError,
    Permutation,
    PrefixProfile,
    ProfileUndefinedError,
    identity,
    parse,
)
from .reduced_words import (
    MalformedWordError,
    OracleBoundExceededError,
    ReducedWord,
    all_reduced_words,
    canonical_word,
    check_support_well_defined,
    evaluate,
    format_word,
    parse_word,
)
from .patterns import (
    P_321,
    P_3412,
    PHI,
    Occurrence,
    Pattern,
    avoids_phi,
    contains,
    count_by_top,
    occurrences,
    patt_321_3412,
    pattern_of,
    phi_top_values,
)
from .bijection import (
    AssignedPattern,
    Assignment,
    BoundReport,
    GlobalBijectionReport,
    InvalidWitnessRequestError,
    LevelReport,
    NotApplicableError,
    RepeatSet,
    TheoremReport,
    UndefinedAssignmentError,
    XiEntry,
    assign_pattern,
    phi_witness,
    plus_minus,
    repeat_set,
    verify_bound,
    verify_global_bijection,
    verify_level,
    verify_main,
    xi,
)
from .enumerate import (
    AuditRecord,
    CampaignReport,
    RankRangeError,
    audit,
    count_avoiders,
    count_avoiders_naive,
    find_counterexample,
    iter_sn,
    rank,
    run_campaign,
    unrank,
    write_census_csv,
)

__version__ = "0.1.0"

__all__ = [
    "AssignedPattern",
    "Assignment",
    "AuditRecord",
    "BoundReport",
    "CampaignReport",
    "CannotReduceError",
    "GlobalBijectionReport",
    "InvalidWitnessRequestError",
    "LevelReport",
    "MalformedPermutationError",
    "MalformedWordError",
    "NotApplicableError",
    "Occurrence",
    "OracleBoundExceededError",
    "P_321",
    "P_3412",
    "PHI",
    "Pattern",
    "Permutation",
    "PrefixProfile",
    "ProfileUndefinedError",
    "RankRangeError",
    "ReducedWord",
    "RepeatSet",
    "TheoremReport",
    "UndefinedAssignmentError",
    "XiEntry",
    "all_reduced_words",
    "assign_pattern",
    "audit",
    "avoids_phi",
    "canonical_word",
    "check_support_well_defined",
    "contains",
    "count_avoiders",
    "count_avoiders_naive",
    "count_by_top",
    "evaluate",
    "find_counterexample",
    "format_word",
    "identity",
    "iter_sn",
    "occurrences",
    "parse",
    "parse_word",
    "patt_321_3412",
    "pattern_of",
    "phi_top_values",
    "phi_witness",
    "plus_minus",
    "rank",
    "repeat_set",
    "run_campaign",
    "unrank",
    "verify_bound",
    "verify_global_bijection",
    "verify_level",
    "verify_main",
    "write_census_csv",
    "xi",
]
