"""primekin: partition primes by power-of-two gaps and audit the witnesses.

Consecutive primes at a power-of-two distance are sibling ("brother &
sister") primes; maximal chains of them form the B-runs.  Primes with no
such neighbor are the O-primes, and two O-primes a power of two apart are
cousins.  An O-prime with no cousin partner at all would be isolated, a
property no finite computation can confirm; the bounded scan here grades
such primes as candidates instead.
"""

from .arith import (
    DEFAULT_ROUNDS,
    DETERMINISTIC_LIMIT,
    Primality,
    PrimalityVerdict,
    is_power_of_two,
    is_prime,
    mod_pow,
    next_prime,
    power_of_two_exponent,
    prev_prime,
)
from .cache import CacheCorruption, decode_segment, encode_segment, load_segment, save_segment
from .census import (
    CensusReport,
    PsiMarker,
    TwinDensityRecord,
    psi_empirical,
    run_census,
    tally_isolated_candidates,
    twin_density_check,
)
from .classifier import (
    ClassifiedSegment,
    KinshipStatus,
    Run,
    RunKind,
    StatusKind,
    classify_range,
    cousin_run_report,
    is_relative,
    resolve_cousins,
    stitch,
)
from .config import ConfigError, RunConfig, load_config_file
from .search import (
    BMembership,
    Claim,
    Outcome,
    SearchReport,
    SearchStep,
    StepStatus,
    WitnessCertificate,
    b_membership,
    candidate_scan,
    default_budget,
    expected_hits,
    verify_certificate,
)
from .sieve import SegmentTooLarge, primes_in_range, primes_up_to
from .wieferich import WieferichRecord, is_wieferich, wieferich_scan

__version__ = "0.1.0"
