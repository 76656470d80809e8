"""Sturmian quasicrystal Schrodinger operators.

Continued-fraction rotation numbers, Sturmian word combinatorics, transfer
matrix trace maps, band spectra of periodic approximants, and wavepacket
spreading diagnostics for the discrete operator
u(n+1) + u(n-1) + lam * v(n) u(n) with v the coding of an irrational
rotation by [1 - alpha, 1).
"""

__version__ = "0.1.0"

from .errors import (
    AmbiguousContainmentError,
    BandCountError,
    ClassificationError,
    DepthExhaustedError,
    LeakageError,
    PartitionError,
    SamplingError,
    SturmdynError,
    UndecidableBoundaryError,
    WindowTooShortError,
)
from .rotations import (
    ConvergentTable,
    GrowthCertificate,
    RotationNumber,
    convergents,
    growth_certificate,
    real_value,
)
from .words import (
    KPartition,
    PartitionBlock,
    Phase,
    PotentialWindow,
    exceptional_word,
    factors,
    find_occurrences,
    is_conjugate,
    k_partition,
    palindrome_prefix_check,
    phase_words,
    right_special,
    sample_potential,
    standard_word,
    word_length,
)
from .transfer import (
    LengthScale,
    NormAccumulant,
    TraceValue,
    TransferState,
    canonical_Mk,
    key_estimate_check,
    length_scale,
    log_norm_series,
    norm_accumulant,
    step_matrix,
    trace_fn,
    trace_phase,
    transfer,
)
from .spectra import (
    Band,
    BandSet,
    BoundMatrix,
    CountMatrix,
    DerivativeBoundReport,
    band_set,
    band_set_csv,
    band_set_json,
    bound_matrix,
    count_matrix,
    derivative_bound_check,
    generating_bands,
    generating_hierarchy,
    per_band_product_bound,
    sigma_approx,
    xi,
)
from .dynamics import (
    DynamicsResult,
    LatticeHamiltonian,
    TransportRow,
    WavePacket,
    abelian_average,
    build_hamiltonian,
    evolve,
    spreading_exponent,
    taylor_evolution,
    transport_diagnostics,
    verify_dynbound,
    window_norm,
)

__all__ = [name for name in dir() if not name.startswith("_")]
