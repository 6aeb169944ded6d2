"""Weak values, quasi-probabilities, coherence witnesses, and contextuality checks."""

from .core import (
    DEFAULT_TOL,
    ComputationError,
    DegenerateError,
    DensityOperator,
    DimensionMismatchError,
    ImaginaryOverlapError,
    NotHermitianError,
    NotNormalizedError,
    NotPSDError,
    NotQubitError,
    Observable,
    OrthogonalSelectionError,
    StateVector,
    Tolerances,
    TraceNotOneError,
    ValidationError,
    ZeroPostselectionError,
    antipodal,
    coherence_l1,
    commutator_norm,
    dephase,
    eigensystem,
    pure_to_density,
    real_part_state,
    state_vector,
    validate_density,
)
from .invariants import (
    FrameGraph,
    Invariant,
    bargmann,
    bargmann_invariant,
    build_frame_graph,
    frame_graph_from_matrices,
    overlap,
)
from .quasiprob import (
    ANOMALOUS_IMAGINARY,
    ANOMALOUS_REAL,
    DEFAULT_SELECTION_THRESHOLD,
    NORMAL,
    QuasiProbDist,
    WeakValueResult,
    anomalous_indices,
    classify,
    is_marginal,
    quasi_prob,
    weak_value,
    weak_value_hermitian,
    weak_value_pure,
)
from .witness import (
    CONSISTENT,
    DEFAULT_COHERENCE_TOL,
    NotIncoherentError,
    VIOLATED,
    WitnessReport,
    check_theorem_coherence,
    corollary_projector_weak_value,
    incoherent_quasi_prob,
)
from .contextuality import (
    CycleInequality,
    Fragment,
    NotRealAmplitudeError,
    all_three_cycles,
    anomaly_implies_violation,
    build_fragment,
    fragment_frame_graph,
    max_violation,
    qubit_fragment_graph,
)
from .pointer import (
    ExtrapolationResult,
    PointerConfig,
    PointerOutcome,
    extrapolate,
    simulate,
)
from .explore import (
    DIAGONAL,
    HAAR_PURE,
    MIXED_FIXED_RANK,
    MIXED_FULL_RANK,
    REAL_MIXED,
    REAL_PURE,
    SAMPLER_KINDS,
    SamplerSpec,
    ScanSummary,
    SearchResult,
    sample,
    scan_anomaly_rate,
    search_max_negativity,
)

__version__ = "0.1.0"
