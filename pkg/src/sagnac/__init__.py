"""Coherence model of a noninterfering Sagnac entangled-photon source."""
from .analyzers import (
    AnalyzerSettings,
    ProjectedField,
    project_idler,
    project_signal,
    singles_closed_form,
    singles_intensity,
    singles_mc,
)
from .bellstats import (
    CANONICAL_ANGLES,
    ChshAngles,
    ChshResult,
    DegenerateCorrelationError,
    bell_scan,
    chsh_s,
    correlation_e,
)
from .coincidence import (
    CLASSICAL,
    POST_SELECTED,
    CoincidenceMode,
    RatePoint,
    classical_rate_analytic,
    classical_rate_quadrature,
    coincidence_amplitude,
    coincidence_rate_analytic,
    coincidence_rate_mc,
    decoherence_scan,
)
from .ensemble import Accumulator, EmptyEnsembleError, RunSpec, run_ensemble
from .kernels import BACKEND
from .pairmodel import (
    BasisTag,
    OutputField,
    PairSample,
    SourceConfig,
    build_output_fields,
    delta_jk,
    load_config,
    sample_pair,
)

__version__ = "0.1.0"
