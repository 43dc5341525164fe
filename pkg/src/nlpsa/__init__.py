"""Phase-shifting algorithms for nonuniform phase steps, designed from their
frequency transfer function."""

__version__ = "0.1.0"

from .analysis import (  # noqa: E402
    RejectionReport,
    SpectrumSamples,
    evaluate_ftf,
    harmonic_rejection_report,
    linear_lspsa,
    sample_spectrum,
    snr_gain,
)
from .demod import DemodResult, PhaseErrorStats, demodulate, mc_snr_gain, phase_error  # noqa: E402
from .design import (  # noqa: E402
    CoefficientSet,
    DesignSpec,
    PhaseSteps,
    default_zero_set,
    design,
    solve_coefficients,
    uniform_steps,
)
from .pca import PcaResult, pca_demodulate  # noqa: E402
from .sim import (  # noqa: E402
    FringeProfile,
    FringeStack,
    PhaseMap,
    add_awgn,
    simulate_stack,
    synth_phase_map,
)
