"""Which-way double-slit toolkit.

Simulates the recoiling-slit experiment: entangled particle-detector states
propagated to the screen, interference patterns by two independent routes,
path distinguishability vs fringe visibility, the quantum eraser, and the
uncertainty-relation bookkeeping that closes the duality bound.
"""
from ._backend import backend_name
from .analysis import (
    BohrReport,
    DualityReport,
    bohr_analysis,
    distinguishability,
    duality_report,
    eraser_branch_visibilities,
    extrema_positions,
    fringe_spacing,
    local_visibility,
    numeric_visibility,
    oscillatory_residual,
    visibility_bound,
)
from .errors import NumericFailure, ValidationError
from .packets import (
    Geometry,
    PropagationContext,
    effective_tau,
    evolved_amplitude,
    initial_amplitude,
    spread_sigma,
)
from .pattern import (
    EraserResult,
    JointState,
    PatternSamples,
    ScreenGrid,
    closed_form_parts,
    conditional_patterns,
    default_grid,
    fringe_width,
    intensity_closed_form,
    intensity_direct,
    pattern_on_grid,
)
from .qubit import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    DetectorPair,
    DetectorState,
    DichotomicObservable,
    MeasurementBasis,
    WHICH_WAY_OBSERVABLE,
    bloch_sphere_lattice,
    inner_product,
    make_detector_pair,
    mub_basis,
    rotated_basis,
    state_from_bloch,
    sum_uncertainty,
    variance,
)

__version__ = "0.1.0"

__all__ = [
    "BohrReport",
    "DetectorPair",
    "DetectorState",
    "DichotomicObservable",
    "DualityReport",
    "EraserResult",
    "Geometry",
    "JointState",
    "MeasurementBasis",
    "NumericFailure",
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
    "PatternSamples",
    "PropagationContext",
    "ScreenGrid",
    "ValidationError",
    "WHICH_WAY_OBSERVABLE",
    "backend_name",
    "bloch_sphere_lattice",
    "bohr_analysis",
    "closed_form_parts",
    "conditional_patterns",
    "default_grid",
    "distinguishability",
    "duality_report",
    "effective_tau",
    "eraser_branch_visibilities",
    "evolved_amplitude",
    "extrema_positions",
    "fringe_spacing",
    "fringe_width",
    "initial_amplitude",
    "inner_product",
    "intensity_closed_form",
    "intensity_direct",
    "local_visibility",
    "make_detector_pair",
    "mub_basis",
    "numeric_visibility",
    "oscillatory_residual",
    "pattern_on_grid",
    "rotated_basis",
    "spread_sigma",
    "state_from_bloch",
    "sum_uncertainty",
    "variance",
    "visibility_bound",
]
