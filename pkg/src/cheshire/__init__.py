"""Exact simulator of a two-path spin interferometer.

The package models a polarized beam split over two paths with transverse
spin marking (plus on path I, minus on path II), optional per-path
absorbers or small spin rotations, a tunable relative phase, and
post-selected detection.  On top of the exact 4-dimensional matrix
pipeline it provides weak values with intensity-based estimators and an
analyzer that pins down which Taylor order of the rotation operator a
given intensity effect lives at.
"""

from .analysis import (
    CheshireDeficits,
    ComparisonRow,
    CountSample,
    TruncationReport,
    cheshire_witness,
    duration_for_rate_sigma,
    fit_loglog_slope,
    poisson_counts,
    reproduce_benchmark_table,
    truncation_scan,
)
from .elements import (
    Truncation,
    absorber,
    magnetic_rotation,
    phase_shifter,
    recombine,
    spin_rotation_matrix,
    spin_select_minus,
)
from .experiment import (
    DEFAULT_SCALE_REF_CPS,
    I_REF_NORM,
    Absorber,
    Detector,
    IntensityRecord,
    Magnet,
    Scenario,
    closed_form_o,
    initial_state,
    postselection_state,
    run,
    sweep_alpha,
    sweep_chi,
)
from .qcore import (
    JointOperator,
    JointState,
    Path,
    Spin,
    apply,
    compose,
    dagger,
    identity,
    inner,
    is_unitary,
    norm2,
    spin_on_path,
    tensor,
)
from .weak import (
    DegeneratePostselectionError,
    WeakValueEstimate,
    WeakValueSet,
    estimate_pi_from_absorber,
    estimate_sigma_pi,
    exact_weak_values,
    path_projector_operator,
    projective_spin_expectation,
    spin_z_path_operator,
    weak_value,
    weakvalue_intensity,
)

__version__ = "0.1.0"
