"""Weak values for the standard pre/post-selection and their estimators.

The weak value of an operator A between preparation ``psi_i`` and
post-selection ``psi_f`` is

    <A>_w = <psi_f| A |psi_i> / <psi_f|psi_i>,

a complex number in general.  For this interferometer the four canonical
operators are the path projectors Pi_I, Pi_II and the spin-conditioned
projectors sigma_z Pi_I, sigma_z Pi_II; with the standard states they come
out 0, 1, +1 and 0.  The +1 carries a representation-dependent sign (it
flips if the transverse spin states are defined with the opposite relative
phase); only its magnitude is physically fixed by the intensity data, and
callers that compare against measured rates should use ``abs()``.

To second order in the rotation angle the O_SELECTED intensity behind a
magnet on path j is

    I_j = I_ref * (1 - (alpha^2/4) <Pi_j>_w + (alpha^2/4) |<sigma_z Pi_j>_w|^2)

(``weakvalue_intensity``).  The estimators below invert that expansion,
and the first-order absorber response, to pull weak values back out of
intensities; they are deliberately simple inversions whose truncation
error is itself an object of study in :mod:`cheshire.analysis`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .experiment import initial_state, postselection_state
from .qcore import (
    ID2,
    SIGMA_Z,
    JointOperator,
    JointState,
    Path,
    inner,
    path_projector,
    tensor,
)

__all__ = [
    "DegeneratePostselectionError",
    "WeakValueSet",
    "WeakValueEstimate",
    "path_projector_operator",
    "spin_z_path_operator",
    "weak_value",
    "exact_weak_values",
    "weakvalue_intensity",
    "projective_spin_expectation",
    "estimate_sigma_pi",
    "estimate_pi_from_absorber",
]

# Below this post-selection overlap magnitude the weak value is treated as
# undefined rather than amplified into numerical noise.
DEGENERATE_OVERLAP = 1e-12


class DegeneratePostselectionError(ValueError):
    """Raised when |<psi_f|psi_i>| is too small for a weak value to mean anything."""


def path_projector_operator(path: Path) -> JointOperator:
    """Joint projector onto one path (identity on spin)."""
    return tensor(ID2, path_projector(path))


def spin_z_path_operator(path: Path) -> JointOperator:
    """sigma_z restricted to one path: tensor(sigma_z, |path><path|)."""
    return tensor(SIGMA_Z, path_projector(path))


def weak_value(op: JointOperator, psi_i: JointState, psi_f: JointState) -> complex:
    """<psi_f| op |psi_i> / <psi_f|psi_i>."""
    overlap = inner(psi_f, psi_i)
    if abs(overlap) < DEGENERATE_OVERLAP:
        raise DegeneratePostselectionError(
            f"post-selection overlap magnitude {abs(overlap):.3e} is below "
            f"{DEGENERATE_OVERLAP:.0e}; weak values are undefined"
        )
    return complex(np.vdot(psi_f.amp, op.matrix @ psi_i.amp)) / overlap


@dataclass(frozen=True)
class WeakValueSet:
    """The four canonical weak values for one pre/post-selection pair.

    The path projectors resolve the identity, so ``pi_i + pi_ii`` must equal
    one; the constructor enforces that as a consistency guard.
    """

    pi_i: complex
    pi_ii: complex
    sigma_pi_i: complex
    sigma_pi_ii: complex

    def __post_init__(self) -> None:
        total = self.pi_i + self.pi_ii
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"path projector weak values must sum to 1, got {total}")


def exact_weak_values(
    psi_i: JointState | None = None, psi_f: JointState | None = None
) -> WeakValueSet:
    """Weak values of the four canonical operators, default standard states."""
    if psi_i is None:
        psi_i = initial_state()
    if psi_f is None:
        psi_f = postselection_state()
    return WeakValueSet(
        pi_i=weak_value(path_projector_operator(Path.I), psi_i, psi_f),
        pi_ii=weak_value(path_projector_operator(Path.II), psi_i, psi_f),
        sigma_pi_i=weak_value(spin_z_path_operator(Path.I), psi_i, psi_f),
        sigma_pi_ii=weak_value(spin_z_path_operator(Path.II), psi_i, psi_f),
    )


def weakvalue_intensity(
    alpha_rad: float, path: Path, weak_values: WeakValueSet, i_ref_norm: float
) -> float:
    """Second-order weak-value prediction for the post-magnet O_SELECTED intensity.

    Only the real part of the path weak value enters the intensity; for the
    standard states it is exactly real anyway.
    """
    alpha = float(alpha_rad)
    if not math.isfinite(alpha):
        raise ValueError(f"alpha_rad must be finite, got {alpha!r}")
    if not (math.isfinite(i_ref_norm) and i_ref_norm > 0.0):
        raise ValueError(f"i_ref_norm must be positive, got {i_ref_norm!r}")
    if path is Path.I:
        pi_w, sigma_pi_w = weak_values.pi_i, weak_values.sigma_pi_i
    else:
        pi_w, sigma_pi_w = weak_values.pi_ii, weak_values.sigma_pi_ii
    quarter = alpha * alpha / 4.0
    return float(i_ref_norm * (1.0 - quarter * pi_w.real + quarter * abs(sigma_pi_w) ** 2))


def projective_spin_expectation(path: Path, psi: JointState | None = None) -> float:
    """Ordinary (projective) <sigma_z> of the spin component on one path.

    Both paths of the standard input state carry transverse spin, so the
    answer is 0 for either path, independent of any downstream settings.
    """
    if psi is None:
        psi = initial_state()
    spin = psi.path_amplitudes(path)
    weight = float(np.vdot(spin, spin).real)
    if weight == 0.0:
        raise ValueError(f"state has no amplitude on {path}; expectation undefined")
    return float(np.vdot(spin, SIGMA_Z @ spin).real / weight)


@dataclass(frozen=True)
class WeakValueEstimate:
    """An estimated weak-value magnitude with a propagated 1-sigma uncertainty."""

    value: float
    uncertainty: float
    source: str

    def __post_init__(self) -> None:
        if not math.isfinite(self.value):
            raise ValueError(f"estimate value must be finite, got {self.value!r}")
        if not (math.isfinite(self.uncertainty) and self.uncertainty >= 0.0):
            raise ValueError(f"uncertainty must be finite and >= 0, got {self.uncertainty!r}")


def estimate_sigma_pi(
    i_mag_norm: float,
    i_ref_norm: float,
    alpha_rad: float,
    pi_w: float,
    *,
    sigma_i_mag: float = 0.0,
    sigma_i_ref: float = 0.0,
    negative_tolerance: float = 1e-9,
) -> WeakValueEstimate:
    """Invert the second-order intensity expansion for |<sigma_z Pi_j>_w|.

    Solves the ``weakvalue_intensity`` bracket for the squared magnitude,

        |<sigma_z Pi_j>_w|^2 = (4/alpha^2) (I_mag/I_ref - 1) + pi_w,

    and returns its square root.  A squared magnitude below
    ``-negative_tolerance`` is reported as an error (inconsistent inputs);
    small negatives within the tolerance are clamped to zero.

    Uncertainties on the two intensities propagate first-order onto the
    squared magnitude; when the estimate is strictly positive that variance
    is mapped through the square root, and at zero (where the first-order
    map is singular) the square root of the squared-magnitude sigma is
    reported instead.
    """
    alpha = float(alpha_rad)
    if not (math.isfinite(alpha) and alpha != 0.0):
        raise ValueError(f"alpha_rad must be finite and nonzero, got {alpha_rad!r}")
    if not (math.isfinite(i_ref_norm) and i_ref_norm > 0.0):
        raise ValueError(f"i_ref_norm must be positive, got {i_ref_norm!r}")
    if not math.isfinite(i_mag_norm):
        raise ValueError(f"i_mag_norm must be finite, got {i_mag_norm!r}")

    inv = 4.0 / (alpha * alpha)
    squared = inv * (i_mag_norm / i_ref_norm - 1.0) + float(pi_w)
    if squared < -float(negative_tolerance):
        raise ValueError(
            f"squared-magnitude estimate {squared:.6e} is below -{negative_tolerance:.0e}; "
            "the supplied intensities are inconsistent with the model"
        )

    d_mag = inv / i_ref_norm
    d_ref = inv * i_mag_norm / (i_ref_norm * i_ref_norm)
    var_squared = (d_mag * float(sigma_i_mag)) ** 2 + (d_ref * float(sigma_i_ref)) ** 2

    value = math.sqrt(max(squared, 0.0))
    if value > 0.0:
        uncertainty = math.sqrt(var_squared) / (2.0 * value)
    else:
        uncertainty = math.sqrt(math.sqrt(var_squared)) if var_squared > 0.0 else 0.0
    return WeakValueEstimate(value=value, uncertainty=uncertainty, source="magnet-inversion")


def estimate_pi_from_absorber(
    i_abs_norm: float,
    i_ref_norm: float,
    transmissivity: float,
    *,
    sigma_i_abs: float = 0.0,
    sigma_i_ref: float = 0.0,
) -> WeakValueEstimate:
    """First-order path weak value from an absorber intensity ratio.

        <Pi_j>_w ~= (1 - I_abs/I_ref) / (2 (1 - sqrt(T)))

    Valid for 0 <= T < 1; at T = 1 the absorber leaves no signal to invert
    and the call is rejected.
    """
    t = float(transmissivity)
    if not (math.isfinite(t) and 0.0 <= t < 1.0):
        raise ValueError(f"transmissivity must lie in [0, 1), got {transmissivity!r}")
    if not (math.isfinite(i_ref_norm) and i_ref_norm > 0.0):
        raise ValueError(f"i_ref_norm must be positive, got {i_ref_norm!r}")
    if not math.isfinite(i_abs_norm):
        raise ValueError(f"i_abs_norm must be finite, got {i_abs_norm!r}")

    gain = 1.0 / (2.0 * (1.0 - math.sqrt(t)))
    value = (1.0 - i_abs_norm / i_ref_norm) * gain
    d_abs = gain / i_ref_norm
    d_ref = gain * i_abs_norm / (i_ref_norm * i_ref_norm)
    uncertainty = math.hypot(d_abs * float(sigma_i_abs), d_ref * float(sigma_i_ref))
    return WeakValueEstimate(value=value, uncertainty=uncertainty, source="absorber-inversion")
