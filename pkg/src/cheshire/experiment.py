"""Scenario definition and the end-to-end interferometer pipeline.

A run prepares the standard input state (transverse-plus spin on path I,
transverse-minus spin on path II, equal weights), applies at most one
inserted element (absorber or magnetic rotation), applies the tunable
path phase, recombines the paths on a 50/50 splitter and reads out three
detectors:

* ``O_SELECTED``   - intensity in the transverse-minus spin component at O
  (this is the post-selected signal everything else is normalized to),
* ``O_UNSELECTED`` - total intensity at O, no spin analysis,
* ``H``            - total intensity at the complementary port.

Normalized intensities are squared amplitude norms; the empty-beamline
O_SELECTED intensity is exactly 1/4 and is mapped to a laboratory count
rate by ``scale_ref_cps`` (so the default 11.25 cps corresponds to the
published reference rate).

Grid sweeps evaluate an independent run per grid point; points carry no
shared state and may safely be computed concurrently as long as results
are kept in grid-index order.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Union

import numpy as np

from . import elements, qcore
from .elements import Truncation
from .qcore import JointOperator, JointState, Path

__all__ = [
    "I_REF_NORM",
    "DEFAULT_SCALE_REF_CPS",
    "Absorber",
    "Magnet",
    "Insertion",
    "Scenario",
    "Detector",
    "IntensityRecord",
    "initial_state",
    "postselection_state",
    "insertion_operator",
    "run",
    "closed_form_o",
    "sweep_chi",
    "sweep_alpha",
]

# Empty-beamline O_SELECTED intensity; all count-rate scaling is relative
# to this value.
I_REF_NORM = 0.25

DEFAULT_SCALE_REF_CPS = 11.25


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class Absorber:
    """Partial absorber of intensity transmissivity ``transmissivity`` on ``path``."""

    path: Path
    transmissivity: float

    def __post_init__(self) -> None:
        if not isinstance(self.path, Path):
            raise TypeError(f"path must be a Path, got {self.path!r}")
        t = _require_finite("transmissivity", self.transmissivity)
        if not 0.0 <= t <= 1.0:
            raise ValueError(f"transmissivity must lie in [0, 1], got {t}")
        object.__setattr__(self, "transmissivity", t)


@dataclass(frozen=True)
class Magnet:
    """Spin rotation by ``alpha_rad`` about z on ``path``, with a truncation policy."""

    path: Path
    alpha_rad: float
    truncation: Truncation = Truncation.EXACT

    def __post_init__(self) -> None:
        if not isinstance(self.path, Path):
            raise TypeError(f"path must be a Path, got {self.path!r}")
        if not isinstance(self.truncation, Truncation):
            raise TypeError(f"truncation must be a Truncation, got {self.truncation!r}")
        object.__setattr__(self, "alpha_rad", _require_finite("alpha_rad", self.alpha_rad))


Insertion = Union[Absorber, Magnet, None]


@dataclass(frozen=True)
class Scenario:
    """One interferometer configuration: at most one insertion plus a path phase."""

    insertion: Insertion = None
    chi_rad: float = 0.0

    def __post_init__(self) -> None:
        if self.insertion is not None and not isinstance(self.insertion, (Absorber, Magnet)):
            raise TypeError(f"insertion must be None, Absorber or Magnet, got {self.insertion!r}")
        object.__setattr__(self, "chi_rad", _require_finite("chi_rad", self.chi_rad))


class Detector(Enum):
    O_SELECTED = "O_selected"
    O_UNSELECTED = "O_unselected"
    H = "H"


@dataclass(frozen=True)
class IntensityRecord:
    """One detector reading for one scenario."""

    scenario: Scenario
    detector: Detector
    intensity_norm: float
    intensity_cps: float
    scale_ref_cps: float


def initial_state() -> JointState:
    """Equal superposition: transverse-plus spin on path I, minus on path II.

    The amplitudes are exact binary fractions, (1/2, 1/2, 1/2, -1/2) in the
    fixed joint basis, so downstream algebraic identities hold to machine
    precision.
    """
    return JointState(np.array([0.5, 0.5, 0.5, -0.5], dtype=complex))


def postselection_state() -> JointState:
    """Transverse-minus spin with equal weight on both paths: (1/2, -1/2, 1/2, -1/2)."""
    return JointState(np.array([0.5, -0.5, 0.5, -0.5], dtype=complex))


def insertion_operator(insertion: Insertion) -> JointOperator:
    """Joint operator realizing an insertion (identity when ``None``)."""
    if insertion is None:
        return qcore.identity()
    if isinstance(insertion, Absorber):
        return elements.absorber(insertion.path, insertion.transmissivity)
    if isinstance(insertion, Magnet):
        return elements.magnetic_rotation(insertion.path, insertion.alpha_rad, insertion.truncation)
    raise TypeError(f"unsupported insertion {insertion!r}")


def run(
    scenario: Scenario, scale_ref_cps: float = DEFAULT_SCALE_REF_CPS
) -> dict[Detector, IntensityRecord]:
    """Simulate one scenario and return one record per detector.

    ``intensity_cps = intensity_norm * scale_ref_cps / I_REF_NORM``, so the
    empty beamline reads exactly ``scale_ref_cps`` at O_SELECTED.
    """
    scale = _require_finite("scale_ref_cps", scale_ref_cps)
    if scale <= 0.0:
        raise ValueError(f"scale_ref_cps must be positive, got {scale}")

    state = initial_state()
    state = qcore.apply(insertion_operator(scenario.insertion), state)
    state = qcore.apply(elements.phase_shifter(scenario.chi_rad), state)
    amp_o, amp_h = elements.recombine(state)

    o_selected = abs(elements.spin_select_minus(amp_o)) ** 2
    o_unselected = float(np.vdot(amp_o, amp_o).real)
    h_total = float(np.vdot(amp_h, amp_h).real)

    readings = {
        Detector.O_SELECTED: o_selected,
        Detector.O_UNSELECTED: o_unselected,
        Detector.H: h_total,
    }
    return {
        det: IntensityRecord(
            scenario=scenario,
            detector=det,
            intensity_norm=value,
            intensity_cps=value * scale / I_REF_NORM,
            scale_ref_cps=scale,
        )
        for det, value in readings.items()
    }


def closed_form_o(scenario: Scenario) -> float:
    """Closed-form normalized O_SELECTED intensity for exact magnet scenarios.

    Supported configurations:

    * magnet on path II, any chi:  (1/4) cos^2(alpha/2)
    * magnet on path I, chi = 0:   (1/8) (3 - cos(alpha))

    Anything else (no magnet, truncated magnet, path I with chi != 0) has
    no closed form here and raises ValueError.  This function shares no
    code with :func:`run`; the two are independent routes to the same
    numbers and are cross-checked in the test suite.
    """
    ins = scenario.insertion
    if not isinstance(ins, Magnet):
        raise ValueError("closed form is only available for magnet insertions")
    if ins.truncation is not Truncation.EXACT:
        raise ValueError("closed form is only available for the exact rotation")
    if ins.path is Path.II:
        return I_REF_NORM * math.cos(ins.alpha_rad / 2.0) ** 2
    if scenario.chi_rad != 0.0:
        raise ValueError("closed form for a path I magnet requires chi = 0")
    return (3.0 - math.cos(ins.alpha_rad)) / 8.0


def sweep_chi(
    template: Scenario,
    chi_values: Iterable[float],
    scale_ref_cps: float = DEFAULT_SCALE_REF_CPS,
) -> list[IntensityRecord]:
    """Run the template at each phase value; three records per grid point."""
    records: list[IntensityRecord] = []
    for chi in chi_values:
        scenario = dataclasses.replace(template, chi_rad=float(chi))
        result = run(scenario, scale_ref_cps)
        records.extend(result[det] for det in Detector)
    return records


def sweep_alpha(
    template: Scenario,
    alpha_values: Iterable[float],
    scale_ref_cps: float = DEFAULT_SCALE_REF_CPS,
) -> list[IntensityRecord]:
    """Run the template at each rotation angle; requires a magnet insertion."""
    if not isinstance(template.insertion, Magnet):
        raise ValueError("sweep_alpha requires a scenario with a magnet insertion")
    records: list[IntensityRecord] = []
    for alpha in alpha_values:
        magnet = dataclasses.replace(template.insertion, alpha_rad=float(alpha))
        scenario = dataclasses.replace(template, insertion=magnet)
        result = run(scenario, scale_ref_cps)
        records.extend(result[det] for det in Detector)
    return records
