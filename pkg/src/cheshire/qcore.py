"""Complex linear algebra on the joint spin (2) x path (2) Hilbert space.

Every state and operator in this package lives in one fixed 4-dimensional
basis:

    index 0: (spin-z up,   path I)
    index 1: (spin-z down, path I)
    index 2: (spin-z up,   path II)
    index 3: (spin-z down, path II)

Path is the Kronecker-major factor and spin the minor one.  ``tensor`` is
the only place that ordering is spelled out, so every module that builds
joint operators through it agrees by construction.

All objects are immutable after construction and all operations are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "DIM",
    "Spin",
    "Path",
    "Z_UP",
    "Z_DOWN",
    "SX_PLUS",
    "SX_MINUS",
    "ID2",
    "SIGMA_Z",
    "JointState",
    "JointOperator",
    "basis_index",
    "path_projector",
    "spin_on_path",
    "tensor",
    "identity",
    "apply",
    "inner",
    "norm2",
    "dagger",
    "compose",
    "is_unitary",
]

DIM = 4


class Spin(Enum):
    """Spin-z basis label."""

    UP = 0
    DOWN = 1


class Path(Enum):
    """Interferometer arm label: I is the lower path, II the upper path."""

    I = 0
    II = 1


Z_UP = np.array([1.0, 0.0], dtype=complex)
Z_DOWN = np.array([0.0, 1.0], dtype=complex)

# Real transverse-spin states: |x+> = (|up> + |down>)/sqrt(2) and
# |x-> = (|up> - |down>)/sqrt(2).  With sigma_z = diag(1, -1) this fixes
# sigma_z |x+-> = |x-+> with a plus sign; any intensity is unaffected by
# that sign choice, but signed cross products (weak values of sigma_z
# conditioned on a path) inherit it.
SX_PLUS = np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0)
SX_MINUS = np.array([1.0, -1.0], dtype=complex) / np.sqrt(2.0)

ID2 = np.eye(2, dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def basis_index(spin: Spin, path: Path) -> int:
    """Index of the joint basis vector carrying the given spin and path."""
    return 2 * path.value + spin.value


def _as_finite_complex(values, shape, what: str) -> np.ndarray:
    arr = np.array(values, dtype=complex)
    if arr.shape != shape:
        raise ValueError(f"{what} must have shape {shape}, got {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError(f"{what} entries must be finite")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class JointState:
    """A vector of four complex amplitudes in the fixed joint basis.

    The squared norm is not constrained at construction time: absorbers
    attenuate below one, and truncated rotations are deliberately applied
    without renormalization and may push it slightly above one.
    """

    amp: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "amp", _as_finite_complex(self.amp, (DIM,), "state amplitudes"))

    def norm2(self) -> float:
        """Squared norm, i.e. the total detectable intensity."""
        return float(np.vdot(self.amp, self.amp).real)

    def amplitude(self, spin: Spin, path: Path) -> complex:
        return complex(self.amp[basis_index(spin, path)])

    def path_amplitudes(self, path: Path) -> np.ndarray:
        """The 2-component spin amplitude vector riding on one path."""
        lo = 2 * path.value
        return np.array(self.amp[lo : lo + 2], dtype=complex)


@dataclass(frozen=True, eq=False)
class JointOperator:
    """A 4x4 complex matrix acting on :class:`JointState`."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "matrix", _as_finite_complex(self.matrix, (DIM, DIM), "operator matrix")
        )

    def __matmul__(self, other: "JointOperator") -> "JointOperator":
        return JointOperator(self.matrix @ other.matrix)

    def __add__(self, other: "JointOperator") -> "JointOperator":
        return JointOperator(self.matrix + other.matrix)

    def __sub__(self, other: "JointOperator") -> "JointOperator":
        return JointOperator(self.matrix - other.matrix)

    def __mul__(self, scalar: complex) -> "JointOperator":
        return JointOperator(self.matrix * scalar)

    __rmul__ = __mul__

    def dagger(self) -> "JointOperator":
        return JointOperator(self.matrix.conj().T)

    def is_unitary(self, tol: float = 1e-12) -> bool:
        defect = self.matrix @ self.matrix.conj().T - np.eye(DIM)
        return bool(np.max(np.abs(defect)) <= tol)

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return bool(np.max(np.abs(self.matrix - self.matrix.conj().T)) <= tol)


def path_projector(path: Path) -> np.ndarray:
    """2x2 projector onto one interferometer path."""
    proj = np.zeros((2, 2), dtype=complex)
    proj[path.value, path.value] = 1.0
    return proj


def spin_on_path(spin_amplitudes, path: Path) -> JointState:
    """Joint state carrying the given 2-component spin vector on one path."""
    spin = _as_finite_complex(spin_amplitudes, (2,), "spin amplitudes")
    amp = np.zeros(DIM, dtype=complex)
    lo = 2 * path.value
    amp[lo : lo + 2] = spin
    return JointState(amp)


def tensor(spin_op, path_op) -> JointOperator:
    """Joint operator acting as ``spin_op`` on spin and ``path_op`` on path.

    The basis order documented in the module docstring puts path on the
    major (slow) index, so the underlying matrix is kron(path_op, spin_op).
    Passing the arguments to ``np.kron`` in written order would silently
    transpose the basis; this wrapper exists to make that impossible.
    """
    spin = _as_finite_complex(spin_op, (2, 2), "spin operator")
    path = _as_finite_complex(path_op, (2, 2), "path operator")
    return JointOperator(np.kron(path, spin))


def identity() -> JointOperator:
    return JointOperator(np.eye(DIM, dtype=complex))


def apply(op: JointOperator, state: JointState) -> JointState:
    """Apply an operator to a state, returning a new state."""
    return JointState(op.matrix @ state.amp)


def inner(bra: JointState, ket: JointState) -> complex:
    """Inner product <bra|ket>, conjugate-linear in the first argument."""
    return complex(np.vdot(bra.amp, ket.amp))


def norm2(state: JointState) -> float:
    return state.norm2()


def dagger(op: JointOperator) -> JointOperator:
    return op.dagger()


def compose(a: JointOperator, b: JointOperator) -> JointOperator:
    """Matrix product a @ b (apply ``b`` first, then ``a``)."""
    return a @ b


def is_unitary(op: JointOperator, tol: float = 1e-12) -> bool:
    return op.is_unitary(tol)
