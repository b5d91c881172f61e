"""Elementary local gates from which every circuit is assembled.

All gates are small dense orthogonal (or at least invertible) matrices:
2x2 plane rotations, the two-site swap, 2x2 symmetric shears and a
1-parameter family of reflection-symmetric 3x3 rotations.  Everything here
is a pure function of its arguments; returned arrays are freshly allocated
and marked read-only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateShear


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def rotation_gate(theta: float) -> np.ndarray:
    """2x2 rotation [[cos t, sin t], [-sin t, cos t]].

    Periodic in ``theta`` with period 2*pi; angles are used as given, no
    normalization is applied.
    """
    c, s = np.cos(theta), np.sin(theta)
    return _readonly(np.array([[c, s], [-s, c]]))


def swap_gate() -> np.ndarray:
    """Two-site swap [[0, 1], [1, 0]]."""
    return _readonly(np.array([[0.0, 1.0], [1.0, 0.0]]))


def shear_gate(mu: float) -> np.ndarray:
    """Symmetric invertible gate [[1, mu], [mu, 1]].

    Raises DegenerateShear when |mu| = 1 (determinant 1 - mu**2 vanishes).
    """
    if abs(abs(mu) - 1.0) == 0.0:
        raise DegenerateShear(f"shear parameter mu={mu} gives a singular gate")
    return _readonly(np.array([[1.0, mu], [mu, 1.0]]))


def symmetric_gate3(theta: float) -> np.ndarray:
    """3x3 orthogonal gate invariant under spatial reflection.

    Closed form of the exponential of the reflection-symmetric real
    skew generator; see ``tests/test_gates.py`` for the series oracle.
    """
    c, s = np.cos(theta), np.sin(theta)
    r2 = np.sqrt(2.0)
    return _readonly(
        np.array(
            [
                [(c + 1.0) / 2.0, r2 * s / 2.0, (c - 1.0) / 2.0],
                [-r2 * s / 2.0, c, -r2 * s / 2.0],
                [(c - 1.0) / 2.0, r2 * s / 2.0, (c + 1.0) / 2.0],
            ]
        )
    )


def reflect_matrix(a: np.ndarray) -> np.ndarray:
    """Spatial reflection: reverse the order of both rows and columns."""
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("reflect_matrix expects a square matrix")
    return _readonly(a[::-1, ::-1].copy())


@dataclass(frozen=True)
class Gate2:
    """A 2x2 gate: plane rotation, swap, or symmetric shear."""

    kind: str  # "rotation" | "swap" | "shear"
    param: float = 0.0

    def matrix(self) -> np.ndarray:
        if self.kind == "rotation":
            return rotation_gate(self.param)
        if self.kind == "swap":
            return swap_gate()
        if self.kind == "shear":
            return shear_gate(self.param)
        raise ValueError(f"unknown 2x2 gate kind {self.kind!r}")


@dataclass(frozen=True)
class Gate3:
    """The reflection-symmetric 3x3 rotation gate."""

    theta: float

    def matrix(self) -> np.ndarray:
        return symmetric_gate3(self.theta)
