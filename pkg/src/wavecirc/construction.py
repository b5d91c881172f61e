"""Recover circuit angles from an orthogonal dyadic scaling sequence.

This is the inverse of filter extraction for the binary family: a length-2N
scaling sequence satisfying the even-shift orthogonality constraints is
reduced layer by layer, each step zeroing the outermost pair of
coefficients with one rotation angle, until a single unit entry remains.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analysis import shift_orthogonality_defect
from .circuits import CoefficientSequence
from .errors import NotOrthogonal, ResidualTooLarge

DEFAULT_TOL = 1e-9


def _taps(seq) -> np.ndarray:
    if isinstance(seq, CoefficientSequence):
        return np.asarray(seq.taps, dtype=float)
    return np.asarray(seq, dtype=float)


@dataclass(frozen=True)
class PeelResult:
    """One layer removed: the rotation angle and the shortened sequence."""

    theta: float
    reduced: CoefficientSequence
    case: str  # "i" | "ii" | "iii"
    edge_residual: float  # magnitude of the trimmed (nominally zero) entries


def _apply_layer_rows(t: np.ndarray, theta: float) -> np.ndarray:
    """Row-side action of one gate layer on consecutive coefficient pairs."""
    c, s = math.cos(theta), math.sin(theta)
    out = np.empty_like(t)
    a, b = t[0::2], t[1::2]
    out[0::2] = a * c - b * s
    out[1::2] = a * s + b * c
    return out


def peel_layer(h, tol: float = DEFAULT_TOL) -> PeelResult:
    """Choose the angle that zeroes the outer coefficients and trim them.

    The input must be an even-length (>= 4), unit-norm sequence whose
    even-shift orthogonality defect is at most ``tol``.
    """
    t = _taps(h)
    n = t.shape[0]
    if n < 4 or n % 2 != 0:
        raise ValueError("peel_layer needs an even length of at least 4")
    defect = shift_orthogonality_defect(t, 2)
    if defect > tol:
        raise NotOrthogonal(
            f"shift-orthogonality defect {defect:.3g} exceeds tolerance {tol:.3g}"
        )
    if abs(t[1]) > tol:
        case, theta = "i", math.atan(t[0] / t[1])
    elif abs(t[-2]) > tol:
        case, theta = "ii", math.atan(-t[-1] / t[-2])
    else:
        case, theta = "iii", math.pi / 2.0
    transformed = _apply_layer_rows(t, theta)
    edge = max(abs(transformed[0]), abs(transformed[-1]))
    reduced = CoefficientSequence(taps=transformed[1:-1], offset=0, symmetry="none")
    return PeelResult(theta=theta, reduced=reduced, case=case, edge_residual=edge)


def angles_from_scaling(h, tol: float = DEFAULT_TOL) -> tuple[float, ...]:
    """Angles of the depth-N circuit encoding a 2N-tap scaling sequence.

    The input is normalized to unit norm and positive sum; peels are taken
    on the principal arctangent branch and the last angle is fixed so the
    terminal vector is +1 on its single nonzero entry.  Raises
    ``NotOrthogonal`` for inputs violating the shift constraints and
    ``ResidualTooLarge`` when the reduction does not terminate on a unit
    coordinate vector within ``tol``.
    """
    t = _taps(h)
    n = t.shape[0]
    if n < 2 or n % 2 != 0:
        raise ValueError("scaling sequences have even length >= 2")
    nrm = float(np.linalg.norm(t))
    if nrm == 0.0:
        raise NotOrthogonal("zero sequence")
    t = t / nrm
    if t.sum() < 0:
        t = -t
    defect = shift_orthogonality_defect(t, 2)
    if defect > tol:
        raise NotOrthogonal(
            f"shift-orthogonality defect {defect:.3g} exceeds tolerance {tol:.3g}"
        )
    angles_rev: list[float] = []
    edge_worst = 0.0
    while t.shape[0] > 2:
        res = peel_layer(t, tol)
        angles_rev.append(res.theta)
        edge_worst = max(edge_worst, res.edge_residual)
        t = res.reduced.taps
    theta1 = math.atan2(t[0], t[1])
    terminal = math.hypot(t[0], t[1])
    if abs(terminal - 1.0) > tol or edge_worst > tol:
        raise ResidualTooLarge(
            f"terminal magnitude {terminal:.12g}, worst trimmed entry {edge_worst:.3g} "
            f"(tolerance {tol:.3g}); input is not a valid orthogonal scaling sequence"
        )
    return tuple([theta1] + angles_rev[::-1])
