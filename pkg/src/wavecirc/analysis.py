"""Quantitative diagnostics on coefficient sequences.

Moments, orthogonality and symmetry defects, refinement to the continuum
limit, and frequency response.  All functions are pure and operate on
``CoefficientSequence`` values (plain arrays are accepted where noted).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .circuits import (
    DILATION,
    CircuitSpec,
    CoefficientSequence,
    FilterBank,
    apply_schedule,
    build_layer_schedule,
    scaling_residues,
)
from .errors import LengthMismatch, NonContractiveWarning


def _taps(seq) -> np.ndarray:
    if isinstance(seq, CoefficientSequence):
        return seq.taps
    return np.asarray(seq, dtype=float)


def moment(seq, alpha: int) -> float:
    """Sum of r**alpha * taps[r] with r = 1..L over the trimmed support."""
    t = _taps(seq)
    r = np.arange(1, t.shape[0] + 1, dtype=float)
    return float((r**alpha * t).sum())


def high_freq_moment(seq, alpha: int) -> float:
    """Alternating-sign moment: sum of (-1)**r * r**alpha * taps[r]."""
    t = _taps(seq)
    r = np.arange(1, t.shape[0] + 1, dtype=float)
    return float(((-1.0) ** r * r**alpha * t).sum())


def vanishing_moment_residual(seq, alpha: int, high_freq: bool = False) -> float:
    """Scale-free certificate that the order-``alpha`` moment vanishes.

    Evaluates the moment against the monomial ((r - c)/w)**alpha centered
    on the support with half-width w, so the residual of a unit-norm
    sequence is O(1) when the moment does not vanish and near roundoff
    when it does, independent of support length.  Vanishing of all moments
    below a given order is invariant under this affine reindexing.
    """
    t = _taps(seq)
    n = t.shape[0]
    c = (n - 1) / 2.0
    w = max(c, 1.0)
    x = (np.arange(n) - c) / w
    if high_freq:
        t = t * (-1.0) ** np.arange(1, n + 1)
    return float(abs((x**alpha * t).sum()))


def shift_orthogonality_defect(seq, stride: int) -> float:
    """Deviation from orthonormality under shifts by multiples of stride."""
    if stride < 1:
        raise ValueError("stride must be >= 1")
    t = _taps(seq)
    defect = abs(float(t @ t) - 1.0)
    m = 1
    while stride * m < t.shape[0]:
        s = stride * m
        defect = max(defect, abs(float(t[:-s] @ t[s:])))
        m += 1
    return defect


def mirror_defect(h, g) -> float:
    """Deviation of (h, g) from the order-reversing alternating-sign pair.

    The overall sign of a wavelet sequence is conventional, so the defect
    is minimized over a global sign flip of g.
    """
    ht, gt = _taps(h), _taps(g)
    if ht.shape[0] != gt.shape[0]:
        raise LengthMismatch(
            f"sequences have lengths {ht.shape[0]} and {gt.shape[0]}"
        )
    signs = (-1.0) ** np.arange(ht.shape[0])  # (+1, -1, ...) for r = 1, 2, ...
    mirrored = signs * ht[::-1]
    return float(
        min(np.abs(gt - mirrored).max(), np.abs(gt + mirrored).max())
    )


def symmetry_defect(seq) -> float:
    """Largest violation of the sequence's declared symmetry class."""
    if not isinstance(seq, CoefficientSequence) or seq.symmetry == "none":
        raise ValueError("symmetry_defect requires a declared symmetry class")
    t = seq.taps
    if seq.symmetry == "site_symmetric" and t.shape[0] % 2 == 0:
        raise ValueError("site_symmetric sequences must have odd length")
    if seq.symmetry in ("edge_symmetric", "edge_antisymmetric") and t.shape[0] % 2 == 1:
        raise ValueError("edge-centered sequences must have even length")
    if seq.symmetry == "edge_antisymmetric":
        return float(np.abs(t + t[::-1]).max())
    return float(np.abs(t - t[::-1]).max())


@dataclass(frozen=True)
class MomentReport:
    """Plain and alternating-sign moments up to a maximum order."""

    alpha_max: int
    values: tuple[float, ...]
    high_freq_values: tuple[float, ...]

    def to_json_dict(self) -> dict:
        return {
            "alpha_max": self.alpha_max,
            "values": list(self.values),
            "high_freq_values": list(self.high_freq_values),
        }


def moment_report(seq, alpha_max: int) -> MomentReport:
    return MomentReport(
        alpha_max=alpha_max,
        values=tuple(moment(seq, a) for a in range(alpha_max + 1)),
        high_freq_values=tuple(high_freq_moment(seq, a) for a in range(alpha_max + 1)),
    )


@dataclass(frozen=True)
class SampledFunction:
    """Piecewise sampling of a scaling/wavelet function on a uniform grid."""

    dilation: int
    level: int
    samples: np.ndarray
    start_index: int  # first sample sits at start_index / dilation**level

    def __post_init__(self):
        s = np.array(self.samples, dtype=float)
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @property
    def grid_step(self) -> float:
        return 1.0 / self.dilation**self.level

    @property
    def support_start(self) -> Fraction:
        return Fraction(self.start_index, self.dilation**self.level)

    def grid(self) -> np.ndarray:
        return (self.start_index + np.arange(self.samples.shape[0])) * self.grid_step


def _refine_once(samples: np.ndarray, start: int, mask: np.ndarray, mask_start: int,
                 dilation: int, level: int) -> tuple[np.ndarray, int]:
    """One refinement pass: upsample the mask by dilation**level and convolve."""
    up = dilation**level
    out_len = samples.shape[0] + (mask.shape[0] - 1) * up
    out = np.zeros(out_len)
    for i, c in enumerate(mask):
        if c != 0.0:
            out[i * up : i * up + samples.shape[0]] += c * samples
    return out, start + mask_start * up


def _normalize_l2(samples: np.ndarray, grid_step: float) -> np.ndarray:
    nrm = np.sqrt(float(samples @ samples) * grid_step)
    return samples / nrm if nrm > 0 else samples


def _cascade_scalar(bank: FilterBank, scaling_role: str, target_role: str, levels: int,
                    dilation: int) -> SampledFunction:
    h = bank[scaling_role]
    t = bank[target_role]
    samples = t.taps.copy()
    start = t.offset
    for lvl in range(1, levels + 1):
        samples, start = _refine_once(samples, start, h.taps, h.offset, dilation, lvl)
        peak = np.abs(samples).max()
        if peak > 1e6:
            warnings.warn(
                f"refinement iteration diverging (max sample {peak:.3g})",
                NonContractiveWarning,
            )
        samples = _normalize_l2(samples, 1.0 / dilation**lvl)
    return SampledFunction(dilation=dilation, level=levels, samples=samples, start_index=start)


def _cascade_multiwavelet(bank: FilterBank, target_role: str, levels: int,
                          spec: CircuitSpec) -> SampledFunction:
    """Sample a two-scaling-channel function via the multi-scale circuit."""
    from .transform import multiscale_column

    support = 4 * spec.depth + 4
    coarse = 4 * ((support // 4) + 2)
    fine = coarse * 2**levels
    residue = dict(ROLE_RES_MULTI)[target_role]
    site = residue + 4 * (coarse // 8)
    col = multiscale_column(spec, fine, levels, site)
    nz = np.nonzero(np.abs(col) > 1e-300)[0]
    rolled = np.roll(col, fine // 2 - (nz[0] + nz[-1] + 1) // 2)
    nz = np.nonzero(np.abs(rolled) > 1e-300)[0]
    samples = rolled[nz[0] : nz[-1] + 1]
    samples = _normalize_l2(samples, 1.0 / 2**levels)
    return SampledFunction(dilation=2, level=levels, samples=samples, start_index=0)


ROLE_RES_MULTI = (("hT", 1), ("hB", 3), ("gL", 2), ("gR", 0))


def cascade(bank: FilterBank, scaling_roles, target_role: str, levels: int,
            spec: CircuitSpec | None = None) -> SampledFunction:
    """Iterate the refinement relation to sample a continuum-limit function.

    ``scaling_roles`` names the sequence(s) driving the refinement; the
    returned sampling is of ``target_role`` after ``levels`` passes, on a
    grid of step 1/m**levels, normalized to unit grid-weighted l2 norm.
    The two-scaling-channel family refines through the multi-scale circuit
    itself and requires ``spec``.
    """
    if levels < 1:
        raise ValueError("levels must be >= 1")
    roles = (scaling_roles,) if isinstance(scaling_roles, str) else tuple(scaling_roles)
    if bank.family == "modified_ternary":
        if spec is None:
            raise ValueError("multiwavelet cascade requires the circuit spec")
        if set(roles) != {"hT", "hB"}:
            raise ValueError("multiwavelet refinement needs both scaling roles")
        return _cascade_multiwavelet(bank, target_role, levels, spec)
    if len(roles) != 1:
        raise ValueError("single-channel refinement takes exactly one scaling role")
    return _cascade_scalar(bank, roles[0], target_role, levels, DILATION[bank.family])


def frequency_response(seq, n_points: int) -> np.ndarray:
    """|H(w)| = |sum_r taps[r] exp(-i w r)| on a uniform grid over [0, pi].

    Returns an (n_points, 2) array of (w, |H(w)|) rows.
    """
    if n_points < 2:
        raise ValueError("n_points must be >= 2")
    t = _taps(seq)
    omega = np.linspace(0.0, np.pi, n_points)
    r = np.arange(1, t.shape[0] + 1)
    mag = np.abs(np.exp(-1j * np.outer(omega, r)) @ t)
    return np.column_stack([omega, mag])
