"""Circuit families: assembly, application, and filter-bank extraction.

A circuit is an ordered list of sublayers; each sublayer is a direct sum of
identical local gates placed periodically on the lattice.  Sublayers are
stored in application order for column vectors: ``schedule.sublayers[0]``
is the first matrix multiplied into the input.  Transforming unit vectors
on the distinct residue classes of the lattice yields the coefficient
sequences of the corresponding filter bank.

Site indexing is 0-based internally.  The residue-class conventions below
were fixed so that every documented symmetry class of every family holds
exactly; see the per-family builders.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field

import numpy as np

from . import gates
from .errors import SizeMismatch, WrongFamily
from .serialize import dumps_canonical

FAMILIES = ("binary", "ternary", "modified_ternary", "quaternary", "binary_invertible")

# Lattice period of the residue classes (= dilation factor except for the
# modified ternary family, which is a two-scaling-channel dilation-2 scheme
# on a period-4 lattice).
STRIDE = {
    "binary": 2,
    "ternary": 3,
    "modified_ternary": 4,
    "quaternary": 4,
    "binary_invertible": 2,
}

DILATION = {
    "binary": 2,
    "ternary": 3,
    "modified_ternary": 2,
    "quaternary": 4,
    "binary_invertible": 2,
}

# Ordered output roles and the 0-based lattice residue each one is read from.
ROLE_RESIDUES = {
    "binary": (("h", 0), ("g", 1)),
    "ternary": (("s+", 1), ("b+", 2), ("b-", 0)),
    "modified_ternary": (("hT", 1), ("hB", 3), ("gL", 2), ("gR", 0)),
    "quaternary": (("h+", 0), ("h-", 1), ("g+", 2), ("g-", 3)),
    "binary_invertible": (("h_d", 0), ("g_d", 1), ("h_r", 0), ("g_r", 1)),
}

ROLE_SYMMETRY = {
    "binary": {"h": "none", "g": "none"},
    "ternary": {"s+": "site_symmetric", "b+": "edge_symmetric", "b-": "edge_antisymmetric"},
    "modified_ternary": {
        "hT": "site_symmetric",
        "hB": "site_symmetric",
        "gL": "none",
        "gR": "none",
    },
    "quaternary": {
        "h+": "edge_symmetric",
        "h-": "edge_antisymmetric",
        "g+": "edge_symmetric",
        "g-": "edge_antisymmetric",
    },
    "binary_invertible": {
        "h_d": "edge_symmetric",
        "g_d": "edge_antisymmetric",
        "h_r": "edge_symmetric",
        "g_r": "edge_antisymmetric",
    },
}

# Roles whose sign is normalized to a positive sum on extraction.
SIGN_NORMALIZED_ROLES = {
    "binary": {"h"},
    "ternary": {"s+", "b+"},
    "modified_ternary": {"hT", "hB"},
    "quaternary": {"h+"},
    "binary_invertible": {"h_d", "h_r"},
}

# Residue classes forwarded to the next scale of a multi-scale transform.
def scaling_residues(family: str, centering: str | None = None) -> tuple[int, ...]:
    if family == "binary" or family == "binary_invertible":
        return (0,)
    if family == "ternary":
        return (1,) if centering == "site" else (2,)
    if family == "modified_ternary":
        return (1, 3)
    if family == "quaternary":
        return (0,)
    raise WrongFamily(f"unknown family {family!r}")


def nominal_lengths(family: str, depth: int) -> dict[str, int]:
    """Support lengths of the extracted sequences at generic parameters."""
    n = depth
    if family == "binary":
        return {"h": 2 * n, "g": 2 * n}
    if family == "ternary":
        return {"s+": 6 * n - 3, "b+": 6 * n, "b-": 6 * n}
    if family == "modified_ternary":
        return {"hT": 4 * n - 1, "hB": 4 * n - 5, "gL": 4 * n - 1, "gR": 4 * n - 1}
    if family == "quaternary":
        return {r: 4 * n + 2 for r in ("h+", "h-", "g+", "g-")}
    if family == "binary_invertible":
        return {r: 2 * n + 2 for r in ("h_d", "g_d", "h_r", "g_r")}
    raise WrongFamily(f"unknown family {family!r}")


@dataclass(frozen=True)
class CircuitSpec:
    """Complete description of one circuit: family, depth and parameters.

    ``params`` are rotation angles (radians) for the unitary families and
    shear parameters for ``binary_invertible``.  ``centering`` selects which
    ternary channel acts as the scaling sequence in multi-scale transforms.
    ``boundary`` optionally holds per-scale (phi, sigma) gate angles for
    open-boundary binary transforms.
    """

    family: str
    depth: int
    params: tuple[float, ...]
    centering: str | None = None
    boundary: tuple[tuple[float, float], ...] | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise WrongFamily(f"unknown family {self.family!r}")
        if self.depth < 1:
            raise ValueError("depth must be a positive integer")
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if len(self.params) != self.depth:
            raise ValueError("params length must equal depth")
        if self.family == "ternary":
            if self.centering not in ("site", "edge"):
                raise ValueError("ternary circuits require centering 'site' or 'edge'")
        elif self.centering is not None:
            raise ValueError("centering is only meaningful for ternary circuits")
        if self.family == "binary_invertible":
            for mu in self.params:
                if abs(abs(mu) - 1.0) == 0.0:
                    from .errors import DegenerateShear

                    raise DegenerateShear(f"|mu| = 1 in params: {mu}")
        if self.boundary is not None:
            if self.family != "binary":
                raise ValueError("boundary angles are only supported for binary circuits")
            object.__setattr__(
                self,
                "boundary",
                tuple((float(p), float(s)) for p, s in self.boundary),
            )

    @property
    def stride(self) -> int:
        return STRIDE[self.family]

    @property
    def dilation(self) -> int:
        return DILATION[self.family]

    def to_json_dict(self) -> dict:
        d = {"family": self.family, "depth": self.depth, "params": list(self.params)}
        if self.centering is not None:
            d["centering"] = self.centering
        if self.boundary is not None:
            d["boundary"] = {
                "phi": [p for p, _ in self.boundary],
                "sigma": [s for _, s in self.boundary],
            }
        return d

    @classmethod
    def from_json_dict(cls, d: dict) -> "CircuitSpec":
        boundary = None
        if "boundary" in d and d["boundary"] is not None:
            phi = d["boundary"]["phi"]
            sigma = d["boundary"]["sigma"]
            if len(phi) != len(sigma):
                raise ValueError("boundary phi and sigma lists must have equal length")
            boundary = tuple(zip(phi, sigma))
        return cls(
            family=d["family"],
            depth=int(d["depth"]),
            params=tuple(d["params"]),
            centering=d.get("centering"),
            boundary=boundary,
        )

    def digest(self) -> str:
        """Stable identifier binding transform outputs to this spec."""
        payload = dumps_canonical(self.to_json_dict())
        return hashlib.sha256(payload.encode("ascii")).hexdigest()[:16]


@dataclass(frozen=True)
class GateGroup:
    """Identical local gates placed at several (periodic) start sites."""

    kind: str  # "rotation" | "swap" | "gate3" | "shear"
    param: float
    starts: tuple[int, ...]
    width: int

    def matrix(self) -> np.ndarray:
        if self.kind == "rotation":
            return gates.rotation_gate(self.param)
        if self.kind == "swap":
            return gates.swap_gate()
        if self.kind == "shear":
            return gates.shear_gate(self.param)
        if self.kind == "gate3":
            return gates.symmetric_gate3(self.param)
        raise ValueError(f"unknown gate kind {self.kind!r}")

    def sites(self, lattice_size: int) -> np.ndarray:
        s = np.asarray(self.starts, dtype=int)[:, None]
        return (s + np.arange(self.width)[None, :]) % lattice_size


@dataclass(frozen=True)
class Sublayer:
    label: str
    groups: tuple[GateGroup, ...]


@dataclass(frozen=True)
class Schedule:
    """Sublayers in application order (first entry hits the vector first)."""

    lattice_size: int
    sublayers: tuple[Sublayer, ...]
    scale: float = 1.0  # overall scalar factor (used by dual invertible circuits)


def _starts(lattice_size: int, offset: int, period: int) -> tuple[int, ...]:
    return tuple(range(offset % period, lattice_size, period))


def _check_size(lattice_size: int, stride: int):
    if lattice_size < stride or lattice_size % stride != 0:
        raise SizeMismatch(
            f"lattice size {lattice_size} is not a positive multiple of stride {stride}"
        )


def _binary_sublayers(params, lattice_size, kind="rotation", pm_layer=False):
    """Staggered layers of 2-site gates; layer k starts on parity k mod 2."""
    subs = []
    if pm_layer:
        subs.append(
            Sublayer(
                "pm",
                (GateGroup("rotation", math.pi / 4.0, _starts(lattice_size, 1, 2), 2),),
            )
        )
    for k, p in enumerate(params, start=1):
        subs.append(
            Sublayer(
                f"{kind}{k}",
                (GateGroup(kind, p, _starts(lattice_size, k % 2, 2), 2),),
            )
        )
    return subs


def _ternary_sublayers(params, lattice_size):
    """Symmetric 3-site gates interleaved with swap layers under a +/- top.

    Layout (0-based): 3-site blocks start on residue 0; swap pairs and the
    top +/- pairs sit on (2, 0) with the identity slot over each block
    center (residue 1).  The +/- gate is the reflected quarter rotation so
    that residue 2 seeds the symmetric channel and residue 0 the
    antisymmetric one.
    """
    subs = [
        Sublayer(
            "pm",
            (GateGroup("rotation", -math.pi / 4.0, _starts(lattice_size, 2, 3), 2),),
        ),
        Sublayer("v1", (GateGroup("gate3", params[0], _starts(lattice_size, 0, 3), 3),)),
    ]
    for k in range(2, len(params) + 1):
        subs.append(
            Sublayer("swap", (GateGroup("swap", 0.0, _starts(lattice_size, 2, 3), 2),))
        )
        subs.append(
            Sublayer(
                f"v{k}", (GateGroup("gate3", params[k - 1], _starts(lattice_size, 0, 3), 3),)
            )
        )
    return subs


def _modified_ternary_sublayers(params, lattice_size):
    """Period-4 layers of 3-site gates, consecutive layers offset by 2."""
    subs = []
    for k, theta in enumerate(params, start=1):
        offset = 0 if k % 2 == 1 else 2
        subs.append(
            Sublayer(
                f"v{k}", (GateGroup("gate3", theta, _starts(lattice_size, offset, 4), 3),)
            )
        )
    return subs


def _quaternary_sublayers(params, lattice_size):
    """Sign-alternating rotation pairs with a swap layer below each.

    Layout (0-based): top +/- pairs on even starts (reflected quarter
    rotation, so residues 0 and 2 seed the symmetric channels); rotation
    layer k has u(+theta_k) on starts == 3 + 2(k-1) (mod 4) and
    u(-theta_k) on the other odd residue, followed by a swap layer on even
    starts.  This is the unique layout (up to lattice translation) whose
    four channels carry the documented symmetry classes and generic
    support span 4N + 2.
    """
    subs = [
        Sublayer(
            "pm",
            (GateGroup("rotation", -math.pi / 4.0, _starts(lattice_size, 0, 2), 2),),
        )
    ]
    for k, theta in enumerate(params, start=1):
        pos = (3 + 2 * (k - 1)) % 4
        neg = (pos + 2) % 4
        subs.append(
            Sublayer(
                f"rot{k}",
                (
                    GateGroup("rotation", theta, _starts(lattice_size, pos, 4), 2),
                    GateGroup("rotation", -theta, _starts(lattice_size, neg, 4), 2),
                ),
            )
        )
        subs.append(
            Sublayer("swap", (GateGroup("swap", 0.0, _starts(lattice_size, 0, 2), 2),))
        )
    return subs


def _invertible_sublayers(params, lattice_size):
    """Shear layers over a +/- top layer, successive layers offset by one."""
    subs = [
        Sublayer(
            "pm",
            (GateGroup("rotation", math.pi / 4.0, _starts(lattice_size, 1, 2), 2),),
        )
    ]
    for k, mu in enumerate(params, start=1):
        subs.append(
            Sublayer(
                f"shear{k}",
                (GateGroup("shear", mu, _starts(lattice_size, (k + 1) % 2, 2), 2),),
            )
        )
    return subs


def build_layer_schedule(spec: CircuitSpec, lattice_size: int) -> Schedule:
    """Gate placements for one circuit on a periodic lattice.

    Sublayers come in application order for column vectors.  The lattice
    size must be a positive multiple of the family stride; to read off an
    unwrapped filter support it must also be at least the sequence length
    (``extract_filter_bank`` sizes its own lattice accordingly).
    """
    _check_size(lattice_size, spec.stride)
    if spec.family == "binary":
        subs = _binary_sublayers(spec.params, lattice_size)
    elif spec.family == "ternary":
        subs = _ternary_sublayers(spec.params, lattice_size)
    elif spec.family == "modified_ternary":
        subs = _modified_ternary_sublayers(spec.params, lattice_size)
    elif spec.family == "quaternary":
        subs = _quaternary_sublayers(spec.params, lattice_size)
    elif spec.family == "binary_invertible":
        subs = _invertible_sublayers(spec.params, lattice_size)
    else:  # pragma: no cover - guarded by CircuitSpec
        raise WrongFamily(spec.family)
    return Schedule(lattice_size, tuple(subs))


def apply_schedule(schedule: Schedule, v: np.ndarray) -> np.ndarray:
    """Multiply the circuit into a column vector (synthesis direction)."""
    v = np.asarray(v, dtype=float)
    if v.shape != (schedule.lattice_size,):
        raise SizeMismatch(
            f"vector length {v.shape} does not match lattice size {schedule.lattice_size}"
        )
    out = v.copy()
    for sub in schedule.sublayers:
        for grp in sub.groups:
            sites = grp.sites(schedule.lattice_size)
            out[sites] = out[sites] @ grp.matrix().T
    if schedule.scale != 1.0:
        out *= schedule.scale
    return out


def apply_schedule_transpose(schedule: Schedule, v: np.ndarray) -> np.ndarray:
    """Multiply the transposed circuit into a vector (analysis direction)."""
    v = np.asarray(v, dtype=float)
    if v.shape != (schedule.lattice_size,):
        raise SizeMismatch(
            f"vector length {v.shape} does not match lattice size {schedule.lattice_size}"
        )
    out = v.copy()
    for sub in reversed(schedule.sublayers):
        for grp in sub.groups:
            sites = grp.sites(schedule.lattice_size)
            out[sites] = out[sites] @ grp.matrix()
    if schedule.scale != 1.0:
        out *= schedule.scale
    return out


def dense_matrix(schedule: Schedule) -> np.ndarray:
    """Assemble the full circuit matrix by brute-force direct sums."""
    n = schedule.lattice_size
    total = np.eye(n)
    for sub in schedule.sublayers:
        layer = np.eye(n)
        for grp in sub.groups:
            m = grp.matrix()
            for sts in grp.sites(n):
                layer[np.ix_(sts, sts)] = m
        total = layer @ total
    return schedule.scale * total


def apply_circuit_periodic(spec: CircuitSpec, v: np.ndarray) -> np.ndarray:
    """Apply the circuit to a vector with periodic wrap-around."""
    v = np.asarray(v, dtype=float)
    return apply_schedule(build_layer_schedule(spec, v.shape[0]), v)


@dataclass(frozen=True)
class CoefficientSequence:
    """Finite real filter taps with support offset and symmetry class."""

    taps: np.ndarray
    offset: int = 0
    symmetry: str = "none"

    def __post_init__(self):
        t = np.array(self.taps, dtype=float)
        t.setflags(write=False)
        object.__setattr__(self, "taps", t)
        if self.symmetry not in ("none", "site_symmetric", "edge_symmetric", "edge_antisymmetric"):
            raise ValueError(f"unknown symmetry class {self.symmetry!r}")

    def __len__(self) -> int:
        return self.taps.shape[0]

    def to_json_dict(self) -> dict:
        return {
            "taps": list(map(float, self.taps)),
            "offset": self.offset,
            "symmetry": self.symmetry,
        }


@dataclass(frozen=True)
class FilterBank:
    """Named coefficient sequences extracted from one circuit."""

    family: str
    sequences: dict[str, CoefficientSequence] = field(default_factory=dict)

    def __getitem__(self, role: str) -> CoefficientSequence:
        return self.sequences[role]

    @property
    def roles(self) -> tuple[str, ...]:
        return tuple(self.sequences)

    def to_json_dict(self) -> dict:
        return {
            "family": self.family,
            "sequences": {r: s.to_json_dict() for r, s in self.sequences.items()},
        }


def _trim_support(col: np.ndarray, center: int) -> np.ndarray:
    """Cyclic support of a column, rolled contiguous and trimmed of zeros."""
    n = col.shape[0]
    rolled = np.roll(col, n // 2 - center)
    nz = np.nonzero(rolled)[0]
    if nz.size == 0:
        return rolled[:1]
    return rolled[nz[0] : nz[-1] + 1]


def extraction_lattice_size(spec: CircuitSpec) -> int:
    longest = max(nominal_lengths(spec.family, spec.depth).values())
    return spec.stride * (longest // spec.stride + 4)


def extract_filter_bank(spec: CircuitSpec, normalized: bool = True) -> FilterBank:
    """Read the filter bank off the circuit by transforming unit vectors.

    Each role's sequence is the nonzero support of the circuit column at
    that role's lattice residue, translated to offset 0.  With
    ``normalized=True`` sequences are scaled to unit l2 norm and
    scaling-type roles get a positive sum; ``normalized=False`` returns the
    raw columns.
    """
    size = extraction_lattice_size(spec)
    schedule = build_layer_schedule(spec, size)
    dual_sched = None
    if spec.family == "binary_invertible":
        dual_sched = build_layer_schedule(dual_circuit(spec), size)
        dual_sched = Schedule(size, dual_sched.sublayers, scale=dual_scale_factor(spec))
    sequences = {}
    for role, residue in ROLE_RESIDUES[spec.family]:
        site = residue + spec.stride * (size // (2 * spec.stride))
        unit = np.zeros(size)
        unit[site] = 1.0
        sched = dual_sched if role in ("h_r", "g_r") else schedule
        col = apply_schedule(sched, unit)
        taps = _trim_support(col, site)
        if normalized:
            nrm = float(np.linalg.norm(taps))
            if nrm > 0:
                taps = taps / nrm
            if role in SIGN_NORMALIZED_ROLES[spec.family] and taps.sum() < 0:
                taps = -taps
        sequences[role] = CoefficientSequence(
            taps=taps, offset=0, symmetry=ROLE_SYMMETRY[spec.family][role]
        )
    return FilterBank(family=spec.family, sequences=sequences)


def dual_circuit(spec: CircuitSpec) -> CircuitSpec:
    """Inverse-transpose of an invertible circuit: negate every shear.

    The returned spec omits the per-layer scale factors 1/(1 - mu_k^2);
    they are recovered exactly by ``dual_scale_factor`` (identical for the
    original and the dual since 1 - mu^2 is even in mu), so reconstruction
    with the dual is exact.
    """
    if spec.family != "binary_invertible":
        raise WrongFamily("dual_circuit is defined for binary_invertible circuits only")
    return CircuitSpec(
        family=spec.family,
        depth=spec.depth,
        params=tuple(-m for m in spec.params),
    )


def dual_layer_scales(spec: CircuitSpec) -> tuple[float, ...]:
    """Per-layer scalars 1/(1 - mu_k^2) of the inverse-transpose circuit."""
    if spec.family != "binary_invertible":
        raise WrongFamily("dual scales are defined for binary_invertible circuits only")
    return tuple(1.0 / (1.0 - mu * mu) for mu in spec.params)


def dual_scale_factor(spec: CircuitSpec) -> float:
    """Product of the per-layer dual scale factors."""
    return float(np.prod(dual_layer_scales(spec)))
