"""Measurement-driven device profiles.

A profile is a regular gridN^3 lookup table from device RGB to Lab,
fitted from scattered measurements by inverse-distance-squared weighting
with finite support (Franke-Little form): weights ((R - d) / (R d))^2
where R is the distance to the k-th nearest measurement. A measurement
within 1e-6 of a grid node pins that node exactly. Forward evaluation
interpolates tetrahedrally inside the enclosing LUT cell.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .colorspace import LabColor, RGBColor, rgb_to_lab_array
from .errors import DomainError
from .formats import MeasurementSet

MIN_MEASUREMENTS = 8
EXACT_HIT_DISTANCE = 1e-6
IDW_SUPPORT_NEIGHBORS = 10


@dataclass
class DeviceProfile:
    """gridN^3 device RGB -> Lab lookup table.

    ``lut`` has shape (gridN, gridN, gridN, 3) indexed by the quantized
    red, green and blue device coordinates in that order.
    """

    grid_n: int
    lut: np.ndarray
    metadata: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.grid_n < 2:
            raise DomainError(f"grid_n {self.grid_n} < 2")
        self.lut = np.asarray(self.lut, dtype=float)
        expected = (self.grid_n, self.grid_n, self.grid_n, 3)
        if self.lut.shape != expected:
            raise DomainError(f"LUT shape {self.lut.shape} != {expected}")
        if not np.all(np.isfinite(self.lut)):
            raise DomainError("LUT contains non-finite values")
        if self.lut[..., 0].min() < 0.0 or self.lut[..., 0].max() > 100.0:
            raise DomainError("LUT L* values outside [0, 100]")


def characterize_device(ms: MeasurementSet, grid_n: int) -> DeviceProfile:
    """Fit a profile LUT to a measurement set."""
    if grid_n < 2:
        raise DomainError(f"grid_n {grid_n} < 2")
    if len(ms.entries) < MIN_MEASUREMENTS:
        raise DomainError(
            f"{len(ms.entries)} measurements, need at least {MIN_MEASUREMENTS}"
        )
    device = np.array([[d.r, d.g, d.b] for d, _ in ms.entries])
    lab = np.array([[m.l, m.a, m.b] for _, m in ms.entries])

    axis = np.linspace(0.0, 1.0, grid_n)
    rr, gg, bb = np.meshgrid(axis, axis, axis, indexing="ij")
    nodes = np.stack([rr, gg, bb], axis=-1).reshape(-1, 3)

    k = min(IDW_SUPPORT_NEIGHBORS, len(ms.entries))
    lut = np.empty((len(nodes), 3))
    # distances: (nodes, measurements)
    dist = np.sqrt(((nodes[:, None, :] - device[None, :, :]) ** 2).sum(axis=-1))
    for i in range(len(nodes)):
        d = dist[i]
        nearest = int(np.argmin(d))
        if d[nearest] <= EXACT_HIT_DISTANCE:
            lut[i] = lab[nearest]
            continue
        order = np.argsort(d, kind="stable")
        radius = d[order[k - 1]] * (1.0 + 1e-9)
        sel = d < radius
        w = ((radius - d[sel]) / (radius * d[sel])) ** 2
        lut[i] = (w[:, None] * lab[sel]).sum(axis=0) / w.sum()
    lut = lut.reshape(grid_n, grid_n, grid_n, 3)
    # convex weights keep a, b inside the measured range; clip only L
    lut[..., 0] = np.clip(lut[..., 0], 0.0, 100.0)
    return DeviceProfile(grid_n, lut, dict(ms.metadata))


def profile_eval(p: DeviceProfile, device: RGBColor) -> LabColor:
    """Evaluate the profile at one device coordinate."""
    out = profile_eval_array(p, np.array([[device.r, device.g, device.b]]))[0]
    return LabColor(float(out[0]), float(out[1]), float(out[2]))


def profile_eval_array(p: DeviceProfile, device: np.ndarray) -> np.ndarray:
    """Tetrahedral interpolation for device coordinates, shape (N, 3).

    Each LUT cell is split into six tetrahedra by the ordering of the
    fractional coordinates (the standard diagonal split), which makes
    the interpolant continuous across cell faces. Queries landing
    exactly on a grid node return that node's value bit for bit.
    """
    q = np.clip(np.asarray(device, dtype=float), 0.0, 1.0) * (p.grid_n - 1)
    base = np.minimum(q.astype(int), p.grid_n - 2)
    f = q - base
    nearest = np.rint(q).astype(int)
    on_node = np.all(q == nearest, axis=1)
    fr, fg, fb = f[:, 0], f[:, 1], f[:, 2]

    def corner(dr, dg, db):
        return p.lut[base[:, 0] + dr, base[:, 1] + dg, base[:, 2] + db]

    c000 = corner(0, 0, 0)
    c100 = corner(1, 0, 0)
    c010 = corner(0, 1, 0)
    c001 = corner(0, 0, 1)
    c110 = corner(1, 1, 0)
    c101 = corner(1, 0, 1)
    c011 = corner(0, 1, 1)
    c111 = corner(1, 1, 1)

    fr_, fg_, fb_ = fr[:, None], fg[:, None], fb[:, None]
    t1 = c000 + fr_ * (c100 - c000) + fg_ * (c110 - c100) + fb_ * (c111 - c110)  # r>=g>=b
    t2 = c000 + fr_ * (c100 - c000) + fb_ * (c101 - c100) + fg_ * (c111 - c101)  # r>=b>g
    t3 = c000 + fb_ * (c001 - c000) + fr_ * (c101 - c001) + fg_ * (c111 - c101)  # b>r>=g
    t4 = c000 + fg_ * (c010 - c000) + fb_ * (c011 - c010) + fr_ * (c111 - c011)  # g>=b>r
    t5 = c000 + fg_ * (c010 - c000) + fr_ * (c110 - c010) + fb_ * (c111 - c110)  # g>r>=b
    t6 = c000 + fb_ * (c001 - c000) + fg_ * (c011 - c001) + fr_ * (c111 - c011)  # b>g>r

    rg = fr >= fg
    gb = fg >= fb
    rb = fr >= fb
    cond = [
        (rg & gb)[:, None],
        (rg & ~gb & rb)[:, None],
        (rg & ~gb & ~rb)[:, None],
        (~rg & ~gb)[:, None],
        (~rg & gb & rb)[:, None],
    ]
    choice = [t1, t2, t3, t6, t5]
    out = np.select(cond, choice, default=t4)
    if np.any(on_node):
        idx = nearest[on_node]
        out[on_node] = p.lut[idx[:, 0], idx[:, 1], idx[:, 2]]
    return out


def profile_gamut_points(p: DeviceProfile, samples_per_axis: int) -> list[LabColor]:
    """Profile response over a regular device-space grid."""
    if samples_per_axis < 2:
        raise DomainError(f"samples_per_axis {samples_per_axis} < 2")
    axis = np.linspace(0.0, 1.0, samples_per_axis)
    rr, gg, bb = np.meshgrid(axis, axis, axis, indexing="ij")
    grid = np.stack([rr, gg, bb], axis=-1).reshape(-1, 3)
    out = profile_eval_array(p, grid)
    return [LabColor(float(l), float(a), float(b)) for l, a, b in out]


def identity_profile(grid_n: int) -> DeviceProfile:
    """Profile whose LUT stores the direct sRGB -> Lab conversion of its
    own node coordinates; useful as a reference device."""
    axis = np.linspace(0.0, 1.0, grid_n)
    rr, gg, bb = np.meshgrid(axis, axis, axis, indexing="ij")
    nodes = np.stack([rr, gg, bb], axis=-1)
    return DeviceProfile(grid_n, rgb_to_lab_array(nodes), {"SOURCE": "identity"})


def profile_to_dict(p: DeviceProfile) -> dict:
    """JSON-ready form (schema in docs/formats.md); LUT is row-major with
    the red index slowest."""
    return {
        "gridN": p.grid_n,
        "lut": [[float(v) for v in lab] for lab in p.lut.reshape(-1, 3)],
        "metadata": dict(p.metadata),
    }


def profile_from_dict(data: dict) -> DeviceProfile:
    try:
        grid_n = int(data["gridN"])
        lut = np.asarray(data["lut"], dtype=float).reshape(grid_n, grid_n, grid_n, 3)
        return DeviceProfile(grid_n, lut, dict(data.get("metadata", {})))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, DomainError):
            raise
        raise DomainError(f"malformed profile: {exc}")
