"""Geometry and quadrature on the unit disc.

Conventions: the area measure is normalized so the whole disc has measure
one (dA = 2r dr * dtheta/(2pi) in polar form).  Boundary arcs are given by
their center angle and normalized length, a Carleson box is the square over
an arc with radial depth equal to the arc length.  Quadrature rules are
dyadically graded toward the boundary so that integrands carrying powers
(1-|z|**2)**g with g > -1 are handled accurately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .errors import DomainError, SingularInputError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Arc:
    """Boundary arc with center angle ``theta0`` and normalized length ``len``."""

    theta0: float
    len: float

    def __post_init__(self):
        if not 0.0 < self.len <= 1.0:
            raise DomainError(f"arc length must lie in (0, 1], got {self.len}")
        object.__setattr__(self, "theta0", self.theta0 % TWO_PI)


@dataclass(frozen=True)
class CarlesonBox:
    """The box over ``arc``: radii in [1 - len, 1), angles within the arc."""

    arc: Arc

    @property
    def r_inner(self) -> float:
        return 1.0 - self.arc.len


@dataclass(frozen=True, eq=False)
class DiscQuadrature:
    """Nodes and positive weights for the normalized area measure.

    ``J`` is the radial grading depth, ``M`` the angular node count.  The
    weights of a full-disc rule sum to one; for a box rule they sum to the
    normalized area of the box.
    """

    nodes: np.ndarray
    weights: np.ndarray
    J: int
    M: int

    @cached_property
    def one_minus_abs_sq(self) -> np.ndarray:
        return 1.0 - np.abs(self.nodes) ** 2

    def integrate(self, values) -> complex:
        return np.dot(self.weights, values)


@dataclass(frozen=True, eq=False)
class SupSampleSet:
    """Finite sample of the disc used to discretize suprema over a in D.

    Points are the origin plus rings of radius 1 - 2**-j, j = 1..J_a, each
    carrying ``rotations`` equispaced angles.  ``rings[i]`` records the ring
    index j of point i (0 for the origin).
    """

    points: np.ndarray
    rings: np.ndarray
    J_a: int
    rotations: int


def mobius(a: complex, z):
    """The disc automorphism (a - z) / (1 - conj(a) z); exchanges 0 and a."""
    a = complex(a)
    if abs(a) >= 1.0:
        raise DomainError(f"mobius parameter must satisfy |a| < 1, got |a|={abs(a)}")
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) > 1.0 + 1e-14):
        raise DomainError("mobius argument must satisfy |z| <= 1")
    denom = 1.0 - np.conj(a) * z
    if np.any(np.abs(denom) < 1e-15):
        raise SingularInputError("mobius singular input: conj(a) * z == 1")
    out = (a - z) / denom
    return complex(out) if out.ndim == 0 else out


def green(a: complex, z):
    """Green's function log |(1 - conj(a) z)/(a - z)| = log(1/|mobius(a, z)|)."""
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z - complex(a)) < 1e-15):
        raise SingularInputError("green's function is singular at z == a")
    val = -np.log(np.abs(mobius(a, z)))
    return float(val) if val.ndim == 0 else val


@lru_cache(maxsize=8)
def _gauss_legendre(n: int):
    return np.polynomial.legendre.leggauss(n)


def _radial_panels(outer_gap: float, depth: int, n_gl: int = 16):
    """Graded panels covering [1 - outer_gap, 1), 16-pt GL each, weight 2r dr.

    Panels are [1 - g*2**-i, 1 - g*2**-(i+1)] for i < depth plus the closing
    panel [1 - g*2**-depth, 1).
    """
    gx, gw = _gauss_legendre(n_gl)
    gaps_hi = [outer_gap * 2.0**-i for i in range(depth + 1)]
    gaps_lo = [outer_gap * 2.0 ** -(i + 1) for i in range(depth)] + [0.0]
    rs, ws = [], []
    for ghi, glo in zip(gaps_hi, gaps_lo):
        a, b = 1.0 - ghi, 1.0 - glo
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        r = mid + half * gx
        rs.append(r)
        ws.append(gw * half * 2.0 * r)
    return np.concatenate(rs), np.concatenate(ws)


def disc_quadrature(J: int, M: int) -> DiscQuadrature:
    """Full-disc rule: dyadic radial grading, periodic trapezoid in angle.

    Radial panels are [1-2**-j, 1-2**-(j+1)] for j < J plus the closing
    panel [1-2**-J, 1), each with 16-point Gauss-Legendre against 2r dr;
    the angle carries M equispaced nodes of weight 1/M.
    """
    if J < 1 or M < 8:
        raise DomainError(f"need J >= 1 and M >= 8, got J={J}, M={M}")
    r, wr = _radial_panels(1.0, J)
    theta = TWO_PI * np.arange(M) / M
    nodes = (r[:, None] * np.exp(1j * theta)[None, :]).ravel()
    weights = np.repeat(wr / M, M)
    return DiscQuadrature(nodes=nodes, weights=weights, J=J, M=M)


def box_quadrature(box: CarlesonBox, depth: int = 8, n_theta: int | None = None,
                   angular_factor: int = 256) -> DiscQuadrature:
    """Rule supported on a Carleson box, graded radially toward the boundary.

    The angular rule is composite 16-point Gauss-Legendre on the arc; by
    default the node count scales with the arc length
    (about ``angular_factor * len``, at least 16).
    """
    ell = box.arc.len
    if n_theta is None:
        n_theta = max(16, 16 * math.ceil(angular_factor * ell / 16.0))
    n_theta = max(16, 16 * math.ceil(n_theta / 16.0))
    r, wr = _radial_panels(ell, depth)

    gx, gw = _gauss_legendre(16)
    lo = box.arc.theta0 - math.pi * ell
    width = TWO_PI * ell / (n_theta // 16)
    thetas, wths = [], []
    for i in range(n_theta // 16):
        c = lo + (i + 0.5) * width
        thetas.append(c + 0.5 * width * gx)
        wths.append(gw * 0.5 * width / TWO_PI)
    theta = np.concatenate(thetas)
    wth = np.concatenate(wths)

    nodes = (r[:, None] * np.exp(1j * theta)[None, :]).ravel()
    weights = (wr[:, None] * wth[None, :]).ravel()
    return DiscQuadrature(nodes=nodes, weights=weights, J=depth, M=n_theta)


def box_area(ell: float) -> float:
    """Normalized area of a Carleson box over an arc of length ell."""
    return ell * ell * (2.0 - ell)


def sup_samples(J_a: int, rotations: int) -> SupSampleSet:
    """Ladder of sample points: the origin plus rings at radii 1 - 2**-j.

    Rings j = 1..J_a each carry ``rotations`` equispaced points, so the set
    has 1 + J_a * rotations points in total.
    """
    if J_a < 1 or rotations < 1:
        raise DomainError(f"need J_a >= 1 and rotations >= 1, got {J_a}, {rotations}")
    pts = [np.zeros(1, dtype=complex)]
    rings = [np.zeros(1, dtype=int)]
    angles = np.exp(1j * TWO_PI * np.arange(rotations) / rotations)
    for j in range(1, J_a + 1):
        pts.append((1.0 - 2.0**-j) * angles)
        rings.append(np.full(rotations, j))
    return SupSampleSet(points=np.concatenate(pts), rings=np.concatenate(rings),
                        J_a=J_a, rotations=rotations)


def dyadic_arcs(max_level: int = 10, rotations: int = 8) -> list[Arc]:
    """Dyadic arc family: lengths 2**-j, j = 0..max_level.

    Level 0 is the full circle (one arc); each deeper level carries
    ``rotations`` rotated copies.
    """
    arcs = [Arc(0.0, 1.0)]
    for j in range(1, max_level + 1):
        ell = 2.0**-j
        arcs.extend(Arc(TWO_PI * k / rotations, ell) for k in range(rotations))
    return arcs
