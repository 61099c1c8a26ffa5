"""Norms and measure constants for analytic functions on the disc.

Implements the weighted Besov norm, its Moebius-localized variant, the
box-supremum seminorm, Carleson constants of densities against the
normalized area measure by boxes and by kernel test, the two-parameter
kernel integral I_ct, the positive-kernel smoothing operator T, the
weighted sup norm, and the Green-energy norm.

Suprema over the disc are discretized by finite sample sets and are
therefore lower bounds; every report carries a refinement delta (value on
the full family versus the family with its deepest level removed) so that
divergence shows up as monotone growth rather than an asserted infinity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .discgeom import (
    Arc,
    CarlesonBox,
    DiscQuadrature,
    SupSampleSet,
    box_quadrature,
    disc_quadrature,
    dyadic_arcs,
    sup_samples,
)
from .errors import ConfigError, DomainError
from .series import TruncSeries, FracParams, frac_deriv_coeff
from .weights import WeightFun, parse_weight_spec

#: relative change between the two deepest grids below which a supremum is
#: considered converged ("finite-flagged")
FINITE_DELTA = 0.25


@dataclass(frozen=True)
class SpaceParams:
    """Parameters (p, s, sigma, K) of the localized Besov-type space.

    Out-of-range combinations are recorded in ``warnings`` rather than
    rejected; the evaluators stay well defined.
    """

    p: float
    s: float
    sigma: float
    W: WeightFun
    warnings: tuple = field(init=False, default=())

    def __post_init__(self):
        if self.p <= 1:
            raise DomainError(f"need p > 1, got {self.p}")
        if not 0 < self.s < 1:
            raise DomainError(f"need s in (0, 1), got {self.s}")
        if self.sigma <= 0:
            raise DomainError(f"need sigma > 0, got {self.sigma}")
        notes = []
        if not self.sigma < 2 * self.s:
            notes.append(f"sigma={self.sigma} not in (0, 2s)=(0, {2 * self.s})")
        if not self.p > max(1.0, 1.0 + self.sigma - self.s):
            notes.append(f"p={self.p} not above max(1, 1+sigma-s)={max(1.0, 1.0 + self.sigma - self.s)}")
        object.__setattr__(self, "warnings", tuple(notes))

    @property
    def in_range(self) -> bool:
        return not self.warnings


@dataclass(frozen=True, eq=False)
class Density:
    """Nonnegative integrand d(z) representing the measure d(z) dA."""

    descriptor: str
    evaluator: Callable[[np.ndarray], np.ndarray]

    def __call__(self, z):
        return self.evaluator(np.asarray(z, dtype=complex))


@dataclass(frozen=True, eq=False)
class CarlesonReport:
    """Per-arc box ratios of a measure against K(arc length)."""

    per_arc: tuple
    sup_value: float
    argmax: Arc
    refinement_delta: float

    @property
    def finite_flagged(self) -> bool:
        return self.refinement_delta < FINITE_DELTA


def parse_space_spec(spec: str) -> SpaceParams:
    """Parse ``p=2,s=0.5,sigma=0.4,K=power:q=0.3`` into SpaceParams.

    Commas inside the weight spec are tolerated: tokens that do not start
    with a known key are appended to the preceding K= value.
    """
    tokens = [t.strip() for t in spec.split(",") if t.strip()]
    known = ("p", "s", "sigma", "K")
    merged: list[str] = []
    for tok in tokens:
        key = tok.split("=", 1)[0].strip()
        if key in known:
            merged.append(tok)
        elif merged:
            merged[-1] += "," + tok
        else:
            raise ConfigError(f"unexpected token {tok!r} in space spec {spec!r}")
    vals: dict[str, str] = {}
    for tok in merged:
        key, eq, val = tok.partition("=")
        if not eq:
            raise ConfigError(f"malformed token {tok!r} in space spec {spec!r}")
        vals[key.strip()] = val.strip()
    missing = [k for k in known if k not in vals]
    if missing:
        raise ConfigError(f"space spec {spec!r} missing {', '.join(missing)}")
    try:
        return SpaceParams(p=float(vals["p"]), s=float(vals["s"]),
                           sigma=float(vals["sigma"]), W=parse_weight_spec(vals["K"]))
    except ValueError as exc:
        raise ConfigError(f"bad space spec {spec!r}: {exc}") from exc


# ---------------------------------------------------------------------------
# plain and localized Besov norms


def _seminorm_values(f: TruncSeries, sp: SpaceParams, Q: DiscQuadrature) -> np.ndarray:
    fp = f.derivative()
    return np.abs(fp.eval_unchecked(Q.nodes)) ** sp.p * Q.one_minus_abs_sq ** (sp.p - 2.0 + sp.s)


def besov_norm(f: TruncSeries, sp: SpaceParams, Q: DiscQuadrature) -> float:
    """(|f(0)|**p + int |f'|**p (1-|z|**2)**(p-2+s) dA)**(1/p)."""
    semi = float(np.dot(Q.weights, _seminorm_values(f, sp, Q)))
    return (abs(f.coeffs[0]) ** sp.p + semi) ** (1.0 / sp.p)


def morrey_terms(f: TruncSeries, sp: SpaceParams, S: SupSampleSet, Q: DiscQuadrature,
                 chunk: int = 8) -> np.ndarray:
    """Per-sample localized seminorm terms of the Moebius-localized norm.

    Term for the point a is (1-|a|**2)**s / K(1-|a|**2) times the plain
    seminorm of f o phi_a - f(a), computed without series composition via
    (f o phi_a)'(z) = f'(phi_a(z)) phi_a'(z).
    """
    fp = f.derivative()
    nodes, w = Q.nodes, Q.weights
    base = Q.one_minus_abs_sq ** (sp.p - 2.0 + sp.s)
    pts = S.points
    out = np.empty(pts.size)
    for i in range(0, pts.size, chunk):
        a = pts[i : i + chunk, None]
        denom = 1.0 - np.conj(a) * nodes[None, :]
        phi = (a - nodes[None, :]) / denom
        dphi_abs = (1.0 - np.abs(a) ** 2) / np.abs(denom) ** 2
        vals = np.abs(fp.eval_unchecked(phi)) ** sp.p * dphi_abs**sp.p * base[None, :]
        integ = vals @ w
        am2 = 1.0 - np.abs(pts[i : i + chunk]) ** 2
        out[i : i + chunk] = am2**sp.s / sp.W.k(am2) * integ
    return out


def sup_with_delta(values: np.ndarray, levels: np.ndarray) -> tuple[float, float]:
    """Supremum of sampled values plus its deepest-level refinement delta."""
    v_full = float(np.max(values)) if values.size else 0.0
    deep = int(np.max(levels)) if levels.size else 0
    shallow_mask = levels < deep
    v_shallow = float(np.max(values[shallow_mask])) if np.any(shallow_mask) else v_full
    delta = 0.0 if v_full <= 0 else (v_full - v_shallow) / v_full
    return v_full, delta


def besov_morrey_norm(f: TruncSeries, sp: SpaceParams, S: SupSampleSet,
                      Q: DiscQuadrature) -> float:
    """Moebius-localized Besov norm with the sup discretized over S."""
    terms = morrey_terms(f, sp, S, Q)
    return (abs(f.coeffs[0]) ** sp.p + float(np.max(terms))) ** (1.0 / sp.p)


# ---------------------------------------------------------------------------
# box (Carleson) machinery


def _arc_levels(arcs) -> np.ndarray:
    lens = np.array([a.len for a in arcs])
    return np.rint(-np.log2(lens)).astype(int)


def _box_ratios(dens_eval, W: WeightFun, arcs, depth: int, angular_factor: int) -> np.ndarray:
    ratios = np.empty(len(arcs))
    for i, arc in enumerate(arcs):
        rule = box_quadrature(CarlesonBox(arc), depth=depth, angular_factor=angular_factor)
        mass = float(np.dot(rule.weights, dens_eval(rule.nodes)))
        ratios[i] = mass / float(W.k(arc.len))
    return ratios


def _carleson_report(dens_eval, W, arcs, depth, angular_factor) -> CarlesonReport:
    ratios = _box_ratios(dens_eval, W, arcs, depth, angular_factor)
    sup, delta = sup_with_delta(ratios, _arc_levels(arcs))
    argmax = arcs[int(np.argmax(ratios))]
    return CarlesonReport(per_arc=tuple(zip(arcs, ratios)), sup_value=sup,
                          argmax=argmax, refinement_delta=delta)


def carleson_constant(d: Density, W: WeightFun, arcs, depth: int = 8,
                      angular_factor: int = 256) -> CarlesonReport:
    """Box ratios mu(S(I))/K(|I|) of the measure d dA over the arc family."""
    if not arcs:
        raise DomainError("carleson_constant needs a nonempty arc family")
    return _carleson_report(d, W, arcs, depth, angular_factor)


def box_seminorm(f: TruncSeries, sp: SpaceParams, arcs, depth: int = 8,
                 angular_factor: int = 256) -> CarlesonReport:
    """Box ratios of the derivative measure |f'|**p (1-|z|**2)**(p-2+s) dA."""
    if not arcs:
        raise DomainError("box_seminorm needs a nonempty arc family")
    fp = f.derivative()
    expo = sp.p - 2.0 + sp.s

    def dens(z):
        return np.abs(fp.eval_unchecked(z)) ** sp.p * (1.0 - np.abs(z) ** 2) ** expo

    return _carleson_report(dens, sp.W, arcs, depth, angular_factor)


def kernel_values(d, W: WeightFun, q_exp: float, S: SupSampleSet,
                  Q: DiscQuadrature) -> np.ndarray:
    """Per-sample kernel test values of the measure d dA.

    Value at a is (1/K(1-|a|**2)) int ((1-|a|**2)/|1-conj(a) z|)**q d(z) dA(z).
    """
    vals = np.asarray(d(Q.nodes), dtype=float) * Q.weights
    pts = S.points
    out = np.empty(pts.size)
    for i, a in enumerate(pts):
        am2 = 1.0 - abs(a) ** 2
        ker = (am2 / np.abs(1.0 - np.conj(a) * Q.nodes)) ** q_exp
        out[i] = float(np.dot(ker, vals)) / float(W.k(am2))
    return out


def kernel_carleson(d: Density, W: WeightFun, q_exp: float, S: SupSampleSet,
                    Q: DiscQuadrature) -> float:
    """Supremum of the kernel test over the sample set."""
    return float(np.max(kernel_values(d, W, q_exp, S, Q)))


def frac_measure_density(f: TruncSeries, fp: FracParams, sp: SpaceParams) -> Density:
    """Density |f_t(z)|**p (1-|z|**2)**(p t - 2 + s) of the order-t derivative."""
    g = frac_deriv_coeff(f, fp)
    expo = sp.p * fp.t - 2.0 + sp.s

    def dens(z):
        return np.abs(g.eval_unchecked(z)) ** sp.p * (1.0 - np.abs(z) ** 2) ** expo

    return Density(descriptor=f"frac-deriv measure t={fp.t} b={fp.b}", evaluator=dens)


# ---------------------------------------------------------------------------
# kernel integrals and pointwise sups


def I_ct(c: float, t_exp: float, z: complex, Q: DiscQuadrature) -> float:
    """int (1-|w|**2)**t / |1-z conj(w)|**(2+t+c) dA(w)."""
    if t_exp <= -1:
        raise DomainError(f"need t > -1, got {t_exp}")
    ker = np.abs(1.0 - complex(z) * np.conj(Q.nodes)) ** (-(2.0 + t_exp + c))
    return float(np.dot(Q.weights, Q.one_minus_abs_sq**t_exp * ker))


def T_operator_at(d_signed, alpha: float, b: float, z, Q: DiscQuadrature,
                  chunk: int = 4096):
    """Smoothing operator (T f)(z) = int (1-|w|**2)**(b-1) f(w) / |1-conj(w) z|**(a+b) dA.

    ``z`` may be a scalar or an array; evaluation is chunked over z.  Full
    admissibility of (alpha, b) depends on the ambient space parameters and
    is checked by the verification harness, not here.
    """
    if b <= 1:
        raise DomainError(f"kernel parameter must satisfy b > 1, got {b}")
    z = np.asarray(z, dtype=complex)
    zf = z.reshape(-1)
    fvals = np.asarray(d_signed(Q.nodes))
    base = Q.weights * Q.one_minus_abs_sq ** (b - 1.0) * fvals
    wbar = np.conj(Q.nodes)
    out = np.empty(zf.size, dtype=complex)
    for i in range(0, zf.size, chunk):
        ker = np.abs(1.0 - wbar[None, :] * zf[i : i + chunk, None]) ** (-(alpha + b))
        out[i : i + chunk] = ker.dot(base)
    if z.ndim == 0:
        return complex(out[0])
    return out.reshape(z.shape)


def hinf_alpha_norm(f: TruncSeries, alpha: float, Q: DiscQuadrature,
                    ladder: SupSampleSet | None = None) -> float:
    """sup |f(z)| (1-|z|**2)**alpha over the rule's nodes plus a boundary ladder."""
    if alpha <= 0:
        raise DomainError(f"need alpha > 0, got {alpha}")
    if ladder is None:
        ladder = sup_samples(12, 128)
    pts = np.concatenate([Q.nodes, ladder.points])
    vals = np.abs(f.eval_unchecked(pts)) * (1.0 - np.abs(pts) ** 2) ** alpha
    return float(np.max(vals))


def qk_values(f: TruncSeries, W: WeightFun, S: SupSampleSet, Q: DiscQuadrature) -> np.ndarray:
    """Per-sample Green-energy integrals int |f'|**2 K(g(z, a)) dA(z)."""
    fp2 = np.abs(f.derivative().eval_unchecked(Q.nodes)) ** 2 * Q.weights
    out = np.empty(S.points.size)
    for i, a in enumerate(S.points):
        gz = -np.log(np.abs((a - Q.nodes) / (1.0 - np.conj(a) * Q.nodes)))
        out[i] = float(np.dot(fp2, W.k(np.maximum(gz, 1e-300))))
    return out


def qk_norm(f: TruncSeries, W: WeightFun, Q: DiscQuadrature,
            S: SupSampleSet | None = None) -> float:
    """Green-energy norm (sup_a int |f'|**2 K(g(z, a)) dA)**(1/2) over the ladder."""
    if f.degree == 0:
        return 0.0
    if S is None:
        S = sup_samples(8, 16)
    return math.sqrt(float(np.max(qk_values(f, W, S, Q))))


def default_quadrature(J: int = 10, M: int = 512) -> DiscQuadrature:
    return disc_quadrature(J, M)


def default_arcs(max_level: int = 10, rotations: int = 8):
    return dyadic_arcs(max_level, rotations)
