"""Truncated Taylor series on the unit disc and their calculus.

The carrier type is :class:`TruncSeries`, an immutable coefficient vector
a_0..a_N.  Besides evaluation and the integer calculus it implements the
order-t derivative in two forms that agree on polynomials: a coefficient
transform built from log-Gamma ratios, and a kernel integral against a
graded disc quadrature.  All Gamma and Beta ratios go through log-Gamma
differences so indices up to 10**4 stay in range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .discgeom import DiscQuadrature
from .errors import ConfigError, DomainError

DEFAULT_DEGREE = 256


def _horner(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    acc = np.full_like(z, coeffs[-1], dtype=complex)
    for c in coeffs[-2::-1]:
        acc *= z
        acc += c
    return acc


@dataclass(frozen=True, eq=False)
class TruncSeries:
    """Immutable truncated Taylor coefficients a_0..a_N of an analytic function."""

    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))
        if arr.ndim != 1 or arr.size == 0:
            raise DomainError("coefficients must form a nonempty 1-d sequence")
        if not np.all(np.isfinite(arr)):
            raise DomainError("coefficients must be finite")
        object.__setattr__(self, "coeffs", arr)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __call__(self, z):
        return self.eval(z)

    def eval(self, z):
        """Horner evaluation at points with |z| < 1."""
        z = np.asarray(z, dtype=complex)
        if np.any(np.abs(z) >= 1.0):
            raise DomainError("evaluation point must satisfy |z| < 1")
        out = _horner(self.coeffs, z)
        return complex(out) if out.ndim == 0 else out

    def eval_unchecked(self, z):
        """Horner evaluation without the open-disc check (internal grids)."""
        return _horner(self.coeffs, np.asarray(z, dtype=complex))

    def derivative(self, order: int = 1) -> "TruncSeries":
        """Exact integer-order derivative."""
        if order < 0:
            raise DomainError("derivative order must be nonnegative")
        c = self.coeffs
        for _ in range(order):
            if c.size == 1:
                c = np.zeros(1, dtype=complex)
                break
            c = c[1:] * np.arange(1, c.size)
        return TruncSeries(c)

    def antiderivative(self) -> "TruncSeries":
        """Term-by-term primitive vanishing at the origin."""
        c = np.concatenate([[0.0], self.coeffs / np.arange(1, self.coeffs.size + 1)])
        return TruncSeries(c)

    def dilate(self, r: float) -> "TruncSeries":
        """Coefficients of z -> f(r z) for 0 < r <= 1."""
        if not 0.0 < r <= 1.0:
            raise DomainError(f"dilation radius must lie in (0, 1], got {r}")
        return TruncSeries(self.coeffs * r ** np.arange(self.coeffs.size))

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        n = max(self.coeffs.size, other.coeffs.size)
        out = np.zeros(n, dtype=complex)
        out[: self.coeffs.size] += self.coeffs
        out[: other.coeffs.size] += other.coeffs
        return TruncSeries(out)

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        return self + (-1.0) * other

    def __rmul__(self, scalar) -> "TruncSeries":
        return TruncSeries(self.coeffs * scalar)

    def __mul__(self, other):
        if isinstance(other, TruncSeries):
            return TruncSeries(np.convolve(self.coeffs, other.coeffs))
        return TruncSeries(self.coeffs * other)

    def padded(self, size: int) -> np.ndarray:
        out = np.zeros(size, dtype=complex)
        out[: min(size, self.coeffs.size)] = self.coeffs[:size]
        return out


@dataclass(frozen=True)
class FracParams:
    """Order and kernel parameter of the fractional derivative.

    ``m`` is the ceiling of t - 1, so integer t degenerates to the ordinary
    derivative of that order.
    """

    t: float
    b: float

    def __post_init__(self):
        if self.t <= 0:
            raise DomainError(f"order must be positive, got {self.t}")
        if self.b <= 1:
            raise DomainError(f"kernel parameter must satisfy b > 1, got {self.b}")
        if self.b + self.t <= 0:
            raise DomainError("need b + t > 0")

    @property
    def m(self) -> int:
        return max(0, math.ceil(self.t - 1.0))


@dataclass(frozen=True)
class GapSpec:
    """Lacunary series data: term k has amplitude 2**(-k*beta) at index ratio**k."""

    beta: float
    ratio: int
    k_max: int

    def __post_init__(self):
        if self.ratio < 2:
            raise DomainError(f"gap ratio must be >= 2, got {self.ratio}")
        if self.k_max < 0:
            raise DomainError("k_max must be nonnegative")

    @property
    def indices(self) -> np.ndarray:
        return self.ratio ** np.arange(self.k_max + 1)

    @property
    def amplitudes(self) -> np.ndarray:
        return 2.0 ** (-self.beta * np.arange(self.k_max + 1))


def _gamma_ratio(num_args, den_args):
    """exp(sum lgamma(num) - sum lgamma(den)), elementwise over arrays."""
    acc = sum(gammaln(a) for a in num_args) - sum(gammaln(a) for a in den_args)
    return np.exp(acc)


def frac_deriv_coeff(f: TruncSeries, fp: FracParams) -> TruncSeries:
    """Coefficient form of the order-t derivative.

    Output coefficient j equals a_{j+m+1} times the Gamma ratio
    G(j+b+t) G(j+m+2) / (G(j+1) G(j+m+1+b)); the result has degree
    N - m - 1 and is the zero series when N <= m.
    """
    m, b, t = fp.m, fp.b, fp.t
    n_out = f.coeffs.size - m - 1
    if n_out <= 0:
        return TruncSeries(np.zeros(1, dtype=complex))
    j = np.arange(n_out, dtype=float)
    ratio = _gamma_ratio((j + b + t, j + m + 2), (j + 1, j + m + 1 + b))
    return TruncSeries(f.coeffs[m + 1 :] * ratio)


def frac_deriv_integral_at(f: TruncSeries, fp: FracParams, z, Q: DiscQuadrature):
    """Kernel-integral form of the order-t derivative at a point.

    Quadrature approximation of
    (G(b+t)/G(b)) * int (1-|w|**2)**(b-1) conj(w)**m f'(w) / (1-conj(w) z)**(b+t) dA(w)
    with the complex power on the principal branch.
    """
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) >= 1.0):
        raise DomainError("evaluation point must satisfy |z| < 1")
    m, b, t = fp.m, fp.b, fp.t
    w = Q.nodes
    wbar = np.conj(w)
    base = Q.weights * Q.one_minus_abs_sq ** (b - 1.0) * wbar**m * f.derivative().eval_unchecked(w)
    factor = float(_gamma_ratio((b + t,), (b,)))
    kernel = (1.0 - wbar[None, :] * z.reshape(-1, 1)) ** (-(b + t))
    out = factor * kernel.dot(base)
    return complex(out[0]) if z.ndim == 0 else out.reshape(z.shape)


def beta_ratio(j, b: float, m: int):
    """B(j+b+1, m) / B(j+1, m) with the Gamma(m) factors cancelled.

    Defined for m = 0 as the limit value 1.
    """
    j = np.asarray(j, dtype=float)
    return _gamma_ratio((j + b + 1, j + 1 + m), (j + b + 1 + m, j + 1))


def decomposition(f: TruncSeries, fp: FracParams):
    """Split f' = g + s_m + h' used to reconstruct f' from the order-t derivative.

    g carries the Beta-ratio-weighted shifted coefficients, s_m the low-order
    polynomial part, and h the complementary weights; the identity holds
    exactly on coefficients by construction.
    """
    m, b = fp.m, fp.b
    a = f.coeffs
    n_shift = a.size - m - 1
    if n_shift <= 0:
        g = TruncSeries(np.zeros(1, dtype=complex))
        h = TruncSeries(np.zeros(1, dtype=complex))
    else:
        j = np.arange(n_shift, dtype=float)
        ratio = beta_ratio(j, b, m)
        lead = (j + m + 1) * a[m + 1 :]
        g_coeffs = np.zeros(m + n_shift, dtype=complex)
        g_coeffs[m:] = ratio * lead
        g = TruncSeries(g_coeffs)
        h_coeffs = np.zeros(m + n_shift + 1, dtype=complex)
        h_coeffs[m + 1 :] = (1.0 - ratio) * a[m + 1 :]
        h = TruncSeries(h_coeffs)
    if m >= 1 and a.size > 1:
        top = min(m, a.size - 1)
        s_coeffs = a[1 : top + 1] * np.arange(1, top + 1)
    else:
        s_coeffs = np.zeros(1, dtype=complex)
    return g, TruncSeries(s_coeffs), h


def monomial(n: int, N: int) -> TruncSeries:
    if n > N:
        raise DomainError(f"monomial degree {n} exceeds truncation {N}")
    c = np.zeros(N + 1, dtype=complex)
    c[n] = 1.0
    return TruncSeries(c)


def power_singular(gamma: float, N: int) -> TruncSeries:
    """Truncation of (1 - z)**(-gamma), coefficients G(n+gamma)/(G(gamma) n!)."""
    if gamma <= 0:
        raise DomainError(f"power singularity exponent must be positive, got {gamma}")
    n = np.arange(N + 1, dtype=float)
    return TruncSeries(_gamma_ratio((n + gamma,), (gamma, n + 1)))


def gap_series(spec: GapSpec, N: int) -> TruncSeries:
    """Lacunary series from a GapSpec, truncated at degree N."""
    c = np.zeros(N + 1, dtype=complex)
    for idx, amp in zip(spec.indices, spec.amplitudes):
        if idx <= N:
            c[idx] = amp
    return TruncSeries(c)


def make_test_function(spec, N: int = DEFAULT_DEGREE) -> TruncSeries:
    """Build a test function from a spec object or a spec string.

    String grammar: ``gap:beta=0.5,ratio=2,kmax=8``, ``powsing:gamma=0.8``,
    ``mono:n=5``, ``poly:<comma-separated coefficients>``.
    """
    if N < 1:
        raise DomainError("truncation degree must be at least 1")
    if isinstance(spec, GapSpec):
        return gap_series(spec, N)
    if not isinstance(spec, str):
        raise ConfigError(f"unsupported test function spec: {spec!r}")
    head, _, rest = spec.partition(":")
    head = head.strip().lower()
    if head == "gap":
        kv = _parse_kv(rest, spec)
        gs = GapSpec(beta=float(kv["beta"]), ratio=int(kv["ratio"]), k_max=int(kv["kmax"]))
        return gap_series(gs, N)
    if head == "powsing":
        kv = _parse_kv(rest, spec)
        return power_singular(float(kv["gamma"]), N)
    if head == "mono":
        kv = _parse_kv(rest, spec)
        return monomial(int(kv["n"]), N)
    if head == "poly":
        try:
            vals = [complex(tok) for tok in rest.split(",") if tok.strip()]
        except ValueError as exc:
            raise ConfigError(f"bad coefficient list in {spec!r}: {exc}") from exc
        if not vals:
            raise ConfigError(f"empty coefficient list in {spec!r}")
        return TruncSeries(np.array(vals))
    raise ConfigError(f"unknown test function kind in {spec!r}")


class _SpecDict(dict):
    """key=value tokens of a spec string; missing keys raise ConfigError."""

    def __init__(self, mapping, origin):
        super().__init__(mapping)
        self.origin = origin

    def __missing__(self, key):
        raise ConfigError(f"missing {key}= in {self.origin!r}")


def _parse_kv(text: str, origin: str) -> _SpecDict:
    out = {}
    for tok in filter(None, (t.strip() for t in text.split(","))):
        key, eq, val = tok.partition("=")
        if not eq:
            raise ConfigError(f"malformed token {tok!r} in {origin!r}")
        out[key.strip()] = val.strip()
    return _SpecDict(out, origin)
