"""Weight functions on (0, infinity) and their admissibility diagnostics.

A weight K is nondecreasing, right-continuous and positive on (0, infinity).
Three families are supported: pure powers K(t) = t**q, powers with a
logarithmic correction K(t) = t**q * log(e + 1/t)**beta, and tabulated
weights interpolated log-linearly between knots.

Admissibility is quantified through the dilation majorant

    phi_K(x) = sup_{0 < t <= 1} K(t*x) / K(t),

via two improper integrals: ``value_11`` is the integral of phi_K(x)/x over
(0, 1] (small-dilation condition) and ``value_12`` the integral of
phi_K(x)/x**(1+sigma) over [1, infinity) (large-dilation condition).  For
the pure power family both integrals have closed forms (1/q, and
1/(sigma-q) when q < sigma); the numeric panel rule is used for the other
families and is conservative: it only certifies integrals whose dyadic
panel contributions decay below a strict tail threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError, DomainError

#: number of log-spaced sample points for the sup defining phi_K
PHI_SUP_SAMPLES = 100_000
#: smallest t probed by the phi_K sup grid
PHI_SUP_TMIN = 1e-12

_PANELS = 41          # dyadic panels per improper integral
_PANEL_GL = 32        # Gauss-Legendre points per panel
_TAIL_REL = 1e-10     # tail threshold relative to the accumulated value
_TAIL_PANELS = 5      # number of trailing panels that must clear it

_MONOTONE_GRID = np.logspace(-8.0, 2.0, 400)


@dataclass(frozen=True)
class WeightFun:
    """A weight function, one of the kinds ``power``, ``powerlog``, ``table``.

    Use the constructors :meth:`power`, :meth:`power_log` and
    :meth:`tabulated`; they validate positivity and monotonicity on a
    sample grid.
    """

    kind: str
    q: float = 0.0
    beta: float = 0.0
    knots: tuple = ()
    plateau: tuple | None = None

    @classmethod
    def power(cls, q: float) -> "WeightFun":
        """K(t) = t**q with q > 0."""
        if q <= 0:
            raise DomainError(f"power weight needs q > 0, got {q}")
        return cls(kind="power", q=float(q))

    @classmethod
    def power_log(cls, q: float, beta: float) -> "WeightFun":
        """t**q * log(e + 1/t)**beta with q > 0, made nondecreasing.

        For beta > 0 the raw formula can dip on an interior window (for
        q = 0.3, beta = 1 by about one percent); the weight is defined as
        its least nondecreasing majorant, which plateaus over that window
        and agrees with the raw formula everywhere else.
        """
        if q <= 0:
            raise DomainError(f"powerlog weight needs q > 0, got {q}")
        w = cls(kind="powerlog", q=float(q), beta=float(beta),
                plateau=_powerlog_plateau(float(q), float(beta)))
        w._validate_samples()
        return w

    @classmethod
    def tabulated(cls, knots) -> "WeightFun":
        """Weight from (t, K(t)) pairs, log-linear in between.

        Knot abscissae must be strictly increasing and values positive and
        nondecreasing.  Beyond the last knot the weight is constant; below
        the first knot it follows the slope of the first segment in
        log-log coordinates.
        """
        pts = tuple((float(t), float(k)) for t, k in knots)
        if len(pts) < 2:
            raise DomainError("tabulated weight needs at least two knots")
        ts = np.array([t for t, _ in pts])
        ks = np.array([k for _, k in pts])
        if np.any(ts <= 0) or np.any(np.diff(ts) <= 0):
            raise DomainError("tabulated knots need strictly increasing t > 0")
        if np.any(ks <= 0) or np.any(np.diff(ks) < 0):
            raise DomainError("tabulated knot values must be positive and nondecreasing")
        return cls(kind="table", knots=pts)

    # -- evaluation ---------------------------------------------------------

    def k(self, t):
        """Evaluate K at t (scalar or array), t > 0."""
        t = np.asarray(t, dtype=float)
        if np.any(t <= 0):
            raise DomainError("weight argument must be positive")
        if self.kind == "power":
            return t**self.q
        if self.kind == "powerlog":
            raw = t**self.q * np.log(np.e + 1.0 / t) ** self.beta
            if self.plateau is not None:
                t_lo, t_hi, value = self.plateau
                raw = np.where((t > t_lo) & (t < t_hi), value, raw)
            return raw
        return self._interp_table(t)

    __call__ = k

    def _interp_table(self, t):
        ts = np.array([x for x, _ in self.knots])
        ks = np.array([x for _, x in self.knots])
        logt, logk = np.log(ts), np.log(ks)
        lt = np.log(t)
        # np.interp clamps outside the knot range: constant above the last
        # knot (as required); below the first knot extend the first segment.
        out = np.interp(lt, logt, logk)
        below = lt < logt[0]
        if np.any(below):
            slope = (logk[1] - logk[0]) / (logt[1] - logt[0])
            out = np.where(below, logk[0] + slope * (lt - logt[0]), out)
        return np.exp(out)

    def _validate_samples(self):
        vals = self.k(_MONOTONE_GRID)
        if np.any(vals <= 0):
            raise DomainError("weight must be positive on the sample grid")
        if np.any(np.diff(vals) < -1e-12 * vals[:-1]):
            raise DomainError("weight must be nondecreasing on the sample grid")


def _powerlog_plateau(q: float, beta: float) -> tuple | None:
    """Dip window (t_lo, t_hi, value) of the raw powerlog formula, if any.

    The raw formula decreases exactly where q*log(e+1/t)*(t*e+1) < beta,
    a single interval for beta > 0.  The monotone majorant is constant on
    (t_lo, t_hi) where t_hi is the point past the dip at which the raw
    formula recovers the value at t_lo.
    """
    if beta <= 0:
        return None
    from scipy.optimize import brentq

    def slope_sign(t):
        return q * math.log(math.e + 1.0 / t) * (t * math.e + 1.0) - beta

    grid = np.logspace(-14, 8, 4000)
    signs = np.sign([slope_sign(t) for t in grid])
    flips = np.nonzero(np.diff(signs) != 0)[0]
    if flips.size < 2:
        return None
    t_lo = brentq(slope_sign, grid[flips[0]], grid[flips[0] + 1])
    t_mid = brentq(slope_sign, grid[flips[1]], grid[flips[1] + 1])

    def raw(t):
        return t**q * math.log(math.e + 1.0 / t) ** beta

    value = raw(t_lo)
    hi = t_mid
    while raw(hi) < value:
        hi *= 2.0
    t_hi = brentq(lambda t: raw(t) - value, t_mid, hi)
    return (t_lo, t_hi, value)


@dataclass(frozen=True)
class ConditionReport:
    """Outcome of the two admissibility integrals for a weight."""

    holds_11: bool
    value_11: float
    holds_12: bool
    value_12: float
    sigma: float


def eval_phi_K(W: WeightFun, x: float, samples: int = PHI_SUP_SAMPLES) -> float:
    """Dilation majorant phi_K(x) = sup_{0<t<=1} K(t*x)/K(t).

    Exact (x**q) for the power kind.  For the other kinds the sup is taken
    over ``samples`` log-spaced points t in [PHI_SUP_TMIN, 1] and is
    therefore a lower bound of the true sup.
    """
    if x <= 0:
        raise DomainError(f"phi_K argument must be positive, got {x}")
    if W.kind == "power":
        return float(x) ** W.q
    t = np.logspace(math.log10(PHI_SUP_TMIN), 0.0, samples)
    return float(np.max(W.k(t * x) / W.k(t)))


def _phi_batch(W: WeightFun, xs: np.ndarray, samples: int) -> np.ndarray:
    """phi_K at many abscissae, chunked so the (x, t) grid stays small."""
    if W.kind == "power":
        return xs**W.q
    t = np.logspace(math.log10(PHI_SUP_TMIN), 0.0, samples)
    kt = W.k(t)
    out = np.empty_like(xs)
    chunk = max(1, int(2e6 // samples))
    for i in range(0, xs.size, chunk):
        xc = xs[i : i + chunk]
        out[i : i + chunk] = np.max(W.k(xc[:, None] * t[None, :]) / kt[None, :], axis=1)
    return out


def _panel_integral(W, sigma, samples, *, small: bool):
    """Dyadic-panel quadrature of one admissibility integral.

    Declares convergence only if the last ``_TAIL_PANELS`` panel
    contributions each fall below ``_TAIL_REL`` times the accumulated
    value; otherwise the value is reported as +inf.
    """
    gx, gw = np.polynomial.legendre.leggauss(_PANEL_GL)
    lo = np.array([2.0 ** -(j + 1) if small else 2.0**j for j in range(_PANELS)])
    hi = np.array([2.0**-j if small else 2.0 ** (j + 1) for j in range(_PANELS)])
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    xs = (mid[:, None] + half[:, None] * gx[None, :]).ravel()
    phis = _phi_batch(W, xs, samples)
    integrand = phis / xs if small else phis / xs ** (1.0 + sigma)
    contrib = (integrand.reshape(_PANELS, _PANEL_GL) * gw[None, :] * half[:, None]).sum(axis=1)
    total = float(contrib.sum())
    converged = bool(np.all(contrib[-_TAIL_PANELS:] < _TAIL_REL * total))
    return (total if converged else math.inf), converged


def check_conditions(W: WeightFun, sigma: float, samples: int = PHI_SUP_SAMPLES) -> ConditionReport:
    """Evaluate both admissibility integrals of ``W`` at the given sigma.

    Power weights use the closed forms (exact values, exact holds flags);
    the other kinds use the dyadic panel rule, whose convergence test is
    deliberately conservative.
    """
    if sigma <= 0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    if W.kind == "power":
        v11, h11 = 1.0 / W.q, True
        if W.q < sigma:
            v12, h12 = 1.0 / (sigma - W.q), True
        else:
            v12, h12 = math.inf, False
        return ConditionReport(h11, v11, h12, v12, sigma)
    v11, h11 = _panel_integral(W, sigma, samples, small=True)
    v12, h12 = _panel_integral(W, sigma, samples, small=False)
    return ConditionReport(h11, v11, h12, v12, sigma)


def doubling_ratio(W: WeightFun, t: float, r: float, sigma: float):
    """Return (K(r)/K(t), (r/t)**sigma) for 0 < t <= r.

    When ``W`` satisfies the large-dilation condition for this sigma the
    first component is bounded by the second.
    """
    if not 0 < t <= r:
        raise DomainError(f"need 0 < t <= r, got t={t}, r={r}")
    ratio = float(W.k(r) / W.k(t))
    bound = (r / t) ** sigma
    return ratio, bound


def parse_weight_spec(spec: str) -> WeightFun:
    """Parse a weight specification string.

    Grammar: ``power:q=0.3``, ``powerlog:q=0.3,beta=1``, ``table:<path>``
    where the file is CSV ``t,K`` with strictly increasing t.
    """
    head, _, rest = spec.partition(":")
    head = head.strip().lower()
    if head == "power":
        kv = _parse_kv(rest, spec)
        return WeightFun.power(_req_float(kv, "q", spec))
    if head == "powerlog":
        kv = _parse_kv(rest, spec)
        return WeightFun.power_log(_req_float(kv, "q", spec), _req_float(kv, "beta", spec))
    if head == "table":
        path = Path(rest.strip())
        if not path.is_file():
            raise ConfigError(f"weight table not found: {path}")
        knots = []
        for ln, line in enumerate(path.read_text().splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise ConfigError(f"{path}:{ln}: expected 't,K', got {line!r}")
            try:
                knots.append((float(parts[0]), float(parts[1])))
            except ValueError as exc:
                raise ConfigError(f"{path}:{ln}: {exc}") from exc
        return WeightFun.tabulated(knots)
    raise ConfigError(f"unknown weight kind in {spec!r} (expected power/powerlog/table)")


def _parse_kv(text: str, origin: str) -> dict:
    out = {}
    for tok in filter(None, (t.strip() for t in text.split(","))):
        key, eq, val = tok.partition("=")
        if not eq:
            raise ConfigError(f"malformed token {tok!r} in {origin!r}")
        out[key.strip()] = val.strip()
    return out


def _req_float(kv: dict, key: str, origin: str) -> float:
    if key not in kv:
        raise ConfigError(f"missing {key}= in {origin!r}")
    try:
        return float(kv[key])
    except ValueError as exc:
        raise ConfigError(f"bad value for {key} in {origin!r}: {exc}") from exc
