"""Quadrature, special functions and seeded sampling.

Every continuous operation in the package bottoms out here.  Integrands
are vectorised callables: they receive a 1-d float array of nodes and
return an array of the same shape (a scalar result is broadcast).
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, fields, replace
from functools import lru_cache

import numpy as np

from .errors import DomainError, NonConvergent, NonFinite

QUAD_CONFIG_ENV = "CONJUGATE_CHANNELS_QUAD_CONFIG"


@dataclass(frozen=True)
class Interval:
    """Closed interval ``[lo, hi]``; infinite ends must be truncated before use."""

    lo: float
    hi: float

    def __post_init__(self):
        if math.isnan(self.lo) or math.isnan(self.hi) or not self.lo < self.hi:
            raise DomainError(f"invalid interval [{self.lo}, {self.hi}]")

    @property
    def is_finite(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def truncated(self, center: float, scale: float, sigmas: float = 12.0) -> Interval:
        """Replace infinite ends by ``center -/+ sigmas * scale``."""
        lo = self.lo if math.isfinite(self.lo) else center - sigmas * scale
        hi = self.hi if math.isfinite(self.hi) else center + sigmas * scale
        return Interval(lo, hi)

    def intersect(self, other: Interval) -> Interval | None:
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        return Interval(lo, hi) if lo < hi else None

    def hull(self, other: Interval) -> Interval:
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def split(self, k: int) -> list[Interval]:
        edges = np.linspace(self.lo, self.hi, k + 1)
        return [Interval(float(a), float(b)) for a, b in zip(edges[:-1], edges[1:])]

    def contains(self, x):
        x = np.asarray(x, dtype=float)
        return (x >= self.lo) & (x <= self.hi)

    def grid(self, n: int) -> np.ndarray:
        return np.linspace(self.lo, self.hi, n)


@dataclass(frozen=True)
class Simplex:
    """Open probability simplex with ``n`` vertices, stored by its first n-1 coordinates."""

    n: int

    def __post_init__(self):
        if self.n < 2:
            raise DomainError("simplex needs n >= 2")

    @property
    def dim(self) -> int:
        return self.n - 1

    @property
    def volume(self) -> float:
        # Lebesgue volume of {x in R^(n-1) : x > 0, sum x < 1}
        return 1.0 / math.factorial(self.n - 1)

    def complete(self, pts) -> np.ndarray:
        """Append the implied last coordinate to points of shape (k, n-1)."""
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        return np.column_stack([pts, 1.0 - pts.sum(axis=1)])


@dataclass(frozen=True)
class QuadConfig:
    nodes_per_panel: int = 16
    max_panels: int = 2**14
    rel_tol: float = 1e-10
    abs_tol: float = 1e-13
    gauss_truncation_sigmas: float = 12.0
    initial_panels: int = 8
    mc_samples: int = 200_000
    seed: int = 1

    def __post_init__(self):
        if self.nodes_per_panel < 2:
            raise DomainError("nodes_per_panel must be >= 2")
        if self.max_panels < 1 or self.initial_panels < 1:
            raise DomainError("panel counts must be positive")
        if self.initial_panels > self.max_panels:
            raise DomainError("initial_panels exceeds max_panels")
        for name in ("rel_tol", "abs_tol"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise DomainError(f"{name} must lie in (0, 1), got {v}")
        if self.gauss_truncation_sigmas <= 0:
            raise DomainError("gauss_truncation_sigmas must be positive")
        if self.mc_samples < 1:
            raise DomainError("mc_samples must be positive")

    def with_(self, **changes) -> QuadConfig:
        return replace(self, **changes)

    @classmethod
    def from_file(cls, path) -> QuadConfig:
        with open(path) as fh:
            raw = json.load(fh)
        known = {f.name for f in fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise DomainError(f"unknown QuadConfig keys: {sorted(unknown)}")
        return cls(**raw)

    @classmethod
    def from_env(cls) -> QuadConfig:
        """Defaults, overridden by the JSON file named in ``$CONJUGATE_CHANNELS_QUAD_CONFIG``."""
        path = os.environ.get(QUAD_CONFIG_ENV)
        return cls.from_file(path) if path else cls()


DEFAULT_CONFIG = QuadConfig()


@dataclass(frozen=True)
class SeededSampler:
    """Counter-based random stream (Philox); ``(seed, counter)`` fixes the output."""

    seed: int
    counter: int = 0

    def generator(self) -> np.random.Generator:
        key = self.seed % 2**64
        return np.random.Generator(np.random.Philox(key=key, counter=self.counter % 2**64))

    def split(self, stream: int) -> SeededSampler:
        # disjoint counter blocks of 2**40 draws per stream
        return SeededSampler(self.seed, self.counter + (stream << 40))


@lru_cache(maxsize=None)
def _gauss_legendre(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def _evaluate(f, x):
    y = np.asarray(f(x), dtype=float)
    if y.shape != x.shape:
        y = np.broadcast_to(y, x.shape)
    if not np.all(np.isfinite(y)):
        bad = x[~np.isfinite(y)][0]
        raise NonFinite(f"integrand is not finite at x = {bad!r}")
    return y


def _panel_estimates(f, lo, hi, n):
    """Gauss-Legendre estimates on the left and right halves of each panel."""
    x, w = _gauss_legendre(n)
    mid = 0.5 * (lo + hi)
    a = np.concatenate([lo, mid])
    b = np.concatenate([mid, hi])
    half = 0.5 * (b - a)
    nodes = (a + b)[:, None] * 0.5 + half[:, None] * x[None, :]
    vals = np.asarray(f(nodes.ravel())).reshape(nodes.shape)
    est = half * (vals @ w)
    k = lo.size
    return est[:k], est[k:]


def _low_order(f, lo, hi, n):
    """Whole-panel estimate with a rule of half the order."""
    x, w = _gauss_legendre(max(2, n // 2))
    half = 0.5 * (hi - lo)
    nodes = (lo + hi)[:, None] * 0.5 + half[:, None] * x[None, :]
    return half * (np.asarray(f(nodes.ravel())).reshape(nodes.shape) @ w)


def _smoothstep_map(domain: Interval):
    """Map t in [0, 1] to x with dx/dt vanishing at both ends.

    x = lo + w (3t^2 - 2t^3).  Integrable power singularities at the ends are
    damped by the Jacobian 6t(1-t); near the upper end x is formed from
    ``hi`` so the distance to that endpoint keeps its relative accuracy.
    """
    lo, hi, w = domain.lo, domain.hi, domain.width

    def to_x(t):
        lower = lo + w * t * t * (3.0 - 2.0 * t)
        s = 1.0 - t
        upper = hi - w * s * s * (1.0 + 2.0 * t)
        return np.where(t <= 0.5, lower, upper)

    def jac(t):
        return 6.0 * w * t * (1.0 - t)

    return to_x, jac


def integrate_1d(f, domain: Interval, cfg: QuadConfig = DEFAULT_CONFIG) -> float:
    """Adaptive composite Gauss-Legendre integral of ``f`` over ``domain``.

    The rule runs in the variable t of an endpoint-clustering substitution
    (see ``_smoothstep_map``).  Each panel carries a coarse estimate (one rule
    on the whole panel) and a fine one (the rule on both halves);
    ``|coarse - fine|`` is its error estimate, guarded by a half-order rule on
    the whole panel so that a chance agreement of the first two (typical at a
    jump) does not freeze a panel early.  Panels whose error exceeds
    their width-proportional share of the tolerance are bisected until the
    summed error is at most ``max(abs_tol, rel_tol * |value|)``.
    """
    if not domain.is_finite:
        raise DomainError("integrate_1d needs a finite domain; truncate first")
    to_x, jac = _smoothstep_map(domain)

    def g(t):
        return _evaluate(f, to_x(t)) * jac(t)

    return _adaptive_gl(g, 0.0, 1.0, cfg, domain)


def _adaptive_gl(g, a, b, cfg, domain):
    n = cfg.nodes_per_panel
    x, w = _gauss_legendre(n)
    width = b - a

    edges = np.linspace(a, b, cfg.initial_panels + 1)
    lo, hi = edges[:-1], edges[1:]
    half = 0.5 * (hi - lo)
    nodes = (lo + hi)[:, None] * 0.5 + half[:, None] * x[None, :]
    coarse = half * (g(nodes.ravel()).reshape(nodes.shape) @ w)
    left, right = _panel_estimates(g, lo, hi, n)
    fine = left + right
    err = np.maximum(np.abs(coarse - fine), np.abs(_low_order(g, lo, hi, n) - fine))

    done_lo, done_val = [], []
    done_err = 0.0
    while True:
        total = math.fsum(fine) + math.fsum(done_val)
        tol = max(cfg.abs_tol, cfg.rel_tol * abs(total))
        if err.sum() + done_err <= tol:
            break
        share = tol * (hi - lo) / width
        refine = err > share
        # panels already within their share are frozen
        done_lo.extend(lo[~refine])
        done_val.extend(fine[~refine])
        done_err += float(err[~refine].sum())
        lo_r, hi_r = lo[refine], hi[refine]
        left_r, right_r = left[refine], right[refine]
        mid = 0.5 * (lo_r + hi_r)
        lo = np.concatenate([lo_r, mid])
        hi = np.concatenate([mid, hi_r])
        if lo.size + len(done_lo) > cfg.max_panels:
            raise NonConvergent(
                f"integrate_1d over [{domain.lo}, {domain.hi}] exceeded "
                f"{cfg.max_panels} panels (error estimate {err.sum() + done_err:.3e}, "
                f"tol {tol:.3e})"
            )
        if np.any(hi <= lo):
            raise NonConvergent("panel width underflow during refinement")
        coarse = np.concatenate([left_r, right_r])
        left, right = _panel_estimates(g, lo, hi, n)
        fine = left + right
        err = np.maximum(np.abs(coarse - fine), np.abs(_low_order(g, lo, hi, n) - fine))

    # fixed summation order: by panel position
    all_lo = np.concatenate([np.asarray(done_lo, dtype=float), lo])
    all_val = np.concatenate([np.asarray(done_val, dtype=float), fine])
    order = np.argsort(all_lo, kind="stable")
    return math.fsum(all_val[order])


def integrate_2d(f, box_x: Interval, box_y: Interval, cfg: QuadConfig = DEFAULT_CONFIG) -> float:
    """Tensor-product composite Gauss-Legendre over a rectangle.

    ``f(x, y)`` receives two equally shaped arrays.  The panel grid is doubled
    until two successive estimates agree; meant for smooth integrands.
    """
    if not (box_x.is_finite and box_y.is_finite):
        raise DomainError("integrate_2d needs a finite box")
    x, w = _gauss_legendre(cfg.nodes_per_panel)

    def estimate(k):
        ex = np.linspace(box_x.lo, box_x.hi, k + 1)
        ey = np.linspace(box_y.lo, box_y.hi, k + 1)
        hx, hy = 0.5 * np.diff(ex), 0.5 * np.diff(ey)
        nx = ((ex[:-1] + ex[1:]) * 0.5)[:, None] + hx[:, None] * x[None, :]
        ny = ((ey[:-1] + ey[1:]) * 0.5)[:, None] + hy[:, None] * x[None, :]
        wx = (hx[:, None] * w[None, :]).ravel()
        wy = (hy[:, None] * w[None, :]).ravel()
        X, Y = np.meshgrid(nx.ravel(), ny.ravel(), indexing="ij")
        vals = _evaluate(lambda t: f(X, Y), X)
        return float(wx @ vals @ wy)

    k = 1
    prev = estimate(k)
    while True:
        k *= 2
        if k * k > cfg.max_panels:
            raise NonConvergent("integrate_2d exceeded panel budget")
        cur = estimate(k)
        if abs(cur - prev) <= max(cfg.abs_tol, cfg.rel_tol * abs(cur)):
            return cur
        prev = cur


def integrate_simplex(f, simplex: Simplex, cfg: QuadConfig = DEFAULT_CONFIG) -> float:
    """Integral over the open simplex, w.r.t. Lebesgue measure on the first n-1 coordinates.

    ``f`` takes points of shape (k, n-1).  n = 2 is a 1-d quadrature; larger n
    use seeded Monte Carlo with ``cfg.mc_samples`` uniform points, so every call
    with the same config sees the same sample (common random numbers).
    """
    if simplex.n == 2:
        return integrate_1d(lambda t: f(t[:, None]), Interval(0.0, 1.0), cfg)
    return integrate_simplex_mc(f, simplex, cfg.mc_samples, SeededSampler(cfg.seed))


def integrate_simplex_mc(f, simplex: Simplex, count: int, sampler: SeededSampler) -> float:
    pts = simplex_sample(simplex.n, count, sampler)[:, :-1]
    vals = np.asarray(f(pts), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise NonFinite("Monte Carlo integrand is not finite")
    return simplex.volume * math.fsum(vals) / count


def integrate_triangle(f, cfg: QuadConfig = DEFAULT_CONFIG) -> float:
    """Deterministic integral over the 2-simplex {x0, x1 > 0, x0 + x1 < 1}.

    Uses the collapsed-square map x0 = u, x1 = (1 - u) v with Jacobian (1 - u)
    and iterated adaptive quadrature.
    """
    unit = Interval(0.0, 1.0)

    def outer(u):
        out = np.empty_like(u)
        for k, uk in enumerate(u):
            inner = lambda v: f(np.column_stack([np.full_like(v, uk), (1.0 - uk) * v]))
            out[k] = (1.0 - uk) * integrate_1d(inner, unit, cfg)
        return out

    return integrate_1d(outer, unit, cfg.with_(initial_panels=1))


def log_gamma(a: float) -> float:
    """Natural log of the Gamma function for a > 0."""
    a = float(a)
    if not a > 0 or not math.isfinite(a):
        raise DomainError(f"log_gamma needs a finite a > 0, got {a}")
    return math.lgamma(a)


def log_beta_fn(alpha: float, beta: float) -> float:
    """log B(alpha, beta) = log Gamma(alpha) + log Gamma(beta) - log Gamma(alpha + beta)."""
    if not (alpha > 0 and beta > 0):
        raise DomainError(f"log_beta_fn needs positive arguments, got ({alpha}, {beta})")
    return log_gamma(alpha) + log_gamma(beta) - log_gamma(alpha + beta)


def log_binomial(n: int, k) -> np.ndarray | float:
    """log C(n, k), elementwise over ``k``."""
    k = np.asarray(k, dtype=float)
    if np.any((k < 0) | (k > n)):
        raise DomainError(f"binomial index out of range 0..{n}")
    from math import lgamma

    lg = np.vectorize(lgamma, otypes=[float])
    out = lgamma(n + 1.0) - lg(k + 1.0) - lg(n - k + 1.0)
    return float(out) if out.ndim == 0 else out


def simplex_sample(n: int, count: int, sampler: SeededSampler) -> np.ndarray:
    """``count`` points drawn uniformly from the open n-simplex, shape (count, n)."""
    if n < 2:
        raise DomainError("simplex dimension n must be >= 2")
    if count < 1:
        raise DomainError("count must be positive")
    rng = sampler.generator()
    # normalised exponentials are uniform on the simplex
    e = rng.standard_exponential((count, n))
    while np.any(e <= 0.0):  # pragma: no cover - probability ~ 0
        bad = e <= 0.0
        e[bad] = rng.standard_exponential(bad.sum())
    pts = e / e.sum(axis=1, keepdims=True)
    return pts
