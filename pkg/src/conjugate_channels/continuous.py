"""Density-represented continuous probability.

States are closures over a density plus a declared support (an ``Interval``
or a ``Simplex``); nothing is tabulated.  Every integral is delegated to
``numerics``.  Regions ("measurable subsets") are given as

* ``None`` for the whole carrier,
* an ``Interval`` on a real carrier,
* a collection of labels on a finite carrier,
* a vectorised boolean callable (used for simplex cells).
"""

from __future__ import annotations

import math
from collections.abc import Callable, Iterable

import numpy as np

from .discrete import FiniteDist, RandVarD, make_space
from .errors import (
    CarrierMismatch,
    DomainError,
    NonConvergent,
    UnknownLabel,
    ZeroMassObservation,
    ZeroValidity,
)
from .numerics import (
    DEFAULT_CONFIG,
    Interval,
    QuadConfig,
    Simplex,
    integrate_1d,
    integrate_2d,
    integrate_simplex,
)

NORM_TOL = 1e-6
MC_NORM_TOL = 1e-2
ZERO_VALIDITY = 1e-300


def _as_array(x):
    return np.asarray(x, dtype=float)


def _region_indicator(region):
    if region is None:
        return None
    if isinstance(region, Interval):
        return region.contains
    if callable(region):
        return region
    raise DomainError(f"unsupported region {region!r} on a continuous carrier")


class RandVarC:
    """Real-valued function on a continuous carrier (vectorised)."""

    __slots__ = ("fn", "name")

    def __init__(self, fn: Callable, name: str = ""):
        self.fn = fn
        self.name = name

    def __call__(self, x):
        return self.fn(x)

    def __and__(self, other) -> RandVarC:
        other_fn = other.fn if isinstance(other, RandVarC) else other
        return RandVarC(lambda x: self.fn(x) * other_fn(x), f"({self.name} & {getattr(other, 'name', '?')})")

    def __rmul__(self, a: float) -> RandVarC:
        a = float(a)
        return RandVarC(lambda x: a * self.fn(x), f"{a:g}*{self.name}")

    def __repr__(self):
        return f"RandVarC({self.name or self.fn!r})"


def constant_rv(value: float = 1.0) -> RandVarC:
    value = float(value)
    return RandVarC(lambda x: np.full(np.shape(x)[:1] if np.ndim(x) > 1 else np.shape(x), value), f"{value:g}")


class PdfState:
    """State ``omega = integral of f`` on an interval or simplex.

    ``pdf`` is zero off the support.  With ``check=True`` the density is
    integrated once and must be normalised to within 1e-6.
    """

    __slots__ = ("density", "support", "name", "params", "norm_checked", "norm_error")

    def __init__(self, density, support, *, name="", params=None, check=False,
                 cfg: QuadConfig = DEFAULT_CONFIG):
        if not isinstance(support, (Interval, Simplex)):
            raise DomainError("support must be an Interval or a Simplex")
        if isinstance(support, Interval) and not support.is_finite:
            raise DomainError("pdf states need a finite (truncated) support")
        self.density = density
        self.support = support
        self.name = name
        self.params = params
        self.norm_error = None
        self.norm_checked = False
        if check:
            total = _integrate_density(self, lambda x: 1.0, None, cfg)
            self.norm_error = abs(total - 1.0)
            if self.norm_error > norm_tolerance(self):
                raise DomainError(f"density integrates to {total!r}, not 1")
            self.norm_checked = True

    def pdf(self, x):
        if isinstance(self.support, Simplex):
            pts = _as_array(x)
            # a flat array on the 2-simplex is a list of first coordinates
            pts = pts.reshape(-1, 1) if self.support.dim == 1 and pts.ndim <= 1 else np.atleast_2d(pts)
            inside = np.all(pts > 0, axis=1) & (pts.sum(axis=1) < 1)
            out = np.zeros(len(pts))
            if np.any(inside):
                out[inside] = self.density(pts[inside])
            return out
        x = _as_array(x)
        inside = self.support.contains(x)
        out = np.zeros(np.shape(x))
        if np.any(inside):
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                out[inside] = np.broadcast_to(self.density(x[inside]), x[inside].shape)
        return out if out.ndim else float(out)

    def expect(self, g, region=None, cfg: QuadConfig = DEFAULT_CONFIG) -> float:
        return _integrate_density(self, g, region, cfg)

    def mass(self, region=None, cfg: QuadConfig = DEFAULT_CONFIG) -> float:
        return _integrate_density(self, lambda x: 1.0, region, cfg)

    def cdf(self, t: float, cfg: QuadConfig = DEFAULT_CONFIG) -> float:
        if not isinstance(self.support, Interval):
            raise DomainError("cdf is only defined on real carriers")
        if t <= self.support.lo:
            return 0.0
        if t >= self.support.hi:
            return self.mass(None, cfg)
        return self.mass(Interval(self.support.lo, float(t)), cfg)

    def __repr__(self):
        return f"PdfState({self.name or 'density'} on {self.support})"


def _integrate_density(state: PdfState, g, region, cfg):
    f = state.density
    if isinstance(state.support, Interval):
        dom = state.support
        ind = None
        if isinstance(region, Interval):
            dom = dom.intersect(region)
            if dom is None:
                return 0.0
        elif region is not None:
            ind = _region_indicator(region)
        if ind is None:
            return integrate_1d(lambda x: f(x) * g(x), dom, cfg)
        pieces = region_pieces(ind, dom)
        return math.fsum(integrate_1d(lambda x: f(x) * g(x), piece, cfg) for piece in pieces)
    if isinstance(region, Interval):
        # an interval on a simplex constrains the first coordinate
        ind = lambda p: region.contains(np.atleast_2d(p)[:, 0])  # noqa: E731
    else:
        ind = _region_indicator(region)
    if ind is None:
        return integrate_simplex(lambda p: f(p) * g(p), state.support, cfg)
    return integrate_simplex(lambda p: np.where(np.reshape(ind(p), -1), f(p) * g(p), 0.0), state.support, cfg)


def region_pieces(ind, dom: Interval, scan: int = 4097) -> list[Interval]:
    """Split ``dom`` into the intervals where the indicator ``ind`` holds.

    Transitions are found on a ``scan``-point grid and then bisected to
    machine precision, so quadrature never straddles a jump.  Features of
    the region narrower than the scan spacing are not resolved.
    """
    xs = dom.grid(scan)
    inside = np.asarray(ind(xs), dtype=bool)
    edges = [dom.lo]
    for i in np.flatnonzero(inside[1:] != inside[:-1]):
        a, b, va = xs[i], xs[i + 1], inside[i]
        while True:
            mid = 0.5 * (a + b)
            if not a < mid < b:
                break
            if bool(np.asarray(ind(np.array([mid])))[0]) == va:
                a = mid
            else:
                b = mid
        edges.append(b)
    edges.append(dom.hi)
    pieces = []
    for a, b in zip(edges[:-1], edges[1:]):
        if a < b and bool(np.asarray(ind(np.array([0.5 * (a + b)])))[0]):
            pieces.append(Interval(float(a), float(b)))
    return pieces


class PointState:
    """Dirac state ``eta(x)`` on a real carrier."""

    __slots__ = ("x", "support", "name")

    def __init__(self, x: float, support: Interval | None = None):
        self.x = float(x)
        self.support = support
        self.name = f"eta({self.x:g})"
        if support is not None and not support.contains(self.x):
            raise DomainError("point outside the declared support")

    def expect(self, g, region=None, cfg: QuadConfig = DEFAULT_CONFIG) -> float:
        if region is not None and not bool(_region_indicator(region)(np.array([self.x]))[0]):
            return 0.0
        return float(np.asarray(g(np.array([self.x])), dtype=float).ravel()[0])

    def mass(self, region=None, cfg: QuadConfig = DEFAULT_CONFIG) -> float:
        return self.expect(lambda x: 1.0 + 0.0 * x, region, cfg)

    def __repr__(self):
        return f"PointState({self.x!r})"


def expect(state, g, region=None, cfg: QuadConfig = DEFAULT_CONFIG) -> float:
    """Integral of ``g`` over ``region`` w.r.t. any supported state."""
    if isinstance(state, FiniteDist):
        if region is None:
            labels = state.space
        elif callable(region):
            labels = [x for x in state.space if bool(np.asarray(region(np.array([x]))).ravel()[0])]
        else:
            labels = [x for x in state.space if x in set(region)]
        gv = g if not isinstance(g, RandVarD) else (lambda lab: g(lab))
        return float(sum(state(x) * float(np.asarray(gv(x))) for x in labels if state(x) > 0))
    return state.expect(g, region, cfg)


def mass(state, region=None, cfg: QuadConfig = DEFAULT_CONFIG) -> float:
    if isinstance(state, FiniteDist):
        return state.mass(state.space if region is None else region)
    return state.mass(region, cfg)


# ---------------------------------------------------------------- channels


class FiniteObs:
    def __init__(self, labels: Iterable):
        self.labels = make_space(labels)

    def __repr__(self):
        return f"FiniteObs({self.labels!r})"


class RealObs:
    """Real observation line with a truncation window, fixed or depending on the input."""

    def __init__(self, window):
        self.window = window

    def window_at(self, x) -> Interval:
        return self.window(x) if callable(self.window) else self.window

    def __repr__(self):
        return f"RealObs({self.window!r})"


class PdfChannel:
    """Channel ``c = integral of u``: ``c(p)(N) = int_N u(p, y) dy``."""

    def __init__(self, kernel, out_support, name="", state_name=None):
        self.kernel = kernel
        self.out_support = out_support
        self.name = name
        self._state_name = state_name

    def support_at(self, p):
        return self.out_support(p) if callable(self.out_support) else self.out_support

    def __call__(self, p) -> PdfState:
        name = self._state_name(p) if self._state_name else f"{self.name}({p!r})"
        return PdfState(lambda y, p=p: self.kernel(p, y), self.support_at(p), name=name, params=p)

    def density(self, p, y):
        return self.kernel(p, y)

    def prob(self, p, region, cfg: QuadConfig = DEFAULT_CONFIG) -> float:
        return self(p).mass(region, cfg)

    def __repr__(self):
        return f"PdfChannel({self.name})"


class LikelihoodChannel:
    """Statistical model ``d = integral of v`` with a finite or real observation space."""

    def __init__(self, kernel, obs_space, name=""):
        if not isinstance(obs_space, (FiniteObs, RealObs)):
            raise DomainError("obs_space must be FiniteObs or RealObs")
        self.kernel = kernel
        self.obs_space = obs_space
        self.name = name

    @property
    def is_finite(self) -> bool:
        return isinstance(self.obs_space, FiniteObs)

    @property
    def labels(self) -> tuple:
        return self.obs_space.labels

    def check_label(self, y):
        if self.is_finite and y not in self.obs_space.labels:
            raise UnknownLabel(y)

    def support_at(self, x) -> Interval:
        return self.obs_space.window_at(x)

    def __call__(self, x):
        if self.is_finite:
            w = [float(np.asarray(self.kernel(x, y)).ravel()[0]) for y in self.labels]
            return FiniteDist.from_array(self.labels, w)
        win = self.support_at(x)
        return PdfState(lambda y, x=x: self.kernel(x, y), win, name=f"{self.name}({x!r})")

    def likelihood(self, y) -> RandVarC:
        """``v(-, y)`` as a random variable on the input carrier."""
        self.check_label(y)
        return RandVarC(lambda x, y=y: self.kernel(x, y), f"{self.name}(-,{y!r})")

    def prob(self, x, region, cfg: QuadConfig = DEFAULT_CONFIG):
        """``d(x)(region)``, vectorised over ``x``."""
        if self.is_finite:
            labels = self.labels if region is None else [y for y in self.labels if y in set(region)]
            for y in labels:
                self.check_label(y)
            acc = 0.0
            for y in labels:
                acc = acc + self.kernel(x, y)
            return acc
        return _pointwise(lambda xi: self(xi).mass(region, cfg), x)

    def __repr__(self):
        return f"LikelihoodChannel({self.name})"


def _pointwise(fn, x):
    x_arr = np.asarray(x, dtype=float)
    if x_arr.ndim == 0:
        return fn(float(x_arr))
    return np.array([fn(float(xi)) for xi in x_arr])


def _pointwise2(fn, x, z):
    """``fn`` on scalars, broadcast over arrays ``x`` and ``z``."""
    xa, za = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(z, dtype=float))
    if xa.ndim == 0:
        return fn(float(xa), float(za))
    return np.array([fn(float(a), float(b)) for a, b in zip(xa.ravel(), za.ravel())]).reshape(xa.shape)


class IdentityChannel:
    """``eta`` on a real carrier."""

    def __init__(self, support: Interval | None = None):
        self.support = support

    def __call__(self, x) -> PointState:
        return PointState(x, self.support)

    def prob(self, x, region, cfg: QuadConfig = DEFAULT_CONFIG):
        if region is None:
            return np.ones(np.shape(x)) if np.ndim(x) else 1.0
        return np.asarray(_region_indicator(region)(x), dtype=float)


class DeterministicChannel:
    """``eta after g`` for a measurable function ``g``."""

    def __init__(self, g, out_support: Interval | None = None, name="g"):
        self.g = g
        self.out_support = out_support
        self.name = name

    def __call__(self, x) -> PointState:
        return PointState(float(np.asarray(self.g(np.array([x]))).ravel()[0]), self.out_support)

    def prob(self, x, region, cfg: QuadConfig = DEFAULT_CONFIG):
        gx = self.g(_as_array(x))
        if region is None:
            return np.ones(np.shape(gx))
        return np.asarray(_region_indicator(region)(gx), dtype=float)


class PushforwardState:
    """``G(g)(omega)``: integrals reduce to ``int r o g d omega``."""

    def __init__(self, base, g, support: Interval | None = None):
        self.base = base
        self.g = g
        self.support = support

    def expect(self, r, region=None, cfg: QuadConfig = DEFAULT_CONFIG) -> float:
        ind = _region_indicator(region)
        if ind is None:
            return expect(self.base, lambda x: r(self.g(x)), None, cfg)
        return expect(self.base, lambda x: r(self.g(x)), lambda x: ind(self.g(x)), cfg)

    def mass(self, region=None, cfg: QuadConfig = DEFAULT_CONFIG) -> float:
        return self.expect(lambda y: np.ones(np.shape(y)), region, cfg)

    def cdf(self, t: float, cfg: QuadConfig = DEFAULT_CONFIG) -> float:
        return self.mass(lambda y: np.asarray(y) <= t, cfg)


class JointState:
    """Measure on a product carrier, known through its values on rectangles."""

    def __init__(self, rect_mass, name=""):
        self._rect_mass = rect_mass
        self.name = name

    def mass(self, M=None, N=None, cfg: QuadConfig = DEFAULT_CONFIG) -> float:
        return self._rect_mass(M, N, cfg)

    def __repr__(self):
        return f"JointState({self.name})"


class ProductState(JointState):
    """``omega (x) rho`` for two states on real carriers."""

    def __init__(self, omega, rho):
        super().__init__(lambda M, N, cfg: mass(omega, M, cfg) * mass(rho, N, cfg),
                         f"{getattr(omega, 'name', '')} (x) {getattr(rho, 'name', '')}")
        self.omega = omega
        self.rho = rho

    def expect(self, h, cfg: QuadConfig = DEFAULT_CONFIG) -> float:
        """``int h d(omega (x) rho)`` as one two-dimensional integral of ``f(x) g(y) h(x, y)``."""
        if not (isinstance(self.omega, PdfState) and isinstance(self.rho, PdfState)):
            raise DomainError("product integration needs two pdf states")
        f, g = self.omega.density, self.rho.density
        return integrate_2d(
            lambda x, y: f(x.ravel()).reshape(x.shape) * g(y.ravel()).reshape(y.shape) * h(x, y),
            self.omega.support, self.rho.support, cfg,
        )


def product_state(omega, rho) -> ProductState:
    return ProductState(omega, rho)


def iterated_expect(omega, rho, h, cfg: QuadConfig = DEFAULT_CONFIG) -> float:
    """``int (int h(x, y) d omega(x)) d rho(y)``."""
    def inner(y):
        return _pointwise(lambda yi: expect(omega, lambda x: h(x, np.full_like(x, yi)), None, cfg), y)
    return expect(rho, inner, None, cfg)


def copy_mass(omega, M, N, cfg: QuadConfig = DEFAULT_CONFIG) -> float:
    """``(copy >> omega)(M x N) = omega(M & N)``."""
    if isinstance(omega, FiniteDist):
        return omega.mass(set(M) & set(N))
    if isinstance(M, Interval) and isinstance(N, Interval):
        both = M.intersect(N)
        if both is None:
            # closed intervals touching in a point
            if M.hi == N.lo or N.hi == M.lo:
                pt = M.hi if M.hi == N.lo else N.hi
                return mass(omega, lambda x: np.asarray(x) == pt, cfg) if isinstance(omega, PointState) else 0.0
            return 0.0
        return mass(omega, both, cfg)
    im, inn = _region_indicator(M), _region_indicator(N)
    return mass(omega, lambda x: im(x) & inn(x), cfg)


# --------------------------------------------------------------- operations


def _out_support(c, omega):
    if isinstance(c, PdfChannel):
        if not callable(c.out_support):
            return c.out_support
        get = c.support_at
    else:
        get = c.support_at
    sup = getattr(omega, "support", None)
    if isinstance(omega, FiniteDist):
        wins = [get(x) for x in omega.support]
    elif isinstance(omega, PointState):
        wins = [get(omega.x)]
    elif isinstance(sup, Interval):
        wins = [get(sup.lo), get(sup.hi)]
    else:
        raise DomainError("cannot determine the output support")
    out = wins[0]
    for w in wins[1:]:
        out = out.hull(w)
    return out


def norm_tolerance(state) -> float:
    """Normalisation tolerance: Monte Carlo simplex integrals only reach ~1e-3."""
    sup = getattr(state, "support", None)
    return MC_NORM_TOL if isinstance(sup, Simplex) and sup.n > 2 else NORM_TOL


def push_pdf(c, omega, cfg: QuadConfig = DEFAULT_CONFIG, *, verify: bool = True):
    """State transformation ``c >> omega``.

    Finite observation spaces give a ``FiniteDist``; pdf outputs give a
    ``PdfState`` with density ``y -> int f(x) u(x, y) dx`` whose normalisation
    is re-verified (``verify=False`` skips that for nested compositions, where
    it costs a full extra level of quadrature); deterministic channels give a
    ``PushforwardState``.
    """
    if isinstance(c, IdentityChannel):
        return omega
    if isinstance(c, DeterministicChannel):
        return PushforwardState(omega, c.g, c.out_support)
    if isinstance(c, LikelihoodChannel) and c.is_finite:
        w = np.array([expect(omega, c.likelihood(y), None, cfg) for y in c.labels])
        if abs(w.sum() - 1.0) > norm_tolerance(omega):
            raise NonConvergent(f"pushed weights sum to {w.sum()!r}")
        return FiniteDist.from_array(c.labels, w / w.sum())
    if not isinstance(c, (PdfChannel, LikelihoodChannel)):
        raise CarrierMismatch(f"cannot push through {c!r}")

    def density(y):
        return _pointwise(lambda yi: expect(omega, lambda x: c.kernel(x, yi), None, cfg), y)

    support = _out_support(c, omega)
    name = f"{getattr(c, 'name', 'c')} >> {getattr(omega, 'name', 'omega')}"
    out = PdfState(density, support, name=name)
    if not verify:
        return out
    total = out.mass(None, cfg)
    if abs(total - 1.0) > NORM_TOL:
        raise NonConvergent(f"pushed density integrates to {total!r}")
    out.norm_checked = True
    out.norm_error = abs(total - 1.0)
    return out


def compose_pdf(d, c, cfg: QuadConfig = DEFAULT_CONFIG) -> PdfChannel:
    """``d after c`` with kernel ``(x, z) -> int u(x, y) v(y, z) dy``."""
    def kernel(x, z):
        return _pointwise2(
            lambda xi, zi: integrate_1d(lambda y: c.kernel(xi, y) * d.kernel(y, zi), c.support_at(xi), cfg), x, z)

    def spread(x):
        win = c.support_at(x)
        return d.support_at(win.lo).hull(d.support_at(win.hi))

    fixed = not callable(d.out_support if isinstance(d, PdfChannel) else d.obs_space.window)
    return PdfChannel(kernel, d.support_at(None) if fixed else spread, name=f"{d.name} o {c.name}")


def graph_compose(d: PdfChannel, c, cfg: QuadConfig = DEFAULT_CONFIG) -> PdfChannel:
    """``d after <id, c>`` for ``d : X x Y -> Z``; kernel ``(x, z) -> int u(x, y) v(x, y, z) dy``.

    ``d.kernel`` receives the pair ``(x, y)`` as its parameter with ``y`` an array.
    """
    def kernel(x, z):
        return _pointwise2(
            lambda xi, zi: integrate_1d(lambda y: c.kernel(xi, y) * d.kernel((xi, y), zi), c.support_at(xi), cfg),
            x, z)

    def support(x):
        win = c.support_at(x)
        return d.support_at((x, win.lo)).hull(d.support_at((x, win.hi)))

    return PdfChannel(kernel, support, name=f"{d.name} o <id, {c.name}>")


def graph_push(c, omega, *, swap: bool = False, cfg: QuadConfig = DEFAULT_CONFIG) -> JointState:
    """Joint state ``<id, c> >> omega`` (or ``<c, id> >> omega`` with ``swap``).

    ``mass(M, N)`` is ``int_M c(x)(N) d omega(x)``; with ``swap`` the first
    rectangle side refers to the output of ``c`` and the second to its input.
    """
    def rect(M, N, cfg_):
        inside, outside = (N, M) if swap else (M, N)
        return expect(omega, lambda x: c.prob(x, outside, cfg_), inside, cfg_)

    label = "<c, id>" if swap else "<id, c>"
    return JointState(rect, f"{label} >> {getattr(omega, 'name', 'omega')}")


def validity_pdf(omega, r, cfg: QuadConfig = DEFAULT_CONFIG) -> float:
    """``omega |= r``, the expected value of ``r``."""
    return expect(omega, r, None, cfg)


def pull_pdf(c, r, cfg: QuadConfig = DEFAULT_CONFIG) -> RandVarC:
    """Predicate transformation ``c << r``: ``x -> int r d c(x)``."""
    if isinstance(c, LikelihoodChannel) and c.is_finite:
        if isinstance(r, RandVarD):
            if r.space != c.labels:
                raise CarrierMismatch("random variable carrier differs from the observation space")
            coeffs = [(y, r(y)) for y in c.labels]
        else:
            coeffs = [(y, float(r(y))) for y in c.labels]

        def pulled(x):
            acc = 0.0
            for y, ry in coeffs:
                if ry != 0.0:
                    acc = acc + ry * c.kernel(x, y)
            return acc + 0.0 * np.sum(np.atleast_1d(x), axis=-1) if np.ndim(x) > 1 else acc + 0.0 * _as_array(x)

        return RandVarC(pulled, f"{c.name} << {getattr(r, 'name', 'r')}")

    def pulled_real(x):
        if isinstance(x, tuple) or np.ndim(x) > 1:
            raise DomainError("real-observation pull-back expects scalar inputs")
        return _pointwise(lambda xi: integrate_1d(lambda y: c.kernel(xi, y) * r(y), c.support_at(xi), cfg), x)

    return RandVarC(pulled_real, f"{c.name} << r")


def update_pdf(omega, r, cfg: QuadConfig = DEFAULT_CONFIG) -> PdfState:
    """Conditioned state ``omega|_r`` with density ``f r / (omega |= r)``.

    The normalising validity is computed once and kept in the closure.
    """
    if not isinstance(omega, PdfState):
        raise DomainError("update_pdf needs a pdf state")
    z = validity_pdf(omega, r, cfg)
    if not z > ZERO_VALIDITY:
        raise ZeroValidity(f"validity {z!r} is zero; cannot condition")
    f = omega.density
    return PdfState(lambda x: f(x) * r(x) / z, omega.support,
                    name=f"{omega.name}|{getattr(r, 'name', 'r')}")


def inversion_pdf(c: LikelihoodChannel, omega: PdfState, y, cfg: QuadConfig = DEFAULT_CONFIG) -> PdfState:
    """Posterior ``c^dagger_omega(y)``: density ``f(x) v(x, y) / int f v``."""
    if isinstance(c, LikelihoodChannel):
        c.check_label(y)
    f = omega.density

    def joint(x):
        return f(x) * c.kernel(x, y)

    z = _integrate_density(PdfState(joint, omega.support), lambda x: 1.0, None, cfg)
    if not z > ZERO_VALIDITY:
        raise ZeroMassObservation(f"observation {y!r} has zero predicted mass")
    return PdfState(lambda x: joint(x) / z, omega.support, name=f"{omega.name}|{y!r}")


class InversionChannel:
    """The channel ``y -> c^dagger_omega(y)`` from observations back to the carrier of omega."""

    def __init__(self, c, omega, cfg: QuadConfig = DEFAULT_CONFIG):
        self.c = c
        self.omega = omega
        self.cfg = cfg
        self._cache = {}

    def __call__(self, y) -> PdfState:
        key = float(y) if not self.c.is_finite else y
        if key not in self._cache:
            self._cache[key] = inversion_pdf(self.c, self.omega, y, self.cfg)
        return self._cache[key]

    def prob(self, y, region, cfg: QuadConfig = DEFAULT_CONFIG):
        if self.c.is_finite:
            return self(y).mass(region, cfg)
        return _pointwise(lambda yi: self(yi).mass(region, cfg), y)


def inversion_channel(c, omega, cfg: QuadConfig = DEFAULT_CONFIG) -> InversionChannel:
    return InversionChannel(c, omega, cfg)
