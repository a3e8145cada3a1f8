"""Concrete channels: Beta, Flip, Binomial, Dirichlet, Multinomial, Normal,
and their parameter translation functions ``h``."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .continuous import FiniteObs, LikelihoodChannel, PdfChannel, RealObs
from .errors import DomainError, UnknownLabel
from .numerics import Interval, Simplex, log_beta_fn, log_binomial, log_gamma

UNIT = Interval(0.0, 1.0)
GAUSS_SIGMAS = 12.0


def _positive(name, value):
    value = float(value)
    if not (value > 0 and math.isfinite(value)):
        raise DomainError(f"{name} must be a finite positive real, got {value!r}")
    return value


@dataclass(frozen=True)
class BetaParams:
    alpha: float
    beta: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", _positive("alpha", self.alpha))
        object.__setattr__(self, "beta", _positive("beta", self.beta))

    def __iter__(self):
        return iter((self.alpha, self.beta))


@dataclass(frozen=True)
class BinomConfig:
    n: int

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise DomainError(f"number of trials must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))


@dataclass(frozen=True)
class DirichletParams:
    alphas: tuple

    def __post_init__(self):
        alphas = tuple(_positive("alpha_i", a) for a in self.alphas)
        if len(alphas) < 2:
            raise DomainError("a Dirichlet needs at least two coordinates")
        object.__setattr__(self, "alphas", alphas)

    @property
    def n(self) -> int:
        return len(self.alphas)


@dataclass(frozen=True)
class NormalParams:
    mu: float
    sigma: float

    def __post_init__(self):
        mu = float(self.mu)
        if not math.isfinite(mu):
            raise DomainError(f"mu must be finite, got {mu!r}")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "sigma", _positive("sigma", self.sigma))

    def __iter__(self):
        return iter((self.mu, self.sigma))


@dataclass(frozen=True)
class NoiseLevel:
    nu: float

    def __post_init__(self):
        object.__setattr__(self, "nu", _positive("nu", self.nu))


def _xlogy(a, x):
    """``a * log(x)`` with the convention ``0 * log(0) = 0``."""
    x = np.asarray(x, dtype=float)
    if a == 0:
        return np.zeros_like(x)
    with np.errstate(divide="ignore"):
        return a * np.log(x)


# ------------------------------------------------------------------ channels


def beta_density(p: BetaParams):
    a, b = p.alpha, p.beta
    lb = log_beta_fn(a, b)

    def f(x):
        x = np.asarray(x, dtype=float)
        with np.errstate(invalid="ignore", over="ignore"):
            return np.exp(_xlogy(a - 1.0, x) + _xlogy(b - 1.0, 1.0 - x) - lb)
    return f


def beta_channel() -> PdfChannel:
    """``Beta : R>0 x R>0 -> [0, 1]``."""
    def kernel(p, x):
        return beta_density(_as_beta(p))(x)
    return PdfChannel(kernel, UNIT, name="Beta",
                      state_name=lambda p: "Beta({:g},{:g})".format(*_as_beta(p)))


def _as_beta(p) -> BetaParams:
    return p if isinstance(p, BetaParams) else BetaParams(*p)


def flip_channel() -> LikelihoodChannel:
    """``Flip(r) = r|1> + (1-r)|0>``."""
    def kernel(x, i):
        x = np.asarray(x, dtype=float)
        return x if i == 1 else 1.0 - x
    return LikelihoodChannel(kernel, FiniteObs([0, 1]), name="Flip")


def binom_channel(cfg: BinomConfig) -> LikelihoodChannel:
    n = cfg.n

    def kernel(x, i):
        x = np.asarray(x, dtype=float)
        with np.errstate(invalid="ignore", over="ignore"):
            return np.exp(log_binomial(n, i) + _xlogy(i, x) + _xlogy(n - i, 1.0 - x))
    return LikelihoodChannel(kernel, FiniteObs(range(n + 1)), name=f"Binom{n}")


def dirichlet_density(p: DirichletParams):
    alphas = np.array(p.alphas)
    log_norm = log_gamma(float(alphas.sum())) - sum(log_gamma(a) for a in alphas)
    simplex = Simplex(p.n)

    def f(pts):
        full = simplex.complete(pts)
        acc = np.full(len(full), log_norm)
        for i, a in enumerate(alphas):
            acc = acc + _xlogy(a - 1.0, full[:, i])
        with np.errstate(invalid="ignore", over="ignore"):
            return np.exp(acc)
    return f


def dirichlet_channel(n: int) -> PdfChannel:
    """``Dir_n`` with density on the first ``n-1`` coordinates (the last is ``1 - sum``)."""
    if int(n) != n or n < 2:
        raise DomainError(f"Dirichlet dimension must be an integer >= 2, got {n!r}")
    simplex = Simplex(int(n))

    def kernel(p, pts):
        p = p if isinstance(p, DirichletParams) else DirichletParams(tuple(p))
        if p.n != simplex.n:
            raise DomainError(f"expected {simplex.n} parameters, got {p.n}")
        return dirichlet_density(p)(pts)
    return PdfChannel(kernel, simplex, name=f"Dir{n}",
                      state_name=lambda p: "Dir({})".format(",".join(f"{a:g}" for a in getattr(p, "alphas", p))))


def mult_channel(labels) -> LikelihoodChannel:
    """``Mult(x) = sum_i x_i |y_i>``; ``labels`` are ``y_0 .. y_{n-1}`` in coordinate order."""
    labels = tuple(labels)
    if len(labels) < 2 or len(set(labels)) != len(labels):
        raise DomainError("need at least two distinct labels")
    simplex = Simplex(len(labels))
    position = {y: i for i, y in enumerate(labels)}

    def kernel(x, y):
        if y not in position:
            raise UnknownLabel(y)
        full = simplex.complete(x)
        return full[:, position[y]]
    ch = LikelihoodChannel(kernel, FiniteObs(labels), name="Mult")
    ch.coordinate_labels = labels
    return ch


def _gauss(x, mu, sd):
    z = (np.asarray(x, dtype=float) - mu) / sd
    return np.exp(-0.5 * z * z) / (sd * math.sqrt(2.0 * math.pi))


def normal_channel(sigmas: float = GAUSS_SIGMAS) -> PdfChannel:
    """``Norm : R x R>0 -> R``, truncated to ``mu +- sigmas*sigma`` for quadrature."""
    def support(p):
        p = _as_normal(p)
        return Interval(p.mu - sigmas * p.sigma, p.mu + sigmas * p.sigma)

    def kernel(p, x):
        p = _as_normal(p)
        return _gauss(x, p.mu, p.sigma)
    return PdfChannel(kernel, support, name="Norm",
                      state_name=lambda p: "Norm({:g},{:g})".format(*_as_normal(p)))


def _as_normal(p) -> NormalParams:
    return p if isinstance(p, NormalParams) else NormalParams(*p)


def normal_likelihood(nu: NoiseLevel, sigmas: float = GAUSS_SIGMAS) -> LikelihoodChannel:
    """``x -> Norm(x, nu)``; the observation window is ``x +- sigmas*nu``."""
    sd = nu.nu

    def kernel(x, y):
        return _gauss(y, x, sd)
    ch = LikelihoodChannel(kernel, RealObs(lambda x: Interval(x - sigmas * sd, x + sigmas * sd)),
                           name=f"Norm(-,{sd:g})")
    ch.noise = nu
    return ch


# --------------------------------------------------------------- translators


def h_beta_flip(p: BetaParams, i) -> BetaParams:
    if i not in (0, 1):
        raise UnknownLabel(i)
    return BetaParams(p.alpha + i, p.beta + (1 - i))


def h_beta_binom(p: BetaParams, cfg: BinomConfig, i) -> BetaParams:
    if isinstance(i, bool) or int(i) != i or not 0 <= i <= cfg.n:
        raise DomainError(f"observation {i!r} outside 0..{cfg.n}")
    return BetaParams(p.alpha + i, p.beta + cfg.n - i)


def h_dirichlet(p: DirichletParams, y, labels) -> DirichletParams:
    labels = tuple(labels)
    if y not in labels:
        raise UnknownLabel(y)
    if len(labels) != p.n:
        raise DomainError("alphabet size differs from the number of parameters")
    k = labels.index(y)
    return DirichletParams(tuple(a + (1.0 if j == k else 0.0) for j, a in enumerate(p.alphas)))


def h_normal(p: NormalParams, nu: NoiseLevel, y: float) -> NormalParams:
    s2, n2 = p.sigma ** 2, nu.nu ** 2
    return NormalParams((p.mu * n2 + float(y) * s2) / (n2 + s2),
                        nu.nu * p.sigma / math.sqrt(n2 + s2))
