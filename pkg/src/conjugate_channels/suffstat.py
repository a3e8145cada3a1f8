"""Multiple-observation updating and sufficient statistics ``(s, t, q)``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Any, Callable

import numpy as np

from .conjugacy import CheckReport, state_distance
from .continuous import LikelihoodChannel, PdfState, RandVarC, update_pdf
from .errors import DomainError, UnknownLabel
from .families import NoiseLevel
from .numerics import DEFAULT_CONFIG, Interval, QuadConfig, SeededSampler, simplex_sample

MAX_BATCH = 1000


@dataclass(frozen=True)
class ObsBatch:
    observations: tuple

    def __post_init__(self):
        obs = tuple(self.observations)
        if not obs:
            raise DomainError("a batch needs at least one observation")
        if len(obs) > MAX_BATCH:
            raise DomainError(f"batches are capped at {MAX_BATCH} observations")
        object.__setattr__(self, "observations", obs)

    def __len__(self):
        return len(self.observations)

    def __iter__(self):
        return iter(self.observations)

    def check_against(self, model: LikelihoodChannel) -> ObsBatch:
        if model.is_finite:
            for y in self.observations:
                if y not in model.labels:
                    raise UnknownLabel(y)
        else:
            for y in self.observations:
                if not math.isfinite(float(y)):
                    raise DomainError(f"observation {y!r} is not a finite real")
        return self


@dataclass(frozen=True)
class CountSummary:
    """Summary ``(n1, n0)`` of a 0/1 batch."""
    n1: int
    n0: int


@dataclass(frozen=True)
class SumSummary:
    """Summary ``(m, sum y)`` of a real batch."""
    m: int
    total: float


@dataclass(frozen=True)
class SuffStat:
    """``p(x, ys) = s(ys) * q(x, t(ys))`` for batches of length ``m``."""

    s: Callable[[tuple], float]
    t: Callable[[tuple], Any]
    q: Callable[[Any, Any], Any]
    m: int
    name: str = ""
    log_q: Callable[[Any, Any], Any] | None = None

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise DomainError("a sufficient statistic needs m >= 1")

    def summary(self, batch) -> Any:
        ys = tuple(batch)
        if len(ys) != self.m:
            raise DomainError(f"{self.name} expects {self.m} observations, got {len(ys)}")
        return self.t(ys)


def _log_likelihood(model: LikelihoodChannel, batch: ObsBatch):
    def ll(x):
        acc = 0.0
        with np.errstate(divide="ignore"):
            for y in batch:
                acc = acc + np.log(model.kernel(x, y))
        return acc
    return ll


def conjunction_likelihood(model: LikelihoodChannel, batch) -> RandVarC:
    """``x -> prod_i v(x, y_i)``, accumulated in log space."""
    batch = batch if isinstance(batch, ObsBatch) else ObsBatch(tuple(batch))
    batch.check_against(model)
    ll = _log_likelihood(model, batch)
    return RandVarC(lambda x: np.exp(ll(x)), f"&{model.name}{list(batch.observations)}")


def _probe_points(support, cfg: QuadConfig):
    if isinstance(support, Interval):
        return support.grid(101)[1:-1]
    return simplex_sample(support.n, 256, SeededSampler(cfg.seed))[:, :-1]


def _scaled(log_fn, support, cfg: QuadConfig) -> RandVarC:
    """``exp(log_fn - c)`` with ``c`` the largest value on a fixed probe set.

    Updating is invariant under the positive constant, which keeps long
    conjunctions from underflowing.
    """
    vals = np.asarray(log_fn(_probe_points(support, cfg)), dtype=float)
    finite = vals[np.isfinite(vals)]
    c = float(finite.max()) if finite.size else 0.0
    return RandVarC(lambda x: np.exp(log_fn(x) - c))


def multi_update(prior: PdfState, model: LikelihoodChannel, batch, cfg: QuadConfig = DEFAULT_CONFIG) -> PdfState:
    """One update of ``prior`` by the conjunction of the batch's likelihoods."""
    batch = batch if isinstance(batch, ObsBatch) else ObsBatch(tuple(batch))
    batch.check_against(model)
    return update_pdf(prior, _scaled(_log_likelihood(model, batch), prior.support, cfg), cfg)


def fold_updates(prior: PdfState, model: LikelihoodChannel, batch, cfg: QuadConfig = DEFAULT_CONFIG) -> PdfState:
    """Successive single-observation updates, in batch order."""
    return reduce(lambda st, y: update_pdf(st, model.likelihood(y), cfg), batch, prior)


def fold_translator(h, p, batch):
    return reduce(h, batch, p)


# --------------------------------------------------------------- statistics


def beta_flip_stat(m: int) -> SuffStat:
    """Counts ``t = (n1, n0)``, ``q(x, (n, n')) = x^n (1-x)^n'``, ``s = 1``."""
    def t(ys):
        n1 = sum(1 for y in ys if y == 1)
        if any(y not in (0, 1) for y in ys):
            raise UnknownLabel(next(y for y in ys if y not in (0, 1)))
        return CountSummary(n1, len(ys) - n1)

    def q(x, z):
        x = np.asarray(x, dtype=float)
        return x ** z.n1 * (1.0 - x) ** z.n0

    def log_q(x, z):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            a = z.n1 * np.log(x) if z.n1 else np.zeros_like(x)
            b = z.n0 * np.log1p(-x) if z.n0 else np.zeros_like(x)
        return a + b

    return SuffStat(lambda ys: 1.0, t, q, m, "beta-flip", log_q)


def normal_stat(m: int, nu: NoiseLevel) -> SuffStat:
    """``s = (2 pi nu^2)^(-m/2) exp(-sum y^2 / 2nu^2)``, ``t = sum y``, ``q(x, z) = exp((2zx - mx^2)/2nu^2)``."""
    v2 = nu.nu ** 2

    def s(ys):
        ys = np.asarray(ys, dtype=float)
        return (2.0 * math.pi * v2) ** (-len(ys) / 2.0) * math.exp(-float(np.dot(ys, ys)) / (2.0 * v2))

    def t(ys):
        return SumSummary(len(ys), math.fsum(float(y) for y in ys))

    def log_q(x, z):
        x = np.asarray(x, dtype=float)
        return (2.0 * z.total * x - z.m * x * x) / (2.0 * v2)

    return SuffStat(s, t, lambda x, z: np.exp(log_q(x, z)), m, "normal", log_q)


# ------------------------------------------------------------------- checks


def check_factorization(stat: SuffStat, model: LikelihoodChannel, batch, x_probes,
                        tolerance: float = 1e-9) -> CheckReport:
    """Largest relative error of ``prod_i v(x, y_i) = s(ys) q(x, t(ys))`` over the probes."""
    ys = tuple(batch)
    x_probes = np.atleast_1d(np.asarray(x_probes, dtype=float))
    if x_probes.size == 0:
        raise DomainError("x_probes must be non-empty")
    z = stat.summary(ys)
    sv = stat.s(ys)
    errors = []
    for x in x_probes:
        direct = 1.0
        for y in ys:
            direct *= float(np.asarray(model.kernel(np.array([x]), y)).ravel()[0])
        fact = sv * float(np.asarray(stat.q(np.array([x]), z)).ravel()[0])
        err = abs(direct - fact) / abs(direct) if direct != 0 else abs(fact)
        errors.append((float(x), err))
    return CheckReport.from_errors(f"factorization:{stat.name}(m={stat.m})", tolerance, errors)


def stat_update(stat: SuffStat, prior: PdfState, batch, cfg: QuadConfig = DEFAULT_CONFIG) -> PdfState:
    """``prior|_{q(-, t(ys))}``; the factor ``s(ys)`` drops out."""
    z = stat.summary(batch)
    if stat.log_q is not None:
        r = _scaled(lambda x: stat.log_q(x, z), prior.support, cfg)
    else:
        r = RandVarC(lambda x: stat.q(x, z))
    return update_pdf(prior, r, cfg)


def check_stat_update_equiv(stat: SuffStat, prior: PdfState, model: LikelihoodChannel, batch,
                            cfg: QuadConfig = DEFAULT_CONFIG, tolerance: float = 1e-6) -> CheckReport:
    """Update by the full conjunction versus update by ``q(-, t(ys))``."""
    a = multi_update(prior, model, batch, cfg)
    b = stat_update(stat, prior, batch, cfg)
    return CheckReport.from_errors(f"stat_update:{stat.name}(m={stat.m})", tolerance,
                                   [(tuple(batch), state_distance(a, b, cfg))])
