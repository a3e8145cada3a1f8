"""Executable conjugacy checks: the pointwise conjugate-prior law, agreement of
translated posteriors with Bayesian inversion and with updating, and
copy-commutation of states."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any, Callable

import numpy as np

from .continuous import (
    LikelihoodChannel,
    PdfChannel,
    PdfState,
    PointState,
    copy_mass,
    inversion_pdf,
    mass,
    pull_pdf,
    update_pdf,
    validity_pdf,
)
from .discrete import FiniteDist, point_predicate
from .errors import CarrierMismatch, DomainError
from .families import (
    BetaParams,
    BinomConfig,
    DirichletParams,
    NoiseLevel,
    NormalParams,
    beta_channel,
    binom_channel,
    dirichlet_channel,
    flip_channel,
    h_beta_binom,
    h_beta_flip,
    h_dirichlet,
    h_normal,
    mult_channel,
    normal_channel,
    normal_likelihood,
)
from .numerics import DEFAULT_CONFIG, Interval, QuadConfig, Simplex, integrate_simplex

LAW_TOL = 1e-6
NORMAL_LAW_TOL = 1e-5
EQUIV_TOL = 1e-6
MC_TOL = 1e-2
PARAM_TOL = 1e-9
N_CELLS = 8
GRID_POINTS = 101
CDF_PROBES = 11


@dataclass(frozen=True)
class CheckReport:
    check_name: str
    probes: int
    max_abs_err: float
    tolerance: float
    passed: bool
    probe_errors: tuple = field(default=(), compare=False, repr=False)

    @classmethod
    def from_errors(cls, name, tolerance, probe_errors) -> CheckReport:
        """``probe_errors`` is a sequence of ``(probe, err)`` in fixed probe order."""
        probe_errors = tuple(probe_errors)
        errs = [e for _, e in probe_errors]
        worst = max(errs) if errs else 0.0
        # NaN never passes
        passed = bool(errs) and all(e <= tolerance for e in errs)
        return cls(name, len(errs), float(worst), float(tolerance), passed, probe_errors)

    def verdicts(self) -> list[bool]:
        return [e <= self.tolerance for _, e in self.probe_errors]

    def to_dict(self) -> dict:
        return {
            "check_name": self.check_name,
            "probes": self.probes,
            "max_abs_err": self.max_abs_err,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag}  {self.check_name:<44} probes={self.probes:<4d} max_err={self.max_abs_err:.3e} tol={self.tolerance:.0e}"


@dataclass(frozen=True)
class ConjugatePair:
    """Composable pair ``P -> X -> O`` with its translator ``h(p, y)``."""

    name: str
    prior: PdfChannel
    model: LikelihoodChannel
    translator: Callable[[Any, Any], Any]
    param_probe_grid: tuple
    obs_probe_set: tuple
    law_tol: float = LAW_TOL
    equiv_tol: float = EQUIV_TOL
    shift: Callable[[Any, float], Any] | None = None

    def __post_init__(self):
        if not self.param_probe_grid or not self.obs_probe_set:
            raise DomainError("probe grids must be non-empty")

    @property
    def monte_carlo(self) -> bool:
        sup = self.prior.out_support
        return isinstance(sup, Simplex) and sup.n > 2

    def probes(self):
        for p in self.param_probe_grid:
            for y in self.obs_probe_set:
                yield p, y

    def with_translator(self, translator, suffix="bad") -> ConjugatePair:
        return replace(self, name=f"{self.name}[{suffix}]", translator=translator)

    def perturbed(self, delta: float = 0.5) -> ConjugatePair:
        """Negative control: translator output shifted by ``delta`` in its first parameter."""
        if self.shift is None:
            raise DomainError(f"no perturbation defined for {self.name}")
        h, shift = self.translator, self.shift
        return self.with_translator(lambda p, y: shift(h(p, y), delta), f"shift+{delta:g}")


# -------------------------------------------------------------- the pairs


def _beta_shift(p, d):
    return BetaParams(p.alpha + d, p.beta)


def _beta_grid(values=(0.5, 1.0, 2.0, 5.0)):
    return tuple(BetaParams(a, b) for a in values for b in values)


def beta_flip_pair(values=(0.5, 1.0, 2.0, 5.0)) -> ConjugatePair:
    return ConjugatePair("beta-flip", beta_channel(), flip_channel(), h_beta_flip,
                         _beta_grid(values), (0, 1), shift=_beta_shift)


def beta_binom_pair(n: int, values=(0.5, 1.0, 2.0, 5.0)) -> ConjugatePair:
    cfg = BinomConfig(n)
    return ConjugatePair(f"beta-binom(n={n})", beta_channel(), binom_channel(cfg),
                         lambda p, i: h_beta_binom(p, cfg, i),
                         _beta_grid(values), tuple(range(n + 1)), shift=_beta_shift)


DIRICHLET_LABELS = ("y0", "y1", "y2")


def dirichlet_mult_pair(grid=((1.0, 1.0, 1.0), (2.0, 3.0, 4.0)), labels=DIRICHLET_LABELS) -> ConjugatePair:
    labels = tuple(labels)
    return ConjugatePair(
        "dirichlet-mult", dirichlet_channel(len(labels)), mult_channel(labels),
        lambda p, y: h_dirichlet(p, y, labels),
        tuple(DirichletParams(tuple(a)) for a in grid), labels,
        law_tol=MC_TOL, equiv_tol=MC_TOL,
        shift=lambda p, d: DirichletParams((p.alphas[0] + d,) + p.alphas[1:]),
    )


def normal_normal_pair(nu: float, mus=(-2.0, 0.0, 3.0), sigmas=(0.5, 1.0, 2.0),
                       obs=(-1.0, 0.0, 2.0, 5.0)) -> ConjugatePair:
    noise = NoiseLevel(nu)
    return ConjugatePair(
        f"normal-normal(nu={nu:g})", normal_channel(), normal_likelihood(noise),
        lambda p, y: h_normal(p, noise, y),
        tuple(NormalParams(m, s) for m in mus for s in sigmas), tuple(float(y) for y in obs),
        law_tol=NORMAL_LAW_TOL,
        shift=lambda p, d: NormalParams(p.mu + d, p.sigma),
    )


FAMILIES = ("beta-flip", "beta-binom", "dirichlet-mult", "normal-normal")


def default_pairs(family: str = "all") -> list[ConjugatePair]:
    table = {
        "beta-flip": lambda: [beta_flip_pair()],
        "beta-binom": lambda: [beta_binom_pair(n) for n in (1, 4, 10)],
        "dirichlet-mult": lambda: [dirichlet_mult_pair()],
        "normal-normal": lambda: [normal_normal_pair(nu) for nu in (0.5, 1.0)],
    }
    if family == "all":
        return [p for f in FAMILIES for p in table[f]()]
    if family not in table:
        raise DomainError(f"unknown family {family!r}")
    return table[family]()


# ------------------------------------------------------------ comparisons


def _cells(state, other=None) -> list:
    """Fixed partition of the carrier into ``N_CELLS`` cells, plus the whole carrier (``None``).

    On the real line the equal cells cover the central parts of ``state`` and
    of ``other`` (the claimed posterior), so that both are resolved.
    """
    sup = state.support
    if isinstance(sup, Simplex):
        edges = np.linspace(0.0, 1.0, N_CELLS + 1)
        cells = [(lambda p, a=a, b=b: (p[:, 0] >= a) & (p[:, 0] < b)) for a, b in zip(edges[:-1], edges[1:])]
        return cells + [None]
    # Equal cells over the central part of the state; the outer two absorb the tails
    # of a truncated real line.  On [0, 1] this is the plain equal partition.
    lo, hi = sup.lo, sup.hi
    if isinstance(state.params, NormalParams):
        ps = [state.params] + ([other.params] if isinstance(getattr(other, "params", None), NormalParams) else [])
        lo = max(lo, min(p.mu - 4 * p.sigma for p in ps))
        hi = min(hi, max(p.mu + 4 * p.sigma for p in ps))
    edges = np.linspace(lo, hi, N_CELLS + 1)
    edges[0], edges[-1] = sup.lo, sup.hi
    return [Interval(a, b) for a, b in zip(edges[:-1], edges[1:])] + [None]


def _likelihood_rv(model: LikelihoodChannel, y):
    if model.is_finite:
        return pull_pdf(model, point_predicate(model.labels, y))
    return model.likelihood(y)


def _grid_sup(a, b, dom: Interval) -> float:
    xs = dom.grid(GRID_POINTS)
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        diff = np.abs(np.asarray(a.pdf(xs)) - np.asarray(b.pdf(xs)))
    diff = diff[np.isfinite(diff)]
    return float(diff.max()) if diff.size else 0.0


def _quantile_probes(a, b, dom: Interval) -> np.ndarray:
    """Approximate quantiles of the mixture ``(a + b)/2`` at 11 equally spaced levels.

    The mixture CDF is tabulated with a fixed composite Gauss-Legendre rule; it
    only places the probes, the CDF gaps themselves use adaptive quadrature.
    """
    nodes, weights = np.polynomial.legendre.leggauss(8)
    edges = dom.grid(129)
    half = 0.5 * np.diff(edges)
    xs = (edges[:-1, None] + half[:, None] * (nodes[None, :] + 1.0)).ravel()
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        dens = 0.5 * (np.asarray(a.pdf(xs)) + np.asarray(b.pdf(xs)))
    dens = np.where(np.isfinite(dens), dens, 0.0).reshape(len(half), -1)
    cum = np.concatenate([[0.0], np.cumsum((dens * weights).sum(axis=1) * half)])
    cum /= cum[-1]
    levels = np.linspace(0.05, 0.95, CDF_PROBES)
    return np.interp(levels, cum, edges)


def state_distance(a, b, cfg: QuadConfig = DEFAULT_CONFIG) -> float:
    """Distance used as the computable surrogate for equality of states.

    Real carriers: the larger of the sup-norm density gap on a 101-point grid
    and the largest CDF gap at 11 mixture-quantile probes.  Simplex carriers:
    the L1 distance of the densities.  Finite carriers: total variation.
    """
    if isinstance(a, FiniteDist) and isinstance(b, FiniteDist):
        if a.space != b.space:
            raise CarrierMismatch("finite states on different carriers")
        return 0.5 * float(np.abs(a.probs - b.probs).sum())
    if not (isinstance(a, PdfState) and isinstance(b, PdfState)):
        raise CarrierMismatch("cannot compare a finite state with a density state")
    if isinstance(a.support, Simplex) or isinstance(b.support, Simplex):
        if a.support != b.support:
            raise CarrierMismatch("simplex states of different dimension")
        with np.errstate(invalid="ignore"):
            return integrate_simplex(lambda p: np.abs(a.density(p) - b.density(p)), a.support, cfg)
    if a is b:
        return 0.0
    dom = a.support.hull(b.support)
    sup_gap = _grid_sup(a, b, dom)
    ts = _quantile_probes(a, b, dom)
    cdf_gap = max(abs(a.cdf(t, cfg) - b.cdf(t, cfg)) for t in ts)
    return max(sup_gap, cdf_gap)


# ------------------------------------------------------------------ checks


def check_pointwise_law(pair: ConjugatePair, cfg: QuadConfig = DEFAULT_CONFIG) -> CheckReport:
    """``int_M u(p,x) v(x,y) dx = (int u v dx) * (int_M u(h(p,y),x) dx)`` over 8 cells and ``X``.

    Both sides are divided by ``int u v dx``: the law is homogeneous in the
    likelihood, and an unscaled discrepancy vanishes with the validity, which
    would let a wrong translator pass at improbable observations.
    """
    errors = []
    for p, y in pair.probes():
        omega = pair.prior(p)
        post = pair.prior(pair.translator(p, y))
        v = pair.model.likelihood(y)
        z = validity_pdf(omega, v, cfg)
        err = 0.0
        for cell in _cells(omega, post):
            lhs = omega.expect(v, cell, cfg)
            rhs = z * post.mass(cell, cfg)
            err = max(err, abs(lhs - rhs) / z)
        errors.append(((p, y), err))
    return CheckReport.from_errors(f"pointwise_law:{pair.name}", pair.law_tol, errors)


def check_inversion_equivalence(pair: ConjugatePair, cfg: QuadConfig = DEFAULT_CONFIG) -> CheckReport:
    """Translated posterior ``c(h(p, y))`` against the inversion ``d^dagger_{c(p)}(y)``."""
    errors = []
    for p, y in pair.probes():
        inv = inversion_pdf(pair.model, pair.prior(p), y, cfg)
        errors.append(((p, y), state_distance(pair.prior(pair.translator(p, y)), inv, cfg)))
    return CheckReport.from_errors(f"inversion_equivalence:{pair.name}", pair.equiv_tol, errors)


def recover_dirichlet_params(state: PdfState, probe_points=None) -> np.ndarray:
    """Exponents of a simplex density of Dirichlet form, by least squares on its log-density.

    ``log f = c + sum_i (a_i - 1) log x_i``; the fit is exact for a Dirichlet-shaped density.
    """
    n = state.support.n
    if probe_points is None:
        rng = np.random.Generator(np.random.Philox(key=7))
        full = rng.dirichlet(np.full(n, 2.0), size=4 * n + 4)
        probe_points = full[:, :-1]
    full = state.support.complete(probe_points)
    design = np.column_stack([np.ones(len(full)), np.log(full)])
    coef, *_ = np.linalg.lstsq(design, np.log(state.density(probe_points)), rcond=None)
    return coef[1:] + 1.0


def check_dirichlet_parameters(pair: ConjugatePair, cfg: QuadConfig = DEFAULT_CONFIG) -> CheckReport:
    """Parameters recovered from the inversion posterior equal the translator's, to 1e-9."""
    errors = []
    for p, y in pair.probes():
        inv = inversion_pdf(pair.model, pair.prior(p), y, cfg)
        got = recover_dirichlet_params(inv)
        want = np.array(pair.translator(p, y).alphas)
        errors.append(((p, y), float(np.max(np.abs(got - want)))))
    return CheckReport.from_errors(f"inversion_parameters:{pair.name}", PARAM_TOL, errors)


def check_update_equivalence(pair: ConjugatePair, cfg: QuadConfig = DEFAULT_CONFIG) -> CheckReport:
    """``c(h(p, y)) = c(p)|_{d << 1_y}`` (finite observations) or ``c(p)|_{v(-, y)}`` (real)."""
    errors = []
    for p, y in pair.probes():
        updated = update_pdf(pair.prior(p), _likelihood_rv(pair.model, y), cfg)
        errors.append(((p, y), state_distance(pair.prior(pair.translator(p, y)), updated, cfg)))
    return CheckReport.from_errors(f"update_equivalence:{pair.name}", pair.equiv_tol, errors)


def check_verdict_agreement(pairs, cfg: QuadConfig = DEFAULT_CONFIG, computed=None) -> CheckReport:
    """Pointwise-law and inversion verdicts must agree probe-for-probe.

    The error is the number of probes where the two verdicts differ.
    ``computed`` maps a pair name to already computed ``(law, inversion)`` reports.
    """
    computed = computed or {}
    errors = []
    for pair in pairs:
        law, inv = computed.get(pair.name) or (check_pointwise_law(pair, cfg), check_inversion_equivalence(pair, cfg))
        mismatch = sum(a != b for a, b in zip(law.verdicts(), inv.verdicts()))
        errors.append((pair.name, float(mismatch)))
    return CheckReport.from_errors("verdict_agreement", 0.0, errors)


def check_deterministic_state(omega, cfg: QuadConfig = DEFAULT_CONFIG, domain: Interval | None = None) -> CheckReport:
    """Does ``copy >> omega`` equal ``omega (x) omega``?  Compared on a 4x4 grid of rectangles.

    ``passed`` means the state commutes with copying: point states pass
    exactly, diffuse states fail with a discrepancy of order 1/4.
    """
    if isinstance(omega, FiniteDist):
        labels = omega.space[:4]
        cells = [[lab] for lab in labels]
    else:
        dom = domain or getattr(omega, "support", None)
        if not isinstance(dom, Interval):
            raise DomainError("a real domain is needed for the rectangle grid")
        edges = dom.grid(5)
        if isinstance(omega, PointState):
            # half-open cells so that the point lies in exactly one of them
            cells = [(lambda x, a=a, b=b, last=(k == 3): (x >= a) & ((x <= b) if last else (x < b)))
                     for k, (a, b) in enumerate(zip(edges[:-1], edges[1:]))]
        else:
            cells = [Interval(a, b) for a, b in zip(edges[:-1], edges[1:])]
    errors = []
    for i, m_cell in enumerate(cells):
        for j, n_cell in enumerate(cells):
            joint = copy_mass(omega, m_cell, n_cell, cfg)
            prod = mass(omega, m_cell, cfg) * mass(omega, n_cell, cfg)
            errors.append(((i, j), abs(joint - prod)))
    return CheckReport.from_errors(f"deterministic_state:{getattr(omega, 'name', omega)!s}", 1e-12, errors)


def run_pair_checks(pair: ConjugatePair, cfg: QuadConfig = DEFAULT_CONFIG) -> list[CheckReport]:
    reports = [check_pointwise_law(pair, cfg), check_inversion_equivalence(pair, cfg)]
    if pair.monte_carlo:
        reports.append(check_dirichlet_parameters(pair, cfg))
    reports.append(check_update_equivalence(pair, cfg))
    return reports
