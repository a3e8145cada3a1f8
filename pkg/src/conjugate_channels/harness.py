"""Property suite: invariants that every build must satisfy, as CheckReports.

Run by ``verify --family all`` and by the test suite.
"""

from __future__ import annotations

import numpy as np

from . import discrete as dc
from .conjugacy import CheckReport, check_deterministic_state, state_distance
from .continuous import (
    IdentityChannel,
    PdfState,
    PointState,
    RandVarC,
    copy_mass,
    graph_push,
    inversion_channel,
    inversion_pdf,
    iterated_expect,
    product_state,
    pull_pdf,
    push_pdf,
    update_pdf,
    validity_pdf,
)
from .errors import ZeroMassObservation
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
    mult_channel,
    normal_channel,
    normal_likelihood,
)
from .numerics import DEFAULT_CONFIG, Interval, QuadConfig, SeededSampler

DISCRETE_TOL = 1e-12
CONT_TOL = 1e-6


def random_instance(rng: np.random.Generator, max_size: int = 5):
    """A random prior and channel with ``|X|, |Y| <= max_size``; some entries are exactly zero."""
    nx, ny = rng.integers(1, max_size + 1, size=2)
    xs = [f"x{i}" for i in range(nx)]
    ys = [f"y{j}" for j in range(ny)]
    m = rng.dirichlet(np.ones(ny), size=nx)
    mask = rng.random(m.shape) < 0.2
    mask[np.arange(nx), rng.integers(0, ny, size=nx)] = False
    m = np.where(mask, 0.0, m)
    m /= m.sum(axis=1, keepdims=True)
    w = rng.dirichlet(np.ones(nx))
    if nx > 1 and rng.random() < 0.3:
        w[rng.integers(0, nx)] = 0.0
        w /= w.sum()
    return dc.FiniteDist.from_array(xs, w), dc.DiscreteChannel.from_matrix(xs, ys, m)


def _oracle_joint(omega, c):
    """``(x, y) -> omega(x) c(x)(y)`` by explicit loops."""
    return {(x, y): omega(x) * c(x)(y) for x in omega.space for y in c.output_space}


def _oracle_predicted(omega, c):
    out = {}
    for y in c.output_space:
        acc = 0.0
        for x in omega.space:
            acc += omega(x) * c(x)(y)
        out[y] = acc
    return out


def check_discrete_oracle(count: int = 200, seed: int = 1) -> list[CheckReport]:
    """Inversion vs brute-force sums on random instances.

    Joint equality ``<id, c> >> omega = <c^dagger, id> >> (c >> omega)`` and
    ``c^dagger(y) = omega|_{c << 1_y}``, both to 1e-12.
    """
    rng = SeededSampler(seed).generator()
    joint_errs, upd_errs, adj_errs = [], [], []
    for k in range(count):
        omega, c = random_instance(rng)
        inv = dc.inversion(c, omega)
        predicted = _oracle_predicted(omega, c)
        left = _oracle_joint(omega, c)
        lib_graph = dc.push(dc.graph(c), omega)
        err_j, err_u = 0.0, 0.0
        for (x, y), v in left.items():
            right = 0.0 if predicted[y] == 0 else predicted[y] * inv(y)(x)
            err_j = max(err_j, abs(v - right), abs(lib_graph((x, y)) - v))
        for y in c.output_space:
            if predicted[y] == 0:
                try:
                    inv(y)
                    err_u = max(err_u, 1.0)
                except ZeroMassObservation:
                    pass
                continue
            upd = dc.update(omega, dc.pull(c, dc.point_predicate(c.output_space, y)))
            oracle = {x: left[(x, y)] / predicted[y] for x in omega.space}
            err_u = max(err_u, max(abs(upd(x) - oracle[x]) + abs(inv(y)(x) - oracle[x]) for x in omega.space))
        r = dc.RandVarD.from_array(c.output_space, rng.random(len(c.output_space)))
        lhs = sum(omega(x) * sum(c(x)(y) * r(y) for y in c.output_space) for x in omega.space)
        adj_errs.append((k, max(abs(dc.validity(omega, dc.pull(c, r)) - lhs),
                                abs(dc.validity(dc.push(c, omega), r) - lhs))))
        joint_errs.append((k, err_j))
        upd_errs.append((k, err_u))
    return [
        CheckReport.from_errors("discrete_oracle:joint_equality", DISCRETE_TOL, joint_errs),
        CheckReport.from_errors("discrete_oracle:update_point_predicate", DISCRETE_TOL, upd_errs),
        CheckReport.from_errors("adjunction:discrete", DISCRETE_TOL, adj_errs),
    ]


def check_normalization(cfg: QuadConfig = DEFAULT_CONFIG) -> CheckReport:
    """States produced by every operation integrate (or sum) to one."""
    B, N = beta_channel(), normal_channel()
    flip, binom = flip_channel(), binom_channel(BinomConfig(4))
    lik = normal_likelihood(NoiseLevel(1.0))
    errors = []
    for a, b in [(0.5, 0.5), (1, 1), (2, 5), (5, 2)]:
        omega = B(BetaParams(a, b))
        errors.append((f"Beta({a},{b})", abs(omega.mass(None, cfg) - 1)))
        errors.append((f"Flip>>Beta({a},{b})", abs(push_pdf(flip, omega, cfg).probs.sum() - 1)))
        errors.append((f"Binom>>Beta({a},{b})", abs(push_pdf(binom, omega, cfg).probs.sum() - 1)))
        errors.append((f"inv Beta({a},{b}) y=1", abs(inversion_pdf(flip, omega, 1, cfg).mass(None, cfg) - 1)))
        upd = update_pdf(omega, RandVarC(lambda x: 1 + np.sin(5 * x) ** 2), cfg)
        errors.append((f"update Beta({a},{b})", abs(upd.mass(None, cfg) - 1)))
    for mu, s in [(0, 1), (3, 0.5), (-2, 4)]:
        omega = N(NormalParams(mu, s))
        errors.append((f"Norm({mu},{s})", abs(omega.mass(None, cfg) - 1)))
        errors.append((f"lik>>Norm({mu},{s})", abs(push_pdf(lik, omega, cfg).mass(None, cfg) - 1)))
        errors.append((f"inv Norm({mu},{s})", abs(inversion_pdf(lik, omega, 1.5, cfg).mass(None, cfg) - 1)))
    d = dirichlet_channel(3)(DirichletParams((2.0, 3.0, 4.0)))
    m = mult_channel(("y0", "y1", "y2"))
    errors.append(("Mult>>Dir(2,3,4)", abs(push_pdf(m, d, cfg).probs.sum() - 1)))
    errors.append(("inv Dir(2,3,4)", abs(inversion_pdf(m, d, "y1", cfg).mass(None, cfg) - 1)))
    return CheckReport.from_errors("normalization", CONT_TOL, errors)


def check_adjunction_continuous(cfg: QuadConfig = DEFAULT_CONFIG) -> CheckReport:
    """``omega |= c << r`` equals ``c >> omega |= r``."""
    errors = []
    flip = flip_channel()
    r = dc.RandVarD.from_array(flip.labels, [0.3, 0.9])
    for a, b in [(0.5, 2), (1, 1), (2, 5)]:
        omega = beta_channel()(BetaParams(a, b))
        lhs = validity_pdf(omega, pull_pdf(flip, r), cfg)
        rhs = dc.validity(push_pdf(flip, omega, cfg), r)
        errors.append((f"Beta({a},{b})/Flip", abs(lhs - rhs)))
    lik = normal_likelihood(NoiseLevel(1.0))
    r_real = RandVarC(lambda y: np.exp(-np.asarray(y) ** 2 / 8.0))
    for mu, s in [(0.0, 1.0), (1.0, 0.5)]:
        omega = normal_channel()(NormalParams(mu, s))
        lhs = validity_pdf(omega, pull_pdf(lik, r_real, cfg), cfg)
        rhs = validity_pdf(push_pdf(lik, omega, cfg), r_real, cfg)
        errors.append((f"Norm({mu},{s})/Norm(-,1)", abs(lhs - rhs)))
    return CheckReport.from_errors("adjunction:continuous", CONT_TOL, errors)


def _grid_sup(a: PdfState, b: PdfState) -> float:
    xs = a.support.grid(101)
    with np.errstate(invalid="ignore", divide="ignore"):
        d = np.abs(a.pdf(xs) - b.pdf(xs))
    return float(np.max(d[np.isfinite(d)]))


def check_scalar_invariance(cfg: QuadConfig = DEFAULT_CONFIG) -> CheckReport:
    """``omega|_{a r} = omega|_r``."""
    errors = []
    r = RandVarC(lambda x: 0.2 + np.asarray(x) ** 2)
    for a, b in [(1, 1), (2, 5)]:
        omega = beta_channel()(BetaParams(a, b))
        base = update_pdf(omega, r, cfg)
        for scale in (2.5, 1e-3, 1e3):
            errors.append(((a, b, scale), _grid_sup(base, update_pdf(omega, scale * r, cfg))))
    return CheckReport.from_errors("scalar_invariance", 1e-9, errors)


def check_update_fusion(cfg: QuadConfig = DEFAULT_CONFIG) -> CheckReport:
    """``(omega|_r)|_s = omega|_{r & s}`` in grid sup-norm."""
    errors = []
    r = RandVarC(lambda x: 0.5 + 0.5 * np.cos(3 * np.asarray(x)) ** 2)
    s = RandVarC(lambda x: np.exp(-np.asarray(x)))
    for a, b in [(1, 1), (2, 5), (0.5, 3)]:
        omega = beta_channel()(BetaParams(a, b))
        seq = update_pdf(update_pdf(omega, r, cfg), s, cfg)
        fused = update_pdf(omega, r & s, cfg)
        errors.append(((a, b), _grid_sup(seq, fused)))
    return CheckReport.from_errors("update_fusion", 1e-8, errors)


def check_fubini(cfg: QuadConfig = DEFAULT_CONFIG) -> CheckReport:
    """``int h d(omega (x) rho) = int int h d omega d rho``."""
    errors = []
    U = beta_channel()(BetaParams(1, 1))
    cases = [
        ("xy uniform", U, U, lambda x, y: x * y, 0.25),
        ("sin(x+y) Beta/Norm", beta_channel()(BetaParams(2, 3)), normal_channel()(NormalParams(0, 1)),
         lambda x, y: np.sin(x + y), None),
    ]
    for name, omega, rho, h, exact in cases:
        joint = product_state(omega, rho).expect(h, cfg)
        iterated = iterated_expect(omega, rho, h, cfg)
        err = abs(joint - iterated)
        if exact is not None:
            err = max(err, abs(joint - exact))
        errors.append((name, err))
    return CheckReport.from_errors("fubini", CONT_TOL, errors)


def check_inversion_joint_equality(cfg: QuadConfig = DEFAULT_CONFIG) -> CheckReport:
    """``<id, c> >> omega = <c^dagger, id> >> (c >> omega)`` on a 4x4 rectangle grid (Beta/Flip)."""
    errors = []
    flip = flip_channel()
    for a, b in [(1, 1), (2, 5)]:
        omega = beta_channel()(BetaParams(a, b))
        left = graph_push(flip, omega, cfg=cfg)
        right = graph_push(inversion_channel(flip, omega, cfg), push_pdf(flip, omega, cfg), swap=True, cfg=cfg)
        x_cells = Interval(0.0, 1.0).split(4)
        y_cells = [[0], [1], [0, 1], []]
        for i, m_cell in enumerate(x_cells):
            for j, n_cell in enumerate(y_cells):
                errors.append(((a, b, i, j), abs(left.mass(m_cell, n_cell, cfg) - right.mass(m_cell, n_cell, cfg))))
    return CheckReport.from_errors("inversion_joint_equality", 1e-5, errors)


def check_deterministic_verdicts(cfg: QuadConfig = DEFAULT_CONFIG) -> CheckReport:
    """Point states commute with copying, diffuse ones do not; error counts wrong verdicts."""
    unit = Interval(0.0, 1.0)
    cases = [
        (PointState(0.3, unit), True),
        (PointState(0.25, unit), True),
        (beta_channel()(BetaParams(1, 1)), False),
        (dc.dirac("b", ["a", "b", "c"]), True),
        (dc.FiniteDist.uniform(["a", "b"]), False),
    ]
    errors = []
    for state, expected in cases:
        rep = check_deterministic_state(state, cfg)
        ok = rep.passed == expected and (expected or rep.max_abs_err > 0.1)
        errors.append((repr(state), 0.0 if ok else 1.0))
    # graph of the identity is the diagonal
    U = beta_channel()(BetaParams(1, 1))
    diag = graph_push(IdentityChannel(unit), U, cfg=cfg)
    for m_cell, n_cell in [(Interval(0, 0.5), Interval(0.25, 1)), (Interval(0, 0.5), Interval(0.5, 1))]:
        err = abs(diag.mass(m_cell, n_cell, cfg) - copy_mass(U, m_cell, n_cell, cfg))
        errors.append((f"diag {m_cell}x{n_cell}", 0.0 if err <= 1e-12 else 1.0))
    return CheckReport.from_errors("deterministic_state_verdicts", 0.0, errors)


def property_suite(cfg: QuadConfig = DEFAULT_CONFIG, seed: int = 1) -> list[CheckReport]:
    reports = check_discrete_oracle(200, seed)
    reports += [
        check_normalization(cfg),
        check_adjunction_continuous(cfg),
        check_scalar_invariance(cfg),
        check_update_fusion(cfg),
        check_fubini(cfg),
        check_inversion_joint_equality(cfg),
        check_deterministic_verdicts(cfg),
    ]
    return reports


def suffstat_suite(cfg: QuadConfig = DEFAULT_CONFIG, seed: int = 1) -> list[CheckReport]:
    """Factorisation and update-by-summary checks on seeded batches."""
    from .suffstat import (
        beta_flip_stat,
        check_factorization,
        check_stat_update_equiv,
        multi_update,
        normal_stat,
    )

    rng = SeededSampler(seed).split(3).generator()
    flip, B = flip_channel(), beta_channel()
    reports = []
    fact_b, fact_n, upd = [], [], []
    for k in range(10):
        m = int(rng.integers(1, 9))
        batch = tuple(int(v) for v in rng.integers(0, 2, size=m))
        rep = check_factorization(beta_flip_stat(m), flip, batch, [0.05, 0.3, 0.5, 0.9], 1e-12)
        fact_b.append((batch, rep.max_abs_err))
        rep = check_stat_update_equiv(beta_flip_stat(m), B(BetaParams(2, 3)), flip, batch, cfg)
        upd.append((("flip", batch), rep.max_abs_err))
    for nu in (0.5, 1.0):
        lik = normal_likelihood(NoiseLevel(nu))
        for m in range(1, 11):
            batch = tuple(float(v) for v in rng.normal(1.0, 1.0, size=m))
            rep = check_factorization(normal_stat(m, NoiseLevel(nu)), lik, batch, [-1.0, 0.0, 0.7, 2.0])
            fact_n.append(((nu, m), rep.max_abs_err))
            if m in (1, 3, 6):
                rep = check_stat_update_equiv(normal_stat(m, NoiseLevel(nu)),
                                              normal_channel()(NormalParams(0, 1)), lik, batch, cfg)
                upd.append((("normal", nu, m), rep.max_abs_err))
    reports.append(CheckReport.from_errors("factorization:beta-flip", 1e-12, fact_b))
    reports.append(CheckReport.from_errors("factorization:normal", 1e-9, fact_n))
    reports.append(CheckReport.from_errors("stat_update_equivalence", 1e-6, upd))
    perm = []
    omega = B(BetaParams(2, 3))
    batch = [1, 0, 0, 1, 1, 0, 1]
    base = multi_update(omega, flip, batch, cfg)
    for k in range(5):
        perm.append((k, state_distance(base, multi_update(omega, flip, list(rng.permutation(batch)), cfg), cfg)))
    reports.append(CheckReport.from_errors("batch_permutation_invariance", 1e-8, perm))
    return reports
