"""Command-line entry point.

    conjugate-channels coin --obs HTTT --grid 101 --out figs/
    conjugate-channels verify --family all --report report.json
    conjugate-channels suffstat --family normal --batch 1,2,3 --report ss.json

Exit codes: 0 success, 1 a check failed, 2 bad input, 3 numerical failure
(non-convergent quadrature or zero validity).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .conjugacy import (
    FAMILIES,
    MC_TOL,
    CheckReport,
    check_verdict_agreement,
    check_inversion_equivalence,
    check_pointwise_law,
    default_pairs,
    run_pair_checks,
    state_distance,
)
from .continuous import inversion_pdf
from .errors import DomainError, NonConvergent, UnknownLabel, ZeroValidity
from .families import (
    BetaParams,
    NoiseLevel,
    NormalParams,
    beta_channel,
    flip_channel,
    h_beta_flip,
    h_normal,
    normal_channel,
    normal_likelihood,
)
from .numerics import QuadConfig

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
COIN_CODES = {"H": 1, "T": 0}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    family: str | None = None
    observations: str | None = None
    grid_points: int = 101
    tolerance: float | None = None
    seed: int = 1
    out: str | None = None
    report: str | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.grid_points < 2:
            raise UsageError("--grid must be at least 2")


def _write_csv(path: Path, xs, ys):
    lines = ["x,density"] + [f"{x:.17g},{y:.17g}" for x, y in zip(xs, ys)]
    path.write_text("\n".join(lines) + "\n")


def _write_json(path, payload):
    text = json.dumps(payload, indent=2) + "\n"
    if path in (None, "-"):
        return
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(text)


def _report_payload(config: RunConfig, cfg: QuadConfig, reports) -> dict:
    echo = {k: v for k, v in asdict(config).items() if k not in ("extra",)}
    echo.update(config.extra)
    echo["quad"] = asdict(cfg)
    return {"version": __version__, "config_echo": echo, "reports": [r.to_dict() for r in reports]}


def parse_coin_obs(text: str) -> list[int]:
    text = text.strip().upper()
    bad = sorted(set(text) - set(COIN_CODES))
    if bad:
        raise UsageError(f"observations must use H and T only, got {''.join(bad)!r}")
    return [COIN_CODES[ch] for ch in text]


def run_coin(config: RunConfig, cfg: QuadConfig) -> int:
    """Uniform prior updated by coin observations, by inversion and by the Beta translator."""
    obs = parse_coin_obs(config.observations or "")
    B, flip = beta_channel(), flip_channel()
    params = BetaParams(1.0, 1.0)
    state = B(params)
    prior = state
    steps = []
    worst = 0.0
    for y in obs:
        state = inversion_pdf(flip, state, y, cfg)
        params = h_beta_flip(params, y)
        worst = max(worst, state_distance(state, B(params), cfg))
        steps.append(state)

    xs = np.linspace(0.0, 1.0, config.grid_points)
    out = Path(config.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    _write_csv(out / "prior.csv", xs, prior.pdf(xs))
    if steps:
        _write_csv(out / "after_first.csv", xs, steps[0].pdf(xs))
    _write_csv(out / "final.csv", xs, state.pdf(xs))
    print(f"observations: {config.observations or ''!s} ({len(obs)})")
    print(f"final: Beta({params.alpha:g},{params.beta:g})")
    print(f"max route discrepancy: {worst:.3e}")
    return EXIT_OK


def _tightened(pair, tol):
    if tol is None:
        return pair
    from dataclasses import replace
    floor = MC_TOL if pair.monte_carlo else 0.0
    return replace(pair, law_tol=max(tol, floor), equiv_tol=max(tol, floor))


def _negative_control(pair, law, inv) -> CheckReport:
    """The +0.5 shifted translator must be rejected by both checks with error > 1e-2."""
    ok = (not law.passed and not inv.passed and law.max_abs_err > 1e-2 and inv.max_abs_err > 1e-2)
    return CheckReport.from_errors(f"negative_control:{pair.name}", 0.0, [(pair.name, 0.0 if ok else 1.0)])


def run_verify(config: RunConfig, cfg: QuadConfig) -> int:
    from .harness import property_suite, suffstat_suite

    family = config.family
    pairs = [_tightened(p, config.tolerance) for p in default_pairs(family)]
    injected = bool(config.extra.get("inject_bad_translator"))
    if injected:
        pairs = [p.with_translator(lambda p_, y_, h=p.translator: _bad(h, p_, y_), "injected") for p in pairs]
    reports, computed = [], {}
    for pair in pairs:
        pair_reports = run_pair_checks(pair, cfg)
        computed[pair.name] = (pair_reports[0], pair_reports[1])
        reports += pair_reports
    if not injected:
        shifted = [p.perturbed(0.5) for p in pairs]
        for pair, bad in zip(pairs, shifted):
            computed[bad.name] = (check_pointwise_law(bad, cfg), check_inversion_equivalence(bad, cfg))
            reports.append(_negative_control(pair, *computed[bad.name]))
        reports.append(check_verdict_agreement(pairs + shifted, cfg, computed))
    if family == "all":
        reports += property_suite(cfg, config.seed)
    if family in ("all", "beta-flip", "normal-normal"):
        reports += [r for r in suffstat_suite(cfg, config.seed)
                    if family == "all" or _suffstat_matches(r.check_name, family)]
    for r in reports:
        print(r.line())
    _write_json(config.report, _report_payload(config, cfg, reports))
    failed = sum(not r.passed for r in reports)
    print(f"{len(reports) - failed}/{len(reports)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_FAILED


def _suffstat_matches(name: str, family: str) -> bool:
    key = "normal" if family == "normal-normal" else "beta-flip"
    return key in name or name in ("stat_update_equivalence", "batch_permutation_invariance")


def _bad(h, p, y):
    """A translator that counts every observation twice in its first parameter."""
    q = h(p, y)
    if isinstance(q, BetaParams):
        return BetaParams(q.alpha + (q.alpha - p.alpha), q.beta)
    if isinstance(q, NormalParams):
        return NormalParams(q.mu + 0.5, q.sigma)
    return type(q)((q.alphas[0] + 0.5,) + q.alphas[1:])


def parse_batch(text: str, family: str) -> list:
    items = [s.strip() for s in text.split(",") if s.strip()]
    if not items:
        raise UsageError("--batch needs at least one observation")
    try:
        if family == "beta-flip":
            vals = [int(s) for s in items]
            if any(v not in (0, 1) for v in vals):
                raise UsageError("beta-flip observations are 0 or 1")
            return vals
        return [float(s) for s in items]
    except ValueError as exc:
        raise UsageError(f"cannot parse batch: {exc}") from None


def run_suffstat(config: RunConfig, cfg: QuadConfig) -> int:
    from .suffstat import (
        beta_flip_stat,
        check_factorization,
        check_stat_update_equiv,
        fold_translator,
        multi_update,
        normal_stat,
    )

    batch = parse_batch(config.observations or "", config.family)
    m = len(batch)
    if config.family == "beta-flip":
        model, stat = flip_channel(), beta_flip_stat(m)
        prior_params = BetaParams(*config.extra.get("prior", (1.0, 1.0)))
        family_channel, h = beta_channel(), h_beta_flip
        probes, fact_tol = [0.05, 0.3, 0.5, 0.7, 0.95], 1e-12
    else:
        nu = NoiseLevel(config.extra.get("nu", 1.0))
        model, stat = normal_likelihood(nu), normal_stat(m, nu)
        prior_params = NormalParams(*config.extra.get("prior", (0.0, 1.0)))
        family_channel = normal_channel()
        h = lambda p, y: h_normal(p, nu, y)  # noqa: E731
        probes, fact_tol = [-2.0, -1.0, 0.0, 1.0, 2.0], 1e-9
    tol = config.tolerance or 1e-6
    prior = family_channel(prior_params)
    reports = [
        check_factorization(stat, model, batch, probes, fact_tol),
        check_stat_update_equiv(stat, prior, model, batch, cfg, tol),
    ]
    folded = fold_translator(h, prior_params, batch)
    dist = state_distance(multi_update(prior, model, batch, cfg), family_channel(folded), cfg)
    reports.append(CheckReport.from_errors(f"translator_fold:{stat.name}(m={m})", tol, [(tuple(batch), dist)]))
    print(f"summary: {stat.summary(batch)}")
    print(f"posterior: {folded}")
    for r in reports:
        print(r.line())
    _write_json(config.report, _report_payload(config, cfg, reports))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED


def _pair(text):
    try:
        a, b = (float(s) for s in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected two comma-separated numbers") from None
    return a, b


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="conjugate-channels", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--quad-config", help="JSON file of quadrature settings "
                        "(default: $CONJUGATE_CHANNELS_QUAD_CONFIG, else built-in defaults)")
    sub = parser.add_subparsers(dest="command", required=True)

    coin = sub.add_parser("coin", help="uniform prior updated by H/T coin observations")
    coin.add_argument("--obs", default="", help="observation string over {H, T}, e.g. HTTT")
    coin.add_argument("--grid", type=int, default=101, help="density grid points (default 101)")
    coin.add_argument("--out", default=".", help="output directory for CSV files")

    verify = sub.add_parser("verify", help="run the conjugacy checks and the property suite")
    verify.add_argument("--family", default="all", choices=list(FAMILIES) + ["all"])
    verify.add_argument("--tol", type=float, default=None, help="override the deterministic check tolerance")
    verify.add_argument("--seed", type=int, default=1, help="seed for Monte Carlo and random instances")
    verify.add_argument("--report", default=None, help="path of the JSON report")
    verify.add_argument("--inject-bad-translator", action="store_true", help=argparse.SUPPRESS)

    ss = sub.add_parser("suffstat", help="check a sufficient statistic on one batch")
    ss.add_argument("--family", required=True, choices=["beta-flip", "normal"])
    ss.add_argument("--batch", required=True, help="comma-separated observations")
    ss.add_argument("--nu", type=float, default=1.0, help="observation noise sd (normal only)")
    ss.add_argument("--prior", type=_pair, default=None, help="prior parameters, e.g. 1,1")
    ss.add_argument("--tol", type=float, default=None)
    ss.add_argument("--report", default=None, help="path of the JSON report")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = QuadConfig.from_file(args.quad_config) if args.quad_config else QuadConfig.from_env()
        if args.command == "coin":
            config = RunConfig("coin", observations=args.obs, grid_points=args.grid, out=args.out)
            return run_coin(config, cfg)
        if args.command == "verify":
            cfg = cfg.with_(seed=args.seed)
            extra = {"inject_bad_translator": True} if args.inject_bad_translator else {}
            config = RunConfig("verify", family=args.family, tolerance=args.tol, seed=args.seed,
                               report=args.report, extra=extra)
            return run_verify(config, cfg)
        extra = {"nu": args.nu}
        if args.prior is not None:
            extra["prior"] = args.prior
        config = RunConfig("suffstat", family=args.family, observations=args.batch,
                           tolerance=args.tol, report=args.report, extra=extra)
        return run_suffstat(config, cfg)
    except (UsageError, DomainError, UnknownLabel) as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NonConvergent, ZeroValidity) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
