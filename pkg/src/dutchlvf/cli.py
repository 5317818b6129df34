"""Command-line interface.

Examples::

    dutchlvf lvf --z0 0.001 --decay-per-sec 1e-4 --vol-daily 0.05 --block-time 12
    dutchlvf sweep --vary delta --from 1e-6 --to 1e-3 --points 200 \\
        --vol-daily 0.05 --block-time 12 --z0 0 --csv vary-delta.csv
    dutchlvf frontier --theta-from 1e-7 --theta-to 1e-3 --points 50 \\
        --vol-daily 0.05 --block-time 12 --csv efficient-frontier.csv
    dutchlvf validate --suite all --paths 100000 --seed 42

Exit status is 0 on success, 1 on a domain error (or a failed validation) and
2 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from typing import Sequence

import numpy as np

from . import analytic, bayes, frontier, gda, mcsim
from .params import (
    ChainParams,
    DomainError,
    GdaSpec,
    MarketParams,
    composite_drift,
    convert_daily_vol,
    lam_for_delta,
)

BP = 1e-4

# reference parameters for `validate`: 5% daily vol, 1 bp/s decay, 12 s blocks
REF_SIGMA = convert_daily_vol(0.05)
REF_DT = 12.0
REF_MARKET = MarketParams(0.0, REF_SIGMA)
REF_DELTA = composite_drift(REF_MARKET, 1e-4)

# |z| above which a validation row fails
VALIDATE_Z = 4.0


def _csv_num(x: float) -> str:
    return f"{x:.17g}"


def _fmt(x: float) -> str:
    return f"{x:.4g}"


def _table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(header)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for r in rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    return "\n".join(lines) + "\n"


def _write_csv(path: str | None, header: Sequence[str], rows: Sequence[Sequence[float]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_csv_num(v) for v in r])
    text = buf.getvalue()
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text


# ---------------------------------------------------------------- arguments


def _add_vol(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--vol-daily", type=float, help="volatility per sqrt(day)")
    g.add_argument("--vol-sec", type=float, help="volatility per sqrt(second)")
    p.add_argument("--mu", type=float, default=0.0, help="price drift per second (default 0)")
    p.add_argument("--block-time", type=float, required=True, help="mean interblock time, seconds")


def _add_drift(p: argparse.ArgumentParser, required: bool = True) -> None:
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--decay-per-sec", type=float, help="ask decay rate lambda per second")
    g.add_argument("--delta", type=float, help="composite drift lambda + mu - sigma^2/2 per second")


def _add_bp(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--bp", action="store_true", help="read mispricing flags in basis points instead of log units"
    )


def _add_sim(p: argparse.ArgumentParser, paths: int = 100_000) -> None:
    p.add_argument("--paths", type=int, default=paths, help=f"Monte Carlo paths (default {paths})")
    p.add_argument("--seed", type=int, default=0, help="64-bit RNG seed (default 0)")
    p.add_argument("--threads", type=int, default=1, help="worker threads; never changes results")
    p.add_argument("--chains", type=int, default=1000, help="stationary chains (default 1000)")
    p.add_argument("--blocks-per-chain", type=int, default=1000)
    p.add_argument("--burn-in", type=int, default=10_000, help="burn-in blocks per chain")
    p.add_argument("--max-blocks", type=int, default=1_000_000, help="per-path block cap")


def _market(args) -> MarketParams:
    sigma = convert_daily_vol(args.vol_daily) if args.vol_daily is not None else args.vol_sec
    return MarketParams(args.mu, sigma)


def _delta(args, market: MarketParams) -> float:
    delta = args.delta if args.delta is not None else composite_drift(market, args.decay_per_sec)
    if not delta > 0:
        raise DomainError(
            f"Assumption 1 violated: delta = lambda + mu - sigma^2/2 = {delta:.6g} must be > 0"
        )
    return delta


def _mis(args, value: float) -> float:
    return value * BP if args.bp else value


def _dutch_cfg(args) -> mcsim.SimConfig:
    return mcsim.SimConfig(
        paths=args.paths,
        seed=args.seed,
        burn_in_blocks=args.burn_in,
        max_blocks_per_path=args.max_blocks,
        workers=args.threads,
    )


def _chain_cfg(args) -> mcsim.SimConfig:
    return mcsim.SimConfig(
        paths=args.chains,
        seed=args.seed,
        burn_in_blocks=args.burn_in,
        blocks_per_chain=args.blocks_per_chain,
        workers=args.threads,
    )


# ----------------------------------------------------------------- commands


def cmd_lvf(args, out) -> int:
    market = _market(args)
    delta = _delta(args, market)
    z0, dt = _mis(args, args.z0), args.block_time
    loss = analytic.lvf(z0, delta, market.sigma, dt)
    ft = analytic.fill_time(z0, delta, market.sigma, dt)
    rows = [
        ["delta (1/s)", _fmt(delta)],
        ["LVF", f"{_fmt(loss)} ({_fmt(loss * 100)}%, {_fmt(loss / BP)} bp)"],
        ["FT (s)", _fmt(ft)],
        ["LVF lower bound", _fmt(analytic.lvf_lower_bound(market.sigma, dt))],
    ]
    if args.command == "ft":
        rows = [rows[0], rows[2]]
    out.write(_table(["quantity", "value"], rows))
    return 0


def cmd_stationary(args, out) -> int:
    market = _market(args)
    sd = analytic.stationary_distribution(_delta(args, market), market.sigma, args.block_time)
    rows = [
        ["zeta_minus", _fmt(sd.zeta_minus)],
        ["zeta_plus", _fmt(sd.zeta_plus)],
        ["pi_minus", _fmt(sd.pi_minus)],
        ["pi_plus", _fmt(sd.pi_plus)],
    ]
    out.write(_table(["quantity", "value"], rows))
    return 0


def cmd_gda(args, out) -> int:
    market = _market(args)
    if args.delta is not None:
        lam = lam_for_delta(market, args.delta)
    else:
        lam = args.decay_per_sec
    spec = GdaSpec(args.emission_rate, lam, args.price)
    rates = gda.gda_rates(spec, market, ChainParams(args.block_time))
    rows = [
        ["delta (1/s)", _fmt(spec.delta(market))],
        ["ARB rate (/s)", _fmt(rates.arb_rate)],
        ["VOL rate (/s)", _fmt(rates.vol_rate)],
        ["ARB / VOL", _fmt(rates.loss_per_volume)],
    ]
    out.write(_table(["quantity", "value"], rows))
    return 0


def cmd_bayes(args, out) -> int:
    market = _market(args)
    delta = _delta(args, market)
    sigma0 = _mis(args, args.sigma0)
    if args.ask0 is not None:
        prior = bayes.prior_from_value_belief(args.ask0, args.value_mean, sigma0)
    else:
        prior = bayes.MispricingPrior(_mis(args, args.mu0), sigma0)
    rows = [
        ["mu0", _fmt(prior.mu0)],
        ["sigma0", _fmt(prior.sigma0)],
        ["E[LVF]", _fmt(bayes.expected_lvf(prior, delta, market.sigma, args.block_time))],
        ["E[FT] (s)", _fmt(bayes.expected_fill_time(prior, delta, market.sigma, args.block_time))],
    ]
    out.write(_table(["quantity", "value"], rows))
    return 0


def _thetas(args) -> list[float]:
    if args.thetas:
        return sorted(float(t) for t in args.thetas.split(","))
    if args.points == 1:
        return [args.theta_from]
    return list(np.geomspace(args.theta_from, args.theta_to, args.points))


def cmd_frontier(args, out) -> int:
    market = _market(args)
    chain = ChainParams(args.block_time)
    box = frontier.SearchBox(args.delta_min, args.delta_max, args.z_min, args.z_max)
    thetas = _thetas(args)
    if args.prior_sigma0 is not None:
        header = ["theta", "log_ask_ratio", "delta", "lvf", "ft"]
        rows = []
        for t in thetas:
            p = frontier.solve_unknown_value(t, _mis(args, args.prior_sigma0), 1.0, market, chain, box)
            rows.append([t, p.log_ask_ratio, p.delta, p.lvf, p.fill_time])
    else:
        header = ["theta", "z0", "delta", "lvf", "ft"]
        rows = [[p.theta, p.z0, p.delta, p.lvf, p.fill_time] for p in frontier.frontier_sweep(thetas, market, chain, box)]
    _emit(args, out, header, rows)
    return 0


def cmd_sweep(args, out) -> int:
    market = _market(args)
    dt = args.block_time
    spacing = args.spacing or ("log" if args.vary == "delta" else "lin")
    lo, hi = args.lo, args.hi
    if args.vary == "z0":
        lo, hi = _mis(args, lo), _mis(args, hi)
    if spacing == "log":
        if lo <= 0 or hi <= 0:
            raise DomainError("log spacing needs positive --from and --to")
        xs = np.geomspace(lo, hi, args.points)
    else:
        xs = np.linspace(lo, hi, args.points)
    if args.vary == "delta":
        if xs.min() <= 0:
            raise DomainError("Assumption 1 violated: swept delta must be > 0")
        z0 = _mis(args, args.z0)
        lv = np.atleast_1d(analytic.lvf(z0, xs, market.sigma, dt))
        ft = np.atleast_1d(analytic.fill_time(z0, xs, market.sigma, dt))
    else:
        delta = _delta(args, market)
        lv = np.atleast_1d(analytic.lvf(xs, delta, market.sigma, dt))
        ft = np.atleast_1d(analytic.fill_time(xs, delta, market.sigma, dt))
    _emit(args, out, [args.vary, "lvf", "ft"], list(zip(xs, lv, ft)))
    return 0


def _emit(args, out, header, rows) -> None:
    if args.csv:
        _write_csv(args.csv, header, rows)
        out.write(f"wrote {len(rows)} rows to {args.csv}\n")
    else:
        out.write(_write_csv(None, header, rows))


def _mc_row(name: str, closed: float, res: mcsim.SimResult) -> list[str]:
    z = res.z_score(closed)
    return [name, _fmt(closed), _fmt(res.mean), _fmt(res.std_error), f"{z:+.2f}"]


MC_HEADER = ["quantity", "closed form", "MC mean", "SE", "z"]


def cmd_simulate(args, out) -> int:
    market = _market(args)
    dt = args.block_time
    sigma = market.sigma
    if args.kind == "gda":
        lam = lam_for_delta(market, args.delta) if args.delta is not None else args.decay_per_sec
        spec = GdaSpec(args.emission_rate, lam, args.price)
        chain = ChainParams(dt)
        rates = gda.gda_rates(spec, market, chain)
        arb, vol = mcsim.simulate_gda(spec, market, chain, _chain_cfg(args))
        rows = [_mc_row("ARB rate", rates.arb_rate, arb), _mc_row("VOL rate", rates.vol_rate, vol)]
    else:
        delta = _delta(args, market)
        if args.kind == "dutch":
            z0 = _mis(args, args.z0)
            lv, ft = mcsim.simulate_dutch(z0, delta, sigma, dt, _dutch_cfg(args))
            rows = [
                _mc_row("LVF", analytic.lvf(z0, delta, sigma, dt), lv),
                _mc_row("FT", analytic.fill_time(z0, delta, sigma, dt), ft),
            ]
            if lv.truncated:
                out.write(f"truncated paths: {lv.truncated}\n")
        else:
            sd = analytic.stationary_distribution(delta, sigma, dt)
            st = mcsim.sample_stationary(delta, sigma, dt, _chain_cfg(args))
            rows = [
                _mc_row("pi_minus", sd.pi_minus, st.pi_minus),
                _mc_row("1/zeta_minus", 1 / sd.zeta_minus, st.mean_neg_excursion),
                _mc_row("1/zeta_plus", 1 / sd.zeta_plus, st.mean_pos_excursion),
            ]
    out.write(_table(MC_HEADER, rows))
    return 0


VALIDATE_SUITES = ("all", "dutch", "stationary", "generator", "gda")


def validation_rows(suite: str, dutch_cfg: mcsim.SimConfig, chain_cfg: mcsim.SimConfig) -> list[tuple[str, float, mcsim.SimResult]]:
    """Closed form vs Monte Carlo at the reference parameters."""
    d, s, dt = REF_DELTA, REF_SIGMA, REF_DT
    rows = []
    if suite in ("all", "dutch"):
        for z0 in (0.0, -5e-4, 1e-3):
            lv, ft = mcsim.simulate_dutch(z0, d, s, dt, dutch_cfg)
            rows.append((f"LVF(z0={z0:g})", analytic.lvf(z0, d, s, dt), lv))
            rows.append((f"FT(z0={z0:g})", analytic.fill_time(z0, d, s, dt), ft))
    if suite in ("all", "stationary"):
        sd = analytic.stationary_distribution(d, s, dt)
        st = mcsim.sample_stationary(d, s, dt, chain_cfg)
        rows.append(("pi_minus", sd.pi_minus, st.pi_minus))
        rows.append(("1/zeta_minus", 1 / sd.zeta_minus, st.mean_neg_excursion))
        rows.append(("1/zeta_plus", 1 / sd.zeta_plus, st.mean_pos_excursion))
    if suite in ("all", "generator"):
        for fn, alpha in (("f_minus", 100.0), ("f_plus", 1000.0)):
            res = mcsim.generator_residual(d, s, dt, fn, alpha, chain_cfg)
            rows.append((f"E[Af] {fn} alpha={alpha:g}", 0.0, res))
    if suite in ("all", "gda"):
        spec = GdaSpec(1.0, 1e-4, 1.0)
        chain = ChainParams(dt)
        rates = gda.gda_rates(spec, REF_MARKET, chain)
        arb, vol = mcsim.simulate_gda(spec, REF_MARKET, chain, chain_cfg)
        rows.append(("GDA ARB rate", rates.arb_rate, arb))
        rows.append(("GDA VOL rate", rates.vol_rate, vol))
    return rows


def cmd_validate(args, out) -> int:
    rows = validation_rows(args.suite, _dutch_cfg(args), _chain_cfg(args))
    out.write(_table(MC_HEADER, [_mc_row(*r) for r in rows]))
    bad = [name for name, closed, res in rows if not abs(res.z_score(closed)) <= VALIDATE_Z]
    if bad:
        out.write(f"FAIL: |z| > {VALIDATE_Z:g} for {', '.join(bad)}\n")
        return 1
    out.write(f"OK: all {len(rows)} checks within {VALIDATE_Z:g} standard errors\n")
    return 0


# ------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dutchlvf",
        description="Loss-versus-fair and fill time of onchain Dutch auctions.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__.split("Examples::", 1)[1],
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    for name, help_ in (("lvf", "loss-versus-fair and fill time"), ("ft", "expected fill time")):
        p = sub.add_parser(name, help=help_)
        _add_vol(p)
        _add_drift(p)
        p.add_argument("--z0", type=float, default=0.0, help="initial log mispricing log(A0/P0)")
        _add_bp(p)
        p.set_defaults(func=cmd_lvf)

    p = sub.add_parser("stationary", help="stationary law of the mispricing")
    _add_vol(p)
    _add_drift(p)
    p.set_defaults(func=cmd_stationary)

    p = sub.add_parser("gda", help="gradual Dutch auction arbitrage and volume rates")
    _add_vol(p)
    _add_drift(p)
    p.add_argument("--emission-rate", type=float, required=True, help="asset units per second")
    p.add_argument("--price", type=float, default=1.0, help="current fair price (default 1)")
    p.set_defaults(func=cmd_gda)

    p = sub.add_parser("bayes", help="expected LVF and fill time under a normal prior on z0")
    _add_vol(p)
    _add_drift(p)
    p.add_argument("--sigma0", type=float, required=True, help="prior std of z0 (log units)")
    p.add_argument("--mu0", type=float, help="prior mean of z0")
    p.add_argument("--ask0", type=float, help="starting ask, with --value-mean")
    p.add_argument("--value-mean", type=float, help="prior mean of the fair price, with --ask0")
    _add_bp(p)
    p.set_defaults(func=cmd_bayes)

    p = sub.add_parser("frontier", help="efficient frontier of (LVF, FT) over theta")
    _add_vol(p)
    p.add_argument("--thetas", help="comma-separated theta values")
    p.add_argument("--theta-from", type=float, default=1e-7)
    p.add_argument("--theta-to", type=float, default=1e-3)
    p.add_argument("--points", type=int, default=50)
    p.add_argument("--delta-min", type=float, default=1e-7)
    p.add_argument("--delta-max", type=float, default=1e-2)
    p.add_argument("--z-min", type=float, default=-0.05)
    p.add_argument("--z-max", type=float, default=0.0)
    p.add_argument("--prior-sigma0", type=float, help="optimise under a lognormal value prior")
    _add_bp(p)
    p.add_argument("--csv", help="write CSV here instead of stdout")
    p.set_defaults(func=cmd_frontier)

    p = sub.add_parser("sweep", help="LVF and FT along a parameter sweep, as CSV")
    _add_vol(p)
    _add_drift(p, required=False)
    p.add_argument("--vary", choices=("delta", "z0"), required=True)
    p.add_argument("--from", dest="lo", type=float, required=True)
    p.add_argument("--to", dest="hi", type=float, required=True)
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--spacing", choices=("lin", "log"))
    p.add_argument("--z0", type=float, default=0.0, help="fixed z0 when varying delta")
    _add_bp(p)
    p.add_argument("--csv", help="write CSV here instead of stdout")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("simulate", help="Monte Carlo estimate next to the closed form")
    p.add_argument("--kind", choices=("dutch", "stationary", "gda"), default="dutch")
    _add_vol(p)
    _add_drift(p)
    p.add_argument("--z0", type=float, default=0.0)
    p.add_argument("--emission-rate", type=float, default=1.0)
    p.add_argument("--price", type=float, default=1.0)
    _add_bp(p)
    _add_sim(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("validate", help="closed forms vs Monte Carlo at reference parameters")
    p.add_argument("--suite", choices=VALIDATE_SUITES, default="all")
    _add_sim(p)
    p.set_defaults(func=cmd_validate)
    return parser


def _check_usage(parser: argparse.ArgumentParser, args) -> None:
    cmd = args.command
    if cmd == "bayes":
        if args.ask0 is None and args.mu0 is None:
            parser.error("bayes: give either --mu0 or both --ask0 and --value-mean")
        if args.ask0 is not None and (args.mu0 is not None or args.value_mean is None):
            parser.error("bayes: --ask0 needs --value-mean and excludes --mu0")
    if cmd == "sweep":
        if args.vary == "z0" and args.delta is None and args.decay_per_sec is None:
            parser.error("sweep --vary z0: one of --decay-per-sec or --delta is required")
        if args.vary == "delta" and (args.delta is not None or args.decay_per_sec is not None):
            parser.error("sweep --vary delta: --delta/--decay-per-sec conflict with the swept axis")
    if getattr(args, "points", 1) < 1:
        parser.error("--points must be >= 1")
    if cmd == "frontier" and not args.thetas and args.points > 1 and not 0 < args.theta_from <= args.theta_to:
        parser.error("frontier: need 0 < --theta-from <= --theta-to for a log-spaced sweep")
    if cmd in ("simulate", "validate"):
        for flag in ("paths", "chains", "blocks_per_chain", "threads", "max_blocks"):
            if getattr(args, flag) < 1:
                parser.error(f"--{flag.replace('_', '-')} must be >= 1")
        if args.burn_in < 0:
            parser.error("--burn-in must be >= 0")
        if not 0 <= args.seed < 2**64:
            parser.error("--seed must be a 64-bit unsigned integer")


def _is_number(token: str) -> bool:
    try:
        float(token)
    except ValueError:
        return False
    return True


def _attach_negative_values(argv: Sequence[str]) -> list[str]:
    """Rewrite ``--flag -1e-4`` as ``--flag=-1e-4``.

    argparse only recognises plain negative literals like ``-0.5`` as values;
    scientific notation would otherwise be taken for an unknown option.
    """
    out: list[str] = []
    for tok in argv:
        prev = out[-1] if out else ""
        if tok.startswith("-") and _is_number(tok) and prev.startswith("--") and "=" not in prev:
            out[-1] = f"{prev}={tok}"
        else:
            out.append(tok)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    argv = _attach_negative_values(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(argv)
        _check_usage(parser, args)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, sys.stdout)
    except (DomainError, OverflowError, ValueError) as exc:
        print(f"dutchlvf {args.command}: error: {exc}", file=sys.stderr)
        return 1


run = main

if __name__ == "__main__":
    sys.exit(main())
