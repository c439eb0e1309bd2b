"""Command-line front end.

Every command is a pure function of its flags, input files, and --seed:
re-running writes byte-identical reports (no timestamps in payloads). Exit
codes: 0 success, 1 validation/input error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import ou, wheel
from .backtest import SelectionRule, StakingMode
from .fairness import test_fairness
from .frequency import DEFAULT_BURN_IN, frequency_path, pocket_report, tally
from .spins import CSV, PLAIN, SpinSeries, parse_spins, serialize_spins, split
from .strategy import RouletteStrategy
from .walkforward import WfoPlan, aggregate, run_wfo

OUTPUT_DIR_ENV = "WHEELBIAS_OUTPUT_DIR"


def run() -> None:
    sys.exit(main())


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.handler(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wheelbias",
        description="Wheel-bias analysis, staking strategies, and walk-forward backtests.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="normalize a spin stream into the canonical CSV")
    p.add_argument("--input", required=True, help="spin file (plain or csv)")
    p.add_argument("--format", choices=["auto", PLAIN, CSV], default="auto")
    _add_out(p, "spins.csv")
    p.set_defaults(handler=_cmd_ingest)

    p = sub.add_parser("analyze", help="per-pocket counts, probabilities, and path stats")
    p.add_argument("--input", required=True)
    p.add_argument("--burn-in", type=int, default=DEFAULT_BURN_IN,
                   help="path values skipped before averaging (default %(default)s)")
    _add_out(p, "analysis.json")
    p.set_defaults(handler=_cmd_analyze)

    p = sub.add_parser("bias-test", help="chi-square fairness test against a uniform wheel")
    p.add_argument("--input", required=True)
    p.add_argument("--alpha", type=float, default=0.05)
    _add_out(p, "bias_test.json")
    p.set_defaults(handler=_cmd_bias_test)

    p = sub.add_parser("backtest", help="fit on an in-sample window, replay a segment")
    p.add_argument("--input", required=True)
    p.add_argument("--in-sample-len", type=int, default=None,
                   help="spins used for estimation; default: the whole file")
    p.add_argument("--evaluate", choices=["out-of-sample", "in-sample"],
                   default="out-of-sample",
                   help="segment to replay when --in-sample-len is given")
    _add_strategy_flags(p)
    p.add_argument("--staking", choices=[m.value for m in StakingMode], default="kelly")
    p.add_argument("--flat-stake", type=float, default=None,
                   help="flat wager; omitted: mean stake of a Kelly run on the same segment")
    _add_out(p, "backtest_summary.json")
    p.add_argument("--ledger-out", default=None, help="also write the per-spin ledger CSV here")
    p.set_defaults(handler=_cmd_backtest)

    p = sub.add_parser("wfo", help="anchored walk-forward over out-of-sample segments")
    p.add_argument("--input", required=True)
    p.add_argument("--in-sample", dest="in_sample_len", type=int, required=True)
    p.add_argument("--segments", required=True,
                   help="comma-separated out-of-sample segment lengths")
    _add_strategy_flags(p)
    p.add_argument("--mode", choices=["anchored", "rolling"], default="anchored")
    p.add_argument("--write-equity", action="store_true",
                   help="also write per-run equity path CSVs")
    p.add_argument("--output-dir", default=None,
                   help=f"report directory (default ${OUTPUT_DIR_ENV} or .)")
    p.set_defaults(handler=_cmd_wfo)

    p = sub.add_parser("simulate", help="generate a seeded synthetic spin stream")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pockets", default=None,
                   help="bias overrides, e.g. 9=0.0322,22=0.0308 (default: unbiased)")
    p.add_argument("--label", default=None)
    _add_out(p, "synthetic_spins.csv")
    p.set_defaults(handler=_cmd_simulate)

    p = sub.add_parser("ou-sim", help="simulate the mean-reverting probability process")
    p.add_argument("--theta", type=float)
    p.add_argument("--mu", type=float)
    p.add_argument("--sigma", type=float)
    p.add_argument("--p0", type=float)
    p.add_argument("--params-file", default=None,
                   help="JSON file with theta/mu/sigma/p0 (flags override)")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--paths", type=int, default=1000)
    p.add_argument("--dt", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--paths-out", default=None, help="ensemble CSV (default ou_paths.csv)")
    _add_out(p, "ou_moments.json")
    p.set_defaults(handler=_cmd_ou_sim)

    p = sub.add_parser("ou-fit", help="calibrate the process to one pocket's frequency path")
    p.add_argument("--input", required=True)
    p.add_argument("--pocket", type=int, required=True)
    p.add_argument("--dt", type=float, default=1.0)
    p.add_argument("--burn-in", type=int, default=0)
    _add_out(p, "ou_fit.json")
    p.set_defaults(handler=_cmd_ou_fit)

    return parser


def _add_out(parser, default_name: str) -> None:
    parser.add_argument("--out", default=None,
                        help=f"output file (default {default_name} in "
                             f"${OUTPUT_DIR_ENV} or .)")
    parser.set_defaults(default_out=default_name)


def _add_strategy_flags(parser) -> None:
    parser.add_argument("--threshold", type=float, default=0.03)
    parser.add_argument("--selection", choices=[r.value for r in SelectionRule],
                        default="all_above_threshold")
    parser.add_argument("--top-k", type=int, default=None)
    parser.add_argument("--capital", type=float, default=2000.0)
    parser.add_argument("--payout", type=float, default=35.0)
    parser.add_argument("--kelly-multiplier", type=float, default=1.0)


def _output_dir(args) -> Path:
    explicit = getattr(args, "output_dir", None)
    return Path(explicit or os.environ.get(OUTPUT_DIR_ENV) or ".")


def _out_path(args) -> Path:
    if args.out is not None:
        return Path(args.out)
    return _output_dir(args) / args.default_out


def _read_series(path: str, format: str = "auto") -> SpinSeries:
    if format == "auto":
        format = CSV if path.lower().endswith(".csv") else PLAIN
    with open(path, "r", encoding="utf-8") as handle:
        return parse_spins(handle, format=format)


def _write_json(path: Path, payload) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(path)
    return path


def _write_text(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    print(path)
    return path


def _strategy_from_args(args, staking: str = "kelly", flat_stake: float | None = None) -> RouletteStrategy:
    return RouletteStrategy(
        filter_threshold=args.threshold,
        selection_rule=args.selection,
        top_k=args.top_k,
        staking=staking,
        kelly_multiplier=args.kelly_multiplier,
        flat_stake=flat_stake,
        initial_capital=args.capital,
        payout_b=args.payout,
    )


def _cmd_ingest(args) -> None:
    series = _read_series(args.input, args.format)
    _write_text(_out_path(args), serialize_spins(series, format=CSV))


def _cmd_analyze(args) -> None:
    series = _read_series(args.input)
    _write_json(_out_path(args), pocket_report(series, burn_in=args.burn_in))


def _cmd_bias_test(args) -> None:
    report = test_fairness(tally(_read_series(args.input)), alpha=args.alpha)
    _write_json(_out_path(args), report.to_dict())


def _cmd_backtest(args) -> None:
    series = _read_series(args.input)
    if args.in_sample_len is None:
        fit_part = replay_part = series
    else:
        if not 0 < args.in_sample_len <= len(series):
            raise ValueError(
                f"--in-sample-len must lie in 1..{len(series)}, got {args.in_sample_len}"
            )
        fit_part = series.slice(0, args.in_sample_len)
        if args.evaluate == "in-sample":
            replay_part = fit_part
        else:
            replay_part = series.slice(args.in_sample_len, len(series))

    strategy = _strategy_from_args(args, staking=args.staking, flat_stake=args.flat_stake)
    strategy.fit(fit_part)
    ledger, summary = strategy.backtest(replay_part)

    payload = {
        "in_sample_len": len(fit_part),
        "evaluated_spins": len(replay_part),
        "selected_numbers": list(strategy.ranked_numbers_),
        "selected_probs": list(strategy.selected_probs_),
        "kelly_fraction": strategy.kelly_fraction_,
        "staking": args.staking,
        "summary": summary.to_dict(),
    }
    if args.staking == "flat":
        payload["flat_stake"] = ledger[0].stake_total if ledger else 0.0
        if args.flat_stake is None:
            payload["flat_stake_source"] = "mean_kelly_stake_same_segment"
    _write_json(_out_path(args), payload)
    if args.ledger_out is not None:
        _write_text(Path(args.ledger_out), _ledger_csv(ledger))


def _cmd_wfo(args) -> None:
    series = _read_series(args.input)
    try:
        segment_lens = [int(tok) for tok in args.segments.split(",") if tok.strip()]
    except ValueError:
        raise ValueError(f"--segments must be comma-separated integers, got {args.segments!r}")
    data_split = split(series, args.in_sample_len, segment_lens)
    plan = WfoPlan(split=data_split, config=_strategy_from_args(args)._config(), mode=args.mode)
    reports = run_wfo(plan)

    out_dir = _output_dir(args)
    for report in reports:
        _write_json(out_dir / f"wfo_run_{report.run_index}.json", report.to_dict())
        if args.write_equity:
            for mode, ledger in (("kelly", report.kelly_ledger), ("flat", report.flat_ledger)):
                _write_text(
                    out_dir / f"wfo_run_{report.run_index}_{mode}_equity.csv",
                    _equity_csv(ledger),
                )
    _write_json(out_dir / "wfo_aggregate.json", aggregate(reports).to_dict())


def _cmd_simulate(args) -> None:
    if args.pockets:
        overrides = _parse_overrides(args.pockets)
        spec = wheel.biased(overrides, seed=args.seed, label=args.label or "biased")
    else:
        spec = wheel.unbiased(seed=args.seed, label=args.label or "unbiased")
    series = wheel.spin(spec, args.n)
    _write_text(_out_path(args), serialize_spins(series, format=CSV))


def _parse_overrides(text: str) -> dict[int, float]:
    overrides = {}
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        pocket, _, prob = chunk.partition("=")
        try:
            overrides[int(pocket)] = float(prob)
        except ValueError:
            raise ValueError(f"cannot parse pocket override {chunk!r}; expected POCKET=PROB")
    if not overrides:
        raise ValueError("--pockets given but no overrides parsed")
    return overrides


def _ou_params_from_args(args) -> ou.OuParams:
    fields = {}
    if args.params_file is not None:
        loaded = json.loads(Path(args.params_file).read_text(encoding="utf-8"))
        fields.update({k: loaded[k] for k in ("theta", "mu", "sigma", "p0") if k in loaded})
    for name in ("theta", "mu", "sigma", "p0"):
        value = getattr(args, name)
        if value is not None:
            fields[name] = value
    missing = [k for k in ("theta", "mu", "sigma", "p0") if k not in fields]
    if missing:
        raise ValueError(f"missing process parameters: {', '.join(missing)}")
    return ou.OuParams(**fields)


def _cmd_ou_sim(args) -> None:
    params = _ou_params_from_args(args)
    ensemble = ou.simulate(params, n_steps=args.steps, n_paths=args.paths,
                           dt=args.dt, seed=args.seed)

    checkpoints = sorted({s for s in (1, 10, 100, 1000, 10000, args.steps) if s <= args.steps})
    rows = []
    for step in checkpoints:
        mean, variance = ou.moments(params, step * args.dt)
        values = ensemble.step_values(step)
        rows.append({
            "step": step,
            "t": step * args.dt,
            "mean": mean,
            "variance": variance,
            "ensemble_mean": float(values.mean()),
            "ensemble_variance": float(values.var(ddof=1)) if len(values) > 1 else 0.0,
        })
    payload = {
        "params": params.to_dict(),
        "dt": args.dt,
        "seed": args.seed,
        "n_steps": args.steps,
        "n_paths": args.paths,
        "range_violations": ou.range_violations(ensemble),
        "checkpoints": rows,
    }
    _write_json(_out_path(args), payload)

    paths_out = Path(args.paths_out) if args.paths_out else _output_dir(args) / "ou_paths.csv"
    lines = ["step,path_id,value"]
    for step in range(1, ensemble.n_steps + 1):
        column = ensemble.paths[:, step - 1]
        lines.extend(
            f"{step},{path_id},{column[path_id]!r}" for path_id in range(ensemble.n_paths)
        )
    _write_text(paths_out, "\n".join(lines) + "\n")


def _cmd_ou_fit(args) -> None:
    series = _read_series(args.input)
    path = frequency_path(series, args.pocket)
    params = ou.calibrate(path, dt=args.dt, burn_in=args.burn_in)
    payload = {
        "pocket": args.pocket,
        "dt": args.dt,
        "burn_in": args.burn_in,
        "n_samples": len(path) - args.burn_in,
        "params": params.to_dict(),
    }
    _write_json(_out_path(args), payload)


def _ledger_csv(ledger) -> str:
    lines = ["spin_index,outcome,selected,stake_total,pnl,equity_after"]
    for e in ledger:
        selected = "|".join(str(p) for p in sorted(e.selected_numbers))
        lines.append(
            f"{e.spin_index},{e.outcome},{selected},{e.stake_total!r},{e.pnl!r},{e.equity_after!r}"
        )
    return "\n".join(lines) + "\n"


def _equity_csv(ledger) -> str:
    lines = ["spin_index,equity"]
    lines.extend(f"{e.spin_index},{e.equity_after!r}" for e in ledger)
    return "\n".join(lines) + "\n"
