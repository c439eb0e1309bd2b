"""Anchored walk-forward evaluation of the filter-and-stake strategy.

Each run re-estimates pocket probabilities on the growing in-sample window,
freezes the selection and stake sizing, and replays the next out-of-sample
segment twice: once with compounding Kelly stakes and once with the flat
stake derived from that Kelly run. Capital resets to the configured initial
amount at every run.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .backtest import (
    LedgerEntry,
    PerformanceSummary,
    StakingMode,
    StrategyConfig,
    ranked_selection,
    run_backtest,
    with_staking,
)
from .frequency import EmpiricalDistribution, tally
from .spins import DataSplit
from .staking import combined_kelly, flat_stake_from_kelly_run
from .validation import N_POCKETS

ANCHORED = "anchored"
ROLLING = "rolling"
_MODES = (ANCHORED, ROLLING)


@dataclass(frozen=True)
class WfoPlan:
    """A data split plus the strategy parameters to walk forward with.

    ``mode`` is ``anchored`` (fixed-origin, growing estimation window) or
    ``rolling`` (window slides, keeping the initial in-sample length).
    The config's own staking mode is ignored here: every run evaluates both.
    """

    split: DataSplit
    config: StrategyConfig
    mode: str = ANCHORED

    def __post_init__(self):
        if not self.split.out_of_sample_segments:
            raise ValueError("the plan needs at least one out-of-sample segment")
        if self.mode not in _MODES:
            raise ValueError(f"unknown mode {self.mode!r}, expected one of {_MODES}")


@dataclass(frozen=True)
class WfoRunReport:
    """One walk-forward run: the frozen selection and both staking results.

    ``kelly_fraction`` is the raw growth-optimal fraction before any
    multiplier; ``flat_stake`` is the mean realized Kelly stake of the same
    segment (non-causal by construction).
    """

    run_index: int
    in_sample_len: int
    selected_numbers: tuple[int, ...]
    selected_probs: tuple[float, ...]
    kelly_fraction: float
    flat_stake: float
    kelly_summary: PerformanceSummary
    flat_summary: PerformanceSummary
    kelly_ledger: tuple[LedgerEntry, ...]
    flat_ledger: tuple[LedgerEntry, ...]

    def to_dict(self) -> dict:
        return {
            "run_index": self.run_index,
            "in_sample_len": self.in_sample_len,
            "selected_numbers": list(self.selected_numbers),
            "selected_probs": list(self.selected_probs),
            "kelly_fraction": self.kelly_fraction,
            "flat_stake": self.flat_stake,
            "flat_stake_source": "mean_kelly_stake_same_segment",
            "kelly": self.kelly_summary.to_dict(),
            "flat": self.flat_summary.to_dict(),
        }


def run_wfo(plan: WfoPlan) -> tuple[WfoRunReport, ...]:
    """Walk the out-of-sample segments, re-estimating before each one."""
    config = plan.config
    history = plan.split.in_sample.outcomes
    window = len(plan.split.in_sample)
    counts = np.bincount(history, minlength=N_POCKETS)

    reports = []
    for run_index, segment in enumerate(plan.split.out_of_sample_segments, start=1):
        if plan.mode == ANCHORED:
            dist = EmpiricalDistribution.from_counts(counts)
        else:
            dist = tally(history[-window:])

        ranked = ranked_selection(dist, config)
        probs = tuple(p for _, p in ranked)
        fraction = (
            combined_kelly(probs, config.payout_b, config.kelly_odds_rule) if ranked else 0.0
        )

        kelly_ledger, kelly_summary = run_backtest(
            segment, dist, with_staking(config, StakingMode.KELLY)
        )
        realized = [e.stake_total for e in kelly_ledger if e.stake_total > 0.0]
        flat_stake = flat_stake_from_kelly_run(realized) if realized else 0.0
        flat_ledger, flat_summary = run_backtest(
            segment, dist, with_staking(config, StakingMode.FLAT, flat_stake)
        )

        reports.append(
            WfoRunReport(
                run_index=run_index,
                in_sample_len=int(dist.total),
                selected_numbers=tuple(pocket for pocket, _ in ranked),
                selected_probs=probs,
                kelly_fraction=fraction,
                flat_stake=flat_stake,
                kelly_summary=kelly_summary,
                flat_summary=flat_summary,
                kelly_ledger=kelly_ledger,
                flat_ledger=flat_ledger,
            )
        )
        counts = counts + np.bincount(segment.outcomes, minlength=N_POCKETS)
        history = np.concatenate([history, segment.outcomes])
    return tuple(reports)


@dataclass(frozen=True)
class StakingTotals:
    total_pnl: float
    profitable_runs: int
    worst_drawdown: float
    max_consecutive_losses: int

    def to_dict(self) -> dict:
        return {
            "total_pnl": self.total_pnl,
            "profitable_runs": self.profitable_runs,
            "worst_drawdown": self.worst_drawdown,
            "max_consecutive_losses": self.max_consecutive_losses,
        }


@dataclass(frozen=True)
class WfoComparison:
    """Side-by-side Kelly vs flat totals over a walk-forward sequence."""

    n_runs: int
    kelly: StakingTotals
    flat: StakingTotals

    def to_dict(self) -> dict:
        return {
            "n_runs": self.n_runs,
            "kelly": self.kelly.to_dict(),
            "flat": self.flat.to_dict(),
        }


def aggregate(reports) -> WfoComparison:
    """Overall totals per staking mode: summed P&L, profitable-run count,
    worst drawdown, and the longest loss streak across all runs."""
    reports = list(reports)
    if not reports:
        raise ValueError("no walk-forward reports to aggregate")

    def totals(summaries) -> StakingTotals:
        return StakingTotals(
            total_pnl=float(sum(s.pnl for s in summaries)),
            profitable_runs=sum(1 for s in summaries if s.pnl > 0.0),
            worst_drawdown=max(s.max_drawdown for s in summaries),
            max_consecutive_losses=max(s.max_consecutive_losses for s in summaries),
        )

    return WfoComparison(
        n_runs=len(reports),
        kelly=totals([r.kelly_summary for r in reports]),
        flat=totals([r.flat_summary for r in reports]),
    )
