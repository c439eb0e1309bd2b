"""Event-driven replay of a betting strategy over a spin segment.

The number selection is computed once from the supplied distribution and
frozen for the whole segment. Kelly stakes recompute on current equity every
spin (compounding); flat stakes never change. Betting stops for the remainder
of a segment once equity is exhausted or a flat stake is no longer
affordable; those spins stay in the ledger with a zero stake.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import NamedTuple, Sequence

import numpy as np

from .errors import EmptySegmentError
from .frequency import EmpiricalDistribution
from .staking import SUMMED, _ODDS_RULES, combined_kelly
from .validation import as_outcome_array


class SelectionRule(str, Enum):
    ALL_ABOVE_THRESHOLD = "all_above_threshold"
    TOP_K_ABOVE_THRESHOLD = "top_k_above_threshold"


class StakingMode(str, Enum):
    KELLY = "kelly"
    FLAT = "flat"


# Only supported policy: stop betting once a stake is no longer affordable.
STOP_WHEN_STAKE_UNAFFORDABLE = "stop_when_stake_unaffordable"


@dataclass(frozen=True)
class StrategyConfig:
    """Parameters of the filter-and-stake strategy.

    ``flat_stake`` is required for flat staking; a value of zero disables
    betting. ``kelly_odds_rule`` selects how multi-number Kelly bets are
    sized (see staking.combined_kelly).
    """

    filter_threshold: float = 0.03
    selection_rule: SelectionRule = SelectionRule.ALL_ABOVE_THRESHOLD
    top_k: int | None = None
    staking: StakingMode = StakingMode.KELLY
    kelly_multiplier: float = 1.0
    flat_stake: float | None = None
    initial_capital: float = 2000.0
    payout_b: float = 35.0
    kelly_odds_rule: str = SUMMED
    ruin_policy: str = STOP_WHEN_STAKE_UNAFFORDABLE

    def __post_init__(self):
        if not 0.0 < self.filter_threshold < 1.0:
            raise ValueError(f"filter_threshold must lie in (0, 1), got {self.filter_threshold}")
        if self.initial_capital <= 0.0:
            raise ValueError(f"initial_capital must be positive, got {self.initial_capital}")
        if not 0.0 < self.kelly_multiplier <= 1.0:
            raise ValueError(f"kelly_multiplier must lie in (0, 1], got {self.kelly_multiplier}")
        if self.payout_b <= 0.0:
            raise ValueError(f"payout_b must be positive, got {self.payout_b}")
        rule = SelectionRule(self.selection_rule)
        object.__setattr__(self, "selection_rule", rule)
        object.__setattr__(self, "staking", StakingMode(self.staking))
        if rule is SelectionRule.TOP_K_ABOVE_THRESHOLD and (self.top_k is None or self.top_k < 1):
            raise ValueError("top_k must be >= 1 under top_k_above_threshold")
        if self.staking is StakingMode.FLAT:
            if self.flat_stake is None or self.flat_stake < 0.0:
                raise ValueError("flat staking needs a non-negative flat_stake")
        if self.kelly_odds_rule not in _ODDS_RULES:
            raise ValueError(f"unknown kelly_odds_rule {self.kelly_odds_rule!r}")
        if self.ruin_policy != STOP_WHEN_STAKE_UNAFFORDABLE:
            raise ValueError(f"unsupported ruin_policy {self.ruin_policy!r}")


@dataclass(frozen=True)
class LedgerEntry:
    """One settled spin: the frozen selection, the wager, and its outcome."""

    spin_index: int
    outcome: int
    selected_numbers: frozenset[int]
    stake_total: float
    pnl: float
    equity_after: float


@dataclass(frozen=True)
class PerformanceSummary:
    """Run report in the house style: wins/losses, P&L, extremes, drawdown,
    Calmar, and the loss-streak profile.

    ``n_obs`` counts spins on which a wager was actually placed, so
    ``wins + losses == n_obs`` holds even when betting stopped early or the
    selection was empty. ``total_losses`` is a positive magnitude.
    """

    n_obs: int
    wins: int
    losses: int
    pnl: float
    pct_pnl: float
    total_wins: float
    total_losses: float
    avg_win: float
    avg_loss: float
    max_win: float
    max_loss: float
    max_drawdown: float
    calmar: float
    max_consecutive_losses: int
    loss_streak_histogram: dict[int, int]

    def to_dict(self) -> dict:
        out = {
            "n_obs": self.n_obs,
            "wins": self.wins,
            "losses": self.losses,
            "pnl": self.pnl,
            "pct_pnl": self.pct_pnl,
            "total_wins": self.total_wins,
            "total_losses": self.total_losses,
            "avg_win": self.avg_win,
            "avg_loss": self.avg_loss,
            "max_win": self.max_win,
            "max_loss": self.max_loss,
            "max_drawdown": self.max_drawdown,
            "calmar": self.calmar if np.isfinite(self.calmar) else None,
            "max_consecutive_losses": self.max_consecutive_losses,
            "loss_streak_histogram": {str(k): v for k, v in sorted(self.loss_streak_histogram.items())},
        }
        return out


class BacktestResult(NamedTuple):
    ledger: tuple[LedgerEntry, ...]
    summary: PerformanceSummary


def ranked_selection(
    dist: EmpiricalDistribution, config: StrategyConfig
) -> tuple[tuple[int, float], ...]:
    """Pockets passing the frequency filter as (pocket, probability) pairs,
    ordered by descending probability then ascending pocket id."""
    candidates = [
        (pocket, float(p)) for pocket, p in enumerate(dist.pmf) if p >= config.filter_threshold
    ]
    candidates.sort(key=lambda item: (-item[1], item[0]))
    if config.selection_rule is SelectionRule.TOP_K_ABOVE_THRESHOLD:
        candidates = candidates[: config.top_k]
    return tuple(candidates)


def select_numbers(dist: EmpiricalDistribution, config: StrategyConfig) -> frozenset[int]:
    """Set of pockets the strategy bets on; possibly empty."""
    return frozenset(pocket for pocket, _ in ranked_selection(dist, config))


def run_backtest(segment, dist: EmpiricalDistribution, config: StrategyConfig) -> BacktestResult:
    """Replay one spin segment under a frozen selection.

    Returns the per-spin ledger and its performance summary. The ledger covers
    every spin of the segment; entries after a ruin stop carry a zero stake.
    """
    outcomes = as_outcome_array(segment)
    if outcomes.size == 0:
        raise EmptySegmentError("cannot backtest an empty segment")

    ranked = ranked_selection(dist, config)
    pockets = frozenset(pocket for pocket, _ in ranked)
    n_selected = len(ranked)

    fraction = 0.0
    if n_selected and config.staking is StakingMode.KELLY:
        full = combined_kelly(
            [p for _, p in ranked], config.payout_b, config.kelly_odds_rule
        )
        # A negative fraction means no edge: stake nothing rather than short.
        fraction = max(full, 0.0) * config.kelly_multiplier
    flat = float(config.flat_stake or 0.0)

    equity = float(config.initial_capital)
    betting = n_selected > 0 and (
        fraction > 0.0 if config.staking is StakingMode.KELLY else flat > 0.0
    )
    entries = []
    for index, outcome in enumerate(outcomes.tolist()):
        stake_total = 0.0
        if betting:
            if equity <= 0.0:
                betting = False
            elif config.staking is StakingMode.KELLY:
                stake_total = fraction * equity
            elif flat > equity:
                betting = False
            else:
                stake_total = flat
        if stake_total > 0.0:
            per_number = stake_total / n_selected
            if outcome in pockets:
                pnl = config.payout_b * per_number - (stake_total - per_number)
            else:
                pnl = -stake_total
        else:
            pnl = 0.0
        equity += pnl
        entries.append(
            LedgerEntry(
                spin_index=index,
                outcome=outcome,
                selected_numbers=pockets,
                stake_total=stake_total,
                pnl=pnl,
                equity_after=equity,
            )
        )
    summary = summarize_ledger(entries, config.initial_capital)
    return BacktestResult(tuple(entries), summary)


def summarize_ledger(
    ledger: Sequence[LedgerEntry], initial_capital: float
) -> PerformanceSummary:
    """Aggregate a ledger into the standard performance summary."""
    wagered = [e for e in ledger if e.stake_total > 0.0]
    win_pnls = [e.pnl for e in wagered if e.pnl > 0.0]
    loss_pnls = [-e.pnl for e in wagered if e.pnl <= 0.0]
    wins, losses = len(win_pnls), len(loss_pnls)
    total_wins = float(sum(win_pnls))
    total_losses = float(sum(loss_pnls))
    pnl = total_wins - total_losses

    equity_path = np.empty(len(ledger) + 1)
    equity_path[0] = initial_capital
    equity_path[1:] = [e.equity_after for e in ledger]
    mdd = max_drawdown(equity_path)

    histogram, max_streak = loss_streaks(ledger)
    return PerformanceSummary(
        n_obs=wins + losses,
        wins=wins,
        losses=losses,
        pnl=pnl,
        pct_pnl=100.0 * pnl / initial_capital,
        total_wins=total_wins,
        total_losses=total_losses,
        avg_win=total_wins / wins if wins else 0.0,
        avg_loss=total_losses / losses if losses else 0.0,
        max_win=max(win_pnls, default=0.0),
        max_loss=max(loss_pnls, default=0.0),
        max_drawdown=mdd,
        calmar=calmar(pnl, mdd),
        max_consecutive_losses=max_streak,
        loss_streak_histogram=histogram,
    )


def max_drawdown(equity_path) -> float:
    """Largest peak-to-trough decline along an equity path, in currency.

    Single pass: the supremum over time of (running maximum - current value).
    """
    path = np.asarray(equity_path, dtype=np.float64)
    if path.size == 0:
        raise ValueError("equity path must be non-empty")
    peaks = np.maximum.accumulate(path)
    return float(np.max(peaks - path))


def calmar(pnl: float, max_drawdown: float) -> float:
    """Period return over maximum drawdown.

    A zero drawdown is only possible without losses: by convention the ratio
    is +inf for a positive P&L and 0 otherwise.
    """
    if max_drawdown < 0.0:
        raise ValueError(f"max_drawdown must be non-negative, got {max_drawdown}")
    if max_drawdown == 0.0:
        return float("inf") if pnl > 0.0 else 0.0
    return pnl / max_drawdown


def loss_streaks(ledger) -> tuple[dict[int, int], int]:
    """Run-length profile of consecutive losing spins (pnl < 0).

    Accepts a ledger or a bare sequence of P&L values. Returns the histogram
    of completed streak lengths (a streak cut off by the end of the segment
    counts) and the maximum streak length.
    """
    pnls = [getattr(e, "pnl", e) for e in ledger]
    histogram: dict[int, int] = {}
    run = 0
    for pnl in pnls:
        if pnl < 0.0:
            run += 1
        elif run:
            histogram[run] = histogram.get(run, 0) + 1
            run = 0
    if run:
        histogram[run] = histogram.get(run, 0) + 1
    return histogram, max(histogram, default=0)


def with_staking(
    config: StrategyConfig, staking: StakingMode, flat_stake: float | None = None
) -> StrategyConfig:
    """Copy a config with a different staking mode (and flat stake)."""
    return replace(config, staking=StakingMode(staking), flat_stake=flat_stake)
