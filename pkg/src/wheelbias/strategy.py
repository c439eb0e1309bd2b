"""Scikit-learn style front end for the filter-and-stake strategy.

``fit`` tallies an in-sample spin stream and freezes the number selection
and Kelly sizing; ``backtest`` replays any other stream under that frozen
state. The estimator carries the same parameters as
:class:`~wheelbias.backtest.StrategyConfig` and therefore composes with
``get_params``/``set_params``/``clone``.
"""

from __future__ import annotations

from sklearn.base import BaseEstimator

from .backtest import (
    BacktestResult,
    SelectionRule,
    StakingMode,
    StrategyConfig,
    ranked_selection,
    run_backtest,
)
from .frequency import tally
from .staking import SUMMED, combined_kelly, flat_stake_from_kelly_run


class RouletteStrategy(BaseEstimator):
    """Bet the pockets whose empirical frequency clears a threshold.

    Parameters mirror StrategyConfig: the frequency filter, the selection
    rule, the staking mode (compounding Kelly or flat), and the bankroll.
    With flat staking and no explicit ``flat_stake``, the stake is derived at
    backtest time as the mean realized stake of a Kelly run over the same
    segment (non-causal, but the conventional flat-system sizing here).

    Attributes after fit:
        distribution_: empirical distribution of the training stream.
        ranked_numbers_: selected pockets, highest frequency first.
        selected_numbers_: the same pockets as a frozenset.
        selected_probs_: their empirical probabilities.
        kelly_fraction_: raw growth-optimal total fraction (before the
            multiplier); negative means no edge.
    """

    def __init__(
        self,
        filter_threshold: float = 0.03,
        selection_rule: str = SelectionRule.ALL_ABOVE_THRESHOLD,
        top_k: int | None = None,
        staking: str = StakingMode.KELLY,
        kelly_multiplier: float = 1.0,
        flat_stake: float | None = None,
        initial_capital: float = 2000.0,
        payout_b: float = 35.0,
        kelly_odds_rule: str = SUMMED,
    ):
        self.filter_threshold = filter_threshold
        self.selection_rule = selection_rule
        self.top_k = top_k
        self.staking = staking
        self.kelly_multiplier = kelly_multiplier
        self.flat_stake = flat_stake
        self.initial_capital = initial_capital
        self.payout_b = payout_b
        self.kelly_odds_rule = kelly_odds_rule

    def _config(self, staking=None, flat_stake=None) -> StrategyConfig:
        mode = StakingMode(self.staking if staking is None else staking)
        if mode is StakingMode.FLAT and flat_stake is None:
            flat_stake = self.flat_stake
        return StrategyConfig(
            filter_threshold=self.filter_threshold,
            selection_rule=SelectionRule(self.selection_rule),
            top_k=self.top_k,
            staking=mode,
            kelly_multiplier=self.kelly_multiplier,
            flat_stake=flat_stake if mode is StakingMode.FLAT else None,
            initial_capital=self.initial_capital,
            payout_b=self.payout_b,
            kelly_odds_rule=self.kelly_odds_rule,
        )

    def fit(self, X, y=None) -> "RouletteStrategy":
        """Estimate pocket probabilities from a spin stream and freeze the
        selection. ``X`` is a 1-D sequence of pocket ids or a SpinSeries."""
        # selection does not depend on the staking mode, so the flat stake
        # may stay undetermined until backtest time
        config = self._config(staking=StakingMode.KELLY)
        dist = tally(X)
        ranked = ranked_selection(dist, config)
        self.distribution_ = dist
        self.ranked_numbers_ = tuple(pocket for pocket, _ in ranked)
        self.selected_numbers_ = frozenset(self.ranked_numbers_)
        self.selected_probs_ = tuple(p for _, p in ranked)
        self.kelly_fraction_ = (
            combined_kelly(self.selected_probs_, self.payout_b, self.kelly_odds_rule)
            if ranked
            else 0.0
        )
        return self

    def _check_fitted(self):
        if not hasattr(self, "distribution_"):
            raise ValueError("strategy is not fitted; call fit() first")

    def backtest(self, X) -> BacktestResult:
        """Replay a spin segment under the frozen selection."""
        self._check_fitted()
        if StakingMode(self.staking) is StakingMode.FLAT and self.flat_stake is None:
            kelly_ledger, _ = run_backtest(
                X, self.distribution_, self._config(staking=StakingMode.KELLY)
            )
            realized = [e.stake_total for e in kelly_ledger if e.stake_total > 0.0]
            stake = flat_stake_from_kelly_run(realized) if realized else 0.0
            return run_backtest(
                X, self.distribution_, self._config(staking=StakingMode.FLAT, flat_stake=stake)
            )
        return run_backtest(X, self.distribution_, self._config())

    def score(self, X, y=None) -> float:
        """Percent P&L of a backtest over ``X`` (higher is better)."""
        return self.backtest(X).summary.pct_pnl
