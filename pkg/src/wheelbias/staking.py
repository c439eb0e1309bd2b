"""Wager sizing: expected value, Kelly fractions, flat-stake derivation.

``payout_b`` is everywhere the net odds of the bet: units won per unit staked
when the bet hits (35 for a straight-up number on a European wheel).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import EmptySequenceError
from .validation import check_non_negative, check_positive, check_probability

STRAIGHT_UP_ODDS = 35.0

# How a simultaneous multi-number wager maps onto one Kelly bet:
#   "summed" -- single-number odds applied to the summed win probability
#   "netted" -- odds reduced for the legs that lose when one number hits
SUMMED = "summed"
NETTED = "netted"
_ODDS_RULES = (SUMMED, NETTED)


@dataclass(frozen=True)
class Edge:
    """Net odds, win probability, and the implied expectation per unit staked."""

    payout_b: float
    win_prob: float
    ev_per_unit: float

    @classmethod
    def from_odds(cls, payout_b: float, win_prob: float) -> "Edge":
        payout_b = check_positive(payout_b, "payout_b")
        win_prob = check_probability(win_prob, "win_prob")
        return cls(payout_b, win_prob, payout_b * win_prob - (1.0 - win_prob))


def expected_value(payout_b: float, win_prob: float, stake: float = 1.0) -> float:
    """Expected profit of staking ``stake`` at net odds ``payout_b``."""
    stake = check_non_negative(stake, "stake")
    return stake * Edge.from_odds(payout_b, win_prob).ev_per_unit


def kelly_fraction(payout_b: float, win_prob: float) -> float:
    """Growth-optimal fraction of capital: (B*p - q) / B with q = 1 - p.

    Negative values mean the bet has no edge and are returned as-is; the
    caller decides not to bet.
    """
    payout_b = check_positive(payout_b, "payout_b")
    p = check_probability(win_prob, "win_prob")
    return (payout_b * p - (1.0 - p)) / payout_b


def combined_kelly(
    selected_probs: Sequence[float],
    payout_b: float = STRAIGHT_UP_ODDS,
    odds_rule: str = SUMMED,
) -> float:
    """Total Kelly fraction for simultaneous straight-up bets on several
    numbers, split equally per number by the backtest engine.

    The default ``summed`` rule treats the combination as one bet at the
    single-number odds with the summed win probability. ``netted`` instead
    reduces the odds for the stake lost on the other legs when one number
    hits: B_eff = (payout_b - (k - 1)) / k for k numbers.
    """
    if odds_rule not in _ODDS_RULES:
        raise ValueError(f"unknown odds_rule {odds_rule!r}, expected one of {_ODDS_RULES}")
    probs = [check_probability(p, "selected probability") for p in selected_probs]
    if not probs:
        raise ValueError("selected_probs must be non-empty")
    total_prob = sum(probs)
    if total_prob > 1.0:
        raise ValueError(f"selected probabilities sum to {total_prob} > 1")
    if odds_rule == SUMMED:
        odds = payout_b
    else:
        odds = (payout_b - (len(probs) - 1)) / len(probs)
    return kelly_fraction(odds, total_prob)


def flat_stake_from_kelly_run(kelly_stakes: Sequence[float]) -> float:
    """Flat wager derived as the mean of the realized Kelly stakes of a run.

    Non-causal by construction: the flat system for a segment is sized from
    the Kelly backtest of that same segment.
    """
    stakes = np.asarray(kelly_stakes, dtype=np.float64)
    if stakes.size == 0:
        raise EmptySequenceError("cannot average an empty stake sequence")
    return float(stakes.mean())
