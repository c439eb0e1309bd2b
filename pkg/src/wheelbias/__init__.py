"""Wheel-bias analysis, staking strategies, and walk-forward backtests for
European roulette wheels."""

from .backtest import (
    BacktestResult,
    LedgerEntry,
    PerformanceSummary,
    SelectionRule,
    StakingMode,
    StrategyConfig,
    calmar,
    loss_streaks,
    max_drawdown,
    ranked_selection,
    run_backtest,
    select_numbers,
    summarize_ledger,
)
from .fairness import ChiSquareReport, chi_square_critical, chi_square_statistic, test_fairness
from .frequency import (
    EmpiricalDistribution,
    FrequencyPath,
    frequency_path,
    pocket_report,
    rolling_stats,
    tally,
)
from .ou import OrnsteinUhlenbeckModel, OuEnsemble, OuParams
from .spins import DataSplit, SpinSeries, parse_spins, serialize_spins, split
from .staking import (
    Edge,
    combined_kelly,
    expected_value,
    flat_stake_from_kelly_run,
    kelly_fraction,
)
from .strategy import RouletteStrategy
from .walkforward import WfoComparison, WfoPlan, WfoRunReport, aggregate, run_wfo
from .wheel import WheelSpec, biased, spin, unbiased

__version__ = "0.1.0"

__all__ = [
    "BacktestResult",
    "ChiSquareReport",
    "DataSplit",
    "Edge",
    "EmpiricalDistribution",
    "FrequencyPath",
    "LedgerEntry",
    "OrnsteinUhlenbeckModel",
    "OuEnsemble",
    "OuParams",
    "PerformanceSummary",
    "RouletteStrategy",
    "SelectionRule",
    "SpinSeries",
    "StakingMode",
    "StrategyConfig",
    "WfoComparison",
    "WfoPlan",
    "WfoRunReport",
    "WheelSpec",
    "aggregate",
    "biased",
    "calmar",
    "chi_square_critical",
    "chi_square_statistic",
    "combined_kelly",
    "expected_value",
    "flat_stake_from_kelly_run",
    "frequency_path",
    "kelly_fraction",
    "loss_streaks",
    "max_drawdown",
    "parse_spins",
    "pocket_report",
    "ranked_selection",
    "rolling_stats",
    "run_backtest",
    "run_wfo",
    "select_numbers",
    "serialize_spins",
    "spin",
    "split",
    "summarize_ledger",
    "tally",
    "test_fairness",
    "unbiased",
    "__version__",
]
