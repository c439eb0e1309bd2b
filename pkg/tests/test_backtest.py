import numpy as np
import pytest

from wheelbias import wheel
from wheelbias.backtest import (
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
from wheelbias.errors import EmptySegmentError
from wheelbias.frequency import EmpiricalDistribution
from wheelbias.staking import flat_stake_from_kelly_run

from conftest import make_series


def dist_from_counts(counts):
    return EmpiricalDistribution.from_counts(np.asarray(counts, dtype=np.int64))


def dist_with_rates(rates, total=10_000):
    """Distribution whose named pockets hit the given rates; the rest of the
    mass spreads evenly (staying below any 3% filter)."""
    counts = np.zeros(37, dtype=np.int64)
    for pocket, rate in rates.items():
        counts[pocket] = round(rate * total)
    free = [p for p in range(37) if p not in rates]
    remaining = total - counts.sum()
    base, extra = divmod(int(remaining), len(free))
    for i, pocket in enumerate(free):
        counts[pocket] = base + (1 if i < extra else 0)
    return dist_from_counts(counts)


def flat_config(stake, **kwargs):
    return StrategyConfig(staking=StakingMode.FLAT, flat_stake=stake, **kwargs)


# ---------------------------------------------------------------------------
# selection
# ---------------------------------------------------------------------------


class TestSelectNumbers:
    def test_session_fixture(self, session_dist):
        assert select_numbers(session_dist, StrategyConfig()) == {9, 22}

    def test_two_pockets_above_threshold(self):
        dist = dist_with_rates({9: 0.032214, 10: 0.030083})
        assert select_numbers(dist, StrategyConfig()) == {9, 10}

    def test_uniform_wheel_selects_nothing(self):
        dist = dist_from_counts(np.full(37, 100))
        assert select_numbers(dist, StrategyConfig()) == frozenset()

    def test_ranked_by_descending_probability(self):
        dist = dist_with_rates({20: 0.031, 9: 0.034, 4: 0.032})
        ranked = ranked_selection(dist, StrategyConfig())
        assert [p for p, _ in ranked] == [9, 4, 20]

    def test_top_k_with_tie_broken_by_lower_pocket(self):
        dist = dist_with_rates({15: 0.032, 3: 0.032, 9: 0.04})
        config = StrategyConfig(
            selection_rule=SelectionRule.TOP_K_ABOVE_THRESHOLD, top_k=2
        )
        assert select_numbers(dist, config) == {9, 3}

    def test_top_k_requires_k(self):
        with pytest.raises(ValueError):
            StrategyConfig(selection_rule=SelectionRule.TOP_K_ABOVE_THRESHOLD)


class TestConfigValidation:
    @pytest.mark.parametrize(
        "kwargs",
        [
            {"filter_threshold": 0.0},
            {"filter_threshold": 1.0},
            {"initial_capital": 0.0},
            {"kelly_multiplier": 0.0},
            {"kelly_multiplier": 1.5},
            {"payout_b": 0.0},
            {"staking": StakingMode.FLAT},  # missing flat_stake
            {"ruin_policy": "martingale"},
            {"kelly_odds_rule": "bogus"},
        ],
    )
    def test_rejects_bad_values(self, kwargs):
        with pytest.raises(ValueError):
            StrategyConfig(**kwargs)


# ---------------------------------------------------------------------------
# engine
# ---------------------------------------------------------------------------


class TestRunBacktest:
    def test_single_hit_pays_net_odds(self):
        dist = dist_with_rates({9: 0.05})
        ledger, summary = run_backtest(make_series([9]), dist, flat_config(1.0))
        assert ledger[0].pnl == pytest.approx(35.0)
        assert (summary.wins, summary.losses, summary.pnl) == (1, 0, pytest.approx(35.0))

    def test_two_misses(self):
        dist = dist_with_rates({9: 0.05})
        ledger, summary = run_backtest(make_series([0, 0]), dist, flat_config(1.0))
        assert summary.pnl == pytest.approx(-2.0)
        assert summary.max_drawdown == pytest.approx(2.0)
        assert summary.wins == 0

    def test_simultaneous_bet_nets_the_losing_leg(self):
        dist = dist_with_rates({9: 0.05, 22: 0.04})
        stake = 3.0  # 1.5 per number
        ledger, _ = run_backtest(make_series([9]), dist, flat_config(stake))
        per_number = stake / 2
        assert ledger[0].pnl == pytest.approx(35 * per_number - per_number)
        assert ledger[0].pnl == pytest.approx(34 * per_number)

    def test_empty_segment(self, session_dist):
        with pytest.raises(EmptySegmentError):
            run_backtest(make_series([]), session_dist, StrategyConfig())

    def test_empty_selection_places_no_bets(self):
        dist = dist_from_counts(np.full(37, 100))
        ledger, summary = run_backtest(make_series([1, 2, 3]), dist, StrategyConfig())
        assert all(e.stake_total == 0.0 for e in ledger)
        assert summary.n_obs == summary.wins == summary.losses == 0
        assert summary.pnl == 0.0 and summary.pct_pnl == 0.0

    def test_negative_kelly_means_no_bet(self):
        # hottest pocket clears the filter but sits below break-even (1/36)
        dist = dist_with_rates({9: 0.0277})
        config = StrategyConfig(
            filter_threshold=0.025,
            selection_rule=SelectionRule.TOP_K_ABOVE_THRESHOLD,
            top_k=1,
        )
        assert select_numbers(dist, config) == {9}
        ledger, summary = run_backtest(make_series([9, 9]), dist, config)
        assert all(e.stake_total == 0.0 for e in ledger)
        assert summary.pnl == 0.0

    def test_kelly_stakes_compound_on_current_equity(self):
        dist = dist_with_rates({9: 0.05})
        config = StrategyConfig(initial_capital=2000.0)
        fraction = (36 * 0.05 - 1) / 35
        ledger, _ = run_backtest(make_series([0, 9, 0]), dist, config)
        equity = 2000.0
        for entry in ledger:
            assert entry.stake_total == pytest.approx(fraction * equity)
            equity = entry.equity_after
        assert ledger[0].stake_total != ledger[1].stake_total

    def test_kelly_multiplier_scales_stakes(self):
        dist = dist_with_rates({9: 0.05})
        full, _ = run_backtest(make_series([0]), dist, StrategyConfig())
        half, _ = run_backtest(
            make_series([0]), dist, StrategyConfig(kelly_multiplier=0.5)
        )
        assert half[0].stake_total == pytest.approx(full[0].stake_total / 2)

    def test_kelly_never_exceeds_fraction_of_equity(self):
        dist = dist_with_rates({9: 0.06})
        fraction = (36 * 0.06 - 1) / 35
        series = wheel.spin(wheel.biased({9: 0.06}, seed=3), 500)
        ledger, _ = run_backtest(series, dist, StrategyConfig())
        equity = 2000.0
        for entry in ledger:
            assert entry.stake_total <= fraction * equity + 1e-12
            equity = entry.equity_after
            assert equity > 0.0

    def test_flat_ruin_stops_betting(self):
        dist = dist_with_rates({9: 0.05})
        config = flat_config(800.0, initial_capital=2000.0)
        ledger, summary = run_backtest(make_series([0, 0, 0, 0]), dist, config)
        # 2000 -> 1200 -> 400; the third stake of 800 is unaffordable
        assert [e.stake_total for e in ledger] == [800.0, 800.0, 0.0, 0.0]
        assert [e.equity_after for e in ledger] == [1200.0, 400.0, 400.0, 400.0]
        assert summary.n_obs == 2
        assert summary.wins + summary.losses == summary.n_obs

    def test_selection_frozen_for_whole_segment(self):
        # a segment full of pocket 4 hits must not alter the bet on pocket 9
        dist = dist_with_rates({9: 0.05})
        ledger, _ = run_backtest(make_series([4] * 50), dist, flat_config(1.0))
        assert all(e.selected_numbers == frozenset({9}) for e in ledger)

    def test_accounting_identity(self):
        dist = dist_with_rates({9: 0.05, 22: 0.04})
        series = wheel.spin(wheel.biased({9: 0.05, 22: 0.04}, seed=11), 800)
        for config in (StrategyConfig(), flat_config(25.0)):
            ledger, _ = run_backtest(series, dist, config)
            final = ledger[-1].equity_after
            total = 2000.0 + sum(e.pnl for e in ledger)
            assert final == pytest.approx(total, rel=1e-9)

    def test_flat_extremes_are_constant(self):
        dist = dist_with_rates({9: 0.05, 22: 0.04})
        series = wheel.spin(wheel.biased({9: 0.05, 22: 0.04}, seed=5), 600)
        stake = 10.0
        _, summary = run_backtest(series, dist, flat_config(stake))
        per_number = stake / 2
        assert summary.max_loss == pytest.approx(stake)
        assert summary.max_loss == pytest.approx(summary.avg_loss)
        assert summary.max_win == pytest.approx(35 * per_number - (stake - per_number))
        assert summary.max_win == pytest.approx(summary.avg_win)


# ---------------------------------------------------------------------------
# summary identities (randomized)
# ---------------------------------------------------------------------------


def random_backtests(n_runs, seed):
    """Yield (config, ledger, summary) over randomized wheels and configs."""
    rng = np.random.default_rng(seed)
    for _ in range(n_runs):
        hot = {
            int(p): float(r)
            for p, r in zip(
                rng.choice(37, size=rng.integers(1, 4), replace=False),
                rng.uniform(0.031, 0.06, size=3),
            )
        }
        spec = wheel.biased(hot, seed=int(rng.integers(1 << 31)))
        series = wheel.spin(spec, int(rng.integers(50, 600)))
        dist = dist_with_rates(hot)
        if rng.random() < 0.5:
            config = StrategyConfig(
                initial_capital=float(rng.uniform(500, 5000)),
                kelly_multiplier=float(rng.uniform(0.2, 1.0)),
            )
        else:
            config = flat_config(
                float(rng.uniform(1, 100)),
                initial_capital=float(rng.uniform(500, 5000)),
            )
        ledger, summary = run_backtest(series, dist, config)
        yield config, ledger, summary


class TestSummaryIdentities:
    def test_identities_hold_on_random_runs(self):
        checked = 0
        for config, ledger, summary in random_backtests(100, seed=2024):
            assert summary.wins + summary.losses == summary.n_obs
            assert summary.pnl == pytest.approx(
                summary.total_wins - summary.total_losses, abs=1e-6
            )
            if summary.wins:
                assert summary.avg_win == pytest.approx(summary.total_wins / summary.wins)
            else:
                assert summary.avg_win == 0.0
            if summary.losses:
                assert summary.avg_loss == pytest.approx(
                    summary.total_losses / summary.losses
                )
            else:
                assert summary.avg_loss == 0.0
            assert summary.pct_pnl == pytest.approx(
                100 * summary.pnl / config.initial_capital
            )
            assert summary.total_losses >= 0.0
            # ordering up to summation round-off in the totals
            assert summary.max_win >= summary.avg_win - 1e-9 * max(summary.avg_win, 1.0)
            assert summary.max_loss >= summary.avg_loss - 1e-9 * max(summary.avg_loss, 1.0)
            assert summary.avg_win >= 0.0 and summary.avg_loss >= 0.0
            checked += 1
        assert checked == 100

    def test_equity_accounting_on_random_runs(self):
        for config, ledger, _ in random_backtests(50, seed=77):
            final = ledger[-1].equity_after
            expected = config.initial_capital + sum(e.pnl for e in ledger)
            assert final == pytest.approx(expected, rel=1e-9)


# ---------------------------------------------------------------------------
# drawdown / calmar / streaks
# ---------------------------------------------------------------------------


def brute_force_drawdown(path):
    """O(n^2) oracle: sup over t of (sup over s<=t of path[s]) - path[t]."""
    path = np.asarray(path, dtype=float)
    worst = 0.0
    for t in range(len(path)):
        worst = max(worst, float(np.max(path[: t + 1]) - path[t]))
    return worst


class TestMaxDrawdown:
    def test_monotone_increasing_path(self):
        assert max_drawdown([1.0, 2.0, 3.5, 10.0]) == 0.0

    def test_known_path(self):
        assert max_drawdown([100.0, 120.0, 80.0, 110.0]) == pytest.approx(40.0)
        assert brute_force_drawdown([100.0, 120.0, 80.0, 110.0]) == pytest.approx(40.0)

    def test_matches_brute_force_oracle(self, rng):
        for _ in range(1000):
            n = int(rng.integers(1, 201))
            path = np.cumsum(rng.normal(0, 10, size=n)) + 100
            assert max_drawdown(path) == brute_force_drawdown(path)

    def test_empty_path(self):
        with pytest.raises(ValueError):
            max_drawdown([])


class TestCalmar:
    def test_published_ratios(self):
        assert calmar(29979.14, 5053.89) == pytest.approx(5.93, abs=0.01)
        assert calmar(6839.57, 7167.49) == pytest.approx(0.95, abs=0.01)

    def test_zero_drawdown_sentinels(self):
        assert calmar(10.0, 0.0) == float("inf")
        assert calmar(0.0, 0.0) == 0.0
        assert calmar(0.0, 123.0) == 0.0

    def test_negative_drawdown_rejected(self):
        with pytest.raises(ValueError):
            calmar(1.0, -0.5)


class TestLossStreaks:
    def test_direct_rle(self):
        hist, longest = loss_streaks([-1.0, -2.0, 3.0, -1.0])
        assert hist == {2: 1, 1: 1}
        assert longest == 2

    def test_all_wins(self):
        hist, longest = loss_streaks([1.0, 2.0])
        assert hist == {}
        assert longest == 0

    def test_trailing_streak_counts(self):
        hist, longest = loss_streaks([1.0, -1.0, -1.0, -1.0])
        assert hist == {3: 1}
        assert longest == 3

    def test_zero_pnl_breaks_a_streak(self):
        hist, longest = loss_streaks([-1.0, 0.0, -1.0])
        assert hist == {1: 2}
        assert longest == 1

    @staticmethod
    def rle_oracle(pnls):
        longest = run = 0
        for value in pnls:
            run = run + 1 if value < 0 else 0
            longest = max(longest, run)
        return longest

    def test_matches_independent_scan_on_wheel_run(self):
        dist = dist_with_rates({9: 0.031})
        series = wheel.spin(wheel.biased({9: 0.03}, seed=99), 2479)
        ledger, summary = run_backtest(series, dist, flat_config(10.0))
        assert summary.max_consecutive_losses == self.rle_oracle([e.pnl for e in ledger])

    def test_matches_independent_scan_on_random_ledgers(self, rng):
        for _ in range(100):
            pnls = rng.choice([-1.0, 2.0], size=rng.integers(1, 300), p=[0.8, 0.2])
            hist, longest = loss_streaks(pnls.tolist())
            assert longest == self.rle_oracle(pnls)
            assert sum(k * v for k, v in hist.items()) == int(np.sum(pnls < 0))


class TestSummarize:
    def test_streak_fields_come_from_ledger(self):
        dist = dist_with_rates({9: 0.05})
        series = make_series([0, 0, 9, 0])
        ledger, summary = run_backtest(series, dist, flat_config(1.0))
        assert summary.max_consecutive_losses == 2
        assert summary.loss_streak_histogram == {2: 1, 1: 1}

    def test_to_dict_serializes_infinite_calmar_as_none(self):
        dist = dist_with_rates({9: 0.05})
        ledger, summary = run_backtest(make_series([9]), dist, flat_config(1.0))
        assert summary.calmar == float("inf")
        assert summary.to_dict()["calmar"] is None

    def test_summarize_ledger_reusable(self):
        dist = dist_with_rates({9: 0.05})
        ledger, summary = run_backtest(make_series([9, 0]), dist, flat_config(1.0))
        again = summarize_ledger(list(ledger), 2000.0)
        assert again == summary

    def test_flat_stake_mean_matches_helper(self):
        dist = dist_with_rates({9: 0.05})
        series = make_series([0, 9, 0, 0])
        ledger, _ = run_backtest(series, dist, flat_config(7.0))
        stakes = [e.stake_total for e in ledger if e.stake_total > 0]
        assert flat_stake_from_kelly_run(stakes) == pytest.approx(7.0)
