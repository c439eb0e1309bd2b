import numpy as np
import pytest

from wheelbias import presets, wheel
from wheelbias.backtest import StrategyConfig, select_numbers
from wheelbias.frequency import tally
from wheelbias.spins import SpinSeries, split
from wheelbias.staking import combined_kelly
from wheelbias.walkforward import WfoPlan, aggregate, run_wfo

from conftest import make_series


def session_plan_series(seed=0):
    spec = wheel.biased({9: 0.0322, 22: 0.0308}, seed=seed)
    return wheel.spin(spec, presets.TOTAL_SPINS)


def session_plan(seed=0, **config_kwargs):
    data_split = split(
        session_plan_series(seed), presets.IN_SAMPLE_SPINS, presets.OOS_SEGMENT_LENGTHS
    )
    return WfoPlan(split=data_split, config=StrategyConfig(**config_kwargs))


def engineered_series():
    """10,980 spins whose first 7,479 hold pocket 9 at 3.2758% and pocket 20
    at 2.9282%, everything else well below; the tail just cycles."""
    counts = np.zeros(37, dtype=np.int64)
    counts[9] = 245   # 245 / 7479 = 3.2758%
    counts[20] = 219  # 219 / 7479 = 2.9282%
    free = [p for p in range(37) if p not in (9, 20)]
    base, extra = divmod(7479 - 245 - 219, len(free))
    for i, pocket in enumerate(free):
        counts[pocket] = base + (1 if i < extra else 0)
    head = np.repeat(np.arange(37), counts)
    np.random.default_rng(1).shuffle(head)
    tail = np.arange(presets.TOTAL_SPINS - 7479) % 37
    return make_series(np.concatenate([head, tail]))


class TestRunWfo:
    def test_anchored_window_sizes_match_session_plan(self):
        reports = run_wfo(session_plan())
        assert [r.in_sample_len for r in reports] == [
            5000, 7479, 7978, 8479, 8844, 9336, 10095,
        ]
        assert [r.run_index for r in reports] == list(range(1, 8))

    def test_run2_selection_and_sizing_on_engineered_data(self):
        data_split = split(
            engineered_series(), presets.IN_SAMPLE_SPINS, presets.OOS_SEGMENT_LENGTHS
        )
        plan = WfoPlan(split=data_split, config=StrategyConfig(filter_threshold=0.029))
        report = run_wfo(plan)[1]
        assert report.in_sample_len == 7479
        assert report.selected_numbers == (9, 20)
        assert report.selected_probs == pytest.approx((0.032758, 0.029282), abs=5e-7)
        assert report.kelly_fraction == pytest.approx(0.035242, abs=1e-6)

    def test_single_segment_degenerates_to_plain_backtest(self):
        series = session_plan_series(seed=4)
        data_split = split(series, 5000, [len(series) - 5000])
        reports = run_wfo(WfoPlan(split=data_split, config=StrategyConfig()))
        assert len(reports) == 1
        assert reports[0].in_sample_len == 5000

    def test_anchored_estimation_uses_exact_prefix(self):
        plan = session_plan(seed=9)
        series = plan.split.flatten()
        config = plan.config
        for report in run_wfo(plan):
            prefix = tally(series[: report.in_sample_len])
            assert frozenset(report.selected_numbers) == select_numbers(prefix, config)
            assert report.selected_probs == pytest.approx(
                tuple(prefix.pmf[p] for p in report.selected_numbers)
            )

    def test_anchoring_counts_add_segment_by_segment(self):
        plan = session_plan(seed=9)
        series = plan.split.flatten()
        windows = plan.split.anchored_window_lengths
        for k in range(len(windows) - 1):
            left = tally(series[: windows[k]]).counts + tally(
                plan.split.out_of_sample_segments[k]
            ).counts
            right = tally(series[: windows[k + 1]]).counts
            assert np.array_equal(left, right)

    def test_capital_resets_each_run(self):
        for report in run_wfo(session_plan(seed=2)):
            first = report.kelly_ledger[0]
            assert first.equity_after == pytest.approx(2000.0 + first.pnl)
            first_flat = report.flat_ledger[0]
            assert first_flat.equity_after == pytest.approx(2000.0 + first_flat.pnl)

    def test_flat_stake_is_mean_kelly_stake(self):
        for report in run_wfo(session_plan(seed=2)):
            stakes = [e.stake_total for e in report.kelly_ledger if e.stake_total > 0]
            if stakes:
                assert report.flat_stake == pytest.approx(float(np.mean(stakes)))

    def test_kelly_fraction_matches_selected_probs(self):
        for report in run_wfo(session_plan(seed=2)):
            if report.selected_probs:
                assert report.kelly_fraction == pytest.approx(
                    combined_kelly(report.selected_probs)
                )

    def test_deterministic(self):
        assert run_wfo(session_plan(seed=6)) == run_wfo(session_plan(seed=6))

    def test_empty_selection_run_is_all_zero(self):
        # a cycling series keeps every pocket at ~1/37, below the filter
        series = make_series(np.arange(600) % 37)
        data_split = split(series, 500, [100])
        report = run_wfo(WfoPlan(split=data_split, config=StrategyConfig()))[0]
        assert report.selected_numbers == ()
        assert report.flat_stake == 0.0
        assert report.kelly_summary.pnl == 0.0
        assert report.flat_summary.n_obs == 0

    def test_rolling_mode_keeps_window_width(self):
        plan = session_plan(seed=5)
        rolling = WfoPlan(split=plan.split, config=plan.config, mode="rolling")
        reports = run_wfo(rolling)
        assert all(r.in_sample_len == 5000 for r in reports)

    def test_rolling_estimates_trailing_window(self):
        plan = session_plan(seed=5)
        rolling = WfoPlan(split=plan.split, config=plan.config, mode="rolling")
        series = plan.split.flatten()
        starts = plan.split.anchored_window_lengths
        for report, end in zip(run_wfo(rolling), starts):
            prefix = tally(series[end - 5000 : end])
            assert frozenset(report.selected_numbers) == select_numbers(prefix, plan.config)

    def test_plan_validation(self):
        series = make_series([1, 2, 3, 4])
        data_split = split(series, 3, [1])
        with pytest.raises(ValueError):
            WfoPlan(split=data_split, config=StrategyConfig(), mode="sideways")


class TestAggregate:
    def test_single_run_totals(self):
        series = session_plan_series(seed=4)
        data_split = split(series, 5000, [len(series) - 5000])
        reports = run_wfo(WfoPlan(split=data_split, config=StrategyConfig()))
        totals = aggregate(reports)
        assert totals.n_runs == 1
        assert totals.kelly.total_pnl == pytest.approx(reports[0].kelly_summary.pnl)
        assert totals.flat.worst_drawdown == reports[0].flat_summary.max_drawdown

    def test_two_run_totals_hand_summed(self):
        series = session_plan_series(seed=12)
        data_split = split(series, 5000, [3000, len(series) - 8000])
        reports = run_wfo(WfoPlan(split=data_split, config=StrategyConfig()))
        totals = aggregate(reports)
        assert totals.n_runs == 2
        assert totals.kelly.total_pnl == pytest.approx(
            reports[0].kelly_summary.pnl + reports[1].kelly_summary.pnl
        )
        assert totals.flat.profitable_runs == sum(
            1 for r in reports if r.flat_summary.pnl > 0
        )
        assert totals.kelly.worst_drawdown == max(
            r.kelly_summary.max_drawdown for r in reports
        )
        assert totals.flat.max_consecutive_losses == max(
            r.flat_summary.max_consecutive_losses for r in reports
        )

    def test_empty_reports_rejected(self):
        with pytest.raises(ValueError):
            aggregate([])


class TestReportShape:
    def test_to_dict_is_json_ready(self):
        report = run_wfo(session_plan(seed=2))[0]
        payload = report.to_dict()
        assert payload["run_index"] == 1
        assert payload["in_sample_len"] == 5000
        assert payload["flat_stake_source"] == "mean_kelly_stake_same_segment"
        assert set(payload["kelly"]) == set(payload["flat"])
        assert "kelly_ledger" not in payload
