from __future__ import annotations

import dataclasses

import pytest

from sqif.pipeline import (
    ConfigError,
    PipelineConfig,
    ScreeningError,
    factor,
    screen,
)


def test_screen_accepts_hard_semiprime() -> None:
    result = screen(22499)  # 149 * 151
    assert result.ok
    assert result.reason is None
    assert result.trivial_factor is None


def test_screen_small_prime_factor() -> None:
    result = screen(91)  # 7 * 13
    assert not result.ok
    assert result.trivial_factor == 7
    assert "7" in result.reason


def test_screen_prime_input() -> None:
    result = screen(1000003)
    assert not result.ok
    assert result.reason == "prime"
    assert result.trivial_factor is None


def test_screen_perfect_powers() -> None:
    result = screen(149**2)
    assert not result.ok
    assert result.trivial_factor == 149
    assert "149^2" in result.reason
    result = screen(22499**2)
    assert not result.ok
    assert result.trivial_factor == 22499


def test_screen_small_and_invalid() -> None:
    assert not screen(14).ok
    with pytest.raises(ValueError):
        screen(1)
    assert screen(1 << 30, trial_bound=10).trivial_factor == 2


def test_factor_micro_semiprime_brute_force() -> None:
    report = factor(PipelineConfig(n=22499, dimension=8, seed=1, max_iterations=300))
    assert report.outcome == "success"
    assert report.factors == (149, 151)
    assert report.iterations == 9
    assert report.bits == 15
    assert report.dimension == 8
    assert report.required_sr_pairs == 130
    assert report.sr_pairs >= report.required_sr_pairs
    assert report.method == "brute-force"
    assert report.seed == 1


def test_factor_second_micro_semiprime() -> None:
    report = factor(PipelineConfig(n=25591, dimension=8, seed=1, max_iterations=300))
    assert report.outcome == "success"
    assert report.factors == (157, 163)
    assert report.iterations == 11


def test_factor_micro_semiprime_qaoa() -> None:
    config = PipelineConfig(
        n=22499,
        dimension=8,
        seed=1,
        method="qaoa",
        shots=256,
        opt_budget=50,
        max_iterations=60,
    )
    report = factor(config)
    assert report.outcome == "success"
    assert report.factors == (149, 151)
    assert report.method == "qaoa"


def test_factor_trace_is_consistent() -> None:
    report = factor(PipelineConfig(n=22499, dimension=8, seed=3, max_iterations=300))
    assert len(report.trace) == report.iterations
    assert [t.iteration for t in report.trace] == list(range(1, report.iterations + 1))
    totals = [t.total_pairs for t in report.trace]
    assert totals == sorted(totals)
    assert totals[-1] == report.sr_pairs
    assert sum(t.new_pairs for t in report.trace) == report.sr_pairs
    assert all(t.babai_distance >= 0 for t in report.trace)


def test_factor_is_deterministic() -> None:
    config = PipelineConfig(n=22499, dimension=8, seed=7, max_iterations=300)
    a = factor(config)
    b = factor(config)
    assert dataclasses.replace(a, wall_seconds=0.0) == dataclasses.replace(
        b, wall_seconds=0.0
    )


def test_factor_seed_changes_the_run() -> None:
    a = factor(PipelineConfig(n=22499, dimension=8, seed=1, max_iterations=300))
    b = factor(PipelineConfig(n=22499, dimension=8, seed=2, max_iterations=300))
    assert a.factors == b.factors == (149, 151)
    assert a.trace != b.trace


def test_factor_resume_from_collected_pairs() -> None:
    config = PipelineConfig(n=22499, dimension=8, seed=1, max_iterations=300)
    collected = []
    fresh = factor(config, ledger_observer=lambda pairs: collected.__setitem__(
        slice(None), pairs
    ))
    assert fresh.outcome == "success"
    resumed = factor(
        dataclasses.replace(config, max_iterations=1), resume_pairs=collected
    )
    assert resumed.outcome == "success"
    assert resumed.factors == fresh.factors
    assert resumed.iterations == 1
    assert resumed.sr_pairs >= fresh.sr_pairs


def test_factor_progress_callback_order() -> None:
    seen = []
    factor(
        PipelineConfig(n=22499, dimension=8, seed=1, max_iterations=300),
        progress=seen.append,
    )
    assert [t.iteration for t in seen] == list(range(1, len(seen) + 1))


def test_factor_fail_outcome_when_no_pairs_found() -> None:
    # at the derived dimension m=7 this 40-bit instance yields no SR pairs
    report = factor(PipelineConfig(n=624911573291, seed=1, max_iterations=2))
    assert report.outcome == "fail"
    assert report.iterations == 2
    assert report.sr_pairs == 0
    assert report.factors == ()


def test_factor_screens_first() -> None:
    with pytest.raises(ScreeningError) as info:
        factor(PipelineConfig(n=91))
    assert info.value.trivial_factor == 7
    with pytest.raises(ScreeningError):
        factor(PipelineConfig(n=1000003, dimension=8))


def test_factor_config_validation() -> None:
    good = PipelineConfig(n=22499, dimension=8)
    for bad in (
        dataclasses.replace(good, n=1),
        dataclasses.replace(good, lattice_parameter=0),
        dataclasses.replace(good, precision=0),
        dataclasses.replace(good, precision=13),
        dataclasses.replace(good, smoothness_bound=1),
        dataclasses.replace(good, slack=-1),
        dataclasses.replace(good, method="annealing"),
        dataclasses.replace(good, samples=0),
        dataclasses.replace(good, qaoa_depth=0),
        dataclasses.replace(good, shots=0),
        dataclasses.replace(good, opt_budget=0),
        dataclasses.replace(good, lll_delta=0.25),
        dataclasses.replace(good, lll_delta=1.0),
        dataclasses.replace(good, max_iterations=0),
        dataclasses.replace(good, dimension=1),
        dataclasses.replace(good, seed=-1),
        dataclasses.replace(good, workers=0),
    ):
        with pytest.raises(ConfigError):
            factor(bad)


def test_factor_rejects_infeasible_instances() -> None:
    # smoothness bound below the largest lattice prime
    with pytest.raises(ConfigError):
        factor(PipelineConfig(n=22499, dimension=8, smoothness_bound=10))
    # more kept states than cube points
    with pytest.raises(ConfigError):
        factor(PipelineConfig(n=22499, dimension=4, samples=17))
    # QAOA statevector cap
    with pytest.raises(ConfigError):
        factor(PipelineConfig(n=624911573291, dimension=21, method="qaoa"))
    # exhaustive enumeration cap
    with pytest.raises(ConfigError):
        factor(PipelineConfig(n=624911573291, dimension=31))


def test_factor_uses_formula_dimension_by_default() -> None:
    report = factor(PipelineConfig(n=624911573291, max_iterations=1))
    assert report.dimension == 7
    report = factor(
        PipelineConfig(n=624911573291, lattice_parameter=2, max_iterations=1)
    )
    assert report.dimension == 15
