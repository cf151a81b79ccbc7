import math

import numpy as np
import pytest

from mzilab.errors import ConfigurationError
from mzilab.source import (
    EnsembleSpec,
    PhaseMode,
    Sampling,
    ensemble_from_json,
    ensemble_to_json,
    sample_ensemble,
    spectral_weight,
)

SIGMA = 0.5e9


def spec(**overrides) -> EnsembleSpec:
    base = dict(sigma=SIGMA, n_samples=2001, coverage=1.0)
    base.update(overrides)
    return EnsembleSpec(**base)


def test_default_grid_ensemble_counts_and_weights():
    samples = sample_ensemble(spec())
    assert len(samples) == 2001
    assert abs(math.fsum(s.weight for s in samples) - 1.0) < 1e-12
    assert all(s.weight > 0.0 for s in samples)
    assert all(s.theta_s - s.theta_i == math.pi / 2 for s in samples)


def test_grid_weighted_mean_detuning_is_zero():
    # detunings are exact negations pairwise, so the product multiset is
    # antisymmetric and the compensated sum vanishes identically
    samples = sample_ensemble(spec(n_samples=501))
    assert math.fsum(s.weight * s.delta_omega for s in samples) == 0.0


def test_grid_endpoints_three_samples():
    samples = sample_ensemble(spec(n_samples=3))
    assert [s.delta_omega for s in samples] == [-3.0 * SIGMA, 0.0, 3.0 * SIGMA]


def test_grid_support_scales_with_coverage():
    samples = sample_ensemble(spec(n_samples=101, coverage=0.5))
    detunings = [s.delta_omega for s in samples]
    assert max(detunings) == 1.5 * SIGMA
    assert min(detunings) == -1.5 * SIGMA


def test_detuning_multiset_symmetric_under_negation():
    for sampling in (Sampling.DETERMINISTIC_GRID, Sampling.MONTE_CARLO):
        samples = sample_ensemble(spec(n_samples=201, sampling=sampling, seed=9))
        detunings = sorted(s.delta_omega for s in samples)
        negated = sorted(-s.delta_omega for s in samples)
        assert detunings == negated


def test_grid_weights_follow_gaussian_density():
    samples = sample_ensemble(spec(n_samples=7))
    raw = np.array([spectral_weight(s.delta_omega, SIGMA) for s in samples])
    expected = raw / raw.sum()
    got = np.array([s.weight for s in samples])
    assert np.abs(got - expected).max() < 1e-15


def test_monte_carlo_uniform_weights_and_truncation():
    samples = sample_ensemble(spec(n_samples=401, sampling=Sampling.MONTE_CARLO, seed=3))
    assert len(samples) == 401
    assert all(abs(s.weight - 1.0 / 401) < 1e-18 for s in samples)
    assert all(abs(s.delta_omega) <= 3.0 * SIGMA for s in samples)
    assert any(s.delta_omega == 0.0 for s in samples)


def test_monte_carlo_truncation_tracks_coverage():
    samples = sample_ensemble(
        spec(n_samples=2001, sampling=Sampling.MONTE_CARLO, coverage=0.3, seed=5)
    )
    assert max(abs(s.delta_omega) for s in samples) <= 0.9 * SIGMA


def test_reproducible_from_spec():
    for sampling in (Sampling.DETERMINISTIC_GRID, Sampling.MONTE_CARLO):
        s = spec(n_samples=301, sampling=sampling, phase_mode=PhaseMode.UNIFORM_RANDOM, seed=17)
        assert sample_ensemble(s) == sample_ensemble(s)


def test_different_seed_changes_monte_carlo_positions():
    a = sample_ensemble(spec(n_samples=101, sampling=Sampling.MONTE_CARLO, seed=1))
    b = sample_ensemble(spec(n_samples=101, sampling=Sampling.MONTE_CARLO, seed=2))
    assert a != b


def test_zero_phase_mode():
    samples = sample_ensemble(spec(n_samples=51, phase_mode=PhaseMode.ZERO))
    assert all(s.theta_s == 0.0 and s.theta_i == 0.0 for s in samples)


def test_uniform_random_phases_average_out():
    n = 2001
    samples = sample_ensemble(spec(n_samples=n, phase_mode=PhaseMode.UNIFORM_RANDOM, seed=7))
    mean = np.mean([np.exp(1j * (s.theta_s - s.theta_i)) for s in samples])
    assert abs(mean) < 3.0 / math.sqrt(n)


@pytest.mark.parametrize(
    "overrides",
    [
        dict(n_samples=2000),
        dict(n_samples=1),
        dict(coverage=0.0),
        dict(coverage=1.5),
        dict(sigma=0.0),
        dict(sigma=-1.0),
    ],
)
def test_invalid_specs_rejected(overrides):
    with pytest.raises(ConfigurationError):
        sample_ensemble(spec(**overrides))


def test_spectral_weight_values():
    assert spectral_weight(0.0, SIGMA) == 1.0
    assert abs(spectral_weight(SIGMA, SIGMA) - math.exp(-0.5)) < 1e-15
    assert spectral_weight(0.7 * SIGMA, SIGMA) == spectral_weight(-0.7 * SIGMA, SIGMA)


def test_spectral_weight_rejects_bad_sigma():
    with pytest.raises(ConfigurationError):
        spectral_weight(0.0, 0.0)


def test_json_round_trip():
    samples = sample_ensemble(spec(n_samples=51, phase_mode=PhaseMode.UNIFORM_RANDOM, seed=4))
    assert ensemble_from_json(ensemble_to_json(samples)) == samples


def test_json_rejects_garbage():
    with pytest.raises(ConfigurationError):
        ensemble_from_json("not json")
    with pytest.raises(ConfigurationError):
        ensemble_from_json('{"delta_omega": 1}')
    with pytest.raises(ConfigurationError):
        ensemble_from_json('[{"delta_omega": 1.0}]')
