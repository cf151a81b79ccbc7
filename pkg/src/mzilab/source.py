"""Spectrally weighted photon-pair ensembles from a downconversion source.

A pair sample carries the signed detuning of the signal photon from the
source half-frequency (the idler sits at the opposite detuning), one phase
per photon, and a quadrature weight. Ensembles come in two flavors:

* deterministic grid -- equally spaced detunings over the truncated
  spectral support, weighted by the Gaussian density and renormalized;
* Monte Carlo -- seeded truncated-normal positions with uniform weights.

Both are symmetric under detuning negation and reproduce bit-identically
from the same spec.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ConfigurationError


class PhaseMode(str, Enum):
    """Joint phase statistics assigned to each signal/idler pair."""

    FIXED_PI_OVER_TWO = "fixed_pi_over_two"
    ZERO = "zero"
    UNIFORM_RANDOM = "uniform_random"


class Sampling(str, Enum):
    DETERMINISTIC_GRID = "grid"
    MONTE_CARLO = "monte_carlo"


@dataclass(frozen=True)
class PhotonPairSample:
    delta_omega: float  # rad/s; signal detuning, idler carries -delta_omega
    theta_s: float  # rad
    theta_i: float  # rad
    weight: float  # dimensionless; ensemble weights sum to 1


@dataclass(frozen=True)
class EnsembleSpec:
    """Source description: spectrum, sample count, phase statistics."""

    omega0: float = 4.65e15  # pump angular frequency (rad/s)
    sigma: float = 0.5e9  # Gaussian spectral standard deviation (rad/s)
    n_samples: int = 2001  # odd, so the grid contains zero detuning
    coverage: float = 1.0  # fraction of the +/-3 sigma support kept, in (0, 1]
    phase_mode: PhaseMode = PhaseMode.FIXED_PI_OVER_TWO
    sampling: Sampling = Sampling.DETERMINISTIC_GRID
    seed: int = 0  # drives Monte Carlo positions and random phases


def spectral_weight(delta, sigma: float):
    """Unnormalized Gaussian density exp(-delta^2 / (2 sigma^2)).

    Accepts a scalar or array detuning; normalization happens in
    :func:`sample_ensemble`.
    """
    if not (sigma > 0.0):
        raise ConfigurationError(f"sigma must be > 0, got {sigma!r}")
    d = np.asarray(delta, dtype=float)
    out = np.exp(-(d * d) / (2.0 * sigma * sigma))
    return out.item() if out.ndim == 0 else out


def _validate(spec: EnsembleSpec) -> None:
    if not (math.isfinite(spec.sigma) and spec.sigma > 0.0):
        raise ConfigurationError(f"sigma must be a positive finite value, got {spec.sigma!r}")
    if spec.n_samples < 3 or spec.n_samples % 2 == 0:
        raise ConfigurationError(f"n_samples must be odd and >= 3, got {spec.n_samples!r}")
    if not (0.0 < spec.coverage <= 1.0):
        raise ConfigurationError(f"coverage must lie in (0, 1], got {spec.coverage!r}")


def sample_ensemble(spec: EnsembleSpec) -> list[PhotonPairSample]:
    """Draw the weighted pair ensemble described by `spec`.

    The random stream (Monte Carlo positions first, then phases) is consumed
    in a fixed order so identical specs give bit-identical ensembles.
    """
    _validate(spec)
    mode = PhaseMode(spec.phase_mode)
    sampling = Sampling(spec.sampling)
    rng = np.random.default_rng(spec.seed)
    n = spec.n_samples
    bound = 3.0 * spec.sigma * spec.coverage

    if sampling is Sampling.DETERMINISTIC_GRID:
        half = np.linspace(0.0, bound, (n + 1) // 2)
        detunings = np.concatenate([-half[:0:-1], half])
        weights = spectral_weight(detunings, spec.sigma)
        weights = weights / weights.sum()
    else:
        # Positions carry the density, so weights are uniform. One sample is
        # pinned at zero detuning to keep the count odd and the multiset
        # exactly symmetric under negation.
        m = (n - 1) // 2
        mags = np.empty(0)
        while mags.size < m:
            draws = np.abs(rng.normal(0.0, spec.sigma, size=2 * (m - mags.size) + 16))
            mags = np.concatenate([mags, draws[draws <= bound]])
        mags = np.sort(mags[:m])
        detunings = np.concatenate([-mags[::-1], [0.0], mags])
        weights = np.full(n, 1.0 / n)

    if mode is PhaseMode.FIXED_PI_OVER_TWO:
        theta_i = np.zeros(n)
        theta_s = np.full(n, 0.5 * np.pi)
    elif mode is PhaseMode.ZERO:
        theta_i = np.zeros(n)
        theta_s = np.zeros(n)
    else:
        theta_i = rng.uniform(0.0, 2.0 * np.pi, n)
        theta_s = theta_i + rng.uniform(0.0, 2.0 * np.pi, n)

    return [
        PhotonPairSample(float(d), float(ts), float(ti), float(w))
        for d, ts, ti, w in zip(detunings, theta_s, theta_i, weights)
    ]


def ensemble_to_json(samples: list[PhotonPairSample]) -> str:
    """Serialize an ensemble as a JSON array of per-pair records."""
    records = [
        {
            "delta_omega": s.delta_omega,
            "theta_s": s.theta_s,
            "theta_i": s.theta_i,
            "weight": s.weight,
        }
        for s in samples
    ]
    return json.dumps(records)


def ensemble_from_json(text: str) -> list[PhotonPairSample]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"invalid ensemble JSON: {exc}") from exc
    if not isinstance(data, list):
        raise ConfigurationError("ensemble JSON must be an array of records")
    out = []
    for rec in data:
        try:
            out.append(
                PhotonPairSample(
                    float(rec["delta_omega"]),
                    float(rec["theta_s"]),
                    float(rec["theta_i"]),
                    float(rec["weight"]),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigurationError(f"bad ensemble record: {rec!r}") from exc
    return out
