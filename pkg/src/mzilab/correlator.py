"""Single-pair interference kernels and weighted ensemble averages.

Intensities are in units of a nominal mean port intensity I0 = 1; the
propagation convention is c = 1, so wavenumber and angular-frequency
detunings coincide numerically (unit conversion is a caller concern).

The effective per-pair phase collects four contributions for a pair whose
signal is detuned by +delta_omega (idler by -delta_omega):

* an optional carrier term ``omega0/2 * (delta_L1 - tau)`` at the fast
  pump-frequency scale,
* detuning terms ``delta_omega * (tau - delta_L1)``,
* the pair's intrinsic phase difference ``theta_s - theta_i``,
* beat-offset terms ``-2 * delta_omega * (r_s - t_s)``.

Everything here is a pure function; contexts and samples are immutable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

from .errors import ConfigurationError
from .source import PhotonPairSample

I0 = 1.0
"""Canonical mean port intensity; CLI output may rescale for display only."""


@dataclass(frozen=True)
class PhaseContext:
    """Measurement-arm configuration shared by all pairs of a scan point."""

    delta_L1: float = 0.0  # first-stage path-length difference (m)
    delta_L2: float = 0.0  # second-stage path-length difference (m)
    tau: float = 0.0  # signal/idler relative delay (s)
    r_s: float = 0.0  # beat position offset (m)
    t_s: float = 0.0  # beat time offset (s)
    include_carrier: bool = False  # keep the fast omega0/2-scale terms


class IntensityPair(NamedTuple):
    first: float
    second: float


def effective_pair_phase(
    pair: PhotonPairSample, ctx: PhaseContext, omega0: float = 0.0
) -> float:
    """Total interference phase of one pair in the given context."""
    d = pair.delta_omega
    phase = d * (ctx.tau - ctx.delta_L1) + (pair.theta_s - pair.theta_i)
    phase -= 2.0 * d * (ctx.r_s - ctx.t_s)
    if ctx.include_carrier:
        phase += 0.5 * omega0 * (ctx.delta_L1 - ctx.tau)
    return phase


def interchange_labels(pair: PhotonPairSample) -> PhotonPairSample:
    """Same physical pair with the signal/idler labels swapped.

    Negates the detuning and the intrinsic phase difference; coincidence
    detection cannot distinguish the two labelings.
    """
    return PhotonPairSample(
        delta_omega=-pair.delta_omega,
        theta_s=pair.theta_i,
        theta_i=pair.theta_s,
        weight=pair.weight,
    )


def mzi1_intensities(zeta_p: float) -> IntensityPair:
    """First-stage output port intensities (I0 [1 + sin], I0 [1 - sin])."""
    s = math.sin(zeta_p)
    return IntensityPair(I0 * (1.0 + s), I0 * (1.0 - s))


def g2_pointwise(zeta_p: float) -> float:
    """Normalized coincidence of the first-stage ports for one pair: cos^2."""
    return math.cos(zeta_p) ** 2


def mzi2_intensities(zeta_p: float, phi: float) -> IntensityPair:
    """Second-stage port intensities (I0 [1 -/+ cos(zeta') sin(phi)]).

    Equals the squared moduli of :func:`mzilab.optics.coupled_mzi_matrix`
    applied to unit inputs; the test suite pins that equivalence.
    """
    c = math.cos(zeta_p) * math.sin(phi)
    return IntensityPair(I0 * (1.0 - c), I0 * (1.0 + c))


def coherent_intensities(
    zeta_p: float, phi: float
) -> tuple[IntensityPair, IntensityPair]:
    """Deterministic-source intensities of both stages.

    Returns ((I_alpha, I_beta), (I_A, I_B)) with each stage summing to I0;
    `zeta_p` is the first-stage phase including any fixed offset supplied by
    the caller.
    """
    c = math.cos(zeta_p)
    s = math.sin(phi) * math.sin(zeta_p)
    first = IntensityPair(0.5 * I0 * (1.0 - c), 0.5 * I0 * (1.0 + c))
    second = IntensityPair(0.5 * I0 * (1.0 - s), 0.5 * I0 * (1.0 + s))
    return first, second


def normalized_product(i: float, j: float) -> float:
    """Intensity product normalized for ports whose mean level is I0/2."""
    if i < 0.0 or j < 0.0:
        raise ConfigurationError("intensities must be non-negative")
    return 4.0 * i * j


def ensemble_average(
    ensemble: Sequence[PhotonPairSample],
    kernel: Callable[[PhotonPairSample, PhaseContext], float],
    ctx: PhaseContext,
) -> float:
    """Weight-normalized mean of a per-pair observable.

    Uses compensated summation so the result is independent of how callers
    might partition the ensemble.
    """
    if not ensemble:
        raise ConfigurationError("ensemble must not be empty")
    return math.fsum(p.weight * kernel(p, ctx) for p in ensemble)


def mean_port_intensities(
    ensemble: Sequence[PhotonPairSample], ctx: PhaseContext, omega0: float = 0.0
) -> IntensityPair:
    """Ensemble-mean first-stage port intensities.

    Port means average both signal/idler labelings of every pair (the
    detector cannot tell them apart), so all label-dependent phase terms
    cancel and only carrier terms can move the means away from (I0, I0).
    """
    if not ensemble:
        raise ConfigurationError("ensemble must not be empty")
    terms = []
    for p in ensemble:
        z = effective_pair_phase(p, ctx, omega0)
        z_swapped = effective_pair_phase(interchange_labels(p), ctx, omega0)
        terms.append(p.weight * 0.5 * (math.sin(z) + math.sin(z_swapped)))
    s = math.fsum(terms)
    return IntensityPair(I0 * (1.0 + s), I0 * (1.0 - s))
