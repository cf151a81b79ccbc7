"""Named end-to-end scans producing tabular datasets.

Three scenarios are provided:

* ``hom_dip`` -- coincidence correlation of the first stage against the
  signal/idler delay, averaged over a pair ensemble;
* ``coupled_scan`` -- second-stage port intensities and normalized
  coincidence against the second-stage phase, at a caller-fixed (or
  per-pair) first-stage phase;
* ``coherence_version`` -- deterministic-source intensities of both stages
  against the first-stage phase, with modulator-driven basis averaging.

Scan points are independent; ``max_workers > 1`` splits the abscissa into
chunks evaluated on a thread pool. The per-pair reduction axis is never
split, so results are bit-identical to the serial evaluation.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Callable

import numpy as np

from ._version import __version__
from .errors import ConfigurationError
from .source import EnsembleSpec, PhotonPairSample, sample_ensemble


class Scenario(str, Enum):
    HOM_DIP = "hom_dip"
    COUPLED_SCAN = "coupled_scan"
    COHERENCE_VERSION = "coherence_version"


@dataclass(frozen=True)
class AOMSchedule:
    """Acousto-optic modulator drive: rf frequency, pulse length, duty."""

    f_rf: float = 80e6  # Hz
    pulse_duration: float = 6.25e-9  # s; defaults give a pi phase step
    duty: float = 0.5

    @property
    def phase_step(self) -> float:
        return 2.0 * math.pi * self.f_rf * self.pulse_duration


@dataclass
class ScanSpec:
    """One scan: scenario, abscissa grid, and held-constant parameters."""

    scenario: Scenario
    start: float
    stop: float
    steps: int
    ensemble: EnsembleSpec | None = None
    fixed_params: dict = field(default_factory=dict)
    aom: AOMSchedule | None = None


@dataclass
class ScanResult:
    """Abscissa grid plus named series, with enough metadata to re-run."""

    abscissa_name: str
    abscissa: np.ndarray
    columns: dict[str, np.ndarray]
    metadata: dict

    def __post_init__(self):
        n = len(self.abscissa)
        for name, col in self.columns.items():
            if len(col) != n:
                raise ValueError(f"column {name!r} length {len(col)} != {n}")

    def to_csv_text(self) -> str:
        """CSV with a header row and 17-significant-digit floats."""
        names = [self.abscissa_name, *self.columns.keys()]
        series = [np.asarray(self.abscissa), *self.columns.values()]
        lines = [",".join(names)]
        for i in range(len(series[0])):
            lines.append(",".join(format(float(col[i]), ".17g") for col in series))
        return "\n".join(lines) + "\n"

    def to_json_text(self) -> str:
        doc = {
            "metadata": self.metadata,
            "abscissa_name": self.abscissa_name,
            "abscissa": [float(v) for v in self.abscissa],
            "columns": {k: [float(v) for v in col] for k, col in self.columns.items()},
        }
        return json.dumps(doc, indent=2) + "\n"


def scan_grid(start: float, stop: float, steps: int) -> np.ndarray:
    """Endpoint-inclusive grid; symmetric odd grids contain an exact zero."""
    if steps < 2:
        raise ConfigurationError(f"steps must be >= 2, got {steps!r}")
    if not (math.isfinite(start) and math.isfinite(stop) and start < stop):
        raise ConfigurationError(f"scan range must satisfy start < stop, got [{start!r}, {stop!r}]")
    if steps % 2 == 1 and start == -stop:
        half = np.linspace(0.0, stop, (steps + 1) // 2)
        return np.concatenate([-half[:0:-1], half])
    return np.linspace(start, stop, steps)


def closed_form_hom(sigma: float, tau):
    """Analytic coincidence dip (1 - exp(-2 sigma^2 tau^2)) / 2.

    Gaussian characteristic-function oracle for the full-coverage,
    fixed-phase ensemble; independent of the sampled scan path.
    """
    if not (sigma > 0.0):
        raise ConfigurationError(f"sigma must be > 0, got {sigma!r}")
    t = np.asarray(tau, dtype=float)
    out = 0.5 * (1.0 - np.exp(-2.0 * (sigma * sigma) * (t * t)))
    return out.item() if out.ndim == 0 else out


def aom_phase_sequence(sched: AOMSchedule, n: int) -> list[float]:
    """Deterministic phase-offset sequence emitted by the modulator drive.

    Slot k carries the rf phase step when the running duty accumulator
    crosses an integer, so the two values interleave as evenly as possible;
    duty 0.5 alternates starting at 0.
    """
    if n < 1:
        raise ConfigurationError(f"sequence length must be >= 1, got {n!r}")
    if not (0.0 <= sched.duty <= 1.0):
        raise ConfigurationError(f"duty must lie in [0, 1], got {sched.duty!r}")
    step = sched.phase_step
    return [
        step if math.floor((k + 1) * sched.duty) - math.floor(k * sched.duty) else 0.0
        for k in range(n)
    ]


def count_derivative_sign_changes(values, threshold: float = 1e-4) -> int:
    """Sign changes of the discrete derivative, ignoring steps <= threshold."""
    diffs = np.diff(np.asarray(values, dtype=float))
    sig = diffs[np.abs(diffs) > threshold]
    if sig.size < 2:
        return 0
    signs = np.sign(sig)
    return int(np.sum(signs[1:] != signs[:-1]))


def _metadata(spec: ScanSpec) -> dict:
    return {
        "artifact": "mzilab",
        "artifact_version": __version__,
        "scan_spec": asdict(spec),
    }


def _pair_arrays(samples: list[PhotonPairSample]):
    d = np.array([s.delta_omega for s in samples])
    dtheta = np.array([s.theta_s - s.theta_i for s in samples])
    w = np.array([s.weight for s in samples])
    return d, dtheta, w


def _run_chunked(
    n_points: int, max_workers: int, eval_block: Callable[[slice], dict]
) -> dict[str, np.ndarray]:
    if max_workers <= 1 or n_points < 2:
        return eval_block(slice(0, n_points))
    k = min(int(max_workers), n_points)
    bounds = [(i * n_points) // k for i in range(k + 1)]
    slices = [slice(bounds[i], bounds[i + 1]) for i in range(k) if bounds[i + 1] > bounds[i]]
    with ThreadPoolExecutor(max_workers=len(slices)) as pool:
        parts = list(pool.map(eval_block, slices))
    return {name: np.concatenate([p[name] for p in parts]) for name in parts[0]}


def _require_scenario(spec: ScanSpec, expected: Scenario) -> None:
    if Scenario(spec.scenario) is not expected:
        raise ConfigurationError(f"scenario must be {expected.value!r}, got {spec.scenario!r}")


def _require_ensemble(spec: ScanSpec) -> EnsembleSpec:
    if spec.ensemble is None:
        raise ConfigurationError(f"{Scenario(spec.scenario).value} requires an ensemble spec")
    return spec.ensemble


def run_hom_dip(spec: ScanSpec, max_workers: int = 1) -> ScanResult:
    """Coincidence dip scan: ensemble g2 and mean port intensities vs delay."""
    _require_scenario(spec, Scenario.HOM_DIP)
    ens = _require_ensemble(spec)
    d, dtheta, w = _pair_arrays(sample_ensemble(ens))
    taus = scan_grid(spec.start, spec.stop, spec.steps)

    fp = spec.fixed_params
    dl1 = float(fp.get("delta_L1_m", 0.0))
    beat = 2.0 * (float(fp.get("r_s_m", 0.0)) - float(fp.get("t_s_s", 0.0)))
    carrier = bool(fp.get("include_carrier", False))
    omega0 = ens.omega0

    def eval_block(sl: slice) -> dict:
        t = taus[sl]
        z = t[:, None] * d[None, :] + ((-dl1 - beat) * d + dtheta)[None, :]
        c = 0.5 * omega0 * (dl1 - t) if carrier else np.zeros_like(t)
        z = z + c[:, None]
        g2 = np.einsum("j,kj->k", w, np.cos(z) ** 2)
        # port means average both signal/idler labelings (label-dependent
        # terms flip sign, carrier terms do not)
        s_sym = 0.5 * (np.sin(z) + np.sin((2.0 * c)[:, None] - z))
        mean_sin = np.einsum("j,kj->k", w, s_sym)
        return {
            "g2": g2,
            "I_alpha_mean": 1.0 + mean_sin,
            "I_beta_mean": 1.0 - mean_sin,
        }

    columns = _run_chunked(taus.size, max_workers, eval_block)
    return ScanResult("tau_s", taus, columns, _metadata(spec))


def run_coupled_scan(spec: ScanSpec, max_workers: int = 1) -> ScanResult:
    """Second-stage intensities and normalized coincidence vs phase.

    The first-stage phase is either the constant ``zeta_prime_rad`` from
    ``fixed_params`` or, when that key maps to None, evaluated per pair from
    the context entries (``tau_s``, ``delta_L1_m``, ``r_s_m``, ``t_s_s``,
    ``include_carrier``). The coincidence column is normalized by the
    nominal mean port intensity squared -- the detuning-washed port mean is
    I0 -- so the zero-phase fringe reads (1 + cos 2 phi)/2.
    """
    _require_scenario(spec, Scenario.COUPLED_SCAN)
    ens = _require_ensemble(spec)
    d, dtheta, w = _pair_arrays(sample_ensemble(ens))
    phis = scan_grid(spec.start, spec.stop, spec.steps)

    fp = spec.fixed_params
    zp_fixed = fp.get("zeta_prime_rad", 0.0)
    if zp_fixed is None:
        dl1 = float(fp.get("delta_L1_m", 0.0))
        tau = float(fp.get("tau_s", 0.0))
        beat = 2.0 * (float(fp.get("r_s_m", 0.0)) - float(fp.get("t_s_s", 0.0)))
        zp = d * (tau - dl1) + dtheta - beat * d
        if bool(fp.get("include_carrier", False)):
            zp = zp + 0.5 * ens.omega0 * (dl1 - tau)
    else:
        zp = np.full(d.size, float(zp_fixed))
    cos_zp = np.cos(zp)

    def eval_block(sl: slice) -> dict:
        cross = np.outer(np.sin(phis[sl]), cos_zp)
        i_a = 1.0 - cross
        i_b = 1.0 + cross
        return {
            "I_A_mean": np.einsum("j,kj->k", w, i_a),
            "I_B_mean": np.einsum("j,kj->k", w, i_b),
            "R_AB": np.einsum("j,kj->k", w, i_a * i_b),
        }

    columns = _run_chunked(phis.size, max_workers, eval_block)
    return ScanResult("phi_rad", phis, columns, _metadata(spec))


def run_coherence_version(spec: ScanSpec, max_workers: int = 1) -> ScanResult:
    """Deterministic-source scan over the first-stage phase.

    Emits both stages' intensities, their normalized products, and the
    modulator-averaged mean intensities; ``fixed_params`` holds
    ``k_delta_L1_rad`` (phase offset added to the abscissa),
    ``phi_rad`` (second-stage phase), and ``aom_pulses``.
    """
    _require_scenario(spec, Scenario.COHERENCE_VERSION)
    zetas = scan_grid(spec.start, spec.stop, spec.steps)

    fp = spec.fixed_params
    k1 = float(fp.get("k_delta_L1_rad", 0.5 * math.pi))
    phi = float(fp.get("phi_rad", 0.5 * math.pi))
    pulses = int(fp.get("aom_pulses", 2))
    sched = spec.aom if spec.aom is not None else AOMSchedule()
    offsets = aom_phase_sequence(sched, pulses)
    sin_phi = math.sin(phi)

    def stage_intensities(zp: np.ndarray):
        c = np.cos(zp)
        s = sin_phi * np.sin(zp)
        return 0.5 * (1.0 - c), 0.5 * (1.0 + c), 0.5 * (1.0 - s), 0.5 * (1.0 + s)

    def eval_block(sl: slice) -> dict:
        z = zetas[sl]
        i_alpha, i_beta, i_a, i_b = stage_intensities(z + k1)
        acc = [np.zeros_like(z) for _ in range(4)]
        for off in offsets:
            for a, v in zip(acc, stage_intensities(z + off + k1)):
                a += v
        inv = 1.0 / len(offsets)
        return {
            "I_alpha": i_alpha,
            "I_beta": i_beta,
            "I_A": i_a,
            "I_B": i_b,
            "R_alphabeta": 4.0 * i_alpha * i_beta,
            "R_AB": 4.0 * i_a * i_b,
            "I_alpha_aom_mean": acc[0] * inv,
            "I_beta_aom_mean": acc[1] * inv,
            "I_A_aom_mean": acc[2] * inv,
            "I_B_aom_mean": acc[3] * inv,
        }

    columns = _run_chunked(zetas.size, max_workers, eval_block)
    return ScanResult("zeta_rad", zetas, columns, _metadata(spec))


_RUNNERS = {
    Scenario.HOM_DIP: run_hom_dip,
    Scenario.COUPLED_SCAN: run_coupled_scan,
    Scenario.COHERENCE_VERSION: run_coherence_version,
}


def run_scan(spec: ScanSpec, max_workers: int = 1) -> ScanResult:
    """Dispatch a scan spec to its scenario runner."""
    try:
        scenario = Scenario(spec.scenario)
    except ValueError as exc:
        raise ConfigurationError(f"unknown scenario {spec.scenario!r}") from exc
    return _RUNNERS[scenario](spec, max_workers=max_workers)
