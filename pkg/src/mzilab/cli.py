"""Command-line front end: config parsing, scan execution, output writers.

Subcommands ``hom``, ``coupled``, and ``coherent`` each accept ``--config
<path>`` (a JSON object) plus one override flag per config key; flags win
over file values, file values win over defaults. All physical keys carry
explicit units in their names (e.g. ``sigma_rad_per_s``). Outputs are
written atomically (temp file + rename) as CSV, JSON, and/or SVG.

The environment variable ``MZILAB_THREADS`` (positive integer) caps the
thread count used to evaluate scan points; results do not depend on it.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass

from .errors import ConfigurationError
from .scenarios import AOMSchedule, Scenario, ScanSpec, run_scan
from .source import EnsembleSpec, PhaseMode, Sampling
from . import svgplot

_PI = math.pi
_SCENARIOS = tuple(s.value for s in Scenario)
_PHASE_MODES = tuple(m.value for m in PhaseMode)
_SAMPLINGS = tuple(s.value for s in Sampling)
_FORMATS = ("csv", "json", "svg")

_PRIMARY_SERIES = {
    "hom_dip": "g2",
    "coupled_scan": "R_AB",
    "coherence_version": "R_AB",
}


@dataclass(frozen=True)
class RunConfig:
    """Fully validated run description; one-to-one with the JSON schema."""

    scenario: str
    # pair source
    omega0_rad_per_s: float = 4.65e15
    sigma_rad_per_s: float = 0.5e9
    n_samples: int = 2001
    coverage: float = 1.0
    phase_mode: str = "fixed_pi_over_two"
    sampling: str = "grid"
    seed: int = 0
    # delay scan grid (hom_dip); None bounds default to -/+ 5/sigma
    tau_start_s: float | None = None
    tau_stop_s: float | None = None
    tau_steps: int = 501
    # measurement-arm context
    tau_s: float = 0.0
    delta_L1_m: float = 0.0
    r_s_m: float = 0.0
    t_s_s: float = 0.0
    include_carrier: bool = False
    # second-stage phase scan (coupled_scan); null zeta_prime_rad selects
    # the per-pair phase kernel instead of a fixed value
    zeta_prime_rad: float | None = 0.0
    phi_start_rad: float = -_PI
    phi_stop_rad: float = _PI
    phi_steps: int = 721
    # first-stage phase scan (coherence_version)
    zeta_start_rad: float = -_PI
    zeta_stop_rad: float = _PI
    zeta_steps: int = 721
    k_delta_L1_rad: float = 0.5 * _PI
    phi_rad: float = 0.5 * _PI
    aom_f_rf_hz: float = 80e6
    aom_pulse_duration_s: float = 6.25e-9
    aom_duty: float = 0.5
    aom_pulses: int = 2
    # outputs
    output_path: str = "scan"
    formats: tuple[str, ...] = ("csv",)


_FLOAT_HELP = {
    "omega0_rad_per_s": "pump angular frequency (rad/s)",
    "sigma_rad_per_s": "Gaussian spectral standard deviation (rad/s)",
    "coverage": "fraction of the +/-3 sigma spectral support kept, in (0, 1]",
    "tau_s": "fixed signal/idler delay for coupled scans (s)",
    "delta_L1_m": "first-stage path-length difference (m)",
    "r_s_m": "beat position offset (m)",
    "t_s_s": "beat time offset (s)",
    "phi_start_rad": "second-stage scan start (rad)",
    "phi_stop_rad": "second-stage scan stop (rad)",
    "zeta_start_rad": "first-stage scan start (rad)",
    "zeta_stop_rad": "first-stage scan stop (rad)",
    "k_delta_L1_rad": "fixed first-stage phase offset (rad)",
    "phi_rad": "fixed second-stage phase (rad)",
    "aom_f_rf_hz": "modulator rf frequency (Hz)",
    "aom_pulse_duration_s": "modulator rf pulse duration (s)",
    "aom_duty": "modulator duty cycle in [0, 1]",
}
_NULLABLE_FLOAT_HELP = {
    "tau_start_s": "delay scan start (s); default -5/sigma",
    "tau_stop_s": "delay scan stop (s); default +5/sigma",
    "zeta_prime_rad": "fixed first-stage phase for coupled scans (rad)",
}
_INT_HELP = {
    "n_samples": "ensemble size (odd, >= 3)",
    "seed": "random seed for Monte Carlo positions and random phases",
    "tau_steps": "delay scan points (>= 2)",
    "phi_steps": "second-stage scan points (>= 2)",
    "zeta_steps": "first-stage scan points (>= 2)",
    "aom_pulses": "modulator pulses averaged per scan point (>= 1)",
}

_FLOAT_KEYS = frozenset(_FLOAT_HELP)
_NULLABLE_FLOAT_KEYS = frozenset(_NULLABLE_FLOAT_HELP)
_INT_KEYS = frozenset(_INT_HELP)
_BOOL_KEYS = frozenset({"include_carrier"})

_INT_MIN = {
    "n_samples": 3,
    "seed": 0,
    "tau_steps": 2,
    "phi_steps": 2,
    "zeta_steps": 2,
    "aom_pulses": 1,
}


def _check_range(key: str, v) -> None:
    if key == "omega0_rad_per_s" and v < 0.0:
        raise ConfigurationError(f"{key}: must be >= 0, got {v!r}")
    if key == "sigma_rad_per_s" and not v > 0.0:
        raise ConfigurationError(f"{key}: must be > 0, got {v!r}")
    if key == "coverage" and not (0.0 < v <= 1.0):
        raise ConfigurationError(f"{key}: must lie in (0, 1], got {v!r}")
    if key == "aom_duty" and not (0.0 <= v <= 1.0):
        raise ConfigurationError(f"{key}: must lie in [0, 1], got {v!r}")
    if key in ("aom_f_rf_hz", "aom_pulse_duration_s") and v < 0.0:
        raise ConfigurationError(f"{key}: must be >= 0, got {v!r}")
    if key == "n_samples" and v % 2 == 0:
        raise ConfigurationError(f"{key}: must be odd, got {v!r}")
    lo = _INT_MIN.get(key)
    if lo is not None and v < lo:
        raise ConfigurationError(f"{key}: must be >= {lo}, got {v!r}")


def _coerce(key: str, value):
    if key == "scenario":
        if value not in _SCENARIOS:
            raise ConfigurationError(f"scenario: must be one of {_SCENARIOS}, got {value!r}")
        return value
    if key == "phase_mode":
        if value not in _PHASE_MODES:
            raise ConfigurationError(f"phase_mode: must be one of {_PHASE_MODES}, got {value!r}")
        return value
    if key == "sampling":
        if value not in _SAMPLINGS:
            raise ConfigurationError(f"sampling: must be one of {_SAMPLINGS}, got {value!r}")
        return value
    if key == "output_path":
        if not isinstance(value, str) or not value:
            raise ConfigurationError(f"output_path: must be a non-empty string, got {value!r}")
        return value
    if key == "formats":
        if isinstance(value, str) or not isinstance(value, (list, tuple)) or not value:
            raise ConfigurationError(f"formats: must be a non-empty array, got {value!r}")
        for fmt in value:
            if fmt not in _FORMATS:
                raise ConfigurationError(f"formats: must be a subset of {_FORMATS}, got {fmt!r}")
        return tuple(dict.fromkeys(value))
    if key in _BOOL_KEYS:
        if not isinstance(value, bool):
            raise ConfigurationError(f"{key}: must be a boolean, got {value!r}")
        return value
    if key in _INT_KEYS:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigurationError(f"{key}: must be an integer, got {value!r}")
        _check_range(key, value)
        return value
    if key in _FLOAT_KEYS or key in _NULLABLE_FLOAT_KEYS:
        if value is None:
            if key in _NULLABLE_FLOAT_KEYS:
                return None
            raise ConfigurationError(f"{key}: must be a number, got null")
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigurationError(f"{key}: must be a number, got {value!r}")
        value = float(value)
        if not math.isfinite(value):
            raise ConfigurationError(f"{key}: must be finite, got {value!r}")
        _check_range(key, value)
        return value
    raise ConfigurationError(f"{key}: unknown configuration key")


def config_from_dict(doc: dict) -> RunConfig:
    """Validate a configuration mapping and fill every default."""
    if not isinstance(doc, dict):
        raise ConfigurationError("config document must be a JSON object")
    known = {f.name for f in dataclasses.fields(RunConfig)}
    clean = {}
    for key, value in doc.items():
        if key not in known:
            raise ConfigurationError(f"{key}: unknown configuration key")
        clean[key] = _coerce(key, value)
    if "scenario" not in clean:
        raise ConfigurationError("scenario: required key is missing")
    cfg = RunConfig(**clean)
    if cfg.tau_start_s is None:
        cfg = dataclasses.replace(cfg, tau_start_s=-5.0 / cfg.sigma_rad_per_s)
    if cfg.tau_stop_s is None:
        cfg = dataclasses.replace(cfg, tau_stop_s=5.0 / cfg.sigma_rad_per_s)
    for lo, hi in (
        ("tau_start_s", "tau_stop_s"),
        ("phi_start_rad", "phi_stop_rad"),
        ("zeta_start_rad", "zeta_stop_rad"),
    ):
        if not getattr(cfg, lo) < getattr(cfg, hi):
            raise ConfigurationError(f"{lo}: must be < {hi}")
    return cfg


def parse_config(text: str) -> RunConfig:
    """Parse and validate a JSON configuration document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config is not valid JSON: {exc}") from exc
    return config_from_dict(doc)


def serialize_config(cfg: RunConfig) -> str:
    doc = dataclasses.asdict(cfg)
    doc["formats"] = list(cfg.formats)
    return json.dumps(doc, indent=2) + "\n"


def build_scan_spec(cfg: RunConfig) -> ScanSpec:
    """Translate a validated config into the scenario-level scan spec."""
    ensemble = EnsembleSpec(
        omega0=cfg.omega0_rad_per_s,
        sigma=cfg.sigma_rad_per_s,
        n_samples=cfg.n_samples,
        coverage=cfg.coverage,
        phase_mode=PhaseMode(cfg.phase_mode),
        sampling=Sampling(cfg.sampling),
        seed=cfg.seed,
    )
    context = {
        "delta_L1_m": cfg.delta_L1_m,
        "r_s_m": cfg.r_s_m,
        "t_s_s": cfg.t_s_s,
        "include_carrier": cfg.include_carrier,
    }
    if cfg.scenario == Scenario.HOM_DIP.value:
        return ScanSpec(
            scenario=Scenario.HOM_DIP,
            start=cfg.tau_start_s,
            stop=cfg.tau_stop_s,
            steps=cfg.tau_steps,
            ensemble=ensemble,
            fixed_params=context,
        )
    if cfg.scenario == Scenario.COUPLED_SCAN.value:
        return ScanSpec(
            scenario=Scenario.COUPLED_SCAN,
            start=cfg.phi_start_rad,
            stop=cfg.phi_stop_rad,
            steps=cfg.phi_steps,
            ensemble=ensemble,
            fixed_params={"zeta_prime_rad": cfg.zeta_prime_rad, "tau_s": cfg.tau_s, **context},
        )
    return ScanSpec(
        scenario=Scenario.COHERENCE_VERSION,
        start=cfg.zeta_start_rad,
        stop=cfg.zeta_stop_rad,
        steps=cfg.zeta_steps,
        fixed_params={
            "k_delta_L1_rad": cfg.k_delta_L1_rad,
            "phi_rad": cfg.phi_rad,
            "aom_pulses": cfg.aom_pulses,
        },
        aom=AOMSchedule(
            f_rf=cfg.aom_f_rf_hz,
            pulse_duration=cfg.aom_pulse_duration_s,
            duty=cfg.aom_duty,
        ),
    )


def _write_atomic(path: str, text: str) -> None:
    """Write via a sibling temp file and rename, so readers never see a
    partial file at the final path."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".mzilab-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as handle:
            handle.write(text)
        os.replace(tmp_path, path)
    except BaseException:
        try:
            os.unlink(tmp_path)
        except OSError:
            pass
        raise


def run(cfg: RunConfig, max_workers: int = 1) -> int:
    """Execute the configured scenario and write the requested outputs."""
    result = run_scan(build_scan_spec(cfg), max_workers=max_workers)
    result.metadata["run_config"] = json.loads(serialize_config(cfg))

    written = []
    for fmt in cfg.formats:
        path = f"{cfg.output_path}.{fmt}"
        if fmt == "csv":
            text = result.to_csv_text()
        elif fmt == "json":
            text = result.to_json_text()
        else:
            text = svgplot.render_line_chart(
                result.abscissa,
                result.columns,
                x_label=result.abscissa_name,
                y_label="intensity / correlation (I0 units)",
            )
        _write_atomic(path, text)
        written.append(path)

    primary = _PRIMARY_SERIES[cfg.scenario]
    series = result.columns[primary]
    print(
        f"{cfg.scenario}: {len(result.abscissa)} points, "
        f"{primary} min={series.min():.6g} max={series.max():.6g} -> {', '.join(written)}"
    )
    return 0


def _flag(key: str) -> str:
    return "--" + key.lower().replace("_", "-")


def _add_override_flags(p: argparse.ArgumentParser) -> None:
    for key, help_text in {**_FLOAT_HELP, **_NULLABLE_FLOAT_HELP}.items():
        p.add_argument(_flag(key), type=float, dest=key, default=None, help=help_text)
    for key, help_text in _INT_HELP.items():
        p.add_argument(_flag(key), type=int, dest=key, default=None, help=help_text)
    p.add_argument("--phase-mode", dest="phase_mode", choices=_PHASE_MODES, default=None,
                   help="pair phase statistics")
    p.add_argument("--sampling", dest="sampling", choices=_SAMPLINGS, default=None,
                   help="spectral sampling strategy")
    p.add_argument("--include-carrier", dest="include_carrier",
                   action=argparse.BooleanOptionalAction, default=None,
                   help="keep the fast pump-scale phase terms")
    p.add_argument("--output", dest="output_path", default=None,
                   help="output base path; format extensions are appended")
    p.add_argument("--format", dest="formats", action="append", choices=_FORMATS,
                   default=None, help="output format (repeatable)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mzilab",
        description="Coupled Mach-Zehnder interference scans over photon-pair ensembles",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="{hom,coupled,coherent}")
    commands = (
        ("hom", Scenario.HOM_DIP.value, "two-photon coincidence dip vs relative delay"),
        ("coupled", Scenario.COUPLED_SCAN.value, "second-stage fringe scan vs phase"),
        ("coherent", Scenario.COHERENCE_VERSION.value, "deterministic-source scan vs first-stage phase"),
    )
    for name, scenario, help_text in commands:
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(scenario=scenario)
        p.add_argument("--config", default=None, help="JSON config file; flags override file values")
        _add_override_flags(p)
    return parser


def _threads_from_env(raw: str | None) -> int:
    if raw is None or raw == "":
        return 1
    try:
        value = int(raw)
    except ValueError:
        value = 0
    if value < 1:
        raise ConfigurationError(f"MZILAB_THREADS: must be a positive integer, got {raw!r}")
    return value


def main(argv: list[str] | None = None) -> int:
    ns = _build_parser().parse_args(argv)
    try:
        doc = {}
        if ns.config is not None:
            with open(ns.config, "r") as handle:
                text = handle.read()
            try:
                doc = json.loads(text)
            except json.JSONDecodeError as exc:
                raise ConfigurationError(f"config is not valid JSON: {exc}") from exc
            if not isinstance(doc, dict):
                raise ConfigurationError("config document must be a JSON object")
        doc["scenario"] = ns.scenario  # the subcommand decides the scenario
        for key in {f.name for f in dataclasses.fields(RunConfig)} - {"scenario"}:
            value = getattr(ns, key, None)
            if value is not None:
                doc[key] = value
        cfg = config_from_dict(doc)
        workers = _threads_from_env(os.environ.get("MZILAB_THREADS"))
        return run(cfg, max_workers=workers)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
