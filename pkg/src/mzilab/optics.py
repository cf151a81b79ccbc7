"""Complex 2x2 transfer-matrix algebra for lossless two-path interferometers.

Conventions
-----------
* A field is a two-component complex vector ``[upper, lower]`` over the two
  spatial paths. Observables are squared moduli, so a global phase on a
  whole matrix is unobservable; matrix comparisons therefore go through
  :func:`relative_global_phase`.
* Canonical port order: signal on the upper path, idler on the lower path.
* Every element built here is unitary (lossless): the balanced splitter
  ``(1/sqrt 2) [[1, i], [i, 1]]`` and single-path phase plates. Products of
  unitaries stay unitary; the test suite pins this to 1e-12.
* ``compose`` takes elements in traversal order: the first list entry acts
  first on the field, i.e. ``compose([a, b]) == b @ a``.
* :func:`coupled_mzi_matrix` factorizes exactly (global phase factor 1) as
  ``compose([phase_lower(zeta_prime), bs_matrix(), phase_lower(phi),
  bs_matrix()])``: both accumulated phases ride on the lower (idler) path.
  Conjugating a chain by the port swap exchanges upper/lower phase roles;
  for the coupled form that is the same matrix with ``phi -> -phi`` times a
  global phase ``exp(i*phi)``.
"""

from __future__ import annotations

import math
from typing import Iterable

import numpy as np

from .errors import ConfigurationError

TransferMatrix2 = np.ndarray
"""(2, 2) complex element or chain matrix."""

FieldPair = np.ndarray
"""Length-2 complex field vector; index 0 = upper path, 1 = lower path."""

_SQRT_HALF = 1.0 / math.sqrt(2.0)


def _require_finite(name: str, value: float) -> None:
    if not math.isfinite(value):
        raise ConfigurationError(f"{name} must be finite, got {value!r}")


def field_pair(upper: complex, lower: complex) -> FieldPair:
    return np.array([upper, lower], dtype=complex)


def total_power(f: FieldPair) -> float:
    """Summed port power |upper|^2 + |lower|^2."""
    a = np.asarray(f, dtype=complex)
    return float(np.sum(np.abs(a) ** 2))


def bs_matrix() -> TransferMatrix2:
    """Balanced lossless splitter, (1/sqrt 2) [[1, i], [i, 1]]."""
    return np.array(
        [[_SQRT_HALF, 1j * _SQRT_HALF], [1j * _SQRT_HALF, _SQRT_HALF]], dtype=complex
    )


def phase_upper(zeta: float) -> TransferMatrix2:
    """Phase plate on the upper path: diag(exp(i*zeta), 1)."""
    _require_finite("zeta", zeta)
    return np.array([[np.exp(1j * zeta), 0.0], [0.0, 1.0]], dtype=complex)


def phase_lower(phi: float) -> TransferMatrix2:
    """Phase plate on the lower path: diag(1, exp(i*phi))."""
    _require_finite("phi", phi)
    return np.array([[1.0, 0.0], [0.0, np.exp(1j * phi)]], dtype=complex)


def compose(elements: Iterable[TransferMatrix2]) -> TransferMatrix2:
    """Chain matrix of the given elements, first list entry applied first."""
    out = None
    for m in elements:
        m = np.asarray(m, dtype=complex)
        out = m if out is None else m @ out
    if out is None:
        raise ConfigurationError("compose requires at least one element")
    return out


def apply(m: TransferMatrix2, f: FieldPair) -> FieldPair:
    """Propagate a field through one element or chain matrix."""
    return np.asarray(m, dtype=complex) @ np.asarray(f, dtype=complex)


def coupled_mzi_matrix(zeta_prime: float, phi: float) -> TransferMatrix2:
    """Closed form for two cascaded stages sharing the splitter chain.

    Acts on [signal, idler]; `zeta_prime` is the phase accumulated on the
    idler path ahead of the first splitter, `phi` the second-stage path
    phase. Equal to the four-element composition noted in the module
    docstring, entrywise, with no extra global phase.
    """
    _require_finite("zeta_prime", zeta_prime)
    _require_finite("phi", phi)
    ep = np.exp(1j * phi)
    ez = np.exp(1j * zeta_prime)
    return 0.5 * np.array(
        [[1.0 - ep, 1j * ez * (1.0 + ep)], [1j * (1.0 + ep), -ez * (1.0 - ep)]],
        dtype=complex,
    )


def relative_global_phase(a: TransferMatrix2, b: TransferMatrix2) -> complex:
    """Unit phase z minimizing ||a - z*b||; meaningful when a ~ z*b.

    Callers should check the residual ``max|a - z*b|`` themselves; this only
    rejects the degenerate case of (near-)orthogonal inputs where no phase
    is recoverable.
    """
    s = complex(np.vdot(np.asarray(b, dtype=complex), np.asarray(a, dtype=complex)))
    if abs(s) < 1e-9:
        raise ValueError("matrices are orthogonal, relative phase undefined")
    return s / abs(s)
