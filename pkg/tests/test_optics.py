import numpy as np
import pytest

from mzilab.errors import ConfigurationError
from mzilab.optics import (
    apply,
    bs_matrix,
    compose,
    coupled_mzi_matrix,
    field_pair,
    phase_lower,
    phase_upper,
    relative_global_phase,
    total_power,
)

RT2 = np.sqrt(2.0)


def assert_unitary(m, tol=1e-12):
    assert np.abs(m @ m.conj().T - np.eye(2)).max() < tol


def test_bs_matrix_entries():
    m = bs_matrix()
    assert np.allclose(m, np.array([[1, 1j], [1j, 1]]) / RT2, atol=1e-15)


def test_bs_on_single_input():
    out = apply(bs_matrix(), field_pair(1.0, 0.0))
    assert np.abs(out - np.array([1 / RT2, 1j / RT2])).max() < 1e-15


def test_bs_unitary():
    assert_unitary(bs_matrix())


def test_two_splitters_swap_ports_with_phase():
    # hand multiplication: (1/2) [[1,i],[i,1]]^2 = [[0, i], [i, 0]]
    m = compose([bs_matrix(), bs_matrix()])
    assert np.abs(m - np.array([[0, 1j], [1j, 0]])).max() < 1e-15
    out = apply(m, field_pair(1.0, 0.0))
    assert np.abs(out - np.array([0.0, 1j])).max() < 1e-15


def test_phase_plates_trivial_angles():
    assert np.abs(phase_upper(0.0) - np.eye(2)).max() == 0.0
    assert np.abs(phase_lower(0.0) - np.eye(2)).max() == 0.0
    assert np.abs(phase_upper(np.pi) - np.diag([-1.0, 1.0])).max() < 1e-15
    assert np.abs(phase_lower(np.pi / 2) - np.diag([1.0, 1j])).max() < 1e-15


def test_phase_plates_unitary_random_angles():
    rng = np.random.default_rng(11)
    for angle in rng.uniform(-20.0, 20.0, 200):
        assert_unitary(phase_upper(angle))
        assert_unitary(phase_lower(angle))


def test_phase_plate_rejects_nonfinite():
    with pytest.raises(ConfigurationError):
        phase_upper(float("nan"))
    with pytest.raises(ConfigurationError):
        phase_lower(float("inf"))


def test_compose_identity_and_order():
    eye = np.eye(2, dtype=complex)
    assert np.abs(compose([eye]) - eye).max() == 0.0
    # first element acts first: compose([a, b]) == b @ a
    a, b = phase_upper(0.3), bs_matrix()
    assert np.abs(compose([a, b]) - b @ a).max() == 0.0


def test_compose_empty_rejected():
    with pytest.raises(ConfigurationError):
        compose([])


def test_composition_of_unitaries_is_unitary():
    rng = np.random.default_rng(5)
    for _ in range(300):
        chain = []
        for _ in range(rng.integers(1, 6)):
            kind = rng.integers(0, 3)
            angle = rng.uniform(-np.pi, np.pi)
            chain.append([bs_matrix(), phase_upper(angle), phase_lower(angle)][kind])
        assert_unitary(compose(chain))


def test_apply_preserves_power_for_unitary_chains():
    rng = np.random.default_rng(23)
    for _ in range(300):
        f = field_pair(
            rng.normal() + 1j * rng.normal(), rng.normal() + 1j * rng.normal()
        )
        m = compose([bs_matrix(), phase_upper(rng.uniform(-9, 9)), bs_matrix()])
        assert abs(total_power(apply(m, f)) - total_power(f)) < 1e-12 * max(
            total_power(f), 1.0
        )


def test_apply_identity():
    f = field_pair(0.3 + 0.4j, -0.1 + 0.9j)
    assert np.abs(apply(np.eye(2, dtype=complex), f) - f).max() == 0.0


def test_coupled_matrix_at_zero_second_phase():
    # substituting phi = 0 kills the diagonal and leaves pure cross terms
    for zp in (-1.2, 0.0, 0.7, np.pi):
        m = coupled_mzi_matrix(zp, 0.0)
        expected = np.array([[0.0, 1j * np.exp(1j * zp)], [1j, 0.0]])
        assert np.abs(m - expected).max() < 1e-15


def test_coupled_matrix_unitary_everywhere():
    rng = np.random.default_rng(31)
    for _ in range(500):
        assert_unitary(coupled_mzi_matrix(rng.uniform(-9, 9), rng.uniform(-9, 9)))


def test_coupled_matrix_equals_element_composition():
    # numerical composition oracle on a 17x17 grid; the factorization carries
    # both phases on the lower path and its global phase constant is exactly 1
    angles = np.linspace(-np.pi, np.pi, 17)
    for zp in angles:
        for phi in angles:
            chain = compose(
                [phase_lower(zp), bs_matrix(), phase_lower(phi), bs_matrix()]
            )
            closed = coupled_mzi_matrix(zp, phi)
            assert np.abs(closed - chain).max() < 1e-12
            phase = relative_global_phase(closed, chain)
            assert abs(phase - 1.0) < 1e-12


def test_port_swapped_chain_flips_second_phase_sign():
    # conjugating the chain by the port swap moves both phases to the upper
    # path; for the closed form that equals phi -> -phi times a global phase
    swap = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    rng = np.random.default_rng(47)
    for _ in range(100):
        zp, phi = rng.uniform(-np.pi, np.pi, 2)
        chain = compose([phase_lower(zp), bs_matrix(), phase_lower(phi), bs_matrix()])
        swapped = swap @ chain @ swap
        target = coupled_mzi_matrix(zp, -phi)
        z = relative_global_phase(swapped, target)
        assert abs(abs(z) - 1.0) < 1e-12
        assert np.abs(swapped - z * target).max() < 1e-12


def test_relative_global_phase_recovers_known_factor():
    rng = np.random.default_rng(3)
    base = coupled_mzi_matrix(0.4, -1.1)
    for theta in rng.uniform(-np.pi, np.pi, 50):
        z = relative_global_phase(np.exp(1j * theta) * base, base)
        assert abs(z - np.exp(1j * theta)) < 1e-12


def test_relative_global_phase_rejects_orthogonal():
    a = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
    b = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    with pytest.raises(ValueError):
        relative_global_phase(a, b)


def test_all_constructors_produce_finite_entries():
    rng = np.random.default_rng(61)
    for _ in range(200):
        zp, phi = rng.uniform(-50, 50, 2)
        for m in (bs_matrix(), phase_upper(zp), phase_lower(phi), coupled_mzi_matrix(zp, phi)):
            assert np.isfinite(m).all()
