"""Block factorization, logarithms and the connectivity path."""

import numpy as np
import pytest
import scipy.linalg

from kreinkit import (JUnitary, KreinFrame, PreconditionError, ando_block_unitary,
                      angular_of_image, connectivity_path,
                      connectivity_path_many, exp_antihermitian, j_adjoint,
                      log_near_identity, random_j_antihermitian,
                      random_j_unitary)
from kreinkit.core import spectral_norm
from kreinkit.unitary import antihermitian_log_of_unitary

F11 = KreinFrame(1, 1)
F22 = KreinFrame(2, 2)


def test_junitary_validation():
    with pytest.raises(PreconditionError):
        JUnitary(F11, np.diag([2.0, 1.0]))
    u = JUnitary(F11, F11.j)  # J itself is J-unitary
    assert spectral_norm(u.j_inverse() - F11.j) <= 1e-15


def test_ando_identity():
    u = ando_block_unitary(F11, np.zeros((1, 1)), np.eye(1), np.eye(1))
    assert np.allclose(u.matrix, np.eye(2))


def test_ando_scalar_contraction():
    u = ando_block_unitary(F11, np.array([[0.5]]), np.eye(1), np.eye(1))
    expected = np.array([[1.0, 0.5], [0.5, 1.0]]) / np.sqrt(0.75)
    assert np.allclose(u.matrix, expected)


def test_ando_block_diagonal():
    u = ando_block_unitary(F11, np.zeros((1, 1)), 1j * np.eye(1), np.eye(1))
    assert np.allclose(u.matrix, np.diag([1j, 1.0]))


def test_ando_rejects_bad_inputs():
    with pytest.raises(PreconditionError):
        ando_block_unitary(F11, np.array([[1.0]]), np.eye(1), np.eye(1))
    with pytest.raises(PreconditionError):
        ando_block_unitary(F11, np.zeros((1, 1)), 2.0 * np.eye(1), np.eye(1))


def test_angular_of_image_identity():
    k, vp, vm = angular_of_image(JUnitary(F11, np.eye(2)))
    assert np.allclose(k, 0.0)
    assert np.allclose(vp, np.eye(1))
    assert np.allclose(vm, np.eye(1))


def test_angular_of_image_phase():
    theta = 0.7
    u = JUnitary(F11, np.diag([np.exp(1j * theta), 1.0]))
    k, vp, vm = angular_of_image(u)
    assert np.allclose(k, 0.0, atol=1e-14)
    assert np.allclose(vp, np.exp(1j * theta) * np.eye(1))
    assert np.allclose(vm, np.eye(1))


def test_angular_roundtrip_random():
    for seed in range(25):
        frame = [F11, KreinFrame(2, 1), F22][seed % 3]
        u = random_j_unitary(frame, seed, spread=0.8 * (seed % 5) / 4.0)
        k, vp, vm = angular_of_image(u)
        rebuilt = ando_block_unitary(frame, k, vp, vm)
        assert spectral_norm(rebuilt.matrix - u.matrix) <= 1e-10
        assert spectral_norm(k) < 1.0


def test_image_has_requested_angular_operator():
    from kreinkit import Subspace, column_space
    k0 = np.array([[0.3 + 0.2j], [0.1j]])
    frame = KreinFrame(1, 2)
    u = ando_block_unitary(frame, k0, np.eye(1), np.eye(2))
    image = column_space(frame, u.matrix[:, :1])
    assert np.allclose(image.angular_operator(), k0, atol=1e-12)


def test_log_identity():
    assert np.allclose(log_near_identity(JUnitary(F11, np.eye(2))), 0.0)


def test_log_roundtrip_small_generator():
    for seed in range(10):
        frame = F22
        x = 0.3 * random_j_antihermitian(frame, seed)
        u = JUnitary(frame, scipy.linalg.expm(x))
        recovered = log_near_identity(u)
        assert spectral_norm(recovered - x) <= 1e-8


def test_log_refuses_far_operators():
    u = JUnitary(F11, np.diag([np.exp(2.5j), np.exp(-2.5j)]))
    assert spectral_norm(u.matrix - np.eye(2)) >= 1.0
    with pytest.raises(PreconditionError):
        log_near_identity(u)


def test_exp_antihermitian_examples():
    assert np.allclose(exp_antihermitian(F11, np.zeros((2, 2))).matrix, np.eye(2))
    t = 0.4
    x = t * np.array([[0.0, 1.0], [1.0, 0.0]])
    assert spectral_norm(x + j_adjoint(F11, x)) <= 1e-15  # J-antihermitian
    u = exp_antihermitian(F11, x)
    expected = np.array([[np.cosh(t), np.sinh(t)], [np.sinh(t), np.cosh(t)]])
    assert np.allclose(u.matrix, expected)
    s = 0.9
    u2 = exp_antihermitian(F11, 1j * s * F11.j)
    assert np.allclose(u2.matrix, np.diag([np.exp(1j * s), np.exp(-1j * s)]))


def test_exp_antihermitian_rejects_selfadjoint():
    with pytest.raises(PreconditionError):
        exp_antihermitian(F11, F11.j)


def test_unitary_log_phase_convention():
    x = antihermitian_log_of_unitary(np.array([[-1.0 + 0.0j]]))
    assert x[0, 0] == pytest.approx(1j * np.pi)
    v = np.diag([np.exp(0.3j), -1.0, np.exp(-2.0j)])
    x = antihermitian_log_of_unitary(v)
    assert spectral_norm(x + x.conj().T) == 0.0
    assert spectral_norm(scipy.linalg.expm(x) - v) <= 1e-12


def test_path_identity():
    u = JUnitary(F22, np.eye(4))
    for t in (0.0, 0.4, 1.0):
        assert spectral_norm(connectivity_path(u, t).matrix - np.eye(4)) <= 1e-12


def test_path_endpoints_and_unitarity():
    for seed in range(8):
        frame = [F11, KreinFrame(2, 1), F22][seed % 3]
        u = random_j_unitary(frame, seed + 50, spread=0.7)
        points = connectivity_path_many(u, np.linspace(0.0, 1.0, 9))
        assert spectral_norm(points[0].matrix - frame.identity()) <= 1e-10
        assert spectral_norm(points[-1].matrix - u.matrix) <= 1e-10
        for point in points:
            assert point.unitarity_residual() <= 1e-10
