"""The E + P decomposition, selfadjoint and neutral-pair projections and the
fixed-range family formula."""

import numpy as np
import pytest

from kreinkit import (KreinFrame, NormalProjection, PreconditionError, Subspace,
                      classify, feasible_profiles, j_adjoint,
                      neutral_pair_projection, normal_family_member,
                      random_normal_projection, selfadjoint_projection_onto,
                      subspaces_close)
from kreinkit.core import spectral_norm
from kreinkit.projections import family_blocks

F11 = KreinFrame(1, 1)
F21 = KreinFrame(2, 1)
SQ2 = np.sqrt(2.0)
NEUTRAL_Q = 0.5 * np.ones((2, 2))


def s21():
    return Subspace.from_span(
        F21, np.array([[1.0, 0.0], [0.0, 1.0 / SQ2], [0.0, 1.0 / SQ2]]))


def test_constructor_rejects_non_idempotent():
    with pytest.raises(PreconditionError):
        NormalProjection(F11, np.array([[1.0, 0.0], [0.0, 0.5]]))


def test_constructor_rejects_non_normal_idempotent():
    # idempotent, but QQ# = 0 while Q#Q != 0
    with pytest.raises(PreconditionError):
        NormalProjection(F11, np.array([[1.0, 1.0], [0.0, 0.0]]))


def test_decompose_selfadjoint_projection():
    e0 = np.diag([1.0, 0.0])
    q = NormalProjection(F11, e0)
    e, p, f = q.decompose()
    assert np.allclose(e, e0)
    assert np.allclose(p, 0.0)
    assert np.allclose(f, np.diag([0.0, 1.0]))


def test_decompose_neutral_projection():
    q = NormalProjection(F11, NEUTRAL_Q)
    e, p, f = q.decompose()
    assert np.allclose(e, 0.0, atol=1e-15)
    assert np.allclose(p, NEUTRAL_Q)
    assert np.allclose(f, 0.0, atol=1e-15)


def test_decompose_identity():
    q = NormalProjection(F11, np.eye(2))
    e, p, f = q.decompose()
    assert np.allclose(e, np.eye(2))
    assert np.allclose(p, 0.0)
    assert np.allclose(f, 0.0)


def test_middle_block_matches_isotropic_parts():
    for seed in range(10):
        q = random_normal_projection(KreinFrame(2, 2), seed, (1, 0, 1, 0, 1))
        mid = q.P + q.p_sharp
        assert int(round(np.real(np.trace(mid)))) == 2 * q.isotropic_rank()
        from kreinkit import column_space, join
        direct = join(q.range_isotropic(), q.null_isotropic())
        assert subspaces_close(column_space(q.frame, mid), direct)


def test_triple_is_stable_under_tolerance_noise():
    from kreinkit.generate import make_rng, random_complex
    for seed in range(8):
        frame = KreinFrame(2, 2)
        q = random_normal_projection(frame, seed, (1, 1, 1, 0, 0))
        rng = make_rng(seed, stream=3)
        noise = random_complex(rng, frame.n, frame.n)
        noisy = q.matrix + 0.1 * frame.tol * noise / spectral_norm(noise)
        for _ in range(3):  # Newton iteration back to an idempotent
            noisy = 3.0 * noisy @ noisy - 2.0 * noisy @ noisy @ noisy
        requantized = NormalProjection(frame, noisy)
        for fresh, cached in ((requantized.E, q.E), (requantized.P, q.P),
                              (requantized.F, q.F)):
            assert spectral_norm(fresh - cached) <= 10.0 * frame.tol


def test_selfadjoint_projection_examples():
    plus = Subspace.plus_space(F21)
    assert np.allclose(selfadjoint_projection_onto(plus), np.diag([1.0, 1.0, 0.0]))
    graph = Subspace.from_span(F11, np.array([[1.0], [0.5]]))
    expected = np.array([[1.0, -0.5], [0.5, -0.25]]) / 0.75
    assert np.allclose(selfadjoint_projection_onto(graph), expected)
    assert np.allclose(selfadjoint_projection_onto(Subspace.full(F11)), np.eye(2))


def test_selfadjoint_projection_requires_regular():
    line = Subspace.from_span(F11, np.array([[1.0], [1.0]]))
    with pytest.raises(PreconditionError):
        selfadjoint_projection_onto(line)


def test_neutral_pair_projection_example():
    s = Subspace.from_span(F11, np.array([[1.0], [1.0]]))
    t = Subspace.from_span(F11, np.array([[1.0], [-1.0]]))
    assert np.allclose(neutral_pair_projection(s, t), NEUTRAL_Q)


def test_neutral_pair_projection_trivial_and_error():
    zero = Subspace.zero(F11)
    assert np.allclose(neutral_pair_projection(zero, zero), 0.0)
    s = Subspace.from_span(F11, np.array([[1.0], [1.0]]))
    with pytest.raises(PreconditionError):
        neutral_pair_projection(s, s)  # S [+] T^[perp] != H


def test_neutral_pair_requires_neutral_inputs():
    s = Subspace.plus_space(F11)
    t = Subspace.minus_space(F11)
    with pytest.raises(PreconditionError):
        neutral_pair_projection(s, t)


def test_family_member_regular_range_degenerates():
    graph = Subspace.from_span(F11, np.array([[1.0], [0.5]]))
    q = normal_family_member(graph)
    assert np.allclose(q.matrix, selfadjoint_projection_onto(graph), atol=1e-12)


def test_family_member_full_range_is_identity():
    q = normal_family_member(Subspace.full(F21))
    assert np.allclose(q.matrix, np.eye(3), atol=1e-12)


def test_family_member_21_example():
    s = s21()
    m = s.regular_complement()
    q = normal_family_member(s, m)
    assert subspaces_close(q.range_subspace(), s)
    assert subspaces_close(q.regular_part(), m)
    assert classify(F21, q.matrix).is_j_normal_projection


def test_family_member_with_parameters():
    s = s21()
    m = s.regular_complement()
    blocks = family_blocks(s)
    k0, k2 = blocks["iso"].dim, blocks["perp"].dim
    a = blocks["a"]
    skew = np.array([[0.25j]])
    kernel_map = (np.array([[0.3 - 0.1j]]) @ (np.eye(k2) - a.conj().T @ a))
    q = normal_family_member(s, m, skew=skew, kernel_map=kernel_map)
    assert classify(F21, q.matrix).is_j_normal_projection
    assert subspaces_close(q.range_subspace(), s)
    assert subspaces_close(q.regular_part(), m)
    assert k0 == 1


def test_family_member_rejects_bad_parameters():
    s = s21()
    m = s.regular_complement()
    with pytest.raises(PreconditionError):
        normal_family_member(s, m, skew=np.array([[1.0]]))  # not antihermitian
    blocks = family_blocks(s)
    bad_kernel = blocks["a"].conj().T.conj()  # k0 x k2 with J(S°) not in N(B)
    with pytest.raises(PreconditionError):
        normal_family_member(s, m, kernel_map=bad_kernel)


def test_family_member_rejects_wrong_complement():
    s = s21()
    other = Subspace.from_span(F21, np.array([[0.0], [1.0], [0.0]]))
    with pytest.raises(PreconditionError):
        normal_family_member(s, other)  # not contained complement of S°


def test_signature_profile_examples():
    assert NormalProjection(F11, np.eye(2)).signature_profile().astuple() \
        == (1, 1, 0, 0, 0)
    assert NormalProjection(F11, NEUTRAL_Q).signature_profile().astuple() \
        == (0, 0, 1, 0, 0)
    assert NormalProjection(F21, np.diag([1.0, 1.0, 0.0])).signature_profile() \
        .astuple() == (2, 0, 0, 0, 1)


def test_generated_profiles_cover_all_feasible_classes():
    frame = KreinFrame(2, 2)
    for i, prof in enumerate(feasible_profiles(frame)):
        q = random_normal_projection(frame, 500 + i, prof)
        assert q.signature_profile() == prof
        assert classify(frame, q.matrix).is_j_normal_projection


def test_complement_projection_swaps_parts():
    q = random_normal_projection(KreinFrame(2, 2), 9, (1, 0, 1, 0, 1))
    c = q.complement()
    assert spectral_norm(c.E - q.F) <= 1e-12
    assert spectral_norm(c.P - q.p_sharp) <= 1e-12
    assert spectral_norm(j_adjoint(q.frame, q.P) - q.p_sharp) == 0.0
