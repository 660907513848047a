"""J-normal projections with a fixed pseudo-regular range: decks, the global
cross section, and the covering map onto a base deck.

For a fixed range ``S`` with isotropic part ``S°``, the family splits into
decks indexed by the regular complements ``M`` (``R(Q Q#) = M``).  The
subgroup of J-unitaries preserving ``S`` acts transitively, with a global
continuous cross section built out of oblique projections inside ``S`` and
``S^[perp]`` plus neutral links that are the identity on ``S°``.
"""

from __future__ import annotations

import numpy as np

from .core import KreinFrame, as_matrix, frozen, j_adjoint, spectral_norm
from .errors import CertificationError, PreconditionError
from .projections import (NormalProjection, normal_family_member,
                          selfadjoint_projection_onto)
from .subspaces import Subspace, column_space, join, principal_angles, subspaces_close
from .unitary import JUnitary

__all__ = [
    "oblique_projection",
    "oblique_projection_direct",
    "restricted_isomorphism",
    "deck_distance",
    "FixedRangeFamily",
]

_CERT_SLACK = 1e3


def _common_ambient(range_space: Subspace, kernel_space: Subspace) -> Subspace:
    ambient = join(range_space, kernel_space)
    if ambient.dim != range_space.dim + kernel_space.dim:
        raise PreconditionError("range and kernel subspaces intersect nontrivially")
    return ambient


def oblique_projection(range_space: Subspace, kernel_space: Subspace) -> np.ndarray:
    """Idempotent on ``S = T1 [+] T2`` with range ``T1`` and kernel ``T2``.

    Evaluates ``P_T1 (P_T1 + P_T2)^{-1}`` with the inverse taken inside the
    ambient span ``S`` (the ambient sum of orthogonal projections may be
    singular on the whole space); extended by zero on ``S^perp``.
    """
    frame = range_space.frame
    ambient = _common_ambient(range_space, kernel_space)
    basis = ambient.basis
    g1 = basis.conj().T @ range_space.projector() @ basis
    g2 = basis.conj().T @ kernel_space.projector() @ basis
    try:
        inner = g1 @ np.linalg.inv(g1 + g2)
    except np.linalg.LinAlgError as exc:
        raise PreconditionError(f"oblique projection degenerate: {exc}") from exc
    proj = basis @ inner @ basis.conj().T

    bound = _CERT_SLACK * frame.tol * max(1.0, spectral_norm(proj) ** 2)
    if spectral_norm(proj @ proj - proj) > bound:
        raise CertificationError("oblique projection is not idempotent")
    if range_space.dim and spectral_norm(proj @ range_space.basis - range_space.basis) > bound:
        raise CertificationError("oblique projection does not fix its range")
    if kernel_space.dim and spectral_norm(proj @ kernel_space.basis) > bound:
        raise CertificationError("oblique projection does not kill its kernel")
    return proj


def oblique_projection_direct(range_space: Subspace, kernel_space: Subspace) -> np.ndarray:
    """Independent construction of the same idempotent by solving the basis
    system ``[B1 B2] -> [B1 0]`` inside the ambient span."""
    ambient = _common_ambient(range_space, kernel_space)
    basis = ambient.basis
    b1 = basis.conj().T @ range_space.basis
    b2 = basis.conj().T @ kernel_space.basis
    full = np.hstack([b1, b2])
    target = np.hstack([b1, np.zeros_like(b2)])
    inner = target @ np.linalg.inv(full)
    return basis @ inner @ basis.conj().T


def restricted_isomorphism(m1: Subspace, m2: Subspace, s0: Subspace) -> np.ndarray:
    """The J-isometric isomorphism ``M1 -> M2`` given by the oblique
    projection onto ``M2`` along ``S°``, for two regular complements of the
    same isotropic part inside the same span.

    Returned as an ambient operator vanishing on the orthogonal complement
    of ``M1``; Gram preservation is certified.
    """
    frame = m1.frame
    span1 = join(m1, s0)
    span2 = join(m2, s0)
    if not subspaces_close(span1, span2):
        raise PreconditionError("M1 [+] S° and M2 [+] S° span different subspaces")
    if m1.dim != m2.dim:
        raise PreconditionError("complements have different dimensions")
    if m1.dim == 0:
        return np.zeros((frame.n, frame.n), dtype=np.complex128)
    w = oblique_projection(m2, s0) @ m1.projector()
    gram1 = m1.gram()
    image = w @ m1.basis
    gram2 = image.conj().T @ frame.j @ image
    if spectral_norm(gram2 - gram1) > _CERT_SLACK * frame.tol * max(1.0, spectral_norm(w) ** 2):
        raise CertificationError("restricted isomorphism does not preserve the form")
    sv = np.linalg.svd(image, compute_uv=False)
    if sv[-1] <= frame.rank_threshold(float(sv[0])):
        raise CertificationError("restricted isomorphism is not invertible")
    return w


def deck_distance(m1: Subspace, m2: Subspace) -> float:
    """Metric on decks: norm distance of the J-selfadjoint projections."""
    return spectral_norm(selfadjoint_projection_onto(m1)
                         - selfadjoint_projection_onto(m2))


class FixedRangeFamily:
    """The family of J-normal projections with range ``S``, anchored at a
    base deck.

    Fixes once: the isotropic part ``S°`` with a deterministic basis, a base
    complement ``M0``, the canonical base projection ``Q0`` in its deck, and
    the biorthogonal reference basis used by every neutral link.  All
    sections computed here are therefore functions of their arguments alone.
    """

    def __init__(self, space: Subspace, base_complement: Subspace | None = None):
        self.space = space
        self.frame: KreinFrame = space.frame
        self.isotropic = space.isotropic_part()
        if base_complement is None:
            base_complement = space.regular_complement()
        self.base_complement = base_complement
        self.base = normal_family_member(space, base_complement)
        self.companion = space.j_companion()
        self._iso_basis = frozen(self.isotropic.basis)
        self._iso_dual = frozen(self.base.p_sharp @ self.frame.j @ self._iso_basis)

    # -- deck bookkeeping ---------------------------------------------------

    def _check_member(self, q: NormalProjection) -> None:
        if not subspaces_close(q.range_subspace(), self.space):
            raise PreconditionError("projection range differs from the family range")

    def deck_of(self, q: NormalProjection) -> Subspace:
        """The deck index ``M = R(Q Q#)``, certified to be a regular
        complement of ``S°`` in ``S``."""
        self._check_member(q)
        deck = q.regular_part()
        if deck.dim != self.space.dim - self.isotropic.dim:
            raise CertificationError("deck has the wrong dimension")
        if not deck.is_regular() or not self.space.contains(deck):
            raise CertificationError("deck is not a regular complement inside S")
        return deck

    def deck_selection(self, complement: Subspace) -> NormalProjection:
        """The canonical projection ``g(M)`` of a deck (family formula with
        both free parameters zero)."""
        return normal_family_member(self.space, complement)

    # -- links and the global section ----------------------------------------

    def link(self, q: NormalProjection) -> np.ndarray:
        """Neutral link for a family member, identity on ``S°``.

        All members share the range isotropic part ``S°``, so the link fixes
        the reference basis there and pairs the biorthogonal bases of the
        nullspace isotropic parts.
        """
        self._check_member(q)
        frame = self.frame
        if self.isotropic.dim == 0:
            return np.zeros((frame.n, frame.n), dtype=np.complex128)
        j = frame.j
        t_q = q.p_sharp @ j @ self._iso_basis
        return (self._iso_basis @ self._iso_dual.conj().T @ j
                + t_q @ self._iso_basis.conj().T @ j)

    def global_connector(self, q1: NormalProjection, q2: NormalProjection) -> JUnitary:
        """J-unitary ``U`` preserving ``S`` with ``U Q1 U# = Q2``; no
        nearness condition.

        Assembled as ``P_{R(E2)//S°} E1 + P_{R(F2)//S°} F1
        + V(Q2) V(Q1)# (P1 + P1#)`` with the oblique projections taken
        inside ``S`` and ``S^[perp]`` respectively.
        """
        self._check_member(q1)
        self._check_member(q2)
        frame = self.frame
        ob_e = oblique_projection(q2.regular_part(), self.isotropic)
        ob_f = oblique_projection(column_space(frame, q2.F), self.isotropic)
        v1 = self.link(q1)
        v2 = self.link(q2)
        mid1 = q1.P + q1.p_sharp
        u = ob_e @ q1.E + ob_f @ q1.F + v2 @ j_adjoint(frame, v1) @ mid1
        connector = JUnitary(frame, u)

        image = connector.matrix @ self.space.basis
        moved = column_space(frame, image)
        if not subspaces_close(moved, self.space):
            raise CertificationError("global connector does not preserve S")
        resid = spectral_norm(connector.conjugate(q1.matrix) - q2.matrix)
        if resid > _CERT_SLACK * frame.tol * max(1.0, spectral_norm(q2.matrix) ** 2):
            raise CertificationError(f"global connector residual {resid:.3e}")
        return connector

    def section(self, q: NormalProjection) -> JUnitary:
        """Global cross section anchored at the base projection."""
        return self.global_connector(self.base, q)

    # -- the covering map -----------------------------------------------------

    def covering_map(self, q: NormalProjection) -> NormalProjection:
        """Deck-collapsing map ``r(Q) = s(g(M))# Q s(g(M))`` onto the base deck."""
        self._check_member(q)
        deck = self.deck_of(q)
        transport = self.section(self.deck_selection(deck))
        moved = NormalProjection(self.frame,
                                 transport.j_inverse() @ q.matrix @ transport.matrix)
        if not subspaces_close(self.deck_of(moved), self.base_complement):
            raise CertificationError("covering map landed outside the base deck")
        return moved

    def covering_lift(self, deck: Subspace, q_base: NormalProjection) -> NormalProjection:
        """Inverse of the covering map on one deck:
        ``f(Q') = s(g(M)) Q' s(g(M))#``."""
        self._check_member(q_base)
        if not subspaces_close(self.deck_of(q_base), self.base_complement):
            raise PreconditionError("lift argument must lie in the base deck")
        transport = self.section(self.deck_selection(deck))
        lifted = NormalProjection(self.frame,
                                  transport.matrix @ q_base.matrix @ transport.j_inverse())
        if not subspaces_close(self.deck_of(lifted), deck):
            raise CertificationError("covering lift landed outside the target deck")
        return lifted

    def adjoint_transport(self, deck: Subspace, u: JUnitary) -> JUnitary:
        """``Ad_{s(g(M))}(U) = s(g(M))# U s(g(M))``, the alternative form of
        the covering map through deck-preserving unitaries."""
        transport = self.section(self.deck_selection(deck))
        return JUnitary(self.frame,
                        transport.j_inverse() @ u.matrix @ transport.matrix)
