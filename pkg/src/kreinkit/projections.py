"""J-normal projections and their canonical pieces.

Every J-normal idempotent ``Q`` splits uniquely as ``Q = E + P`` with ``E``
J-selfadjoint, ``P`` a projection onto the isotropic part of the range and
``P P# = P# P = 0``; the complementary projection satisfies
``I - Q = F + P#``.  This module validates projections, computes the triple
``(E, P, F)``, builds J-selfadjoint and neutral-pair projections, and
evaluates the three-block family formula that parametrizes all J-normal
projections with prescribed range and regular part.
"""

from __future__ import annotations

import numpy as np

from .core import KreinFrame, as_matrix, frozen, j_adjoint, spectral_norm
from .errors import CertificationError, PreconditionError
from .subspaces import SignatureProfile, Subspace, column_space, subspaces_close

__all__ = [
    "NormalProjection",
    "selfadjoint_projection_onto",
    "neutral_pair_projection",
    "normal_family_member",
    "family_blocks",
]


class NormalProjection:
    """A validated J-normal idempotent with its cached canonical parts.

    Attributes ``E = Q Q#``, ``P = Q (I - Q#)`` and ``F = (I-Q)(I-Q)#`` are
    computed at construction and immutable afterwards.
    """

    def __init__(self, frame: KreinFrame, matrix):
        m = as_matrix(matrix, rows=frame.n, cols=frame.n, name="Q")
        norm = spectral_norm(m)
        bound = frame.tol * max(1.0, norm ** 2)
        idem = spectral_norm(m @ m - m)
        if idem > bound:
            raise PreconditionError(f"not idempotent: residual {idem:.3e} > {bound:.3e}")
        sharp = j_adjoint(frame, m)
        comm = spectral_norm(m @ sharp - sharp @ m)
        if comm > bound:
            raise PreconditionError(f"not J-normal: commutator {comm:.3e} > {bound:.3e}")
        eye = frame.identity()
        self._frame = frame
        self._matrix = frozen(m)
        self._sharp = frozen(sharp)
        self._e = frozen(m @ sharp)
        self._p = frozen(m @ (eye - sharp))
        self._f = frozen((eye - m) @ (eye - sharp))

    # -- data access ---------------------------------------------------------

    @property
    def frame(self) -> KreinFrame:
        return self._frame

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def sharp(self) -> np.ndarray:
        """The J-adjoint ``Q#``."""
        return self._sharp

    @property
    def E(self) -> np.ndarray:
        return self._e

    @property
    def P(self) -> np.ndarray:
        return self._p

    @property
    def F(self) -> np.ndarray:
        return self._f

    @property
    def p_sharp(self) -> np.ndarray:
        return j_adjoint(self._frame, self._p)

    def complement(self) -> "NormalProjection":
        """The J-normal projection ``I - Q``."""
        return NormalProjection(self._frame, self._frame.identity() - self._matrix)

    # -- derived subspaces ----------------------------------------------------

    def range_subspace(self) -> Subspace:
        return column_space(self._frame, self._matrix)

    def null_subspace(self) -> Subspace:
        return column_space(self._frame, self._frame.identity() - self._matrix)

    def range_isotropic(self) -> Subspace:
        """``R(Q)° = R(P)``."""
        return column_space(self._frame, self._p)

    def null_isotropic(self) -> Subspace:
        """``N(Q)° = R(P#)``."""
        return column_space(self._frame, self.p_sharp)

    def isotropic_rank(self) -> int:
        return int(round(float(np.real(np.trace(self._p)))))

    def regular_part(self) -> Subspace:
        """``R(Q Q#)``, the regular complement of the range isotropic part."""
        return column_space(self._frame, self._e)

    # -- the canonical decomposition ------------------------------------------

    def decompose(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Return ``(E, P, F)`` and certify the three-block regular splitting.

        The certificate checks that ``R(E)``, ``R(P + P#)`` and ``R(F)`` have
        ranks summing to ``n`` and vanishing pairwise compressed Grams, i.e.
        they form a J-orthogonal sum of regular subspaces equal to the whole
        space.
        """
        frame = self._frame
        blocks = [
            column_space(frame, self._e),
            column_space(frame, self._p + self.p_sharp),
            column_space(frame, self._f),
        ]
        total = sum(b.dim for b in blocks)
        if total != frame.n:
            raise CertificationError(
                f"three-block ranks sum to {total}, expected {frame.n}")
        bound = frame.tol * max(1.0, spectral_norm(self._matrix) ** 2)
        for i in range(3):
            if not blocks[i].is_regular():
                raise CertificationError(f"block {i} is not a regular subspace")
            for k in range(i + 1, 3):
                cross = blocks[i].basis.conj().T @ frame.j @ blocks[k].basis
                if spectral_norm(cross) > bound:
                    raise CertificationError(
                        f"blocks {i},{k} are not J-orthogonal: {spectral_norm(cross):.3e}")
        return self._e, self._p, self._f

    def signature_profile(self) -> SignatureProfile:
        """Five orbit indices: signatures of ``R(Q)``, cosignatures via ``N(Q)``."""
        kp, km, k0 = self.range_subspace().signature()
        ckp, ckm, nk0 = self.null_subspace().signature()
        if nk0 != k0:
            raise CertificationError(
                f"isotropic ranks of range ({k0}) and nullspace ({nk0}) disagree")
        return SignatureProfile(kp, km, k0, ckp, ckm)


def selfadjoint_projection_onto(space: Subspace) -> np.ndarray:
    """The unique J-selfadjoint projection onto a regular subspace.

    Computed as ``B (B* J B)^{-1} B* J`` for an orthonormal basis ``B``.
    """
    frame = space.frame
    if space.dim == 0:
        return np.zeros((frame.n, frame.n), dtype=np.complex128)
    gram = space.gram()
    s = np.linalg.svd(gram, compute_uv=False)
    if s[-1] <= frame.rank_threshold(float(s[0])):
        raise PreconditionError("subspace is not regular: singular Gram")
    return space.basis @ np.linalg.solve(gram, space.basis.conj().T @ frame.j)


def neutral_pair_projection(s: Subspace, t: Subspace) -> np.ndarray:
    """Projection onto ``S`` along ``T^[perp]`` for a neutral dual pair ``(S, T)``.

    Uses ``P = B_S (B_T* J B_S)^{-1} B_T* J``; certifies ``P P# = P# P = 0``.
    """
    frame = s.frame
    if t.frame is not frame and t.frame != frame:
        raise PreconditionError("subspaces live on different frames")
    if not s.is_neutral() or not t.is_neutral():
        raise PreconditionError("both subspaces of a dual pair must be neutral")
    if s.dim != t.dim:
        raise PreconditionError("a neutral dual pair has equal dimensions")
    if s.dim == 0:
        return np.zeros((frame.n, frame.n), dtype=np.complex128)
    pairing = t.basis.conj().T @ frame.j @ s.basis
    sv = np.linalg.svd(pairing, compute_uv=False)
    if sv[-1] <= frame.rank_threshold(float(sv[0])):
        raise PreconditionError("not a dual pair: S [+] T^[perp] fails by rank")
    proj = s.basis @ np.linalg.solve(pairing, t.basis.conj().T @ frame.j)
    sharp = j_adjoint(frame, proj)
    bound = frame.tol * max(1.0, spectral_norm(proj) ** 2)
    if spectral_norm(proj @ sharp) > bound or spectral_norm(sharp @ proj) > bound:
        raise CertificationError("neutral pair projection failed P P# = P# P = 0")
    return proj


def family_blocks(space: Subspace) -> dict:
    """Shared data for the fixed-range family formula.

    Splits the space as ``H = S° ⊕ (S ⊖ S°) ⊕ S^perp`` (Hilbert-orthogonal)
    and reads off the blocks ``a, b, c, d`` of the symmetry in that
    decomposition.  The returned bases are deterministic, so callers can
    express parameters in them.
    """
    frame = space.frame
    iso = space.isotropic_part()
    # regular_complement is exactly S ⊖ S° by construction
    mid = space.regular_complement() if iso.dim else space
    perp = space.orthogonal_complement()
    c0, c1, c2 = iso.basis, mid.basis, perp.basis
    j = frame.j
    return {
        "iso": iso,
        "mid": mid,
        "perp": perp,
        "a": c0.conj().T @ j @ c2,
        "b": c1.conj().T @ j @ c1,
        "c": c1.conj().T @ j @ c2,
        "d": c2.conj().T @ j @ c2,
    }


def normal_family_member(space: Subspace, complement: Subspace | None = None,
                         skew=None, kernel_map=None) -> NormalProjection:
    """Member of the J-normal family with range ``space`` and regular part
    ``complement``.

    Evaluates the three-block formula over ``H = S° ⊕ (S ⊖ S°) ⊕ S^perp``:
    with symmetry blocks ``a, b, c, d``, coupling ``r`` (the compression of
    the J-selfadjoint projection onto the complement, restricted to
    ``J(S°)``), a skew parameter ``A = -A*`` on ``S°`` and a map
    ``B : S^perp -> S°`` vanishing on ``J(S°)``, the projection is::

        [[I, 0, (A + Re(B c* b r a*) - (B d B* + a r* b^3 r a*)/2) a
                 + B + a r* (c + b r)],
         [0, I, b^{-1} c + r],
         [0, 0, 0]]

    ``skew`` and ``kernel_map`` are matrices in the deterministic bases of
    ``S°`` and ``S^perp`` returned by :func:`family_blocks` (zero by default).
    The result is certified against both range oracles ``R(Q) = S`` and
    ``R(Q Q#) = complement``.
    """
    frame = space.frame
    blocks = family_blocks(space)
    iso, mid, perp = blocks["iso"], blocks["mid"], blocks["perp"]
    k0, k1, k2 = iso.dim, mid.dim, perp.dim
    a, b, c, d = blocks["a"], blocks["b"], blocks["c"], blocks["d"]

    if complement is None:
        complement = mid
    if complement.dim != k1:
        raise PreconditionError(
            f"complement has dimension {complement.dim}, expected {k1}")
    if k1 and not space.contains(complement):
        raise PreconditionError("complement is not contained in the range")
    e_m = selfadjoint_projection_onto(complement)  # raises unless regular

    askew = np.zeros((k0, k0), dtype=np.complex128) if skew is None \
        else as_matrix(skew, rows=k0, cols=k0, name="skew")
    if spectral_norm(askew + askew.conj().T) > frame.tol * max(1.0, spectral_norm(askew)):
        raise PreconditionError("skew parameter must satisfy A = -A*")
    bmap = np.zeros((k0, k2), dtype=np.complex128) if kernel_map is None \
        else as_matrix(kernel_map, rows=k0, cols=k2, name="kernel_map")
    if spectral_norm(bmap @ a.conj().T) > frame.tol * max(1.0, spectral_norm(bmap)):
        raise PreconditionError("kernel map must vanish on J(S°)")

    # r = P_{S ⊖ S°} E_M restricted to J(S°), extended by zero on its
    # orthogonal complement inside S^perp
    rho = mid.basis.conj().T @ e_m @ frame.j @ iso.basis
    r = rho @ a

    re_part = bmap @ c.conj().T @ b @ r @ a.conj().T
    re_part = (re_part + re_part.conj().T) / 2.0
    correction = re_part - 0.5 * (bmap @ d @ bmap.conj().T
                                  + a @ r.conj().T @ (b @ b @ b) @ r @ a.conj().T)
    top = (askew + correction) @ a + bmap + a @ r.conj().T @ (c + b @ r)
    if k1:
        middle = np.linalg.solve(b, c) + r
    else:
        middle = np.zeros((0, k2), dtype=np.complex128)

    phi = np.hstack([iso.basis, mid.basis, perp.basis])
    coords = np.zeros((frame.n, frame.n), dtype=np.complex128)
    coords[:k0, :k0] = np.eye(k0)
    coords[k0:k0 + k1, k0:k0 + k1] = np.eye(k1)
    coords[:k0, k0 + k1:] = top
    coords[k0:k0 + k1, k0 + k1:] = middle
    q = NormalProjection(frame, phi @ coords @ phi.conj().T)

    if not subspaces_close(q.range_subspace(), space):
        raise CertificationError("family member failed the range oracle R(Q) = S")
    if not subspaces_close(q.regular_part(), complement):
        raise CertificationError("family member failed the deck oracle R(QQ#) = M")
    return q
