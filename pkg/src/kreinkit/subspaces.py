"""Subspaces of a Krein frame: companions, isotropic parts, signatures, angular operators.

A subspace is stored as an ``n x k`` matrix with orthonormal columns (in the
Hilbert sense).  All rank decisions go through the frame's rank threshold;
subspace equality means every principal angle is below ``sqrt(tol)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import KreinFrame, as_matrix, frozen, spectral_norm
from .errors import PreconditionError

__all__ = [
    "Subspace",
    "SignatureProfile",
    "column_space",
    "null_space",
    "intersection",
    "join",
    "principal_angles",
    "subspaces_close",
]


def _svd_basis(frame: KreinFrame, m: np.ndarray) -> np.ndarray:
    """Deterministic orthonormal basis of the column space of ``m``."""
    if m.shape[1] == 0:
        return np.zeros((m.shape[0], 0), dtype=np.complex128)
    u, s, _ = np.linalg.svd(m, full_matrices=False)
    if s.size == 0:
        return np.zeros((m.shape[0], 0), dtype=np.complex128)
    rank = int(np.sum(s > frame.rank_threshold(s[0])))
    return u[:, :rank]


def _complement_basis(frame: KreinFrame, basis: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the Hilbert-orthogonal complement of ``R(basis)``."""
    n, k = basis.shape
    if k == 0:
        return np.eye(n, dtype=np.complex128)
    u, _, _ = np.linalg.svd(basis, full_matrices=True)
    return u[:, k:]


@dataclass(frozen=True, eq=False)
class Subspace:
    """Column span of an ``n x k`` matrix with orthonormal columns."""

    frame: KreinFrame
    basis: np.ndarray

    def __post_init__(self):
        b = as_matrix(self.basis, rows=self.frame.n, name="basis")
        k = b.shape[1]
        if k > self.frame.n:
            raise PreconditionError(f"basis has {k} columns in dimension {self.frame.n}")
        if k and spectral_norm(b.conj().T @ b - np.eye(k)) > self.frame.tol:
            raise PreconditionError("basis columns are not orthonormal within tol")
        object.__setattr__(self, "basis", frozen(b))

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_span(cls, frame: KreinFrame, matrix) -> "Subspace":
        """Subspace spanned by the columns of an arbitrary matrix."""
        m = as_matrix(matrix, rows=frame.n, name="span")
        return cls(frame, _svd_basis(frame, m))

    @classmethod
    def zero(cls, frame: KreinFrame) -> "Subspace":
        return cls(frame, np.zeros((frame.n, 0)))

    @classmethod
    def full(cls, frame: KreinFrame) -> "Subspace":
        return cls(frame, np.eye(frame.n))

    @classmethod
    def plus_space(cls, frame: KreinFrame) -> "Subspace":
        return cls(frame, np.eye(frame.n, frame.p))

    @classmethod
    def minus_space(cls, frame: KreinFrame) -> "Subspace":
        basis = np.zeros((frame.n, frame.q))
        basis[frame.p:, :] = np.eye(frame.q)
        return cls(frame, basis)

    # -- elementary geometry ----------------------------------------------

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        """Orthogonal (Hilbert) projection onto the subspace."""
        return self.basis @ self.basis.conj().T

    def orthogonal_complement(self) -> "Subspace":
        return Subspace(self.frame, _complement_basis(self.frame, self.basis))

    def contains(self, other: "Subspace") -> bool:
        resid = other.basis - self.projector() @ other.basis
        return spectral_norm(resid) <= np.sqrt(self.frame.tol)

    def gram(self) -> np.ndarray:
        """Compressed Gram matrix ``B* J B`` of the indefinite form."""
        return self.basis.conj().T @ self.frame.j @ self.basis

    # -- Krein-specific operations ----------------------------------------

    def j_companion(self) -> "Subspace":
        """The J-orthogonal companion ``S^[perp] = J (S^perp)``."""
        comp = _complement_basis(self.frame, self.basis)
        return Subspace(self.frame, self.frame.j @ comp)

    def isotropic_part(self) -> "Subspace":
        """``S° = S ∩ S^[perp]``, via a rank-revealing intersection."""
        return intersection(self, self.j_companion())

    def signature(self) -> tuple[int, int, int]:
        """Counts ``(kp, km, k0)`` of Gram eigenvalues above ``+tau``, below
        ``-tau`` and inside ``[-tau, tau]``; basis independent."""
        k = self.dim
        if k == 0:
            return (0, 0, 0)
        gram = self.gram()
        eigvals = np.linalg.eigvalsh((gram + gram.conj().T) / 2.0)
        tau = self.frame.rank_threshold(float(np.max(np.abs(eigvals), initial=0.0)))
        kp = int(np.sum(eigvals > tau))
        km = int(np.sum(eigvals < -tau))
        return (kp, km, k - kp - km)

    def cosignature(self) -> tuple[int, int]:
        """Positive/negative signature of the J-orthogonal companion."""
        kp, km, _ = self.j_companion().signature()
        return (kp, km)

    def signature_profile(self) -> "SignatureProfile":
        kp, km, k0 = self.signature()
        ckp, ckm = self.cosignature()
        return SignatureProfile(kp, km, k0, ckp, ckm)

    def is_neutral(self) -> bool:
        kp, km, _ = self.signature()
        return kp == 0 and km == 0

    def is_regular(self) -> bool:
        """True iff the compressed Gram is invertible (no isotropic part)."""
        if self.dim == 0:
            return True
        s = np.linalg.svd(self.gram(), compute_uv=False)
        return bool(s[-1] > self.frame.rank_threshold(float(s[0])))

    def is_pseudo_regular(self) -> bool:
        """Always true in finite dimension; kept for API symmetry."""
        return True

    def regular_complement(self) -> "Subspace":
        """The canonical regular complement ``M = S ⊖ S°`` of the isotropic part.

        Among the infinitely many regular ``M`` with ``S = S° [+] M`` this
        picks the Hilbert-orthogonal one, which is deterministic.
        """
        iso = self.isotropic_part()
        if iso.dim == 0:
            return self
        residue = (np.eye(self.frame.n) - iso.projector()) @ self.basis
        m = Subspace(self.frame, _svd_basis(self.frame, residue))
        if m.dim != self.dim - iso.dim or not m.is_regular():
            raise PreconditionError("regular complement extraction failed")
        return m

    def angular_operator(self) -> np.ndarray:
        """Angular contraction ``K`` of a J-positive subspace.

        ``K`` maps ``P+(S)`` into ``H-`` and satisfies ``K (P+ f) = P- f`` for
        ``f`` in ``S``; it is extended by zero on the orthogonal complement of
        ``P+(S)`` inside ``H+``.  Raises unless ``km = k0 = 0``.
        """
        kp, km, k0 = self.signature()
        if km != 0 or k0 != 0:
            raise PreconditionError("angular operator requires a J-positive subspace")
        p, q = self.frame.p, self.frame.q
        upper = self.basis[:p, :]
        lower = self.basis[p:, :]
        if self.dim == 0:
            return np.zeros((q, p), dtype=np.complex128)
        s = np.linalg.svd(upper, compute_uv=False)
        if s.size == 0 or s[-1] <= self.frame.rank_threshold(float(s[0])):
            raise PreconditionError("P+ is not injective on the subspace")
        k = lower @ np.linalg.pinv(upper)
        if spectral_norm(k) > 1.0 + self.frame.tol:
            raise PreconditionError("angular operator is not a contraction")
        return k


@dataclass(frozen=True)
class SignatureProfile:
    """The five integer indices of the range of a J-normal projection:
    signatures ``(kp, km, k0)`` of ``R(Q)`` and cosignatures ``(ckp, ckm)``."""

    kp: int
    km: int
    k0: int
    ckp: int
    ckm: int

    def astuple(self) -> tuple[int, int, int, int, int]:
        return (self.kp, self.km, self.k0, self.ckp, self.ckm)

    def as_dict(self) -> dict:
        return {"kp": self.kp, "km": self.km, "k0": self.k0,
                "ckp": self.ckp, "ckm": self.ckm}


# -- free functions on pairs of subspaces ----------------------------------


def column_space(frame: KreinFrame, matrix) -> Subspace:
    """Column space of an arbitrary matrix as a :class:`Subspace`."""
    return Subspace.from_span(frame, matrix)


def null_space(frame: KreinFrame, matrix) -> Subspace:
    """Kernel of a square operator as a :class:`Subspace`."""
    m = as_matrix(matrix, rows=frame.n, name="operator")
    _, s, vh = np.linalg.svd(m)
    if s.size == 0:
        return Subspace.full(frame)
    rank = int(np.sum(s > frame.rank_threshold(float(s[0]))))
    return Subspace(frame, vh[rank:, :].conj().T)


def intersection(a: Subspace, b: Subspace) -> Subspace:
    """Rank-revealing intersection of two subspaces."""
    frame = a.frame
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(frame)
    stacked = np.hstack([a.basis, b.basis])
    _, s, vh = np.linalg.svd(stacked)
    tau = frame.rank_threshold(float(s[0]))
    rank = int(np.sum(s > tau))
    null = vh[rank:, :].conj().T       # kernel of [B_a  B_b]
    vecs = a.basis @ null[: a.dim, :]  # each kernel vector gives a common point
    return Subspace(frame, _svd_basis(frame, vecs))


def join(a: Subspace, b: Subspace) -> Subspace:
    """Span of the union of two subspaces."""
    return Subspace.from_span(a.frame, np.hstack([a.basis, b.basis]))


def principal_angles(a: Subspace, b: Subspace) -> np.ndarray:
    """Principal angles (radians, ascending) between equal-dimension subspaces."""
    if a.dim != b.dim:
        raise PreconditionError("principal angles require equal dimensions")
    if a.dim == 0:
        return np.zeros(0)
    cosines = np.linalg.svd(a.basis.conj().T @ b.basis, compute_uv=False)
    return np.arccos(np.clip(cosines[::-1], -1.0, 1.0))


def subspaces_close(a: Subspace, b: Subspace, tol: float | None = None) -> bool:
    """Equality test: same dimension and all principal angles below sqrt(tol)."""
    if a.dim != b.dim:
        return False
    bound = np.sqrt(a.frame.tol if tol is None else tol)
    if a.dim == 0:
        return True
    return bool(np.max(principal_angles(a, b)) < bound)
