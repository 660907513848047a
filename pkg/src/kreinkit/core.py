"""Fundamental symmetry, indefinite inner product, J-adjoint and operator classification.

All operators are dense complex numpy arrays.  A :class:`KreinFrame` fixes the
ambient dimension ``n = p + q``, the symmetry ``J = diag(I_p, -I_q)`` and the
comparison tolerance used by every predicate in the library.  The indefinite
inner product is ``[f, g] = <Jf, g>`` where ``<. , .>`` is linear in the first
argument and conjugate-linear in the second.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import PreconditionError

EPS = float(np.finfo(np.float64).eps)

__all__ = [
    "EPS",
    "KreinFrame",
    "Classification",
    "as_matrix",
    "as_vector",
    "spectral_norm",
    "frozen",
    "j_adjoint",
    "j_inner",
    "classify",
    "hermitian_split",
]


def as_matrix(value, rows: Optional[int] = None, cols: Optional[int] = None,
              name: str = "operator") -> np.ndarray:
    """Coerce ``value`` to a finite complex 2-d array, checking its shape."""
    m = np.asarray(value, dtype=np.complex128)
    if m.ndim != 2:
        raise PreconditionError(f"{name}: expected a 2-d array, got ndim={m.ndim}")
    if rows is not None and m.shape[0] != rows:
        raise PreconditionError(f"{name}: expected {rows} rows, got {m.shape[0]}")
    if cols is not None and m.shape[1] != cols:
        raise PreconditionError(f"{name}: expected {cols} columns, got {m.shape[1]}")
    if m.size and not np.all(np.isfinite(m)):
        raise PreconditionError(f"{name}: entries must be finite (no NaN/Inf)")
    return m


def as_vector(value, length: Optional[int] = None, name: str = "vector") -> np.ndarray:
    """Coerce ``value`` to a finite complex 1-d array of the given length."""
    v = np.asarray(value, dtype=np.complex128).reshape(-1)
    if length is not None and v.shape[0] != length:
        raise PreconditionError(f"{name}: expected length {length}, got {v.shape[0]}")
    if v.size and not np.all(np.isfinite(v)):
        raise PreconditionError(f"{name}: entries must be finite (no NaN/Inf)")
    return v


def spectral_norm(m: np.ndarray) -> float:
    """Operator 2-norm; zero for empty matrices."""
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))


def frozen(m: np.ndarray) -> np.ndarray:
    """Return a read-only copy; stored arrays are immutable after construction."""
    out = np.array(m, dtype=np.complex128, copy=True)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class KreinFrame:
    """Ambient frame: dimensions ``(p, q)``, symmetry ``J`` and tolerances.

    ``tol`` is the absolute comparison tolerance for operator predicates;
    ``rank_tol`` optionally overrides the automatic rank threshold
    ``n * eps * max(1, sigma_max)`` used for intersections, kernels and the
    ternary classification of Gram eigenvalues.
    """

    p: int
    q: int
    tol: float = 1e-9
    rank_tol: Optional[float] = None

    def __post_init__(self):
        if self.p < 0 or self.q < 0 or self.p + self.q < 1:
            raise PreconditionError(f"invalid frame dimensions p={self.p}, q={self.q}")
        if not (0.0 < self.tol < 1.0):
            raise PreconditionError(f"tolerance must lie in (0, 1), got {self.tol}")

    @property
    def n(self) -> int:
        return self.p + self.q

    @property
    def j(self) -> np.ndarray:
        """The canonical symmetry ``diag(I_p, -I_q)``."""
        d = np.ones(self.n, dtype=np.complex128)
        d[self.p:] = -1.0
        return np.diag(d)

    @property
    def p_plus(self) -> np.ndarray:
        """Orthogonal projection onto the positive component H+."""
        d = np.zeros(self.n, dtype=np.complex128)
        d[: self.p] = 1.0
        return np.diag(d)

    @property
    def p_minus(self) -> np.ndarray:
        """Orthogonal projection onto the negative component H-."""
        d = np.zeros(self.n, dtype=np.complex128)
        d[self.p:] = 1.0
        return np.diag(d)

    def rank_threshold(self, sigma_max: float) -> float:
        """Singular-value / eigenvalue threshold for rank decisions.

        Two guards on top of the bare ``n * eps * sigma_max`` convention: the
        ``max(1, sigma_max)`` factor anchors the scale (Gram matrices of
        neutral subspaces are pure roundoff, so their own sigma_max is
        meaningless), and the ``tol``-tied floor absorbs the error
        amplification of J-unitary conjugations, which pushes roundoff well
        past eps scale while genuine index gaps stay orders of magnitude
        above it.
        """
        if self.rank_tol is not None:
            return self.rank_tol
        return max(self.n * EPS * max(1.0, float(sigma_max)), 1e-2 * self.tol)

    def identity(self) -> np.ndarray:
        return np.eye(self.n, dtype=np.complex128)

    @classmethod
    def from_symmetry(cls, symmetry, tol: float = 1e-9,
                      rank_tol: Optional[float] = None) -> tuple["KreinFrame", np.ndarray]:
        """Canonicalize an arbitrary symmetry matrix.

        Accepts any ``J0`` with ``J0 = J0* = J0^{-1}`` (within ``tol``) and
        returns ``(frame, w)`` where ``w`` is unitary and
        ``J0 = w @ frame.j @ w*``.
        """
        j0 = as_matrix(symmetry, name="symmetry")
        n = j0.shape[0]
        if j0.shape[1] != n:
            raise PreconditionError("symmetry matrix must be square")
        scale = max(1.0, spectral_norm(j0))
        if spectral_norm(j0 - j0.conj().T) > tol * scale:
            raise PreconditionError("symmetry matrix is not selfadjoint")
        if spectral_norm(j0 @ j0 - np.eye(n)) > tol * max(1.0, scale ** 2):
            raise PreconditionError("symmetry matrix is not an involution")
        eigvals, eigvecs = np.linalg.eigh(j0)
        # descending order puts the +1 eigenspace first
        order = np.argsort(-eigvals)
        eigvals = eigvals[order]
        w = eigvecs[:, order]
        p = int(np.sum(eigvals > 0.0))
        frame = cls(p=p, q=n - p, tol=tol, rank_tol=rank_tol)
        return frame, w


def j_adjoint(frame: KreinFrame, t) -> np.ndarray:
    """The J-adjoint ``J T* J`` of a square operator on the frame."""
    m = as_matrix(t, rows=frame.n, cols=frame.n)
    return frame.j @ m.conj().T @ frame.j


def j_inner(frame: KreinFrame, f, g) -> complex:
    """Indefinite inner product ``[f, g] = <Jf, g>`` (conjugate-linear in ``g``)."""
    fv = as_vector(f, length=frame.n, name="f")
    gv = as_vector(g, length=frame.n, name="g")
    return complex(gv.conj() @ (frame.j @ fv))


@dataclass(frozen=True)
class Classification:
    """Tolerance-aware operator flags together with their defining residuals."""

    is_projection: bool
    is_j_selfadjoint: bool
    is_j_antihermitian: bool
    is_j_unitary: bool
    is_j_normal_projection: bool
    residuals: dict = field(repr=False)

    def as_dict(self) -> dict:
        return {
            "is_projection": self.is_projection,
            "is_j_selfadjoint": self.is_j_selfadjoint,
            "is_j_antihermitian": self.is_j_antihermitian,
            "is_j_unitary": self.is_j_unitary,
            "is_j_normal_projection": self.is_j_normal_projection,
            "residuals": dict(self.residuals),
        }


def classify(frame: KreinFrame, t) -> Classification:
    """Classify a square operator; each flag holds iff its residual is below
    ``tol * max(1, ||T||)``."""
    m = as_matrix(t, rows=frame.n, cols=frame.n)
    sharp = j_adjoint(frame, m)
    eye = frame.identity()
    residuals = {
        "idempotency": spectral_norm(m @ m - m),
        "j_selfadjoint": spectral_norm(m - sharp),
        "j_antihermitian": spectral_norm(m + sharp),
        "j_unitary": max(spectral_norm(m @ sharp - eye), spectral_norm(sharp @ m - eye)),
        "normal_commutator": spectral_norm(m @ sharp - sharp @ m),
    }
    bound = frame.tol * max(1.0, spectral_norm(m))
    is_projection = residuals["idempotency"] <= bound
    return Classification(
        is_projection=is_projection,
        is_j_selfadjoint=residuals["j_selfadjoint"] <= bound,
        is_j_antihermitian=residuals["j_antihermitian"] <= bound,
        is_j_unitary=residuals["j_unitary"] <= bound,
        is_j_normal_projection=is_projection and residuals["normal_commutator"] <= bound,
        residuals=residuals,
    )


def hermitian_split(frame: KreinFrame, x) -> tuple[np.ndarray, np.ndarray]:
    """Split ``X`` into its J-selfadjoint and J-antihermitian parts.

    Returns ``(xs, xa)`` with ``xs = (X + X#)/2``, ``xa = (X - X#)/2`` and
    ``xs + xa = X``.
    """
    m = as_matrix(x, rows=frame.n, cols=frame.n)
    sharp = j_adjoint(frame, m)
    return (m + sharp) / 2.0, (m - sharp) / 2.0
