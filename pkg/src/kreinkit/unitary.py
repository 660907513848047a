"""The group of J-unitary operators: block construction, factorization,
logarithms and path connectivity.

A J-unitary ``U`` satisfies ``U* J U = J``; with respect to ``H = H+ ⊕ H-``
every J-unitary carrying ``H+`` onto a maximal uniformly J-positive subspace
has the block form::

    [[(I - K*K)^{-1/2} V+ ,  K* (I - KK*)^{-1/2} V-],
     [K (I - K*K)^{-1/2} V+,  (I - KK*)^{-1/2} V-  ]]

for a uniform contraction ``K : H+ -> H-`` and unitaries ``V±``.  Scaling
``K -> tK`` and replacing ``V±`` by ``exp(t log V±)`` produces a continuous
J-unitary path from the identity to ``U``.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .core import KreinFrame, as_matrix, frozen, j_adjoint, spectral_norm
from .errors import CertificationError, PreconditionError

__all__ = [
    "JUnitary",
    "ando_block_unitary",
    "angular_of_image",
    "log_near_identity",
    "exp_antihermitian",
    "antihermitian_log_of_unitary",
    "connectivity_path",
    "connectivity_path_many",
]


class JUnitary:
    """A validated J-unitary operator."""

    def __init__(self, frame: KreinFrame, matrix):
        m = as_matrix(matrix, rows=frame.n, cols=frame.n, name="U")
        norm = spectral_norm(m)
        resid = spectral_norm(m.conj().T @ frame.j @ m - frame.j)
        if resid > frame.tol * max(1.0, norm ** 2):
            raise PreconditionError(
                f"not J-unitary: ||U*JU - J|| = {resid:.3e} exceeds tolerance")
        self._frame = frame
        self._matrix = frozen(m)

    @property
    def frame(self) -> KreinFrame:
        return self._frame

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    def j_inverse(self) -> np.ndarray:
        """``U# = J U* J``, which equals ``U^{-1}``."""
        return j_adjoint(self._frame, self._matrix)

    def inverse(self) -> "JUnitary":
        return JUnitary(self._frame, self.j_inverse())

    def compose(self, other: "JUnitary") -> "JUnitary":
        return JUnitary(self._frame, self._matrix @ other.matrix)

    def conjugate(self, operator) -> np.ndarray:
        """``U X U#`` for a square operator ``X``."""
        x = as_matrix(operator, rows=self._frame.n, cols=self._frame.n)
        return self._matrix @ x @ self.j_inverse()

    def unitarity_residual(self) -> float:
        return spectral_norm(self._matrix.conj().T @ self._frame.j @ self._matrix
                             - self._frame.j)


def _hermitian_power(h: np.ndarray, power: float) -> np.ndarray:
    """Power of a positive definite hermitian matrix through eigh."""
    if h.shape[0] == 0:
        return h.copy()
    vals, vecs = np.linalg.eigh((h + h.conj().T) / 2.0)
    if np.min(vals) <= 0.0:
        raise PreconditionError("matrix power requires a positive definite input")
    return (vecs * (vals ** power)) @ vecs.conj().T


def _check_unitary(frame: KreinFrame, v: np.ndarray, side: str) -> None:
    k = v.shape[0]
    if v.shape != (k, k):
        raise PreconditionError(f"{side} factor must be square")
    if k and spectral_norm(v.conj().T @ v - np.eye(k)) > frame.tol * max(1.0, spectral_norm(v) ** 2):
        raise PreconditionError(f"{side} factor is not unitary within tol")


def ando_block_unitary(frame: KreinFrame, contraction, v_plus, v_minus) -> JUnitary:
    """Assemble the block J-unitary from ``(K, V+, V-)``.

    Requires ``||K|| < 1`` and unitary factors; the image of ``H+`` has
    angular operator ``K``.
    """
    k = as_matrix(contraction, rows=frame.q, cols=frame.p, name="K")
    if spectral_norm(k) >= 1.0:
        raise PreconditionError(f"contraction norm {spectral_norm(k):.6f} is not < 1")
    vp = as_matrix(v_plus, rows=frame.p, cols=frame.p, name="V+")
    vm = as_matrix(v_minus, rows=frame.q, cols=frame.q, name="V-")
    _check_unitary(frame, vp, "V+")
    _check_unitary(frame, vm, "V-")

    plus_half = _hermitian_power(np.eye(frame.p) - k.conj().T @ k, -0.5)
    minus_half = _hermitian_power(np.eye(frame.q) - k @ k.conj().T, -0.5)
    u = np.zeros((frame.n, frame.n), dtype=np.complex128)
    u[: frame.p, : frame.p] = plus_half @ vp
    u[: frame.p, frame.p:] = k.conj().T @ minus_half @ vm
    u[frame.p:, : frame.p] = k @ plus_half @ vp
    u[frame.p:, frame.p:] = minus_half @ vm
    return JUnitary(frame, u)


def angular_of_image(u: JUnitary) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Recover ``(K, V+, V-)`` with ``ando_block_unitary(K, V+, V-) = U``.

    ``K`` is the angular operator of ``U(H+)``; the unitary factors are read
    off the diagonal blocks.
    """
    frame = u.frame
    p = frame.p
    m = u.matrix
    u11 = m[:p, :p]
    u21 = m[p:, :p]
    u22 = m[p:, p:]
    if p:
        sv = np.linalg.svd(u11, compute_uv=False)
        if sv[-1] <= frame.rank_threshold(float(sv[0])):
            raise CertificationError("upper-left block of a J-unitary must be invertible")
        k = u21 @ np.linalg.inv(u11)
    else:
        k = np.zeros((frame.q, 0), dtype=np.complex128)
    v_plus = _hermitian_power(np.eye(p) - k.conj().T @ k, 0.5) @ u11
    v_minus = _hermitian_power(np.eye(frame.q) - k @ k.conj().T, 0.5) @ u22
    return k, v_plus, v_minus


def log_near_identity(u: JUnitary) -> np.ndarray:
    """Principal logarithm of a J-unitary with ``||U - I|| < 1``.

    The spectrum then stays in the open disk around 1, so the principal
    matrix logarithm is defined and lands in the J-antihermitian operators;
    both ``exp(X) = U`` and ``X# = -X`` are certified.
    """
    frame = u.frame
    dist = spectral_norm(u.matrix - frame.identity())
    if dist >= 1.0:
        raise PreconditionError(
            f"||U - I|| = {dist:.6f} >= 1: outside the logarithm's guarantee")
    x = scipy.linalg.logm(u.matrix)
    x = np.asarray(x, dtype=np.complex128)
    bound = frame.tol * max(1.0, spectral_norm(x))
    if spectral_norm(x + j_adjoint(frame, x)) > bound:
        raise CertificationError("logarithm is not J-antihermitian within tol")
    if spectral_norm(scipy.linalg.expm(x) - u.matrix) > frame.tol * max(1.0, spectral_norm(u.matrix)):
        raise CertificationError("exp(log U) failed to reproduce U within tol")
    return x


def exp_antihermitian(frame: KreinFrame, x) -> JUnitary:
    """Exponential of a J-antihermitian operator, certified J-unitary."""
    m = as_matrix(x, rows=frame.n, cols=frame.n, name="X")
    if spectral_norm(m + j_adjoint(frame, m)) > frame.tol * max(1.0, spectral_norm(m)):
        raise PreconditionError("argument is not J-antihermitian within tol")
    return JUnitary(frame, scipy.linalg.expm(m))


def antihermitian_log_of_unitary(v: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Antihermitian logarithm of an ordinary unitary matrix.

    Eigenphases follow the convention ``theta in (-pi, pi]``; an eigenvalue
    at exactly -1 gets ``theta = pi``.  The output is exactly antihermitian.
    """
    k = v.shape[0]
    if k == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    if spectral_norm(v.conj().T @ v - np.eye(k)) > tol * max(1.0, spectral_norm(v) ** 2):
        raise PreconditionError("antihermitian logarithm requires a unitary input")
    t, z = scipy.linalg.schur(np.asarray(v, dtype=np.complex128), output="complex")
    phases = np.angle(np.diag(t))     # in (-pi, pi], -1 -> pi
    x = (z * (1j * phases)) @ z.conj().T
    return (x - x.conj().T) / 2.0


def _path_data(u: JUnitary) -> dict:
    k, v_plus, v_minus = angular_of_image(u)
    return {
        "k": k,
        "x_plus": antihermitian_log_of_unitary(v_plus, u.frame.tol),
        "x_minus": antihermitian_log_of_unitary(v_minus, u.frame.tol),
    }


def _path_point(frame: KreinFrame, data: dict, t: float) -> JUnitary:
    k = data["k"]
    vp = scipy.linalg.expm(t * data["x_plus"]) if frame.p else np.zeros((0, 0))
    vm = scipy.linalg.expm(t * data["x_minus"]) if frame.q else np.zeros((0, 0))
    return ando_block_unitary(frame, t * k, vp, vm)


def connectivity_path(u: JUnitary, t: float) -> JUnitary:
    """Point ``gamma(t)`` on the canonical J-unitary path with ``gamma(0) = I``
    and ``gamma(1) = U``."""
    if not np.isfinite(t):
        raise PreconditionError("path parameter must be finite")
    return _path_point(u.frame, _path_data(u), float(t))


def connectivity_path_many(u: JUnitary, ts) -> list[JUnitary]:
    """Evaluate the path at many parameters, factorizing ``U`` only once."""
    data = _path_data(u)
    return [_path_point(u.frame, data, float(t)) for t in ts]
