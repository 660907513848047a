"""Orbit machinery for the conjugation action of the J-unitary group on
J-normal projections: cross sections, neutral links, orbit classification and
tangent-space splittings.

The local section around a base projection ``Q0`` is assembled from three
independent pieces matching the J-orthogonal splitting
``H = R(E0) [+] R(P0 + P0#) [+] R(F0)``: exponential sections for the two
J-selfadjoint corners and a biorthogonal-basis link between the neutral
middles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from .core import KreinFrame, as_matrix, frozen, hermitian_split, j_adjoint, spectral_norm
from .errors import CertificationError, PreconditionError
from .projections import NormalProjection, neutral_pair_projection
from .subspaces import Subspace, column_space
from .unitary import JUnitary

__all__ = [
    "kato_gap",
    "unitary_polar_section",
    "selfadjoint_section",
    "biorthogonal_basis",
    "neutral_link",
    "OrbitSectionContext",
    "orbit_section",
    "same_orbit",
    "orbit_connector",
    "connect",
    "ConnectResult",
    "commutant_projection",
    "TangentVector",
    "tangent_vector",
    "TangentSplit",
    "tangent_split",
    "submersion_differential",
    "submersion_differential_fd",
]

# slack factor for certificates of composed matrix-function constructions
_CERT_SLACK = 1e3


def kato_gap(frame: KreinFrame, e1, e2) -> tuple[float, float]:
    """Range-projection gap of two idempotents and its bound ``||E1 - E2||``.

    Asserts the classical inequality ``||P_R(E1) - P_R(E2)|| <= ||E1 - E2||``.
    """
    m1 = as_matrix(e1, rows=frame.n, cols=frame.n, name="E1")
    m2 = as_matrix(e2, rows=frame.n, cols=frame.n, name="E2")
    for name, m in (("E1", m1), ("E2", m2)):
        resid = spectral_norm(m @ m - m)
        if resid > frame.tol * max(1.0, spectral_norm(m) ** 2):
            raise PreconditionError(f"{name} is not idempotent: residual {resid:.3e}")
    gap = spectral_norm(column_space(frame, m1).projector()
                        - column_space(frame, m2).projector())
    bound = spectral_norm(m1 - m2)
    if gap > bound + frame.tol:
        raise CertificationError(
            f"projection gap {gap:.12e} exceeds the bound {bound:.12e}")
    return gap, bound


def unitary_polar_section(p_new, p_base, tol: float = 1e-9) -> np.ndarray:
    """Unitary ``U`` with ``U P0 U* = P`` for orthogonal projections with
    ``||P - P0|| < 1``.

    ``U`` is the unitary polar factor ``|S*|^{-1} S`` of
    ``S = P P0 + (I - P)(I - P0)`` and depends continuously on ``P``.
    """
    p = as_matrix(p_new, name="P")
    p0 = as_matrix(p_base, rows=p.shape[0], cols=p.shape[1], name="P0")
    n = p.shape[0]
    if p.shape[1] != n:
        raise PreconditionError("projections must be square")
    for name, m in (("P", p), ("P0", p0)):
        if spectral_norm(m @ m - m) > tol or spectral_norm(m - m.conj().T) > tol:
            raise PreconditionError(f"{name} is not an orthogonal projection within tol")
    if spectral_norm(p - p0) >= 1.0:
        raise PreconditionError(
            f"||P - P0|| = {spectral_norm(p - p0):.6f} >= 1: no polar section")
    eye = np.eye(n)
    s = p @ p0 + (eye - p) @ (eye - p0)
    gram = s @ s.conj().T
    vals, vecs = np.linalg.eigh((gram + gram.conj().T) / 2.0)
    if np.min(vals) <= 0.0:
        raise PreconditionError("polar section degenerate: S is singular")
    u = (vecs * (vals ** -0.5)) @ vecs.conj().T @ s
    if spectral_norm(u @ p0 @ u.conj().T - p) > _CERT_SLACK * tol:
        raise CertificationError("polar section failed U P0 U* = P")
    return u


def selfadjoint_section(frame: KreinFrame, e_base, e_new) -> JUnitary:
    """J-unitary ``W`` with ``W E0 W# = E`` for close J-selfadjoint projections.

    With reflections ``R = 2E - I``, requires ``||R_E R_E0 - I|| < 1`` and
    returns ``W = exp(log(R_E R_E0) / 2)``.  The generator is certified
    J-antihermitian and co-diagonal with respect to ``E0``.
    """
    e0 = as_matrix(e_base, rows=frame.n, cols=frame.n, name="E0")
    e = as_matrix(e_new, rows=frame.n, cols=frame.n, name="E")
    eye = frame.identity()
    for name, m in (("E0", e0), ("E", e)):
        scale = max(1.0, spectral_norm(m) ** 2)
        if spectral_norm(m @ m - m) > frame.tol * scale \
                or spectral_norm(m - j_adjoint(frame, m)) > frame.tol * scale:
            raise PreconditionError(f"{name} is not a J-selfadjoint projection")
    r0 = 2.0 * e0 - eye
    r1 = 2.0 * e - eye
    g = r1 @ r0
    dist = spectral_norm(g - eye)
    if dist >= 1.0:
        raise PreconditionError(
            f"||R_E R_E0 - I|| = {dist:.6f} >= 1: projections too far apart")
    x = np.asarray(scipy.linalg.logm(g), dtype=np.complex128) / 2.0
    bound = _CERT_SLACK * frame.tol * max(1.0, spectral_norm(x))
    if spectral_norm(x + j_adjoint(frame, x)) > bound:
        raise CertificationError("section generator is not J-antihermitian")
    if spectral_norm(e0 @ x @ e0) > bound \
            or spectral_norm((eye - e0) @ x @ (eye - e0)) > bound:
        raise CertificationError("section generator is not co-diagonal for E0")
    w = JUnitary(frame, scipy.linalg.expm(x))
    resid = spectral_norm(w.conjugate(e0) - e)
    if resid > _CERT_SLACK * frame.tol * max(1.0, spectral_norm(e) ** 2):
        raise CertificationError(f"selfadjoint section residual {resid:.3e}")
    return w


def biorthogonal_basis(s: Subspace, t: Subspace, s_basis=None) -> np.ndarray:
    """Basis of ``T`` biorthogonal to an orthonormal basis of ``S``.

    For a neutral dual pair ``(S, T)`` and the projection ``P`` onto ``S``
    along ``T^[perp]``, the vectors ``t_j = P# J s_j`` span ``T`` and satisfy
    ``[s_i, t_j] = delta_ij``; both facts are certified.
    """
    frame = s.frame
    proj = neutral_pair_projection(s, t)  # validates the dual pair
    if s_basis is None:
        sb = s.basis
    else:
        sb = as_matrix(s_basis, rows=frame.n, cols=s.dim, name="s_basis")
        if s.dim and spectral_norm(sb.conj().T @ sb - np.eye(s.dim)) > frame.tol:
            raise PreconditionError("supplied basis is not orthonormal")
        if s.dim and spectral_norm(sb - s.projector() @ sb) > np.sqrt(frame.tol):
            raise PreconditionError("supplied basis does not span S")
    tb = j_adjoint(frame, proj) @ frame.j @ sb
    if s.dim == 0:
        return tb
    pairing = tb.conj().T @ frame.j @ sb
    if spectral_norm(pairing - np.eye(s.dim)) > _CERT_SLACK * frame.tol:
        raise CertificationError("biorthogonality [s_i, t_j] = delta failed")
    sv = np.linalg.svd(tb, compute_uv=False)
    if sv[-1] <= frame.rank_threshold(float(sv[0])):
        raise CertificationError("biorthogonal family is rank deficient")
    return tb


def _link_from_bases(frame: KreinFrame, s0, t0, s1, t1) -> np.ndarray:
    """J-isometry sending ``s0 -> s1`` and ``t0 -> t1``, zero on the
    J-orthogonal complement of their span.

    Coefficients along ``s0`` are read with the functionals ``[., t0_j]`` and
    along ``t0`` with ``[., s0_j]``, which is exactly the biorthogonal
    expansion of the neutral middle.
    """
    j = frame.j
    return s1 @ (t0.conj().T @ j) + t1 @ (s0.conj().T @ j)


def neutral_link(q0: NormalProjection, q: NormalProjection,
                 iso_basis=None) -> np.ndarray:
    """J-isometric link between the neutral middles of two close projections.

    Maps ``R(Q0)° [+] N(Q0)°`` onto ``R(Q)° [+] N(Q)°`` carrying isotropic
    ranges to isotropic ranges, and vanishes on the J-orthogonal complement.
    Requires ``||Q - Q0|| < 1 / (2 (1 + ||Q0||))``.
    """
    frame = q0.frame
    delta = spectral_norm(q.matrix - q0.matrix)
    bound = 1.0 / (2.0 * (1.0 + spectral_norm(q0.matrix)))
    if delta >= bound:
        raise PreconditionError(
            f"||Q - Q0|| = {delta:.6f} outside the link neighborhood (< {bound:.6f})")
    k0 = q0.isotropic_rank()
    if q.isotropic_rank() != k0:
        raise PreconditionError("isotropic dimensions differ; not inside the neighborhood")
    if k0 == 0:
        return np.zeros((frame.n, frame.n), dtype=np.complex128)

    iso0 = q0.range_isotropic()
    iso1 = q.range_isotropic()
    s0 = iso0.basis if iso_basis is None \
        else as_matrix(iso_basis, rows=frame.n, cols=k0, name="iso_basis")
    u = unitary_polar_section(iso1.projector(), iso0.projector(), frame.tol)
    s1 = u @ s0
    t0 = biorthogonal_basis(iso0, q0.null_isotropic(), s0)
    t1 = biorthogonal_basis(iso1, q.null_isotropic(), s1)
    link = _link_from_bases(frame, s0, t0, s1, t1)

    z0 = np.hstack([s0, t0])
    z1 = link @ z0
    iso_resid = spectral_norm(z1.conj().T @ frame.j @ z1 - z0.conj().T @ frame.j @ z0)
    if iso_resid > _CERT_SLACK * frame.tol:
        raise CertificationError(f"neutral link J-isometry residual {iso_resid:.3e}")
    return link


def _dyadic_radius(projection_norm: float) -> float:
    """Largest ``2^{-k}`` below ``1 / (2 (1 + 2 ||E0||))``, so that the
    selfadjoint-section precondition follows from the reflection bound
    ``||R_E R_E0 - I|| <= 2 ||E - E0|| (1 + 2 ||E0||)``."""
    limit = 1.0 / (2.0 * (1.0 + 2.0 * projection_norm))
    k = max(1, math.ceil(-math.log2(limit)))
    radius = 2.0 ** (-k)
    while radius > limit:
        radius /= 2.0
    return radius


class OrbitSectionContext:
    """Base point plus the radii and fixed bases of its local cross section.

    ``radius`` follows the section theorem:
    ``min(r_E0, r_F0, 1) / (1 + 2 ||Q0||)`` with dyadic sub-radii for the two
    J-selfadjoint corners.  The orthonormal basis of ``R(Q0)°`` is fixed here
    once, making the neutral link a function of ``Q`` alone.
    """

    def __init__(self, q0: NormalProjection):
        self.q0 = q0
        q_norm = spectral_norm(q0.matrix)
        self.r_e = _dyadic_radius(spectral_norm(q0.E))
        self.r_f = _dyadic_radius(spectral_norm(q0.F))
        denom = 1.0 + 2.0 * q_norm
        self.radius = min(self.r_e / denom, self.r_f / denom, 1.0 / denom)
        self.iso_basis = frozen(q0.range_isotropic().basis)

    def section(self, q: NormalProjection) -> JUnitary:
        return orbit_section(self, q)


def orbit_section(ctx: OrbitSectionContext, q: NormalProjection) -> JUnitary:
    """Local continuous cross section: a J-unitary ``s(Q)`` with
    ``s(Q) Q0 s(Q)# = Q`` for ``||Q - Q0|| < radius``.

    Assembled as ``E s1(E) E0 + F s2(F) F0 + (P + P#) V(Q) (P0 + P0#)``.
    """
    q0 = ctx.q0
    frame = q0.frame
    delta = spectral_norm(q.matrix - q0.matrix)
    if delta >= ctx.radius:
        raise PreconditionError(
            f"||Q - Q0|| = {delta:.6f} outside the section radius {ctx.radius:.6f}")
    w1 = selfadjoint_section(frame, q0.E, q.E).matrix
    w2 = selfadjoint_section(frame, q0.F, q.F).matrix
    link = neutral_link(q0, q, ctx.iso_basis)
    mid0 = q0.P + q0.p_sharp
    mid1 = q.P + q.p_sharp
    s = q.E @ w1 @ q0.E + q.F @ w2 @ q0.F + mid1 @ link @ mid0
    section = JUnitary(frame, s)
    resid = spectral_norm(section.conjugate(q0.matrix) - q.matrix)
    if resid > _CERT_SLACK * frame.tol * max(1.0, spectral_norm(q.matrix) ** 2):
        raise CertificationError(f"orbit section conjugation residual {resid:.3e}")
    return section


def same_orbit(q1: NormalProjection, q2: NormalProjection) -> bool:
    """Two projections lie in the same orbit iff their five-index profiles
    coincide exactly."""
    return q1.signature_profile() == q2.signature_profile()


def _j_orthonormal_basis(space: Subspace) -> tuple[np.ndarray, np.ndarray]:
    """Basis ``Y`` of a regular subspace with ``Y* J Y = diag(signs)``,
    positive columns first."""
    frame = space.frame
    if space.dim == 0:
        return np.zeros((frame.n, 0), dtype=np.complex128), np.zeros(0)
    gram = space.gram()
    vals, vecs = np.linalg.eigh((gram + gram.conj().T) / 2.0)
    order = np.argsort(-vals)
    vals = vals[order]
    vecs = vecs[:, order]
    tau = frame.rank_threshold(float(np.max(np.abs(vals))))
    if np.min(np.abs(vals)) <= tau:
        raise PreconditionError("J-orthonormalization requires a regular subspace")
    y = space.basis @ (vecs / np.sqrt(np.abs(vals)))
    return y, np.sign(vals)


def _signature_isometry(s1: Subspace, s2: Subspace) -> np.ndarray:
    """J-isometric isomorphism between regular subspaces of equal signature,
    extended by zero; sends one J-orthonormalized basis to the other."""
    frame = s1.frame
    y1, signs1 = _j_orthonormal_basis(s1)
    y2, signs2 = _j_orthonormal_basis(s2)
    if signs1.shape != signs2.shape or not np.array_equal(signs1, signs2):
        raise PreconditionError("subspaces have different signatures")
    if s1.dim == 0:
        return np.zeros((frame.n, frame.n), dtype=np.complex128)
    return y2 @ np.diag(signs1) @ y1.conj().T @ frame.j


def orbit_connector(q1: NormalProjection, q2: NormalProjection) -> JUnitary:
    """Global connector between any two projections sharing a profile.

    Splits both base points into their three regular blocks and glues
    signature-matched J-isometries on the E and F corners with a
    biorthogonal link between the neutral middles.
    """
    frame = q1.frame
    if not same_orbit(q1, q2):
        raise PreconditionError("projections lie in different orbits")
    w_e = _signature_isometry(q1.regular_part(), q2.regular_part())
    w_f = _signature_isometry(column_space(frame, q1.F), column_space(frame, q2.F))
    k0 = q1.isotropic_rank()
    if k0:
        s1 = q1.range_isotropic().basis
        s2 = q2.range_isotropic().basis
        t1 = q1.p_sharp @ frame.j @ s1
        t2 = q2.p_sharp @ frame.j @ s2
        w_d = _link_from_bases(frame, s1, t1, s2, t2)
    else:
        w_d = np.zeros((frame.n, frame.n), dtype=np.complex128)
    u = JUnitary(frame, w_e @ q1.E + w_f @ q1.F + w_d @ (q1.P + q1.p_sharp))
    resid = spectral_norm(u.conjugate(q1.matrix) - q2.matrix)
    if resid > _CERT_SLACK * frame.tol * max(1.0, spectral_norm(q2.matrix) ** 2):
        raise CertificationError(f"orbit connector residual {resid:.3e}")
    return u


@dataclass
class ConnectResult:
    """Outcome of composing local sections along a straight-line path."""

    ok: bool
    unitary: Optional[JUnitary]
    residual: float
    parameters: list
    step_residuals: list
    message: str

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "residual": self.residual,
            "parameters": list(self.parameters),
            "step_residuals": list(self.step_residuals),
            "message": self.message,
        }


def connect(q0: NormalProjection, q: NormalProjection,
            max_segments: int = 4096) -> ConnectResult:
    """Compose local sections along the straight segment from ``Q0`` to ``Q``.

    The parameter interval is halved until every consecutive pair is inside
    the local section radius.  Every intermediate point must itself be a
    J-normal projection; if the segment leaves the set, the failure is
    reported instead of guessed around.
    """
    frame = q0.frame

    def line_point(t: float):
        return (1.0 - t) * q0.matrix + t * q.matrix

    params = [0.0, 1.0]
    points = {0.0: q0, 1.0: q}
    index = 0
    while index < len(params) - 1:
        a, b = params[index], params[index + 1]
        qa, qb = points[a], points[b]
        radius = OrbitSectionContext(qa).radius
        if spectral_norm(qb.matrix - qa.matrix) < radius:
            index += 1
            continue
        if len(params) > max_segments:
            return ConnectResult(False, None, float("inf"), params, [],
                                 "subdivision limit exceeded")
        mid = (a + b) / 2.0
        try:
            points[mid] = NormalProjection(frame, line_point(mid))
        except PreconditionError as exc:
            return ConnectResult(
                False, None, float("inf"), params, [],
                f"intermediate point at t={mid} leaves the J-normal projections: {exc}")
        params.insert(index + 1, mid)

    total = frame.identity()
    step_residuals = []
    for a, b in zip(params[:-1], params[1:]):
        qa, qb = points[a], points[b]
        section = orbit_section(OrbitSectionContext(qa), qb)
        step_residuals.append(
            spectral_norm(section.conjugate(qa.matrix) - qb.matrix))
        total = section.matrix @ total
    unitary = JUnitary(frame, total)
    residual = spectral_norm(unitary.conjugate(q0.matrix) - q.matrix)
    return ConnectResult(True, unitary, residual, params, step_residuals,
                         f"connected with {len(params) - 1} section step(s)")


def commutant_projection(q0: NormalProjection, x) -> np.ndarray:
    """Projection of ``(X - X#)/2`` onto the commutant Lie algebra of ``Q0``.

    Evaluates ``E0 Y E0 + P0 Y P0 + P0# Y P0# + F0 Y F0`` on the
    J-antihermitian part ``Y``; the output is certified J-antihermitian,
    commuting with ``Q0`` and a fixed point of the map itself.
    """
    frame = q0.frame
    m = as_matrix(x, rows=frame.n, cols=frame.n, name="X")
    _, y = hermitian_split(frame, m)
    p0s = q0.p_sharp

    def apply(z):
        return q0.E @ z @ q0.E + q0.P @ z @ q0.P + p0s @ z @ p0s + q0.F @ z @ q0.F

    out = apply(y)
    scale = max(1.0, spectral_norm(m)) * max(1.0, spectral_norm(q0.matrix) ** 2)
    bound = _CERT_SLACK * frame.tol * scale
    if spectral_norm(out + j_adjoint(frame, out)) > bound:
        raise CertificationError("commutant projection output is not J-antihermitian")
    if spectral_norm(out @ q0.matrix - q0.matrix @ out) > bound:
        raise CertificationError("commutant projection output does not commute with Q0")
    if spectral_norm(apply(out) - out) > bound:
        raise CertificationError("commutant projection is not idempotent")
    return out


@dataclass(frozen=True)
class TangentVector:
    """Tangent vector ``XQ - QX`` of the orbit at ``Q``, with its generator."""

    base: NormalProjection
    generator: np.ndarray
    value: np.ndarray


def tangent_vector(q: NormalProjection, x) -> TangentVector:
    """Tangent vector of the orbit at ``Q`` along a J-antihermitian ``X``."""
    frame = q.frame
    m = as_matrix(x, rows=frame.n, cols=frame.n, name="X")
    if spectral_norm(m + j_adjoint(frame, m)) > frame.tol * max(1.0, spectral_norm(m)):
        raise PreconditionError("generator is not J-antihermitian")
    return TangentVector(q, frozen(m), frozen(m @ q.matrix - q.matrix @ m))


@dataclass(frozen=True)
class TangentSplit:
    """Splitting of a tangent vector into complemented pieces.

    ``selfadjoint_part`` is the off-diagonal block form over
    ``(R(E0), R(P0+P0#), R(F0))``; ``antihermitian_part`` the off-diagonal
    form over ``(R(R0), R(R0#), R(I - A0^2))`` with ``A0 = P0 - P0#`` and
    ``R0 = (A0^2 + A0)/2``.  The two complements are the block-diagonal
    remainders, which vanish for genuine tangent vectors.
    """

    tangent: np.ndarray
    selfadjoint_part: np.ndarray
    antihermitian_part: np.ndarray
    selfadjoint_complement: np.ndarray
    antihermitian_complement: np.ndarray
    a0: np.ndarray
    r0: np.ndarray


def tangent_split(q0: NormalProjection, x) -> TangentSplit:
    """Split ``XQ0 - Q0X`` into its complemented block pieces.

    Certifies the algebra of ``A0 = P0 - P0#`` and ``R0 = (A0^2 + A0)/2``:
    ``A0^3 = A0``, ``R0^2 = R0``, ``R0 + R0# = A0^2``, ``A0 R0 = R0`` and
    ``-R0# A0 = R0#``; the four returned pieces reconstruct the tangent
    vector exactly.
    """
    frame = q0.frame
    vec = tangent_vector(q0, x)
    t_self, t_anti = hermitian_split(frame, vec.value)

    mid = q0.P + q0.p_sharp
    diag_self = q0.E @ t_self @ q0.E + mid @ t_self @ mid + q0.F @ t_self @ q0.F

    a0 = q0.P - q0.p_sharp
    r0 = (a0 @ a0 + a0) / 2.0
    r0s = j_adjoint(frame, r0)
    pi3 = frame.identity() - a0 @ a0
    scale = max(1.0, spectral_norm(q0.matrix) ** 2)
    bound = _CERT_SLACK * frame.tol * scale
    checks = {
        "A0^3 = A0": spectral_norm(a0 @ a0 @ a0 - a0),
        "R0^2 = R0": spectral_norm(r0 @ r0 - r0),
        "R0 + R0# = A0^2": spectral_norm(r0 + r0s - a0 @ a0),
        "A0 R0 = R0": spectral_norm(a0 @ r0 - r0),
        "R0 A0 = R0": spectral_norm(r0 @ a0 - r0),
        "-R0# A0 = R0#": spectral_norm(r0s @ a0 + r0s),
        "-A0 R0# = R0#": spectral_norm(a0 @ r0s + r0s),
    }
    for label, resid in checks.items():
        if resid > bound:
            raise CertificationError(f"identity {label} failed: residual {resid:.3e}")
    diag_anti = r0 @ t_anti @ r0 + r0s @ t_anti @ r0s + pi3 @ t_anti @ pi3

    return TangentSplit(
        tangent=frozen(vec.value),
        selfadjoint_part=frozen(t_self - diag_self),
        antihermitian_part=frozen(t_anti - diag_anti),
        selfadjoint_complement=frozen(diag_self),
        antihermitian_complement=frozen(diag_anti),
        a0=frozen(a0),
        r0=frozen(r0),
    )


def submersion_differential(q: NormalProjection, x) -> np.ndarray:
    """Differential of ``Q -> Q Q#`` along the conjugation curve of ``X``.

    Returns ``(XQ - QX) Q# + Q (X Q# - Q# X)``, the derivative at ``t = 0``
    of ``exp(tX) Q Q# exp(-tX)``; certified J-selfadjoint and co-diagonal
    with respect to ``E = Q Q#``.
    """
    frame = q.frame
    vec = tangent_vector(q, x)
    m = vec.generator
    d = vec.value @ q.sharp + q.matrix @ (m @ q.sharp - q.sharp @ m)
    scale = max(1.0, spectral_norm(m)) * max(1.0, spectral_norm(q.matrix) ** 2)
    bound = _CERT_SLACK * frame.tol * scale
    if spectral_norm(d - j_adjoint(frame, d)) > bound:
        raise CertificationError("submersion differential is not J-selfadjoint")
    if spectral_norm(d @ q.E + q.E @ d - d) > bound:
        raise CertificationError("submersion differential is not co-diagonal for E")
    return d


def submersion_differential_fd(q: NormalProjection, x, step: float = 1e-5) -> np.ndarray:
    """Central finite difference of ``F(Q) = Q Q#`` along the conjugation
    curve; the independent oracle for :func:`submersion_differential`."""
    frame = q.frame
    m = as_matrix(x, rows=frame.n, cols=frame.n, name="X")

    def value(t: float) -> np.ndarray:
        g = scipy.linalg.expm(t * m)
        qt = g @ q.matrix @ scipy.linalg.expm(-t * m)
        return qt @ j_adjoint(frame, qt)

    return (value(step) - value(-step)) / (2.0 * step)
