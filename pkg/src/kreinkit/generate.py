"""Seeded, reproducible generators of test instances with prescribed invariants.

All randomness flows through numpy's Philox counter-based bit generator with
the key layout ``(seed, stream)``; identical arguments reproduce identical
arrays bit for bit.  Every generator certifies its own output (classification,
signature, or profile) before returning it.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .core import KreinFrame, j_adjoint, spectral_norm
from .errors import CertificationError, PreconditionError
from .orbits import OrbitSectionContext
from .projections import NormalProjection
from .subspaces import SignatureProfile, Subspace
from .unitary import JUnitary, ando_block_unitary

__all__ = [
    "make_rng",
    "random_complex",
    "haar_unitary",
    "random_j_unitary",
    "random_j_antihermitian",
    "random_pseudo_regular",
    "random_normal_projection",
    "random_neutral_dual_pair",
    "random_idempotent",
    "perturb_within_radius",
    "feasible_profiles",
]


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Philox-keyed generator; the key words are ``(seed, stream)``."""
    key = np.array([np.uint64(seed & 0xFFFFFFFFFFFFFFFF),
                    np.uint64(stream & 0xFFFFFFFFFFFFFFFF)], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def random_complex(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    """Standard complex Gaussian matrix."""
    return (rng.standard_normal((rows, cols))
            + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2.0)


def haar_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar-like unitary via QR with the usual phase fix of the R diagonal."""
    if dim == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    z = random_complex(rng, dim, dim)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q @ np.diag(d / np.abs(d))


def _contraction(rng: np.random.Generator, rows: int, cols: int, bound: float) -> np.ndarray:
    g = random_complex(rng, rows, cols)
    norm = spectral_norm(g)
    if norm == 0.0:
        return g
    return bound * g / max(1.0, norm)


def _random_j_unitary(frame: KreinFrame, rng: np.random.Generator,
                      spread: float) -> JUnitary:
    k = _contraction(rng, frame.q, frame.p, spread)
    return ando_block_unitary(frame, k, haar_unitary(rng, frame.p),
                              haar_unitary(rng, frame.q))


def random_j_unitary(frame: KreinFrame, seed: int, spread: float = 0.5) -> JUnitary:
    """Random J-unitary with angular contraction of norm at most ``spread``."""
    if not (0.0 <= spread < 1.0):
        raise PreconditionError(f"spread must lie in [0, 1), got {spread}")
    return _random_j_unitary(frame, make_rng(seed), spread)


def random_j_antihermitian(frame: KreinFrame, seed: int, scale: float = 1.0) -> np.ndarray:
    """Random element of the J-antihermitian Lie algebra, normalized to ``scale``."""
    return _j_antihermitian(frame, make_rng(seed), scale)


def _j_antihermitian(frame: KreinFrame, rng: np.random.Generator,
                     scale: float) -> np.ndarray:
    g = random_complex(rng, frame.n, frame.n)
    x = (g - j_adjoint(frame, g)) / 2.0
    norm = spectral_norm(x)
    return x if norm == 0.0 else scale * x / norm


def _neutral_pair_columns(frame: KreinFrame, plus_idx, minus_idx) -> tuple[np.ndarray, np.ndarray]:
    """Neutral vectors ``(e+ ± e-)/sqrt(2)`` over paired axes."""
    n = frame.n
    s = np.zeros((n, len(plus_idx)), dtype=np.complex128)
    t = np.zeros((n, len(plus_idx)), dtype=np.complex128)
    for col, (i, j) in enumerate(zip(plus_idx, minus_idx)):
        s[i, col] = s[j, col] = 1.0 / np.sqrt(2.0)
        t[i, col] = 1.0 / np.sqrt(2.0)
        t[j, col] = -1.0 / np.sqrt(2.0)
    return s, t


def random_pseudo_regular(frame: KreinFrame, seed: int, profile,
                          spread: float = 0.5) -> Subspace:
    """Subspace with exactly the requested signature ``(kp, km, k0)``.

    Built canonically from coordinate axes and neutral diagonals, then moved
    by a random J-unitary (which preserves all indices).
    """
    kp, km, k0 = (int(v) for v in profile)
    if min(kp, km, k0) < 0 or kp > frame.p or km > frame.q \
            or k0 > min(frame.p - kp, frame.q - km):
        raise PreconditionError(f"infeasible signature {profile} for frame "
                                f"(p={frame.p}, q={frame.q})")
    rng = make_rng(seed)
    cols = []
    eye = np.eye(frame.n, dtype=np.complex128)
    cols.extend(eye[:, i] for i in range(kp))
    cols.extend(eye[:, frame.p + i] for i in range(km))
    plus_idx = [kp + i for i in range(k0)]
    minus_idx = [frame.p + km + i for i in range(k0)]
    neutral, _ = _neutral_pair_columns(frame, plus_idx, minus_idx)
    basis = np.column_stack(cols) if cols else np.zeros((frame.n, 0))
    basis = np.hstack([basis, neutral])
    mover = _random_j_unitary(frame, rng, spread)
    moved = Subspace.from_span(frame, mover.matrix @ basis)
    if moved.signature() != (kp, km, k0):
        raise CertificationError(
            f"generator produced signature {moved.signature()}, wanted {(kp, km, k0)}")
    return moved


def feasible_profiles(frame: KreinFrame) -> list[SignatureProfile]:
    """All realizable five-index profiles: ``kp + ckp + k0 = p`` and
    ``km + ckm + k0 = q``."""
    out = []
    for k0 in range(min(frame.p, frame.q) + 1):
        for kp in range(frame.p - k0 + 1):
            ckp = frame.p - k0 - kp
            for km in range(frame.q - k0 + 1):
                ckm = frame.q - k0 - km
                out.append(SignatureProfile(kp, km, k0, ckp, ckm))
    return out


def random_normal_projection(frame: KreinFrame, seed: int, profile,
                             spread: float = 0.5) -> NormalProjection:
    """J-normal projection realizing a feasible five-index profile.

    The canonical seed projection places the regular range part on coordinate
    axes, one 2x2 neutral block per isotropic dimension and the cosignature
    axes in the kernel; a random J-unitary conjugation then moves it while
    preserving the profile, which is re-certified on the output.
    """
    if isinstance(profile, SignatureProfile):
        prof = profile
    else:
        prof = SignatureProfile(*(int(v) for v in profile))
    if min(prof.astuple()) < 0 \
            or prof.kp + prof.ckp + prof.k0 != frame.p \
            or prof.km + prof.ckm + prof.k0 != frame.q:
        raise PreconditionError(
            f"infeasible profile {prof.astuple()} for frame (p={frame.p}, q={frame.q}); "
            f"kp+ckp+k0 must equal p and km+ckm+k0 must equal q")
    rng = make_rng(seed)
    n = frame.n
    canon = np.zeros((n, n), dtype=np.complex128)
    for i in range(prof.kp):
        canon[i, i] = 1.0
    for i in range(prof.km):
        canon[frame.p + i, frame.p + i] = 1.0
    for i in range(prof.k0):
        u = prof.kp + i
        w = frame.p + prof.km + i
        canon[u, u] = canon[u, w] = canon[w, u] = canon[w, w] = 0.5
    mover = _random_j_unitary(frame, rng, spread)
    q = NormalProjection(frame, mover.conjugate(canon))
    if q.signature_profile() != prof:
        raise CertificationError(
            f"generator produced profile {q.signature_profile().astuple()}, "
            f"wanted {prof.astuple()}")
    return q


def random_neutral_dual_pair(frame: KreinFrame, seed: int, dim: int,
                             spread: float = 0.5) -> tuple[Subspace, Subspace]:
    """Neutral dual pair ``(S, T)`` of the given dimension, moved by a common
    J-unitary (duality is conjugation invariant)."""
    if dim < 0 or dim > min(frame.p, frame.q):
        raise PreconditionError(f"no neutral subspace of dimension {dim} in "
                                f"(p={frame.p}, q={frame.q})")
    rng = make_rng(seed)
    s, t = _neutral_pair_columns(frame, list(range(dim)),
                                 [frame.p + i for i in range(dim)])
    mover = _random_j_unitary(frame, rng, spread)
    return (Subspace.from_span(frame, mover.matrix @ s),
            Subspace.from_span(frame, mover.matrix @ t))


def random_idempotent(frame: KreinFrame, seed: int, rank: int | None = None,
                      max_condition: float = 20.0) -> np.ndarray:
    """Random (generally oblique) idempotent with moderate conditioning."""
    rng = make_rng(seed)
    n = frame.n
    if rank is None:
        rank = int(rng.integers(0, n + 1))
    if rank == 0:
        return np.zeros((n, n), dtype=np.complex128)
    if rank == n:
        return np.eye(n, dtype=np.complex128)
    while True:
        b = np.linalg.qr(random_complex(rng, n, rank))[0]
        z = random_complex(rng, n, rank)
        pairing = z.conj().T @ b
        sv = np.linalg.svd(pairing, compute_uv=False)
        if sv[-1] > 0 and sv[0] / sv[-1] <= max_condition:
            return b @ np.linalg.solve(pairing, z.conj().T)


def perturb_within_radius(q0: NormalProjection, seed: int,
                          fraction: float = 0.5) -> NormalProjection:
    """Conjugate ``Q0`` by ``exp(sX)`` with ``s`` bisected until
    ``||Q - Q0|| <= fraction * radius`` of the local section at ``Q0``.

    Stays in the orbit by construction.
    """
    if not (0.0 < fraction < 1.0):
        raise PreconditionError(f"fraction must lie in (0, 1), got {fraction}")
    frame = q0.frame
    rng = make_rng(seed)
    x = _j_antihermitian(frame, rng, 1.0)
    target = fraction * OrbitSectionContext(q0).radius
    # first-order step estimate ||Q(s) - Q0|| ~ s ||[X, Q0]||, then halve
    rate = spectral_norm(x @ q0.matrix - q0.matrix @ x)
    s = 1.0 if rate <= target else target / rate
    for _ in range(200):
        g = scipy.linalg.expm(s * x)
        ginv = scipy.linalg.expm(-s * x)
        candidate = g @ q0.matrix @ ginv
        if spectral_norm(candidate - q0.matrix) <= target:
            return NormalProjection(frame, candidate)
        s /= 2.0
    raise CertificationError("bisection failed to reach the perturbation target")
