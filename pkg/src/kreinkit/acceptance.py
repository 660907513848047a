"""Acceptance suite: the ten desk-scale verification criteria.

Each criterion runs a seeded property batch at its stated tolerance and
returns a structured result; :func:`run_selftest` executes them all, checks
the global wall-clock budget and bit-for-bit reproducibility, and powers both
the ``selftest`` CLI command and the pytest acceptance module.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .core import KreinFrame, j_adjoint, spectral_norm
from .fixed_range import FixedRangeFamily, oblique_projection, oblique_projection_direct
from .generate import (feasible_profiles, make_rng, perturb_within_radius,
                       random_complex, random_idempotent, random_j_antihermitian,
                       random_j_unitary, random_neutral_dual_pair,
                       random_normal_projection, random_pseudo_regular)
from .orbits import (OrbitSectionContext, biorthogonal_basis, commutant_projection,
                     kato_gap, orbit_connector, orbit_section, same_orbit,
                     submersion_differential, submersion_differential_fd)
from .projections import NormalProjection, normal_family_member
from .subspaces import Subspace, principal_angles
from .unitary import (JUnitary, ando_block_unitary, angular_of_image,
                      connectivity_path_many, log_near_identity)

__all__ = ["CriterionResult", "CRITERIA", "run_criterion", "run_selftest"]

_CORPUS_FRAMES = [KreinFrame(1, 1), KreinFrame(2, 1), KreinFrame(2, 2), KreinFrame(3, 3)]
_SECTION_FRAMES = [KreinFrame(1, 1), KreinFrame(2, 1), KreinFrame(2, 2)]


@dataclass
class CriterionResult:
    cid: str
    description: str
    passed: bool
    elapsed: float
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"id": self.cid, "description": self.description,
                "passed": self.passed, "elapsed_seconds": self.elapsed,
                "details": self.details}


def _corpus(total: int = 500) -> list[NormalProjection]:
    """Seeded corpus of J-normal projections cycling through every feasible
    five-index profile of the four corpus frames."""
    slots = []
    for frame in _CORPUS_FRAMES:
        slots.extend((frame, prof) for prof in feasible_profiles(frame))
    out = []
    seed = 10_000
    while len(out) < total:
        frame, prof = slots[len(out) % len(slots)]
        out.append(random_normal_projection(frame, seed, prof,
                                            spread=0.3 + 0.4 * ((seed % 3) / 2.0)))
        seed += 1
    return out

_CORPUS_CACHE: list | None = None


def _shared_corpus() -> list[NormalProjection]:
    global _CORPUS_CACHE
    if _CORPUS_CACHE is None:
        _CORPUS_CACHE = _corpus()
    return _CORPUS_CACHE


def criterion_1() -> CriterionResult:
    """Decomposition identities on 500 generated projections (<= 1e-8)."""
    start = time.perf_counter()
    tol = 1e-8
    worst = 0.0
    corpus = _shared_corpus()
    for q in corpus:
        e, p, f = q.E, q.P, q.F
        ps = q.p_sharp
        eye = q.frame.identity()
        residuals = [
            spectral_norm(q.matrix - (e + p)),
            spectral_norm((eye - q.matrix) - (f + ps)),
            spectral_norm(p @ ps), spectral_norm(ps @ p),
            spectral_norm(e - j_adjoint(q.frame, e)), spectral_norm(e @ e - e),
            spectral_norm(e @ p), spectral_norm(p @ e),
            spectral_norm(e @ ps), spectral_norm(ps @ e),
            spectral_norm(f @ p), spectral_norm(p @ f),
            spectral_norm(f @ ps), spectral_norm(ps @ f),
        ]
        worst = max(worst, max(residuals))
    elapsed = time.perf_counter() - start
    passed = worst <= tol and elapsed < 5.0
    return CriterionResult(
        "1", "decomposition identities Q = E + P on 500 projections",
        passed, elapsed,
        {"projections": len(corpus), "max_residual": worst, "tolerance": tol,
         "runtime_budget_seconds": 5.0})


def criterion_2() -> CriterionResult:
    """Three-block J-orthogonal splitting: rank sum and cross Grams (<= 1e-8)."""
    start = time.perf_counter()
    tol = 1e-8
    worst = 0.0
    rank_failures = 0
    corpus = _shared_corpus()
    for q in corpus:
        frame = q.frame
        from .subspaces import column_space
        blocks = [column_space(frame, q.E),
                  column_space(frame, q.P + q.p_sharp),
                  column_space(frame, q.F)]
        if sum(b.dim for b in blocks) != frame.n:
            rank_failures += 1
            continue
        for i in range(3):
            for k in range(i + 1, 3):
                cross = blocks[i].basis.conj().T @ frame.j @ blocks[k].basis
                worst = max(worst, spectral_norm(cross))
    elapsed = time.perf_counter() - start
    passed = rank_failures == 0 and worst <= tol
    return CriterionResult(
        "2", "three-block regular splitting of the space, same corpus",
        passed, elapsed,
        {"projections": len(corpus), "rank_failures": rank_failures,
         "max_cross_gram": worst, "tolerance": tol})


def criterion_3() -> CriterionResult:
    """Biorthogonal bases of 200 neutral dual pairs (<= 1e-8)."""
    start = time.perf_counter()
    tol = 1e-8
    frames = [KreinFrame(1, 1), KreinFrame(2, 2), KreinFrame(3, 3), KreinFrame(4, 3)]
    worst = 0.0
    worst_condition = 0.0
    count = 0
    seed = 20_000
    while count < 200:
        frame = frames[count % len(frames)]
        dim = 1 + (count // len(frames)) % min(frame.p, frame.q)
        s, t = random_neutral_dual_pair(frame, seed, dim,
                                        spread=0.2 + 0.5 * ((count % 5) / 4.0))
        seed += 1
        basis = biorthogonal_basis(s, t)
        pairing = basis.conj().T @ frame.j @ s.basis
        worst = max(worst, spectral_norm(pairing - np.eye(dim)))
        sv = np.linalg.svd(basis, compute_uv=False)
        worst_condition = max(worst_condition, float(sv[0] / sv[-1]))
        count += 1
    elapsed = time.perf_counter() - start
    passed = bool(worst <= tol and np.isfinite(worst_condition))
    return CriterionResult(
        "3", "biorthogonality [s_i, t_j] = delta on 200 neutral dual pairs",
        passed, elapsed,
        {"pairs": count, "max_pairing_residual": worst,
         "max_condition_number": worst_condition, "tolerance": tol})


def criterion_4() -> CriterionResult:
    """Generate-and-recover local sections: 100 perturbations per base profile."""
    start = time.perf_counter()
    conj_tol, unit_tol = 1e-6, 1e-8
    worst_conj = 0.0
    worst_unit = 0.0
    runs = 0
    base_seed = 30_000
    for frame in _SECTION_FRAMES:
        for prof in feasible_profiles(frame):
            q0 = random_normal_projection(frame, base_seed, prof)
            base_seed += 1
            ctx = OrbitSectionContext(q0)
            for trial in range(100):
                q = perturb_within_radius(q0, base_seed + trial,
                                          fraction=0.2 + 0.75 * (trial / 99.0))
                section = orbit_section(ctx, q)
                worst_conj = max(worst_conj, spectral_norm(
                    section.conjugate(q0.matrix) - q.matrix))
                worst_unit = max(worst_unit, section.unitarity_residual())
                runs += 1
            base_seed += 100
    elapsed = time.perf_counter() - start
    passed = worst_conj <= conj_tol and worst_unit <= unit_tol and elapsed < 20.0
    return CriterionResult(
        "4", "local cross section generate-and-recover suite",
        passed, elapsed,
        {"sections": runs, "base_profiles": runs // 100,
         "max_conjugation_residual": worst_conj,
         "max_j_unitarity_residual": worst_unit,
         "tolerances": {"conjugation": conj_tol, "j_unitarity": unit_tol},
         "runtime_budget_seconds": 20.0})


def criterion_5() -> CriterionResult:
    """Orbit classification: conjugation invariance, separation, connectors."""
    start = time.perf_counter()
    conj_exact_failures = 0
    for idx in range(50):
        frame = _CORPUS_FRAMES[idx % len(_CORPUS_FRAMES)]
        profs = feasible_profiles(frame)
        q = random_normal_projection(frame, 40_000 + idx, profs[idx % len(profs)])
        u = random_j_unitary(frame, 41_000 + idx, spread=0.2 + 0.01 * idx)
        moved = NormalProjection(frame, u.conjugate(q.matrix))
        if not same_orbit(q, moved):
            conj_exact_failures += 1

    frame = KreinFrame(2, 2)
    profs = feasible_profiles(frame)
    reps = [random_normal_projection(frame, 42_000 + i, prof)
            for i, prof in enumerate(profs)]
    separation_failures = 0
    for i in range(len(reps)):
        for k in range(i + 1, len(reps)):
            if same_orbit(reps[i], reps[k]):
                separation_failures += 1

    connector_tol = 1e-6
    worst_connector = 0.0
    for i, prof in enumerate(profs):
        q1 = random_normal_projection(frame, 43_000 + i, prof)
        q2 = random_normal_projection(frame, 44_000 + i, prof, spread=0.55)
        u = orbit_connector(q1, q2)
        worst_connector = max(worst_connector, spectral_norm(
            u.conjugate(q1.matrix) - q2.matrix))
    elapsed = time.perf_counter() - start
    passed = (conj_exact_failures == 0 and separation_failures == 0
              and worst_connector <= connector_tol)
    return CriterionResult(
        "5", "orbit classification by the five indices and connectors",
        passed, elapsed,
        {"conjugation_failures": conj_exact_failures,
         "profile_pairs_tested": len(profs) * (len(profs) - 1) // 2,
         "separation_failures": separation_failures,
         "max_connector_residual": worst_connector,
         "connector_tolerance": connector_tol})


def criterion_6() -> CriterionResult:
    """J-unitary group: factorization round trip, path, exp/log inversion."""
    start = time.perf_counter()
    rt_tol, unit_tol, log_tol, anti_tol = 1e-8, 1e-8, 1e-8, 1e-9
    worst_rt = worst_unit = worst_end = worst_log = worst_anti = 0.0
    ts = np.linspace(0.0, 1.0, 50)
    for idx in range(200):
        frame = _CORPUS_FRAMES[idx % len(_CORPUS_FRAMES)]
        spread = (0.0, 0.3, 0.6, 0.85)[idx % 4]
        u = random_j_unitary(frame, 50_000 + idx, spread=spread)
        k, vp, vm = angular_of_image(u)
        rebuilt = ando_block_unitary(frame, k, vp, vm)
        worst_rt = max(worst_rt, spectral_norm(rebuilt.matrix - u.matrix))
        points = connectivity_path_many(u, ts)
        worst_unit = max(worst_unit,
                         max(point.unitarity_residual() for point in points))
        worst_end = max(worst_end,
                        spectral_norm(points[0].matrix - frame.identity()),
                        spectral_norm(points[-1].matrix - u.matrix))
    for idx in range(50):
        frame = _CORPUS_FRAMES[idx % len(_CORPUS_FRAMES)]
        x = random_j_antihermitian(frame, 51_000 + idx, scale=1.0)
        scale = 1.0
        u_mat = scipy.linalg.expm(scale * x)
        while spectral_norm(u_mat - frame.identity()) > 0.9:
            scale /= 2.0
            u_mat = scipy.linalg.expm(scale * x)
        u = JUnitary(frame, u_mat)
        logged = log_near_identity(u)
        worst_log = max(worst_log,
                        spectral_norm(scipy.linalg.expm(logged) - u.matrix))
        worst_anti = max(worst_anti,
                         spectral_norm(logged + j_adjoint(frame, logged)))
    elapsed = time.perf_counter() - start
    passed = (worst_rt <= rt_tol and worst_unit <= unit_tol
              and worst_end <= unit_tol and worst_log <= log_tol
              and worst_anti <= anti_tol)
    return CriterionResult(
        "6", "block factorization, connectivity path and principal logarithm",
        passed, elapsed,
        {"unitaries": 200, "path_samples": 50,
         "max_factorization_roundtrip": worst_rt,
         "max_path_unitarity": worst_unit, "max_endpoint_residual": worst_end,
         "max_exp_log_residual": worst_log,
         "max_log_antihermitian_residual": worst_anti})


def criterion_7() -> CriterionResult:
    """Range-projection gap bound on 500 random idempotent pairs (<= 1e-10)."""
    start = time.perf_counter()
    tol = 1e-10
    frames = [KreinFrame(2, 2), KreinFrame(3, 3), KreinFrame(4, 4), KreinFrame(6, 6)]
    worst_excess = -np.inf
    for idx in range(500):
        frame = frames[idx % len(frames)]
        e1 = random_idempotent(frame, 60_000 + 2 * idx)
        e2 = random_idempotent(frame, 60_001 + 2 * idx)
        gap, bound = kato_gap(frame, e1, e2)
        worst_excess = max(worst_excess, gap - bound)
    elapsed = time.perf_counter() - start
    passed = worst_excess <= tol
    return CriterionResult(
        "7", "projection gap bounded by idempotent distance on 500 pairs",
        passed, elapsed,
        {"pairs": 500, "max_gap_minus_bound": worst_excess, "tolerance": tol})


def criterion_8() -> CriterionResult:
    """Tangent machinery: commutant projection, block identities, submersion."""
    start = time.perf_counter()
    comm_tol, ident_tol, fd_tol = 1e-9, 1e-10, 1e-6
    worst_comm = worst_ident = worst_fd = 0.0
    min_norm = np.inf
    for idx in range(100):
        frame = _CORPUS_FRAMES[idx % len(_CORPUS_FRAMES)]
        # profiles with 0 != E != I, so the differential is generically nonzero
        profs = [prof for prof in feasible_profiles(frame)
                 if prof.kp + prof.km >= 1 and prof.ckp + prof.ckm + prof.k0 >= 1]
        q = random_normal_projection(frame, 70_000 + idx, profs[idx % len(profs)])
        x = random_j_antihermitian(frame, 71_000 + idx)

        y = commutant_projection(q, x)
        p0s = q.p_sharp
        reapplied = (q.E @ y @ q.E + q.P @ y @ q.P + p0s @ y @ p0s + q.F @ y @ q.F)
        worst_comm = max(
            worst_comm,
            spectral_norm(y @ q.matrix - q.matrix @ y),
            spectral_norm(y + j_adjoint(frame, y)),
            spectral_norm(reapplied - y))

        a0 = q.P - p0s
        r0 = (a0 @ a0 + a0) / 2.0
        r0s = j_adjoint(frame, r0)
        worst_ident = max(
            worst_ident,
            spectral_norm(a0 @ a0 @ a0 - a0),
            spectral_norm(r0 @ r0 - r0),
            spectral_norm(r0 + r0s - a0 @ a0))

        d = submersion_differential(q, x)
        d_fd = submersion_differential_fd(q, x, step=1e-5)
        norm = spectral_norm(d)
        min_norm = min(min_norm, norm)
        worst_fd = max(worst_fd, spectral_norm(d - d_fd) / norm)
    elapsed = time.perf_counter() - start
    passed = (worst_comm <= comm_tol and worst_ident <= ident_tol
              and worst_fd <= fd_tol and min_norm > 1e-6)
    return CriterionResult(
        "8", "commutant projection, block identities and submersion differential",
        passed, elapsed,
        {"trials": 100, "max_commutant_residual": worst_comm,
         "max_identity_residual": worst_ident,
         "max_fd_relative_error": worst_fd,
         "min_differential_norm": min_norm,
         "tolerances": {"commutant": comm_tol, "identities": ident_tol,
                        "finite_difference_relative": fd_tol}})


def _random_family_member(family: FixedRangeFamily, seed: int) -> NormalProjection:
    """Family member with a random deck and random admissible parameters."""
    rng = make_rng(seed)
    space = family.space
    iso, mid = family.isotropic, space.regular_complement()
    frame = family.frame
    k0, k2 = iso.dim, frame.n - space.dim
    theta = 0.8 * random_complex(rng, k0, mid.dim)
    deck = Subspace.from_span(frame, mid.basis + iso.basis @ theta)
    g = random_complex(rng, k0, k0)
    skew = (g - g.conj().T) / 2.0
    a_block = iso.basis.conj().T @ frame.j @ space.orthogonal_complement().basis
    kernel_map = random_complex(rng, k0, k2) @ (np.eye(k2) - a_block.conj().T @ a_block)
    return normal_family_member(space, deck, skew=skew, kernel_map=kernel_map)


def criterion_9() -> CriterionResult:
    """Fixed-range suite: oblique formula, transitivity, covering round trips."""
    start = time.perf_counter()
    oblique_tol, conn_tol, angle_tol = 1e-9, 1e-6, 1e-6
    worst_oblique = 0.0
    for idx in range(100):
        frame = KreinFrame(3, 3) if idx % 2 else KreinFrame(2, 2)
        rng = make_rng(80_000 + idx)
        dims = (2, 2) if frame.n == 6 else (1, 2)
        t1 = Subspace.from_span(frame, random_complex(rng, frame.n, dims[0]))
        t2 = Subspace.from_span(frame, random_complex(rng, frame.n, dims[1]))
        worst_oblique = max(worst_oblique, spectral_norm(
            oblique_projection(t1, t2) - oblique_projection_direct(t1, t2)))

    families = []
    fam_specs = [
        (KreinFrame(2, 1), (1, 0, 1)),
        (KreinFrame(2, 2), (1, 1, 1)),
        (KreinFrame(2, 2), (0, 0, 2)),
        (KreinFrame(3, 3), (1, 1, 2)),
    ]
    for seed_offset, (frame, prof) in enumerate(fam_specs):
        space = random_pseudo_regular(frame, 81_000 + seed_offset, prof)
        families.append(FixedRangeFamily(space))

    worst_conn = 0.0
    worst_invariance = 0.0
    for idx in range(100):
        family = families[idx % len(families)]
        q1 = _random_family_member(family, 82_000 + 2 * idx)
        q2 = _random_family_member(family, 82_001 + 2 * idx)
        u = family.global_connector(q1, q2)
        worst_conn = max(worst_conn, spectral_norm(
            u.conjugate(q1.matrix) - q2.matrix))
        from .subspaces import column_space
        moved = column_space(family.frame, u.matrix @ family.space.basis)
        worst_invariance = max(worst_invariance, float(np.max(
            principal_angles(moved, family.space), initial=0.0)))

    worst_cover = 0.0
    worst_deck_angle = 0.0
    for idx in range(40):
        family = families[idx % len(families)]
        q = _random_family_member(family, 83_000 + idx)
        deck = family.deck_of(q)
        collapsed = family.covering_map(q)
        lifted = family.covering_lift(deck, collapsed)
        worst_cover = max(worst_cover, spectral_norm(lifted.matrix - q.matrix))
        base_member = family.covering_lift(family.base_complement,
                                           family.base)
        worst_cover = max(worst_cover, spectral_norm(
            family.covering_map(base_member).matrix - family.base.matrix))
        reselected = family.deck_of(family.deck_selection(deck))
        worst_deck_angle = max(worst_deck_angle, float(np.max(
            principal_angles(reselected, deck), initial=0.0)))
    elapsed = time.perf_counter() - start
    passed = (worst_oblique <= oblique_tol and worst_conn <= conn_tol
              and worst_invariance <= np.sqrt(1e-9)
              and worst_cover <= conn_tol and worst_deck_angle <= angle_tol)
    return CriterionResult(
        "9", "fixed-range family: oblique formula, transitivity, covering",
        passed, elapsed,
        {"oblique_pairs": 100, "connector_pairs": 100, "covering_trials": 40,
         "max_oblique_mismatch": worst_oblique,
         "max_connector_residual": worst_conn,
         "max_range_invariance_angle": worst_invariance,
         "max_covering_roundtrip": worst_cover,
         "max_deck_reselection_angle": worst_deck_angle})


def _reproducibility_check() -> bool:
    frame = KreinFrame(2, 2)
    a = random_j_unitary(frame, 99_123, spread=0.4).matrix
    b = random_j_unitary(frame, 99_123, spread=0.4).matrix
    if not np.array_equal(a, b):
        return False
    qa = random_normal_projection(frame, 99_321, (1, 1, 1, 0, 0)).matrix
    qb = random_normal_projection(frame, 99_321, (1, 1, 1, 0, 0)).matrix
    if not np.array_equal(qa, qb):
        return False
    sa = random_pseudo_regular(frame, 99_222, (1, 0, 1)).basis
    sb = random_pseudo_regular(frame, 99_222, (1, 0, 1)).basis
    return np.array_equal(sa, sb)


CRITERIA = {
    "1": criterion_1,
    "2": criterion_2,
    "3": criterion_3,
    "4": criterion_4,
    "5": criterion_5,
    "6": criterion_6,
    "7": criterion_7,
    "8": criterion_8,
    "9": criterion_9,
}


def run_criterion(cid: str) -> CriterionResult:
    return CRITERIA[cid]()


def run_selftest(criteria=None) -> dict:
    """Run the acceptance criteria (all by default) plus the global budget
    and reproducibility criterion; returns a JSON-ready report."""
    started = time.perf_counter()
    wanted = sorted(CRITERIA) if criteria is None else sorted(set(criteria))
    unknown = [cid for cid in wanted if cid not in CRITERIA and cid != "10"]
    if unknown:
        from .errors import SchemaError
        raise SchemaError(f"unknown criteria: {', '.join(unknown)}")
    results = [CRITERIA[cid]() for cid in wanted if cid in CRITERIA]

    include_10 = criteria is None or "10" in set(criteria)
    if include_10:
        t10 = time.perf_counter()
        reproducible = _reproducibility_check()
        total = time.perf_counter() - started
        results.append(CriterionResult(
            "10", "selftest wall clock under 60 s, seeded and reproducible",
            total < 60.0 and reproducible,
            time.perf_counter() - t10,
            {"total_elapsed_seconds": total, "budget_seconds": 60.0,
             "bitwise_reproducible": reproducible,
             "criteria_included": wanted}))

    return {
        "criteria": [r.as_dict() for r in results],
        "all_passed": all(r.passed for r in results),
        "elapsed_seconds": time.perf_counter() - started,
    }
