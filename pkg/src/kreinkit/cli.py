"""Command-line front end.

Every command reads operators/subspaces from JSON files, runs one public
operation and prints a machine-readable report (schema ``krein-kit/1``) on
stdout.  Exit codes: 0 success, 1 precondition or certification failure,
2 I/O or schema error.  Reports are valid JSON on every exit path.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import acceptance
from .core import KreinFrame, classify, spectral_norm
from .errors import CertificationError, KreinKitError, PreconditionError, SchemaError
from .fixed_range import FixedRangeFamily
from .generate import (perturb_within_radius, random_j_unitary,
                       random_normal_projection, random_pseudo_regular)
from .orbits import OrbitSectionContext, connect, orbit_connector, orbit_section
from .projections import NormalProjection
from .serialize import (SCHEMA, frame_from_json, frame_to_json, load_json,
                        matrix_from_json, matrix_to_json, subspace_from_json,
                        subspace_to_json)
from .subspaces import Subspace
from .unitary import JUnitary, connectivity_path_many, log_near_identity

__all__ = ["main", "entrypoint"]


class _Parser(argparse.ArgumentParser):
    """Argument parser that reports usage problems as schema errors."""

    def error(self, message):
        raise SchemaError(message)


def _load_frame(args) -> KreinFrame:
    if args.frame:
        frame = frame_from_json(load_json(args.frame))
    else:
        raise SchemaError("--frame is required for this command")
    if args.tol is not None:
        frame = KreinFrame(frame.p, frame.q, tol=args.tol)
    return frame


def _load_matrix(path, name: str) -> np.ndarray:
    return matrix_from_json(load_json(path), name=name)


def _load_projection(frame: KreinFrame, path: str) -> NormalProjection:
    return NormalProjection(frame, _load_matrix(path, "Q"))


def _cmd_classify(args) -> dict:
    frame = _load_frame(args)
    matrix = _load_matrix(args.input, "operator")
    flags = classify(frame, matrix)
    return {"frame": frame_to_json(frame), "classification": flags.as_dict()}


def _cmd_decompose(args) -> dict:
    frame = _load_frame(args)
    q = _load_projection(frame, args.input)
    e, p, f = q.decompose()
    return {
        "frame": frame_to_json(frame),
        "E": matrix_to_json(e),
        "P": matrix_to_json(p),
        "F": matrix_to_json(f),
        "residuals": {
            "sum": spectral_norm(e + p - q.matrix),
            "pp_sharp": spectral_norm(p @ q.p_sharp),
            "p_sharp_p": spectral_norm(q.p_sharp @ p),
        },
    }


def _cmd_signature(args) -> dict:
    frame = _load_frame(args)
    space = subspace_from_json(frame, load_json(args.input))
    kp, km, k0 = space.signature()
    ckp, ckm = space.cosignature()
    return {
        "frame": frame_to_json(frame),
        "dim": space.dim,
        "signature": {"kp": kp, "km": km, "k0": k0, "ckp": ckp, "ckm": ckm},
        "is_regular": space.is_regular(),
        "is_pseudo_regular": space.is_pseudo_regular(),
    }


def _cmd_profile(args) -> dict:
    frame = _load_frame(args)
    q = _load_projection(frame, args.input)
    return {
        "frame": frame_to_json(frame),
        "profile": q.signature_profile().as_dict(),
        "isotropic_rank": q.isotropic_rank(),
    }


def _cmd_section(args) -> dict:
    frame = _load_frame(args)
    q0 = _load_projection(frame, args.q0)
    q = _load_projection(frame, args.q)
    ctx = OrbitSectionContext(q0)
    section = orbit_section(ctx, q)
    return {
        "frame": frame_to_json(frame),
        "radius": ctx.radius,
        "unitary": matrix_to_json(section.matrix),
        "residuals": {
            "conjugation": spectral_norm(section.conjugate(q0.matrix) - q.matrix),
            "j_unitarity": section.unitarity_residual(),
        },
    }


def _cmd_connect(args) -> dict:
    frame = _load_frame(args)
    q0 = _load_projection(frame, args.q0)
    q = _load_projection(frame, args.q)
    result = connect(q0, q)
    report = {"frame": frame_to_json(frame), "line_composition": result.as_dict()}
    if result.ok:
        report["unitary"] = matrix_to_json(result.unitary.matrix)
        report["residuals"] = {"conjugation": result.residual}
        return report
    # the straight segment left the manifold; fall back to the global
    # signature-matched connector, reporting both outcomes
    connector = orbit_connector(q0, q)
    report["fallback"] = "global orbit connector"
    report["unitary"] = matrix_to_json(connector.matrix)
    report["residuals"] = {
        "conjugation": spectral_norm(connector.conjugate(q0.matrix) - q.matrix),
    }
    return report


def _cmd_curve(args) -> dict:
    frame = _load_frame(args)
    u = JUnitary(frame, _load_matrix(args.input, "U"))
    ts = np.linspace(0.0, 1.0, args.samples)
    points = connectivity_path_many(u, ts)
    return {
        "frame": frame_to_json(frame),
        "samples": [
            {
                "t": float(t),
                "matrix": matrix_to_json(point.matrix),
                "j_unitarity": point.unitarity_residual(),
            }
            for t, point in zip(ts, points)
        ],
        "endpoint_residual": spectral_norm(points[-1].matrix - u.matrix),
    }


def _cmd_log(args) -> dict:
    frame = _load_frame(args)
    u = JUnitary(frame, _load_matrix(args.input, "U"))
    x = log_near_identity(u)
    import scipy.linalg
    from .core import j_adjoint
    return {
        "frame": frame_to_json(frame),
        "log": matrix_to_json(x),
        "residuals": {
            "exp_log": spectral_norm(scipy.linalg.expm(x) - u.matrix),
            "j_antihermitian": spectral_norm(x + j_adjoint(frame, x)),
        },
    }


def _cmd_deck(args) -> dict:
    frame = _load_frame(args)
    q = _load_projection(frame, args.q)
    space = subspace_from_json(frame, load_json(args.s)) if args.s \
        else q.range_subspace()
    family = FixedRangeFamily(space)
    deck = family.deck_of(q)
    return {
        "frame": frame_to_json(frame),
        "deck": subspace_to_json(deck),
        "deck_dim": deck.dim,
        "isotropic_dim": family.isotropic.dim,
    }


def _load_family(path) -> FixedRangeFamily:
    obj = load_json(path)
    if not isinstance(obj, dict):
        raise SchemaError("family file must be a JSON object")
    frame = frame_from_json(obj.get("frame"), name="family.frame")
    if "s" not in obj:
        raise SchemaError("family file must carry the range under key 's'")
    space = subspace_from_json(frame, obj["s"], name="family.s")
    base = subspace_from_json(frame, obj["m0"], name="family.m0") \
        if "m0" in obj else None
    return FixedRangeFamily(space, base)


def _cmd_covering(args) -> dict:
    family = _load_family(args.family)
    frame = family.frame
    q = NormalProjection(frame, _load_matrix(args.q, "Q"))
    deck = family.deck_of(q)
    collapsed = family.covering_map(q)
    lifted = family.covering_lift(deck, collapsed)
    return {
        "frame": frame_to_json(frame),
        "deck": subspace_to_json(deck),
        "base_deck": subspace_to_json(family.base_complement),
        "collapsed": matrix_to_json(collapsed.matrix),
        "residuals": {
            "lift_roundtrip": spectral_norm(lifted.matrix - q.matrix),
        },
    }


def _parse_ints(text: str, count: int, name: str) -> tuple[int, ...]:
    parts = [piece.strip() for piece in text.split(",")]
    if len(parts) != count:
        raise SchemaError(f"{name} needs {count} comma-separated integers")
    try:
        return tuple(int(piece) for piece in parts)
    except ValueError as exc:
        raise SchemaError(f"{name}: {exc}") from exc


def _cmd_gen(args) -> dict:
    frame = _load_frame(args)
    seed = args.seed
    if args.kind == "unitary":
        u = random_j_unitary(frame, seed, spread=args.spread)
        payload = {"unitary": matrix_to_json(u.matrix),
                   "j_unitarity": u.unitarity_residual()}
    elif args.kind == "subspace":
        profile = _parse_ints(args.profile, 3, "--profile")
        space = random_pseudo_regular(frame, seed, profile)
        payload = {"subspace": subspace_to_json(space),
                   "signature": dict(zip(("kp", "km", "k0"), space.signature()))}
    elif args.kind == "projection":
        profile = _parse_ints(args.profile, 5, "--profile")
        q = random_normal_projection(frame, seed, profile)
        payload = {"projection": matrix_to_json(q.matrix),
                   "profile": q.signature_profile().as_dict()}
    elif args.kind == "perturb":
        q0 = _load_projection(frame, args.q0)
        q = perturb_within_radius(q0, seed, fraction=args.fraction)
        payload = {"projection": matrix_to_json(q.matrix),
                   "distance": spectral_norm(q.matrix - q0.matrix)}
    else:  # unreachable through argparse choices
        raise SchemaError(f"unknown generator {args.kind}")
    payload["seed"] = seed
    payload["frame"] = frame_to_json(frame)
    return payload


def _cmd_selftest(args) -> tuple[dict, int]:
    wanted = None
    if args.criteria:
        wanted = {piece.strip() for piece in args.criteria.split(",")}
    report = acceptance.run_selftest(criteria=wanted)
    return report, 0 if report["all_passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kreinkit",
                     description="J-normal projection toolkit for Krein spaces")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, frame_required=True):
        p.add_argument("--frame", help="frame JSON file {p, q, tol}",
                       required=frame_required)
        p.add_argument("--tol", type=float, default=None,
                       help="override the frame tolerance")
        p.add_argument("--out", help="also write the report to this file")

    p = sub.add_parser("classify", help="classification flags of an operator")
    common(p)
    p.add_argument("--in", dest="input", required=True)

    p = sub.add_parser("decompose", help="E + P decomposition of a J-normal projection")
    common(p)
    p.add_argument("--in", dest="input", required=True)

    p = sub.add_parser("signature", help="signature and cosignature of a subspace")
    common(p)
    p.add_argument("--in", dest="input", required=True)

    p = sub.add_parser("profile", help="five-index profile of a J-normal projection")
    common(p)
    p.add_argument("--in", dest="input", required=True)

    p = sub.add_parser("section", help="local cross section conjugating Q0 to Q")
    common(p)
    p.add_argument("--q0", required=True)
    p.add_argument("--q", required=True)

    p = sub.add_parser("connect", help="connector from Q0 to Q (composed or global)")
    common(p)
    p.add_argument("--q0", required=True)
    p.add_argument("--q", required=True)

    p = sub.add_parser("curve", help="J-unitary path from the identity to U")
    common(p)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--samples", type=int, default=11)

    p = sub.add_parser("log", help="J-antihermitian logarithm near the identity")
    common(p)
    p.add_argument("--in", dest="input", required=True)

    p = sub.add_parser("deck", help="deck index R(QQ#) of a family member")
    common(p)
    p.add_argument("--q", required=True)
    p.add_argument("--s", help="range subspace JSON (defaults to R(Q))")

    p = sub.add_parser("covering", help="covering map onto the base deck")
    p.add_argument("--family", required=True,
                   help="family JSON file {frame, s, m0?}")
    p.add_argument("--q", required=True)
    p.add_argument("--out", help="also write the report to this file")

    p = sub.add_parser("gen", help="seeded instance generators")
    common(p)
    p.add_argument("kind", choices=["unitary", "subspace", "projection", "perturb"])
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--spread", type=float, default=0.5)
    p.add_argument("--profile", help="comma-separated indices")
    p.add_argument("--q0", help="base projection for perturb")
    p.add_argument("--fraction", type=float, default=0.5)

    p = sub.add_parser("selftest", help="run the acceptance suite")
    p.add_argument("--criteria", help="comma-separated criterion ids (default: all)")
    p.add_argument("--out", help="also write the report to this file")

    return parser


_COMMANDS = {
    "classify": _cmd_classify,
    "decompose": _cmd_decompose,
    "signature": _cmd_signature,
    "profile": _cmd_profile,
    "section": _cmd_section,
    "connect": _cmd_connect,
    "curve": _cmd_curve,
    "log": _cmd_log,
    "deck": _cmd_deck,
    "covering": _cmd_covering,
    "gen": _cmd_gen,
}


def _json_default(value):
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    raise TypeError(f"not JSON serializable: {type(value).__name__}")


def _emit(report: dict, out_path=None) -> None:
    text = json.dumps(report, indent=2, sort_keys=True, default=_json_default)
    print(text)
    if out_path:
        try:
            with open(out_path, "w", encoding="utf-8") as handle:
                handle.write(text + "\n")
        except OSError as exc:
            raise SchemaError(f"cannot write {out_path}: {exc}") from exc


def main(argv=None) -> int:
    started = time.time()
    command = None
    out_path = None
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        command = args.command
        out_path = getattr(args, "out", None)
        if command == "selftest":
            report, code = _cmd_selftest(args)
        else:
            report, code = _COMMANDS[command](args), 0
        report = {"schema": SCHEMA, "command": command, "ok": code == 0,
                  "elapsed_seconds": time.time() - started, **report}
        _emit(report, out_path)
        return code
    except (PreconditionError, CertificationError) as exc:
        _emit({"schema": SCHEMA, "command": command, "ok": False,
               "error": {"type": type(exc).__name__, "message": str(exc)}})
        return 1
    except (SchemaError, KreinKitError) as exc:
        _emit({"schema": SCHEMA, "command": command, "ok": False,
               "error": {"type": type(exc).__name__, "message": str(exc)}})
        return 2


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
