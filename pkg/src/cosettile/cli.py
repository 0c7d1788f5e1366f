"""Command-line interface.

Input documents are JSON::

    {"d": 1, "cosets": [{"n": [2], "m": [0]}, {"n": [4], "m": [1]}]}

Every subcommand prints a single JSON report on stdout (sorted keys) and
exits 0 on success, 1 on a negative finding, 2 on usage or input errors and
3 if the repeated-shape guarantee ever fails.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from typing import Sequence

from . import __version__
from .coset import DEFAULT_CELL_BUDGET, Coset, CosetSystem, InstanceTooLarge, SubgroupShape, canonicalize, verify_partition
from .cyclotomic import ConductorError, RootPoint
from .genfun import PoleEstimateError, PoleProbeParams, identity_check, pole_report, system_sum
from .mirsky import TheoremViolation, WitnessPreconditionError, witness
from .search import SearchSpec, random_split_cover, search_exact_covers

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_VIOLATION = 0, 1, 2, 3


class DocumentError(ValueError):
    """A system document is malformed; the message names the offending field."""


class NonCanonicalOffsetWarning(UserWarning):
    pass


def _int_list(value, where: str) -> list[int]:
    if not isinstance(value, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in value):
        raise DocumentError(f"{where}: expected a list of integers")
    return value


def parse_system(text: str) -> CosetSystem:
    """Parse a JSON system document into a canonical :class:`CosetSystem`.

    Offsets outside ``[0, n_i)`` are reduced and a
    :class:`NonCanonicalOffsetWarning` is issued.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    d = doc.get("d")
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise DocumentError("d: expected a positive integer")
    raw = doc.get("cosets")
    if not isinstance(raw, list) or not raw:
        raise DocumentError("cosets: expected a nonempty list")
    cosets = []
    for j, entry in enumerate(raw):
        where = f"cosets[{j}]"
        if not isinstance(entry, dict):
            raise DocumentError(f"{where}: expected an object with 'n' and 'm'")
        n = _int_list(entry.get("n"), f"{where}.n")
        m = _int_list(entry.get("m"), f"{where}.m")
        if len(n) != d:
            raise DocumentError(f"{where}.n: has {len(n)} entries, expected d={d}")
        if len(m) != d:
            raise DocumentError(f"{where}.m: has {len(m)} entries, expected d={d}")
        for i, v in enumerate(n):
            if v <= 0:
                raise DocumentError(f"{where}.n[{i}]: non-positive modulus {v}")
        c = Coset(SubgroupShape(tuple(n)), tuple(m))
        canon = canonicalize(c)
        if canon != c:
            warnings.warn(
                f"{where}.m: offsets {list(c.m)} reduced to canonical {list(canon.m)}",
                NonCanonicalOffsetWarning,
                stacklevel=2,
            )
        cosets.append(canon)
    return CosetSystem(d, tuple(cosets))


def emit_system(system: CosetSystem, name: str | None = None) -> str:
    doc: dict = {"d": system.d, "cosets": [{"n": list(c.n), "m": list(c.m)} for c in system]}
    if name is not None:
        doc["name"] = name
    return dump(doc)


def dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _system_dict(system: CosetSystem) -> list[dict]:
    return [{"n": list(c.n), "m": list(c.m)} for c in system]


def cmd_verify(args) -> tuple[dict, int]:
    system = _load(args.file)
    report = verify_partition(system, args.budget)
    return {"command": "verify", "report": report.to_dict()}, EXIT_OK if report.is_partition else EXIT_NEGATIVE


def cmd_identity(args) -> tuple[dict, int]:
    system = _load(args.file)
    S = system_sum(system)
    holds = identity_check(system)
    out = {
        "command": "identity",
        "identity_holds": holds,
        "denominator_exponents": list(S.denom_exponents),
        "numerator": [
            {"exponent": list(e), "coeff": str(c)} for e, c in S.numerator.items()
        ],
        "numerator_terms": len(S.numerator),
    }
    return out, EXIT_OK if holds else EXIT_NEGATIVE


def cmd_witness(args) -> tuple[dict, int]:
    system = _load(args.file)
    try:
        w = witness(system, args.budget)
    except WitnessPreconditionError as exc:
        return {"command": "witness", "witness": None, "precondition_failed": str(exc)}, EXIT_NEGATIVE
    return {"command": "witness", "witness": w.to_dict(system)}, EXIT_OK


def cmd_poles(args) -> tuple[dict, int]:
    system = _load(args.file)
    try:
        point = RootPoint.parse(args.point)
    except ValueError as exc:
        raise DocumentError(f"--point: {exc}") from None
    if point.d != system.d:
        raise DocumentError(f"--point: has {point.d} coordinates, system has d={system.d}")
    params = PoleProbeParams(seed=args.seed) if args.numeric else None
    report = pole_report(system, point, numeric=args.numeric, params=params)
    return {"command": "poles", "report": report.to_dict()}, EXIT_OK


def cmd_search(args) -> tuple[dict, int]:
    spec = SearchSpec(
        d=args.dim,
        max_n=args.max_n,
        distinct_shapes_only=args.distinct_shapes,
        max_cosets=args.max_cosets,
        exclude_trivial=args.exclude_trivial,
        cell_budget=args.budget,
        timeout=args.timeout,
    )
    result = search_exact_covers(spec, workers=args.threads)
    out = {"command": "search", "result": result.to_dict(timing=args.timing)}
    return out, EXIT_OK if result.complete else EXIT_NEGATIVE


def cmd_gen(args) -> tuple[str, int]:
    system = random_split_cover(args.dim, args.steps, args.max_factor, args.seed)
    return emit_system(system), EXIT_OK


def _load(path: str) -> CosetSystem:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DocumentError(f"{path}: {exc.strerror}") from None
    try:
        return parse_system(text)
    except DocumentError as exc:
        raise DocumentError(f"{path}: {exc}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cosettile", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, default=DEFAULT_CELL_BUDGET, metavar="CELLS",
                        help="maximum fundamental-box size (default 10^8)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="check that a system tiles Z^d exactly")
    p.add_argument("file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("identity", parents=[common], help="generating-function identity and numerator")
    p.add_argument("file")
    p.set_defaults(func=cmd_identity)

    p = sub.add_parser("witness", parents=[common], help="pair of tiles sharing the largest-index shape")
    p.add_argument("file")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("poles", parents=[common], help="pole orders at a root-of-unity point")
    p.add_argument("file")
    p.add_argument("--point", required=True, help="coordinates as k1/N1,...,kd/Nd")
    p.add_argument("--numeric", action="store_true", help="also estimate the order by line probing")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_poles)

    p = sub.add_parser("search", parents=[common], help="enumerate tilings with bounded moduli")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--distinct-shapes", action="store_true")
    p.add_argument("--exclude-trivial", action="store_true")
    p.add_argument("--max-cosets", type=int, default=None)
    p.add_argument("--threads", type=int, default=1, help="worker processes")
    p.add_argument("--timeout", type=float, default=None, help="seconds")
    p.add_argument("--timing", action="store_true", help="include wall time (breaks byte-determinism)")
    p.add_argument("--seed", type=int, default=0, help="accepted for interface uniformity; search is deterministic")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("gen", help="random tiling by repeated splitting")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-factor", type=int, default=3)
    p.set_defaults(func=cmd_gen)
    return parser


def _error(kind: str, message: str, **extra):
    payload = {"error": {"type": kind, "message": message, **extra}}
    sys.stderr.write(json.dumps(payload, sort_keys=True) + "\n")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse has already printed usage; normalize its exit code
        if exc.code in (0, None):
            return EXIT_OK
        _error("usage", "invalid command line")
        return EXIT_USAGE

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            out, code = args.func(args)
        except (DocumentError, InstanceTooLarge, ConductorError, ValueError) as exc:
            _flush_warnings(caught)
            _error(type(exc).__name__, str(exc))
            return EXIT_USAGE
        except PoleEstimateError as exc:
            _flush_warnings(caught)
            _error("PoleEstimateError", str(exc))
            return EXIT_NEGATIVE
        except TheoremViolation as exc:
            _flush_warnings(caught)
            _error("TheoremViolation", str(exc), system=_system_dict(exc.system), j_star=exc.j_star)
            return EXIT_VIOLATION
    _flush_warnings(caught)
    sys.stdout.write(out if isinstance(out, str) else dump(out))
    return code


def _flush_warnings(caught):
    for w in caught:
        sys.stderr.write(f"warning: {w.message}\n")


if __name__ == "__main__":
    sys.exit(main())
