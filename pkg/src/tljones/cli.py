"""Command-line surface over the library.

Every command prints one canonical JSON document (sorted keys, fixed
separators) so repeated runs with the same arguments and seed are
byte-identical.  Exit codes: 0 on success, 1 on a usage problem, 2 when
a verification, certificate, or numerical integrity check fails.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .compiler import search_compile, sk_compile
from .density import certify_density
from .encsim import (
    Circuit,
    pair_sector_reps,
    simulate_circuit,
    two_qubit_target,
)
from .errors import (
    DomainError,
    IntegrityError,
    LeakedQubitError,
    PrecisionError,
    ResourceError,
)
from .fusion import FusionContext, disk_dimension
from .gates import named_gate
from .jonesrep import (
    canonical_json,
    fixture_doc,
    matrices_from_doc,
    sector_rep,
    verify_relations,
)
from .tableaux import enumerate_diagrams

FIXTURE_DIR_VAR = "TLJONES_FIXTURE_DIR"


def _parse_diagram(text: str) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise DomainError(f"diagram must be 'a,b', got {text!r}")
    try:
        rows = (int(parts[0]), int(parts[1]))
    except ValueError as exc:
        raise DomainError(f"diagram rows must be integers: {exc}") from exc
    return rows


def _resolve_fixture(path: str) -> str:
    base = os.environ.get(FIXTURE_DIR_VAR)
    if base and not os.path.isabs(path):
        return os.path.join(base, path)
    return path


def _read_text(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# subcommand handlers; each returns (document, passed)


def _cmd_rep(args) -> tuple[dict, bool]:
    rep = sector_rep(args.r, _parse_diagram(args.diagram))
    return fixture_doc(rep), True


def _cmd_verify(args) -> tuple[dict, bool]:
    rows = _parse_diagram(args.diagram)
    rep = sector_rep(args.r, rows)
    report = verify_relations(rep, tol=args.tol)
    doc = {
        "r": args.r,
        "diagram": list(rows),
        "tol": args.tol,
        "deviations": {
            "hermitian": report.hermitian,
            "idempotent": report.idempotent,
            "exchange": report.exchange,
            "far_commute": report.far_commute,
            "unitary": report.unitary,
            "braid": report.braid,
            "spectrum": report.spectrum,
            "torsion": report.torsion,
        },
        "max_deviation": report.max_deviation,
        "pass": report.ok,
    }
    passed = report.ok
    if args.fixture:
        import json as _json

        try:
            fdoc = _json.loads(_read_text(_resolve_fixture(args.fixture)))
        except _json.JSONDecodeError as exc:
            raise DomainError(f"fixture is not valid JSON: {exc}") from exc
        if fdoc.get("r") != args.r or tuple(fdoc.get("diagram", ())) != rows:
            raise DomainError("fixture describes a different sector")
        stored = matrices_from_doc(fdoc)
        worst = 0.0
        for index, name in enumerate(sorted(stored), start=1):
            built = rep.generator(index)
            worst = max(worst, float(np.abs(stored[name] - built).max()))
        doc["fixture"] = args.fixture
        doc["fixture_deviation"] = worst
        passed = passed and worst <= args.tol
        doc["pass"] = passed
    return doc, passed


def _cmd_dims(args) -> tuple[dict, bool]:
    ctx = FusionContext(args.r)
    sectors = []
    for diagram in enumerate_diagrams(args.n, ctx):
        boundary = diagram.row_difference
        sectors.append({
            "rows": list(diagram.rows),
            "boundary": boundary,
            "dimension": disk_dimension(args.n, boundary, ctx),
        })
    return {"r": args.r, "n": args.n, "sectors": sectors}, True


def _cmd_density(args) -> tuple[dict, bool]:
    reps = [sector_rep(args.r, rows) for rows in ((3, 3), (4, 2))]
    doc: dict = {"r": args.r, "sectors": {}}
    passed = True
    for rep in reps:
        cert = certify_density([list(rep.generators)])
        key = ",".join(str(v) for v in rep.diagram.rows)
        doc["sectors"][key] = cert.to_doc()
        passed = passed and cert.dense
    joint = certify_density([list(rep.generators) for rep in reps])
    doc["joint"] = joint.to_doc()
    passed = passed and joint.dense
    doc["pass"] = passed
    return doc, passed


def _cmd_compile(args) -> tuple[dict, bool]:
    params = (args.angle,) if args.angle is not None else ()
    matrix, arity = named_gate(args.gate, params)
    kind = args.kind or ("1q" if arity == 1 else "2q")
    if kind == "1q":
        if arity != 1:
            raise DomainError(f"gate {args.gate!r} is not single-qubit")
        compiled = sk_compile(matrix, args.epsilon)
    else:
        if arity != 2:
            raise DomainError(f"gate {args.gate!r} is not two-qubit")
        target = two_qubit_target(matrix, name=args.gate)
        compiled = search_compile(target, pair_sector_reps(),
                                  budget=args.budget, seed=args.seed)
    doc = {
        "gate": args.gate,
        "kind": kind,
        "epsilon": args.epsilon,
        "budget": args.budget,
        "seed": args.seed,
        "method": compiled.method,
        "distance": compiled.distance,
        "length": len(compiled.word),
        "evaluations": compiled.evaluations,
        "word": {
            "n_strands": compiled.word.n_strands,
            "letters": list(compiled.word.letters),
        },
    }
    if args.angle is not None:
        doc["angle"] = args.angle
    return doc, True


def _cmd_simulate(args) -> tuple[dict, bool]:
    raw = _read_text(args.circuit)
    circuit = Circuit.from_json(raw)
    import json as _json

    carried = _json.loads(raw)

    def setting(flag_value, key, default):
        if flag_value is not None:
            return flag_value
        return type(default)(carried.get(key, default))

    shots = setting(args.shots, "shots", 10_000)
    epsilon = setting(args.epsilon, "epsilon", 1 / 30)
    budget = setting(args.budget, "budget", 20_000)
    seed = setting(args.seed, "seed", 0)
    result = simulate_circuit(circuit, epsilon=epsilon, budget=budget,
                              seed=seed, shots=shots)
    doc = result.to_doc()
    doc["epsilon"] = epsilon
    doc["budget"] = budget
    doc["seed"] = seed
    return doc, True


_HANDLERS = {
    "rep": _cmd_rep,
    "verify": _cmd_verify,
    "dims": _cmd_dims,
    "density": _cmd_density,
    "compile": _cmd_compile,
    "simulate": _cmd_simulate,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tljones",
        description="Braid-group sector representations, density "
                    "certificates, gate compilation, encoded simulation.")
    sub = parser.add_subparsers(dest="command", required=True)

    rep = sub.add_parser("rep", help="emit one sector's generator matrices")
    rep.add_argument("--r", type=int, default=5)
    rep.add_argument("--diagram", required=True, help="two rows, e.g. 2,1")

    verify = sub.add_parser("verify", help="check the defining relations")
    verify.add_argument("--r", type=int, default=5)
    verify.add_argument("--diagram", required=True)
    verify.add_argument("--tol", type=float, default=1e-9)
    verify.add_argument("--fixture",
                        help="JSON fixture to compare matrices against "
                             f"(relative paths resolve under ${FIXTURE_DIR_VAR})")

    dims = sub.add_parser("dims", help="sector dimension table")
    dims.add_argument("--r", type=int, default=5)
    dims.add_argument("--n", type=int, required=True)

    density = sub.add_parser("density", help="density certificate for the "
                                             "6-strand sector pair")
    density.add_argument("--r", type=int, default=5)

    compile_ = sub.add_parser("compile", help="compile a named gate to a braid")
    compile_.add_argument("--gate", required=True)
    compile_.add_argument("--kind", choices=("1q", "2q"))
    compile_.add_argument("--angle", type=float,
                          help="rotation angle for rx/ry/rz")
    compile_.add_argument("--epsilon", type=float, default=1e-2)
    compile_.add_argument("--budget", type=int, default=20_000)
    compile_.add_argument("--seed", type=int, default=0)

    simulate = sub.add_parser("simulate", help="run a circuit on the encoded "
                                               "register")
    simulate.add_argument("--circuit", required=True, help="circuit JSON path")
    simulate.add_argument("--shots", type=int)
    simulate.add_argument("--epsilon", type=float)
    simulate.add_argument("--budget", type=int)
    simulate.add_argument("--seed", type=int)

    for name in _HANDLERS:
        sub.choices[name].add_argument("--out", help="write JSON here "
                                                     "instead of stdout")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 1
        return 0 if code == 0 else 1
    try:
        doc, passed = _HANDLERS[args.command](args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (IntegrityError, PrecisionError, ResourceError,
            LeakedQubitError) as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return 2
    text = canonical_json(doc)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as handle:
                handle.write(text)
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
            return 1
    else:
        sys.stdout.write(text)
    return 0 if passed else 2


if __name__ == "__main__":
    raise SystemExit(main())
