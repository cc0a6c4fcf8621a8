"""Command-line surface with deterministic machine-readable reports.

Every command writes one canonical JSON report (sorted keys, no whitespace
variance) to stdout or --out; repeated runs on identical inputs produce
byte-identical reports.  Wall-clock timing goes to stderr only, so it
never perturbs the payload.  Exit codes: 0 success, 1 verification
failure, 2 input error, 3 budget exhaustion.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import endotop, filtrations, fixtures, homs, lattice, quiver, torsion
from .errors import BrickLabError, BudgetExceeded, MalformedInput
from .linalg import DEFAULT_BUDGET

COMMANDS = (
    "check",
    "hom",
    "end",
    "endotop",
    "top-bricks",
    "is-brick",
    "is-semibrick",
    "in-torsion",
    "torsion-part",
    "perp-part",
    "filtrations",
    "verify-filtration",
    "dualize",
    "universe",
    "lattice",
    "check-2.2",
    "check-2.5",
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bricklab",
        description=(
            "Exact computations with bricks, torsion classes and torsional "
            "brick chain filtrations over quiver algebras over prime fields."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    descriptions = {
        "check": "validate a module file against an algebra",
        "hom": "basis of the space of maps between two modules",
        "end": "endomorphism algebra with structure constants",
        "endotop": "quotient by the endomorphism radical acting on the module",
        "top-bricks": "top bricks of a module with multiplicities",
        "is-brick": "is every nonzero endomorphism invertible?",
        "is-semibrick": "is the endomorphism algebra semisimple?",
        "in-torsion": "is the module in the torsion class of the generator?",
        "torsion-part": "largest submodule inside the generated torsion class",
        "perp-part": "largest submodule with no nonzero map to the second module",
        "filtrations": "enumerate all torsional brick chain filtrations",
        "verify-filtration": "re-check a filtration file from scratch",
        "dualize": "opposite algebra and dual module",
        "universe": "all indecomposables up to a total dimension bound",
        "lattice": "torsion class lattice with brick-labeled Hasse edges",
        "check-2.2": "semibrick/torsion-class bijection check on a universe",
        "check-2.5": "lower-neighbor and top-brick check for a generator",
    }
    for name in COMMANDS:
        cmd = sub.add_parser(name, help=descriptions[name])
        cmd.add_argument("--algebra", required=True, help="algebra JSON file")
        cmd.add_argument("--module", help="module JSON file")
        cmd.add_argument("--second", help="second module JSON file")
        cmd.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
        cmd.add_argument("--max-dim", type=int, default=2, dest="max_dim")
        cmd.add_argument("--out", help="write the report here instead of stdout")
        cmd.add_argument("--format", choices=("json", "dot"), default="json")
        if name == "filtrations":
            cmd.add_argument("--count-only", action="store_true", dest="count_only")
    return parser


def _need_module(args, alg, attr="module"):
    path = getattr(args, attr)
    if path is None:
        raise MalformedInput(f"this command needs --{attr.replace('_', '-')}")
    return fixtures.load_module_file(alg, path)


def _morphism_payload(m) -> dict:
    return {v: m.blocks[v].tolist() for v in m.source.algebra.vertices}


def _run_command(args) -> tuple[dict, list, str | None]:
    """Returns (outputs, assertions, dot_text)."""
    alg = fixtures.load_algebra_file(args.algebra)
    budget = args.budget
    name = args.command
    assertions: list = []
    dot = None
    if name == "check":
        rep = _need_module(args, alg)
        violations = quiver.validate(alg, rep)
        assertions.append(("relations-vanish", not violations))
        outputs = {"violations": violations, "module": quiver.rep_to_payload(rep)}
    elif name == "hom":
        m = _need_module(args, alg)
        n = _need_module(args, alg, "second")
        hb = homs.hom_basis(m, n)
        outputs = {
            "dim": hb.dim,
            "basis": [_morphism_payload(f) for f in hb.morphisms],
        }
    elif name == "end":
        m = _need_module(args, alg)
        E = homs.end_algebra(m)
        outputs = {
            "dim": E.dim,
            "mult": E.mult.tolist(),
            "unit": E.unit.tolist(),
            "basis": [_morphism_payload(f) for f in E.hom.morphisms],
        }
    elif name == "endotop":
        m = _need_module(args, alg)
        quot, proj = endotop.endotop(m, budget)
        outputs = {
            "module": quiver.rep_to_payload(quot),
            "projection": _morphism_payload(proj),
        }
    elif name == "top-bricks":
        m = _need_module(args, alg)
        tops = endotop.top_bricks(m, budget)
        outputs = {
            "bricks": [
                {"module": quiver.rep_to_payload(b), "multiplicity": c}
                for b, c in tops.bricks
            ]
        }
    elif name == "is-brick":
        m = _need_module(args, alg)
        outputs = {"value": endotop.is_brick(m, budget)}
    elif name == "is-semibrick":
        m = _need_module(args, alg)
        outputs = {"value": endotop.is_semibrick(m, budget)}
    elif name == "in-torsion":
        m = _need_module(args, alg)
        g = _need_module(args, alg, "second")
        cert = torsion.in_torsion(m, torsion.TorsionHandle(g))
        outputs = {
            "value": cert.verdict,
            "stages": [
                {
                    "module": quiver.rep_to_payload(stage),
                    "trace": quiver.subrep_to_payload(tr),
                }
                for stage, tr in cert.stages
            ],
        }
    elif name == "torsion-part":
        m = _need_module(args, alg)
        g = _need_module(args, alg, "second")
        part = torsion.torsion_part(m, torsion.TorsionHandle(g))
        outputs = {"submodule": quiver.subrep_to_payload(part)}
    elif name == "perp-part":
        m = _need_module(args, alg)
        b = _need_module(args, alg, "second")
        part = torsion.perp_part(m, b)
        outputs = {"submodule": quiver.subrep_to_payload(part)}
    elif name == "filtrations":
        m = _need_module(args, alg)
        if args.count_only:
            report = filtrations.count_filtrations(m, budget)
            outputs = {"count": report.count, "trace": report.trace}
        else:
            filts, report = filtrations.enumerate_filtrations(m, budget)
            verified = [
                filtrations.verify_filtration(f, budget).ok for f in filts
            ]
            assertions.append(("count-matches-enumeration", report.count == len(filts)))
            assertions.append(("all-filtrations-verified", all(verified)))
            outputs = {
                "count": report.count,
                "filtrations": [
                    filtrations.filtration_to_payload(f) for f in filts
                ],
            }
    elif name == "verify-filtration":
        if args.module is None:
            raise MalformedInput("this command needs --module (a filtration file)")
        try:
            payload = json.loads(open(args.module).read())
        except (OSError, json.JSONDecodeError) as exc:
            raise MalformedInput(f"cannot read filtration file: {exc}") from exc
        filt = filtrations.filtration_from_payload(alg, payload)
        result = filtrations.verify_filtration(filt, budget)
        assertions.append(("filtration-valid", result.ok))
        outputs = {"value": result.ok, "reason": result.reason}
    elif name == "dualize":
        m = _need_module(args, alg)
        opp, dual = quiver.dualize(alg, m)
        outputs = {
            "algebra": quiver.algebra_to_payload(opp),
            "module": quiver.rep_to_payload(dual),
        }
    elif name == "universe":
        uni = lattice.build_universe(alg, args.max_dim, budget, complete=False)
        outputs = {
            "count": uni.size,
            "indecomposables": [
                quiver.rep_to_payload(r) for r in uni.indecomposables
            ],
        }
    elif name == "lattice":
        uni = lattice.build_universe(alg, args.max_dim, budget, complete=True)
        lat = lattice.enumerate_torsion_classes(uni, budget)
        outputs = lattice.lattice_to_payload(lat)
        if args.format == "dot":
            dot = lattice.lattice_to_dot(lat)
    elif name == "check-2.2":
        uni = lattice.build_universe(alg, args.max_dim, budget, complete=True)
        report = lattice.check_semibrick_bijection(uni, budget)
        assertions.extend(report.pop("assertions"))
        outputs = report
    elif name == "check-2.5":
        m = _need_module(args, alg)
        uni = lattice.build_universe(alg, args.max_dim, budget, complete=True)
        report = lattice.check_lower_neighbors(uni, m, budget)
        assertions.extend(report.pop("assertions"))
        outputs = report
    else:  # pragma: no cover - argparse restricts the choices
        raise MalformedInput(f"unknown command {name!r}")
    return outputs, assertions, dot


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.monotonic()
    echo = {
        k: v
        for k, v in sorted(vars(args).items())
        if k not in ("out",) and v is not None
    }
    try:
        outputs, assertions, dot = _run_command(args)
    except MalformedInput as exc:
        report = {
            "command": {"name": args.command, "args": echo},
            "error": {"type": "MalformedInput", "message": str(exc)},
        }
        _emit(quiver.canonical_json(report) + "\n", args.out)
        return 2
    except BudgetExceeded as exc:
        report = {
            "command": {"name": args.command, "args": echo},
            "error": {"type": "BudgetExceeded", "message": str(exc)},
        }
        _emit(quiver.canonical_json(report) + "\n", args.out)
        return 3
    except BrickLabError as exc:
        report = {
            "command": {"name": args.command, "args": echo},
            "error": {"type": type(exc).__name__, "message": str(exc)},
        }
        _emit(quiver.canonical_json(report) + "\n", args.out)
        return 1
    elapsed = time.monotonic() - started
    if dot is not None:
        _emit(dot, args.out)
    else:
        report = {
            "command": {"name": args.command, "args": echo},
            "outputs": outputs,
            "assertions": [[name, ok] for name, ok in assertions],
        }
        _emit(quiver.canonical_json(report) + "\n", args.out)
    print(f"# elapsed: {elapsed:.3f}s", file=sys.stderr)
    if any(not ok for _, ok in assertions):
        return 1
    return 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
