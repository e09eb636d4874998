"""Command-line interface: ``lcmid check | simulate | counterexample | kruskal | fixtures``.

Exit codes: 0 on success (whatever the verdicts), 2 on input errors, 3 when
``kruskal`` exceeds its column cap or when ``check --strict-exit`` finds that
size caps left every summary verdict Inconclusive.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from lcmid.conditions import Caps, evaluate
from lcmid.counterexample import construct_pair, verify_distribution_equality
from lcmid.fileio import (
    canonical_json,
    load_matrix,
    load_params,
    load_qmatrix,
    qmatrix_csv,
    read_json,
)
from lcmid.fixtures import NAMES, fixture
from lcmid.linalg import KruskalCapExceeded, kruskal_rank
from lcmid.matrices import Partition, build_T, build_jacobian, build_phi, build_psi
from lcmid.model import (
    CapExceeded,
    CoreParams,
    ModelError,
    RegressionParams,
    enumerate_patterns,
    zero_covariate_params,
)
from lcmid.sim import SimConfig, save_dataset, simulate

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CAPPED = 3


class InputError(Exception):
    pass


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lcmid",
        description="Identifiability checks for latent class models with covariates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    chk = sub.add_parser("check", help="evaluate identifiability conditions and write a JSON report")
    chk.add_argument("--params", required=True, help="parameter JSON (core, regression or gdina form)")
    chk.add_argument("--q", help="Q-matrix CSV (required for --model regcdm)")
    chk.add_argument(
        "--model",
        choices=("reglcm", "regcdm"),
        help="model family; defaults to regcdm when --q is given, reglcm otherwise",
    )
    chk.add_argument("--partition", help="item tripartition as comma-separated block labels 1,2,3")
    chk.add_argument("--tol", type=_positive_float, help="absolute singular-value tolerance for every rank test")
    chk.add_argument("--max-exhaustive", type=int, default=Caps.max_exhaustive_items, help="largest J for the exhaustive tripartition search")
    chk.add_argument(
        "--dump-matrices",
        nargs="?",
        const="",
        metavar="DIR",
        help="also write Psi, Phi, T and Jacobian CSVs (default directory: next to --out)",
    )
    chk.add_argument(
        "--example1-necessity",
        action="store_true",
        help="for K=2 binary RegCDMs report NotGenericallyIdentifiable when C4'' fails",
    )
    chk.add_argument("--strict-exit", action="store_true", help="exit 3 when caps leave every summary verdict Inconclusive")
    chk.add_argument("--out", help="report path (default: stdout)")

    sim = sub.add_parser("simulate", help="simulate a dataset from regression parameters")
    sim.add_argument("--params", required=True)
    sim.add_argument("--config", required=True, help="simulation config JSON")
    sim.add_argument("--q", help="Q-matrix CSV, needed for gdina parameters")
    sim.add_argument("--seed", type=int, help="override the config seed")
    sim.add_argument("--out", required=True, help="dataset CSV path")

    ce = sub.add_parser("counterexample", help="construct two parameter sets with the same response distribution")
    ce.add_argument("--q", required=True)
    ce.add_argument("--params", required=True)
    ce.add_argument("--E", type=_positive_float, help="scale constant (default: 1.1 with automatic halving)")
    ce.add_argument("--tol", type=float, default=1e-12, help="distribution agreement tolerance")
    ce.add_argument("--out", help="pair JSON path (default: stdout)")

    kr = sub.add_parser("kruskal", help="print the Kruskal rank of a CSV matrix")
    kr.add_argument("--matrix", required=True)
    kr.add_argument("--tol", type=_positive_float)
    kr.add_argument("--max-cols", type=int, default=16)

    fx = sub.add_parser("fixtures", help="write a bundled Q-matrix as CSV")
    fx.add_argument("name", choices=NAMES)
    fx.add_argument("--out", help="CSV path (default: stdout)")
    return parser


def _emit_text(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _core_for_checks(bundle) -> CoreParams:
    return bundle.core if bundle.core is not None else zero_covariate_params(bundle.reg)


def _dump_matrices(directory: Path, bundle, spec) -> list[str]:
    space = enumerate_patterns(spec)
    n_entries = (space.size - 1) * spec.n_free_params
    if n_entries > Caps.max_jacobian_entries:
        raise CapExceeded(f"Jacobian would have {n_entries} entries, cap is {Caps.max_jacobian_entries}")
    directory.mkdir(parents=True, exist_ok=True)
    core = _core_for_checks(bundle)
    written = []
    psi = build_psi(core, space)
    psi.to_csv(directory / "psi.csv")
    written.append("psi.csv")
    if bundle.reg is not None:
        build_phi(bundle.reg.gamma, space).to_csv(directory / "phi.csv")
        written.append("phi.csv")
    build_T(core, space).to_csv(directory / "t.csv")
    written.append("t.csv")
    build_jacobian(core, space).to_csv(directory / "jacobian.csv")
    written.append("jacobian.csv")
    return written


def cmd_check(args) -> int:
    kind = args.model or ("regcdm" if args.q else "reglcm")
    Q = load_qmatrix(args.q) if args.q else None
    if kind == "regcdm" and Q is None:
        raise InputError("--model regcdm needs --q")
    bundle = load_params(args.params).resolve(Q)
    spec = bundle.spec()
    partition = Partition.parse(args.partition) if args.partition else None
    if partition is not None and len(partition.assignment) != spec.n_items:
        raise InputError(f"--partition has {len(partition.assignment)} labels but the model has {spec.n_items} items")
    if args.max_exhaustive < 3:
        raise InputError("--max-exhaustive must be at least 3")
    caps = Caps(max_exhaustive_items=args.max_exhaustive)
    report = evaluate(
        spec,
        kind=kind,
        core=bundle.core,
        reg=bundle.reg,
        design=bundle.design,
        Q=Q,
        partition=partition,
        tol=args.tol,
        caps=caps,
        example1_necessity=args.example1_necessity,
    )
    payload = report.to_dict()
    if args.dump_matrices is not None:
        directory = Path(args.dump_matrices) if args.dump_matrices else (Path(args.out).parent if args.out else Path("."))
        try:
            payload["matrices"] = {"directory": str(directory), "files": _dump_matrices(directory, bundle, spec)}
        except CapExceeded as exc:
            payload["matrices"] = {"skipped": str(exc)}
    _emit_text(canonical_json(payload), args.out)
    if args.strict_exit and report.capped and all(v == "Inconclusive" for v in report.summary.values()):
        print("every summary verdict is Inconclusive because of size caps: " + ", ".join(report.capped), file=sys.stderr)
        return EXIT_CAPPED
    return EXIT_OK


def cmd_simulate(args) -> int:
    Q = load_qmatrix(args.q) if args.q else None
    bundle = load_params(args.params).resolve(Q)
    reg = bundle.reg if bundle.reg is not None else RegressionParams.from_core(bundle.core)
    cfg_dict = read_json(args.config)
    if args.seed is not None:
        cfg_dict = {**cfg_dict, "seed": args.seed}
    cfg = SimConfig.from_dict(cfg_dict)
    data = simulate(reg, cfg)
    save_dataset(args.out, data)
    return EXIT_OK


def cmd_counterexample(args) -> int:
    Q = load_qmatrix(args.q)
    bundle = load_params(args.params).resolve(Q)
    core = _core_for_checks(bundle)
    pair = construct_pair(core, Q, args.E)
    ok, dev = verify_distribution_equality(pair.original, pair.perturbed, tol=args.tol)
    payload = pair.to_dict(max_deviation=dev)
    payload["distributions_agree"] = ok
    _emit_text(canonical_json(payload), args.out)
    return EXIT_OK


def cmd_kruskal(args) -> int:
    m = load_matrix(args.matrix)
    try:
        res = kruskal_rank(m, args.tol, max_cols=args.max_cols)
    except KruskalCapExceeded as exc:
        print(f"lcmid kruskal: {exc}", file=sys.stderr)
        return EXIT_CAPPED
    print(res.k_rank)
    witness = ",".join(map(str, res.witness)) if res.witness is not None else "none"
    print(f"smallest dependent column set size: {res.smallest_dependent_size} (witness: {witness})")
    return EXIT_OK


def cmd_fixtures(args) -> int:
    _emit_text(qmatrix_csv(fixture(args.name)), args.out)
    return EXIT_OK


COMMANDS = {
    "check": cmd_check,
    "simulate": cmd_simulate,
    "counterexample": cmd_counterexample,
    "kruskal": cmd_kruskal,
    "fixtures": cmd_fixtures,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (InputError, ModelError, CapExceeded, ValueError, KeyError, OSError) as exc:
        print(f"lcmid {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
