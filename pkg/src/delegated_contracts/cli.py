"""Command-line interface.

Exit codes: 0 success, 1 usage or input error, 2 infeasible (target not
implementable or contract not IC), 3 resource limit or numerical failure
(degenerate curve fits included).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

import numpy as np

from . import formats
from .core import best_response, principal_value
from .curves import build_setting, fit_power_law, sample_pilot
from .errors import (
    ContractError,
    FitError,
    InputError,
    NotImplementableError,
    NumericalError,
    PreconditionError,
    ResourceError,
)
from .hardness import max_maximin_exhaustive, read_dimacs, reduce_3sat, verify_reduction
from .nptest import contract_to_test, error_sum, likelihood_ratio_test, verify_equivalence
from .robustness import robustness_table, table_to_doc
from .solvers import (
    SolveStatus,
    budget_optimal,
    full_enumeration_aon,
    local_threshold,
    min_budget_dual,
    min_budget_lp,
    min_budget_statistical,
    min_pay_lp,
    two_action_closed_form,
)

EXIT_OK, EXIT_INPUT, EXIT_INFEASIBLE, EXIT_RESOURCE = 0, 1, 2, 3

SOLVERS = ("lp", "dual", "statistical", "two-action", "local", "enum-aon", "mip", "min-pay")


def _emit(text: str, out):
    if out:
        formats.write_text(out, text)
    else:
        sys.stdout.write(text)


def _sizes(text):
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise InputError(f"bad size list {text!r}") from exc


def _run_solver(setting, target, name):
    if name == "lp":
        return min_budget_lp(setting, target)
    if name == "dual":
        min_budget_dual(setting, target)  # raises when not implementable
        rep = min_budget_lp(setting, target)
        return replace(rep, solver_name="dual")
    if name == "statistical":
        return min_budget_statistical(setting, target, binary=False)
    if name == "mip":
        return min_budget_statistical(setting, target, binary=True)
    if name == "two-action":
        if len(setting) != 2 or setting.index_of(target) != 1:
            raise InputError("two-action solver needs two actions and the costlier one as target")
        f1, f2 = setting.F
        rep = two_action_closed_form(f1, f2, *setting.costs)
        return replace(rep, target_action=target)
    if name == "local":
        return local_threshold(setting, target)
    if name == "enum-aon":
        return full_enumeration_aon(setting, target)
    if name == "min-pay":
        return min_pay_lp(setting, target)
    raise InputError(f"unknown solver {name!r}")


def cmd_solve(args) -> int:
    setting = formats.read_setting(args.setting)
    report = _run_solver(setting, args.target, args.solver)
    _emit(formats.dumps(formats.report_to_doc(report)), args.out)
    return EXIT_OK if report.status is SolveStatus.OPTIMAL else EXIT_INFEASIBLE


def cmd_budget_optimal(args) -> int:
    setting = formats.read_setting(args.setting)
    report = budget_optimal(setting, args.budget, solver=args.solver)
    _emit(formats.dumps(formats.report_to_doc(report)), args.out)
    return EXIT_OK


def cmd_fit_curve(args) -> int:
    samples = formats.read_samples(args.samples)
    model = fit_power_law(samples)
    _emit(formats.dumps(formats.model_to_doc(model)), args.out)
    return EXIT_OK


def cmd_build_setting(args) -> int:
    if (args.model is None) == (args.samples is None):
        raise InputError("give exactly one of --model or --samples")
    if args.model is not None:
        source = formats.read_model(args.model)
        if args.sizes is None:
            raise InputError("--sizes is required with --model")
        sizes = _sizes(args.sizes)
    else:
        source = formats.read_samples(args.samples)
        sizes = _sizes(args.sizes) if args.sizes else source.sizes.tolist()
    setting = build_setting(source, args.m, sizes, args.cost_per_sample)
    _emit(formats.dumps(formats.setting_to_doc(setting)), args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    setting = formats.read_setting(args.setting)
    contract = formats.read_contract(args.contract)
    br = best_response(setting, contract)
    doc = {
        "best_response": br.action_id,
        "utility": br.utility,
        "utilities": {str(i): u for i, u in zip(setting.ids, br.utilities_all)},
        "principal_value": principal_value(setting, contract),
    }
    _emit(formats.dumps(doc), args.out)
    return EXIT_OK


def cmd_np_test(args) -> int:
    setting = formats.read_setting(args.setting)
    if len(setting) != 2:
        raise InputError("np-test needs a two-action setting")
    f1, f2 = setting.F
    if args.contract:
        contract = formats.read_contract(args.contract)
    else:
        rep = two_action_closed_form(f1, f2, *setting.costs)
        if rep.contract is None:
            raise NotImplementableError("identical distributions: costly action not implementable")
        contract = rep.contract
    test = contract_to_test(contract)
    lr = likelihood_ratio_test(f1, f2)
    c1, c2 = setting.costs
    doc = {
        "psi": test.psi,
        "budget": contract.budget,
        "type1_error": float(f1 @ test.psi),
        "type2_error": float(f2 @ (1.0 - test.psi)),
        "error_sum": error_sum(test, f1, f2),
        "identity_rhs": 1.0 - (c2 - c1) / contract.budget,
        "lr_error_sum": error_sum(lr, f1, f2),
        "equivalent": verify_equivalence(setting, contract),
    }
    _emit(formats.dumps(doc), args.out)
    return EXIT_OK


def cmd_reduce_3sat(args) -> int:
    cnf = read_dimacs(args.cnf)
    setting, inst = reduce_3sat(cnf)
    if args.setting_out:
        formats.write_setting(setting, args.setting_out)
    doc = {
        "num_vars": cnf.num_vars,
        "num_clauses": len(cnf.clauses),
        "epsilon": inst.epsilon,
        "q_pos": inst.q_pos,
        "threshold": inst.threshold,
        "labels": list(inst.labels),
        "matrix": [list(row) for row in inst.A],
    }
    if args.verify:
        doc["max_maximin"] = max_maximin_exhaustive(inst)
        doc["reduction_verified"] = verify_reduction(cnf)
    _emit(formats.dumps(doc), args.out)
    return EXIT_OK


def cmd_robustness(args) -> int:
    if (args.setting is None) == (args.samples is None):
        raise InputError("give exactly one of --setting or --samples")
    if args.setting is not None:
        setting = formats.read_setting(args.setting)
    else:
        samples = formats.read_samples(args.samples)
        setting = build_setting(samples, args.m, samples.sizes.tolist(), 1.0)
    _emit(formats.dumps(table_to_doc(robustness_table(setting))), args.out)
    return EXIT_OK


def cmd_pilot(args) -> int:
    samples = formats.read_samples(args.samples)
    pilot = sample_pilot(samples, args.k, args.r, rng=np.random.default_rng(args.seed))
    if pilot.short_sizes:
        print(f"warning: fewer than {args.r} repetitions at n={list(pilot.short_sizes)}",
              file=sys.stderr)
    _emit(formats.samples_to_csv(pilot), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="delegated-contracts",
                                description="Contract design for delegated learning.")
    p.add_argument("--seed", type=int, default=0, help="seed for every random draw (default 0)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="min-budget (or min-pay) contract for one target")
    s.add_argument("--setting", required=True)
    s.add_argument("--target", type=int, required=True)
    s.add_argument("--solver", choices=SOLVERS, default="lp")
    s.add_argument("--out")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("budget-optimal", help="best contract within a budget")
    s.add_argument("--setting", required=True)
    s.add_argument("--budget", type=float, required=True)
    s.add_argument("--solver", choices=("lp", "aon", "enum-aon", "local"), default="lp")
    s.add_argument("--out")
    s.set_defaults(func=cmd_budget_optimal)

    s = sub.add_parser("fit-curve", help="fit a power-law learning curve to CSV samples")
    s.add_argument("--samples", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_fit_curve)

    s = sub.add_parser("build-setting", help="setting from a curve model or samples")
    s.add_argument("--model")
    s.add_argument("--samples")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--sizes", help="comma-separated training sizes")
    s.add_argument("--cost-per-sample", type=float, default=1.0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_build_setting)

    s = sub.add_parser("simulate", help="agent best response to a contract")
    s.add_argument("--setting", required=True)
    s.add_argument("--contract", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("np-test", help="hypothesis-test view of a two-action contract")
    s.add_argument("--setting", required=True)
    s.add_argument("--contract")
    s.add_argument("--out")
    s.set_defaults(func=cmd_np_test)

    s = sub.add_parser("reduce-3sat", help="maximin instance for a DIMACS 3-CNF")
    s.add_argument("--cnf", required=True)
    s.add_argument("--setting-out")
    s.add_argument("--verify", action="store_true")
    s.add_argument("--out")
    s.set_defaults(func=cmd_reduce_3sat)

    s = sub.add_parser("robustness", help="structure statistics across actions")
    s.add_argument("--setting")
    s.add_argument("--samples")
    s.add_argument("--m", type=int, default=10)
    s.add_argument("--out")
    s.set_defaults(func=cmd_robustness)

    s = sub.add_parser("pilot", help="draw a pilot subsample within an example budget")
    s.add_argument("--samples", required=True)
    s.add_argument("--k", type=float, required=True)
    s.add_argument("--r", type=int, default=1)
    s.add_argument("--out")
    s.set_defaults(func=cmd_pilot)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.func(args)
    except (InputError, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NotImplementableError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ResourceError, NumericalError, FitError) as exc:
        print(f"failed: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ContractError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
