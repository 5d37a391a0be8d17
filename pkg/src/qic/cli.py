"""Command-line entry point ``qic``; every subcommand writes CSV."""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import complement, harness, monotones, tcm
from .densecore import random_density, random_pure_states
from .lhvcomm import PatternLibrary
from .stateio import read_state

RELATIONS = {
    "pure": "pure",
    "three-qubit": "three-qubit",
    "two-qubit": "two-qubit",
    # numeric aliases kept for compatibility with existing scripts
    "4.6": "pure",
    "4.7": "three-qubit",
    "4.23": "two-qubit",
}


def _out(args):
    return getattr(args, "out", None)


def cmd_tcm(args) -> int:
    cfg = tcm.TCMConfig.parse(args.field, args.atoms)
    trace = tcm.simulate(cfg, tcm.time_grid(args.tmax, args.dt), full=not args.fast)
    harness.write_csv(tcm.TangleTrace.COLUMNS, trace.rows(), _out(args))
    return 0


def _monotone_rows(state):
    dims = list(state.dims)
    rho = state.density()
    rows = []
    if state.is_vector and len(dims) == 2:
        rows.append(("entropy_of_entanglement", float(monotones.entropy_of_entanglement(state.data, dims))))
        rows.append(("i_tangle", float(monotones.i_tangle_pure(state.data, dims))))
    if len(dims) == 2:
        lc, lt = monotones.lower_bounds(rho, dims)
        rows.append(("negativity", float(monotones.negativity(rho, dims))))
        rows.append(("L_C", float(lc)))
        rows.append(("L_tau", float(lt)))
    if dims == [2, 2]:
        rows.append(("concurrence", float(monotones.concurrence_two_qubit(rho))))
        rows.append(("tangle", float(monotones.tangle_two_qubit(rho))))
        rows.append(("eof", float(monotones.eof_two_qubit(rho))))
    rows.append(("von_neumann_entropy", float(monotones.von_neumann_entropy(rho))))
    return rows


def cmd_monotone(args) -> int:
    state = read_state(args.state)
    harness.write_csv(("measure", "value"), _monotone_rows(state), _out(args))
    return 0


def cmd_isotropic(args) -> int:
    rows = []
    for w in np.linspace(0, 1, args.grid):
        fam = monotones.IsotropicFamily.from_omega(args.d, float(w))
        rho = monotones.isotropic_state(fam)
        lc, lt = monotones.lower_bounds(rho, [args.d, args.d])
        tau = float(monotones.tangle_two_qubit(rho)) if args.d == 2 else float("nan")
        rows.append((fam.omega, fam.fidelity, monotones.isotropic_lc_analytic(fam), float(lc), float(lt), tau))
    harness.write_csv(("omega", "fidelity", "L_C_analytic", "L_C", "L_tau", "tangle"), rows, _out(args))
    return 0


def cmd_complementarity(args) -> int:
    relation = RELATIONS[args.relation]
    rng = np.random.default_rng(args.seed)
    rows = []
    if relation == "pure":
        for k, psi in enumerate(random_pure_states(args.samples, 2**args.n, rng)):
            rows.append((k, relation, args.n, complement.check_pure_relation(psi)))
    elif relation == "three-qubit":
        for k, psi in enumerate(random_pure_states(args.samples, 8, rng)):
            rows.append((k, relation, 3, complement.check_three_qubit_relation(psi)))
    else:
        for k in range(args.samples):
            res = complement.check_two_qubit_relations(random_density(4, rng))
            rows.append((k, relation, 2, res["eta_total"]))
    harness.write_csv(("sample", "relation", "n", "residual"), rows, _out(args))
    return 0


def _diff_output(circ, signs, label, args) -> int:
    report = harness.dual_run(circ, signs, args.scope, args.seed,
                              allow_experimental=getattr(args, "allow_experimental_p", False))
    if getattr(args, "detail", False):
        rows = [(m.letters, str(a), str(b)) for m, a, b in report.mismatches]
        harness.write_csv(("measurement", "stabilizer", "lhv"), rows, _out(args))
    else:
        harness.write_csv(("circuit", "n", "signs", "total", "matches", "mismatches"),
                          [(label, circ.n, signs, report.total, report.matches, len(report.mismatches))],
                          _out(args))
    return 1 if report.mismatches else 0


def _consistency_output(circ, signs, label, args) -> int:
    rep = harness.consistency_run(circ, signs)
    harness.write_csv(("circuit", "n", "elements", "assignments", "checked", "failures", "bits"),
                      [(label, rep.n, rep.elements, rep.assignments, rep.checked, len(rep.failures), rep.bits)],
                      _out(args))
    return 1 if rep.failures else 0


def cmd_ghz(args) -> int:
    if args.mode == "mermin":
        rep = harness.mermin_demo()
        rows = [
            ("three", rep.assignments, rep.survivors, ";".join(map(str, rep.xxx_values)), str(rep.stabilizer_xxx)),
            ("two", rep.assignments, rep.control_survivors, ";".join(map(str, rep.control_xxx_values)),
             str(rep.stabilizer_xxx)),
        ]
        harness.write_csv(("constraints", "assignments", "survivors", "lhv_xxx", "stabilizer_xxx"), rows, _out(args))
        return 0 if rep.contradiction else 1
    circ = harness.build_ghz_circuit(args.n)
    label = f"ghz:{args.n}"
    if args.mode == "diff":
        return _diff_output(circ, "ghz", label, args)
    return _consistency_output(circ, "ghz", label, args)


def cmd_cluster(args) -> int:
    circ = harness.build_cluster_circuit(args.shape)
    if args.mode == "diff":
        return _diff_output(circ, "checkerboard", args.shape, args)
    return _consistency_output(circ, "checkerboard", args.shape, args)


def cmd_gk_diff(args) -> int:
    with open(args.circuit) as fh:
        circ = harness.parse_circuit(fh.read())
    return _diff_output(circ, args.signs, args.circuit, args)


def cmd_pattern(args) -> int:
    res = harness.sequence_pattern(args.sequence, args.input, PatternLibrary())
    p = res.pattern
    rows = [(",".join(res.gates), res.input, p.n, " ".join(map(str, sorted(p.centers))),
             str(res.element), p.measurement().letters, str(res.result), int(res.element_sign_ok))]
    harness.write_csv(("sequence", "input", "sites", "centers", "element", "measured", "output",
                       "element_in_stabilizer"), rows, _out(args))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qic", description="Entanglement and Clifford-simulation experiments (CSV output).")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--out", help="write CSV here instead of stdout")
        p.set_defaults(func=func)
        return p

    p = add("tcm", cmd_tcm, "two-atom Tavis-Cummings tangles over time")
    p.add_argument("--field", default="fock:10", help="fock:N or coherent:ALPHA")
    p.add_argument("--atoms", default="ee", help="ee, gg, sym-eg or sym-ggee")
    p.add_argument("--tmax", type=float, default=100.0)
    p.add_argument("--dt", type=float, default=1.0)
    p.add_argument("--fast", action="store_true", help="skip the atom/field marginal tangles")

    p = add("monotone", cmd_monotone, "entanglement measures of a state file")
    p.add_argument("--state", required=True)

    p = add("isotropic", cmd_isotropic, "lower bounds on the isotropic family")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--grid", type=int, default=50)

    p = add("complementarity", cmd_complementarity, "residuals of complementarity identities")
    p.add_argument("--relation", choices=list(RELATIONS), required=True)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=3, help="qubit count for the pure-state relation")

    def add_diff_flags(p):
        p.add_argument("--scope", default="all", help="all or sample:K")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--detail", action="store_true", help="list mismatching measurements")

    p = add("ghz", cmd_ghz, "GHZ-state checks")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("mode", choices=["diff", "consistency", "mermin"])
    add_diff_flags(p)

    p = add("cluster", cmd_cluster, "cluster-state checks")
    p.add_argument("--shape", default="chain:5", help="chain:N or grid:RxC")
    p.add_argument("mode", choices=["diff", "consistency"])
    add_diff_flags(p)

    p = add("gk-diff", cmd_gk_diff, "compare both simulators on a circuit file")
    p.add_argument("--circuit", required=True)
    p.add_argument("--signs", choices=["ghz", "checkerboard"], default="ghz")
    p.add_argument("--allow-experimental-p", action="store_true",
                   help="let P and Pauli gates through to the LHV model")
    add_diff_flags(p)

    p = add("pattern", cmd_pattern, "evaluate a chain of single-qubit gate patterns")
    p.add_argument("--sequence", required=True, help='comma-separated gates, e.g. "H,P,H"')
    p.add_argument("--input", required=True, choices=["X", "Y", "Z"])
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"qic: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
