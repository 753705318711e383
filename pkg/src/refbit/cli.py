"""Command-line interface: ``refbit <subcommand> ...``.

Every subcommand prints one record, as JSON (default) or CSV. The CSV
columns per subcommand are

  multiplicity   twice_j,multiplicity
  distribution   twice_j,weight
  fidelity       value,method,success_probability,clamped,argmax_l
  bounds, gate   quantity,value
  scan           alpha,m,fidelity
  verify         case,analytic,numeric,abs_err,pass
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from . import conversion as cv
from . import gate
from .distributions import asymptotic_distribution, sector_distribution
from .output import dumps_csv, dumps_json
from .su2 import Spin, tensor_power_multiplicities

FIDELITY_METHODS = {
    "single-copy": None,
    "det-iso": cv.det_iso_fidelity,
    "prob-opt": cv.prob_opt_fidelity,
    "prob-filter": cv.prob_filter_fidelity,
    "det-upper": cv.det_upper_bound,
    "det-asym": cv.det_asymptotic_fidelity,
    "prob-window": cv.prob_upper_bound_window,
    "mp-exact": None,
    "mp-asym": None,
}


class Output:
    def __init__(self, results, header, rows, parameters=None, seed=None, tolerances=None):
        self.results = results
        self.header = header
        self.rows = rows
        self.parameters = parameters or {}
        self.seed = seed
        self.tolerances = tolerances or {}


def _task(a) -> cv.ConversionTask:
    missing = [f"--{n}" for n in ("n", "twice_j", "m", "twice_k") if getattr(a, n) is None]
    if missing:
        raise ValueError(f"missing {', '.join(m.replace('_', '-') for m in missing)}")
    return cv.ConversionTask(a.n, Spin(a.twice_j), a.m, Spin(a.twice_k))


def _task_params(a):
    return {"n": a.n, "twice_j": a.twice_j, "m": a.m, "twice_k": a.twice_k}


def cmd_multiplicity(a):
    t = tensor_power_multiplicities(a.n, Spin(a.twice_j))
    return Output(t.to_json(), ["twice_j", "multiplicity"], [(k, str(v)) for k, v in t.items()], {"n": a.n, "twice_j": a.twice_j})


def cmd_distribution(a):
    j = Spin(a.twice_j)
    d = asymptotic_distribution(a.n, j) if a.asymptotic else sector_distribution(a.n, j)
    params = {"n": a.n, "twice_j": a.twice_j, "asymptotic": a.asymptotic}
    return Output(d.to_json(), ["twice_j", "weight"], list(d.items()), params)


def cmd_fidelity(a):
    if a.method == "single-copy":
        if a.twice_j is None or a.twice_k is None:
            raise ValueError("single-copy needs --twice-j and --twice-k")
        res = cv.single_copy_fidelity(Spin(a.twice_j), Spin(a.twice_k))
    elif a.method in ("mp-exact", "mp-asym"):
        if a.n is None or a.twice_k is None:
            raise ValueError(f"{a.method} needs --n and --twice-k")
        if a.twice_j not in (None, 1) or a.m not in (None, 1):
            raise ValueError(f"{a.method} converts refbits (--twice-j 1) into one pair (--m 1)")
        fn = cv.mp_fidelity_exact if a.method == "mp-exact" else cv.mp_asymptotic
        res = fn(a.n, Spin(a.twice_k))
    else:
        res = FIDELITY_METHODS[a.method](_task(a))
    row = [res.value, res.method.value, res.success_probability, res.clamped, res.argmax_l]
    params = dict(_task_params(a), method=a.method)
    return Output(res.to_json(), ["value", "method", "success_probability", "clamped", "argmax_l"], [row], params)


def _require(a, *names):
    missing = [n for n in names if getattr(a, n) is None]
    if missing:
        raise ValueError(f"missing {', '.join('--' + n.replace('_', '-') for n in missing)}")


def cmd_bounds(a):
    if a.kind == "gate":
        b = gate.gate_fidelity_bounds(_task(a))
        results = {"lower": b.lower, "upper": b.upper}
        params = _task_params(a)
    elif a.kind == "analyzer":
        _require(a, "n", "twice_j", "m")
        results = {"value": cv.analyzer_filter_lower_bound(a.n, Spin(a.twice_j), a.m)}
        params = {"n": a.n, "twice_j": a.twice_j, "m": a.m}
    elif a.kind == "success-prob":
        _require(a, "n", "twice_j", "twice_k", "ratio")
        results = {"value": cv.success_probability_bound(a.n, Spin(a.twice_j), Spin(a.twice_k), a.ratio)}
        params = {"n": a.n, "twice_j": a.twice_j, "twice_k": a.twice_k, "ratio": a.ratio}
    else:
        _require(a, "twice_j")
        results = {"value": cv.unbreakable_bound(Spin(a.twice_j))}
        params = {"twice_j": a.twice_j}
    params["kind"] = a.kind
    return Output(results, ["quantity", "value"], sorted(results.items()), params)


def cmd_scan(a):
    if a.steps < 1 or a.alpha_max < a.alpha_min:
        raise ValueError("need --steps >= 1 and --alpha-max >= --alpha-min")
    alphas = np.linspace(a.alpha_min, a.alpha_max, a.steps)
    pts = cv.two_copy_analyzer_scan(Spin(a.twice_j), alphas, jobs=a.jobs)
    best = max(pts, key=lambda p: p.fidelity)
    results = {
        "points": [{"alpha": p.alpha, "m": p.m, "fidelity": p.fidelity} for p in pts],
        "argmax": {"alpha": best.alpha, "m": best.m, "fidelity": best.fidelity},
    }
    params = {"twice_j": a.twice_j, "alpha_min": a.alpha_min, "alpha_max": a.alpha_max, "steps": a.steps}
    return Output(results, ["alpha", "m", "fidelity"], [(p.alpha, p.m, p.fidelity) for p in pts], params)


def cmd_gate(a):
    if a.kind == "su2":
        _require(a, "twice_j", "twice_k")
        results = {"value": gate.su2_gate_fidelity(Spin(a.twice_j), Spin(a.twice_k))}
        params = {"twice_j": a.twice_j, "twice_k": a.twice_k}
    elif a.kind == "general":
        _require(a, "file")
        with open(a.file) as fh:
            rep = gate.RepData.from_json(json.load(fh))
        value, label = gate.general_prob_fidelity(rep)
        results = {"value": value, "argmax": label}
        if len(rep.input_irreps) == 1 and rep.input_irreps[0].mult == 1:
            results["memoryless"] = gate.optimal_is_memoryless(rep)
        params = {"file": a.file}
    elif a.kind == "cloning":
        _require(a, "d")
        results = gate.unitary_cloning_fidelities(a.d)
        params = {"d": a.d}
    else:
        _require(a, "d")
        results = {"value": gate.charge_conjugation_fidelity(a.d)}
        params = {"d": a.d}
    params["kind"] = a.kind
    return Output(results, ["quantity", "value"], sorted(results.items()), params)


def cmd_verify(a):
    from .oracle.cases import run_cases

    recs = run_cases(a.case, seed=a.seed, tolerance=a.tolerance, jobs=a.jobs)
    results = [r.to_json() for r in recs]
    rows = [(r.case, r.analytic, r.numeric, r.abs_err, r.passed) for r in recs]
    params = {"case": a.case, "tolerance": a.tolerance}
    tols = {} if a.tolerance is None else {"override": a.tolerance}
    return Output(results, ["case", "analytic", "numeric", "abs_err", "pass"], rows, params, seed=a.seed, tolerances=tols)


def _common(defaults: bool) -> argparse.ArgumentParser:
    # shared by the top-level parser and every subparser, so options work in either position
    p = argparse.ArgumentParser(add_help=False)
    dflt = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
    p.add_argument("--format", choices=["json", "csv"], default=dflt("json"))
    p.add_argument("--out", default=dflt(None), help="write here instead of stdout")
    p.add_argument("--jobs", type=int, default=dflt(1), help="worker processes for scan and verify")
    return p


def _task_args(p, need=("n", "twice_j", "m", "twice_k")):
    if "n" in need:
        p.add_argument("--n", type=int, help="input copies N")
    if "twice_j" in need:
        p.add_argument("--twice-j", type=int, help="twice the input spin, 2J")
    if "m" in need:
        p.add_argument("--m", type=int, help="output copies M")
    if "twice_k" in need:
        p.add_argument("--twice-k", type=int, help="twice the output spin, 2K")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="refbit",
        description="Reference-frame conversion calculators for SU(2) Bell pairs.",
        epilog=__doc__.split("\n\n", 1)[1],
        formatter_class=argparse.RawDescriptionHelpFormatter,
        parents=[_common(True)],
    )
    parser.add_argument("--version", action="version", version=f"refbit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common(False)

    p = sub.add_parser("multiplicity", parents=[common], help="tensor-power multiplicity table")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--twice-j", type=int, required=True)
    p.set_defaults(func=cmd_multiplicity)

    p = sub.add_parser("distribution", parents=[common], help="sector weights of N Bell pairs")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--twice-j", type=int, required=True)
    p.add_argument("--asymptotic", action="store_true", help="use the Gaussian large-N form")
    p.set_defaults(func=cmd_distribution)

    p = sub.add_parser("fidelity", parents=[common], help="conversion fidelities")
    p.add_argument("method", choices=list(FIDELITY_METHODS))
    _task_args(p)
    p.set_defaults(func=cmd_fidelity)

    p = sub.add_parser("bounds", parents=[common], help="fidelity and probability bounds")
    p.add_argument("kind", choices=["gate", "analyzer", "success-prob", "unbreakable"])
    _task_args(p)
    p.add_argument("--ratio", type=float, help="M/N for success-prob")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("scan", parents=[common], help="parameter scans")
    p.add_argument("which", choices=["two-copy"])
    p.add_argument("--twice-j", type=int, required=True)
    p.add_argument("--alpha-min", type=float, default=1.5)
    p.add_argument("--alpha-max", type=float, default=3.0)
    p.add_argument("--steps", type=int, default=151)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("gate", parents=[common], help="gate conversion fidelities")
    p.add_argument("kind", choices=["su2", "general", "cloning", "charge-conj"])
    _task_args(p, need=("twice_j", "twice_k"))
    p.add_argument("--file", help="representation data JSON for 'general'")
    p.add_argument("--d", type=int, help="dimension for cloning and charge-conj")
    p.set_defaults(func=cmd_gate)

    p = sub.add_parser("verify", parents=[common], help="analytic versus numeric cross-checks")
    p.add_argument("--case", action="append", help="run only this case (repeatable)")
    p.add_argument("--tolerance", type=float, help="override every case tolerance")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--list", action="store_true", help="list case names and exit")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    if a.command == "verify" and a.list:
        from .oracle.cases import case_names

        print("\n".join(case_names()))
        return 0
    if a.jobs < 1:
        parser.error("--jobs must be at least 1")
    try:
        out = a.func(a)
    except (ValueError, KeyError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else str(e)
        parser.error(msg)
    if a.format == "json":
        record = {
            "command": a.command,
            "parameters": out.parameters,
            "results": out.results,
            "metadata": {"version": __version__, "seed": out.seed, "tolerances": out.tolerances},
        }
        text = dumps_json(record)
    else:
        text = dumps_csv(out.header, out.rows)
    if a.out:
        with open(a.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if a.command == "verify":
        failed = [r["case"] for r in out.results if not r["pass"]]
        if failed:
            print("failed: " + ", ".join(failed), file=sys.stderr)
            return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
