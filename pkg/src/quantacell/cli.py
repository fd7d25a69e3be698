"""Command-line front end; every experiment at desk scale, plot-ready output.

Five subcommands: qubit (optimal single-qubit protocol plus an objective
curve), array (parallel versus collective charging), optimize (constrained
time-optimal search), entropy (bipartite entanglement along an evolution),
bounds (speed-limit comparison for a stored Hamiltonian). Outputs are JSON and
single-header CSV files in --out; nothing varies between identical seeded runs,
timestamps included, so reruns are byte-identical.

Angles are read and written in units of pi unless --radians is given. Exit
codes: 0 success, 2 invalid input, 3 runtime failure (non-convergence, or no
arrival where one is needed).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import asdict, dataclass

import numpy as np

from .arrays import ArraySpec, arrival_time, charge, path_lengths, speed_limit_bounds
from .qubit import DriveConstraint, objective_f, optimal_time
from .serialize import load_matrix, load_state, matrix_to_obj, save_matrix, write_series_csv
from .timeopt import OptimizationConfig, charging_time, entropy_trace, optimize

__all__ = ["RunConfig", "main"]


@dataclass(frozen=True)
class RunConfig:
    command: str
    parameters: dict
    output_path: str
    format: str


def _write_json(path, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")


def _angle_out(radians_flag: bool, value: float) -> float:
    return value if radians_flag else value / math.pi


def _cmd_qubit(cfg: RunConfig) -> int:
    p = cfg.parameters
    theta0 = p["theta0"] if p["radians"] else p["theta0"] * math.pi
    constraint = DriveConstraint(p["emax"])
    result = optimal_time(theta0, p["r"], constraint, p["alpha"])

    summary = {
        "theta0": _angle_out(p["radians"], theta0),
        "r": p["r"],
        "alpha": p["alpha"],
        "e_max": p["emax"],
        "angle_unit": "rad" if p["radians"] else "pi",
        "t_opt": result.t_opt,
        "theta_final": _angle_out(p["radians"], result.theta_final),
        "work": result.work,
        "power": result.power,
        "objective": result.objective,
        "objective_per_r": None if p["r"] == 0 else result.objective / p["r"],
        "attained": result.attained,
    }
    if p["r"] == 0:
        summary["warning"] = (
            "r = 0: the state is maximally mixed, no work is extractable; "
            "times and angles stay defined"
        )

    t_grid = np.linspace(0.0, 2.0 * math.pi / p["emax"], p["samples"] + 1)[1:]
    rows = [
        (float(t), objective_f(theta0, p["r"], constraint, float(t), p["alpha"]))
        for t in t_grid
    ]

    summary_path = os.path.join(cfg.output_path, "qubit_summary.json")
    curve_path = os.path.join(cfg.output_path, "qubit_objective.csv")
    _write_json(summary_path, summary)
    write_series_csv(curve_path, ("t", "value"), rows)
    print(summary_path)
    print(curve_path)
    return 0


def _cmd_array(cfg: RunConfig) -> int:
    p = cfg.parameters
    spec = ArraySpec(n=p["n"], eps=p["eps"], e_max=p["emax"])
    outcome = charge(
        spec,
        mode=p["mode"],
        propagation=p["propagation"],
        compensate=p["compensate"],
        radius=p["radius"],
    )
    par = charge(spec, mode="parallel", propagation="bare")
    glob = charge(spec, mode="global", propagation="bare")
    paths = path_lengths(spec, p["path_samples"])

    doc = {
        "spec": {"n": spec.n, "eps": spec.eps, "e_max": spec.e_max, "lam": spec.lam},
        "outcome": asdict(outcome),
        "comparison": {
            "parallel": asdict(par),
            "global": asdict(glob),
            "ratio": glob.power_per_qubit / par.power_per_qubit,
        },
        "path_lengths": {
            "global": paths["global"],
            "parallel": paths["parallel"],
            "samples": p["path_samples"],
        },
    }
    out_path = os.path.join(cfg.output_path, "array_result.json")
    _write_json(out_path, doc)
    print(out_path)
    return 0


def _parse_n_range(text: str) -> list:
    if "-" in text:
        lo, hi = text.split("-", 1)
        values = list(range(int(lo), int(hi) + 1))
        if not values:
            raise ValueError(f"empty n range {text!r}")
        return values
    return [int(text)]


def _cmd_optimize(cfg: RunConfig) -> int:
    p = cfg.parameters
    ns = _parse_n_range(p["n"])
    runs = []
    all_converged = True
    for n in ns:
        lam = n * p["emax"]
        config = OptimizationConfig(
            n=n,
            lam=lam,
            fidelity_target=p["fidelity"],
            restarts=p["restarts"],
            seed=p["seed"],
            max_iters=p["max_iters"],
        )
        result = optimize(config)
        all_converged = all_converged and result.converged
        ham_name = f"optimize_hamiltonian_n{n}.json"
        save_matrix(os.path.join(cfg.output_path, ham_name), result.hamiltonian)
        runs.append(
            {
                "n": n,
                "lam": lam,
                "t_perp": result.t_perp if result.converged else None,
                "speed_limit": math.pi / lam,
                "achieved_fidelity": result.achieved_fidelity,
                "converged": result.converged,
                "restarts_used": result.restarts_used,
                "objective_history": [[i, t] for i, t in result.objective_history],
                "hamiltonian": matrix_to_obj(result.hamiltonian),
                "hamiltonian_file": ham_name,
            }
        )

    doc = {
        "seed": p["seed"],
        "e_max": p["emax"],
        "fidelity_target": p["fidelity"],
        "restarts": p["restarts"],
        "runs": runs,
    }
    out_path = os.path.join(cfg.output_path, "optimize_result.json")
    _write_json(out_path, doc)
    print(out_path)

    if len(ns) > 1:
        rows = [(r["n"], r["t_perp"]) for r in runs if r["converged"]]
        sweep_path = os.path.join(cfg.output_path, "optimize_sweep.csv")
        write_series_csv(sweep_path, ("n", "t_perp"), rows)
        print(sweep_path)

    if not all_converged:
        print("optimization did not converge for every n; best-so-far written",
              file=sys.stderr)
        return 3
    return 0


def _parse_keep(text: str) -> list:
    return [int(s) for s in text.split(",") if s.strip() != ""]


def _cmd_entropy(cfg: RunConfig) -> int:
    p = cfg.parameters
    h = load_matrix(p["hamiltonian"])
    n = p["n"]
    keep = _parse_keep(p["keep"])
    if p["t_end"] is not None:
        t_end = p["t_end"]
    else:
        t_end = charging_time(h, n, p["fidelity"])
        if t_end is None:
            print(
                "no charging arrival found in the scan window; pass --t-end to "
                "set the trace window explicitly",
                file=sys.stderr,
            )
            return 3
    if p["t_samples"] < 1:
        raise ValueError("t-samples must be >= 1")
    grid = np.linspace(0.0, t_end, p["t_samples"])
    trace = entropy_trace(h, n, keep, grid)
    out_path = os.path.join(cfg.output_path, "entropy.csv")
    write_series_csv(out_path, ("t", "value"), trace)
    print(out_path)
    return 0


def _load_state_spec(text: str, dim: int) -> np.ndarray:
    if text == "zeros":
        v = np.zeros(dim, dtype=complex)
        v[0] = 1.0
        return v
    if text == "ones":
        v = np.zeros(dim, dtype=complex)
        v[-1] = 1.0
        return v
    v = load_state(text)
    norm = np.linalg.norm(v)
    if norm < 1e-12:
        raise ValueError(f"state file {text!r} holds a zero vector")
    return v / norm


def _cmd_bounds(cfg: RunConfig) -> int:
    p = cfg.parameters
    h = load_matrix(p["hamiltonian"])
    dim = h.shape[0]
    initial = _load_state_spec(p["initial"], dim)
    target = _load_state_spec(p["target"], dim)
    bounds = speed_limit_bounds(h, initial, target)
    arrival = arrival_time(h, initial, target, fidelity_target=p["fidelity"])

    def marker(x: float):
        return "inf" if math.isinf(x) else x

    doc = {
        "mt": marker(bounds["mt"]),
        "ml": marker(bounds["ml"]),
        "actual_arrival": arrival,
        "fidelity_target": p["fidelity"],
    }
    out_path = os.path.join(cfg.output_path, "bounds.json")
    _write_json(out_path, doc)
    print(out_path)
    return 0


_HANDLERS = {
    "qubit": (_cmd_qubit, "json"),
    "array": (_cmd_array, "json"),
    "optimize": (_cmd_optimize, "json"),
    "entropy": (_cmd_entropy, "csv"),
    "bounds": (_cmd_bounds, "json"),
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quantacell",
        description="Quantum-battery charging experiments: optimal single-qubit "
        "protocols, array charging comparisons, constrained time-optimal search.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    q = sub.add_parser("qubit", help="optimal charging protocol for one qubit")
    q.add_argument("--theta0", type=float, default=0.0,
                   help="initial polar angle (units of pi unless --radians)")
    q.add_argument("--r", type=float, default=1.0, help="Bloch radius")
    q.add_argument("--alpha", type=float, default=1.0,
                   help="objective exponent in W/T^alpha")
    q.add_argument("--emax", type=float, default=1.0, help="spectral gap budget")
    q.add_argument("--samples", type=int, default=200,
                   help="rows in the objective-curve CSV")
    q.add_argument("--radians", action="store_true",
                   help="read and write angles in radians instead of pi units")
    q.add_argument("--out", default=".", help="output directory")

    a = sub.add_parser("array", help="charge an n-qubit array both ways")
    a.add_argument("--n", type=int, required=True, help="number of qubits")
    a.add_argument("--eps", type=float, default=1.0, help="per-qubit level spacing")
    a.add_argument("--emax", type=float, default=1.0,
                   help="per-qubit spectral gap budget")
    a.add_argument("--mode", choices=["parallel", "global"], default="parallel")
    a.add_argument("--propagation", choices=["bare", "total"], default="bare")
    a.add_argument("--no-compensate", dest="compensate", action="store_false",
                   help="skip the detuning compensation under total propagation")
    a.add_argument("--radius", type=float, default=1.0,
                   help="initial per-qubit Bloch radius (thermal start when < 1)")
    a.add_argument("--path-samples", type=int, default=1000,
                   help="trajectory samples for path lengths")
    a.add_argument("--out", default=".", help="output directory")

    o = sub.add_parser("optimize", help="search for the fastest bounded charger")
    o.add_argument("--n", required=True,
                   help="qubit count, or an inclusive range like 1-4")
    o.add_argument("--emax", type=float, default=1.0,
                   help="per-qubit gap budget; the search allows n*emax")
    o.add_argument("--fidelity", type=float, default=0.999,
                   help="arrival fidelity target")
    o.add_argument("--restarts", type=int, default=8)
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--max-iters", type=int, default=6000,
                   help="objective evaluations per restart")
    o.add_argument("--out", default=".", help="output directory")

    e = sub.add_parser("entropy", help="entanglement entropy along an evolution")
    e.add_argument("--hamiltonian", required=True, help="matrix JSON file")
    e.add_argument("--n", type=int, required=True, help="number of qubits")
    e.add_argument("--keep", default="0,1",
                   help="comma-separated site indices of the kept block")
    e.add_argument("--t-samples", type=int, default=201, dest="t_samples")
    e.add_argument("--t-end", type=float, default=None, dest="t_end",
                   help="trace window end (default: the charging arrival time)")
    e.add_argument("--fidelity", type=float, default=0.999,
                   help="arrival target used when --t-end is absent")
    e.add_argument("--out", default=".", help="output directory")

    b = sub.add_parser("bounds", help="speed-limit bounds versus actual arrival")
    b.add_argument("--hamiltonian", required=True, help="matrix JSON file")
    b.add_argument("--initial", default="zeros",
                   help="'zeros', 'ones', or a state JSON file")
    b.add_argument("--target", default="ones",
                   help="'zeros', 'ones', or a state JSON file")
    b.add_argument("--fidelity", type=float, default=1.0 - 1e-9,
                   help="fidelity counted as arrival")
    b.add_argument("--out", default=".", help="output directory")

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    params = {k: v for k, v in vars(args).items() if k not in ("command", "out")}
    handler, fmt = _HANDLERS[args.command]
    cfg = RunConfig(
        command=args.command,
        parameters=params,
        output_path=args.out,
        format=fmt,
    )
    try:
        os.makedirs(cfg.output_path, exist_ok=True)
        return handler(cfg)
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
