#!/usr/bin/env python3
"""Map the single-qubit charging trade-off.

Writes three CSVs: the objective F(T) = W/T^alpha for a few exponents, the
optimal protocol as a function of alpha, and the alpha = 1 attainability
boundary in the initial angle (above theta0 = pi/2 the supremum sits at
T -> 0+ and no finite-time optimum exists).
"""

import argparse
import csv
import math
import os

import numpy as np

from quantacell.qubit import DriveConstraint, objective_f, optimal_time

ALPHAS = (0.25, 0.5, 0.75, 1.0)


def write_rows(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)
    print(path)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--emax", type=float, default=1.0)
    ap.add_argument("--samples", type=int, default=400)
    ap.add_argument("--out", default="results")
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    c = DriveConstraint(args.emax)

    t_grid = np.linspace(0.0, 2.0 * math.pi / args.emax, args.samples + 1)[1:]
    rows = [
        [t] + [objective_f(0.0, 1.0, c, t, a) for a in ALPHAS] for t in map(float, t_grid)
    ]
    write_rows(
        os.path.join(args.out, "objective_curves.csv"),
        ["t"] + [f"f_alpha_{a}" for a in ALPHAS],
        rows,
    )

    rows = []
    for alpha in np.linspace(0.05, 1.0, 96):
        res = optimal_time(0.0, 1.0, c, float(alpha))
        rows.append([float(alpha), res.t_opt, res.theta_final / math.pi, res.objective])
    write_rows(
        os.path.join(args.out, "optimum_vs_alpha.csv"),
        ["alpha", "t_opt", "theta_final_over_pi", "objective"],
        rows,
    )

    rows = []
    for theta0 in np.linspace(0.0, 0.95 * math.pi, 96):
        res = optimal_time(float(theta0), 1.0, c, 1.0)
        rows.append(
            [float(theta0) / math.pi, int(res.attained), res.t_opt, res.power]
        )
    write_rows(
        os.path.join(args.out, "attainability_alpha1.csv"),
        ["theta0_over_pi", "attained", "t_opt", "power"],
        rows,
    )


if __name__ == "__main__":
    main()
