"""Measured ground-state widths against the closed-form laws over a rapidity sweep.

    python scripts/width_scan.py --eta-max 3 --steps 13
"""

import argparse

import numpy as np

from covosc import analysis as an


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--eta-max", type=float, default=3.0)
    p.add_argument("--steps", type=int, default=13)
    p.add_argument("--grid", type=int, default=256)
    args = p.parse_args()

    etas = np.linspace(0.0, args.eta_max, args.steps)
    print(f"{'eta':>6} {'sigma_z':>12} {'law':>12} {'sigma_qz':>12} {'sigma_u':>12} {'sigma_v':>12} {'worst err':>10}")
    for row in an.width_scan(etas, args.grid):
        law = an.width_law(row.eta)
        err = max(
            abs(row.sigma_z - law.sigma_z),
            abs(row.sigma_qz - law.sigma_qz),
            abs(row.sigma_u - law.sigma_u),
            abs(row.sigma_v - law.sigma_v),
        )
        print(
            f"{row.eta:6.3f} {row.sigma_z:12.8f} {law.sigma_z:12.8f} {row.sigma_qz:12.8f}"
            f" {row.sigma_u:12.8f} {row.sigma_v:12.8f} {err:10.1e}"
        )


if __name__ == "__main__":
    main()
