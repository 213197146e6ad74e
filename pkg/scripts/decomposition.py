"""Rest-frame expansion of the boosted ground state: numerical weights, closed form, tail.

The tail left after order N is tanh(eta)^(2N+2), so the order needed for
a given completeness grows quickly with rapidity.
"""

import argparse
import warnings

import numpy as np

from covosc import analysis as an


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--eta", type=float, default=1.0)
    p.add_argument("--order", type=int, default=40)
    p.add_argument("--show", type=int, default=12, help="rows of the weight table to print")
    args = p.parse_args()

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        d = an.decompose(args.eta, args.order)
    oracle = an.mehler_weights(args.eta, args.order)
    print(f"eta={args.eta:g} order={args.order} off-diagonal max={d.off_diagonal_max:.1e}")
    print(f"{'n':>3} {'|c_n|^2':>14} {'closed form':>14} {'cumulative':>18}")
    for n in range(min(args.show, args.order + 1)):
        print(f"{n:3d} {d.weights[n]:14.6e} {oracle[n]:14.6e} {d.cumulative[n]:18.15f}")
    print(f"tail 1 - sum = {d.defect:.4e}, predicted tanh^(2N+2) = {np.tanh(args.eta) ** (2 * args.order + 2):.4e}")
    for target in (1e-6, 1e-10):
        need = int(np.ceil(np.log(target) / (2 * np.log(np.tanh(abs(args.eta)))) - 1)) if args.eta else 0
        print(f"order needed for tail <= {target:g}: {max(need, 0)}")


if __name__ == "__main__":
    main()
