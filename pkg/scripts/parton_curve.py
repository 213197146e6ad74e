"""Light-cone concentration and the Gaussian parton-proxy curve as the rapidity grows."""

import argparse

import numpy as np

from covosc import analysis as an
from covosc import numerics as nm
from covosc.oscillator import OscillatorState


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--eta", type=float, nargs="+", default=[0.5, 1.0, 2.0, 3.0, 4.0])
    args = p.parse_args()

    print(f"{'eta':>5} {'concentration':>14} {'closed form':>12} {'var(x)':>10} {'excess kurt':>12}")
    for eta in args.eta:
        s = OscillatorState(0, 0, eta)
        share = an.light_cone_concentration(s, nm.MOMENTUM)
        curve = an.parton_curve(eta)
        print(
            f"{eta:5.2f} {share:14.8f} {an.concentration_law(eta):12.8f}"
            f" {curve.variance:10.6f} {curve.excess_kurtosis:12.1e}"
        )
    print(f"variance limit of x = q_z e^-eta: {0.25:.6f}; at eta={args.eta[-1]:g}:"
          f" {(1 + np.exp(-4 * args.eta[-1])) / 4:.6f} (closed form)")


if __name__ == "__main__":
    main()
