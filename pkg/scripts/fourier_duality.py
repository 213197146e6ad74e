"""Transform the sampled space-time amplitude and compare with the momentum closed form.

Also shows what the opposite-sign kernel produces: the state of the
opposite rapidity, which is why the package fixes a same-sign convention.
"""

import argparse

import numpy as np

from covosc import CONVENTION_SIGNS
from covosc import analysis as an
from covosc import numerics as nm
from covosc.oscillator import OscillatorState


def max_error(eta, signs, grid, compare_eta):
    s = OscillatorState(0, 0, eta)
    g = nm.sample(an.amplitude(s), an.auto_grid(s, grid, base_extent=an.AMPLITUDE_EXTENT))
    F = nm.fourier2d(g, signs)
    ref = an.amplitude(OscillatorState(0, 0, compare_eta), nm.MOMENTUM)(*F.physical())
    return float(np.abs(F.values - ref).max())


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--eta", type=float, nargs="+", default=[0.0, 0.5, 1.0, 2.0])
    p.add_argument("--grid", type=int, default=256)
    args = p.parse_args()

    flipped = (CONVENTION_SIGNS[0], -CONVENTION_SIGNS[1])
    print(f"{'eta':>5} {'same-sign vs phi_eta':>22} {'opposite vs phi_eta':>20} {'opposite vs phi_-eta':>21}")
    for eta in args.eta:
        print(
            f"{eta:5.2f} {max_error(eta, CONVENTION_SIGNS, args.grid, eta):22.2e}"
            f" {max_error(eta, flipped, args.grid, eta):20.2e}"
            f" {max_error(eta, flipped, args.grid, -eta):21.2e}"
        )


if __name__ == "__main__":
    main()
