"""Covariant harmonic oscillator: Lorentz boosts as light-cone squeezes."""

__version__ = "0.1.0"

# Fourier kernel exp{i(s_z q_z z + s_t q_0 t)} under which the transform of
# the boosted space-time state is the boosted momentum-energy state.
CONVENTION_SIGNS = (1, 1)
