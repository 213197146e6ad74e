"""Executable checks of the covariant oscillator's physical claims.

Covers the eigen-structure of the Lorentz-invariant oscillator operator,
marginal widths in both representations, the squeeze ellipse, expansion
of boosted states in the rest-frame basis, light-cone concentration and
the Gaussian parton curve.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from . import numerics as nm
from .kinematics import SpaceTimePoint
from .oscillator import (
    OscillatorState,
    covariant_solution,
    hermite_functions,
    invariant_solution,
    momentum_amplitude,
    space_time_amplitude,
)

DENSITY_EXTENT = 6.0
AMPLITUDE_EXTENT = 8.0
DEFAULT_NODES = 256
MAX_ETA = 5.0
METRICS = ("mink", "pp")

_R = 1.0 / np.sqrt(2.0)
# unit vectors of each marginal axis in physical coordinates
AXES = {
    "z": (nm.SPACETIME, (1.0, 0.0)),
    "t": (nm.SPACETIME, (0.0, 1.0)),
    "u": (nm.SPACETIME, (_R, _R)),
    "v": (nm.SPACETIME, (_R, -_R)),
    "q_z": (nm.MOMENTUM, (1.0, 0.0)),
    "q_0": (nm.MOMENTUM, (0.0, 1.0)),
    "q_u": (nm.MOMENTUM, (-_R, _R)),
    "q_v": (nm.MOMENTUM, (_R, _R)),
}


def check_eta(eta: float, allow_large: bool = False) -> float:
    if not np.isfinite(eta):
        raise ValueError(f"rapidity must be finite, got {eta}")
    if abs(eta) > MAX_ETA and not allow_large:
        raise ValueError(
            f"|eta| = {abs(eta)} > {MAX_ETA}: grid cost grows like e^(2|eta|); "
            "pass allow_large=True to override"
        )
    return float(eta)


def state_extent(s: OscillatorState, base: float = DENSITY_EXTENT) -> float:
    """Rest-frame half-width that contains the state; grows with excitation."""
    return base + np.sqrt(2.0 * s.max_order)


def auto_grid(
    s: OscillatorState,
    n: int = DEFAULT_NODES,
    base_extent: Optional[float] = None,
    domain: str = nm.SPACETIME,
) -> nm.Grid2D:
    """Light-cone box with half-widths extent*e^eta along u and extent*e^-eta along v."""
    extent = state_extent(s, DENSITY_EXTENT if base_extent is None else base_extent)
    return nm.squeezed_box(s.eta, n, extent, domain)


def amplitude(s: OscillatorState, domain: str = nm.SPACETIME):
    return space_time_amplitude(s) if domain == nm.SPACETIME else momentum_amplitude(s)


def density(s: OscillatorState, domain: str = nm.SPACETIME):
    f = amplitude(s, domain)
    return lambda a, b: f(a, b) ** 2


def normalization(
    s: OscillatorState, grid: Optional[nm.Grid2D] = None, domain: str = nm.SPACETIME
) -> float:
    """Trapezoid integral of the probability density over ``grid``."""
    grid = auto_grid(s, domain=domain) if grid is None else grid
    return nm.integrate2d(nm.sample(density(s, domain), grid))


# --- Lorentz-invariant oscillator equation -----------------------------------


@dataclass(frozen=True)
class PdeResidualReport:
    lambda_best: float
    residual_l2: float
    metric: str
    grid: dict


def expected_eigenvalue(s: OscillatorState, metric: str = "mink") -> float:
    """Per-mode eigenvalues are 2n+1; the Minkowski reading halves their difference."""
    if metric == "mink":
        return float(s.n_u - s.n_t)
    return float(s.n_u + s.n_t + 1)


def oscillator_operator(g: nm.Grid2D, metric: str = "mink") -> np.ndarray:
    """Apply (1/2){(z^2 - d_z^2) -+ (t^2 - d_t^2)} to sampled values; NaN on the edge band."""
    if metric not in METRICS:
        raise ValueError(f"metric must be one of {METRICS}, got {metric!r}")
    z, t = g.physical()
    f = g.values
    d2z, d2t = nm.physical_second_derivatives(g)
    space = z * z * f - d2z
    time = t * t * f - d2t
    return 0.5 * (space - time) if metric == "mink" else 0.5 * (space + time)


def pde_residual(
    s: OscillatorState,
    metric: str = "mink",
    grid: Optional[nm.Grid2D] = None,
    allow_large_eta: bool = False,
) -> PdeResidualReport:
    """Rayleigh-quotient eigenvalue and interior residual of the sampled state."""
    check_eta(s.eta, allow_large_eta)
    grid = auto_grid(s) if grid is None else grid
    g = nm.sample(amplitude(s), grid)
    nm.check_resolved(g, density=False)
    d_psi = oscillator_operator(g, metric)
    inside = np.isfinite(d_psi)
    psi = g.values[inside]
    d_psi = d_psi[inside]
    lam = float(np.dot(psi, d_psi) / np.dot(psi, psi))
    resid = float(np.sqrt(np.sum((d_psi - lam * psi) ** 2) * g.cell_area))
    return PdeResidualReport(lam, resid, metric, g.describe())


# --- marginals and widths -------------------------------------------------------


@dataclass(frozen=True)
class Distribution1D:
    axis: str
    nodes: np.ndarray = field(repr=False)
    density: np.ndarray = field(repr=False)
    mass: float
    mean: float
    variance: float

    @classmethod
    def from_samples(cls, axis: str, nodes, density) -> "Distribution1D":
        nodes = np.asarray(nodes, dtype=float)
        density = np.asarray(density, dtype=float)
        h = nodes[1] - nodes[0]
        mass = float(density.sum() * h)
        mean = float((nodes * density).sum() * h / mass)
        var = float(((nodes - mean) ** 2 * density).sum() * h / mass)
        return cls(axis, nodes, density, mass, mean, var)

    @property
    def std(self) -> float:
        return float(np.sqrt(self.variance))

    def central_moment(self, k: int) -> float:
        h = self.nodes[1] - self.nodes[0]
        return float(((self.nodes - self.mean) ** k * self.density).sum() * h / self.mass)

    @property
    def excess_kurtosis(self) -> float:
        return self.central_moment(4) / self.variance**2 - 3.0


def _check_marginal_resolution(d: Distribution1D) -> None:
    peak = d.density.max()
    if max(d.density[0], d.density[-1]) > nm.BOUNDARY_DECAY * peak:
        raise nm.UnresolvedGridError(f"unresolved grid: {d.axis}-marginal has not decayed at the box edge")
    h = d.nodes[1] - d.nodes[0]
    if d.std < nm.MIN_SAMPLES_PER_WIDTH * h:
        raise nm.UnresolvedGridError(
            f"unresolved grid: {d.axis}-marginal width spans {d.std / h:.2f} < "
            f"{nm.MIN_SAMPLES_PER_WIDTH} spacings"
        )


def marginal(
    s: OscillatorState,
    axis: str,
    grid: Optional[nm.Grid2D] = None,
    nodes: Optional[np.ndarray] = None,
    n_line: int = DEFAULT_NODES,
) -> Distribution1D:
    """Density of one coordinate after integrating |psi|^2 (or |phi|^2) over the other.

    The integral runs along lines of constant ``axis`` clipped to the
    light-cone box, so a strongly squeezed state costs no more than a
    resting one.
    """
    if axis not in AXES:
        raise ValueError(f"axis must be one of {sorted(AXES)}, got {axis!r}")
    domain, w = AXES[axis]
    grid = auto_grid(s, domain=domain) if grid is None else grid
    if grid.domain != domain:
        raise ValueError(f"axis {axis!r} needs a {domain} grid")
    nm.check_resolved(nm.sample(density(s, domain), grid))
    auto_nodes = nodes is None
    if auto_nodes:
        nodes = nm.symmetric_nodes(nm.projection_range(grid, w), grid.n[0])
    p = nm.project(density(s, domain), grid, w, nodes, n_line)
    d = Distribution1D.from_samples(axis, nodes, p)
    if auto_nodes:
        _check_marginal_resolution(d)
    return d


@dataclass(frozen=True)
class WidthRow:
    eta: float
    sigma_z: float
    sigma_qz: float
    sigma_u: float
    sigma_v: float


def width_scan(eta_values: Iterable[float], n: int = DEFAULT_NODES) -> list[WidthRow]:
    """Measured RMS widths of the ground state at each rapidity."""
    rows = []
    for eta in eta_values:
        s = OscillatorState(0, 0, check_eta(eta))
        sig = {}
        for axis in ("z", "q_z", "u", "v"):
            domain = AXES[axis][0]
            sig[axis] = marginal(s, axis, auto_grid(s, n, domain=domain)).std
        rows.append(WidthRow(float(eta), sig["z"], sig["q_z"], sig["u"], sig["v"]))
    return rows


def width_law(eta: float) -> WidthRow:
    """Closed-form widths: sigma_u = e^eta/sqrt2, sigma_v = e^-eta/sqrt2, sigma_z^2 = cosh(2 eta)/2."""
    sz = np.sqrt(np.cosh(2 * eta) / 2)
    return WidthRow(float(eta), sz, sz, np.exp(eta) * _R, np.exp(-eta) * _R)


# --- squeeze ellipse ------------------------------------------------------------


@dataclass(frozen=True)
class EllipseGeometry:
    """Level curve of |psi|^2 measured along the light-cone axes.

    ``tilt`` is the angle of the major axis from the z axis in the (z, t)
    plane; a circle reports 0.
    """

    semi_axis_u: float
    semi_axis_v: float
    tilt: float

    @property
    def area(self) -> float:
        return float(np.pi * self.semi_axis_u * self.semi_axis_v)

    @property
    def ratio(self) -> float:
        return self.semi_axis_u / self.semi_axis_v


def ellipse(s: OscillatorState, level: Optional[float] = None, rel_tol: float = 1e-13) -> EllipseGeometry:
    """Find where |psi|^2 falls to ``level`` (default peak/e) along u and v."""
    if not s.is_ground:
        raise ValueError("ellipse geometry is defined for the ground-state family only")
    rho = density(s)
    peak = float(rho(0.0, 0.0))
    level = peak / np.e if level is None else float(level)
    if not 0 < level < peak:
        raise ValueError(f"level must lie in (0, {peak}), got {level}")

    def crossing(direction):
        g = lambda r: rho(r * direction[0], r * direction[1]) - level
        hi = 1.0
        while g(hi) > 0:
            hi *= 2.0
        return brentq(g, 0.0, hi, xtol=1e-300, rtol=rel_tol, maxiter=500)

    a = crossing(AXES["u"][1])
    b = crossing(AXES["v"][1])
    if np.isclose(a, b, rtol=1e-12, atol=0):
        tilt = 0.0
    else:
        tilt = np.pi / 4 if a > b else -np.pi / 4
    return EllipseGeometry(float(a), float(b), float(tilt))


# --- rest-frame expansion -------------------------------------------------------


@dataclass(frozen=True)
class DecompositionReport:
    """Overlaps c_n = <n,n|psi_eta> with rest-frame states."""

    eta: float
    order: int
    coefficients: np.ndarray = field(repr=False)
    off_diagonal_max: float

    @property
    def weights(self) -> np.ndarray:
        return self.coefficients**2

    @property
    def cumulative(self) -> np.ndarray:
        return np.cumsum(self.weights)

    @property
    def defect(self) -> float:
        return float(1.0 - self.weights.sum())


def mehler_weights(eta: float, order: int) -> np.ndarray:
    """Closed-form |c_n|^2 = tanh^(2n)(eta) / cosh^2(eta), n = 0..order."""
    n = np.arange(order + 1)
    return np.tanh(eta) ** (2 * n) / np.cosh(eta) ** 2


def decompose(eta: float, order: int, allow_large_eta: bool = False, warn_defect: float = 1e-6) -> DecompositionReport:
    """Expand the boosted ground state over rest-frame products h_n(z) h_m(t).

    The sampled rest-frame grid is separable, so the full overlap matrix
    is H Psi H^T; only its diagonal survives.
    """
    if order < 0:
        raise ValueError(f"truncation order must be >= 0, got {order}")
    check_eta(eta, allow_large_eta)
    half = np.sqrt(2.0 * order + 1) + 8.0
    h = min(0.5 / np.sqrt(2.0 * order + 1), np.exp(-abs(eta)) / 3)
    n = int(np.ceil(2 * half / h / 2)) * 2
    grid = nm.sample(space_time_amplitude(OscillatorState(0, 0, eta)), nm.zt_grid(n, half))
    H = hermite_functions(order, grid.axis(0))
    C = H @ grid.values @ H.T * grid.cell_area
    c = np.diag(C).copy()
    off = float(np.abs(C - np.diag(c)).max()) if order > 0 else 0.0
    report = DecompositionReport(float(eta), order, c, off)
    if report.defect > warn_defect:
        warnings.warn(
            f"completeness defect {report.defect:.3e} exceeds {warn_defect:g} at order {order}",
            stacklevel=2,
        )
    return report


# --- light-cone concentration and partons ----------------------------------------


def light_cone_concentration(
    s: OscillatorState, domain: str = nm.SPACETIME, n_outer: int = DEFAULT_NODES, n_line: int = DEFAULT_NODES
) -> float:
    """Share of probability in the double wedge around the stretched light-cone axis.

    For eta >= 0 that is |u| > |v| (|q_u| > |q_v| for momentum); for
    eta < 0 the roles swap. Any one-sided quadrant of a centred state holds
    at most half of this by inversion symmetry.
    """
    grid = auto_grid(s, domain=domain)
    k = 0 if s.eta >= 0 else 1
    w = grid.matrix[:, k]
    # The inner segment |c| wide only saturates once |c| passes the
    # contracted width, so the outer rule gets a breakpoint there.
    x, wts = np.polynomial.legendre.leggauss(n_outer)
    e, a = grid.extent[k], min(grid.extent[1 - k], grid.extent[k])
    c, cw = [], []
    for lo, hi in ((0.0, a), (a, e)):
        if hi > lo:
            c.append(lo + 0.5 * (hi - lo) * (x + 1))
            cw.append(0.5 * (hi - lo) * wts)
    c = np.concatenate(c)
    cw = np.concatenate(cw)
    c = np.concatenate([-c[::-1], c])
    cw = np.concatenate([cw[::-1], cw])
    p = nm.project(density(s, domain), grid, w, c, n_line, clip=lambda c: (-abs(c), abs(c)))
    return float(np.dot(cw, p))


def concentration_law(eta: float) -> float:
    """Ground-state wedge share (2/pi) arctan(e^(2|eta|))."""
    return float(2 / np.pi * np.arctan(np.exp(2 * abs(eta))))


def parton_curve(eta: float, x_nodes: Optional[Sequence[float]] = None, allow_large_eta: bool = False) -> Distribution1D:
    """Longitudinal-momentum marginal of |phi_eta|^2 in the proxy fraction x = q_z e^-eta.

    The rescaling keeps the curve finite as eta grows: its variance tends
    to 1/4. It is a stand-in for the parton momentum fraction, not a fit.
    """
    if eta <= 0:
        raise ValueError("parton curve needs eta > 0 (no parton limit at rest)")
    s = OscillatorState(0, 0, check_eta(eta, allow_large_eta))
    grid = auto_grid(s, domain=nm.MOMENTUM)
    scale = np.exp(eta)
    if x_nodes is None:
        q = marginal(s, "q_z", grid)
    else:
        q = marginal(s, "q_z", grid, nodes=np.asarray(x_nodes, dtype=float) * scale)
    return Distribution1D.from_samples("x", q.nodes / scale, q.density * scale)


# --- invariant versus covariant solution ----------------------------------------


def divergence_onset(bound: float = 1e6) -> float:
    """|t| beyond which exp{-(z^2 - t^2)/2} at z = 0 exceeds ``bound``."""
    return float(np.sqrt(2 * np.log(bound)))


@dataclass(frozen=True)
class BoundaryContrast:
    t_max: float
    invariant_max: float
    covariant_max: float
    first_exceed: float


def boundary_contrast(t_max: float = 6.0, bound: float = 1e6, n: int = 6001) -> BoundaryContrast:
    """Sample both solutions on the t axis (z = 0) out to ``t_max``."""
    t = np.linspace(-t_max, t_max, n)
    p = SpaceTimePoint(np.zeros_like(t), t)
    inv = invariant_solution(p)
    cov = covariant_solution(p)
    over = np.abs(t[inv > bound])
    return BoundaryContrast(
        float(t_max),
        float(inv.max()),
        float(cov.max()),
        float(over.min()) if over.size else float("inf"),
    )
