"""Grids, quadrature, finite differences and the unitary 2-D Fourier transform.

A :class:`Grid2D` samples a symmetric box in *grid coordinates* (a, b);
``basis`` maps them linearly onto the physical plane, (z, t) or (q_z, q_0).
Light-cone-aligned boxes use a 45-degree rotation so that strongly
squeezed states stay resolved with a modest node count.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

SPACETIME = "spacetime"
MOMENTUM = "momentum"

_R = 1.0 / np.sqrt(2.0)
IDENTITY = ((1.0, 0.0), (0.0, 1.0))
# columns are the grid axes expressed in physical coordinates
LIGHT_CONE_SPACETIME = ((_R, _R), (_R, -_R))  # (u, v) -> (z, t)
LIGHT_CONE_MOMENTUM = ((-_R, _R), (_R, _R))  # (q_u, q_v) -> (q_z, q_0)

BOUNDARY_DECAY = 1e-12
BOUNDARY_MASS = 1e-10
MIN_SAMPLES_PER_WIDTH = 6.0


class GridError(ValueError):
    pass


class BoxTooSmallError(GridError):
    pass


class UnresolvedGridError(GridError):
    pass


class AliasingError(GridError):
    pass


@dataclass(frozen=True)
class Grid2D:
    """Uniform ``n[0] x n[1]`` sampling of ``[-extent, extent)`` per axis.

    Node ``j`` on axis ``i`` sits at ``-extent[i] + j * spacing[i]`` with
    ``spacing = 2 * extent / n``, so the origin is always a node.
    """

    n: tuple[int, int]
    extent: tuple[float, float]
    basis: tuple[tuple[float, float], tuple[float, float]] = IDENTITY
    domain: str = SPACETIME
    values: Optional[np.ndarray] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        for n in self.n:
            if n < 8 or n % 2:
                raise GridError(f"node counts must be even and >= 8, got {self.n}")
        for e in self.extent:
            if not (np.isfinite(e) and e > 0):
                raise GridError(f"extents must be positive, got {self.extent}")
        if not np.isclose(abs(np.linalg.det(self.matrix)), 1.0, atol=1e-12):
            raise GridError("grid basis must preserve area")
        if self.domain not in (SPACETIME, MOMENTUM):
            raise GridError(f"unknown domain {self.domain!r}")
        if self.values is not None and self.values.shape != tuple(self.n):
            raise GridError(f"values shape {self.values.shape} != {self.n}")

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.basis, dtype=float)

    @property
    def spacing(self) -> tuple[float, float]:
        return (2 * self.extent[0] / self.n[0], 2 * self.extent[1] / self.n[1])

    @property
    def cell_area(self) -> float:
        return self.spacing[0] * self.spacing[1]

    def axis(self, i: int) -> np.ndarray:
        return -self.extent[i] + self.spacing[i] * np.arange(self.n[i])

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.axis(0), self.axis(1), indexing="ij")

    def physical(self) -> tuple[np.ndarray, np.ndarray]:
        a, b = self.mesh()
        m = self.matrix
        return m[0, 0] * a + m[0, 1] * b, m[1, 0] * a + m[1, 1] * b

    def with_values(self, values: np.ndarray) -> "Grid2D":
        return replace(self, values=np.asarray(values))

    def describe(self) -> dict:
        return {
            "n": list(self.n),
            "extent": [float(e) for e in self.extent],
            "basis": [list(map(float, row)) for row in self.basis],
            "domain": self.domain,
        }


def zt_grid(n: int = 256, extent: float = 6.0, domain: str = SPACETIME) -> Grid2D:
    return Grid2D((n, n), (extent, extent), IDENTITY, domain)


def light_cone_grid(
    n: int, extent_u: float, extent_v: float, domain: str = SPACETIME
) -> Grid2D:
    basis = LIGHT_CONE_SPACETIME if domain == SPACETIME else LIGHT_CONE_MOMENTUM
    return Grid2D((n, n), (extent_u, extent_v), basis, domain)


def squeezed_box(eta: float, n: int = 256, base_extent: float = 6.0, domain: str = SPACETIME) -> Grid2D:
    """Light-cone box stretched by e^eta along u and shrunk along v."""
    return light_cone_grid(n, base_extent * np.exp(eta), base_extent * np.exp(-eta), domain)


@dataclass(frozen=True)
class QuadratureRule:
    """Tensor-product rule over grid coordinates of ``basis``.

    ``scale`` stretches the Gauss-Hermite nodes per axis; ``extent`` is the
    half-width for the trapezoid scheme.
    """

    scheme: str = "gauss-hermite"
    nodes: int = 64
    scale: tuple[float, float] = (1.0, 1.0)
    extent: tuple[float, float] = (8.0, 8.0)
    basis: tuple[tuple[float, float], tuple[float, float]] = IDENTITY

    def __post_init__(self):
        if self.scheme not in ("gauss-hermite", "trapezoid"):
            raise ValueError(f"unknown quadrature scheme {self.scheme!r}")
        if self.nodes < 2:
            raise ValueError("quadrature needs at least 2 nodes")


@lru_cache(maxsize=16)
def _hermgauss(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.hermite.hermgauss(n)
    # weights for integrating f itself rather than f * exp(-x^2)
    return x, w * np.exp(x * x)


def sample(f: Callable[[np.ndarray, np.ndarray], np.ndarray], grid: Grid2D) -> Grid2D:
    """Evaluate ``f`` at the physical position of every grid node."""
    x0, x1 = grid.physical()
    values = np.asarray(f(x0, x1))
    if values.shape != x0.shape:
        values = np.broadcast_to(values, x0.shape).copy()
    if not np.all(np.isfinite(values)):
        raise GridError("sampled function produced non-finite values")
    return grid.with_values(values)


def _edge_max(values: np.ndarray) -> float:
    a = np.abs(values)
    return float(max(a[0].max(), a[-1].max(), a[:, 0].max(), a[:, -1].max()))


def _band_width(n: int) -> int:
    return max(2, n // 32)


def boundary_mass(grid: Grid2D) -> float:
    """Fraction of sum |values|^2 lying in the outer band of the box."""
    p = np.abs(grid.values) ** 2
    total = p.sum()
    if total == 0:
        return 0.0
    b0, b1 = _band_width(grid.n[0]), _band_width(grid.n[1])
    inner = p[b0:-b0, b1:-b1].sum()
    return float((total - inner) / total)


def integrate2d(target, rule: Optional[QuadratureRule] = None) -> float:
    """Integral over the physical plane.

    ``target`` is either a sampled :class:`Grid2D` (trapezoid on the box) or
    a callable ``f(x0, x1)`` together with ``rule``.
    """
    if isinstance(target, Grid2D):
        if target.values is None:
            raise GridError("grid has no samples")
        peak = float(np.abs(target.values).max())
        if peak > 0 and _edge_max(target.values) > BOUNDARY_DECAY * peak:
            raise BoxTooSmallError(
                f"integrand has not decayed at the box edge "
                f"(edge/peak = {_edge_max(target.values) / peak:.3e})"
            )
        return float(np.sum(target.values) * target.cell_area)
    if rule is None:
        raise TypeError("integrating a callable needs a QuadratureRule")
    if rule.scheme == "trapezoid":
        grid = Grid2D((rule.nodes, rule.nodes), rule.extent, rule.basis)
        return integrate2d(sample(target, grid))
    x, w = _hermgauss(rule.nodes)
    a = rule.scale[0] * x
    b = rule.scale[1] * x
    A, B = np.meshgrid(a, b, indexing="ij")
    m = np.array(rule.basis, dtype=float)
    vals = target(m[0, 0] * A + m[0, 1] * B, m[1, 0] * A + m[1, 1] * B)
    return float(rule.scale[0] * rule.scale[1] * (w @ vals @ w))


# 4th-order central stencils; two nodes at each end are left as NaN.
def _diff(values: np.ndarray, axis: int, h: float, order: int) -> np.ndarray:
    f = np.moveaxis(np.asarray(values), axis, 0)
    out = np.full(f.shape, np.nan, dtype=np.result_type(f, float))
    fm2, fm1, f0, fp1, fp2 = f[:-4], f[1:-3], f[2:-2], f[3:-1], f[4:]
    if order == 1:
        out[2:-2] = (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h)
    else:
        out[2:-2] = (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * h * h)
    return np.moveaxis(out, 0, axis)


def first_derivative(g: Grid2D, axis: int) -> Grid2D:
    return g.with_values(_diff(g.values, axis, g.spacing[axis], 1))


def second_derivative(g: Grid2D, axis: int) -> Grid2D:
    """d^2/da^2 along a grid axis; the two outermost nodes per side are NaN."""
    return g.with_values(_diff(g.values, axis, g.spacing[axis], 2))


def physical_second_derivatives(g: Grid2D) -> tuple[np.ndarray, np.ndarray]:
    """Pure second derivatives along the two physical coordinates.

    With x = M a the chain rule gives d^2/dx_i^2 = sum_kl N_ki N_li d_k d_l,
    N = M^-1, so rotated grids also need the mixed derivative.
    """
    inv = np.linalg.inv(g.matrix)
    faa = second_derivative(g, 0).values
    fbb = second_derivative(g, 1).values
    mixed_needed = np.any(np.abs(inv[0] * inv[1]) > 0)
    fab = first_derivative(first_derivative(g, 0), 1).values if mixed_needed else 0.0
    out = []
    for i in range(2):
        na, nb = inv[0, i], inv[1, i]
        d2 = na * na * faa + nb * nb * fbb
        if mixed_needed:
            d2 = d2 + 2 * na * nb * fab
        out.append(d2)
    return out[0], out[1]


def fourier2d(g: Grid2D, signs: tuple[int, int] = (1, 1), check: bool = True) -> Grid2D:
    """Unitary transform F(q) = (1/2pi) integral f(x) exp{i (s0 q0 x0 + s1 q1 x1)} dx.

    Returned grid lives in the conjugate domain with extents pi/h per
    axis. Applying it again with negated signs recovers the input.
    """
    s = np.array(signs, dtype=float)
    if set(np.abs(s)) != {1.0}:
        raise ValueError(f"signs must be +1 or -1, got {signs}")
    if check and boundary_mass(g) > BOUNDARY_MASS:
        raise AliasingError(f"input boundary mass {boundary_mass(g):.3e} exceeds {BOUNDARY_MASS}")
    f = np.fft.ifftshift(np.asarray(g.values, dtype=complex))
    for axis, sign in enumerate(s):
        n = g.n[axis]
        f = np.fft.ifft(f, axis=axis) * n if sign > 0 else np.fft.fft(f, axis=axis)
    F = np.fft.fftshift(f) * g.cell_area / (2 * np.pi)
    S = np.diag(s)
    basis = S @ np.linalg.inv(g.matrix).T @ S
    out = Grid2D(
        g.n,
        (np.pi / g.spacing[0], np.pi / g.spacing[1]),
        tuple(map(tuple, basis.tolist())),
        MOMENTUM if g.domain == SPACETIME else SPACETIME,
        F,
    )
    if check and boundary_mass(out) > BOUNDARY_MASS:
        raise AliasingError(f"transform boundary mass {boundary_mass(out):.3e} exceeds {BOUNDARY_MASS}")
    return out


def check_resolved(g: Grid2D, density: bool = True) -> None:
    """Raise :class:`UnresolvedGridError` if ``g`` cannot resolve its samples.

    Two conditions: the outer band holds at most 1e-10 of the mass, and the
    RMS width along each grid axis spans at least six node spacings.
    """
    p = np.abs(g.values) if density else np.abs(g.values) ** 2
    total = p.sum()
    if total <= 0:
        raise UnresolvedGridError("unresolved grid: no mass on the grid")
    mass = boundary_mass(g.with_values(np.sqrt(p)))
    if mass > BOUNDARY_MASS:
        raise UnresolvedGridError(f"unresolved grid: boundary mass {mass:.3e} > {BOUNDARY_MASS}")
    for axis in range(2):
        x = g.axis(axis)
        px = p.sum(axis=1 - axis)
        mean = (x * px).sum() / total
        width = np.sqrt(((x - mean) ** 2 * px).sum() / total)
        if width < MIN_SAMPLES_PER_WIDTH * g.spacing[axis]:
            raise UnresolvedGridError(
                f"unresolved grid: width {width:.3g} along axis {axis} spans "
                f"{width / g.spacing[axis]:.2f} < {MIN_SAMPLES_PER_WIDTH} spacings"
            )


@lru_cache(maxsize=16)
def _leggauss(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(n)


def segment_interval(grid: Grid2D, direction: np.ndarray, c: float) -> tuple[float, float]:
    """Parameter range of the line c*w + s*w_perp inside the grid box."""
    w = np.asarray(direction, dtype=float)
    w_perp = np.array([-w[1], w[0]])
    inv = np.linalg.inv(grid.matrix)
    p0 = inv @ (c * w)
    d = inv @ w_perp
    lo, hi = -np.inf, np.inf
    for k in range(2):
        e = grid.extent[k]
        if abs(d[k]) < 1e-15:
            if abs(p0[k]) > e:
                return 0.0, 0.0
            continue
        s1, s2 = (-e - p0[k]) / d[k], (e - p0[k]) / d[k]
        lo, hi = max(lo, min(s1, s2)), min(hi, max(s1, s2))
    return (lo, hi) if hi > lo else (0.0, 0.0)


def projection_range(grid: Grid2D, direction: np.ndarray) -> float:
    """Largest |w . x| over the corners of the box."""
    w = np.asarray(direction, dtype=float)
    m = grid.matrix
    corners = [m @ np.array([sa * grid.extent[0], sb * grid.extent[1]]) for sa in (-1, 1) for sb in (-1, 1)]
    return float(max(abs(w @ c) for c in corners))


def project(
    f: Callable[[np.ndarray, np.ndarray], np.ndarray],
    grid: Grid2D,
    direction,
    nodes: np.ndarray,
    n_line: int = 256,
    clip: Optional[Callable[[float], tuple[float, float]]] = None,
) -> np.ndarray:
    """Line integrals of ``f`` across the box.

    For each c in ``nodes`` returns the integral of f over the line
    {x : w.x = c} (w a unit vector) restricted to the grid box, using
    Gauss-Legendre with ``n_line`` points per segment. ``clip(c)`` can
    narrow the parameter range further.
    """
    w = np.asarray(direction, dtype=float)
    w = w / np.linalg.norm(w)
    w_perp = np.array([-w[1], w[0]])
    x, wts = _leggauss(n_line)
    out = np.zeros(len(nodes))
    for i, c in enumerate(nodes):
        lo, hi = segment_interval(grid, w, c)
        if clip is not None:
            clo, chi = clip(c)
            lo, hi = max(lo, clo), min(hi, chi)
        if hi <= lo:
            continue
        half = 0.5 * (hi - lo)
        s = 0.5 * (hi + lo) + half * x
        out[i] = half * np.dot(wts, f(c * w[0] + s * w_perp[0], c * w[1] + s * w_perp[1]))
    return out


def symmetric_nodes(half_width: float, n: int) -> np.ndarray:
    """``n`` nodes covering [-half_width, half_width), origin included."""
    return -half_width + (2 * half_width / n) * np.arange(n)
