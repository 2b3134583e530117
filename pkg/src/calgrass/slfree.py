"""Special-Lagrangian-free surfaces in R^4 = C^2.

Coordinates are 1-based with ``z1 = x1 + i x2`` and ``z2 = x3 + i x4``, so
on R^4

    Re Omega = e13 - e24,   Im Omega = e14 + e23,   omega = e12 + e34.

The w-coordinates ``w1 = x1 + i x3``, ``w2 = x2 - i x4`` satisfy
``dw1 ^ dw2 = omega - i Im Omega``; surfaces that are complex curves for
``w`` therefore have tangent planes on which ``Re Omega`` vanishes.

The oriented Grassmannian G_2^+ R^4 splits as S^2 x S^2 through the
self-dual and anti-self-dual parts of the Pluecker vector.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import minimize

from .grassmannian import OrientedFrame

_S = 1 / math.sqrt(2)


class RefineGridError(RuntimeError):
    """The quadrature is too coarse to round a degree reliably."""


# -- the dimension equation ---------------------------------------------------------


def slag_dim(n: int) -> int:
    """Dimension of the special Lagrangian Grassmannian SU(n)/SO(n)."""
    if n < 1:
        raise ValueError("n must be positive")
    return (n * n + n - 2) // 2


def grassmannian_dim(k: int, n: int) -> int:
    return k * (n - k)


def dimension_equation(k: int, n: int) -> int:
    """Left-hand side of ``-3n^2 + (1 + 2k) n + 2k - 2 = 0``."""
    return -3 * n * n + (1 + 2 * k) * n + 2 * k - 2


def dimension_equation_solutions(k_max: int) -> list[tuple[int, int]]:
    """All ``(k, n)`` with ``2 <= k <= k_max``, ``n <= k <= 2n - 2`` solving the equation.

    These are the cases where a k-manifold's Gauss image in G_n^+ R^{2n}
    and the special Lagrangian locus have complementary dimensions.
    """
    out = []
    for k in range(2, k_max + 1):
        for n in range(1, k + 1):
            if not (n <= k <= 2 * n - 2):
                continue
            if dimension_equation(k, n) == 0:
                out.append((k, n))
    return out


# -- the S^2 x S^2 splitting ----------------------------------------------------------

_PLUS = np.array([
    [1, 0, 0, 0, 0, 1],   # e12 + e34
    [0, 1, 0, 0, -1, 0],  # e13 - e24
    [0, 0, 1, 1, 0, 0],   # e14 + e23
]) * _S
_MINUS = np.array([
    [1, 0, 0, 0, 0, -1],  # e12 - e34
    [0, 1, 0, 0, 1, 0],   # e13 + e24
    [0, 0, 1, -1, 0, 0],  # e14 - e23
]) * _S
_PAIRS = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]  # e12, e13, e14, e23, e24, e34


@dataclass(frozen=True)
class SplitPoint:
    p_plus: np.ndarray
    p_minus: np.ndarray

    def __post_init__(self):
        for v in (self.p_plus, self.p_minus):
            if abs(np.linalg.norm(v) - 1) > 1e-9:
                raise ValueError("split components must be unit vectors")


def _pluecker(e1: np.ndarray, e2: np.ndarray) -> np.ndarray:
    return np.stack([e1[..., i] * e2[..., j] - e1[..., j] * e2[..., i] for i, j in _PAIRS], axis=-1)


def split_components(e1: np.ndarray, e2: np.ndarray):
    """Unnormalized self-dual and anti-self-dual parts (batched)."""
    P = _pluecker(e1, e2)
    return P @ _PLUS.T, P @ _MINUS.T


def _split_normalized(e1, e2):
    a, b = split_components(e1, e2)
    na = np.linalg.norm(a, axis=-1, keepdims=True)
    nb = np.linalg.norm(b, axis=-1, keepdims=True)
    if np.any(na < 1e-12) or np.any(nb < 1e-12):
        raise ArithmeticError("degenerate 2-vector: a split component vanished")
    return a / na, b / nb


def split_plus_minus(plane: OrientedFrame) -> SplitPoint:
    if plane.n != 4 or plane.k != 2:
        raise ValueError("split_plus_minus needs an oriented 2-plane in R^4")
    F = plane.columns
    p, m = _split_normalized(F[:, 0], F[:, 1])
    return SplitPoint(p, m)


# -- surfaces -------------------------------------------------------------------------


@dataclass(frozen=True)
class SurfaceEmbedding:
    """A closed surface in R^4 with closed-form tangent vectors on a rectangular chart."""

    name: str
    topology: str
    euler_characteristic: int
    u_range: tuple[float, float]
    v_range: tuple[float, float]
    point: Callable
    tangents: Callable
    orientation: int = 1  # -1 when the chart order is opposite to the surface orientation

    def grid(self, nu: int, nv: int):
        """Cell-centred grid (avoids chart boundaries such as the sphere's poles)."""
        u0, u1 = self.u_range
        v0, v1 = self.v_range
        du, dv = (u1 - u0) / nu, (v1 - v0) / nv
        u = u0 + (np.arange(nu) + 0.5) * du
        v = v0 + (np.arange(nv) + 0.5) * dv
        U, V = np.meshgrid(u, v, indexing="ij")
        return U, V, du, dv

    def frame(self, u, v):
        """Orthonormal oriented tangent frame (Gram-Schmidt on the chart tangents)."""
        tu, tv = self.tangents(np.asarray(u, float), np.asarray(v, float))
        e1 = tu / np.linalg.norm(tu, axis=-1, keepdims=True)
        w = tv - np.sum(tv * e1, axis=-1, keepdims=True) * e1
        e2 = w / np.linalg.norm(w, axis=-1, keepdims=True)
        return e1, self.orientation * e2

    def immersion_margin(self, nu: int = 64, nv: int = 64) -> float:
        """Smallest singular value of the chart differential over the grid."""
        U, V, _, _ = self.grid(nu, nv)
        tu, tv = self.tangents(U, V)
        J = np.stack([tu, tv], axis=-1)
        return float(np.linalg.svd(J, compute_uv=False)[..., -1].min())


def _z_clifford_point(a, b):
    return np.stack([np.cos(a), np.sin(a), np.cos(b), np.sin(b)], axis=-1)


def _z_clifford_tangents(a, b):
    z = np.zeros_like(a)
    return (np.stack([-np.sin(a), np.cos(a), z, z], axis=-1),
            np.stack([z, z, -np.sin(b), np.cos(b)], axis=-1))


def _w_torus_point(a, b):
    return np.stack([np.cos(a), np.cos(b), np.sin(a), np.sin(b)], axis=-1)


def _w_torus_tangents(a, b):
    z = np.zeros_like(a)
    return (np.stack([-np.sin(a), z, np.cos(a), z], axis=-1),
            np.stack([z, -np.sin(b), z, np.cos(b)], axis=-1))


def _sphere_point(a, b):
    return np.stack([np.sin(b) * np.cos(a), np.sin(b) * np.sin(a), np.cos(b), np.zeros_like(a)], axis=-1)


def _sphere_tangents(a, b):
    z = np.zeros_like(a)
    return (np.stack([-np.sin(b) * np.sin(a), np.sin(b) * np.cos(a), z, z], axis=-1),
            np.stack([np.cos(b) * np.cos(a), np.cos(b) * np.sin(a), -np.sin(b), z], axis=-1))


_TWO_PI = (0.0, 2 * math.pi)

CATALOG: dict[str, SurfaceEmbedding] = {
    # Clifford torus |z1| = |z2| = 1
    "z_clifford_torus": SurfaceEmbedding(
        "z_clifford_torus", "torus", 0, _TWO_PI, _TWO_PI, _z_clifford_point, _z_clifford_tangents),
    # Clifford torus in w-coordinates, a complex curve for (w1, w2)
    "w_torus": SurfaceEmbedding(
        "w_torus", "torus", 0, _TWO_PI, _TWO_PI, _w_torus_point, _w_torus_tangents),
    # unit sphere in the hyperplane x4 = 0; u is the azimuth, v the polar angle.
    # The chart order gives the inward normal, so the surface carries the opposite orientation.
    "round_sphere": SurfaceEmbedding(
        "round_sphere", "sphere", 2, _TWO_PI, (0.0, math.pi), _sphere_point, _sphere_tangents, -1),
}


def get_surface(name: str) -> SurfaceEmbedding:
    try:
        return CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown surface {name!r}; valid: {', '.join(sorted(CATALOG))}") from None


# -- Gauss map degrees -------------------------------------------------------------------


@dataclass
class GaussDegree:
    surface: str
    deg_plus: int
    deg_minus: int
    raw_plus: float
    raw_minus: float
    grid: tuple[int, int]

    @property
    def residual(self) -> float:
        return max(abs(self.raw_plus - self.deg_plus), abs(self.raw_minus - self.deg_minus))

    def to_dict(self) -> dict:
        return {"surface": self.surface, "deg_plus": self.deg_plus, "deg_minus": self.deg_minus,
                "raw_plus": self.raw_plus, "raw_minus": self.raw_minus,
                "residual": self.residual, "grid": list(self.grid)}


def _sphere_map_degree(P: np.ndarray, Pu: np.ndarray, Pv: np.ndarray, du: float, dv: float) -> float:
    density = np.einsum("...i,...i->...", P, np.cross(Pu, Pv))
    return float(density.sum() * du * dv / (4 * math.pi))


def gauss_degree(s: SurfaceEmbedding, grid: tuple[int, int] = (200, 200), h: float = 1e-5,
                 max_residual: float = 0.1) -> GaussDegree:
    """Degrees of the two factors of the Gauss map M -> S^2 x S^2.

    Each degree is the integral of the pulled-back area form divided by 4 pi,
    by midpoint quadrature with central differences of the factor maps.
    The anti-self-dual factor is measured against the orientation of S^2
    opposite to the one induced by its listed basis, so that both factors
    give ``-chi/2`` for the chart orientations of the catalog.
    """
    nu, nv = grid
    U, V, du, dv = s.grid(nu, nv)

    def factors(u, v):
        return _split_normalized(*s.frame(u, v))

    Pp, Pm = factors(U, V)
    Pp_u1, Pm_u1 = factors(U + h, V)
    Pp_u0, Pm_u0 = factors(U - h, V)
    Pp_v1, Pm_v1 = factors(U, V + h)
    Pp_v0, Pm_v0 = factors(U, V - h)
    raw_plus = _sphere_map_degree(Pp, (Pp_u1 - Pp_u0) / (2 * h), (Pp_v1 - Pp_v0) / (2 * h), du, dv)
    raw_minus = -_sphere_map_degree(Pm, (Pm_u1 - Pm_u0) / (2 * h), (Pm_v1 - Pm_v0) / (2 * h), du, dv)
    out = GaussDegree(s.name, int(round(raw_plus)), int(round(raw_minus)), raw_plus, raw_minus, (nu, nv))
    if out.residual >= max_residual:
        raise RefineGridError(
            f"{s.name}: rounding residual {out.residual:.3f} on a {nu}x{nv} grid; refine the grid"
        )
    return out


# -- special Lagrangian tangent planes ----------------------------------------------------


def restricted_forms(e1: np.ndarray, e2: np.ndarray):
    """``(Re Omega, omega, Im Omega)`` evaluated on the oriented planes ``e1 ^ e2``."""
    P = _pluecker(e1, e2)
    p12, p13, p14, p23, p24, p34 = np.moveaxis(P, -1, 0)
    return p13 - p24, p12 + p34, p14 + p23


@dataclass
class ScanPoint:
    u: float
    v: float
    abs_re_omega: float
    omega: float
    im_omega: float


def scan_values(s: SurfaceEmbedding, grid: tuple[int, int] = (128, 128)):
    U, V, du, dv = s.grid(*grid)
    re, om, im = restricted_forms(*s.frame(U, V))
    return U, V, np.abs(re), om, im


def sl_tangent_scan(s: SurfaceEmbedding, grid: tuple[int, int] = (128, 128),
                    tol: float = 1e-6) -> list[ScanPoint]:
    """Chart points whose tangent plane is special Lagrangian for one of its orientations.

    Grid points within resolution of the threshold are refined by a local
    maximization of ``|Re Omega|``; refined points reaching ``1 - tol`` are
    reported, deduplicated to one per grid cell.
    """
    U, V, absre, _, _ = scan_values(s, grid)
    _, _, du, dv = s.grid(*grid)
    slack = max(tol, du * du + dv * dv)
    seeds = np.argwhere(absre >= 1 - slack)

    def neg_abs_re(x):
        e1, e2 = s.frame(np.array(x[0]), np.array(x[1]))
        return -abs(float(restricted_forms(e1, e2)[0]))

    found: list[ScanPoint] = []
    radius = 0.5 * min(du, dv)
    period = s.u_range[1] - s.u_range[0]
    v_lo, v_hi = s.v_range
    for i, j in seeds:
        x0 = np.array([U[i, j], V[i, j]])
        res = minimize(neg_abs_re, x0, method="Nelder-Mead",
                       options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 400})
        u, v = res.x
        if s.topology == "sphere" and not (v_lo < v < v_hi):
            continue
        if -res.fun < 1 - tol:
            continue
        u = s.u_range[0] + (u - s.u_range[0]) % period
        if any(math.hypot(_wrap(u - q.u, period), v - q.v) < radius for q in found):
            continue
        e1, e2 = s.frame(np.array(u), np.array(v))
        re, om, im = restricted_forms(e1, e2)
        found.append(ScanPoint(float(u), float(v), abs(float(re)), float(om), float(im)))
    return sorted(found, key=lambda q: (q.u, q.v))


def _wrap(d: float, period: float) -> float:
    return (d + period / 2) % period - period / 2


CSV_COLUMNS = ("u", "v", "abs_re_omega", "omega_restricted", "im_omega_restricted")


def scan_to_csv(points, path=None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for p in points:
        w.writerow([repr(p.u), repr(p.v), repr(p.abs_re_omega), repr(p.omega), repr(p.im_omega)])
    text = buf.getvalue()
    if path is not None:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    return text
