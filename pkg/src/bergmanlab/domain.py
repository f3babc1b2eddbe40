"""Bounded convex complete Reinhardt domains in C^2, described by their shadow.

A complete Reinhardt domain is determined by its image in absolute space
``|Omega| = {(|z1|, |z2|)}``.  For the convex domains handled here that
image is ``{0 <= x < x_max, 0 <= y < rho1(x)}`` with ``rho1``
non-increasing and concave, so the whole domain is one profile function.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from . import expressions

DISC_TOL = 1e-12
# bisection on a profile with a quadratic top resolves rho2 only to ~sqrt(eps)
DISC_RESOLUTION = 1e-7
CONVEXITY_TOL = 1e-10


class DomainError(ValueError):
    """Argument outside the domain of a profile function."""


class PreconditionError(ValueError):
    """An operation's geometric precondition does not hold."""


@dataclass(frozen=True, eq=False)
class ShadowProfile:
    """Upper boundary ``rho1`` of the shadow on ``[0, x_max]``.

    Piecewise-linear profiles keep their vertices, which makes axis
    transposition and dilation exact.
    """

    x_max: float
    func: Callable[[np.ndarray], np.ndarray]
    breakpoints: tuple[float, ...] = ()
    vertices: tuple[tuple[float, float], ...] | None = None

    def __call__(self, x):
        return self.func(np.asarray(x, dtype=float))

    @classmethod
    def piecewise_linear(cls, vertices: Sequence[Sequence[float]]) -> "ShadowProfile":
        v = tuple((float(a), float(b)) for a, b in vertices)
        xs = np.array([p[0] for p in v])
        ys = np.array([p[1] for p in v])
        if xs[0] != 0.0 or np.any(np.diff(xs) <= 0):
            raise ValueError("profile vertices must start at x=0 with increasing x")

        def func(x):
            return np.interp(x, xs, ys)

        return cls(float(xs[-1]), func, tuple(float(t) for t in xs[1:-1]), v)


@dataclass(frozen=True)
class BoundaryClassification:
    has_vertical_disc: bool
    has_horizontal_disc: bool
    vertical_disc_radius: float
    horizontal_disc_radius: float


@dataclass(frozen=True, eq=False)
class ReinhardtDomain2D:
    """A convex complete Reinhardt domain ``{|z1| < x_max, |z2| < rho1(|z1|)}``.

    ``scale`` records the dilation relating this domain to the one it was
    derived from: original coordinates are ``(scale[0]*x, scale[1]*y)``.
    """

    shadow: ShadowProfile
    key: str
    scale: tuple[float, float] = (1.0, 1.0)
    parent: "ReinhardtDomain2D | None" = field(default=None, repr=False)

    def __post_init__(self):
        if not self.shadow.x_max > 0:
            raise ValueError("x_max must be positive")
        if not float(self.shadow(0.0)) > 0:
            raise ValueError("rho1(0) must be positive")

    # -- basic geometry ---------------------------------------------------
    @property
    def x_max(self) -> float:
        return self.shadow.x_max

    @cached_property
    def s(self) -> float:
        """Height ``rho1(0)`` of the smallest bidisc ``{|z1|<x_max, |z2|<s}`` containing the domain."""
        return float(self.shadow(0.0))

    @cached_property
    def normalized(self) -> bool:
        return self.x_max == 1.0 and float(self.shadow(1.0)) == 1.0

    def rho1(self, x):
        xa = np.asarray(x, dtype=float)
        if np.any(xa < 0) or np.any(xa > self.x_max * (1 + 1e-15)):
            raise DomainError(f"x outside [0, {self.x_max}]")
        out = self.shadow(np.minimum(xa, self.x_max))
        return float(out) if np.ndim(out) == 0 else out

    def rho2(self, y):
        """``sup{x : rho1(x) >= y}``, the right boundary of the closed shadow."""
        ya = np.asarray(y, dtype=float)
        if np.any(ya < 0) or np.any(ya > self.s * (1 + 1e-15)):
            raise DomainError(f"y outside [0, {self.s}]")
        out = self._rho2(np.minimum(ya, self.s))
        return float(out) if np.ndim(out) == 0 else out

    def _rho2(self, y: np.ndarray) -> np.ndarray:
        y = np.atleast_1d(y).astype(float)
        xm = self.x_max
        out = np.full(y.shape, xm)
        todo = self.shadow(np.full(y.shape, xm)) < y
        if self.shadow.vertices is not None:
            pts = _transpose_vertices(self.shadow.vertices)
            us = np.array([p[0] for p in pts])
            xs = np.array([p[1] for p in pts])
            out[todo] = np.interp(y[todo], us, xs)
            return out.reshape(np.shape(y))
        lo = np.zeros(int(todo.sum()))
        hi = np.full(lo.shape, xm)
        yt = y[todo]
        # invariant: rho1(lo) >= y > rho1(hi)
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            ge = self.shadow(mid) >= yt
            lo = np.where(ge, mid, lo)
            hi = np.where(ge, hi, mid)
        out[todo] = lo
        return out

    def contains(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        inside = x < self.x_max
        xr = np.minimum(x, self.x_max)
        return inside & (y < self.shadow(xr))

    def boundary_points(self, n: int = 1024) -> tuple[np.ndarray, np.ndarray]:
        """Points of the outer shadow boundary (graph of rho1 plus the vertical edge)."""
        h = float(self.shadow(self.x_max))
        n_edge = int(round(n * h / (h + self.x_max + self.s))) if h > 0 else 0
        n_graph = n - n_edge
        xg = np.linspace(0.0, self.x_max, n_graph)
        yg = self.shadow(xg)
        if n_edge:
            ye = np.linspace(0.0, h, n_edge, endpoint=False)
            return np.concatenate([xg, np.full(n_edge, self.x_max)]), np.concatenate([yg, ye])
        return xg, yg

    # -- classification and certification ---------------------------------
    def classify_boundary(self) -> BoundaryClassification:
        v = float(self.shadow(self.x_max))
        h = float(self._rho2(np.array([self.s]))[0])
        tol_v = DISC_TOL if self.shadow.vertices is not None else DISC_RESOLUTION * self.s
        tol_h = DISC_TOL if self.shadow.vertices is not None else DISC_RESOLUTION * self.x_max
        return BoundaryClassification(v > tol_v, h > tol_h, v, h)

    def check_convex_shadow(self, grid_n: int = 101) -> tuple[bool, float]:
        """Certify a non-increasing concave profile on ``grid_n`` samples.

        Returns ``(ok, worst)`` where ``worst`` is the largest violation of
        monotonicity or midpoint concavity (0 when none).
        """
        if grid_n < 3:
            raise ValueError("grid_n must be at least 3")
        x = np.linspace(0.0, self.x_max, grid_n)
        r = self.shadow(x)
        rise = np.diff(r)
        bend = 0.5 * (r[:-2] + r[2:]) - r[1:-1]
        worst = max(0.0, float(rise.max()), float(bend.max()))
        return worst <= CONVEXITY_TOL, (worst if worst > CONVEXITY_TOL else 0.0)

    # -- transformations ---------------------------------------------------
    def dilate(self, cx: float, cy: float) -> "ReinhardtDomain2D":
        """Domain in coordinates ``(x/cx, y/cy)``."""
        sh = self.shadow
        if sh.vertices is not None:
            new = ShadowProfile.piecewise_linear([(a / cx, b / cy) for a, b in sh.vertices])
            key = _vertices_key(new.vertices)
        else:
            def func(x, f=sh.func):
                return f(np.asarray(x) * cx) / cy

            new = ShadowProfile(sh.x_max / cx, func, tuple(b / cx for b in sh.breakpoints))
            key = f"dilate({cx!r},{cy!r},{self.key})"
        return ReinhardtDomain2D(new, key, (self.scale[0] * cx, self.scale[1] * cy), self)

    def normalize_vertical_disc(self) -> "ReinhardtDomain2D":
        """Dilate so that ``x_max = 1`` and ``rho1(1) = 1``; needs a vertical disc."""
        if self.normalized:
            return self
        h = float(self.shadow(self.x_max))
        if h <= DISC_TOL:
            raise PreconditionError(
                "boundary has no vertical analytic disc; transpose first if it has a horizontal one"
            )
        if self.shadow.vertices is not None:
            return self.dilate(self.x_max, h)
        xm, f = self.x_max, self.shadow.func

        def func(x):
            return f(np.asarray(x) * xm) / h

        new = ShadowProfile(1.0, func, tuple(b / xm for b in self.shadow.breakpoints))
        return ReinhardtDomain2D(new, f"normalized({self.key})", (self.scale[0] * xm, self.scale[1] * h), self)

    normalize_fig1 = normalize_vertical_disc  # interface name

    def unit_box(self) -> "ReinhardtDomain2D":
        """Dilation fitting the shadow into [0,1]^2 with ``x_max = rho1(0) = 1``."""
        if self.x_max == 1.0 and self.s == 1.0:
            return self
        return self._unit_box

    @cached_property
    def _unit_box(self) -> "ReinhardtDomain2D":
        return self.dilate(self.x_max, self.s)

    def transpose(self) -> "ReinhardtDomain2D":
        """Swap the roles of ``z1`` and ``z2``."""
        sh = self.shadow
        if sh.vertices is not None:
            new = ShadowProfile.piecewise_linear(_transpose_vertices(sh.vertices))
            key = _vertices_key(new.vertices)
        else:
            def func(y, dom=self):
                return dom._rho2(np.minimum(np.asarray(y, dtype=float), dom.s)).reshape(np.shape(y))

            new = ShadowProfile(self.s, func)
            key = f"transpose({self.key})"
        return ReinhardtDomain2D(new, key, (self.scale[1], self.scale[0]), None)

    def describe(self) -> dict:
        c = self.classify_boundary()
        ok, worst = self.check_convex_shadow(1001)
        return {
            "key": self.key,
            "x_max": self.x_max,
            "s": self.s,
            "rho1_at_x_max": c.vertical_disc_radius,
            "normalized": self.normalized,
            "has_vertical_disc": c.has_vertical_disc,
            "has_horizontal_disc": c.has_horizontal_disc,
            "vertical_disc_radius": c.vertical_disc_radius,
            "horizontal_disc_radius": c.horizontal_disc_radius,
            "convex_shadow": ok,
            "convexity_violation": worst,
        }


def _vertices_key(v) -> str:
    return "pl[" + ";".join(f"{a!r},{b!r}" for a, b in v) + "]"


def _transpose_vertices(v) -> list[tuple[float, float]]:
    xm, hm = v[-1]
    pts: dict[float, float] = {0.0: xm}
    for a, b in v:
        pts[b] = max(pts.get(b, 0.0), a)
    return sorted(pts.items())


# -- constructors -------------------------------------------------------------
def polydisc(r1: float = 1.0, r2: float = 1.0) -> ReinhardtDomain2D:
    sh = ShadowProfile.piecewise_linear([(0.0, r2), (r1, r2)])
    return ReinhardtDomain2D(sh, _vertices_key(sh.vertices))


def bidisc() -> ReinhardtDomain2D:
    return polydisc(1.0, 1.0)


def hull(points: Sequence[Sequence[float]]) -> ReinhardtDomain2D:
    """Complete Reinhardt domain whose shadow is the convex hull of ``points`` and the origin.

    Completeness adds the axis projections of every point, so the upper
    boundary is the upper concave envelope of that enlarged set.
    """
    pts = {(0.0, 0.0)}
    for a, b in points:
        a, b = float(a), float(b)
        if a < 0 or b < 0:
            raise ValueError("hull points must lie in the closed first quadrant")
        pts |= {(a, b), (a, 0.0), (0.0, b)}
    # keep the highest point per abscissa, then take the upper hull
    top: dict[float, float] = {}
    for a, b in pts:
        top[a] = max(top.get(a, 0.0), b)
    cand = sorted(top.items())
    upper: list[tuple[float, float]] = []
    for p in cand:
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) >= 0:
            upper.pop()
        upper.append(p)
    sh = ShadowProfile.piecewise_linear(upper)
    return ReinhardtDomain2D(sh, _vertices_key(sh.vertices))


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def trapezoid_hull(s: float = 1.5) -> ReinhardtDomain2D:
    """Hull of (0,0), (1,0), (1,1), (0,s): normalized with a vertical disc at |z1| = 1."""
    return hull([(0, 0), (1, 0), (1, 1), (0, s)])


def from_samples(x: Sequence[float], rho: Sequence[float]) -> ReinhardtDomain2D:
    """Profile given by samples, interpolated piecewise linearly."""
    sh = ShadowProfile.piecewise_linear(list(zip(x, rho)))
    return ReinhardtDomain2D(sh, _vertices_key(sh.vertices))


def from_expression(rho1: str, x_max: float = 1.0) -> ReinhardtDomain2D:
    func = expressions.profile_function(rho1)
    digest = hashlib.sha1(rho1.encode()).hexdigest()[:12]
    return ReinhardtDomain2D(ShadowProfile(float(x_max), func), f"expr[{digest}]({x_max!r})")


def from_callable(rho1: Callable[[np.ndarray], np.ndarray], x_max: float, key: str) -> ReinhardtDomain2D:
    return ReinhardtDomain2D(ShadowProfile(float(x_max), rho1), key)


def ball(radius: float = 1.0) -> ReinhardtDomain2D:
    r = float(radius)

    def func(x):
        return np.sqrt(np.maximum(r * r - np.asarray(x) ** 2, 0.0))

    return ReinhardtDomain2D(ShadowProfile(r, func), f"ball({r!r})")
