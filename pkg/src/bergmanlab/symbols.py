"""Symbols on Reinhardt domains: quasi-homogeneous and general sampled ones."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import expressions
from .domain import ReinhardtDomain2D

SUP_SAFETY = 1.05

RadialFn = Callable[[np.ndarray, np.ndarray], np.ndarray]
PolarFn = Callable[[np.ndarray, np.ndarray, np.ndarray, np.ndarray], np.ndarray]


def shadow_grid(domain: ReinhardtDomain2D, n: int = 65) -> tuple[np.ndarray, np.ndarray]:
    """An ``n x n`` grid filling the closed shadow, boundary included."""
    x = np.linspace(0.0, domain.x_max, n)
    u = np.linspace(0.0, 1.0, n)
    X = np.repeat(x[:, None], n, axis=1)
    Y = domain.shadow(x)[:, None] * u[None, :]
    return X, Y


@dataclass(frozen=True, eq=False)
class QuasiHomogeneousSymbol:
    """``phi(z) = radial(|z1|, |z2|) * exp(i (j1 theta1 + j2 theta2))``."""

    radial: RadialFn
    J: tuple[int, int] = (0, 0)
    name: str = "symbol"
    sup_bound: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "J", (int(self.J[0]), int(self.J[1])))

    def part(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        out = np.asarray(self.radial(x, y), dtype=complex)
        return np.broadcast_to(out, np.broadcast_shapes(x.shape, y.shape))

    def polar(self, x, y, t1, t2) -> np.ndarray:
        j1, j2 = self.J
        return self.part(x, y) * np.exp(1j * (j1 * np.asarray(t1) + j2 * np.asarray(t2)))

    def __call__(self, w1, w2) -> np.ndarray:
        w1 = np.asarray(w1, dtype=complex)
        w2 = np.asarray(w2, dtype=complex)
        return self.polar(np.abs(w1), np.abs(w2), np.angle(w1), np.angle(w2))

    def pullback(self, cx: float, cy: float) -> "QuasiHomogeneousSymbol":
        """The same symbol in dilated coordinates ``(x/cx, y/cy)``."""
        if cx == 1.0 and cy == 1.0:
            return self
        f = self.radial

        def radial(x, y):
            return f(np.asarray(x) * cx, np.asarray(y) * cy)

        return QuasiHomogeneousSymbol(radial, self.J, self.name, self.sup_bound)

    def transpose(self) -> "QuasiHomogeneousSymbol":
        f = self.radial
        return QuasiHomogeneousSymbol(lambda x, y: f(y, x), (self.J[1], self.J[0]), self.name, self.sup_bound)

    def sup_norm(self, domain: ReinhardtDomain2D, n: int = 65) -> float:
        if self.sup_bound is not None:
            return float(self.sup_bound)
        X, Y = shadow_grid(domain, n)
        return SUP_SAFETY * float(np.max(np.abs(self.part(X, Y))))

    def scaled(self, c: complex) -> "QuasiHomogeneousSymbol":
        f = self.radial
        sup = None if self.sup_bound is None else abs(c) * self.sup_bound
        return QuasiHomogeneousSymbol(lambda x, y: c * np.asarray(f(x, y)), self.J, self.name, sup)


def constant(c: complex = 1.0) -> QuasiHomogeneousSymbol:
    return QuasiHomogeneousSymbol(lambda x, y: np.full(np.broadcast_shapes(np.shape(x), np.shape(y)), c, dtype=complex),
                                  (0, 0), f"const({c})", abs(c))


def quasi_homogeneous(radial: str, J=(0, 0), name: str | None = None) -> QuasiHomogeneousSymbol:
    """Quasi-homogeneous symbol from a formula for its multi-radial part in ``x, y``."""
    return QuasiHomogeneousSymbol(expressions.radial_function(radial), tuple(J), name or radial)


def z1() -> QuasiHomogeneousSymbol:
    return QuasiHomogeneousSymbol(lambda x, y: np.asarray(x, dtype=complex), (1, 0), "z1")


def z2() -> QuasiHomogeneousSymbol:
    return QuasiHomogeneousSymbol(lambda x, y: np.asarray(y, dtype=complex), (0, 1), "z2")


def conj_z2() -> QuasiHomogeneousSymbol:
    return QuasiHomogeneousSymbol(lambda x, y: np.asarray(y, dtype=complex), (0, -1), "conj(z2)")


@dataclass(frozen=True, eq=False)
class SampledSymbol:
    """A general symbol sampled on uniform angular grids.

    Samples are drawn on demand at whatever radial points a consumer
    needs, so quadrature grids never require re-interpolation.  The
    angular sizes are powers of two.
    """

    func: PolarFn
    m1: int = 64
    m2: int = 64
    name: str = "symbol"

    def __post_init__(self):
        for m in (self.m1, self.m2):
            if m < 4 or m & (m - 1):
                raise ValueError("angular grid sizes must be powers of two >= 4")

    @property
    def angles(self) -> tuple[np.ndarray, np.ndarray]:
        return (2 * np.pi * np.arange(self.m1) / self.m1, 2 * np.pi * np.arange(self.m2) / self.m2)

    def samples(self, x, y) -> np.ndarray:
        """Tensor of values with shape ``broadcast(x, y).shape + (m1, m2)``."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        t1, t2 = self.angles
        shp = np.broadcast_shapes(x.shape, y.shape)
        xb = np.broadcast_to(x, shp)[..., None, None]
        yb = np.broadcast_to(y, shp)[..., None, None]
        out = self.func(xb, yb, t1[:, None], t2[None, :])
        return np.broadcast_to(np.asarray(out, dtype=complex), shp + (self.m1, self.m2))

    def __call__(self, w1, w2) -> np.ndarray:
        w1 = np.asarray(w1, dtype=complex)
        w2 = np.asarray(w2, dtype=complex)
        return np.asarray(self.func(np.abs(w1), np.abs(w2), np.angle(w1), np.angle(w2)), dtype=complex)

    def max_frequency(self) -> tuple[int, int]:
        """Largest |j| per direction that passes the aliasing guard ``m >= 4|j| + 4``."""
        return (self.m1 - 4) // 4, (self.m2 - 4) // 4

    def with_grid(self, m1: int, m2: int) -> "SampledSymbol":
        return SampledSymbol(self.func, m1, m2, self.name)

    def abs_sq(self) -> "SampledSymbol":
        f = self.func
        return SampledSymbol(lambda x, y, a, b: np.abs(f(x, y, a, b)) ** 2, self.m1, self.m2, f"|{self.name}|^2")

    def sup_norm(self, domain: ReinhardtDomain2D, n: int = 33) -> float:
        X, Y = shadow_grid(domain, n)
        return SUP_SAFETY * float(np.max(np.abs(self.samples(X, Y))))


def sampled(expr: str, m1: int = 64, m2: int = 64, name: str | None = None) -> SampledSymbol:
    """Sampled symbol from a formula in ``x, y, theta1, theta2`` (or ``z1, z2``)."""
    return SampledSymbol(expressions.full_symbol(expr), m1, m2, name or expr)


def from_quasi(q: QuasiHomogeneousSymbol, m1: int = 64, m2: int = 64) -> SampledSymbol:
    return SampledSymbol(q.polar, m1, m2, q.name)
