"""Angular Fourier analysis of symbols on Reinhardt domains.

A continuous symbol splits into quasi-homogeneous pieces
``f_J(z) = mean_xi f(xi . z) conj(xi^J)``; on a uniform angular grid that
mean is a 2D FFT coefficient, exact for trigonometric polynomials whose
degree stays below the grid's Nyquist range.  Fejer weights reassemble the
pieces into Cesaro means that converge uniformly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .berezin import (
    KernelTruncation,
    _SeriesData,
    _series,
    _unit_point,
    berezin_hankel_sq_qh,
    berezin_of_function,
    berezin_toeplitz_qh,
    certify,
)
from .domain import ReinhardtDomain2D
from .symbols import QuasiHomogeneousSymbol, SampledSymbol, from_quasi, shadow_grid

_CHUNK = 1 << 21
ZERO_COMPONENT = 1e-13


def _check_nyquist(f: SampledSymbol, J) -> None:
    for j, m in zip(J, (f.m1, f.m2)):
        if 4 * abs(int(j)) + 4 > m:
            raise ValueError(f"degree {tuple(J)} needs angular grids of at least {4 * abs(int(j)) + 4}; have ({f.m1}, {f.m2})")


def angular_coefficients(f: SampledSymbol, x, y) -> np.ndarray:
    """All angular Fourier coefficients, shape ``broadcast(x, y).shape + (m1, m2)``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    shp = np.broadcast_shapes(x.shape, y.shape)
    xf = np.broadcast_to(x, shp).ravel()
    yf = np.broadcast_to(y, shp).ravel()
    out = np.empty((xf.size, f.m1, f.m2), dtype=complex)
    step = max(1, _CHUNK // (f.m1 * f.m2))
    for lo in range(0, xf.size, step):
        out[lo:lo + step] = np.fft.fft2(f.samples(xf[lo:lo + step], yf[lo:lo + step]), axes=(-2, -1))
    return (out / (f.m1 * f.m2)).reshape(shp + (f.m1, f.m2))


def project_QJ(f: SampledSymbol, J: Sequence[int]) -> QuasiHomogeneousSymbol:
    """Degree-``J`` quasi-homogeneous component of ``f`` (its radial part is evaluated lazily)."""
    if isinstance(f, QuasiHomogeneousSymbol):
        f = from_quasi(f)
    _check_nyquist(f, J)
    j1, j2 = int(J[0]), int(J[1])
    m1, m2 = f.m1, f.m2
    # a single coefficient is a weighted sum; cheaper than the full FFT
    c1 = np.exp(-2j * np.pi * j1 * np.arange(m1) / m1) / m1
    c2 = np.exp(-2j * np.pi * j2 * np.arange(m2) / m2) / m2

    def radial(x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        shp = np.broadcast_shapes(x.shape, y.shape)
        xf = np.broadcast_to(x, shp).ravel()
        yf = np.broadcast_to(y, shp).ravel()
        out = np.empty(xf.size, dtype=complex)
        step = max(1, _CHUNK // (m1 * m2))
        for lo in range(0, xf.size, step):
            s = f.samples(xf[lo:lo + step], yf[lo:lo + step])
            out[lo:lo + step] = (s @ c2) @ c1
        return out.reshape(shp)

    return QuasiHomogeneousSymbol(radial, (j1, j2), f"Q{(j1, j2)}[{f.name}]")


@dataclass(frozen=True)
class FejerWeights:
    """Tensor Fejer weights ``(1 - |j1|/(k+1)) (1 - |j2|/(k+1))`` for ``|j1|, |j2| <= k``."""

    k: int

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("order must be non-negative")

    def weight(self, J: Sequence[int]) -> float:
        j1, j2 = abs(int(J[0])), abs(int(J[1]))
        if j1 > self.k or j2 > self.k:
            return 0.0
        return (1 - j1 / (self.k + 1)) * (1 - j2 / (self.k + 1))

    def one_dim(self) -> np.ndarray:
        j = np.arange(-self.k, self.k + 1)
        return 1 - np.abs(j) / (self.k + 1)

    @property
    def array(self) -> np.ndarray:
        """Weights indexed ``[j1 + k, j2 + k]``."""
        w = self.one_dim()
        return np.outer(w, w)

    def items(self):
        for j1 in range(-self.k, self.k + 1):
            for j2 in range(-self.k, self.k + 1):
                yield (j1, j2), self.weight((j1, j2))

    def grid_filter(self, m: int) -> np.ndarray:
        """1D weights laid out in FFT order on a length-``m`` grid."""
        j = np.fft.fftfreq(m, 1.0 / m).astype(int)
        return np.where(np.abs(j) <= self.k, 1 - np.abs(j) / (self.k + 1), 0.0)


@dataclass
class CesaroMean:
    """``Lambda_k f = sum_{|j1|,|j2| <= k} w_J f_J`` for a sampled symbol."""

    symbol: SampledSymbol
    weights: FejerWeights

    @property
    def k(self) -> int:
        return self.weights.k

    def component(self, J: Sequence[int]) -> tuple[float, QuasiHomogeneousSymbol]:
        return self.weights.weight(J), project_QJ(self.symbol, J)

    def components(self):
        """Lazily yield ``(J, w_J, f_J)``."""
        for J, w in self.weights.items():
            yield J, w, project_QJ(self.symbol, J)

    def grid_values(self, x, y) -> np.ndarray:
        """``Lambda_k f`` on the symbol's angular grid at the radial points ``(x, y)``."""
        f = self.symbol
        _check_nyquist(f, (self.k, self.k))
        g1 = self.weights.grid_filter(f.m1)
        g2 = self.weights.grid_filter(f.m2)
        s = f.samples(x, y)
        c = np.fft.fft2(s, axes=(-2, -1)) * g1[:, None] * g2[None, :]
        return np.fft.ifft2(c, axes=(-2, -1))

    def sup_error(self, domain: ReinhardtDomain2D, n_radial: int = 9) -> float:
        """``max |Lambda_k f - f|`` over a shadow grid times the angular grid."""
        X, Y = shadow_grid(domain, n_radial)
        worst = 0.0
        for xr, yr in zip(X, Y):
            d = self.grid_values(xr, yr) - self.symbol.samples(xr, yr)
            worst = max(worst, float(np.max(np.abs(d))))
        return worst


def cesaro_mean(f: SampledSymbol, k: int) -> CesaroMean:
    """Fejer-weighted reassembly of the components of ``f`` up to order ``k``.

    The angular grid is enlarged when needed so that every ``|j| <= k``
    passes the aliasing guard.
    """
    need = 4 * k + 4
    m1, m2 = f.m1, f.m2
    while m1 < need:
        m1 *= 2
    while m2 < need:
        m2 *= 2
    if (m1, m2) != (f.m1, f.m2):
        f = f.with_grid(m1, m2)
    return CesaroMean(f, FejerWeights(k))


def fejer_inner_mass(k: int, delta: float) -> float:
    """Mass of the normalized 1D Fejer kernel on ``[-delta, delta]``."""
    j = np.arange(1, k + 1)
    terms = (1 - j / (k + 1)) * 2 * np.sin(j * delta) / (j * math.pi)
    return delta / math.pi + math.fsum(terms)


def fejer_tail_mass(k: int, delta: float) -> float:
    """Mass of the product Fejer kernel outside ``{|eta1| < delta, |eta2| < delta}``."""
    if not 0 < delta < math.pi:
        raise ValueError("delta must lie in (0, pi)")
    m = fejer_inner_mass(k, delta)
    return min(1.0, max(0.0, 1.0 - m * m))


# -- torus-average Hankel identity ------------------------------------------------------
def nonzero_components(f: SampledSymbol, domain: ReinhardtDomain2D, cutoff: int, n: int = 17):
    """Degrees ``|j1|, |j2| <= cutoff`` whose component is not numerically zero."""
    _check_nyquist(f, (cutoff, cutoff))
    dom = domain
    X, Y = shadow_grid(dom, n)
    c = angular_coefficients(f, X, Y)
    mag = np.max(np.abs(c), axis=(0, 1))
    scale = max(float(mag.max()), 1e-300)
    out = []
    for j1 in range(-cutoff, cutoff + 1):
        for j2 in range(-cutoff, cutoff + 1):
            if mag[j1 % f.m1, j2 % f.m2] > ZERO_COMPONENT * scale:
                out.append((j1, j2))
    return out


@dataclass
class TorusIdentity:
    lhs: float
    rhs: float
    residual: float
    terms: dict[tuple[int, int], float] = field(default_factory=dict)
    error: float = 0.0


def _toeplitz_norm_sq_orbit(datas: dict, w1: complex, w2: complex, cert, grid: tuple[int, int]) -> np.ndarray:
    """``||T_f k_{eta . z}||^2`` on a uniform ``eta`` grid from the component weight tables.

    With ``T_f k_w = K(w,w)^{-1/2} sum_beta c_beta(w) e_beta`` and
    ``c_beta(w) = sum_J conj(e_{beta-J}(w)) lam'^J_{beta-J}``.
    """
    x, y = abs(w1), abs(w2)
    t1, t2 = np.angle(w1), np.angle(w2)
    n1, n2 = cert.n1, cert.n2
    jm1 = max(abs(J[0]) for J in datas)
    jm2 = max(abs(J[1]) for J in datas)
    inv_norm = next(iter(datas.values())).inv_norm
    k = math.fsum((np.outer(x ** (2 * np.arange(n1)), y ** (2 * np.arange(n2))) * inv_norm[:n1, :n2]).ravel())
    a1, a2 = n1 + jm1, n2 + jm2
    m1, m2 = grid
    eta1 = 2 * np.pi * np.arange(m1) / m1
    eta2 = 2 * np.pi * np.arange(m2) / m2
    S = np.zeros((a1 + 2 * jm1, a2 + 2 * jm2, m1, m2), dtype=complex)
    mod = np.outer(x ** np.arange(a1), y ** np.arange(a2)) * np.sqrt(inv_norm[:a1, :a2])
    for (j1, j2), d in datas.items():
        # |e_alpha(z)| lam'_alpha placed at beta = alpha + J; the common factor conj(eta^beta)
        # drops out of |c_beta|, leaving the rotation phase of each component
        coef = mod * d.lam_prime[:a1, :a2]
        phase = np.exp(1j * j1 * (eta1 + t1))[:, None] * np.exp(1j * j2 * (eta2 + t2))[None, :]
        S[jm1 + j1: jm1 + j1 + a1, jm2 + j2: jm2 + j2 + a2] += coef[:, :, None, None] * phase
    return np.sum(np.abs(S) ** 2, axis=(0, 1)) / k


def torus_average_hankel_identity(domain: ReinhardtDomain2D, f: SampledSymbol, z, J_cutoff: int,
                                  trunc: KernelTruncation | None = None, quad=None) -> TorusIdentity:
    """Compare ``sum_J ||H_{f_J} k_z||^2`` with the torus mean of ``||H_f k_{eta . z}||^2``.

    The left side sums the series values of every non-zero component with
    ``|j1|, |j2| <= J_cutoff``.  The right side averages, over a uniform grid
    of rotations, ``B(|f|^2)(eta . z)`` (4D quadrature) minus
    ``||T_f k_{eta . z}||^2`` (weighted-shift series of all components).
    """
    if isinstance(f, QuasiHomogeneousSymbol):
        f = from_quasi(f, 16, 16)
    trunc = trunc or KernelTruncation()
    comps = nonzero_components(f, domain, J_cutoff)
    terms: dict[tuple[int, int], float] = {}
    err = 0.0
    symbols = {J: project_QJ(f, J) for J in comps}
    for J, s in symbols.items():
        e = berezin_hankel_sq_qh(domain, s, z, trunc, quad)
        terms[J] = float(e.value)
        err += e.error
    lhs = math.fsum(terms.values())

    fb = berezin_of_function(domain, f.abs_sq(), z, quad, orbit=True)
    w1, w2 = _unit_point(domain, z)
    unit = (domain.x_max * domain.s) ** 2
    if not symbols:
        return TorusIdentity(lhs, float(np.mean(fb.orbit).real), abs(lhs - float(np.mean(fb.orbit).real)), terms, fb.error)
    cert = certify(domain.unit_box(), abs(w1), abs(w2), trunc.target * unit, trunc.budget)
    jm1 = max(abs(J[0]) for J in symbols)
    jm2 = max(abs(J[1]) for J in symbols)
    datas = {J: _series(domain, s, cert.n1 + 2 * jm1, cert.n2 + 2 * jm2, quad) for J, s in symbols.items()}
    # ||T_f k||^2 is a trigonometric polynomial of degree <= 2|J| in eta: a small grid averages it exactly
    g = (max(8, 1 << (4 * jm1 + 4).bit_length()), max(8, 1 << (4 * jm2 + 4).bit_length()))
    tnorm = _toeplitz_norm_sq_orbit(datas, w1, w2, cert, g)
    rhs = float(np.mean(fb.orbit.real)) - float(np.mean(tnorm))
    sup2 = sum(d.sup for d in datas.values()) ** 2
    err += fb.error + sup2 * cert.tail * 4
    return TorusIdentity(lhs, rhs, abs(lhs - rhs), terms, err)


@dataclass
class Commutation:
    """``B(f_J)(z)`` by the series route against ``(B f)_J(z)`` from the rotated orbit."""

    J: tuple[int, int]
    z: tuple[complex, complex]
    projected_then_berezin: complex
    berezin_then_projected: complex
    difference: float
    error: float


def berezin_fourier_commutation(domain: ReinhardtDomain2D, f: SampledSymbol, z, J: Sequence[int],
                                trunc: KernelTruncation | None = None, quad=None) -> Commutation:
    J = (int(J[0]), int(J[1]))
    a = berezin_toeplitz_qh(domain, project_QJ(f, J), z, trunc, quad)
    fb = berezin_of_function(domain, f, z, quad, orbit=True)
    b = fb.fourier_coefficient(J)
    return Commutation(J, (complex(z[0]), complex(z[1])), complex(a.value), b, abs(a.value - b), a.error + fb.error)
