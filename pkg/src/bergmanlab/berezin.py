"""Truncated Bergman kernels and Berezin transforms.

Everything is evaluated on the unit-box dilation of the domain.  Kernel
values scale back by ``1/(cx^2 cy^2)``; Berezin transforms are dilation
invariant once the symbol is pulled back.

Truncation is certified by comparing with a polydisc ``{|z1|<a, |z2|<b}``
inscribed in the shadow: monotonicity of monomial norms under inclusion
gives ``|e_alpha(z)|^2 <= (a1+1)(a2+1) p^a1 q^a2 / (pi^2 a^2 b^2)`` with
``p = |z1|^2/a^2`` and ``q = |z2|^2/b^2``, and the tail of that majorant
over the complement of an index rectangle is summed in closed form.
"""

from __future__ import annotations

import math
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .domain import ReinhardtDomain2D
from .moments import NORMS, spectrum_table, toeplitz_weights, unit_norms
from .quadrature import Estimate, QuadratureSpec, _gauss, composite_rule
from .symbols import QuasiHomogeneousSymbol, SampledSymbol

PI2 = math.pi**2
DEFAULT_BUDGET = (4096, 64)


class TruncationError(RuntimeError):
    """The kernel tail cannot be certified within the index budget."""


@dataclass(frozen=True)
class KernelTruncation:
    """Requested absolute tail bound and the largest admissible index rectangle."""

    target: float = 1e-10
    budget: tuple[int, int] = DEFAULT_BUDGET


@dataclass(frozen=True)
class Certificate:
    """Index rectangle ``[0,n1) x [0,n2)`` with a certified tail (unit-box units)."""

    n1: int
    n2: int
    tail: float
    radii: tuple[float, float]


def _tail_sum(p: float, n: int) -> float:
    """``sum_{k >= n} (k+1) p^k`` for ``0 <= p < 1``."""
    if p == 0.0:
        return 1.0 if n == 0 else 0.0
    return p**n * ((n + 1) / (1 - p) + p / (1 - p) ** 2)


def _count(p: float, factor: float, target: float, cap: int) -> int:
    """Smallest ``n >= 1`` with ``factor * tail(p, n) <= target``; ``cap + 1`` if none up to cap."""
    if factor * _tail_sum(p, 1) <= target:
        return 1
    if factor * _tail_sum(p, cap) > target:
        return cap + 1
    lo, hi = 1, cap
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if factor * _tail_sum(p, mid) <= target:
            hi = mid
        else:
            lo = mid
    return hi


def _fits(n1: int, n2: int, budget) -> bool:
    """The budget rectangle may be used in either orientation."""
    lo, hi = sorted(budget)
    return min(n1, n2) <= lo and max(n1, n2) <= hi


def certify(dom: ReinhardtDomain2D, x: float, y: float, target: float, budget=DEFAULT_BUDGET,
            candidates: int = 48) -> Certificate:
    """Smallest certified rectangle for points with moduli ``<= (x, y)`` on a unit-box domain."""
    us = np.linspace(0.0, 1.0, candidates + 1)[1:]
    cap = max(budget)
    best = None
    for a in np.unique(np.concatenate([x + (1.0 - x) * us, [1.0]])):
        if a <= x:
            continue
        b = float(dom.shadow(a))
        if b <= y:
            continue
        p, q = (x / a) ** 2, (y / b) ** 2
        c = 1.0 / (PI2 * a * a * b * b)
        t1, t2 = 1.0 / (1 - p) ** 2, 1.0 / (1 - q) ** 2
        n1 = _count(p, c * t2, target / 2, cap)
        n2 = _count(q, c * t1, target / 2, cap)
        if not _fits(n1, n2, budget):
            continue
        # complement of the rectangle: (rows >= n1) + (rows < n1, cols >= n2)
        tail = c * (_tail_sum(p, n1) * t2 + t1 * _tail_sum(q, n2))
        if best is None or n1 * n2 < best.n1 * best.n2:
            best = Certificate(n1, n2, tail, (float(a), b))
    if best is None:
        raise TruncationError(
            f"cannot certify a kernel tail <= {target:g} at moduli ({x:.6g}, {y:.6g}) within "
            f"a {budget[0]}x{budget[1]} rectangle (either orientation); move the point inward or raise the budget"
        )
    return best


def _unit_point(domain: ReinhardtDomain2D, z) -> tuple[complex, complex]:
    z1, z2 = complex(z[0]), complex(z[1])
    w1, w2 = z1 / domain.x_max, z2 / domain.s
    if not domain.unit_box().contains(abs(w1), abs(w2)):
        raise ValueError(f"point {z} is not interior to the domain")
    return w1, w2


def _powers(base: complex, n: int) -> np.ndarray:
    return np.power(complex(base), np.arange(n))


def _fsum_complex(a: np.ndarray) -> complex:
    return complex(math.fsum(a.real.ravel()), math.fsum(a.imag.ravel()))


def bergman_kernel(domain: ReinhardtDomain2D, z, w, trunc: KernelTruncation | None = None,
                   quad: QuadratureSpec | None = None) -> Estimate:
    """``K(z, w) = sum_alpha z^alpha conj(w^alpha) / ||z^alpha||^2`` with a certified tail."""
    trunc = trunc or KernelTruncation()
    dom = domain.unit_box()
    z1, z2 = _unit_point(domain, z)
    w1, w2 = _unit_point(domain, w)
    unit = (domain.x_max * domain.s) ** 2
    # elementwise max of moduli: the same rectangle for (z, w) and (w, z)
    cert = certify(dom, max(abs(z1), abs(w1)), max(abs(z2), abs(w2)), trunc.target * unit, trunc.budget)
    N, _, _ = unit_norms(dom, cert.n1 - 1, cert.n2 - 1, quad)
    terms = np.outer(_powers(z1 * w1.conjugate(), cert.n1), _powers(z2 * w2.conjugate(), cert.n2)) / N
    val = _fsum_complex(terms) / unit
    return Estimate(val, cert.tail / unit, True)


def kernel_diagonal(domain: ReinhardtDomain2D, z, trunc: KernelTruncation | None = None, quad=None) -> Estimate:
    e = bergman_kernel(domain, z, z, trunc, quad)
    return Estimate(float(np.real(e.value)), e.error, e.ok)


def bidisc_kernel_ratio(domain: ReinhardtDomain2D, z, trunc=None) -> float:
    """``K_D2(z,z) / K(z,z)`` for normalized domains, nan outside the unit bidisc."""
    if abs(z[0]) >= 1 or abs(z[1]) >= 1:
        return float("nan")
    kd = 1.0 / (PI2 * (1 - abs(z[0]) ** 2) ** 2 * (1 - abs(z[1]) ** 2) ** 2)
    return kd / kernel_diagonal(domain, z, trunc).value


# -- Berezin transforms of quasi-homogeneous symbols ---------------------------------
@dataclass
class _SeriesData:
    """Coefficients of the Berezin series on a fixed index rectangle."""

    n1: int
    n2: int
    J: tuple[int, int]
    inv_norm: np.ndarray      # 1 / N_alpha
    lam_prime: np.ndarray
    toeplitz: np.ndarray      # lam'_alpha / sqrt(N_alpha N_{alpha+J})
    hankel: np.ndarray | None  # lam_alpha / N_alpha (only when requested)
    sup: float


_SERIES_CACHE: OrderedDict[tuple, tuple[QuasiHomogeneousSymbol, _SeriesData]] = OrderedDict()
_SERIES_CACHE_SIZE = 8


def clear_caches() -> None:
    """Drop cached series data and monomial norm tables."""
    _SERIES_CACHE.clear()
    NORMS.clear()


def _series(domain: ReinhardtDomain2D, symbol: QuasiHomogeneousSymbol, n1: int, n2: int, quad,
            hankel: bool = False) -> _SeriesData:
    quad = quad or QuadratureSpec()
    key = (domain.key, domain.x_max, domain.s, id(symbol), quad)
    hit = _SERIES_CACHE.get(key)
    if hit is not None and hit[0] is not symbol:
        hit = None
    if hit is not None and hit[1].n1 >= n1 and hit[1].n2 >= n2 and (hit[1].hankel is not None or not hankel):
        _SERIES_CACHE.move_to_end(key)
        return hit[1]
    if hit is not None:
        h1, h2 = hit[1].n1, hit[1].n2
        # grow the cached rectangle only when the union stays cheap
        if max(n1, h1) * max(n2, h2) <= 2 * (n1 * n2 + h1 * h2):
            n1, n2 = max(n1, h1), max(n2, h2)
            hankel = hankel or hit[1].hankel is not None
    dom = domain.unit_box()
    j1, j2 = symbol.J
    if hankel:
        tab = spectrum_table(domain, symbol, range(n1), range(n2), quad)
        lp, lam = tab.lam_prime, tab.lam
    else:
        lp, _, _ = toeplitz_weights(domain, symbol, range(n1), range(n2), quad)
        lam = None
    N, _, _ = unit_norms(dom, n1 - 1 + max(j1, 0), n2 - 1 + max(j2, 0), quad)
    a = np.arange(n1)[:, None]
    b = np.arange(n2)[None, :]
    na = N[:n1, :n2]
    sa = np.clip(a + j1, 0, None)
    sb = np.clip(b + j2, 0, None)
    support = (a + j1 >= 0) & (b + j2 >= 0)
    ns = np.where(support, N[sa, sb], 1.0)
    d = _SeriesData(
        n1, n2, (j1, j2), 1.0 / na, lp,
        np.where(support, lp / np.sqrt(na * ns), 0.0),
        None if lam is None else lam / na,
        symbol.pullback(domain.x_max, domain.s).sup_norm(dom),
    )
    _SERIES_CACHE[key] = (symbol, d)
    _SERIES_CACHE.move_to_end(key)
    while len(_SERIES_CACHE) > _SERIES_CACHE_SIZE:
        _SERIES_CACHE.popitem(last=False)
    return d


def _kernel_diag_terms(x: float, y: float, inv_norm: np.ndarray, n1: int, n2: int) -> np.ndarray:
    return np.outer(x ** (2 * np.arange(n1)), y ** (2 * np.arange(n2))) * inv_norm[:n1, :n2]


def _toeplitz_value(data: _SeriesData, w1: complex, w2: complex, cert: Certificate, n1: int, n2: int):
    x, y = abs(w1), abs(w2)
    j1, j2 = data.J
    k = math.fsum(_kernel_diag_terms(x, y, data.inv_norm, cert.n1, cert.n2).ravel())
    e1 = 2 * np.arange(n1) + j1
    e2 = 2 * np.arange(n2) + j2
    # negative exponents only occur off the support, where the coefficient is 0
    p1 = np.where(e1 >= 0, x ** np.clip(e1, 0, None), 0.0)
    p2 = np.where(e2 >= 0, y ** np.clip(e2, 0, None), 0.0)
    s = _fsum_complex(np.outer(p1, p2) * data.toeplitz[:n1, :n2])
    phase = np.exp(1j * (j1 * np.angle(w1) + j2 * np.angle(w2)))
    return s * phase / k, data.sup * cert.tail / k


def berezin_toeplitz_qh(domain: ReinhardtDomain2D, symbol: QuasiHomogeneousSymbol, z,
                        trunc: KernelTruncation | None = None, quad=None) -> Estimate:
    """``<T_phi k_z, k_z>`` from the weighted-shift series."""
    trunc = trunc or KernelTruncation()
    w1, w2 = _unit_point(domain, z)
    unit = (domain.x_max * domain.s) ** 2
    cert = certify(domain.unit_box(), abs(w1), abs(w2), trunc.target * unit, trunc.budget)
    j1, j2 = symbol.J
    n1, n2 = cert.n1 + abs(j1), cert.n2 + abs(j2)
    data = _series(domain, symbol, n1, n2, quad)
    val, err = _toeplitz_value(data, w1, w2, cert, n1, n2)
    return Estimate(val, err, True)


def _hankel_value(data: _SeriesData, w1: complex, w2: complex, cert: Certificate):
    x, y = abs(w1), abs(w2)
    d = _kernel_diag_terms(x, y, data.inv_norm, cert.n1, cert.n2)
    k = math.fsum(d.ravel())
    s = math.fsum((d * (data.hankel[: cert.n1, : cert.n2] / data.inv_norm[: cert.n1, : cert.n2])).ravel())
    return max(s / k, 0.0), data.sup**2 * cert.tail / k


def berezin_hankel_sq_qh(domain: ReinhardtDomain2D, symbol: QuasiHomogeneousSymbol, z,
                         trunc: KernelTruncation | None = None, quad=None) -> Estimate:
    """``||H_phi k_z||^2 = sum |e_alpha(z)|^2 lam_alpha / K(z,z)``."""
    trunc = trunc or KernelTruncation()
    w1, w2 = _unit_point(domain, z)
    unit = (domain.x_max * domain.s) ** 2
    cert = certify(domain.unit_box(), abs(w1), abs(w2), trunc.target * unit, trunc.budget)
    data = _series(domain, symbol, cert.n1, cert.n2, quad, hankel=True)
    val, err = _hankel_value(data, w1, w2, cert)
    return Estimate(val, err, True)


# -- Berezin transform of a general function by quadrature ----------------------------------
FUNCTION_TAIL = 1e-20
FUNCTION_BUDGET = (512, 512)
_POINT_CHUNK = 1 << 22


def _as_polar(f) -> Callable:
    if isinstance(f, (QuasiHomogeneousSymbol,)):
        return f.polar
    if isinstance(f, SampledSymbol):
        return f.func
    return f


def _radial_rule(dom: ReinhardtDomain2D, n: int) -> tuple[np.ndarray, np.ndarray]:
    edges = np.unique(np.concatenate([[0.0, 1.0], [b for b in dom.shadow.breakpoints if 0 < b < 1]]))
    return composite_rule(edges, n)


@dataclass
class FunctionBerezin:
    """Berezin transform of a general function at ``z`` and along its torus orbit."""

    value: complex
    error: float
    orbit: np.ndarray | None
    grid: tuple[int, int]
    certificate: Certificate
    ok: bool = True

    def fourier_coefficient(self, J: Sequence[int]) -> complex:
        """``(B f)_J(z)``, the ``J``-th coefficient of ``eta -> B f(eta . z)``."""
        if self.orbit is None:
            raise ValueError("orbit was not computed")
        m1, m2 = self.grid
        j1, j2 = int(J[0]), int(J[1])
        if 4 * abs(j1) + 4 > m1 or 4 * abs(j2) + 4 > m2:
            raise ValueError(f"J={J} outside the orbit grid range")
        c = np.fft.fft2(self.orbit) / (m1 * m2)
        return complex(c[j1 % m1, j2 % m2])


def berezin_of_function(domain: ReinhardtDomain2D, f, z, quad=None, *, multi_radial: bool | None = None,
                        orbit: bool = False, tail: float = FUNCTION_TAIL, budget=FUNCTION_BUDGET,
                        angular: tuple[int, int] | None = None) -> FunctionBerezin:
    """``int f |K(., z)|^2 dV / K(z, z)`` by tensor quadrature.

    ``f`` is a polar callable ``f(x, y, theta1, theta2)``, a sampled symbol
    or a quasi-homogeneous symbol.  Multi-radial inputs skip the angular
    integration (the angular mean of ``|K(., z)|^2`` is known in closed
    form).  Otherwise ``K(w, z)`` is synthesized on a uniform angular grid
    by a 2D FFT of its Taylor coefficients.  With ``orbit=True`` the values
    at every rotated point ``eta . z`` on that grid are returned as well,
    obtained as a circular cross-correlation.

    The result is normalized by the truncated ``K(z, z)`` so ``f = 1`` maps
    to 1 up to rounding; the reported error combines the truncation bound
    ``2 sup|f| sqrt(tail / K)`` with the quadrature defect on ``f = 1``.
    """
    dom = domain.unit_box()
    cx, cy = domain.x_max, domain.s
    w1, w2 = _unit_point(domain, z)
    x0, y0 = abs(w1), abs(w2)
    cert = certify(dom, x0, y0, tail, budget)
    n1, n2 = cert.n1, cert.n2
    N, _, _ = unit_norms(dom, n1 - 1, n2 - 1, quad)
    if multi_radial is None:
        multi_radial = isinstance(f, QuasiHomogeneousSymbol) and f.J == (0, 0)
    polar = _as_polar(f)

    def g(x, y, t1, t2):
        return np.asarray(polar(x * cx, y * cy, t1, t2), dtype=complex)

    xr, xw = _radial_rule(dom, n1 + 8)
    ur, uw = _gauss(n2 + 8)
    rho = dom.shadow(xr)
    X = np.repeat(xr[:, None], ur.size, axis=1)
    Y = rho[:, None] * ur[None, :]
    Wt = (xw * rho)[:, None] * uw[None, :] * X * Y * (4 * PI2)

    c = np.outer(_powers(np.conj(w1), n1), _powers(np.conj(w2), n2)) / N
    k_trunc = math.fsum((np.abs(c) ** 2 * N).ravel())
    ax = np.arange(n1)
    ay = np.arange(n2)

    if multi_radial:
        # angular mean of |K(w,z)|^2 = sum |c_alpha|^2 x^2a1 y^2a2
        C2 = np.abs(c) ** 2
        vals = np.empty(X.shape, dtype=complex)
        mean = np.empty(X.shape)
        for i in range(X.shape[0]):
            px = xr[i] ** (2 * ax)
            py = Y[i][:, None] ** (2 * ay[None, :])
            mean[i] = py @ (C2.T @ px)
            vals[i] = g(X[i], Y[i], np.zeros_like(X[i]), np.zeros_like(X[i]))
        num = _fsum_complex(Wt * mean * vals)
        den = math.fsum((Wt * mean).ravel())
        sup = float(np.max(np.abs(vals)))
        return _finish(num, den, k_trunc, sup, cert, None, (0, 0))

    m1, m2 = angular or (0, 0)
    m1 = max(m1, _pow2(n1 + 8))
    m2 = max(m2, _pow2(n2 + 8))
    t1 = 2 * np.pi * np.arange(m1) / m1
    t2 = 2 * np.pi * np.arange(m2) / m2
    Xf, Yf, Wf = X.ravel(), Y.ravel(), Wt.ravel()
    chunk = max(1, _POINT_CHUNK // (m1 * m2))
    num = 0j
    den = 0.0
    sup = 0.0
    orb = np.zeros((m1, m2), dtype=complex) if orbit else None
    for lo in range(0, Xf.size, chunk):
        xs, ys, ws = Xf[lo:lo + chunk], Yf[lo:lo + chunk], Wf[lo:lo + chunk]
        coef = np.zeros((xs.size, m1, m2), dtype=complex)
        coef[:, :n1, :n2] = (xs[:, None] ** ax)[:, :, None] * (ys[:, None] ** ay)[:, None, :] * c
        kv = np.fft.ifft2(coef, axes=(1, 2)) * (m1 * m2)
        h = np.abs(kv) ** 2
        fv = g(xs[:, None, None], ys[:, None, None], t1[None, :, None], t2[None, None, :])
        fv = np.broadcast_to(fv, h.shape)
        sup = max(sup, float(np.max(np.abs(fv))))
        num += _fsum_complex(ws[:, None, None] * fv * h) / (m1 * m2)
        den += math.fsum((ws[:, None, None] * h).ravel()) / (m1 * m2)
        if orbit:
            # B f(eta . z) = mean_theta f(theta + eta) |K(theta)|^2
            corr = np.fft.ifft2(np.fft.fft2(fv, axes=(1, 2)) * np.conj(np.fft.fft2(h, axes=(1, 2))), axes=(1, 2))
            orb += np.tensordot(ws, corr, axes=(0, 0)) / (m1 * m2)
    return _finish(num, den, k_trunc, sup, cert, orb, (m1, m2))


def _pow2(n: int) -> int:
    return 1 << max(2, int(math.ceil(math.log2(max(n, 4)))))


def _finish(num, den, k_trunc, sup, cert, orb, grid) -> FunctionBerezin:
    quad_defect = abs(den / k_trunc - 1.0)
    err = 2 * sup * math.sqrt(cert.tail / k_trunc) + sup * quad_defect + 1e-15 * max(sup, 1.0)
    value = num / k_trunc
    if orb is not None:
        orb = orb / k_trunc
    return FunctionBerezin(value, err, orb, grid, cert, quad_defect < 1e-8)


# -- boundary-approach scans --------------------------------------------------------------
@dataclass(frozen=True)
class PathSpec:
    """An approach path to the boundary.

    ``vertical``: ``z(t) = (t e^{i theta1}, y0 e^{i theta2})`` with ``t`` up to ``x_max``.
    ``radial``: ``z(t) = t (x0 e^{i theta1}, y0 e^{i theta2})`` with ``(x0, y0)`` on the
    shadow boundary and ``t`` up to 1.  Boundary distances run geometrically
    from ``d_start`` down to ``d_min`` (relative to the path length).
    """

    kind: str = "vertical"
    x0: float = 1.0
    y0: float = 0.0
    theta: tuple[float, float] = (0.0, 0.0)
    n_points: int = 24
    d_start: float = 0.5
    d_min: float = 1e-4

    def __post_init__(self):
        if self.kind not in ("vertical", "radial"):
            raise ValueError("path kind must be 'vertical' or 'radial'")
        if not 0 < self.d_min < self.d_start <= 1:
            raise ValueError("need 0 < d_min < d_start <= 1")

    def points(self, domain: ReinhardtDomain2D) -> tuple[np.ndarray, np.ndarray, list[tuple[complex, complex]]]:
        d = np.geomspace(self.d_start, self.d_min, self.n_points)
        e1, e2 = np.exp(1j * self.theta[0]), np.exp(1j * self.theta[1])
        if self.kind == "vertical":
            if not 0 <= self.y0 < domain.rho1(domain.x_max):
                raise ValueError("vertical path needs 0 <= y0 < rho1(x_max)")
            t = domain.x_max * (1 - d)
            return t, d, [(ti * e1, self.y0 * e2) for ti in t]
        t = 1 - d
        return t, d, [(ti * self.x0 * e1, ti * self.y0 * e2) for ti in t]

    def describe(self) -> dict:
        return {"kind": self.kind, "x0": self.x0, "y0": self.y0, "theta": list(self.theta),
                "n_points": self.n_points, "d_start": self.d_start, "d_min": self.d_min}


def radial_path(domain: ReinhardtDomain2D, x_frac: float, **kw) -> PathSpec:
    """Radial path toward the boundary point above ``x = x_frac * x_max``."""
    x0 = x_frac * domain.x_max
    return PathSpec("radial", x0, float(domain.rho1(x0)), **kw)


@dataclass
class BerezinScan:
    """Berezin values along a path with per-point truncation data."""

    path: PathSpec
    kind: str
    t: np.ndarray
    distance: np.ndarray
    values: np.ndarray
    tail: np.ndarray
    dims: np.ndarray
    warnings: list[str] = field(default_factory=list)

    @property
    def closest_distance(self) -> float:
        return float(self.distance[-1]) if self.distance.size else float("nan")

    def rows(self):
        for t, v, e, (a, b) in zip(self.t, self.values, self.tail, self.dims):
            yield float(t), float(v.real), float(v.imag), float(e), int(a), int(b)


SCAN_KINDS = ("toeplitz", "hankel_square", "function")


def berezin_scan(domain: ReinhardtDomain2D, symbol, path: PathSpec, kind: str = "toeplitz",
                 trunc: KernelTruncation | None = None, quad=None) -> BerezinScan:
    """Evaluate a Berezin transform along ``path`` until the truncation budget runs out."""
    if kind not in SCAN_KINDS:
        raise ValueError(f"kind must be one of {SCAN_KINDS}")
    trunc = trunc or KernelTruncation()
    t, d, pts = path.points(domain)
    dom = domain.unit_box()
    unit = (domain.x_max * domain.s) ** 2
    warnings: list[str] = []
    certs: list[Certificate] = []
    budget = trunc.budget if kind != "function" else FUNCTION_BUDGET
    for z in pts:
        try:
            w1, w2 = _unit_point(domain, z)
            if kind == "function":
                certs.append(certify(dom, abs(w1), abs(w2), FUNCTION_TAIL, budget))
            else:
                certs.append(certify(dom, abs(w1), abs(w2), trunc.target * unit, budget))
        except (TruncationError, ValueError) as exc:
            warnings.append(f"scan stopped at boundary distance {d[len(certs)]:.3g}: {exc}")
            break
    k = len(certs)
    vals = np.zeros(k, dtype=complex)
    tails = np.zeros(k)
    dims = np.array([(c.n1, c.n2) for c in certs], dtype=int).reshape(k, 2)
    if k and kind != "function":
        j1, j2 = symbol.J
        n1 = max(c.n1 for c in certs) + abs(j1)
        n2 = max(c.n2 for c in certs) + abs(j2)
        data = _series(domain, symbol, n1, n2, quad, hankel=kind == "hankel_square")
    for i in range(k):
        w1, w2 = _unit_point(domain, pts[i])
        c = certs[i]
        if kind == "toeplitz":
            v, e = _toeplitz_value(data, w1, w2, c, c.n1 + abs(symbol.J[0]), c.n2 + abs(symbol.J[1]))
        elif kind == "hankel_square":
            v, e = _hankel_value(data, w1, w2, c)
        else:
            r = berezin_of_function(domain, symbol, pts[i], quad)
            v, e = r.value, r.error
        vals[i], tails[i] = v, e
    if k == 0:
        warnings.append("no path point could be certified")
    return BerezinScan(path, kind, t[:k], d[:k], vals, tails, dims, warnings)
