"""Monomial norms and the diagonal data of Toeplitz and Hankel operators.

For a quasi-homogeneous symbol ``phi = radial(|z1|,|z2|) e^{i J.theta}`` the
Toeplitz operator is a weighted shift ``T e_a = lam'_a e_{a+J}`` and
``H*H`` is diagonal with eigenvalues ``lam_a``.  Every quantity reduces to
radial moments over the shadow,

    4 pi^2 int_0^xmax int_0^rho1(x) g(x, y) x^(2a1+j1+1) y^(2a2+j2+1) dy dx,

which are computed on the unit-box dilation of the domain (Toeplitz and
Hankel data are dilation invariant) with the graded rules of
:mod:`bergmanlab.quadrature`.  The angular part is handled exactly by the
degree bookkeeping and never sampled.
"""

from __future__ import annotations

import math
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .domain import ReinhardtDomain2D
from .quadrature import Estimate, GradedRule, QuadratureSpec
from .symbols import QuasiHomogeneousSymbol

FOUR_PI2 = 4.0 * math.pi**2
NEGATIVE_CLAMP = 1e-9
_CHUNK = 4096


class MultiIndex(NamedTuple):
    a1: int
    a2: int


# -- monomial norms -------------------------------------------------------------
_UNDERFLOW = 745.0


def _power_matmul(nodes: np.ndarray, ex: np.ndarray, W: np.ndarray) -> np.ndarray:
    """``(nodes ** ex[:, None]) @ W`` for ascending nodes in (0, 1), skipping underflowing columns."""
    start = int(np.searchsorted(nodes, math.exp(-_UNDERFLOW / max(int(ex.min()), 1))))
    if start >= nodes.size:
        return np.zeros((ex.size, W.shape[1]), dtype=W.dtype)
    logx = np.log(nodes[start:])
    return np.exp(ex[:, None] * logx[None, :]) @ W[start:]


def _norm_block(dom: ReinhardtDomain2D, a_lo: int, a_hi: int, b_max: int, quad: QuadratureSpec):
    """Unit-box norms ``||z^a||^2`` for ``a_lo <= a1 <= a_hi, a2 <= b_max``."""
    a = np.arange(a_lo, a_hi + 1)
    b = np.arange(b_max + 1)
    spec = quad
    for attempt in range(quad.max_refinements + 1):
        rule = GradedRule.build(spec, 2 * a_hi + 1, 2 * b_max + 2, dom.shadow.breakpoints)
        vals = []
        for nodes, weights in ((rule.nodes, rule.weights), (rule.check_nodes, rule.check_weights)):
            rho = dom.shadow(nodes)
            R = weights[:, None] * rho[:, None] ** (2 * b[None, :] + 2)
            out = np.empty((a.size, b.size))
            for lo in range(0, a.size, _CHUNK):
                out[lo:lo + _CHUNK] = _power_matmul(nodes, 2 * a[lo:lo + _CHUNK] + 1, R)
            vals.append(out * (2 * math.pi**2 / (b[None, :] + 1)))
        err = np.abs(vals[0] - vals[1])
        ok = err <= quad.rtol * vals[0]
        if ok.all():
            break
        spec = spec.refined()
    return vals[0], err, ok


class NormCache:
    """Unit-box monomial norms keyed by domain key, grown on demand.

    Rows in ``a1`` are independent, so growth in ``a1`` only computes the
    new rows (at least doubling the table); growth in ``a2`` recomputes.
    A request far from every stored rectangle (tall vs. wide) gets its own
    table instead of a merged square one.  At most ``MAX_KEYS`` domains and
    ``MAX_TABLES`` tables per domain are kept, least recently used first out.
    Values are deterministic, so concurrent writers racing on a key are
    harmless: last writer wins.
    """

    MAX_KEYS = 16
    MAX_TABLES = 3

    def __init__(self):
        self._tables: OrderedDict[tuple[str, QuadratureSpec], list[tuple[np.ndarray, np.ndarray, np.ndarray]]] = OrderedDict()

    def table(self, dom: ReinhardtDomain2D, a_max: int, b_max: int, quad: QuadratureSpec):
        key = (dom.key, quad)
        tabs = self._tables.setdefault(key, [])
        self._tables.move_to_end(key)
        for i, cur in enumerate(tabs):
            if cur[0].shape[0] > a_max and cur[0].shape[1] > b_max:
                tabs.append(tabs.pop(i))
                return cur
        cur = None
        for i, t in enumerate(tabs):
            rows, cols = t[0].shape
            merged = (max(rows, a_max + 1) * max(cols, b_max + 1))
            if merged <= 2 * (rows * cols + (a_max + 1) * (b_max + 1)):
                cur = tabs.pop(i)
                break
        if cur is not None and cur[0].shape[1] > b_max:
            rows, cols = cur[0].shape
            new = _norm_block(dom, rows, max(a_max, 2 * rows), cols - 1, quad)
            cur = tuple(np.concatenate([c, n]) for c, n in zip(cur, new))
        else:
            if cur is not None:
                a_max = max(a_max, cur[0].shape[0] - 1)
                b_max = max(b_max, cur[0].shape[1] - 1)
            cur = _norm_block(dom, 0, a_max, b_max, quad)
        tabs.append(cur)
        del tabs[:-self.MAX_TABLES]
        while len(self._tables) > self.MAX_KEYS:
            self._tables.popitem(last=False)
        return cur

    def clear(self):
        self._tables.clear()


NORMS = NormCache()


def unit_norms(dom: ReinhardtDomain2D, a_max: int, b_max: int, quad: QuadratureSpec | None = None):
    """``(values, errors, ok)`` arrays of unit-box norms, shape ``(a_max+1, b_max+1)``."""
    quad = quad or QuadratureSpec()
    v, e, ok = NORMS.table(dom.unit_box(), a_max, b_max, quad)
    return v[: a_max + 1, : b_max + 1], e[: a_max + 1, : b_max + 1], ok[: a_max + 1, : b_max + 1]


def monomial_norm_sq(domain: ReinhardtDomain2D, alpha: Sequence[int], quad: QuadratureSpec | None = None) -> Estimate:
    """``||z^alpha||^2`` in ``L^2(domain)``."""
    a1, a2 = int(alpha[0]), int(alpha[1])
    if a1 < 0 or a2 < 0:
        raise ValueError("alpha must be a non-negative multi-index")
    v, e, ok = unit_norms(domain, a1, a2, quad)
    factor = math.exp((2 * a1 + 2) * math.log(domain.x_max) + (2 * a2 + 2) * math.log(domain.s))
    return Estimate(float(v[a1, a2] * factor), float(e[a1, a2] * factor), bool(ok[a1, a2]))


# -- radial moments of a weight ----------------------------------------------------
def _moments(
    dom: ReinhardtDomain2D,
    g: Callable[[np.ndarray, np.ndarray], np.ndarray],
    a_vals: np.ndarray,
    b_vals: np.ndarray,
    shift: tuple[int, int],
    quad: QuadratureSpec,
    scale: float,
    denom: np.ndarray,
):
    """Moments of ``g`` on the unit-box domain ``dom`` divided by ``denom``.

    Entry ``[i, k]`` is ``4pi^2 int g x^(2a+j1+1) y^(2b+j2+1) / denom`` with
    ``a = a_vals[i]``, ``b = b_vals[k]``; entries whose exponent would be
    negative are returned as 0.  ``scale`` sets the absolute accuracy
    target ``rtol * scale`` for the quotient.
    """
    j1, j2 = shift
    ex = 2 * a_vals + j1 + 1
    ey = 2 * b_vals + j2 + 1
    vx = ex >= 1
    vy = ey >= 1
    ex = np.where(vx, ex, 1)
    ey = np.where(vy, ey, 1)
    spec = quad
    for attempt in range(quad.max_refinements + 1):
        xr = GradedRule.build(spec, float(ex.max()), float(ey.max()) + 1, dom.shadow.breakpoints)
        ur = GradedRule.build(spec, float(ey.max()), 0.0)
        results = []
        for (xn, xw), (un, uw) in (
            ((xr.nodes, xr.weights), (ur.nodes, ur.weights)),
            ((xr.check_nodes, xr.check_weights), (ur.check_nodes, ur.check_weights)),
        ):
            rho = dom.shadow(xn)
            G = np.asarray(g(xn[:, None], rho[:, None] * un[None, :]), dtype=complex)
            G = np.broadcast_to(G, (xn.size, un.size))
            U = uw[:, None] * un[:, None] ** ey[None, :]
            psi = (G @ U) * rho[:, None] ** (ey[None, :] + 1)
            W = xw[:, None] * psi
            out = np.empty((a_vals.size, b_vals.size), dtype=complex)
            for lo in range(0, a_vals.size, _CHUNK):
                out[lo:lo + _CHUNK] = _power_matmul(xn, ex[lo:lo + _CHUNK], W)
            results.append(FOUR_PI2 * out / denom)
        err = np.abs(results[0] - results[1])
        mask = vx[:, None] & vy[None, :]
        ok = (err <= quad.rtol * max(scale, 1e-300)) | ~mask
        if ok.all():
            break
        spec = spec.refined()
    val = np.where(mask, results[0], 0.0)
    return val, np.where(mask, err, 0.0), ok


def _real_if_possible(a: np.ndarray) -> np.ndarray:
    return a.real.copy() if np.all(a.imag == 0) else a


@dataclass
class SpectrumTable:
    """Toeplitz and Hankel diagonal data over a rectangle of multi-indices.

    Arrays are indexed ``[i, k]`` for ``alpha = (a1_values[i], a2_values[k])``.
    """

    domain_key: str
    symbol_name: str
    J: tuple[int, int]
    a1_values: np.ndarray
    a2_values: np.ndarray
    lam_prime: np.ndarray
    lam_dprime: np.ndarray
    lam: np.ndarray
    err_prime: np.ndarray
    err_dprime: np.ndarray
    err_lam: np.ndarray
    ok: np.ndarray
    clamped: int = 0
    diagnostics: list[str] = field(default_factory=list)

    @property
    def err(self) -> np.ndarray:
        return np.maximum(np.maximum(self.err_prime, self.err_dprime), self.err_lam)

    def rows(self):
        """``(a1, a2, lam', lam'', lam, err)`` with a2 outer, a1 inner."""
        e = self.err
        for k, b in enumerate(self.a2_values):
            for i, a in enumerate(self.a1_values):
                yield int(a), int(b), self.lam_prime[i, k], self.lam_dprime[i, k], self.lam[i, k], e[i, k]


def _index_arrays(a1_values, a2_values):
    a = np.asarray(a1_values, dtype=np.int64)
    b = np.asarray(a2_values, dtype=np.int64)
    if a.size == 0 or b.size == 0 or a.min() < 0 or b.min() < 0:
        raise ValueError("index sets must be non-empty and non-negative")
    return a, b


def toeplitz_weights(
    domain: ReinhardtDomain2D,
    symbol: QuasiHomogeneousSymbol,
    a1_values: Sequence[int],
    a2_values: Sequence[int],
    quad: QuadratureSpec | None = None,
):
    """``(lam', error, ok)`` arrays over ``a1_values x a2_values`` without the radial weights."""
    quad = quad or QuadratureSpec()
    a, b = _index_arrays(a1_values, a2_values)
    lp, ep, ok, extra = _toeplitz_part(domain, symbol, a, b, quad)
    return _real_if_possible(lp), ep, ok & extra[-1]


def _toeplitz_part(domain, symbol, a, b, quad):
    dom = domain.unit_box()
    phi = symbol.pullback(domain.x_max, domain.s)
    j1, j2 = symbol.J
    sup = phi.sup_norm(dom)

    amax = int(a.max()) + max(j1, 0)
    bmax = int(b.max()) + max(j2, 0)
    N, Nerr, Nok = unit_norms(dom, amax, bmax, quad)
    na = N[np.ix_(a, b)]
    support = ((a + j1) >= 0)[:, None] & ((b + j2) >= 0)[None, :]
    a_s = np.clip(a + j1, 0, None)
    b_s = np.clip(b + j2, 0, None)
    ns = np.where(support, N[np.ix_(a_s, b_s)], 1.0)
    rel_n = Nerr[np.ix_(a, b)] / na + np.where(support, Nerr[np.ix_(a_s, b_s)] / ns, 0.0)

    lp, ep, okp = _moments(dom, phi.part, a, b, (j1, j2), quad, sup, np.sqrt(na * ns))
    lp = np.where(support, lp, 0.0)
    ep = np.where(support, ep + 0.5 * np.abs(lp) * rel_n, 0.0)
    return lp, ep, okp, (dom, phi, sup, support, na, Nerr[np.ix_(a, b)], Nok[np.ix_(a, b)])


def spectrum_table(
    domain: ReinhardtDomain2D,
    symbol: QuasiHomogeneousSymbol,
    a1_values: Sequence[int],
    a2_values: Sequence[int],
    quad: QuadratureSpec | None = None,
) -> SpectrumTable:
    """lam', lam'' and lam over the product ``a1_values x a2_values``."""
    quad = quad or QuadratureSpec()
    a, b = _index_arrays(a1_values, a2_values)
    j1, j2 = symbol.J
    lp, ep, okp, (dom, phi, sup, support, na, na_err, na_ok) = _toeplitz_part(domain, symbol, a, b, quad)

    def abs_sq(x, y):
        return np.abs(phi.part(x, y)) ** 2

    lpp, epp, okpp = _moments(dom, abs_sq, a, b, (0, 0), quad, sup**2, na)
    lpp = lpp.real
    epp = epp + np.abs(lpp) * na_err / na

    lam = np.where(support, lpp - np.abs(lp) ** 2, lpp)
    elam = epp + np.where(support, 2 * np.abs(lp) * ep, 0.0)
    ok = okp & okpp & na_ok
    diagnostics = []
    neg = lam < 0
    clamp = neg & (lam >= -NEGATIVE_CLAMP)
    n_clamped = int(clamp.sum())
    if n_clamped:
        diagnostics.append(f"clamped {n_clamped} eigenvalues in [-{NEGATIVE_CLAMP:g}, 0) to 0")
        lam = np.where(clamp, 0.0, lam)
    bad = lam < -NEGATIVE_CLAMP
    if bad.any():
        diagnostics.append(f"{int(bad.sum())} eigenvalues below -{NEGATIVE_CLAMP:g}: quadrature inconsistency")
        ok = ok & ~bad
    if not ok.all():
        diagnostics.append(f"{int((~ok).sum())} entries did not reach rtol={quad.rtol:g}")
    return SpectrumTable(
        domain.key, symbol.name, (j1, j2), a, b,
        _real_if_possible(lp), lpp, lam, ep, epp, elam, ok, n_clamped, diagnostics,
    )


def _single(domain, symbol, alpha, quad) -> tuple[SpectrumTable, int, int]:
    a1, a2 = int(alpha[0]), int(alpha[1])
    if a1 < 0 or a2 < 0:
        raise ValueError("alpha must be a non-negative multi-index")
    return spectrum_table(domain, symbol, [a1], [a2], quad), 0, 0


def toeplitz_weight(domain, symbol: QuasiHomogeneousSymbol, alpha, quad=None) -> Estimate:
    """``lam'_alpha`` with ``T_phi e_alpha = lam'_alpha e_(alpha+J)``; 0 off the support."""
    t, i, k = _single(domain, symbol, alpha, quad)
    return Estimate(t.lam_prime[i, k], float(t.err_prime[i, k]), bool(t.ok[i, k]))


def radial_weight(domain, symbol: QuasiHomogeneousSymbol, alpha, quad=None) -> Estimate:
    """``lam''_alpha = int |phi|^2 |e_alpha|^2 dV``."""
    t, i, k = _single(domain, symbol, alpha, quad)
    return Estimate(float(t.lam_dprime[i, k]), float(t.err_dprime[i, k]), bool(t.ok[i, k]))


def hankel_eigenvalue(domain, symbol: QuasiHomogeneousSymbol, alpha, quad=None) -> Estimate:
    """``lam_alpha = ||H_phi e_alpha||^2``; flagged when the raw value is clearly negative."""
    t, i, k = _single(domain, symbol, alpha, quad)
    return Estimate(float(t.lam[i, k]), float(t.err_lam[i, k]), bool(t.ok[i, k]))


def psi_prime(domain, symbol: QuasiHomogeneousSymbol, x: float, alpha2: int, quad=None) -> Estimate:
    """Inner radial integral ``int_0^rho1(x) phi(x, y) y^(2 alpha2 + j2 + 1) dy``."""
    from .quadrature import integrate

    quad = quad or QuadratureSpec()
    e = 2 * int(alpha2) + symbol.J[1] + 1
    if e < 0:
        raise ValueError("exponent 2*alpha2 + j2 + 1 must be non-negative")
    r = domain.rho1(x)

    def f(y):
        return symbol.part(np.full_like(y, x), y) * y**e

    return integrate(f, 0.0, r, quad, hint_right=e)


def radial_moment_table(
    domain: ReinhardtDomain2D,
    weight: Callable[[np.ndarray, np.ndarray], np.ndarray],
    a_max: int,
    b_max: int,
    quad: QuadratureSpec | None = None,
):
    """``int weight |e_alpha|^2 dV`` for a multi-radial weight over a rectangle."""
    quad = quad or QuadratureSpec()
    dom = domain.unit_box()
    cx, cy = domain.x_max, domain.s

    def g(x, y):
        return np.asarray(weight(np.asarray(x) * cx, np.asarray(y) * cy), dtype=complex)

    a = np.arange(a_max + 1)
    b = np.arange(b_max + 1)
    N, _, _ = unit_norms(dom, a_max, b_max, quad)
    from .symbols import shadow_grid

    X, Y = shadow_grid(dom, 33)
    scale = float(np.max(np.abs(g(X, Y)))) or 1.0
    val, err, ok = _moments(dom, g, a, b, (0, 0), quad, scale, N)
    return _real_if_possible(val), err, ok
