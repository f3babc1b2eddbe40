"""Abel and Cesaro means of real sequences and a Tauberian consistency check.

The implication under test: if ``b_k >= -C (k+1)^(lam-1)`` and
``(1-t)^lam sum b_k t^k -> 0`` as ``t -> 1-``, then
``sum_{k<=n} b_k / (n+1)^lam -> 0``.  At desk scale every limit is a
trend over a finite grid plus a final-value threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .domain import ReinhardtDomain2D
from .moments import toeplitz_weights, unit_norms
from .quadrature import Estimate, QuadratureSpec
from .symbols import QuasiHomogeneousSymbol

ABEL_TOL = 1e-12
DEFAULT_THRESHOLD = 1e-2
HYPOTHESIS_SLACK = 1e-12


class PrefixTooShort(ValueError):
    def __init__(self, have: int, need: int, t: float):
        super().__init__(f"abel value at t={t!r} needs {need} terms; sequence has {have} and no generator")
        self.need = need


@dataclass
class CoefficientSequence:
    """A real prefix ``b_0..b_N`` with optional extension rule.

    ``generator(k)`` maps an integer index array to the coefficients; it is
    used to grow the prefix on demand.
    """

    b: np.ndarray
    lam: float = 1.0
    C: float = 1.0
    generator: Callable[[np.ndarray], np.ndarray] | None = None
    name: str = "sequence"

    def __post_init__(self):
        self.b = np.asarray(self.b, dtype=float)
        if self.lam < 0:
            raise ValueError("lam must be non-negative")
        if self.C <= 0:
            raise ValueError("C must be positive")

    def __len__(self) -> int:
        return self.b.size

    def ensure(self, n: int) -> bool:
        """Make at least ``n`` terms available; False when impossible."""
        if n <= self.b.size:
            return True
        if self.generator is None:
            return False
        k = np.arange(self.b.size, n)
        self.b = np.concatenate([self.b, np.asarray(self.generator(k), dtype=float)])
        return True

    @property
    def lower_bound(self) -> np.ndarray:
        return -self.C * (np.arange(self.b.size) + 1.0) ** (self.lam - 1)

    @property
    def hypothesis(self) -> bool:
        """One-sided bound on the available prefix."""
        return bool(np.all(self.b >= self.lower_bound - HYPOTHESIS_SLACK))

    def worst_hypothesis_violation(self) -> float:
        return float(max(0.0, np.max(self.lower_bound - self.b)))

    @classmethod
    def from_function(cls, fn: Callable[[np.ndarray], np.ndarray], n: int, lam=1.0, C=1.0, name="sequence"):
        return cls(fn(np.arange(n)), lam, C, fn, name)


def _envelope(b: np.ndarray) -> tuple[float, float]:
    """``(M, p)`` with ``|b_k| <= M (k+1)^p`` on the prefix; ``p`` from the growth of the running max."""
    a = np.abs(b)
    if not np.any(a):
        return 0.0, 0.0
    k = np.arange(1, a.size + 1, dtype=float)
    half = a.size // 2
    run = np.maximum.accumulate(a)
    p = 0.0
    if half >= 2 and run[half] > 0:
        p = max(0.0, math.log(run[-1] / run[half]) / math.log(k[-1] / k[half]))
    return float(np.max(a / k**p)), p


def _tail_bound(M: float, p: float, t: float, n: int) -> float:
    """Bound on ``sum_{k >= n} M (k+1)^p t^k``."""
    if M == 0.0:
        return 0.0
    r = ((n + 2) / (n + 1)) ** p * t
    if r >= 1:
        return math.inf
    return M * (n + 1) ** p * t**n / (1 - r)


def required_terms(seq: CoefficientSequence, t: float, tol: float = ABEL_TOL) -> int:
    M, p = _envelope(seq.b)
    scale = (1 - t) ** seq.lam
    n = max(seq.b.size, 16)
    while scale * _tail_bound(M, p, t, n) > tol:
        n *= 2
        if n > 1 << 26:
            break
    lo, hi = 1, n
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if scale * _tail_bound(M, p, t, mid) <= tol:
            hi = mid
        else:
            lo = mid
    return hi


def abel_value(seq: CoefficientSequence, t: float, tol: float = ABEL_TOL) -> Estimate:
    """``(1-t)^lam sum_k b_k t^k`` with a tail estimate from the prefix envelope."""
    if not 0 < t < 1:
        raise ValueError("t must lie in (0, 1)")
    need = required_terms(seq, t, tol)
    while need > len(seq):
        if not seq.ensure(need):
            raise PrefixTooShort(len(seq), need, t)
        need = required_terms(seq, t, tol)
    b = seq.b[:need]
    k = np.arange(need)
    terms = b * np.exp(k * math.log(t))
    scale = (1 - t) ** seq.lam
    M, p = _envelope(seq.b)
    return Estimate(scale * math.fsum(terms), scale * _tail_bound(M, p, t, need), True)


def cesaro_ratio(seq: CoefficientSequence, n: int) -> float:
    """``sum_{k<=n} b_k / (n+1)^lam``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if not seq.ensure(n + 1):
        raise ValueError(f"cesaro ratio at n={n} needs {n + 1} terms; sequence has {len(seq)}")
    return math.fsum(seq.b[: n + 1]) / (n + 1) ** seq.lam


def trend_to_zero(values: Sequence[float], threshold: float) -> bool:
    """Final magnitude below ``threshold`` and non-increasing magnitudes over the last half."""
    v = np.abs(np.asarray(values, dtype=float))
    if v.size == 0:
        return False
    tail = v[v.size // 2:]
    return bool(v[-1] < threshold and np.all(np.diff(tail) <= 1e-15 + 1e-9 * tail[:-1]))


def default_t_grid() -> list[float]:
    return [1 - 10.0**-k for k in range(1, 5)]


def default_n_grid() -> list[int]:
    return [10**k for k in range(1, 5)]


@dataclass
class TauberianReport:
    name: str
    lam: float
    C: float
    hypothesis: bool
    hypothesis_violation: float
    t_grid: list[float]
    abel: list[float]
    abel_error: list[float]
    abel_to_zero: bool
    n_grid: list[int]
    cesaro: list[float]
    cesaro_to_zero: bool
    threshold: float
    verdict: str
    notes: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def tauberian_report(seq: CoefficientSequence, t_grid: Sequence[float] | None = None,
                     n_grid: Sequence[int] | None = None, threshold: float = DEFAULT_THRESHOLD) -> TauberianReport:
    """Check hypothesis, Abel trend and Cesaro trend.

    Verdicts: ``consistent`` when the hypothesis and Abel decay hold and the
    Cesaro ratios decay too; ``violation`` when they do not (a bug signal);
    ``not-applicable`` when the hypothesis or the Abel decay fails.
    """
    t_grid = list(t_grid or default_t_grid())
    n_grid = list(n_grid or default_n_grid())
    notes: list[str] = []
    abel, abel_err = [], []
    for t in t_grid:
        e = abel_value(seq, t)
        abel.append(float(e.value))
        abel_err.append(float(e.error))
    ces = [cesaro_ratio(seq, n) for n in n_grid]
    hyp = seq.hypothesis
    a0 = trend_to_zero(abel, threshold)
    c0 = trend_to_zero(ces, threshold)
    if not hyp:
        verdict = "not-applicable"
        notes.append("one-sided coefficient bound fails on the prefix; no conclusion is implied")
    elif not a0:
        verdict = "not-applicable"
        notes.append("Abel means do not trend to 0 on the grid; no conclusion is implied")
    elif c0:
        verdict = "consistent"
    else:
        verdict = "violation"
        notes.append("hypotheses hold numerically but Cesaro ratios do not decay: investigate")
    notes.append(f"limits judged on finite grids with threshold {threshold:g}")
    return TauberianReport(seq.name, seq.lam, seq.C, hyp, seq.worst_hypothesis_violation(), t_grid, abel,
                           abel_err, a0, n_grid, ces, c0, threshold, verdict, notes)


# -- sequences from Toeplitz Berezin data ------------------------------------------------------
def _a2_cutoff(r: float, tol: float = 1e-17) -> int:
    if r == 0.0:
        return 1
    return int(math.ceil(math.log(tol) / (2 * math.log(r)))) + 1


@dataclass
class BerezinCoefficients:
    """``A(a1, r)`` for a quasi-homogeneous symbol on a normalized domain, computed in blocks.

    ``A(a1, r) = pi^2 (1 - r^2)^2 sum_a2 r^(2 a2) lam'_a / ((a1 + 1) ||z^a|| ||z^(a+J)||)``
    so that ``(1-t)^2 sum (a1+1) A(a1, r) t^a1`` is the Berezin series along
    ``|z2| = r`` with ``t = |z1|^2``, up to the phase ``z^J`` and the kernel ratio.
    """

    domain: ReinhardtDomain2D
    symbol: QuasiHomogeneousSymbol
    r: float
    block: int = 32768
    quad: QuadratureSpec | None = None
    values: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        if not self.domain.normalized:
            raise ValueError("domain must be normalized (x_max = 1, rho1(1) = 1)")
        if not 0 <= self.r < 1:
            raise ValueError("|z2| must lie in [0, 1)")
        self._n2 = _a2_cutoff(self.r)

    def _block(self, lo: int, hi: int) -> np.ndarray:
        j1, j2 = self.symbol.J
        a = np.arange(lo, hi)
        b = np.arange(self._n2)
        lp, _, _ = toeplitz_weights(self.domain, self.symbol, a, b, self.quad)
        dom = self.domain.unit_box()
        s = self.domain.s
        N, _, _ = unit_norms(dom, hi - 1 + max(j1, 0), self._n2 - 1 + max(j2, 0), self.quad)
        sa = np.clip(a + j1, 0, None)
        sb = np.clip(b + j2, 0, None)
        support = ((a + j1) >= 0)[:, None] & ((b + j2) >= 0)[None, :]
        # norms in normalized coordinates: x_max = 1, heights scaled by s
        logn = np.log(N[np.ix_(a, b)]) + (2 * b + 2)[None, :] * math.log(s)
        logs = np.log(np.where(support, N[np.ix_(sa, sb)], 1.0)) + (2 * sb + 2)[None, :] * math.log(s)
        w = np.exp(2 * b * math.log(self.r)) if self.r > 0 else (b == 0).astype(float)
        ratio = np.where(support, np.real(lp) * np.exp(-0.5 * (logn + logs)), 0.0)
        return math.pi**2 * (1 - self.r**2) ** 2 * (ratio @ w) / (a + 1)

    def ensure(self, n: int) -> np.ndarray:
        while self.values.size < n:
            lo = self.values.size
            hi = max(n, lo + self.block) if n - lo > self.block else lo + self.block
            hi = min(hi, lo + self.block)
            self.values = np.concatenate([self.values, self._block(lo, hi)])
        return self.values[:n]

    def b(self, k: np.ndarray) -> np.ndarray:
        k = np.asarray(k)
        A = self.ensure(int(k.max()) + 1)
        prev = np.where(k > 0, A[np.maximum(k - 1, 0)], 0.0)
        return (k + 1) * A[k] - k * prev


def berezin_coefficient_sequence(domain: ReinhardtDomain2D, symbol: QuasiHomogeneousSymbol, r: float,
                                 n_terms: int = 1024, C: float = 1.0, quad=None,
                                 regrouped: bool = True) -> CoefficientSequence:
    """Coefficients of the Berezin series along ``|z2| = r`` as a Tauberian sequence.

    ``regrouped`` (``lam = 1``): ``b_0 = A(0)``, ``b_k = (k+1) A(k) - k A(k-1)``;
    its Abel means are ``(1-t)^2 sum (k+1) A(k) t^k`` and its Cesaro ratios
    are exactly ``A(n)``.  Otherwise (``lam = 2``): ``b_k = (k+1) A(k)``.
    Only the real part of ``lam'`` enters, matching a symbol with real
    radial part.
    """
    coeffs = BerezinCoefficients(domain, symbol, r, quad=quad)
    if regrouped:
        gen, lam, tag = coeffs.b, 1.0, "regrouped"
    else:
        def gen(k):
            k = np.asarray(k)
            return (k + 1) * coeffs.ensure(int(k.max()) + 1)[k]
        lam, tag = 2.0, "direct"
    seq = CoefficientSequence(gen(np.arange(n_terms)), lam, C, gen,
                              f"berezin-A[{symbol.name}, |z2|={r:g}, {tag}]")
    seq.coefficients = coeffs  # type: ignore[attr-defined]
    return seq
