"""Interpolation through prescribed amplitudes in the span of N basis functions.

Solving ``B f = a`` with ``B[m, n] = b_n(t_m)`` is exactly what makes additive
superoscillations expensive: B becomes violently ill-conditioned as the points
crowd below the Nyquist spacing. The solver therefore honours the constraints
exactly and pays in precision instead of regularizing:

1. plain LU in float64;
2. iterative refinement with residuals in 106-bit arithmetic;
3. an mpmath LU at ``log2(kappa) + 64`` bits, doubled on failure up to a cap.

Whichever path succeeds is recorded, and the residual is always recomputed by
re-evaluating ``sum_n f_n b_n(t_m)`` in that path's precision.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Any

import mpmath
import numpy as np
import scipy.linalg
from scipy.linalg.lapack import dgecon

from . import bases
from .errors import ResidualNotMet, SingularMatrix
from .signals import BasisSum, SincSeries, Signal, inner_product_on, l2_norm_on

RESIDUAL_TOL = 1e-8
PRECISION_CAP = 4096
REFINE_BITS = 106
# float condition estimates beyond this are recomputed in mpmath
KAPPA_TRUST = 1e12
_EPS = 2.0**-52


@dataclass(frozen=True)
class ConstraintSet:
    points: tuple[float, ...]
    amplitudes: tuple[float, ...]

    def __post_init__(self):
        pts = tuple(float(p) for p in self.points)
        amps = tuple(float(a) for a in self.amplitudes)
        if len(pts) != len(amps):
            raise ValueError("points and amplitudes differ in length")
        if not pts:
            raise ValueError("at least one constraint is required")
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise ValueError("points must be strictly increasing")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n(self) -> int:
        return len(self.points)


def alternating(n: int, spacing: float, center: float = 0.0) -> ConstraintSet:
    """a_m = (-1)**m at n points, m = 1..n, centered on ``center``."""
    pts = tuple(center + (m - (n + 1) / 2) * spacing for m in range(1, n + 1))
    return ConstraintSet(pts, tuple(float((-1) ** m) for m in range(1, n + 1)))


@dataclass
class ConstraintMatrix:
    entries: np.ndarray
    kappa: float
    logdet: float
    det_sign: float
    basis: bases.BasisFamily | None = None
    points: tuple[float, ...] | None = None
    _lu: Any = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def exact(self, prec: int, points=None) -> mpmath.matrix:
        """Entries rebuilt at ``prec`` bits (from the basis when it can do that)."""
        with mpmath.workprec(prec):
            if self.basis is not None and self.basis.mp_evaluator is not None:
                pts = self.points if points is None else points
                return mpmath.matrix(
                    [[self.basis.mp_evaluator(n, mpmath.mpf(t)) for n in range(self.n)] for t in pts]
                )
            return mpmath.matrix(self.entries.tolist())


def _lu(entries):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return scipy.linalg.lu_factor(entries, check_finite=False)


def _float_kappa(entries, lu) -> float:
    anorm = np.abs(entries).sum(axis=0).max()
    if anorm == 0 or not np.all(np.isfinite(lu[0])):
        return math.inf
    rcond, info = dgecon(lu[0], anorm, norm="1")
    return math.inf if rcond == 0 else 1.0 / rcond


def _mp_kappa(m: ConstraintMatrix, start_bits: int = 128) -> tuple[float, float, float]:
    """One-norm condition number and log|det| in mpmath, raising precision until they settle."""
    prev = None
    bits = start_bits
    while bits <= PRECISION_CAP:
        with mpmath.workprec(bits):
            b = m.exact(bits)
            try:
                inv = mpmath.inverse(b)
                kappa = mpmath.mnorm(b, 1) * mpmath.mnorm(inv, 1)
                det = mpmath.det(b)
            except ZeroDivisionError:
                kappa, det = mpmath.inf, mpmath.mpf(0)
            cur = (float(kappa), float(mpmath.log(abs(det))) if det != 0 else -math.inf, float(mpmath.sign(det)))
        if prev is not None and math.isfinite(cur[0]) and abs(cur[0] - prev[0]) <= 1e-3 * cur[0]:
            return cur
        prev = cur
        bits *= 2
    return math.inf, -math.inf, 0.0


def build_matrix(basis: bases.BasisFamily, points) -> ConstraintMatrix:
    points = tuple(float(t) for t in points)
    if basis.count != len(points):
        raise ValueError(f"basis has {basis.count} functions but {len(points)} points were given")
    t = np.asarray(points)
    entries = np.column_stack([np.asarray(basis.evaluate(n, t), dtype=float) for n in range(basis.count)])
    return _finish_matrix(entries, basis, points)


def matrix_from_entries(entries) -> ConstraintMatrix:
    entries = np.array(entries, dtype=float)
    if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
        raise ValueError("constraint matrix must be square")
    return _finish_matrix(entries, None, None)


def _finish_matrix(entries, basis, points) -> ConstraintMatrix:
    lu = _lu(entries)
    diag = np.diag(lu[0])
    with np.errstate(divide="ignore"):
        logdet = float(np.sum(np.log(np.abs(diag))))
    swaps = np.count_nonzero(lu[1] != np.arange(len(lu[1])))
    sign = float((-1) ** swaps * np.prod(np.sign(diag)))
    m = ConstraintMatrix(entries, _float_kappa(entries, lu), logdet, sign, basis, points, lu)
    if not m.kappa < KAPPA_TRUST and m.n <= 200:
        m.kappa, m.logdet, m.det_sign = _mp_kappa(m)
    return m


@dataclass(frozen=True)
class SolveReport:
    coefficients: tuple[Any, ...]
    residual: float
    kappa: float
    path: str
    precision_bits: int
    logdet: float
    singular_threshold: float | None = None

    def to_dict(self) -> dict:
        return {
            "coefficients": list(self.coefficients),
            "residual": self.residual,
            "kappa": self.kappa if math.isfinite(self.kappa) else None,
            "path": self.path,
            "precision_bits": self.precision_bits,
            "logdet": self.logdet if math.isfinite(self.logdet) else None,
            "singular_threshold": self.singular_threshold,
        }


def rank_deficiency_threshold(m: ConstraintMatrix) -> float:
    """log of how far det B moves when the input data move by one ulp.

    The data are the sample points when the matrix came from a basis, the
    entries themselves otherwise. If log|det B| does not clear this threshold,
    the determinant is indistinguishable from zero at the precision the problem
    was posed in.
    """
    bits = PRECISION_CAP if not math.isfinite(m.kappa) else min(PRECISION_CAP, max(128, int(math.log2(m.kappa)) + 128))
    rng = np.random.default_rng(20240101)
    with mpmath.workprec(bits):
        det = mpmath.det(m.exact(bits))
        worst = mpmath.mpf(0)
        for _ in range(4):
            signs = rng.choice((-1.0, 1.0), size=m.n)
            if m.basis is not None and m.basis.mp_evaluator is not None:
                scale = max(1.0, max(abs(t) for t in m.points))
                pts = [mpmath.mpf(t) + s * scale * _EPS for t, s in zip(m.points, signs)]
                pert = mpmath.det(m.exact(bits, pts))
            else:
                rows = [
                    [mpmath.mpf(v) * (1 + s * _EPS) for v in row]
                    for row, s in zip(m.entries.tolist(), signs)
                ]
                pert = mpmath.det(mpmath.matrix(rows))
            worst = max(worst, abs(pert - det))
        return -math.inf if worst == 0 else float(mpmath.log(worst))


def _amp_tol(a) -> float:
    return RESIDUAL_TOL * max(1.0, float(np.max(np.abs(a))) if len(a) else 1.0)


def solve_constraints(m: ConstraintMatrix, amplitudes, precision_cap: int = PRECISION_CAP) -> SolveReport:
    a = np.asarray(amplitudes, dtype=float)
    if a.shape != (m.n,):
        raise ValueError(f"expected {m.n} amplitudes, got {a.shape}")
    tol = _amp_tol(a)
    threshold = None
    if not m.kappa < KAPPA_TRUST:
        threshold = rank_deficiency_threshold(m)
        if not m.logdet > threshold:
            raise SingularMatrix(
                f"log|det B| = {m.logdet:.3f} does not exceed the rank-deficiency threshold {threshold:.3f}"
            )

    lu = m._lu if m._lu is not None else _lu(m.entries)
    x = scipy.linalg.lu_solve(lu, a, check_finite=False)
    if np.all(np.isfinite(x)):
        res = float(np.max(np.abs(m.entries @ x - a)))
        if res <= tol:
            return SolveReport(tuple(float(v) for v in x), res, m.kappa, "plain", 53, m.logdet, threshold)
    else:
        x = np.zeros(m.n)

    with mpmath.workprec(REFINE_BITS):
        b = m.exact(REFINE_BITS)
        av = mpmath.matrix(a.tolist())
        xv = mpmath.matrix(x.tolist())
        res = math.inf
        for _ in range(10):
            r = av - b * xv
            res = float(max(abs(v) for v in r))
            if res <= tol:
                return SolveReport(tuple(xv), res, m.kappa, "iteratively-refined", REFINE_BITS, m.logdet, threshold)
            d = scipy.linalg.lu_solve(lu, np.array([float(v) for v in r]), check_finite=False)
            if not np.all(np.isfinite(d)):
                break
            xv = xv + mpmath.matrix(d.tolist())

    kbits = int(math.ceil(math.log2(m.kappa))) if math.isfinite(m.kappa) and m.kappa > 1 else 0
    bits = max(128, kbits + 64)
    last = math.inf
    while bits <= precision_cap:
        with mpmath.workprec(bits):
            b = m.exact(bits)
            av = mpmath.matrix(a.tolist())
            try:
                xv = mpmath.lu_solve(b, av)
            except ZeroDivisionError:
                raise SingularMatrix("exact-arithmetic factorization hit a zero pivot") from None
            r = av - b * xv
            last = float(max(abs(v) for v in r))
            if last <= tol:
                return SolveReport(tuple(xv), last, m.kappa, "extended-precision", bits, m.logdet, threshold)
        bits *= 2
    if not math.isfinite(last):
        raise ResidualNotMet(f"extended precision needs at least {max(128, kbits + 64)} bits, cap is {precision_cap}")
    raise ResidualNotMet(f"residual {last:.3e} above {tol:.3e} at the {precision_cap}-bit cap")


def _precision(report: SolveReport) -> int | None:
    return None if report.path == "plain" else report.precision_bits


def solve_minnorm(points, amplitudes, band: float, precision_cap: int = PRECISION_CAP):
    """Minimum-L2-norm Omega-bandlimited interpolant (sinc kernels at the points) and its solve report."""
    cs = ConstraintSet(points, amplitudes)
    if not band > 0:
        raise ValueError("bandwidth must be positive")
    basis = bases.sinc(band, cs.points)
    report = solve_constraints(build_matrix(basis, cs.points), cs.amplitudes, precision_cap)
    return SincSeries(band, cs.points, report.coefficients, _precision(report)), report


def generate_minnorm(points, amplitudes, band: float) -> SincSeries:
    return solve_minnorm(points, amplitudes, band)[0]


def solve_generic(basis: bases.BasisFamily, constraints: ConstraintSet, precision_cap: int = PRECISION_CAP):
    if basis.count != constraints.n:
        raise ValueError(f"basis has {basis.count} functions for {constraints.n} constraints")
    report = solve_constraints(build_matrix(basis, constraints.points), constraints.amplitudes, precision_cap)
    signal = BasisSum(basis.name, basis.params, report.coefficients, _precision(report), basis)
    return signal, report


def generate_generic(basis: bases.BasisFamily, constraints: ConstraintSet) -> BasisSum:
    return solve_generic(basis, constraints)[0]


def constraint_residual(signal: Signal, constraints: ConstraintSet) -> float:
    """max_m |f(t_m) - a_m| from the signal's own evaluation."""
    vals = np.asarray(signal.evaluate(np.asarray(constraints.points)))
    return float(np.max(np.abs(vals - np.asarray(constraints.amplitudes))))


def orthogonality_check(minnorm: Signal, h: Signal, truncation) -> float:
    """Normalized inner product <f_min, h> / (|f_min| |h|) over ``truncation``.

    For h bandlimited and vanishing at every constraint point this is zero on
    the full line when f_min has minimal norm; the truncated value is what gets
    reported.
    """
    lo, hi = map(float, truncation)
    nf = l2_norm_on(minnorm, (lo, hi))
    nh = l2_norm_on(h, (lo, hi))
    if nf == 0 or nh == 0:
        return 0.0
    return inner_product_on(minnorm, h, (lo, hi), atol=1e-10 * nf * nh) / (nf * nh)


def sinc_tail_bound(series: SincSeries, T: float) -> float:
    """Upper bound on the energy of a sinc series outside [-T, T].

    Writing sin(W(t - t_k)) = sin(Wt)cos(Wt_k) - cos(Wt)sin(Wt_k), the series is
    sin(Wt)A(t) - cos(Wt)B(t) with A, B sums of c_k-weighted poles. Expanding
    each pole in powers of t_k/t gives an envelope sum_j m_j |t|^-(j+1) whose
    square integrates in closed form.
    """
    tmax = max(abs(c) for c in series.centers)
    if T <= 2 * tmax:
        return math.inf
    prec = series.precision or 53
    with mpmath.workprec(prec + 24):
        w = mpmath.mpf(series.band)
        ca = [mpmath.mpf(c) * mpmath.cos(w * mpmath.mpf(tk)) / w for c, tk in zip(series.coeffs, series.centers)]
        cb = [mpmath.mpf(c) * mpmath.sin(w * mpmath.mpf(tk)) / w for c, tk in zip(series.coeffs, series.centers)]
        ratio = tmax / T
        terms = 1
        while ratio**terms > 1e-20 and terms < 400:
            terms += 1
        m = []
        for j in range(terms):
            mu_a = mpmath.fsum(a * mpmath.mpf(tk) ** j for a, tk in zip(ca, series.centers))
            mu_b = mpmath.fsum(b * mpmath.mpf(tk) ** j for b, tk in zip(cb, series.centers))
            m.append(float(abs(mu_a) + abs(mu_b)))
        # remainder of the geometric expansion
        rest = float(mpmath.fsum(abs(a) + abs(b) for a, b in zip(ca, cb))) * ratio**terms / (1 - ratio)
    m[0] += rest
    u = 1.0 / T
    # integral_0^u (sum_j m_j x^j)^2 dx, both tails
    total = 0.0
    for i, mi in enumerate(m):
        for j, mj in enumerate(m):
            total += mi * mj * u ** (i + j + 1) / (i + j + 1)
    return 2 * total


def choose_truncation(series: SincSeries, rel: float = 1e-6, start: float | None = None, cap: float = 1e5):
    """Smallest T on a doubling ladder with tail-norm bound below ``rel`` of the partial norm.

    Returns ``(T, achieved_ratio)``; if the cap is reached first the achieved
    ratio is returned as is so callers can report it.
    """
    tmax = max(abs(c) for c in series.centers)
    T = start or max(4 * tmax, 8 * math.pi / series.band)
    total = series_l2_exact(series)
    while True:
        tail = sinc_tail_bound(series, T)
        ratio = math.sqrt(tail) / total if total > 0 else 0.0
        if ratio <= rel or T * 2 > cap:
            return T, ratio
        T *= 2


def series_l2_exact(series: SincSeries) -> float:
    """Full-line L2 norm via integral sinc(W(t-a)) sinc(W(t-b)) dt = (pi/W) sinc(W(a-b))."""
    prec = series.precision or 53
    with mpmath.workprec(prec + 24):
        w = mpmath.mpf(series.band)
        c = [mpmath.mpf(x) for x in series.coeffs]
        t = [mpmath.mpf(x) for x in series.centers]
        e = mpmath.fsum(
            c[i] * c[j] * mpmath.sinc(w * (t[i] - t[j])) for i in range(len(c)) for j in range(len(c))
        )
        return float(mpmath.sqrt(max(e, 0) * mpmath.pi / w))
