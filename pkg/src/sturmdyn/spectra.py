"""Band spectra of periodic approximants and the generating-band hierarchy.

The set {E : |t_{(k,p)}(E)| <= 2} is the spectrum of a periodic operator
whose period block is p copies of s_k followed by s_{k-1}; it consists of
p*q_k + q_{k-1} closed bands.  Band edges are the eigenvalues of that
operator with periodic (trace +2) and antiperiodic (trace -2) boundary
conditions, so one symmetric eigensolve per sign finds every edge with no
missed-root risk; sorted edges pair off into bands.

On top of band sets sits the order-k hierarchy: type I bands (bands of
sigma_(k,1) inside bands of sigma_(k,0)), type II (bands of sigma_(k+1,0)
inside sigma_(k,-1)), and type III (bands of sigma_(k+1,0) inside
sigma_(k,0)).  For coupling > 4 the three kinds are disjoint and every band
of order k+1 nests in a unique parent of order k, giving each band an
ancestry word over {I, II, III} and a product lower bound on |t'(E)|.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import (
    AmbiguousContainmentError,
    BandCountError,
    ClassificationError,
)
from .rotations import RotationNumber
from .transfer import trace_fn
from .words import standard_word, word_length

__all__ = [
    "Band",
    "BandSet",
    "CountMatrix",
    "BoundMatrix",
    "DerivativeBoundReport",
    "band_set",
    "generating_bands",
    "generating_hierarchy",
    "sigma_approx",
    "derivative_bound_check",
    "per_band_product_bound",
    "count_matrix",
    "bound_matrix",
    "band_set_csv",
    "band_set_json",
]

_TYPES = ("I", "II", "III")


# ---------------------------------------------------------------------------
# data types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Band:
    """A closed energy interval on which |t(E)| <= 2 for its trace curve.

    ``curve`` records which (k, p) trace function the band solves; ``level``
    is the hierarchy order once classified (equal to curve[0] or
    curve[0] - 1 depending on type).
    """

    lo: float
    hi: float
    level: int
    order_index: int
    curve: tuple[int, int]
    band_type: str = "untyped"
    type_index: tuple[str, ...] = ()

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, x: float, slack: float = 0.0) -> bool:
        return self.lo - slack <= x <= self.hi + slack

    def contains_band(self, other: "Band", slack: float = 0.0) -> bool:
        return self.lo - slack <= other.lo and other.hi <= self.hi + slack

    def overlaps(self, other: "Band") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def type_word(self) -> str:
        return ".".join(self.type_index)


@dataclass(frozen=True)
class BandSet:
    """Ordered disjoint bands of one trace function t_{(k,p)}."""

    k: int
    p: int
    bands: tuple[Band, ...]
    expected_count: int

    @property
    def whole_line(self) -> bool:
        return len(self.bands) == 1 and math.isinf(self.bands[0].lo)

    @property
    def total_measure(self) -> float:
        return sum(b.width for b in self.bands)

    def intervals(self) -> list[tuple[float, float]]:
        return [(b.lo, b.hi) for b in self.bands]


@dataclass(frozen=True)
class CountMatrix:
    """3x3 child counts: entry (i, j) is how many order-m type-j bands an
    order-(m-1) type-i band generates."""

    m: int
    entries: np.ndarray


@dataclass(frozen=True)
class BoundMatrix:
    """3x3 per-step derivative gain factors; ``t_lambda`` = 3/(coupling-8)."""

    m: int
    entries: np.ndarray
    t_lambda: float


@dataclass(frozen=True)
class DerivativeBoundReport:
    k: int
    lam: float
    bound: float
    min_ratio: float
    band_count: int
    samples_per_band: int
    worst_energy: float


# ---------------------------------------------------------------------------
# trace curves
# ---------------------------------------------------------------------------


def _period_word(k: int, p: int, r: RotationNumber) -> str | None:
    """Potential symbols whose transfer-product trace equals t_{(k,p)}, or
    None when no genuine word realizes it (k = 0, and k = 1 with p = -1 and
    a_1 = 1, where the trace is constant)."""
    if p >= 0:
        if k >= 1:
            return standard_word(r, k) * p + standard_word(r, k - 1)
        return None
    # p == -1: strip the s_{k-1} prefix of s_k (trace of the inverse equals
    # the trace for unimodular matrices)
    if k >= 2:
        return standard_word(r, k)[word_length(r, k - 1):]
    if k == 1 and r.coefficient(1) >= 2:
        return standard_word(r, 1)[1:]
    return None


def _poly_trace(k: int, p: int, lam: float, a1: int = 1):
    """Exact polynomial for t_{(k,p)} in the k = 0 (and degenerate k = 1,
    p = -1) cases, where the seed matrices are not site products."""
    P = np.polynomial.Polynomial
    one, zero, x = P([1.0]), P([0.0]), P([0.0, 1.0])
    Mm1 = [[one, P([-lam])], [zero, one]]
    M0 = [[x, P([-1.0])], [one, zero]]

    def mul(A, B):
        return [
            [A[0][0] * B[0][0] + A[0][1] * B[1][0], A[0][0] * B[0][1] + A[0][1] * B[1][1]],
            [A[1][0] * B[0][0] + A[1][1] * B[1][0], A[1][0] * B[0][1] + A[1][1] * B[1][1]],
        ]

    def adj(A):
        return [[A[1][1], -A[0][1]], [-A[1][0], A[0][0]]]

    def mpow(A, n):
        R = [[one, zero], [zero, one]]
        for _ in range(n):
            R = mul(R, A)
        return R

    if k == 0:
        B = adj(M0) if p == -1 else mpow(M0, p)
        prod = mul(Mm1, B)
    elif k == 1 and p == -1:
        # t_{(1,-1)} = tr(M_0 M_1^{-1}) with M_1 = M_{-1} M_0^{a_1}
        M1 = mul(Mm1, mpow(M0, a1))
        prod = mul(M0, adj(M1))
    else:
        raise ValueError("polynomial route only covers the seed cases")
    return (prod[0][0] + prod[1][1]).trim(1e-12)


def _expected_count(k: int, p: int, r: RotationNumber) -> int:
    qk = word_length(r, k)
    qk1 = word_length(r, k - 1) if k >= 1 else 0
    if p >= 0:
        return p * qk + qk1
    return qk - qk1


class _TraceCurve:
    """Evaluator for one trace function t_{(k,p)} with its derivative."""

    def __init__(self, k: int, p: int, lam: float, rotation: RotationNumber):
        if k < 0:
            raise ValueError("k >= 0 required")
        if p < -1:
            raise ValueError("p >= -1 required")
        self.k, self.p, self.lam, self.rotation = k, p, lam, rotation
        self.word = _period_word(k, p, rotation)
        self.expected_count = _expected_count(k, p, rotation)
        self.poly = (None if self.word is not None
                     else _poly_trace(k, p, lam, rotation.coefficient(1)))

    @property
    def constant(self) -> float | None:
        if self.poly is not None and self.poly.degree() == 0:
            return float(self.poly.coef[0])
        return None

    def value(self, E):
        if self.poly is not None:
            return self.poly(np.asarray(E, dtype=float))
        return trace_fn(E, self.k, self.p, self.lam, self.rotation).value

    def derivative(self, E):
        if self.poly is not None:
            return self.poly.deriv()(np.asarray(E, dtype=float))
        return trace_fn(E, self.k, self.p, self.lam, self.rotation).derivative

    def value_and_derivative(self, E):
        if self.poly is not None:
            E = np.asarray(E, dtype=float)
            return self.poly(E), self.poly.deriv()(E)
        tv = trace_fn(E, self.k, self.p, self.lam, self.rotation)
        return np.asarray(tv.value), np.asarray(tv.derivative)

    def noise_floor(self, E):
        """Trace-evaluation noise: rounding accumulates at the scale of the
        intermediate factors' magnitudes (the power of M_k can be enormous
        even where the assembled trace is order one), so the floor is
        eps times the product of the factor magnitudes."""
        if self.poly is not None:
            return np.full(np.asarray(E, dtype=float).shape, 1e-12)
        from .transfer import canonical_Mk

        A = canonical_Mk(E, self.k - 1, self.lam, self.rotation)
        B = canonical_Mk(E, self.k, self.lam, self.rotation)

        def logmag(st):
            return (np.asarray(st.log_scale, dtype=float)
                    + np.log(np.max(np.abs(st.m), axis=(-2, -1))))

        reps = 1 if self.p == -1 else max(self.p, 1)
        with np.errstate(over="ignore"):
            return 256.0 * np.finfo(float).eps * np.exp(
                logmag(A) + reps * logmag(B))


# ---------------------------------------------------------------------------
# band construction
# ---------------------------------------------------------------------------


def _periodic_eigenvalues(word: str, lam: float):
    """Eigenvalues with periodic (+) and antiperiodic (-) closure; these are
    exactly the trace = +2 and trace = -2 energies."""
    vals = lam * np.array([1.0 if ch == "1" else 0.0 for ch in word])
    n = len(vals)
    if n == 1:
        return np.array([vals[0] + 2.0]), np.array([vals[0] - 2.0])
    H = np.diag(vals)
    idx = np.arange(n - 1)
    H[idx, idx + 1] = 1.0
    H[idx + 1, idx] = 1.0
    Hp = H.copy()
    Hp[0, n - 1] += 1.0
    Hp[n - 1, 0] += 1.0
    Ha = H.copy()
    Ha[0, n - 1] -= 1.0
    Ha[n - 1, 0] -= 1.0
    return np.linalg.eigvalsh(Hp), np.linalg.eigvalsh(Ha)


def _refine_edges(curve: _TraceCurve, roots: np.ndarray, target: float,
                  max_steps: np.ndarray, iters: int = 6) -> np.ndarray:
    """Guarded Newton polish of t(E) = target from each eigenvalue.

    Symmetric eigensolves locate edges to ~1e-12 absolute, which can be a
    sizable fraction of an exponentially narrow band; Newton with the exact
    trace derivative then contracts onto the root.  Steps are capped so no
    edge can wander toward a neighboring root, and an edge is kept only if
    the polish did not increase its residual.
    """
    if len(roots) == 0:
        return roots
    out = roots.copy()
    v0, _ = curve.value_and_derivative(out)
    r0 = np.abs(np.atleast_1d(v0) - target)
    E = roots.copy()
    for _ in range(iters):
        v, d = curve.value_and_derivative(E)
        v = np.atleast_1d(v)
        d = np.atleast_1d(d)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = (v - target) / d
        step = np.where(np.isfinite(step), step, 0.0)
        step = np.clip(step, -max_steps, max_steps)
        E = E - step
    v1, _ = curve.value_and_derivative(E)
    r1 = np.abs(np.atleast_1d(v1) - target)
    improved = r1 <= r0
    out[improved] = E[improved]
    return out


def _newton_caps(rp: np.ndarray, rm: np.ndarray, cap: float = 1e-7):
    """Per-root step caps: a fraction of the distance to the nearest other
    root, so polish cannot cross into a neighbor."""
    allr = np.sort(np.concatenate([rp, rm]))
    if len(allr) < 2:
        return np.full(len(rp), cap), np.full(len(rm), cap)
    gaps = np.diff(allr)
    lo_gap = np.concatenate([[np.inf], gaps])
    hi_gap = np.concatenate([gaps, [np.inf]])
    nearest = {}
    for r, g1, g2 in zip(allr, lo_gap, hi_gap):
        nearest[r] = min(g1, g2)

    def caps(rs):
        return np.array([max(min(cap, 0.45 * nearest[r]), 4e-12) for r in rs])

    return caps(rp), caps(rm)


def _pair_roots(roots_plus: np.ndarray, roots_minus: np.ndarray):
    allr = np.concatenate([roots_plus, roots_minus])
    order = np.argsort(allr, kind="stable")
    srt = allr[order]
    if len(srt) % 2:
        raise BandCountError("odd number of band edges")
    return [(float(srt[2 * i]), float(srt[2 * i + 1])) for i in range(len(srt) // 2)]


def _scan_roots(curve: _TraceCurve, lam: float):
    """Fallback root search on a dense grid plus bisection."""
    n = max(64 * max(curve.expected_count, 1), 512)
    grid = np.linspace(-lam - 3.0, lam + 3.0, n)
    vals = curve.value(grid)
    roots = {+2.0: [], -2.0: []}
    for target in (2.0, -2.0):
        f = vals - target
        sign = np.sign(f)
        hits = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
        for i in hits:
            a, b = grid[i], grid[i + 1]
            fa = f[i]
            for _ in range(80):
                m = 0.5 * (a + b)
                fm = float(curve.value(m)) - target
                if np.sign(fm) == np.sign(fa):
                    a, fa = m, fm
                else:
                    b = m
            roots[target].append(0.5 * (a + b))
    return np.array(roots[2.0]), np.array(roots[-2.0])


def band_set(k: int, p: int, lam: float, r: RotationNumber, *,
             refine: bool = True) -> BandSet:
    """All bands of t_{(k,p)} at coupling ``lam``.

    Degenerate combinations with a constant trace of modulus <= 2 (only
    (0,0), and (1,-1) when a_1 = 1, where the trace is identically 2) return
    a single unbounded band; the band-count formula does not apply there.
    """
    if lam <= 0:
        raise ValueError("coupling must be positive")
    curve = _TraceCurve(k, p, lam, r)
    const = curve.constant
    if const is not None:
        if abs(const) <= 2.0:
            band = Band(-math.inf, math.inf, k, 0, (k, p))
            return BandSet(k, p, (band,), expected_count=0)
        return BandSet(k, p, (), expected_count=0)

    if curve.word is not None:
        rp, rm = _periodic_eigenvalues(curve.word, lam)
    else:
        poly = curve.poly
        rp = np.sort((poly - 2.0).roots().real)
        rm = np.sort((poly + 2.0).roots().real)

    if refine:
        cp, cm = _newton_caps(rp, rm)
        rp = _refine_edges(curve, rp, 2.0, cp)
        rm = _refine_edges(curve, rm, -2.0, cm)

    pairs = _pair_roots(rp, rm)
    if len(pairs) != curve.expected_count:
        rp, rm = _scan_roots(curve, lam)
        pairs = _pair_roots(rp, rm)
        if len(pairs) != curve.expected_count:
            raise BandCountError(
                f"sigma_({k},{p}): found {len(pairs)} bands, "
                f"expected {curve.expected_count}"
            )
    # Interior sanity where the check is meaningful.  Eigen-edges are
    # ~1e-12 accurate; for bands narrower than that times a safety factor
    # the trace at the midpoint is indistinguishable from noise (its
    # evaluation wanders at the scale of the intermediate matrix growth),
    # so only wider bands are validated.  Counts are guaranteed by the
    # eigenproblem sizes either way.
    mids = np.array([(a + b) / 2 for a, b in pairs])
    widths = np.array([b - a for a, b in pairs])
    checkable = widths >= 1e-9 * np.maximum(1.0, np.abs(mids))
    if np.any(checkable):
        tv = np.atleast_1d(curve.value(mids[checkable]))
        tol = 0.5 + np.atleast_1d(curve.noise_floor(mids[checkable]))
        if np.any(np.abs(tv) > 2.0 + tol):
            worst = int(np.argmax(np.abs(tv) - tol))
            raise BandCountError(
                f"sigma_({k},{p}): |trace| = {abs(tv[worst]):.3g} at a band "
                "midpoint; pairing failed"
            )
    bands = tuple(
        Band(a, b, k, i, (k, p)) for i, (a, b) in enumerate(pairs)
    )
    return BandSet(k, p, bands, expected_count=curve.expected_count)


# ---------------------------------------------------------------------------
# generating bands
# ---------------------------------------------------------------------------


def count_matrix(m: int, r: RotationNumber) -> CountMatrix:
    a = r.coefficient(m)
    t = np.array([[0, 1, 0], [a + 1, 0, a], [a, 0, a - 1]], dtype=int)
    return CountMatrix(m=m, entries=t)


def bound_matrix(m: int, lam: float, r: RotationNumber) -> BoundMatrix:
    if lam <= 8:
        raise ValueError("bound matrices need coupling > 8")
    a = r.coefficient(m)
    t = 3.0 / (lam - 8.0)
    g = a / t
    entries = np.array([[0.0, t ** (-(a - 1)), 0.0], [g, 0.0, g], [g, 0.0, g]])
    return BoundMatrix(m=m, entries=entries, t_lambda=t)


def _assign_parent(child: Band, parents: list[Band], slack: float) -> Band:
    hits = [q for q in parents if q.overlaps(child)]
    if len(hits) != 1:
        raise ClassificationError(
            f"band [{child.lo},{child.hi}] overlaps {len(hits)} parents"
        )
    parent = hits[0]
    if not parent.contains_band(child, slack):
        raise AmbiguousContainmentError(
            f"band [{child.lo},{child.hi}] straddles parent "
            f"[{parent.lo},{parent.hi}]"
        )
    return parent


def _classify_level(m: int, lam: float, r: RotationNumber, slack: float) -> list[Band]:
    """Order-m generating bands, typed but without ancestry words."""
    s_k0 = band_set(m, 0, lam, r)
    s_k1 = band_set(m, 1, lam, r)
    s_km = band_set(m, -1, lam, r)
    s_next = band_set(m + 1, 0, lam, r)
    out = []
    for band in s_k1.bands:
        inside = [q for q in s_k0.bands if q.overlaps(band)]
        if not inside:
            continue  # a band of sigma_(m,1) outside sigma_(m,0) is not generating
        if len(inside) > 1 or not inside[0].contains_band(band, slack):
            raise AmbiguousContainmentError(
                f"order {m}: sigma_({m},1) band [{band.lo},{band.hi}] "
                "straddles sigma_(m,0)"
            )
        out.append(replace(band, band_type="I", level=m))
    for band in s_next.bands:
        in_minus = any(q.contains_band(band, slack) for q in s_km.bands)
        in_zero = any(q.contains_band(band, slack) for q in s_k0.bands)
        if in_minus and in_zero:
            raise ClassificationError(
                f"order {m}: band [{band.lo},{band.hi}] lies in both "
                "sigma_(m,-1) and sigma_(m,0)"
            )
        if in_minus:
            out.append(replace(band, band_type="II", level=m))
        elif in_zero:
            out.append(replace(band, band_type="III", level=m))
        else:
            part = [q for q in (*s_km.bands, *s_k0.bands) if q.overlaps(band)]
            if part:
                raise AmbiguousContainmentError(
                    f"order {m}: band [{band.lo},{band.hi}] partially "
                    "overlaps a parent set"
                )
            raise ClassificationError(
                f"order {m}: band [{band.lo},{band.hi}] is neither type II "
                "nor type III"
            )
    out.sort(key=lambda b: b.lo)
    return [replace(b, order_index=i) for i, b in enumerate(out)]


def generating_hierarchy(k: int, lam: float, r: RotationNumber, *,
                         slack: float = 1e-12,
                         lambda_guard: float = 4.0) -> list[list[Band]]:
    """Generating bands of every order 0..k with full ancestry words.

    Order 0 always consists of one type-I band (the single band of
    sigma_(0,1), inside the whole-line sigma_(0,0)) and one type-III band
    (the single band of sigma_(1,0)); type II is empty there for coupling
    > 4 since sigma_(1,0) = [-2, 2] sits far from sigma_(0,-1).
    """
    if lam <= lambda_guard:
        raise ValueError(
            f"type disjointness needs coupling > {lambda_guard}"
        )
    levels: list[list[Band]] = []
    for m in range(k + 1):
        bands = _classify_level(m, lam, r, slack)
        if m == 0:
            bands = [replace(b, type_index=(b.band_type,)) for b in bands]
        else:
            parents = levels[m - 1]
            typed = []
            for b in bands:
                parent = _assign_parent(b, parents, slack)
                typed.append(
                    replace(b, type_index=parent.type_index + (b.band_type,))
                )
            bands = typed
        levels.append(bands)
    return levels


def generating_bands(k: int, lam: float, r: RotationNumber, *,
                     slack: float = 1e-12,
                     lambda_guard: float = 4.0) -> list[Band]:
    """Typed order-k generating bands with ancestry words of length k + 1."""
    return generating_hierarchy(k, lam, r, slack=slack, lambda_guard=lambda_guard)[k]


# ---------------------------------------------------------------------------
# spectrum approximants
# ---------------------------------------------------------------------------


def _merge(intervals):
    ivs = sorted(intervals)
    out = []
    for lo, hi in ivs:
        if out and lo <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], hi))
        else:
            out.append((lo, hi))
    return out


def _intersect(A, B):
    out = []
    i = j = 0
    while i < len(A) and j < len(B):
        lo = max(A[i][0], B[j][0])
        hi = min(A[i][1], B[j][1])
        if lo <= hi:
            out.append((lo, hi))
        if A[i][1] < B[j][1]:
            i += 1
        else:
            j += 1
    return out


def sigma_approx(k: int, lam: float, r: RotationNumber) -> list[tuple[float, float]]:
    """Depth-k approximant of the spectrum: the intersection over j <= k of
    sigma_j union sigma_{j+1}, with sigma_j the bands of t_{(j+1,0)}."""
    if k < 1:
        raise ValueError("depth k >= 1 required")
    sigma = {j: band_set(j + 1, 0, lam, r).intervals() for j in range(1, k + 2)}
    approx = None
    for j in range(1, k + 1):
        u = _merge(sigma[j] + sigma[j + 1])
        approx = u if approx is None else _intersect(approx, u)
    return approx


# ---------------------------------------------------------------------------
# derivative bounds
# ---------------------------------------------------------------------------


def _interior_samples(band: Band, count: int) -> np.ndarray:
    f = (np.arange(1, count + 1)) / (count + 1)
    return band.lo + f * (band.hi - band.lo)


def xi(lam: float) -> float:
    """The per-two-steps derivative gain sqrt((lam - 8) / 3)."""
    return math.sqrt((lam - 8.0) / 3.0)


def _require_derivative_regime(lam: float, r: RotationNumber, allow_golden: bool):
    if lam > 20:
        return
    if allow_golden and lam > 8 and r.tail == (1,) and not r.head:
        return
    raise ValueError(
        "derivative bounds need coupling > 20 (golden mean alone admits > 8 "
        "with allow_golden=True)"
    )


def derivative_bound_check(k: int, lam: float, r: RotationNumber,
                           samples_per_band: int = 9, *,
                           allow_golden: bool = False) -> DerivativeBoundReport:
    """Check |x_k'(E)| >= A_k xi^{k-1} on interior samples of every band of
    sigma_k, with A_k the product of the first k coefficients.  Violations
    are reported (min_ratio < 1), not raised."""
    _require_derivative_regime(lam, r, allow_golden)
    bands = band_set(k + 1, 0, lam, r)
    A_k = 1
    for i in range(1, k + 1):
        A_k *= r.coefficient(i)
    bound = A_k * xi(lam) ** (k - 1)
    samples = np.concatenate([_interior_samples(b, samples_per_band) for b in bands.bands])
    deriv = np.abs(np.atleast_1d(trace_fn(samples, k + 1, 0, lam, r).derivative))
    ratios = deriv / bound
    worst = int(np.argmin(ratios))
    return DerivativeBoundReport(
        k=k,
        lam=lam,
        bound=bound,
        min_ratio=float(np.min(ratios)),
        band_count=len(bands.bands),
        samples_per_band=samples_per_band,
        worst_energy=float(samples[worst]),
    )


def per_band_product_bound(band: Band, lam: float, r: RotationNumber) -> float:
    """Product of per-step gains along the band's ancestry word; a lower
    bound for |t'(E)| on the band."""
    if not band.type_index:
        raise ClassificationError("band carries no type index")
    idx = [_TYPES.index(t) for t in band.type_index]
    prod = 1.0
    for m in range(1, len(idx)):
        gain = bound_matrix(m, lam, r).entries[idx[m - 1], idx[m]]
        if gain == 0.0:
            raise ClassificationError(
                f"impossible transition {band.type_index[m - 1]} -> "
                f"{band.type_index[m]} at step {m}"
            )
        prod *= gain
    return prod


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def band_set_csv(bs: BandSet) -> str:
    buf = io.StringIO()
    buf.write("# schema_version=1\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "p", "index", "lo", "hi", "type", "type_index"])
    for b in bs.bands:
        w.writerow([bs.k, bs.p, b.order_index, f"{b.lo:.17g}", f"{b.hi:.17g}",
                    b.band_type, b.type_word()])
    return buf.getvalue()


def band_set_json(bs: BandSet) -> str:
    doc = {
        "schema_version": 1,
        "k": bs.k,
        "p": bs.p,
        "expected_count": bs.expected_count,
        "bands": [
            {
                "index": b.order_index,
                "lo": b.lo,
                "hi": b.hi,
                "type": b.band_type,
                "type_index": b.type_word(),
            }
            for b in bs.bands
        ],
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"
