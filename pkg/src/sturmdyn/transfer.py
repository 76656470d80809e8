"""Transfer matrices, trace functions, and norm accumulants.

A single site contributes T(E) = [[E - lam*v, -1], [1, 0]]; products of
these propagate solutions of the difference equation.  Every product is
accumulated together with its entrywise derivative in E (product rule, one
extra 2x2 multiply per site), so trace derivatives are exact rather than
finite-differenced.  Negative site counts use the explicit adjugate inverse,
which keeps unimodularity exact.

Products can overflow double range far off the spectrum; matrices are
therefore stored as a unit-scaled matrix plus a log magnitude, and the
squared norm accumulant sum_{n<L} ||M(E,n)||^2 (with the fractional-weight
term at floor(L)) is evaluated with log-sum-exp.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import WindowTooShortError
from .rotations import RotationNumber
from .words import PotentialWindow, sample_potential, word_length

__all__ = [
    "TransferState",
    "TraceValue",
    "NormAccumulant",
    "LengthScale",
    "step_matrix",
    "transfer",
    "canonical_Mk",
    "trace_fn",
    "trace_phase",
    "norm_accumulant",
    "key_estimate_check",
    "length_scale",
    "log_norm_series",
]

_RESCALE_AT = 1e150


# ---------------------------------------------------------------------------
# core chain kernel, vectorized over a batch of energies
# ---------------------------------------------------------------------------


def _chain(values, E, lam, inverse=False):
    """Accumulate transfer factors for the given 0/1 potential values.

    ``values`` are applied first-to-last (each new factor multiplies on the
    left).  With ``inverse`` the adjugate inverses are applied instead.
    Returns (M, dM, log_scale): the true product is M * exp(log_scale).
    """
    E = np.asarray(E, dtype=float)
    shp = E.shape
    a = np.ones(shp)
    b = np.zeros(shp)
    c = np.zeros(shp)
    d = np.ones(shp)
    da = np.zeros(shp)
    db = np.zeros(shp)
    dc = np.zeros(shp)
    dd = np.zeros(shp)
    ls = np.zeros(shp)
    for v in values:
        e = E - lam * v
        if not inverse:
            na = e * a - c
            nb = e * b - d
            nda = a + e * da - dc
            ndb = b + e * db - dd
            c, d, dc, dd = a, b, da, db
            a, b, da, db = na, nb, nda, ndb
        else:
            # T^{-1} = [[0, 1], [-1, e]], dT^{-1} = [[0, 0], [0, 1]]
            nc = e * c - a
            nd = e * d - b
            ndc = c + e * dc - da
            ndd = d + e * dd - db
            a, b, da, db = c, d, dc, dd
            c, d, dc, dd = nc, nd, ndc, ndd
        big = np.maximum(np.maximum(np.abs(a), np.abs(b)),
                         np.maximum(np.abs(c), np.abs(d)))
        if np.any(big > _RESCALE_AT):
            f = np.where(big > _RESCALE_AT, big, 1.0)
            a, b, c, d = a / f, b / f, c / f, d / f
            da, db, dc, dd = da / f, db / f, dc / f, dd / f
            ls = ls + np.log(f)
    M = np.stack([np.stack([a, b], axis=-1), np.stack([c, d], axis=-1)], axis=-2)
    dM = np.stack([np.stack([da, db], axis=-1), np.stack([dc, dd], axis=-1)], axis=-2)
    return M, dM, ls


def _pair_mul(A, dA, B, dB):
    return A @ B, dA @ B + A @ dB


def _pair_rescale(A, dA, ls):
    """Pull magnitude out of a scaled pair when entries pass the threshold."""
    big = np.max(np.abs(A), axis=(-2, -1))
    if np.any(big > _RESCALE_AT):
        f = np.where(big > _RESCALE_AT, big, 1.0)
        A = A / f[..., None, None]
        dA = dA / f[..., None, None]
        ls = ls + np.log(f)
    return A, dA, ls


def _pair_adj(A, dA):
    def adj(X):
        out = np.empty_like(X)
        out[..., 0, 0] = X[..., 1, 1]
        out[..., 0, 1] = -X[..., 0, 1]
        out[..., 1, 0] = -X[..., 1, 0]
        out[..., 1, 1] = X[..., 0, 0]
        return out

    return adj(A), adj(dA)


def _pair_pow(A, dA, ls, p: int):
    """(A^p, d(A^p), p*ls) for p >= 0 by repeated multiplication, rescaling
    along the way (p stays small)."""
    shp = A.shape
    R = np.broadcast_to(np.eye(2), shp).copy()
    dR = np.zeros(shp)
    ls_out = np.zeros(A.shape[:-2])
    for _ in range(p):
        R, dR = _pair_mul(R, dR, A, dA)
        ls_out = ls_out + np.asarray(ls, dtype=float)
        R, dR, ls_out = _pair_rescale(R, dR, ls_out)
    return R, dR, ls_out


def _spectral_norm(M):
    """Largest singular value of a 2x2 (batch), in closed form.

    sigma_max^2 = fro2 (1 + sqrt(1 - 4 (det/fro2)^2)) / 2; the determinant
    ratio is at most 1/2 in magnitude, so nothing is squared that could
    overflow before fro2 itself does.
    """
    fro2 = np.sum(M * M, axis=(-2, -1))
    det = M[..., 0, 0] * M[..., 1, 1] - M[..., 0, 1] * M[..., 1, 0]
    r = det / fro2
    disc = np.sqrt(np.maximum(1.0 - 4.0 * r * r, 0.0))
    return np.sqrt(fro2 * (1.0 + disc) / 2.0)


def _log_spectral_norm(M, ls):
    """log of the largest singular value of M * exp(ls), overflow-safe."""
    fro2 = np.sum(M * M, axis=(-2, -1))
    det = M[..., 0, 0] * M[..., 1, 1] - M[..., 0, 1] * M[..., 1, 0]
    r = det / fro2
    disc = np.sqrt(np.maximum(1.0 - 4.0 * r * r, 0.0))
    return ls + 0.5 * (np.log(fro2) + np.log((1.0 + disc) / 2.0))


# ---------------------------------------------------------------------------
# public value types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TransferState:
    """A 2x2 unimodular product with its exact entrywise E-derivative.

    The represented matrix is ``m * exp(log_scale)``; ``log_scale`` is 0
    unless entries crossed the rescaling threshold.
    """

    m: np.ndarray
    dm: np.ndarray
    sites: int
    log_scale: np.ndarray | float = 0.0

    @property
    def matrix(self) -> np.ndarray:
        return self.m * np.exp(np.asarray(self.log_scale))[..., None, None]

    @property
    def derivative(self) -> np.ndarray:
        return self.dm * np.exp(np.asarray(self.log_scale))[..., None, None]

    @property
    def det(self):
        raw = self.m[..., 0, 0] * self.m[..., 1, 1] - self.m[..., 0, 1] * self.m[..., 1, 0]
        return raw * np.exp(2.0 * np.asarray(self.log_scale))

    @property
    def trace(self):
        return (self.m[..., 0, 0] + self.m[..., 1, 1]) * np.exp(np.asarray(self.log_scale))

    @property
    def trace_derivative(self):
        return (self.dm[..., 0, 0] + self.dm[..., 1, 1]) * np.exp(np.asarray(self.log_scale))

    @property
    def norm(self):
        return _spectral_norm(self.m) * np.exp(np.asarray(self.log_scale))


@dataclass(frozen=True)
class TraceValue:
    """Value and exact E-derivative of the trace function t_{(k,p)}.

    Far off the spectrum the trace exceeds double range; ``value`` is then
    inf, and the pair (value_scaled, log_scale) with
    value = value_scaled * exp(log_scale) remains finite for identity
    checks at scale.
    """

    k: int
    p: int
    value: float | np.ndarray
    derivative: float | np.ndarray
    value_scaled: float | np.ndarray = 0.0
    derivative_scaled: float | np.ndarray = 0.0
    log_scale: float | np.ndarray = 0.0
    log_magnitude: float | np.ndarray = 0.0
    """log of the composed matrix's entry magnitude: the trace cancels two
    entries of this size, so its evaluation noise floor is roughly
    eps * exp(log_magnitude)."""


@dataclass(frozen=True)
class NormAccumulant:
    """The length-L squared-norm accumulant, stored as a log.

    value = sqrt(sum_{n=1}^{floor(L)-1} ||M(n)||^2
                 + (L - floor(L)) ||M(floor(L))||^2),
    nondecreasing in L; ``direction`` -1 mirrors to negative sites.
    """

    L: float
    direction: int
    log_sq: float

    @property
    def value(self) -> float:
        return math.exp(0.5 * self.log_sq) if self.log_sq > -math.inf else 0.0


@dataclass(frozen=True)
class LengthScale:
    """Solution of accumulant(L) = target; ``saturated`` marks a window too
    small to reach the target, in which case ``value`` is the cap."""

    value: float
    saturated: bool
    target: float


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def step_matrix(E: float, m: int, lam: float, window: PotentialWindow) -> np.ndarray:
    """Single-site factor [[E - lam*v(m), -1], [1, 0]]."""
    v = window.value(m)
    return np.array([[E - lam * v, -1.0], [1.0, 0.0]])


def _window_values(window, lo, hi):
    window.require(lo, hi)
    return window.values[lo - window.lo : hi - window.lo + 1].astype(float)


def transfer(E, n: int, lam: float, window: PotentialWindow) -> TransferState:
    """Product of site factors from site 1 out to site n (identity at n=0).

    For n <= -1 the inverse factors over sites 0 down to n+1 are used.  ``E``
    may be a scalar or an array; results broadcast accordingly.
    """
    if n == 0:
        E = np.asarray(E, dtype=float)
        shp = E.shape + (2, 2)
        M = np.broadcast_to(np.eye(2), shp).copy()
        return TransferState(M, np.zeros(shp), 0, np.zeros(E.shape))
    if n >= 1:
        vals = _window_values(window, 1, n)
        M, dM, ls = _chain(vals, E, lam)
    else:
        vals = _window_values(window, n + 1, 0)[::-1]  # apply 0, -1, ..., n+1
        M, dM, ls = _chain(vals, E, lam, inverse=True)
    return TransferState(M, dM, abs(n), ls)


def canonical_Mk(E, k: int, lam: float, r: RotationNumber) -> TransferState:
    """The phase-0 matrices M_k: seeds [[1,-lam],[0,1]] and [[E,-1],[1,0]]
    at k = -1, 0, and the product over [1, q_k] for k >= 1; satisfies
    M_{k+1} = M_{k-1} M_k^{a_{k+1}}."""
    E = np.asarray(E, dtype=float)
    shp = E.shape
    if k < -1:
        raise ValueError("k >= -1 required")
    if k == -1:
        M = np.broadcast_to(np.array([[1.0, -lam], [0.0, 1.0]]), shp + (2, 2)).copy()
        return TransferState(M, np.zeros(shp + (2, 2)), 0, np.zeros(shp))
    if k == 0:
        M = np.empty(shp + (2, 2))
        M[..., 0, 0] = E
        M[..., 0, 1] = -1.0
        M[..., 1, 0] = 1.0
        M[..., 1, 1] = 0.0
        dM = np.zeros(shp + (2, 2))
        dM[..., 0, 0] = 1.0
        return TransferState(M, dM, 1, np.zeros(shp))
    qk = word_length(r, k)
    window = sample_potential(r, 0, 1, qk)
    return transfer(E, qk, lam, window)


def trace_fn(E, k: int, p: int, lam: float, r: RotationNumber) -> TraceValue:
    """tr(M_{k-1} M_k^p) with its exact derivative; p >= -1 (p = -1 uses the
    adjugate inverse)."""
    if p < -1:
        raise ValueError("p >= -1 required")
    A = canonical_Mk(E, k - 1, lam, r)
    B = canonical_Mk(E, k, lam, r)
    if p == -1:
        # det = 1, so the true inverse is the adjugate; adj is linear in the
        # entries, hence the scaled representation keeps B's log scale.
        Bm, dBm = _pair_adj(B.m, B.dm)
        ls_b = np.asarray(B.log_scale, dtype=float)
    else:
        Bm, dBm, ls_b = _pair_pow(B.m, B.dm, B.log_scale, p)
    M, dM = _pair_mul(A.m, A.dm, Bm, dBm)
    ls = np.asarray(A.log_scale, dtype=float) + ls_b
    M, dM, ls = _pair_rescale(M, dM, ls)
    with np.errstate(over="ignore"):
        scale = np.exp(ls)
        vs = M[..., 0, 0] + M[..., 1, 1]
        ds = dM[..., 0, 0] + dM[..., 1, 1]
        value = vs * scale
        deriv = ds * scale
        lmag = ls + np.log(np.max(np.abs(M), axis=(-2, -1)))
    if value.ndim == 0:
        value, deriv = float(value), float(deriv)
        vs, ds = float(vs), float(ds)
        ls, lmag = float(np.asarray(ls)), float(np.asarray(lmag))
    return TraceValue(k=k, p=p, value=value, derivative=deriv,
                      value_scaled=vs, derivative_scaled=ds, log_scale=ls,
                      log_magnitude=lmag)


def trace_phase(E, k: int, lam: float, window: PotentialWindow, side: str = "right") -> TraceValue:
    """Trace over one denominator-length stretch of the window's phase:
    tr M(E, q_k) on the right, tr M(E, -q_k) on the left."""
    qk = word_length(window.rotation, k)
    if side == "right":
        st = transfer(E, qk, lam, window)
    elif side == "left":
        st = transfer(E, -qk, lam, window)
    else:
        raise ValueError("side must be 'right' or 'left'")
    value, deriv = st.trace, st.trace_derivative
    if np.asarray(value).ndim == 0:
        value, deriv = float(value), float(deriv)
    return TraceValue(k=k + 1, p=0, value=value, derivative=deriv)


def log_norm_series(E, lam: float, window: PotentialWindow, n_max: int,
                    direction: int = 1) -> np.ndarray:
    """log ||M(E, +/-n)|| for n = 1..n_max (last axis), batched over E."""
    if n_max < 1:
        raise ValueError("n_max >= 1 required")
    E = np.asarray(E, dtype=float)
    shp = E.shape
    out = np.empty(shp + (n_max,))
    if direction >= 0:
        vals = _window_values(window, 1, n_max)
        inverse = False
    else:
        vals = _window_values(window, -n_max + 1, 0)[::-1]
        inverse = True
    a = np.ones(shp)
    b = np.zeros(shp)
    c = np.zeros(shp)
    d = np.ones(shp)
    ls = np.zeros(shp)
    for i, v in enumerate(vals):
        e = E - lam * v
        if not inverse:
            na, nb = e * a - c, e * b - d
            c, d = a, b
            a, b = na, nb
        else:
            nc, nd = e * c - a, e * d - b
            a, b = c, d
            c, d = nc, nd
        big = np.maximum(np.maximum(np.abs(a), np.abs(b)),
                         np.maximum(np.abs(c), np.abs(d)))
        if np.any(big > _RESCALE_AT):
            f = np.where(big > _RESCALE_AT, big, 1.0)
            a, b, c, d = a / f, b / f, c / f, d / f
            ls = ls + np.log(f)
        M = np.stack([np.stack([a, b], axis=-1), np.stack([c, d], axis=-1)], axis=-2)
        out[..., i] = _log_spectral_norm(M, ls)
    return out


def norm_accumulant(E: float, lam: float, window: PotentialWindow, L: float,
                    direction: int = 1) -> NormAccumulant:
    """The accumulant at length L >= 1 (verbatim convention: sites
    1..floor(L)-1 weighted fully, site floor(L) by the fractional part;
    at L = 1 the sum is empty)."""
    if L < 1:
        raise ValueError("L >= 1 required")
    j = int(math.floor(L))
    frac = L - j
    n_need = j if frac > 0 else j - 1
    if n_need == 0:
        return NormAccumulant(L=L, direction=direction, log_sq=-math.inf)
    logn = log_norm_series(E, lam, window, n_need, direction)
    terms = 2.0 * logn[: j - 1] if j >= 2 else np.empty(0)
    if frac > 0:
        terms = np.append(terms, 2.0 * logn[j - 1] + math.log(frac))
    m = float(np.max(terms))
    log_sq = m + math.log(float(np.sum(np.exp(terms - m))))
    return NormAccumulant(L=L, direction=direction, log_sq=log_sq)


def key_estimate_check(E: float, L: int, lam: float, window: PotentialWindow):
    """(lhs, rhs) for the trace-derivative bound:
    d/dE tr M(E, L) <= 4 * accumulant(L + 1)^3."""
    if L < 1:
        raise ValueError("L >= 1 required")
    st = transfer(E, L, lam, window)
    lhs = float(st.trace_derivative)
    acc = norm_accumulant(E, lam, window, L + 1.0, direction=1)
    rhs = 4.0 * math.exp(1.5 * acc.log_sq)
    return lhs, rhs


def length_scale(E: float, lam: float, window: PotentialWindow, eps: float,
                 direction: int = 1) -> LengthScale:
    """The length L solving accumulant(L) = 2 ||M(E,1)^{-1}|| / eps.

    The squared accumulant is piecewise linear and nondecreasing in L, so the
    solution is found by walking sites and interpolating within one step.
    Saturates (with a flag) at the window's extent; the returned value is
    signed according to ``direction``.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    T1 = step_matrix(E, 1, lam, window)
    inv_norm = _spectral_norm(np.linalg.inv(T1))
    target = 2.0 * float(inv_norm) / eps
    t2log = 2.0 * math.log(target)

    n_avail = window.hi if direction >= 0 else -window.lo
    if n_avail < 1:
        raise WindowTooShortError("window has no sites in the probe direction")
    # stream sites, accumulating the squared-norm sum in log space
    if direction >= 0:
        vals = _window_values(window, 1, n_avail)
        inverse = False
    else:
        vals = _window_values(window, -n_avail + 1, 0)[::-1]
        inverse = True
    a, b, c, d = 1.0, 0.0, 0.0, 1.0
    ls = 0.0
    logC = -math.inf
    for j, v in enumerate(vals, start=1):
        e = E - lam * v
        if not inverse:
            a, b, c, d = e * a - c, e * b - d, a, b
        else:
            a, b, c, d = c, d, e * c - a, e * d - b
        big = max(abs(a), abs(b), abs(c), abs(d))
        if big > _RESCALE_AT:
            a, b, c, d = a / big, b / big, c / big, d / big
            ls += math.log(big)
        fro2 = a * a + b * b + c * c + d * d
        r = (a * d - b * c) / fro2
        lnj2 = 2.0 * ls + math.log(fro2) + math.log(
            (1.0 + math.sqrt(max(1.0 - 4.0 * r * r, 0.0))) / 2.0
        )
        newC = lnj2 if logC == -math.inf else float(np.logaddexp(logC, lnj2))
        if t2log <= newC:
            if logC == -math.inf:
                s = math.exp(t2log - lnj2)
            else:
                s = math.exp(t2log - lnj2) * -math.expm1(logC - t2log)
            s = min(max(s, 0.0), 1.0)
            return LengthScale(value=math.copysign(j + s, direction),
                               saturated=False, target=target)
        logC = newC
    return LengthScale(value=math.copysign(n_avail + 1.0, direction),
                       saturated=True, target=target)
