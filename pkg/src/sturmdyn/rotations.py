"""Exact rotation numbers via continued fractions.

An irrational frequency in (0, 1) is represented by its continued-fraction
coefficients (a_1, a_2, ...), all >= 1, rather than by a floating-point
sample.  The convergents p_k/q_k are then exact integers, consecutive
convergents bracket the frequency, and the denominator growth certificate
(the smallest B with q_k + 1 <= B^k over the materialized depth) is computed
without any rounding ambiguity.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import DepthExhaustedError

__all__ = [
    "RotationNumber",
    "ConvergentTable",
    "GrowthCertificate",
    "real_value",
    "convergents",
    "growth_certificate",
]


@dataclass(frozen=True)
class RotationNumber:
    """A number in (0, 1) given by continued-fraction coefficients.

    ``head`` holds explicitly listed coefficients; ``tail`` (possibly empty)
    repeats forever after the head, so eventually-periodic expansions such as
    quadratic irrationals are represented exactly.  ``approximate`` marks
    values recovered from a float, whose deep coefficients are meaningless.
    """

    head: tuple[int, ...] = ()
    tail: tuple[int, ...] = ()
    approximate: bool = field(default=False, compare=False)

    def __post_init__(self):
        if not self.head and not self.tail:
            raise ValueError("need at least one continued-fraction coefficient")
        for a in (*self.head, *self.tail):
            if not isinstance(a, int) or a < 1:
                raise ValueError(f"coefficients must be integers >= 1, got {a!r}")

    # -- constructors ------------------------------------------------------

    @classmethod
    def golden(cls) -> "RotationNumber":
        """The inverse golden ratio (sqrt(5)-1)/2 = [0; 1, 1, 1, ...]."""
        return cls(tail=(1,))

    @classmethod
    def periodic(cls, coefficients, head=()) -> "RotationNumber":
        """A purely or eventually periodic expansion, e.g. ``periodic([2])``
        for sqrt(2)-1."""
        return cls(head=tuple(head), tail=tuple(coefficients))

    @classmethod
    def from_coefficients(cls, coefficients) -> "RotationNumber":
        """A finite coefficient list (a rational truncation; no tail)."""
        return cls(head=tuple(coefficients))

    @classmethod
    def from_float(cls, x: float, depth: int = 40, tol: float = 1e-12) -> "RotationNumber":
        """Expand a float to at most ``depth`` coefficients.

        Stops once the remainder drops below ``tol``.  The result is flagged
        ``approximate``: coefficients beyond the float's precision are an
        artifact of rounding, so deep sampling against it may raise
        :class:`~sturmdyn.errors.UndecidableBoundaryError`.
        """
        if not 0.0 < x < 1.0:
            raise ValueError("expected a value strictly between 0 and 1")
        coeffs = []
        r = Fraction(x)  # exact binary rational
        for _ in range(depth):
            inv = 1 / r
            a = math.floor(inv)
            coeffs.append(int(a))
            r = inv - a
            if r < tol:
                break
        return cls(head=tuple(coeffs), approximate=True)

    # -- coefficient access ------------------------------------------------

    def coefficient(self, k: int) -> int:
        """a_k for k >= 1."""
        if k < 1:
            raise ValueError("coefficient index starts at 1")
        if k <= len(self.head):
            return self.head[k - 1]
        if self.tail:
            return self.tail[(k - len(self.head) - 1) % len(self.tail)]
        raise DepthExhaustedError(
            f"only {len(self.head)} coefficients available, asked for a_{k}"
        )

    def coefficients(self, K: int) -> tuple[int, ...]:
        return tuple(self.coefficient(k) for k in range(1, K + 1))

    @property
    def max_depth(self) -> int | None:
        """Largest materializable depth, or None if unbounded (periodic tail)."""
        return None if self.tail else len(self.head)

    def depth_or(self, K: int) -> int:
        """min(K, max available depth)."""
        return K if self.max_depth is None else min(K, self.max_depth)

    # -- serialization -----------------------------------------------------

    def to_json(self) -> str:
        return json.dumps(
            {"coefficients": list(self.head), "periodic_tail": list(self.tail)}
        )

    @classmethod
    def from_json(cls, text: str) -> "RotationNumber":
        doc = json.loads(text)
        return cls(
            head=tuple(doc.get("coefficients", ())),
            tail=tuple(doc.get("periodic_tail", ())),
        )

    def describe(self) -> str:
        head = ",".join(map(str, self.head))
        if self.tail:
            tail = ",".join(map(str, self.tail))
            return f"[0;{head}({tail})...]" if head else f"[0;({tail})...]"
        return f"[0;{head}]"


@dataclass(frozen=True)
class ConvergentTable:
    """Numerators p_0..p_K and denominators q_0..q_K of the convergents.

    Built by the standard recursions p_k = a_k p_{k-1} + p_{k-2} and
    q_k = a_k q_{k-1} + q_{k-2}, seeded with p_0 = 0, p_1 = 1, q_0 = 1,
    q_1 = a_1.  Exact integers throughout; Python integers cannot overflow.
    """

    p: tuple[int, ...]
    q: tuple[int, ...]

    @property
    def depth(self) -> int:
        return len(self.q) - 1

    def fraction(self, k: int) -> Fraction:
        return Fraction(self.p[k], self.q[k])

    def bracket(self, k: int) -> tuple[Fraction, Fraction]:
        """Open interval (lo, hi) containing the limit, from convergents
        k and k+1 (they always lie on opposite sides)."""
        if k + 1 > self.depth:
            raise DepthExhaustedError(
                f"bracket at depth {k} needs convergent {k + 1} "
                f"(table depth {self.depth})"
            )
        a, b = self.fraction(k), self.fraction(k + 1)
        return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class GrowthCertificate:
    """Evidence that q_k + 1 <= B_est^k holds up to the materialized depth.

    B_est is the empirical minimum, max_k (q_k + 1)^(1/k); nothing is claimed
    beyond ``depth``.  Always >= 2 since q_1 + 1 = a_1 + 1 >= 2.
    """

    B_est: float
    depth: int


@lru_cache(maxsize=512)
def convergents(r: RotationNumber, K: int) -> ConvergentTable:
    """Convergent table of depth K >= 1 for rotation number ``r``."""
    if K < 1:
        raise ValueError("need depth K >= 1")
    a1 = r.coefficient(1)
    p = [0, 1]
    q = [1, a1]
    for k in range(2, K + 1):
        a = r.coefficient(k)
        p.append(a * p[-1] + p[-2])
        q.append(a * q[-1] + q[-2])
    return ConvergentTable(tuple(p), tuple(q))


def real_value(r: RotationNumber, K: int) -> float:
    """Value of the depth-K truncation, i.e. the rational p_K/q_K.

    Accurate to within 1/(q_K q_{K+1}) of the full expansion's limit; the
    float conversion is correctly rounded.
    """
    t = convergents(r, K)
    return float(Fraction(t.p[K], t.q[K]))


def growth_certificate(t: ConvergentTable) -> GrowthCertificate:
    """Smallest B with q_k + 1 <= B^k for every materialized k >= 1."""
    if t.depth < 1:
        raise ValueError("table must have depth >= 1")
    B = max((t.q[k] + 1) ** (1.0 / k) for k in range(1, t.depth + 1))
    # Float powers can round below an attained bound; nudge up until every
    # inequality verifies.
    while any(t.q[k] + 1 > B**k for k in range(1, t.depth + 1)):
        B = math.nextafter(B, math.inf)
    return GrowthCertificate(B_est=B, depth=t.depth)


@lru_cache(maxsize=512)
def float_value(r: RotationNumber, min_denominator: int = 2**40) -> float:
    """Correctly rounded float of the (deep) expansion, for fast paths.

    Uses the deepest convergent available, or the first with denominator
    beyond ``min_denominator``; the bracket width 1/(q_K q_{K+1}) is then far
    below one ulp.
    """
    K = 1
    while True:
        cap = r.max_depth
        if cap is not None and K >= cap:
            K = cap
            break
        if convergents(r, K).q[K] >= min_denominator:
            break
        K += 5
    return real_value(r, K)
