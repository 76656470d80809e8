"""Sturmian words and their local combinatorial structure.

The two-sided sequence v(n) = chi_[1-alpha,1)(n*alpha + theta mod 1) is
sampled *exactly*: each value equals floor((n+1)alpha + theta) -
floor(n*alpha + theta), and the floors are decided by a float fast path with
a rigorous error bound, falling back to rational interval arithmetic against
convergent brackets of alpha.  No indicator value is ever guessed at a
boundary; undecidable sites (possible only for truncated, rational
approximations of alpha) raise instead.

Words are plain strings over '0'/'1'.  On top of sampling sit the standard
words s_k, the single length-q_k factor b_k that is not a cyclic permutation
of s_k, factor sets and right-special factors, and the unique tiling of any
phase's sequence by blocks {s_k, s_{k-1}} ("k-partition"), built two
independent ways: by pinning occurrences of b_k, and by de-substituting a
higher-level partition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import (
    DepthExhaustedError,
    PartitionError,
    UndecidableBoundaryError,
    WindowTooShortError,
)
from .rotations import RotationNumber, convergents, float_value

__all__ = [
    "Phase",
    "PotentialWindow",
    "KPartition",
    "PartitionBlock",
    "sample_potential",
    "standard_word",
    "exceptional_word",
    "factors",
    "right_special",
    "palindrome_prefix_check",
    "is_conjugate",
    "phase_words",
    "k_partition",
    "find_occurrences",
]


# ---------------------------------------------------------------------------
# phases
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Phase:
    """A phase theta = offset + alpha_coeff * alpha, offset rational.

    Ordinary float phases have ``alpha_coeff == 0`` (floats are exact binary
    rationals).  The exceptional phase 1 - alpha, which no float can hit,
    is ``Phase(Fraction(1), -1)``.
    """

    offset: Fraction
    alpha_coeff: int = 0

    @classmethod
    def of(cls, value) -> "Phase":
        if isinstance(value, Phase):
            return value
        if isinstance(value, (int, float)):
            value = Fraction(value)
        if isinstance(value, Fraction):
            if not 0 <= value < 1:
                raise ValueError("theta must lie in [0, 1)")
            return cls(offset=value)
        raise TypeError(f"cannot interpret {value!r} as a phase")

    @classmethod
    def one_minus_alpha(cls) -> "Phase":
        return cls(offset=Fraction(1), alpha_coeff=-1)

    @property
    def is_exceptional(self) -> bool:
        """True exactly for theta = 1 - alpha."""
        return self.alpha_coeff == -1 and self.offset == 1

    def float_value(self, rotation: RotationNumber) -> float:
        x = float(self.offset) + self.alpha_coeff * float_value(rotation)
        return x - math.floor(x)

    def describe(self) -> str:
        if self.alpha_coeff == 0:
            return str(float(self.offset))
        if self.is_exceptional:
            return "1-alpha"
        return f"{self.offset}+{self.alpha_coeff}*alpha"


# ---------------------------------------------------------------------------
# exact floors of m*alpha + c
# ---------------------------------------------------------------------------


def _floor_exact(rotation: RotationNumber, m: int, c: Fraction) -> int:
    """floor(m*alpha + c) decided by deepening convergent brackets.

    Terminates for every m != 0 because m*alpha + c is irrational; for m = 0
    the value is floor(c).  Runs out of brackets only for truncated
    (approximate) rotation numbers.
    """
    if m == 0:
        return math.floor(c)
    K = 16
    while True:
        cap = rotation.max_depth
        depth = K if cap is None else min(K, cap - 1)
        if depth < 1:
            raise UndecidableBoundaryError(
                f"cannot decide floor({m}*alpha + {c}): no bracket available"
            )
        lo, hi = convergents(rotation, depth + 1).bracket(depth)
        a, b = m * lo + c, m * hi + c
        if m < 0:
            a, b = b, a
        fa, fb = math.floor(a), math.floor(b)
        if fa == fb:
            return fa
        if cap is not None and depth >= cap - 1:
            raise UndecidableBoundaryError(
                f"floor({m}*alpha + {c}) is ambiguous at the available "
                f"continued-fraction depth {cap}"
            )
        K += 16


def _floor_array(rotation: RotationNumber, ms: np.ndarray, c: Fraction) -> np.ndarray:
    """floor(m*alpha + c) for an int64 vector, exact everywhere."""
    af = float_value(rotation)
    cf = float(c)
    y = ms * af + cf
    out = np.floor(y).astype(np.int64)
    # conservative bound on |computed - exact|
    guard = (np.abs(ms) * 4.0 + abs(cf) + 2.0) * 2.0**-52
    near = np.abs(y - np.rint(y)) <= guard
    for i in np.nonzero(near)[0]:
        out[i] = _floor_exact(rotation, int(ms[i]), c)
    return out


# ---------------------------------------------------------------------------
# sampled windows
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PotentialWindow:
    """Values of the coding sequence on the integer interval [lo, hi]."""

    lo: int
    hi: int
    values: np.ndarray  # int8, length hi - lo + 1
    phase: Phase
    rotation: RotationNumber

    def __len__(self) -> int:
        return self.hi - self.lo + 1

    def covers(self, a: int, b: int) -> bool:
        return self.lo <= a and b <= self.hi

    def require(self, a: int, b: int) -> None:
        if not self.covers(a, b):
            raise WindowTooShortError(
                f"window [{self.lo},{self.hi}] does not cover [{a},{b}]"
            )

    def value(self, n: int) -> int:
        self.require(n, n)
        return int(self.values[n - self.lo])

    def text(self, a: int | None = None, b: int | None = None) -> str:
        """The symbols on [a, b] as a '0'/'1' string."""
        a = self.lo if a is None else a
        b = self.hi if b is None else b
        self.require(a, b)
        chunk = self.values[a - self.lo : b - self.lo + 1]
        return "".join("1" if v else "0" for v in chunk)

    def resample(self, a: int, b: int) -> "PotentialWindow":
        """A window over [a, b] with the same rotation number and phase."""
        if self.covers(a, b):
            return PotentialWindow(
                a, b, self.values[a - self.lo : b - self.lo + 1], self.phase, self.rotation
            )
        return sample_potential(self.rotation, self.phase, a, b)


def sample_potential(r: RotationNumber, theta, lo: int, hi: int) -> PotentialWindow:
    """Sample v(n) for n in [lo, hi] at phase ``theta``.

    ``theta`` may be a float/Fraction in [0, 1) or a :class:`Phase` (which is
    how the exceptional phase 1 - alpha is spelled).  Every indicator value
    is decided exactly; see the module docstring.
    """
    if hi < lo:
        raise ValueError(f"empty window [{lo},{hi}]")
    phase = Phase.of(theta)
    d, c = phase.alpha_coeff, phase.offset
    # v(n) = F(n+d+1) - F(n+d) with F(m) = floor(m*alpha + c)
    ms = np.arange(lo + d, hi + d + 2, dtype=np.int64)
    F = _floor_array(r, ms, c)
    vals = (F[1:] - F[:-1]).astype(np.int8)
    return PotentialWindow(lo, hi, vals, phase, r)


# ---------------------------------------------------------------------------
# standard and exceptional words
# ---------------------------------------------------------------------------


@lru_cache(maxsize=4096)
def standard_word(r: RotationNumber, k: int) -> str:
    """The standard word s_k: s_0 = "0", s_1 = 0^(a_1 - 1) "1",
    s_k = s_{k-1}^{a_k} s_{k-2}; length q_k."""
    if k < 0:
        raise ValueError("standard words start at k = 0")
    if k == 0:
        return "0"
    if k == 1:
        return "0" * (r.coefficient(1) - 1) + "1"
    return standard_word(r, k - 1) * r.coefficient(k) + standard_word(r, k - 2)


def exceptional_word(r: RotationNumber, k: int) -> str:
    """The unique length-q_k factor b_k that is not a cyclic permutation of
    s_k: complement of the last symbol of s_k, then its first q_k - 1
    symbols."""
    s = standard_word(r, k)
    flip = "0" if s[-1] == "1" else "1"
    return flip + s[:-1]


def is_conjugate(u: str, v: str) -> bool:
    """True iff the words are cyclic permutations of each other
    (|u| = |v| and v occurs in u+u; linear-time substring search)."""
    return len(u) == len(v) and v in u + u


def word_length(r: RotationNumber, k: int) -> int:
    """q_k = |s_k| without building the word (q_0 = 1)."""
    if k < 0:
        raise ValueError("k >= 0 required")
    if k == 0:
        return 1
    return convergents(r, k).q[k]


# ---------------------------------------------------------------------------
# factors
# ---------------------------------------------------------------------------


def _recurrence_scale(r: RotationNumber, n: int) -> int:
    """Smallest q_m with q_m >= n (q_0 for n <= 1)."""
    m = 0
    while word_length(r, m) < n:
        m += 1
    return word_length(r, m)


def factors(window: PotentialWindow, n: int) -> set[str]:
    """All length-n factors of the sampled sequence (there are n + 1).

    Requires window length >= 2 (n + q_m) where q_m is the smallest
    denominator >= n; by uniform recurrence every factor then appears.
    """
    if n < 0:
        raise ValueError("factor length must be >= 0")
    if n == 0:
        return {""}
    qm = _recurrence_scale(window.rotation, n)
    need = 2 * (n + qm)
    if len(window) < need:
        raise WindowTooShortError(
            f"window length {len(window)} < {need} required for n = {n}"
        )
    text = window.text()
    return {text[i : i + n] for i in range(len(text) - n + 1)}


def right_special(window: PotentialWindow, n: int) -> str:
    """The unique length-n factor with both one-symbol right extensions.

    Equals the reversal of the phase-0 prefix of length n.
    """
    if n == 0:
        return ""
    fs = factors(window, n)
    nxt = factors(window, n + 1)
    special = [w for w in fs if w + "0" in nxt and w + "1" in nxt]
    if len(special) != 1:
        raise PartitionError(
            f"expected exactly one right-special factor of length {n}, "
            f"found {len(special)}"
        )
    return special[0]


def palindrome_prefix_check(r: RotationNumber, k: int) -> bool:
    """Whether the phase-0 prefix of length q_k - 2 is a palindrome
    (it always is; prefixes of length < 2 are vacuous)."""
    qk = word_length(r, k)
    if qk <= 3:
        return True
    w = sample_potential(r, 0, 1, qk - 2).text()
    return w == w[::-1]


def phase_words(r: RotationNumber, theta, k: int) -> tuple[str, str]:
    """(s_k^theta, t_k^theta): the symbols on [1, q_k] and on [-q_k + 1, 0]."""
    qk = word_length(r, k)
    w = sample_potential(r, theta, -qk + 1, qk)
    return w.text(1, qk), w.text(-qk + 1, 0)


def find_occurrences(window: PotentialWindow, pattern: str) -> list[int]:
    """All absolute start positions where ``pattern`` occurs in the window.

    The empty pattern matches at every position lo..hi+1 by convention.
    """
    if pattern == "":
        return list(range(window.lo, window.hi + 2))
    text = window.text()
    out = []
    i = text.find(pattern)
    while i != -1:
        out.append(window.lo + i)
        i = text.find(pattern, i + 1)
    return out


# ---------------------------------------------------------------------------
# k-partitions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PartitionBlock:
    """A block [start, end] carrying the word s_{word_level}.

    ``word_level`` -1 denotes the single letter "1" (used only at level 0,
    where the blocks are the letters themselves).
    """

    start: int
    end: int
    word_level: int

    @property
    def label(self) -> str:
        return f"s{self.word_level}"

    def word(self, r: RotationNumber) -> str:
        if self.word_level == -1:
            return "1"
        return standard_word(r, self.word_level)

    def as_json_obj(self) -> dict:
        return {"start": self.start, "end": self.end, "label": self.label}


@dataclass(frozen=True)
class KPartition:
    """Consecutive blocks from {s_k, s_{k-1}} tiling the reporting range.

    ``anchor`` is the index (into ``blocks``) of the block containing site 1,
    or None when 1 is outside the covered range; the partition lemma's
    normalization 1 in I_0 corresponds to ``blocks[anchor]``.
    """

    level: int
    blocks: tuple[PartitionBlock, ...]
    anchor: int | None

    def to_json_obj(self) -> list[dict]:
        return [b.as_json_obj() for b in self.blocks]

    def block_at(self, n: int) -> PartitionBlock:
        for b in self.blocks:
            if b.start <= n <= b.end:
                return b
        raise KeyError(f"site {n} not covered by the partition")


class _NoPinsError(Exception):
    pass


def _letter_partition(window, lo_r, hi_r):
    blocks = []
    for n in range(lo_r, hi_r + 1):
        lvl = 0 if window.value(n) == 0 else -1
        blocks.append(PartitionBlock(n, n, lvl))
    return blocks


def _verify_blocks(window, blocks, rot):
    for b in blocks:
        if window.covers(b.start, b.end):
            if window.text(b.start, b.end) != b.word(rot):
                raise PartitionError(
                    f"block [{b.start},{b.end}] does not spell {b.label}"
                )


def _pin_partition(window: PotentialWindow, k: int, lo_r: int, hi_r: int):
    """Blocks of the k-partition covering [lo_r, hi_r], from b_k occurrences.

    Every s_{k-1} block ends exactly where an occurrence of b_k starts, and
    is followed by an s_k block; stretches between consecutive s_{k-1}
    blocks tile by s_k.
    """
    rot = window.rotation
    qk = word_length(rot, k)
    qk1 = word_length(rot, k - 1) if k >= 1 else 1
    bk = exceptional_word(rot, k)
    pins = find_occurrences(window, bk)
    if not pins:
        raise _NoPinsError
    # consistency of pin spacing, and the blocks they force
    blocks = []
    for j, m in enumerate(pins):
        blocks.append(PartitionBlock(m - qk1 + 1, m, k - 1))
        blocks.append(PartitionBlock(m + 1, m + qk, k))
        if j + 1 < len(pins):
            gap = pins[j + 1] - m - qk - qk1
            if gap < 0 or gap % qk != 0:
                raise PartitionError(
                    f"pin spacing {pins[j + 1] - m} inconsistent with "
                    f"q_{k} = {qk}, q_{k - 1} = {qk1}"
                )
            for i in range(gap // qk):
                s = m + qk + 1 + i * qk
                blocks.append(PartitionBlock(s, s + qk - 1, k))
    # extend left of the first pin and right of the last with s_k blocks,
    # as far as the window certifies them
    first = blocks[0].start
    while first - qk >= window.lo and first - 1 >= lo_r - qk:
        blocks.insert(0, PartitionBlock(first - qk, first - 1, k))
        first -= qk
    last = max(b.end for b in blocks)
    # an s_{k-1} block ending at m is only detectable when m + qk - 1 <= hi;
    # beyond hi - qk - qk1 labels cannot be certified
    safe_hi = window.hi - qk - qk1
    while last + qk <= safe_hi and last < hi_r + qk:
        blocks.append(PartitionBlock(last + 1, last + qk, k))
        last += qk
    blocks.sort(key=lambda b: b.start)
    return blocks


def _desub_partition(window: PotentialWindow, k: int, lo_r: int, hi_r: int):
    """Blocks covering [lo_r, hi_r] by pinning at level k + 3 on a wider
    window, then de-substituting s_j -> s_{j-1}^{a_j} s_{j-2} down to k."""
    rot = window.rotation
    J = k + 3
    pad = word_length(rot, J + 2) + 2 * word_length(rot, J)
    wide = window.resample(lo_r - pad, hi_r + pad)
    blocks = _pin_partition(wide, J, lo_r, hi_r)
    for j in range(J, k, -1):
        nxt = []
        for b in blocks:
            if b.word_level < j:
                nxt.append(b)
                continue
            # split an s_j block
            if j >= 2:
                a = rot.coefficient(j)
                lo_len = word_length(rot, j - 1)
                s = b.start
                for _ in range(a):
                    nxt.append(PartitionBlock(s, s + lo_len - 1, j - 1))
                    s += lo_len
                nxt.append(PartitionBlock(s, b.end, j - 2))
            else:  # j == 1: s_1 = 0^(a_1 - 1) 1
                a = rot.coefficient(1)
                s = b.start
                for _ in range(a - 1):
                    nxt.append(PartitionBlock(s, s, 0))
                    s += 1
                nxt.append(PartitionBlock(s, s, -1))
        # prune blocks that can no longer reach the reporting range
        blocks = [b for b in nxt if b.end >= lo_r - 1 and b.start <= hi_r + 1]
        blocks.sort(key=lambda b: b.start)
    return blocks


def k_partition(
    window: PotentialWindow,
    k: int,
    *,
    reporting: tuple[int, int] | None = None,
    method: str = "auto",
) -> KPartition:
    """The unique tiling by {s_k, s_{k-1}} blocks over the reporting range.

    The window must extend at least q_{k+2} beyond the reporting range on
    each side (the default range is the window shrunk by that margin).
    ``method`` selects the construction: "pin" locates occurrences of b_k,
    "desub" de-substitutes a level-(k+3) partition, "auto" pins and falls
    back.  Blocks intersecting the range are reported whole.
    """
    if k < 0:
        raise ValueError("partition level must be >= 0")
    rot = window.rotation
    margin = word_length(rot, k + 2)
    if reporting is None:
        reporting = (window.lo + margin, window.hi - margin)
    lo_r, hi_r = reporting
    if hi_r < lo_r:
        raise WindowTooShortError(
            f"window [{window.lo},{window.hi}] leaves no reporting range "
            f"after the q_{k + 2} = {margin} margin"
        )
    if window.lo > lo_r - margin or window.hi < hi_r + margin:
        raise WindowTooShortError(
            f"need q_{k + 2} = {margin} padding around [{lo_r},{hi_r}]"
        )

    if k == 0:
        blocks = _letter_partition(window, lo_r, hi_r)
    elif method == "pin":
        blocks = _pin_partition(window, k, lo_r, hi_r)
    elif method == "desub":
        blocks = _desub_partition(window, k, lo_r, hi_r)
    elif method == "auto":
        try:
            blocks = _pin_partition(window, k, lo_r, hi_r)
        except _NoPinsError:
            blocks = _desub_partition(window, k, lo_r, hi_r)
    else:
        raise ValueError(f"unknown method {method!r}")

    blocks = [b for b in blocks if b.end >= lo_r and b.start <= hi_r]
    if not blocks:
        raise PartitionError("no blocks cover the reporting range")
    for prev, cur in zip(blocks, blocks[1:]):
        if cur.start != prev.end + 1:
            raise PartitionError(
                f"blocks not consecutive at {prev.end} -> {cur.start}"
            )
    if blocks[0].start > lo_r or blocks[-1].end < hi_r:
        raise PartitionError("blocks fail to cover the reporting range")
    _verify_blocks(window, blocks, rot)

    anchor = None
    for i, b in enumerate(blocks):
        if b.start <= 1 <= b.end:
            anchor = i
            break
    return KPartition(level=k, blocks=tuple(blocks), anchor=anchor)
