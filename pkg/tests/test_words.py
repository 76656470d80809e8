import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sturmdyn import (
    Phase,
    RotationNumber,
    WindowTooShortError,
    exceptional_word,
    factors,
    find_occurrences,
    is_conjugate,
    k_partition,
    palindrome_prefix_check,
    phase_words,
    right_special,
    sample_potential,
    standard_word,
    word_length,
)


def window_for_factors(rot, n, theta=0.0):
    qm = 1
    m = 0
    while word_length(rot, m) < max(n, 1):
        m += 1
    qm = word_length(rot, m)
    return sample_potential(rot, theta, 1, 2 * (n + qm) + 2)


class TestSampling:
    def test_golden_first_five(self, golden):
        w = sample_potential(golden, 0.0, 1, 5)
        assert w.text() == "10110"

    def test_site_zero_is_zero(self, golden, silver):
        for rot in (golden, silver):
            assert sample_potential(rot, 0.0, 0, 0).value(0) == 0

    def test_exceptional_phase_is_unit_shift(self, golden):
        shifted = sample_potential(golden, Phase.one_minus_alpha(), 2, 6)
        assert shifted.text() == "10110"
        base = sample_potential(golden, 0.0, -30, 30)
        moved = sample_potential(golden, Phase.one_minus_alpha(), -29, 31)
        assert moved.text() == base.text()

    def test_boundary_site_at_phase_zero(self, golden):
        # frac(-alpha) = 1 - alpha lands exactly on the interval endpoint,
        # which belongs to the interval
        assert sample_potential(golden, 0.0, -1, -1).value(-1) == 1

    def test_theta_validation(self, golden):
        with pytest.raises(ValueError):
            sample_potential(golden, 1.0, 1, 5)
        with pytest.raises(ValueError):
            sample_potential(golden, -0.25, 1, 5)


class TestStandardWords:
    def test_golden_examples(self, golden):
        assert standard_word(golden, 0) == "0"
        assert standard_word(golden, 4) == "10110"

    def test_silver_s2(self, silver):
        s2 = standard_word(silver, 2)
        assert s2 == "01010"
        assert len(s2) == word_length(silver, 2) == 5

    @pytest.mark.parametrize("k", range(1, 11))
    def test_word_matches_sampled_prefix(self, golden, silver, k):
        # s_0 is the recursion seed, not a prefix, when a_1 = 1 (w starts "1")
        for rot in (golden, silver):
            qk = word_length(rot, k)
            assert standard_word(rot, k) == sample_potential(rot, 0.0, 1, qk).text()

    def test_suffix_parity(self, golden, silver):
        for rot in (golden, silver):
            for k in range(2, 12):
                s = standard_word(rot, k)
                assert s.endswith("10" if k % 2 == 0 else "01")


class TestFactors:
    def test_small_sets(self, golden):
        w = window_for_factors(golden, 3)
        assert factors(w, 0) == {""}
        assert factors(w, 1) == {"0", "1"}
        assert factors(w, 2) == {"10", "01", "11"}

    @pytest.mark.parametrize("n", [1, 2, 5, 13, 34, 60])
    def test_complexity(self, golden, n):
        w = window_for_factors(golden, n + 1)
        assert len(factors(w, n)) == n + 1

    def test_window_too_short(self, golden):
        w = sample_potential(golden, 0.0, 1, 20)
        with pytest.raises(WindowTooShortError):
            factors(w, 15)

    def test_any_phase_same_factors(self, golden):
        base = factors(window_for_factors(golden, 8), 8)
        for theta in (0.125, 0.73, Phase.one_minus_alpha()):
            assert factors(window_for_factors(golden, 8, theta), 8) == base


class TestRightSpecial:
    def test_examples(self, golden):
        w = window_for_factors(golden, 4)
        assert right_special(w, 0) == ""
        assert right_special(w, 1) == "1"
        assert right_special(w, 2) == "01"

    @pytest.mark.parametrize("n", [1, 2, 3, 8, 21, 40])
    def test_equals_reversed_prefix(self, golden, n):
        w = window_for_factors(golden, n + 1)
        prefix = sample_potential(golden, 0.0, 1, n).text()
        assert right_special(w, n) == prefix[::-1]


class TestPalindromes:
    @pytest.mark.parametrize("k", range(1, 13))
    def test_prefix_palindromes(self, golden, silver, k):
        assert palindrome_prefix_check(golden, k)
        assert palindrome_prefix_check(silver, k)

    def test_silver_k2_prefix(self, silver):
        assert sample_potential(silver, 0.0, 1, 3).text() == "010"


class TestExceptionalWord:
    def test_golden_examples(self, golden):
        assert exceptional_word(golden, 2) == "11"
        assert exceptional_word(golden, 3) == "010"

    def test_symbol_parity(self, golden, silver):
        for rot in (golden, silver):
            for k in range(2, 12):
                b = exceptional_word(rot, k)
                expected = "1" if k % 2 == 0 else "0"
                assert b[0] == expected
                assert b[-1] == expected

    @pytest.mark.parametrize("k", range(9))
    def test_factor_list(self, golden, silver, k):
        """Length-q_k factors are exactly the q_k distinct rotations of s_k
        plus b_k."""
        for rot in (golden, silver)[: 2 if k <= 6 else 1]:
            qk = word_length(rot, k)
            s = standard_word(rot, k)
            rotations = {s[i:] + s[:i] for i in range(qk)}
            assert len(rotations) == qk  # pairwise distinct
            b = exceptional_word(rot, k)
            assert not is_conjugate(b, s)
            w = window_for_factors(rot, qk)
            assert factors(w, qk) == rotations | {b}


class TestConjugacy:
    def test_examples(self):
        assert is_conjugate("10", "01")
        assert not is_conjugate("10", "11")
        assert is_conjugate("10110", "01101")
        assert is_conjugate("", "")

    @settings(max_examples=50, deadline=None)
    @given(st.text(alphabet="01", min_size=1, max_size=30), st.integers(0, 29))
    def test_rotations_are_conjugate(self, word, r):
        r = r % len(word)
        assert is_conjugate(word, word[r:] + word[:r])

    @settings(max_examples=50, deadline=None)
    @given(st.text(alphabet="01", max_size=20), st.text(alphabet="01", max_size=20))
    def test_symmetry(self, u, v):
        assert is_conjugate(u, v) == is_conjugate(v, u)


class TestPhaseWords:
    def test_theta_zero(self, golden):
        for k in range(1, 7):
            s, _t = phase_words(golden, 0.0, k)
            assert s == standard_word(golden, k)

    def test_exceptional_phase(self, golden):
        for k in range(1, 9):
            s, _ = phase_words(golden, Phase.one_minus_alpha(), k)
            sk = standard_word(golden, k)
            assert s == "0" + sk[:-1]
            if k % 2 == 1:
                assert s == exceptional_word(golden, k)
                assert not is_conjugate(s, sk)
            else:
                assert is_conjugate(s, sk)

    def test_parity_classes(self, golden):
        """Starting symbol fixes the parity class on which the words stay
        conjugate; the ending symbol does the same for the left words."""
        rng = np.random.default_rng(7)
        for theta in rng.random(6):
            v1 = sample_potential(golden, theta, 1, 1).value(1)
            v0 = sample_potential(golden, theta, 0, 0).value(0)
            right_par = 1 if v1 == 1 else 0  # odd k if v(1)=1 else even k
            left_par = 1 if v0 == 1 else 0
            for k in range(2, 9):
                s, t = phase_words(golden, theta, k)
                sk = standard_word(golden, k)
                if k % 2 == right_par:
                    assert is_conjugate(s, sk)
                if k % 2 == left_par:
                    assert is_conjugate(t, sk)

    def test_conjugacy_parity_cover(self, golden, silver):
        for rot in (golden, silver):
            for theta in (0.31, 0.62, 0.93):
                ks = range(2, 9)
                conj = {k for k in ks if is_conjugate(
                    phase_words(rot, theta, k)[0], standard_word(rot, k))}
                assert {k for k in ks if k % 2 == 0} <= conj or \
                       {k for k in ks if k % 2 == 1} <= conj


class TestOccurrences:
    def test_example(self, golden):
        w = sample_potential(golden, 0.0, 1, 13)
        assert find_occurrences(w, "11") == [3, 8, 11]

    def test_long_pattern(self, golden):
        w = sample_potential(golden, 0.0, 1, 5)
        assert find_occurrences(w, "0" * 10) == []

    def test_empty_pattern(self, golden):
        w = sample_potential(golden, 0.0, 3, 6)
        assert find_occurrences(w, "") == [3, 4, 5, 6, 7]


def padded_window(rot, theta, k, lo, hi):
    margin = word_length(rot, k + 2)
    return sample_potential(rot, theta, lo - margin, hi + margin)


class TestPartition:
    def test_golden_level2_example(self, golden):
        w = padded_window(golden, 0.0, 2, 1, 13)
        part = k_partition(w, 2, reporting=(1, 13))
        got = [(b.start, b.end, b.label) for b in part.blocks]
        assert got == [
            (1, 2, "s2"), (3, 3, "s1"), (4, 5, "s2"), (6, 7, "s2"),
            (8, 8, "s1"), (9, 10, "s2"), (11, 11, "s1"), (12, 13, "s2"),
        ]
        assert part.anchor == 0

    def test_level0_blocks_are_letters(self, golden):
        w = padded_window(golden, 0.25, 0, 1, 10)
        part = k_partition(w, 0, reporting=(1, 10))
        for b in part.blocks:
            assert b.start == b.end
            v = w.value(b.start)
            assert b.word_level == (0 if v == 0 else -1)

    @pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
    def test_dual_construction_agrees(self, golden, k):
        rng = np.random.default_rng(k)
        for theta in rng.random(3):
            w = padded_window(golden, theta, k, -20, 40)
            pin = k_partition(w, k, reporting=(-20, 40), method="pin")
            desub = k_partition(w, k, reporting=(-20, 40), method="desub")
            assert pin.blocks == desub.blocks
            assert pin.anchor == desub.anchor

    def test_dual_construction_silver(self, silver):
        for k in (1, 2, 3):
            w = padded_window(silver, 0.41, k, 1, 60)
            pin = k_partition(w, k, reporting=(1, 60), method="pin")
            desub = k_partition(w, k, reporting=(1, 60), method="desub")
            assert pin.blocks == desub.blocks

    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_synchronization(self, golden, k):
        """Each occurrence of b_k sits astride an s_{k-1} block boundary,
        with the s_k block right after it."""
        rng = np.random.default_rng(100 + k)
        qk = word_length(golden, k)
        for theta in rng.random(3):
            w = padded_window(golden, theta, k, 1, 80)
            part = k_partition(w, k, reporting=(1, 80))
            starts = {b.start: b for b in part.blocks}
            b_k = exceptional_word(golden, k)
            for m in find_occurrences(w, b_k):
                if m + 1 in starts and m + qk <= part.blocks[-1].end:
                    blk = starts[m + 1]
                    assert (blk.end, blk.word_level) == (m + qk, k)
                    prev = part.block_at(m) if m >= part.blocks[0].start else None
                    if prev is not None:
                        assert prev.word_level == k - 1
                        assert prev.end == m

    def test_window_margin_enforced(self, golden):
        w = sample_potential(golden, 0.0, 1, 30)
        with pytest.raises(WindowTooShortError):
            k_partition(w, 3, reporting=(1, 30))

    def test_blocks_serialize(self, golden):
        w = padded_window(golden, 0.0, 1, 1, 8)
        part = k_partition(w, 1, reporting=(1, 8))
        doc = part.to_json_obj()
        assert doc[0].keys() == {"start", "end", "label"}
