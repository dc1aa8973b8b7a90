import random

import pytest
from hypothesis import given, strategies as st

from gecfilter.edits import Edit, EditSet, apply_edits, extract_edits
from gecfilter.errors import InvalidEditError, InvalidEditSetError

from oracles import bitparallel_levenshtein, edit_cost, naive_levenshtein
from synth import MIXED, rand_sentence

sentences = st.text(alphabet=st.sampled_from(MIXED), max_size=24)


class TestEdit:
    def test_insertion_predicate(self):
        assert Edit(3, 3, "x").is_insertion
        assert not Edit(3, 4, "x").is_insertion

    def test_rejects_bad_span(self):
        with pytest.raises(InvalidEditError):
            Edit(4, 2, "x")
        with pytest.raises(InvalidEditError):
            Edit(-1, 2, "x")

    def test_rejects_null_edit(self):
        with pytest.raises(InvalidEditError):
            Edit(2, 2, "")

    def test_type_tag_ignored_by_equality(self):
        assert Edit(1, 2, "x", etype="R") == Edit(1, 2, "x", etype="M")
        assert len({Edit(1, 2, "x", etype="R"), Edit(1, 2, "x", etype="M")}) == 1


class TestEditSet:
    def test_rejects_unsorted(self):
        with pytest.raises(InvalidEditSetError):
            EditSet((Edit(3, 4, "x"), Edit(0, 1, "y")))

    def test_rejects_overlap(self):
        with pytest.raises(InvalidEditSetError):
            EditSet((Edit(0, 3, "x"), Edit(2, 4, "y")))

    def test_rejects_double_insertion(self):
        with pytest.raises(InvalidEditSetError):
            EditSet((Edit(2, 2, "x"), Edit(2, 2, "y")))

    def test_touching_edits_allowed(self):
        EditSet((Edit(0, 2, "x"), Edit(2, 4, "y")))
        EditSet((Edit(2, 2, "x"), Edit(2, 4, "y")))

    def test_from_edits_sorts(self):
        es = EditSet.from_edits([Edit(3, 4, "b"), Edit(0, 1, "a")])
        assert [e.src_start for e in es] == [0, 3]

    def test_bounds_validation(self):
        with pytest.raises(InvalidEditError):
            EditSet((Edit(0, 5, "x"),)).validate_against(4)


class TestApplyEdits:
    def test_empty_set_is_identity(self):
        assert apply_edits("abc", EditSet()) == "abc"

    def test_single_splice(self):
        assert apply_edits("abcd", EditSet((Edit(1, 2, "X"),))) == "aXcd"

    def test_spans_address_original_indices(self):
        es = EditSet((Edit(0, 0, "z"), Edit(2, 3, "")))
        assert apply_edits("abc", es) == "zab"

    def test_out_of_bounds_rejected(self):
        with pytest.raises(InvalidEditError):
            apply_edits("ab", EditSet((Edit(1, 3, "x"),)))


class TestExtractEdits:
    def test_identical_strings(self):
        assert len(extract_edits("abc", "abc")) == 0

    def test_single_substitution(self):
        es = extract_edits("abcd", "aXcd")
        assert [(e.src_start, e.src_end, e.replacement) for e in es] == [(1, 2, "X")]

    def test_single_insertion(self):
        es = extract_edits("abc", "abxc")
        assert [(e.src_start, e.src_end, e.replacement) for e in es] == [(2, 2, "x")]

    def test_single_deletion(self):
        es = extract_edits("abcd", "acd")
        assert [(e.src_start, e.src_end, e.replacement) for e in es] == [(1, 2, "")]

    def test_adjacent_ops_coalesce(self):
        es = extract_edits("a12b", "aXYZb")
        assert [(e.src_start, e.src_end, e.replacement) for e in es] == [(1, 3, "XYZ")]

    def test_empty_sides(self):
        assert [(e.src_start, e.src_end, e.replacement)
                for e in extract_edits("", "ab")] == [(0, 0, "ab")]
        assert [(e.src_start, e.src_end, e.replacement)
                for e in extract_edits("ab", "")] == [(0, 2, "")]

    @given(sentences, sentences)
    def test_round_trip(self, src, hyp):
        assert apply_edits(src, extract_edits(src, hyp)) == hyp

    @given(sentences, sentences)
    def test_minimal_cost(self, src, hyp):
        es = extract_edits(src, hyp)
        assert sum(edit_cost(e) for e in es) == naive_levenshtein(src, hyp)

    @given(sentences)
    def test_self_alignment_is_empty(self, s):
        assert len(extract_edits(s, s)) == 0

    @given(sentences, sentences)
    def test_separated_by_matches(self, src, hyp):
        # Coalescing means consecutive edits never touch.
        es = list(extract_edits(src, hyp))
        for prev, nxt in zip(es, es[1:]):
            assert prev.src_end < nxt.src_start

    def test_deterministic_across_calls(self):
        rng = random.Random(17)
        for _ in range(50):
            src = rand_sentence(rng, 0, 30)
            hyp = rand_sentence(rng, 0, 30)
            assert extract_edits(src, hyp) == extract_edits(src, hyp)


def test_fast_distance_oracle_matches_naive():
    # The acceptance sweep relies on the bit-parallel distance; pin it to
    # the textbook DP before trusting it.
    rng = random.Random(99)
    for _ in range(400):
        a = rand_sentence(rng, 0, 20, pool="abcdXYZ" + MIXED[:20])
        b = rand_sentence(rng, 0, 20, pool="abcdXYZ" + MIXED[:20])
        assert bitparallel_levenshtein(a, b) == naive_levenshtein(a, b)
