import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import redundancy_oracle
from rolemine.mentions import (
    RoleMention,
    expand_group_subjects,
    extract_mentions,
    remove_redundant,
    split_sentences,
)

FIG_SECTION = (
    "AJ-M, HT, YS and RS carried out the IHC analysis. "
    "AJ-M, MN-M, MPU, V-MK and AM participated in study design and "
    "statistical analysis. AJ-M and MN-M drafted the manuscript. "
    "All authors read and approved the final manuscript."
)


def mentions_of(text: str) -> list[tuple]:
    out = []
    for s in split_sentences(text, "d"):
        for m in extract_mentions(s):
            out.append((m.subject, m.action, m.object))
    return out


class TestSplitSentences:
    def test_reference_section_has_four_sentences(self):
        assert len(split_sentences(FIG_SECTION, "d")) == 4

    def test_empty_text(self):
        assert split_sentences("", "d") == []

    def test_initials_not_split(self):
        sents = split_sentences("J.B. approved the draft.", "d")
        assert len(sents) == 1

    def test_eg_ie_guard(self):
        sents = split_sentences("Tools, e.g. spreadsheets, were used. CD agreed.", "d")
        assert len(sents) == 2

    def test_indices_consecutive(self):
        sents = split_sentences("AB read it. CD wrote it! EF approved it?", "d")
        assert [s.index for s in sents] == [0, 1, 2]
        assert all(s.doc_id == "d" for s in sents)

    def test_no_split_before_lowercase(self):
        assert len(split_sentences("Approx. half the data was used.", "d")) == 1


class TestExtractMentions:
    def test_verb_conjunction_distributes(self):
        got = mentions_of(
            "AWL did the literature search and participated in the writing of the manuscript."
        )
        assert got == [
            ("AWL", ("did",), ("literature", "search")),
            ("AWL", ("participated", "in"), ("writing", "of", "manuscript")),
        ]

    def test_group_subject_kept_whole_and_both_verbs_fire(self):
        got = mentions_of("All authors read and approved the final manuscript.")
        assert got == [
            ("All authors", ("read",), ("final", "manuscript")),
            ("All authors", ("approved",), ("final", "manuscript")),
        ]

    def test_subject_conjunction_splits(self):
        got = mentions_of("AJ-M and MN-M drafted the manuscript.")
        assert got == [
            ("AJ-M", ("drafted",), ("manuscript",)),
            ("MN-M", ("drafted",), ("manuscript",)),
        ]

    def test_as_well_as_connective(self):
        got = mentions_of("AB, CD as well as EF collected the samples.")
        assert [g[0] for g in got] == ["AB", "CD", "EF"]

    def test_object_conjunction_distributes(self):
        got = mentions_of("AB participated in study design and statistical analysis.")
        assert got == [
            ("AB", ("participated", "in"), ("study", "design")),
            ("AB", ("participated", "in"), ("statistical", "analysis")),
        ]

    def test_full_cross_product(self):
        got = mentions_of("AB and CD collected the samples and analysed the data.")
        assert len(got) == 4
        assert set(g[0] for g in got) == {"AB", "CD"}

    def test_auxiliary_verb_group(self):
        got = mentions_of("He was involved in the design of the study.")
        assert got == [("He", ("was", "involved", "in"), ("design", "of", "study"))]

    def test_no_subject_yields_nothing(self):
        assert mentions_of("The data were collected carefully.") == []

    def test_never_empty_subject_or_action(self):
        texts = [
            FIG_SECTION,
            "AB and CD read, revised and approved the manuscript.",
            "The first author, AB, designed everything.",
        ]
        for t in texts:
            for subject, action, _ in mentions_of(t):
                assert subject and action

    def test_reference_section_mention_count(self):
        # 4 + 5*2 + 2 + 2 mentions before redundancy removal
        assert len(mentions_of(FIG_SECTION)) == 18


class TestExpandGroupSubjects:
    def test_expansion(self):
        ms = [RoleMention("d", 0, "All authors", ("read",), ("manuscript",))]
        out = expand_group_subjects(ms, ["AB", "CD"])
        assert [m.subject for m in out] == ["AB", "CD"]

    def test_no_author_list_is_identity(self):
        ms = [RoleMention("d", 0, "All authors", ("read",), ("manuscript",))]
        assert expand_group_subjects(ms, []) == ms


def rm(subject, action, obj, doc="d", sent=0):
    return RoleMention(doc, sent, subject, tuple(action.split()), tuple(obj.split()))


class TestRemoveRedundant:
    def test_contained_object_dropped(self):
        ms = [
            rm("authors", "read", "final manuscript"),
            rm("authors", "read", "manuscript"),
        ]
        assert remove_redundant(ms) == [ms[0]]

    def test_distinct_subjects_survive(self):
        ms = [rm("A", "read", "paper"), rm("B", "read", "paper")]
        assert remove_redundant(ms) == ms

    def test_exact_duplicates_collapse_to_earliest(self):
        ms = [
            rm("A", "read", "paper", sent=1),
            rm("A", "read", "paper", sent=0),
        ]
        assert remove_redundant(ms) == [ms[1]]

    def test_action_containment(self):
        ms = [
            rm("A", "participated in", "analysis"),
            rm("A", "participated", "analysis"),
        ]
        assert remove_redundant(ms) == [ms[0]]

    def test_order_matters_not_just_words(self):
        # same words, different order: no containment either way
        ms = [rm("A", "read", "final manuscript"), rm("A", "read", "manuscript final")]
        assert remove_redundant(ms) == ms

    def test_case_insensitive_containment(self):
        ms = [rm("A", "Read", "Final Manuscript"), rm("A", "read", "manuscript")]
        assert remove_redundant(ms) == [ms[0]]

    def test_subject_comparison_is_exact(self):
        ms = [rm("AB", "read", "final manuscript"), rm("ab", "read", "manuscript")]
        assert remove_redundant(ms) == ms

    def test_cross_document_duplicates_survive(self):
        ms = [rm("A", "read", "manuscript", doc="d1"), rm("A", "read", "manuscript", doc="d2")]
        assert remove_redundant(ms) == ms

    def test_output_preserves_input_order(self):
        ms = [
            rm("A", "revised", "manuscript"),
            rm("B", "read", "final manuscript"),
            rm("A", "drafted", "paper"),
        ]
        assert remove_redundant(ms) == ms

    def test_matches_oracle_on_small_random_sets(self):
        rng = random.Random(11)
        words = ["read", "final", "manuscript", "paper", "the", "draft"]
        for _ in range(200):
            ms = []
            for i in range(rng.randint(0, 8)):
                ms.append(RoleMention(
                    "d",
                    rng.randint(0, 3),
                    rng.choice(["A", "B"]),
                    tuple(rng.choices(words, k=rng.randint(1, 3))),
                    tuple(rng.choices(words, k=rng.randint(0, 3))),
                ))
            assert remove_redundant(ms) == redundancy_oracle(ms)


_mention = st.builds(
    RoleMention,
    st.just("d"),
    st.integers(0, 4),
    st.sampled_from(["A", "B", "All authors"]),
    st.lists(st.sampled_from(["read", "approved", "in", "took"]), min_size=1, max_size=3).map(tuple),
    st.lists(st.sampled_from(["final", "manuscript", "of", "paper"]), max_size=3).map(tuple),
)


@given(st.lists(_mention, max_size=8))
@settings(max_examples=200, deadline=None)
def test_remove_redundant_idempotent_and_subset(ms):
    out = remove_redundant(ms)
    assert remove_redundant(out) == out
    remaining = list(ms)
    for m in out:
        remaining.remove(m)  # multiset-subset check
