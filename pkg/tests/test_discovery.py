import random
from fractions import Fraction

import pytest

from oracles import graph_oracle
from rolemine.discovery import (
    action_similarity,
    action_weight,
    apply_curation,
    best_merge_candidate,
    build_role_graph,
    build_training_set,
    cluster,
    containment_merge_pass,
    derive_roles,
    graph_to_json,
    init_clusters,
    object_similarity,
    object_weight,
    to_threshold,
)
from rolemine.errors import (
    ConfigInvalid,
    EmptyTrainingSet,
    IsolatedCluster,
    NameCollision,
    UnknownRole,
)
from rolemine.fixtures import archetype_mentions
from rolemine.normalize import NormalizedMention


def nm(action, obj, doc="d", sent=0, subject="A"):
    return NormalizedMention(doc, sent, subject, tuple(action.split()), tuple(obj.split()))


def counted(*pairs):
    """pairs of (action_str, object_str, count) -> mention list."""
    out = []
    for action, obj, count in pairs:
        for _ in range(count):
            out.append(nm(action, obj, sent=len(out)))
    return out


class TestInitClusters:
    def test_one_cluster_per_distinct_bag(self):
        ms = counted(("read", "manuscript", 2), ("read", "paper", 1), ("draft", "paper", 1))
        state = init_clusters(ms)
        assert len(state.actions) == 2
        assert len(state.objects) == 2
        state.validate()

    def test_bag_ignores_order_and_duplicates(self):
        ms = [nm("read approv", "final manuscript"), nm("approv read", "manuscript final manuscript")]
        state = init_clusters(ms)
        assert len(state.actions) == 1
        assert len(state.objects) == 1

    def test_labels_are_sorted_bags(self):
        state = init_clusters([nm("revis read", "paper")])
        assert list(state.actions.values())[0].label == ("read", "revis")


class TestMergeBookkeeping:
    def test_label_recomputed_most_numerous_bag(self):
        ms = counted(("read", "x", 3), ("read approv", "x", 1))
        state = init_clusters(ms)
        a_ids = sorted(state.actions)
        keep = state.merge("action", a_ids[0], a_ids[1])
        assert state.actions[keep].label == ("read",)
        state.validate()

    def test_label_tie_lexicographic(self):
        ms = counted(("read", "x", 2), ("approv", "x", 2))
        state = init_clusters(ms)
        a_ids = sorted(state.actions)
        keep = state.merge("action", a_ids[0], a_ids[1])
        assert state.actions[keep].label == ("approv",)

    def test_bigger_cluster_keeps_id(self):
        ms = counted(("read", "x", 1), ("approv", "x", 5))
        state = init_clusters(ms)
        a_read = next(c.cid for c in state.actions.values() if c.label == ("read",))
        a_appr = next(c.cid for c in state.actions.values() if c.label == ("approv",))
        assert state.merge("action", a_read, a_appr) == a_appr

    def test_self_merge_is_noop(self):
        state = init_clusters(counted(("read", "x", 2)))
        cid = next(iter(state.actions))
        assert state.merge("action", cid, cid) == cid
        state.validate()


class TestGraphMath:
    # A1={perform}xO1={data}:3, A2={analys}xO1:2, A2xO2={statist}:1
    def setup_method(self):
        self.state = init_clusters(
            counted(("perform", "data", 3), ("analys", "data", 2), ("analys", "statist", 1))
        )
        self.a1 = next(c.cid for c in self.state.actions.values() if c.label == ("perform",))
        self.a2 = next(c.cid for c in self.state.actions.values() if c.label == ("analys",))
        self.o1 = next(c.cid for c in self.state.objects.values() if c.label == ("data",))
        self.o2 = next(c.cid for c in self.state.objects.values() if c.label == ("statist",))
        self.graph = build_role_graph(self.state)

    def test_edge_counts(self):
        assert self.graph.edges == {
            (self.a1, self.o1): 3,
            (self.a2, self.o1): 2,
            (self.a2, self.o2): 1,
        }
        assert sum(self.graph.edges.values()) == 6

    def test_weights(self):
        assert object_weight(self.graph, self.o1) == Fraction(1, 2)
        assert object_weight(self.graph, self.o2) == Fraction(1)
        assert action_weight(self.graph, self.a1) == Fraction(1)
        assert action_weight(self.graph, self.a2) == Fraction(1, 2)

    def test_similarities(self):
        assert action_similarity(self.graph, self.a1, self.a2) == Fraction(1, 2)
        assert object_similarity(self.graph, self.o1, self.o2) == Fraction(1, 2)

    def test_isolated_cluster_raises(self):
        with pytest.raises(IsolatedCluster):
            object_weight(self.graph, 999)


WORDS = ["read", "approv", "draft", "data", "analys", "studi", "design", "statist"]


def random_state(rng: random.Random):
    bags = lambda n: [
        tuple(sorted(rng.sample(WORDS, rng.randint(1, 3)))) for _ in range(n)
    ]
    abags, obags = bags(rng.randint(1, 12)), bags(rng.randint(1, 12))
    ms = [
        NormalizedMention("d", i, "A", rng.choice(abags), rng.choice(obags))
        for i in range(rng.randint(2, 60))
    ]
    state = init_clusters(ms)
    for _ in range(rng.randint(0, 4)):
        side = rng.choice(["action", "object"])
        ids = sorted(state._side(side))
        if len(ids) >= 2:
            state.merge(side, *rng.sample(ids, 2))
    return state


def assert_state_matches_oracle(state):
    oracle = graph_oracle(state)
    graph = build_role_graph(state)
    assert dict(graph.edges) == oracle["r"]
    assert sum(graph.edges.values()) == len(state.mentions)
    for o in state.objects:
        assert object_weight(graph, o) == oracle["w_object"][o]
    for a in state.actions:
        assert action_weight(graph, a) == oracle["w_action"][a]
    for (a1, a2), want in oracle["sim_actions"].items():
        got = action_similarity(graph, a1, a2)
        assert got == want
        assert abs(float(got) - float(want)) <= 1e-12
    for (o1, o2), want in oracle["sim_objects"].items():
        assert object_similarity(graph, o1, o2) == want


def test_graph_math_matches_oracle_on_random_states():
    rng = random.Random(23)
    for _ in range(40):
        assert_state_matches_oracle(random_state(rng))


class TestContainmentPass:
    def test_contained_pair_absorbed(self):
        ms = counted(("read", "final manuscript", 2), ("read", "manuscript", 1))
        state = containment_merge_pass(init_clusters(ms))
        assert len(state.objects) == 1
        state.validate()

    def test_both_sides_must_be_contained(self):
        ms = counted(("read", "manuscript", 1), ("approv", "final manuscript", 1))
        state = containment_merge_pass(init_clusters(ms))
        assert len(state.actions) == 2
        assert len(state.objects) == 2

    def test_runs_to_fixed_point(self):
        ms = counted(
            ("read", "final version manuscript", 1),
            ("read", "final manuscript", 1),
            ("read", "manuscript", 1),
        )
        state = containment_merge_pass(init_clusters(ms))
        assert len(state.objects) == 1

    def test_pin_blocks_containment(self):
        ms = counted(("read", "final manuscript", 2), ("read", "manuscript", 1))
        pin = ("object", frozenset({("final", "manuscript"), ("manuscript",)}))
        state = containment_merge_pass(init_clusters(ms), frozenset({pin}))
        assert len(state.objects) == 2


class TestBestMergeCandidate:
    def test_prefers_higher_similarity(self):
        # a/b share o1 (w=1/2); c/d share o2,o3 (w=1/2 each, sim=1... build smaller)
        ms = counted(
            ("a", "x", 1), ("b", "x", 1),
            ("c", "y", 1), ("d", "y", 1),
            ("c", "z", 1), ("d", "z", 1),
        )
        state = init_clusters(ms)
        got = best_merge_candidate(state, build_role_graph(state))
        assert got is not None
        sim, side, x, y = got
        assert sim == Fraction(1)
        assert {state.actions[x].label, state.actions[y].label} == {("c",), ("d",)}

    def test_tie_prefers_action_side_then_label(self):
        # one shared object between two actions and one shared action between
        # two objects, all weights equal: the action-side pair wins
        ms = counted(("a", "x", 1), ("b", "x", 1), ("a", "y", 1))
        state = init_clusters(ms)
        got = best_merge_candidate(state, build_role_graph(state))
        sim, side, _, _ = got
        assert side == "action"

    def test_pinned_pair_skipped(self):
        ms = counted(("a", "x", 1), ("b", "x", 1))
        state = init_clusters(ms)
        pin = ("action", frozenset({("a",), ("b",)}))
        got = best_merge_candidate(state, build_role_graph(state), frozenset({pin}))
        assert got is None

    def test_no_candidates_on_disjoint_graph(self):
        ms = counted(("a", "x", 1), ("b", "y", 1))
        state = init_clusters(ms)
        assert best_merge_candidate(state, build_role_graph(state)) is None


class TestCluster:
    def test_archetypes_recover_four_roles(self):
        state = cluster(archetype_mentions(), threshold=Fraction(1, 2))
        assert len(state.role_pairs()) == 4
        state.validate()

    def test_threshold_accepts_float_string_fraction(self):
        assert to_threshold(0.5) == Fraction(1, 2)
        assert to_threshold("1/2") == Fraction(1, 2)
        assert to_threshold(Fraction(1, 2)) == Fraction(1, 2)

    def test_threshold_must_be_positive(self):
        with pytest.raises(ConfigInvalid):
            to_threshold(0)
        with pytest.raises(ConfigInvalid):
            to_threshold(-1)

    def test_high_threshold_blocks_graph_merges(self):
        ms = counted(("a", "x", 1), ("b", "x", 1))
        state = cluster(ms, threshold=Fraction(2))
        assert len(state.actions) == 2

    def test_monotone_in_threshold(self):
        rng = random.Random(5)
        for _ in range(8):
            ms = [
                NormalizedMention("d", i, "A",
                                  (rng.choice(WORDS),),
                                  tuple(sorted(rng.sample(WORDS, rng.randint(1, 2)))))
                for i in range(rng.randint(5, 40))
            ]
            counts = [
                len(cluster(ms, threshold=t).role_pairs())
                for t in (Fraction(1, 10), Fraction(1, 4), Fraction(1, 2), Fraction(1), Fraction(2))
            ]
            assert counts == sorted(counts)

    def test_pin_survives_whole_run(self):
        ms = counted(("read", "x", 3), ("approv", "x", 3))
        pin = ("action", frozenset({("read",), ("approv",)}))
        state = cluster(ms, threshold=Fraction(1, 2), pins=[pin])
        assert len(state.actions) == 2
        unpinned = cluster(ms, threshold=Fraction(1, 2))
        assert len(unpinned.actions) == 1


class TestDeriveRoles:
    def test_ordering_by_count_then_labels(self):
        ms = counted(("draft", "paper", 1), ("read", "manuscript", 3), ("approv", "data", 1))
        rs = derive_roles(init_clusters(ms))
        assert [r.role_id for r in rs.roles] == ["r1", "r2", "r3"]
        assert rs.roles[0].name == "read / manuscript"
        # ties by action label: approv before draft
        assert rs.roles[1].name == "approv / data"
        assert rs.roles[2].name == "draft / paper"

    def test_members_partition_mentions(self):
        ms = counted(("read", "x", 2), ("draft", "y", 3))
        rs = derive_roles(init_clusters(ms))
        all_ids = sorted(i for r in rs.roles for i in r.member_ids)
        assert all_ids == list(range(5))


class TestApplyCuration:
    def make(self):
        ms = counted(("read", "manuscript", 3), ("draft", "manuscript", 2), ("approv", "data", 1))
        return init_clusters(ms)

    def test_merge_keeps_first_identity(self):
        state = self.make()
        rs = apply_curation(state, [{"op": "merge", "a": "r1", "b": "r2"}])
        assert len(rs.roles) == 2
        merged = rs.roles[0]
        assert merged.role_id == "r1"
        assert len(merged.member_ids) == 5
        assert len(merged.source_pairs) == 2

    def test_remove_moves_to_removed(self):
        state = self.make()
        rs = apply_curation(state, [{"op": "remove", "role": "r3"}])
        assert [r.role_id for r in rs.roles] == ["r1", "r2"]
        assert [r.role_id for r in rs.removed] == ["r3"]

    def test_rename(self):
        state = self.make()
        rs = apply_curation(state, [{"op": "rename", "role": "r1", "name": "Paper reading"}])
        assert rs.roles[0].name == "Paper reading"

    def test_rename_collision(self):
        state = self.make()
        ops = [
            {"op": "rename", "role": "r1", "name": "Reading"},
            {"op": "rename", "role": "r2", "name": "Reading"},
        ]
        with pytest.raises(NameCollision):
            apply_curation(state, ops)

    def test_unknown_role(self):
        with pytest.raises(UnknownRole):
            apply_curation(self.make(), [{"op": "remove", "role": "r99"}])

    def test_removed_role_not_addressable(self):
        ops = [{"op": "remove", "role": "r1"}, {"op": "rename", "role": "r1", "name": "X"}]
        with pytest.raises(UnknownRole):
            apply_curation(self.make(), ops)

    def test_unknown_op_kind(self):
        with pytest.raises(ConfigInvalid):
            apply_curation(self.make(), [{"op": "split", "role": "r1"}])

    def test_pin_op_records_label_pins(self):
        state = self.make()
        rs = apply_curation(state, [{"op": "pin", "a": "r1", "b": "r2"}])
        assert ("action", frozenset({("draft",), ("read",)})) in rs.pins
        # shared object cluster: no self-pin on the object side
        assert all(side == "action" for side, _ in rs.pins)

    def test_log_records_every_op(self):
        ops = [
            {"op": "rename", "role": "r1", "name": "Reading"},
            {"op": "remove", "role": "r3"},
        ]
        rs = apply_curation(self.make(), ops)
        assert rs.log == ops

    def test_seed_pins_carried(self):
        pin = ("action", frozenset({("x",), ("y",)}))
        rs = apply_curation(self.make(), [], pins=[pin])
        assert rs.pins == [pin]

    def test_roleset_json_round_trip(self):
        from rolemine.discovery import RoleSet

        rs = apply_curation(self.make(), [
            {"op": "merge", "a": "r1", "b": "r2"},
            {"op": "rename", "role": "r1", "name": "Paper handling"},
            {"op": "pin", "a": "r1", "b": "r3"},
            {"op": "remove", "role": "r3"},
        ])
        again = RoleSet.from_json(rs.to_json())
        assert again.to_json() == rs.to_json()


class TestTrainingSet:
    def test_one_example_per_member(self):
        ms = counted(("read", "x", 2), ("draft", "y", 1))
        state = init_clusters(ms)
        rs = apply_curation(state, [{"op": "rename", "role": "r1", "name": "Reading"}])
        examples = build_training_set(rs, list(state.mentions))
        assert len(examples) == 3
        assert sorted({label for _, label in examples}) == ["Reading", "draft / y"]

    def test_removed_roles_excluded(self):
        ms = counted(("read", "x", 2), ("draft", "y", 1))
        state = init_clusters(ms)
        rs = apply_curation(state, [{"op": "remove", "role": "r2"}])
        examples = build_training_set(rs, list(state.mentions))
        assert len(examples) == 2

    def test_empty_training_set_raises(self):
        ms = counted(("read", "x", 1))
        state = init_clusters(ms)
        rs = apply_curation(state, [{"op": "remove", "role": "r1"}])
        with pytest.raises(EmptyTrainingSet):
            build_training_set(rs, list(state.mentions))


def test_graph_to_json_shape():
    ms = counted(("read", "x", 2), ("draft", "y", 1))
    payload = graph_to_json(init_clusters(ms))
    assert {n["id"] for n in payload["nodes"]} == {"a0", "a1", "o0", "o1"}
    assert payload["edges"] == [
        {"a": "a0", "o": "o0", "weight": 2},
        {"a": "a1", "o": "o1", "weight": 1},
    ]
