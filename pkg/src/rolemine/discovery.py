"""Bottom-up clustering of mentions into action/object concepts over a weighted
bipartite role graph, plus curation (merge/remove/rename/pin) and the
automatically built training set.

All similarity arithmetic uses exact rationals: object weights are reciprocals
of integer degrees, so Fraction keeps every comparison exact and the whole
procedure bit-reproducible.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import (
    ConfigInvalid,
    EmptyTrainingSet,
    IsolatedCluster,
    NameCollision,
    UnknownRole,
)
from .normalize import NormalizedMention

Label = tuple[str, ...]
Pin = tuple[str, frozenset]


def mention_bag(terms: Sequence[str]) -> Label:
    return tuple(sorted(set(terms)))


@dataclass
class Cluster:
    cid: int
    side: str
    members: list[int]
    bag_counts: Counter
    label: Label

    @property
    def size(self) -> int:
        return len(self.members)


def _best_label(bag_counts: Counter) -> Label:
    top = max(bag_counts.values())
    return min(bag for bag, n in bag_counts.items() if n == top)


class ClusterState:
    """Twin partitions of the mention set into action and object clusters.

    Every cluster's label is the term bag of its most numerous member mention
    (count ties resolved to the lexicographically smaller bag).
    """

    def __init__(self, mentions: Sequence[NormalizedMention]):
        self.mentions: tuple[NormalizedMention, ...] = tuple(mentions)
        self.actions: dict[int, Cluster] = {}
        self.objects: dict[int, Cluster] = {}
        self.a_of: dict[int, int] = {}
        self.o_of: dict[int, int] = {}

    def _side(self, side: str) -> dict[int, Cluster]:
        return self.actions if side == "action" else self.objects

    def _assign(self, side: str) -> dict[int, int]:
        return self.a_of if side == "action" else self.o_of

    def merge(self, side: str, cid1: int, cid2: int) -> int:
        """Merge two same-side clusters; returns the surviving cluster id.

        The bigger member keeps its id (ties: the smaller id); the merged
        label is recomputed from the combined member bags.
        """
        if cid1 == cid2:
            return cid1
        clusters = self._side(side)
        c1, c2 = clusters[cid1], clusters[cid2]
        keep, drop = (c1, c2) if (c1.size, -c1.cid) >= (c2.size, -c2.cid) else (c2, c1)
        assign = self._assign(side)
        for idx in drop.members:
            assign[idx] = keep.cid
        keep.members.extend(drop.members)
        keep.bag_counts.update(drop.bag_counts)
        keep.label = _best_label(keep.bag_counts)
        del clusters[drop.cid]
        return keep.cid

    def role_pairs(self) -> Counter:
        """Distinct (action cluster id, object cluster id) pairs with mention counts."""
        return Counter((self.a_of[i], self.o_of[i]) for i in range(len(self.mentions)))

    def validate(self) -> None:
        for side, clusters, assign in (
            ("action", self.actions, self.a_of),
            ("object", self.objects, self.o_of),
        ):
            seen: set[int] = set()
            for c in clusters.values():
                if c.side != side:
                    raise AssertionError("cluster filed under the wrong side")
                for idx in c.members:
                    if idx in seen:
                        raise AssertionError("mention in two clusters")
                    seen.add(idx)
                    if assign[idx] != c.cid:
                        raise AssertionError("assignment map out of sync")
                if c.label != _best_label(c.bag_counts):
                    raise AssertionError("stale cluster label")
                if sum(c.bag_counts.values()) != c.size:
                    raise AssertionError("bag counts out of sync")
            if seen != set(range(len(self.mentions))):
                raise AssertionError(f"{side} clusters are not a partition")


def init_clusters(mentions: Sequence[NormalizedMention]) -> ClusterState:
    """One cluster per distinct normalized action (object) term bag."""
    state = ClusterState(mentions)
    for side in ("action", "object"):
        clusters = state._side(side)
        assign = state._assign(side)
        by_bag: dict[Label, int] = {}
        for idx, m in enumerate(state.mentions):
            bag = mention_bag(m.action_terms if side == "action" else m.object_terms)
            cid = by_bag.get(bag)
            if cid is None:
                cid = len(by_bag)
                by_bag[bag] = cid
                clusters[cid] = Cluster(cid, side, [], Counter(), bag)
            c = clusters[cid]
            c.members.append(idx)
            c.bag_counts[bag] += 1
            assign[idx] = cid
    return state


@dataclass(frozen=True)
class RoleGraph:
    """Weighted bipartite relation R between action and object clusters."""

    edges: Mapping[tuple[int, int], int]

    def action_neighbors(self) -> dict[int, set[int]]:
        out: dict[int, set[int]] = {}
        for a, o in self.edges:
            out.setdefault(a, set()).add(o)
        return out

    def object_neighbors(self) -> dict[int, set[int]]:
        out: dict[int, set[int]] = {}
        for a, o in self.edges:
            out.setdefault(o, set()).add(a)
        return out


def build_role_graph(state: ClusterState) -> RoleGraph:
    return RoleGraph(dict(state.role_pairs()))


def object_weight(graph: RoleGraph, o: int) -> Fraction:
    """w(o) = 1 / number of distinct actions related to o."""
    degree = sum(1 for (_, oo) in graph.edges if oo == o)
    if degree == 0:
        raise IsolatedCluster(f"object cluster {o} has no edges")
    return Fraction(1, degree)


def action_weight(graph: RoleGraph, a: int) -> Fraction:
    degree = sum(1 for (aa, _) in graph.edges if aa == a)
    if degree == 0:
        raise IsolatedCluster(f"action cluster {a} has no edges")
    return Fraction(1, degree)


def action_similarity(graph: RoleGraph, a1: int, a2: int) -> Fraction:
    """S(a1,a2) = sum of w(o) over objects shared by both actions."""
    nbrs = graph.action_neighbors()
    shared = nbrs.get(a1, set()) & nbrs.get(a2, set())
    return sum((object_weight(graph, o) for o in shared), Fraction(0))


def object_similarity(graph: RoleGraph, o1: int, o2: int) -> Fraction:
    nbrs = graph.object_neighbors()
    shared = nbrs.get(o1, set()) & nbrs.get(o2, set())
    return sum((action_weight(graph, a) for a in shared), Fraction(0))


def _pair_similarities(graph: RoleGraph, side: str) -> dict[tuple[int, int], Fraction]:
    """Similarity for every same-side cluster pair sharing at least one neighbor."""
    groups = graph.object_neighbors() if side == "action" else graph.action_neighbors()
    sims: dict[tuple[int, int], Fraction] = {}
    for _, incident in sorted(groups.items()):
        weight = Fraction(1, len(incident))
        ordered = sorted(incident)
        for i in range(len(ordered)):
            for j in range(i + 1, len(ordered)):
                key = (ordered[i], ordered[j])
                sims[key] = sims.get(key, Fraction(0)) + weight
    return sims


def _pinned(pins: frozenset, side: str, l1: Label, l2: Label) -> bool:
    return l1 != l2 and (side, frozenset((l1, l2))) in pins


def containment_merge_pass(state: ClusterState, pins: frozenset = frozenset()) -> ClusterState:
    """Merge role-cluster pairs where one's labels contain the other's on both sides.

    Runs to a fixed point; scan order is deterministic (labels, then ids).
    """
    while True:
        pairs = sorted(
            state.role_pairs(),
            key=lambda p: (state.actions[p[0]].label, state.objects[p[1]].label, p),
        )
        merged = False
        for i in range(len(pairs)):
            a1, o1 = pairs[i]
            la1 = set(state.actions[a1].label)
            lo1 = set(state.objects[o1].label)
            for j in range(i + 1, len(pairs)):
                a2, o2 = pairs[j]
                la2 = set(state.actions[a2].label)
                lo2 = set(state.objects[o2].label)
                forward = la2 <= la1 and lo2 <= lo1
                backward = la1 <= la2 and lo1 <= lo2
                if not (forward or backward):
                    continue
                if _pinned(pins, "action", state.actions[a1].label, state.actions[a2].label):
                    continue
                if _pinned(pins, "object", state.objects[o1].label, state.objects[o2].label):
                    continue
                state.merge("action", a1, a2)
                state.merge("object", o1, o2)
                merged = True
                break
            if merged:
                break
        if not merged:
            return state


def best_merge_candidate(
    state: ClusterState, graph: RoleGraph, pins: frozenset = frozenset()
) -> tuple[Fraction, str, int, int] | None:
    """Highest-similarity same-side cluster pair, or None when nothing is comparable.

    Ties prefer the action side, then the lexicographically smallest label pair.
    """
    candidates: list[tuple[Fraction, int, tuple[Label, Label], str, int, int]] = []
    for rank, side in ((0, "action"), (1, "object")):
        clusters = state._side(side)
        for (x, y), sim in _pair_similarities(graph, side).items():
            lx, ly = clusters[x].label, clusters[y].label
            if _pinned(pins, side, lx, ly):
                continue
            labels = (lx, ly) if lx <= ly else (ly, lx)
            candidates.append((sim, rank, labels, side, x, y))
    if not candidates:
        return None
    candidates.sort(key=lambda c: (-c[0], c[1], c[2]))
    sim, _, _, side, x, y = candidates[0]
    return sim, side, x, y


def to_threshold(value) -> Fraction:
    if isinstance(value, Fraction):
        th = value
    elif isinstance(value, float):
        th = Fraction(str(value))
    else:
        th = Fraction(value)
    if th <= 0:
        raise ConfigInvalid(f"cluster threshold must be positive, got {value!r}")
    return th


def cluster(
    mentions: Sequence[NormalizedMention],
    threshold=Fraction(1, 2),
    pins: Iterable[Pin] = (),
) -> ClusterState:
    """Bottom-up clustering: containment pass, then one best graph merge per
    round, until the best similarity falls below the threshold."""
    th = to_threshold(threshold)
    pin_set = frozenset(pins)
    state = init_clusters(mentions)
    while True:
        containment_merge_pass(state, pin_set)
        graph = build_role_graph(state)
        best = best_merge_candidate(state, graph, pin_set)
        if best is None or best[0] < th:
            return state
        _, side, x, y = best
        state.merge(side, x, y)


@dataclass
class Role:
    role_id: str
    name: str
    member_ids: tuple[int, ...]
    source_pairs: tuple[tuple[int, int], ...]


@dataclass
class RoleSet:
    """Curated named roles plus the curation provenance log."""

    roles: list[Role] = field(default_factory=list)
    removed: list[Role] = field(default_factory=list)
    pins: list[Pin] = field(default_factory=list)
    log: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        def role_json(r: Role) -> dict:
            return {
                "id": r.role_id,
                "name": r.name,
                "member_mention_ids": list(r.member_ids),
                "source_pairs": [list(p) for p in r.source_pairs],
            }

        return {
            "roles": [role_json(r) for r in self.roles],
            "removed": [role_json(r) for r in self.removed],
            "pins": [
                {"side": side, "labels": [list(l) for l in sorted(labels)]}
                for side, labels in self.pins
            ],
            "log": list(self.log),
        }

    @classmethod
    def from_json(cls, data: dict) -> "RoleSet":
        def role(d: dict) -> Role:
            return Role(
                d["id"], d["name"],
                tuple(d["member_mention_ids"]),
                tuple(tuple(p) for p in d["source_pairs"]),
            )

        pins = [
            (p["side"], frozenset(tuple(l) for l in p["labels"]))
            for p in data.get("pins", [])
        ]
        return cls(
            roles=[role(d) for d in data.get("roles", [])],
            removed=[role(d) for d in data.get("removed", [])],
            pins=pins,
            log=list(data.get("log", [])),
        )


def _auto_name(state: ClusterState, a: int, o: int) -> str:
    return " ".join(state.actions[a].label) + " / " + " ".join(state.objects[o].label)


def derive_roles(state: ClusterState) -> RoleSet:
    """Initial RoleSet: one role per (action cluster, object cluster) pair,
    ordered by size (descending) then labels; ids r1, r2, ..."""
    pairs = state.role_pairs()
    members: dict[tuple[int, int], list[int]] = {p: [] for p in pairs}
    for idx in range(len(state.mentions)):
        members[(state.a_of[idx], state.o_of[idx])].append(idx)
    ordered = sorted(
        pairs,
        key=lambda p: (
            -pairs[p],
            state.actions[p[0]].label,
            state.objects[p[1]].label,
            p,
        ),
    )
    role_set = RoleSet()
    names_used: set[str] = set()
    for n, pair in enumerate(ordered, start=1):
        rid = f"r{n}"
        name = _auto_name(state, *pair)
        if name in names_used:
            name = f"{name} [{rid}]"
        names_used.add(name)
        role_set.roles.append(Role(rid, name, tuple(members[pair]), (pair,)))
    return role_set


def _find_role(role_set: RoleSet, role_id: str) -> Role:
    for r in role_set.roles:
        if r.role_id == role_id:
            return r
    raise UnknownRole(f"no live role with id {role_id!r}")


def _pin_pairs(state: ClusterState, ra: Role, rb: Role) -> list[Pin]:
    pins: list[Pin] = []
    for side, clusters, pick in (
        ("action", state.actions, 0),
        ("object", state.objects, 1),
    ):
        labels_a = {clusters[p[pick]].label for p in ra.source_pairs}
        labels_b = {clusters[p[pick]].label for p in rb.source_pairs}
        for la in sorted(labels_a):
            for lb in sorted(labels_b):
                if la != lb:
                    pins.append((side, frozenset((la, lb))))
    return pins


def apply_curation(
    state: ClusterState, ops: Sequence[dict], pins: Sequence[Pin] = ()
) -> RoleSet:
    """Replay curation operations over the derived roles, in order.

    Supported ops: {"op": "merge", "a", "b"}, {"op": "remove", "role"},
    {"op": "rename", "role", "name"}, {"op": "pin", "a", "b"}.  Raises
    UnknownRole for unknown or removed ids, NameCollision on duplicate names.
    ``pins`` seeds pins carried over from an earlier discovery round.
    """
    role_set = derive_roles(state)
    role_set.pins = list(pins)
    for op in ops:
        kind = op.get("op")
        if kind == "merge":
            ra = _find_role(role_set, op["a"])
            rb = _find_role(role_set, op["b"])
            if ra is rb:
                raise UnknownRole("cannot merge a role with itself")
            merged = Role(
                ra.role_id,
                ra.name,
                tuple(sorted(ra.member_ids + rb.member_ids)),
                tuple(sorted(set(ra.source_pairs + rb.source_pairs))),
            )
            role_set.roles = [
                merged if r is ra else r for r in role_set.roles if r is not rb
            ]
        elif kind == "remove":
            r = _find_role(role_set, op["role"])
            role_set.roles = [x for x in role_set.roles if x is not r]
            role_set.removed.append(r)
        elif kind == "rename":
            r = _find_role(role_set, op["role"])
            name = op["name"]
            if any(x.name == name and x is not r for x in role_set.roles):
                raise NameCollision(f"role name {name!r} already in use")
            role_set.roles = [
                Role(r.role_id, name, r.member_ids, r.source_pairs) if x is r else x
                for x in role_set.roles
            ]
        elif kind == "pin":
            ra = _find_role(role_set, op["a"])
            rb = _find_role(role_set, op["b"])
            for pin in _pin_pairs(state, ra, rb):
                if pin not in role_set.pins:
                    role_set.pins.append(pin)
        else:
            raise ConfigInvalid(f"unknown curation op {kind!r}")
        role_set.log.append(dict(op))
    return role_set


def build_training_set(
    role_set: RoleSet, mentions: Sequence[NormalizedMention]
) -> list[tuple[NormalizedMention, str]]:
    """One (mention, role name) example per member of every live role."""
    examples: list[tuple[NormalizedMention, str]] = []
    for role in role_set.roles:
        for idx in sorted(role.member_ids):
            examples.append((mentions[idx], role.name))
    if not examples:
        raise EmptyTrainingSet("curation left no role members to train on")
    return examples


def graph_to_json(state: ClusterState) -> dict:
    """rolegraph.json payload: nodes with ids/sides/labels/sizes, weighted edges."""
    graph = build_role_graph(state)
    nodes = []
    for side, clusters in (("action", state.actions), ("object", state.objects)):
        prefix = "a" if side == "action" else "o"
        for cid in sorted(clusters):
            c = clusters[cid]
            nodes.append({
                "id": f"{prefix}{cid}",
                "side": side,
                "label": list(c.label),
                "size": c.size,
            })
    edges = [
        {"a": f"a{a}", "o": f"o{o}", "weight": w}
        for (a, o), w in sorted(graph.edges.items())
    ]
    return {"nodes": nodes, "edges": edges}
