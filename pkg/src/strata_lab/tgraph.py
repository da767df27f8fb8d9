"""Typed graphs (finite vertex set with type labels) and a
type-respecting isomorphism search.

Used for balls in both buildings.  The isomorphism search does
iterated color refinement (type, then multiset of neighbor colors)
followed by most-constrained-first backtracking; balls are small and
highly regular, so refinement does nearly all the work.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class TypedGraph:
    types: list = field(default_factory=list)  # vertex id -> type label
    payloads: list = field(default_factory=list)
    adj: list = field(default_factory=list)  # vertex id -> set of ids
    edge_labels: dict = field(default_factory=dict)  # frozenset({a,b}) -> label

    def add_vertex(self, typ, payload=None) -> int:
        self.types.append(typ)
        self.payloads.append(payload)
        self.adj.append(set())
        return len(self.types) - 1

    def add_edge(self, a: int, b: int, label_type=None, label_payload=None):
        if a == b:
            raise ValueError("no loops")
        self.adj[a].add(b)
        self.adj[b].add(a)
        key = frozenset((a, b))
        if label_type is not None:
            self.edge_labels[key] = (label_type, label_payload)

    @property
    def n(self) -> int:
        return len(self.types)

    def num_edges(self) -> int:
        return sum(len(s) for s in self.adj) // 2

    def degree_profile(self, v: int):
        out = {}
        for w in self.adj[v]:
            out[self.types[w]] = out.get(self.types[w], 0) + 1
        return tuple(sorted(out.items()))

    def to_json(self) -> dict:
        edges = []
        for a in range(self.n):
            for b in self.adj[a]:
                if a < b:
                    lbl = self.edge_labels.get(frozenset((a, b)))
                    edges.append(
                        {"a": a, "b": b, "label_type": lbl[0] if lbl else None}
                    )
        edges.sort(key=lambda e: (e["a"], e["b"]))
        return {
            "vertices": [{"id": i, "type": t} for i, t in enumerate(self.types)],
            "edges": edges,
        }


@dataclass
class IsoResult:
    mapping: dict | None
    certificate: str | None = None

    @property
    def found(self) -> bool:
        return self.mapping is not None


def typed_isomorphism(
    g1: TypedGraph,
    g2: TypedGraph,
    type_map: dict,
    root_pair=None,
    max_refinements: int = 500_000,
) -> IsoResult:
    """Search for a graph isomorphism g1 -> g2 sending a vertex of type t
    to one of type type_map[t] (and the optional root to the root).

    Individualization-refinement: colors are refined jointly on the
    disjoint union; branching individualizes one vertex of the smallest
    ambiguous class on each side.  Returns the mapping or a failure
    certificate (the invariant that distinguishes the graphs).
    """
    from collections import Counter

    if g1.n != g2.n:
        return IsoResult(None, f"vertex counts differ: {g1.n} vs {g2.n}")
    if g1.num_edges() != g2.num_edges():
        return IsoResult(
            None, f"edge counts differ: {g1.num_edges()} vs {g2.num_edges()}"
        )
    t1 = [type_map[t] for t in g1.types]
    t2 = list(g2.types)
    if sorted(t1) != sorted(t2):
        return IsoResult(None, "type multisets differ")

    import numpy as np

    n = g1.n
    # padded neighbor matrix of the disjoint union (exact refinement:
    # signature = own color + sorted padded neighbor colors)
    maxdeg = max(
        max((len(s) for s in g1.adj), default=0),
        max((len(s) for s in g2.adj), default=0),
    )
    adj_pad = np.full((2 * n, maxdeg), -1, dtype=np.int32)
    for v in range(n):
        nb = sorted(g1.adj[v])
        adj_pad[v, : len(nb)] = nb
    for v in range(n):
        nb = sorted(n + w for w in g2.adj[v])
        adj_pad[n + v, : len(nb)] = nb
    pad_mask = adj_pad < 0
    adj_idx = np.where(pad_mask, 0, adj_pad)

    palette = {}

    def col(key):
        if key not in palette:
            palette[key] = len(palette)
        return palette[key]

    r1, r2 = root_pair if root_pair else (None, None)
    base = [col((t, v == r1)) for v, t in enumerate(t1)]
    base += [col((t, v == r2)) for v, t in enumerate(t2)]
    base = np.array(base, dtype=np.int64)

    refinements = 0
    # deterministic 64-bit mixers for multiset hashing of neighbor colors;
    # the final mapping is verified edge by edge, so a (cosmically
    # unlikely) collision cannot produce a wrong positive answer
    rng = np.random.default_rng(0x5EED)
    mix1 = rng.integers(1, 2 ** 62, size=4 * n + 64, dtype=np.int64) | 1
    mix2 = rng.integers(1, 2 ** 62, size=4 * n + 64, dtype=np.int64) | 1

    def refine(colors):
        nonlocal refinements, mix1, mix2
        nclasses = len(np.unique(colors))
        while True:
            refinements += 1
            if refinements > max_refinements:
                raise RuntimeError("isomorphism search budget exceeded")
            if int(colors.max()) + 1 > len(mix1):
                grow = np.random.default_rng(0x5EED + len(mix1))
                extra = grow.integers(1, 2 ** 62, size=len(mix1), dtype=np.int64) | 1
                mix1 = np.concatenate([mix1, extra])
                mix2 = np.concatenate([mix2, extra[::-1]])
            nc = colors[adj_idx]
            h1 = np.where(pad_mask, 0, mix1[nc]).sum(axis=1)
            h2 = np.where(pad_mask, 0, mix2[nc]).sum(axis=1)
            table = np.column_stack([colors, h1, h2])
            _, inverse = np.unique(table, axis=0, return_inverse=True)
            inverse = inverse.reshape(-1).astype(np.int64)
            new_nclasses = len(np.unique(inverse))
            if new_nclasses == nclasses:
                return inverse
            nclasses = new_nclasses
            colors = inverse

    def search(colors):
        colors = refine(colors)
        c1 = Counter(colors[:n].tolist())
        c2 = Counter(colors[n:].tolist())
        if c1 != c2:
            return None
        if all(v == 1 for v in c1.values()):
            where2 = {int(colors[n + w]): w for w in range(n)}
            mapping = {v: where2[int(colors[v])] for v in range(n)}
            for a in range(n):
                for b in g1.adj[a]:
                    if mapping[b] not in g2.adj[mapping[a]]:
                        return None
            return mapping
        # branch on the smallest ambiguous class
        target = min((sz, c) for c, sz in c1.items() if sz > 1)[1]
        v = int(np.nonzero(colors[:n] == target)[0][0])
        fresh = int(colors.max()) + 1
        for w in np.nonzero(colors[n:] == target)[0]:
            branch = colors.copy()
            branch[v] = fresh
            branch[n + int(w)] = fresh
            res = search(branch)
            if res is not None:
                return res
        return None

    mapping = search(base)
    if mapping is None:
        return IsoResult(None, "no isomorphism extends the refined coloring")
    assert len(set(mapping.values())) == n
    return IsoResult(mapping)
