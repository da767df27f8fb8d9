"""The lattice-class building of the projective symplectic similitude
group in four variables, as a typed graph, plus the combinatorial
comparison with the vertex-lattice complex.

Vertices are homothety classes carrying a unique representative T with
p T ⊆ T^dual ⊆ T; the type dim(T/T^dual) is 0, 2 or 4.  Types 0 and 4
are the hyperspecial vertices, type 2 the non-special ones.  Two
vertices are adjacent when valid representatives are nested.  All
neighbor enumerations happen in the F_p reductions:

  type 0:  T/pT symplectic; Lagrangian planes give the adjacent type-4
           vertices, all lines the type-2 ones.
  type 4:  same with the form p( , ) mod p, going down instead of up.
  type 2:  T/T^dual and T^dual/pT are hyperbolic planes; their p+1
           lines give the adjacent type-0 and type-4 vertices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import fqlin, quadspace
from .errors import InvalidInput, NotAVertex, ResourceLimit
from .gf import GF
from .latqp import PLattice, QpAmbient, adapted_quotient, red_mod_p
from .tgraph import IsoResult, TypedGraph, typed_isomorphism


def symplectic_gram_j4():
    return (
        (0, 0, 0, 1),
        (0, 0, 1, 0),
        (0, -1, 0, 0),
        (-1, 0, 0, 0),
    )


def standard_V0(p: int):
    """The 4-dimensional symplectic ambient with antidiagonal Gram and
    its standard self-dual lattice."""
    amb = QpAmbient(p, symplectic_gram_j4(), kind="alternating")
    return amb, PLattice.standard(amb)


@dataclass(frozen=True)
class SpVertex:
    rep: PLattice  # the unique lattice with pT ⊆ T^dual ⊆ T in the class
    type: int

    def key(self):
        return self.rep.key()

    def is_hyperspecial(self) -> bool:
        return self.type in (0, 4)


def vertex_of(T: PLattice) -> SpVertex:
    """The building vertex containing the homothety class of T (or of
    its dual); NotAVertex if no rescaling gives pT' ⊆ T'^dual ⊆ T'."""
    for base in (T, T.dual()):
        for k in range(-8, 9):
            Tk = base.rescale(k)
            D = Tk.dual()
            if Tk.contains(D) and D.contains(Tk.rescale(1)):
                t = Tk.quotient_length(D)
                assert t in (0, 2, 4)
                return SpVertex(Tk, t)
    raise NotAVertex("no homothety representative satisfies the chain condition")


def _reduction_space(T: PLattice, scale_form: bool):
    """T/pT as a symplectic F_p-space; form is B mod p, or pB mod p."""
    p = T.p
    Fp = GF(p)
    rows = T.basis_rows()
    amb = T.ambient
    c = Fraction(p) if scale_form else Fraction(1)
    gram = tuple(
        tuple(red_mod_p(c * amb.bilinear(r1, r2), p) for r2 in rows)
        for r1 in rows
    )
    return quadspace.BilinearSpace(Fp, gram, kind="alternating"), rows


def _add_scaled_lifts(T: PLattice, coeff_rows, denom_pow: int):
    """Lattice generated by pT and the lifts, divided by p^denom_pow:
    p^{-denom_pow} (pT + sum of coefficient combinations of T's rows)."""
    p = T.p
    H = T.hnf
    rows = [[p * x for x in r] for r in H]
    for c in coeff_rows:
        rows.append([sum(ci * hx for ci, hx in zip(c, col)) for col in zip(*H)])
    return PLattice.from_rows(T.ambient, rows, extra_scale=T.scale + denom_pow)


def sp_neighbors(v: SpVertex):
    """Complete adjacency list of a building vertex."""
    T = v.rep
    p = T.p
    out = []
    if v.type == 0:
        V, _ = _reduction_space(T, scale_form=False)
        for W in quadspace.enumerate_isotropic_subspaces(V, 2):
            out.append(SpVertex(_add_scaled_lifts(T, W.basis, 1), 4))
        for line in quadspace.enumerate_isotropic_subspaces(V, 1):
            out.append(SpVertex(_add_scaled_lifts(T, line.basis, 1), 2))
    elif v.type == 4:
        V, _ = _reduction_space(T, scale_form=True)
        for W in quadspace.enumerate_isotropic_subspaces(V, 2):
            out.append(SpVertex(_add_scaled_lifts(T, W.basis, 0), 0))
        for line in quadspace.enumerate_isotropic_subspaces(V, 1):
            perp = V.perp(line.basis)
            out.append(SpVertex(_add_scaled_lifts(T, perp, 0), 2))
    elif v.type == 2:
        D = T.dual()
        Fp = GF(p)
        amb = T.ambient
        # type-0 side: lines in T/T^dual
        head = adapted_quotient(T, D)
        head_rows = [row for a, row in head if a == 1]
        assert len(head_rows) == 2
        for c in _proj_lines(p):
            lift = _combine(c, head_rows)
            fixed = PLattice.from_rows(amb, list(D.basis_rows()) + [lift])
            out.append(SpVertex(fixed, 0))
        # type-4 side: lines in T^dual/pT, adjoined divided by p
        base = adapted_quotient(D, T.rescale(1))
        base_rows = [row for a, row in base if a == 1]
        assert len(base_rows) == 2
        for c in _proj_lines(p):
            lift = _combine(c, base_rows)
            bigger = PLattice.from_rows(
                amb,
                list(T.basis_rows()) + [tuple(Fraction(x) / p for x in lift)],
            )
            out.append(SpVertex(bigger, 4))
    else:
        raise InvalidInput(f"bad vertex type {v.type}")
    dedup = {w.key(): w for w in out}
    result = sorted(dedup.values(), key=lambda w: w.key())
    for w in result:
        assert w.rep.contains(w.rep.dual()) or w.type == 0
    return result


def _proj_lines(p: int):
    """Normalized coefficient rows of the lines in F_p^2."""
    out = [(1, t) for t in range(p)]
    out.append((0, 1))
    return out


def _combine(c, rows):
    vec = None
    for ci, row in zip(c, rows):
        if ci:
            term = tuple(Fraction(ci) * x for x in row)
            vec = term if vec is None else tuple(a + b for a, b in zip(vec, term))
    return vec


def building_ball(v0: SpVertex, radius: int) -> TypedGraph:
    """Ball of the building around v0 (graph distance in the 1-skeleton),
    with induced edges."""
    if radius not in (1, 2):
        raise ResourceLimit("radius must be 1 or 2")
    if radius == 2 and v0.rep.p > 5:
        raise ResourceLimit("radius-2 balls computed for p <= 5 only")
    g = TypedGraph()
    objects = {}

    def vid(w: SpVertex):
        k = w.key()
        if k not in objects:
            objects[k] = g.add_vertex(w.type, payload=w)
        return objects[k]

    vid(v0)
    dist = {v0.key(): 0}
    frontier = [v0]
    neighbor_lists = {}
    for step in range(radius):
        new_frontier = []
        for w in frontier:
            nbrs = sp_neighbors(w)
            neighbor_lists[w.key()] = nbrs
            for x in nbrs:
                if x.key() not in dist:
                    dist[x.key()] = step + 1
                    new_frontier.append(x)
                    vid(x)
        frontier = new_frontier
    for w in frontier:
        neighbor_lists[w.key()] = sp_neighbors(w)
    for k, nbrs in neighbor_lists.items():
        a = objects[k]
        for x in nbrs:
            xk = x.key()
            if xk in objects:
                g.add_edge(a, objects[xk])
    return g


def two_simplexes(g: TypedGraph):
    """Mutually adjacent triples; the types are always {0, 2, 4}."""
    out = []
    for v in range(g.n):
        if g.types[v] != 2:
            continue
        nb = sorted(g.adj[v])
        for i, a in enumerate(nb):
            for b in nb[i + 1 :]:
                if b in g.adj[a]:
                    tri = tuple(sorted((v, a, b)))
                    out.append(tri)
                    assert sorted(g.types[x] for x in tri) == [0, 2, 4]
    return sorted(set(out))


# ---------------------------------------------------------------------------
# VE elements and the order
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VEElement:
    """hyperspecial vertex, non-special vertex, or hyperspecial edge of
    a building ball (ids refer to the TypedGraph)."""

    kind: str  # "hs" | "nsp" | "edge"
    ids: tuple

    @staticmethod
    def vertex(g: TypedGraph, v: int) -> "VEElement":
        return VEElement("hs" if g.types[v] in (0, 4) else "nsp", (v,))

    @staticmethod
    def hs_edge(g: TypedGraph, a: int, b: int) -> "VEElement":
        assert g.types[a] in (0, 4) and g.types[b] in (0, 4)
        assert b in g.adj[a]
        return VEElement("edge", tuple(sorted((a, b))))


def dimension_of(x: VEElement) -> int:
    return {"hs": 2, "edge": 1, "nsp": 0}[x.kind]


def ve_elements(g: TypedGraph):
    out = [VEElement.vertex(g, v) for v in range(g.n)]
    for a in range(g.n):
        if g.types[a] not in (0, 4):
            continue
        for b in g.adj[a]:
            if a < b and g.types[b] in (0, 4):
                out.append(VEElement("edge", (a, b)))
    return out


def ve_order(g: TypedGraph, x: VEElement, y: VEElement) -> str:
    """'less', 'greater', 'equal' or 'incomparable' in the closure order."""
    if x == y:
        return "equal"

    def less(a: VEElement, b: VEElement) -> bool:
        if a.kind == "nsp" and b.kind == "hs":
            return b.ids[0] in g.adj[a.ids[0]]
        if a.kind == "nsp" and b.kind == "edge":
            v = a.ids[0]
            return all(w in g.adj[v] for w in b.ids)
        if a.kind == "edge" and b.kind == "hs":
            return b.ids[0] in a.ids
        return False

    if less(x, y):
        return "less"
    if less(y, x):
        return "greater"
    return "incomparable"


def intersection_pattern(g: TypedGraph, x: int, y: int) -> str:
    """For two hyperspecial vertices: 'edge-stratum' if adjacent,
    'point-stratum' if a unique non-special vertex is adjacent to both,
    else 'empty'."""
    if x == y:
        raise InvalidInput("distinct vertices expected")
    if g.types[x] not in (0, 4) or g.types[y] not in (0, 4):
        raise InvalidInput("hyperspecial vertices expected")
    if y in g.adj[x]:
        return "edge-stratum"
    common_nsp = [z for z in g.adj[x] if z in g.adj[y] and g.types[z] == 2]
    if len(common_nsp) == 1:
        return "point-stratum"
    assert not common_nsp, "meet through more than one non-special vertex"
    return "empty"


def typed_iso_check(bball: TypedGraph, vball: TypedGraph) -> IsoResult:
    """Type-respecting isomorphism from a building ball onto a
    vertex-lattice ball: both hyperspecial types go to type 5,
    non-special to type 1, roots to roots."""
    return typed_isomorphism(
        bball, vball, type_map={0: 5, 4: 5, 2: 1}, root_pair=(0, 0)
    )


# ---------------------------------------------------------------------------
# the exterior-square correspondence
# ---------------------------------------------------------------------------
#
# On the second exterior power of the symplectic 4-space, the wedge
# pairing x ∧ y = <x, y> vol is a split symmetric form; the symplectic
# form itself is an anisotropic bivector w, and its orthogonal
# complement V5 is a 5-dimensional quadratic space of the same
# isometry class as the vertex-lattice ambient (after scaling by the
# unit 2u).  A building vertex with valid representative T maps to the
# unique vertex-lattice normalization of (wedge^2 T) ∩ V5.  This gives
# an explicit candidate for the ball isomorphism which is then verified
# edge by edge; the generic color-refinement search cannot cope with
# the radius-2 balls (their links are generalized quadrangles, which
# defeat 1-dimensional refinement).

_WEDGE_INDEX = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def wedge_ambient(p: int) -> QpAmbient:
    """The 5-space orthogonal to the symplectic bivector inside the
    exterior square, with Gram scaled by 2u to match the vertex-lattice
    ambient isometry class (split, determinant class -u p, Hasse 1)."""
    from .gf import smallest_nonresidue

    u = smallest_nonresidue(p)
    c = 2 * u * p
    # basis c1..c5 = b12, b13, (b14 - b23), b24, b34 where the wedge
    # pairing pairs b12<->b34, b13<->b24 (sign -1) and Q(b14 - b23) = -2
    G = [
        [0, 0, 0, 0, Fraction(c, 2)],
        [0, 0, 0, Fraction(-c, 2), 0],
        [0, 0, -c, 0, 0],
        [0, Fraction(-c, 2), 0, 0, 0],
        [Fraction(c, 2), 0, 0, 0, 0],
    ]
    return QpAmbient(p, tuple(tuple(x * 1 for x in r) for r in G))


def _wedge_rows(rows):
    """The six pairwise wedges of four vectors, in the b-coordinates
    (b12, b13, b14, b23, b24, b34)."""
    out = []
    for (i, j) in _WEDGE_INDEX:
        t, s = rows[i], rows[j]
        coords = []
        for (k, l) in _WEDGE_INDEX:
            coords.append(Fraction(t[k]) * s[l] - Fraction(t[l]) * s[k])
        out.append(coords)
    return out


def lambda_of(T: PLattice, ambient5: QpAmbient) -> PLattice:
    """Image of a building lattice under the exterior-square map:
    the vertex-lattice normalization of (wedge^2 T) ∩ w-perp."""
    from . import padic
    from .latqp import val_p

    p = T.p
    wedge = _wedge_rows(T.basis_rows())
    # functional x -> x_b14 + x_b23 (pairing with the bivector w)
    phis = [row[2] + row[3] for row in wedge]
    piv = min(range(6), key=lambda i: val_p(phis[i], p) if phis[i] else 10 ** 9)
    assert phis[piv] != 0
    kernel_rows = []
    for j in range(6):
        if j == piv:
            continue
        f = Fraction(phis[j]) / phis[piv]
        assert val_p(f, p) >= 0 if f else True
        vec = [a - f * b for a, b in zip(wedge[j], wedge[piv])]
        # coordinates in the c-basis: (b12, b13, b14, b24, b34)
        assert vec[2] + vec[3] == 0
        kernel_rows.append((vec[0], vec[1], vec[2], vec[4], vec[5]))
    X = PLattice.from_rows(ambient5, kernel_rows)
    # normalize to the unique vertex lattice among p-power scalings of
    # X and its dual
    found = []
    for base in (X, X.dual()):
        for a in range(-4, 5):
            L = base.rescale(a)
            D = L.dual()
            if L.contains(D) and D.contains(L.rescale(1)):
                found.append(L)
    dedup = {L.key(): L for L in found}
    assert len(dedup) == 1, "exterior-square image has no unique vertex normalization"
    return next(iter(dedup.values()))


def exceptional_correspondence(p: int, radius: int) -> IsoResult:
    """Explicit ball isomorphism via the exterior-square map, verified
    combinatorially: bijective on vertices, type-respecting
    ({0,4} -> 5, 2 -> 1) and edge-preserving both ways."""
    amb5 = wedge_ambient(p)
    _, T0 = standard_V0(p)
    v0 = vertex_of(T0)
    bball = building_ball(v0, radius)
    root_image = lambda_of(v0.rep, amb5)
    from . import padic

    vball = padic.vrt_ball(root_image, radius)
    index2 = {}
    for i in range(vball.n):
        index2[vball.payloads[i].key()] = i
    mapping = {}
    for i in range(bball.n):
        w = bball.payloads[i]
        img = lambda_of(w.rep, amb5)
        j = index2.get(img.key())
        if j is None:
            return IsoResult(None, f"image of vertex {i} not in the target ball")
        if vball.types[j] != {0: 5, 4: 5, 2: 1}[bball.types[i]]:
            return IsoResult(None, f"type mismatch at vertex {i}")
        mapping[i] = j
    if len(set(mapping.values())) != bball.n or vball.n != bball.n:
        return IsoResult(None, "exterior-square map is not bijective on the ball")
    for a in range(bball.n):
        for b in bball.adj[a]:
            if mapping[b] not in vball.adj[mapping[a]]:
                return IsoResult(None, f"edge ({a},{b}) not preserved")
    if bball.num_edges() != vball.num_edges():
        return IsoResult(None, "edge counts differ")
    return IsoResult(mapping)
