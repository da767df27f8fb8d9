"""Quadratic forms over Q_p and vertex lattices.

The five-dimensional quadratic space carrying the vertex lattices is
realized on the "split model" basis w_1..w_5 with Gram
p^(-1) * blockdiag([-u], [[0,1],[1,0]], [[0,1],[1,0]]), u the smallest
positive nonresidue mod p.  This is isometric to the diagonal form
(-u p, -1, u, -1, u) for every odd p (same determinant class -u p and
Hasse invariant 1), and it makes the three standard vertex lattices of
types 1, 3, 5 coordinate lattices.

A vertex lattice is L with pL ⊆ L^dual ⊆ L; its type t = dim L/L^dual
is odd.  The two finite quadratic quotients attached to it are
    head quotient  L / L^dual      with form  -u p Q  mod p,
    base quotient  L^dual / p L    with form       Q  mod p,
and neighbor enumeration runs through isotropic subspaces of these.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import fqlin, quadspace
from .errors import InvalidInput, ResourceLimit, Unsupported
from .gf import GF, smallest_nonresidue
from .latqp import PLattice, QpAmbient, adapted_quotient, red_mod_p, val_p
from .tgraph import TypedGraph


# ---------------------------------------------------------------------------
# symbols and invariants
# ---------------------------------------------------------------------------

def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise InvalidInput("legendre symbol of 0")
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def _unit_and_val(x, p: int):
    f = Fraction(x)
    if f == 0:
        raise InvalidInput("nonzero rational expected")
    v = val_p(f, p)
    unit = f / Fraction(p) ** v
    return unit, v


def hilbert_symbol(a, b, p: int) -> int:
    """(a, b)_p for odd p, via valuations and Legendre symbols."""
    if p == 2:
        raise Unsupported("p = 2 not supported")
    ua, va = _unit_and_val(a, p)
    ub, vb = _unit_and_val(b, p)
    ra = ua.numerator * pow(ua.denominator, -1, p) % p
    rb = ub.numerator * pow(ub.denominator, -1, p) % p
    out = 1
    if va % 2 and vb % 2:
        out *= legendre(-1, p)
    if vb % 2:
        out *= legendre(ra, p)
    if va % 2:
        out *= legendre(rb, p)
    return out


def square_class(x, p: int) -> str:
    """Square class of a nonzero rational in Q_p^x / squares: 1, u, p, up."""
    unit, v = _unit_and_val(x, p)
    r = unit.numerator * pow(unit.denominator, -1, p) % p
    unit_tag = "" if legendre(r, p) == 1 else "u"
    p_tag = "p" if v % 2 else ""
    return (unit_tag + p_tag) or "1"


@dataclass(frozen=True)
class PadicDiagForm:
    """Diagonal quadratic form over Q_p; entries are nonzero rationals."""

    p: int
    entries: tuple
    distinguished: int | None = None  # index of a marked basis vector

    def __post_init__(self):
        e = tuple(Fraction(x) for x in self.entries)
        if any(x == 0 for x in e):
            raise InvalidInput("diagonal entries must be nonzero")
        object.__setattr__(self, "entries", e)

    @property
    def dim(self):
        return len(self.entries)

    def scaled(self, c) -> "PadicDiagForm":
        return PadicDiagForm(self.p, tuple(Fraction(c) * x for x in self.entries))

    def hasse(self) -> int:
        out = 1
        n = self.dim
        for i in range(n):
            for j in range(i + 1, n):
                out *= hilbert_symbol(self.entries[i], self.entries[j], self.p)
        return out

    def disc_class(self) -> str:
        prod = Fraction(1)
        for x in self.entries:
            prod *= x
        return square_class(prod, self.p)


def hasse_discriminant(form: PadicDiagForm):
    """(Hasse invariant, square-class tag of the determinant)."""
    return form.hasse(), form.disc_class()


def standard_spaces(p: int):
    """The six-dimensional quadratic form diag(p, -u p, -1, u, -1, u)
    with the norm-p vector marked at index 0, and the five-dimensional
    form obtained by dropping it (u = smallest positive nonresidue)."""
    if p == 2:
        raise Unsupported("odd p expected")
    u = smallest_nonresidue(p)
    six = PadicDiagForm(p, (p, -u * p, -1, u, -1, u), distinguished=0)
    five = PadicDiagForm(p, (-u * p, -1, u, -1, u))
    return six, five


# ---------------------------------------------------------------------------
# vertex lattices
# ---------------------------------------------------------------------------

def vertex_ambient(p: int) -> QpAmbient:
    """Split model of the five-dimensional space (see module docstring)."""
    u = smallest_nonresidue(p)
    q = Fraction(1, p)
    G = [
        [-u * q, 0, 0, 0, 0],
        [0, 0, 0, 0, q],
        [0, 0, 0, q, 0],
        [0, 0, q, 0, 0],
        [0, q, 0, 0, 0],
    ]
    return QpAmbient(p, tuple(tuple(r) for r in G))


def standard_vertex_lattices(p: int) -> dict:
    """The coordinate vertex lattices of types 1, 3, 5 in the split model."""
    amb = vertex_ambient(p)
    rows5 = [[1 if j == i else 0 for j in range(5)] for i in range(5)]
    rows3 = [r[:] for r in rows5]
    rows3[4] = [0, 0, 0, 0, p]
    rows1 = [r[:] for r in rows3]
    rows1[3] = [0, 0, 0, p, 0]
    return {
        1: PLattice.from_rows(amb, rows1),
        3: PLattice.from_rows(amb, rows3),
        5: PLattice.from_rows(amb, rows5),
    }


@dataclass(frozen=True)
class VertexLatticeInfo:
    lattice: PLattice
    dual: PLattice
    type: int
    omega0: quadspace.BilinearSpace  # L/L^dual with form -u p Q mod p
    omega0_rows: tuple  # rows of L projecting to the omega0 basis
    omega0p: quadspace.BilinearSpace | None  # L^dual/pL with form Q mod p
    omega0p_rows: tuple

    def key(self):
        return self.lattice.key()


def vertex_classify(L: PLattice):
    """VertexLatticeInfo if pL ⊆ L^dual ⊆ L, else None."""
    p = L.p
    D = L.dual()
    if not L.contains(D) or not D.contains(L.rescale(1)):
        return None
    t = L.quotient_length(D)
    assert t % 2 == 1, "vertex lattice types are odd"
    u = smallest_nonresidue(p)
    Fp = GF(p)

    if t == 5:  # D = pL: the basis rows themselves span the quotient
        head_rows = L.basis_rows()
    else:
        head = adapted_quotient(L, D)
        head_rows = tuple(row for a, row in head if a == 1)
    assert len(head_rows) == t
    amb = L.ambient
    gram0 = tuple(
        tuple(
            red_mod_p(Fraction(-u * p) * amb.bilinear(r1, r2), p)
            for r2 in head_rows
        )
        for r1 in head_rows
    )
    omega0 = quadspace.BilinearSpace(Fp, gram0)

    omega0p = None
    base_rows = ()
    if t < 5:
        base = adapted_quotient(D, L.rescale(1))
        base_rows = tuple(row for a, row in base if a == 1)
        assert len(base_rows) == 5 - t
        gram0p = tuple(
            tuple(red_mod_p(amb.bilinear(r1, r2), p) for r2 in base_rows)
            for r1 in base_rows
        )
        omega0p = quadspace.BilinearSpace(Fp, gram0p)
    return VertexLatticeInfo(L, D, t, omega0, head_rows, omega0p, base_rows)


def _lift_rows(subspace_basis, quotient_rows, p):
    """Lift an F_p row-span through the quotient basis to ambient vectors."""
    out = []
    for row in subspace_basis:
        vec = None
        for c, qrow in zip(row, quotient_rows):
            if c:
                term = tuple(Fraction(c) * x for x in qrow)
                vec = term if vec is None else tuple(a + b for a, b in zip(vec, term))
        out.append(vec)
    return out


def _down_neighbor(info: VertexLatticeInfo, P):
    """Sublattice matching the isotropic subspace P of the head quotient.

    The sublattice with dual = (p L or L^dual) + lift(P) equals
    (base lattice) + lift(P^perp): dualizing the extra line conditions
    is an F_p perp computation, no p-adic dual needed.
    """
    L = info.lattice
    perp = info.omega0.perp(P.basis)
    if info.type == 5:
        # integer fast path at scale L.scale: pL has rows p*H, and the
        # quotient basis rows are the hnf rows themselves
        H = L.hnf
        p = L.p
        rows = [[p * x for x in r] for r in H]
        for c in perp:
            rows.append([sum(ci * hx for ci, hx in zip(c, col)) for col in zip(*H)])
        return PLattice.from_rows(L.ambient, rows, extra_scale=L.scale)
    lifts = _lift_rows(perp, info.omega0_rows, L.p)
    return PLattice.from_rows(L.ambient, list(info.dual.basis_rows()) + lifts)


def neighbors(info: VertexLatticeInfo, direction: str, target_type: int):
    """Adjacent vertex lattices through the quotient-space bijections.

    * "up": overlattices of type `target_type` (only 5 is possible),
      via subspaces W = W^perp of the base quotient.
    * "down": sublattices of type `target_type`, via isotropic subspaces
      of the head quotient of dimension (t - target_type)/2.
    Returns [] for impossible combinations.
    """
    L, t = info.lattice, info.type
    p = L.p
    out = []
    if direction == "up":
        if target_type != 5 or t == 5:
            return []
        half = (5 - t) // 2  # Lagrangian dimension in the base quotient
        for W in quadspace.enumerate_isotropic_subspaces(info.omega0p, half):
            lifts = _lift_rows(W.basis, info.omega0p_rows, p)
            bigger = PLattice.from_rows(
                L.ambient, list(L.rescale(1).basis_rows()) + lifts
            ).rescale(-1)
            out.append(bigger)
    elif direction == "down":
        if (t, target_type) in ((5, 3), (5, 1), (3, 1)):
            d = (t - target_type) // 2
            for P in quadspace.enumerate_isotropic_subspaces(info.omega0, d):
                out.append(_down_neighbor(info, P))
        else:
            return []
    else:
        raise InvalidInput("direction must be 'up' or 'down'")
    dedup = {M.key(): M for M in out}
    return sorted(dedup.values(), key=lambda M: M.key())


# ---------------------------------------------------------------------------
# the ball of the vertex-lattice complex
# ---------------------------------------------------------------------------

def _vertex5_neighbors(info: VertexLatticeInfo):
    """(adjacent type 5 with the type-3 edge label, contained type 1).

    For each isotropic line l of the head quotient, the type-3 meet is
    L3 = pL + lift(l^perp), and the second type-5 lattice over L3 is
    L3 + (z/p) where z = lift(l) + t p g is the unique combination (g a
    basis vector not orthogonal to l mod p) with Q(z) ≡ 0 mod p: the
    two isotropic lines of the hyperbolic plane L3^dual / p L3 are pL
    and z.
    """
    L = info.lattice
    p = L.p
    F = info.omega0.field
    amb = L.ambient
    H = L.hnf
    e = L.scale
    Bi = amb._gram_scaled
    s = amb._denom_pow

    def q_int(v):
        acc = 0
        for i, vi in enumerate(v):
            if vi:
                row = Bi[i]
                acc += vi * sum(row[j] * vj for j, vj in enumerate(v) if vj)
        return acc

    t5 = []
    for line in quadspace.enumerate_isotropic_subspaces(info.omega0, 1):
        L3 = _down_neighbor(info, line)
        lbar = line.basis[0]
        lint = [sum(ci * hx for ci, hx in zip(lbar, col)) for col in zip(*H)]
        pairing = fqlin.matvec(F, info.omega0.gram, lbar)
        g_idx = next(i for i, x in enumerate(pairing) if x)
        gint = H[g_idx]
        need = s + 2 * e + 1
        z_cands = []
        for t in range(p):
            z = [a + t * p * b for a, b in zip(lint, gint)]
            if val_p(q_int(z), p) >= need:
                z_cands.append(z)
        assert len(z_cands) == 1, "hyperbolic plane must have exactly 2 isotropic lines"
        zint = z_cands[0]
        # other = L3 + Z_p * (z / p), all at a common scale
        s2 = max(L3.scale, e + 1)
        rows = [[x * p ** (s2 - L3.scale) for x in r] for r in L3.hnf]
        rows.append([x * p ** (s2 - e - 1) for x in zint])
        other = PLattice.from_rows(amb, rows, extra_scale=s2)
        t5.append((other, L3))
    t1 = neighbors(info, "down", 1)
    return t5, t1


def vrt_ball(L0: PLattice, radius: int) -> TypedGraph:
    """Ball of the type-1/type-5 incidence graph around a type-5 lattice.

    Vertices carry their type; edges between two type-5 vertices carry
    the type-3 intersection lattice as label.
    """
    if radius not in (1, 2):
        raise ResourceLimit("radius must be 1 or 2")
    if radius == 2 and L0.p > 5:
        raise ResourceLimit("radius-2 balls computed for p <= 5 only")
    info0 = vertex_classify(L0)
    if info0 is None or info0.type != 5:
        raise InvalidInput("base point must be a type-5 vertex lattice")

    def expand(L, typ):
        info = vertex_classify(L)
        if typ == 5:
            t5, t1 = _vertex5_neighbors(info)
            return [(M, 5, L3) for (M, L3) in t5] + [(M, 1, None) for M in t1]
        return [(M, 5, None) for M in neighbors(info, "up", 5)]

    g = TypedGraph()
    objects = {}

    def vid(L, typ):
        k = L.key()
        if k not in objects:
            objects[k] = g.add_vertex(typ, payload=L)
        return objects[k]

    vid(L0, 5)
    dist = {L0.key(): 0}
    frontier = [(L0, 5)]
    neighbor_lists = {}
    for step in range(radius):
        new_frontier = []
        for L, typ in frontier:
            nbrs = expand(L, typ)
            neighbor_lists[L.key()] = nbrs
            for M, mtyp, _ in nbrs:
                if M.key() not in dist:
                    dist[M.key()] = step + 1
                    new_frontier.append((M, mtyp))
                    vid(M, mtyp)
        frontier = new_frontier
    # expand the last frontier too so edges between boundary vertices
    # are seen (induced subgraph on the ball)
    for L, typ in frontier:
        neighbor_lists[L.key()] = expand(L, typ)

    for k, nbrs in neighbor_lists.items():
        a = objects[k]
        for M, _, label in nbrs:
            mk = M.key()
            if mk in objects:
                lbl = 3 if label is not None else None
                g.add_edge(a, objects[mk], label_type=lbl, label_payload=label)
    return g
