"""Homology, core-curve relations, pinching and the degeneration cases.

Cell structure of a diagram surface: the zeros are the vertices; the edges
are the saddle connections (oriented left to right) together with one
vertical arc per cylinder, running from the left endpoint of its first bottom
label to the left endpoint of its first top label; each cylinder is one
2-cell.  Cutting a cylinder along its arc gives a rectangle whose boundary is
bottom word, arc, reversed top word, reversed arc, hence
``boundary(cell_i) = sum(bottom_i) - sum(top_i)``.

Every core curve is oriented left to right, i.e. it is homologous to the sum
of its bottom labels.

Three-cylinder case names follow the usual split by homology: the core
curves span a Lagrangian (3.I), two of them are homologous (3.III), or
neither (3.II).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from flatlas import intlinalg as il
from flatlas.diagrams import CylinderDiagram, canonical_key, check_structure, diagram_genus, parse_diagram
from flatlas.errors import InvariantError, UnknownCase


@dataclass(frozen=True)
class HomologyModel:
    n_vertices: int
    n_labels: int
    n_cylinders: int
    d1: tuple[tuple[int, ...], ...]  # vertices x (labels + arcs)
    d2: tuple[tuple[int, ...], ...]  # (labels + arcs) x cylinders
    core_curves: tuple[tuple[int, ...], ...]  # one chain per cylinder
    h1_basis: tuple[tuple[int, ...], ...]
    torsion: tuple[int, ...]

    @property
    def n_edges(self) -> int:
        return self.n_labels + self.n_cylinders

    @property
    def euler_characteristic(self) -> int:
        return self.n_vertices - self.n_edges + self.n_cylinders

    @property
    def rank(self) -> int:
        return len(self.h1_basis)

    @property
    def genus(self) -> int:
        return self.rank // 2


def homology_model(d: CylinderDiagram) -> HomologyModel:
    check_structure(d)
    E, k = d.E, d.k
    V = len(d.vertices)
    ne = E + k
    d1 = [[0] * ne for _ in range(V)]
    for s in range(E):
        d1[d.right_vertex(s)][s] += 1
        d1[d.vertex_of[s]][s] -= 1
    for i, (b, t) in enumerate(d.cylinders):
        d1[d.vertex_of[t[0]]][E + i] += 1
        d1[d.vertex_of[b[0]]][E + i] -= 1
    d2 = [[0] * k for _ in range(ne)]
    for i, (b, t) in enumerate(d.cylinders):
        for s in b:
            d2[s][i] += 1
        for s in t:
            d2[s][i] -= 1
    if any(il.matmul(d1, d2)[v][i] for v in range(V) for i in range(k)):
        raise InvariantError("boundary of a boundary is not zero")
    torsion = tuple(x for x in il.invariant_factors(d2, k) if x != 1)

    # Basis of H1: cycles completing the boundaries to a basis of ker d1.
    cycles = il.right_kernel(d1, ne)  # rows, saturated
    m = len(cycles)
    coords = _coordinates(cycles, il.transpose(d2, k), ne)  # boundaries in cycle coordinates
    diag, _, _, q_inv = il.smith_form(coords, m)
    rho = len(diag)
    basis = []
    for row in q_inv[rho:]:
        chain = [sum(c * cyc[e] for c, cyc in zip(row, cycles)) for e in range(ne)]
        basis.append(tuple(chain))
    core = []
    for b, _ in d.cylinders:
        chain = [0] * ne
        for s in b:
            chain[s] += 1
        core.append(tuple(chain))
    return HomologyModel(
        V, E, k, tuple(map(tuple, d1)), tuple(map(tuple, d2)), tuple(core), tuple(basis), torsion
    )


def _coordinates(basis: list[list[int]], vectors: list[list[int]], n: int) -> list[list[int]]:
    """Integer coordinates of ``vectors`` in a saturated lattice ``basis``."""
    out = []
    for v in vectors:
        ker = il.left_kernel(basis + [list(v)], n)
        sol = next((row for row in ker if abs(row[-1]) == 1), None)
        if sol is None:
            if not any(v):
                out.append([0] * len(basis))
                continue
            raise InvariantError("vector not in lattice")
        sign = -sol[-1]
        out.append([sign * c for c in sol[:-1]])
    return out


@lru_cache(maxsize=4096)
def _relations_cached(d: CylinderDiagram) -> tuple[int, tuple[tuple[int, ...], ...]]:
    model = homology_model(d)
    k = d.k
    ne = model.n_edges
    # columns: core curves then 2-cells; rows: edges
    cols = [list(c) for c in model.core_curves] + [[-model.d2[e][i] for e in range(ne)] for i in range(k)]
    mat = il.transpose(cols, ne)
    ker = il.right_kernel(mat, len(cols))
    proj = [row[:k] for row in ker]
    rels = il.hermite_normal_form(proj, k)
    return k - len(rels), tuple(tuple(r) for r in rels)


def core_curve_relations(d: CylinderDiagram) -> tuple[int, list[list[int]]]:
    """Rank of the span of the core curves and a Hermite basis of their relations.

    A relation ``a`` means ``sum(a[i] * gamma_i) == 0`` in homology.  The basis
    rows have positive leading coefficients.
    """
    rk, rels = _relations_cached(d)
    return rk, [list(r) for r in rels]


def relation_holds(d: CylinderDiagram, coeffs: list[int]) -> bool:
    _, rels = _relations_cached(d)
    return il.in_lattice(coeffs, [list(r) for r in rels])


def homologous_pairs(d: CylinderDiagram) -> list[tuple[int, int]]:
    """Pairs ``(i, j)``, ``i < j``, with ``gamma_i = +-gamma_j``."""
    out = []
    for i in range(d.k):
        for j in range(i + 1, d.k):
            for sign in (-1, 1):
                v = [0] * d.k
                v[i] = 1
                v[j] = sign
                if relation_holds(d, v):
                    out.append((i, j))
                    break
    return out


# --- pinching --------------------------------------------------------------------


@dataclass(frozen=True)
class Component:
    genus: int
    boundary: int
    zeros: tuple[int, ...]

    @property
    def signature(self) -> tuple[int, int]:
        return self.genus, self.boundary


@dataclass(frozen=True)
class StableCurve:
    components: tuple[Component, ...]
    # (component of the bottom side, component of the top side) per cylinder
    dual_edges: tuple[tuple[int, int], ...]
    # labels in each component
    label_sets: tuple[frozenset[int], ...]

    def types(self) -> list[tuple[int, int]]:
        return sorted(c.signature for c in self.components)

    def loops(self) -> list[int]:
        return [i for i, (a, b) in enumerate(self.dual_edges) if a == b]

    def component_relation(self, c: int) -> list[int]:
        """Relation ``sum(bottoms in c) - sum(tops in c)`` among core curves."""
        v = [0] * len(self.dual_edges)
        for i, (a, b) in enumerate(self.dual_edges):
            v[i] += int(a == c) - int(b == c)
        return v


def pinch(d: CylinderDiagram) -> StableCurve:
    """Pinch every core curve; components are the pieces of the separatrix graph."""
    check_structure(d)
    comp_of: dict[int, int] = {}
    sets = []
    for s in range(d.E):
        if s in comp_of:
            continue
        c = len(sets)
        members = {s}
        stack = [s]
        while stack:
            x = stack.pop()
            for y in (d.bot_next[x], d.top_next[x]):
                if y not in members:
                    members.add(y)
                    stack.append(y)
        for x in members:
            comp_of[x] = c
        sets.append(frozenset(members))
    comps = []
    for c, members in enumerate(sets):
        verts = [cyc for cyc in d.vertices if cyc[0] in members]
        n_bound = sum(1 for b, t in d.cylinders if b[0] in members) + sum(
            1 for b, t in d.cylinders if t[0] in members
        )
        chi = len(verts) - len(members)
        twice_genus = 2 - n_bound - chi
        if twice_genus % 2 or twice_genus < 0:
            raise InvariantError("component has non-integral genus")
        zeros = tuple(sorted((len(v) - 1 for v in verts), reverse=True))
        comps.append(Component(twice_genus // 2, n_bound, zeros))
    edges = tuple((comp_of[b[0]], comp_of[t[0]]) for b, t in d.cylinders)
    return StableCurve(tuple(comps), edges, tuple(sets))


# --- cases ---------------------------------------------------------------------------

# The four six-cylinder diagrams in H(1^4), in their usual cylinder numbering.
SIX_CYLINDER_DIAGRAMS = {
    "6.a": "0-5 1-6 2-0,1 5,3-2,7 6,4-3 7-4",
    "6.b": "3-1 5-2 4-0,3 2,6-4,5 7,1-6 0-7",
    "6.c": "6-1 7-2 5,2-6,7 3-0 4-5 0,1-3,4",
    "6.d": "6-1 7-2 5,0-6,7 3-0 4-5 1,2-3,4",
}


@lru_cache(maxsize=None)
def six_cylinder_registry() -> dict[str, str]:
    return {canonical_key(parse_diagram(text)): name for name, text in SIX_CYLINDER_DIAGRAMS.items()}


def split_sign_counts(relation: list[int]) -> tuple[int, int]:
    pos = sum(1 for x in relation if x > 0)
    neg = sum(1 for x in relation if x < 0)
    return min(pos, neg), max(pos, neg)


def classify_case(d: CylinderDiagram) -> str:
    """Name of the degeneration case of a diagram; ``other(g,k)`` outside genus 3."""
    g = diagram_genus(d)
    k = d.k
    if g != 3 or k < 3 or k > 6:
        return f"other({g},{k})"
    if k == 3:
        rk, _ = core_curve_relations(d)
        if rk == 3:
            return "3.I"
        if rk == 2:
            return "3.III" if homologous_pairs(d) else "3.II"
        raise UnknownCase(f"3-cylinder diagram {d} has core-curve rank {rk}")
    sc = pinch(d)
    types = sc.types()
    loops = len(sc.loops())
    if k == 4:
        if types == [(0, 4), (0, 4)] and loops == 0:
            _, rels = core_curve_relations(d)
            split = split_sign_counts(rels[0]) if len(rels) == 1 else None
            if split == (1, 3):
                return "4.I.a"
            if split == (2, 2):
                return "4.I.b"
        elif types == [(0, 4), (0, 4)] and loops == 2 and len({sc.dual_edges[i][0] for i in sc.loops()}) == 2:
            return "4.II"
        elif types == [(0, 3), (0, 5)] and loops == 1:
            return "4.III"
        elif types == [(0, 3), (0, 3), (1, 2)] and loops == 0:
            return "4.IV"
    elif k == 5:
        if types == [(0, 3), (0, 3), (0, 4)]:
            if loops == 0:
                return "5.I"
            if loops == 1:
                return "5.II"
    elif k == 6:
        name = six_cylinder_registry().get(canonical_key(d))
        if name is not None:
            return name
    raise UnknownCase(f"genus-3 diagram {d} matches no case (components {types}, {loops} loops)")
