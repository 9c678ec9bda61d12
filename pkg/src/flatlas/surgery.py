"""Collapsing and inserting simple cylinders.

Collapsing a simple cylinder with bottom label ``a`` and top label ``b``
glues the saddle connection below it (``a``) to the one above it (``b``) once
the twist lines its two zeros up vertically.  The two labels become a single
label.  Its zeros, of orders ``m1`` and ``m2``, meet and form one zero of
order ``m1 + m2``: the cone angles add up to ``2pi(m1+1) + 2pi(m2+1)`` and the
segment that disappears removes ``2pi``.
"""

from __future__ import annotations

from flatlas.diagrams import CylinderDiagram, check_diagram, check_structure, diagram_stratum
from flatlas.errors import BadIndex, BadSplit, NotRealizable, NotSimple, SameZero, SharedZeroPair
from flatlas.origami import Origami, horizontal_cylinders, twist_cylinder


def _relabel_compact(cyls: list[tuple[tuple[int, ...], tuple[int, ...]]]) -> CylinderDiagram:
    used = sorted({s for b, _ in cyls for s in b})
    new = {s: j for j, s in enumerate(used)}
    return CylinderDiagram(tuple((tuple(new[s] for s in b), tuple(new[s] for s in t)) for b, t in cyls))


def boundary_zeros(d: CylinderDiagram, i: int) -> tuple[int, int]:
    """Vertices on the bottom and top of a simple cylinder."""
    b, t = d.cylinders[i]
    return d.vertex_of[b[0]], d.vertex_of[t[0]]


def _check_simple(d: CylinderDiagram, i: int) -> tuple[int, int]:
    if not 0 <= i < d.k:
        raise BadIndex(f"no cylinder {i}")
    b, t = d.cylinders[i]
    if len(b) != 1 or len(t) != 1 or b == t:
        raise NotSimple(f"cylinder {i} is not simple")
    return b[0], t[0]


def collapse_simple_cylinder(d: CylinderDiagram, i: int) -> CylinderDiagram:
    return collapse_tracking_label(d, i)[0]


def collapse_tracking_label(d: CylinderDiagram, i: int) -> tuple[CylinderDiagram, int]:
    """Collapse cylinder ``i`` and report the label of the merged saddle connection."""
    check_diagram(d)
    a, b = _check_simple(d, i)
    za, zb = boundary_zeros(d, i)
    if za == zb:
        raise SameZero(f"both sides of cylinder {i} touch the same zero")
    cyls = []
    for j, (bot, top) in enumerate(d.cylinders):
        if j == i:
            continue
        bot = tuple(a if s == b else s for s in bot)
        cyls.append((bot, top))
    return _relabel_compact(cyls), sorted({s for bot, _ in cyls for s in bot}).index(a)


def insert_simple_cylinder(d: CylinderDiagram, e: int, split: tuple[int, int] | None = None) -> CylinderDiagram:
    """Cut along a saddle connection from a zero to itself and glue in a simple cylinder.

    The label ``e`` keeps its place on top of the cylinder below and becomes
    the bottom of the new cylinder; a fresh label takes its place on the
    bottom of the cylinder above and becomes the new top.  The zero splits in
    a way fixed by the ribbon structure; ``split`` is checked against it.
    """
    check_diagram(d)
    if not 0 <= e < d.E:
        raise BadIndex(f"no label {e}")
    z = d.vertex_of[e]
    if d.right_vertex(e) != z:
        raise NotRealizable(f"label {e} joins two different zeros")
    m = len(d.vertices[z]) - 1
    if split is not None:
        m1, m2 = split
        if m1 < 1 or m2 < 1 or m1 + m2 != m:
            raise BadSplit(f"split {split} does not add up to the order {m}")
    fresh = d.E
    cyls = [(tuple(fresh if s == e else s for s in bot), top) for bot, top in d.cylinders]
    cyls.append(((e,), (fresh,)))
    out = CylinderDiagram(tuple(cyls))
    check_structure(out)
    zb, zt = boundary_zeros(out, out.k - 1)
    if zb == zt:
        raise NotRealizable(f"cutting along {e} does not separate the zero")
    orders = sorted((len(out.vertices[zb]) - 1, len(out.vertices[zt]) - 1))
    if 0 in orders:
        raise NotRealizable(f"cutting along {e} leaves a marked point")
    if split is not None and orders != sorted(split):
        raise NotRealizable(f"cutting along {e} splits the zero as {tuple(orders)}, not {split}")
    return out


def insertion_split(d: CylinderDiagram, e: int) -> tuple[int, int] | None:
    """Orders produced by inserting at ``e``, or ``None`` when impossible."""
    try:
        out = insert_simple_cylinder(d, e)
    except (NotRealizable, BadIndex):
        return None
    zb, zt = boundary_zeros(out, out.k - 1)
    return len(out.vertices[zb]) - 1, len(out.vertices[zt]) - 1


def collapse_similar_pair(d: CylinderDiagram, i: int, j: int) -> CylinderDiagram:
    """Collapse two simple cylinders whose zero pairs differ, ``i`` first."""
    check_diagram(d)
    if i == j:
        raise BadIndex("need two different cylinders")
    _check_simple(d, i)
    _check_simple(d, j)
    pi, pj = set(boundary_zeros(d, i)), set(boundary_zeros(d, j))
    if pi == pj:
        raise SharedZeroPair(f"cylinders {i} and {j} bound the same pair of zeros")
    first = collapse_simple_cylinder(d, i)
    return collapse_simple_cylinder(first, j - 1 if j > i else j)


def simple_cylinders(d: CylinderDiagram) -> list[int]:
    return [i for i, (b, t) in enumerate(d.cylinders) if len(b) == 1 and len(t) == 1 and b != t]


def collapsible_cylinders(d: CylinderDiagram) -> list[int]:
    """Simple cylinders whose two boundary zeros differ."""
    return [i for i in simple_cylinders(d) if len(set(boundary_zeros(d, i))) == 2]


def collapse_origami_cylinder(o: Origami, i: int) -> Origami:
    """Collapse a simple horizontal cylinder of an origami.

    The cylinder is first sheared so its top zero sits right above its bottom
    zero; its squares are then removed and the square below each bottom unit
    edge is glued to the square above the matching top unit edge.  Remaining
    squares keep their relative order.
    """
    cyls = horizontal_cylinders(o)
    if not 0 <= i < len(cyls):
        raise BadIndex(f"no horizontal cylinder {i}")
    c = cyls[i]
    if not c.is_simple or c.bottom == c.top:
        raise NotSimple(f"cylinder {i} is not simple")
    if o.vertex_of[c.bottom[0]] == o.vertex_of[c.top[0]]:
        raise SameZero(f"both sides of cylinder {i} touch the same zero")
    o = twist_cylinder(o, i, -c.twist)
    c = horizontal_cylinders(o)[i]
    bottom, top = c.rows[0], c.rows[-1]
    u_inv = o.u.inverse()
    u = list(o.u.images)
    for x in range(c.circumference):
        u[u_inv(bottom[x])] = o.u(top[x])
    keep = [x for x in range(o.n) if x not in c.squares]
    new = {x: j for j, x in enumerate(keep)}
    r = [new[o.r(x)] for x in keep]
    uu = [new[u[x]] for x in keep]
    return Origami.from_images(r, uu)


def collapse_report(d: CylinderDiagram, i: int) -> dict:
    from flatlas.diagrams import canonical_key

    after = collapse_simple_cylinder(d, i)
    return {
        "before": {"key": canonical_key(d), "stratum": str(diagram_stratum(d)[0])},
        "after": {"key": canonical_key(after), "stratum": str(diagram_stratum(after)[0]), "diagram": str(after)},
    }
