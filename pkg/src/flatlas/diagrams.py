"""Cylinder diagrams.

A diagram on ``E`` saddle labels is a list of cylinders, each given by the
cyclic word of labels on its bottom boundary and on its top boundary, both
read left to right.  Every label occurs once among the bottoms and once among
the tops.  Text form: ``"0-1 1,2-0,2"``.

Write ``bot_next`` and ``top_next`` for the successor of a label in its bottom
and top word.  The right endpoint of ``s`` is the left endpoint of both
``bot_next(s)`` and ``top_next(s)``, so the zeros are the cycles of
``top_next o bot_next^-1`` acting on labels (a label stands for its left
endpoint), and a cycle of length ``m+1`` is a zero of order ``m``.
"""

from __future__ import annotations

import itertools
import os
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from flatlas.errors import (
    DuplicateLabel,
    InconsistentGeometry,
    InputError,
    MarkedPoint,
    MissingLabel,
    NoPositiveWidths,
    ParseError,
    Disconnected,
)
from flatlas.origami import (
    Origami,
    Permutation,
    StratumSignature,
    ValidationReport,
    check_origami,
    marked_cylinders,
)

Word = tuple[int, ...]


@dataclass(frozen=True)
class CylinderDiagram:
    cylinders: tuple[tuple[Word, Word], ...]

    def __post_init__(self) -> None:
        cyls = tuple((tuple(int(x) for x in b), tuple(int(x) for x in t)) for b, t in self.cylinders)
        object.__setattr__(self, "cylinders", cyls)

    @property
    def k(self) -> int:
        return len(self.cylinders)

    @property
    def E(self) -> int:
        return sum(len(b) for b, _ in self.cylinders)

    @cached_property
    def bottom_cyl(self) -> dict[int, int]:
        return {s: i for i, (b, _) in enumerate(self.cylinders) for s in b}

    @cached_property
    def top_cyl(self) -> dict[int, int]:
        return {s: i for i, (_, t) in enumerate(self.cylinders) for s in t}

    @cached_property
    def bot_next(self) -> dict[int, int]:
        return {w[j]: w[(j + 1) % len(w)] for w, _ in self.cylinders for j in range(len(w))}

    @cached_property
    def top_next(self) -> dict[int, int]:
        return {w[j]: w[(j + 1) % len(w)] for _, w in self.cylinders for j in range(len(w))}

    @cached_property
    def vertices(self) -> list[tuple[int, ...]]:
        """Zeros as cycles of labels (by left endpoint), each starting at its minimum."""
        bot_prev = {v: s for s, v in self.bot_next.items()}
        seen: set[int] = set()
        out = []
        for start in sorted(self.bot_next):
            if start in seen:
                continue
            cyc = []
            x = start
            while x not in seen:
                seen.add(x)
                cyc.append(x)
                x = self.top_next[bot_prev[x]]
            out.append(tuple(cyc))
        return out

    @cached_property
    def vertex_of(self) -> dict[int, int]:
        """Vertex index of the left endpoint of each label."""
        return {s: j for j, cyc in enumerate(self.vertices) for s in cyc}

    def right_vertex(self, s: int) -> int:
        return self.vertex_of[self.bot_next[s]]

    def zero_orders(self) -> list[int]:
        return [len(c) - 1 for c in self.vertices]

    def __str__(self) -> str:
        return serialize_diagram(self)


@dataclass(frozen=True)
class GeometricData:
    widths: tuple[int, ...]
    heights: tuple[int, ...]
    twists: tuple[int, ...]


# --- text ---------------------------------------------------------------------

_WORD = r"\d+(?:,\d+)*"
_CYL = re.compile(rf"({_WORD})-({_WORD})")


def parse_diagram(text: str) -> CylinderDiagram:
    """Parse ``"0-1 1,2-0,2"``; raises :class:`ParseError` with a position."""
    body = text.strip()
    if not body:
        raise ParseError("empty diagram", 0)
    offset = len(text) - len(text.lstrip())
    cyls = []
    pos = 0
    for chunk in body.split(" "):
        m = _CYL.fullmatch(chunk)
        if not m:
            raise ParseError(f"bad cylinder {chunk!r}", offset + pos)
        cyls.append((tuple(map(int, m.group(1).split(","))), tuple(map(int, m.group(2).split(",")))))
        pos += len(chunk) + 1
    return CylinderDiagram(tuple(cyls))


def serialize_diagram(d: CylinderDiagram) -> str:
    return " ".join(",".join(map(str, b)) + "-" + ",".join(map(str, t)) for b, t in d.cylinders)


# --- validation -----------------------------------------------------------------


def _structural_errors(d: CylinderDiagram) -> list[str]:
    if not d.cylinders or any(not b or not t for b, t in d.cylinders):
        return ["MissingLabel"]
    bots = [s for b, _ in d.cylinders for s in b]
    tops = [s for _, t in d.cylinders for s in t]
    if len(set(bots)) != len(bots) or len(set(tops)) != len(tops):
        return ["DuplicateLabel"]
    if set(bots) != set(range(len(bots))) or set(tops) != set(bots):
        return ["MissingLabel"]
    return []


def _connected(d: CylinderDiagram) -> bool:
    parent = list(range(d.k))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for s in range(d.E):
        parent[find(d.bottom_cyl[s])] = find(d.top_cyl[s])
    return len({find(i) for i in range(d.k)}) == 1


def check_structure(d: CylinderDiagram) -> CylinderDiagram:
    """Raise unless every label occurs once on each side and the surface is connected."""
    errs = _structural_errors(d)
    if errs == ["DuplicateLabel"]:
        raise DuplicateLabel("a label occurs twice among bottoms or tops")
    if errs:
        raise MissingLabel("labels must be 0..E-1, each on one bottom and one top")
    if not _connected(d):
        raise Disconnected("cylinders do not form a connected surface")
    return d


def validate_diagram(d: CylinderDiagram) -> ValidationReport:
    errs = _structural_errors(d)
    if errs:
        return ValidationReport(False, tuple(errs))
    if not _connected(d):
        errs.append("Disconnected")
    if not widths_feasible(d):
        errs.append("NoPositiveWidths")
    if any(o == 0 for o in d.zero_orders()):
        errs.append("MarkedPoint")
    details = {"E": d.E, "k": d.k, "orders": sorted(d.zero_orders(), reverse=True)}
    return ValidationReport(not errs, tuple(errs), details)


def check_diagram(d: CylinderDiagram) -> CylinderDiagram:
    check_structure(d)
    if not widths_feasible(d):
        raise NoPositiveWidths("balance equations force a zero width")
    if any(o == 0 for o in d.zero_orders()):
        raise MarkedPoint("diagram has a vertex of order 0")
    return d


def diagram_stratum(d: CylinderDiagram) -> tuple[StratumSignature, int]:
    check_structure(d)
    orders = d.zero_orders()
    genus = (sum(orders) + 2) // 2
    return StratumSignature.abelian(o for o in orders if o > 0), genus


def diagram_genus(d: CylinderDiagram) -> int:
    return (sum(d.zero_orders()) + 2) // 2


# --- widths -----------------------------------------------------------------------
#
# The balance equations say that the widths form a circulation on the graph
# with one node per cylinder and one edge per label, from the cylinder having
# the label on top to the cylinder having it on its bottom.  Integral
# feasibility with bounds is a max-flow question, which keeps everything exact.


def _max_flow(cap: list[list[int]], s: int, t: int) -> int:
    n = len(cap)
    flow = 0
    res = [row[:] for row in cap]
    while True:
        prev = [-1] * n
        prev[s] = s
        queue = [s]
        for x in queue:
            for y in range(n):
                if prev[y] < 0 and res[x][y] > 0:
                    prev[y] = x
                    queue.append(y)
        if prev[t] < 0:
            return flow
        push = None
        y = t
        while y != s:
            x = prev[y]
            push = res[x][y] if push is None else min(push, res[x][y])
            y = x
        y = t
        while y != s:
            x = prev[y]
            res[x][y] -= push
            res[y][x] += push
            y = x
        flow += push


def _circulation_feasible(d: CylinderDiagram, lower: Sequence[int], upper: Sequence[int]) -> bool:
    k = d.k
    src, snk = k, k + 1
    cap = [[0] * (k + 2) for _ in range(k + 2)]
    excess = [0] * k
    for s in range(d.E):
        a, b = d.top_cyl[s], d.bottom_cyl[s]
        if lower[s] > upper[s]:
            return False
        excess[b] += lower[s]
        excess[a] -= lower[s]
        if a != b:
            cap[a][b] += upper[s] - lower[s]
    need = 0
    for v in range(k):
        if excess[v] > 0:
            cap[src][v] += excess[v]
            need += excess[v]
        elif excess[v] < 0:
            cap[v][snk] -= excess[v]
    return _max_flow(cap, src, snk) == need


def width_bound(d: CylinderDiagram) -> int:
    return d.E * max(max(len(b), len(t)) for b, t in d.cylinders)


def widths_feasible(d: CylinderDiagram) -> bool:
    bound = width_bound(d)
    return _circulation_feasible(d, [1] * d.E, [bound] * d.E)


def solve_widths(d: CylinderDiagram) -> tuple[int, ...]:
    """Lexicographically minimal positive integer widths balancing every cylinder."""
    check_structure(d)
    bound = width_bound(d)
    lower = [1] * d.E
    upper = [bound] * d.E
    if not _circulation_feasible(d, lower, upper):
        raise NoPositiveWidths("no positive widths balance this diagram")
    for s in range(d.E):
        for v in range(1, bound + 1):
            lower[s] = upper[s] = v
            if _circulation_feasible(d, lower, upper):
                break
        else:  # pragma: no cover - excluded by the feasibility check above
            raise NoPositiveWidths("width search exhausted")
    return tuple(lower)


def minimal_geometry(d: CylinderDiagram) -> GeometricData:
    return GeometricData(solve_widths(d), (1,) * d.k, (0,) * d.k)


# --- canonical keys ------------------------------------------------------------------


def _rotate_min(w: Sequence[int]) -> Word:
    j = w.index(min(w))
    return tuple(w[j:]) + tuple(w[:j])


def _relabelings(d: CylinderDiagram, start: int) -> Iterator[tuple]:
    """Serializations reached by discovery-order relabeling from ``start``.

    Words are walked from their first discovered label.  When a connected
    piece of the separatrix graph is exhausted, the search continues across a
    cylinder whose other side is unlabeled, branching over where that side's
    word starts.
    """
    cyls = d.cylinders
    bcyl, tcyl = d.bottom_cyl, d.top_cyl

    def walk(word: Word, x: int, new: dict[int, int], order: list[int]) -> None:
        j = word.index(x)
        for y in word[j:] + word[:j]:
            if y not in new:
                new[y] = len(order)
                order.append(y)

    def run(new: dict[int, int], order: list[int], done_b: set, done_t: set, idx: int) -> Iterator[tuple]:
        while idx < len(order):
            x = order[idx]
            i = bcyl[x]
            if i not in done_b:
                done_b.add(i)
                walk(cyls[i][0], x, new, order)
            i = tcyl[x]
            if i not in done_t:
                done_t.add(i)
                walk(cyls[i][1], x, new, order)
            idx += 1
        if len(order) == d.E:
            yield tuple(sorted((_rotate_min([new[s] for s in b]), _rotate_min([new[s] for s in t])) for b, t in cyls))
            return
        best = None
        for i, (b, t) in enumerate(cyls):
            if i in done_b and i not in done_t:
                cand = (min(new[s] for s in b), 0, i)
            elif i in done_t and i not in done_b:
                cand = (min(new[s] for s in t), 1, i)
            else:
                continue
            if best is None or cand < best:
                best = cand
        assert best is not None, "diagram is disconnected"
        _, side, i = best
        word = cyls[i][1] if side == 0 else cyls[i][0]
        for z in word:
            new2 = dict(new)
            order2 = order + [z]
            new2[z] = len(order)
            yield from run(new2, order2, set(done_b), set(done_t), idx)

    yield from run({start: 0}, [start], set(), set(), 0)


def canonical_form(d: CylinderDiagram) -> CylinderDiagram:
    check_structure(d)
    best = min(form for s in range(d.E) for form in _relabelings(d, s))
    return CylinderDiagram(best)


def canonical_key(d: CylinderDiagram) -> str:
    """Minimal serialization over relabelings, cylinder order and word rotations."""
    return serialize_diagram(canonical_form(d))


def rotate_half_turn(d: CylinderDiagram) -> CylinderDiagram:
    return CylinderDiagram(tuple((t[::-1], b[::-1]) for b, t in d.cylinders))


def reflect_horizontal_axis(d: CylinderDiagram) -> CylinderDiagram:
    """Mirror ``y -> -y``: tops and bottoms trade places."""
    return CylinderDiagram(tuple((t, b) for b, t in d.cylinders))


def reflect_vertical_axis(d: CylinderDiagram) -> CylinderDiagram:
    """Mirror ``x -> -x``: every word is reversed."""
    return CylinderDiagram(tuple((b[::-1], t[::-1]) for b, t in d.cylinders))


def symmetric_images(d: CylinderDiagram) -> list[CylinderDiagram]:
    return [d, rotate_half_turn(d), reflect_horizontal_axis(d), reflect_vertical_axis(d)]


def symmetric_key(d: CylinderDiagram) -> str:
    """Canonical key up to the half turn and the two axis mirrors."""
    return min(canonical_key(x) for x in symmetric_images(d))


# --- realization ---------------------------------------------------------------------


def realize(d: CylinderDiagram, g: GeometricData) -> Origami:
    """Glue unit squares along ``d`` with the given widths, heights and twists.

    Cylinder ``i`` contributes ``heights[i]`` rows of its circumference.  The
    first top saddle connection starts above column ``twists[i]``.
    """
    check_structure(d)
    if len(g.widths) != d.E or len(g.heights) != d.k or len(g.twists) != d.k:
        raise InconsistentGeometry("geometry does not match the diagram size")
    if any(w < 1 for w in g.widths) or any(h < 1 for h in g.heights):
        raise InconsistentGeometry("widths and heights must be positive")
    w = g.widths
    circ = []
    bstart: dict[int, int] = {}
    for b, t in d.cylinders:
        lb, lt = sum(w[s] for s in b), sum(w[s] for s in t)
        if lb != lt:
            raise InconsistentGeometry("a cylinder is not balanced")
        pos = 0
        for s in b:
            bstart[s] = pos
            pos += w[s]
        circ.append(lb)
    base = [0]
    for i in range(d.k):
        base.append(base[-1] + circ[i] * g.heights[i])
    n = base[-1]
    r = [0] * n
    u = [0] * n
    for i, (b, t) in enumerate(d.cylinders):
        length, h = circ[i], g.heights[i]
        for y in range(h):
            for x in range(length):
                sq = base[i] + y * length + x
                r[sq] = base[i] + y * length + (x + 1) % length
                if y < h - 1:
                    u[sq] = sq + length
        top_at = []
        for s in t:
            top_at.extend((s, off) for off in range(w[s]))
        for x in range(length):
            s, off = top_at[(x - g.twists[i]) % length]
            j = d.bottom_cyl[s]
            u[base[i] + (h - 1) * length + x] = base[j] + bstart[s] + off
    return Origami.from_images(r, u)


def extract_diagram(o: Origami) -> tuple[CylinderDiagram, GeometricData]:
    """Horizontal cylinder diagram of an origami together with its geometry.

    A surface without zeros gets one marked point so that it has a saddle
    connection to record.
    """
    check_origami(o)
    cyls = marked_cylinders(o)
    labels: dict[int, int] = {}
    widths: dict[int, int] = {}
    for c in cyls:
        for key, wd in zip(c.bottom, c.bottom_widths):
            labels.setdefault(key, len(labels))
            widths[labels[key]] = wd
        for key in c.top:
            labels.setdefault(key, len(labels))
    diagram = CylinderDiagram(
        tuple((tuple(labels[x] for x in c.bottom), tuple(labels[x] for x in c.top)) for c in cyls)
    )
    geom = GeometricData(
        tuple(widths[s] for s in range(len(labels))),
        tuple(c.height for c in cyls),
        tuple(c.twist for c in cyls),
    )
    return diagram, geom


# --- enumeration ------------------------------------------------------------------------


def _partitions(total: int, parts: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    largest = total if largest is None else largest
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(min(total - parts + 1, largest), 0, -1):
        for rest in _partitions(total - first, parts - 1, first):
            yield (first,) + rest


def _perms_of_type(n: int, sizes: Sequence[int]) -> Iterator[list[int]]:
    """Every permutation of ``range(n)`` whose cycle lengths are ``sizes``."""
    img = [-1] * n

    def rec(free: list[int], sizes: list[int]) -> Iterator[list[int]]:
        if not free:
            yield img[:]
            return
        first, others = free[0], free[1:]
        for size in sorted(set(sizes)):
            left = list(sizes)
            left.remove(size)
            for rest in itertools.permutations(others, size - 1):
                cyc = (first,) + rest
                for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                    img[a] = b
                yield from rec([x for x in others if x not in rest], left)

    yield from rec(list(range(n)), list(sizes))


def _cycles(img: Sequence[int]) -> list[Word]:
    return Permutation(tuple(img)).cycles()


def _keys_for_bottom_shape(orders: tuple[int, ...], k: int, shape: tuple[int, ...]) -> set[str]:
    E = sum(o + 1 for o in orders)
    bottoms: list[Word] = []
    pos = 0
    for part in shape:
        bottoms.append(tuple(range(pos, pos + part)))
        pos += part
    bot = [0] * E
    for w in bottoms:
        for j, s in enumerate(w):
            bot[s] = w[(j + 1) % len(w)]
    keys: set[str] = set()
    for zeros in _perms_of_type(E, [o + 1 for o in orders]):
        top = [zeros[bot[s]] for s in range(E)]
        tops = _cycles(top)
        if len(tops) != k:
            continue
        for match in itertools.permutations(range(k)):
            d = CylinderDiagram(tuple((bottoms[i], tops[match[i]]) for i in range(k)))
            if not _connected(d) or not widths_feasible(d):
                continue
            keys.add(canonical_key(d))
    return keys


def _worker_count() -> int:
    try:
        return max(1, int(os.environ.get("FLATLAS_THREADS", "1")))
    except ValueError:
        return 1


def enumerate_diagrams(
    stratum: StratumSignature | Iterable[int],
    k: int,
    up_to_symmetry: bool = False,
    workers: int | None = None,
) -> list[str]:
    """Sorted canonical keys of all ``k``-cylinder diagrams in an abelian stratum.

    Bottom words are fixed to a standard labeling for each shape (partition
    of ``E`` into ``k`` parts); the zero permutation is then chosen with the
    required cycle type, which determines the top words, and the tops are
    matched to the bottoms in every possible way.  Relabeling conjugates the
    bottom permutation, so this reaches every isomorphism class.
    """
    if not isinstance(stratum, StratumSignature):
        stratum = StratumSignature.abelian(stratum)
    if stratum.flavor != "abelian" or any(o < 1 for o in stratum.orders):
        raise InputError("enumeration needs an abelian stratum without marked points")
    orders = stratum.orders
    E = sum(o + 1 for o in orders)
    if k < 1 or k > E:
        return []
    shapes = list(_partitions(E, k))
    workers = _worker_count() if workers is None else workers
    keys: set[str] = set()
    if workers > 1 and len(shapes) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_keys_for_bottom_shape, [orders] * len(shapes), [k] * len(shapes), shapes):
                keys |= part
    else:
        for shape in shapes:
            keys |= _keys_for_bottom_shape(orders, k, shape)
    if up_to_symmetry:
        keys = {symmetric_key(parse_diagram(x)) for x in keys}
    return sorted(keys)


def write_corpus(path: str | os.PathLike, stratum: StratumSignature, k: int, keys: Sequence[str]) -> None:
    orders = ",".join(map(str, stratum.orders))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# stratum={orders} ncyl={k} count={len(keys)}\n")
        for key in keys:
            fh.write(key + "\n")


def read_corpus(path: str | os.PathLike) -> list[CylinderDiagram]:
    with open(path, encoding="utf-8") as fh:
        return [parse_diagram(line) for line in fh if line.strip() and not line.startswith("#")]
