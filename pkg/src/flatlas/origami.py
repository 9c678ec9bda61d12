"""Square-tiled surfaces.

An origami on ``n`` unit squares is a pair of permutations ``r`` (the square
glued to the right) and ``u`` (the square glued above).  Conventions used
throughout the package:

* permutations compose right to left: ``(a * b)(x) == a(b(x))``;
* the commutator is ``c = r u r^-1 u^-1``.  Its cycles are exactly the
  classes of bottom-left corners of squares, so a cycle of length ``l`` is a
  cone point of angle ``2*pi*l``;
* ``S`` rotates the picture counterclockwise by a quarter turn,
  ``S(r, u) = (u^-1, r)``, and ``T`` is the shear ``T(r, u) = (r, u r^-1)``;
* vertical cylinders are the horizontal cylinders of ``S(o)``; the square
  indices are unchanged by ``S`` so the two decompositions can be compared.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from flatlas.errors import BadIndex, Disconnected, InputError, NonBijective, ParseError


@dataclass(frozen=True)
class Permutation:
    """A permutation of ``{0, ..., n-1}`` stored by its images."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "images", tuple(int(x) for x in self.images))

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], n: int) -> Permutation:
        images = list(range(n))
        seen: set[int] = set()
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                if not (0 <= a < n) or a in seen:
                    raise NonBijective(f"point {a} repeated or out of range in cycles")
                seen.add(a)
                images[a] = b
        return cls(tuple(images))

    @classmethod
    def parse(cls, text: str, n: int, one_based: bool = False) -> Permutation:
        """Parse cycle notation such as ``(0,1)(2)`` or ``(0 1 2)``."""
        text = text.strip()
        if not re.fullmatch(r"(\(\s*[\d\s,]*\))*", text):
            raise ParseError(f"bad cycle notation {text!r}", 0)
        cycles = []
        for body in re.findall(r"\(([^)]*)\)", text):
            pts = [int(x) - int(one_based) for x in re.split(r"[\s,]+", body.strip()) if x]
            if pts:
                cycles.append(pts)
        return cls.from_cycles(cycles, n)

    def __len__(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: Permutation) -> Permutation:
        return Permutation(tuple(self.images[x] for x in other.images))

    def inverse(self) -> Permutation:
        inv = [0] * len(self.images)
        for i, x in enumerate(self.images):
            inv[x] = i
        return Permutation(tuple(inv))

    def is_bijection(self) -> bool:
        return sorted(self.images) == list(range(len(self.images)))

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        """All cycles, fixed points included, each starting at its minimum."""
        seen = [False] * len(self.images)
        out = []
        for start in range(len(self.images)):
            if seen[start]:
                continue
            cyc = []
            x = start
            while not seen[x]:
                seen[x] = True
                cyc.append(x)
                x = self.images[x]
            out.append(tuple(cyc))
        return out

    def cycle_string(self) -> str:
        moved = [c for c in self.cycles() if len(c) > 1]
        if not moved:
            return "()"
        return "".join("(" + ",".join(map(str, c)) + ")" for c in moved)

    def one_line(self) -> list[int]:
        return list(self.images)

    def __str__(self) -> str:
        return self.cycle_string()


@dataclass(frozen=True)
class StratumSignature:
    """Zero orders of an abelian or quadratic stratum.

    Orders are kept sorted in decreasing order.  Abelian orders are positive
    (marked points are never recorded); quadratic orders are ``>= -1``.
    """

    flavor: str
    orders: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "orders", tuple(sorted(self.orders, reverse=True)))
        if self.flavor not in ("abelian", "quadratic"):
            raise InputError(f"unknown flavor {self.flavor!r}")

    @classmethod
    def abelian(cls, orders: Iterable[int]) -> StratumSignature:
        return cls("abelian", tuple(orders))

    @classmethod
    def quadratic(cls, orders: Iterable[int]) -> StratumSignature:
        return cls("quadratic", tuple(orders))

    @classmethod
    def parse(cls, text: str) -> StratumSignature:
        """Parse ``2,1,1``, ``H(2,1,1)``, ``H(1^4)`` or ``Q(2,1,-1^3)``."""
        s = text.strip().replace(" ", "")
        flavor = "abelian"
        m = re.fullmatch(r"([HQ])\((.*)\)", s)
        if m:
            flavor = "abelian" if m.group(1) == "H" else "quadratic"
            s = m.group(2)
        orders: list[int] = []
        if s:
            for tok in s.split(","):
                mm = re.fullmatch(r"(-?\d+)(?:\^(\d+))?", tok)
                if not mm:
                    raise ParseError(f"bad stratum token {tok!r}", text.find(tok))
                orders.extend([int(mm.group(1))] * int(mm.group(2) or 1))
        sig = cls(flavor, tuple(orders))
        if flavor == "abelian" and any(o < 1 for o in orders):
            raise ParseError("abelian orders must be positive", 0)
        if flavor == "quadratic" and any(o < -1 or o == 0 for o in orders):
            raise ParseError("quadratic orders must be -1 or positive", 0)
        total = sum(orders)
        if (flavor == "abelian" and total % 2) or (flavor == "quadratic" and total % 4):
            raise ParseError(f"orders {orders} do not sum to an Euler characteristic", 0)
        return sig

    @property
    def genus(self) -> int:
        if self.flavor == "abelian":
            return (sum(self.orders) + 2) // 2
        return (sum(self.orders) + 4) // 4

    @property
    def n_zeros(self) -> int:
        return len(self.orders)

    @property
    def dimension(self) -> int:
        if self.flavor == "abelian":
            return 2 * self.genus + self.n_zeros - 1
        return 2 * self.genus + self.n_zeros - 2

    def __str__(self) -> str:
        letter = "H" if self.flavor == "abelian" else "Q"
        parts = []
        i = 0
        while i < len(self.orders):
            j = i
            while j < len(self.orders) and self.orders[j] == self.orders[i]:
                j += 1
            parts.append(str(self.orders[i]) if j - i == 1 else f"{self.orders[i]}^{j - i}")
            i = j
        return f"{letter}({','.join(parts)})"


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    errors: tuple[str, ...] = ()
    details: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class Cylinder:
    """A horizontal cylinder of an origami.

    ``rows`` lists the squares of each row, bottom to top, with columns
    aligned: ``rows[y][x]`` sits directly above ``rows[y-1][x]``.  Column 0 is
    the left end of the first bottom saddle connection.  Saddle connections
    are identified by the square whose bottom edge is their leftmost unit
    edge.  ``twist`` is the column in which the first top saddle connection
    starts.
    """

    index: int
    height: int
    circumference: int
    rows: tuple[tuple[int, ...], ...]
    bottom: tuple[int, ...]
    bottom_widths: tuple[int, ...]
    top: tuple[int, ...]
    top_widths: tuple[int, ...]
    twist: int

    @property
    def squares(self) -> frozenset[int]:
        return frozenset(x for row in self.rows for x in row)

    @property
    def is_simple(self) -> bool:
        return len(self.bottom) == 1 and len(self.top) == 1

    @property
    def is_semi_simple(self) -> bool:
        return len(self.bottom) == 1 or len(self.top) == 1


_ORIGAMI_RE = re.compile(
    r"\s*origami\s+n\s*=\s*(\d+)\s+r\s*=\s*(\([^=]*?)\s+u\s*=\s*(\(.*?)\s*$", re.S
)


@dataclass(frozen=True)
class Origami:
    n: int
    r: Permutation
    u: Permutation

    @classmethod
    def from_cycles(cls, n: int, r: Iterable[Sequence[int]], u: Iterable[Sequence[int]]) -> Origami:
        return cls(n, Permutation.from_cycles(r, n), Permutation.from_cycles(u, n))

    @classmethod
    def from_images(cls, r: Sequence[int], u: Sequence[int]) -> Origami:
        return cls(len(r), Permutation(tuple(r)), Permutation(tuple(u)))

    @cached_property
    def commutator(self) -> Permutation:
        return self.r * self.u * self.r.inverse() * self.u.inverse()

    @cached_property
    def vertex_cycles(self) -> list[tuple[int, ...]]:
        """Commutator cycles; cycle ``j`` holds the squares whose bottom-left corner is vertex ``j``."""
        return self.commutator.cycles()

    @cached_property
    def vertex_of(self) -> tuple[int, ...]:
        out = [0] * self.n
        for j, cyc in enumerate(self.vertex_cycles):
            for x in cyc:
                out[x] = j
        return tuple(out)

    @property
    def zero_vertices(self) -> list[int]:
        return [j for j, c in enumerate(self.vertex_cycles) if len(c) > 1]

    def __str__(self) -> str:
        return serialize_origami(self)


def parse_origami(text: str, one_based: bool = False) -> Origami:
    m = _ORIGAMI_RE.fullmatch(text)
    if not m:
        raise ParseError("expected 'origami n=<N> r=<cycles> u=<cycles>'", 0)
    n = int(m.group(1))
    if n < 1:
        raise ParseError("n must be positive", m.start(1))
    try:
        r = Permutation.parse(m.group(2), n, one_based)
        u = Permutation.parse(m.group(3), n, one_based)
    except NonBijective as exc:
        raise ParseError(str(exc), m.start(2)) from exc
    return Origami(n, r, u)


def serialize_origami(o: Origami) -> str:
    return f"origami n={o.n} r={o.r.cycle_string()} u={o.u.cycle_string()}"


def _orbit(n: int, gens: Sequence[Permutation], start: int = 0) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for g in gens:
            y = g(x)
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def validate_origami(o: Origami) -> ValidationReport:
    errors = []
    if len(o.r) != o.n or len(o.u) != o.n or not o.r.is_bijection() or not o.u.is_bijection():
        return ValidationReport(False, ("NonBijective",))
    connected = len(_orbit(o.n, (o.r, o.u))) == o.n
    if not connected:
        errors.append("Disconnected")
    details = {
        "transitive": connected,
        "zero_cycle_lengths": sorted((len(c) for c in o.vertex_cycles if len(c) > 1), reverse=True),
    }
    return ValidationReport(not errors, tuple(errors), details)


def check_origami(o: Origami) -> Origami:
    rep = validate_origami(o)
    if "NonBijective" in rep.errors:
        raise NonBijective("r and u must be permutations of the squares")
    if "Disconnected" in rep.errors:
        raise Disconnected("r and u do not act transitively")
    return o


def stratum_of(o: Origami) -> tuple[StratumSignature, int]:
    orders = [len(c) - 1 for c in o.vertex_cycles if len(c) > 1]
    total = sum(orders)
    return StratumSignature.abelian(orders), (total + 2) // 2


def genus_of(o: Origami) -> int:
    return stratum_of(o)[1]


# --- cylinders ---------------------------------------------------------------


def _decompose(o: Origami, marked: Sequence[bool]) -> list[Cylinder]:
    """Horizontal cylinders whose boundaries pass through the marked vertices.

    ``marked[j]`` says whether vertex ``j`` splits cylinders.
    """
    vtx = o.vertex_of
    r, u = o.r, o.u
    rows = r.cycles()

    def sing(x: int) -> bool:  # is the bottom-left corner of x marked
        return marked[vtx[x]]

    cyls = []
    for row in rows:
        if not any(sing(x) for x in row):
            continue
        length = len(row)
        start = next(j for j in range(length) if sing(row[j]))  # row starts at its minimum
        cur = list(row[start:] + row[:start])
        stack = [tuple(cur)]
        while not any(sing(u(x)) for x in cur):
            cur = [u(x) for x in cur]
            stack.append(tuple(cur))
            if len(stack) > o.n:
                raise Disconnected("cylinder does not close up")
        bpos = [j for j in range(length) if sing(stack[0][j])]
        top = stack[-1]
        tpos = [j for j in range(length) if sing(u(top[j]))]

        def widths(pos: list[int]) -> tuple[int, ...]:
            return tuple(((pos[(i + 1) % len(pos)] - p - 1) % length) + 1 for i, p in enumerate(pos))

        cyls.append(
            (
                min(min(rw) for rw in stack),
                len(stack),
                length,
                tuple(stack),
                tuple(stack[0][j] for j in bpos),
                widths(bpos),
                tuple(u(top[j]) for j in tpos),
                widths(tpos),
                tpos[0],
            )
        )
    cyls.sort()
    return [Cylinder(i, *c[1:]) for i, c in enumerate(cyls)]


def horizontal_cylinders(o: Origami) -> list[Cylinder]:
    """Horizontal cylinder decomposition, cylinders ordered by minimal square.

    A surface without zeros is a single cylinder with empty boundary words,
    anchored at the row of square 0.
    """
    zeros = [len(c) > 1 for c in o.vertex_cycles]
    if any(zeros):
        return _decompose(o, zeros)
    marker = [False] * len(o.vertex_cycles)
    marker[o.vertex_of[0]] = True
    (cyl,) = _decompose(o, marker)
    return [Cylinder(0, cyl.height, cyl.circumference, cyl.rows, (), (), (), (), 0)]


def marked_cylinders(o: Origami) -> list[Cylinder]:
    """Like :func:`horizontal_cylinders` but a torus gets a marked vertex."""
    zeros = [len(c) > 1 for c in o.vertex_cycles]
    if not any(zeros):
        zeros[o.vertex_of[0]] = True
    return _decompose(o, zeros)


def transpose(o: Origami) -> Origami:
    """The quarter-turn rotation ``S(o)``; same square indices."""
    return Origami(o.n, o.u.inverse(), o.r)


def vertical_cylinders(o: Origami) -> list[Cylinder]:
    return horizontal_cylinders(transpose(o))


def twist_cylinder(o: Origami, i: int, k: int) -> Origami:
    """Shear horizontal cylinder ``i`` by ``k`` units.

    The gluing of the top row to what lies above is shifted so that the
    square above column ``x`` becomes the one formerly above column ``x-k``.
    """
    cyls = horizontal_cylinders(o)
    if not 0 <= i < len(cyls):
        raise BadIndex(f"no horizontal cylinder {i}")
    top = cyls[i].rows[-1]
    length = len(top)
    images = list(o.u.images)
    for x in range(length):
        images[top[x]] = o.u(top[(x - k) % length])
    return Origami(o.n, o.r, Permutation(tuple(images)))


def _apply_letter(o: Origami, letter: str) -> Origami:
    r, u = o.r, o.u
    if letter == "T":
        return Origami(o.n, r, u * r.inverse())
    if letter == "T^-1":
        return Origami(o.n, r, u * r)
    if letter == "S":
        return Origami(o.n, u.inverse(), r)
    if letter == "S^-1":
        return Origami(o.n, u, r.inverse())
    raise ParseError(f"unknown SL(2,Z) letter {letter!r}", 0)


def parse_word(word: str | Sequence[str]) -> list[str]:
    """Split ``"ST^-1S"`` into letters; ``s`` and ``t`` also mean inverses."""
    if not isinstance(word, str):
        return [_normalize_letter(w) for w in word]
    letters = []
    pos = 0
    pat = re.compile(r"\s*([STst])(\^-1|⁻¹)?\s*")
    while pos < len(word):
        m = pat.match(word, pos)
        if not m or m.end() == pos:
            raise ParseError(f"bad SL(2,Z) word {word!r}", pos)
        letters.append(_normalize_letter(m.group(1) + (m.group(2) or "")))
        pos = m.end()
    return letters


def _normalize_letter(tok: str) -> str:
    tok = tok.strip().replace("⁻¹", "^-1")
    if tok in ("S", "T", "S^-1", "T^-1"):
        return tok
    if tok in ("s", "t"):
        return tok.upper() + "^-1"
    raise ParseError(f"unknown SL(2,Z) letter {tok!r}", 0)


def sl2z_apply(o: Origami, word: str | Sequence[str]) -> Origami:
    """Act by a word in ``S``, ``T`` and their inverses.

    The word is read as a matrix product, so its rightmost letter acts first.
    """
    for letter in reversed(parse_word(word)):
        o = _apply_letter(o, letter)
    return o


def cylinder_proportion(o: Origami, x: int, cc: Iterable[int]) -> Fraction:
    """Share of vertical cylinder ``x`` covered by the horizontal cylinders ``cc``."""
    vert = vertical_cylinders(o)
    hor = horizontal_cylinders(o)
    if not 0 <= x < len(vert):
        raise BadIndex(f"no vertical cylinder {x}")
    covered: set[int] = set()
    for i in cc:
        if not 0 <= i < len(hor):
            raise BadIndex(f"no horizontal cylinder {i}")
        covered |= hor[i].squares
    sq = vert[x].squares
    return Fraction(len(sq & covered), len(sq))


# --- isomorphism ---------------------------------------------------------------


def _relabel_from(o: Origami, start: int) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    new = {start: 0}
    order = [start]
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in (o.r(x), o.u(x)):
            if y not in new:
                new[y] = len(order)
                order.append(y)
                queue.append(y)
    if len(order) != o.n:
        return None
    r = tuple(new[o.r(x)] for x in order)
    u = tuple(new[o.u(x)] for x in order)
    return r, u


def canonical_origami(o: Origami) -> Origami:
    """Representative of the isomorphism class (minimal over relabelings)."""
    forms = [f for s in range(o.n) if (f := _relabel_from(o, s)) is not None]
    if not forms:
        raise Disconnected("origami is not connected")
    r, u = min(forms)
    return Origami.from_images(r, u)


def is_isomorphic(a: Origami, b: Origami) -> bool:
    return a.n == b.n and canonical_origami(a) == canonical_origami(b)


def sl2z_orbit(o: Origami, limit: int | None = None) -> list[Origami]:
    """The finite orbit under ``S`` and ``T`` as canonical forms, in discovery order."""
    start = canonical_origami(o)
    seen = {start}
    out = [start]
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for letter in ("T", "S"):
            y = canonical_origami(_apply_letter(x, letter))
            if y not in seen:
                seen.add(y)
                out.append(y)
                queue.append(y)
                if limit is not None and len(out) >= limit:
                    return out
    return out
