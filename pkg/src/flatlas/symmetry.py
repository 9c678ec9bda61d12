"""Involutions, unramified double covers and locus dimensions.

An automorphism with derivative ``-id`` of an origami maps squares to squares
(all zeros sit over a single point of the torus, so the half-turn has no room
for a translation part).  It is therefore a permutation ``sigma`` with
``sigma r sigma^-1 = r^-1`` and ``sigma u sigma^-1 = u^-1``, and it is
determined by ``sigma(0)``.

Fixed points of such a ``sigma`` are counted at four kinds of places:
square centers (``sigma(i) == i``), midpoints of vertical edges
(``sigma(i) == r(i)``), midpoints of horizontal edges (``sigma(i) == u(i)``)
and vertices.  The top-right corner of ``i`` is sent to the bottom-left
corner of ``sigma(i)``; a vertex is fixed when that corner map sends its
corner class to itself.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Sequence

from flatlas.errors import (
    BadDescriptor,
    InvalidInvolution,
    InvariantError,
    NotFree,
    NotPrym,
    NotTranslation,
    UnsupportedGenus,
    ZeroClass,
)
from flatlas.origami import Origami, Permutation, StratumSignature, check_origami, stratum_of


@dataclass(frozen=True)
class InvolutionReport:
    sigma: Permutation
    fixed_centers: int
    fixed_vedge_midpoints: int
    fixed_hedge_midpoints: int
    fixed_vertices: int
    genus: int
    vertex_map: tuple[int, ...]

    @property
    def total_fixed(self) -> int:
        return self.fixed_centers + self.fixed_vedge_midpoints + self.fixed_hedge_midpoints + self.fixed_vertices

    F = total_fixed

    @property
    def quotient_genus(self) -> int:
        return (2 * self.genus + 2 - self.total_fixed) // 4

    @property
    def kind(self) -> str:
        if self.genus == 3 and self.total_fixed == 4:
            return "prym"
        if self.genus == 3 and self.total_fixed == 8:
            return "hyperelliptic"
        if self.genus == 2 and self.total_fixed == 6:
            return "genus2_hyperelliptic"
        return "other"


def _propagate(o: Origami, image_of_zero: int, gens: Sequence[tuple[Permutation, Permutation]]) -> Permutation | None:
    """Extend ``0 -> image_of_zero`` along ``sigma g = g' sigma`` for each pair ``(g, g')``."""
    sigma = [-1] * o.n
    sigma[0] = image_of_zero
    stack = [0]
    while stack:
        x = stack.pop()
        for g, g_img in gens:
            y, z = g(x), g_img(sigma[x])
            if sigma[y] < 0:
                sigma[y] = z
                stack.append(y)
            elif sigma[y] != z:
                return None
    if -1 in sigma or sorted(sigma) != list(range(o.n)):
        return None
    return Permutation(tuple(sigma))


def _report(o: Origami, sigma: Permutation) -> InvolutionReport:
    r, u = o.r, o.u
    centers = sum(1 for i in range(o.n) if sigma(i) == i)
    vedges = sum(1 for i in range(o.n) if sigma(i) == r(i))
    hedges = sum(1 for i in range(o.n) if sigma(i) == u(i))
    vtx = o.vertex_of
    n_vertices = len(o.vertex_cycles)
    vmap = [-1] * n_vertices
    for i in range(o.n):
        src = vtx[u(r(i))]  # top-right corner of i
        dst = vtx[sigma(i)]  # bottom-left corner of sigma(i)
        if vmap[src] < 0:
            vmap[src] = dst
        elif vmap[src] != dst:
            raise InvalidInvolution("corner map is not well defined on vertices")
    fixed_vertices = sum(1 for j in range(n_vertices) if vmap[j] == j)
    _, genus = stratum_of(o)
    rep = InvolutionReport(sigma, centers, vedges, hedges, fixed_vertices, genus, tuple(vmap))
    if (2 * genus + 2 - rep.total_fixed) % 4:
        raise InvariantError(f"fixed-point count {rep.total_fixed} violates Riemann-Hurwitz in genus {genus}")
    return rep


def is_minus_id_involution(o: Origami, sigma: Permutation) -> bool:
    r, u = o.r, o.u
    return (
        (sigma * sigma).is_identity()
        and sigma * r == r.inverse() * sigma
        and sigma * u == u.inverse() * sigma
    )


def involution_report(o: Origami, sigma: Permutation) -> InvolutionReport:
    if not is_minus_id_involution(o, sigma):
        raise InvalidInvolution("sigma does not reverse r and u or is not an involution")
    return _report(o, sigma)


def minus_id_involutions(o: Origami) -> list[InvolutionReport]:
    """Every involution acting as ``-id``, ordered by ``sigma(0)``."""
    check_origami(o)
    gens = [(o.r, o.r.inverse()), (o.u, o.u.inverse())]
    out = []
    for j in range(o.n):
        sigma = _propagate(o, j, gens)
        if sigma is not None and (sigma * sigma).is_identity():
            out.append(_report(o, sigma))
    return out


def translation_group(o: Origami) -> list[Permutation]:
    """Permutations commuting with ``r`` and ``u``, ordered by image of 0."""
    check_origami(o)
    gens = [(o.r, o.r), (o.u, o.u)]
    return [s for j in range(o.n) if (s := _propagate(o, j, gens)) is not None]


def quotient_signature(o: Origami, inv: InvolutionReport) -> tuple[StratumSignature, int]:
    """Zero orders of the quadratic differential on the quotient, and its genus."""
    if not is_minus_id_involution(o, inv.sigma):
        raise InvalidInvolution("report does not belong to this origami")
    cycles = o.vertex_cycles
    orders = []
    seen = set()
    for j, cyc in enumerate(cycles):
        if j in seen:
            continue
        m = len(cyc) - 1
        image = inv.vertex_map[j]
        seen.update((j, image))
        if image == j:
            orders.append(m - 1)
        elif m > 0:
            if len(cycles[image]) - 1 != m:
                raise InvariantError("involution swaps zeros of different orders")
            orders.append(2 * m)
    orders.extend([-1] * (inv.fixed_centers + inv.fixed_vedge_midpoints + inv.fixed_hedge_midpoints))
    orders = [x for x in orders if x != 0]
    sig = StratumSignature.quadratic(orders)
    if sum(orders) != 4 * inv.quotient_genus - 4:
        raise InvariantError(f"quotient orders {orders} do not sum to 4g'-4 for g'={inv.quotient_genus}")
    return sig, inv.quotient_genus


def is_hyperelliptic(o: Origami) -> InvolutionReport | None:
    _, g = stratum_of(o)
    if g not in (2, 3):
        raise UnsupportedGenus(f"hyperelliptic test implemented for genus 2 and 3, got {g}")
    for inv in minus_id_involutions(o):
        if inv.quotient_genus == 0:
            return inv
    return None


def prym_involutions(o: Origami) -> list[InvolutionReport]:
    return [inv for inv in minus_id_involutions(o) if inv.kind == "prym"]


def prym_zero_action(o: Origami, inv: InvolutionReport) -> str:
    """``fixes_each_zero``, ``exchanges_zeros`` or ``mixed``."""
    if inv.kind != "prym":
        raise NotPrym("involution is not a Prym involution")
    zeros = o.zero_vertices
    fixed = [j for j in zeros if inv.vertex_map[j] == j]
    if len(fixed) == len(zeros):
        return "fixes_each_zero"
    if not fixed:
        return "exchanges_zeros"
    return "mixed"


# --- Z/2 classes and double covers ------------------------------------------------
#
# A cochain assigns a bit to each of the 2n gluings: index i for the gluing
# of i to r(i), index n+i for the gluing of i to u(i).


@dataclass(frozen=True)
class Z2Class:
    values: tuple[int, ...]

    @property
    def is_zero(self) -> bool:
        return not any(self.values)

    def r_bits(self) -> tuple[int, ...]:
        return self.values[: len(self.values) // 2]

    def u_bits(self) -> tuple[int, ...]:
        return self.values[len(self.values) // 2 :]

    def __str__(self) -> str:
        return "".join(map(str, self.values))


def _vertex_rows(o: Origami) -> list[int]:
    """Bitmask rows of the loop around every vertex (unramified condition)."""
    n = o.n
    r_inv, u_inv = o.r.inverse(), o.u.inverse()
    rows = []
    for cyc in o.vertex_cycles:
        mask = 0
        for i in cyc:
            # loop around the bottom-left corner of i: left, down, right, up
            a = r_inv(i)
            b = u_inv(a)
            c = o.r(b)
            mask ^= 1 << a  # crossing between a and r(a) = i
            mask ^= 1 << (n + b)  # between b and u(b) = a
            mask ^= 1 << b  # between b and r(b) = c
            mask ^= 1 << (n + c)  # between c and u(c)
        rows.append(mask)
    return rows


def _coboundary_rows(o: Origami) -> list[int]:
    n = o.n
    rows = []
    for f in range(n):
        mask = 0
        for i in range(n):
            if o.r(i) == f:
                mask ^= 1 << i
            if i == f:
                mask ^= 1 << i
                mask ^= 1 << (n + i)
            if o.u(i) == f:
                mask ^= 1 << (n + i)
        rows.append(mask)
    return rows


def _bit(mask: int, pos: int) -> int:
    return (mask >> pos) & 1


def _echelon(rows: list[int], order: Sequence[int]) -> list[tuple[int, int]]:
    """Reduced echelon basis over GF(2) with pivots taken in ``order``."""
    basis: list[tuple[int, int]] = []
    for v in rows:
        for p, b in basis:
            if _bit(v, p):
                v ^= b
        if not v:
            continue
        p = next(q for q in order if _bit(v, q))
        basis = [(pp, bb ^ v if _bit(bb, p) else bb) for pp, bb in basis]
        basis.append((p, v))
    basis.sort(key=lambda pb: list(order).index(pb[0]))
    return basis


def _kernel_gf2(rows: list[int], width: int) -> list[int]:
    """Basis of ``{x : popcount(row & x) even for every row}``."""
    ech = _echelon(rows, range(width))
    pivots = {p for p, _ in ech}
    out = []
    for free in range(width):
        if free in pivots:
            continue
        x = 1 << free
        for p, b in ech:
            if _bit(b, free):
                x |= 1 << p
        out.append(x)
    return out


def _canonical_mask(mask: int, cob: list[tuple[int, int]]) -> int:
    for p, b in cob:
        if _bit(mask, p):
            mask ^= b
    return mask


def _mask_to_class(mask: int, width: int) -> Z2Class:
    return Z2Class(tuple(_bit(mask, i) for i in range(width)))


def _class_to_mask(c: Z2Class) -> int:
    return sum(v << i for i, v in enumerate(c.values))


def z2_classes(o: Origami) -> list[Z2Class]:
    """All classes in ``H^1(surface, Z/2)`` as canonical cochains.

    The representative of a coset is its lexicographically smallest cochain,
    reading gluings in the order ``r(0..n-1), u(0..n-1)``.  The list is sorted
    the same way, so the zero class comes first.
    """
    check_origami(o)
    width = 2 * o.n
    cocycles = _kernel_gf2(_vertex_rows(o), width)
    # lexicographic order puts position 0 first, i.e. the most significant
    order = list(range(width))
    cob = _echelon(_coboundary_rows(o), order)
    reps = set()
    quotient = []
    for v in cocycles:  # keep only generators independent modulo coboundaries
        red = _canonical_mask(v, _echelon([b for _, b in cob] + quotient, order))
        if red:
            quotient.append(red)
    for coeffs in itertools.product((0, 1), repeat=len(quotient)):
        m = 0
        for c, q in zip(coeffs, quotient):
            if c:
                m ^= q
        reps.add(_canonical_mask(m, cob))
    classes = [_mask_to_class(m, width) for m in reps]
    classes.sort(key=lambda c: c.values)
    _, g = stratum_of(o)
    if len(classes) != 4**g:
        raise InvariantError(f"found {len(classes)} classes, expected {4 ** g}")
    return classes


def is_unramified(o: Origami, c: Z2Class) -> bool:
    m = _class_to_mask(c)
    return all(bin(row & m).count("1") % 2 == 0 for row in _vertex_rows(o))


def double_cover(o: Origami, c: Z2Class) -> Origami:
    """Cover on squares ``i + n*s`` with the sheet flipped across marked gluings."""
    check_origami(o)
    n = o.n
    if len(c.values) != 2 * n:
        raise InvalidInvolution("class has the wrong length")
    if not is_unramified(o, c):
        raise BadDescriptor("cochain is ramified at some vertex")
    er, eu = c.r_bits(), c.u_bits()
    r = [0] * (2 * n)
    u = [0] * (2 * n)
    for s in (0, 1):
        for i in range(n):
            r[i + n * s] = o.r(i) + n * (s ^ er[i])
            u[i + n * s] = o.u(i) + n * (s ^ eu[i])
    cover = Origami.from_images(r, u)
    from flatlas.origami import validate_origami

    if not validate_origami(cover).valid:
        raise ZeroClass("class is a coboundary; the cover is disconnected")
    return cover


def _orbits_of(rho: Permutation) -> list[tuple[int, ...]]:
    return rho.cycles()


def is_free_translation_involution(o: Origami, rho: Permutation) -> bool:
    if not (rho * o.r == o.r * rho and rho * o.u == o.u * rho):
        return False
    if rho.is_identity() or not (rho * rho).is_identity():
        return False
    vtx = o.vertex_of
    return all(rho(i) != i for i in range(o.n)) and all(
        vtx[rho(cyc[0])] != j for j, cyc in enumerate(o.vertex_cycles)
    )


def quotient_by_free_translation_involution(o: Origami, rho: Permutation) -> Origami:
    """Origami on the ``rho``-orbits, labelled in order of their smallest square."""
    if not (rho * o.r == o.r * rho and rho * o.u == o.u * rho):
        raise NotTranslation("rho does not commute with r and u")
    if not (rho * rho).is_identity() or rho.is_identity():
        raise NotFree("rho is not an involution of order 2")
    if not is_free_translation_involution(o, rho):
        raise NotFree("rho fixes a square or a vertex")
    orbits = sorted(_orbits_of(rho))
    idx = {x: j for j, orb in enumerate(orbits) for x in orb}
    r = [idx[o.r(orb[0])] for orb in orbits]
    u = [idx[o.u(orb[0])] for orb in orbits]
    return Origami.from_images(r, u)


def deck_class(o: Origami, rho: Permutation) -> Z2Class:
    """Class on the quotient whose double cover gives back ``o``."""
    base = quotient_by_free_translation_involution(o, rho)
    orbits = sorted(_orbits_of(rho))
    reps = {orb[0] for orb in orbits}
    er = tuple(int(o.r(orb[0]) not in reps) for orb in orbits)
    eu = tuple(int(o.u(orb[0]) not in reps) for orb in orbits)
    mask = _class_to_mask(Z2Class(er + eu))
    cob = _echelon(_coboundary_rows(base), list(range(2 * base.n)))
    return _mask_to_class(_canonical_mask(mask, cob), 2 * base.n)


# --- dimensions -------------------------------------------------------------------------

_DESC = re.compile(r"\s*([HQ])(~?)\((.*)\)\s*")


def parse_descriptor(text: str) -> tuple[str, StratumSignature]:
    """``H(2,1,1)`` (stratum), ``Q~(2,1,-1^3)`` or ``H~(1,1)`` (cover loci).

    Returns ``(kind, signature)`` with kind ``stratum``, ``quadratic_cover``
    or ``abelian_cover``.
    """
    m = _DESC.fullmatch(text.replace("̃", "~").replace("\\tilde", "~"))
    if not m:
        raise BadDescriptor(f"cannot read locus {text!r}")
    letter, tilde, body = m.groups()
    try:
        sig = StratumSignature.parse(f"{letter}({body})")
    except Exception as exc:
        raise BadDescriptor(str(exc)) from exc
    if letter == "H" and not tilde:
        return "stratum", sig
    if letter == "Q" and tilde:
        return "quadratic_cover", sig
    if letter == "H" and tilde:
        return "abelian_cover", sig
    raise BadDescriptor(f"unsupported locus {text!r}")


def locus_dimension(descriptor: str | tuple[str, StratumSignature]) -> int:
    """Complex dimension of a stratum or of a locus of double covers.

    ``H(k)``: ``2g+n-1``.  ``Q~(k)``: covers of the quadratic stratum,
    ``2g+n-2``.  ``H~(k)``: unramified double covers of the abelian stratum,
    ``2g+n-1``.  Here ``g`` and ``n`` belong to the listed stratum.
    """
    kind, sig = parse_descriptor(descriptor) if isinstance(descriptor, str) else descriptor
    g, n = sig.genus, sig.n_zeros
    if kind in ("stratum", "abelian_cover"):
        return 2 * g + n - 1
    if kind == "quadratic_cover":
        return 2 * g + n - 2
    raise BadDescriptor(f"unknown locus kind {kind!r}")
