"""Exact integer linear algebra on small dense matrices.

Matrices are lists of rows of Python ints.  Everything here is exact and
meant for the tiny systems produced by cylinder diagrams (tens of rows).
"""

from __future__ import annotations

from typing import Sequence

Matrix = list[list[int]]


def _copy(a: Sequence[Sequence[int]]) -> Matrix:
    return [list(row) for row in a]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(a: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*a)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def row_echelon(a: Sequence[Sequence[int]], ncols: int) -> tuple[Matrix, Matrix]:
    """Unimodular row reduction.

    Returns ``(h, u)`` with ``u`` unimodular and ``u @ a == h`` where ``h`` is
    in row echelon form: each nonzero row has a positive pivot strictly right of
    the previous pivot, and all-zero rows come last.
    """
    h = _copy(a)
    m = len(h)
    u = identity(m)
    row = 0
    for col in range(ncols):
        if row >= m:
            break
        while True:
            nonzero = [i for i in range(row, m) if h[i][col] != 0]
            if not nonzero:
                break
            piv = min(nonzero, key=lambda i: abs(h[i][col]))
            h[row], h[piv] = h[piv], h[row]
            u[row], u[piv] = u[piv], u[row]
            done = True
            for i in range(row + 1, m):
                q = h[i][col] // h[row][col]
                if q:
                    h[i] = [x - q * y for x, y in zip(h[i], h[row])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[row])]
                if h[i][col] != 0:
                    done = False
            if done:
                break
        if row < m and h[row][col] != 0:
            if h[row][col] < 0:
                h[row] = [-x for x in h[row]]
                u[row] = [-x for x in u[row]]
            row += 1
    return h, u


def hermite_normal_form(rows: Sequence[Sequence[int]], ncols: int) -> Matrix:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Pivots are positive and entries above each pivot lie in ``[0, pivot)``.
    Zero rows are dropped, so the result is a basis of the lattice.
    """
    h, _ = row_echelon(rows, ncols)
    h = [r for r in h if any(r)]
    for i, r in enumerate(h):
        pc = next(j for j, x in enumerate(r) if x)
        for k in range(i):
            q = h[k][pc] // r[pc]
            if q:
                h[k] = [x - q * y for x, y in zip(h[k], r)]
    return h


def rank(a: Sequence[Sequence[int]], ncols: int) -> int:
    h, _ = row_echelon(a, ncols)
    return sum(1 for r in h if any(r))


def left_kernel(a: Sequence[Sequence[int]], ncols: int) -> Matrix:
    """Basis of the integer lattice ``{x : x @ a == 0}``.

    The basis comes from a unimodular transform, so the returned lattice is
    saturated (it is the whole kernel, not a finite-index sublattice).
    """
    h, u = row_echelon(a, ncols)
    return [u[i] for i in range(len(h)) if not any(h[i])]


def right_kernel(a: Sequence[Sequence[int]], ncols: int) -> Matrix:
    """Basis (as rows) of the integer lattice ``{x : a @ x == 0}``."""
    return left_kernel(transpose(a, ncols), len(a))


def reduce_mod_lattice(v: Sequence[int], hnf: Sequence[Sequence[int]]) -> list[int]:
    """Reduce ``v`` modulo a lattice given by its Hermite basis."""
    v = list(v)
    for r in hnf:
        pc = next(j for j, x in enumerate(r) if x)
        q = v[pc] // r[pc]
        if q:
            v = [x - q * y for x, y in zip(v, r)]
    return v


def in_lattice(v: Sequence[int], hnf: Sequence[Sequence[int]]) -> bool:
    return not any(reduce_mod_lattice(v, hnf))


def smith_form(
    a: Sequence[Sequence[int]], ncols: int
) -> tuple[list[int], Matrix, Matrix, Matrix]:
    """Smith normal form with transforms.

    Returns ``(diag, p, q, q_inv)`` with ``p @ a @ q`` diagonal, diagonal
    entries ``diag`` positive and each dividing the next, ``p`` and ``q``
    unimodular, and ``q_inv`` the inverse of ``q``.
    """
    d = _copy(a)
    m, n = len(d), ncols
    p = identity(m)
    q = identity(n)
    qi = identity(n)

    def swap_cols(i: int, j: int) -> None:
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in q:
            row[i], row[j] = row[j], row[i]
        qi[i], qi[j] = qi[j], qi[i]

    def add_col(src: int, dst: int, c: int) -> None:
        # col dst += c * col src
        for row in d:
            row[dst] += c * row[src]
        for row in q:
            row[dst] += c * row[src]
        qi[src] = [x - c * y for x, y in zip(qi[src], qi[dst])]

    def swap_rows(i: int, j: int) -> None:
        d[i], d[j] = d[j], d[i]
        p[i], p[j] = p[j], p[i]

    def add_row(src: int, dst: int, c: int) -> None:
        d[dst] = [x + c * y for x, y in zip(d[dst], d[src])]
        p[dst] = [x + c * y for x, y in zip(p[dst], p[src])]

    t = 0
    while t < min(m, n):
        entries = [(abs(d[i][j]), i, j) for i in range(t, m) for j in range(t, n) if d[i][j]]
        if not entries:
            break
        _, i0, j0 = min(entries)
        swap_rows(t, i0)
        swap_cols(t, j0)
        while True:
            changed = False
            for i in range(t + 1, m):
                if d[i][t]:
                    add_row(t, i, -(d[i][t] // d[t][t]))
                    if d[i][t]:
                        swap_rows(t, i)
                        changed = True
            for j in range(t + 1, n):
                if d[t][j]:
                    add_col(t, j, -(d[t][j] // d[t][t]))
                    if d[t][j]:
                        swap_cols(t, j)
                        changed = True
            if changed:
                continue
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if d[i][j] % d[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            p[t] = [-x for x in p[t]]
        t += 1
    diag = [d[i][i] for i in range(min(m, n)) if d[i][i]]
    return diag, p, q, qi


def invariant_factors(a: Sequence[Sequence[int]], ncols: int) -> list[int]:
    return smith_form(a, ncols)[0]
