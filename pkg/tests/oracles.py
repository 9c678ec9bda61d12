"""Brute-force reference implementations, written without the package internals.

They are slow and only meant for small inputs.
"""

from itertools import permutations, product


class UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        self.parent[self.find(a)] = self.find(b)

    def classes(self, items):
        out = {}
        for x in items:
            out.setdefault(self.find(x), []).append(x)
        return list(out.values())


def origami_zero_orders(n, r, u):
    """Zero orders from gluing square corners; ``r`` and ``u`` are image lists.

    Corner ids: 4*i + (0 BL, 1 BR, 2 TR, 3 TL).  A vertex made of ``c``
    corners has angle ``c * pi/2``, hence order ``c/4 - 1``.
    """
    uf = UnionFind(4 * n)
    for i in range(n):
        j = r[i]  # j sits to the right of i
        uf.union(4 * i + 1, 4 * j + 0)
        uf.union(4 * i + 2, 4 * j + 3)
        k = u[i]  # k sits on top of i
        uf.union(4 * i + 3, 4 * k + 0)
        uf.union(4 * i + 2, 4 * k + 1)
    sizes = [len(c) for c in uf.classes(range(4 * n))]
    assert all(s % 4 == 0 for s in sizes)
    return sorted((s // 4 - 1 for s in sizes if s > 4), reverse=True)


def origami_genus(n, r, u):
    uf = UnionFind(4 * n)
    for i in range(n):
        uf.union(4 * i + 1, 4 * r[i] + 0)
        uf.union(4 * i + 2, 4 * r[i] + 3)
        uf.union(4 * i + 3, 4 * u[i] + 0)
        uf.union(4 * i + 2, 4 * u[i] + 1)
    v = len(uf.classes(range(4 * n)))
    chi = v - 2 * n + n
    return (2 - chi) // 2


def diagram_zero_orders(cylinders, E):
    """Zeros by gluing label endpoints: the right end of a label is the left end of its successor."""
    uf = UnionFind(2 * E)  # 2*s left end, 2*s+1 right end
    for bottom, top in cylinders:
        for word in (bottom, top):
            for j, s in enumerate(word):
                uf.union(2 * s + 1, 2 * word[(j + 1) % len(word)])
    # a zero of order m is the left end of m+1 labels
    return sorted((sum(1 for x in c if x % 2 == 0) - 1 for c in uf.classes(range(2 * E))), reverse=True)


def diagram_connected(cylinders, E):
    uf = UnionFind(len(cylinders))
    where_b = {s: i for i, (b, _) in enumerate(cylinders) for s in b}
    where_t = {s: i for i, (_, t) in enumerate(cylinders) for s in t}
    for s in range(E):
        uf.union(where_b[s], where_t[s])
    return len(uf.classes(range(len(cylinders)))) == 1


def widths_by_search(cylinders, E, bound=None):
    """Lexicographically least positive balanced widths, or None."""
    bound = bound or E
    for w in product(range(1, bound + 1), repeat=E):
        if all(sum(w[s] for s in b) == sum(w[s] for s in t) for b, t in cylinders):
            return w
    return None


def _rot_min(word):
    return min(tuple(word[j:] + word[:j]) for j in range(len(word)))


def brute_key(cylinders, E):
    """Minimum over every label permutation of the sorted list of min-rotated cylinders."""
    best = None
    for p in permutations(range(E)):
        form = tuple(sorted((_rot_min([p[s] for s in b]), _rot_min([p[s] for s in t])) for b, t in cylinders))
        if best is None or form < best:
            best = form
    return best


def _cyclic_words(labels):
    """All ways to split ``labels`` into cyclic words (one per cycle of a permutation)."""
    labels = list(labels)
    seen = set()
    for p in permutations(labels):
        img = dict(zip(labels, p))
        words = []
        done = set()
        for x in labels:
            if x in done:
                continue
            w = []
            y = x
            while y not in done:
                done.add(y)
                w.append(y)
                y = img[y]
            words.append(_rot_min(w))
        key = tuple(sorted(words))
        if key not in seen:
            seen.add(key)
            yield list(key)


def brute_enumerate(orders, k):
    """Every cylinder diagram with the given zero orders and ``k`` cylinders, as brute keys."""
    E = sum(m + 1 for m in orders)
    want = sorted(orders, reverse=True)
    found = set()
    for bottoms in _cyclic_words(range(E)):
        if len(bottoms) != k:
            continue
        for tops in _cyclic_words(range(E)):
            if len(tops) != k:
                continue
            for match in permutations(range(k)):
                cyls = [(bottoms[i], tops[match[i]]) for i in range(k)]
                if not diagram_connected(cyls, E):
                    continue
                if diagram_zero_orders(cyls, E) != want:
                    continue
                if widths_by_search(cyls, E) is None:
                    continue
                found.add(brute_key(cyls, E))
    return found
