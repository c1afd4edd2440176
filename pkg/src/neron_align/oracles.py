"""Brute-force oracles, independent of the Smith-normal-form code path.

These are only feasible on small inputs; tests and ``--oracle`` use them to
cross-check the fast implementations.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from .neron import SubdividedGraph, laplacian


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


class Sandpile:
    """Recurrent chip configurations on a unit-edge graph with a chosen sink."""

    def __init__(self, S: SubdividedGraph, sink: str | None = None):
        self.sink = sink if sink is not None else min(S.vertices)
        L = laplacian(S)
        idx = {v: i for i, v in enumerate(S.vertices)}
        self.nodes = [v for v in S.vertices if v != self.sink]
        keep = [idx[v] for v in self.nodes]
        self.L = [[L[i][j] for j in keep] for i in keep]
        self.deg = [self.L[k][k] for k in range(len(keep))]
        if any(d == 0 for d in self.deg) and len(self.nodes) > 0:
            raise ValueError("graph is not connected")
        # chips that reach the sink when every vertex fires once
        self.beta = [sum(row) for row in self.L]
        self._recurrent: list[tuple[int, ...]] | None = None

    def stabilise(self, c) -> tuple[int, ...]:
        c = list(c)
        n = len(c)
        unstable = [i for i in range(n) if c[i] >= self.deg[i]]
        while unstable:
            i = unstable.pop()
            if c[i] < self.deg[i]:
                continue
            k = c[i] // self.deg[i]
            for j in range(n):
                c[j] -= k * self.L[i][j]
            for j in range(n):
                if c[j] >= self.deg[j]:
                    unstable.append(j)
        return tuple(c)

    def is_recurrent(self, c) -> bool:
        return self.stabilise(x + b for x, b in zip(c, self.beta)) == tuple(c)

    def recurrent(self) -> list[tuple[int, ...]]:
        if self._recurrent is None:
            self._recurrent = [
                c for c in product(*(range(d) for d in self.deg)) if self.is_recurrent(c)
            ]
        return self._recurrent

    def add(self, a, b) -> tuple[int, ...]:
        return self.stabilise(x + y for x, y in zip(a, b))

    def identity(self) -> tuple[int, ...]:
        rec = self.recurrent()
        # the identity is the unique recurrent e with e + e ~ e
        for c in rec:
            if self.add(c, c) == c:
                return c
        raise AssertionError("no identity among recurrent configurations")

    def times(self, c, k: int) -> tuple[int, ...]:
        """k * c by double-and-add, k >= 1."""
        acc, base = None, tuple(c)
        while k:
            if k & 1:
                acc = base if acc is None else self.add(acc, base)
            k >>= 1
            if k:
                base = self.add(base, base)
        return acc

    def order_of(self, c) -> int:
        e = self.identity()
        k, acc = 1, tuple(c)
        while acc != e:
            acc = self.add(acc, c)
            k += 1
        return k

    def invariant_factors(self) -> tuple[int, ...]:
        """Group structure recovered from how many elements each q^j kills."""
        rec = self.recurrent()
        N = len(rec)
        if N == 1:
            return ()
        e = self.identity()
        parts: list[list[int]] = []
        for q in _prime_factors(N):
            full = 0
            while N % q ** (full + 1) == 0:
                full += 1
            # t[j] = log_q #{x : q^j x = 0} = sum over q-factors of min(exponent, j)
            t = [0]
            while t[-1] < full:
                killed = sum(1 for c in rec if self.times(c, q ** len(t)) == e)
                k = 0
                while q ** (k + 1) <= killed:
                    k += 1
                t.append(k)
            at_least = [t[j] - t[j - 1] for j in range(1, len(t))] + [0]
            exps = []
            for j in range(len(at_least) - 1):
                exps += [j + 1] * (at_least[j] - at_least[j + 1])
            parts.append(sorted((q ** x for x in exps), reverse=True))
        factors = []
        for k in range(max(len(p) for p in parts)):
            d = 1
            for p in parts:
                if k < len(p):
                    d *= p[k]
            factors.append(d)
        return tuple(sorted(factors))

    def class_of(self, vec) -> tuple[int, ...]:
        """The recurrent configuration equivalent to an integer vector modulo the reduced Laplacian."""
        for c in self.recurrent():
            diff = [a - b for a, b in zip(c, vec)]
            if _in_lattice(self.L, diff):
                return c
        raise AssertionError("vector has no recurrent representative")


def _in_lattice(L: list[list[int]], v: list[int]) -> bool:
    """Is v = L z for an integer z? Solved over the rationals by elimination (L is symmetric, invertible)."""
    n = len(L)
    if n == 0:
        return True
    A = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(L, v)]
    for col in range(n):
        piv = next(r for r in range(col, n) if A[r][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        p = A[col][col]
        A[col] = [x / p for x in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return all(row[-1].denominator == 1 for row in A)


def brute_invariant_factors(S: SubdividedGraph) -> tuple[int, ...]:
    return Sandpile(S).invariant_factors()


def brute_section_order(S: SubdividedGraph, p: str, q: str) -> int:
    if p == q:
        return 1
    sp = Sandpile(S)
    vec = [(1 if v == p else 0) - (1 if v == q else 0) for v in sp.nodes]
    return sp.order_of(sp.class_of(vec))


def brute_proportional(a: dict[str, int], b: dict[str, int], bound: int = 64) -> tuple[int, int] | None:
    """Least (n, n') with a^n == b^n' found by direct search."""
    for n in range(1, bound + 1):
        for m in range(1, bound + 1):
            keys = set(a) | set(b)
            if all(a.get(g, 0) * n == b.get(g, 0) * m for g in keys):
                return n, m
    return None


def brute_common_element(gens: list[tuple[int, int]], bound: int = 100) -> tuple[int, int] | None:
    """Smallest nonzero point lying in every cyclic monoid k*(m, n), k <= bound."""
    sets = [{(k * m, k * n) for k in range(1, bound + 1)} for m, n in gens]
    common = set.intersection(*sets)
    if not common:
        return None
    return min(common, key=lambda p: (p[0] + p[1], p))



def circuits(vertices, edges) -> list[tuple[str, ...]]:
    """Every circuit as a sorted tuple of edge ids, by testing all edge subsets.

    ``edges`` is a list of (id, (v, w)). A subset is a circuit when it is a
    single loop, or is connected with every touched vertex of degree two.
    """
    out = []
    n = len(edges)
    for mask in range(1, 1 << n):
        chosen = [edges[i] for i in range(n) if mask >> i & 1]
        if len(chosen) == 1:
            eid, (a, b) = chosen[0]
            if a == b:
                out.append((eid,))
            continue
        if any(a == b for _, (a, b) in chosen):
            continue
        deg: dict[str, int] = {}
        for _, (a, b) in chosen:
            deg[a] = deg.get(a, 0) + 1
            deg[b] = deg.get(b, 0) + 1
        if any(d != 2 for d in deg.values()):
            continue
        # connected?
        start = next(iter(deg))
        seen, stack = {start}, [start]
        while stack:
            v = stack.pop()
            for _, (a, b) in chosen:
                for x, y in ((a, b), (b, a)):
                    if x == v and y not in seen:
                        seen.add(y)
                        stack.append(y)
        if len(seen) == len(deg):
            out.append(tuple(sorted(eid for eid, _ in chosen)))
    return sorted(out)


def brute_is_aligned(vertices, edges, labels: dict[str, dict[str, int]], bound: int = 64) -> bool:
    """Alignment straight from the definition: every pair on every circuit is proportional."""
    for circ in circuits(vertices, edges):
        for i, e in enumerate(circ):
            for f in circ[i + 1:]:
                if brute_proportional(labels[e], labels[f], bound) is None:
                    return False
    return True


def brute_blocks(vertices, edges) -> list[frozenset[str]]:
    """Blocks as classes of 'equal or on a common circuit', which is an equivalence on edges."""
    parent = {eid: eid for eid, _ in edges}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for circ in circuits(vertices, edges):
        for eid in circ[1:]:
            parent[find(eid)] = find(circ[0])
    classes: dict[str, set[str]] = {}
    for eid, _ in edges:
        classes.setdefault(find(eid), set()).add(eid)
    return sorted((frozenset(c) for c in classes.values()), key=sorted)


def brute_lower_hull(points) -> list[tuple[int, Fraction]]:
    """Vertices of the lower hull by testing every point against every chord, O(n^3)."""
    best: dict[int, Fraction] = {}
    for x, y in points:
        y = Fraction(y)
        if x not in best or y < best[x]:
            best[x] = y
    pts = sorted(best.items())
    out = []
    for px, py in pts:
        covered = False
        for ax, ay in pts:
            for bx, by in pts:
                if ax < px < bx and py * (bx - ax) >= ay * (bx - px) + by * (px - ax):
                    covered = True
        if not covered:
            out.append((px, py))
    return out
