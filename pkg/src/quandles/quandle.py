"""Finite quandles as Cayley tables, with the queries everything else needs.

A table ``t`` of order n encodes the operation ``x*y = t[x][y]`` on elements
0..n-1.  Validated tables satisfy

  (q1)  x*x = x,
  (r1)  every column is a permutation (the right translation S_y),
  (r2)  (x*y)*z = (x*z)*(y*z).

S_x denotes the right translation y -> y*x, i.e. column x of the table.
All values are immutable after construction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from . import perms
from .errors import (AxiomViolation, ClosureLimitExceeded, NotASubquandle,
                     OrderLimitExceeded, SearchLimitExceeded, SizeLimitExceeded)
from .perms import Perm

DEFAULT_CLOSURE_LIMIT = 10 ** 6
ISO_ORDER_LIMIT = 24
HOM_ORDER_LIMIT = 8
SIMPLE_ORDER_LIMIT = 12
MAX_QUANDLE_ORDER = 4096


class FiniteQuandle:
    """Validated finite quandle.  Use :func:`from_table` to build one."""

    __slots__ = ("order", "table", "names", "_inv_cols", "_orbits")

    def __init__(self, table, names=None, _validated=False):
        rows = tuple(tuple(int(v) for v in row) for row in table)
        n = len(rows)
        if n == 0 or any(len(row) != n for row in rows):
            raise ValueError("table must be square and non-empty")
        if n > MAX_QUANDLE_ORDER:
            raise SizeLimitExceeded(f"order {n} exceeds {MAX_QUANDLE_ORDER}")
        if any(not 0 <= v < n for row in rows for v in row):
            raise ValueError("table entry out of range")
        self.order = n
        self.table = rows
        self.names = tuple(names) if names is not None else None
        if self.names is not None and len(self.names) != n:
            raise ValueError("names length differs from order")
        self._inv_cols = None
        self._orbits = None
        if not _validated:
            _check_axioms(rows)

    # -- operation ------------------------------------------------------------

    def op(self, x: int, y: int) -> int:
        return self.table[x][y]

    def op_inv(self, x: int, y: int) -> int:
        """The unique z with z*y = x (inverse right translation)."""
        return self.inverse_columns()[y][x]

    def column(self, x: int) -> Perm:
        """S_x as an image tuple."""
        return tuple(self.table[y][x] for y in range(self.order))

    def inverse_columns(self):
        if self._inv_cols is None:
            self._inv_cols = tuple(perms.inverse(self.column(x))
                                   for x in range(self.order))
        return self._inv_cols

    def name(self, x: int) -> str:
        return self.names[x] if self.names is not None else str(x)

    # -- inner automorphisms and orbits ----------------------------------------

    def inner_symmetry(self, x: int) -> Perm:
        return self.column(x)

    def inn_group(self, limit: int = DEFAULT_CLOSURE_LIMIT) -> "PermGroup":
        gens = [self.column(x) for x in range(self.order)]
        return PermGroup.closure(gens, degree=self.order, limit=limit)

    def orbits(self) -> tuple[tuple[int, ...], ...]:
        """Orbit partition of the Inn-action, blocks sorted by minimum."""
        if self._orbits is None:
            parent = list(range(self.order))

            def find(a):
                while parent[a] != a:
                    parent[a] = parent[parent[a]]
                    a = parent[a]
                return a

            for x in range(self.order):
                for y in range(self.order):
                    ra, rb = find(y), find(self.table[y][x])
                    if ra != rb:
                        parent[rb] = ra
            blocks: dict[int, list[int]] = {}
            for v in range(self.order):
                blocks.setdefault(find(v), []).append(v)
            self._orbits = tuple(tuple(sorted(b))
                                 for b in sorted(blocks.values(), key=min))
        return self._orbits

    def orbit_of(self, x: int) -> tuple[int, ...]:
        for block in self.orbits():
            if x in block:
                return block
        raise IndexError(x)

    def is_connected(self) -> bool:
        return len(self.orbits()) == 1

    # -- predicates -------------------------------------------------------------

    def predicates(self) -> "QuandlePredicates":
        n = self.order
        t = self.table
        commutative = all(t[x][y] == t[y][x] for x in range(n) for y in range(n))
        latin = all(perms.is_permutation(t[x]) for x in range(n))
        trivial = all(t[x][y] == x for x in range(n) for y in range(n))
        obstruction = True
        for x in range(n):
            for y in range(n):
                if t[x][y] == x and t[y][x] != y:
                    obstruction = False
                    break
            if not obstruction:
                break
        return QuandlePredicates(commutative, latin, trivial, obstruction)

    # -- congruences and simplicity ----------------------------------------------

    def congruence_generated_by(self, pairs) -> tuple[tuple[int, ...], ...]:
        """Smallest congruence identifying each given pair."""
        n = self.order
        t = self.table
        parent = list(range(n))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        work = []

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[rb] = ra
                work.append((a, b))

        for a, b in pairs:
            union(a, b)
        while work:
            a, b = work.pop()
            for c in range(n):
                union(t[a][c], t[b][c])
                union(t[c][a], t[c][b])
        blocks: dict[int, list[int]] = {}
        for v in range(n):
            blocks.setdefault(find(v), []).append(v)
        return tuple(tuple(sorted(blk))
                     for blk in sorted(blocks.values(), key=min))

    def congruences(self) -> list[tuple[tuple[int, ...], ...]]:
        """All congruences, discrete first, full partition last.

        Every congruence is a join of principal ones, so the list is the
        join-closure of the principal congruences plus the discrete partition.
        Exhaustive; refuses orders above SIMPLE_ORDER_LIMIT.
        """
        n = self.order
        if n > SIMPLE_ORDER_LIMIT:
            raise OrderLimitExceeded(
                f"congruence enumeration limited to order {SIMPLE_ORDER_LIMIT}")
        discrete = tuple((v,) for v in range(n))
        found = {discrete}
        principal = set()
        for a in range(n):
            for b in range(a + 1, n):
                principal.add(self.congruence_generated_by([(a, b)]))
        frontier = set(principal)
        found |= principal
        while frontier:
            new = set()
            for theta in frontier:
                for rho in principal:
                    joined = self.congruence_generated_by(
                        [(blk[0], v) for blk in theta for v in blk[1:]]
                        + [(blk[0], v) for blk in rho for v in blk[1:]])
                    if joined not in found:
                        found.add(joined)
                        new.add(joined)
            frontier = new
        return sorted(found, key=lambda part: (len(part) * -1, part))

    def is_simple(self) -> bool:
        """True when the only congruences are discrete and full.

        This is the congruence-lattice reading of simplicity; a one-element
        quandle is not simple by convention.
        """
        if self.order < 2:
            return False
        for a in range(self.order):
            for b in range(a + 1, self.order):
                if len(self.congruence_generated_by([(a, b)])) != 1:
                    return False
        return True

    # -- serialization -------------------------------------------------------------

    def to_dict(self) -> dict:
        out = {"order": self.order, "table": [list(row) for row in self.table]}
        if self.names is not None:
            out["names"] = list(self.names)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "FiniteQuandle":
        table = data["table"]
        if data.get("order") is not None and int(data["order"]) != len(table):
            raise ValueError("declared order differs from table size")
        return from_table(table, names=data.get("names"))

    @classmethod
    def from_json(cls, text: str) -> "FiniteQuandle":
        return cls.from_dict(json.loads(text))

    def __eq__(self, other):
        return isinstance(other, FiniteQuandle) and self.table == other.table

    def __hash__(self):
        return hash(self.table)

    def __repr__(self):
        return f"<FiniteQuandle of order {self.order}>"


@dataclass(frozen=True)
class QuandlePredicates:
    is_commutative: bool
    is_latin: bool
    is_trivial: bool
    ga_obstruction_pass: bool


@dataclass(frozen=True)
class PermGroup:
    """A concrete permutation group: sorted element list plus its generators."""

    degree: int
    elements: tuple[Perm, ...]
    generators: tuple[Perm, ...]

    @classmethod
    def closure(cls, gens, degree: int, limit: int = DEFAULT_CLOSURE_LIMIT) -> "PermGroup":
        ident = perms.identity(degree)
        unique_gens = []
        for g in gens:
            if g not in unique_gens:
                unique_gens.append(g)
        seen = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for a in frontier:
                for g in unique_gens:
                    b = perms.compose(a, g)
                    if b not in seen:
                        if len(seen) >= limit:
                            raise ClosureLimitExceeded(
                                f"closure exceeded {limit} elements")
                        seen.add(b)
                        nxt.append(b)
            frontier = nxt
        return cls(degree, tuple(sorted(seen)), tuple(gens))

    @property
    def order(self) -> int:
        return len(self.elements)


def _check_axioms(rows: tuple[tuple[int, ...], ...]) -> None:
    n = len(rows)
    for i in range(n):
        if rows[i][i] != i:
            raise AxiomViolation("q1", (i,))
    for j in range(n):
        if not perms.is_permutation([rows[i][j] for i in range(n)]):
            raise AxiomViolation("r1", (j,))
    for i in range(n):
        for j in range(n):
            tij = rows[i][j]
            for k in range(n):
                if rows[tij][k] != rows[rows[i][k]][rows[j][k]]:
                    raise AxiomViolation("r2", (i, j, k))


def from_table(table, names=None) -> FiniteQuandle:
    """Validate a Cayley table; raises AxiomViolation with a witness."""
    return FiniteQuandle(table, names=names)


def direct_product(q: FiniteQuandle, p: FiniteQuandle) -> FiniteQuandle:
    """Componentwise operation on pairs, element (a, x) at index a*|P| + x."""
    n, m = q.order, p.order
    if n * m > MAX_QUANDLE_ORDER:
        raise SizeLimitExceeded(f"order {n*m} exceeds {MAX_QUANDLE_ORDER}")
    table = [[0] * (n * m) for _ in range(n * m)]
    for a in range(n):
        for x in range(m):
            row = table[a * m + x]
            for b in range(n):
                for y in range(m):
                    row[b * m + y] = q.table[a][b] * m + p.table[x][y]
    names = None
    if q.names is not None or p.names is not None:
        names = [f"({q.name(a)},{p.name(x)})" for a in range(n) for x in range(m)]
    return FiniteQuandle(table, names=names, _validated=True)


def is_normal_subquandle(q: FiniteQuandle, subset) -> bool:
    """True when the subquandle on ``subset`` absorbs action by all of Q.

    Raises NotASubquandle if the subset is not closed under * within itself.
    """
    sub = sorted(set(int(v) for v in subset))
    if not sub or any(not 0 <= v < q.order for v in sub):
        raise ValueError("subset must be a non-empty set of element indices")
    inside = set(sub)
    for a in sub:
        for b in sub:
            if q.table[a][b] not in inside:
                raise NotASubquandle(f"{a}*{b} = {q.table[a][b]} leaves the subset")
    for a in sub:
        for y in range(q.order):
            if q.table[a][y] not in inside:
                return False
    return True


def subquandle(q: FiniteQuandle, subset) -> FiniteQuandle:
    """Restrict to a closed subset, reindexed in sorted order."""
    sub = sorted(set(int(v) for v in subset))
    index = {v: i for i, v in enumerate(sub)}
    inside = set(sub)
    for a in sub:
        for b in sub:
            if q.table[a][b] not in inside:
                raise NotASubquandle(f"{a}*{b} = {q.table[a][b]} leaves the subset")
    table = [[index[q.table[a][b]] for b in sub] for a in sub]
    names = [q.name(v) for v in sub] if q.names is not None else None
    return FiniteQuandle(table, names=names, _validated=True)


# -- homomorphism and isomorphism search -------------------------------------------


def _element_invariants(q: FiniteQuandle):
    orbit_size = {}
    for block in q.orbits():
        for v in block:
            orbit_size[v] = len(block)
    keys = []
    for x in range(q.order):
        col = q.column(x)
        fixed = sum(1 for y in range(q.order) if col[y] == y)
        keys.append((orbit_size[x], perms.cycle_type(col), fixed))
    return keys


def _producers(table, n):
    """producers[v] lists the pairs (i, j) with table[i][j] = v."""
    out = [[] for _ in range(n)]
    for i in range(n):
        row = table[i]
        for j in range(n):
            out[row[j]].append((i, j))
    return out


def _consistent_at(tq, tp, images, x) -> bool:
    """Check every constraint that becomes decidable once images[0..x] are set.

    A pair (i, j) is decidable at step max(i, j, tq[i][j]); the caller supplies
    constraints of the first kind here and product-side ones via producers.
    """
    v = images[x]
    for y in range(x + 1):
        a = tq[x][y]
        if a <= x and images[a] != tp[v][images[y]]:
            return False
        b = tq[y][x]
        if b <= x and images[b] != tp[images[y]][v]:
            return False
    return True


def is_isomorphic(q: FiniteQuandle, p: FiniteQuandle):
    """Search for an isomorphism; returns the lexicographically smallest
    witness (as an image tuple) or None.

    Pruning uses per-element invariants (orbit size, S_x cycle type, number
    of fixed points of S_x); these never reject a true isomorphism.
    """
    if q.order != p.order:
        return None
    n = q.order
    if n > ISO_ORDER_LIMIT:
        raise SearchLimitExceeded(f"isomorphism search limited to order {ISO_ORDER_LIMIT}")
    qk = _element_invariants(q)
    pk = _element_invariants(p)
    if sorted(qk) != sorted(pk):
        return None
    candidates = [[v for v in range(n) if pk[v] == qk[x]] for x in range(n)]
    tq, tp = q.table, p.table
    producers = _producers(tq, n)
    images = [-1] * n
    used = [False] * n

    def extend(x: int):
        if x == n:
            return True
        for v in candidates[x]:
            if used[v]:
                continue
            images[x] = v
            used[v] = True
            ok = _consistent_at(tq, tp, images, x)
            if ok:
                for i, j in producers[x]:
                    if i < x and j < x and tp[images[i]][images[j]] != v:
                        ok = False
                        break
            if ok and extend(x + 1):
                return True
            used[v] = False
            images[x] = -1
        return False

    if extend(0):
        return tuple(images)
    return None


def homomorphisms(q: FiniteQuandle, p: FiniteQuandle) -> list[tuple[int, ...]]:
    """All quandle homomorphisms Q -> P, exhaustive, in lexicographic order."""
    if q.order > HOM_ORDER_LIMIT or p.order > HOM_ORDER_LIMIT:
        raise SearchLimitExceeded(
            f"homomorphism enumeration limited to order {HOM_ORDER_LIMIT}")
    n, tq, tp = q.order, q.table, p.table
    producers = _producers(tq, n)
    images = [-1] * n
    out = []

    def extend(x: int):
        if x == n:
            out.append(tuple(images))
            return
        for v in range(p.order):
            images[x] = v
            ok = _consistent_at(tq, tp, images, x)
            if ok:
                for i, j in producers[x]:
                    if i < x and j < x and tp[images[i]][images[j]] != v:
                        ok = False
                        break
            if ok:
                extend(x + 1)
        images[x] = -1

    extend(0)
    return out
