"""Finite groups as multiplication tables with 0-based element indices.

Tables are stored densely (numpy int arrays) and validated on construction:
identity, inverses, Latin-square property, and associativity.  Associativity
is checked by the full cubic scan up to order 64 and by Light's test on a
greedily computed generating set above that (exact, not sampled).

Naming convention for dihedral groups: ``dihedral(k)`` is the symmetry group
of the k-gon, order 2k.  Elements 0..k-1 are the rotations r^i, elements
k..2k-1 are the reflections s*r^i, with s*r*s = r^-1.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import permutations as _all_perms

import numpy as np

from .errors import GroupValidationError, NotAbelian, SizeLimitExceeded

MAX_GROUP_ORDER = 10_000
_FULL_ASSOC_LIMIT = 64


def _dtype_for(order: int):
    return np.int16 if order <= np.iinfo(np.int16).max else np.int32


class FiniteGroup:
    """A finite group given by its full multiplication table.

    ``mul_table[a][b]`` is the product a*b.  Identity and inverses are found
    and validated during construction; invalid tables raise
    GroupValidationError with a witness.
    """

    __slots__ = ("order", "identity", "labels", "name", "_mul", "_inv", "_abelian")

    def __init__(self, mul_table, labels=None, name: str | None = None, _validated=False):
        mul = np.asarray(mul_table)
        if mul.ndim != 2 or mul.shape[0] != mul.shape[1]:
            raise GroupValidationError("table is not square")
        n = int(mul.shape[0])
        if n == 0:
            raise GroupValidationError("empty table")
        if n > MAX_GROUP_ORDER:
            raise SizeLimitExceeded(f"group order {n} exceeds {MAX_GROUP_ORDER}")
        mul = mul.astype(_dtype_for(n), copy=True)
        mul.setflags(write=False)
        self.order = n
        self._mul = mul
        self.labels = list(labels) if labels is not None else None
        if self.labels is not None and len(self.labels) != n:
            raise GroupValidationError("labels length differs from order")
        self.name = name
        self._abelian = None
        if not _validated:
            self._validate_table()
        self.identity = self._find_identity()
        self._inv = self._find_inverses()
        if not _validated:
            self._check_associativity()

    # -- validation ---------------------------------------------------------

    def _validate_table(self):
        mul = self._mul
        n = self.order
        if mul.min() < 0 or mul.max() >= n:
            bad = np.argwhere((mul < 0) | (mul >= n))[0]
            raise GroupValidationError("entry out of range", tuple(int(v) for v in bad))
        ref = np.arange(n, dtype=mul.dtype)
        if not np.array_equal(np.sort(mul, axis=1), np.broadcast_to(ref, (n, n))):
            row = int(np.nonzero(~(np.sort(mul, axis=1) == ref).all(axis=1))[0][0])
            raise GroupValidationError("row is not a permutation", (row,))
        if not np.array_equal(np.sort(mul, axis=0), np.broadcast_to(ref[:, None], (n, n))):
            col = int(np.nonzero(~(np.sort(mul, axis=0) == ref[:, None]).all(axis=0))[0][0])
            raise GroupValidationError("column is not a permutation", (col,))

    def _find_identity(self) -> int:
        mul = self._mul
        n = self.order
        ref = np.arange(n, dtype=mul.dtype)
        for e in range(n):
            if np.array_equal(mul[e], ref) and np.array_equal(mul[:, e], ref):
                return e
        raise GroupValidationError("no two-sided identity")

    def _find_inverses(self) -> np.ndarray:
        mul = self._mul
        n = self.order
        rows, cols = np.nonzero(mul == self.identity)
        inv = np.full(n, -1, dtype=mul.dtype)
        inv[rows] = cols
        # Latin property guarantees one hit per row; demand two-sidedness.
        for a in range(n):
            b = int(inv[a])
            if b < 0 or int(mul[b, a]) != self.identity:
                raise GroupValidationError("inverse is not two-sided", (a,))
        return inv

    def _check_associativity(self):
        mul = self._mul
        n = self.order
        if n <= _FULL_ASSOC_LIMIT:
            left = mul[mul]          # left[a,b,c] = (a*b)*c
            right = mul[:, mul]      # right[a,b,c] = a*(b*c)
            if not np.array_equal(left, right):
                a, b, c = np.argwhere(left != right)[0]
                raise GroupValidationError(
                    "not associative", (int(a), int(b), int(c)))
            return
        # Light's associativity test on a generating set: exact for tables
        # that already passed the Latin/identity checks.
        for g in self._greedy_generators():
            left = mul[mul[:, g], :]   # (a*g)*b
            right = mul[:, mul[g, :]]  # a*(g*b)
            if not np.array_equal(left, right):
                a, b = np.argwhere(left != right)[0]
                raise GroupValidationError(
                    "not associative", (int(a), int(g), int(b)))

    def _greedy_generators(self) -> list[int]:
        gens: list[int] = []
        reached = self.subgroup_closure([])
        for g in range(self.order):
            if g not in reached:
                gens.append(g)
                reached = self.subgroup_closure(gens)
                if len(reached) == self.order:
                    break
        return gens

    # -- basic queries -------------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        return int(self._mul[a, b])

    def inv(self, a: int) -> int:
        return int(self._inv[a])

    def conjugate(self, x: int, g: int) -> int:
        """g^-1 * x * g."""
        m = self._mul
        return int(m[m[self._inv[g], x], g])

    def commutator(self, a: int, b: int) -> int:
        """a^-1 * b^-1 * a * b."""
        m = self._mul
        return int(m[m[m[self._inv[a], self._inv[b]], a], b])

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        result = self.identity
        while k:
            if k & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            k >>= 1
        return result

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.mul(x, a)
            k += 1
        return k

    def elements(self) -> range:
        return range(self.order)

    @property
    def is_abelian(self) -> bool:
        if self._abelian is None:
            self._abelian = bool(np.array_equal(self._mul, self._mul.T))
        return self._abelian

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels is not None else str(a)

    def eval_word(self, word, images) -> int:
        """Evaluate a signed 1-based generator word under the given images."""
        result = self.identity
        for letter in word:
            g = images[abs(letter) - 1]
            if letter < 0:
                g = self.inv(g)
            result = self.mul(result, g)
        return result

    # -- subgroup / conjugacy machinery ---------------------------------------

    def subgroup_closure(self, gens) -> set[int]:
        closure = {self.identity}
        frontier = [self.identity]
        gens = list(gens)
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    b = self.mul(a, g)
                    if b not in closure:
                        closure.add(b)
                        nxt.append(b)
            frontier = nxt
        return closure

    def centralizer(self, a: int) -> list[int]:
        hits = np.nonzero(self._mul[:, a] == self._mul[a, :])[0]
        return [int(v) for v in hits]

    def conjugacy_class(self, a: int) -> list[int]:
        m = self._mul
        conj = m[m[self._inv, a], np.arange(self.order)]
        return sorted({int(v) for v in conj})

    def conjugacy_classes(self) -> list[list[int]]:
        """Partition of the elements; blocks ordered by minimal element."""
        seen = [False] * self.order
        classes = []
        for a in range(self.order):
            if seen[a]:
                continue
            cls = self.conjugacy_class(a)
            for x in cls:
                seen[x] = True
            classes.append(cls)
        return classes

    # -- serialization --------------------------------------------------------

    def mul_table(self) -> list[list[int]]:
        return [[int(v) for v in row] for row in self._mul]

    def to_dict(self) -> dict:
        out = {"order": self.order, "mul": self.mul_table()}
        if self.labels is not None:
            out["labels"] = list(self.labels)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "FiniteGroup":
        mul = data["mul"]
        if data.get("order") is not None and int(data["order"]) != len(mul):
            raise GroupValidationError("declared order differs from table size")
        return cls(mul, labels=data.get("labels"))

    @classmethod
    def from_json(cls, text: str) -> "FiniteGroup":
        return cls.from_dict(json.loads(text))

    def __repr__(self):
        tag = self.name or "FiniteGroup"
        return f"<{tag} of order {self.order}>"

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and np.array_equal(self._mul, other._mul)

    def __hash__(self):
        return hash((self.order, self._mul.tobytes()))


# -- standard constructions ----------------------------------------------------


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise ValueError("cyclic order must be >= 1")
    if n > MAX_GROUP_ORDER:
        raise SizeLimitExceeded(f"order {n} exceeds {MAX_GROUP_ORDER}")
    idx = np.arange(n)
    table = (idx[:, None] + idx[None, :]) % n
    return FiniteGroup(table, labels=[str(i) for i in range(n)],
                       name=f"C{n}", _validated=True)


def dihedral(k: int) -> FiniteGroup:
    """Symmetries of the k-gon, order 2k (see module docstring for layout)."""
    if k < 1:
        raise ValueError("polygon size must be >= 1")
    if 2 * k > MAX_GROUP_ORDER:
        raise SizeLimitExceeded(f"order {2*k} exceeds {MAX_GROUP_ORDER}")
    n = 2 * k
    table = [[0] * n for _ in range(n)]
    for i in range(k):
        for j in range(k):
            table[i][j] = (i + j) % k                 # r^i r^j
            table[i][k + j] = k + (j - i) % k         # r^i (s r^j) = s r^(j-i)
            table[k + i][j] = k + (i + j) % k         # (s r^i) r^j
            table[k + i][k + j] = (j - i) % k         # (s r^i)(s r^j) = r^(j-i)
    labels = [f"r{i}" for i in range(k)] + [f"sr{i}" for i in range(k)]
    return FiniteGroup(table, labels=labels, name=f"D{k}", _validated=True)


def abelian(invariants) -> FiniteGroup:
    """Direct sum of cyclic groups of the given orders."""
    invariants = list(invariants)
    if not invariants or any(d < 1 for d in invariants):
        raise ValueError("invariant factors must be positive")
    order = math.prod(invariants)
    if order > MAX_GROUP_ORDER:
        raise SizeLimitExceeded(f"order {order} exceeds {MAX_GROUP_ORDER}")
    radix = invariants

    def decode(x):
        digits = []
        for d in reversed(radix):
            x, r = divmod(x, d)
            digits.append(r)
        return tuple(reversed(digits))

    def encode(digits):
        x = 0
        for d, v in zip(radix, digits):
            x = x * d + v
        return x

    table = [[0] * order for _ in range(order)]
    coords = [decode(x) for x in range(order)]
    for a in range(order):
        for b in range(order):
            table[a][b] = encode(tuple((u + v) % d for u, v, d
                                       in zip(coords[a], coords[b], radix)))
    labels = ["(" + ",".join(map(str, c)) + ")" for c in coords]
    name = "x".join(f"C{d}" for d in invariants)
    return FiniteGroup(table, labels=labels, name=name, _validated=True)


def symmetric(k: int) -> FiniteGroup:
    """Permutations of {0..k-1} in lexicographic order; product is
    diagram-order composition (left factor applied first)."""
    if not 1 <= k <= 5:
        raise ValueError("symmetric groups supported for 1 <= k <= 5")
    perms = sorted(_all_perms(range(k)))
    index = {p: i for i, p in enumerate(perms)}
    n = len(perms)
    table = [[0] * n for _ in range(n)]
    for a, p in enumerate(perms):
        for b, q in enumerate(perms):
            table[a][b] = index[tuple(q[p[i]] for i in range(k))]
    labels = [_cycle_label(p) for p in perms]
    return FiniteGroup(table, labels=labels, name=f"S{k}", _validated=True)


def _cycle_label(p) -> str:
    n = len(p)
    seen = [False] * n
    parts = []
    for i in range(n):
        if seen[i] or p[i] == i:
            seen[i] = True
            continue
        cyc = []
        j = i
        while not seen[j]:
            seen[j] = True
            cyc.append(j)
            j = p[j]
        parts.append("(" + " ".join(str(x + 1) for x in cyc) + ")")
    return "".join(parts) if parts else "e"


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    order = g.order * h.order
    if order > MAX_GROUP_ORDER:
        raise SizeLimitExceeded(f"order {order} exceeds {MAX_GROUP_ORDER}")
    gm, hm = g._mul, h._mul
    ho = h.order
    ga, gb = np.divmod(np.arange(order), ho)
    big = (gm[np.ix_(ga, ga)].astype(np.int64) * ho) + hm[np.ix_(gb, gb)]
    labels = [f"({g.label(a)},{h.label(b)})" for a, b in zip(ga, gb)]
    name = f"{g.name or 'G'}x{h.name or 'H'}"
    return FiniteGroup(big, labels=labels, name=name, _validated=True)


@dataclass(frozen=True)
class HeisenbergModel:
    """Finite class-2 nilpotent witness group for a pair of exponents.

    Elements are triples (p, q, c) with p, q mod P = n*m and c mod
    d = gcd(n, m), multiplied by (p,q,c)(p',q',c') = (p+p', q+q', c+c'+q*p').
    The distinguished generators x0 = (1,0,0) and y0 = (0,1,0) satisfy
    [x0,[x0,y0]] = [y0,[x0,y0]] = [x0,y0]^n = [x0,y0]^m = 1, generate the
    whole group, and the group is abelian exactly when gcd(n, m) = 1.
    """

    group: FiniteGroup
    x0: int
    y0: int
    n: int
    m: int
    period: int          # P = n*m
    commutator_mod: int  # d = gcd(n, m)


def heisenberg_model(n: int, m: int) -> HeisenbergModel:
    if n < 1 or m < 1:
        raise ValueError("exponents must be positive")
    if n * m > 50:
        raise SizeLimitExceeded("n*m must be at most 50")
    P = n * m
    d = math.gcd(n, m)
    order = P * P * d
    if order > MAX_GROUP_ORDER:
        raise SizeLimitExceeded(f"model order {order} exceeds {MAX_GROUP_ORDER}")

    idx = np.arange(order, dtype=np.int64)
    p = idx // (P * d)
    q = (idx // d) % P
    c = idx % d
    dt = _dtype_for(order)
    mul = np.empty((order, order), dtype=dt)
    block = max(1, (1 << 22) // order)
    for start in range(0, order, block):
        stop = min(start + block, order)
        pp = (p[start:stop, None] + p[None, :]) % P
        qq = (q[start:stop, None] + q[None, :]) % P
        cc = (c[start:stop, None] + c[None, :] + q[start:stop, None] * p[None, :]) % d
        mul[start:stop] = (pp * P + qq) * d + cc
    labels = None
    if order <= 512:
        labels = [f"({int(a)},{int(b)},{int(e)})" for a, b, e in zip(p, q, c)]
    group = FiniteGroup(mul, labels=labels, name=f"H({n},{m})", _validated=True)
    x0 = int(1 * P * d) if order > 1 else 0   # (1,0,0)
    y0 = int(d) if order > 1 else 0           # (0,1,0)
    return HeisenbergModel(group, x0, y0, n, m, P, d)


def make_standard_group(spec: str) -> FiniteGroup:
    """Build a group from a text spec.

    Accepted forms: ``cyclic N``, ``dihedral N``, ``abelian D1xD2x...``,
    ``symmetric N``, ``product(SPEC, SPEC)``.  Separators may be spaces or
    colons, e.g. ``cyclic:6``.
    """
    text = spec.strip()
    if text.startswith("product"):
        inner = text[len("product"):].strip()
        if not (inner.startswith("(") and inner.endswith(")")):
            raise ValueError(f"bad product spec: {spec!r}")
        depth = 0
        split_at = None
        body = inner[1:-1]
        for i, ch in enumerate(body):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "," and depth == 0:
                split_at = i
                break
        if split_at is None:
            raise ValueError(f"bad product spec: {spec!r}")
        return direct_product(make_standard_group(body[:split_at]),
                              make_standard_group(body[split_at + 1:]))
    parts = text.replace(":", " ").split()
    if len(parts) != 2:
        raise ValueError(f"bad group spec: {spec!r}")
    kind, arg = parts
    if kind == "cyclic":
        return cyclic(int(arg))
    if kind == "dihedral":
        return dihedral(int(arg))
    if kind == "symmetric":
        return symmetric(int(arg))
    if kind == "abelian":
        return abelian([int(t) for t in arg.split("x")])
    raise ValueError(f"unknown group kind: {kind!r}")


def require_abelian(g: FiniteGroup) -> FiniteGroup:
    if not g.is_abelian:
        raise NotAbelian(f"{g!r} is not abelian")
    return g
