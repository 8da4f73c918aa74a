"""Quandles built from a finite group G and a subset A of its elements.

Elements are pairs (a, u) with a in A and u in G, taken modulo left
multiplication of u by the centralizer of a, with

    (a, u) * (b, v)    = (a, u v^-1 b v)
    (a, u) *^-1 (b, v) = (a, u v^-1 b^-1 v)

Each class is stored by its canonical representative: the minimal element
index in the coset C_G(a) u.  Quandle elements are numbered block by block
(A in the given order, coset representatives ascending inside a block), so
outputs are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DuplicateBaseElement
from .fingroup import FiniteGroup
from .perms import Perm, is_permutation
from .quandle import FiniteQuandle, is_isomorphic, subquandle
from . import constructions


@dataclass(frozen=True)
class GAElement:
    """Position of a class (a, C_G(a) u): index into A plus the canonical
    (minimal) coset representative."""

    a_index: int
    coset_rep: int


@dataclass(frozen=True)
class GAQuandle:
    group: FiniteGroup
    base: tuple[int, ...]              # the subset A, as element indices
    quandle: FiniteQuandle
    element_labels: tuple[GAElement, ...]

    def __post_init__(self):
        lookup = {(e.a_index, e.coset_rep): i
                  for i, e in enumerate(self.element_labels)}
        cents = tuple(tuple(self.group.centralizer(a)) for a in self.base)
        object.__setattr__(self, "_lookup", lookup)
        object.__setattr__(self, "_centralizers", cents)

    def index_of(self, a_index: int, u: int) -> int:
        """Quandle index of the class of (A[a_index], u)."""
        rep = self._canonical(a_index, u)
        return self._lookup[(a_index, rep)]

    def _canonical(self, a_index: int, u: int) -> int:
        g = self.group
        return min(g.mul(c, u) for c in self._centralizers[a_index])


def ga_quandle(group: FiniteGroup, base) -> GAQuandle:
    """Build the quandle of centralizer cosets over the subset ``base``."""
    a_list = [int(a) for a in base]
    if not a_list:
        raise ValueError("base subset must be non-empty")
    if len(set(a_list)) != len(a_list):
        raise DuplicateBaseElement(f"repeated base element in {a_list}")

    centralizers = [group.centralizer(a) for a in a_list]
    rep_of: list[dict[int, int]] = []   # per block: group element -> coset rep
    block_reps: list[list[int]] = []
    for cent in centralizers:
        mapping: dict[int, int] = {}
        for u in group.elements():
            if u in mapping:
                continue
            coset = sorted(group.mul(c, u) for c in cent)
            rep = coset[0]
            for w in coset:
                mapping[w] = rep
        rep_of.append(mapping)
        block_reps.append(sorted(set(mapping.values())))

    labels: list[GAElement] = []
    index: dict[tuple[int, int], int] = {}
    for ai in range(len(a_list)):
        for rep in block_reps[ai]:
            index[(ai, rep)] = len(labels)
            labels.append(GAElement(ai, rep))

    n = len(labels)
    table = [[0] * n for _ in range(n)]
    for i, (ai, u) in enumerate((e.a_index, e.coset_rep) for e in labels):
        for j, (bj, v) in enumerate((e.a_index, e.coset_rep) for e in labels):
            w = group.mul(u, group.conjugate(a_list[bj], v))
            table[i][j] = index[(ai, rep_of[ai][w])]
    names = [f"({group.label(a_list[e.a_index])},{group.label(e.coset_rep)})"
             for e in labels]
    quandle = FiniteQuandle(table, names=names)
    return GAQuandle(group, tuple(a_list), quandle, tuple(labels))


def ga_op_inv(qa: GAQuandle, i: int, j: int) -> int:
    """(a,u) *^-1 (b,v) = (a, u v^-1 b^-1 v), resolved to quandle indices."""
    e, f = qa.element_labels[i], qa.element_labels[j]
    g = qa.group
    b = qa.base[f.a_index]
    w = g.mul(e.coset_rep, g.conjugate(g.inv(b), f.coset_rep))
    return qa.index_of(e.a_index, w)


def iota(qa: GAQuandle, g_elt: int) -> Perm:
    """The automorphism (a, u) -> (a, u g); verified before returning."""
    images = tuple(qa.index_of(e.a_index, qa.group.mul(e.coset_rep, g_elt))
                   for e in qa.element_labels)
    if not is_permutation(images):
        raise AssertionError("right translation is not a bijection")
    t = qa.quandle.table
    n = qa.quandle.order
    for x in range(n):
        for y in range(n):
            if images[t[x][y]] != t[images[x]][images[y]]:
                raise AssertionError("right translation is not an automorphism")
    return images


@dataclass(frozen=True)
class AugmentationReport:
    aq1_holds: bool
    aq2_holds: bool
    augmentation_is_hom: bool
    failures: tuple[tuple, ...]

    @property
    def ok(self) -> bool:
        return self.aq1_holds and self.aq2_holds and self.augmentation_is_hom


def augmentation_check(qa: GAQuandle) -> AugmentationReport:
    """Verify the augmented-quandle structure exhaustively.

    The augmentation sends (a, u) to u^-1 a u; the group acts by
    (a, u) . h = (a, u h).  Checks: q . eps(q) = q, eps(q . h) = h^-1 eps(q) h,
    and that eps is a quandle homomorphism into the conjugation quandle.
    """
    g = qa.group
    n = qa.quandle.order
    eps = [g.conjugate(qa.base[e.a_index], e.coset_rep)
           for e in qa.element_labels]
    failures: list[tuple] = []

    aq1 = True
    for i, e in enumerate(qa.element_labels):
        if qa.index_of(e.a_index, g.mul(e.coset_rep, eps[i])) != i:
            aq1 = False
            failures.append(("AQ1", i))
    aq2 = True
    for i, e in enumerate(qa.element_labels):
        for h in g.elements():
            moved = qa.index_of(e.a_index, g.mul(e.coset_rep, h))
            if eps[moved] != g.conjugate(eps[i], h):
                aq2 = False
                failures.append(("AQ2", i, h))
    hom = True
    t = qa.quandle.table
    for x in range(n):
        for y in range(n):
            if eps[t[x][y]] != g.conjugate(eps[x], eps[y]):
                hom = False
                failures.append(("hom", x, y))
    return AugmentationReport(aq1, aq2, hom, tuple(failures))


@dataclass(frozen=True)
class ConjComparison:
    isomorphic: bool
    witness: tuple[int, ...] | None
    ga_orbit_count: int
    subquandle_orbit_count: int
    ga_order: int
    subquandle_order: int
    pairwise_nonconjugate: bool


def conjugation_union_subquandle(group: FiniteGroup, base) -> FiniteQuandle:
    """Subquandle of the conjugation quandle on the union of the conjugacy
    classes of the base elements."""
    support = sorted({x for a in base for x in group.conjugacy_class(a)})
    return subquandle(constructions.conj(group), support)


def compare_with_ga(group: FiniteGroup, base) -> ConjComparison:
    """Compare the coset quandle with the conjugation subquandle.

    When the base elements are pairwise non-conjugate the two are isomorphic;
    otherwise the orbit counts may already differ.
    """
    qa = ga_quandle(group, base)
    sub = conjugation_union_subquandle(group, base)
    classes = [frozenset(group.conjugacy_class(a)) for a in base]
    nonconj = len(set(classes)) == len(classes) and all(
        base[i] not in classes[j]
        for i in range(len(base)) for j in range(len(base)) if i != j)
    witness = None
    if qa.quandle.order == sub.order:
        witness = is_isomorphic(qa.quandle, sub)
    return ConjComparison(witness is not None, witness,
                          len(qa.quandle.orbits()), len(sub.orbits()),
                          qa.quandle.order, sub.order, nonconj)
