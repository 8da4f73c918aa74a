"""Enveloping groups of finite quandles, studied through finite quotients.

The enveloping group of a quandle (one generator per element, one relation
y^-1 x y = x*y per pair) is always infinite, so nothing here tries to build
it.  Instead this module provides

  * the presentation itself and its abelianization (via exact Smith normal
    form over the integers),
  * evaluation of presentations inside concrete finite groups,
  * injectivity certificates: a finite group plus generator images that
    factor the natural map and separate all generators, and
  * the two-generator presentations for the cyclic-shift unions and the
    even dihedral quandles, verified semantically in finite witness models.

Words are sequences of signed 1-based generator indices: +k is generator
k-1, -k its inverse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import constructions, fingroup
from .errors import BudgetExhausted, CertificateFailed
from .fingroup import FiniteGroup, HeisenbergModel, heisenberg_model
from .quandle import FiniteQuandle

Word = tuple[int, ...]


# -- free word helpers -----------------------------------------------------------


def free_reduce(word) -> Word:
    out: list[int] = []
    for letter in word:
        if letter == 0:
            raise ValueError("letter 0 is not a generator")
        if out and out[-1] == -letter:
            out.pop()
        else:
            out.append(int(letter))
    return tuple(out)


def word_inverse(word) -> Word:
    return tuple(-letter for letter in reversed(word))


def commutator_word(a, b) -> Word:
    return free_reduce(word_inverse(a) + word_inverse(b) + tuple(a) + tuple(b))


def word_power(word, k: int) -> Word:
    if k < 0:
        return word_power(word_inverse(word), -k)
    return free_reduce(tuple(word) * k)


# -- presentations ----------------------------------------------------------------


@dataclass(frozen=True)
class GroupPresentation:
    num_generators: int
    relators: tuple[Word, ...]

    def __post_init__(self):
        for rel in self.relators:
            for letter in rel:
                if letter == 0 or abs(letter) > self.num_generators:
                    raise ValueError(f"letter {letter} out of range")
            if free_reduce(rel) != tuple(rel):
                raise ValueError("relators must be freely reduced")

    def exponent_matrix(self) -> list[list[int]]:
        rows = []
        for rel in self.relators:
            row = [0] * self.num_generators
            for letter in rel:
                row[abs(letter) - 1] += 1 if letter > 0 else -1
            rows.append(row)
        return rows

    def to_dict(self) -> dict:
        return {"num_generators": self.num_generators,
                "relators": [list(r) for r in self.relators]}


def presentation_of(q: FiniteQuandle, include_idempotent: bool = False) -> GroupPresentation:
    """One generator per element; relator y^-1 x y (x*y)^-1 per ordered pair.

    The diagonal pairs reduce to the empty word and are dropped unless
    ``include_idempotent`` asks to keep their (empty) trace.
    """
    n = q.order
    relators = []
    for x in range(n):
        for y in range(n):
            if x == y and not include_idempotent:
                continue
            rel = free_reduce((-(y + 1), x + 1, y + 1, -(q.table[x][y] + 1)))
            if rel or include_idempotent:
                relators.append(rel)
    return GroupPresentation(n, tuple(relators))


@dataclass(frozen=True)
class AbelianInvariants:
    free_rank: int
    torsion: tuple[int, ...]  # invariant factors > 1, in divisibility order

    def is_free_of_rank(self, r: int) -> bool:
        return self.free_rank == r and not self.torsion


def abelianization(p: GroupPresentation) -> AbelianInvariants:
    """Smith normal form of the relator exponent matrix."""
    matrix = p.exponent_matrix()
    if not matrix:
        return AbelianInvariants(p.num_generators, ())
    diag, _, _ = smith_normal_form(matrix)
    nonzero = [d for d in diag if d != 0]
    return AbelianInvariants(p.num_generators - len(nonzero),
                             tuple(d for d in nonzero if d > 1))


# -- Smith normal form -------------------------------------------------------------


def smith_normal_form(matrix):
    """Exact integer Smith normal form with transforms.

    Returns (diag, U, V) with U*M*V = D diagonal, d1 | d2 | ..., all di >= 0,
    and U, V unimodular.  The factorization is re-verified by multiplication
    before returning.
    """
    a = [[int(v) for v in row] for row in matrix]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    if any(len(row) != cols for row in a):
        raise ValueError("matrix rows have unequal length")
    u = [[int(i == j) for j in range(rows)] for i in range(rows)]
    v = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, k):  # row dst += k * row src
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, k):
        for row in a:
            row[dst] += k * row[src]
        for row in v:
            row[dst] += k * row[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    limit = min(rows, cols)
    while t < limit:
        # Find the nonzero entry of least magnitude in the remaining block.
        pivot = None
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < best):
                    best = abs(a[i][j])
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        if a[t][t] < 0:
            negate_row(t)
        dirty = False
        for i in range(t + 1, rows):
            if a[i][t] % a[t][t] != 0:
                dirty = True
            add_row(t, i, -(a[i][t] // a[t][t]))
        for j in range(t + 1, cols):
            if a[t][j] % a[t][t] != 0:
                dirty = True
            add_col(t, j, -(a[t][j] // a[t][t]))
        if dirty or any(a[i][t] for i in range(t + 1, rows)) \
                or any(a[t][j] for j in range(t + 1, cols)):
            continue  # remainders became new, smaller pivot candidates
        # Divisibility: fold in any entry the pivot does not divide.
        offender = None
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if a[i][j] % a[t][t] != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            add_row(offender, t, 1)
            continue
        t += 1

    diag = [a[i][i] for i in range(limit)]
    _verify_snf(matrix, diag, u, v)
    return diag, u, v


def _verify_snf(original, diag, u, v):
    rows, cols = len(u), len(v)
    m = [[int(x) for x in row] for row in original]
    um = [[sum(u[i][k] * m[k][j] for k in range(rows)) for j in range(cols)]
          for i in range(rows)]
    umv = [[sum(um[i][k] * v[k][j] for k in range(cols)) for j in range(cols)]
           for i in range(rows)]
    for i in range(rows):
        for j in range(cols):
            want = diag[i] if i == j and i < len(diag) else 0
            if umv[i][j] != want:
                raise AssertionError("SNF verification failed: U*M*V != D")
    if abs(_det(u)) != 1 or abs(_det(v)) != 1:
        raise AssertionError("SNF verification failed: transform not unimodular")
    for i, d in enumerate(diag):
        if d < 0:
            raise AssertionError("SNF verification failed: negative entry")
        if i + 1 < len(diag):
            nxt = diag[i + 1]
            divides = (nxt == 0) if d == 0 else (nxt % d == 0)
            if not divides:
                raise AssertionError("SNF verification failed: divisibility chain")


def _det(m):
    """Integer determinant by fraction-free Gaussian elimination (Bareiss)."""
    n = len(m)
    a = [[int(v) for v in row] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


# -- evaluation in finite groups ------------------------------------------------------


@dataclass(frozen=True)
class Assignment:
    """Images for the generators of a presentation inside a finite group."""

    target: FiniteGroup
    images: tuple[int, ...]


def eval_assignment(p: GroupPresentation, asg: Assignment) -> bool:
    """True when every relator maps to the identity of the target."""
    if len(asg.images) != p.num_generators:
        raise ValueError("one image per generator required")
    g = asg.target
    return all(g.eval_word(rel, asg.images) == g.identity for rel in p.relators)


def failing_relator(p: GroupPresentation, asg: Assignment):
    g = asg.target
    for rel in p.relators:
        if g.eval_word(rel, asg.images) != g.identity:
            return rel
    return None


# -- injectivity certificates -----------------------------------------------------------


@dataclass(frozen=True)
class InjectivityCertificate:
    """Finite-quotient witness that the natural map into the enveloping
    group separates the quandle elements.

    Soundness: the images define a quandle homomorphism into the conjugation
    quandle of ``group``, so the induced map from the enveloping group exists
    by the universal property; if the images are pairwise distinct the natural
    map must itself be injective.
    """

    quandle: FiniteQuandle
    group: FiniteGroup
    images: tuple[int, ...]

    def to_dict(self, quandle_ref: str | None = None) -> dict:
        return {
            "quandle": quandle_ref if quandle_ref is not None else self.quandle.to_dict(),
            "group": self.group.to_dict(),
            "images": list(self.images),
        }

    @classmethod
    def from_dict(cls, data: dict, quandle: FiniteQuandle | None = None):
        if quandle is None:
            if not isinstance(data["quandle"], dict):
                raise ValueError("certificate carries a quandle reference; "
                                 "pass the quandle explicitly")
            quandle = FiniteQuandle.from_dict(data["quandle"])
        group = FiniteGroup.from_dict(data["group"])
        return injectivity_certificate(
            quandle, Assignment(group, tuple(data["images"])))


def injectivity_certificate(q: FiniteQuandle, asg: Assignment) -> InjectivityCertificate:
    """Check an assignment and package it as a certificate.

    Raises CertificateFailed with reason "collision" (images not pairwise
    distinct), "not_hom" (images do not respect the operation under
    conjugation), or "relator" (presentation relator fails; implied by the
    direct check but evaluated independently).
    """
    g = asg.target
    images = asg.images
    if len(images) != q.order:
        raise ValueError("one image per quandle element required")
    if len(set(images)) != q.order:
        seen: dict[int, int] = {}
        for x, v in enumerate(images):
            if v in seen:
                raise CertificateFailed("collision", (seen[v], x))
            seen[v] = x
    for x in range(q.order):
        for y in range(q.order):
            if images[q.table[x][y]] != g.conjugate(images[x], images[y]):
                raise CertificateFailed("not_hom", (x, y))
    pres = presentation_of(q)
    bad = failing_relator(pres, asg)
    if bad is not None:
        raise CertificateFailed("relator", bad)
    return InjectivityCertificate(q, g, tuple(images))


def default_catalog(max_order: int = 48) -> list[FiniteGroup]:
    """Deterministic list of small target groups for certificate search."""
    groups: list[FiniteGroup] = []
    for k in range(1, 25):
        if k <= max_order:
            groups.append(fingroup.cyclic(k))
    for k in range(1, 13):
        if 2 * k <= max_order:
            groups.append(fingroup.dihedral(k))
    for k in range(1, 5):
        if math.factorial(k) <= max_order:
            groups.append(fingroup.symmetric(k))
    return groups


def search_certificate(q: FiniteQuandle, catalog=None, budget: int = 2_000_000):
    """First certificate over the catalog in deterministic order, or None.

    A None return means the whole search space was exhausted (absence of a
    certificate is not a proof of non-injectivity).  Running past ``budget``
    assignment nodes raises BudgetExhausted instead.
    """
    if catalog is None:
        catalog = default_catalog()
    nodes = 0
    n = q.order
    t = q.table
    for g in catalog:
        if g.order < n:
            continue
        images = [-1] * n
        used = [False] * g.order

        def extend(x: int) -> bool:
            nonlocal nodes
            if x == n:
                return True
            for v in range(g.order):
                if used[v]:
                    continue
                nodes += 1
                if nodes > budget:
                    raise BudgetExhausted(f"certificate search passed {budget} nodes")
                images[x] = v
                used[v] = True
                ok = True
                for y in range(x + 1):
                    a = t[x][y]
                    if a <= x and images[a] != g.conjugate(v, images[y]):
                        ok = False
                        break
                    b = t[y][x]
                    if b <= x and images[b] != g.conjugate(images[y], v):
                        ok = False
                        break
                if ok:
                    for i in range(x):
                        for j in range(x):
                            if t[i][j] == x and \
                                    g.conjugate(images[i], images[j]) != v:
                                ok = False
                                break
                        if not ok:
                            break
                if ok and extend(x + 1):
                    return True
                used[v] = False
                images[x] = -1
            return False

        if extend(0):
            return injectivity_certificate(q, Assignment(g, tuple(images)))
    return None


# -- reconstruction through a certificate ------------------------------------------------


@dataclass(frozen=True)
class ReconstructionReport:
    isomorphic: bool
    witness: tuple[int, ...] | None
    base_elements: tuple[int, ...]
    rebuilt_order: int


def reconstruct_check(q: FiniteQuandle, cert: InjectivityCertificate) -> ReconstructionReport:
    """Rebuild a group-subset quandle from certificate data and compare.

    A is the image of one representative (the minimum) per orbit of Q; the
    rebuilt quandle lives over the certificate's finite group, which stands
    in for the enveloping group, so a negative answer is reported rather than
    treated as a refutation.
    """
    from . import ga
    from .quandle import is_isomorphic

    reps = [block[0] for block in q.orbits()]
    base = tuple(cert.images[r] for r in reps)
    rebuilt = ga.ga_quandle(cert.group, base)
    witness = is_isomorphic(q, rebuilt.quandle)
    return ReconstructionReport(witness is not None, witness, base,
                                rebuilt.quandle.order)


# -- two-generator presentations and their model verifications ----------------------------


def u_reduced_presentation(n: int, m: int) -> GroupPresentation:
    """[x,[x,y]] = [y,[x,y]] = [x,y]^n = [x,y]^m = 1 on two generators."""
    if n < 1 or m < 1:
        raise ValueError("exponents must be positive")
    x, y = (1,), (2,)
    c = commutator_word(x, y)
    relators = (
        commutator_word(x, c),
        commutator_word(y, c),
        word_power(c, n),
        word_power(c, m),
    )
    return GroupPresentation(2, tuple(free_reduce(r) for r in relators if r))


@dataclass(frozen=True)
class UReductionReport:
    n: int
    m: int
    model_order: int
    full_presentation_holds: bool
    reduced_presentation_holds: bool
    substitution_consistent: bool
    images_generate: bool
    model_abelian: bool
    coprime: bool

    @property
    def ok(self) -> bool:
        return (self.full_presentation_holds and self.reduced_presentation_holds
                and self.substitution_consistent and self.images_generate
                and self.model_abelian == self.coprime)


def verify_u_reduction(n: int, m: int) -> UReductionReport:
    """Check both presentations of the cyclic-shift union inside the finite
    nilpotent witness model.

    Substituted generator images follow x_i = y0^-i x0 y0^i and
    y_r = x0^-r y0 x0^r (equivalently x_i = x0 c^i, y_r = y0 c^-r for
    c = [x0, y0]); the model is abelian exactly when gcd(n, m) = 1.
    """
    model = heisenberg_model(n, m)
    g = model.group
    x0, y0 = model.x0, model.y0

    # Images of all n + m generators of the full presentation.
    images = []
    for i in range(n):
        images.append(g.mul(g.mul(g.power(y0, -i), x0), g.power(y0, i)))
    for r in range(m):
        images.append(g.mul(g.mul(g.power(x0, -r), y0), g.power(x0, r)))
    # The conjugated images must match the central closed form x0 c^i,
    # y0 c^-r; a mismatch would mean the commutator is not central.
    c = g.commutator(x0, y0)
    consistent = all(
        images[i] == g.mul(x0, g.power(c, i)) for i in range(n)
    ) and all(
        images[n + r] == g.mul(y0, g.power(c, -r)) for r in range(m)
    )

    full = presentation_of(constructions.u_quandle(n, m))
    full_ok = eval_assignment(full, Assignment(g, tuple(images)))
    reduced = u_reduced_presentation(n, m)
    reduced_ok = eval_assignment(reduced, Assignment(g, (x0, y0)))
    generate = len(g.subgroup_closure([x0, y0])) == g.order
    return UReductionReport(n, m, g.order, full_ok, reduced_ok, consistent,
                            generate, g.is_abelian, math.gcd(n, m) == 1)


def r2n_presentation(n: int) -> GroupPresentation:
    """[a0,a1^2] = [a0^2,a1] = [a0,(a0a1)^n] = [a1,(a0a1)^n] = 1."""
    if n < 1:
        raise ValueError("n must be positive")
    a0, a1 = (1,), (2,)
    prod_n = word_power((1, 2), n)
    relators = (
        commutator_word(a0, word_power(a1, 2)),
        commutator_word(a1, word_power(a0, 2)),
        commutator_word(a0, prod_n),
        commutator_word(a1, prod_n),
    )
    return GroupPresentation(2, tuple(free_reduce(r) for r in relators if r))


@dataclass(frozen=True)
class R2nReport:
    n: int
    group_order: int
    relators_hold: bool
    derived_images: tuple[int, ...]
    images_distinct: bool
    pair_relators_checked: int
    pair_relators_hold: bool

    @property
    def ok(self) -> bool:
        return self.relators_hold and self.images_distinct and self.pair_relators_hold


def verify_r2n(n: int) -> R2nReport:
    """Evaluate the two-generator presentation of the dihedral quandle of
    order 2n inside the dihedral group of the 2n-gon (order 4n).

    a0 and a1 map to adjacent reflections; the derived images
    a_{2r+e} = (a0 a1)^-r a_e (a0 a1)^r must be pairwise distinct and satisfy
    every conjugation relator a_j^-1 a_i a_j = a_{2j-i mod 2n}.
    """
    g = fingroup.dihedral(2 * n)
    k = 2 * n
    y0, y1 = k, k + 1  # reflections s and s*r
    pres = r2n_presentation(n)
    relators_hold = eval_assignment(pres, Assignment(g, (y0, y1)))

    prod = g.mul(y0, y1)
    derived = []
    for i in range(2 * n):
        r, eps = divmod(i, 2)
        base = y0 if eps == 0 else y1
        derived.append(g.conjugate(base, g.power(prod, r)))
    distinct = len(set(derived)) == 2 * n

    checked = 0
    hold = True
    for i in range(2 * n):
        for j in range(2 * n):
            checked += 1
            want = derived[(2 * j - i) % (2 * n)]
            if g.conjugate(derived[i], derived[j]) != want:
                hold = False
    return R2nReport(n, g.order, relators_hold, tuple(derived), distinct,
                     checked, hold)


def dihedral_reflection_assignment(n: int) -> Assignment:
    """The canonical assignment for the dihedral quandle of order n:
    element i maps to the reflection s*r^i in the dihedral group of the
    n-gon (order 2n)."""
    g = fingroup.dihedral(n)
    return Assignment(g, tuple(n + i for i in range(n)))
