"""Free racks and quandles, free products, and presented quandles.

Free rack elements are pairs (base generator, free-group word) with

    (a, u) * (b, v)    = (a, u v^-1 b v)
    (a, u) *^-1 (b, v) = (a, u v^-1 b^-1 v)

and the free quandle is the quotient identifying (a, w) with (a, a w); its
canonical forms simply drop leading powers of the base generator.  Words use
signed 1-based letters (letter g+1 stands for generator g), reused from the
envelope module.

Free products of two finite groups are handled through syllable normal
forms: alternating sequences of non-identity factor elements.  The
centralizer of a non-identity factor element inside the free product is its
centralizer inside its own factor (single-syllable criterion), which makes
equality in the coset quandle over a free product decidable.

Quandle presentations are generator names plus pairs of operation trees;
equality of presented words is only semi-decided, so the bounded closure
reports class-count estimates, never bare booleans.
"""

from __future__ import annotations

from dataclasses import dataclass

from .envelope import GroupPresentation, Word, free_reduce, word_inverse
from .errors import DepthExceeded, IdentityBaseElement, QuandlesError, SizeLimitExceeded
from .fingroup import FiniteGroup

MAX_CLOSURE_DEPTH = 4
MAX_ENUMERATION = 200_000


# -- free rack / free quandle -----------------------------------------------------


def reduce(word) -> Word:
    """Freely reduce a word (idempotent)."""
    return free_reduce(word)


@dataclass(frozen=True)
class FreeRackElement:
    base: int        # generator index, 0-based
    word: Word       # freely reduced, signed 1-based letters

    def __post_init__(self):
        if free_reduce(self.word) != tuple(self.word):
            object.__setattr__(self, "word", free_reduce(self.word))


@dataclass(frozen=True)
class FreeQuandleElement:
    """Canonical form: the word does not start with a power of the base."""

    base: int
    word: Word

    def __post_init__(self):
        if self.word and abs(self.word[0]) == self.base + 1:
            raise ValueError("word starts with a power of the base generator")


def fr_op(p: FreeRackElement, q: FreeRackElement) -> FreeRackElement:
    return FreeRackElement(
        p.base,
        free_reduce(p.word + word_inverse(q.word) + (q.base + 1,) + q.word))


def fr_op_inv(p: FreeRackElement, q: FreeRackElement) -> FreeRackElement:
    return FreeRackElement(
        p.base,
        free_reduce(p.word + word_inverse(q.word) + (-(q.base + 1),) + q.word))


def fq_canonicalize(p: FreeRackElement) -> FreeQuandleElement:
    word = free_reduce(p.word)
    while word and abs(word[0]) == p.base + 1:
        word = word[1:]
    return FreeQuandleElement(p.base, word)


def _as_rack(p) -> FreeRackElement:
    if isinstance(p, FreeQuandleElement):
        return FreeRackElement(p.base, p.word)
    return p


def fq_op(p, q) -> FreeQuandleElement:
    return fq_canonicalize(fr_op(_as_rack(p), _as_rack(q)))


def fq_op_inv(p, q) -> FreeQuandleElement:
    return fq_canonicalize(fr_op_inv(_as_rack(p), _as_rack(q)))


def fq_equal(p, q) -> bool:
    return fq_canonicalize(_as_rack(p)) == fq_canonicalize(_as_rack(q))


def _letter_key(letter: int):
    return (abs(letter), 0 if letter > 0 else 1)


def free_quandle_elements(num_generators: int, max_word_length: int
                          ) -> list[FreeQuandleElement]:
    """All canonical free-quandle elements with word length up to the bound,
    ordered by (base, length, letters)."""
    if num_generators < 1:
        raise ValueError("need at least one generator")
    letters = []
    for g in range(num_generators):
        letters.extend([g + 1, -(g + 1)])
    letters.sort(key=_letter_key)
    out: list[FreeQuandleElement] = []
    for base in range(num_generators):
        frontier: list[Word] = [()]
        out.append(FreeQuandleElement(base, ()))
        for _ in range(max_word_length):
            nxt = []
            for w in frontier:
                for letter in letters:
                    if not w and abs(letter) == base + 1:
                        continue
                    if w and w[-1] == -letter:
                        continue
                    nxt.append(w + (letter,))
                    if len(out) + len(nxt) > MAX_ENUMERATION:
                        raise SizeLimitExceeded(
                            f"enumeration exceeds {MAX_ENUMERATION} elements")
            nxt.sort()
            out.extend(FreeQuandleElement(base, w) for w in nxt)
            frontier = nxt
    return out


# -- free products of finite groups --------------------------------------------------

Syllable = tuple[int, int]            # (factor index 0/1, element index)
FreeProductWord = tuple[Syllable, ...]


class FreeProductGroup:
    """Two finite factors; elements are syllable normal forms."""

    def __init__(self, g1: FiniteGroup, g2: FiniteGroup):
        self.factors = (g1, g2)

    def syllable(self, factor: int, elt: int) -> FreeProductWord:
        g = self.factors[factor]
        if elt == g.identity:
            return ()
        return ((factor, elt),)

    def _normalize(self, syllables) -> FreeProductWord:
        out: list[Syllable] = []
        for factor, elt in syllables:
            g = self.factors[factor]
            if elt == g.identity:
                continue
            if out and out[-1][0] == factor:
                merged = g.mul(out[-1][1], elt)
                out.pop()
                # An annihilated pair may expose an other-factor syllable;
                # the stack invariant keeps at most one merge per step.
                if merged != g.identity:
                    out.append((factor, merged))
            else:
                out.append((factor, elt))
        return tuple(out)

    def nf_mult(self, w1: FreeProductWord, w2: FreeProductWord) -> FreeProductWord:
        return self._normalize(tuple(w1) + tuple(w2))

    def nf_inv(self, w: FreeProductWord) -> FreeProductWord:
        return tuple((f, self.factors[f].inv(e)) for f, e in reversed(w))

    def in_factor_centralizer(self, w: FreeProductWord, factor: int, a: int) -> bool:
        """True when w is a single syllable of the given factor commuting
        with a (or the empty word)."""
        if not w:
            return True
        if len(w) != 1 or w[0][0] != factor:
            return False
        g = self.factors[factor]
        return g.mul(w[0][1], a) == g.mul(a, w[0][1])


# -- coset quandle over a free product -------------------------------------------------


@dataclass(frozen=True)
class FreeGAElement:
    a_index: int
    word: FreeProductWord


class FreeGAQuandle:
    """The (generally infinite) coset quandle over a free product of two
    finite groups, with decidable equality.

    Base elements are (factor, element) pairs with non-identity elements;
    (a, u) equals (a, v) exactly when u v^-1 lies in the centralizer of a
    inside its own factor.
    """

    def __init__(self, g1: FiniteGroup, g2: FiniteGroup, base):
        self.product = FreeProductGroup(g1, g2)
        self.base: tuple[Syllable, ...] = tuple((int(f), int(e)) for f, e in base)
        for factor, elt in self.base:
            if factor not in (0, 1):
                raise ValueError("factor index must be 0 or 1")
            if elt == self.product.factors[factor].identity:
                raise IdentityBaseElement(
                    "identity base elements are rejected: their centralizer "
                    "is the whole free product")
        if len(set(self.base)) != len(self.base):
            raise ValueError("repeated base element")

    def element(self, a_index: int, word=()) -> FreeGAElement:
        return self.canonical(FreeGAElement(a_index, tuple(word)))

    def base_elements(self) -> list[FreeGAElement]:
        return [self.element(i) for i in range(len(self.base))]

    def canonical(self, x: FreeGAElement) -> FreeGAElement:
        """Minimal coset representative: normalize or drop a leading
        syllable lying in the base element's factor."""
        factor, a = self.base[x.a_index]
        g = self.product.factors[factor]
        word = self.product._normalize(x.word)
        if word and word[0][0] == factor:
            head = word[0][1]
            coset = sorted(g.mul(c, head) for c in g.centralizer(a))
            if coset[0] == g.identity:
                word = word[1:]
            else:
                word = ((factor, coset[0]),) + word[1:]
        return FreeGAElement(x.a_index, word)

    def equal(self, x: FreeGAElement, y: FreeGAElement) -> bool:
        if x.a_index != y.a_index:
            return False
        factor, a = self.base[x.a_index]
        diff = self.product.nf_mult(x.word, self.product.nf_inv(y.word))
        return self.product.in_factor_centralizer(diff, factor, a)

    def _conjugated_base(self, y: FreeGAElement, invert: bool) -> FreeProductWord:
        factor, b = self.base[y.a_index]
        g = self.product.factors[factor]
        mid = self.product.syllable(factor, g.inv(b) if invert else b)
        return self.product.nf_mult(
            self.product.nf_mult(self.product.nf_inv(y.word), mid), y.word)

    def op(self, x: FreeGAElement, y: FreeGAElement) -> FreeGAElement:
        return self.canonical(FreeGAElement(
            x.a_index,
            self.product.nf_mult(x.word, self._conjugated_base(y, False))))

    def op_inv(self, x: FreeGAElement, y: FreeGAElement) -> FreeGAElement:
        return self.canonical(FreeGAElement(
            x.a_index,
            self.product.nf_mult(x.word, self._conjugated_base(y, True))))

    def orbit_of(self, x: FreeGAElement, depth: int) -> list[FreeGAElement]:
        """Orbit elements reachable with words of at most ``depth`` syllables.

        Expansion applies the translations of the base elements and of every
        element already discovered; the result is a depth-bounded lower
        approximation of the (possibly infinite) orbit, in BFS order.
        """
        start = self.canonical(x)
        seen = {start}
        order = [start]
        frontier = [start]
        while frontier:
            nxt = []
            for z in frontier:
                actors = self.base_elements() + order
                for q in actors:
                    for moved in (self.op(z, q), self.op_inv(z, q)):
                        if len(moved.word) <= depth and moved not in seen:
                            seen.add(moved)
                            order.append(moved)
                            nxt.append(moved)
            frontier = nxt
        return order

    def generated_subquandle(self, depth: int) -> list[FreeGAElement]:
        """Closure of the base elements under both operations, keeping
        elements whose canonical words have at most ``depth`` syllables."""
        elems = list(self.base_elements())
        seen = set(elems)
        changed = True
        while changed:
            changed = False
            snapshot = list(elems)
            for x in snapshot:
                for y in snapshot:
                    for z in (self.op(x, y), self.op_inv(x, y)):
                        if len(z.word) <= depth and z not in seen:
                            seen.add(z)
                            elems.append(z)
                            changed = True
            if len(elems) > MAX_ENUMERATION:
                raise SizeLimitExceeded("generated subquandle grew too large")
        return elems


def ga_free(g1: FiniteGroup, g2: FiniteGroup, base) -> FreeGAQuandle:
    return FreeGAQuandle(g1, g2, base)


# -- quandle presentations -------------------------------------------------------------

# Operation trees: ("g", index) | ("op", left, right) | ("opinv", left, right)
QWord = tuple


def gen(i: int) -> QWord:
    return ("g", i)


def qop(left: QWord, right: QWord) -> QWord:
    return ("op", left, right)


def qop_inv(left: QWord, right: QWord) -> QWord:
    return ("opinv", left, right)


@dataclass(frozen=True)
class QuandlePresentation:
    generators: tuple[str, ...]
    relations: tuple[tuple[QWord, QWord], ...]

    def __post_init__(self):
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("generator names must be distinct")
        for lhs, rhs in self.relations:
            _validate_qword(lhs, len(self.generators))
            _validate_qword(rhs, len(self.generators))

    def to_dict(self) -> dict:
        return {
            "generators": list(self.generators),
            "relations": [[format_qword(l, self.generators),
                           format_qword(r, self.generators)]
                          for l, r in self.relations],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "QuandlePresentation":
        gens = tuple(data["generators"])
        rels = tuple(
            (parse_qword(l, gens), parse_qword(r, gens))
            for l, r in data.get("relations", []))
        return cls(gens, rels)


def _validate_qword(w: QWord, num_gens: int):
    tag = w[0]
    if tag == "g":
        if not 0 <= w[1] < num_gens:
            raise ValueError(f"generator index {w[1]} out of range")
    elif tag in ("op", "opinv"):
        _validate_qword(w[1], num_gens)
        _validate_qword(w[2], num_gens)
    else:
        raise ValueError(f"bad operation tree node {tag!r}")


def format_qword(w: QWord, names) -> str:
    if w[0] == "g":
        return names[w[1]]
    op_name = "op" if w[0] == "op" else "opinv"
    return f"({op_name} {format_qword(w[1], names)} {format_qword(w[2], names)})"


def parse_qword(text: str, names) -> QWord:
    """Parse the s-expression grammar ``(op A B)`` / ``(opinv A B)`` with
    generator names as atoms."""
    tokens = text.replace("(", " ( ").replace(")", " ) ").split()
    pos = 0

    def parse():
        nonlocal pos
        if pos >= len(tokens):
            raise ValueError("unexpected end of input")
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            if pos >= len(tokens) or tokens[pos] not in ("op", "opinv"):
                raise ValueError("expected op or opinv after '('")
            tag = tokens[pos]
            pos += 1
            left = parse()
            right = parse()
            if pos >= len(tokens) or tokens[pos] != ")":
                raise ValueError("expected ')'")
            pos += 1
            return (tag, left, right)
        if tok == ")":
            raise ValueError("unexpected ')'")
        try:
            return ("g", list(names).index(tok))
        except ValueError:
            raise ValueError(f"unknown generator {tok!r}") from None

    tree = parse()
    if pos != len(tokens):
        raise ValueError("trailing input after word")
    return tree


def _shift_qword(w: QWord, offset: int) -> QWord:
    if w[0] == "g":
        return ("g", w[1] + offset)
    return (w[0], _shift_qword(w[1], offset), _shift_qword(w[2], offset))


def presentation_free_product(p1: QuandlePresentation, p2: QuandlePresentation
                              ) -> QuandlePresentation:
    """Concatenate generators and relations; clashes in the second factor's
    names get numeric suffixes."""
    names = list(p1.generators)
    taken = set(names)
    renamed = []
    for g_name in p2.generators:
        candidate = g_name
        attempt = 1
        while candidate in taken:
            attempt += 1
            candidate = f"{g_name}_{attempt}"
            if attempt > 1000:
                raise QuandlesError(f"cannot rename generator {g_name!r}")
        taken.add(candidate)
        renamed.append(candidate)
    offset = len(names)
    relations = tuple(p1.relations) + tuple(
        (_shift_qword(l, offset), _shift_qword(r, offset))
        for l, r in p2.relations)
    combined = QuandlePresentation(tuple(names + renamed), relations)
    # Structural sanity: the enveloping presentation must split factor by
    # factor.  True by construction; kept as a cheap assertion.
    left, right = envelope_of(p1), envelope_of(p2)
    shifted = tuple(tuple(l + (offset if l > 0 else -offset) for l in rel)
                    for rel in right.relators)
    if envelope_of(combined).relators != left.relators + shifted:
        raise AssertionError("enveloping presentation failed to split")
    return combined


def qword_to_group_word(w: QWord) -> Word:
    """The conjugation translation: a*b becomes b^-1 a b, a*^-1 b becomes
    b a b^-1."""
    if w[0] == "g":
        return (w[1] + 1,)
    left = qword_to_group_word(w[1])
    right = qword_to_group_word(w[2])
    if w[0] == "op":
        return free_reduce(word_inverse(right) + left + right)
    return free_reduce(right + left + word_inverse(right))


def envelope_of(p: QuandlePresentation) -> GroupPresentation:
    """Enveloping group presentation of a presented quandle: same
    generators, one relator per relation."""
    relators = []
    for lhs, rhs in p.relations:
        rel = free_reduce(qword_to_group_word(lhs)
                          + word_inverse(qword_to_group_word(rhs)))
        if rel:
            relators.append(rel)
    return GroupPresentation(len(p.generators), tuple(relators))


def qword_to_rack(w: QWord) -> FreeRackElement:
    if w[0] == "g":
        return FreeRackElement(w[1], ())
    left = qword_to_rack(w[1])
    right = qword_to_rack(w[2])
    return fr_op(left, right) if w[0] == "op" else fr_op_inv(left, right)


# -- bounded closure of a presented quandle -----------------------------------------------


@dataclass(frozen=True)
class ClosureReport:
    """Bounded-rewriting estimate for a presented quandle.

    ``num_classes`` counts equivalence classes among all bounded words; it is
    an upper bound on the number of distinct quandle elements those words
    represent (merging is sound but bounded, never complete).  ``stabilized``
    is True when every class already contains a word shorter than the depth,
    i.e. the last layer discovered nothing new.  Relations whose sides would
    not fit inside the bounded universe are counted in
    ``truncated_relations`` and weaken the merge.
    """

    depth: int
    num_words: int
    num_classes: int
    stabilized: bool
    truncated_relations: int

    def class_count_bounds(self) -> tuple[int, int]:
        """(lower, upper) bounds for the number of distinct elements
        represented by words within the depth."""
        return (1 if self.num_words else 0, self.num_classes)


def bounded_closure(p: QuandlePresentation, depth: int,
                    max_depth: int = MAX_CLOSURE_DEPTH) -> ClosureReport:
    """Union-find closure over all rack forms (base, word) with word length
    up to ``depth``, under sound rewriting moves:

      * leading powers of the base generator collapse (idempotence),
      * presentation relations, applied through right extension by single
        generators and through translation by bounded elements.
    """
    if depth > max_depth:
        raise DepthExceeded(f"depth {depth} exceeds limit {max_depth}")
    n = len(p.generators)
    universe: list[tuple[int, Word]] = []
    words_by_len: list[list[Word]] = [[()]]
    for length in range(1, depth + 1):
        layer = []
        for w in words_by_len[length - 1]:
            for g_idx in range(n):
                for letter in (g_idx + 1, -(g_idx + 1)):
                    if w and w[-1] == -letter:
                        continue
                    layer.append(w + (letter,))
        words_by_len.append(layer)
    all_words = [w for layer in words_by_len for w in layer]
    for base in range(n):
        universe.extend((base, w) for w in all_words)
    index = {key: i for i, key in enumerate(universe)}
    size = len(universe)

    parent = list(range(size))
    merges = 0

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(a_key, b_key):
        nonlocal merges
        ia, ib = index.get(a_key), index.get(b_key)
        if ia is None or ib is None:
            return
        ra, rb = find(ia), find(ib)
        if ra != rb:
            parent[rb] = ra
            merges += 1

    letters = [l for g_idx in range(n) for l in (g_idx + 1, -(g_idx + 1))]

    # Idempotence: (x, x^e w) ~ (x, w).
    for base, w in universe:
        if w and abs(w[0]) == base + 1:
            union((base, w), (base, w[1:]))
    # Presentation relations.
    truncated = 0
    for lhs, rhs in p.relations:
        le, re_ = qword_to_rack(lhs), qword_to_rack(rhs)
        if len(le.word) > depth or len(re_.word) > depth:
            truncated += 1
            continue
        union((le.base, le.word), (re_.base, re_.word))

    def conjugates(key):
        base, w = key
        pos = free_reduce(word_inverse(w) + (base + 1,) + w)
        neg = free_reduce(word_inverse(w) + (-(base + 1),) + w)
        return pos, neg

    # Saturate against class representatives.  The representative is the
    # shortest member, so right extensions of an in-universe pair stay in
    # the universe; sweeps repeat until no class moves.
    while True:
        before = merges
        reps: dict[int, tuple[int, Word]] = {}
        for i, key in enumerate(universe):
            root = find(i)
            best = reps.get(root)
            if best is None or (len(key[1]), key) < (len(best[1]), best):
                reps[root] = key
        for i, key in enumerate(universe):
            rep = reps[find(i)]
            if rep == key:
                continue
            a, u = key
            b, v = rep
            for letter in letters:
                nu = free_reduce(u + (letter,))
                nv = free_reduce(v + (letter,))
                if len(nu) <= depth and len(nv) <= depth:
                    union((a, nu), (b, nv))
            cu_pair = conjugates(key)
            cv_pair = conjugates(rep)
            if cu_pair != cv_pair:
                for c_base, w in universe:
                    for cu, cv in zip(cu_pair, cv_pair):
                        nu = free_reduce(w + cu)
                        nv = free_reduce(w + cv)
                        if len(nu) <= depth and len(nv) <= depth:
                            union((c_base, nu), (c_base, nv))
        if merges == before:
            break

    classes: dict[int, list[tuple[int, Word]]] = {}
    for i, key in enumerate(universe):
        classes.setdefault(find(i), []).append(key)
    stabilized = all(
        min(len(w) for _, w in members) < depth or depth == 0
        for members in classes.values())
    return ClosureReport(depth, size, len(classes), stabilized, truncated)
