"""Quandle factories: trivial, dihedral, Takasaki, group-derived, unions.

Element numbering conventions (stable, part of the file format):
  * dihedral_quandle(n) uses elements 0..n-1 with i*j = 2j - i (mod n);
  * unions place the Q1 block first, then the Q2 block;
  * u_quandle(n, m) has the n-block 0..n-1 and the m-block n..n+m-1.
"""

from __future__ import annotations

from . import perms
from .errors import SizeLimitExceeded, UnionConditionViolated
from .fingroup import FiniteGroup, require_abelian
from .quandle import MAX_QUANDLE_ORDER, FiniteQuandle

__all__ = [
    "trivial", "dihedral_quandle", "takasaki", "conj", "conj_inv", "core",
    "union", "u_quandle",
]


def trivial(n: int) -> FiniteQuandle:
    """x*y = x on n elements."""
    if n < 1:
        raise ValueError("order must be >= 1")
    return FiniteQuandle([[i] * n for i in range(n)], _validated=True)


def dihedral_quandle(n: int) -> FiniteQuandle:
    """i*j = 2j - i (mod n)."""
    if n < 1:
        raise ValueError("order must be >= 1")
    return FiniteQuandle([[(2 * j - i) % n for j in range(n)] for i in range(n)],
                         _validated=True)


def takasaki(h: FiniteGroup) -> FiniteQuandle:
    """x*y = 2y - x on an abelian group (additively); for cyclic groups this
    is the dihedral quandle of the same order."""
    require_abelian(h)
    n = h.order
    table = [[h.mul(h.mul(y, y), h.inv(x)) for y in range(n)] for x in range(n)]
    names = list(h.labels) if h.labels is not None else None
    return FiniteQuandle(table, names=names, _validated=True)


def conj(g: FiniteGroup) -> FiniteQuandle:
    """x*y = y^-1 x y on the elements of g."""
    n = g.order
    table = [[g.conjugate(x, y) for y in range(n)] for x in range(n)]
    names = list(g.labels) if g.labels is not None else None
    return FiniteQuandle(table, names=names, _validated=True)


def conj_inv(g: FiniteGroup) -> FiniteQuandle:
    """x*y = y x y^-1; conj with the operations * and *^-1 swapped."""
    n = g.order
    table = [[g.conjugate(x, g.inv(y)) for y in range(n)] for x in range(n)]
    names = list(g.labels) if g.labels is not None else None
    return FiniteQuandle(table, names=names, _validated=True)


def core(g: FiniteGroup) -> FiniteQuandle:
    """x*y = y x^-1 y on any group."""
    n = g.order
    table = [[g.mul(g.mul(y, g.inv(x)), y) for y in range(n)] for x in range(n)]
    names = list(g.labels) if g.labels is not None else None
    return FiniteQuandle(table, names=names, _validated=True)


def _check_aut(q: FiniteQuandle, perm, tag: str, who: int):
    if len(perm) != q.order or not perms.is_permutation(perm):
        raise UnionConditionViolated(tag, (who,))
    t = q.table
    for a in range(q.order):
        for b in range(q.order):
            if perm[t[a][b]] != t[perm[a]][perm[b]]:
                raise UnionConditionViolated(tag, (who, a, b))


def union(q1: FiniteQuandle, q2: FiniteQuandle, sigma, tau) -> FiniteQuandle:
    """Glue two quandles along commuting automorphism actions.

    ``sigma[x]`` (x in Q1) is a permutation of Q2, ``tau[z]`` (z in Q2) a
    permutation of Q1.  The combined operation is

        x ? y = x*y            (both in Q1)      tau[y](x)   (x in Q1, y in Q2)
        x ? y = x o y          (both in Q2)      sigma[y](x) (x in Q2, y in Q1)

    All preconditions are verified exhaustively: each assigned map must be an
    automorphism, sigma and tau must twist correctly under the quandle
    operations (sigma(x*y) = sigma(y) sigma(x) sigma(y)^-1 and likewise for
    tau), and the two mixed-action compatibility conditions must hold.
    Violations raise UnionConditionViolated naming the condition and witness.
    """
    n1, n2 = q1.order, q2.order
    sigma = [tuple(int(v) for v in p) for p in sigma]
    tau = [tuple(int(v) for v in p) for p in tau]
    if len(sigma) != n1 or len(tau) != n2:
        raise ValueError("sigma must have one permutation per Q1 element, tau per Q2")
    for x, p in enumerate(sigma):
        _check_aut(q2, p, "sigma_not_aut", x)
    for z, p in enumerate(tau):
        _check_aut(q1, p, "tau_not_aut", z)
    # Quandle homomorphism into the automorphism group with reversed
    # conjugation: image of x*y must be sigma(y) sigma(x) sigma(y)^-1.
    for x in range(n1):
        for y in range(n1):
            want = perms.compose(perms.compose(perms.inverse(sigma[y]), sigma[x]),
                                 sigma[y])
            # compose applies left argument first: inv(s_y) then s_x then s_y,
            # i.e. the map t -> s_y(s_x(s_y^-1(t))).
            if sigma[q1.table[x][y]] != want:
                raise UnionConditionViolated("sigma_not_hom", (x, y))
    for x in range(n2):
        for y in range(n2):
            want = perms.compose(perms.compose(perms.inverse(tau[y]), tau[x]),
                                 tau[y])
            if tau[q2.table[x][y]] != want:
                raise UnionConditionViolated("tau_not_hom", (x, y))
    # Mixed compatibility: acting before or after an internal translation
    # must agree once the actor itself is moved.
    for x in range(n1):
        for y in range(n1):
            for z in range(n2):
                if q1.table[tau[z][x]][y] != tau[sigma[y][z]][q1.table[x][y]]:
                    raise UnionConditionViolated("condition1", (x, y, z))
    for x in range(n2):
        for y in range(n2):
            for z in range(n1):
                if q2.table[sigma[z][x]][y] != sigma[tau[y][z]][q2.table[x][y]]:
                    raise UnionConditionViolated("condition2", (x, y, z))

    n = n1 + n2
    if n > MAX_QUANDLE_ORDER:
        raise SizeLimitExceeded(f"order {n} exceeds {MAX_QUANDLE_ORDER}")
    table = [[0] * n for _ in range(n)]
    for a in range(n1):
        for b in range(n1):
            table[a][b] = q1.table[a][b]
    for a in range(n2):
        for b in range(n2):
            table[n1 + a][n1 + b] = n1 + q2.table[a][b]
    for a in range(n1):
        for b in range(n2):
            table[a][n1 + b] = tau[b][a]
    for a in range(n2):
        for b in range(n1):
            table[n1 + a][b] = n1 + sigma[b][a]
    return FiniteQuandle(table)


def u_quandle(n: int, m: int) -> FiniteQuandle:
    """Union of two trivial quandles with mutual cyclic-shift actions.

    Elements x_0..x_{n-1} (indices 0..n-1) and y_0..y_{m-1} (indices
    n..n+m-1); x_i * y_r = x_{i+1 mod n} and y_r * x_i = y_{r+1 mod m},
    while each block is trivial internally.
    """
    if n < 1 or m < 1:
        raise ValueError("block sizes must be >= 1")
    if n + m > MAX_QUANDLE_ORDER:
        raise SizeLimitExceeded(f"order {n+m} exceeds {MAX_QUANDLE_ORDER}")
    size = n + m
    table = [[0] * size for _ in range(size)]
    for i in range(n):
        for j in range(n):
            table[i][j] = i
        for r in range(m):
            table[i][n + r] = (i + 1) % n
    for r in range(m):
        for s in range(m):
            table[n + r][n + s] = n + r
        for i in range(n):
            table[n + r][i] = n + (r + 1) % m
    names = [f"x{i}" for i in range(n)] + [f"y{r}" for r in range(m)]
    return FiniteQuandle(table, names=names, _validated=True)
