"""Exact arithmetic for finitely generated abelian groups with divisible atoms.

Groups are kept in a canonical form (free rank, invariant-factor chain,
divisible 2-torsion rank) so that equality is structural. Maps between the
finitely generated parts are integer matrices on the canonical generators,
and kernels, cokernels and homology are computed through Smith normal form.

Matrix convention: a matrix is a tuple of row tuples of exact ints. An
m-by-0 matrix is ``((),) * m`` and a 0-by-n matrix is ``()``; functions that
cannot infer a dimension from the data take it explicitly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import RenderParseError, ShapeMismatch, UnsupportedDivisibleMap

Matrix = tuple

# ---------------------------------------------------------------------------
# matrix helpers


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(m, cols: int | None = None) -> Matrix:
    nc = cols if cols is not None else (len(m[0]) if m else 0)
    return tuple(tuple(row[i] for row in m) for i in range(nc))


def mat_mul(a, b, b_cols: int | None = None) -> Matrix:
    """a (p x q) times b (q x r); pass b_cols when b has no rows."""
    nc = b_cols if b_cols is not None else (len(b[0]) if b else 0)
    if a and b and len(a[0]) != len(b):
        raise ShapeMismatch("inner dimensions disagree: %d vs %d" % (len(a[0]), len(b)))
    return tuple(
        tuple(sum(row[k] * b[k][j] for k in range(len(b))) for j in range(nc))
        for row in a
    )


def _column(m, j: int, nrows: int):
    return tuple(m[i][j] for i in range(nrows))


def _swap_rows(a, u, i, j):
    if i != j:
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]


def _swap_cols(a, v, i, j):
    if i != j:
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]


def _add_row(a, u, dst, src, mult):
    # row_dst += mult * row_src
    if mult:
        a[dst] = [x + mult * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + mult * y for x, y in zip(u[dst], u[src])]


def _add_col(a, v, dst, src, mult):
    if mult:
        for row in a:
            row[dst] += mult * row[src]
        for row in v:
            row[dst] += mult * row[src]


def snf(m, rows: int | None = None, cols: int | None = None):
    """Smith normal form with transforms: returns (U, S, V) with U*m*V = S.

    U and V are unimodular, S is diagonal with nonnegative entries forming a
    divisibility chain d1 | d2 | ... Zeros come last.
    """
    nr = rows if rows is not None else len(m)
    nc = cols if cols is not None else (len(m[0]) if m else 0)
    a = [list(map(int, row)) for row in m]
    if len(a) != nr or any(len(row) != nc for row in a):
        raise ShapeMismatch("matrix shape does not match declared %dx%d" % (nr, nc))
    u = [[int(i == j) for j in range(nr)] for i in range(nr)]
    v = [[int(i == j) for j in range(nc)] for i in range(nc)]

    t = 0
    while t < min(nr, nc):
        # smallest nonzero entry of the trailing block becomes the pivot
        best, pi, pj = 0, -1, -1
        for i in range(t, nr):
            for j in range(t, nc):
                e = abs(a[i][j])
                if e and (best == 0 or e < best):
                    best, pi, pj = e, i, j
        if pi < 0:
            break
        _swap_rows(a, u, t, pi)
        _swap_cols(a, v, t, pj)
        while True:
            restart = False
            for i in range(t + 1, nr):
                if a[i][t]:
                    _add_row(a, u, i, t, -(a[i][t] // a[t][t]))
                    if a[i][t]:
                        # remainder beats the pivot; promote it and redo
                        _swap_rows(a, u, t, i)
                        restart = True
            if restart:
                continue
            for j in range(t + 1, nc):
                if a[t][j]:
                    _add_col(a, v, j, t, -(a[t][j] // a[t][t]))
                    if a[t][j]:
                        _swap_cols(a, v, t, j)
                        restart = True
            if restart:
                continue
            # pivot must divide the whole trailing block for the chain
            bad = None
            for i in range(t + 1, nr):
                if any(a[i][j] % a[t][t] for j in range(t + 1, nc)):
                    bad = i
                    break
            if bad is None:
                break
            _add_row(a, u, t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1

    return (
        tuple(map(tuple, u)),
        tuple(map(tuple, a)),
        tuple(map(tuple, v)),
    )


def snf_diagonal(m, rows: int | None = None, cols: int | None = None):
    nr = rows if rows is not None else len(m)
    nc = cols if cols is not None else (len(m[0]) if m else 0)
    _, s, _ = snf(m, nr, nc)
    return tuple(s[i][i] for i in range(min(nr, nc)))


def nullspace(m, rows: int | None = None, cols: int | None = None):
    """Basis of the integer nullspace {x : m.x = 0}, as a tuple of vectors.

    The basis spans the full (saturated) nullspace lattice.
    """
    nr = rows if rows is not None else len(m)
    nc = cols if cols is not None else (len(m[0]) if m else 0)
    _, s, v = snf(m, nr, nc)
    k = min(nr, nc)
    return tuple(
        tuple(v[i][j] for i in range(nc))
        for j in range(nc)
        if j >= k or s[j][j] == 0
    )


# ---------------------------------------------------------------------------
# F2 linear algebra (bitmask rows)


def f2_rank(m) -> int:
    """Rank over F2; integer entries are reduced mod 2."""
    pivots = []
    for row in m:
        bits = 0
        for j, x in enumerate(row):
            if x & 1:
                bits |= 1 << j
        for p in pivots:
            low = p & -p
            if bits & low:
                bits ^= p
        if bits:
            pivots.append(bits)
    return len(pivots)


def f2_mul(a, b, b_cols: int | None = None) -> Matrix:
    return tuple(tuple(x % 2 for x in row) for row in mat_mul(a, b, b_cols))


def f2_is_zero(m) -> bool:
    return all(x % 2 == 0 for row in m for x in row)


# ---------------------------------------------------------------------------
# canonical groups


@dataclass(frozen=True)
class SymGroup:
    """Canonical form: Z^free_rank + Z/d1 + ... + Z/dk + D(divisible_rank).

    The invariant factors form a divisibility chain with every d >= 2. The
    divisible atom D(t) is a formal two-divisible summand whose only tracked
    structure is its 2-torsion rank t (it models Jacobians and Pic^0).
    """

    free_rank: int = 0
    torsion: tuple = ()
    divisible_rank: int = 0

    def __post_init__(self):
        if self.free_rank < 0 or self.divisible_rank < 0:
            raise ValueError("negative rank in SymGroup")
        tor = tuple(int(d) for d in self.torsion)
        object.__setattr__(self, "torsion", tor)
        for d in tor:
            if d < 2:
                raise ValueError("invariant factors must be >= 2, got %r" % (d,))
        for a, b in zip(tor, tor[1:]):
            if b % a:
                raise ValueError("invariant factors %d | %d fail divisibility" % (a, b))

    @property
    def ngens(self) -> int:
        return self.free_rank + len(self.torsion)

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion and self.divisible_rank == 0

    def order(self):
        """Number of elements, or None when infinite."""
        if self.free_rank or self.divisible_rank:
            return None
        n = 1
        for d in self.torsion:
            n *= d
        return n

    def __str__(self):
        return render(self)


TRIVIAL = SymGroup()
Z = SymGroup(free_rank=1)
Z2 = SymGroup(torsion=(2,))


def free(rank: int) -> SymGroup:
    return SymGroup(free_rank=rank)


def cyclic(n: int) -> SymGroup:
    return SymGroup(torsion=(n,)) if n >= 2 else (TRIVIAL if n == 1 else Z)


def elementary_two(rank: int) -> SymGroup:
    return SymGroup(torsion=(2,) * rank)


def divisible(two_torsion_rank: int) -> SymGroup:
    return SymGroup(divisible_rank=two_torsion_rank)


def relation_rows(g: SymGroup) -> Matrix:
    """Presentation relations on the canonical generators (free gens first)."""
    n = g.ngens
    return tuple(
        tuple(d if j == g.free_rank + i else 0 for j in range(n))
        for i, d in enumerate(g.torsion)
    )


def group_from_presentation(relations, generators: int) -> SymGroup:
    rel = tuple(tuple(int(x) for x in row) for row in relations)
    diag = snf_diagonal(rel, len(rel), generators)
    torsion = tuple(d for d in diag if d >= 2)
    nonzero = sum(1 for d in diag if d)
    return SymGroup(generators - nonzero, torsion, 0)


def direct_sum(a: SymGroup, b: SymGroup) -> SymGroup:
    factors = a.torsion + b.torsion
    n = len(factors)
    rel = tuple(
        tuple(factors[i] if j == i else 0 for j in range(n)) for i in range(n)
    )
    merged = group_from_presentation(rel, n)
    return SymGroup(
        a.free_rank + b.free_rank + merged.free_rank,
        merged.torsion,
        a.divisible_rank + b.divisible_rank,
    )


def direct_sum_all(groups) -> SymGroup:
    total = TRIVIAL
    for g in groups:
        total = direct_sum(total, g)
    return total


def _even_count(g: SymGroup) -> int:
    return sum(1 for d in g.torsion if d % 2 == 0)


def mod2(g: SymGroup) -> SymGroup:
    """g/2g. The divisible atom is two-divisible, so it contributes nothing."""
    return elementary_two(g.free_rank + _even_count(g))


def two_torsion(g: SymGroup) -> SymGroup:
    """g[2]. D(t)[2] has rank t by definition of the atom."""
    return elementary_two(_even_count(g) + g.divisible_rank)


def mod2_rank(g: SymGroup) -> int:
    return g.free_rank + _even_count(g)


# ---------------------------------------------------------------------------
# rendering grammar: `0`, `Z`, `Z^r`, `Z/n`, `D(t)` joined by ` + `


def render(g: SymGroup) -> str:
    parts = []
    if g.free_rank == 1:
        parts.append("Z")
    elif g.free_rank > 1:
        parts.append("Z^%d" % g.free_rank)
    parts.extend("Z/%d" % d for d in g.torsion)
    if g.divisible_rank:
        parts.append("D(%d)" % g.divisible_rank)
    return " + ".join(parts) if parts else "0"


_TOK_FREE = re.compile(r"\AZ(?:\^([1-9][0-9]*))?\Z")
_TOK_CYCLIC = re.compile(r"\AZ/([1-9][0-9]*)\Z")
_TOK_DIV = re.compile(r"\AD\(([1-9][0-9]*)\)\Z")


def parse_group(text: str) -> SymGroup:
    """Parse the rendering grammar; summands may come in any order."""
    s = text.strip()
    if s == "0":
        return TRIVIAL
    free_rank = 0
    factors = []
    div = 0
    for tok in s.split(" + "):
        m = _TOK_FREE.match(tok)
        if m:
            free_rank += int(m.group(1) or 1)
            continue
        m = _TOK_CYCLIC.match(tok)
        if m:
            n = int(m.group(1))
            if n < 2:
                raise RenderParseError("cyclic order must be >= 2 in %r" % tok)
            factors.append(n)
            continue
        m = _TOK_DIV.match(tok)
        if m:
            div += int(m.group(1))
            continue
        raise RenderParseError("bad group token %r in %r" % (tok, text))
    base = direct_sum_all(SymGroup(torsion=(n,)) for n in factors)
    return SymGroup(free_rank, base.torsion, div)


# ---------------------------------------------------------------------------
# maps


_BEHAVIORS = ("absent", "zero", "torsion-inclusion")


@dataclass(frozen=True)
class GroupMap:
    """Homomorphism between the finitely generated parts of two SymGroups.

    ``matrix`` has shape (codomain.ngens x domain.ngens); column j is the
    image of the j-th canonical generator of the domain. Maps over F2 are the
    same thing with entries in {0, 1} and elementary 2-groups on both sides.

    ``divisible_behavior`` records how a divisible summand of the domain is
    carried: "absent" (neither side has one), "zero" (killed), or
    "torsion-inclusion" (D(t) of the domain included into the codomain's
    divisible part). Only "absent" maps support kernel/cokernel arithmetic.
    """

    domain: SymGroup
    codomain: SymGroup
    matrix: Matrix
    divisible_behavior: str = "absent"

    def __post_init__(self):
        if self.divisible_behavior not in _BEHAVIORS:
            raise ValueError("unknown divisible_behavior %r" % (self.divisible_behavior,))
        mat = tuple(tuple(int(x) for x in row) for row in self.matrix)
        object.__setattr__(self, "matrix", mat)
        if len(mat) != self.codomain.ngens or any(
            len(row) != self.domain.ngens for row in mat
        ):
            raise ShapeMismatch(
                "matrix must be %dx%d (codomain x domain generators)"
                % (self.codomain.ngens, self.domain.ngens)
            )
        if self.divisible_behavior == "absent":
            if self.domain.divisible_rank or self.codomain.divisible_rank:
                raise UnsupportedDivisibleMap(
                    "map declared absent but a side carries a divisible summand"
                )
        elif self.divisible_behavior == "torsion-inclusion":
            if self.domain.divisible_rank > self.codomain.divisible_rank:
                raise UnsupportedDivisibleMap(
                    "torsion-inclusion needs divisible rank %d <= %d"
                    % (self.domain.divisible_rank, self.codomain.divisible_rank)
                )
        # the matrix must send domain relations into the codomain lattice
        for i, d in enumerate(self.domain.torsion):
            col = _column(mat, self.domain.free_rank + i, self.codomain.ngens)
            if not _in_relation_lattice(tuple(d * c for c in col), self.codomain):
                raise ValueError(
                    "matrix does not respect relations: generator of order %d "
                    "has image of larger order" % d
                )


def _in_relation_lattice(vec, g: SymGroup) -> bool:
    for r in range(g.free_rank):
        if vec[r]:
            return False
    for i, d in enumerate(g.torsion):
        if vec[g.free_rank + i] % d:
            return False
    return True


def zero_map(domain: SymGroup, codomain: SymGroup, **kw) -> GroupMap:
    m = tuple(((0,) * domain.ngens) for _ in range(codomain.ngens))
    return GroupMap(domain, codomain, m, **kw)


def identity_map(g: SymGroup) -> GroupMap:
    return GroupMap(g, g, identity(g.ngens))


def compose(g: GroupMap, f: GroupMap) -> GroupMap:
    """g after f."""
    if f.codomain != g.domain:
        raise ShapeMismatch("compose: middle groups disagree")
    _require_absent(f)
    _require_absent(g)
    return GroupMap(f.domain, g.codomain, mat_mul(g.matrix, f.matrix, f.domain.ngens))


def _require_absent(f: GroupMap):
    if f.divisible_behavior != "absent":
        raise UnsupportedDivisibleMap(
            "operation needs a finitely generated map (divisible_behavior=absent), "
            "got %r" % f.divisible_behavior
        )


def _kernel_span_rows(f: GroupMap):
    # spanning rows (in domain coordinates) of {x : f(x) lies in the codomain
    # relation lattice}; always contains the domain relation lattice
    a, b = f.domain, f.codomain
    relb = relation_rows(b)
    ncols = a.ngens + len(relb)
    stacked = tuple(
        tuple(f.matrix[i][j] for j in range(a.ngens)) + tuple(r[i] for r in relb)
        for i in range(b.ngens)
    )
    basis = nullspace(stacked, b.ngens, ncols)
    return tuple(vec[: a.ngens] for vec in basis)


def _spanned_subquotient(span_rows, mod_rows, n: int) -> SymGroup:
    # (lattice spanned by span_rows + mod_rows) / (lattice of mod_rows),
    # presented on the span_rows as generators
    k = len(span_rows)
    stacked = tuple(span_rows) + tuple(mod_rows)
    qt = transpose(stacked, n)
    rels = tuple(vec[:k] for vec in nullspace(qt, n, len(stacked)))
    return group_from_presentation(rels, k)


def kernel(f: GroupMap) -> SymGroup:
    _require_absent(f)
    span = _kernel_span_rows(f)
    return _spanned_subquotient(span, relation_rows(f.domain), f.domain.ngens)


def cokernel_map(f: GroupMap):
    """Cokernel together with the canonical projection from the codomain."""
    _require_absent(f)
    b = f.codomain
    n = b.ngens
    rel = tuple(
        _column(f.matrix, j, n) for j in range(f.domain.ngens)
    ) + relation_rows(b)
    u1, s1, _ = snf(transpose(rel, n), n, len(rel))
    k = min(n, len(rel))
    free_idx = [i for i in range(n) if i >= k or s1[i][i] == 0]
    tor_idx = [i for i in range(k) if s1[i][i] >= 2]
    coker = SymGroup(len(free_idx), tuple(s1[i][i] for i in tor_idx), 0)
    proj = GroupMap(b, coker, tuple(u1[i] for i in free_idx + tor_idx))
    return coker, proj


def cokernel(f: GroupMap) -> SymGroup:
    return cokernel_map(f)[0]


def image_rank2(f: GroupMap) -> int:
    """F2-rank of the induced map on mod-2 reductions."""
    _require_absent(f)
    b = f.codomain
    relb = relation_rows(b)
    stacked = tuple(
        tuple(f.matrix[i]) + tuple(r[i] for r in relb) for i in range(b.ngens)
    )
    return f2_rank(transpose(stacked, f.domain.ngens + len(relb))) - f2_rank(relb)


def composite_is_zero(f: GroupMap, g: GroupMap) -> bool:
    if f.codomain != g.domain:
        raise ShapeMismatch("maps are not composable")
    prod = mat_mul(g.matrix, f.matrix, f.domain.ngens)
    nc = g.codomain.ngens
    return all(
        _in_relation_lattice(_column(prod, j, nc), g.codomain)
        for j in range(f.domain.ngens)
    )


def homology_at(f: GroupMap, g: GroupMap) -> SymGroup:
    """ker(g)/im(f) at the middle group; the composite must be zero."""
    _require_absent(f)
    _require_absent(g)
    if not composite_is_zero(f, g):
        raise ValueError("homology undefined: composite is not zero")
    b = f.codomain
    span = _kernel_span_rows(g)
    mod = tuple(
        _column(f.matrix, j, b.ngens) for j in range(f.domain.ngens)
    ) + relation_rows(b)
    return _spanned_subquotient(span, mod, b.ngens)


@dataclass(frozen=True)
class ExactnessReport:
    """Result of check_exact.

    Nodes are indexed by position in the chain of groups A_0 -> A_1 -> ...;
    interior nodes are 1..len(maps)-1. ``interior_homology`` holds the
    homology at each interior node, or None where the composite was nonzero.
    """

    ok: bool
    first_failure: int | None
    interior_homology: tuple


def check_exact(maps) -> ExactnessReport:
    maps = tuple(maps)
    for f in maps:
        _require_absent(f)
    for i in range(len(maps) - 1):
        if maps[i].codomain != maps[i + 1].domain:
            raise ShapeMismatch("maps %d and %d are not composable" % (i, i + 1))
    homs = []
    first = None
    for i in range(len(maps) - 1):
        f, g = maps[i], maps[i + 1]
        if not composite_is_zero(f, g):
            homs.append(None)
            if first is None:
                first = i + 1
            continue
        h = homology_at(f, g)
        homs.append(h)
        if not h.is_trivial and first is None:
            first = i + 1
    return ExactnessReport(first is None, first, tuple(homs))
