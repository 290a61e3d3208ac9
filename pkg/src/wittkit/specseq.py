"""Bigraded spectral-sequence engine over finitely generated abelian groups.

Two indexing conventions are supported. "cohomological" pages carry
differentials of bidegree (r, -r+1) and total degree s+t; "pardon" pages
carry differentials of bidegree (1, r-1) and are graded by the column s
alone. Entries are SymGroups, differentials are GroupMaps between them, and
turning a page replaces every entry by kernel(outgoing)/image(incoming).

Three builders instantiate the engine: pardon_e2 (Witt groups of curves and
surfaces), ahss_ko and ahss_k (topological KO and K of the underlying
complex). Differentials the builders do not install are zero; positions on
later pages where a nonzero map cannot be ruled out are reported as unknown
rather than silently dropped.
"""

from dataclasses import dataclass, field

from .errors import MalformedPage
from .groups import (
    TRIVIAL,
    Z2,
    GroupMap,
    SymGroup,
    cokernel,
    composite_is_zero,
    direct_sum_all,
    elementary_two,
    f2_mul,
    f2_rank,
    homology_at,
    kernel,
    mod2,
    render,
    zero_map,
)
from .spaces import (
    INTEGRAL,
    MOD2,
    picard,
    picard_image_matrix,
    singular_h,
)

COHOMOLOGICAL = "cohomological"
PARDON = "pardon"

# region bound: ((s_lo, s_hi), (t_lo, t_hi)); entries must vanish outside
DEFAULT_REGION = ((0, 5), (-8, 8))


def bidegree(convention: str, r: int) -> tuple[int, int]:
    if convention == COHOMOLOGICAL:
        return (r, -r + 1)
    if convention == PARDON:
        return (1, r - 1)
    raise MalformedPage("unknown convention %r" % (convention,))


@dataclass(frozen=True)
class BigradedPage:
    """Immutable snapshot of one page.

    ``entries`` maps (s, t) to a nonzero SymGroup; missing positions are
    zero. ``differentials`` maps a source position to the GroupMap leaving
    it; the target position is determined by the convention's bidegree.
    Missing differentials are zero maps.
    """

    entries: dict
    r: int
    convention: str
    differentials: dict = field(default_factory=dict)

    def __post_init__(self):
        ds, dt = bidegree(self.convention, self.r)
        kept = {}
        for pos, grp in self.entries.items():
            if not (isinstance(pos, tuple) and len(pos) == 2):
                raise MalformedPage("entry position %r is not an (s, t) pair" % (pos,))
            if not isinstance(grp, SymGroup):
                raise MalformedPage("entry at %r is not a SymGroup" % (pos,))
            if grp.divisible_rank:
                raise MalformedPage("entry at %r carries a divisible summand" % (pos,))
            if not grp.is_trivial:
                kept[pos] = grp
        object.__setattr__(self, "entries", kept)
        diffs = dict(self.differentials)
        for pos, gm in diffs.items():
            tgt = (pos[0] + ds, pos[1] + dt)
            if pos not in kept:
                raise MalformedPage("differential leaves empty position %r" % (pos,))
            if tgt not in kept:
                raise MalformedPage(
                    "differential %r -> %r lands on an empty position" % (pos, tgt)
                )
            if gm.domain != kept[pos] or gm.codomain != kept[tgt]:
                raise MalformedPage(
                    "differential at %r does not match the entries" % (pos,)
                )
        # consecutive differentials must compose to zero
        for pos, gm in diffs.items():
            tgt = (pos[0] + ds, pos[1] + dt)
            nxt = diffs.get(tgt)
            if nxt is not None:
                if not composite_is_zero(gm, nxt):
                    raise MalformedPage(
                        "differentials at %r and %r do not compose to zero"
                        % (pos, tgt)
                    )
        object.__setattr__(self, "differentials", diffs)

    def group_at(self, s: int, t: int) -> SymGroup:
        return self.entries.get((s, t), TRIVIAL)


def turn_page(page: BigradedPage, next_differentials=None) -> BigradedPage:
    """Homology at every position; the next page's differentials default to zero."""
    ds, dt = bidegree(page.convention, page.r)
    new_entries = {}
    for pos, grp in page.entries.items():
        outgoing = page.differentials.get(pos)
        incoming = page.differentials.get((pos[0] - ds, pos[1] - dt))
        if incoming is not None and outgoing is not None:
            h = homology_at(incoming, outgoing)
        elif outgoing is not None:
            h = kernel(outgoing)
        elif incoming is not None:
            h = cokernel(incoming)
        else:
            h = grp
        if not h.is_trivial:
            new_entries[pos] = h
    return BigradedPage(
        entries=new_entries,
        r=page.r + 1,
        convention=page.convention,
        differentials=dict(next_differentials or {}),
    )


def _total_degree(convention: str, pos) -> int:
    return pos[0] + pos[1] if convention == COHOMOLOGICAL else pos[0]


def _is_elementary_two(g: SymGroup) -> bool:
    return g.free_rank == 0 and g.divisible_rank == 0 and all(d == 2 for d in g.torsion)


@dataclass
class EInfinityReport:
    """Stable page plus per-degree assembly bookkeeping.

    ``degrees`` maps a total degree to its graded pieces as (s, t, group)
    triples in filtration order (increasing s, then t). ``unknown_degrees``
    collects total degrees touched by a differential whose value the builder
    could not determine; their pieces are not trustworthy.
    """

    entries: dict
    convention: str
    degrees: dict
    extension_resolved: dict
    unknown_degrees: frozenset
    unknown_arrows: tuple
    pages_turned: int
    exponent_two: bool

    def pieces(self, degree: int):
        return tuple(g for _, _, g in self.degrees.get(degree, ()))

    def resolved_group(self, degree: int):
        """The abutment in one degree, or None when it cannot be assembled."""
        if degree in self.unknown_degrees:
            return None
        pieces = self.pieces(degree)
        if len(pieces) <= 1:
            return pieces[0] if pieces else TRIVIAL
        if self.exponent_two and all(_is_elementary_two(g) for g in pieces):
            return direct_sum_all(pieces)
        return None


def run_to_stable(
    page: BigradedPage,
    region=DEFAULT_REGION,
    *,
    exponent_two: bool = False,
    known_zero=None,
) -> EInfinityReport:
    """Turn pages until no differential can fit inside the region.

    ``known_zero`` maps a page index to the set of source positions whose
    differential the instantiation has pinned to zero. Any other
    source/target pair of nonzero entries with no installed differential is
    treated as zero but recorded in ``unknown_arrows`` (maps from a finite
    group to a torsion-free one are forced and not recorded).
    """
    (s_lo, s_hi), (t_lo, t_hi) = region
    for (s, t) in page.entries:
        if not (s_lo <= s <= s_hi and t_lo <= t <= t_hi):
            raise MalformedPage("entry at (%d, %d) lies outside the region" % (s, t))
    known_zero = known_zero or {}
    unknown = []
    start = page.r
    while True:
        ds, dt = bidegree(page.convention, page.r)
        if ds > s_hi - s_lo or abs(dt) > t_hi - t_lo:
            break
        declared = known_zero.get(page.r, ())
        for pos, grp in page.entries.items():
            tgt = (pos[0] + ds, pos[1] + dt)
            tgt_grp = page.entries.get(tgt)
            if tgt_grp is None or pos in page.differentials or pos in declared:
                continue
            if grp.free_rank == 0 and not tgt_grp.torsion:
                continue  # finite source, torsion-free target: forced zero
            unknown.append((page.r, pos, tgt))
        page = turn_page(page)

    degrees = {}
    for pos in sorted(page.entries):
        degrees.setdefault(_total_degree(page.convention, pos), []).append(
            (pos[0], pos[1], page.entries[pos])
        )
    degrees = {d: tuple(v) for d, v in degrees.items()}
    resolved = {
        d: len(v) <= 1 or (exponent_two and all(_is_elementary_two(g) for _, _, g in v))
        for d, v in degrees.items()
    }
    tainted = frozenset(
        _total_degree(page.convention, p) for _, src, tgt in unknown for p in (src, tgt)
    )
    return EInfinityReport(
        entries=dict(page.entries),
        convention=page.convention,
        degrees=degrees,
        extension_resolved=resolved,
        unknown_degrees=tainted,
        unknown_arrows=tuple(unknown),
        pages_turned=page.r - start,
        exponent_two=exponent_two,
    )


# ---------------------------------------------------------------------------
# debug dump


def _mod2_matrix(gm: GroupMap):
    # induced matrix on mod-2 reductions: keep rows/columns of free or
    # even-order generators, reduce entries
    def keep(g):
        return [j for j in range(g.ngens)
                if j < g.free_rank or g.torsion[j - g.free_rank] % 2 == 0]

    rows = keep(gm.codomain)
    cols = keep(gm.domain)
    return tuple(tuple(gm.matrix[i][j] % 2 for j in cols) for i in rows)


def dump_page(page: BigradedPage) -> str:
    ds, dt = bidegree(page.convention, page.r)
    lines = []
    for (s, t) in sorted(page.entries):
        lines.append("E_%d[%d,%d] = %s" % (page.r, s, t, render(page.entries[(s, t)])))
    for (s, t) in sorted(page.differentials):
        m = _mod2_matrix(page.differentials[(s, t)])
        body = "; ".join(" ".join(str(x) for x in row) for row in m)
        lines.append(
            "d_%d[%d,%d→%d,%d] = [%s]" % (page.r, s, t, s + ds, t + dt, body)
        )
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# builders


def _map_from_f2(domain: SymGroup, codomain: SymGroup, rows) -> GroupMap:
    """Lift an F2 matrix on mod-2 generators to a GroupMap.

    Columns of ``rows`` are indexed by the free-then-even-torsion generators
    of the domain; odd-torsion generators reduce to zero and get zero
    columns. The codomain must have exponent 2.
    """
    rows = tuple(tuple(int(x) % 2 for x in row) for row in rows)
    src_col = []
    nxt = 0
    for j in range(domain.ngens):
        if j < domain.free_rank or domain.torsion[j - domain.free_rank] % 2 == 0:
            src_col.append(nxt)
            nxt += 1
        else:
            src_col.append(None)
    full = tuple(
        tuple(
            0 if src_col[j] is None else rows[i][src_col[j]]
            for j in range(domain.ngens)
        )
        for i in range(codomain.ngens)
    )
    return GroupMap(domain, codomain, full)


def pardon_e2(space) -> BigradedPage:
    """E2-page of the spectral sequence converging to the Witt groups.

    Column s contributes to W^s. The unit form generates the (0,0) entry and
    survives, so its outgoing differentials are zero; the differential out of
    (0,1) vanishes; the one nontrivial d2 is s1 at (1,1).
    """
    dim = space.dim
    entries = {(0, 0): Z2}
    if dim >= 1:
        entries[(0, 1)] = singular_h(space, 1, MOD2)
        entries[(1, 1)] = mod2(picard(space))
    if dim == 1:
        # c1: Pic -> H^2(Z/2) is onto for curves (degree map if projective,
        # H^2 = 0 otherwise), so the quotient entry vanishes
        entries[(0, 2)] = TRIVIAL
    if dim == 2:
        pic_rank = f2_rank(picard_image_matrix(space))
        h2_rank = singular_h(space, 2, MOD2).ngens
        entries[(0, 2)] = elementary_two(h2_rank - pic_rank)
        entries[(1, 2)] = singular_h(space, 3, MOD2)
        entries[(2, 2)] = elementary_two(space.ch2_mod2_rank)

    entries = {pos: g for pos, g in entries.items() if not g.is_trivial}
    diffs = {}
    if (0, 0) in entries and (1, 1) in entries:
        diffs[(0, 0)] = zero_map(entries[(0, 0)], entries[(1, 1)])
    if (0, 1) in entries and (1, 2) in entries:
        diffs[(0, 1)] = zero_map(entries[(0, 1)], entries[(1, 2)])
    if (1, 1) in entries and (2, 2) in entries:
        diffs[(1, 1)] = _map_from_f2(entries[(1, 1)], entries[(2, 2)], space.s1)
    return BigradedPage(entries=entries, r=2, convention=PARDON, differentials=diffs)


PARDON_REGION = ((0, 2), (0, 2))

# d3 out of (0,0) is zero because the unit form survives to the abutment
_PARDON_KNOWN_ZERO = {3: frozenset({(0, 0)})}


def pardon_stable(space) -> EInfinityReport:
    return run_to_stable(
        pardon_e2(space),
        PARDON_REGION,
        exponent_two=True,  # Witt groups of these varieties are 2-torsion
        known_zero=_PARDON_KNOWN_ZERO,
    )


# KO coefficient rows inside one Bott window: q = 0, -4, -8 carry H^p(Z),
# q = -1, -2, -9, -10 carry H^p(Z/2), the rest vanish
_KO_Z_ROWS = (0, -4, -8)
_KO_F2_ROWS = (-1, -2, -9, -10)


def ahss_ko_page(space) -> BigradedPage:
    """KO-theory E2-page with d2 installed.

    d2 is Sq2 composed with mod-2 reduction on the H^p(Z) rows and Sq2 itself
    on the H^p(Z/2) rows; both vanish on classes of degree below 2, so the
    only nonzero matrices occur at p = 2 (surfaces).
    """
    p_max = 2 * space.dim
    entries = {}
    for q in _KO_Z_ROWS:
        for p in range(p_max + 1):
            entries[(p, q)] = singular_h(space, p, INTEGRAL)
    for q in _KO_F2_ROWS:
        for p in range(p_max + 1):
            entries[(p, q)] = singular_h(space, p, MOD2)
    entries = {pos: g for pos, g in entries.items() if not g.is_trivial}

    diffs = {}
    for q_src in (0, -1, -8, -9):
        for p in range(p_max - 1):
            src, tgt = (p, q_src), (p + 2, q_src - 1)
            if src not in entries or tgt not in entries:
                continue
            if p < 2:
                diffs[src] = zero_map(entries[src], entries[tgt])
            elif q_src in (0, -8):
                diffs[src] = _map_from_f2(
                    entries[src], entries[tgt], f2_mul(space.sq2, space.pi2)
                )
            else:
                diffs[src] = _map_from_f2(entries[src], entries[tgt], space.sq2)
    return BigradedPage(entries=entries, r=2, convention=COHOMOLOGICAL,
                        differentials=diffs)


def _ko_known_zero(p_max: int):
    # page 3: the unit positions survive, and the d3 on the H^p(Z/2) rows
    # q = -2, -10 (beta.Sq2 up to the identifications) vanishes on classes of
    # degree below 2 while its p >= 2 targets exceed the dimension
    pinned = {(0, 0), (0, -8)}
    for p in range(p_max + 1):
        pinned.add((p, -2))
        pinned.add((p, -10))
    return {3: frozenset(pinned)}


def ahss_ko(space) -> EInfinityReport:
    p_max = 2 * space.dim
    return run_to_stable(
        ahss_ko_page(space),
        ((0, p_max), (-10, 0)),
        known_zero=_ko_known_zero(p_max),
    )


def ahss_k_page(space) -> BigradedPage:
    """K-theory E2-page: H^p(Z) in even rows, no differentials to install.

    d2 lands in odd rows and vanishes; d3 vanishes on degree <= 1 classes and
    its p = 2 source would land beyond the dimension, so the page collapses.
    """
    p_max = 2 * space.dim
    entries = {}
    for q in (0, -2, -4):
        for p in range(p_max + 1):
            entries[(p, q)] = singular_h(space, p, INTEGRAL)
    entries = {pos: g for pos, g in entries.items() if not g.is_trivial}
    return BigradedPage(entries=entries, r=2, convention=COHOMOLOGICAL)


def _k_known_zero(p_max: int):
    pinned = {(p, q) for p in (0, 1) for q in (0, -2, -4)}
    return {3: frozenset(pinned)}


def ahss_k(space) -> EInfinityReport:
    p_max = 2 * space.dim
    return run_to_stable(
        ahss_k_page(space),
        ((0, p_max), (-4, 0)),
        known_zero=_k_known_zero(p_max),
    )
