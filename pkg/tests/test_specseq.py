"""Engine behavior checked against brute-force F2 chain homology, plus the
frozen page data of the standard examples."""

import random

import pytest

from sample_spaces import (
    abelian_like_surface,
    enriques_surface,
    k3_surface,
    p2_surface,
    ruled_surface,
)
from wittkit.errors import MalformedPage
from wittkit.groups import (
    TRIVIAL,
    Z,
    Z2,
    GroupMap,
    elementary_two,
    free,
    mod2_rank,
    zero_map,
)
from wittkit.spaces import make_curve, make_point
from wittkit.specseq import (
    COHOMOLOGICAL,
    PARDON,
    BigradedPage,
    ahss_k,
    ahss_k_page,
    ahss_ko,
    ahss_ko_page,
    bidegree,
    dump_page,
    pardon_e2,
    pardon_stable,
    run_to_stable,
    turn_page,
)

# ---------------------------------------------------------------------------
# brute-force oracle over F2


def f2_kernel_dim(m, cols):
    hits = 0
    for bits in range(2 ** cols):
        v = [(bits >> j) & 1 for j in range(cols)]
        if all(sum(r * x for r, x in zip(row, v)) % 2 == 0 for row in m):
            hits += 1
    return hits.bit_length() - 1


def left_kernel_rows(m, rows, cols):
    # all w with w.m = 0, as candidate next differentials
    out = []
    for bits in range(2 ** rows):
        w = [(bits >> i) & 1 for i in range(rows)]
        if all(sum(w[i] * m[i][j] for i in range(rows)) % 2 == 0 for j in range(cols)):
            out.append(tuple(w))
    return out


def test_two_term_f2_homology_against_brute_force():
    rng = random.Random(7)
    for _ in range(40):
        a, b, c = rng.randint(0, 3), rng.randint(1, 4), rng.randint(0, 3)
        m = tuple(tuple(rng.randint(0, 1) for _ in range(a)) for _ in range(b))
        pool = left_kernel_rows(m, b, a)
        n = tuple(rng.choice(pool) for _ in range(c))
        A, B, C = elementary_two(a), elementary_two(b), elementary_two(c)
        diffs = {}
        if a:
            diffs[(0, 0)] = GroupMap(A, B, m)
        if c:
            diffs[(2, -1)] = GroupMap(B, C, n)
        page = BigradedPage(
            entries={(0, 0): A, (2, -1): B, (4, -2): C},
            r=2,
            convention=COHOMOLOGICAL,
            differentials=diffs,
        )
        nxt = turn_page(page)
        rank_m = a - f2_kernel_dim(m, a)
        rank_n = b - f2_kernel_dim(n, b)
        assert nxt.group_at(0, 0) == elementary_two(a - rank_m)
        assert nxt.group_at(2, -1) == elementary_two((b - rank_n) - rank_m)
        assert nxt.group_at(4, -2) == elementary_two(c - rank_n)


def test_noncomposable_differentials_rejected():
    A = elementary_two(1)
    with pytest.raises(MalformedPage):
        BigradedPage(
            entries={(0, 0): A, (2, -1): A, (4, -2): A},
            r=2,
            convention=COHOMOLOGICAL,
            differentials={
                (0, 0): GroupMap(A, A, ((1,),)),
                (2, -1): GroupMap(A, A, ((1,),)),
            },
        )


def test_page_validation():
    with pytest.raises(MalformedPage):
        BigradedPage(entries={(0, 0): Z}, r=2, convention="diagonal")
    with pytest.raises(MalformedPage):
        BigradedPage(
            entries={(0, 0): Z},
            r=2,
            convention=COHOMOLOGICAL,
            differentials={(0, 0): zero_map(Z, Z)},  # target position empty
        )
    with pytest.raises(MalformedPage):
        BigradedPage(
            entries={(0, 0): Z, (2, -1): Z2},
            r=2,
            convention=COHOMOLOGICAL,
            differentials={(2, -1): zero_map(Z2, Z2)},  # leaves toward nothing
        )
    with pytest.raises(MalformedPage):
        BigradedPage(
            entries={(0, 0): Z, (2, -1): Z2},
            r=2,
            convention=COHOMOLOGICAL,
            differentials={(0, 0): zero_map(Z2, Z2)},  # wrong domain
        )
    from wittkit.groups import divisible

    with pytest.raises(MalformedPage):
        BigradedPage(entries={(0, 0): divisible(2)}, r=2, convention=PARDON)


def test_trivial_entries_dropped_and_zero_page_turns_to_itself():
    page = BigradedPage(
        entries={(0, 0): Z, (1, 1): TRIVIAL, (2, 0): free(3)},
        r=2,
        convention=COHOMOLOGICAL,
    )
    assert (1, 1) not in page.entries
    assert turn_page(page).entries == page.entries


def test_bidegree_conventions():
    assert bidegree(COHOMOLOGICAL, 2) == (2, -1)
    assert bidegree(COHOMOLOGICAL, 3) == (3, -2)
    assert bidegree(PARDON, 2) == (1, 1)
    assert bidegree(PARDON, 3) == (1, 2)


def test_kernel_of_integral_to_f2_surjection():
    # d2 out of a rank-one free entry: kernel is 2Z, still free of rank one
    page = ahss_ko_page(p2_surface())
    nxt = turn_page(page)
    assert nxt.group_at(2, 0) == Z
    assert nxt.group_at(4, -1) == TRIVIAL
    assert nxt.group_at(2, -1) == TRIVIAL
    assert nxt.group_at(4, -2) == TRIVIAL


# ---------------------------------------------------------------------------
# run_to_stable plumbing


def test_empty_page_gives_empty_report():
    page = BigradedPage(entries={}, r=2, convention=COHOMOLOGICAL)
    report = run_to_stable(page)
    assert report.entries == {}
    assert report.degrees == {}
    assert report.resolved_group(0) == TRIVIAL


def test_region_violation_rejected():
    page = BigradedPage(entries={(9, 9): Z}, r=2, convention=COHOMOLOGICAL)
    with pytest.raises(MalformedPage):
        run_to_stable(page)


def test_filtration_order_and_pieces():
    rep = ahss_ko(make_curve(True, 2))
    triples = rep.degrees[0]
    assert [(s, t) for s, t, _ in triples] == [(0, 0), (1, -1), (2, -2)]
    assert rep.pieces(0) == (Z, elementary_two(4), Z2)
    assert rep.extension_resolved[0] is False
    assert rep.resolved_group(0) is None


def test_exponent_two_assembly():
    rep = pardon_stable(make_curve(True, 1))
    assert rep.pieces(0) == (Z2, elementary_two(2))
    assert rep.resolved_group(0) == elementary_two(3)
    assert rep.resolved_group(1) == Z2
    assert rep.resolved_group(2) == TRIVIAL
    plain = run_to_stable(
        pardon_e2(make_curve(True, 1)), ((0, 2), (0, 2)),
        known_zero={3: frozenset({(0, 0)})},
    )
    assert plain.resolved_group(0) is None  # extensions not declared split


# ---------------------------------------------------------------------------
# Pardon pages


def test_pardon_p2_page_and_collapse():
    page = pardon_e2(p2_surface())
    assert page.entries == {(0, 0): Z2, (1, 1): Z2, (2, 2): Z2}
    assert page.differentials[(1, 1)].matrix == ((1,),)
    nxt = turn_page(page)
    assert nxt.group_at(1, 1) == TRIVIAL
    assert nxt.group_at(2, 2) == TRIVIAL
    assert nxt.group_at(0, 0) == Z2


def test_pardon_p1():
    page = pardon_e2(make_curve(True, 0))
    assert page.entries == {(0, 0): Z2, (1, 1): Z2}
    rep = pardon_stable(make_curve(True, 0))
    assert rep.resolved_group(0) == Z2
    assert rep.resolved_group(1) == Z2


def test_pardon_projective_curves():
    for g in range(4):
        rep = pardon_stable(make_curve(True, g))
        assert rep.pieces(0) == ((Z2, elementary_two(2 * g)) if g else (Z2,))
        assert rep.resolved_group(1) == Z2
        assert rep.resolved_group(2) == TRIVIAL
        assert rep.resolved_group(3) == TRIVIAL


def test_pardon_affine_curves():
    rep = pardon_stable(make_curve(False, 1, 2))
    assert rep.resolved_group(0) == elementary_two(4)  # unit plus H^1
    assert rep.resolved_group(1) == TRIVIAL


def test_pardon_point():
    rep = pardon_stable(make_point())
    assert rep.resolved_group(0) == Z2
    assert rep.resolved_group(1) == TRIVIAL


def test_pardon_enriques_entries():
    page = pardon_e2(enriques_surface())
    assert page.entries[(0, 1)] == Z2
    assert page.entries[(1, 1)] == elementary_two(11)
    assert page.entries[(0, 2)] == Z2
    assert page.entries[(1, 2)] == Z2
    assert page.entries[(2, 2)] == Z2
    # s1 defaults to zero here, so everything survives
    rep = pardon_stable(enriques_surface())
    assert rep.resolved_group(0) == elementary_two(3)
    assert rep.resolved_group(1) == elementary_two(12)
    assert rep.resolved_group(2) == Z2


def test_pardon_k3():
    rep = pardon_stable(k3_surface(20))
    assert rep.resolved_group(0) == elementary_two(3)  # 1 + (22 - 20)
    assert rep.resolved_group(1) == elementary_two(20)
    assert rep.resolved_group(2) == Z2


# ---------------------------------------------------------------------------
# Atiyah-Hirzebruch pages


def test_ko_point_pattern():
    rep = ahss_ko(make_point())
    want = [Z, Z2, Z2, TRIVIAL, Z, TRIVIAL, TRIVIAL, TRIVIAL]
    got = [rep.resolved_group(-d) for d in range(8)]
    assert got == want


def test_ko_curve_degrees():
    rep = ahss_ko(make_curve(True, 2))
    assert rep.pieces(1) == (free(4), Z2)
    assert rep.pieces(2) == (Z,)
    assert rep.pieces(-3) == (free(4),)
    assert rep.pieces(-2) == (Z2, Z)
    assert rep.pieces(-1) == (Z2, elementary_two(4))
    assert rep.unknown_degrees == frozenset()


def test_ko_affine_curve_degrees():
    rep = ahss_ko(make_curve(False, 1, 2))  # wedge of three circles
    assert rep.pieces(0) == (Z, elementary_two(3))
    assert rep.pieces(1) == (free(3),)
    assert rep.pieces(2) == ()
    assert rep.pieces(-2) == (Z2,)
    assert rep.pieces(-1) == (Z2, elementary_two(3))


def test_ko_p2_no_unknowns():
    rep = ahss_ko(p2_surface())
    assert rep.unknown_degrees == frozenset()
    assert rep.pieces(0) == (Z, Z2, Z)
    assert rep.pieces(1) == ()
    assert rep.pieces(2) == (Z,)


def test_ko_enriques():
    rep = ahss_ko(enriques_surface())
    assert rep.unknown_degrees == frozenset()
    # the (2,-2) entry has no outgoing arrow (row -3 vanishes): all 12 survive
    assert rep.pieces(0) == (Z, Z2, elementary_two(12), Z)
    # the rank-one Sq2 cuts the (2,-1) entry down to 11; H^3(Z/2) joins it
    assert rep.pieces(1) == (elementary_two(11), Z2)
    # H^4(Z/2) is killed by the image of Sq2
    assert rep.pieces(-1) == (Z2, Z2, Z2)


def test_ko_unknown_differential_marks_degrees():
    rep = ahss_ko(abelian_like_surface())
    assert (3, (1, 0), (4, -2)) in rep.unknown_arrows
    assert (3, (1, -8), (4, -10)) in rep.unknown_arrows
    assert {1, 2} <= set(rep.unknown_degrees)
    assert rep.resolved_group(1) is None
    assert rep.resolved_group(2) is None
    # degree 0 stays readable
    assert rep.resolved_group(0) is None  # mixed pieces, but not unknown
    assert 0 not in rep.unknown_degrees


def test_ko_ruled_surface_kills_unknown_target():
    # Sq2 is onto H^4(Z/2) here, so the page-3 source has nothing to hit
    rep = ahss_ko(ruled_surface(2))
    assert rep.unknown_degrees == frozenset()


def test_k_collapse_and_reading():
    for space in (p2_surface(), enriques_surface(), make_curve(True, 3)):
        page = ahss_k_page(space)
        rep = ahss_k(space)
        assert rep.entries == page.entries
        assert rep.unknown_degrees == frozenset()
    rep = ahss_k(p2_surface())
    assert rep.pieces(0) == (Z, Z, Z)
    assert rep.pieces(1) == ()
    rep = ahss_k(enriques_surface())
    from wittkit.groups import SymGroup

    assert rep.pieces(0) == (Z, SymGroup(10, (2,), 0), Z)
    assert rep.pieces(1) == (Z2,)


# ---------------------------------------------------------------------------
# invariants


def test_total_f2_dimension_never_increases():
    for space in (p2_surface(), enriques_surface(), k3_surface(3),
                  ruled_surface(1), make_curve(True, 2)):
        page = ahss_ko_page(space)
        for _ in range(4):
            nxt = turn_page(page)
            for pos, grp in nxt.entries.items():
                assert mod2_rank(grp) <= mod2_rank(page.entries[pos])
            page = nxt


def test_stable_entries_idempotent():
    page = ahss_ko_page(enriques_surface())
    rep = ahss_ko(enriques_surface())
    for _ in range(6):
        page = turn_page(page)
    assert page.entries == rep.entries
    assert turn_page(page).entries == rep.entries


def test_dump_format():
    text = dump_page(pardon_e2(p2_surface()))
    assert text == (
        "E_2[0,0] = Z/2\n"
        "E_2[1,1] = Z/2\n"
        "E_2[2,2] = Z/2\n"
        "d_2[0,0→1,1] = [0]\n"
        "d_2[1,1→2,2] = [1]"
    )
    assert dump_page(pardon_e2(p2_surface())) == text
