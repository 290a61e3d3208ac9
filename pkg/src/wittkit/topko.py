"""Topological K, KO, and KO/K groups in closed form.

KO of a curve is the eight-periodic table (projective case) or the
wedge-of-circles model (affine case, where the free cohomology leaves no
extension ambiguity). KO/K quotients are assembled as direct sums of their
graded pieces; realification followed by complexification is multiplication
by 2, so every quotient has exponent two. Odd KO totals of surfaces are
never emitted: the quotient formulas do not need them.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    DegreeOutOfRange,
    InconsistentDescriptor,
    NoSuchTwist,
    UnsupportedTwist,
)
from .groups import (
    TRIVIAL,
    Z,
    Z2,
    SymGroup,
    direct_sum,
    direct_sum_all,
    elementary_two,
    f2_mul,
    f2_rank,
    free,
    mod2_rank,
    render,
    two_torsion,
)
from .spaces import INTEGRAL, MOD2, SpaceDescriptor, betti, singular_h
from .specseq import ahss_ko
from .witt import (
    ODD_TWIST,
    TRIVIAL_TWIST,
    normalize_twist,
    w_curve,
    w_point,
    w_surface,
)


def _h(space: SpaceDescriptor, degree: int, coefficients: str) -> SymGroup:
    # cohomology vanishes above the real dimension
    if degree > 2 * space.dim:
        return TRIVIAL
    return singular_h(space, degree, coefficients)


def _exp_two(g: SymGroup) -> SymGroup:
    assert g.free_rank == 0 and g.divisible_rank == 0
    assert all(d == 2 for d in g.torsion)
    return g


def _checked_twist(space: SpaceDescriptor, twist) -> str:
    tw = normalize_twist(twist)
    if tw == ODD_TWIST:
        if space.kind == "surface":
            raise UnsupportedTwist("twisted KO/K groups of a surface are out of scope")
        if space.kind != "curve":
            raise NoSuchTwist("a point admits only the trivial twist")
        if not space.projective:
            raise NoSuchTwist("affine curves admit no nontrivial twist class")
    return tw


# ---------------------------------------------------------------------------
# KO tables

_KO_POINT = (Z, TRIVIAL, TRIVIAL, TRIVIAL, Z, TRIVIAL, Z2, Z2)


def ko_point(d: int) -> SymGroup:
    return _KO_POINT[d % 8]


def _require_curve(space: SpaceDescriptor):
    if not isinstance(space, SpaceDescriptor) or space.kind != "curve":
        raise InconsistentDescriptor("expected a curve descriptor")


def ko_curve(space: SpaceDescriptor, d: int) -> SymGroup:
    """KO^d of the underlying complex of a smooth curve."""
    _require_curve(space)
    d %= 8
    if space.projective:
        g = space.genus
        table = (
            SymGroup(1, (2,) * (2 * g + 1), 0),
            SymGroup(2 * g, (2,), 0),
            Z,
            TRIVIAL,
            Z,
            free(2 * g),
            SymGroup(1, (2,), 0),
            elementary_two(2 * g + 1),
        )
    else:
        k = 2 * space.genus + space.punctures - 1
        table = (
            SymGroup(1, (2,) * k, 0),
            free(k),
            TRIVIAL,
            TRIVIAL,
            Z,
            free(k),
            Z2,
            elementary_two(k + 1),
        )
    return table[d]


def ko_curve_reduced(space: SpaceDescriptor, d: int) -> SymGroup:
    """Total KO^d minus the KO^d of a point."""
    _require_curve(space)
    d %= 8
    if space.projective:
        g = space.genus
        table = (
            elementary_two(2 * g + 1),
            SymGroup(2 * g, (2,), 0),
            Z,
            TRIVIAL,
            TRIVIAL,
            free(2 * g),
            Z,
            elementary_two(2 * g),
        )
    else:
        k = 2 * space.genus + space.punctures - 1
        table = (
            elementary_two(k),
            free(k),
            TRIVIAL,
            TRIVIAL,
            TRIVIAL,
            free(k),
            TRIVIAL,
            elementary_two(k),
        )
    return table[d]


# ---------------------------------------------------------------------------
# KO/K quotients


def sq2_integral(space: SpaceDescriptor):
    """Sq2 restricted to the image of H^2(Z) inside H^2(Z/2), as an F2 matrix
    on the mod-2 reduction of H^2(Z)."""
    if space.kind != "surface":
        raise InconsistentDescriptor("Sq2 data lives on surface descriptors")
    return f2_mul(space.sq2, space.pi2)


def _kok_surface(space: SpaceDescriptor, i: int) -> SymGroup:
    sq = sq2_integral(space)
    r = f2_rank(sq)
    if i == 0:
        image_defect = _h(space, 2, MOD2).ngens - f2_rank(space.pi2)
        return direct_sum_all(
            [Z2, _h(space, 1, MOD2), elementary_two(image_defect)]
        )
    if i == 1:
        kernel_rank = mod2_rank(_h(space, 2, INTEGRAL)) - r
        return direct_sum(elementary_two(kernel_rank), _h(space, 3, MOD2))
    if i == 2:
        return elementary_two(_h(space, 4, MOD2).ngens - r)
    return TRIVIAL


def kok(space: SpaceDescriptor, shift: int, twist=TRIVIAL_TWIST) -> SymGroup:
    """KO^shift/K of the space, shift even, eight-periodic."""
    if shift % 2:
        raise DegreeOutOfRange("KO/K quotients live in even shifts only")
    tw = _checked_twist(space, twist)
    i = (shift % 8) // 2
    if space.kind == "point":
        g = Z2 if i == 0 else TRIVIAL
    elif space.kind == "curve":
        h1 = _h(space, 1, MOD2)
        if tw == ODD_TWIST:
            g = h1 if i == 0 else TRIVIAL
        elif space.projective:
            g = (direct_sum(Z2, h1), Z2, TRIVIAL, TRIVIAL)[i]
        else:
            g = direct_sum(Z2, h1) if i == 0 else TRIVIAL
    else:
        g = _kok_surface(space, i)
    return _exp_two(g)


def kok_reduced(space: SpaceDescriptor, shift: int, twist=TRIVIAL_TWIST) -> SymGroup:
    tw = _checked_twist(space, twist)
    if shift % 2 == 0 and (shift % 8) == 0 and tw == TRIVIAL_TWIST:
        if space.kind == "point":
            return TRIVIAL
        if space.kind == "curve":
            return _exp_two(_h(space, 1, MOD2))
        image_defect = _h(space, 2, MOD2).ngens - f2_rank(space.pi2)
        return _exp_two(
            direct_sum(_h(space, 1, MOD2), elementary_two(image_defect))
        )
    return kok(space, shift, tw)


# ---------------------------------------------------------------------------
# complex K-theory


def k_top_graded(space: SpaceDescriptor) -> tuple:
    """Graded pieces (Z, H^2(Z), H^4(Z)) of K^0."""
    return (Z, _h(space, 2, INTEGRAL), _h(space, 4, INTEGRAL))


def k1_two_torsion(space: SpaceDescriptor) -> SymGroup:
    # K^1 = H^1 + H^3; H^1 is free for every descriptor kind here
    return direct_sum(
        two_torsion(_h(space, 1, INTEGRAL)), two_torsion(_h(space, 3, INTEGRAL))
    )


# ---------------------------------------------------------------------------
# eta multiplication and mod-2 rank arithmetic

# total degree at which KO^d is read off the stable page: the window cuts the
# rows below q = -10, so degrees 3..7 are read on the second periodic copy
_KO_DEGREE_READ = {0: 0, 1: 1, 2: 2, 3: -5, 4: -4, 5: -3, 6: -2, 7: -1}


def eta_iso_check(space: SpaceDescriptor) -> bool:
    """True when multiplication by eta identifies KO^{2i-1}[2] with KO^2i/K.

    The verdict is the vanishing of the 2-torsion of K^1. When it holds, the
    identification is asserted: in full against the curve/point KO tables,
    and at the level of two-torsion ranks of stable-page pieces for surfaces
    (odd KO totals are not emitted there), skipping shifts the undetermined
    page-3 arrow touches.
    """
    if not k1_two_torsion(space).is_trivial:
        return False
    rep = ahss_ko(space) if space.kind == "surface" else None
    for i in range(4):
        quotient = kok(space, 2 * i)
        d = (2 * i - 1) % 8
        if space.kind == "point":
            assert quotient == two_torsion(ko_point(d))
        elif space.kind == "curve":
            assert quotient == two_torsion(ko_curve(space, d))
        else:
            td = _KO_DEGREE_READ[d]
            if td in rep.unknown_degrees:
                continue
            predicted = sum(mod2_rank(two_torsion(g)) for g in rep.pieces(td))
            assert mod2_rank(quotient) == predicted
    return True


@dataclass(frozen=True)
class Mod2Ranks:
    """Ranks with Z/2 coefficients, additive over adjacent shifts.

    ``w`` and ``kok`` hold rank W^i(Z/2) for i = 0..3 and rank KO^2i/K(Z/2);
    both are None when 2-torsion in K^1 obstructs the eta identification.
    ``k0_order_log2`` is log2 of the order of K^0(Z/2), always emitted.
    """

    w: tuple | None
    kok: tuple | None
    k0_order_log2: int
    k1_two_rank: int
    signal: str | None = None


def _w_groups(space: SpaceDescriptor) -> tuple:
    if space.kind == "point":
        return tuple(w_point(i) for i in range(4))
    if space.kind == "curve":
        return tuple(w_curve(space, i) for i in range(4))
    return tuple(w_surface(space, i) for i in range(4))


def mod2_ranks(space: SpaceDescriptor) -> Mod2Ranks:
    k1_rank = mod2_rank(k1_two_torsion(space))
    k0_log2 = sum(mod2_rank(g) for g in k_top_graded(space)) + k1_rank
    if k1_rank:
        return Mod2Ranks(None, None, k0_log2, k1_rank, signal="eta-obstructed")
    w = _w_groups(space)
    w_row = tuple(
        mod2_rank(w[i]) + mod2_rank(w[(i + 1) % 4]) for i in range(4)
    )
    quotients = tuple(kok(space, 2 * i) for i in range(4))
    kok_row = tuple(
        mod2_rank(quotients[i]) + mod2_rank(quotients[(i + 1) % 4])
        for i in range(4)
    )
    return Mod2Ranks(w_row, kok_row, k0_log2, 0)


def _pic_onto(space: SpaceDescriptor) -> bool:
    if space.kind == "surface":
        return space.rho == betti(space)[2]
    return True


@dataclass(frozen=True)
class QlReport:
    pic_surjective: bool
    k1_two_rank: int
    verdict: bool
    shifts_checked: tuple


def ql_hermitian_verdict(space: SpaceDescriptor) -> QlReport:
    """Both hypotheses of the hermitian comparison at once: Picard group
    surjecting onto H^2(Z) and 2-torsion-free K^1. When they hold the
    shiftwise Witt vs KO/K equality is asserted on the spot."""
    onto = _pic_onto(space)
    k1_rank = mod2_rank(k1_two_torsion(space))
    verdict = onto and k1_rank == 0
    checked = ()
    if verdict:
        w = _w_groups(space)
        for i in range(4):
            assert w[i] == kok(space, 2 * i)
        assert mod2_ranks(space).w is not None
        checked = (0, 1, 2, 3)
    return QlReport(onto, k1_rank, verdict, checked)


# ---------------------------------------------------------------------------
# assembled table


@dataclass(frozen=True)
class KoTable:
    kind: str
    twist: str
    ko: tuple
    ko_reduced: tuple
    k0_graded: tuple
    kok: tuple
    kok_reduced: tuple


def ko_table(space: SpaceDescriptor, twist=TRIVIAL_TWIST) -> KoTable:
    """All emitted topological groups of one descriptor.

    KO totals are filled for the point and untwisted curves; twisted curves
    and surfaces carry None in all eight slots (twisted totals would need the
    Thom-space model, surface odd totals an undetermined differential).
    """
    tw = _checked_twist(space, twist)
    if space.kind == "point":
        ko = tuple(ko_point(d) for d in range(8))
        ko_red = (TRIVIAL,) * 8
    elif space.kind == "curve" and tw == TRIVIAL_TWIST:
        ko = tuple(ko_curve(space, d) for d in range(8))
        ko_red = tuple(ko_curve_reduced(space, d) for d in range(8))
    else:
        ko = (None,) * 8
        ko_red = (None,) * 8
    return KoTable(
        kind=space.kind,
        twist=tw,
        ko=ko,
        ko_reduced=ko_red,
        k0_graded=k_top_graded(space),
        kok=tuple(kok(space, 2 * i, tw) for i in range(4)),
        kok_reduced=tuple(kok_reduced(space, 2 * i, tw) for i in range(4)),
    )


def topko_json_payload(table: KoTable) -> dict:
    return {
        "KO": [render(g) if g is not None else None for g in table.ko],
        "K0_gr": [render(g) for g in table.k0_graded],
        "KOK": [render(g) for g in table.kok],
    }
