"""Shiftwise comparison of algebraic Witt groups with topological KO/K.

Curves compare isomorphically at every shift and twist. Surfaces compare
through the Picard map: surjectivity onto H^2(Z) is exactly what makes the
shift-0 columns agree, and a rank defect there is detected and measured. The
maps themselves are not modeled; "iso" means canonical-form equality of the
two independently computed groups.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import InconsistentDescriptor
from .groups import TRIVIAL, SymGroup, f2_rank, mod2_rank, parse_group, render
from .spaces import SpaceDescriptor, betti, sq2z_on_pic
from .topko import kok, kok_reduced, sq2_integral
from .witt import (
    TRIVIAL_TWIST,
    normalize_twist,
    w_curve,
    w_curve_reduced,
    w_point,
    w_surface,
    w_surface_reduced,
)

CURVE_ALWAYS_ISO = "curve-always-iso"
SURFACE_ISO = "surface-iso"
SURFACE_MISMATCH = "surface-mismatch"


def pic_surjective(space: SpaceDescriptor) -> bool:
    """Whether Pic(X) covers H^2(X;Z); always true below dimension two."""
    if space.kind == "surface":
        return space.rho == betti(space)[2]
    return True


@dataclass(frozen=True)
class ShiftRow:
    shift: int
    w: SymGroup
    kok: SymGroup
    iso: bool


@dataclass(frozen=True)
class ComparisonReport:
    """Per-shift Witt vs KO/K columns plus the theorem-level verdict.

    ``mismatch`` is None or (shift, w_rank, kok_rank) for the first differing
    shift; shift-0 ranks are taken on reduced groups so the shared point
    summand cannot hide a defect.
    """

    kind: str
    twist: str
    pic_surjective: bool
    rows: tuple
    verdict: str
    mismatch: tuple | None


def _w_total(space: SpaceDescriptor, i: int, twist) -> SymGroup:
    if space.kind == "point":
        return w_point(i)
    if space.kind == "curve":
        return w_curve(space, i, twist)
    return w_surface(space, i)


def _w_reduced_zero(space: SpaceDescriptor, twist) -> SymGroup:
    if space.kind == "point":
        return TRIVIAL
    if space.kind == "curve":
        return w_curve_reduced(space, 0, twist)
    return w_surface_reduced(space, 0)


def compare_w_kok(space: SpaceDescriptor, twist=TRIVIAL_TWIST) -> ComparisonReport:
    rows = []
    mismatch = None
    for i in range(4):
        k_grp = kok(space, 2 * i, twist)  # validates the twist for the kind
        w_grp = _w_total(space, i, twist)
        iso = w_grp == k_grp
        rows.append(ShiftRow(i, w_grp, k_grp, iso))
        if not iso and mismatch is None:
            if i == 0:
                mismatch = (
                    0,
                    mod2_rank(_w_reduced_zero(space, twist)),
                    mod2_rank(kok_reduced(space, 0, twist)),
                )
            else:
                mismatch = (i, mod2_rank(w_grp), mod2_rank(k_grp))
    onto = pic_surjective(space)
    if space.kind != "surface":
        verdict = CURVE_ALWAYS_ISO
        assert mismatch is None
    elif mismatch is None:
        verdict = SURFACE_ISO
    else:
        verdict = SURFACE_MISMATCH
    if space.kind == "surface" and not onto:
        # necessity direction: a Picard rank defect must surface at shift 0
        assert mismatch is not None and mismatch[0] == 0
    return ComparisonReport(
        kind=space.kind,
        twist=normalize_twist(twist),
        pic_surjective=onto,
        rows=tuple(rows),
        verdict=verdict,
        mismatch=mismatch,
    )


def _cols(m) -> int:
    return len(m[0]) if m else 0


def s1_vs_sq2z(space: SpaceDescriptor) -> bool:
    """Compatibility of the Chow-side squaring map with the integral Sq2.

    With a surjective Picard map the two operations are identified, so their
    kernel and cokernel ranks must agree. Otherwise only the commutation
    bound is checkable: the image of s1 cannot exceed the image of Sq2_Z
    restricted to the Picard classes.
    """
    if space.kind != "surface":
        raise InconsistentDescriptor("expected a surface descriptor")
    sq = sq2_integral(space)
    s1 = space.s1
    if pic_surjective(space):
        kernels = _cols(s1) - f2_rank(s1) == _cols(sq) - f2_rank(sq)
        cokernels = len(s1) - f2_rank(s1) == len(sq) - f2_rank(sq)
        return kernels and cokernels
    return f2_rank(s1) <= f2_rank(sq2z_on_pic(space))


# ---------------------------------------------------------------------------
# serialization


def report_to_json(report: ComparisonReport) -> str:
    data = {
        "kind": report.kind,
        "twist": report.twist,
        "pic_surjective": report.pic_surjective,
        "rows": [
            {"shift": r.shift, "W": render(r.w), "KOK": render(r.kok),
             "iso": r.iso}
            for r in report.rows
        ],
        "verdict": report.verdict,
        "mismatch": None if report.mismatch is None else {
            "shift": report.mismatch[0],
            "w_rank": report.mismatch[1],
            "kok_rank": report.mismatch[2],
        },
    }
    return json.dumps(data)


def report_from_json(source) -> ComparisonReport:
    data = json.loads(source)
    rows = tuple(
        ShiftRow(r["shift"], parse_group(r["W"]), parse_group(r["KOK"]),
                 r["iso"])
        for r in data["rows"]
    )
    m = data["mismatch"]
    return ComparisonReport(
        kind=data["kind"],
        twist=data["twist"],
        pic_surjective=data["pic_surjective"],
        rows=rows,
        verdict=data["verdict"],
        mismatch=None if m is None else (m["shift"], m["w_rank"], m["kok_rank"]),
    )
