"""Descriptors for points, smooth complex curves, and smooth complex surfaces.

A descriptor stores the small amount of data the group computations need:
genus and punctures for curves; integral cohomology, Picard data, and the
mod-2 operation matrices for surfaces. Everything else (Betti numbers,
mod-2 cohomology, Picard groups, graded K-theory) is derived here.

Matrix fields (sq2, pi2, s1) are F2 matrices over the canonical mod-2 bases:
H^2(Z)/2 is spanned by the free generators of H^2 followed by its 2-torsion
generators, and H^2(Z/2) extends that basis by the 2-torsion of H^3.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import DegreeOutOfRange, InconsistentDescriptor, RenderParseError
from .groups import (
    TRIVIAL,
    Z,
    Matrix,
    SymGroup,
    divisible,
    elementary_two,
    f2_mul,
    f2_rank,
    free,
    mod2_rank,
    parse_group,
    render,
)

INTEGRAL = "integral"
MOD2 = "mod2"


@dataclass(frozen=True)
class SpaceDescriptor:
    kind: str  # "point" | "curve" | "surface"
    projective: bool = True
    genus: int = 0
    punctures: int = 0
    h_int_table: tuple = ()
    nu: int = 0
    rho: int = 0
    ch2_mod2_rank: int = 0
    sq2: Matrix = ()
    pi2: Matrix = ()
    s1: Matrix = ()

    @property
    def dim(self) -> int:
        return {"point": 0, "curve": 1, "surface": 2}[self.kind]

    def __str__(self):
        if self.kind == "point":
            return "point"
        if self.kind == "curve":
            if self.projective:
                return "curve(g=%d)" % self.genus
            return "affine_curve(g=%d,n=%d)" % (self.genus, self.punctures)
        return "surface(b2=%d,rho=%d)" % (self.h_int_table[2].free_rank, self.rho)


def make_point() -> SpaceDescriptor:
    return SpaceDescriptor(kind="point")


def make_curve(projective: bool, genus: int, punctures: int = 0) -> SpaceDescriptor:
    if genus < 0 or punctures < 0:
        raise InconsistentDescriptor("genus and punctures must be nonnegative")
    if projective and punctures:
        raise InconsistentDescriptor("projective curve cannot have punctures")
    if not projective and punctures == 0:
        raise InconsistentDescriptor("affine curve needs at least one puncture")
    return SpaceDescriptor(kind="curve", projective=bool(projective), genus=genus,
                           punctures=punctures)


def _even_torsion(g: SymGroup) -> int:
    return sum(1 for d in g.torsion if d % 2 == 0)


def _as_f2(m, name: str, rows: int, cols: int) -> Matrix:
    mat = tuple(tuple(int(x) % 2 for x in row) for row in m)
    if len(mat) != rows or any(len(row) != cols for row in mat):
        raise InconsistentDescriptor(
            "%s must be a %dx%d F2 matrix, got %dx%s"
            % (name, rows, cols, len(mat), [len(r) for r in mat] or "0")
        )
    return mat


def make_surface(
    projective: bool,
    h_int,
    nu: int,
    rho: int,
    ch2_mod2_rank: int,
    sq2,
    pi2,
    s1=None,
) -> SpaceDescriptor:
    table = tuple(h_int)
    if len(table) != 5 or not all(isinstance(h, SymGroup) for h in table):
        raise InconsistentDescriptor("h_int must list the five groups H^0..H^4")
    if table[0] != Z:
        raise InconsistentDescriptor("h0: a connected surface has H^0 = Z")
    if table[1].torsion:
        raise InconsistentDescriptor("h1: H^1 of a smooth surface is torsion-free")
    if any(h.divisible_rank for h in table):
        raise InconsistentDescriptor("h_int entries must be finitely generated")

    b2 = table[2].free_rank
    t3 = _even_torsion(table[3])
    if nu != _even_torsion(table[2]):
        raise InconsistentDescriptor(
            "nu: expected the 2-torsion rank of H^2, which is %d" % _even_torsion(table[2])
        )
    if not 0 <= rho <= b2:
        raise InconsistentDescriptor("rho: need 0 <= rho <= b2 = %d, got %d" % (b2, rho))
    if projective:
        if t3 != nu:
            raise InconsistentDescriptor(
                "projective-duality: torsion of H^3 must match H^2 (t3=%d, nu=%d)" % (t3, nu)
            )
        if table[4] != Z:
            raise InconsistentDescriptor("projective-h4: H^4 of a projective surface is Z")
        if ch2_mod2_rank != 1:
            raise InconsistentDescriptor("projective-ch2: CH^2/2 of a projective surface has rank 1")
    if ch2_mod2_rank != mod2_rank(table[4]):
        raise InconsistentDescriptor(
            "ch2-rank: CH^2/2 rank must equal rank H^4/2 = %d (degree map surjectivity)"
            % mod2_rank(table[4])
        )

    m2 = b2 + nu          # rank of H^2(Z)/2
    r2 = b2 + nu + t3     # rank of H^2(Z/2)
    r4 = mod2_rank(table[4])  # rank of H^4(Z/2); H^5 = 0
    pi2m = _as_f2(pi2, "pi2", r2, m2)
    if f2_rank(pi2m) != m2:
        raise InconsistentDescriptor("pi2-injective: pi2 must have full column rank %d" % m2)
    sq2m = _as_f2(sq2, "sq2", r4, r2)
    if s1 is None:
        if rho != b2:
            raise InconsistentDescriptor(
                "s1: no default available when rho < b2; supply the squaring matrix"
            )
        s1m = f2_mul(sq2m, pi2m, m2)
    else:
        s1m = _as_f2(s1, "s1", ch2_mod2_rank, rho + nu)

    return SpaceDescriptor(
        kind="surface",
        projective=bool(projective),
        h_int_table=table,
        nu=nu,
        rho=rho,
        ch2_mod2_rank=ch2_mod2_rank,
        sq2=sq2m,
        pi2=pi2m,
        s1=s1m,
    )


# ---------------------------------------------------------------------------
# derived invariants


def betti(space: SpaceDescriptor) -> tuple:
    if space.kind == "point":
        return (1,)
    if space.kind == "curve":
        if space.projective:
            return (1, 2 * space.genus, 1)
        return (1, 2 * space.genus + space.punctures - 1, 0)
    return tuple(h.free_rank for h in space.h_int_table)


def h_int(space: SpaceDescriptor) -> tuple:
    """Integral cohomology in all degrees 0..2*dim."""
    if space.kind == "point":
        return (Z,)
    if space.kind == "curve":
        b1 = betti(space)[1]
        top = Z if space.projective else TRIVIAL
        return (Z, free(b1), top)
    return space.h_int_table


def singular_h(space: SpaceDescriptor, degree: int, coefficients: str) -> SymGroup:
    table = h_int(space)
    if not 0 <= degree <= 2 * space.dim:
        raise DegreeOutOfRange(
            "degree %d out of range 0..%d" % (degree, 2 * space.dim)
        )
    if coefficients == INTEGRAL:
        return table[degree]
    if coefficients == MOD2:
        b = table[degree].free_rank
        t_here = _even_torsion(table[degree])
        t_above = _even_torsion(table[degree + 1]) if degree + 1 < len(table) else 0
        return elementary_two(b + t_here + t_above)
    raise ValueError("coefficients must be %r or %r" % (INTEGRAL, MOD2))


def etale_h(space: SpaceDescriptor, degree: int) -> SymGroup:
    """Mod-2 etale cohomology, identified with singular mod-2 cohomology."""
    return singular_h(space, degree, MOD2)


def picard(space: SpaceDescriptor) -> SymGroup:
    if space.kind == "point":
        return TRIVIAL
    if space.kind == "curve":
        if space.projective:
            return SymGroup(1, (), 2 * space.genus)
        # divisible quotient: the finitely generated shadow collapses
        return divisible(2 * space.genus)
    table = space.h_int_table
    b1 = table[1].free_rank
    return SymGroup(space.rho, table[2].torsion, b1)


def k0_alg(space: SpaceDescriptor) -> tuple:
    """Graded pieces (rank, c1, c2) of algebraic K_0, as available per dim."""
    if space.kind == "point":
        return (Z,)
    if space.kind == "curve":
        return (Z, picard(space))
    return (Z, picard(space), space.h_int_table[4])


def pic_columns(space: SpaceDescriptor) -> tuple:
    """Columns of pi2 spanning the image of Pic/2 inside H^2(Z)/2.

    Convention: the first rho free generators of H^2 followed by all nu
    torsion generators (the Neron-Severi lattice is primitively embedded).
    """
    b2 = space.h_int_table[2].free_rank
    return tuple(range(space.rho)) + tuple(range(b2, b2 + space.nu))


def picard_image_matrix(space: SpaceDescriptor) -> Matrix:
    """pi2 restricted to the Picard columns: Pic/2 -> H^2(Z/2)."""
    cols = pic_columns(space)
    return tuple(tuple(row[j] for j in cols) for row in space.pi2)


def sq2z_on_pic(space: SpaceDescriptor) -> Matrix:
    """sq2 composed with pi2, restricted to the Picard columns."""
    return f2_mul(space.sq2, picard_image_matrix(space), len(pic_columns(space)))


# ---------------------------------------------------------------------------
# JSON descriptors


def _matrix_to_json(m) -> list:
    return [list(row) for row in m]


def _matrix_from_json(data, name: str) -> tuple:
    if not isinstance(data, list) or any(not isinstance(row, list) for row in data):
        raise InconsistentDescriptor("%s must be a list of rows" % name)
    return tuple(tuple(int(x) for x in row) for row in data)


def descriptor_to_json(space: SpaceDescriptor) -> str:
    if space.kind == "point":
        doc = {"kind": "point"}
    elif space.kind == "curve":
        doc = {
            "kind": "curve",
            "projective": space.projective,
            "genus": space.genus,
            "punctures": space.punctures,
        }
    else:
        doc = {
            "kind": "surface",
            "projective": space.projective,
            "h_int": [render(h) for h in space.h_int_table],
            "nu": space.nu,
            "rho": space.rho,
            "ch2_mod2_rank": space.ch2_mod2_rank,
            "sq2": _matrix_to_json(space.sq2),
            "pi2": _matrix_to_json(space.pi2),
            "s1": _matrix_to_json(space.s1),
        }
    return json.dumps(doc, sort_keys=True)


def descriptor_from_json(source) -> SpaceDescriptor:
    if isinstance(source, str):
        try:
            data = json.loads(source)
        except json.JSONDecodeError as exc:
            raise InconsistentDescriptor("descriptor is not valid JSON: %s" % exc)
    else:
        data = source
    if not isinstance(data, dict):
        raise InconsistentDescriptor("descriptor must be a JSON object")
    kind = data.get("kind")
    if kind == "point":
        _check_keys(data, {"kind"})
        return make_point()
    if kind == "curve":
        _check_keys(data, {"kind", "projective", "genus", "punctures"})
        return make_curve(
            projective=_field(data, "projective", bool),
            genus=_field(data, "genus", int),
            punctures=_field(data, "punctures", int),
        )
    if kind == "surface":
        _check_keys(
            data,
            {"kind", "projective", "h_int", "nu", "rho", "ch2_mod2_rank",
             "sq2", "pi2", "s1"},
            optional={"s1"},
        )
        raw = data.get("h_int")
        if not isinstance(raw, list) or len(raw) != 5:
            raise InconsistentDescriptor("h_int must list five groups H^0..H^4")
        try:
            table = tuple(parse_group(s) for s in raw)
        except (RenderParseError, TypeError) as exc:
            raise InconsistentDescriptor("h_int entry unreadable: %s" % exc)
        s1 = data.get("s1")
        return make_surface(
            projective=_field(data, "projective", bool),
            h_int=table,
            nu=_field(data, "nu", int),
            rho=_field(data, "rho", int),
            ch2_mod2_rank=_field(data, "ch2_mod2_rank", int),
            sq2=_matrix_from_json(data["sq2"], "sq2"),
            pi2=_matrix_from_json(data["pi2"], "pi2"),
            s1=None if s1 is None else _matrix_from_json(s1, "s1"),
        )
    raise InconsistentDescriptor("kind must be point, curve, or surface, got %r" % (kind,))


def _check_keys(data: dict, allowed: set, optional: set = frozenset()):
    extra = set(data) - allowed
    if extra:
        raise InconsistentDescriptor("unknown descriptor keys: %s" % sorted(extra))
    missing = allowed - set(data) - set(optional)
    if missing:
        raise InconsistentDescriptor("missing descriptor keys: %s" % sorted(missing))


def _field(data: dict, key: str, typ):
    val = data.get(key)
    if typ is bool:
        if not isinstance(val, bool):
            raise InconsistentDescriptor("%s must be a boolean" % key)
        return val
    if not isinstance(val, int) or isinstance(val, bool):
        raise InconsistentDescriptor("%s must be an integer" % key)
    return val
