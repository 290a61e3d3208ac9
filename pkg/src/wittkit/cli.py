"""Command-line front door.

Subcommands: compute (group tables), compare (Witt vs KO/K verdicts),
specseq (stable-page read-offs), sw (metabolic characteristic classes),
catalog (registry access). Output is byte-deterministic for fixed inputs;
exit codes: 0 success, 1 usage or validation error, 2 a failed
``compare --assert``.
"""

from __future__ import annotations

import argparse
import json
import sys

from .catalog import catalog_get, catalog_instances, catalog_list
from .compare import SURFACE_MISMATCH, compare_w_kok, report_to_json
from .errors import WittkitError
from .groups import render
from .spaces import descriptor_from_json, descriptor_to_json
from .specseq import ahss_k, ahss_ko, pardon_stable
from .topko import ko_table, topko_json_payload
from .witt import (
    curve_symplectic_ring,
    generic_sw_ring,
    projective_space_ring,
    ring_parse,
    ring_render,
    sw_metabolic_total,
    witt_json_payload,
    witt_table,
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on usage errors; our contract reserves 2
    # for failed assertions, so route everything through one exception
    def error(self, message):
        raise _UsageError(message)


def _load_space(source: str):
    if source.startswith("catalog:"):
        name = source[len("catalog:"):]
        return name, catalog_get(name).descriptor
    with open(source, "r", encoding="utf-8") as fh:
        return source, descriptor_from_json(fh.read())


def _space_pairs(args):
    if getattr(args, "all", False):
        return [(name, catalog_get(name).descriptor)
                for name in catalog_instances()]
    return [_load_space(args.space)]


def _emit(payload, batch_name=None):
    if batch_name is not None:
        payload = {"space": batch_name, "result": payload}
    print(json.dumps(payload))


def _table_rows(label: str, values, stride: int = 1) -> list:
    return ["%-8s%s" % ("%s^%d" % (label, i * stride), v if v is not None else "-")
            for i, v in enumerate(values)]


# ---------------------------------------------------------------------------
# compute


def _pick(values, index, limit, flag):
    if not 0 <= index < limit:
        raise _UsageError("%s must lie in 0..%d" % (flag, limit - 1))
    return values[index]


def _compute_payload(space, args):
    theory = args.theory
    if args.shift is not None and theory not in ("gw", "w", "kok"):
        raise _UsageError("--shift applies to gw, w, and kok only")
    if args.degree is not None and theory != "ko":
        raise _UsageError("--degree applies to ko only")
    if theory in ("witt", "gw", "w"):
        payload = witt_json_payload(witt_table(space, args.twist))
        if theory == "witt":
            return payload
        row = payload["GW" if theory == "gw" else "W"]
        if args.shift is not None:
            return _pick(row, args.shift, 4, "--shift")
        return row
    table = ko_table(space, args.twist)
    payload = topko_json_payload(table)
    if theory == "ko":
        if args.degree is not None:
            return _pick(payload["KO"], args.degree, 8, "--degree")
        return payload
    if theory == "kok":
        if args.shift is not None:
            return _pick(payload["KOK"], args.shift, 4, "--shift")
        return payload["KOK"]
    return payload["K0_gr"]  # theory == "k"


def _compute_table(space, args) -> list:
    payload = _compute_payload(space, args)
    if isinstance(payload, str) or payload is None:
        return [payload if payload is not None else "-"]
    if isinstance(payload, list):
        label = {"gw": "GW", "w": "W", "kok": "KOK", "k": "K0_gr"}[args.theory]
        return _table_rows(label, payload, 2 if args.theory in ("kok", "k") else 1)
    rows = []
    for key, values in payload.items():
        if isinstance(values, list):
            rows.extend(_table_rows(key, values, 2 if key in ("KOK", "K0_gr") else 1))
        else:
            rows.append("%-8s%s" % (key, json.dumps(values)))
    return rows


def _cmd_compute(args) -> int:
    for name, space in _space_pairs(args):
        if args.format == "table":
            if getattr(args, "all", False):
                print("[%s]" % name)
            for row in _compute_table(space, args):
                print(row)
        else:
            _emit(_compute_payload(space, args),
                  name if getattr(args, "all", False) else None)
    return 0


# ---------------------------------------------------------------------------
# compare


def _cmd_compare(args) -> int:
    code = 0
    for name, space in _space_pairs(args):
        report = compare_w_kok(space, args.twist)
        if args.format == "table":
            if getattr(args, "all", False):
                print("[%s]" % name)
            for row in report.rows:
                print("shift %d  W=%-24s KOK=%-24s %s"
                      % (row.shift, render(row.w), render(row.kok),
                         "iso" if row.iso else "MISMATCH"))
            print("verdict: %s" % report.verdict)
            if report.mismatch is not None:
                print("mismatch: shift %d, ranks %d vs %d" % report.mismatch)
        else:
            blob = report_to_json(report)
            if getattr(args, "all", False):
                print(json.dumps({"space": name, "report": json.loads(blob)}))
            else:
                print(blob)
        if args.assert_flag and report.verdict == SURFACE_MISMATCH:
            code = 2
    return code


# ---------------------------------------------------------------------------
# specseq


def _cmd_specseq(args) -> int:
    _, space = _load_space(args.space)
    if args.engine == "pardon":
        rep = pardon_stable(space)
        columns = [rep.resolved_group(i) for i in range(4)]
        payload = {
            "engine": "pardon",
            "columns": [render(g) if g is not None else None for g in columns],
        }
    else:
        rep = ahss_ko(space) if args.engine == "ko" else ahss_k(space)
        payload = {
            "engine": "ahss-%s" % args.engine,
            "degrees": {
                str(d): [render(g) for g in rep.pieces(d)]
                for d in sorted(rep.degrees)
            },
            "unknown": sorted(rep.unknown_degrees),
        }
    if args.format == "table":
        if args.engine == "pardon":
            for i, text in enumerate(payload["columns"]):
                print("W^%d     %s" % (i, text if text is not None else "-"))
        else:
            for key in payload["degrees"]:
                print("%-8s%s" % (key, " + ".join(payload["degrees"][key]) or "0"))
            if payload["unknown"]:
                print("unknown %s" % payload["unknown"])
    else:
        print(json.dumps(payload))
    return 0


# ---------------------------------------------------------------------------
# sw


_RING_BUILDERS = {
    "projective": (projective_space_ring, "d"),
    "curve": (curve_symplectic_ring, "g"),
    "generic": (generic_sw_ring, "rank"),
}


def _build_ring(text: str):
    base, sep, query = text.partition("?")
    if base not in _RING_BUILDERS:
        raise _UsageError(
            "unknown ring %r; use %s" % (base, ", ".join(sorted(_RING_BUILDERS))))
    builder, key = _RING_BUILDERS[base]
    if not sep:
        raise _UsageError("ring %r needs ?%s=<int>" % (base, key))
    name, eq, value = query.partition("=")
    if name != key or not eq:
        raise _UsageError("ring %r takes the single parameter %s" % (base, key))
    try:
        return builder(int(value))
    except ValueError:
        raise _UsageError("ring parameter %s must be an integer" % key) from None


def _cmd_sw(args) -> int:
    ring = _build_ring(args.ring)
    chern = [ring.unit()]
    if args.chern:
        chern += [ring_parse(ring, label.strip())
                  for label in args.chern.split(";")]
    total = sw_metabolic_total(chern, args.rank, ring, complex=args.complex_base)
    rendered = [ring_render(ring, c) for c in total.coefficients]
    if args.format == "table":
        for d, text in enumerate(rendered):
            print("t^%-6d%s" % (d, text))
    else:
        print(json.dumps({"ring": ring.name, "total": rendered}))
    return 0


# ---------------------------------------------------------------------------
# catalog


def _cmd_catalog(args) -> int:
    if args.name is None:
        names = list(catalog_list())
        if args.format == "table":
            for name in names:
                print(name)
        else:
            print(json.dumps(names))
        return 0
    entry = catalog_get(args.name)
    descriptor = json.loads(descriptor_to_json(entry.descriptor))
    if args.format == "table":
        print(entry.name)
        print(json.dumps(descriptor))
        for key in sorted(entry.notes):
            print("%-16s%s" % (key, entry.notes[key]))
    else:
        print(json.dumps({"name": entry.name, "descriptor": descriptor,
                          "notes": entry.notes}))
    return 0


# ---------------------------------------------------------------------------
# wiring


def _add_format(parser):
    parser.add_argument("--format", choices=("json", "table"), default="json")


def _add_source(parser):
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--space",
                       help="descriptor JSON path or catalog:<name>")
    group.add_argument("--all", action="store_true",
                       help="batch over the whole catalog")


def _build_parser() -> _Parser:
    parser = _Parser(prog="wittkit")
    sub = parser.add_subparsers(dest="command", required=True)

    compute = sub.add_parser("compute", help="group tables for one space")
    _add_source(compute)
    compute.add_argument("--theory", required=True,
                         choices=("witt", "gw", "w", "ko", "kok", "k"))
    compute.add_argument("--twist", default=None)
    compute.add_argument("--shift", type=int, default=None)
    compute.add_argument("--degree", type=int, default=None)
    _add_format(compute)
    compute.set_defaults(handler=_cmd_compute)

    compare = sub.add_parser("compare", help="Witt vs KO/K verdict")
    _add_source(compare)
    compare.add_argument("--twist", default=None)
    compare.add_argument("--assert", action="store_true", dest="assert_flag")
    _add_format(compare)
    compare.set_defaults(handler=_cmd_compare)

    specseq = sub.add_parser("specseq", help="stable-page read-off")
    specseq.add_argument("--space", required=True)
    specseq.add_argument("--engine", required=True,
                         choices=("pardon", "ko", "k"))
    _add_format(specseq)
    specseq.set_defaults(handler=_cmd_specseq)

    sw = sub.add_parser("sw", help="metabolic total class expansion")
    sw.add_argument("--ring", required=True,
                    help="projective?d=, curve?g=, or generic?rank=")
    sw.add_argument("--rank", type=int, required=True)
    sw.add_argument("--chern", default="",
                    help="semicolon-joined classes c_1;c_2;... of the Lagrangian")
    sw.add_argument("--complex", action="store_true", dest="complex_base")
    _add_format(sw)
    sw.set_defaults(handler=_cmd_sw)

    catalog = sub.add_parser("catalog", help="registry access")
    catalog.add_argument("--name", default=None)
    _add_format(catalog)
    catalog.set_defaults(handler=_cmd_catalog)

    return parser


def run(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.handler(args)
    except _UsageError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    except WittkitError as exc:
        print("error [%s]: %s" % (exc.signal, exc), file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))
