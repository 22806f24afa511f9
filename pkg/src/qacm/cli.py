"""Command-line surface: cohomology tables, classification scans, matrix
factorization reports, machine-readable JSON/CSV output.

Exit codes: 0 success, 2 input error (parse or semantic), 3 internal
cross-check failure.  Reports are byte-deterministic for a fixed config and
seed once timestamps are disabled (--no-timestamp); QACM_SEED overrides the
--seed flag, and --config PATH supplies defaults with the same keys as the
flags.
"""

from __future__ import annotations

import argparse
import csv
import datetime
import io
import json
import os
import random
import sys
from dataclasses import dataclass

from . import mf as mfmod
from .descriptor import (DescriptorParseError, parse, parse_and_build,
                         parse_ambient_form, to_text)
from .errors import InternalCheckError
from .plane import (CohTable, cb_condition_check, coh_table as plane_table,
                    cohomology as plane_cohomology, ideals_match,
                    recover_subscheme)
from .quadric import (KernelSheaf, RankOneSheaf, acm_check, coh_table as
                      kernel_table, collinear_extension_kernel, diagonal_gluing,
                      gluing_variation_report, identity_gluing,
                      point_extension_kernel, rank_one_table,
                      restriction_invariants, split_pair_kernel, ulrich_check,
                      upper_gluing)


@dataclass
class ScanConfig:
    c_max: int = 6
    point_seed: int = 0
    window_margin: int = 8
    output: str = None
    format: str = "json"
    timestamp: bool = True

    def __post_init__(self):
        if self.c_max < 1:
            raise ValueError("c_max must be >= 1")
        if self.window_margin < 4:
            raise ValueError("window margin must be >= 4")


def seeded_line_values(seed: int, count: int):
    """Deterministic distinct small integers from a seeded shuffle of 1..97;
    the points on L are [0 : 1 : r_i]."""
    pool = list(range(1, 98))
    random.Random(seed).shuffle(pool)
    if count > len(pool):
        raise ValueError("too many points requested")
    return pool[:count]


def line_points(seed: int, count: int):
    return [((1, r), 1) for r in seeded_line_values(seed, count)]


def _seedpoint_strings(values):
    return [["0", "1", str(r)] for r in values]


# ---------------------------------------------------------------------------
# emitters


def _now() -> str:
    return datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")


def _emit(payload: dict, fmt: str, out_path, csv_rows=None, csv_header=None) -> None:
    if fmt == "json":
        text = json.dumps(payload, indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(csv_header)
        for row in csv_rows:
            writer.writerow(row)
        text = buf.getvalue()
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _table_dicts(table: CohTable):
    return table.as_dicts()


def _table_csv(table: CohTable):
    header = ["t", "h0", "h1", "h2", "chi"]
    rows = [[r.t, r.h0, r.h1, r.h2, r.chi] for r in table.rows]
    return rows, header


# ---------------------------------------------------------------------------
# cohomology command


def cmd_cohomology(args) -> int:
    node = parse(args.sheaf)
    obj = parse_and_build(args.sheaf)
    tmin, tmax = args.tmin, args.tmax
    if tmin > tmax:
        raise ValueError("tmin must be <= tmax")
    if isinstance(obj, KernelSheaf):
        table = kernel_table(obj, tmin, tmax)
        kind = "kernel"
    elif isinstance(obj, RankOneSheaf):
        table = rank_one_table(obj, tmin, tmax)
        kind = "rank-one"
    else:
        table = plane_table(obj, tmin, tmax)
        kind = "plane"
    payload = {
        "descriptor": to_text(node),
        "window": [tmin, tmax],
        "rows": _table_dicts(table),
        "flags": {"kind": kind, "cross_checked": kind == "kernel"},
        "seedpoints": [],
    }
    if args.timestamp:
        payload["timestamp"] = _now()
    rows, header = _table_csv(table)
    _emit(payload, args.format, args.out, rows, header)
    return 0


# ---------------------------------------------------------------------------
# classify scan


def classify_pairs(c_max: int):
    """(c, k) of the collinear family: 0 <= k < c <= 2k+2, starting at c = 2
    (the c = 1 non-split classes are the two point-extension sheaves)."""
    return [(c, k) for c in range(2, c_max + 1) for k in range(c) if c <= 2 * k + 2]


def _row_common(kind, descriptor, kernel, margin):
    rep = acm_check(kernel, margin)
    ur = ulrich_check(kernel, margin)
    inv1, inv2 = restriction_invariants(kernel)
    return rep, ur, {
        "kind": kind,
        "descriptor": descriptor,
        "acm": rep.is_acm,
        "window": list(rep.window),
        "ulrich": ur.is_ulrich,
        "t0": ur.t0,
        "h0_after_t0": ur.h0_after,
        "chern_h1": list(inv1),
        "chern_h2": list(inv2),
    }


def run_classify(config: ScanConfig) -> dict:
    rows = []
    # split pairs
    for c in range(0, config.c_max + 1):
        k = split_pair_kernel(c)
        desc = f"K(F1=O({c})+O(0)@H1,F2=O({c})+O(0)@H2,e=id)"
        _, _, row = _row_common("split", desc, k, config.window_margin)
        row.update({"c": c, "k": None, "z": None, "constraint_ok": None, "cb": None,
                    "recover": None, "boundary": False, "seed_values": []})
        rows.append(row)
    # the two point-extension sheaves
    for component in (1, 2):
        k = point_extension_kernel(component)
        pt_plane = 1 if component == 1 else 2
        split_plane = 3 - pt_plane
        desc = (f"K(F1=O(1)+O(0)@H{split_plane},"
                f"F2=G(c=1,k=0,Z=[v,w],h=auto)@H{pt_plane},e=id)")
        _, _, row = _row_common("point_ext", desc, k, config.window_margin)
        row.update({"c": 1, "k": 0, "z": 1, "constraint_ok": True, "cb": True,
                    "recover": None, "boundary": False, "seed_values": []})
        rows.append(row)
    # collinear extension family
    for (c, k) in classify_pairs(config.c_max):
        z = c - k
        values = seeded_line_values(config.point_seed, z)
        pts = [((1, r), 1) for r in values]
        kernel = collinear_extension_kernel(c, k, pts)
        g = kernel.other
        desc = to_text(parse(
            "K(F1=O({c})+O(0)@H1,F2=G(c={c},k={k},Z=points({pts}),h=auto)@H2,e=id)".format(
                c=c, k=k, pts=";".join(f"[0:1:{r}]" for r in values))))
        _, _, row = _row_common("collinear_ext", desc, kernel, config.window_margin)
        row.update({
            "c": c, "k": k, "z": z,
            "constraint_ok": 0 <= k < c <= 2 * k + 2,
            "cb": cb_condition_check(c, k, g.ci),
            "h0_g_minus_k": plane_cohomology(g, 0, -k),
            "boundary": c == 2 * k + 2,
            "seed_values": values,
        })
        if c <= 2 * k:
            rec = recover_subscheme(g)
            row["recover"] = "ok" if ideals_match(rec, g.ci, c) else "mismatch"
        else:
            row["recover"] = "skipped (c > 2k)"
        if row["boundary"]:
            row["h0_g_minus_k_minus_1"] = plane_cohomology(g, 0, -k - 1)
        rows.append(row)
    report = {
        "config": {"c_max": config.c_max, "seed": config.point_seed,
                   "window_margin": config.window_margin},
        "seedpoints": _seedpoint_strings(seeded_line_values(config.point_seed, config.c_max)),
        "rows": rows,
        "counts": {
            "rows": len(rows),
            "acm_true": sum(1 for r in rows if r["acm"]),
            "ulrich_true": sum(1 for r in rows if r["ulrich"]),
        },
    }
    if config.timestamp:
        report["timestamp"] = _now()
    return report


def _classify_csv(report):
    header = ["kind", "descriptor", "c", "k", "z", "constraint_ok", "cb", "acm",
              "ulrich", "t0", "h0_after_t0", "chern_h1", "chern_h2", "recover",
              "boundary", "seed_values"]
    rows = []
    for r in report["rows"]:
        rows.append([r["kind"], r["descriptor"], r["c"], r["k"], r["z"],
                     r["constraint_ok"], r["cb"], r["acm"], r["ulrich"], r["t0"],
                     r["h0_after_t0"],
                     ";".join(map(str, r["chern_h1"])), ";".join(map(str, r["chern_h2"])),
                     r["recover"], r["boundary"], ";".join(map(str, r["seed_values"]))])
    return rows, header


def cmd_classify(args) -> int:
    config = ScanConfig(args.cmax, args.seed, args.margin, args.out, args.format,
                        args.timestamp)
    report = run_classify(config)
    rows, header = _classify_csv(report)
    _emit(report, config.format, config.output, rows, header)
    return 0


def cmd_ulrich_scan(args) -> int:
    config = ScanConfig(args.cmax, args.seed, args.margin, args.out, args.format,
                        args.timestamp)
    full = run_classify(config)
    rows = [{"kind": r["kind"], "descriptor": r["descriptor"], "c": r["c"],
             "k": r["k"], "z": r["z"], "ulrich": r["ulrich"], "t0": r["t0"]}
            for r in full["rows"]]
    report = {
        "config": full["config"],
        "rows": rows,
        "counts": {"rows": len(rows), "ulrich_true": sum(1 for r in rows if r["ulrich"])},
    }
    if config.timestamp:
        report["timestamp"] = _now()
    header = ["kind", "descriptor", "c", "k", "z", "ulrich", "t0"]
    csv_rows = [[r[h] for h in header] for r in rows]
    _emit(report, config.format, config.output, csv_rows, header)
    return 0


# ---------------------------------------------------------------------------
# matrix factorization commands


def _forms_to_strings(mat):
    return [[str(f) for f in row] for row in mat]


def cmd_mf_example(args) -> int:
    a = mfmod.ulrich_example_matrix(args.component)
    b = mfmod.partner_from_adjugate(a)
    report = mfmod.mf_report(args.component, tmin=-1, tmax=2)
    payload = {
        "component": args.component,
        "matrix": _forms_to_strings(a),
        "partner": _forms_to_strings(b),
        "det": str(report.det),
        "partner_linear": report.partner_linear,
        "ulrich_linear": mfmod.ulrich_linear_check(a),
        "ranks": [{"point": list(map(str, pt)), "locus": locus, "rank": rk}
                  for pt, locus, rk in report.ranks_at_samples],
        "hilbert": [{"t": t, "h0": h} for t, h in report.hilbert],
    }
    if args.timestamp:
        payload["timestamp"] = _now()
    header = ["point", "locus", "rank"]
    rows = [[";".join(map(str, pt)), locus, rk] for pt, locus, rk in report.ranks_at_samples]
    _emit(payload, args.format, args.out, rows, header)
    return 0


def cmd_mf_verify(args) -> int:
    try:
        with open(args.file, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        q = parse_ambient_form(data["q"])
        a = mfmod.form_matrix([[parse_ambient_form(s) for s in row] for row in data["A"]])
        b = mfmod.form_matrix([[parse_ambient_form(s) for s in row] for row in data["B"]])
    except (OSError, KeyError, json.JSONDecodeError) as exc:
        raise ValueError(f"invalid pair file: {exc}") from exc
    ok = mfmod.verify_mf(mfmod.MFPair(a, b, q))
    payload = {"file": args.file, "ok": ok}
    _emit(payload, "json", args.out)
    return 0 if ok else 2


def cmd_mf_hilbert(args) -> int:
    a = mfmod.ulrich_example_matrix(args.component)
    rows = [(t, mfmod.cokernel_hilbert(a, t)) for t in range(args.tmin, args.tmax + 1)]
    payload = {
        "component": args.component,
        "rows": [{"t": t, "h0": h} for t, h in rows],
    }
    if args.timestamp:
        payload["timestamp"] = _now()
    _emit(payload, args.format, args.out, [[t, h] for t, h in rows], ["t", "h0"])
    return 0


# ---------------------------------------------------------------------------
# gluing report


def _parse_gluing_text(text: str):
    text = text.strip()
    if text == "id":
        return identity_gluing()
    from .descriptor import _Parser
    p = _Parser(text)
    node = p.parse_gluing()
    if p.peek()[0] != "EOF":
        raise ValueError(f"trailing input in gluing {text!r}")
    if node.kind == "identity":
        return identity_gluing()
    if node.kind == "diagonal":
        return diagonal_gluing(node.alpha, node.delta)
    return upper_gluing(node.alpha, node.delta, node.beta)


def cmd_gluing_report(args) -> int:
    obj = parse_and_build(args.sheaf)
    if not isinstance(obj, KernelSheaf):
        raise ValueError("gluing-report needs a kernel-sheaf descriptor")
    gluings = [_parse_gluing_text(g) for g in args.e]
    rows = gluing_variation_report(obj, gluings, args.tmin, args.tmax)
    payload = {
        "descriptor": to_text(parse(args.sheaf)),
        "gluings": [{
            "e": row.gluing,
            "equal_to_identity": row.equal_to_identity,
            "rows": _table_dicts(row.table),
        } for row in rows],
    }
    if args.timestamp:
        payload["timestamp"] = _now()
    header = ["e", "t", "h0", "h1", "h2", "chi"]
    csv_rows = [[row.gluing, r.t, r.h0, r.h1, r.h2, r.chi]
                for row in rows for r in row.table.rows]
    _emit(payload, args.format, args.out, csv_rows, header)
    return 0


# ---------------------------------------------------------------------------
# argument plumbing


def _add_common(p, with_seed=False):
    p.add_argument("--format", choices=("json", "csv"), default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--no-timestamp", dest="timestamp", action="store_false", default=None)
    p.add_argument("--config", default=None, help="JSON file with flag defaults")
    if with_seed:
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--cmax", type=int, default=None)
        p.add_argument("--margin", type=int, default=None)


_CONFIG_DEFAULTS = {"format": "json", "out": None, "timestamp": True,
                    "seed": 0, "cmax": 6, "margin": 8, "tmin": None, "tmax": None}


def _apply_config(args):
    """Precedence: QACM_SEED env > explicit flag > config file > default."""
    file_conf = {}
    if getattr(args, "config", None):
        with open(args.config, "r", encoding="utf-8") as fh:
            file_conf = json.load(fh)
        unknown = set(file_conf) - set(_CONFIG_DEFAULTS)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
    for key, default in _CONFIG_DEFAULTS.items():
        if not hasattr(args, key):
            continue
        if getattr(args, key) is None:
            setattr(args, key, file_conf.get(key, default))
    env_seed = os.environ.get("QACM_SEED")
    if env_seed is not None and hasattr(args, "seed"):
        args.seed = int(env_seed)
    return args


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qacm",
                                 description="Exact cohomology and aCM/Ulrich scans "
                                             "on the reducible quadric surface")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cohomology", help="cohomology table of a descriptor")
    p.add_argument("--sheaf", required=True)
    p.add_argument("--tmin", type=int, required=True)
    p.add_argument("--tmax", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("classify", help="scan the rank-2 classification at desk scale")
    _add_common(p, with_seed=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("ulrich-scan", help="Ulrich statuses over the classify scan")
    _add_common(p, with_seed=True)
    p.set_defaults(func=cmd_ulrich_scan)

    mfp = sub.add_parser("mf", help="matrix factorizations of q = xy")
    mfsub = mfp.add_subparsers(dest="mf_command", required=True)

    p = mfsub.add_parser("example", help="the distinguished linear factorization")
    p.add_argument("--component", type=int, choices=(1, 2), default=1)
    _add_common(p)
    p.set_defaults(func=cmd_mf_example)

    p = mfsub.add_parser("verify", help="check A*B = B*A = q*I from a JSON file")
    p.add_argument("--file", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_mf_verify, timestamp=True)

    p = mfsub.add_parser("hilbert", help="h0 of the cokernel across twists")
    p.add_argument("--component", type=int, choices=(1, 2), default=1)
    p.add_argument("--tmin", type=int, default=None)
    p.add_argument("--tmax", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_mf_hilbert)

    p = sub.add_parser("gluing-report", help="tables of one pair under several gluings")
    p.add_argument("--sheaf", required=True)
    p.add_argument("--e", action="append", required=True,
                   help="gluing: id | diag(a,d) | upper(a,d,form); repeatable")
    p.add_argument("--tmin", type=int, default=None)
    p.add_argument("--tmax", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_gluing_report)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        args = _apply_config(args)
        if getattr(args, "tmin", None) is None and args.func is cmd_mf_hilbert:
            args.tmin = -1
        if getattr(args, "tmax", None) is None and args.func is cmd_mf_hilbert:
            args.tmax = 2
        return args.func(args)
    except DescriptorParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InternalCheckError as exc:
        print(f"internal cross-check failure: {exc}", file=sys.stderr)
        return 3


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
