"""Command-line front end.

Subcommands: niho, oval, dual, ea, spread (build/validate/transpose/
knuth/bent), bench.  Reports are JSON with sorted keys on stdout, so
output bytes are deterministic for fixed inputs; timing goes to stderr.

Exit codes: 0 all verdicts pass, 1 a verification failed (the report
carries a witness), 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import bench, boolfn, geometry, niho, spread, spreadbent
from .gf import field_make


class InputError(Exception):
    """Bad input or parameters (exit code 2)."""


def _field_info(params) -> dict:
    return {"m": params.m, "poly_f": params.F.poly, "poly_k": params.K.poly,
            "gamma": params.gamma}


def _emit(report: dict, stream=None) -> None:
    print(json.dumps(report, sort_keys=True, indent=2), file=stream or sys.stdout)


def _out_dir(args) -> Path | None:
    if args.out_dir is None:
        return None
    d = Path(args.out_dir)
    d.mkdir(parents=True, exist_ok=True)
    return d


def _witness_json(w):
    if w is None:
        return None
    if isinstance(w, (tuple, list)):
        return [_witness_json(v) for v in w]
    if isinstance(w, (np.integer, int)):
        return int(w)
    return str(w)


# ---------------------------------------------------------------------------
# niho
# ---------------------------------------------------------------------------

def _spec_from_args(args) -> niho.NihoSpec:
    if getattr(args, "spec_json", None):
        return niho.NihoSpec.from_json(Path(args.spec_json).read_text())
    return niho.NihoSpec(args.family, args.m, args.a_index, args.alpha2_index,
                         args.r)


def cmd_niho(args) -> int:
    spec = _spec_from_args(args)
    params = field_make(spec.m)
    try:
        spec.resolve(params)
        g = niho.g_of_spec(spec, params)
    except ValueError as e:
        raise InputError(str(e)) from e

    f = niho.bent_from_g(g, params)
    bent = boolfn.is_bent(f)
    verdicts = {"bent": bent}
    counts: dict = {}
    witnesses: dict = {}
    artifacts: dict = {}

    if bent:
        oval = niho.line_oval_from_g(g, params)
        verdicts["line_oval"] = True
        counts["e_size"] = len(oval.e_set)
        dw = niho.dual_walsh(g, params)
        dp = niho.dual_product_formula(g, params)
        verdicts["dual_walsh_eq_product"] = dw == dp
        if spec.family == "leander_r" and spec.r is not None and spec.r % 2 == 0:
            db = niho.dual_budaghyan(spec, params)
            verdicts["dual_walsh_eq_budaghyan"] = dw == db
        counts["degree"] = boolfn.degree(f)
        counts["spectrum"] = {str(k): v for k, v in
                              boolfn.walsh_transform(f).histogram().items()}
        d = _out_dir(args)
        if d:
            boolfn.save_truth_table(f, d / "truth_table.txt")
            niho.save_g_table(g, d / "g_table.csv")
            (d / "line_oval.json").write_text(
                geometry.line_oval_to_json(oval.lines, params) + "\n")
            boolfn.save_truth_table(dw, d / "dual.txt")
            artifacts = {"truth_table": str(d / "truth_table.txt"),
                         "g_table": str(d / "g_table.csv"),
                         "line_oval": str(d / "line_oval.json"),
                         "dual": str(d / "dual.txt")}
    else:
        ok, witness, cnts = geometry.verify_line_oval(
            niho.lines_of_g(g, params), params)
        verdicts["line_oval"] = ok
        if witness is not None:
            witnesses["line_oval_point"] = int(witness)
            counts["witness_cover"] = int(cnts[witness])

    report = {"command": "niho", "spec": json.loads(spec.to_json()),
              "field": _field_info(params), "verdicts": verdicts,
              "counts": counts, "witnesses": witnesses, "artifacts": artifacts}
    _emit(report)
    return 0 if all(verdicts.values()) else 1


# ---------------------------------------------------------------------------
# oval
# ---------------------------------------------------------------------------

def cmd_oval(args) -> int:
    params = field_make(args.m)
    if args.action == "verify":
        if args.catalog:
            try:
                oval = geometry.catalog_oval(args.catalog, params)
            except ValueError as e:
                raise InputError(str(e)) from e
        elif args.json:
            m, oval = geometry.oval_from_json(Path(args.json).read_text())
            if m != args.m:
                raise InputError("field size mismatch between --m and the file")
        else:
            raise InputError("verify needs --catalog or --json")
        ok, witness = geometry.verify_oval(oval.points, params, oval.infinite)
        report = {"command": "oval verify", "field": _field_info(params),
                  "source": args.catalog or args.json,
                  "counts": {"points": len(oval.points),
                             "infinite": len(oval.infinite)},
                  "verdicts": {"no_three_collinear": ok},
                  "witnesses": {"collinear_triple": _witness_json(witness)}}
        _emit(report)
        return 0 if ok else 1

    # convert (the point/line duality)
    if args.points_json:
        m, oval = geometry.oval_from_json(Path(args.points_json).read_text())
        if m != args.m or oval.infinite:
            raise InputError("conversion needs affine points over the same field")
        try:
            lines = geometry.dual_points_to_lines(sorted(oval.points), params)
        except ValueError as e:
            raise InputError(str(e)) from e
        ok, witness = geometry.verify_no_three_concurrent(lines, params)
        print(geometry.line_oval_to_json(lines, params))
        report = {"command": "oval convert", "direction": "points_to_lines",
                  "verdicts": {"line_oval": ok},
                  "witnesses": {"concurrency": _witness_json(witness)}}
        _emit(report, sys.stderr)
        return 0 if ok else 1
    if args.lines_json:
        lines = geometry.line_oval_from_json(Path(args.lines_json).read_text(),
                                             params)
        try:
            points = geometry.dual_lines_to_points(lines, params)
        except ValueError as e:
            raise InputError(str(e)) from e
        ok, witness = geometry.verify_oval(points, params)
        print(geometry.oval_to_json(
            geometry.Oval(frozenset(points), frozenset()), params))
        report = {"command": "oval convert", "direction": "lines_to_points",
                  "verdicts": {"oval": ok},
                  "witnesses": {"collinear_triple": _witness_json(witness)}}
        _emit(report, sys.stderr)
        return 0 if ok else 1
    raise InputError("convert needs --points-json or --lines-json")


# ---------------------------------------------------------------------------
# dual
# ---------------------------------------------------------------------------

def _niho_dual_by_method(method: str, spec, g, params) -> boolfn.BooleanFunction:
    if method == "walsh":
        return niho.dual_walsh(g, params)
    if method == "product":
        return niho.dual_product_formula(g, params)
    if method == "budaghyan":
        try:
            return niho.dual_budaghyan(spec, params)
        except ValueError as e:
            raise InputError(str(e)) from e
    if method == "chi-swap":
        oval = niho.line_oval_from_g(g, params)
        table = np.ones(params.K.size, dtype=np.uint8)
        table[sorted(oval.e_set)] = 0
        return boolfn.BooleanFunction(params.n, table)
    raise InputError(f"unknown method {method}")


def cmd_dual(args) -> int:
    spec = _spec_from_args(args)
    params = field_make(spec.m)
    try:
        g = niho.g_of_spec(spec, params)
    except ValueError as e:
        raise InputError(str(e)) from e
    if not boolfn.is_bent(niho.bent_from_g(g, params)):
        raise InputError("the requested spec is not bent; no dual exists")
    d1 = _niho_dual_by_method(args.method, spec, g, params)
    verdicts = {}
    if args.cross_check:
        d2 = _niho_dual_by_method(args.cross_check, spec, g, params)
        verdicts[f"{args.method}_eq_{args.cross_check}"] = d1 == d2
    d = _out_dir(args)
    artifacts = {}
    if d:
        boolfn.save_truth_table(d1, d / "dual.txt")
        artifacts["dual"] = str(d / "dual.txt")
    report = {"command": "dual", "method": args.method,
              "cross_check": args.cross_check,
              "spec": json.loads(spec.to_json()),
              "field": _field_info(params),
              "verdicts": verdicts, "artifacts": artifacts}
    _emit(report)
    return 0 if all(verdicts.values()) else 1


# ---------------------------------------------------------------------------
# ea
# ---------------------------------------------------------------------------

def cmd_ea(args) -> int:
    if args.table:
        f = boolfn.load_truth_table(args.table)
        source = args.table
    else:
        spec = _spec_from_args(args)
        params = field_make(spec.m)
        try:
            f = niho.bent_from_g(niho.g_of_spec(spec, params), params)
        except ValueError as e:
            raise InputError(str(e)) from e
        source = spec.to_json()
    deg = boolfn.degree(f)
    report = {"command": "ea", "source": source, "k": f.k,
              "degree": deg,
              "spectrum": {str(k): v for k, v in
                           boolfn.walsh_transform(f).histogram().items()},
              "bent": boolfn.is_bent(f) if f.k % 2 == 0 else False}
    if deg <= 2:
        report["quadratic_rank"] = boolfn.quadratic_rank(f)
    _emit(report)
    return 0


# ---------------------------------------------------------------------------
# spread
# ---------------------------------------------------------------------------

def _read_pqf(path: str) -> spread.Prequasifield:
    """A table file, '-' for stdin, or a kind spec like 'field:3',
    'luneburg:3', 'kantor:3:1:1:0' (m:chain:lambdas:zetas)."""
    if path == "-":
        return spread.loads_pqf(sys.stdin.read())
    if ":" in path and not Path(path).exists():
        kind, _, rest = path.partition(":")
        parts = rest.split(":")
        if kind == "field":
            return spread.field_pqf(int(parts[0]))
        if kind == "luneburg":
            return spread.luneburg(int(parts[0]))
        if kind == "kantor":
            if len(parts) != 4:
                raise InputError("kantor kind spec is m:chain:lambdas:zetas")
            return spread.kantor_chain(int(parts[0]), _csv_ints(parts[1]),
                                       _csv_ints(parts[2]), _csv_ints(parts[3]))
        raise InputError(f"unknown prequasifield kind {kind!r}")
    return spread.load_pqf(path)


def _csv_ints(text: str) -> list[int]:
    return [int(v) for v in text.split(",")] if text else []


def _build_pqf(args) -> spread.Prequasifield:
    if args.kind == "field":
        return spread.field_pqf(args.m)
    if args.kind == "luneburg":
        return spread.luneburg(args.m)
    if args.kind == "kantor":
        return spread.kantor_chain(args.m, _csv_ints(args.chain),
                                   _csv_ints(args.lambdas),
                                   _csv_ints(args.zetas))
    if args.kind == "table":
        if not args.table:
            raise InputError("--kind table needs --table FILE")
        return _read_pqf(args.table)
    raise InputError(f"unknown kind {args.kind}")


def _pqf_report(Q: spread.Prequasifield, seed: int) -> dict:
    rep = spread.validate_prequasifield(Q, seed=seed)
    return rep.as_dict()


def cmd_spread_build(args) -> int:
    try:
        Q = _build_pqf(args)
    except ValueError as e:
        raise InputError(str(e)) from e
    rep = _pqf_report(Q, args.seed)
    report = {"command": "spread build", "kind": args.kind, "m": Q.m,
              "shape": Q.shape, "size": Q.size, "validation": rep}
    text = spread.dumps_pqf(Q)
    if args.out:
        Path(args.out).write_text(text)
        report["artifacts"] = {"table": args.out}
        _emit(report)
    else:
        sys.stdout.write(text)
        _emit(report, sys.stderr)
    return 0 if rep["axioms_ok"] else 1


def cmd_spread_validate(args) -> int:
    Q = _read_pqf(args.pqf)
    rep = _pqf_report(Q, args.seed)
    ok, wit = spread.verify_spread(Q)
    report = {"command": "spread validate", "m": Q.m, "shape": Q.shape,
              "validation": rep,
              "spread_partition_ok": ok,
              "spread_witness": _witness_json(wit)}
    _emit(report)
    return 0 if rep["axioms_ok"] and ok else 1


def cmd_spread_transpose(args) -> int:
    Q = _read_pqf(args.pqf)
    Qt = spread.transpose_pqf(Q)
    report = {"command": "spread transpose", "m": Q.m, "shape": Q.shape,
              "involution_ok": bool(np.array_equal(
                  spread.transpose_pqf(Qt).table, Q.table)),
              "perpendicular_ok": spread.spreads_perpendicular(Q, Qt),
              "symplectic_fixed_point": bool(np.array_equal(Qt.table, Q.table))}
    text = spread.dumps_pqf(Qt)
    if args.out:
        Path(args.out).write_text(text)
        _emit(report)
    else:
        sys.stdout.write(text)
        _emit(report, sys.stderr)
    return 0 if report["involution_ok"] and report["perpendicular_ok"] else 1


def cmd_spread_knuth(args) -> int:
    Q = _read_pqf(args.pqf)
    try:
        items, dtd_eq = spread.knuth_orbit(Q)
    except ValueError as e:
        raise InputError(str(e)) from e
    d = _out_dir(args)
    artifacts = {}
    if d:
        for word, pq in items:
            path = d / f"orbit_{word or 'id'}.pqf"
            spread.save_pqf(pq, path)
            artifacts[word or "id"] = str(path)
    report = {"command": "spread knuth", "orbit_words": [w or "id" for w, _ in items],
              "orbit_size": len(items), "dtd_equals_tdt": dtd_eq,
              "artifacts": artifacts}
    _emit(report)
    return 0 if len(items) <= 6 else 1


def _g_table_from_flag(flag: str, Q: spread.Prequasifield) -> np.ndarray:
    if flag == "square-star":
        return spreadbent.g_square_star(Q)
    if flag in ("sqrt", "sqrt-diag"):
        return spread.sqrt_diag_g_table(Q)
    if flag.startswith("table:"):
        path = flag[len("table:"):]
        vals = np.array([int(v) for v in Path(path).read_text().split()],
                        dtype=np.int64)
        if vals.shape != (Q.size,):
            raise InputError("G table must list one value per carrier element")
        return vals
    raise InputError(f"unknown --g flag {flag!r}")


def cmd_spread_bent(args) -> int:
    Q = _read_pqf(args.pqf)
    rep = spread.validate_prequasifield(Q, seed=args.seed)
    if not rep.axioms_ok:
        raise InputError(f"prequasifield axioms fail: {rep.failures}")
    try:
        G = _g_table_from_flag(args.g, Q)
    except ValueError as e:
        raise InputError(str(e)) from e
    spec = spreadbent.SpreadBentSpec(Q, G, args.mu)
    analysis = spreadbent.analyze(spec)
    analysis["criterion_witness"] = _witness_json(analysis.get("criterion_witness"))
    d = _out_dir(args)
    artifacts = {}
    if analysis["bent"] and d:
        f = spreadbent.bent_bivariate(spreadbent.normalize_mu(spec))
        boolfn.save_truth_table(f, d / "truth_table.txt")
        boolfn.save_truth_table(spreadbent.dual_walsh(spec), d / "dual.txt")
        artifacts = {"truth_table": str(d / "truth_table.txt"),
                     "dual": str(d / "dual.txt")}
    report = {"command": "spread bent", "m": Q.m, "shape": Q.shape,
              "g": args.g, "mu": args.mu, "report": analysis,
              "artifacts": artifacts}
    _emit(report)
    ok = analysis["bent"] and analysis.get("dual_routes_agree", False) \
        and analysis.get("lineoval_ok", False)
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# bench
# ---------------------------------------------------------------------------

def cmd_bench(args) -> int:
    rows = bench.run(walsh_bits=args.walsh_bits, repeats=args.repeats)
    print(bench.format_table(rows))
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_spec_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", choices=niho.FAMILIES)
    p.add_argument("--m", type=int)
    p.add_argument("--a-index", type=int, default=None)
    p.add_argument("--alpha2-index", type=int, default=None)
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--spec-json", default=None,
                   help="JSON file {family, m, a_index?, r?} instead of flags")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ovalbent",
        description="bent functions linear on spreads, their duals, and the "
                    "associated ovals and line ovals")
    ap.add_argument("--seed", type=int, default=0,
                    help="seed for sampled (above-cap) validations only")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("niho", help="build and verify a Niho bent function")
    _add_spec_flags(p)
    p.add_argument("--out-dir", default=None)
    p.set_defaults(fn=cmd_niho)

    p = sub.add_parser("oval", help="verify or convert ovals and line ovals")
    p.add_argument("action", choices=["verify", "convert"])
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--catalog", choices=geometry.CATALOG_NAMES, default=None)
    p.add_argument("--json", default=None)
    p.add_argument("--points-json", default=None)
    p.add_argument("--lines-json", default=None)
    p.set_defaults(fn=cmd_oval)

    p = sub.add_parser("dual", help="dual of a Niho bent function by route")
    _add_spec_flags(p)
    p.add_argument("--method", required=True,
                   choices=["walsh", "product", "budaghyan", "chi-swap"])
    p.add_argument("--cross-check", default=None,
                   choices=["walsh", "product", "budaghyan", "chi-swap"])
    p.add_argument("--out-dir", default=None)
    p.set_defaults(fn=cmd_dual)

    p = sub.add_parser("ea", help="EA-equivalence invariants of a function")
    _add_spec_flags(p)
    p.add_argument("--table", default=None, help="truth-table file")
    p.set_defaults(fn=cmd_ea)

    p = sub.add_parser("spread", help="prequasifields and bivariate bent functions")
    ssub = p.add_subparsers(dest="spread_command", required=True)

    b = ssub.add_parser("build", help="construct a prequasifield table")
    b.add_argument("--kind", required=True,
                   choices=["field", "kantor", "luneburg", "table"])
    b.add_argument("--m", type=int)
    b.add_argument("--chain", default="", help="comma list of subfield degrees")
    b.add_argument("--lambdas", default="", help="comma list of F-indices")
    b.add_argument("--zetas", default="", help="comma list of F-indices")
    b.add_argument("--table", default=None)
    b.add_argument("--out", default=None)
    b.set_defaults(fn=cmd_spread_build)

    v = ssub.add_parser("validate", help="check prequasifield axioms")
    v.add_argument("--pqf", default="-")
    v.set_defaults(fn=cmd_spread_validate)

    t = ssub.add_parser("transpose", help="transpose prequasifield")
    t.add_argument("--pqf", default="-")
    t.add_argument("--out", default=None)
    t.set_defaults(fn=cmd_spread_transpose)

    k = ssub.add_parser("knuth", help="Knuth orbit of a presemifield")
    k.add_argument("--pqf", default="-")
    k.add_argument("--out-dir", default=None)
    k.set_defaults(fn=cmd_spread_knuth)

    s = ssub.add_parser("bent", help="bivariate bent function on a spread")
    s.add_argument("--pqf", default="-", help="table file, or - for stdin")
    s.add_argument("--g", required=True,
                   help="square-star | sqrt | sqrt-diag | table:FILE")
    s.add_argument("--mu", type=int, default=0)
    s.add_argument("--out-dir", default=None)
    s.set_defaults(fn=cmd_spread_bent)

    p = sub.add_parser("bench", help="compare numba and numpy kernel backends")
    p.add_argument("--walsh-bits", type=int, default=18)
    p.add_argument("--repeats", type=int, default=3)
    p.set_defaults(fn=cmd_bench)

    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        code = args.fn(args)
    except (InputError, FileNotFoundError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    print(f"wall_time_s={time.perf_counter() - t0:.3f}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
