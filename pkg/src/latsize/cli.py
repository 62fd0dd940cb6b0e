"""Command-line interface: ``latsize {width,lsdelta,lscube,family,verify,lemmas}``.

Polytopes are read as JSON documents ``{"dim": n, "points": [[...], ...]}``
(``-`` reads stdin). Exit codes: 0 success, 1 usage or parse error,
2 verification mismatch, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from typing import Any, Sequence

from .family import (
    FamilyParams,
    check_lemma_ad_restriction,
    check_lemma_forced_width,
    iter_params,
    make_family_simplex,
    theorem_scope,
    witness_matrix,
)
from .geometry import (
    BudgetExceeded,
    DegeneratePolytopeError,
    LatticePolytope,
    as_point,
    lattice_width,
    minimal_directions,
)
from .oracle import OracleConfig, OracleTimeout, oracle_ls_cube, oracle_ls_delta
from .search import SearchConfig, SearchResult, ls_cube, ls_delta

EXIT_OK, EXIT_USAGE, EXIT_MISMATCH, EXIT_BUDGET = 0, 1, 2, 3

VERIFY_COLUMNS = [
    "params",
    "alpha",
    "k",
    "in_scope",
    "ls_delta_formula",
    "ls_delta_search",
    "ls_cube_formula",
    "ls_cube_search",
    "match",
    "status",
]
ORACLE_COLUMNS = ["ls_delta_oracle", "ls_cube_oracle", "oracle_entry_bound"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ----------------------------------------------------------------------------
# documents


def parse_document(text: str) -> tuple[LatticePolytope, str | None]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise UsageError(f"invalid JSON: {e}") from None
    if not isinstance(doc, dict) or "points" not in doc:
        raise UsageError('document must be an object with "points"')
    try:
        points = [as_point(p) for p in doc["points"]]
    except (TypeError, ValueError) as e:
        raise UsageError(f"bad point: {e}") from None
    if not points:
        raise UsageError("document has no points")
    dim = doc.get("dim", len(points[0]))
    if not isinstance(dim, int) or dim < 1 or any(len(p) != dim for p in points):
        raise UsageError(f"every point must have length dim={dim}")
    return LatticePolytope(tuple(points)), doc.get("name")


def document_of(P: LatticePolytope, name: str | None = None) -> dict:
    doc: dict[str, Any] = {"dim": P.dim, "points": [list(p) for p in P.points]}
    if name is not None:
        doc["name"] = name
    return doc


def _read_input(path: str) -> tuple[LatticePolytope, str | None]:
    if path == "-":
        return parse_document(sys.stdin.read())
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_document(fh.read())
    except OSError as e:
        raise UsageError(str(e)) from None


# ----------------------------------------------------------------------------
# config


@dataclass
class RunConfig:
    fmt: str = "text"
    threads: int = 1
    node_budget: int = 10**8
    time_budget: float | None = None
    entry_bound: int | None = None

    def search(self, hints=()) -> SearchConfig:
        return SearchConfig(node_budget=self.node_budget, threads=self.threads, hints=tuple(hints))


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{name} must be an integer, got {raw!r}") from None


def _run_config(args) -> RunConfig:
    cfg = RunConfig(fmt=args.format)
    cfg.threads = args.threads if args.threads is not None else _env_int("LATSIZE_THREADS", 1)
    cfg.node_budget = (
        args.node_budget if args.node_budget is not None else _env_int("LATSIZE_NODE_BUDGET", 10**8)
    )
    if cfg.threads < 1 or cfg.node_budget < 1:
        raise UsageError("--threads and --node-budget must be positive")
    cfg.time_budget = args.time_budget
    cfg.entry_bound = args.entry_bound
    return cfg


# ----------------------------------------------------------------------------
# rendering


def _fmt_matrix(rows) -> list[str]:
    return ["  " + " ".join(str(x) for x in r) for r in rows]


def _csv_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def render_table(rows: list[dict], columns: Sequence[str], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([{c: r.get(c) for c in columns} for r in rows], indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_csv_value(r.get(c)) for c in columns])
        return buf.getvalue()
    cells = [list(columns)] + [[_csv_value(r.get(c)) or "-" for c in columns] for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(columns))]
    return "".join("  ".join(x.ljust(w) for x, w in zip(row, widths)).rstrip() + "\n" for row in cells)


def _result_dict(res: SearchResult, key: str) -> dict:
    out: dict[str, Any] = {
        key: res.value,
        "certified": res.certified,
        "lower_bound": res.lower_bound,
        "nodes_explored": res.nodes_explored,
        "candidates_considered": res.candidates_considered,
    }
    if res.witness is not None:
        out["witness"] = [list(r) for r in res.witness.matrix]
        out["translation"] = list(res.witness.translation)
    return out


def _result_lines(res: SearchResult, label: str) -> list[str]:
    tag = "certified" if res.certified else f"NOT certified, lower bound {res.lower_bound}"
    lines = [f"{label} = {res.value} ({tag})"]
    if res.witness is not None:
        lines.append("witness matrix:")
        lines += _fmt_matrix(res.witness.matrix)
        lines.append("translation: " + " ".join(map(str, res.witness.translation)))
    lines.append(f"nodes explored: {res.nodes_explored}")
    lines.append(f"candidates considered: {res.candidates_considered}")
    return lines


# ----------------------------------------------------------------------------
# commands


def cmd_width(args, cfg: RunConfig) -> tuple[int, str]:
    P, _ = _read_input(args.input)
    w, h = lattice_width(P)
    data: dict[str, Any] = {"width": w, "witness": list(h)}
    if args.all:
        data["minimizers"] = [list(d) for d in minimal_directions(P)] if w > 0 else [list(h)]
    if cfg.fmt == "json":
        return EXIT_OK, json.dumps(data, indent=2) + "\n"
    lines = [f"lattice width: {w}", "witness direction: " + " ".join(map(str, h))]
    if args.all:
        lines.append("minimizing directions:")
        lines += ["  " + " ".join(map(str, d)) for d in data["minimizers"]]
    return EXIT_OK, "\n".join(lines) + "\n"


def _cmd_ls(args, cfg: RunConfig, fn, mode: str) -> tuple[int, str]:
    P, _ = _read_input(args.input)
    res = fn(P, cfg.search())
    key = "ls_delta" if mode == "simplex" else "ls_cube"
    code = EXIT_OK if res.certified else EXIT_BUDGET
    contained = res.verify(P) if args.certify else None
    if args.certify and not contained:
        code = EXIT_MISMATCH
    if cfg.fmt == "json":
        data = _result_dict(res, key)
        if args.certify:
            data["containment_verified"] = contained
        return code, json.dumps(data, indent=2) + "\n"
    lines = _result_lines(res, key)
    if args.certify:
        target = f"{res.value}*simplex" if mode == "simplex" else f"[0,{res.value}]^{P.dim}"
        lines.append(f"containment in {target}: {'verified' if contained else 'FAILED'}")
    return code, "\n".join(lines) + "\n"


def cmd_lsdelta(args, cfg):
    return _cmd_ls(args, cfg, ls_delta, "simplex")


def cmd_lscube(args, cfg):
    return _cmd_ls(args, cfg, ls_cube, "cube")


def _family_search(params: FamilyParams, cfg: RunConfig):
    T = make_family_simplex(params)
    hints = (witness_matrix(params),) if params.has_k else ()
    return ls_delta(T, cfg.search(hints)), ls_cube(T, cfg.search(hints))


def cmd_family(args, cfg: RunConfig) -> tuple[int, str]:
    params = FamilyParams(tuple(args.p))
    scope = theorem_scope(params)
    T = make_family_simplex(params)
    data: dict[str, Any] = {
        "params": list(params.p),
        "alpha": params.alpha,
        "k": params.k if params.has_k else None,
        "in_scope": scope.in_scope,
        "reasons": list(scope.reasons),
        "ls_delta_formula": params.k + 3 if scope.in_scope else None,
        "ls_cube_formula": params.k + 2 if scope.in_scope else None,
        "polytope": document_of(T, f"T_{{{params}}}"),
    }
    if params.has_k:
        A = witness_matrix(params)
        data["witness"] = [list(r) for r in A.matrix]
        data["translation"] = list(A.translation)
    code = EXIT_OK
    if args.search:
        try:
            rd, rc = _family_search(params, cfg)
        except DegeneratePolytopeError as e:
            raise UsageError(str(e)) from None
        data["ls_delta_search"] = rd.value
        data["ls_cube_search"] = rc.value
        data["certified"] = rd.certified and rc.certified
        if params.has_k:
            match = rd.value == params.k + 3 and rc.value == params.k + 2
            data["match"] = match
            if scope.in_scope and not match:
                code = EXIT_MISMATCH
        if not data["certified"] and code == EXIT_OK:
            code = EXIT_BUDGET
    if cfg.fmt == "json":
        return code, json.dumps(data, indent=2) + "\n"
    lines = [
        f"T_{{{params}}} in Z^{params.d + 1}",
        f"alpha = {params.alpha}",
        f"k = {data['k'] if data['k'] is not None else 'undefined (p_d < 2)'}",
        "in scope: " + ("yes" if scope.in_scope else "no (" + "; ".join(scope.reasons) + ")"),
    ]
    if scope.in_scope:
        lines.append(f"ls_delta (closed form) = {data['ls_delta_formula']}")
        lines.append(f"ls_cube (closed form) = {data['ls_cube_formula']}")
    if params.has_k:
        lines.append("witness matrix:")
        lines += _fmt_matrix(data["witness"])
        lines.append("translation: " + " ".join(map(str, data["translation"])))
    if args.search:
        tag = "certified" if data["certified"] else "NOT certified"
        lines.append(f"ls_delta (search) = {data['ls_delta_search']}")
        lines.append(f"ls_cube (search) = {data['ls_cube_search']} ({tag})")
        if "match" in data:
            what = "closed form" if scope.in_scope else "k+3 / k+2 (out of scope, exploratory)"
            lines.append(f"matches {what}: {'yes' if data['match'] else 'no'}")
    lines.append("polytope: " + json.dumps(data["polytope"]))
    return code, "\n".join(lines) + "\n"


def _parse_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in text.split(":")) if ":" in text else (int(text),) * 2
    except ValueError:
        raise UsageError(f"bad range {text!r}; expected LO:HI") from None
    if lo > hi or lo < 0:
        raise UsageError(f"bad range {text!r}; need 0 <= LO <= HI")
    return lo, hi


def verify_rows(
    ranges: Sequence[tuple[int, int]],
    cfg: RunConfig,
    in_scope_only: bool = False,
    coprime_only: bool = False,
    oracle: bool = False,
) -> list[dict]:
    """One row per parameter tuple of the sweep, in lexicographic order."""
    rows = []
    for params in iter_params(ranges):
        scope = theorem_scope(params)
        if in_scope_only and not scope.in_scope:
            continue
        if coprime_only and params.gcd != 1:
            continue
        k = params.k if params.has_k else None
        row: dict[str, Any] = {
            "params": str(params),
            "alpha": params.alpha,
            "k": k,
            "in_scope": scope.in_scope,
            "ls_delta_formula": None if k is None else k + 3,
            "ls_cube_formula": None if k is None else k + 2,
            "ls_delta_search": None,
            "ls_cube_search": None,
            "match": None,
            "status": "ok",
        }
        try:
            rd, rc = _family_search(params, cfg)
        except DegeneratePolytopeError:
            row["status"] = "degenerate"
            rows.append(row)
            continue
        except BudgetExceeded:
            row["status"] = "budget"
            rows.append(row)
            continue
        row["ls_delta_search"], row["ls_cube_search"] = rd.value, rc.value
        if not (rd.certified and rc.certified):
            row["status"] = "budget"
        if k is not None:
            row["match"] = rd.value == k + 3 and rc.value == k + 2
        if oracle:
            _oracle_columns(row, params, rd, rc, cfg)
        rows.append(row)
    return rows


def _oracle_columns(row, params, rd, rc, cfg: RunConfig):
    if params.d + 1 > 3:
        return
    M = cfg.entry_bound
    if M is None:
        M = 1 + max(abs(x) for res in (rd, rc) for r in res.witness.matrix for x in r)
    T = make_family_simplex(params)
    ocfg = OracleConfig(M, cfg.time_budget)
    row["oracle_entry_bound"] = M
    try:
        row["ls_delta_oracle"] = oracle_ls_delta(T, ocfg)
        row["ls_cube_oracle"] = oracle_ls_cube(T, ocfg)
    except OracleTimeout:
        row["status"] = "oracle-timeout"


def cmd_verify(args, cfg: RunConfig) -> tuple[int, str]:
    ranges = [_parse_range(r) for r in args.range or []]
    rows = verify_rows(ranges, cfg, args.in_scope_only, args.coprime_only, args.oracle)
    columns = VERIFY_COLUMNS + (ORACLE_COLUMNS if args.oracle else [])
    code = EXIT_OK
    if any(r["status"] != "ok" for r in rows):
        code = EXIT_BUDGET
    if any(r["in_scope"] and r["match"] is False for r in rows):
        code = EXIT_MISMATCH
    if args.oracle:
        for r in rows:
            od, oc = r.get("ls_delta_oracle"), r.get("ls_cube_oracle")
            if od is not None and (od != r["ls_delta_search"] or oc != r["ls_cube_search"]):
                code = EXIT_MISMATCH
    return code, render_table(rows, columns, cfg.fmt)


def cmd_lemmas(args, cfg: RunConfig) -> tuple[int, str]:
    params = FamilyParams(tuple(args.p))
    if not params.has_k:
        raise UsageError("lemma checks need p_d >= 2")
    restriction = check_lemma_ad_restriction(params)
    forced = check_lemma_forced_width(params)
    ok = restriction.passed and forced.passed
    if cfg.fmt == "json":
        data = {
            "params": list(params.p),
            "bound": restriction.bound,
            "directions": [list(h) for h in restriction.directions],
            "ad_restriction_passed": restriction.passed,
            "ad_restriction_violations": [list(h) for h in restriction.violations],
            "forced_width_passed": forced.passed,
            "forced_width_violations": [list(h) for h in forced.violations],
            "unit_directions": [list(h) for h in forced.unit_directions()],
        }
        return (EXIT_OK if ok else EXIT_MISMATCH), json.dumps(data, indent=2) + "\n"
    lines = [
        f"T_{{{params}}}: {len(restriction.directions)} primitive directions "
        f"(up to sign) of width <= k+2 = {restriction.bound}",
    ]
    lines += ["  " + " ".join(map(str, h)) for h in restriction.directions]
    lines.append(
        f"coordinate {params.d} in {{0, 1, -1}}: "
        + ("pass" if restriction.passed else f"FAIL {restriction.violations}")
    )
    lines.append(f"directions with coordinate {params.d} = +-1:")
    lines += ["  " + " ".join(map(str, h)) for h in forced.unit_directions()]
    lines.append(
        f"all of them have width exactly {forced.bound}: "
        + ("pass" if forced.passed else f"FAIL {forced.violations}")
    )
    return (EXIT_OK if ok else EXIT_MISMATCH), "\n".join(lines) + "\n"


# ----------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=["text", "csv", "json"], default="text")
    common.add_argument("--output", metavar="PATH", help="write the report here instead of stdout")
    common.add_argument("--threads", type=int, help="worker threads (env LATSIZE_THREADS)")
    common.add_argument("--node-budget", type=int, help="max partial matrices (env LATSIZE_NODE_BUDGET)")
    common.add_argument("--entry-bound", type=int, help="oracle entry bound M")
    common.add_argument("--time-budget", type=float, help="oracle time budget in seconds")

    parser = _Parser(prog="latsize", description="Lattice width and lattice size of lattice polytopes.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("width", parents=[common], help="lattice width and a witness direction")
    p.add_argument("input", help="polytope JSON document, or - for stdin")
    p.add_argument("--all", action="store_true", help="list every minimizing direction")
    p.set_defaults(func=cmd_width)

    for name, func, what in (
        ("lsdelta", cmd_lsdelta, "standard simplex"),
        ("lscube", cmd_lscube, "unit cube"),
    ):
        p = sub.add_parser(name, parents=[common], help=f"lattice size w.r.t. the {what}")
        p.add_argument("input", help="polytope JSON document, or - for stdin")
        p.add_argument("--certify", action="store_true", help="re-check containment of the image")
        p.set_defaults(func=func)

    p = sub.add_parser("family", parents=[common], help="closed forms for T_{p_1...p_d}")
    p.add_argument("p", type=int, nargs="+", help="p_1 ... p_d")
    p.add_argument("--search", action="store_true", help="also run the exact search")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("verify", parents=[common], help="sweep the family against the closed forms")
    p.add_argument("--range", "-r", action="append", metavar="LO:HI", help="range of p_i; repeat for each i")
    p.add_argument("--in-scope-only", action="store_true")
    p.add_argument("--coprime-only", action="store_true")
    p.add_argument("--oracle", action="store_true", help="add brute-force columns (d <= 2 only)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("lemmas", parents=[common], help="complete checks of the direction lemmas")
    p.add_argument("p", type=int, nargs="+", help="p_1 ... p_d")
    p.set_defaults(func=cmd_lemmas)
    return parser


def main(argv: Sequence[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _run_config(args)
        code, text = args.func(args, cfg)
    except UsageError as e:
        print(f"latsize: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as e:
        print(f"latsize: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as e:
        print(f"latsize: budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
