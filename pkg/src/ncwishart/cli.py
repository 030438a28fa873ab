"""Command-line entry point: coefficient tables, diagram enumeration,
verification suites, and Monte Carlo experiments.

Every subcommand echoes its parsed configuration into the report it
emits, renders to text, JSON, or CSV, and uses the exit-code contract
0 = pass, 1 = a check failed, 2 = usage error.  Reports are deterministic
given the full flag set (including --seed); the one exception is the
wall-clock `elapsed_s` field of Monte Carlo reports.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from collections import Counter
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterator

from .colored import enum_colored_ncc, open_profile
from .dots import dot_decode, dot_encode, enum_dots
from .families import (
    Family,
    family_poly,
    gamma,
    gamma_tilde,
    integrate_against_reference,
    inverse_table,
    moments,
    pi_poly,
    series_G,
    series_G0,
    series_P,
    series_P0,
    transition_matrix,
)
from .halfperm import (
    DEFAULT_DISC_CAP,
    WeightRule,
    cut,
    enum_ncc,
    enum_ncl,
    lineardecomp_check,
    reassemble,
    weighted_count,
)
from .perms import DEFAULT_ANNULAR_CAP, Perm, enum_snc, format_cycles, iter_snc_images
from .polyc import PolyC, PolyXC, SeriesZ
from .rmt import (
    EnsembleConfig,
    StatCheck,
    covariance_check,
    evaluate_statistics,
    pi_pair_trace,
    power_trace,
    predict_covariance,
    sample_traces,
    variance_check,
    word_variance_limit,
)
from .wick import function_algebra, matrix_algebra, scalar_algebra, wick_report


class UsageError(Exception):
    """A semantic command-line problem; reported on stderr with exit 2."""


# ---------------------------------------------------------------------------
# built-in golden fixtures
# ---------------------------------------------------------------------------

# First five rows of the three inverse coefficient tables.  These are data,
# not derived values: the exact-arithmetic tables are compared against them
# by `tables --check` and by the acceptance suite.
GOLDEN_ROWS = {
    "gamma-tilde-inverse": (
        ("1",),
        ("1 + c", "1"),
        ("1 + 4*c + c^2", "2 + 2*c", "1"),
        ("1 + 9*c + 9*c^2 + c^3", "3 + 9*c + 3*c^2", "3 + 3*c", "1"),
        (
            "1 + 16*c + 36*c^2 + 16*c^3 + c^4",
            "4 + 24*c + 24*c^2 + 4*c^3",
            "6 + 16*c + 6*c^2",
            "4 + 4*c",
            "1",
        ),
    ),
    "gamma-inverse": (
        ("1",),
        ("c", "1"),
        ("c + c^2", "2 + 2*c", "1"),
        ("c + 3*c^2 + c^3", "3 + 9*c + 3*c^2", "3 + 3*c", "1"),
        (
            "c + 6*c^2 + 6*c^3 + c^4",
            "4 + 24*c + 24*c^2 + 4*c^3",
            "6 + 16*c + 6*c^2",
            "4 + 4*c",
            "1",
        ),
    ),
    "pi-inverse": (
        ("1",),
        ("c", "1"),
        ("c + c^2", "1 + 2*c", "1"),
        ("c + 3*c^2 + c^3", "1 + 5*c + 3*c^2", "2 + 3*c", "1"),
        (
            "c + 6*c^2 + 6*c^3 + c^4",
            "1 + 9*c + 14*c^2 + 4*c^3",
            "3 + 11*c + 6*c^2",
            "3 + 4*c",
            "1",
        ),
    ),
}

# The pictured decomposition of the square monomial into the centered
# arc-sine family: coefficients of the degree-2 row, and the weight
# multiset of the pictured circular diagrams per open-block count.
SQUARE_DECOMPOSITION_FIXTURE = {
    "coefficients": ("c + c^2", "2 + 2*c", "1"),
    "weight_multisets": {1: ("1", "1", "c", "c"), 2: ("1",)},
}

# The pictured two-letter product decomposition: x^2 expands with the
# second-kind row-2 coefficients, y with the row-1 coefficients, and the
# four pictured colored circular diagrams carry both letters' open blocks.
PRODUCT_DECOMPOSITION_FIXTURE = {
    "left_coefficients": ("c + c^2", "1 + 2*c", "1"),
    "right_coefficients": ("c", "1"),
    "cell_weight_multisets": {(1, 1): ("1", "c", "c"), (2, 1): ("1",)},
    "pictured_diagrams": 4,
}

FAMILY_CHOICES = {
    "gamma-tilde": (Family.GAMMA_TILDE, False),
    "gamma": (Family.GAMMA, False),
    "pi": (Family.PI, False),
    "gamma-tilde-inverse": (Family.GAMMA_TILDE, True),
    "gamma-inverse": (Family.GAMMA, True),
    "pi-inverse": (Family.PI, True),
}


# ---------------------------------------------------------------------------
# report plumbing
# ---------------------------------------------------------------------------


def _record(identity: str, instance: str, ok: bool, detail: str | None = None,
            residual: float | None = None) -> dict:
    rec: dict = {"identity": identity, "instance": instance, "pass": bool(ok)}
    if detail is not None:
        rec["detail"] = detail
    if residual is not None:
        rec["residual"] = float(residual)
    return rec


def _config_dict(args: argparse.Namespace) -> dict:
    cfg = {}
    for key, value in sorted(vars(args).items()):
        if key == "handler":
            continue
        cfg[key] = value
    return cfg


def _config_line(cfg: dict) -> str:
    return " ".join(
        f"{k}={'-' if v is None else v}" for k, v in cfg.items() if k != "subcommand"
    )


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def schema_path(command: str) -> Path:
    """Filesystem path of the shipped JSON schema for a subcommand."""
    return Path(str(resources.files("ncwishart").joinpath("schemas", f"{command}.schema.json")))


def _write_output(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    target = Path(path)
    tmp = target.with_name(f".{target.name}.tmp{os.getpid()}")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, target)


def _render_json(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"


def _csv_preamble(buf: io.StringIO, report: dict) -> None:
    buf.write(f"# command: {report['command']}\n")
    buf.write(f"# config: {_config_line(report['config'])}\n")


def _render_csv(report: dict) -> str:
    buf = io.StringIO()
    _csv_preamble(buf, report)
    writer = csv.writer(buf, lineterminator="\n")
    command = report["command"]
    if command == "tables":
        writer.writerow(["family", "n", "k", "entry"])
        for n, row in enumerate(report["rows"]):
            for k, entry in enumerate(row):
                writer.writerow([report["family"], n, k, entry])
    elif command == "enumerate":
        writer.writerow(["kind", "index", "diagram", "weight_exponent"])
        for idx, (diagram, exponent) in enumerate(
            zip(report["diagrams"], report["weight_exponents"]), start=1
        ):
            writer.writerow([report["kind"], idx, diagram, exponent])
    elif command == "verify":
        writer.writerow(["suite", "identity", "instance", "pass", "detail"])
        for rec in report["checks"]:
            detail = rec.get("detail", "")
            if "residual" in rec:
                detail = _fmt(rec["residual"])
            writer.writerow(
                [report["suite"], rec["identity"], rec["instance"], rec["pass"], detail]
            )
    elif command == "mc":
        writer.writerow(
            ["kind", "key_a", "key_b", "estimate", "se", "predicted", "tolerance", "pass"]
        )
        for rec in report["statistics"]:
            writer.writerow(
                ["mean", rec["key"], "", _fmt(rec["mean"]), _fmt(rec["se_mean"]),
                 _fmt(rec["predicted_mean"]), _fmt(rec["tolerance"]), rec["pass"]]
            )
        for rec in report["covariance"]:
            writer.writerow(
                [rec["kind"], rec["key_a"], rec["key_b"], _fmt(rec["estimate"]),
                 _fmt(rec["se"]), _fmt(rec["predicted"]), _fmt(rec["tolerance"]),
                 rec["pass"]]
            )
    else:  # pragma: no cover - commands are a closed set
        raise ValueError(f"no CSV rendering for {command}")
    return buf.getvalue()


def _render_text(report: dict) -> str:
    lines = [f"command: {report['command']}",
             f"config: {_config_line(report['config'])}"]
    command = report["command"]
    if command == "tables":
        for n, row in enumerate(report["rows"]):
            lines.append(f"n={n} | " + " | ".join(row))
        check = report["check"]
        if check is not None:
            verdict = "pass" if check["pass"] else "FAIL"
            lines.append(
                f"fixture check: {verdict} ({check['rows_compared']} rows compared)"
            )
            for bad in check["mismatches"]:
                lines.append(
                    f"  mismatch at ({bad['row']},{bad['col']}): "
                    f"computed {bad['computed']}, fixture {bad['fixture']}"
                )
    elif command == "enumerate":
        lines.extend(report["diagrams"])
        lines.append(f"count: {report['count']}")
        lines.append(f"weight: {report['weight']}")
    elif command == "verify":
        for rec in report["checks"]:
            mark = "ok" if rec["pass"] else "FAIL"
            tail = ""
            if "residual" in rec:
                tail = f" residual {_fmt(rec['residual'])}"
            elif "detail" in rec:
                tail = f" ({rec['detail']})"
            lines.append(f"[{mark}] {rec['identity']}: {rec['instance']}{tail}")
        lines.append(
            f"checked: {report['instances']} instances, {report['failures']} failures"
        )
    elif command == "mc":
        for rec in report["statistics"]:
            mark = "ok" if rec["pass"] else "FAIL"
            lines.append(
                f"[{mark}] mean {rec['key']}: estimate {_fmt(rec['mean'])}, "
                f"limit {_fmt(rec['predicted_mean'])}, se {_fmt(rec['se_mean'])}, "
                f"tolerance {_fmt(rec['tolerance'])}"
            )
        for rec in report["covariance"]:
            mark = "ok" if rec["pass"] else "FAIL"
            lines.append(
                f"[{mark}] {rec['kind']} {rec['key_a']}, {rec['key_b']}: "
                f"estimate {_fmt(rec['estimate'])}, limit {_fmt(rec['predicted'])}, "
                f"se {_fmt(rec['se'])}, tolerance {_fmt(rec['tolerance'])}"
            )
        lines.append(f"seed: {report['seed']}")
        lines.append(f"elapsed_s: {_fmt(report['elapsed_s'])}")
    lines.append(f"status: {report['status']}")
    return "\n".join(lines) + "\n"


def _render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return _render_json(report)
    if fmt == "csv":
        return _render_csv(report)
    return _render_text(report)


# ---------------------------------------------------------------------------
# tables
# ---------------------------------------------------------------------------


def cmd_tables(args: argparse.Namespace) -> tuple[dict, int]:
    family, inverse = FAMILY_CHOICES[args.family]
    size = args.rows
    table = inverse_table(family, size) if inverse else transition_matrix(family, size)
    rows = [[str(table.entry(n, k)) for k in range(n + 1)] for n in range(size)]
    check = None
    status = "pass"
    if args.check:
        fixture = GOLDEN_ROWS.get(args.family)
        if fixture is None:
            raise UsageError(
                f"no built-in fixture for family '{args.family}'; "
                f"fixtures cover: {', '.join(sorted(GOLDEN_ROWS))}"
            )
        depth = min(size, len(fixture))
        mismatches = []
        for n in range(depth):
            for k in range(n + 1):
                if PolyC.parse(rows[n][k]) != PolyC.parse(fixture[n][k]):
                    mismatches.append(
                        {"row": n, "col": k,
                         "computed": rows[n][k], "fixture": fixture[n][k]}
                    )
        check = {"rows_compared": depth, "mismatches": mismatches,
                 "pass": not mismatches}
        if mismatches:
            status = "fail"
    report = {
        "command": "tables",
        "config": _config_dict(args),
        "family": args.family,
        "rows": rows,
        "check": check,
        "status": status,
    }
    return report, 0 if status == "pass" else 1


# ---------------------------------------------------------------------------
# enumerate
# ---------------------------------------------------------------------------


def _enumerate_stream(args: argparse.Namespace) -> tuple[dict, Iterator[tuple[str, int]]]:
    """Validate the requested cell and return (params, stream of
    (diagram text, weight exponent)) in canonical order."""
    cap = args.cap
    if args.kind in ("ncc", "ncl"):
        if args.n is None or args.k is None:
            raise UsageError(f"enumerate {args.kind} needs --n and --k")
        n, k = args.n, args.k
        if n < 1 or not 0 <= k <= n:
            raise UsageError(f"need n >= 1 and 0 <= k <= n, got n={n}, k={k}")
        if n > cap:
            raise UsageError(
                f"n={n} exceeds the enumeration cap {cap}; "
                "raise --cap to allow larger cells"
            )
        enum = enum_ncc if args.kind == "ncc" else enum_ncl
        diagrams = enum(n, k, cap)

        def gen() -> Iterator[tuple[str, int]]:
            for d in diagrams:
                yield str(d), d.closed_weight_exponent()

        return {"n": n, "k": k}, gen()

    if args.m is None or args.n is None:
        raise UsageError("enumerate snc needs --m and --n")
    m, n = args.m, args.n
    if m < 1 or n < 1:
        raise UsageError(f"both circle sizes must be >= 1, got m={m}, n={n}")
    if m + n > cap:
        raise UsageError(
            f"m+n={m + n} exceeds the enumeration cap {cap}; "
            "raise --cap to allow larger annuli"
        )

    def gen() -> Iterator[tuple[str, int]]:
        for img in iter_snc_images(m, n):
            p = Perm(img)
            yield format_cycles(p.cycles()), p.num_cycles()

    return {"m": m, "n": n}, gen()


def cmd_enumerate(args: argparse.Namespace) -> tuple[dict | None, int]:
    params, stream = _enumerate_stream(args)
    streaming = args.format == "text" and args.output in (None, "-")
    config = _config_dict(args)
    if streaming:
        print(f"command: enumerate\nconfig: {_config_line(config)}")
    diagrams: list[str] = []
    exponents: list[int] = []
    count = 0
    weight_counter: Counter[int] = Counter()
    for text, exponent in stream:
        count += 1
        weight_counter[exponent] += 1
        if streaming:
            print(text)
        else:
            diagrams.append(text)
            exponents.append(exponent)
    weight = PolyC.zero()
    for exponent, multiplicity in sorted(weight_counter.items()):
        weight = weight + PolyC.const(multiplicity) * PolyC.monomial(exponent)
    if streaming:
        print(f"count: {count}\nweight: {weight}\nstatus: pass")
        return None, 0
    report = {
        "command": "enumerate",
        "config": config,
        "kind": args.kind,
        "params": params,
        "diagrams": diagrams,
        "weight_exponents": exponents,
        "count": count,
        "weight": str(weight),
        "status": "pass",
    }
    return report, 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def check_square_decomposition_fixture() -> list[dict]:
    """Hold the embedded square-decomposition fixture against the inverse
    table and the circular enumeration."""
    records = []
    inv = inverse_table(Family.GAMMA, 3)
    computed = tuple(str(inv.entry(2, k)) for k in range(3))
    records.append(
        _record(
            "square decomposition fixture: coefficients",
            "row 2 of the centered inverse table",
            computed == SQUARE_DECOMPOSITION_FIXTURE["coefficients"],
            detail=" | ".join(computed),
        )
    )
    for k, want in sorted(SQUARE_DECOMPOSITION_FIXTURE["weight_multisets"].items()):
        got = sorted(
            str(PolyC.monomial(d.closed_weight_exponent())) for d in enum_ncc(2, k)
        )
        records.append(
            _record(
                "square decomposition fixture: pictured diagram weights",
                f"k={k}",
                got == sorted(want),
                detail="{" + ", ".join(got) + "}",
            )
        )
    records.append(
        _record(
            "square decomposition fixture: constant column",
            "second moment",
            inv.entry(2, 0) == moments(3)[2],
        )
    )
    return records


def check_product_decomposition_fixture() -> list[dict]:
    """Hold the embedded two-letter product fixture against the colored
    circular enumeration and the second-kind inverse table."""
    records = []
    fixture = PRODUCT_DECOMPOSITION_FIXTURE
    inv = inverse_table(Family.PI, 3)
    left = tuple(str(inv.entry(2, k)) for k in range(3))
    right = tuple(str(inv.entry(1, k)) for k in range(2))
    records.append(
        _record(
            "product decomposition fixture: coefficient vectors",
            "second-kind inverse rows 2 and 1",
            left == fixture["left_coefficients"]
            and right == fixture["right_coefficients"],
            detail=f"({' | '.join(left)}) x ({' | '.join(right)})",
        )
    )
    cells: dict[tuple[int, int], list] = {}
    for h in enum_colored_ncc((2, 1), (1, 2)):
        profile = open_profile(h, (2, 1))
        if all(x >= 1 for x in profile):
            cells.setdefault(profile, []).append(h)
    pictured = sum(len(v) for v in cells.values())
    records.append(
        _record(
            "product decomposition fixture: pictured diagram count",
            "both letters carry an open block",
            pictured == fixture["pictured_diagrams"]
            and set(cells) == set(fixture["cell_weight_multisets"]),
            detail=f"{pictured} diagrams",
        )
    )
    for profile, want in sorted(fixture["cell_weight_multisets"].items()):
        members = cells.get(profile, [])
        got = sorted(
            str(PolyC.monomial(h.closed_weight_exponent())) for h in members
        )
        table_product = inv.entry(2, profile[0]) * inv.entry(1, profile[1])
        records.append(
            _record(
                "product decomposition fixture: cell weights",
                f"opens {profile}",
                got == sorted(want)
                and weighted_count(members, WeightRule.CLOSED_BLOCKS) == table_product,
                detail="{" + ", ".join(got) + "}",
            )
        )
    return records


def _recursion_records(max_n: int) -> list[dict]:
    one_plus_c = PolyC.of(1, 1)
    c = PolyC.c()
    records = []

    def gp(n: int, k: int) -> PolyC:
        if n < 0 or k < 0 or k > n:
            return PolyC.zero()
        return gamma_tilde(n).coeff(k)

    for n in range(max_n):
        for k in range(n + 2):
            if n == 1:
                ok = gp(1, k - 1) == gp(2, k) + one_plus_c * gp(1, k) + 2 * c * gp(0, k)
            else:
                ok = (
                    gp(n, k - 1)
                    == gp(n + 1, k) + one_plus_c * gp(n, k) + c * gp(n - 1, k)
                )
            records.append(_record("arc-sine forward row recurrence", f"n={n},k={k}", ok))

    x = PolyXC.x()
    for n in range(2, max_n):
        ok = (
            x * pi_poly(n)
            == pi_poly(n + 1) + one_plus_c * pi_poly(n) + c * pi_poly(n - 1)
        )
        records.append(_record("second-kind three-term recurrence", f"n={n}", ok))

    g = inverse_table(Family.GAMMA_TILDE, max_n + 1)
    p = inverse_table(Family.PI, max_n + 1)

    def gval(n: int, k: int) -> PolyC:
        return g.entry(n, k) if 0 <= k <= n else PolyC.zero()

    def pval(n: int, k: int) -> PolyC:
        return p.entry(n, k) if 0 <= k <= n else PolyC.zero()

    for n in range(max_n):
        for k in range(1, n + 2):
            ok = (
                gval(n + 1, k)
                == gval(n, k - 1) + one_plus_c * gval(n, k) + c * gval(n, k + 1)
            )
            records.append(
                _record("arc-sine inverse band recursion", f"n={n + 1},k={k}", ok)
            )
        ok = gval(n + 1, 0) == one_plus_c * gval(n, 0) + 2 * c * gval(n, 1)
        records.append(
            _record("arc-sine inverse column-0 recursion", f"n={n + 1}", ok)
        )
        for k in range(1, n + 2):
            ok = (
                pval(n + 1, k)
                == pval(n, k - 1) + one_plus_c * pval(n, k) + c * pval(n, k + 1)
            )
            records.append(
                _record("second-kind inverse band recursion", f"n={n + 1},k={k}", ok)
            )
        ok = pval(n + 1, 0) == c * pval(n, 0) + c * pval(n, 1)
        records.append(
            _record("second-kind inverse column-0 recursion", f"n={n + 1}", ok)
        )

    for n in range(2, max_n + 1):
        ok = gamma_tilde(n) + gamma_tilde(n - 1) == pi_poly(n) - c * pi_poly(n - 2)
        records.append(_record("first/second-kind bridge (uncentered)", f"n={n}", ok))
    for n in range(3, max_n + 1):
        ok = gamma(n) + gamma(n - 1) == pi_poly(n) - c * pi_poly(n - 2)
        records.append(_record("first/second-kind bridge (centered)", f"n={n}", ok))

    for n in range(1, max_n + 1):
        for fam in (Family.GAMMA, Family.PI):
            ok = integrate_against_reference(family_poly(fam, n)).is_zero()
            records.append(
                _record("centered against the reference moments", f"{fam.value},n={n}", ok)
            )
    for n in range(max_n + 1):
        q = pi_poly(n)
        ok = integrate_against_reference(q * q) == PolyC.monomial(n)
        records.append(_record("second-kind squared norm", f"n={n}", ok))

    # enumeration cross-check of the same band recursion on small circles
    def cell(nn: int, kk: int) -> PolyC:
        if kk < 0 or kk > nn:
            return PolyC.zero()
        return weighted_count(enum_ncc(nn, kk), WeightRule.CLOSED_BLOCKS)

    for n in range(1, min(max_n, 6)):
        for k in range(n + 2):
            lhs = cell(n + 1, k)
            if k == 0:
                rhs = one_plus_c * cell(n, 0) + 2 * c * cell(n, 1)
            else:
                rhs = cell(n, k - 1) + one_plus_c * cell(n, k) + c * cell(n, k + 1)
            records.append(
                _record("circular census recursion (enumerated)", f"n={n + 1},k={k}", lhs == rhs)
            )
    return records


def _bijection_records(max_n: int) -> list[dict]:
    records = []
    for n in range(1, max_n + 1):
        for k in range(1, n + 1):
            by_j: dict[int, list] = {}
            for h in enum_ncc(n, k):
                by_j.setdefault(len(h.closed_blocks()), []).append(h)
            for j in range(n - k + 1):
                want = math.comb(n, j) * math.comb(n, j + k)
                got = len(by_j.get(j, ()))
                records.append(
                    _record(
                        "closed-block census C(n,j)C(n,j+k)",
                        f"n={n},k={k},j={j}",
                        got == want,
                        detail=f"{got} diagrams",
                    )
                )
            stray = sorted(set(by_j) - set(range(n - k + 1)))
            if stray:
                records.append(
                    _record(
                        "closed-block census C(n,j)C(n,j+k)",
                        f"n={n},k={k}",
                        False,
                        detail=f"unexpected closed-block counts {stray}",
                    )
                )
            for j, members in sorted(by_j.items()):
                structures = enum_dots(n, j, k)
                ok = (
                    len(structures) == len(members)
                    and all(dot_decode(dot_encode(h)) == h for h in members)
                    and all(dot_encode(dot_decode(d)) == d for d in structures)
                )
                records.append(
                    _record("dot-structure round trip", f"n={n},k={k},j={j}", ok)
                )
    records.extend(check_square_decomposition_fixture())
    records.extend(check_product_decomposition_fixture())
    return records


def _cut_reassemble_records(max_total: int) -> list[dict]:
    records = []
    for total in range(2, max_total + 1):
        for m in range((total + 1) // 2, total):
            n = total - m
            elems = enum_snc(m, n)
            fibers: dict[tuple, list] = {}
            unique_ok = True
            for a in elems:
                h1, h2 = cut(a)
                hits = [
                    s
                    for s in range(1, h1.k + 1)
                    if reassemble(h1, h2, s).perm == a.perm
                ]
                if len(hits) != 1:
                    unique_ok = False
                fibers.setdefault((h1, h2), []).append(a)
            size_ok = all(len(v) == h1.k for (h1, _), v in fibers.items())
            rebuilt: Counter = Counter()
            for (h1, h2), _ in fibers.items():
                for s in range(1, h1.k + 1):
                    rebuilt[reassemble(h1, h2, s).perm.image] += 1
            census_ok = rebuilt == Counter(a.perm.image for a in elems)
            records.append(
                _record(
                    "cut determines a unique reassembly index",
                    f"m={m},n={n}",
                    unique_ok,
                    detail=f"{len(elems)} diagrams",
                )
            )
            records.append(
                _record(
                    "fibers of size k rebuild the census exactly once",
                    f"m={m},n={n}",
                    size_ok and census_ok,
                )
            )
            enum_snc.cache_clear()
    return records


def _lineardecomp_records(max_n: int) -> list[dict]:
    records = []
    for n in range(1, max_n + 1):
        try:
            lhs, _ = lineardecomp_check(n)
            records.append(
                _record(
                    "block-weighted linear decomposition",
                    f"n={n}",
                    True,
                    detail=str(lhs),
                )
            )
        except AssertionError as exc:
            records.append(
                _record("block-weighted linear decomposition", f"n={n}", False,
                        detail=str(exc))
            )
    return records


def _series_records(order: int, max_k: int) -> list[dict]:
    one_plus_c = PolyC.of(1, 1)
    c = PolyC.c()
    records = []
    p0 = series_P0(order)
    q = p0 - 1
    ok = q == (q * q + one_plus_c * q + c).times_z()
    records.append(_record("moment series functional equation", f"order={order}", ok))

    one_minus = SeriesZ.one(order) - one_plus_c * SeriesZ.z(order)
    for k in range(1, max_k + 1):
        lhs = (c * series_P(k + 1, order)).times_z()
        rhs = one_minus * series_P(k, order) - series_P(k - 1, order).times_z()
        records.append(_record("second-kind column ladder", f"k={k}", lhs == rhs))

    power = SeriesZ.one(order)
    for k in range(1, max_k + 1):
        power = power * q
        ok = PolyC.monomial(k) * series_P(k, order) == power * p0
        records.append(
            _record("second-kind column product form (cleared by c^k)", f"k={k}", ok)
        )

    gt = inverse_table(Family.GAMMA_TILDE, order + 1)
    pt = inverse_table(Family.PI, order + 1)
    for k in range(max_k + 1):
        pk = series_P(k, order)
        ok = all(
            pk.coeff(m) == (pt.entry(m, k) if k <= m else PolyC.zero())
            for m in range(order + 1)
        )
        records.append(
            _record("second-kind series column matches the inverse table", f"k={k}", ok)
        )
        gk = series_G(k, order)
        ok = all(
            gk.coeff(m) == (gt.entry(m, k) if k <= m else PolyC.zero())
            for m in range(order + 1)
        )
        records.append(
            _record("arc-sine series column matches the inverse table", f"k={k}", ok)
        )

    base = series_G0(order)
    ok = all(
        base.coeff(m)
        == sum(
            (PolyC.const(math.comb(m, j) ** 2) * PolyC.monomial(j) for j in range(m + 1)),
            PolyC.zero(),
        )
        for m in range(order + 1)
    )
    records.append(
        _record("arc-sine base column closed form", f"order={order}", ok)
    )
    return records


def _wick_records(depth: int, seed: int, algebra: str) -> list[dict]:
    pools = {
        "scalar": [scalar_algebra()],
        "matrix": [matrix_algebra()],
        "function": [function_algebra()],
        "all": None,
    }
    checks = wick_report(depth=depth, seed=seed, algebras=pools[algebra])
    return [
        _record(chk.theorem, chk.instance, chk.passed, residual=chk.max_residual)
        for chk in checks
    ]


def cmd_verify(args: argparse.Namespace) -> tuple[dict, int]:
    suite = args.suite
    if suite == "recursions":
        records = _recursion_records(args.max_n if args.max_n is not None else 10)
    elif suite == "bijections":
        records = _bijection_records(args.max_n if args.max_n is not None else 8)
    elif suite == "cut-reassemble":
        records = _cut_reassemble_records(args.max_total)
    elif suite == "lineardecomp":
        records = _lineardecomp_records(args.max_n if args.max_n is not None else 10)
    elif suite == "series":
        records = _series_records(args.order, args.max_k)
    else:
        records = _wick_records(args.depth, args.seed, args.algebra)
    failures = sum(1 for rec in records if not rec["pass"])
    report = {
        "command": "verify",
        "config": _config_dict(args),
        "suite": suite,
        "checks": records,
        "instances": len(records),
        "failures": failures,
        "status": "pass" if failures == 0 else "fail",
    }
    return report, 0 if failures == 0 else 1


# ---------------------------------------------------------------------------
# mc
# ---------------------------------------------------------------------------


def _parse_word(spec: str) -> tuple[tuple[int, ...], tuple[int, ...]]:
    try:
        degrees_part, letters_part = spec.split(":")
        degrees = tuple(int(x) for x in degrees_part.split(","))
        letters = tuple(int(x) for x in letters_part.split(","))
    except ValueError as exc:
        raise UsageError(
            f"cannot parse word spec {spec!r}; expected 'd1,d2,...:i1,i2,...'"
        ) from exc
    if len(degrees) != len(letters) or not degrees:
        raise UsageError("word spec needs matching nonempty degree and letter lists")
    if any(d < 1 for d in degrees) or any(i < 1 for i in letters):
        raise UsageError("degrees and letters must be >= 1")
    k = len(letters)
    if k < 2 or any(letters[i] == letters[(i + 1) % k] for i in range(k)):
        raise UsageError("letters must be cyclically alternating")
    return degrees, letters


def _resolve_ensemble(args: argparse.Namespace, max_degree: int,
                      num_matrices: int) -> EnsembleConfig:
    cols = args.N
    ratio = Fraction(args.c) if args.c is not None else None
    if args.M is not None:
        rows = args.M
    elif ratio is not None:
        exact = ratio * cols
        if exact.denominator != 1:
            raise UsageError(
                f"--c {args.c} with --N {cols} gives a non-integer row count {exact}; "
                "pass --M explicitly"
            )
        rows = int(exact)
    else:
        rows = cols
    try:
        return EnsembleConfig(
            rows=rows,
            cols=cols,
            num_matrices=num_matrices,
            num_samples=args.samples,
            max_degree=max_degree,
            seed=args.seed,
            ratio=ratio,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _split_checks(checks: list[StatCheck]) -> tuple[list[dict], list[dict]]:
    statistics = []
    covariance = []
    for chk in checks:
        keys = chk.keys or (chk.name,)
        if chk.kind == "mean":
            statistics.append(
                {
                    "key": keys[0],
                    "mean": chk.estimate,
                    "se_mean": chk.se,
                    "predicted_mean": chk.limit,
                    "tolerance": chk.tolerance,
                    "pass": chk.passed,
                }
            )
        else:
            covariance.append(
                {
                    "kind": chk.kind,
                    "key_a": keys[0],
                    "key_b": keys[-1],
                    "estimate": chk.estimate,
                    "se": chk.se,
                    "predicted": chk.limit,
                    "tolerance": chk.tolerance,
                    "pass": chk.passed,
                }
            )
    return statistics, covariance


def cmd_mc(args: argparse.Namespace) -> tuple[dict, int]:
    start = time.perf_counter()
    if args.experiment == "diagonalize":
        word = _parse_word(args.mixed) if args.mixed is not None else None
        num_matrices = args.p if args.p is not None else 2
        if word is not None and max(word[1]) > num_matrices:
            raise UsageError(
                f"word letters go up to {max(word[1])} but only {num_matrices} "
                "matrices are sampled; raise --p"
            )
        config = _resolve_ensemble(args, args.max_degree, num_matrices)
        samples = sample_traces(config)
        checks = evaluate_statistics(config, samples)
        if word is not None:
            degrees, letters = word
            if degrees != (1, 1):
                raise UsageError(
                    "only the length-two, degree-one alternating word is sampled; "
                    f"got degrees {degrees}"
                )
            key = f"tr pi[1](X{letters[0]}) pi[1](X{letters[1]})"
            if all(key not in chk.keys for chk in checks):
                values = pi_pair_trace(samples, letters[0] - 1, letters[1] - 1)
                limit = float(word_variance_limit(degrees, letters, config.c))
                checks.append(
                    variance_check(
                        values, limit, config.cols, f"var {key}", (key, key)
                    )
                )
    else:
        if args.m is None or args.n is None:
            raise UsageError("mc raw-cov needs --m and --n")
        m, n = args.m, args.n
        if m < 1 or n < 1:
            raise UsageError(f"powers must be >= 1, got m={m}, n={n}")
        num_matrices = args.p if args.p is not None else 1
        config = _resolve_ensemble(args, max(m, n), num_matrices)
        try:
            prediction = predict_covariance(m, n)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        samples = sample_traces(config)
        key_a, key_b = f"tr X1^{m}", f"tr X1^{n}"
        checks = [
            covariance_check(
                power_trace(samples, 0, m),
                power_trace(samples, 0, n),
                float(prediction.evaluate(config.c)),
                config.cols,
                f"cov {key_a}, {key_b}",
                (key_a, key_b),
            )
        ]
    elapsed = time.perf_counter() - start
    statistics, covariance = _split_checks(checks)
    failures = sum(1 for chk in checks if not chk.passed)
    report = {
        "command": "mc",
        "config": _config_dict(args),
        "experiment": args.experiment,
        "rows": config.rows,
        "cols": config.cols,
        "c": str(config.c),
        "c_prime": str(config.c_prime),
        "statistics": statistics,
        "covariance": covariance,
        "seed": config.seed,
        "elapsed_s": elapsed,
        "status": "pass" if failures == 0 else "fail",
    }
    return report, 0 if failures == 0 else 1


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _nonnegative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return value


def _default_threads() -> int:
    raw = os.environ.get("NCWISHART_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format", choices=("text", "json", "csv"), default="text",
        help="report rendering (default: text)",
    )
    common.add_argument(
        "--output", metavar="PATH", default=None,
        help="write the report atomically to PATH instead of stdout",
    )
    common.add_argument(
        "--threads", type=_positive_int, default=_default_threads(),
        help="worker-count hint recorded in the report "
             "(default: NCWISHART_THREADS or 1)",
    )

    parser = argparse.ArgumentParser(
        prog="ncwishart",
        description="Coefficient tables, diagram enumeration, verification "
                    "suites, and Monte Carlo experiments for Wishart trace "
                    "fluctuations.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_tables = sub.add_parser(
        "tables", parents=[common],
        help="print a family coefficient table or its inverse",
    )
    p_tables.add_argument("family", choices=sorted(FAMILY_CHOICES))
    p_tables.add_argument("--rows", type=_positive_int, default=5)
    p_tables.add_argument(
        "--check", action="store_true",
        help="compare against the built-in golden fixture (first five rows)",
    )
    p_tables.set_defaults(handler=cmd_tables)

    p_enum = sub.add_parser(
        "enumerate", parents=[common],
        help="stream a diagram cell in canonical order with its weighted count",
    )
    p_enum.add_argument("kind", choices=("ncc", "ncl", "snc"))
    p_enum.add_argument("--n", type=_nonnegative_int, default=None)
    p_enum.add_argument("--k", type=_nonnegative_int, default=None)
    p_enum.add_argument("--m", type=_nonnegative_int, default=None)
    p_enum.add_argument(
        "--cap", type=_positive_int, default=DEFAULT_DISC_CAP,
        help=f"enumeration size cap (default {DEFAULT_DISC_CAP})",
    )
    p_enum.set_defaults(handler=cmd_enumerate)

    p_verify = sub.add_parser(
        "verify", parents=[common],
        help="run a property suite and list every identity instance checked",
    )
    p_verify.add_argument(
        "suite",
        choices=("recursions", "bijections", "cut-reassemble", "lineardecomp",
                 "series", "wick"),
    )
    p_verify.add_argument(
        "--max-n", type=_positive_int, default=None,
        help="size cap (default: 10 for recursions/lineardecomp, 8 for bijections)",
    )
    p_verify.add_argument(
        "--max-total", type=_positive_int, default=8,
        help="cut-reassemble: largest m+n (default 8)",
    )
    p_verify.add_argument(
        "--order", type=_positive_int, default=12,
        help="series: truncation order (default 12)",
    )
    p_verify.add_argument(
        "--max-k", type=_positive_int, default=8,
        help="series: largest column (default 8)",
    )
    p_verify.add_argument(
        "--depth", type=_positive_int, default=4,
        help="wick: tensor-degree cap (default 4)",
    )
    p_verify.add_argument("--seed", type=_nonnegative_int, default=0,
                          help="wick: letter seed")
    p_verify.add_argument(
        "--algebra", choices=("scalar", "matrix", "function", "all"), default="all",
        help="wick: which coefficient algebra(s) to drive",
    )
    p_verify.set_defaults(handler=cmd_verify)

    p_mc = sub.add_parser(
        "mc", parents=[common],
        help="sample Wishart ensembles and hold trace statistics against "
             "their exact limits",
    )
    p_mc.add_argument("experiment", choices=("diagonalize", "raw-cov"))
    p_mc.add_argument("--N", type=_positive_int, default=200,
                      help="matrix dimension (default 200)")
    p_mc.add_argument("--M", type=_positive_int, default=None,
                      help="row count (default: c*N)")
    p_mc.add_argument("--c", default=None,
                      help="ratio limit as an exact fraction, e.g. 1, 1/2, 0.5 "
                           "(default: 1 when --M is absent)")
    p_mc.add_argument("--p", type=_positive_int, default=None,
                      help="independent matrices (default: 2 for diagonalize, "
                           "1 for raw-cov)")
    p_mc.add_argument("--samples", type=_positive_int, default=20000)
    p_mc.add_argument("--seed", type=_nonnegative_int, default=0)
    p_mc.add_argument("--max-degree", type=_positive_int, default=3)
    p_mc.add_argument("--m", type=_positive_int, default=None,
                      help="raw-cov: first power")
    p_mc.add_argument("--n", type=_positive_int, default=None,
                      help="raw-cov: second power")
    p_mc.add_argument("--mixed", default=None, metavar="WORD",
                      help="diagonalize: alternating word 'd1,d2,...:i1,i2,...' "
                           "whose variance is held against its exact limit")
    p_mc.set_defaults(handler=cmd_mc)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report, code = args.handler(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if report is not None:
        _write_output(_render(report, args.format), args.output)
    return code


if __name__ == "__main__":
    sys.exit(main())
