"""Markdown, CSV and JSON rendering of report payloads.

A payload is a plain JSON-compatible dict ``{"meta": {...}, "rows": [...]}``
(some kinds add extra sections). Renderers only read the payload, so a
payload parsed back from JSON renders to the same bytes as the original.
"""

from __future__ import annotations

import csv
import io
import json
import math
from decimal import ROUND_HALF_EVEN, Decimal

INF_TOKEN = "inf"


def format_sig(x: float | None, sig: int = 4) -> str:
    """Round to ``sig`` significant figures, half-to-even, without exponent notation.

    >>> format_sig(10.2449)
    '10.24'
    >>> format_sig(9.8696)
    '9.870'
    """
    if x is None:
        return "ERR"
    if x == 0:
        return "0." + "0" * (sig - 1)
    d = Decimal(repr(float(x)))
    for _ in range(2):
        q = Decimal(1).scaleb(d.adjusted() - sig + 1)
        r = d.quantize(q, rounding=ROUND_HALF_EVEN)
        if r.adjusted() == d.adjusted():
            break
        # rounding carried into a new decade (9.9996 -> 10.00)
        d = r
    return format(r, "f")


def n_to_json(N: float):
    if math.isinf(N):
        return INF_TOKEN
    return int(N) if float(N).is_integer() else float(N)


def n_from_json(value) -> float:
    return math.inf if value == INF_TOKEN else float(value)


def n_header(value) -> str:
    return "∞" if value == INF_TOKEN else str(value)


def to_json(payload: dict) -> str:
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


def _md_table(header: list[str], body: list[list[str]]) -> str:
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
    lines += ["| " + " | ".join(row) + " |" for row in body]
    return "\n".join(lines) + "\n"


def _csv(header: list[str], body: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(body)
    return buf.getvalue()


def _num(x) -> str:
    return "" if x is None else repr(x)


def _engine_group(engine: str) -> str:
    return "fd" if engine == "fd" else "spectral"


# --- spectrum-style payloads (table2, spectrum) -----------------------------

def _grid_markdown(rows: list[dict], sig: int) -> str:
    columns: list = []
    for r in rows:
        if r["N"] not in columns:
            columns.append(r["N"])
    levels = sorted({r["n"] for r in rows})
    cell = {(r["n"], r["N"]): r for r in rows}
    body = []
    for n in levels:
        line = [str(n)]
        for N in columns:
            r = cell.get((n, N))
            line.append("" if r is None else format_sig(r["lambda"], sig))
        body.append(line)
    return _md_table(["n::N"] + [n_header(N) for N in columns], body)


def _spectrum_markdown(payload: dict) -> str:
    meta = payload["meta"]
    sig = meta["policy"]["sig_figs"]
    groups: dict[str, list[dict]] = {}
    for r in payload["rows"]:
        groups.setdefault(_engine_group(r["engine"]), []).append(r)
    out = [f"{meta['title']}\n"]
    for name, rows in groups.items():
        if len(groups) > 1:
            out.append(f"\nengine: {name}\n\n")
        else:
            out.append("\n")
        out.append(_grid_markdown(rows, sig))
    errors = [r for r in payload["rows"] if r.get("error")]
    if errors:
        out.append("\n")
        for r in errors:
            out.append(f"- ERR n={r['n']} N={r['N']} ({r['engine']}): {r['error']}\n")
    return "".join(out)


def _spectrum_csv(payload: dict) -> str:
    both = payload["meta"]["engine"] == "both"
    header = ["n", "N", "lambda", "converged_digits"] + (["engine"] if both else [])
    body = []
    for r in payload["rows"]:
        line = [r["n"], r["N"], _num(r["lambda"]), "" if r["converged_digits"] is None else r["converged_digits"]]
        if both:
            line.append(r["engine"])
        body.append(line)
    return _csv(header, body)


# --- table1 -----------------------------------------------------------------

def _table1_markdown(payload: dict) -> str:
    meta = payload["meta"]
    rows = payload["rows"]
    sig = meta["policy"]["sig_figs"]
    header = ["N"] + [n_header(r["N"]) for r in rows]
    body = [["Trial wavefunction (reference)"] + [r["reference_trial"] for r in rows]]
    for fam in meta["families"]:
        body.append([f"Variational bound ({fam})"] + [format_sig(r["bounds"][fam], sig) for r in rows])
    body.append(["Numerical method"] + [format_sig(r["lambda1"], sig) for r in rows])
    body.append(["Numerical (reference)"] + [r["reference_numerical"] for r in rows])
    out = f"{meta['title']}\n\n" + _md_table(header, body)
    bad = [r for r in rows if r["violation"]]
    if bad:
        out += "\n" + "".join(f"- VIOLATION at N={r['N']}: bound below lambda_1\n" for r in bad)
    return out


def _table1_csv(payload: dict) -> str:
    fams = payload["meta"]["families"]
    header = ["N", "reference_trial"] + [f"{f}_bound" for f in fams] + ["lambda1", "violation"]
    body = [
        [r["N"], r["reference_trial"]] + [_num(r["bounds"][f]) for f in fams] + [_num(r["lambda1"]), r["violation"]]
        for r in payload["rows"]
    ]
    return _csv(header, body)


# --- converge ---------------------------------------------------------------

def _converge_markdown(payload: dict) -> str:
    meta = payload["meta"]
    counts = [t["node_count"] for t in payload["grids"]]
    header = ["n"] + [f"{c} nodes" for c in counts] + [f"digits {a}->{b}" for a, b in zip(counts, counts[1:])]
    levels = sorted({r["n"] for r in payload["rows"]})
    cell = {(r["n"], r["node_count"]): r for r in payload["rows"]}
    body = []
    for n in levels:
        vals = [repr(cell[(n, c)]["lambda"]) for c in counts]
        digs = [str(cell[(n, c)]["agreed_digits"]) for c in counts[1:]]
        body.append([str(n)] + vals + digs)
    widths = ", ".join(f"{t['node_count']}: L={t['half_width']!r}" for t in payload["grids"])
    return f"{meta['title']}\n\nhalf-widths: {widths}\n\n" + _md_table(header, body)


def _converge_csv(payload: dict) -> str:
    header = ["n", "N", "node_count", "half_width", "lambda", "agreed_digits"]
    body = [
        [r["n"], r["N"], r["node_count"], repr(r["half_width"]), repr(r["lambda"]),
         "" if r["agreed_digits"] is None else r["agreed_digits"]]
        for r in payload["rows"]
    ]
    return _csv(header, body)


# --- physical ---------------------------------------------------------------

def _physical_markdown(payload: dict) -> str:
    meta = payload["meta"]
    sig = meta["policy"]["sig_figs"]
    head = (
        f"{meta['title']}\n\n"
        f"- E_a = hbar^2/(2 m a^2) = {meta['energy_scale']!r}\n"
        f"- beta = {meta['beta']!r}\n"
        f"- sigma = {meta['sigma']!r}\n"
        f"- partition: {meta['partition']}\n\n"
    )
    body = [[str(r["n"]), format_sig(r["lambda"], sig), format_sig(r["energy"], sig)] for r in payload["rows"]]
    return head + _md_table(["n", "lambda", "E"], body)


def _physical_csv(payload: dict) -> str:
    return _csv(["n", "N", "lambda", "energy"], [[r["n"], r["N"], repr(r["lambda"]), repr(r["energy"])] for r in payload["rows"]])


# --- audit ------------------------------------------------------------------

def _audit_markdown(payload: dict) -> str:
    meta = payload["meta"]
    out = [f"{meta['title']}\n\n"]
    out.append(_md_table(
        ["check", "result", "detail"],
        [[c["name"], "PASS" if c["passed"] else "FAIL", c["detail"]] for c in payload["checks"]],
    ))
    out.append("\nspectral vs finite differences\n\n")
    out.append(_md_table(
        ["n", "N", "spectral", "fd", "rel diff"],
        [[str(r["n"]), n_header(r["N"]), repr(r["spectral"]), repr(r["fd"]), f"{r['rel_diff']:.2e}"] for r in payload["rows"]],
    ))
    out.append("\nfinite-difference order (N=2, lambda_1 = 1)\n\n")
    out.append(_md_table(
        ["points", "error", "ratio"],
        [[str(r["points"]), f"{r['error']:.4e}", "" if r["ratio"] is None else f"{r['ratio']:.3f}"] for r in payload["fd_order"]],
    ))
    out.append("\nvariational bounds\n\n")
    out.append(_md_table(
        ["N", "family", "bound", "lambda_1", "relative gap"],
        [[n_header(r["N"]), r["family"], repr(r["bound"]), repr(r["lambda1"]), f"{r['relative_gap']:.4e}"] for r in payload["variational"]],
    ))
    return "".join(out)


def _audit_csv(payload: dict) -> str:
    return _csv(["check", "passed", "detail"], [[c["name"], c["passed"], c["detail"]] for c in payload["checks"]])


_MARKDOWN = {
    "table2": _spectrum_markdown,
    "spectrum": _spectrum_markdown,
    "table1": _table1_markdown,
    "converge": _converge_markdown,
    "physical": _physical_markdown,
    "audit": _audit_markdown,
}
_CSV = {
    "table2": _spectrum_csv,
    "spectrum": _spectrum_csv,
    "table1": _table1_csv,
    "converge": _converge_csv,
    "physical": _physical_csv,
    "audit": _audit_csv,
}


def render(payload: dict, fmt: str) -> str:
    kind = payload["meta"]["kind"]
    if fmt == "json":
        return to_json(payload)
    if fmt in ("md", "markdown"):
        return _MARKDOWN[kind](payload)
    if fmt == "csv":
        return _CSV[kind](payload)
    raise ValueError(f"unknown output format {fmt!r}")
