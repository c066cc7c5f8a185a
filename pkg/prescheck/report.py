"""Generate HTML reports with charts for a run report.

This module is optional at runtime; if matplotlib is unavailable, the report
gracefully degrades and still renders the summary and the check table.
"""

from __future__ import annotations

import base64
import html
import json
from io import BytesIO
from typing import Any, Dict, Iterable, List, Sequence

try:  # pragma: no cover - matplotlib is optional at runtime
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except Exception:  # pragma: no cover - gracefully degrade if missing
    plt = None  # type: ignore


def _encode_fig(fig) -> str:
    buf = BytesIO()
    fig.savefig(buf, format="png", bbox_inches="tight")
    plt.close(fig)
    return base64.b64encode(buf.getvalue()).decode("ascii")


def _plot_verdicts(passed: int, failed: int) -> str:
    if plt is None:
        return ""
    fig, ax = plt.subplots()
    ax.bar(["passed", "failed"], [passed, failed], color=["tab:green", "tab:red"])
    ax.set_ylabel("checks")
    ax.set_title("Verdicts")
    return _encode_fig(fig)


def _plot_betti(profiles: Sequence[Dict[str, Any]]) -> str:
    if plt is None or not profiles:
        return ""
    fig, ax = plt.subplots()
    for prof in profiles:
        betti = [prof.get("betti_minus_one", 0), *prof.get("betti", [])]
        ax.plot(range(-1, len(betti) - 1), betti, marker="o", label=str(prof.get("label", "")))
    ax.set_xlabel("degree")
    ax.set_ylabel("reduced Betti number")
    ax.set_title("Homology")
    if any(p.get("label") for p in profiles):
        ax.legend()
    return _encode_fig(fig)


def _betti_profiles(checks: Iterable[Dict[str, Any]]) -> List[Dict[str, Any]]:
    out = []
    for c in checks:
        details = c.get("details") or {}
        if "betti" in details:
            out.append({
                "label": c.get("name", ""),
                "betti": details["betti"],
                "betti_minus_one": details.get("betti_minus_one", 0),
            })
    return out


def _check_rows(checks: Iterable[Dict[str, Any]]) -> str:
    rows = []
    for c in checks:
        witness = c.get("witness")
        shown = "" if witness is None else html.escape(json.dumps(witness, ensure_ascii=False))
        rows.append(
            f"<tr><td>{html.escape(str(c.get('name', '')))}</td>"
            f"<td>{'pass' if c.get('verdict') else 'FAIL'}</td><td>{shown}</td></tr>"
        )
    return (
        "<table id='checks'>"
        "<tr><th>check</th><th>verdict</th><th>witness</th></tr>"
        + "".join(rows)
        + "</table>"
    )


def report(results: dict) -> str:
    """Generate an HTML report from a run report dictionary."""

    summary = results.get("summary", {})
    checks = results.get("checks", [])
    params = results.get("parameters", {})
    lis = [
        f"<li>Subcommand: {html.escape(str(results.get('subcommand', '')))}</li>",
        f"<li>Parameters: {html.escape(json.dumps(params, ensure_ascii=False, sort_keys=True))}</li>",
        f"<li>Passed: {summary.get('passed', 0)} / {summary.get('total', len(checks))}</li>",
        f"<li>Verdict: {'OK' if not summary.get('failed') else 'Fail'}</li>",
    ]

    verdict_chart = _plot_verdicts(summary.get("passed", 0), summary.get("failed", 0))
    betti_chart = _plot_betti(_betti_profiles(checks))

    proof = results.get("proof")
    if isinstance(proof, list) and proof:
        proof_html = "<h3>Calculation steps</h3><pre>" + "\n".join(html.escape(str(s)) for s in proof) + "</pre>"
    else:
        proof_html = ""

    parts = [
        "<h2>Check Report</h2>",
        "<ul>",
        *lis,
        "</ul>",
        "<h3>Charts</h3>",
        (f"<img src='data:image/png;base64,{verdict_chart}' alt='Verdict chart' />" if verdict_chart else ""),
        (f"<img src='data:image/png;base64,{betti_chart}' alt='Homology chart' />" if betti_chart else ""),
        "<h3>Checks</h3>",
        _check_rows(checks),
        proof_html,
    ]
    return "\n".join([p for p in parts if p])
