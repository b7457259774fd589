"""Report files written by ``check --report-dir``."""
from __future__ import annotations

import csv
from pathlib import Path

VERDICT_COLORS = {
    "PASS": "#2e7d32",
    "FAIL (expected)": "#1565c0",
    "REPORT": "#9e9e9e",
    "SKIP": "#e0e0e0",
    "FAIL": "#c62828",
    "PASS (unexpected)": "#ef6c00",
    "ERROR": "#6a1b9a",
}

CSV_FIELDS = ("law", "stack", "mode", "planned", "instances_checked", "status", "verdict")


def verdict(report) -> str:
    if report.status == "skipped":
        return "SKIP"
    if report.status == "error":
        return "ERROR"
    if report.expectation == "report-only":
        return "REPORT"
    if report.expectation == "refuted":
        return "FAIL (expected)" if report.status == "fail" else "PASS (unexpected)"
    return "PASS" if report.status == "pass" else "FAIL"


def write_csv(reports, path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_FIELDS)
        for r in reports:
            w.writerow([r.law, r.stack, r.mode, r.planned, r.instances_checked, r.status, verdict(r)])


def write_chart(reports, path: Path) -> None:
    """Bar chart of checked instances per law (log scale), colored by verdict."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from matplotlib.patches import Patch

    labels = [f"{r.law} @ {r.stack}" if len({x.stack for x in reports}) > 1 else r.law
              for r in reports]
    counts = [max(r.instances_checked, 1) for r in reports]
    kinds = [verdict(r) for r in reports]
    height = max(2.5, 0.28 * len(reports) + 1.2)
    fig, ax = plt.subplots(figsize=(9, height))
    ypos = range(len(reports))
    ax.barh(list(ypos), counts, color=[VERDICT_COLORS[k] for k in kinds])
    ax.set_yticks(list(ypos))
    ax.set_yticklabels(labels, fontsize=7)
    ax.invert_yaxis()
    ax.set_xscale("log")
    ax.set_xlabel("instances checked")
    used = [k for k in VERDICT_COLORS if k in kinds]
    ax.legend(handles=[Patch(color=VERDICT_COLORS[k], label=k) for k in used],
              loc="lower right", fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=100)
    plt.close(fig)


def write_report_dir(doc_text: str, reports, directory) -> list:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    out = [d / "report.json", d / "summary.csv", d / "summary.png"]
    out[0].write_text(doc_text + "\n", encoding="utf-8")
    write_csv(reports, out[1])
    write_chart(reports, out[2])
    return out
