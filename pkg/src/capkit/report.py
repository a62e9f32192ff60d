"""Rendering of verification reports: a human table or structured JSON, plus an optional figure."""

from __future__ import annotations

import json
from typing import Sequence

from .checks import VerificationReport

SCHEMA = "capkit-report/1"


def to_structured(reports: Sequence[VerificationReport]) -> str:
    doc = {"schema": SCHEMA, "reports": [r.to_dict() for r in reports]}
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def parse_structured(text: str) -> list[VerificationReport]:
    doc = json.loads(text)
    if doc.get("schema") != SCHEMA:
        raise ValueError(f"unknown report schema {doc.get('schema')!r}")
    return [VerificationReport.from_dict(d) for d in doc["reports"]]


def _table(rows: list[list[str]], header: list[str]) -> list[str]:
    widths = [max(len(str(r[i])) for r in rows + [header]) for i in range(len(header))]
    line = "  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()
    out = [line, "  ".join("-" * w for w in widths)]
    for r in rows:
        out.append("  ".join(str(c).ljust(w) for c, w in zip(r, widths)).rstrip())
    return out


def to_human(reports: Sequence[VerificationReport]) -> str:
    out: list[str] = []
    for r in reports:
        out.append(f"== {r.fixture} [{r.variant}]  S = {{{', '.join(r.s_places)}}}"
                   + ("" if r.large is None else f"  large={'yes' if r.large else 'no'}"))
        out.append("certification: " + ", ".join(f"{k}={v}" for k, v in sorted(r.certification.items())))
        header = ["check", "status", "lhs", "rel", "rhs", "anchor"]
        rows = [[c.check_id, c.status, c.lhs, c.relation, c.rhs, c.anchor] for c in r.checks]
        out.extend(_table(rows, header))
        notes = [c for c in r.checks + r.consistency if c.reason]
        if r.consistency:
            out.append("consistency:")
            rows = [[c.check_id, c.status, c.lhs, c.relation, c.rhs, c.anchor] for c in r.consistency]
            out.extend(_table(rows, header))
        for c in notes:
            out.append(f"  note {c.check_id}: {c.reason}")
        out.append("derived quantities:")
        out.extend(_table([[d.name, d.value, d.note] for d in r.derived], ["quantity", "value", "note"]))
        if r.expected:
            bad = [x for x in r.expected if not x.match]
            out.append(f"fixture expectations: {len(r.expected) - len(bad)}/{len(r.expected)} match")
            for x in bad:
                out.append(f"  mismatch {x.name}: expected {x.expected}, computed {x.computed}")
        out.append("")
    return "\n".join(out)


def render_figure(reports: Sequence[VerificationReport], path: str) -> None:
    """Grid of check statuses (rows: variants, columns: checks) saved to `path`."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    ids = sorted({c.check_id for r in reports for c in r.checks + r.consistency})
    code = {"PASS": 2, "SKIPPED": 1, "FAIL": 0}
    grid = []
    for r in reports:
        status = {c.check_id: c.status for c in r.checks + r.consistency}
        grid.append([code.get(status.get(i, ""), float("nan")) for i in ids])
    fig, ax = plt.subplots(figsize=(max(6, 0.5 * len(ids) + 2), max(2, 0.4 * len(reports) + 1.5)))
    cmap = matplotlib.colors.ListedColormap(["#d62728", "#bbbbbb", "#2ca02c"])
    ax.imshow(grid, cmap=cmap, vmin=0, vmax=2, aspect="auto")
    ax.set_xticks(range(len(ids)))
    ax.set_xticklabels(ids, rotation=60, ha="right", fontsize=8)
    ax.set_yticks(range(len(reports)))
    ax.set_yticklabels([f"{r.fixture}:{r.variant}" for r in reports], fontsize=8)
    ax.set_title("check status (green pass, grey skipped, red fail)")
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
