"""Human- and machine-readable renderings of models and rankings.

Every exporter here is a pure function and byte-deterministic: nodes, edges,
keys, and rows are emitted in sorted order, never in hash order.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

from .model import ImpactLink, Model, requirements_of
from .prioritize import ImpactPath, Ranking, RankingEntry

TABLE_COLUMNS = ("POS", "SUBJECT", "TITLE", "PROPERTY", "IMPACT", "VALUE", "PATHS")


def format_exact(value: Fraction) -> str:
    """Exact decimal rendering ("1.5"), falling back to "n/d" ("4/3") when
    the value has no terminating decimal form."""
    if value.denominator == 1:
        return str(value.numerator)
    d = value.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{value.numerator}/{value.denominator}"
    digits = max(twos, fives)
    scaled = value.numerator * 10 ** digits // value.denominator
    text = str(scaled).rjust(digits + 1, "0")
    return f"{text[:-digits]}.{text[-digits:]}"


def _entry_row(position: int, entry: RankingEntry, model: Model) -> tuple[str, ...]:
    if "." in entry.subject:
        asset_id, _, prop = entry.subject.partition(".")
        asset = model.assets.get(asset_id)
        title = asset.title if asset else ""
    else:
        cif = model.cifs.get(entry.subject)
        title = cif.title if cif else ""
        prop = ""
    score = entry.score
    impact = score.label if score.label is not None else "no-path"
    value = format_exact(score.value) if score.value is not None else "-"
    return (str(position), entry.subject, title, prop, impact, value, str(len(entry.paths)))


def render_table(ranking: Ranking, model: Model) -> str:
    """Fixed-width table of a ranking, one row per entry, ranking order.

    Columns: POS, SUBJECT (requirement or CIF id), TITLE (asset or CIF
    title), PROPERTY (blank for CIFs), IMPACT (score label or no-path),
    VALUE (exact numeric score, "-" for no-path), PATHS (impact path count).
    """
    rows = [TABLE_COLUMNS]
    for position, entry in enumerate(ranking.entries, start=1):
        rows.append(_entry_row(position, entry, model))
    widths = [max(len(row[i]) for row in rows) for i in range(len(TABLE_COLUMNS))]
    lines = ["  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip()
             for row in rows]
    return "\n".join(lines) + "\n"


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")


def export_dot(model: Model, ranking: Ranking | None = None) -> str:
    """DOT digraph of the impact diagram.

    Requirements, CIFs, and visions form three left-to-right columns; each
    link becomes one edge labelled with its severity, drawn heavier the more
    severe it is. With a ranking, requirement nodes also show their score
    label. Output is byte-stable: everything is sorted by id.
    """
    requirement_ids = [r.id for r in requirements_of(model)]
    cif_ids = sorted(model.cifs)
    vision_ids = sorted(model.visions)
    if not (requirement_ids or cif_ids or vision_ids):
        return "digraph impact {\n}\n"

    labels = {}
    if ranking is not None:
        labels = {e.subject: e.score.label or "no-path" for e in ranking.entries}

    out = ["digraph impact {", "  rankdir=LR;", '  node [shape=box];']
    for group in (requirement_ids, cif_ids, vision_ids):
        if group:
            out.append("  { rank=same; " + " ".join(f'"{_dot_escape(i)}";' for i in group) + " }")
    for requirement_id in requirement_ids:
        label = requirement_id
        if requirement_id in labels:
            label += f"\n{labels[requirement_id]}"
        out.append(f'  "{_dot_escape(requirement_id)}" [label="{_dot_escape(label)}"];')
    for cif_id in cif_ids:
        out.append(f'  "{_dot_escape(cif_id)}" [label="{_dot_escape(model.cifs[cif_id].title)}"];')
    for vision_id in vision_ids:
        out.append(
            f'  "{_dot_escape(vision_id)}" [label="{_dot_escape(model.visions[vision_id].title)}"];'
        )
    for link in model.links:
        width = model.scale.rank(link.severity) + 1
        out.append(
            f'  "{_dot_escape(link.source)}" -> "{_dot_escape(link.target)}" '
            f'[label="{_dot_escape(link.severity)}", penwidth={width}];'
        )
    out.append("}")
    return "\n".join(out) + "\n"


def _path_json(item) -> dict:
    if isinstance(item, ImpactPath):
        return {
            "cif": item.cif,
            "vision": item.vision,
            "requirement_to_cif": item.hop1_severity,
            "cif_to_vision": item.hop2_severity,
        }
    assert isinstance(item, ImpactLink)
    return {"vision": item.target, "severity": item.severity}


def export_structured(model: Model, ranking: Ranking, format: str) -> str:
    """Machine-readable export of model plus ranking: "json" or "csv"."""
    if format == "json":
        document = {
            "scale": list(model.scale.labels),
            "visions": [
                {"id": v.id, "title": v.title, "discipline": v.discipline.value}
                for v in model.visions.values()
            ],
            "cifs": [{"id": c.id, "title": c.title} for c in model.cifs.values()],
            "assets": [
                {"id": a.id, "title": a.title, "kind": a.kind.value,
                 "properties": list(a.property_names)}
                for a in model.assets.values()
            ],
            "links": [
                {"source": l.source, "target": l.target, "severity": l.severity,
                 "layer": l.layer.value}
                for l in model.links
            ],
            "ranking": {
                "strategy": ranking.strategy.value,
                "entries": [
                    {
                        "subject": e.subject,
                        "score": {
                            "kind": e.score.kind,
                            "value": format_exact(e.score.value)
                            if e.score.value is not None else None,
                            "label": e.score.label,
                        },
                        "paths": [_path_json(p) for p in e.paths],
                    }
                    for e in ranking.entries
                ],
            },
        }
        return json.dumps(document, indent=2, sort_keys=True) + "\n"
    if format == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer)  # RFC 4180: CRLF rows, quoting as needed
        writer.writerow(
            ["position", "subject", "title", "property", "impact", "value", "paths"]
        )
        for position, entry in enumerate(ranking.entries, start=1):
            row = list(_entry_row(position, entry, model))
            if entry.score.value is None:
                row[5] = ""
            writer.writerow(row)
        return buffer.getvalue()
    raise ValueError(f"unknown export format {format!r}: expected json or csv")
