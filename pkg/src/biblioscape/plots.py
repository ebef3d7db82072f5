"""Static SVG renderers for the report bundle.

Every renderer is a pure function from artifact data to an SVG string with
fixed canvas geometry and two-decimal coordinates, so identical inputs
always produce identical bytes. Layout stays deliberately basic: lines,
bars, scatters, a dendrogram tree, Sankey ribbons, and a sized-label cloud.
Network layout is left to downstream tools.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import TYPE_CHECKING

if TYPE_CHECKING:  # pragma: no cover
    from .pipeline import RunManifest

__all__ = [
    "render_plots",
    "svg_bar_chart",
    "svg_dendrogram",
    "svg_line_chart",
    "svg_sankey",
    "svg_scatter",
    "svg_thematic_map",
    "svg_word_cloud",
]

W, H = 800, 480
ML, MR, MT, MB = 70, 30, 46, 46
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
           "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f")


def _f(x: float) -> str:
    return f"{x:.2f}"


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _svg(body: list[str], title: str) -> str:
    head = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
        f'viewBox="0 0 {W} {H}" font-family="Helvetica, Arial, sans-serif">',
        f'<rect width="{W}" height="{H}" fill="white"/>',
        f'<text x="{W / 2:.2f}" y="24" font-size="16" text-anchor="middle">{_esc(title)}</text>',
    ]
    return "\n".join(head + body + ["</svg>"]) + "\n"


def _axes(x0: float, x1: float, y0: float, y1: float) -> list[str]:
    return [
        f'<line x1="{_f(x0)}" y1="{_f(y1)}" x2="{_f(x1)}" y2="{_f(y1)}" stroke="#333"/>',
        f'<line x1="{_f(x0)}" y1="{_f(y0)}" x2="{_f(x0)}" y2="{_f(y1)}" stroke="#333"/>',
    ]


def svg_line_chart(series: list[dict], title: str) -> str:
    """Polyline chart; each series dict carries "label" and "points"."""
    points_all = [(x, y) for s in series for x, y in s["points"]]
    if not points_all:
        raise ValueError("nothing to plot")
    xs = sorted({x for x, _ in points_all})
    ymax = max((y for _, y in points_all), default=0) or 1
    x0, x1, y0, y1 = ML, W - MR, MT, H - MB
    span = (xs[-1] - xs[0]) or 1

    def sx(x):
        return x0 + (x - xs[0]) / span * (x1 - x0)

    def sy(y):
        return y1 - y / ymax * (y1 - y0)

    body = _axes(x0, x1, y0, y1)
    for x in xs:
        body.append(f'<text x="{_f(sx(x))}" y="{_f(y1 + 18)}" font-size="10" '
                    f'text-anchor="middle">{x}</text>')
    for i in range(5):
        val = ymax * i / 4
        body.append(f'<text x="{_f(x0 - 6)}" y="{_f(sy(val) + 3)}" font-size="10" '
                    f'text-anchor="end">{val:g}</text>')
    for si, s in enumerate(series):
        color = PALETTE[si % len(PALETTE)]
        pts = " ".join(f"{_f(sx(x))},{_f(sy(y))}" for x, y in s["points"])
        body.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        body.append(f'<text x="{_f(x1 - 4)}" y="{_f(MT + 14 + 13 * si)}" font-size="10" '
                    f'text-anchor="end" fill="{color}">{_esc(s["label"])}</text>')
    return _svg(body, title)


def svg_bar_chart(items: list[tuple[str, float]], title: str) -> str:
    """Horizontal bars, one per (label, value), in the given order."""
    if not items:
        raise ValueError("nothing to plot")
    vmax = max(v for _, v in items) or 1
    x0, x1 = 220, W - MR
    row_h = min(26.0, (H - MT - MB) / len(items))
    body = []
    for i, (label, value) in enumerate(items):
        y = MT + i * row_h
        width = (value / vmax) * (x1 - x0)
        body.append(f'<text x="{_f(x0 - 8)}" y="{_f(y + row_h * 0.7)}" font-size="11" '
                    f'text-anchor="end">{_esc(str(label))}</text>')
        body.append(f'<rect x="{_f(x0)}" y="{_f(y + row_h * 0.15)}" width="{_f(width)}" '
                    f'height="{_f(row_h * 0.7)}" fill="{PALETTE[0]}"/>')
        body.append(f'<text x="{_f(x0 + width + 5)}" y="{_f(y + row_h * 0.7)}" '
                    f'font-size="11">{value:g}</text>')
    return _svg(body, title)


def svg_scatter(points: list[dict], title: str) -> str:
    """Labelled scatter of {"term","x","y","cluster"} points, colored by cluster."""
    if not points:
        raise ValueError("nothing to plot")
    xs = [p["x"] for p in points]
    ys = [p["y"] for p in points]
    dx = (max(xs) - min(xs)) or 1.0
    dy = (max(ys) - min(ys)) or 1.0
    x0, x1, y0, y1 = ML, W - MR, MT, H - MB

    def sx(x):
        return x0 + (x - min(xs)) / dx * (x1 - x0)

    def sy(y):
        return y1 - (y - min(ys)) / dy * (y1 - y0)

    body = [f'<line x1="{_f(x0)}" y1="{_f((y0 + y1) / 2)}" x2="{_f(x1)}" '
            f'y2="{_f((y0 + y1) / 2)}" stroke="#ddd"/>',
            f'<line x1="{_f((x0 + x1) / 2)}" y1="{_f(y0)}" x2="{_f((x0 + x1) / 2)}" '
            f'y2="{_f(y1)}" stroke="#ddd"/>']
    for p in points:
        color = PALETTE[(p.get("cluster", 1) - 1) % len(PALETTE)]
        cx, cy = sx(p["x"]), sy(p["y"])
        body.append(f'<circle cx="{_f(cx)}" cy="{_f(cy)}" r="4" fill="{color}"/>')
        body.append(f'<text x="{_f(cx + 6)}" y="{_f(cy + 3)}" font-size="10" '
                    f'fill="{color}">{_esc(p["term"])}</text>')
    return _svg(body, title)


def svg_thematic_map(themes: list[dict], med_c: float, med_d: float, title: str) -> str:
    """Strategic diagram: themes at (centrality, density) with median lines."""
    if not themes:
        raise ValueError("nothing to plot")
    cs = [t["centrality"] for t in themes] + [med_c]
    ds = [t["density"] for t in themes] + [med_d]
    dx = (max(cs) - min(cs)) or 1.0
    dy = (max(ds) - min(ds)) or 1.0
    x0, x1, y0, y1 = ML, W - MR, MT, H - MB

    def sx(c):
        return x0 + 20 + (c - min(cs)) / dx * (x1 - x0 - 40)

    def sy(d):
        return y1 - 20 - (d - min(ds)) / dy * (y1 - y0 - 40)

    body = _axes(x0, x1, y0, y1)
    body.append(f'<line x1="{_f(sx(med_c))}" y1="{_f(y0)}" x2="{_f(sx(med_c))}" '
                f'y2="{_f(y1)}" stroke="#bbb" stroke-dasharray="4 3"/>')
    body.append(f'<line x1="{_f(x0)}" y1="{_f(sy(med_d))}" x2="{_f(x1)}" '
                f'y2="{_f(sy(med_d))}" stroke="#bbb" stroke-dasharray="4 3"/>')
    body.append(f'<text x="{_f((x0 + x1) / 2)}" y="{_f(y1 + 30)}" font-size="11" '
                f'text-anchor="middle">centrality</text>')
    body.append(f'<text x="16" y="{_f((y0 + y1) / 2)}" font-size="11" '
                f'transform="rotate(-90 16 {_f((y0 + y1) / 2)})" text-anchor="middle">density</text>')
    for i, t in enumerate(themes):
        color = PALETTE[i % len(PALETTE)]
        cx, cy = sx(t["centrality"]), sy(t["density"])
        r = 6 + 30 * t.get("doc_share", 0)
        body.append(f'<circle cx="{_f(cx)}" cy="{_f(cy)}" r="{_f(r)}" fill="{color}" '
                    f'fill-opacity="0.5" stroke="{color}"/>')
        body.append(f'<text x="{_f(cx)}" y="{_f(cy - r - 4)}" font-size="11" '
                    f'text-anchor="middle">{_esc(t["label"])}</text>')
    return _svg(body, title)


def svg_dendrogram(terms: list[str], merges: list[list], title: str) -> str:
    """Classic elbow dendrogram; leaves in merge-tree traversal order."""
    n = len(terms)
    children = {n + i: (int(m[0]), int(m[1])) for i, m in enumerate(merges)}

    def leaves(node: int) -> list[int]:
        if node < n:
            return [node]
        a, b = children[node]
        return leaves(a) + leaves(b)

    order = leaves(n + len(merges) - 1) if merges else list(range(n))
    slot = {leaf: i for i, leaf in enumerate(order)}
    hmax = max((m[2] for m in merges), default=1) or 1
    x0, x1, y0, y1 = ML, W - MR, MT, H - 110

    def sx(s):
        return x0 + (s + 0.5) / n * (x1 - x0)

    def sy(h):
        return y1 - h / hmax * (y1 - y0)

    pos: dict[int, tuple[float, float]] = {leaf: (sx(slot[leaf]), y1) for leaf in range(n)}
    body = []
    for i, (a, b, h, _) in enumerate(merges):
        (xa, ya), (xb, yb) = pos[int(a)], pos[int(b)]
        y = sy(h)
        body.append(f'<path d="M {_f(xa)} {_f(ya)} V {_f(y)} H {_f(xb)} V {_f(yb)}" '
                    f'fill="none" stroke="#333"/>')
        pos[n + i] = ((xa + xb) / 2, y)
    for leaf in range(n):
        x = sx(slot[leaf])
        body.append(f'<text x="{_f(x)}" y="{_f(y1 + 12)}" font-size="10" text-anchor="end" '
                    f'transform="rotate(-40 {_f(x)} {_f(y1 + 12)})">{_esc(terms[leaf])}</text>')
    return _svg(body, title)


def svg_sankey(diagram: dict, title: str) -> str:
    """Stacked-stage flow with ribbon widths proportional to link weight."""
    stages = diagram["stages"]
    node_cols = diagram["nodes"]
    links = diagram["links"]
    x0, x1, y0, y1 = ML + 40, W - MR - 120, MT + 10, H - MB
    gap, col_w = 8.0, 16.0
    totals = [sum(n["weight"] for n in col) for col in node_cols]
    scale = min((y1 - y0 - gap * (len(col) - 1)) / t
                for col, t in zip(node_cols, totals) if t) if any(totals) else 1.0

    xs = [x0 + i * (x1 - x0) / max(len(stages) - 1, 1) for i in range(len(stages))]
    top: dict[tuple[int, str], float] = {}
    out_cur: dict[tuple[int, str], float] = {}
    in_cur: dict[tuple[int, str], float] = {}
    body = []
    for si, col in enumerate(node_cols):
        y = y0
        for node in col:
            h = node["weight"] * scale
            key = (si, node["label"])
            top[key] = y
            out_cur[key] = y
            in_cur[key] = y
            body.append(f'<rect x="{_f(xs[si])}" y="{_f(y)}" width="{_f(col_w)}" '
                        f'height="{_f(h)}" fill="#555"/>')
            anchor = "end" if si == 0 else "start"
            lx = xs[si] - 5 if si == 0 else xs[si] + col_w + 5
            body.append(f'<text x="{_f(lx)}" y="{_f(y + h / 2 + 3)}" font-size="10" '
                        f'text-anchor="{anchor}">{_esc(node["label"])}</text>')
            y += h + gap
    for hop, hop_links in enumerate(links):
        xa = xs[hop] + col_w
        xb = xs[hop + 1]
        xm = (xa + xb) / 2
        for li, link in enumerate(hop_links):
            w = link["weight"] * scale
            ka, kb = (hop, link["source"]), (hop + 1, link["target"])
            ya, yb = out_cur[ka], in_cur[kb]
            out_cur[ka] += w
            in_cur[kb] += w
            color = PALETTE[li % len(PALETTE)]
            body.append(
                f'<path d="M {_f(xa)} {_f(ya)} C {_f(xm)} {_f(ya)}, {_f(xm)} {_f(yb)}, '
                f'{_f(xb)} {_f(yb)} L {_f(xb)} {_f(yb + w)} C {_f(xm)} {_f(yb + w)}, '
                f'{_f(xm)} {_f(ya + w)}, {_f(xa)} {_f(ya + w)} Z" fill="{color}" '
                f'fill-opacity="0.45"/>')
    return _svg(body, title)


def svg_word_cloud(items: list[tuple[str, float]], title: str) -> str:
    """Rows of words sized by weight, largest first; no collision physics."""
    if not items:
        raise ValueError("nothing to plot")
    wmin = min(v for _, v in items)
    wmax = max(v for _, v in items)
    span = (wmax - wmin) or 1.0
    body = []
    x, y, row_h = float(ML), MT + 40.0, 0.0
    for i, (word, weight) in enumerate(items):
        size = 12 + 34 * (weight - wmin) / span
        est_w = 0.62 * size * len(word) + 14
        if x + est_w > W - MR and x > ML:
            x = float(ML)
            y += row_h + 10
            row_h = 0.0
        color = PALETTE[i % len(PALETTE)]
        body.append(f'<text x="{_f(x)}" y="{_f(y)}" font-size="{_f(size)}" '
                    f'fill="{color}">{_esc(word)}</text>')
        x += est_w
        row_h = max(row_h, size)
    return _svg(body, title)


# --------------------------------------------------------------------------
# Manifest-driven rendering
# --------------------------------------------------------------------------

def render_plots(manifest: "RunManifest", out_dir: str | Path | None = None) -> list[Path]:
    """Render an SVG for every plottable artifact listed in the manifest.

    Missing or empty artifacts are skipped and noted in the manifest's
    warning list. Returns the written paths; each is also registered on the
    manifest so the emitted-file inventory stays complete.
    """
    base = Path(out_dir) if out_dir is not None else Path(manifest.output_dir)
    plot_dir = base / "plots"
    written: list[Path] = []
    for record in manifest.analyses:
        json_paths = [p for p in record.outputs if p.endswith(".json")]
        if not json_paths:
            continue
        artifact = base / json_paths[0]
        if not artifact.exists():
            manifest.warnings.append(f"plot skipped: missing artifact {json_paths[0]}")
            continue
        data = json.loads(artifact.read_text(encoding="utf-8"))
        try:
            svg = _render_for(record.name, data)
        except ValueError as exc:
            manifest.warnings.append(f"plot skipped for {record.name}: {exc}")
            continue
        if svg is None:
            continue
        plot_dir.mkdir(parents=True, exist_ok=True)
        path = plot_dir / f"{record.name}.svg"
        path.write_text(svg, encoding="utf-8")
        record.outputs.append(str(path.relative_to(base)))
        written.append(path)
    return written


def _render_for(name: str, data: dict) -> str | None:
    title = name.replace("_", " ")
    if name in ("production_growth", "citation_series"):
        return svg_line_chart([data], title)
    if name == "word_trends":
        if not data.get("series"):
            raise ValueError("empty series")
        return svg_line_chart(data["series"], title)
    if name in ("production_distribution", "citation_distribution", "frequent_words"):
        if not data.get("items"):
            raise ValueError("empty table")
        return svg_bar_chart([(k, v) for k, v in data["items"]], title)
    if name == "word_cloud":
        return svg_word_cloud([(k, v) for k, v in data.get("items", [])], title)
    if name == "topic_map":
        return svg_scatter(data["points"], title)
    if name == "thematic_map":
        return svg_thematic_map(data["themes"], data["median_centrality"],
                                data["median_density"], title)
    if name == "dendrogram":
        return svg_dendrogram(data["terms"], data["merges"], title)
    if name == "flow":
        return svg_sankey(data, title)
    return None
