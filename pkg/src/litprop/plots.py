"""Standalone SVG rendering for the gender-triad comparison chart.

Hand-written SVG keeps the output byte-deterministic across runs, which
matters for the pipeline's reproducibility contract.
"""

from __future__ import annotations

from .stats import GenderReport

_WIDTH = 720
_HEIGHT = 360
_MARGIN_LEFT = 60
_MARGIN_BOTTOM = 50
_MARGIN_TOP = 30
_STRUCTURAL_FILL = "#9ecae1"
_PROPAGATING_FILL = "#2171b5"


def gender_bar_svg(report: GenderReport) -> str:
    """Grouped bars per gender configuration: structural vs propagating share."""
    configs = report.configurations
    plot_w = _WIDTH - _MARGIN_LEFT - 20
    plot_h = _HEIGHT - _MARGIN_TOP - _MARGIN_BOTTOM
    group_w = plot_w / len(configs)
    bar_w = group_w * 0.35
    top = max(
        [report.structural_proportions[c] for c in configs]
        + [report.propagating_proportions[c] for c in configs]
        + [0.05]
    )
    scale = plot_h / (top * 1.15)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}" font-family="sans-serif" font-size="11">',
        f'<text x="{_WIDTH / 2:.1f}" y="18" text-anchor="middle" font-size="14">'
        "Triad gender configurations: all vs propagating</text>",
    ]
    axis_y = _MARGIN_TOP + plot_h
    parts.append(
        f'<line x1="{_MARGIN_LEFT}" y1="{axis_y:.1f}" x2="{_WIDTH - 20}" y2="{axis_y:.1f}" stroke="#333"/>'
    )
    parts.append(f'<line x1="{_MARGIN_LEFT}" y1="{_MARGIN_TOP}" x2="{_MARGIN_LEFT}" y2="{axis_y:.1f}" stroke="#333"/>')
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        value = top * 1.15 * frac
        y = axis_y - value * scale
        parts.append(f'<line x1="{_MARGIN_LEFT - 4}" y1="{y:.1f}" x2="{_MARGIN_LEFT}" y2="{y:.1f}" stroke="#333"/>')
        parts.append(
            f'<text x="{_MARGIN_LEFT - 8}" y="{y + 4:.1f}" text-anchor="end">{value * 100:.1f}%</text>'
        )

    for i, config in enumerate(configs):
        cx = _MARGIN_LEFT + group_w * (i + 0.5)
        sv = report.structural_proportions[config]
        pv = report.propagating_proportions[config]
        sh = sv * scale
        ph = pv * scale
        parts.append(
            f'<rect x="{cx - bar_w:.1f}" y="{axis_y - sh:.1f}" width="{bar_w:.1f}" height="{sh:.1f}" '
            f'fill="{_STRUCTURAL_FILL}"/>'
        )
        parts.append(
            f'<rect x="{cx:.1f}" y="{axis_y - ph:.1f}" width="{bar_w:.1f}" height="{ph:.1f}" '
            f'fill="{_PROPAGATING_FILL}"/>'
        )
        parts.append(
            f'<text x="{cx:.1f}" y="{axis_y + 16:.1f}" text-anchor="middle">{"-".join(config)}</text>'
        )

    legend_y = _HEIGHT - 14
    parts.append(
        f'<rect x="{_MARGIN_LEFT}" y="{legend_y - 10}" width="12" height="12" fill="{_STRUCTURAL_FILL}"/>'
    )
    parts.append(
        f'<text x="{_MARGIN_LEFT + 18}" y="{legend_y}">all triads (n={report.structural_n})</text>'
    )
    parts.append(
        f'<rect x="{_MARGIN_LEFT + 200}" y="{legend_y - 10}" width="12" height="12" fill="{_PROPAGATING_FILL}"/>'
    )
    parts.append(
        f'<text x="{_MARGIN_LEFT + 218}" y="{legend_y}">propagating triads (n={report.propagating_n})</text>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
