"""Static SVG export of a choropleth layer.

Equirectangular fit-to-bounds projection (adequate at regional extents,
dependency-free), fixed light-to-dark sequential palette, neutral gray for
no-data. Output text is a deterministic function of the inputs.
"""

from __future__ import annotations

from typing import List, Tuple

from .model import DatasetSnapshot
from .views import ChoroplethLayer, format_number

# ColorBrewer-style sequential blues, light to dark.
PALETTE = (
    "#f7fbff",
    "#deebf7",
    "#c6dbef",
    "#9ecae1",
    "#6baed6",
    "#4292c6",
    "#2171b5",
    "#08519c",
    "#08306b",
)
NO_DATA_COLOR = "#cccccc"
_PAD = 10.0
_LEGEND_WIDTH = 170.0


def class_color(class_index: int, k: int) -> str:
    if class_index < 0:
        return NO_DATA_COLOR
    if k <= 1:
        return PALETTE[-1]
    spread = (len(PALETTE) - 1) / (k - 1)
    return PALETTE[min(len(PALETTE) - 1, round(class_index * spread))]


def _geometry_rings(geom: dict) -> List[list]:
    if geom["type"] == "Polygon":
        return list(geom["coordinates"])
    rings: List[list] = []
    for poly in geom["coordinates"]:
        rings.extend(poly)
    return rings


def _bounds(ring_sets: List[List[list]]) -> Tuple[float, float, float, float]:
    lons = [pos[0] for rings in ring_sets for ring in rings for pos in ring]
    lats = [pos[1] for rings in ring_sets for ring in rings for pos in ring]
    return min(lons), min(lats), max(lons), max(lats)


def render_choropleth_svg(
    snapshot: DatasetSnapshot,
    layer: ChoroplethLayer,
    size: Tuple[int, int] = (800, 600),
) -> str:
    """One filled path per mapped site plus a legend block. Sites without a
    geometry are skipped and noted in the SVG metadata.
    """
    width, height = size
    factor = snapshot.factors[layer.factor_id]

    drawable = []
    warnings = []
    for entry in layer.sites:
        geom = snapshot.geometries.get(entry.geometry_ref) if entry.geometry_ref else None
        if geom is None:
            warnings.append(f"no geometry for site {entry.site_id}")
        else:
            drawable.append((entry, _geometry_rings(geom)))

    map_w = width - _LEGEND_WIDTH - 2 * _PAD
    map_h = height - 2 * _PAD
    if drawable:
        min_lon, min_lat, max_lon, max_lat = _bounds([rings for _, rings in drawable])
        dlon = max_lon - min_lon or 1.0
        dlat = max_lat - min_lat or 1.0
        scale = min(map_w / dlon, map_h / dlat)
        off_x = _PAD + (map_w - dlon * scale) / 2
        off_y = _PAD + (map_h - dlat * scale) / 2

        def project(pos) -> Tuple[float, float]:
            x = off_x + (pos[0] - min_lon) * scale
            y = off_y + (max_lat - pos[1]) * scale
            return x, y

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f"<metadata>factor={layer.factor_id} t={layer.t} scheme={layer.scheme} k={layer.k}"
        + "".join(f" warning:{w}" for w in warnings)
        + "</metadata>",
        f'<rect width="{width}" height="{height}" fill="#ffffff"/>',
    ]
    for entry, rings in drawable:
        parts = []
        for ring in rings:
            coords = [project(pos) for pos in ring]
            d = "M " + " L ".join(f"{x:.2f},{y:.2f}" for x, y in coords) + " Z"
            parts.append(d)
        fill = class_color(entry.class_index, layer.k)
        title = entry.name
        if entry.value is not None:
            title += f": {format_number(entry.value)}"
            if factor.unit:
                title += f" {factor.unit}"
        lines.append(
            f'<path d="{" ".join(parts)}" fill="{fill}" stroke="#333333" stroke-width="1" '
            f'data-site="{entry.site_id}"><title>{_escape(title)}</title></path>'
        )

    legend_x = width - _LEGEND_WIDTH
    lines.append(f'<g class="legend" transform="translate({legend_x:.2f},{_PAD:.2f})">')
    lines.append(f'<text x="0" y="12" font-size="12" font-family="sans-serif">{_escape(factor.name)}</text>')
    for j in range(layer.k):
        y = 22 + j * 20
        lines.append(
            f'<rect x="0" y="{y}" width="14" height="14" fill="{class_color(j, layer.k)}" stroke="#333333"/>'
        )
        lines.append(
            f'<text x="20" y="{y + 11}" font-size="11" font-family="sans-serif">{_escape(layer.legend[j])}</text>'
        )
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;").replace('"', "&quot;")
