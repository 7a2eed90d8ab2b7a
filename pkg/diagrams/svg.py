"""
SVG rendering of PD codes built with a stored layout.
"""
import logging
from typing import List, Optional, Sequence

import svgwrite
from django.conf import settings

from core.exceptions import InvalidInputError

from .models import PDCode, Point

logger = logging.getLogger(__name__)

MARGIN = 24.0
DEFAULT_PALETTE = ('#1f77b4', '#d62728', '#2ca02c', '#9467bd', '#ff7f0e', '#8c564b', '#e377c2', '#17becf')


def _path_data(points: List[Point]) -> str:
    head, *tail = points
    parts = [f"M {head[0]:.2f},{head[1]:.2f}"]
    parts.extend(f"L {x:.2f},{y:.2f}" for x, y in tail)
    parts.append('Z')
    return ' '.join(parts)


def render_svg(pd: PDCode, scale: Optional[float] = None, stroke: Optional[float] = None,
               palette: Optional[Sequence[str]] = None) -> str:
    """
    One closed path per component, one 'crossing-gap' group per crossing
    (a white halo under the over strand), dashed circles for annotations.
    """
    if pd.layout is None:
        raise InvalidInputError("PD code has no stored embedding data; build it with a diagram constructor")
    scale = getattr(settings, 'CHAINMAIL_SVG_SCALE', 160.0) if scale is None else scale
    stroke = getattr(settings, 'CHAINMAIL_SVG_STROKE', 3.0) if stroke is None else stroke
    palette = list(palette or getattr(settings, 'CHAINMAIL_SVG_PALETTE', DEFAULT_PALETTE)) or list(DEFAULT_PALETTE)
    layout = pd.layout

    points = layout.all_points() or [(0.0, 0.0)]
    min_x = min(p[0] for p in points)
    max_x = max(p[0] for p in points)
    min_y = min(p[1] for p in points)
    max_y = max(p[1] for p in points)
    width = (max_x - min_x) * scale + 2 * MARGIN
    height = (max_y - min_y) * scale + 2 * MARGIN

    def place(point: Point) -> Point:
        return (round((point[0] - min_x) * scale + MARGIN, 2), round((max_y - point[1]) * scale + MARGIN, 2))

    drawing = svgwrite.Drawing(size=(f"{width:.2f}", f"{height:.2f}"), profile='full')
    drawing.update({'viewBox': f"0 0 {width:.2f} {height:.2f}"})

    owner = pd.component_of_arc()
    for number, component in enumerate(pd.components):
        colour = palette[number % len(palette)]
        if component.id in layout.unknots:
            x, y, r = layout.unknots[component.id]
            cx, cy = place((x, y))
            radius = r * scale
            outline = (f"M {cx - radius:.2f},{cy:.2f} a {radius:.2f},{radius:.2f} 0 1,0 {2 * radius:.2f},0 "
                       f"a {radius:.2f},{radius:.2f} 0 1,0 {-2 * radius:.2f},0 Z")
        else:
            trace: List[Point] = []
            for arc in component.arcs:
                trace.extend(place(p) for p in layout.arc_points.get(arc, [])[:-1])
            if not trace:
                continue
            outline = _path_data(trace)
        path = drawing.add(drawing.path(d=outline, fill='none', class_='component'))
        path.stroke(colour, width=stroke, linecap='round', linejoin='round')

    for index, crossing in enumerate(pd.crossings):
        centre = layout.crossing_points[index]
        dx, dy = layout.over_directions[index]
        a = place((centre[0] - layout.gap * dx, centre[1] - layout.gap * dy))
        b = place((centre[0] + layout.gap * dx, centre[1] + layout.gap * dy))
        colour = palette[owner[crossing.over_in] % len(palette)]
        gap = drawing.add(drawing.g(class_='crossing-gap'))
        halo = gap.add(drawing.line(start=a, end=b))
        halo.stroke('white', width=stroke * 3, linecap='butt')
        over = gap.add(drawing.line(start=a, end=b))
        over.stroke(colour, width=stroke, linecap='round')

    for note in layout.annotations:
        cx, cy = place(note.center)
        ring = drawing.add(drawing.circle(center=(cx, cy), r=round(note.radius * scale, 2), fill='none',
                                          class_='crossing-loop'))
        ring.stroke('#555555', width=max(stroke / 2, 1.0))
        ring.dasharray([4, 3])
        drawing.add(drawing.text(note.label, insert=(round(cx + note.radius * scale + 4, 2), cy),
                                 font_size=12, font_family='sans-serif', fill='#333333'))

    logger.debug(f"rendered {len(pd.components)} components, {pd.crossing_count} crossings")
    return drawing.tostring()
