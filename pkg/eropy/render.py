# -*- coding: utf-8 -*-
"""
Deterministic SVG figures of planar sets and their erosions.

Each layer becomes one <g id="layer-i"> group holding a single path, drawn
from the original set (darkest gray) to the last erosion (white), so the
gray that stays visible is what the erosions removed. Coordinates are world
units with y pointing up; numbers are written with fixed precision so that
two runs give byte-identical files.
"""

import logging
import xml.etree.ElementTree as ET
from typing import List, Optional, Sequence, TextIO, Tuple

import numpy as np

from eropy import convex, raster
from eropy.convex import HPolytope
from eropy.geometry import Ball, check_dimension
from eropy.raster import RasterSet

logger = logging.getLogger(__name__)

SVG_NS = "http://www.w3.org/2000/svg"
DEFAULT_SIZE = 512
DARKEST = 0x80
PRECISION = 6

View = Tuple[float, float, float, float]


def number(value: float) -> str:
	""" Fixed-precision decimal without trailing zeros or negative zero """
	text = ("%.*f" % (PRECISION, value)).rstrip("0").rstrip(".")
	return "0" if text in ("-0", "") else text

def shades(count: int) -> List[str]:
	""" Gray levels from DARKEST to white """
	if count == 1:
		return ["#ffffff"]
	levels = [int(round(DARKEST + (0xff - DARKEST) * i / float(count - 1))) for i in range(count)]
	return ["#%02x%02x%02x" % (v, v, v) for v in levels]


class Figure(object):
	""" SVG document over a world-coordinate view box """

	def __init__(self, view: View, size: int = DEFAULT_SIZE) -> None:
		xmin, ymin, xmax, ymax = view
		if not (xmax > xmin and ymax > ymin):
			raise ValueError("empty view box %r" % (view,))
		self.view = view
		width = xmax - xmin
		height = ymax - ymin
		self.root = ET.Element("svg", xmlns=SVG_NS, version="1.1",
				width=str(size), height=str(int(round(size * height / width))),
				viewBox="%s %s %s %s" % (number(xmin), number(-ymax), number(width), number(height)))
		self.groups = 0
		self.circles = 0

	def group(self, name: Optional[str] = None) -> ET.Element:
		if name is None:
			name = "layer-%i" % self.groups
			self.groups += 1
		return ET.SubElement(self.root, "g", id=name)

	def path(self, parent: ET.Element, d: str, fill: str) -> Optional[ET.Element]:
		if not d:
			return None
		return ET.SubElement(parent, "path", d=d, fill=fill, stroke="#000000",
				**{"stroke-width": number(self.stroke()), "fill-rule": "evenodd"})

	def stroke(self) -> float:
		return (self.view[2] - self.view[0]) / 1000.0

	def circle(self, ball: Ball) -> ET.Element:
		parent = self.group("inscribed-%i" % self.circles if self.circles else "inscribed")
		self.circles += 1
		return ET.SubElement(parent, "circle", cx=number(ball.center[0]), cy=number(-ball.center[1]),
				r=number(ball.radius), fill="none", stroke="#000000",
				**{"stroke-width": number(self.stroke()), "stroke-dasharray": number(4 * self.stroke())})

	def tostring(self) -> str:
		return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(self.root, encoding="unicode") + "\n"

	def write(self, fileobj: TextIO) -> None:
		fileobj.write(self.tostring())


def polygon_path(vertices: np.ndarray) -> str:
	if not len(vertices):
		return ""
	points = ["%s %s" % (number(x), number(-y)) for x, y in vertices]
	return "M" + "L".join(points) + "Z"

def runs_path(rs: RasterSet) -> str:
	""" One rectangle per run of set pixels """
	h = rs.spacing
	parts = []
	for row, first, stop in raster.boundary_runs(rs):
		x = rs.origin[0] + (first - 0.5) * h
		y = rs.origin[1] + (row + 0.5) * h
		parts.append("M%s %sh%sv%sh%sZ" % (number(x), number(-y), number((stop - first) * h), number(h),
				number(-(stop - first) * h)))
	return "".join(parts)

def polytope_view(p: HPolytope, margin: float = 0.1) -> View:
	""" View box around a bounded planar polytope """
	corners = convex.vertices_2d(p, 1e6)
	lower, upper = corners.min(axis=0), corners.max(axis=0)
	pad = margin * float(np.max(upper - lower))
	return (lower[0] - pad, lower[1] - pad, upper[0] + pad, upper[1] + pad)

def raster_view(rs: RasterSet) -> View:
	half = rs.spacing / 2.0
	upper = rs.origin + (np.array(rs.shape) - 1) * rs.spacing
	return (rs.origin[0] - half, rs.origin[1] - half, upper[0] + half, upper[1] + half)

def _clip_bound(view: View) -> float:
	return float(np.max(np.abs(view))) * 2.0 + 1.0

def draw_polytope(figure: Figure, p: HPolytope, radii: Sequence[float] = (), inscribed: bool = False) -> None:
	""" Adds p, its erosions by each radius, and optionally its inscribed circle """
	check_dimension(2, p.dimension, "polytope")
	layers = [p]
	for r in radii:
		try:
			layers.append(convex.erode_polytope(p, r))
		except convex.EmptyResultError:
			logger.warning("erosion by %g is empty, layer skipped", r)
	bound = _clip_bound(figure.view)
	for polytope, fill in zip(layers, shades(len(layers))):
		figure.path(figure.group(), polygon_path(convex.vertices_2d(polytope, bound)), fill)
	if inscribed:
		ball = convex.inscribed_ball(p)
		if ball is None:
			logger.warning("%r has no inscribed ball to draw", p)
		else:
			figure.circle(ball)

def draw_raster(figure: Figure, rs: RasterSet, radii: Sequence[float] = ()) -> None:
	if rs.dimension != 2:
		raise raster.UnsupportedDimensionError("only planar rasters can be rendered")
	layers = [rs] + [raster.erode_raster(rs, r) for r in radii]
	for layer, fill in zip(layers, shades(len(layers))):
		figure.path(figure.group(), runs_path(layer), fill)

def union_view(views: Sequence[View]) -> View:
	return (min(v[0] for v in views), min(v[1] for v in views), max(v[2] for v in views), max(v[3] for v in views))

def render_polytope(p: HPolytope, radii: Sequence[float] = (), inscribed: bool = False,
		view: Optional[View] = None, size: int = DEFAULT_SIZE) -> Figure:
	check_dimension(2, p.dimension, "polytope")
	figure = Figure(polytope_view(p) if view is None else view, size)
	draw_polytope(figure, p, radii, inscribed)
	return figure

def render_raster(rs: RasterSet, radii: Sequence[float] = (), view: Optional[View] = None,
		size: int = DEFAULT_SIZE) -> Figure:
	if rs.dimension != 2:
		raise raster.UnsupportedDimensionError("only planar rasters can be rendered")
	figure = Figure(raster_view(rs) if view is None else view, size)
	draw_raster(figure, rs, radii)
	return figure
