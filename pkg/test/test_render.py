import io
import unittest
import xml.etree.ElementTree as ET

import numpy as np

from eropy import convex, generators, raster, render
from eropy.raster import RasterSet

def square():
	return convex.box([0.0, 0.0], [1.0, 1.0])

class Numbers(unittest.TestCase):
	def test_trailing_zeros(self):
		self.assertEqual(render.number(2.0), "2")
		self.assertEqual(render.number(1.5), "1.5")
		self.assertEqual(render.number(0.0), "0")

	def test_negative_zero(self):
		self.assertEqual(render.number(-0.0), "0")
		self.assertEqual(render.number(-1e-9), "0")

	def test_precision(self):
		self.assertEqual(render.number(1.0 / 3.0), "0.333333")

	def test_shades(self):
		self.assertEqual(render.shades(1), ["#ffffff"])
		self.assertEqual(render.shades(3), ["#808080", "#c0c0c0", "#ffffff"])

class Paths(unittest.TestCase):
	def test_polygon(self):
		vertices = convex.vertices_2d(square(), 10.0)
		self.assertEqual(render.polygon_path(vertices), "M0 0L1 0L1 -1L0 -1Z")

	def test_empty_polygon(self):
		self.assertEqual(render.polygon_path(np.zeros((0, 2))), "")

	def test_runs(self):
		bits = np.zeros((4, 3), dtype=bool)
		bits[1:3, 0] = True
		self.assertEqual(render.runs_path(RasterSet(bits)), "M-1.5 0.5h2v1h-2Z")

	def test_views(self):
		self.assertEqual(render.polytope_view(square(), margin=0.0), (0.0, 0.0, 1.0, 1.0))
		self.assertEqual(render.raster_view(RasterSet.empty((4, 2))), (-2.5, -1.5, 1.5, 0.5))
		self.assertEqual(render.union_view([(0, 0, 1, 1), (-1, 0.5, 0.5, 2)]), (-1, 0, 1, 2))

class Figures(unittest.TestCase):
	def test_layers(self):
		svg = render.render_polytope(square(), [0.1, 0.2], inscribed=True).tostring()
		self.assertTrue(svg.startswith('<?xml version="1.0" encoding="UTF-8"?>\n<svg'))
		root = ET.fromstring(svg.split("\n", 1)[1])
		ids = [g.get("id") for g in root]
		self.assertEqual(ids, ["layer-0", "layer-1", "layer-2", "inscribed"])
		self.assertEqual(root.get("viewBox"), "-0.1 -1.1 1.2 1.2")

	def test_deterministic(self):
		hexagon = generators.regular_polygon(6, 1.0)
		first = render.render_polytope(hexagon, [0.3], inscribed=True).tostring()
		self.assertEqual(first, render.render_polytope(hexagon, [0.3], inscribed=True).tostring())

	def test_empty_erosion_skipped(self):
		svg = render.render_polytope(square(), [0.25, 0.6]).tostring()
		self.assertIn('id="layer-1"', svg)
		self.assertNotIn('id="layer-2"', svg)

	def test_no_inscribed_ball(self):
		svg = render.render_polytope(generators.box_polytope(1.0, 2.0), inscribed=True).tostring()
		self.assertNotIn("<circle", svg)

	def test_second_circle(self):
		figure = render.Figure((0.0, 0.0, 1.0, 1.0))
		figure.circle(convex.inscribed_ball(square()))
		figure.circle(convex.inscribed_ball(square()))
		ids = [g.get("id") for g in figure.root]
		self.assertEqual(ids, ["inscribed", "inscribed-1"])

	def test_raster(self):
		rs = raster.from_predicate(lambda x, y: x * x + y * y <= 36, (32, 32))
		figure = render.render_raster(rs, [2.0])
		self.assertEqual([g.get("id") for g in figure.root], ["layer-0", "layer-1"])
		buf = io.StringIO()
		figure.write(buf)
		self.assertEqual(buf.getvalue(), figure.tostring())

	def test_planar_only(self):
		self.assertRaises(ValueError, render.render_polytope, generators.tent(0.4, 0.7))
		self.assertRaises(raster.UnsupportedDimensionError, render.render_raster, RasterSet.empty((4, 4, 4)))

	def test_empty_view(self):
		self.assertRaises(ValueError, render.Figure, (0.0, 0.0, 0.0, 1.0))

if __name__ == "__main__":
	unittest.main()
