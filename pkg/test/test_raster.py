import math
import os
import shutil
import tempfile
import unittest

import numpy as np
from scipy import ndimage

from eropy import raster
from eropy.convex import InvalidRadiusError
from eropy.geometry import Similarity
from eropy.raster import RasterSet

def disk(radius, shape=(64, 64), center=(0.0, 0.0), spacing=1.0, policy=raster.OUTSIDE):
	return raster.from_predicate(lambda x, y: (x - center[0]) ** 2 + (y - center[1]) ** 2 <= radius ** 2,
			shape, spacing, border_policy=policy)

def notched(shape=(128, 128)):
	return raster.from_predicate(lambda x, y: (np.abs(x) <= 20) & (np.abs(y) <= 20) & ~((x > 0) & (y > 0)), shape)

class Grids(unittest.TestCase):
	def test_default_origin_centers_window(self):
		rs = RasterSet.empty((4, 6))
		np.testing.assert_allclose(rs.origin, [-2.0, -3.0])

	def test_bad_spacing(self):
		self.assertRaises(ValueError, RasterSet.empty, (4, 4), 0.0)

	def test_too_many_axes(self):
		self.assertRaises(raster.UnsupportedDimensionError, RasterSet.empty, (2, 2, 2, 2))

	def test_bad_policy(self):
		self.assertRaises(ValueError, RasterSet.empty, (4, 4), 1.0, None, "sideways")

	def test_bits_read_only(self):
		rs = disk(3, (8, 8))
		self.assertRaises(ValueError, rs.bits.__setitem__, (0, 0), True)

	def test_border_distance(self):
		rs = RasterSet.empty((5, 5), spacing=0.5)
		self.assertEqual(rs.border_distance()[0, 2], 0.5)
		self.assertEqual(rs.border_distance()[2, 2], 1.5)

	def test_complement_flips_policy(self):
		rs = raster.complement(disk(3, (8, 8)))
		self.assertEqual(rs.border_policy, raster.INSIDE)
		self.assertTrue(raster.complement(rs).equals(disk(3, (8, 8))))

	def test_union_policy(self):
		a = disk(3, (8, 8))
		b = raster.complement(disk(2, (8, 8)))
		self.assertEqual(raster.union(a, b).border_policy, raster.INSIDE)
		self.assertEqual(raster.intersection(a, b).border_policy, raster.OUTSIDE)

	def test_different_windows(self):
		self.assertRaises(ValueError, raster.union, disk(3, (8, 8)), disk(3, (10, 10)))

class Distances(unittest.TestCase):
	def test_matches_scipy(self):
		rng = np.random.default_rng(11)
		for _ in range(5):
			sites = rng.random((24, 17)) < 0.05
			sites[3, 4] = True
			expected = ndimage.distance_transform_edt(~sites) ** 2
			np.testing.assert_allclose(raster.squared_edt(sites), expected, atol=1e-9)

	def test_three_dimensions(self):
		sites = np.zeros((6, 7, 5), dtype=bool)
		sites[1, 2, 3] = sites[5, 0, 0] = True
		expected = ndimage.distance_transform_edt(~sites) ** 2
		np.testing.assert_allclose(raster.squared_edt(sites), expected, atol=1e-9)

	def test_no_sites(self):
		self.assertTrue(np.all(np.isinf(raster.squared_edt(np.zeros((4, 4), dtype=bool)))))

	def test_padded(self):
		squared = raster.squared_edt(np.zeros((5, 5), dtype=bool), pad=True)
		self.assertEqual(squared[0, 0], 1.0)
		self.assertEqual(squared[2, 2], 9.0)

	def test_edt_in_world_units(self):
		field = raster.edt(disk(4, (32, 32), spacing=0.5), raster.SET)
		self.assertEqual(float(field.values[16, 16]), 0.0)
		self.assertRaises(ValueError, raster.edt, disk(4, (8, 8)), "neither")

class Morphology(unittest.TestCase):
	def test_full_window_outside(self):
		full = RasterSet(np.ones((10, 10), dtype=bool))
		self.assertEqual(raster.erode_raster(full, 3.0).count, 36)

	def test_full_window_inside(self):
		full = RasterSet(np.ones((10, 10), dtype=bool), border_policy=raster.INSIDE)
		self.assertEqual(raster.erode_raster(full, 3.0).count, 100)

	def test_cube(self):
		full = RasterSet(np.ones((8, 8, 8), dtype=bool))
		self.assertEqual(raster.erode_raster(full, 2.0).count, 216)

	def test_margin_grows(self):
		rs = raster.expand_raster(raster.erode_raster(disk(10), 2.0), 1.5)
		self.assertEqual(rs.valid_margin, 3.5)

	def test_zero_radius(self):
		rs = disk(5)
		self.assertIs(raster.erode_raster(rs, 0), rs)
		self.assertIs(raster.expand_raster(rs, 0), rs)

	def test_negative_radius(self):
		self.assertRaises(InvalidRadiusError, raster.erode_raster, disk(5), -1.0)
		self.assertRaises(InvalidRadiusError, raster.expand_raster, disk(5), -1.0)

	def test_duality(self):
		for policy in raster.BORDER_POLICIES:
			rs = disk(9, policy=policy)
			dual = raster.complement(raster.expand_raster(raster.complement(rs), 2.5))
			self.assertTrue(np.array_equal(raster.erode_raster(rs, 2.5).bits, dual.bits))

	def test_eroded_disk(self):
		eroded = raster.erode_raster(disk(10), 4.0)
		self.assertLessEqual(raster.hausdorff(eroded, disk(6)), 1.5)

	def test_erosion_is_closed(self):
		eroded = raster.erode_raster(disk(10), 2.5)
		self.assertTrue(raster.erode_raster(eroded, 0).equals(eroded))
		self.assertEqual(raster.erode_raster(eroded, 0).valid_margin, eroded.valid_margin)

	def test_intersection_law(self):
		a = disk(14, center=(-4.0, 0.0))
		b = disk(12, center=(5.0, 3.0))
		for r in (1.0, 2.5, 4.0):
			lhs = raster.erode_raster(raster.intersection(a, b), r)
			rhs = raster.intersection(raster.erode_raster(a, r), raster.erode_raster(b, r))
			self.assertTrue(lhs.equals(rhs))
			self.assertEqual(lhs.valid_margin, rhs.valid_margin)

	def test_commutes_with_grid_translation(self):
		s = Similarity.translation([3.0, -2.0])
		rs = notched((96, 96))
		lhs = raster.erode_raster(raster.resample(rs, s), 3.0)
		rhs = raster.resample(raster.erode_raster(rs, 3.0), s)
		self.assertLessEqual(raster.hausdorff(lhs, rhs), 2.0)

	def test_opening_anti_extensive(self):
		for policy in raster.BORDER_POLICIES:
			rs = raster.from_predicate(lambda x, y: (np.abs(x) <= 20) & ~((x > 0) & (y > 0)), (64, 64),
					border_policy=policy)
			for r in (1.5, 4.0):
				opened = raster.opening(rs, r)
				self.assertFalse((opened.bits & opened.valid_mask() & ~rs.bits).any())
				self.assertEqual(opened.valid_margin, 2 * r)

	def test_semigroup(self):
		rs = disk(12)
		twice = raster.erode_raster(raster.erode_raster(rs, 2.0), 3.0)
		self.assertLessEqual(raster.hausdorff(twice, raster.erode_raster(rs, 5.0)), 1.5)

class BallConvexity(unittest.TestCase):
	def test_disk_reaches_limit(self):
		self.assertEqual(raster.ball_convexity(disk(10), 8.0, slack_pixels=raster.BALL_CONVEXITY_SLACK), 8.0)

	def test_inner_corner(self):
		self.assertLess(raster.ball_convexity(notched(), 16.0, tol=0.5), 8.0)

	def test_limit_near_window(self):
		# openings this large leave no valid pixel, which must not count as preserved
		self.assertLess(raster.ball_convexity(notched(), 32.0, tol=0.5), 8.0)
		with self.assertLogs(raster.logger, "WARNING"):
			self.assertLess(raster.ball_convexity(notched(), 40.0, tol=0.5), 8.0)

	def test_opening_limit(self):
		outside = raster.complement(notched())
		self.assertAlmostEqual(raster.opening_limit(outside), 32.0, places=6)
		eroded = raster.complement(raster.erode_raster(notched(), 4.0))
		self.assertAlmostEqual(raster.opening_limit(eroded), 30.0, places=6)

	def test_per_pixel_by_default(self):
		strict = raster.ball_convexity(notched(), 16.0, tol=0.5)
		loose = raster.ball_convexity(notched(), 16.0, tol=0.5, slack_pixels=raster.BALL_CONVEXITY_SLACK)
		self.assertLessEqual(strict, loose)

	def test_erosion_raises_convexity(self):
		slack = raster.BALL_CONVEXITY_SLACK
		before = raster.ball_convexity(notched(), 24.0, 0.5, slack)
		after = raster.ball_convexity(raster.erode_raster(notched(), 4.0), 24.0, 0.5, slack)
		self.assertLess(before, 24.0)
		self.assertGreaterEqual(after, before + 4.0 - 2.0)

	def test_bad_limit(self):
		self.assertRaises(InvalidRadiusError, raster.ball_convexity, disk(10), 0.0)

class Comparisons(unittest.TestCase):
	def test_self_distance(self):
		self.assertEqual(raster.hausdorff(disk(8), disk(8)), 0.0)

	def test_shift(self):
		shifted = raster.resample(disk(8), Similarity.translation([3.0, 0.0]))
		self.assertTrue(np.array_equal(shifted.bits, disk(8, center=(3.0, 0.0)).bits))
		self.assertEqual(raster.hausdorff(disk(8), shifted), 3.0)

	def test_empty(self):
		self.assertRaises(raster.EmptyInputError, raster.hausdorff, disk(8), RasterSet.empty((64, 64)))

	def test_resample_marks_untrusted_shell(self):
		rs = raster.erode_raster(disk(8), 2.0)
		image = raster.resample(rs, Similarity.homothety([0.0, 0.0], 0.5))
		self.assertGreater(image.valid_margin, 0.0)

	def test_homothety_estimate(self):
		s, residual = raster.estimate_homothety(disk(4, (32, 32)), disk(8, (32, 32)), angles=8)
		self.assertAlmostEqual(s.scale, 2.0, delta=0.1)
		self.assertLessEqual(residual, 2.0)

	def test_spiral_estimate(self):
		a = raster.from_predicate(lambda x, y: ((x >= -20) & (x <= 20) & (y >= -20) & (y <= -8))
				| ((x >= -20) & (x <= -8) & (y >= -20) & (y <= 24)), (128, 128))
		spiral = Similarity.spiral([4.0, -3.0], 1.25, 0.6)
		s, residual = raster.estimate_homothety(a, raster.resample(a, spiral), angles=180)
		self.assertAlmostEqual(s.scale, 1.25, delta=0.03)
		self.assertAlmostEqual(s.angle, 0.6, delta=0.1)
		self.assertLessEqual(residual, 3.0)

class Resilience(unittest.TestCase):
	def test_halfplane_translates(self):
		halfplane = raster.from_predicate(lambda x, y: y <= 0 * x, (64, 64))
		report = raster.verify_resilience_raster(halfplane, 3.0, Similarity.translation([0.0, -3.0]))
		self.assertTrue(report.passed)
		self.assertLessEqual(report.distance_pixels, 1.0)
		self.assertTrue(report.to_json()["passed"])

	def test_identity_fails(self):
		halfplane = raster.from_predicate(lambda x, y: y <= 0 * x, (64, 64))
		report = raster.verify_resilience_raster(halfplane, 6.0, Similarity.identity(2))
		self.assertFalse(report.passed)

	def test_disk_shrinks(self):
		report = raster.verify_resilience_raster(disk(20, (96, 96)), 5.0, Similarity.homothety([0.0, 0.0], 0.75))
		self.assertTrue(report.passed)

	def test_tolerance_below_pixel(self):
		self.assertRaises(ValueError, raster.verify_resilience_raster, disk(8), 1.0, Similarity.identity(2), 0.5)

class Drawing(unittest.TestCase):
	def test_fill_matches_predicate(self):
		filled = raster.fill_disks(RasterSet.empty((32, 32)), [[0.0, 0.0]], [5.0])
		self.assertTrue(np.array_equal(filled.bits, disk(5, (32, 32)).bits))

	def test_fill_many(self):
		centers = np.array([[-8.0, 0.0], [8.0, 0.0]])
		filled = raster.fill_disks(RasterSet.empty((32, 32)), centers, np.array([3.0, 3.0]))
		self.assertEqual(filled.count, 2 * disk(3, (32, 32)).count)

	def test_runs(self):
		bits = np.zeros((4, 3), dtype=bool)
		bits[1:3, 0] = True
		bits[0, 2] = bits[3, 2] = True
		self.assertEqual(raster.boundary_runs(RasterSet(bits)), [(0, 1, 3), (2, 0, 1), (2, 3, 4)])

	def test_centroid(self):
		np.testing.assert_allclose(raster.centroid(disk(6)), [0.0, 0.0], atol=1e-12)
		self.assertRaises(raster.EmptyInputError, raster.centroid, RasterSet.empty((4, 4)))

class Files(unittest.TestCase):
	def setUp(self):
		self.tmp = tempfile.mkdtemp()

	def tearDown(self):
		shutil.rmtree(self.tmp)

	def test_round_trip(self):
		rs = raster.erode_raster(disk(6, (20, 30), spacing=0.25, policy=raster.INSIDE), 0.5)
		path = os.path.join(self.tmp, "set.pgm")
		raster.save(rs, path)
		self.assertTrue(os.path.exists(raster.sidecar_path(path)))
		again = raster.load(path)
		self.assertTrue(again.equals(rs))
		self.assertEqual(again.valid_margin, 0.5)

	def test_missing_sidecar(self):
		path = os.path.join(self.tmp, "set.pgm")
		raster.save(disk(3, (8, 8)), path)
		os.remove(raster.sidecar_path(path))
		again = raster.load(path)
		self.assertEqual(again.spacing, 1.0)
		self.assertTrue(np.array_equal(again.bits, disk(3, (8, 8)).bits))

	def test_not_an_image(self):
		path = os.path.join(self.tmp, "set.pgm")
		with open(path, "w") as f:
			f.write("hello")
		self.assertRaises(raster.RasterFormatError, raster.load, path)

	def test_only_planar(self):
		self.assertRaises(raster.UnsupportedDimensionError, raster.save,
				RasterSet.empty((2, 2, 2)), os.path.join(self.tmp, "cube.pgm"))

if __name__ == "__main__":
	unittest.main()
