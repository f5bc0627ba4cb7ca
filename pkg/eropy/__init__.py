# -*- coding: utf-8 -*-
"""
eropy: sets that stay similar to themselves under erosion.

Eroding a set X by r keeps the points at distance at least r from its
complement. Some sets come back as a similar copy s(X) of themselves. This
package recognizes such sets, builds them and checks them.

Convex polytopes are handled exactly:

	from eropy import convex, generators

	hexagon = generators.regular_polygon(6, 1.0)
	cert = convex.classify(hexagon)            # kind "decreasing", inscribed ball
	s = convex.predicted_sigma(cert, 0.2)      # homothety about the ball center
	convex.verify_similarity(hexagon, 0.2, s)  # True

One-dimensional sets with rational endpoints are handled exactly too:

	from eropy import interval1d

	report = interval1d.verify_example1(3)     # e_2(X) = 7 X on the window
	report.passed

Curved, fractal and unbounded sets live on grids:

	from eropy import raster

	window = raster.RasterSet.empty((1024, 1024), spacing=0.02)
	spiral = generators.spiral_S1(generators.SpiralParams(), window)
	raster.verify_resilience_raster(spiral, 0.3, generators.spiral_similarity(0.3)).passed

Errors derive from geometry.MorphologyError. The `eropy` command wraps the
same operations (generate, analyze, verify, render, acceptance).
"""

from eropy.geometry import Ball, DimensionMismatchError, HalfSpace, MorphologyError, Similarity
from eropy.convex import HPolytope, ResilienceCertificate, classify, erode_polytope, predicted_sigma, verify_similarity
from eropy.interval1d import Interval, IntervalSet1D, erode1d, expand1d
from eropy.raster import RasterSet, erode_raster, expand_raster, verify_resilience_raster

__version__ = "1.0.0"

__all__ = [
	"Ball", "DimensionMismatchError", "HalfSpace", "MorphologyError", "Similarity",
	"HPolytope", "ResilienceCertificate", "classify", "erode_polytope", "predicted_sigma", "verify_similarity",
	"Interval", "IntervalSet1D", "erode1d", "expand1d",
	"RasterSet", "erode_raster", "expand_raster", "verify_resilience_raster",
]
