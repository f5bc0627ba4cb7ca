# -*- coding: utf-8 -*-
"""
Acceptance suites: property and oracle checks over seeded corpora.

Every suite is a function registered under a short name; run() executes the
suites whose name contains the filter string and collects one CheckResult per
assertion. Golden figures live in MORPHO_DATA_DIR (default ./golden) and must
match byte for byte; a missing golden fails its check unless the run records,
which rewrites every golden from the current output. A grid_divisor above 1
crops the raster suites to smaller windows at the same spacing.

	results = run(name_filter="interval1d", seed=0)
	print(json.dumps(results_json(results, seed=0), indent=1))
	run(name_filter="figures", record=True)
"""

import io
import logging
import math
import os
import tempfile
import time
from collections import OrderedDict
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from eropy import convex, generators, interval1d, raster, render
from eropy.convex import HPolytope
from eropy.geometry import MorphologyError, Similarity, random_similarity
from eropy.interval1d import Interval, IntervalSet1D
from eropy.raster import RasterSet

logger = logging.getLogger(__name__)

DATA_DIR_VARIABLE = "MORPHO_DATA_DIR"
DEFAULT_DATA_DIR = "golden"
FACET_TOL = 1e-8
COMMUTATION_TOL = 1e-9
RASTER_TOL_PIXELS = 2.0


class CheckResult(object):
	""" One assertion of a suite """

	def __init__(self, name: str, passed: bool, detail: str = "") -> None:
		self.name = name
		self.passed = bool(passed)
		self.detail = detail

	def to_json(self) -> Dict[str, Any]:
		return {"name": self.name, "passed": self.passed, "detail": self.detail}

	def __repr__(self) -> str:
		return '<CheckResult %s %s>' % (self.name, "pass" if self.passed else "FAIL")


class SuiteResult(object):
	def __init__(self, name: str, checks: List[CheckResult], seconds: float) -> None:
		self.name = name
		self.checks = checks
		self.seconds = seconds

	@property
	def passed(self) -> bool:
		return bool(self.checks) and all(c.passed for c in self.checks)

	def to_json(self) -> Dict[str, Any]:
		return {"name": self.name, "passed": self.passed, "checks": [c.to_json() for c in self.checks]}

	def __repr__(self) -> str:
		return '<SuiteResult %s %i checks %s>' % (self.name, len(self.checks), "pass" if self.passed else "FAIL")


class Harness(object):
	""" Seeded state shared by the checks of one suite """

	def __init__(self, seed: int = 0, data_dir: Optional[str] = None, record: bool = False,
			grid_divisor: int = 1) -> None:
		if grid_divisor < 1:
			raise ValueError("grid divisor must be at least 1, got %r" % (grid_divisor,))
		self.seed = seed
		self.rng = np.random.default_rng(seed)
		if data_dir is None:
			data_dir = os.environ.get(DATA_DIR_VARIABLE, DEFAULT_DATA_DIR)
		self.data_dir = data_dir
		self.record = record
		self.grid_divisor = grid_divisor
		self.checks = []  # type: List[CheckResult]

	def check(self, name: str, passed: bool, detail: str = "") -> bool:
		self.checks.append(CheckResult(name, passed, detail))
		if not passed:
			logger.warning("check %s failed: %s", name, detail)
		return passed

	def grid(self, n: int) -> int:
		return n // self.grid_divisor

	def window(self, n: int, spacing: float, origin: Optional[Sequence[float]] = None) -> RasterSet:
		""" An n x n window, cropped by the grid divisor around the same center """
		return RasterSet.empty((self.grid(n), self.grid(n)), spacing, origin)

	def golden(self, name: str, data: bytes) -> bool:
		""" Compares data with the stored golden file, or rewrites it when recording """
		path = os.path.join(self.data_dir, name)
		if self.record:
			os.makedirs(self.data_dir, exist_ok=True)
			with open(path, "wb") as f:
				f.write(data)
			logger.info("recorded golden %s", path)
			return self.check("golden %s" % name, True, "recorded")
		if not os.path.exists(path):
			return self.check("golden %s" % name, False, "missing %s, run with --record" % path)
		with open(path, "rb") as f:
			stored = f.read()
		return self.check("golden %s" % name, stored == data,
				"identical" if stored == data else "differs from %s" % path)


SUITES = OrderedDict()  # type: Dict[str, Callable[[Harness], None]]

def suite(name: str) -> Callable:
	def register(func: Callable[[Harness], None]) -> Callable[[Harness], None]:
		SUITES[name] = func
		return func
	return register


# convex suites

def positive_corpus(rng: np.random.Generator) -> List[HPolytope]:
	""" Fifty polytopes with inscribed balls, in the plane and in space """
	corpus = []
	for sides in range(3, 13):
		corpus.append(generators.regular_polygon(sides, rng.uniform(0.5, 3.0), rng.uniform(-2, 2, size=2),
				rng.uniform(0, 2 * math.pi)))
	for _ in range(10):
		a, b = rng.dirichlet([3.0, 3.0, 3.0])[:2] * math.pi
		corpus.append(generators.triangle([a, b, math.pi - a - b], rng.uniform(0.2, 2.0),
				rng.uniform(-2, 2, size=2)))
	for _ in range(15):
		corpus.append(generators.random_tangent_polytope(rng, 2, int(rng.integers(5, 12)),
				rng.uniform(0.5, 2.0), rng.uniform(-2, 2, size=2)))
	for _ in range(15):
		corpus.append(generators.random_tangent_polytope(rng, 3, int(rng.integers(8, 16)),
				rng.uniform(0.5, 2.0), rng.uniform(-2, 2, size=3)))
	return corpus

@suite("polytope-positive")
def check_polytope_positive(h: Harness) -> None:
	failures = []
	worst = 0.0
	corpus = positive_corpus(h.rng)
	for index, p in enumerate(corpus):
		cert = convex.classify(p)
		if cert.kind != convex.KIND_DECREASING:
			failures.append("#%i classified %s" % (index, cert.kind))
			continue
		for fraction in (0.1, 0.5, 0.9):
			r = fraction * cert.inscribed.radius
			s = convex.predicted_sigma(cert, r)
			residual = convex.facet_residual(convex.erode_polytope(p, r), convex.apply_similarity(p, s))
			worst = max(worst, residual)
			if residual > FACET_TOL:
				failures.append("#%i r=%gR residual %g" % (index, fraction, residual))
	h.check("%i inscribed-ball polytopes map onto their erosions" % len(corpus), not failures,
			"; ".join(failures) or "worst residual %.3g" % worst)

def _chebyshev_family(p: HPolytope, r: float) -> Similarity:
	""" The homothety a decreasing certificate would predict, centered on the Chebyshev ball """
	ball = convex.chebyshev_ball(p)
	return Similarity.homothety(ball.center, (ball.radius - r) / ball.radius)

@suite("polytope-negative")
def check_polytope_negative(h: Harness) -> None:
	corpus = [generators.box_polytope(1.0, 2.0)]
	for index in range(20):
		corpus.append(generators.random_polytope(h.rng, 2 + index % 2, 6 + index % 4))
	failures = []
	for index, p in enumerate(corpus):
		kind = convex.classify(p).kind
		if kind != convex.KIND_NONE:
			failures.append("#%i classified %s" % (index, kind))
		for r in (0.1, 0.3):
			try:
				similar = convex.verify_similarity(p, r, _chebyshev_family(p, r))
			except convex.EmptyResultError:
				similar = False
			if similar:
				failures.append("#%i erosion by %g matched a homothety" % (index, r))
	h.check("rectangle and %i random polytopes are not resilient" % (len(corpus) - 1), not failures,
			"; ".join(failures))

@suite("tent")
def check_tent(h: Harness) -> None:
	x1, x2, x3 = generators.tent_sequence(0.4, 0.7)
	h.check("X1 decreasing", convex.classify(x1).kind == convex.KIND_DECREASING)
	h.check("X2 none", convex.classify(x2).kind == convex.KIND_NONE)
	cert = convex.classify(x3)
	passed = cert.kind == convex.KIND_INCREASING
	detail = cert.kind
	if passed:
		p = convex.reduce(x3)
		ball = cert.exscribed
		residual = float(np.max(np.abs(p.normals @ ball.center - ball.radius - p.offsets)))
		passed = residual <= FACET_TOL
		detail = "exscribed residual %.3g" % residual
	h.check("X3 increasing", passed, detail)
	x4 = generators.tent(0.5, 0.5, equal=True)
	cert = convex.classify(x4)
	passed = cert.kind == convex.KIND_ISOMETRIC
	detail = cert.kind
	if passed:
		p = convex.reduce(x4)
		residual = float(np.max(np.abs(p.normals @ cert.translation + 1.0)))
		passed = residual <= FACET_TOL
		detail = "translation residual %.3g" % residual
	h.check("X4 isometric", passed, detail)


# exact 1-D suite

@suite("interval1d")
def check_interval1d(h: Harness) -> None:
	report = interval1d.verify_example1(3)
	for c in report.checks:
		if c.required:
			h.check(c.name, c.passed, "%i mismatched endpoints" % len(c.mismatches))
		else:
			logger.info("%s (informational): %s", c.name, "holds" if c.passed else "fails")
	for rho, scale in interval1d.discreteness_evidence(3, (1,)):
		h.check("e%s(X) is no scaled copy of X" % rho, scale is None,
				"none found" if scale is None else "scale %s" % scale)


@suite("similarity-dimension")
def check_similarity_dimension(h: Harness) -> None:
	for ratios, expected in (([0.5] * 3, 1.5849625007), ([1.0 / 3] * 4, 1.2618595071)):
		value = generators.similarity_dimension(ratios)
		h.check("dimension of %s" % ratios, abs(value - expected) <= 1e-9, "%.10f" % value)


# raster suites

def brute_force_squared_edt(sites: np.ndarray) -> np.ndarray:
	""" All-pairs squared distance from each pixel to the nearest site """
	points = np.indices(sites.shape).reshape(sites.ndim, -1).T
	chosen = points[sites.ravel()]
	best = np.full(points.shape[0], np.inf)
	for start in range(0, chosen.shape[0], 256):
		block = chosen[start:start + 256]
		d = ((points[:, np.newaxis, :] - block[np.newaxis, :, :]) ** 2).sum(axis=2)
		best = np.minimum(best, d.min(axis=1))
	return best.reshape(sites.shape)

@suite("edt")
def check_edt(h: Harness) -> None:
	mismatched = []
	for index in range(20):
		sites = h.rng.random((64, 64)) < h.rng.uniform(0.002, 0.3)
		sites[tuple(h.rng.integers(0, 64, size=2))] = True
		if not np.array_equal(raster.squared_edt(sites), brute_force_squared_edt(sites)):
			mismatched.append(index)
	h.check("20 random grids match the all-pairs oracle", not mismatched, "mismatched %s" % mismatched)

def _nonconvex_rasters(rng: np.random.Generator, window: RasterSet, size: float = 1.0) -> List[RasterSet]:
	""" L-shapes and bitten disks, lengths multiplied by `size` """
	shapes = []
	for _ in range(5):
		a, w = size * rng.uniform(40, 80), size * rng.uniform(20, 35)
		dx, dy = size * rng.uniform(-8, 8, size=2)
		shapes.append(lambda x, y, a=a, w=w, dx=dx, dy=dy:
				((x - dx >= -a) & (x - dx <= a) & (y - dy >= -a) & (y - dy <= -a + w))
				| ((x - dx >= -a) & (x - dx <= -a + w) & (y - dy >= -a) & (y - dy <= a)))
	for _ in range(5):
		big, bite = size * rng.uniform(50, 70), size * rng.uniform(20, 35)
		angle = rng.uniform(0, 2 * math.pi)
		bx, by = (big - 0.5 * bite) * math.cos(angle), (big - 0.5 * bite) * math.sin(angle)
		shapes.append(lambda x, y, big=big, bite=bite, bx=bx, by=by:
				(x ** 2 + y ** 2 <= big ** 2) & ((x - bx) ** 2 + (y - by) ** 2 > bite ** 2))
	return [window.with_bits(np.broadcast_to(f(*np.ix_(*window.axes())), window.shape)) for f in shapes]

def _convex_rasters(rng: np.random.Generator, window: RasterSet, size: float = 1.0) -> List[RasterSet]:
	shapes = []
	for _ in range(5):
		wx, wy = size * rng.uniform(20, 60, size=2)
		cx, cy = size * rng.uniform(-20, 20, size=2)
		shapes.append(lambda x, y, wx=wx, wy=wy, cx=cx, cy=cy: (abs(x - cx) <= wx) & (abs(y - cy) <= wy))
	for _ in range(5):
		radius = size * rng.uniform(30, 70)
		cx, cy = size * rng.uniform(-20, 20, size=2)
		shapes.append(lambda x, y, radius=radius, cx=cx, cy=cy: (x - cx) ** 2 + (y - cy) ** 2 <= radius ** 2)
	return [window.with_bits(np.broadcast_to(f(*np.ix_(*window.axes())), window.shape)) for f in shapes]

@suite("ball-convexity")
def check_ball_convexity(h: Harness) -> None:
	window = h.window(512, 1.0)
	size = 1.0 / h.grid_divisor
	r, r_max, tol = 8.0 * size, 64.0 * size, 0.5
	slack = raster.BALL_CONVEXITY_SLACK
	failures = []
	for index, rs in enumerate(_nonconvex_rasters(h.rng, window, size)):
		before = raster.ball_convexity(rs, r_max, tol, slack)
		after = raster.ball_convexity(raster.erode_raster(rs, r), r_max, tol, slack)
		logger.debug("nonconvex #%i: bc %g, after erosion %g", index, before, after)
		if before >= r_max or after < before + r - 2 * window.spacing:
			failures.append("#%i bc %g -> %g" % (index, before, after))
	h.check("erosion by %g raises ball convexity on 10 nonconvex sets" % r, not failures, "; ".join(failures))
	failures = []
	for index, rs in enumerate(_convex_rasters(h.rng, window, size)):
		value = raster.ball_convexity(rs, r_max, tol, slack)
		if value < r_max:
			failures.append("#%i bc %g" % (index, value))
	h.check("10 convex sets reach r_max=%g" % r_max, not failures, "; ".join(failures))

def _raster_check(h: Harness, name: str, rs: RasterSet, r: float, s: Similarity) -> None:
	report = raster.verify_resilience_raster(rs, r, s, RASTER_TOL_PIXELS)
	h.check(name, report.passed, "%.2f px on area %g" % (report.distance_pixels, report.valid_area))

@suite("si-to-resilient")
def check_si_to_resilient(h: Harness) -> None:
	spacing = 0.125
	square = raster.from_predicate(lambda x, y: (x >= 1) & (x <= 2) & (y >= 1) & (y <= 2),
			(h.grid(1024), h.grid(1024)), spacing)
	s = Similarity.homothety(np.zeros(2), 2.0)
	w = generators.scale_invariant_extension(square, s, (-6, 4))
	r_prime = 5 * spacing
	x = generators.resilient_from_si(w, s, r_prime)
	_raster_check(h, "square extension eroded by 5h", x, r_prime * (s.scale - 1), s)

	window = h.window(1024, 0.02)
	s1 = generators.spiral_S1(generators.SpiralParams(), window)
	for r in (0.1, 0.3, 0.7):
		_raster_check(h, "spiral r=%g" % r, s1, r, generators.spiral_similarity(r))

@suite("resilient-to-si")
def check_resilient_to_si(h: Harness) -> None:
	window = h.window(1024, 0.0625)
	s = generators.discrete_spiral_similarity()
	r_prime = 8 * window.spacing
	q = generators.discrete_spiral_Q(window, s, r=r_prime)
	_raster_check(h, "Q resilient by r'(scale - 1)", q, r_prime * (s.scale - 1), s)
	w = generators.si_from_resilient(q, s, 8)
	tolerance = RASTER_TOL_PIXELS * window.spacing
	distance = raster.hausdorff(raster.resample(w, s), w)
	h.check("s(W) = W", distance <= tolerance, "%.2f px" % (distance / window.spacing))
	distance = raster.hausdorff(raster.erode_raster(w, r_prime), q)
	h.check("erosion of W gives Q back", distance <= tolerance, "%.2f px" % (distance / window.spacing))


# structural identities

@suite("commutation")
def check_commutation(h: Harness) -> None:
	failures = []
	worst = 0.0
	for index in range(100):
		dimension = 2 + index % 2
		if index % 4 < 2:
			p = generators.random_tangent_polytope(h.rng, dimension, 5 + 3 * (dimension - 2) + int(h.rng.integers(0, 4)))
		else:
			p = generators.random_polytope(h.rng, dimension, 6 + int(h.rng.integers(0, 4)))
		s = random_similarity(h.rng, dimension)
		r = h.rng.uniform(0.05, 0.45) * convex.chebyshev_ball(p).radius
		lhs = convex.apply_similarity(convex.erode_polytope(p, r), s)
		rhs = convex.erode_polytope(convex.apply_similarity(p, s), s.scale * r)
		residual = convex.facet_residual(lhs, rhs)
		scale = max(1.0, float(np.max(np.abs(rhs.offsets))))
		worst = max(worst, residual / scale)
		if residual > COMMUTATION_TOL * scale:
			failures.append("#%i residual %g" % (index, residual))
	h.check("100 similarities commute with erosion", not failures, "; ".join(failures) or "worst %.3g" % worst)

def random_interval_set(rng: np.random.Generator) -> IntervalSet1D:
	intervals = []
	for _ in range(int(rng.integers(0, 6))):
		lo = Fraction(int(rng.integers(-60, 60)), int(rng.integers(1, 5)))
		hi = lo + Fraction(int(rng.integers(0, 30)), int(rng.integers(1, 5)))
		lo_closed, hi_closed = bool(rng.integers(0, 2)), bool(rng.integers(0, 2))
		if lo == hi:
			lo_closed = hi_closed = True
		roll = rng.random()
		intervals.append(Interval(None if roll < 0.1 else lo, None if roll > 0.9 else hi, lo_closed, hi_closed))
	return IntervalSet1D(intervals)

@suite("duality")
def check_duality(h: Harness) -> None:
	failures = []
	for index in range(50):
		x = random_interval_set(h.rng)
		r = Fraction(int(h.rng.integers(1, 20)), int(h.rng.integers(1, 8)))
		eroded = interval1d.erode1d(x, r)
		dual = interval1d.complement(interval1d.expand1d(interval1d.complement(x), r))
		if eroded != dual:
			failures.append("#%i %r" % (index, x))
	h.check("50 interval sets: e_r(X) = E_r(X^C)^C", not failures, "; ".join(failures))
	failures = []
	for index in range(50):
		policy = raster.INSIDE if h.rng.random() < 0.5 else raster.OUTSIDE
		rs = RasterSet(h.rng.random((64, 64)) < h.rng.uniform(0.05, 0.95), border_policy=policy)
		r = float(h.rng.uniform(0.5, 6.0))
		eroded = raster.erode_raster(rs, r)
		dual = raster.complement(raster.expand_raster(raster.complement(rs), r))
		if not np.array_equal(eroded.bits, dual.bits):
			failures.append("#%i r=%.3g" % (index, r))
	h.check("50 rasters: e_r(X) = E_r(X^C)^C per pixel", not failures, "; ".join(failures))


# figures

def figure_square() -> render.Figure:
	return render.render_polytope(convex.box([0.0, 0.0], [1.0, 1.0]), (0.15, 0.3))

def figure_hexagon() -> render.Figure:
	return render.render_polytope(generators.regular_polygon(6, 1.0), (0.3,), inscribed=True)

def sierpinski_window() -> RasterSet:
	return RasterSet.empty((256, 256), 1.0 / 32, (-0.25, -0.25))

def figure_sierpinski() -> RasterSet:
	return generators.scale_invariant_extension(generators.sierpinski_ifs(), None, (0, 3), sierpinski_window())

def figure_koch() -> RasterSet:
	window = RasterSet.empty((256, 256), 1.0 / 32)
	return generators.koch_resilient(window, 8 * window.spacing, (0, 3))

def pgm_bytes(rs: RasterSet) -> bytes:
	with tempfile.TemporaryDirectory() as directory:
		path = os.path.join(directory, "figure.pgm")
		raster.save(rs, path)
		with open(path, "rb") as f:
			return f.read()

@suite("figures")
def check_figures(h: Harness) -> None:
	h.golden("square_layers.svg", figure_square().tostring().encode("utf-8"))
	h.golden("hexagon_inscribed.svg", figure_hexagon().tostring().encode("utf-8"))
	sierpinski = figure_sierpinski()
	h.golden("sierpinski_si.svg", render.render_raster(sierpinski).tostring().encode("utf-8"))
	h.golden("sierpinski_si.pgm", pgm_bytes(sierpinski))
	koch = figure_koch()
	r = 16 * koch.spacing
	h.golden("koch_resilient.svg", render.render_raster(koch, (r, 2 * r)).tostring().encode("utf-8"))


def run(name_filter: Optional[str] = None, seed: int = 0, data_dir: Optional[str] = None, record: bool = False,
		grid_divisor: int = 1) -> List[SuiteResult]:
	""" Runs every suite whose name contains name_filter """
	results = []
	for name, func in SUITES.items():
		if name_filter and name_filter not in name:
			continue
		harness = Harness(seed, data_dir, record, grid_divisor)
		start = time.perf_counter()
		try:
			func(harness)
		except (MorphologyError, ValueError, IOError) as err:
			harness.check("%s completes" % name, False, "%s: %s" % (type(err).__name__, err))
		result = SuiteResult(name, harness.checks, time.perf_counter() - start)
		logger.info("%r in %.1fs", result, result.seconds)
		results.append(result)
	return results

def results_json(results: List[SuiteResult], seed: int = 0) -> Dict[str, Any]:
	return {"format": 1, "seed": seed, "passed": bool(results) and all(r.passed for r in results),
			"suites": [r.to_json() for r in results]}

def summary(results: List[SuiteResult]) -> str:
	out = io.StringIO()
	for result in results:
		out.write("%-20s %s\n" % (result.name, "pass" if result.passed else "FAIL"))
		for c in result.checks:
			if not c.passed:
				out.write("    %s: %s\n" % (c.name, c.detail))
	return out.getvalue()
