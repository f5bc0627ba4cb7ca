# -*- coding: utf-8 -*-
"""
Constructors for the resilient example sets and for the correspondence
between resilient and scale-invariant sets.

Polytopes (regular polygons, triangles, the tent family) come back as
HPolytope values; everything curved, fractal or unbounded is rendered into
a caller-supplied RasterSet window:

	window = raster.RasterSet.empty((1024, 1024), spacing=0.02, border_policy=raster.INSIDE)
	s1 = spiral_S1(SpiralParams(), window)
	report = raster.verify_resilience_raster(s1, 0.3, spiral_similarity(0.3))

A scale-invariant set W (s(W) = W with scale > 1) eroded by r' is resilient
to erosion by r'(scale - 1); conversely the union of the shrunk copies
s^-k(X) of a resilient X is scale-invariant. si_from_resilient and
resilient_from_si realize the two directions on grids.
"""

import logging
import math
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import ndimage, optimize

from eropy import convex, interval1d, raster
from eropy.convex import HPolytope
from eropy.geometry import HalfSpace, MorphologyError, Similarity, as_vec, check_dimension, compose, rotation_2d
from eropy.raster import RasterSet

logger = logging.getLogger(__name__)

SPIRAL_A = 1.0
SPIRAL_B = 0.15
DISCRETE_SPIRAL_SCALE = 1.3
DISCRETE_SPIRAL_ANGLE = 1.0
DISCRETE_SPIRAL_RECT = ((4.0, -6.0), (16.0, 6.0))
TENT_GAP = 0.5
OSC_GRID = 2048
MAX_IFS_DEPTH = 40
MAX_IFS_CELLS = 50000000
MAX_PLAID_TRUNCATION = 5
DIMENSION_TOL = 1e-13
ANGLE_SUM_TOL = 1e-9


class InvalidSidesError(MorphologyError, ValueError):
	""" Raised for polygons with fewer than three sides """
	pass
class BadAnglesError(MorphologyError, ValueError):
	""" Raised when triangle angles are not positive or do not add up to pi """
	pass
class BadAngleError(MorphologyError, ValueError):
	""" Raised for tent dihedral half-angles outside (0, pi/2) """
	pass
class BadRatioError(MorphologyError, ValueError):
	""" Raised for contraction ratios outside (0, 1) """
	pass
class GeneratorWindowError(MorphologyError, ValueError):
	""" Raised when a raster window cannot hold the generated set """
	pass
class ScaleInvarianceError(MorphologyError):
	""" Raised when a set assumed scale-invariant is not, at grid resolution """
	pass


# polytopes

def regular_polygon(sides: int, circumradius: float, center: Sequence[float] = (0.0, 0.0),
		rotation: float = 0.0) -> HPolytope:
	""" Regular polygon whose first outward normal points at angle `rotation` """
	if sides < 3:
		raise InvalidSidesError("a polygon needs at least 3 sides, got %i" % sides)
	if not circumradius > 0:
		raise ValueError("circumradius must be positive, got %r" % (circumradius,))
	center = as_vec(center)
	apothem = circumradius * math.cos(math.pi / sides)
	halfspaces = []
	for k in range(sides):
		angle = rotation + 2.0 * math.pi * k / sides
		normal = np.array([math.cos(angle), math.sin(angle)])
		halfspaces.append(HalfSpace(normal, apothem + float(normal @ center)))
	return HPolytope(halfspaces, reduced=True)

def triangle(angles: Sequence[float], inradius: float, center: Sequence[float] = (0.0, 0.0)) -> HPolytope:
	"""
	Triangle with the given interior angles around an incircle

	Consecutive outward normals turn by pi minus the angle at the vertex the
	two sides share.
	"""
	angles = [float(a) for a in angles]
	if len(angles) != 3 or min(angles) <= 0 or abs(sum(angles) - math.pi) > ANGLE_SUM_TOL:
		raise BadAnglesError("triangle angles must be positive and sum to pi, got %r" % (angles,))
	if not inradius > 0:
		raise ValueError("inradius must be positive, got %r" % (inradius,))
	center = as_vec(center)
	direction = -math.pi / 2.0
	halfspaces = []
	for angle in angles:
		normal = np.array([math.cos(direction), math.sin(direction)])
		halfspaces.append(HalfSpace(normal, inradius + float(normal @ center)))
		direction += math.pi - angle
	return HPolytope(halfspaces, reduced=True)

def box_polytope(width: float, height: float) -> HPolytope:
	return convex.box([0.0, 0.0], [width, height])

def _check_half_angle(gamma: float) -> None:
	if not 0 < gamma < math.pi / 2:
		raise BadAngleError("dihedral half-angle must lie in (0, pi/2), got %r" % (gamma,))

def tent(gamma13: float, gamma24: float, radius: float = 1.0, equal: bool = False,
		gap: float = TENT_GAP) -> HPolytope:
	"""
	Unbounded intersection of two pairs of tilted half-spaces in 3-D

	Horizontal cross sections are rectangles. With distinct angles every
	face is at distance `radius` from the origin, so the origin ball is
	inscribed. With `equal`, both pairs share one angle and the second pair
	sits `gap` further out, leaving only a translation as the similarity.
	"""
	_check_half_angle(gamma13)
	_check_half_angle(gamma24)
	if equal and gamma13 != gamma24:
		raise BadAngleError("equal tent needs equal angles, got %r and %r" % (gamma13, gamma24))
	if not equal and gamma13 == gamma24:
		raise BadAngleError("the inscribed tent needs distinct angles")
	c13, s13 = math.cos(gamma13), math.sin(gamma13)
	c24, s24 = math.cos(gamma24), math.sin(gamma24)
	far = radius + gap if equal else radius
	return HPolytope([
		HalfSpace([c13, 0.0, s13], radius),
		HalfSpace([0.0, c24, s24], far),
		HalfSpace([-c13, 0.0, s13], radius),
		HalfSpace([0.0, -c24, s24], far),
	])

def tent_sequence(gamma13: float, gamma24: float, radius: float = 1.0) -> Tuple[HPolytope, HPolytope, HPolytope]:
	""" X1, X2 = e_R(X1) and X3 = e_R(X2) with R the inscribed radius of X1 """
	x1 = convex.reduce(tent(gamma13, gamma24, radius))
	ball = convex.inscribed_ball(x1)
	if ball is None:
		raise BadAngleError("tent with angles %r, %r has no inscribed ball" % (gamma13, gamma24))
	x2 = convex.erode_polytope(x1, ball.radius)
	x3 = convex.erode_polytope(x2, ball.radius)
	return x1, x2, x3

def _spread_normals(rng: np.random.Generator, dimension: int, count: int) -> np.ndarray:
	normals = rng.normal(size=(count, dimension))
	return normals / np.linalg.norm(normals, axis=1, keepdims=True)

def random_tangent_polytope(rng: np.random.Generator, dimension: int = 2, facets: int = 6, radius: float = 1.0,
		center: Optional[Sequence[float]] = None, attempts: int = 100) -> HPolytope:
	"""
	Bounded polytope all of whose facets touch B(center, radius)

	Every half-space touches the ball at a point the others contain, so none
	is redundant.
	"""
	center = np.zeros(dimension) if center is None else as_vec(center)
	for _ in range(attempts):
		normals = _spread_normals(rng, dimension, facets)
		p = HPolytope.from_arrays(normals, radius + normals @ center)
		if convex.is_bounded(p):
			return convex.reduce(p)
	raise convex.PolytopeError("no bounded tangent polytope in %i attempts" % attempts)

def random_polytope(rng: np.random.Generator, dimension: int = 2, facets: int = 7,
		offsets: Tuple[float, float] = (0.5, 1.5), attempts: int = 100) -> HPolytope:
	""" Bounded polytope with at least dimension + 2 facets and random offsets """
	for _ in range(attempts):
		normals = _spread_normals(rng, dimension, facets)
		p = HPolytope.from_arrays(normals, rng.uniform(offsets[0], offsets[1], size=facets))
		if not convex.is_bounded(p):
			continue
		p = convex.reduce(p)
		if len(p) >= dimension + 2:
			return p
	raise convex.PolytopeError("no suitable random polytope in %i attempts" % attempts)


# iterated function systems

class IFS(object):
	""" Finite list of contracting similarities """

	def __init__(self, maps: Sequence[Similarity]) -> None:
		maps = list(maps)
		if not maps:
			raise BadRatioError("an IFS needs at least one map")
		for m in maps:
			check_dimension(maps[0].dimension, m.dimension, "IFS map")
			if not 0 < m.scale < 1:
				raise BadRatioError("IFS maps must contract, got scale %g" % m.scale)
		self.maps = tuple(maps)

	@property
	def dimension(self) -> int:
		return self.maps[0].dimension

	@property
	def ratio_list(self) -> List[float]:
		return [m.scale for m in self.maps]

	def similarity_dimension(self) -> float:
		return similarity_dimension(self.ratio_list)

	def fixed_points(self) -> np.ndarray:
		return np.array([m.fixed_point() for m in self.maps])

	def attractor_ball(self) -> Tuple[np.ndarray, float]:
		"""
		Center and radius of a ball every map sends into itself

		Any R >= |f_i(c) - c| / (1 - a_i) for all i works, so the attractor
		lies inside.
		"""
		center = self.fixed_points().mean(axis=0)
		radius = max(float(np.linalg.norm(m.apply(center) - center)) / (1.0 - m.scale) for m in self.maps)
		return center, radius

	def to_json(self) -> Dict[str, Any]:
		return {"format": 1, "maps": [m.to_json() for m in self.maps]}

	@classmethod
	def from_json(cls, data: Dict[str, Any]) -> "IFS":
		return cls([Similarity.from_json(m) for m in data["maps"]])

	def __repr__(self) -> str:
		return '<IFS maps:%i dimension:%i>' % (len(self.maps), self.dimension)


def sierpinski_ifs(size: float = 1.0) -> IFS:
	""" Half-scalings toward the corners of an equilateral triangle with a corner at the origin """
	corners = [(0.0, 0.0), (size, 0.0), (size / 2.0, size * math.sqrt(3.0) / 2.0)]
	return IFS([Similarity.homothety(c, 0.5) for c in corners])

def koch_ifs(length: float = 1.0) -> IFS:
	""" The four maps of the Koch curve over the segment from the origin to (length, 0) """
	third = 1.0 / 3.0
	return IFS([
		Similarity(third, np.eye(2), [0.0, 0.0]),
		Similarity(third, rotation_2d(math.pi / 3.0), [length * third, 0.0]),
		Similarity(third, rotation_2d(-math.pi / 3.0), [length / 2.0, length * math.sqrt(3.0) / 6.0]),
		Similarity(third, np.eye(2), [2.0 * length * third, 0.0]),
	])

def convex_polygon(vertices: Sequence[Sequence[float]]) -> HPolytope:
	""" Polygon through counter-clockwise vertices """
	vertices = np.asarray(vertices, dtype=float)
	if len(vertices) < 3:
		raise InvalidSidesError("a polygon needs at least 3 vertices, got %i" % len(vertices))
	halfspaces = []
	for start, end in zip(vertices, np.roll(vertices, -1, axis=0)):
		normal = np.array([end[1] - start[1], start[0] - end[0]])
		halfspaces.append(HalfSpace(normal, float(normal @ start)))
	return HPolytope(halfspaces)

def sierpinski_open_set(size: float = 1.0) -> HPolytope:
	""" The triangle spanned by the Sierpinski corners, a witness for the open set check """
	return convex_polygon([(0.0, 0.0), (size, 0.0), (size / 2.0, size * math.sqrt(3.0) / 2.0)])

def koch_open_set(length: float = 1.0) -> HPolytope:
	""" Isosceles triangle over the Koch base segment with 30 degree base angles """
	return convex_polygon([(0.0, 0.0), (length, 0.0), (length / 2.0, length * math.sqrt(3.0) / 6.0)])

def similarity_dimension(ratio_list: Sequence[float]) -> float:
	""" Root s of sum(a_i ** s) = 1 """
	ratios = np.asarray(list(ratio_list), dtype=float)
	if ratios.size == 0 or np.any(ratios <= 0) or np.any(ratios >= 1):
		raise BadRatioError("ratios must lie in (0, 1), got %r" % (list(ratio_list),))
	def excess(s):
		return float(np.sum(ratios ** s)) - 1.0
	if excess(0.0) == 0.0:
		return 0.0
	hi = 1.0
	while excess(hi) > 0:
		hi *= 2.0
	return optimize.bisect(excess, 0.0, hi, xtol=DIMENSION_TOL, maxiter=200)


def _window_bounds(window: RasterSet) -> Tuple[np.ndarray, np.ndarray]:
	""" World box covered by the pixels, edges included """
	half = window.spacing / 2.0
	lower = window.origin - half
	upper = window.origin + (np.array(window.shape) - 1) * window.spacing + half
	return lower, upper

def ifs_cells(ifs: IFS, window: RasterSet, pre: Optional[Similarity] = None,
		depth: Optional[int] = None) -> RasterSet:
	"""
	Renders pre(f_w(B)) over all addresses w, B the attractor ball

	Cells outside the window are pruned, cells smaller than half a pixel mark
	the pixel nearest to their center, and cells left at `depth` are drawn as
	disks. Without a depth, cells subdivide until they are below half a pixel.
	"""
	check_dimension(window.dimension, ifs.dimension, "IFS")
	if pre is None:
		pre = Similarity.identity(ifs.dimension)
	if depth is None:
		depth = MAX_IFS_DEPTH
	n = ifs.dimension
	center, radius = ifs.attractor_ball()
	lower, upper = _window_bounds(window)
	h = window.spacing

	scales = np.array([pre.scale])
	rotations = pre.rotation[np.newaxis].copy()
	offsets = pre.offset[np.newaxis].copy()
	map_scales = np.array([m.scale for m in ifs.maps])
	map_rotations = np.array([m.rotation for m in ifs.maps])
	map_offsets = np.array([m.offset for m in ifs.maps])

	marked = np.zeros(window.shape, dtype=bool)
	disks = []  # type: List[Tuple[np.ndarray, np.ndarray]]
	for level in range(depth + 1):
		centers = scales[:, np.newaxis] * np.einsum("mij,j->mi", rotations, center) + offsets
		radii = scales * radius
		inside = np.all((centers + radii[:, np.newaxis] >= lower) & (centers - radii[:, np.newaxis] <= upper), axis=1)
		tiny = inside & (radii < h / 2.0)
		if tiny.any():
			index = np.rint(window.to_index(centers[tiny])).astype(np.int64)
			ok = np.all((index >= 0) & (index < np.array(window.shape)), axis=1)
			marked[tuple(index[ok].T)] = True
		keep = inside & ~tiny
		if not keep.any():
			break
		if level == depth:
			disks.append((centers[keep], radii[keep]))
			break
		scales, rotations, offsets = scales[keep], rotations[keep], offsets[keep]
		if scales.size * len(ifs.maps) > MAX_IFS_CELLS:
			raise GeneratorWindowError("IFS rendering exceeds %i cells, lower the depth" % MAX_IFS_CELLS)
		# children f_w o f_i for every map i
		offsets = (offsets[:, np.newaxis, :] + scales[:, np.newaxis, np.newaxis]
				* np.einsum("mij,kj->mki", rotations, map_offsets)).reshape(-1, n)
		rotations = np.einsum("mij,kjl->mkil", rotations, map_rotations).reshape(-1, n, n)
		scales = (scales[:, np.newaxis] * map_scales[np.newaxis]).reshape(-1)
		logger.debug("IFS level %i: %i cells", level + 1, scales.size)

	result = window.with_bits(window.bits | marked)
	for centers, radii in disks:
		if n != 2:
			raise raster.UnsupportedDimensionError("IFS disks are drawn on planar windows only")
		result = raster.fill_disks(result, centers, radii)
	return result

def ifs_invariant(ifs: IFS, depth: int, window: RasterSet) -> RasterSet:
	"""
	Invariant set of the IFS rendered to `depth` levels

	Iteration starts from the attractor ball B(c, R) of attractor_ball(), not
	from the window box, so the window has to cover that ball. At depth k the
	result is the union of the images f_w(B) over words w of length k.
	"""
	if depth < 1:
		raise ValueError("depth must be at least 1, got %i" % depth)
	center, radius = ifs.attractor_ball()
	lower, upper = _window_bounds(window)
	if np.any(center - radius < lower) or np.any(center + radius > upper):
		raise GeneratorWindowError("window %r does not cover the attractor ball (%s, %g)"
				% (window, center.tolist(), radius))
	return ifs_cells(ifs, window, depth=depth)


# scale-invariant extensions

def _window_center(window: RasterSet) -> np.ndarray:
	return window.origin + (np.array(window.shape) - 1) * window.spacing / 2.0

def _truncation_margin(window: RasterSet, point: np.ndarray, safe_radius: float) -> float:
	""" Margin whose valid box fits inside B(point, safe_radius) """
	reach = safe_radius - float(np.linalg.norm(point - _window_center(window)))
	half_width = reach / math.sqrt(window.dimension)
	margin = max(0.0, window.half_extent() - half_width + window.spacing)
	if margin >= window.half_extent():
		logger.warning("truncated copies leave no valid region in %r", window)
	return margin

def _ifs_gap_bound(ifs: IFS, point: np.ndarray, levels: int = 8) -> float:
	""" Lower bound on the distance from `point` to f_i(K) for i >= 2 """
	center, radius = ifs.attractor_ball()
	maps = list(ifs.maps[1:])
	for _ in range(levels):
		bound = min(float(np.linalg.norm(m.apply(center) - point)) - m.scale * radius for m in maps)
		if bound > 0:
			return bound
		maps = [compose(m, f) for m in maps for f in ifs.maps]
	return 0.0

def scale_invariant_extension(base: Union[RasterSet, IFS], s: Optional[Similarity] = None,
		k_range: Tuple[int, int] = (0, 0), window: Optional[RasterSet] = None) -> RasterSet:
	"""
	Union of the copies s^k(base), k_min <= k <= k_max, on a window

	A raster base is resampled copy by copy. For an IFS, s defaults to the
	inverse of its first map and each copy is rendered from cells directly.
	The valid margin excludes what the omitted copies k > k_max could reach;
	omitted small copies near the fixed point are only reported when larger
	than a pixel.
	"""
	k_min, k_max = k_range
	if not k_min <= 0 <= k_max:
		raise ValueError("k range must contain 0, got %r" % (k_range,))
	if isinstance(base, IFS):
		if s is None:
			s = base.maps[0].inverse()
		if window is None:
			raise GeneratorWindowError("an IFS extension needs a window")
	elif window is None:
		window = base
	if s is None or not s.scale > 1:
		raise ValueError("the extension needs a similarity with scale > 1")
	point = s.fixed_point()
	if point is None:
		raise ValueError("the similarity %r has no fixed point" % (s,))

	if isinstance(base, IFS):
		result = raster.empty_like(window)
		for k in range(k_min, k_max + 1):
			result = raster.union(result, ifs_cells(base, window, s.power(k)))
		gap = _ifs_gap_bound(base, point)
		safe_radius = s.scale ** (k_max + 1) * gap
		_, radius = base.attractor_ball()
		small = 2.0 * radius * s.scale ** (k_min - 1)
	else:
		result = base
		for k in range(k_min, k_max + 1):
			if k:
				result = raster.union(result, raster.resample(base, s.power(k)))
		distances = np.linalg.norm(base.centers()[base.bits] - point, axis=1)
		if distances.size == 0:
			raise raster.EmptyInputError("scale-invariant extension of an empty raster")
		safe_radius = s.scale ** (k_max + 1) * max(0.0, float(distances.min()) - base.spacing)
		small = 2.0 * float(distances.max()) * s.scale ** (k_min - 1)
	if small > window.spacing:
		logger.warning("omitted copies near the fixed point reach %g, above the spacing %g", small, window.spacing)
	margin = max(result.valid_margin, _truncation_margin(window, point, safe_radius))
	return result.with_bits(result.bits, valid_margin=margin)

def si_from_resilient(x: RasterSet, s: Similarity, k_max: int) -> RasterSet:
	""" W = union of s^-k(x) for 1 <= k <= k_max """
	if k_max < 1:
		raise ValueError("k_max must be at least 1, got %i" % k_max)
	if not s.scale > 1:
		raise ValueError("the similarity must expand, got scale %g" % s.scale)
	inverse = s.inverse()
	result = raster.resample(x, inverse)
	step = inverse
	for _ in range(2, k_max + 1):
		step = compose(inverse, step)
		result = raster.union(result, raster.resample(x, step))
	return result

def check_scale_invariance(w: RasterSet, s: Similarity, tol_pixels: float = raster.DEFAULT_TOL_PIXELS) -> float:
	""" Hausdorff distance between s(w) and w, raising when above tol_pixels """
	distance = raster.hausdorff(raster.resample(w, s), w)
	if distance > tol_pixels * w.spacing:
		raise ScaleInvarianceError("s(W) differs from W by %g (%.2f pixels)" % (distance, distance / w.spacing))
	return distance

def resilient_from_si(w: RasterSet, s: Similarity, r_prime: float,
		tol_pixels: float = raster.DEFAULT_TOL_PIXELS) -> RasterSet:
	""" X = e_r'(W) for a scale-invariant W, resilient to erosion by r'(scale - 1) """
	if not s.scale > 1:
		raise ValueError("the similarity must expand, got scale %g" % s.scale)
	check_scale_invariance(w, s, tol_pixels)
	return raster.erode_raster(w, r_prime)


# spirals

class SpiralParams(object):
	""" Logarithmic spiral a*exp(b*theta) thickened by exp(b*theta) - 1 """

	def __init__(self, a: float = SPIRAL_A, b: float = SPIRAL_B,
			theta_range: Optional[Tuple[float, float]] = None) -> None:
		if not (a > 0 and b > 0):
			raise ValueError("spiral parameters must be positive, got a=%r b=%r" % (a, b))
		if theta_range is not None and not theta_range[1] > theta_range[0]:
			raise ValueError("empty theta range %r" % (theta_range,))
		self.a = float(a)
		self.b = float(b)
		self.theta_range = theta_range

	def resolved_range(self, reach: float) -> Tuple[float, float]:
		""" Explicit range, or one whose balls cover the radius `reach` for a full turn """
		if self.theta_range is not None:
			return self.theta_range
		theta_max = math.log(max(1.0, (reach + 1.0) / (self.a + 1.0))) / self.b + 2.0 * math.pi
		return 0.0, theta_max

	def center(self, theta: np.ndarray) -> np.ndarray:
		growth = self.a * np.exp(self.b * theta)
		return np.stack([growth * np.cos(theta), growth * np.sin(theta)], axis=-1)

	def thickness(self, theta: np.ndarray) -> np.ndarray:
		return np.exp(self.b * theta) - 1.0

	def to_json(self) -> Dict[str, Any]:
		data = {"a": self.a, "b": self.b}  # type: Dict[str, Any]
		if self.theta_range is not None:
			data["theta_range"] = list(self.theta_range)
		return data

	def __repr__(self) -> str:
		return '<SpiralParams a:%g b:%g>' % (self.a, self.b)


def spiral_thetas(params: SpiralParams, theta_range: Tuple[float, float], spacing: float) -> np.ndarray:
	"""
	Parameter grid on which consecutive balls move by at most spacing / 2

	Centers and radii both change at a rate proportional to exp(b*theta), so
	exp(b*theta) advances by a constant step.
	"""
	a, b = params.a, params.b
	step = b * spacing / (2.0 * (a * math.sqrt(1.0 + b * b) + b))
	start, stop = math.exp(b * theta_range[0]), math.exp(b * theta_range[1])
	growth = np.append(np.arange(start, stop, step), stop)
	return np.log(growth) / b

def spiral_S1(params: SpiralParams, window: RasterSet, border_policy: Optional[str] = None) -> RasterSet:
	"""
	Union of the closed balls B(c(theta), exp(b*theta) - 1) over theta

	Balls of negative thickness contribute nothing. Without an explicit
	theta range, the default one covers the window corners and, for a <= 1,
	the set is taken to continue beyond the window.
	"""
	if window.dimension != 2:
		raise raster.UnsupportedDimensionError("spirals are planar")
	lower, upper = _window_bounds(window)
	reach = float(np.max(np.linalg.norm(np.array([lower, upper, [lower[0], upper[1]], [upper[0], lower[1]]]),
			axis=1)))
	theta_range = params.resolved_range(reach)
	start = params.center(np.array(theta_range[0]))
	if np.any(start < lower) or np.any(start > upper):
		raise GeneratorWindowError("window does not contain the spiral start %s" % start.tolist())
	if border_policy is None:
		border_policy = raster.INSIDE if params.theta_range is None and params.a <= 1.0 else raster.OUTSIDE
	thetas = spiral_thetas(params, theta_range, window.spacing)
	radii = params.thickness(thetas)
	keep = radii >= 0
	logger.debug("spiral with %i balls", int(np.count_nonzero(keep)))
	result = raster.fill_disks(raster.empty_like(window, border_policy), params.center(thetas[keep]), radii[keep])
	return result

def spiral_similarity(r: float, b: float = SPIRAL_B) -> Similarity:
	""" Scale 1 + r with rotation log(1 + r)/b about the origin """
	if not r > 0:
		raise ValueError("spiral erosion radius must be positive, got %r" % (r,))
	return Similarity.spiral(np.zeros(2), 1.0 + r, math.log(1.0 + r) / b)

def discrete_spiral_similarity(scale: float = DISCRETE_SPIRAL_SCALE, angle: float = DISCRETE_SPIRAL_ANGLE) -> Similarity:
	return Similarity.spiral(np.zeros(2), scale, angle)

def fill_polytope(rs: RasterSet, p: HPolytope, strict: bool = False, eps: float = 0.0) -> RasterSet:
	"""
	Adds the pixel centers inside a planar polytope

	With strict, only centers in the open interior (by more than eps) count.
	"""
	if rs.dimension != 2:
		raise raster.UnsupportedDimensionError("polytope filling works on planar rasters only")
	lower, upper = _window_bounds(rs)
	bound = float(np.max(np.abs(np.concatenate([lower, upper])))) + rs.spacing
	corners = convex.vertices_2d(p, bound)
	if not corners.size:
		return rs
	first = np.maximum(np.floor(rs.to_index(corners.min(axis=0))).astype(np.int64), 0)
	stop = np.minimum(np.ceil(rs.to_index(corners.max(axis=0))).astype(np.int64) + 1, rs.shape)
	if np.any(stop <= first):
		return rs
	xs = rs.origin[0] + np.arange(first[0], stop[0]) * rs.spacing
	ys = rs.origin[1] + np.arange(first[1], stop[1]) * rs.spacing
	inside = np.ones((xs.size, ys.size), dtype=bool)
	for normal, offset in zip(p.normals, p.offsets):
		value = normal[0] * xs[:, np.newaxis] + normal[1] * ys[np.newaxis, :]
		inside &= value < offset - eps if strict else value <= offset + eps
	bits = rs.bits.copy()
	bits[first[0]:stop[0], first[1]:stop[1]] |= inside
	return rs.with_bits(bits)

def spiral_copy_range(s: Similarity, rect: HPolytope, window: RasterSet) -> Tuple[int, int]:
	""" Exponents i whose copies s^i(rect) are larger than half a pixel and reach the window """
	lower, upper = _window_bounds(window)
	corners = convex.vertices_2d(rect, 1e9)
	near = float(np.min(np.linalg.norm(corners, axis=1)))
	diameter = float(np.max(np.linalg.norm(corners[:, np.newaxis] - corners[np.newaxis], axis=2)))
	reach = float(np.max(np.abs(np.concatenate([lower, upper])))) * math.sqrt(2.0)
	i_min = int(math.floor(math.log(window.spacing / (2.0 * diameter)) / math.log(s.scale)))
	i_max = int(math.ceil(math.log(reach / near) / math.log(s.scale))) if near > 0 else 0
	return i_min, max(i_min, i_max)

def discrete_spiral_Q(window: RasterSet, s: Optional[Similarity] = None, rect: Optional[HPolytope] = None,
		i_range: Optional[Tuple[int, int]] = None, r: float = 0.0) -> RasterSet:
	"""
	Q_r = e_r(Q_0), Q_0 the union of the copies s^i(rect) over i_range

	Each copy is rasterized exactly as a polygon. Q_r is resilient to erosion
	by r(scale - 1) with similarity s.
	"""
	if window.dimension != 2:
		raise raster.UnsupportedDimensionError("the discrete spiral is planar")
	if s is None:
		s = discrete_spiral_similarity()
	if rect is None:
		rect = convex.box(*DISCRETE_SPIRAL_RECT)
	if not convex.is_bounded(rect):
		raise ValueError("the base rectangle must be bounded")
	if i_range is None:
		i_range = spiral_copy_range(s, rect, window)
	result = raster.empty_like(window, raster.OUTSIDE)
	for i in range(i_range[0], i_range[1] + 1):
		result = fill_polytope(result, convex.apply_similarity(rect, s.power(i)))
	if not result.bits.any():
		raise raster.EmptyOverlapError("no copy of the rectangle reaches the window")
	result = result.with_bits(result.bits, valid_margin=window.spacing)
	return raster.erode_raster(result, r)


# plaid

def interval_mask(s: interval1d.IntervalSet1D, values: np.ndarray) -> np.ndarray:
	""" Vectorized membership of float values in an exact interval set """
	values = np.asarray(values, dtype=float)
	if s.is_empty:
		return np.zeros(values.shape, dtype=bool)
	lo = np.array([-np.inf if i.lo is None else float(i.lo) for i in s.intervals])
	hi = np.array([np.inf if i.hi is None else float(i.hi) for i in s.intervals])
	lo_closed = np.array([i.lo_closed for i in s.intervals])
	hi_closed = np.array([i.hi_closed for i in s.intervals])
	slot = np.clip(np.searchsorted(lo, values, side="right") - 1, 0, lo.size - 1)
	above = np.where(lo_closed[slot], values >= lo[slot], values > lo[slot])
	below = np.where(hi_closed[slot], values <= hi[slot], values < hi[slot])
	return above & below

def plaid(k: int, angles: Sequence[float], window: RasterSet, radial: bool = True) -> RasterSet:
	"""
	Union of strip families {z : <z, u> in Y_k} for each direction u, with
	the radial set {z : |z| in Y_k} when `radial` is set

	Every piece satisfies E_2(piece) = 7 * piece, and so does the union.
	"""
	if k > MAX_PLAID_TRUNCATION:
		raise interval1d.TruncationTooLargeError("plaid truncation %i exceeds %i" % (k, MAX_PLAID_TRUNCATION))
	if window.dimension != 2:
		raise raster.UnsupportedDimensionError("plaid sets are planar")
	y = interval1d.build_Y(k)
	limit = float(interval1d.GeneratorTruncation(k).window)
	lower, upper = _window_bounds(window)
	reach = float(np.max(np.abs(np.concatenate([lower, upper])))) * math.sqrt(2.0)
	if reach > limit:
		raise GeneratorWindowError("window reaches %g, beyond the exact range %g of Y_%i" % (reach, limit, k))
	x, yy = np.ix_(*window.axes())
	bits = np.zeros(window.shape, dtype=bool)
	for angle in angles:
		bits |= interval_mask(y, x * math.cos(angle) + yy * math.sin(angle))
	if radial:
		bits |= interval_mask(y, np.hypot(x, yy))
	return window.with_bits(bits, border_policy=raster.OUTSIDE)


# resilient sets from fractals

def sierpinski_resilient(window: RasterSet, r_prime: float, k_range: Tuple[int, int] = (0, 8),
		size: float = 1.0) -> RasterSet:
	""" Erosion of the complement of the unbounded Sierpinski triangle """
	ifs = sierpinski_ifs(size)
	s = ifs.maps[0].inverse()
	w = scale_invariant_extension(ifs, s, k_range, window)
	return resilient_from_si(raster.complement(w), s, r_prime)

def koch_two_sided(window: RasterSet, k_range: Tuple[int, int] = (0, 8), length: float = 1.0) -> RasterSet:
	""" Unbounded Koch curve through the origin, extended on both sides """
	ifs = koch_ifs(length)
	w = scale_invariant_extension(ifs, ifs.maps[0].inverse(), k_range, window)
	flipped = raster.resample(w, Similarity.homothety(np.zeros(2), 1.0, -np.eye(2)))
	return raster.union(w, flipped)

def component_at(rs: RasterSet, point: Sequence[float]) -> RasterSet:
	""" The 4-connected component of rs containing `point` """
	labels, count = ndimage.label(rs.bits)
	index = tuple(np.rint(rs.to_index(as_vec(point))).astype(np.int64))
	if any(i < 0 or i >= n for i, n in zip(index, rs.shape)) or not labels[index]:
		raise raster.EmptyInputError("point %s is not in the set" % (list(point),))
	logger.debug("%i components, taking label %i", count, labels[index])
	return rs.with_bits(labels == labels[index], border_policy=raster.OUTSIDE)

def koch_resilient(window: RasterSet, r_prime: float, k_range: Tuple[int, int] = (0, 8),
		length: float = 1.0) -> RasterSet:
	"""
	Upper complement component of the two-sided Koch curve, eroded by r'

	The component is invariant under scaling by 3, so erosion by 2r' maps
	the result onto a copy three times larger.
	"""
	ifs = koch_ifs(length)
	s = ifs.maps[0].inverse()
	curve = koch_two_sided(window, k_range, length)
	upper = component_at(raster.complement(curve), [0.0, window.half_extent() / 2.0])
	upper = upper.with_bits(upper.bits, valid_margin=curve.valid_margin)
	return resilient_from_si(upper, s, r_prime)

def teardrop(window: RasterSet, radius: float, apex: Sequence[float], center: Sequence[float] = (0.0, 0.0)) -> RasterSet:
	"""
	Convex hull of B(center, radius) and an outside point

	Eroding by r gives the homothetic copy with scale (radius - r)/radius
	about the center.
	"""
	center, apex = as_vec(center), as_vec(apex)
	distance = float(np.linalg.norm(apex - center))
	if not radius > 0 or distance <= radius:
		raise ValueError("the apex must lie outside the ball")
	steps = int(math.ceil(2.0 * (distance + radius) / window.spacing)) + 1
	t = np.linspace(0.0, 1.0, steps)
	centers = (1.0 - t)[:, np.newaxis] * apex + t[:, np.newaxis] * center
	return raster.fill_disks(raster.empty_like(window, raster.OUTSIDE), centers, t * radius)


# open set condition

def osc_check(ifs: IFS, u: Union[HPolytope, Sequence[HPolytope]], grid: int = OSC_GRID) -> bool:
	"""
	Checks f_i(U) inside U and pairwise disjoint f_i(U) on a grid

	U is the union of the open interiors of the given convex pieces. The check
	is conservative: a pixel center in two images refutes it.
	"""
	pieces = [u] if isinstance(u, HPolytope) else list(u)
	if ifs.dimension != 2:
		raise raster.UnsupportedDimensionError("the open set check is planar")
	corners = np.vstack([convex.vertices_2d(p, 1e6) for p in pieces])
	lower, upper = corners.min(axis=0), corners.max(axis=0)
	spacing = float(np.max(upper - lower)) / (grid - 2)
	window = RasterSet.empty((grid, grid), spacing, lower - spacing / 2.0)
	eps = 1e-9 * max(1.0, float(np.max(np.abs(corners))))

	def render(polytopes, tolerance):
		rs = window
		for p in polytopes:
			rs = fill_polytope(rs, p, strict=True, eps=tolerance)
		return rs.bits

	inside = render(pieces, eps)
	seen = np.zeros(window.shape, dtype=bool)
	for i, m in enumerate(ifs.maps):
		image = render([convex.apply_similarity(p, m) for p in pieces], 2.0 * eps)
		if np.any(image & ~inside):
			logger.info("image of map %i leaves U", i)
			return False
		if np.any(image & seen):
			logger.info("image of map %i overlaps an earlier image", i)
			return False
		seen |= image
	return True
