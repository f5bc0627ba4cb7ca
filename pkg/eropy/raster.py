# -*- coding: utf-8 -*-
"""
Windowed binary grids for sets that are neither convex nor bounded.

A RasterSet samples a set at pixel centers

	x_j = origin_j + i_j * spacing

over a finite window. Beyond the window the set is assumed to be all set
(border_policy "inside") or all complement ("outside"). Results closer to
the window border than valid_margin are not trusted; every erosion or
expansion by r widens that shell by r.

Distances are exact: squared Euclidean distance transforms are built from
one lower-envelope pass per axis, the rows of a pass advancing in lockstep
without looking at each other.

Grids persist as binary PGM (P5, 255 = set) with a JSON sidecar holding
origin, spacing, border_policy and valid_margin.
"""

import itertools
import json
import logging
import math
import os
from functools import reduce
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from PIL import Image
from scipy import ndimage

from eropy.convex import InvalidRadiusError
from eropy.geometry import DimensionMismatchError, MorphologyError, Similarity, as_vec, check_dimension, invert

logger = logging.getLogger(__name__)

INSIDE = "inside"
OUTSIDE = "outside"
BORDER_POLICIES = (INSIDE, OUTSIDE)
SET = "set"
COMPLEMENT = "complement"

DEFAULT_GRID = 1024
DEFAULT_SPACING = 1.0
DEFAULT_TOL_PIXELS = 2.0
MAX_DIMENSION = 3
HOMOTHETY_ANGLES = 720
# slack on squared pixel distances, which are integers
SQUARED_TOL = 1e-9
DISK_CHUNK = 1 << 20
BALL_CONVEXITY_SLACK = 1.5


class EmptyInputError(MorphologyError, ValueError):
	""" Raised when a measurement needs a nonempty set """
	pass
class UnsupportedDimensionError(MorphologyError, ValueError):
	""" Raised for grids of a dimension the operation does not handle """
	pass
class EmptyOverlapError(MorphologyError):
	""" Raised when a transformed grid has no trusted pixel left """
	pass
class RasterFormatError(MorphologyError, ValueError):
	""" Raised on unreadable PGM files or sidecars """
	pass


class RasterSet(object):
	""" Binary occupancy grid over a window of the plane or space """

	def __init__(self, bits: np.ndarray, spacing: float = DEFAULT_SPACING, origin: Optional[Sequence[float]] = None,
			border_policy: str = OUTSIDE, valid_margin: float = 0.0) -> None:
		bits = np.array(bits, dtype=bool)
		if not 1 <= bits.ndim <= MAX_DIMENSION:
			raise UnsupportedDimensionError("rasters have 1 to %i axes, got %i" % (MAX_DIMENSION, bits.ndim))
		if 0 in bits.shape:
			raise ValueError("raster axes must have at least one pixel")
		if not (spacing > 0 and math.isfinite(spacing)):
			raise ValueError("spacing must be positive, got %r" % (spacing,))
		if origin is None:
			origin = -(np.array(bits.shape) // 2) * float(spacing)
		origin = as_vec(origin)
		check_dimension(bits.ndim, origin.size, "origin")
		if border_policy not in BORDER_POLICIES:
			raise ValueError("unknown border policy %r" % (border_policy,))
		if not valid_margin >= 0:
			raise ValueError("valid margin must be nonnegative, got %r" % (valid_margin,))
		bits.setflags(write=False)
		self.bits = bits
		self.spacing = float(spacing)
		self.origin = origin
		self.border_policy = border_policy
		self.valid_margin = float(valid_margin)

	@classmethod
	def empty(cls, shape: Sequence[int], spacing: float = DEFAULT_SPACING, origin: Optional[Sequence[float]] = None,
			border_policy: str = OUTSIDE) -> "RasterSet":
		return cls(np.zeros(tuple(shape), dtype=bool), spacing, origin, border_policy)

	@property
	def dimension(self) -> int:
		return self.bits.ndim

	@property
	def shape(self) -> Tuple[int, ...]:
		return self.bits.shape

	@property
	def count(self) -> int:
		return int(np.count_nonzero(self.bits))

	@property
	def area(self) -> float:
		""" Measure of the set pixels (area in 2-D) """
		return self.count * self.spacing ** self.dimension

	def axes(self) -> List[np.ndarray]:
		""" World coordinates of the pixel centers along each axis """
		return [o + np.arange(n) * self.spacing for o, n in zip(self.origin, self.shape)]

	def centers(self) -> np.ndarray:
		""" All pixel centers as an array of shape shape + (dimension,) """
		return np.stack(np.meshgrid(*self.axes(), indexing="ij"), axis=-1)

	def to_index(self, points: np.ndarray) -> np.ndarray:
		""" Fractional pixel indices of world points """
		return (np.asarray(points, dtype=float) - self.origin) / self.spacing

	def half_extent(self) -> float:
		""" Distance from the window center to its nearest edge """
		return min(self.shape) * self.spacing / 2.0

	def border_distance(self) -> np.ndarray:
		""" Per pixel, the distance to the virtual layer just outside the window """
		per_axis = []
		for axis, n in enumerate(self.shape):
			index = np.arange(n)
			d = (np.minimum(index, n - 1 - index) + 1) * self.spacing
			view = [1] * self.dimension
			view[axis] = n
			per_axis.append(d.reshape(view))
		return np.broadcast_to(reduce(np.minimum, per_axis), self.shape)

	def valid_mask(self) -> np.ndarray:
		return self.border_distance() >= self.valid_margin

	@property
	def valid_area(self) -> float:
		return float(np.count_nonzero(self.valid_mask())) * self.spacing ** self.dimension

	def same_window(self, other: "RasterSet") -> bool:
		return (self.shape == other.shape and self.spacing == other.spacing
				and np.array_equal(self.origin, other.origin))

	def with_bits(self, bits: np.ndarray, border_policy: Optional[str] = None,
			valid_margin: Optional[float] = None) -> "RasterSet":
		""" A new grid over the same window """
		return RasterSet(bits, self.spacing, self.origin,
				self.border_policy if border_policy is None else border_policy,
				self.valid_margin if valid_margin is None else valid_margin)

	def equals(self, other: "RasterSet") -> bool:
		""" Same window, same policy and identical pixels """
		return (self.same_window(other) and self.border_policy == other.border_policy
				and np.array_equal(self.bits, other.bits))

	def sidecar(self) -> Dict[str, Any]:
		return {"format": 1, "shape": list(self.shape), "origin": self.origin.tolist(),
				"spacing": self.spacing, "border_policy": self.border_policy,
				"valid_margin": self.valid_margin}

	def __repr__(self) -> str:
		return '<RasterSet %s h:%g %s margin:%g set:%i>' % ("x".join(str(n) for n in self.shape),
				self.spacing, self.border_policy, self.valid_margin, self.count)


def check_window(a: RasterSet, b: RasterSet) -> None:
	if not a.same_window(b):
		raise DimensionMismatchError("rasters live on different windows: %r and %r" % (a, b))

def empty_like(rs: RasterSet, border_policy: Optional[str] = None) -> RasterSet:
	return RasterSet(np.zeros(rs.shape, dtype=bool), rs.spacing, rs.origin,
			rs.border_policy if border_policy is None else border_policy)

def from_predicate(predicate: Callable[..., np.ndarray], shape: Sequence[int], spacing: float = DEFAULT_SPACING,
		origin: Optional[Sequence[float]] = None, border_policy: str = OUTSIDE) -> RasterSet:
	"""
	Samples predicate(*coords) at the pixel centers

	coords are open-mesh coordinate arrays (as from numpy.ix_), so the
	predicate sees broadcastable x, y[, z] and returns a boolean array.
	"""
	window = RasterSet.empty(shape, spacing, origin, border_policy)
	bits = np.broadcast_to(np.asarray(predicate(*np.ix_(*window.axes())), dtype=bool), window.shape)
	return window.with_bits(bits)

def complement(rs: RasterSet) -> RasterSet:
	policy = INSIDE if rs.border_policy == OUTSIDE else OUTSIDE
	return rs.with_bits(~rs.bits, border_policy=policy)

def union(a: RasterSet, b: RasterSet) -> RasterSet:
	check_window(a, b)
	policy = INSIDE if INSIDE in (a.border_policy, b.border_policy) else OUTSIDE
	return a.with_bits(a.bits | b.bits, policy, max(a.valid_margin, b.valid_margin))

def intersection(a: RasterSet, b: RasterSet) -> RasterSet:
	check_window(a, b)
	policy = INSIDE if a.border_policy == b.border_policy == INSIDE else OUTSIDE
	return a.with_bits(a.bits & b.bits, policy, max(a.valid_margin, b.valid_margin))


def _envelope_rows(f: np.ndarray) -> np.ndarray:
	"""
	out[r, i] = min_j f[r, j] + (i - j)^2 for every row r

	Felzenszwalb's lower envelope of parabolas. Infinite entries are not
	sites; rows without sites stay infinite.
	"""
	rows, n = f.shape
	everything = np.arange(rows)
	v = np.zeros((rows, n), dtype=np.intp)
	z = np.full((rows, n + 1), np.inf)
	k = np.full(rows, -1, dtype=np.intp)
	boundary = np.empty(rows)

	for q in range(n):
		fq = f[:, q]
		finite = np.isfinite(fq)
		start = finite & (k < 0)
		if start.any():
			k[start] = 0
			v[start, 0] = q
			z[start, 0] = -np.inf
			z[start, 1] = np.inf
		pending = everything[finite & ~start]
		active = pending
		while active.size:
			top = k[active]
			site = v[active, top]
			s = ((fq[active] + q * q) - (f[active, site] + site * site)) / (2.0 * (q - site))
			pop = s <= z[active, top]
			boundary[active[~pop]] = s[~pop]
			k[active[pop]] -= 1
			active = active[pop]
		if pending.size:
			k[pending] += 1
			v[pending, k[pending]] = q
			z[pending, k[pending]] = boundary[pending]
			z[pending, k[pending] + 1] = np.inf

	out = np.empty_like(f)
	segment = np.zeros(rows, dtype=np.intp)
	for i in range(n):
		while True:
			advance = z[everything, segment + 1] < i
			if not advance.any():
				break
			segment[advance] += 1
		site = v[everything, segment]
		out[:, i] = f[everything, site] + (i - site) ** 2
	out[k < 0] = np.inf
	return out

def lower_envelope(f: np.ndarray, axis: int = -1) -> np.ndarray:
	""" One separable pass: min over j along `axis` of f[j] + (i - j)^2 """
	f = np.asarray(f, dtype=float)
	moved = np.moveaxis(f, axis, -1)
	flat = moved.reshape(-1, moved.shape[-1])
	out = _envelope_rows(flat).reshape(moved.shape)
	return np.moveaxis(out, -1, axis)

def squared_edt(sites: np.ndarray, pad: bool = False) -> np.ndarray:
	"""
	Squared distance in pixel units from every pixel to the nearest site

	With pad, one layer of sites surrounds the grid.
	"""
	sites = np.asarray(sites, dtype=bool)
	if pad:
		sites = np.pad(sites, 1, constant_values=True)
	f = np.where(sites, 0.0, np.inf)
	for axis in range(f.ndim):
		f = lower_envelope(f, axis)
	if pad:
		f = f[tuple(slice(1, -1) for _ in range(f.ndim))]
	return f


class DistanceField(object):
	""" Exact distance from each pixel center to the nearest pixel of one phase """

	def __init__(self, squared: np.ndarray, spacing: float, phase: str) -> None:
		self.squared = squared
		self.spacing = spacing
		self.phase = phase

	@property
	def values(self) -> np.ndarray:
		""" Distances in world units """
		return np.sqrt(self.squared) * self.spacing

	def __repr__(self) -> str:
		return '<DistanceField to %s max:%g>' % (self.phase, float(np.max(self.values)))


def edt(rs: RasterSet, phase: str = COMPLEMENT) -> DistanceField:
	"""
	Distance to the set (phase "set") or to its complement

	The assumed membership beyond the window counts as a site layer when it
	belongs to the phase.
	"""
	if phase == SET:
		sites, pad = rs.bits, rs.border_policy == INSIDE
	elif phase == COMPLEMENT:
		sites, pad = ~rs.bits, rs.border_policy == OUTSIDE
	else:
		raise ValueError("unknown phase %r" % (phase,))
	return DistanceField(squared_edt(sites, pad), rs.spacing, phase)

def _threshold(rs: RasterSet, r: float) -> float:
	return (r / rs.spacing) ** 2 - SQUARED_TOL

def erode_raster(rs: RasterSet, r: float) -> RasterSet:
	""" Pixels at distance >= r from the complement """
	if r < 0:
		raise InvalidRadiusError("erosion radius must be nonnegative, got %r" % (r,))
	if r == 0:
		return rs
	field = edt(rs, COMPLEMENT)
	return rs.with_bits(rs.bits & (field.squared >= _threshold(rs, r)), valid_margin=rs.valid_margin + r)

def expand_raster(rs: RasterSet, r: float) -> RasterSet:
	""" The set together with the pixels at distance < r from it """
	if r < 0:
		raise InvalidRadiusError("expansion radius must be nonnegative, got %r" % (r,))
	if r == 0:
		return rs
	field = edt(rs, SET)
	return rs.with_bits(rs.bits | (field.squared < _threshold(rs, r)), valid_margin=rs.valid_margin + r)

def opening(rs: RasterSet, r: float) -> RasterSet:
	return expand_raster(erode_raster(rs, r), r)

def opening_limit(rs: RasterSet) -> float:
	""" Largest radius whose opening still leaves a valid pixel """
	deepest = float(np.max(rs.border_distance()))
	return (deepest - rs.valid_margin) / 2.0 * (1.0 - 1e-12)

def _opening_preserves(rs: RasterSet, r: float, slack_pixels: float) -> bool:
	""" True iff every pixel the opening removes lies within slack_pixels of what it keeps """
	opened = opening(rs, r)
	region = opened.valid_mask()
	if not region.any():
		logger.debug("opening by %g leaves no valid pixel", r)
		return False
	removed = rs.bits & ~opened.bits & region
	if not removed.any():
		return True
	if slack_pixels <= 0 or not opened.bits.any():
		return False
	squared = squared_edt(opened.bits, opened.border_policy == INSIDE)
	return bool(np.max(squared[removed]) <= slack_pixels ** 2 + SQUARED_TOL)

def ball_convexity(rs: RasterSet, r_max: float, tol: Optional[float] = None,
		slack_pixels: float = 0.0) -> float:
	"""
	Largest radius rho <= r_max whose open balls build the complement

	Tests opening(complement, rho) == complement per pixel over the valid
	region, first on the radii tol, 2 tol, 4 tol, ... up to r_max and then by
	bisection below the first radius that fails. A return value of r_max
	means "at least r_max".

	The opening of a window only has valid pixels up to opening_limit(); a
	larger r_max is lowered to that bound with a warning. Digitized curved or
	slanted boundaries lose isolated pixels under any opening; pass
	slack_pixels (BALL_CONVEXITY_SLACK, say) to count pixels that close to the
	opened set as covered.
	"""
	if not r_max > 0:
		raise InvalidRadiusError("r_max must be positive, got %r" % (r_max,))
	if tol is None:
		tol = rs.spacing
	outside = complement(rs)
	limit = opening_limit(outside)
	if not limit > 0:
		raise InvalidRadiusError("no opening of %r leaves a valid pixel" % (rs,))
	if r_max > limit:
		logger.warning("r_max %g leaves no valid pixel after opening, searching up to %g", r_max, limit)
		r_max = limit
	# preservation only gets harder as the radius grows
	lo, rung = 0.0, min(float(tol), r_max)
	while _opening_preserves(outside, rung, slack_pixels):
		lo = rung
		if rung >= r_max:
			return r_max
		rung = min(2.0 * rung, r_max)
	hi = rung
	while hi - lo > tol:
		mid = (lo + hi) / 2.0
		if _opening_preserves(outside, mid, slack_pixels):
			lo = mid
		else:
			hi = mid
	logger.debug("ball convexity in [%g, %g]", lo, hi)
	return lo


def directed_hausdorff(a: RasterSet, b: RasterSet, region: Optional[np.ndarray] = None) -> float:
	""" Largest distance from a pixel of a (inside region) to the set b """
	check_window(a, b)
	mask = a.bits if region is None else a.bits & region
	if not mask.any():
		raise EmptyInputError("first raster is empty on the compared region")
	squared = squared_edt(b.bits, b.border_policy == INSIDE)
	return float(math.sqrt(np.max(squared[mask]))) * a.spacing

def hausdorff(a: RasterSet, b: RasterSet) -> float:
	""" Symmetric Hausdorff distance between two rasters on their shared valid region """
	check_window(a, b)
	region = a.valid_mask() & b.valid_mask()
	if not (a.bits & region).any() or not (b.bits & region).any():
		raise EmptyInputError("Hausdorff distance needs both sets nonempty on the valid region")
	return max(directed_hausdorff(a, b, region), directed_hausdorff(b, a, region))


def _sample(values: np.ndarray, index: np.ndarray, outside: float) -> np.ndarray:
	""" Nearest-pixel lookup; index has the axis first """
	return ndimage.map_coordinates(values, np.rint(index), order=0, mode="constant", cval=outside)

def resample(rs: RasterSet, s: Similarity) -> RasterSet:
	"""
	The image s(rs) on the same window

	Every output pixel takes the majority vote of 2^n sub-pixel samples whose
	preimages are looked up at the nearest source pixel. Preimages beyond the
	window follow the border policy and are trusted only when the source has
	no untrusted shell. The output margin covers every untrusted pixel.
	"""
	check_dimension(rs.dimension, s.dimension, "similarity")
	inverse = invert(s)
	source = rs.bits.astype(np.float32)
	trusted_source = rs.valid_mask().astype(np.float32)
	outside = 1.0 if rs.border_policy == INSIDE else 0.0
	outside_trusted = 1.0 if rs.valid_margin == 0 else 0.0

	centers = rs.centers()
	offsets = list(itertools.product((-0.25, 0.25), repeat=rs.dimension))
	votes = np.zeros(rs.shape, dtype=np.float32)
	trusted = np.ones(rs.shape, dtype=bool)
	for offset in offsets:
		index = np.moveaxis(rs.to_index(inverse.apply(centers + np.array(offset) * rs.spacing)), -1, 0)
		votes += _sample(source, index, outside)
		trusted &= _sample(trusted_source, index, outside_trusted) > 0.5
	bits = votes >= len(offsets) / 2.0

	border = rs.border_distance()
	margin = 0.0
	if not trusted.all():
		margin = float(np.max(border[~trusted])) + rs.spacing
	if not np.any(border >= margin):
		raise EmptyOverlapError("no trusted pixel left after resampling by %r" % (s,))
	return rs.with_bits(bits, valid_margin=margin)


class RasterReport(object):
	""" Result of comparing e_r(X) with s(X) on a grid """

	def __init__(self, radius: float, similarity: Similarity, distance: float, tolerance: float,
			spacing: float, valid_area: float) -> None:
		self.radius = radius
		self.similarity = similarity
		self.distance = distance
		self.tolerance = tolerance
		self.spacing = spacing
		self.valid_area = valid_area

	@property
	def passed(self) -> bool:
		return self.distance <= self.tolerance

	@property
	def distance_pixels(self) -> float:
		return self.distance / self.spacing

	def to_json(self) -> Dict[str, Any]:
		return {"format": 1, "radius": self.radius, "similarity": self.similarity.to_json(),
				"hausdorff": self.distance, "hausdorff_pixels": self.distance_pixels,
				"tolerance": self.tolerance, "spacing": self.spacing, "valid_area": self.valid_area,
				"passed": self.passed}

	def __repr__(self) -> str:
		return '<RasterReport r:%g hausdorff:%.3gpx %s>' % (self.radius, self.distance_pixels,
				"pass" if self.passed else "FAIL")


def verify_resilience_raster(rs: RasterSet, r: float, s: Similarity,
		tol_pixels: float = DEFAULT_TOL_PIXELS) -> RasterReport:
	""" Hausdorff distance between e_r(rs) and s(rs), judged against tol_pixels * h """
	if tol_pixels < 1:
		raise ValueError("tolerance must be at least one pixel, got %r" % (tol_pixels,))
	eroded = erode_raster(rs, r)
	image = resample(rs, s)
	distance = hausdorff(eroded, image)
	region = eroded.valid_mask() & image.valid_mask()
	valid_area = float(np.count_nonzero(region)) * rs.spacing ** rs.dimension
	report = RasterReport(r, s, distance, tol_pixels * rs.spacing, rs.spacing, valid_area)
	logger.info("%r", report)
	return report


def centroid(rs: RasterSet) -> np.ndarray:
	if not rs.bits.any():
		raise EmptyInputError("centroid of an empty raster")
	return rs.centers()[rs.bits].mean(axis=0)

def estimate_homothety(a: RasterSet, b: RasterSet, angles: int = HOMOTHETY_ANGLES) -> Tuple[Similarity, float]:
	"""
	Best planar similarity taking a onto b, with its Hausdorff residual

	Centers come from the centroids, the scale from the area ratio and the
	rotation from a grid search over `angles` equally spaced angles. This is
	a diagnostic, not a decision procedure.
	"""
	if a.dimension != 2 or b.dimension != 2:
		raise UnsupportedDimensionError("homothety estimation works on planar rasters only")
	check_window(a, b)
	if not a.bits.any() or not b.bits.any():
		raise EmptyInputError("homothety estimation needs two nonempty rasters")
	source, target = centroid(a), centroid(b)
	scale = math.sqrt(b.count / float(a.count))
	best = None  # type: Optional[Tuple[Similarity, float]]
	for step in range(angles):
		angle = 2.0 * math.pi * step / angles
		s = Similarity.translation(target).compose(
				Similarity.spiral(np.zeros(2), scale, angle)).compose(Similarity.translation(-source))
		try:
			residual = hausdorff(resample(a, s), b)
		except (EmptyInputError, EmptyOverlapError):
			continue
		if best is None or residual < best[1]:
			best = (s, residual)
	if best is None:
		raise EmptyOverlapError("no rotation keeps the image inside the window")
	logger.debug("estimated scale %g angle %g residual %g", best[0].scale, best[0].angle, best[1])
	return best


def fill_disks(rs: RasterSet, centers: np.ndarray, radii: np.ndarray) -> RasterSet:
	"""
	Adds the closed disks B(center, radius) to a planar raster

	Rasterized by scanlines: every disk contributes one run per row, and the
	runs are accumulated in a difference array.
	"""
	if rs.dimension != 2:
		raise UnsupportedDimensionError("disk filling works on planar rasters only")
	centers = np.atleast_2d(np.asarray(centers, dtype=float))
	radii = np.broadcast_to(np.asarray(radii, dtype=float), centers.shape[:1])
	keep = radii >= 0
	index = rs.to_index(centers[keep])
	reach = radii[keep] / rs.spacing
	nx, ny = rs.shape
	lo = np.maximum(np.ceil(index[:, 1] - reach - SQUARED_TOL), 0).astype(np.int64)
	hi = np.minimum(np.floor(index[:, 1] + reach + SQUARED_TOL), ny - 1).astype(np.int64)
	counts = np.maximum(hi - lo + 1, 0)
	diff = np.zeros((nx + 1) * ny, dtype=np.int64)

	total = np.cumsum(counts)
	start = 0
	while start < counts.size:
		base = total[start - 1] if start else 0
		stop = max(int(np.searchsorted(total, base + DISK_CHUNK, side="right")), start + 1)
		group = np.arange(start, stop)
		group_counts = counts[group]
		if group_counts.sum():
			disk = np.repeat(group, group_counts)
			first = np.repeat(np.cumsum(group_counts) - group_counts, group_counts)
			row = lo[disk] + np.arange(disk.size) - first
			half = np.sqrt(np.maximum(reach[disk] ** 2 - (row - index[disk, 1]) ** 2, 0.0))
			left = np.clip(np.ceil(index[disk, 0] - half - SQUARED_TOL), 0, nx).astype(np.int64)
			right = np.clip(np.floor(index[disk, 0] + half + SQUARED_TOL) + 1, 0, nx).astype(np.int64)
			run = right > left
			diff += np.bincount(left[run] * ny + row[run], minlength=diff.size)
			diff -= np.bincount(right[run] * ny + row[run], minlength=diff.size)
		start = stop
	covered = np.cumsum(diff.reshape(nx + 1, ny), axis=0)[:nx] > 0
	return rs.with_bits(rs.bits | covered)

def boundary_runs(rs: RasterSet) -> List[Tuple[int, int, int]]:
	""" Maximal runs of set pixels along axis 0, as (row, first, stop) index triples """
	if rs.dimension != 2:
		raise UnsupportedDimensionError("runs are defined for planar rasters only")
	padded = np.zeros((rs.shape[0] + 2, rs.shape[1]), dtype=np.int8)
	padded[1:-1] = rs.bits
	edges = np.diff(padded, axis=0)
	runs = []
	for row in range(rs.shape[1]):
		starts = np.flatnonzero(edges[:, row] == 1)
		stops = np.flatnonzero(edges[:, row] == -1)
		runs.extend((row, int(a), int(b)) for a, b in zip(starts, stops))
	return runs


def sidecar_path(path: str) -> str:
	return os.path.splitext(path)[0] + ".json"

def save(rs: RasterSet, path: str) -> None:
	""" Writes a P5 PGM (rows top to bottom, +y up) and its JSON sidecar """
	if rs.dimension != 2:
		raise UnsupportedDimensionError("only planar rasters can be written as PGM")
	pixels = np.where(rs.bits.T[::-1], 255, 0).astype(np.uint8)
	Image.fromarray(pixels).save(path, format="PPM")
	with open(sidecar_path(path), "w") as sidecar:
		json.dump(rs.sidecar(), sidecar, indent=1, sort_keys=True)
		sidecar.write("\n")

def load(path: str) -> RasterSet:
	try:
		with Image.open(path) as image:
			if image.mode != "L":
				raise RasterFormatError("%s: expected a grayscale PGM, got mode %s" % (path, image.mode))
			pixels = np.array(image)
	except (IOError, SyntaxError) as err:
		raise RasterFormatError("%s: %s" % (path, err))
	bits = pixels[::-1].T >= 128
	try:
		with open(sidecar_path(path)) as sidecar:
			meta = json.load(sidecar)
	except IOError:
		logger.warning("%s has no sidecar, using the default window", path)
		meta = {}
	except ValueError as err:
		raise RasterFormatError("%s: bad sidecar: %s" % (sidecar_path(path), err))
	if "shape" in meta and tuple(meta["shape"]) != bits.shape:
		raise RasterFormatError("%s: sidecar shape %s does not match image %s" % (path, meta["shape"], bits.shape))
	try:
		return RasterSet(bits, float(meta.get("spacing", DEFAULT_SPACING)), meta.get("origin"),
				meta.get("border_policy", OUTSIDE), float(meta.get("valid_margin", 0.0)))
	except (TypeError, ValueError) as err:
		raise RasterFormatError("%s: %s" % (path, err))
