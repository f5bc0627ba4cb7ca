# -*- coding: utf-8 -*-
"""
Dimension-generic points, balls, half-spaces and similarity transformations.

Points are plain read-only numpy vectors. A similarity acts as

	x -> scale * rotation @ x + offset

with scale > 0 and an orthogonal rotation (reflections are allowed, see
Similarity.orientation_preserving). Every other eropy module builds on the
composition, inversion and half-space rules defined here.
"""

import logging
import math
from typing import Any, Dict, Optional, Sequence, Union

import numpy as np

logger = logging.getLogger(__name__)

UNIT_TOL = 1e-12
ORTHO_TOL = 1e-10
# rotations further than this from orthogonal are rejected instead of repaired
ORTHO_REPAIR_LIMIT = 1e-6
FIXED_POINT_COND = 1e12

Vec = np.ndarray


class MorphologyError(Exception):
	""" Base class of all errors raised by eropy """
	pass

class DimensionMismatchError(MorphologyError, ValueError):
	""" Raised when objects living in different dimensions are combined """
	pass


def as_vec(coords: Union[Sequence[float], np.ndarray]) -> Vec:
	""" Returns the coordinates as a finite, read-only float vector """
	vec = np.array(coords, dtype=float).reshape(-1)
	if vec.size == 0:
		raise ValueError("a vector needs at least one coordinate")
	if not np.all(np.isfinite(vec)):
		raise ValueError("vector coordinates must be finite")
	vec.setflags(write=False)
	return vec

def check_dimension(expected: int, got: int, what: str = "object") -> None:
	if expected != got:
		raise DimensionMismatchError("%s has dimension %i, expected %i" % (what, got, expected))


class Ball(object):
	""" Ball of a given radius around a center, either open or closed """

	def __init__(self, center: Union[Sequence[float], Vec], radius: float, closed: bool = True) -> None:
		self.center = as_vec(center)
		if math.isnan(radius) or radius < 0:
			raise ValueError("ball radius must be nonnegative, got %r" % (radius,))
		self.radius = float(radius)
		self.closed = closed

	@property
	def dimension(self) -> int:
		return self.center.size

	@property
	def unbounded(self) -> bool:
		""" True for the +inf radius flag used by chebyshev_ball """
		return math.isinf(self.radius)

	def contains(self, points: np.ndarray, tol: float = 0.0) -> np.ndarray:
		""" Membership of one point or of a (m, n) stack of points """
		dist = np.linalg.norm(np.atleast_2d(points) - self.center, axis=1)
		if self.closed:
			inside = dist <= self.radius + tol
		else:
			inside = dist < self.radius + tol
		return inside if np.ndim(points) > 1 else bool(inside[0])

	def to_json(self) -> Dict[str, Any]:
		return {"center": self.center.tolist(), "radius": self.radius, "closed": self.closed}

	@classmethod
	def from_json(cls, data: Dict[str, Any]) -> "Ball":
		return cls(data["center"], float(data["radius"]), bool(data.get("closed", True)))

	def __repr__(self) -> str:
		return '<Ball center:%s radius:%g %s>' % (np.array2string(self.center, precision=6),
				self.radius, "closed" if self.closed else "open")


class HalfSpace(object):
	""" Closed half-space {x : <normal, x> <= offset} with a unit outward normal """

	def __init__(self, normal: Union[Sequence[float], Vec], offset: float) -> None:
		normal = np.array(normal, dtype=float).reshape(-1)
		length = np.linalg.norm(normal)
		if length == 0 or not np.isfinite(length):
			raise ValueError("half-space normal must be a nonzero finite vector")
		if not math.isfinite(offset):
			raise ValueError("half-space offset must be finite")
		# rescaling keeps the point set of {<n, x> <= d} unchanged
		if abs(length - 1.0) > UNIT_TOL:
			normal = normal / length
			offset = offset / length
		self.normal = as_vec(normal)
		self.offset = float(offset)

	@property
	def dimension(self) -> int:
		return self.normal.size

	def signed_distance(self, points: np.ndarray) -> np.ndarray:
		""" Positive outside, negative inside, zero on the boundary hyperplane """
		return np.atleast_2d(points) @ self.normal - self.offset

	def contains(self, points: np.ndarray, tol: float = 0.0) -> np.ndarray:
		inside = self.signed_distance(points) <= tol
		return inside if np.ndim(points) > 1 else bool(inside[0])

	def to_json(self) -> Dict[str, Any]:
		return {"normal": self.normal.tolist(), "offset": self.offset}

	@classmethod
	def from_json(cls, data: Dict[str, Any]) -> "HalfSpace":
		return cls(data["normal"], float(data["offset"]))

	def __repr__(self) -> str:
		return '<HalfSpace normal:%s offset:%g>' % (np.array2string(self.normal, precision=6), self.offset)


def _orthonormalize(matrix: np.ndarray) -> np.ndarray:
	""" Gram-Schmidt through QR, keeping the column orientation of the input """
	q, r = np.linalg.qr(matrix)
	signs = np.sign(np.diag(r))
	signs[signs == 0] = 1.0
	return q * signs


class Similarity(object):
	""" Euclidean similarity x -> scale * rotation @ x + offset """

	def __init__(self, scale: float, rotation: Union[Sequence[Sequence[float]], np.ndarray],
			offset: Union[Sequence[float], Vec]) -> None:
		if not (scale > 0 and math.isfinite(scale)):
			raise ValueError("similarity scale must be positive and finite, got %r" % (scale,))
		offset = as_vec(offset)
		rotation = np.array(rotation, dtype=float)
		n = offset.size
		if rotation.size == n * n:
			rotation = rotation.reshape(n, n)
		if rotation.shape != (n, n):
			raise DimensionMismatchError("rotation of shape %s does not match offset of dimension %i"
					% (rotation.shape, n))
		drift = np.max(np.abs(rotation.T @ rotation - np.eye(n)))
		if drift > ORTHO_REPAIR_LIMIT:
			raise ValueError("rotation is not orthogonal (deviation %g)" % drift)
		if drift > ORTHO_TOL:
			logger.debug("re-orthonormalizing rotation, deviation %g", drift)
			rotation = _orthonormalize(rotation)
		rotation.setflags(write=False)
		self.scale = float(scale)
		self.rotation = rotation
		self.offset = offset

	@classmethod
	def identity(cls, dimension: int) -> "Similarity":
		return cls(1.0, np.eye(dimension), np.zeros(dimension))

	@classmethod
	def translation(cls, vector: Union[Sequence[float], Vec]) -> "Similarity":
		vector = as_vec(vector)
		return cls(1.0, np.eye(vector.size), vector)

	@classmethod
	def homothety(cls, center: Union[Sequence[float], Vec], scale: float,
			rotation: Optional[np.ndarray] = None) -> "Similarity":
		""" Similarity fixing `center`, optionally rotating about it """
		center = as_vec(center)
		if rotation is None:
			rotation = np.eye(center.size)
		rotation = np.asarray(rotation, dtype=float)
		return cls(scale, rotation, center - scale * (rotation @ center))

	@classmethod
	def spiral(cls, center: Union[Sequence[float], Vec], scale: float, angle: float) -> "Similarity":
		""" Planar rotation by `angle` combined with scaling, both about `center` """
		return cls.homothety(center, scale, rotation_2d(angle))

	@property
	def dimension(self) -> int:
		return self.offset.size

	@property
	def orientation_preserving(self) -> bool:
		return bool(np.linalg.det(self.rotation) > 0)

	@property
	def is_isometry(self) -> bool:
		return abs(self.scale - 1.0) <= ORTHO_TOL

	@property
	def angle(self) -> float:
		""" Rotation angle of a planar similarity """
		check_dimension(2, self.dimension, "similarity")
		return math.atan2(self.rotation[1, 0], self.rotation[0, 0])

	def linear(self) -> np.ndarray:
		""" The linear part scale * rotation """
		return self.scale * self.rotation

	def apply(self, points: np.ndarray) -> np.ndarray:
		""" Maps one point or a (m, n) stack of points """
		points = np.asarray(points, dtype=float)
		check_dimension(self.dimension, points.shape[-1], "point")
		return points @ self.linear().T + self.offset

	__call__ = apply

	def compose(self, other: "Similarity") -> "Similarity":
		return compose(self, other)

	def inverse(self) -> "Similarity":
		return invert(self)

	def power(self, exponent: int) -> "Similarity":
		""" self applied `exponent` times, negative exponents use the inverse """
		base = self if exponent >= 0 else invert(self)
		exponent = abs(exponent)
		result = Similarity.identity(self.dimension)
		while exponent:
			if exponent & 1:
				result = compose(result, base)
			base = compose(base, base)
			exponent >>= 1
		return result

	def fixed_point(self) -> Optional[Vec]:
		return fixed_point(self)

	def is_close(self, other: "Similarity", tol: float = 1e-10) -> bool:
		return (self.dimension == other.dimension and abs(self.scale - other.scale) <= tol
				and np.allclose(self.rotation, other.rotation, atol=tol, rtol=0)
				and np.allclose(self.offset, other.offset, atol=tol, rtol=0))

	def to_json(self) -> Dict[str, Any]:
		return {"scale": self.scale, "rotation": self.rotation.tolist(), "offset": self.offset.tolist()}

	@classmethod
	def from_json(cls, data: Dict[str, Any]) -> "Similarity":
		try:
			return cls(float(data["scale"]), data["rotation"], data["offset"])
		except KeyError as err:
			raise ValueError("similarity is missing field %s" % err)

	def __repr__(self) -> str:
		return '<Similarity scale:%g offset:%s%s>' % (self.scale,
				np.array2string(self.offset, precision=6),
				"" if self.orientation_preserving else " reflecting")


def rotation_2d(angle: float) -> np.ndarray:
	c, s = math.cos(angle), math.sin(angle)
	return np.array([[c, -s], [s, c]])

def compose(s1: Similarity, s2: Similarity) -> Similarity:
	""" Returns s1 after s2, i.e. x -> s1(s2(x)) """
	check_dimension(s1.dimension, s2.dimension, "similarity")
	rotation = s1.rotation @ s2.rotation
	drift = np.max(np.abs(rotation.T @ rotation - np.eye(s1.dimension)))
	if drift > ORTHO_TOL:
		rotation = _orthonormalize(rotation)
	offset = s1.scale * (s1.rotation @ s2.offset) + s1.offset
	return Similarity(s1.scale * s2.scale, rotation, offset)

def invert(s: Similarity) -> Similarity:
	rotation = s.rotation.T
	return Similarity(1.0 / s.scale, rotation, -(rotation @ s.offset) / s.scale)

def fixed_point(s: Similarity) -> Optional[Vec]:
	"""
	Solves (I - scale * rotation) p = offset

	Returns None when the system is singular or too badly conditioned, as for
	translations and screw-like isometries.
	"""
	system = np.eye(s.dimension) - s.linear()
	cond = np.linalg.cond(system)
	if not np.isfinite(cond) or cond >= FIXED_POINT_COND:
		return None
	return as_vec(np.linalg.solve(system, s.offset))

def apply_to_halfspace(s: Similarity, h: HalfSpace) -> HalfSpace:
	""" Image of h under s: {y : <Qn, y> <= scale * d + <Qn, b>} """
	check_dimension(s.dimension, h.dimension, "half-space")
	normal = s.rotation @ h.normal
	return HalfSpace(normal, s.scale * h.offset + float(normal @ s.offset))

def random_rotation(rng: np.random.Generator, dimension: int,
		orientation_preserving_only: bool = True) -> np.ndarray:
	""" Haar-distributed orthogonal matrix """
	q = _orthonormalize(rng.normal(size=(dimension, dimension)))
	if orientation_preserving_only and np.linalg.det(q) < 0:
		q[:, 0] = -q[:, 0]
	return q

def random_similarity(rng: np.random.Generator, dimension: int, scale_range=(0.3, 3.0),
		offset_scale: float = 1.0, orientation_preserving_only: bool = True) -> Similarity:
	scale = float(np.exp(rng.uniform(np.log(scale_range[0]), np.log(scale_range[1]))))
	return Similarity(scale, random_rotation(rng, dimension, orientation_preserving_only),
			rng.uniform(-offset_scale, offset_scale, size=dimension))
