# -*- coding: utf-8 -*-
"""
Exact erosion and resilience classification of convex H-polytopes.

A polytope is a finite intersection of closed half-spaces, possibly
unbounded. After reduce() every half-space is facet-defining, which for
polytopes is the same as being a regular supporting half-space. Eroding by r
moves every facet inwards by r; the decision procedures below tell whether
the eroded polytope is a similar copy:

	decreasing  - an inscribed ball touches every facet hyperplane
	increasing  - an exscribed point lies outside every facet at one distance
	isometric   - a translation v with <n_i, v> = -r exists for every facet
	none        - none of the above

All linear programs are solved by scipy's HiGHS backend.
"""

import logging
import math
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np
from scipy.linalg import null_space
from scipy.optimize import linear_sum_assignment, linprog

from eropy.geometry import (Ball, HalfSpace, MorphologyError, Similarity, Vec, apply_to_halfspace,
		as_vec, check_dimension)

logger = logging.getLogger(__name__)

KIND_DECREASING = "decreasing"
KIND_INCREASING = "increasing"
KIND_ISOMETRIC = "isometric"
KIND_NONE = "none"
KINDS = (KIND_DECREASING, KIND_INCREASING, KIND_ISOMETRIC, KIND_NONE)

LP_TOL = 1e-9
RELATIVE_TOL = 1e-8
MAX_SYSTEM_COND = 1e10


class PolytopeError(MorphologyError, ValueError):
	""" Raised on malformed polytope input """
	pass
class EmptySetError(MorphologyError):
	""" Raised when the half-spaces have an empty intersection """
	pass
class EmptyResultError(MorphologyError):
	""" Raised when an erosion leaves nothing of the polytope """
	pass
class InvalidRadiusError(MorphologyError, ValueError):
	""" Raised for radii outside the allowed range """
	pass
class RadiusTooLargeError(MorphologyError, ValueError):
	""" Raised when the erosion radius reaches the inscribed radius """
	pass
class NotResilientError(MorphologyError):
	""" Raised when a similarity is requested from a certificate of kind none """
	pass


class HPolytope(object):
	""" Intersection of closed half-spaces """

	def __init__(self, halfspaces: Sequence[HalfSpace], reduced: bool = False) -> None:
		halfspaces = list(halfspaces)
		if not halfspaces:
			raise PolytopeError("a polytope needs at least one half-space")
		dimension = halfspaces[0].dimension
		for h in halfspaces:
			check_dimension(dimension, h.dimension, "half-space")
		self.halfspaces = tuple(halfspaces)
		self.reduced = reduced
		normals = np.array([h.normal for h in halfspaces])
		offsets = np.array([h.offset for h in halfspaces])
		normals.setflags(write=False)
		offsets.setflags(write=False)
		self.normals = normals
		self.offsets = offsets

	@classmethod
	def from_arrays(cls, normals: np.ndarray, offsets: np.ndarray, reduced: bool = False) -> "HPolytope":
		return cls([HalfSpace(n, d) for n, d in zip(np.atleast_2d(normals), np.ravel(offsets))], reduced)

	@property
	def dimension(self) -> int:
		return self.normals.shape[1]

	def __len__(self) -> int:
		return len(self.halfspaces)

	def contains(self, points: np.ndarray, tol: float = LP_TOL) -> np.ndarray:
		inside = np.all(np.atleast_2d(points) @ self.normals.T - self.offsets <= tol, axis=1)
		return inside if np.ndim(points) > 1 else bool(inside[0])

	def default_tol(self) -> float:
		""" RELATIVE_TOL scaled by the largest offset """
		return RELATIVE_TOL * max(1.0, float(np.max(np.abs(self.offsets))))

	def to_json(self) -> Dict[str, Any]:
		return {"format": 1, "dimension": self.dimension,
				"polytope": [h.to_json() for h in self.halfspaces]}

	@classmethod
	def from_json(cls, data: Dict[str, Any]) -> "HPolytope":
		try:
			halfspaces = [HalfSpace.from_json(h) for h in data["polytope"]]
		except (KeyError, TypeError) as err:
			raise PolytopeError("malformed polytope: %s" % err)
		polytope = cls(halfspaces)
		if "dimension" in data:
			check_dimension(int(data["dimension"]), polytope.dimension, "polytope")
		return polytope

	def __repr__(self) -> str:
		return '<HPolytope dimension:%i halfspaces:%i%s>' % (self.dimension, len(self),
				" reduced" if self.reduced else "")


def _linprog(cost: np.ndarray, normals: np.ndarray, offsets: np.ndarray, bounds=None):
	if bounds is None:
		bounds = [(None, None)] * len(cost)
	return linprog(cost, A_ub=normals, b_ub=offsets, bounds=bounds, method="highs")

def feasible_point(p: HPolytope) -> Vec:
	""" Some point of p, raising EmptySetError when there is none """
	res = _linprog(np.zeros(p.dimension), p.normals, p.offsets)
	if res.status == 2:
		raise EmptySetError("half-spaces have an empty intersection")
	if res.status != 0:
		raise EmptySetError("feasibility solve failed: %s" % res.message)
	return as_vec(res.x)

def reduce(p: HPolytope, tol: float = LP_TOL) -> HPolytope:
	"""
	Drops duplicate and redundant half-spaces

	Solves one LP per half-space: maximize <n_i, x> over the others (capped
	at d_i + 1); the half-space is redundant when the optimum does not pass
	d_i.
	"""
	if p.reduced:
		return p
	feasible_point(p)

	# among parallel copies keep the tightest
	order = np.lexsort((p.offsets,))
	kept = []  # type: List[int]
	for i in order:
		if any(np.dot(p.normals[i], p.normals[j]) > 1 - tol for j in kept):
			continue
		kept.append(int(i))

	for i in list(kept):
		others = [j for j in kept if j != i]
		normals = np.vstack([p.normals[others], p.normals[i]]) if others else p.normals[[i]]
		offsets = np.append(p.offsets[others], p.offsets[i] + 1.0)
		res = _linprog(-p.normals[i], normals, offsets)
		if res.status != 0:
			logger.debug("redundancy solve for half-space %i failed: %s", i, res.message)
			continue
		if -res.fun <= p.offsets[i] + tol * max(1.0, abs(p.offsets[i])):
			kept.remove(i)

	kept.sort()
	return HPolytope([p.halfspaces[i] for i in kept], reduced=True)

def erode_halfspace(h: HalfSpace, r: float) -> HalfSpace:
	if r < 0:
		raise InvalidRadiusError("erosion radius must be nonnegative, got %r" % (r,))
	return HalfSpace(h.normal, h.offset - r)

def erode_polytope(p: HPolytope, r: float) -> HPolytope:
	""" The erosion of an intersection is the intersection of the erosions """
	eroded = HPolytope([erode_halfspace(h, r) for h in p.halfspaces])
	try:
		return reduce(eroded)
	except EmptySetError:
		raise EmptyResultError("erosion by %g leaves nothing of %r" % (r, p))

def apply_similarity(p: HPolytope, s: Similarity) -> HPolytope:
	return HPolytope([apply_to_halfspace(s, h) for h in p.halfspaces], reduced=p.reduced)

def intersect(p1: HPolytope, p2: HPolytope) -> HPolytope:
	check_dimension(p1.dimension, p2.dimension, "polytope")
	return reduce(HPolytope(p1.halfspaces + p2.halfspaces))

def box(lower: Sequence[float], upper: Sequence[float]) -> HPolytope:
	""" Axis-aligned box [lower, upper] """
	lower, upper = as_vec(lower), as_vec(upper)
	check_dimension(lower.size, upper.size, "box corner")
	if np.any(upper < lower):
		raise PolytopeError("box upper corner below lower corner")
	eye = np.eye(lower.size)
	halfspaces = []
	for axis in range(lower.size):
		halfspaces.append(HalfSpace(eye[axis], upper[axis]))
		halfspaces.append(HalfSpace(-eye[axis], -lower[axis]))
	return HPolytope(halfspaces, reduced=bool(np.all(upper > lower)))

def is_bounded(p: HPolytope) -> bool:
	""" True iff the recession cone {u : <n_i, u> <= 0} is {0} """
	n = p.dimension
	zeros = np.zeros(len(p))
	for axis in range(n):
		for sign in (1.0, -1.0):
			cost = np.zeros(n)
			cost[axis] = -sign
			res = _linprog(cost, p.normals, zeros, bounds=[(-1.0, 1.0)] * n)
			if res.status == 0 and -res.fun > LP_TOL:
				return False
	return True


def _solve_tangent_system(p: HPolytope, sign: float, tol: float) -> Optional[np.ndarray]:
	"""
	Solves <n_i, c> + sign * R = d_i for all facets with R > 0

	Returns the stacked (c, R) or None. When the least-squares solution has
	R <= 0 but the solution family moves R, the member with R = max(1, |d|) is
	taken, which covers lone half-spaces and cones.
	"""
	system = np.hstack([p.normals, np.full((len(p), 1), sign)])
	solution, _, rank, singular = np.linalg.lstsq(system, p.offsets, rcond=None)
	residual = float(np.max(np.abs(system @ solution - p.offsets)))
	if residual > tol:
		logger.debug("tangent system (sign %+g) inconsistent, residual %g", sign, residual)
		return None
	nonzero = singular[singular > singular[0] * 1e-12]
	cond = nonzero[0] / nonzero[-1]
	if cond > MAX_SYSTEM_COND:
		logger.warning("facet system is near-degenerate (condition number %g)", cond)
		return None
	if solution[-1] > tol:
		return solution
	family = null_space(system)
	if family.size == 0:
		return None
	column = int(np.argmax(np.abs(family[-1])))
	if abs(family[-1, column]) <= 1e-9:
		return None
	target = max(1.0, float(np.max(np.abs(p.offsets))))
	return solution + (target - solution[-1]) / family[-1, column] * family[:, column]

def tangent_slide(p: HPolytope, sign: float = 1.0) -> Optional[Vec]:
	"""
	Center motion per unit radius along a family of tangent balls

	None when the tangent system pins the ball down (bounded polytopes).
	Cones and lone half-spaces carry a whole family, and any member works.
	"""
	p = reduce(p)
	system = np.hstack([p.normals, np.full((len(p), 1), sign)])
	family = null_space(system)
	if family.size == 0:
		return None
	column = int(np.argmax(np.abs(family[-1])))
	if abs(family[-1, column]) <= 1e-9:
		return None
	return family[:-1, column] / family[-1, column]

def inscribed_ball(p: HPolytope, tol: Optional[float] = None) -> Optional[Ball]:
	""" Ball inside p touching every facet hyperplane, or None """
	p = reduce(p)
	solution = _solve_tangent_system(p, 1.0, p.default_tol() if tol is None else tol)
	if solution is None:
		return None
	return Ball(solution[:-1], float(solution[-1]))

def exscribed_ball(p: HPolytope, tol: Optional[float] = None) -> Optional[Ball]:
	""" Point outside every facet at one common distance, as a ball, or None """
	p = reduce(p)
	solution = _solve_tangent_system(p, -1.0, p.default_tol() if tol is None else tol)
	if solution is None:
		return None
	return Ball(solution[:-1], float(solution[-1]))

def chebyshev_ball(p: HPolytope) -> Ball:
	""" Largest contained ball; the radius is +inf when it can grow without bound """
	n = p.dimension
	cost = np.zeros(n + 1)
	cost[-1] = -1.0
	system = np.hstack([p.normals, np.ones((len(p), 1))])
	res = _linprog(cost, system, p.offsets, bounds=[(None, None)] * n + [(0, None)])
	if res.status == 3:
		return Ball(feasible_point(p), math.inf)
	if res.status == 2:
		raise EmptySetError("half-spaces have an empty intersection")
	if res.status != 0:
		raise EmptySetError("Chebyshev solve failed: %s" % res.message)
	return Ball(res.x[:n], max(0.0, float(res.x[n])))

def translation_witness(p: HPolytope, r: float, tol: Optional[float] = None) -> Optional[Vec]:
	""" v with <n_i, v> = -r for every facet, so that erosion by r is translation by v """
	if r <= 0:
		raise InvalidRadiusError("translation witness needs r > 0, got %r" % (r,))
	p = reduce(p)
	if tol is None:
		tol = p.default_tol()
	target = np.full(len(p), -float(r))
	solution = np.linalg.lstsq(p.normals, target, rcond=None)[0]
	residual = float(np.max(np.abs(p.normals @ solution - target)))
	if residual > tol:
		return None
	return as_vec(solution)


class ResilienceCertificate(object):
	""" Outcome of classify() together with its witness """

	def __init__(self, kind: str, inscribed: Optional[Ball] = None, exscribed: Optional[Ball] = None,
			translation: Optional[Vec] = None, slide: Optional[Vec] = None) -> None:
		if kind not in KINDS:
			raise ValueError("unknown certificate kind %r" % (kind,))
		present = {KIND_DECREASING: inscribed, KIND_INCREASING: exscribed, KIND_ISOMETRIC: translation}
		for name, witness in present.items():
			if (name == kind) != (witness is not None):
				raise ValueError("certificate of kind %s has wrong witnesses" % kind)
		if inscribed is not None and not inscribed.radius > 0:
			raise ValueError("inscribed radius must be positive")
		if exscribed is not None and not exscribed.radius > 0:
			raise ValueError("exscribed radius must be positive")
		if slide is not None and inscribed is None:
			raise ValueError("only an inscribed ball can slide")
		self.kind = kind
		self.inscribed = inscribed
		self.exscribed = exscribed
		self.translation = None if translation is None else as_vec(translation)
		# center motion per unit radius when the inscribed balls form a family
		self.slide = None if slide is None else as_vec(slide)

	@property
	def direction(self) -> Optional[Vec]:
		""" Unit direction of the unit-radius translation """
		if self.translation is None:
			return None
		return as_vec(self.translation / np.linalg.norm(self.translation))

	@property
	def angle(self) -> Optional[float]:
		""" Common angle between the facet normals and the translation direction """
		if self.translation is None:
			return None
		return math.acos(min(1.0, 1.0 / float(np.linalg.norm(self.translation))))

	def to_json(self) -> Dict[str, Any]:
		data = {"format": 1, "kind": self.kind}  # type: Dict[str, Any]
		if self.inscribed is not None:
			data["inscribed"] = self.inscribed.to_json()
		if self.slide is not None:
			data["slide"] = self.slide.tolist()
		if self.exscribed is not None:
			data["exscribed"] = self.exscribed.to_json()
		if self.translation is not None:
			data["translation"] = self.translation.tolist()
			data["direction"] = self.direction.tolist()
			data["angle"] = self.angle
		return data

	@classmethod
	def from_json(cls, data: Dict[str, Any]) -> "ResilienceCertificate":
		return cls(data["kind"],
				Ball.from_json(data["inscribed"]) if "inscribed" in data else None,
				Ball.from_json(data["exscribed"]) if "exscribed" in data else None,
				data.get("translation"), data.get("slide"))

	def __repr__(self) -> str:
		return '<ResilienceCertificate %s>' % self.kind


def classify(p: HPolytope, tol: Optional[float] = None) -> ResilienceCertificate:
	"""
	Decides how p is resilient to erosion

	Checks run in the order decreasing, increasing, isometric, so a lone
	half-space (which is all three) reports decreasing.

	Cones also report decreasing. Their inscribed balls form a family whose
	radius is fixed arbitrarily at max(1, |d|); the certificate keeps the
	slide along that family so larger radii can still be predicted.
	"""
	p = reduce(p)
	ball = inscribed_ball(p, tol)
	if ball is not None:
		return ResilienceCertificate(KIND_DECREASING, inscribed=ball, slide=tangent_slide(p))
	ball = exscribed_ball(p, tol)
	if ball is not None:
		return ResilienceCertificate(KIND_INCREASING, exscribed=ball)
	witness = translation_witness(p, 1.0, tol)
	if witness is not None:
		return ResilienceCertificate(KIND_ISOMETRIC, translation=witness)
	return ResilienceCertificate(KIND_NONE)

def predicted_sigma(cert: ResilienceCertificate, r: float) -> Similarity:
	"""
	Similarity mapping p onto its erosion by r, as predicted by the certificate

	A decreasing certificate needs r below the inscribed radius, unless it
	carries a slide: then the center moves along the family to a ball of
	radius 2r first.
	"""
	if r < 0:
		raise InvalidRadiusError("erosion radius must be nonnegative, got %r" % (r,))
	if cert.kind == KIND_DECREASING:
		big = cert.inscribed.radius
		if r >= big:
			if cert.slide is None:
				raise RadiusTooLargeError("radius %g reaches the inscribed radius %g" % (r, big))
			grown = 2.0 * r
			center = cert.inscribed.center + (grown - big) * cert.slide
			return Similarity.homothety(center, (grown - r) / grown)
		return Similarity.homothety(cert.inscribed.center, (big - r) / big)
	if cert.kind == KIND_INCREASING:
		rho = cert.exscribed.radius
		return Similarity.homothety(cert.exscribed.center, (rho + r) / rho)
	if cert.kind == KIND_ISOMETRIC:
		# the witness system is linear in r
		return Similarity.translation(r * cert.translation)
	raise NotResilientError("polytope is not resilient, no similarity to predict")

def facet_residual(p: HPolytope, q: HPolytope) -> float:
	"""
	Largest mismatch between the facets of p and q under the best pairing

	Normals are paired by chord length |n - m| with the Hungarian method; the
	result is the larger of the worst chord and the worst offset difference,
	or +inf when the facet counts differ.
	"""
	p, q = reduce(p), reduce(q)
	if len(p) != len(q) or p.dimension != q.dimension:
		return math.inf
	chords = np.linalg.norm(p.normals[:, np.newaxis, :] - q.normals[np.newaxis, :, :], axis=2)
	rows, cols = linear_sum_assignment(chords)
	worst_chord = float(np.max(chords[rows, cols]))
	worst_offset = float(np.max(np.abs(p.offsets[rows] - q.offsets[cols])))
	return max(worst_chord, worst_offset)

def verify_similarity(p: HPolytope, r: float, s: Similarity, tol: Optional[float] = None) -> bool:
	""" True iff the erosion of p by r and s(p) have matching facet sets """
	p = reduce(p)
	if tol is None:
		tol = p.default_tol()
	eroded = erode_polytope(p, r)
	return facet_residual(eroded, apply_similarity(p, s)) <= tol

def radius_sequence(r: float, alpha: float, i: int) -> float:
	"""
	Partial sums of radii by which a resilient set stays resilient

	i > 0 gives r * (1 + alpha + ... + alpha^(i-1)) with similarity sigma^i,
	i < 0 gives r * (1/alpha + ... + 1/alpha^|i|) with sigma^i.
	"""
	if not r > 0:
		raise InvalidRadiusError("radius must be positive, got %r" % (r,))
	if not alpha > 0:
		raise ValueError("scale must be positive, got %r" % (alpha,))
	if i == 0:
		raise ValueError("the radius sequence has no index 0")
	if i > 0:
		return math.fsum(r * alpha ** k for k in range(i))
	return math.fsum(r / alpha ** k for k in range(1, -i + 1))

def expansion_resilient(p: HPolytope, r: float, tol: Optional[float] = None) -> bool:
	"""
	True iff every supporting half-space lies at one distance R > r from a point

	Within H-representations only a lone half-space qualifies: any polytope
	with two or more facets has supporting half-spaces at its ridges whose
	distances to a point vary.
	"""
	if r < 0:
		raise InvalidRadiusError("radius must be nonnegative, got %r" % (r,))
	return len(reduce(p)) == 1

def vertices_2d(p: HPolytope, bound: float) -> np.ndarray:
	"""
	Counter-clockwise vertices of p clipped to the square [-bound, bound]^2
	"""
	check_dimension(2, p.dimension, "polytope")
	clipped = reduce(HPolytope(p.halfspaces + box([-bound, -bound], [bound, bound]).halfspaces))
	points = []
	for i in range(len(clipped)):
		for j in range(i + 1, len(clipped)):
			system = clipped.normals[[i, j]]
			if abs(np.linalg.det(system)) < 1e-12:
				continue
			vertex = np.linalg.solve(system, clipped.offsets[[i, j]])
			if clipped.contains(vertex, tol=1e-9):
				points.append(vertex)
	if not points:
		return np.zeros((0, 2))
	points = np.unique(np.round(np.array(points), 9), axis=0)
	center = points.mean(axis=0)
	order = np.argsort(np.arctan2(points[:, 1] - center[1], points[:, 0] - center[0]))
	return points[order] + 0.0
