# -*- coding: utf-8 -*-
"""
Exact morphology of 1-D sets with rational endpoints.

A set is a sorted tuple of disjoint, maximal intervals. Every endpoint is a
Fraction and carries its own closed flag; a missing endpoint (None) is
infinite, which gives the rays (-inf, b] and [a, +inf). Erosion produces
closed intervals and expansion open ones, so complements round-trip exactly.

The 7-adic example is built from the truncated subset-sum set

	A_k = { sum e_j * 4 * 7^j : j <= k, e_j in {-1, 0, 1} }

with Y = E_1(A_k) and X = complement of Y. On the window [-W, W] reported by
GeneratorTruncation the truncated sets agree with the infinite ones.

Text format, one interval per line:

	[-3 -1]
	(1/2 +inf)
	(-inf -5]
	0 7/2            (plain pairs read as closed)
"""

import itertools
import logging
import math
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, TextIO, Tuple, Union

from eropy.geometry import MorphologyError

logger = logging.getLogger(__name__)

MAX_TRUNCATION = 8
GENERATOR = 4
BASE = 7
# margin between the safe window and the verification window
WINDOW_SLACK = 10

Number = Union[int, float, str, Fraction]


class TruncationTooLargeError(MorphologyError, ValueError):
	""" Raised when the generator truncation exceeds MAX_TRUNCATION """
	pass
class WindowTooSmallError(MorphologyError, ValueError):
	""" Raised when the verification window cannot hold the checked structure """
	pass
class NonpositiveScaleError(MorphologyError, ValueError):
	""" Raised for scale factors <= 0 """
	pass
class IntervalFormatError(MorphologyError, ValueError):
	""" Raised on malformed interval text """
	pass


def to_fraction(value: Number) -> Fraction:
	""" Exact conversion; floats go through their repr so 0.6 stays 3/5 """
	if isinstance(value, Fraction):
		return value
	if isinstance(value, float):
		if not math.isfinite(value):
			raise ValueError("interval endpoints must be finite, got %r" % (value,))
		return Fraction(repr(value))
	if isinstance(value, str):
		return Fraction(value.strip())
	return Fraction(value)


class Interval(object):
	""" One interval, a None endpoint is infinite (and never closed) """
	__slots__ = ('lo', 'hi', 'lo_closed', 'hi_closed')

	def __init__(self, lo: Optional[Number], hi: Optional[Number], lo_closed: bool = True,
			hi_closed: bool = True) -> None:
		self.lo = None if lo is None else to_fraction(lo)
		self.hi = None if hi is None else to_fraction(hi)
		self.lo_closed = bool(lo_closed) and self.lo is not None
		self.hi_closed = bool(hi_closed) and self.hi is not None

	@property
	def empty(self) -> bool:
		if self.lo is None or self.hi is None:
			return False
		if self.lo == self.hi:
			return not (self.lo_closed and self.hi_closed)
		return self.lo > self.hi

	def contains(self, x: Number) -> bool:
		x = to_fraction(x)
		if self.lo is not None and (x < self.lo or (x == self.lo and not self.lo_closed)):
			return False
		if self.hi is not None and (x > self.hi or (x == self.hi and not self.hi_closed)):
			return False
		return True

	def key(self) -> Tuple:
		return (self.lo, self.lo_closed, self.hi, self.hi_closed)

	def __eq__(self, other: object) -> bool:
		return isinstance(other, Interval) and self.key() == other.key()

	def __hash__(self) -> int:
		return hash(self.key())

	def __repr__(self) -> str:
		return '<Interval %s>' % format_interval(self)


def _lower_key(item: Interval) -> Tuple:
	if item.lo is None:
		return (0, Fraction(0), 0)
	return (1, item.lo, 0 if item.lo_closed else 1)

def _touches(first: Interval, second: Interval) -> bool:
	""" True when the union of two lower-sorted intervals is an interval """
	if first.hi is None or second.lo is None:
		return True
	if second.lo < first.hi:
		return True
	return second.lo == first.hi and (first.hi_closed or second.lo_closed)

def _upper_of(first: Interval, second: Interval) -> Tuple[Optional[Fraction], bool]:
	if first.hi is None or second.hi is None:
		return None, False
	if first.hi == second.hi:
		return first.hi, first.hi_closed or second.hi_closed
	if first.hi > second.hi:
		return first.hi, first.hi_closed
	return second.hi, second.hi_closed

def _normalize(intervals: Iterable[Interval]) -> List[Interval]:
	merged = []  # type: List[Interval]
	for item in sorted((i for i in intervals if not i.empty), key=_lower_key):
		if merged and _touches(merged[-1], item):
			last = merged[-1]
			hi, hi_closed = _upper_of(last, item)
			merged[-1] = Interval(last.lo, hi, last.lo_closed, hi_closed)
		else:
			merged.append(item)
	return merged


class IntervalSet1D(object):
	""" Sorted, disjoint, maximal intervals """

	def __init__(self, intervals: Iterable[Interval] = ()) -> None:
		self.intervals = tuple(_normalize(intervals))

	@classmethod
	def closed(cls, pairs: Iterable[Tuple[Optional[Number], Optional[Number]]]) -> "IntervalSet1D":
		return cls(Interval(lo, hi) for lo, hi in pairs)

	@classmethod
	def points(cls, values: Iterable[Number]) -> "IntervalSet1D":
		return cls(Interval(v, v) for v in values)

	@classmethod
	def real_line(cls) -> "IntervalSet1D":
		return cls([Interval(None, None)])

	@property
	def is_empty(self) -> bool:
		return not self.intervals

	@property
	def is_closed(self) -> bool:
		""" True when every finite endpoint is included """
		return all(i.lo_closed or i.lo is None for i in self.intervals) and \
				all(i.hi_closed or i.hi is None for i in self.intervals)

	@property
	def is_open(self) -> bool:
		return not any(i.lo_closed or i.hi_closed for i in self.intervals)

	def contains(self, x: Number) -> bool:
		return any(i.contains(x) for i in self.intervals)

	def endpoints(self) -> List[Tuple[Fraction, bool]]:
		""" Finite endpoints in order, each with its closed flag """
		result = []
		for i in self.intervals:
			if i.lo is not None:
				result.append((i.lo, i.lo_closed))
			if i.hi is not None:
				result.append((i.hi, i.hi_closed))
		return result

	def __len__(self) -> int:
		return len(self.intervals)

	def __iter__(self):
		return iter(self.intervals)

	def __eq__(self, other: object) -> bool:
		return isinstance(other, IntervalSet1D) and self.intervals == other.intervals

	def __hash__(self) -> int:
		return hash(self.intervals)

	def __repr__(self) -> str:
		shown = " ".join(format_interval(i) for i in self.intervals[:6])
		more = " ..." if len(self.intervals) > 6 else ""
		return '<IntervalSet1D %i intervals: %s%s>' % (len(self.intervals), shown, more)


def complement(s: IntervalSet1D) -> IntervalSet1D:
	gaps = []
	lo, lo_closed = None, False  # type: Optional[Fraction], bool
	for item in s.intervals:
		if item.lo is not None:
			gaps.append(Interval(lo, item.lo, lo_closed, not item.lo_closed))
		if item.hi is None:
			return IntervalSet1D(gaps)
		lo, lo_closed = item.hi, not item.hi_closed
	gaps.append(Interval(lo, None, lo_closed, False))
	return IntervalSet1D(gaps)

def union(*sets: IntervalSet1D) -> IntervalSet1D:
	return IntervalSet1D(itertools.chain.from_iterable(s.intervals for s in sets))

def intersection(*sets: IntervalSet1D) -> IntervalSet1D:
	return complement(union(*(complement(s) for s in sets)))

def clip(s: IntervalSet1D, lo: Number, hi: Number) -> IntervalSet1D:
	""" s restricted to the closed window [lo, hi] """
	return intersection(s, IntervalSet1D([Interval(lo, hi)]))

def erode1d(s: IntervalSet1D, r: Number) -> IntervalSet1D:
	""" Points at distance >= r from the complement; closed for r > 0 """
	r = to_fraction(r)
	if r < 0:
		raise ValueError("erosion radius must be nonnegative, got %s" % r)
	if r == 0:
		return s
	eroded = []
	for i in s.intervals:
		eroded.append(Interval(None if i.lo is None else i.lo + r, None if i.hi is None else i.hi - r))
	return IntervalSet1D(eroded)

def expand1d(s: IntervalSet1D, r: Number) -> IntervalSet1D:
	""" Union of open r-balls around the points of s; E_0 is the identity """
	r = to_fraction(r)
	if r < 0:
		raise ValueError("expansion radius must be nonnegative, got %s" % r)
	if r == 0:
		return s
	expanded = []
	for i in s.intervals:
		expanded.append(Interval(None if i.lo is None else i.lo - r, None if i.hi is None else i.hi + r,
				False, False))
	return IntervalSet1D(expanded)

def scale1d(s: IntervalSet1D, c: Number) -> IntervalSet1D:
	c = to_fraction(c)
	if c <= 0:
		raise NonpositiveScaleError("scale factor must be positive, got %s" % c)
	return IntervalSet1D(Interval(None if i.lo is None else i.lo * c, None if i.hi is None else i.hi * c,
			i.lo_closed, i.hi_closed) for i in s.intervals)


def subset_sums(k: int) -> List[int]:
	""" All sums of +-4*7^j for j <= k, each term used at most once """
	if k < 0:
		raise ValueError("truncation must be nonnegative, got %i" % k)
	if k > MAX_TRUNCATION:
		raise TruncationTooLargeError("truncation %i exceeds %i" % (k, MAX_TRUNCATION))
	terms = [GENERATOR * BASE ** j for j in range(k + 1)]
	sums = set()
	for signs in itertools.product((-1, 0, 1), repeat=k + 1):
		sums.add(sum(e * t for e, t in zip(signs, terms)))
	return sorted(sums)

def safe_window(k: int) -> int:
	"""
	Bound below which the truncated and the full subset-sum sets agree

	A sum using an omitted term 4*7^m (m > k) has magnitude at least
	4*7^(k+1) minus all the kept magnitudes.
	"""
	return GENERATOR * BASE ** (k + 1) - sum(GENERATOR * BASE ** j for j in range(k + 1))


class GeneratorTruncation(object):
	""" Largest kept exponent k and the window [-W, W] on which results hold """

	def __init__(self, k: int, window: Optional[Number] = None) -> None:
		if k < 0:
			raise ValueError("truncation must be nonnegative, got %i" % k)
		if k > MAX_TRUNCATION:
			raise TruncationTooLargeError("truncation %i exceeds %i" % (k, MAX_TRUNCATION))
		self.k = k
		safe = safe_window(k)
		self.window = to_fraction(safe - WINDOW_SLACK if window is None else window)
		if self.window > safe:
			raise ValueError("window %s exceeds the safe window %i for k=%i" % (self.window, safe, k))
		if self.window <= 0:
			raise WindowTooSmallError("no usable window for k=%i" % k)

	def __repr__(self) -> str:
		return '<GeneratorTruncation k:%i window:%s>' % (self.k, self.window)


def build_A(k: int) -> IntervalSet1D:
	return IntervalSet1D.points(subset_sums(k))

def build_Y(k: int) -> IntervalSet1D:
	return expand1d(build_A(k), 1)

def build_X(k: int) -> Tuple[IntervalSet1D, GeneratorTruncation]:
	""" X_k = complement of E_1(A_k), with the window on which it is exact """
	truncation = GeneratorTruncation(k)
	return complement(build_Y(k)), truncation


def endpoint_mismatches(a: IntervalSet1D, b: IntervalSet1D) -> List[Tuple[Fraction, bool]]:
	""" Endpoints (with closed flags) present in exactly one of a and b """
	left, right = set(a.endpoints()), set(b.endpoints())
	return sorted(left ^ right)

def find_scale(a: IntervalSet1D, b: IntervalSet1D, window: Number) -> Optional[Fraction]:
	"""
	Rational c > 0 with a = c * b on [-m, m], m = min(window, c * window)

	Both sets are taken as valid on [-window, window]. The only candidate is
	the ratio of the first positive endpoints, since c * b must move the first
	endpoint of b onto that of a.
	"""
	window = to_fraction(window)
	first_a = [e for e, _ in clip(a, -window, window).endpoints() if 0 < e < window]
	first_b = [e for e, _ in clip(b, -window, window).endpoints() if 0 < e < window]
	if not first_a or not first_b:
		logger.debug("no positive endpoint inside the window, cannot infer a scale")
		return None
	c = first_a[0] / first_b[0]
	reach = min(window, c * window)
	if clip(a, -reach, reach) == clip(scale1d(b, c), -reach, reach):
		return c
	return None


class ScaleCheck(object):
	""" One lhs == scale * rhs comparison of the 7-adic example """

	def __init__(self, name: str, radius: Fraction, scale: Fraction, window: Fraction,
			mismatches: List[Tuple[Fraction, bool]], required: bool = True) -> None:
		self.name = name
		self.radius = radius
		self.scale = scale
		self.window = window
		self.mismatches = mismatches
		self.required = required

	@property
	def passed(self) -> bool:
		return not self.mismatches

	def to_json(self) -> dict:
		return {"name": self.name, "radius": str(self.radius), "scale": str(self.scale),
				"window": str(self.window), "passed": self.passed, "required": self.required,
				"mismatches": [[str(e), closed] for e, closed in self.mismatches]}

	def __repr__(self) -> str:
		return '<ScaleCheck %s %s>' % (self.name, "pass" if self.passed else "FAIL")


class Example1Report(object):
	""" Outcome of verify_example1 """

	def __init__(self, k: int, window: Fraction, checks: Sequence[ScaleCheck]) -> None:
		self.k = k
		self.window = window
		self.checks = list(checks)

	@property
	def passed(self) -> bool:
		return all(c.passed for c in self.checks if c.required)

	def to_json(self) -> dict:
		return {"format": 1, "k": self.k, "window": str(self.window), "passed": self.passed,
				"checks": [c.to_json() for c in self.checks]}

	def __repr__(self) -> str:
		return '<Example1Report k:%i %s>' % (self.k, "pass" if self.passed else "FAIL")


def _compare(name: str, lhs: IntervalSet1D, rhs: IntervalSet1D, radius: Fraction, scale: Fraction,
		window: Fraction, required: bool = True) -> ScaleCheck:
	if window <= 0:
		raise WindowTooSmallError("check %s has no room inside the window" % name)
	mismatches = endpoint_mismatches(clip(lhs, -window, window), clip(rhs, -window, window))
	if mismatches:
		logger.info("%s differs at %i endpoints, first %s", name, len(mismatches), mismatches[0][0])
	return ScaleCheck(name, radius, scale, window, mismatches, required)

def verify_example1(k: int) -> Example1Report:
	"""
	Checks the scale identities of the 7-adic example exactly on its window

	(a) E_2(Y) = 7 Y
	(b) e_2(X) = 7 X
	(c) e_16(X) = 49 X, radius 2 + 2*7 with the squared similarity (k >= 3)

	For k >= 3 it also reports, without requiring it, the erosion by 2*7
	against 49 X, which fails: E_14(Y) reaches only E_47 of 49 A while
	49 Y is E_49 of 49 A.
	"""
	if k < 2:
		raise WindowTooSmallError("the 7-adic checks need k >= 2, got %i" % k)
	x, truncation = build_X(k)
	y = complement(x)
	w = truncation.window
	two, seven = Fraction(2), Fraction(BASE)
	checks = [
		_compare("E2(Y)=7Y", expand1d(y, two), scale1d(y, seven), two, seven, w - two),
		_compare("e2(X)=7X", erode1d(x, two), scale1d(x, seven), two, seven, w - two),
	]
	if k >= 3:
		radius = two + two * seven
		checks.append(_compare("e16(X)=49X", erode1d(x, radius), scale1d(x, seven ** 2), radius,
				seven ** 2, w - radius))
		checks.append(_compare("e14(X)=49X", erode1d(x, two * seven), scale1d(x, seven ** 2),
				two * seven, seven ** 2, w - two * seven, required=False))
	return Example1Report(k, w, checks)

def discreteness_evidence(k: int = 3, radii: Sequence[Number] = (1, 3, 5)) -> List[Tuple[Fraction, Optional[Fraction]]]:
	""" For each radius rho, the scale c with e_rho(X) = c X on the window, or None """
	x, truncation = build_X(k)
	result = []
	for rho in radii:
		rho = to_fraction(rho)
		window = truncation.window - rho
		result.append((rho, find_scale(erode1d(x, rho), x, window)))
	return result


def format_endpoint(value: Optional[Fraction], sign: str) -> str:
	return "%sinf" % sign if value is None else str(value)

def format_interval(i: Interval) -> str:
	return "%s%s %s%s" % ("[" if i.lo_closed else "(", format_endpoint(i.lo, "-"),
			format_endpoint(i.hi, "+"), "]" if i.hi_closed else ")")

def _parse_endpoint(token: str, infinite: str, lineno: int) -> Optional[Fraction]:
	if token in (infinite, infinite.lstrip("+")):
		return None
	try:
		return Fraction(token)
	except (ValueError, ZeroDivisionError):
		raise IntervalFormatError("line %i: bad endpoint %r" % (lineno, token))

def parse_intervals(text: str) -> IntervalSet1D:
	intervals = []
	for lineno, line in enumerate(text.splitlines(), 1):
		line = line.strip()
		if not line or line.startswith("#"):
			continue
		lo_closed = hi_closed = True
		if line[0] in "[(":
			if line[-1] not in "])":
				raise IntervalFormatError("line %i: unterminated interval %r" % (lineno, line))
			lo_closed, hi_closed = line[0] == "[", line[-1] == "]"
			line = line[1:-1]
		tokens = line.replace(",", " ").split()
		if len(tokens) != 2:
			raise IntervalFormatError("line %i: expected two endpoints, got %i" % (lineno, len(tokens)))
		lo = _parse_endpoint(tokens[0], "-inf", lineno)
		hi = _parse_endpoint(tokens[1], "+inf", lineno)
		if lo is not None and hi is not None and lo > hi:
			raise IntervalFormatError("line %i: lower endpoint above upper" % lineno)
		intervals.append(Interval(lo, hi, lo_closed, hi_closed))
	return IntervalSet1D(intervals)

def format_intervals(s: IntervalSet1D) -> str:
	return "".join("%s\n" % format_interval(i) for i in s.intervals)

def dump(s: IntervalSet1D, fileobj: TextIO) -> None:
	fileobj.write(format_intervals(s))

def load(fileobj: TextIO) -> IntervalSet1D:
	return parse_intervals(fileobj.read())
