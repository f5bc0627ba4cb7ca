# -*- coding: utf-8 -*-
"""
The eropy command line.

	eropy generate hexagon.json -o hexagon.scene.json
	eropy analyze hexagon.scene.json --radius 0.2
	eropy verify spiral.json --radius 0.2 --predicted --grid 1024 --spacing 0.02
	eropy render square.json -o square.svg --layers erosion:0.15,0.3
	eropy acceptance --filter interval1d --results results.json
	eropy acceptance --filter figures --record

Scenes are JSON objects with "format": 1, an optional "dimension", and
exactly one payload: "polytope" (a list of half-spaces), "intervals" (text in
the interval format, or a file name), "raster" (a PGM file name, next to its
sidecar) or "generator" (a generator spec). Relative file names are taken
from the scene's directory. An optional "transform" similarity is applied to
the payload and an optional "radii" list feeds analyze and render.

Generator specs are JSON objects with "format": 1 and a "type" such as
regular_polygon, triangle, box, tent, random_tangent, example1, sierpinski,
koch, ifs, spiral, discrete_spiral, plaid, teardrop, sierpinski_resilient or
koch_resilient. Raster generators take "grid", "spacing" and "origin".

Exit codes: 0 success, 2 input error, 3 not resilient, 4 failed verification.
"""

import argparse
import json
import logging
import math
import os
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from eropy import acceptance, convex, generators, interval1d, raster, render
from eropy.convex import HPolytope
from eropy.geometry import MorphologyError, Similarity, check_dimension
from eropy.raster import RasterSet

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NOT_RESILIENT = 3
EXIT_FAILED = 4

FORMAT = 1
POLYTOPE = "polytope"
INTERVALS = "intervals"
RASTER = "raster"
GENERATOR = "generator"
PAYLOADS = (POLYTOPE, INTERVALS, RASTER, GENERATOR)


class SceneError(MorphologyError, ValueError):
	""" Raised on malformed scene or generator files """
	pass

class Failure(Exception):
	""" Carries an exit code out of a command """

	def __init__(self, code: int, message: str) -> None:
		super(Failure, self).__init__(message)
		self.code = code


_REQUIRED = object()

def field(data: Dict[str, Any], name: str, kind: Callable = float, default: Any = _REQUIRED, where: str = "scene") -> Any:
	""" data[name] converted with kind, with a diagnostic naming the field """
	if name not in data:
		if default is _REQUIRED:
			raise SceneError("%s: missing field %r" % (where, name))
		return default
	try:
		return kind(data[name])
	except (TypeError, ValueError) as err:
		raise SceneError("%s: field %r: %s" % (where, name, err))

def _vector(value: Any) -> List[float]:
	if not isinstance(value, (list, tuple)):
		raise ValueError("expected a list of numbers, got %r" % (value,))
	return [float(v) for v in value]

def read_json(path: str) -> Dict[str, Any]:
	try:
		with open(path) as f:
			data = json.load(f)
	except json.JSONDecodeError as err:
		raise SceneError("%s:%i:%i: %s" % (path, err.lineno, err.colno, err.msg))
	except IOError as err:
		raise SceneError("%s: %s" % (path, err.strerror or err))
	if not isinstance(data, dict):
		raise SceneError("%s: expected a JSON object" % path)
	version = data.get("format", FORMAT)
	if version != FORMAT:
		raise SceneError("%s: unsupported format %r" % (path, version))
	return data

def write_json(data: Dict[str, Any], path: Optional[str]) -> None:
	text = json.dumps(data, indent=1, sort_keys=True) + "\n"
	if path is None or path == "-":
		sys.stdout.write(text)
	else:
		with open(path, "w") as f:
			f.write(text)


class Options(object):
	""" Window and randomness defaults shared by the generators """

	def __init__(self, grid: int = raster.DEFAULT_GRID, spacing: float = raster.DEFAULT_SPACING, seed: int = 0) -> None:
		self.grid = grid
		self.spacing = spacing
		self.seed = seed

	def window(self, spec: Dict[str, Any], where: str) -> RasterSet:
		grid = field(spec, "grid", int, self.grid, where)
		spacing = field(spec, "spacing", float, self.spacing, where)
		origin = field(spec, "origin", _vector, None, where)
		if grid < 2:
			raise SceneError("%s: grid must have at least 2 pixels" % where)
		try:
			return RasterSet.empty((grid, grid), spacing, origin)
		except ValueError as err:
			raise SceneError("%s: %s" % (where, err))


class Scene(object):
	""" One loaded payload with what is known about it """

	def __init__(self, kind: str, payload: Any, radii: Sequence[float] = (),
			predict: Optional[Callable[[float], Similarity]] = None) -> None:
		self.kind = kind
		self.payload = payload
		self.radii = list(radii)
		self.predict = predict

	@property
	def dimension(self) -> int:
		if self.kind == INTERVALS:
			return 1
		return self.payload.dimension

	def __repr__(self) -> str:
		return '<Scene %s %r>' % (self.kind, self.payload)


# generators

def _homothety_prediction(center: Sequence[float], radius: float) -> Callable[[float], Similarity]:
	return lambda r: Similarity.homothety(np.array(center, dtype=float), (radius - r) / radius)

def generate(spec: Dict[str, Any], options: Options, where: str = "generator") -> Scene:
	""" Builds the payload a generator spec describes """
	kind = field(spec, "type", str, where=where)
	if kind == "regular_polygon":
		p = generators.regular_polygon(field(spec, "sides", int, where=where), field(spec, "circumradius", float, 1.0, where),
				field(spec, "center", _vector, (0.0, 0.0), where), field(spec, "rotation", float, 0.0, where))
		return Scene(POLYTOPE, p)
	if kind == "triangle":
		p = generators.triangle(field(spec, "angles", _vector, where=where), field(spec, "inradius", float, 1.0, where),
				field(spec, "center", _vector, (0.0, 0.0), where))
		return Scene(POLYTOPE, p)
	if kind == "box":
		return Scene(POLYTOPE, generators.box_polytope(field(spec, "width", where=where), field(spec, "height", where=where)))
	if kind == "tent":
		gamma13 = field(spec, "gamma13", where=where)
		p = generators.tent(gamma13, field(spec, "gamma24", float, gamma13, where), field(spec, "radius", float, 1.0, where),
				field(spec, "equal", bool, False, where))
		return Scene(POLYTOPE, p)
	if kind == "random_tangent":
		rng = np.random.default_rng(field(spec, "seed", int, options.seed, where))
		p = generators.random_tangent_polytope(rng, field(spec, "dimension", int, 2, where),
				field(spec, "facets", int, 6, where), field(spec, "radius", float, 1.0, where))
		return Scene(POLYTOPE, p)
	if kind == "example1":
		k = field(spec, "k", int, 3, where)
		which = field(spec, "set", str, "X", where)
		builders = {"A": interval1d.build_A, "Y": interval1d.build_Y, "X": lambda k: interval1d.build_X(k)[0]}
		if which not in builders:
			raise SceneError("%s: field 'set' must be one of A, Y, X" % where)
		return Scene(INTERVALS, builders[which](k))

	window = options.window(spec, where)
	if kind in ("sierpinski", "koch", "ifs"):
		if kind == "ifs":
			try:
				ifs = generators.IFS.from_json(spec)
			except (KeyError, TypeError, ValueError) as err:
				raise SceneError("%s: bad maps: %s" % (where, err))
		elif kind == "sierpinski":
			ifs = generators.sierpinski_ifs(field(spec, "size", float, 1.0, where))
		else:
			ifs = generators.koch_ifs(field(spec, "length", float, 1.0, where))
		return Scene(RASTER, generators.ifs_invariant(ifs, field(spec, "depth", int, 10, where), window))
	if kind == "spiral":
		params = generators.SpiralParams(field(spec, "a", float, generators.SPIRAL_A, where),
				field(spec, "b", float, generators.SPIRAL_B, where))
		return Scene(RASTER, generators.spiral_S1(params, window),
				predict=lambda r: generators.spiral_similarity(r, params.b))
	if kind == "discrete_spiral":
		s = generators.discrete_spiral_similarity(field(spec, "scale", float, generators.DISCRETE_SPIRAL_SCALE, where),
				field(spec, "angle", float, generators.DISCRETE_SPIRAL_ANGLE, where))
		q = generators.discrete_spiral_Q(window, s, r=field(spec, "r_prime", float, 0.0, where))
		return Scene(RASTER, q, predict=lambda r: s)
	if kind == "plaid":
		rs = generators.plaid(field(spec, "k", int, 2, where), field(spec, "angles", _vector, (0.0, math.pi / 2), where),
				window, field(spec, "radial", bool, True, where))
		return Scene(RASTER, rs)
	if kind == "teardrop":
		radius = field(spec, "radius", float, 1.0, where)
		center = field(spec, "center", _vector, (0.0, 0.0), where)
		rs = generators.teardrop(window, radius, field(spec, "apex", _vector, where=where), center)
		return Scene(RASTER, rs, predict=_homothety_prediction(center, radius))
	if kind in ("sierpinski_resilient", "koch_resilient"):
		r_prime = field(spec, "r_prime", float, 8 * window.spacing, where)
		k_range = tuple(int(k) for k in field(spec, "k_range", _vector, (0, 8), where))
		if kind == "sierpinski_resilient":
			ifs = generators.sierpinski_ifs()
			rs = generators.sierpinski_resilient(window, r_prime, k_range)
		else:
			ifs = generators.koch_ifs()
			rs = generators.koch_resilient(window, r_prime, k_range)
		return Scene(RASTER, rs, predict=lambda r: ifs.maps[0].inverse())
	raise SceneError("%s: unknown generator type %r" % (where, kind))


# scenes

def _relative(base: str, name: str) -> str:
	return name if os.path.isabs(name) else os.path.join(os.path.dirname(base), name)

def load_scene(path: str, options: Options) -> Scene:
	data = read_json(path)
	present = [name for name in PAYLOADS if name in data]
	if "type" in data and not present:
		scene = generate(data, options, path)
		present = [GENERATOR]
	elif len(present) != 1:
		raise SceneError("%s: expected exactly one payload of %s, found %s" % (path, ", ".join(PAYLOADS), present or "none"))
	elif present[0] == POLYTOPE:
		try:
			scene = Scene(POLYTOPE, HPolytope.from_json(data))
		except (KeyError, TypeError, ValueError) as err:
			raise SceneError("%s: bad polytope: %s" % (path, err))
	elif present[0] == INTERVALS:
		text = field(data, INTERVALS, str, where=path)
		if "\n" not in text and not text.lstrip().startswith(("[", "(")) and os.path.exists(_relative(path, text)):
			with open(_relative(path, text)) as f:
				text = f.read()
		scene = Scene(INTERVALS, interval1d.parse_intervals(text))
	elif present[0] == RASTER:
		scene = Scene(RASTER, raster.load(_relative(path, field(data, RASTER, str, where=path))))
	else:
		if not isinstance(data[GENERATOR], dict):
			raise SceneError("%s: field 'generator' must be an object" % path)
		scene = generate(data[GENERATOR], options, "%s: generator" % path)

	if "dimension" in data:
		check_dimension(field(data, "dimension", int, where=path), scene.dimension, path)
	if "transform" in data:
		scene = transform_scene(scene, data["transform"], path)
	scene.radii = field(data, "radii", _vector, [], path)
	logger.debug("loaded %r from %s", scene, path)
	return scene

def transform_scene(scene: Scene, data: Dict[str, Any], where: str) -> Scene:
	try:
		s = Similarity.from_json(data)
	except (KeyError, TypeError, ValueError) as err:
		raise SceneError("%s: bad transform: %s" % (where, err))
	check_dimension(scene.dimension, s.dimension, "%s: transform" % where)
	if scene.kind == POLYTOPE:
		return Scene(POLYTOPE, convex.apply_similarity(scene.payload, s))
	if scene.kind == RASTER:
		return Scene(RASTER, raster.resample(scene.payload, s))
	raise SceneError("%s: transforms apply to polytope and raster payloads only" % where)

def load_similarity(path: str) -> Similarity:
	data = read_json(path)
	try:
		return Similarity.from_json(data.get("similarity", data))
	except (KeyError, TypeError, ValueError) as err:
		raise SceneError("%s: bad similarity: %s" % (path, err))

def write_scene(scene: Scene, out: str) -> None:
	if scene.kind == POLYTOPE:
		write_json(scene.payload.to_json(), out)
	elif scene.kind == INTERVALS:
		if out == "-":
			interval1d.dump(scene.payload, sys.stdout)
		else:
			with open(out, "w") as f:
				interval1d.dump(scene.payload, f)
	else:
		if out == "-":
			raise SceneError("raster output needs a file name")
		raster.save(scene.payload, out)


# commands

def cmd_generate(args: argparse.Namespace, options: Options) -> int:
	scene = generate(read_json(args.spec), options, args.spec)
	write_scene(scene, args.output)
	logger.info("wrote %r to %s", scene, args.output)
	return EXIT_OK

def cmd_analyze(args: argparse.Namespace, options: Options) -> int:
	scene = load_scene(args.scene, options)
	if scene.kind != POLYTOPE:
		raise SceneError("%s: analyze needs a polytope payload" % args.scene)
	cert = convex.classify(scene.payload, args.tol)
	radii = args.radius or scene.radii
	predictions = []
	if cert.kind != convex.KIND_NONE:
		for r in radii:
			try:
				predictions.append({"radius": r, "similarity": convex.predicted_sigma(cert, r).to_json()})
			except convex.RadiusTooLargeError as err:
				predictions.append({"radius": r, "error": str(err)})
	write_json({"format": FORMAT, "certificate": cert.to_json(), "predictions": predictions}, args.output)
	print(summarize(cert), file=sys.stderr)
	return EXIT_NOT_RESILIENT if cert.kind == convex.KIND_NONE else EXIT_OK

def summarize(cert: convex.ResilienceCertificate) -> str:
	if cert.kind == convex.KIND_DECREASING:
		return "decreasing: inscribed ball at %s, R=%g" % (cert.inscribed.center.tolist(), cert.inscribed.radius)
	if cert.kind == convex.KIND_INCREASING:
		return "increasing: exscribed point %s, rho=%g" % (cert.exscribed.center.tolist(), cert.exscribed.radius)
	if cert.kind == convex.KIND_ISOMETRIC:
		return "isometric: translation %s per unit radius" % cert.translation.tolist()
	return "none: not resilient to erosion"

def cmd_verify(args: argparse.Namespace, options: Options) -> int:
	if not args.radius > 0:
		raise SceneError("--radius must be positive")
	scene = load_scene(args.scene, options)
	if args.sigma is not None:
		s = load_similarity(args.sigma)
	elif scene.kind == POLYTOPE:
		cert = convex.classify(scene.payload, args.tol)
		if cert.kind == convex.KIND_NONE:
			raise Failure(EXIT_NOT_RESILIENT, "%s is not resilient, nothing to predict" % args.scene)
		s = convex.predicted_sigma(cert, args.radius)
	elif scene.predict is not None:
		s = scene.predict(args.radius)
	else:
		raise SceneError("%s: no predicted similarity for this payload, pass --sigma" % args.scene)
	check_dimension(scene.dimension, s.dimension, "similarity")

	if scene.kind == POLYTOPE:
		p = convex.reduce(scene.payload)
		tol = p.default_tol() if args.tol is None else args.tol
		try:
			residual = convex.facet_residual(convex.erode_polytope(p, args.radius), convex.apply_similarity(p, s))
		except convex.EmptyResultError:
			residual = math.inf
		passed = residual <= tol
		report = {"format": FORMAT, "radius": args.radius, "similarity": s.to_json(),
				"facet_residual": residual if math.isfinite(residual) else None, "tolerance": tol, "passed": passed}
	elif scene.kind == RASTER:
		result = raster.verify_resilience_raster(scene.payload, args.radius, s, args.tol_pixels)
		passed = result.passed
		report = result.to_json()
	else:
		raise SceneError("%s: verify needs a polytope or raster payload" % args.scene)
	write_json(report, args.output)
	return EXIT_OK if passed else EXIT_FAILED

def parse_layers(text: Optional[str]) -> List[float]:
	""" "erosion:r1,r2" as a list of radii """
	if not text:
		return []
	kind, _, values = text.partition(":")
	if kind != "erosion" or not values:
		raise SceneError("--layers expects erosion:r1,r2,..., got %r" % text)
	try:
		radii = [float(v) for v in values.split(",")]
	except ValueError as err:
		raise SceneError("--layers: %s" % err)
	if any(r < 0 for r in radii):
		raise SceneError("--layers: radii must be nonnegative")
	return radii

def cmd_render(args: argparse.Namespace, options: Options) -> int:
	layers = parse_layers(args.layers)
	scenes = [load_scene(path, options) for path in args.scenes]
	views = []
	for path, scene in zip(args.scenes, scenes):
		if scene.dimension != 2 or scene.kind not in (POLYTOPE, RASTER):
			raise SceneError("%s: only planar polytopes and rasters can be rendered" % path)
		views.append(render.polytope_view(scene.payload) if scene.kind == POLYTOPE else render.raster_view(scene.payload))
	figure = render.Figure(render.union_view(views), args.size)
	for scene in scenes:
		radii = layers or scene.radii
		if scene.kind == POLYTOPE:
			render.draw_polytope(figure, scene.payload, radii, args.inscribed)
		else:
			render.draw_raster(figure, scene.payload, radii)
	if args.output == "-":
		figure.write(sys.stdout)
	else:
		with open(args.output, "w") as f:
			figure.write(f)
	return EXIT_OK

def cmd_acceptance(args: argparse.Namespace, options: Options) -> int:
	results = acceptance.run(args.filter, options.seed, args.data_dir, args.record)
	if not results:
		raise SceneError("no suite matches %r" % args.filter)
	sys.stderr.write(acceptance.summary(results))
	data = acceptance.results_json(results, options.seed)
	if args.results:
		write_json(data, args.results)
	return EXIT_OK if data["passed"] else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
	parser = argparse.ArgumentParser(prog="eropy", description="Sets similar to their own erosions")
	parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug logging")
	parser.add_argument("--seed", type=int, default=0, help="seed of the random generators (default 0)")
	parser.add_argument("--grid", type=int, default=raster.DEFAULT_GRID, help="raster grid size in pixels")
	parser.add_argument("--spacing", type=float, default=raster.DEFAULT_SPACING, help="raster pixel spacing h")
	commands = parser.add_subparsers(dest="command")
	commands.required = True

	sub = commands.add_parser("generate", help="write a generated set")
	sub.add_argument("spec", help="generator spec JSON")
	sub.add_argument("-o", "--output", required=True, help="output file (JSON, interval text or PGM)")
	sub.set_defaults(func=cmd_generate)

	sub = commands.add_parser("analyze", help="classify a convex polytope")
	sub.add_argument("scene")
	sub.add_argument("--radius", type=float, action="append", help="radius to predict a similarity for")
	sub.add_argument("--tol", type=float, help="facet system tolerance")
	sub.add_argument("-o", "--output", default="-", help="certificate JSON (default stdout)")
	sub.set_defaults(func=cmd_analyze)

	sub = commands.add_parser("verify", help="check that erosion by r is a given similarity")
	sub.add_argument("scene")
	sub.add_argument("--radius", type=float, required=True)
	group = sub.add_mutually_exclusive_group(required=True)
	group.add_argument("--sigma", help="similarity JSON file")
	group.add_argument("--predicted", action="store_true", help="use the predicted similarity")
	sub.add_argument("--tol", type=float, help="facet residual tolerance")
	sub.add_argument("--tol-pixels", type=float, default=raster.DEFAULT_TOL_PIXELS, help="raster Hausdorff tolerance")
	sub.add_argument("-o", "--output", default="-", help="report JSON (default stdout)")
	sub.set_defaults(func=cmd_verify)

	sub = commands.add_parser("render", help="draw planar scenes and their erosions as SVG")
	sub.add_argument("scenes", nargs="+")
	sub.add_argument("-o", "--output", required=True)
	sub.add_argument("--layers", help="erosion:r1,r2,...")
	sub.add_argument("--inscribed", action="store_true", help="draw inscribed circles of polytopes")
	sub.add_argument("--size", type=int, default=render.DEFAULT_SIZE, help="SVG width in pixels")
	sub.set_defaults(func=cmd_render)

	sub = commands.add_parser("acceptance", help="run the acceptance suites")
	sub.add_argument("--filter", help="run only suites whose name contains this")
	sub.add_argument("--results", help="write the results JSON here")
	sub.add_argument("--data-dir", help="golden file directory (default $%s or ./%s)" % (
			acceptance.DATA_DIR_VARIABLE, acceptance.DEFAULT_DATA_DIR))
	sub.add_argument("--record", action="store_true", help="rewrite the golden files from the current output")
	sub.set_defaults(func=cmd_acceptance)
	return parser

def main(argv: Optional[Sequence[str]] = None) -> int:
	args = build_parser().parse_args(argv)
	if args.verbose:
		logging.basicConfig(level=logging.DEBUG if args.verbose > 1 else logging.INFO,
				format="%(levelname)s %(name)s: %(message)s")
	options = Options(args.grid, args.spacing, args.seed)
	try:
		return args.func(args, options)
	except Failure as err:
		print("eropy: %s" % err, file=sys.stderr)
		return err.code
	except convex.NotResilientError as err:
		print("eropy: %s" % err, file=sys.stderr)
		return EXIT_NOT_RESILIENT
	except (MorphologyError, ValueError, IOError) as err:
		print("eropy: %s" % err, file=sys.stderr)
		return EXIT_INPUT


if __name__ == "__main__":
	sys.exit(main())
