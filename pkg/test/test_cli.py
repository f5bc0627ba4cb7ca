import contextlib
import io
import json
import os
import shutil
import tempfile
import unittest

from eropy import cli

class Command(unittest.TestCase):
	def setUp(self):
		self.tmp = tempfile.mkdtemp()

	def tearDown(self):
		shutil.rmtree(self.tmp)

	def path(self, name):
		return os.path.join(self.tmp, name)

	def write(self, name, data):
		with open(self.path(name), "w") as f:
			f.write(data if isinstance(data, str) else json.dumps(data))
		return self.path(name)

	def read(self, name):
		with open(self.path(name)) as f:
			return json.load(f)

	def run_main(self, *argv):
		err = io.StringIO()
		out = io.StringIO()
		with contextlib.redirect_stderr(err), contextlib.redirect_stdout(out):
			code = cli.main(list(argv))
		self.stderr = err.getvalue()
		self.stdout = out.getvalue()
		return code

class Generate(Command):
	def test_polygon(self):
		spec = self.write("hexagon.json", {"format": 1, "type": "regular_polygon", "sides": 6})
		self.assertEqual(self.run_main("generate", spec, "-o", self.path("out.json")), cli.EXIT_OK)
		self.assertEqual(len(self.read("out.json")["polytope"]), 6)

	def test_intervals(self):
		spec = self.write("x.json", {"format": 1, "type": "example1", "k": 2, "set": "Y"})
		self.assertEqual(self.run_main("generate", spec, "-o", self.path("y.txt")), cli.EXIT_OK)
		with open(self.path("y.txt")) as f:
			self.assertEqual(len(f.read().splitlines()), 27)

	def test_raster(self):
		spec = self.write("gen.json", {"format": 1, "type": "sierpinski", "grid": 64, "spacing": 0.03125,
				"origin": [-0.5, -0.5], "depth": 6})
		self.assertEqual(self.run_main("generate", spec, "-o", self.path("s.pgm")), cli.EXIT_OK)
		self.assertTrue(os.path.exists(self.path("s.json")))
		self.assertEqual(self.read("s.json")["spacing"], 0.03125)

	def test_unknown_type(self):
		spec = self.write("bad.json", {"format": 1, "type": "dodecahedron"})
		self.assertEqual(self.run_main("generate", spec, "-o", self.path("out.json")), cli.EXIT_INPUT)
		self.assertIn("unknown generator type", self.stderr)

	def test_missing_field(self):
		spec = self.write("bad.json", {"format": 1, "type": "regular_polygon"})
		self.assertEqual(self.run_main("generate", spec, "-o", self.path("out.json")), cli.EXIT_INPUT)
		self.assertIn("'sides'", self.stderr)

	def test_bad_value(self):
		spec = self.write("bad.json", {"format": 1, "type": "regular_polygon", "sides": 2})
		self.assertEqual(self.run_main("generate", spec, "-o", self.path("out.json")), cli.EXIT_INPUT)

class Analyze(Command):
	def test_square(self):
		scene = self.write("square.json", {"format": 1, "generator": {"type": "box", "width": 1, "height": 1}})
		code = self.run_main("analyze", scene, "--radius", "0.25", "-o", self.path("cert.json"))
		self.assertEqual(code, cli.EXIT_OK)
		report = self.read("cert.json")
		self.assertEqual(report["certificate"]["kind"], "decreasing")
		self.assertAlmostEqual(report["predictions"][0]["similarity"]["scale"], 0.5)
		self.assertIn("decreasing", self.stderr)

	def test_rectangle(self):
		scene = self.write("rect.json", {"format": 1, "type": "box", "width": 1, "height": 2})
		self.assertEqual(self.run_main("analyze", scene, "-o", self.path("cert.json")), cli.EXIT_NOT_RESILIENT)
		self.assertEqual(self.read("cert.json")["certificate"]["kind"], "none")

	def test_stdout(self):
		scene = self.write("tent.json", {"format": 1, "type": "tent", "gamma13": 0.5, "equal": True})
		self.assertEqual(self.run_main("analyze", scene), cli.EXIT_OK)
		self.assertEqual(json.loads(self.stdout)["certificate"]["kind"], "isometric")

	def test_radius_too_large(self):
		scene = self.write("square.json", {"format": 1, "type": "box", "width": 1, "height": 1})
		self.assertEqual(self.run_main("analyze", scene, "--radius", "0.7", "-o", self.path("cert.json")), cli.EXIT_OK)
		self.assertIn("error", self.read("cert.json")["predictions"][0])

	def test_transform(self):
		scene = self.write("square.json", {"format": 1, "type": "box", "width": 1, "height": 1,
				"transform": {"scale": 2.0, "rotation": [[1, 0], [0, 1]], "offset": [1.0, 0.0]}})
		self.assertEqual(self.run_main("analyze", scene, "-o", self.path("cert.json")), cli.EXIT_OK)
		ball = self.read("cert.json")["certificate"]["inscribed"]
		self.assertAlmostEqual(ball["radius"], 1.0)
		self.assertAlmostEqual(ball["center"][0], 2.0)

	def test_intervals_rejected(self):
		scene = self.write("x.json", {"format": 1, "intervals": "[0 1]\n"})
		self.assertEqual(self.run_main("analyze", scene), cli.EXIT_INPUT)

class Scenes(Command):
	def test_malformed_json(self):
		scene = self.write("bad.json", '{"format": 1,\n "polytope": [}')
		self.assertEqual(self.run_main("analyze", scene), cli.EXIT_INPUT)
		self.assertIn("bad.json:2:", self.stderr)

	def test_future_format(self):
		scene = self.write("new.json", {"format": 2, "type": "box", "width": 1, "height": 1})
		self.assertEqual(self.run_main("analyze", scene), cli.EXIT_INPUT)
		self.assertIn("unsupported format", self.stderr)

	def test_two_payloads(self):
		scene = self.write("two.json", {"format": 1, "polytope": [], "intervals": "[0 1]"})
		self.assertEqual(self.run_main("analyze", scene), cli.EXIT_INPUT)
		self.assertIn("exactly one payload", self.stderr)

	def test_dimension_mismatch(self):
		scene = self.write("square.json", {"format": 1, "dimension": 3, "type": "box", "width": 1, "height": 1})
		self.assertEqual(self.run_main("analyze", scene), cli.EXIT_INPUT)

	def test_missing_file(self):
		self.assertEqual(self.run_main("analyze", self.path("nowhere.json")), cli.EXIT_INPUT)

	def test_interval_file(self):
		self.write("x.txt", "[0 1]\n[3 4]\n")
		scene = self.write("x.json", {"format": 1, "intervals": "x.txt"})
		loaded = cli.load_scene(scene, cli.Options())
		self.assertEqual(loaded.kind, cli.INTERVALS)
		self.assertEqual(len(loaded.payload), 2)

	def test_radii(self):
		scene = self.write("s.json", {"format": 1, "type": "box", "width": 1, "height": 1, "radii": [0.1, 0.2]})
		self.assertEqual(cli.load_scene(scene, cli.Options()).radii, [0.1, 0.2])

	def test_layers(self):
		self.assertEqual(cli.parse_layers("erosion:0.1,0.25"), [0.1, 0.25])
		self.assertEqual(cli.parse_layers(None), [])
		self.assertRaises(cli.SceneError, cli.parse_layers, "dilation:1")
		self.assertRaises(cli.SceneError, cli.parse_layers, "erosion:-1")
		self.assertRaises(cli.SceneError, cli.parse_layers, "erosion:x")

class Verify(Command):
	def test_predicted_polygon(self):
		scene = self.write("hexagon.json", {"format": 1, "type": "regular_polygon", "sides": 6})
		code = self.run_main("verify", scene, "--radius", "0.2", "--predicted", "-o", self.path("report.json"))
		self.assertEqual(code, cli.EXIT_OK)
		self.assertTrue(self.read("report.json")["passed"])

	def test_wrong_sigma(self):
		scene = self.write("hexagon.json", {"format": 1, "type": "regular_polygon", "sides": 6})
		sigma = self.write("sigma.json", {"format": 1, "scale": 1.0, "rotation": [[1, 0], [0, 1]], "offset": [0, 0]})
		code = self.run_main("verify", scene, "--radius", "0.2", "--sigma", sigma, "-o", self.path("report.json"))
		self.assertEqual(code, cli.EXIT_FAILED)
		self.assertFalse(self.read("report.json")["passed"])

	def test_not_resilient(self):
		scene = self.write("rect.json", {"format": 1, "type": "box", "width": 1, "height": 2})
		self.assertEqual(self.run_main("verify", scene, "--radius", "0.1", "--predicted"), cli.EXIT_NOT_RESILIENT)

	def test_raster(self):
		scene = self.write("drop.json", {"format": 1, "type": "teardrop", "radius": 20, "apex": [45, 0]})
		code = self.run_main("--grid", "128", "verify", scene, "--radius", "4", "--predicted",
				"-o", self.path("report.json"))
		self.assertEqual(code, cli.EXIT_OK)
		report = self.read("report.json")
		self.assertAlmostEqual(report["similarity"]["scale"], 0.8)

	def test_nonpositive_radius(self):
		scene = self.write("hexagon.json", {"format": 1, "type": "regular_polygon", "sides": 6})
		self.assertEqual(self.run_main("verify", scene, "--radius", "0", "--predicted"), cli.EXIT_INPUT)

class Render(Command):
	def test_polygon(self):
		scene = self.write("square.json", {"format": 1, "type": "box", "width": 1, "height": 1})
		code = self.run_main("render", scene, "-o", self.path("square.svg"), "--layers", "erosion:0.15,0.3", "--inscribed")
		self.assertEqual(code, cli.EXIT_OK)
		with open(self.path("square.svg")) as f:
			svg = f.read()
		self.assertTrue(svg.startswith("<?xml"))
		self.assertIn('id="layer-2"', svg)
		self.assertIn("<circle", svg)

	def test_raster_scene(self):
		spec = self.write("disk.json", {"format": 1, "type": "teardrop", "grid": 64, "radius": 10, "apex": [20, 0]})
		self.assertEqual(self.run_main("generate", spec, "-o", self.path("drop.pgm")), cli.EXIT_OK)
		scene = self.write("scene.json", {"format": 1, "raster": "drop.pgm", "radii": [2.0]})
		self.assertEqual(self.run_main("render", scene, "-o", "-"), cli.EXIT_OK)
		self.assertIn('id="layer-1"', self.stdout)

	def test_three_dimensions(self):
		scene = self.write("tent.json", {"format": 1, "type": "tent", "gamma13": 0.4, "gamma24": 0.7})
		self.assertEqual(self.run_main("render", scene, "-o", self.path("tent.svg")), cli.EXIT_INPUT)

class Acceptance(Command):
	def test_filtered(self):
		code = self.run_main("acceptance", "--filter", "similarity-dimension", "--results", self.path("results.json"),
				"--data-dir", self.tmp)
		self.assertEqual(code, cli.EXIT_OK)
		results = self.read("results.json")
		self.assertTrue(results["passed"])
		self.assertEqual([s["name"] for s in results["suites"]], ["similarity-dimension"])

	def test_golden_round_trip(self):
		golden = self.path("golden")
		code = self.run_main("acceptance", "--filter", "figures", "--record", "--data-dir", golden)
		self.assertEqual(code, cli.EXIT_OK)
		self.assertEqual(self.run_main("acceptance", "--filter", "figures", "--data-dir", golden), cli.EXIT_OK)
		pgm = os.path.join(golden, "sierpinski_si.pgm")
		with open(pgm, "rb") as f:
			data = bytearray(f.read())
		data[-1] ^= 0xff
		with open(pgm, "wb") as f:
			f.write(bytes(data))
		self.assertEqual(self.run_main("acceptance", "--filter", "figures", "--data-dir", golden), cli.EXIT_FAILED)

	def test_missing_golden(self):
		code = self.run_main("acceptance", "--filter", "figures", "--data-dir", self.path("empty"))
		self.assertEqual(code, cli.EXIT_FAILED)

	def test_no_match(self):
		self.assertEqual(self.run_main("acceptance", "--filter", "nothing-like-this"), cli.EXIT_INPUT)

if __name__ == "__main__":
	unittest.main()
