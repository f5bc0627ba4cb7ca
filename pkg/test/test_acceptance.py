import os
import shutil
import tempfile
import unittest

from eropy import acceptance
from eropy.acceptance import CheckResult, Harness, SuiteResult

class Suites(unittest.TestCase):
	def setUp(self):
		self.tmp = tempfile.mkdtemp()

	def tearDown(self):
		shutil.rmtree(self.tmp)

	def run_suite(self, name, **options):
		results = acceptance.run(name, 0, self.tmp, **options)
		self.assertEqual([r.name for r in results], [name])
		for c in results[0].checks:
			self.assertTrue(c.passed, "%s: %s" % (c.name, c.detail))
		return results[0]

	def test_polytope_positive(self):
		self.assertTrue(self.run_suite("polytope-positive").passed)

	def test_polytope_negative(self):
		self.assertTrue(self.run_suite("polytope-negative").passed)

	def test_edt(self):
		self.assertTrue(self.run_suite("edt").passed)

	def test_commutation(self):
		self.assertTrue(self.run_suite("commutation").passed)

	def test_ball_convexity_small(self):
		self.assertTrue(self.run_suite("ball-convexity", grid_divisor=2).passed)

	def test_si_to_resilient_small(self):
		self.assertTrue(self.run_suite("si-to-resilient", grid_divisor=2).passed)

	def test_resilient_to_si_small(self):
		self.assertTrue(self.run_suite("resilient-to-si", grid_divisor=2).passed)

	def test_figures_recorded_then_compared(self):
		self.run_suite("figures", record=True)
		self.assertTrue(os.path.exists(os.path.join(self.tmp, "sierpinski_si.pgm")))
		self.assertTrue(self.run_suite("figures").passed)

	def test_figures_without_goldens(self):
		results = acceptance.run("figures", 0, self.tmp)
		self.assertFalse(results[0].passed)
		missing = [c for c in results[0].checks if c.name.startswith("golden") and not c.passed]
		self.assertTrue(missing)
		self.assertIn("--record", missing[0].detail)

	def test_similarity_dimension(self):
		self.assertTrue(self.run_suite("similarity-dimension").passed)

	def test_interval1d(self):
		self.assertTrue(self.run_suite("interval1d").passed)

	def test_tent(self):
		self.assertTrue(self.run_suite("tent").passed)

	def test_duality(self):
		self.assertTrue(self.run_suite("duality").passed)

	def test_registry_order(self):
		names = list(acceptance.SUITES)
		self.assertEqual(names[0], "polytope-positive")
		self.assertIn("figures", names)

	def test_no_match(self):
		self.assertEqual(acceptance.run("nothing-like-this", 0, self.tmp), [])

	def test_errors_become_checks(self):
		def broken(h):
			raise ValueError("boom")
		acceptance.SUITES["broken-suite"] = broken
		try:
			results = acceptance.run("broken-suite", 0, self.tmp)
		finally:
			del acceptance.SUITES["broken-suite"]
		self.assertFalse(results[0].passed)
		self.assertIn("ValueError: boom", results[0].checks[0].detail)

class Goldens(unittest.TestCase):
	def setUp(self):
		self.tmp = tempfile.mkdtemp()

	def tearDown(self):
		shutil.rmtree(self.tmp)

	def test_record_then_compare(self):
		data_dir = os.path.join(self.tmp, "golden")
		self.assertTrue(Harness(0, data_dir, record=True).golden("a.svg", b"<svg/>"))
		self.assertTrue(os.path.exists(os.path.join(data_dir, "a.svg")))
		h = Harness(0, data_dir)
		self.assertTrue(h.golden("a.svg", b"<svg/>"))
		self.assertEqual(h.checks[-1].detail, "identical")
		self.assertFalse(h.golden("a.svg", b"<svg></svg>"))

	def test_missing_golden_fails(self):
		h = Harness(0, os.path.join(self.tmp, "golden"))
		self.assertFalse(h.golden("a.svg", b"<svg/>"))
		self.assertIn("missing", h.checks[-1].detail)
		self.assertFalse(os.path.exists(os.path.join(self.tmp, "golden", "a.svg")))

	def test_record_overwrites(self):
		data_dir = os.path.join(self.tmp, "golden")
		Harness(0, data_dir, record=True).golden("a.svg", b"<svg/>")
		Harness(0, data_dir, record=True).golden("a.svg", b"<svg></svg>")
		self.assertTrue(Harness(0, data_dir).golden("a.svg", b"<svg></svg>"))

	def test_grid_divisor(self):
		self.assertEqual(Harness(0, self.tmp, grid_divisor=4).grid(1024), 256)
		self.assertRaises(ValueError, Harness, 0, self.tmp, False, 0)

	def test_environment_default(self):
		old = os.environ.get(acceptance.DATA_DIR_VARIABLE)
		os.environ[acceptance.DATA_DIR_VARIABLE] = self.tmp
		try:
			self.assertEqual(Harness().data_dir, self.tmp)
		finally:
			if old is None:
				del os.environ[acceptance.DATA_DIR_VARIABLE]
			else:
				os.environ[acceptance.DATA_DIR_VARIABLE] = old

class Reports(unittest.TestCase):
	def results(self):
		good = SuiteResult("good", [CheckResult("a", True)], 0.1)
		bad = SuiteResult("bad", [CheckResult("b", True), CheckResult("c", False, "off by one")], 0.2)
		return [good, bad]

	def test_json(self):
		data = acceptance.results_json(self.results(), seed=7)
		self.assertEqual(data["seed"], 7)
		self.assertFalse(data["passed"])
		self.assertEqual([s["passed"] for s in data["suites"]], [True, False])
		self.assertNotIn("seconds", data["suites"][0])

	def test_empty_suite_fails(self):
		self.assertFalse(SuiteResult("empty", [], 0.0).passed)
		self.assertFalse(acceptance.results_json([])["passed"])

	def test_summary(self):
		text = acceptance.summary(self.results())
		lines = text.splitlines()
		self.assertTrue(lines[0].startswith("good"))
		self.assertTrue(lines[0].endswith("pass"))
		self.assertTrue(lines[1].endswith("FAIL"))
		self.assertEqual(lines[2].strip(), "c: off by one")

if __name__ == "__main__":
	unittest.main()
