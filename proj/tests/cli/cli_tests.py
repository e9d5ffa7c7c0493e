"""Exit codes, determinism and verdicts of the command-line tool."""

import json
import os
import subprocess
import sys
import tempfile
import unittest

CLI = sys.argv.pop(1)


def run(*args, env=None):
    return subprocess.run([CLI, *args], capture_output=True, text=True, env=env)


def load(path):
    with open(path) as f:
        return json.load(f)


class ExitCodes(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.out = self.tmp.name

    def tearDown(self):
        self.tmp.cleanup()

    def test_parse_errors(self):
        self.assertEqual(run("spectrum", "--symbol", "z+", "--out", self.out).returncode, 2)
        self.assertEqual(run("spectrum", "--domain", "annulus", "--out", self.out).returncode, 2)
        self.assertEqual(run("spectrum", "--shell", "0.9:0.8:4", "--out", self.out).returncode, 2)
        self.assertEqual(run("compactness", "--sequences", "rays:0", "--out", self.out).returncode, 2)
        self.assertEqual(run("fredholm", "--lambda", "x", "--out", self.out).returncode, 2)
        self.assertEqual(run("nonsense").returncode, 2)

    def test_not_admissible(self):
        self.assertEqual(run("spectrum", "--nu", "-2", "--out", self.out).returncode, 3)
        self.assertEqual(run("spectrum", "--p", "1", "--out", self.out).returncode, 3)
        self.assertEqual(run("verify", "--domain", "matrix", "--nu", "0", "--out", self.out).returncode, 3)

    def test_io_error(self):
        blocker = os.path.join(self.out, "file")
        open(blocker, "w").close()
        r = run("spectrum", "--out", os.path.join(blocker, "sub"))
        self.assertEqual(r.returncode, 5)
        self.assertIn("cannot create", r.stderr)

    def test_degree_limit(self):
        self.assertEqual(run("spectrum", "--degree", "500", "--out", self.out).returncode, 2)

    def test_version_and_help(self):
        r = run("--version")
        self.assertEqual(r.returncode, 0)
        self.assertRegex(r.stdout.strip(), r"^\d+\.\d+\.\d+$")
        self.assertEqual(run("spectrum", "--help").returncode, 0)


class Commands(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.out = self.tmp.name

    def tearDown(self):
        self.tmp.cleanup()

    def sub(self, name):
        return os.path.join(self.out, name)

    def test_spectrum_z_near_circle(self):
        r = run("spectrum", "--domain", "disk", "--nu", "0", "--p", "2", "--symbol", "z", "--out", self.sub("a"))
        self.assertEqual(r.returncode, 0, r.stderr)
        s = load(self.sub("a/spectrum.json"))["summary"]
        self.assertLessEqual(s["hausdorff_to_unit_circle"], 0.05 + 1e-12)
        with open(self.sub("a/spectrum.csv")) as f:
            lines = f.read().splitlines()
        self.assertTrue(lines[0].startswith("# fnv1a64:"))
        self.assertEqual(lines[1], "method,index,t1,re,im")
        self.assertRegex(lines[2].split(",")[3], r"^-?\d\.\d{16}e[+-]\d\d$")

    def test_spectrum_trivial_and_radial(self):
        run("spectrum", "--symbol", "1", "--out", self.sub("one"))
        pts = load(self.sub("one/spectrum.json"))["estimate"]["points"]
        self.assertTrue(all(abs(re - 1) < 1e-12 and abs(im) < 1e-12 for re, im in pts))
        run("spectrum", "--symbol", "1-abs2(z)", "--out", self.sub("rad"))
        s = load(self.sub("rad/spectrum.json"))["summary"]
        self.assertLessEqual(s["max_abs"], 0.1)

    def test_determinism_across_threads(self):
        run("spectrum", "--symbol", "z*conj(z) + z", "--threads", "1", "--out", self.sub("t1"))
        env = dict(os.environ, BERGMAN_LIMITS_THREADS="3")
        run("spectrum", "--symbol", "z*conj(z) + z", "--out", self.sub("t3"), env=env)
        for name in ("spectrum.json", "spectrum.csv"):
            with open(self.sub("t1/" + name), "rb") as a, open(self.sub("t3/" + name), "rb") as b:
                self.assertEqual(a.read(), b.read(), name)

    def test_manifest_hash_tracks_inputs(self):
        run("spectrum", "--symbol", "z", "--out", self.sub("h1"))
        run("spectrum", "--symbol", "z", "--out", self.sub("h2"))
        run("spectrum", "--symbol", "conj(z)", "--out", self.sub("h3"))
        h = [load(self.sub(d + "/spectrum.json"))["manifest"]["input_hash"] for d in ("h1", "h2", "h3")]
        self.assertEqual(h[0], h[1])
        self.assertNotEqual(h[0], h[2])

    def test_verify_default_and_corrupted(self):
        r = run("verify", "--out", self.sub("v"))
        self.assertEqual(r.returncode, 0, r.stderr)
        self.assertTrue(load(self.sub("v/verify.json"))["passed"])
        r = run("verify", "--corrupt-branch", "--out", self.sub("vc"))
        self.assertEqual(r.returncode, 1)
        suites = {s["name"]: s for s in load(self.sub("vc/verify.json"))["suites"]}
        self.assertFalse(suites["branch.continuity"]["passed"])
        self.assertTrue(all(s["passed"] for n, s in suites.items() if n != "branch.continuity"))

    def test_verify_p4_checks_bz(self):
        r = run("verify", "--p", "4", "--out", self.sub("v4"))
        self.assertEqual(r.returncode, 0, r.stderr)
        suites = {s["name"]: s for s in load(self.sub("v4/verify.json"))["suites"]}
        self.assertFalse(suites["bz.unimodular"]["skipped"])
        self.assertTrue(suites["bz.unimodular"]["passed"])
        self.assertTrue(suites["berezin.shifted"]["skipped"])

    def test_fredholm_tz(self):
        self.assertEqual(run("fredholm", "--symbol", "z", "--out", self.sub("f0")).returncode, 0)
        self.assertEqual(load(self.sub("f0/fredholm.json"))["verdict"], "invertible-consistent")
        run("fredholm", "--symbol", "z", "--lambda", "1,0", "--out", self.sub("f1"))
        self.assertEqual(load(self.sub("f1/fredholm.json"))["verdict"], "not-invertible")

    def test_compactness(self):
        run("compactness", "--symbol", "1-abs2(z)", "--out", self.sub("c0"))
        self.assertEqual(load(self.sub("c0/compactness.json"))["verdict"], "compact-consistent")
        run("compactness", "--symbol", "z", "--out", self.sub("c1"))
        self.assertEqual(load(self.sub("c1/compactness.json"))["verdict"], "not-compact")

    def test_band_projection(self):
        r = run("band", "--operator", "projection", "--out", self.sub("b"))
        self.assertEqual(r.returncode, 0, r.stderr)
        d = load(self.sub("b/band.json"))
        self.assertTrue(d["strictly_decreasing"])
        norms = [p["norm"] for p in d["profile"]]
        self.assertLessEqual(norms[-1], 0.1 * norms[0])


if __name__ == "__main__":
    unittest.main()
