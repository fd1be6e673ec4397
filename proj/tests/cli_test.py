#!/usr/bin/env python3
# End-to-end checks of the asyncdyn binary: exit codes, golden output,
# byte-identical reruns, JSON schemas and witness re-simulation.
#
#   python3 tests/cli_test.py --cli build/asyncdyn --root .

import argparse
import itertools
import json
import os
import random
import subprocess
import sys
import tempfile
import unittest
from pathlib import Path

import jsonschema
from referencing import Registry, Resource

CLI = ""
ROOT = Path(".")


def run(*args, env=None):
    e = dict(os.environ)
    e.pop("ASYNCDYN_MAX_N", None)
    if env:
        e.update(env)
    return subprocess.run([CLI, *args], capture_output=True, text=True, env=e)


def net(name):
    return str(ROOT / "networks" / name)


def schema(name):
    return json.loads((ROOT / "schema" / f"{name}.schema.json").read_text())


def validator(name):
    registry = Registry().with_resource("omega.schema.json", Resource.from_contents(schema("omega")))
    return jsonschema.Draft202012Validator(schema(name), registry=registry)


def set_literal(states):
    return "{" + ", ".join(states) + "}"


class ExitCodes(unittest.TestCase):
    def test_ok(self):
        self.assertEqual(run("portrait", "--network", net("fig1.abn")).returncode, 0)

    def test_parse_error_has_position(self):
        with tempfile.NamedTemporaryFile("w", suffix=".abn", delete=False) as f:
            f.write("vars: x1 x2\nnext x1 = x1 & )\nnext x2 = x2\n")
        try:
            r = run("portrait", "--network", f.name)
        finally:
            os.unlink(f.name)
        self.assertEqual(r.returncode, 1)
        self.assertRegex(r.stderr, r"2:\d+:")

    def test_missing_network(self):
        self.assertEqual(run("portrait").returncode, 1)

    def test_capacity(self):
        r = run("portrait", "--network", net("toggle3.abn"), env={"ASYNCDYN_MAX_N": "2"})
        self.assertEqual(r.returncode, 2)
        self.assertIn("ASYNCDYN_MAX_N", r.stderr)
        r = run("portrait", "--network", net("toggle3.abn"), env={"ASYNCDYN_MAX_N": "3"})
        self.assertEqual(r.returncode, 0)

    def test_starving_schedule(self):
        r = run("simulate", "--table", net("omega.tt"), "--init", "10", "--schedule", ";01")
        self.assertEqual(r.returncode, 3)
        self.assertIn("coordinate 1 starves", r.stderr)

    def test_set_errors(self):
        self.assertEqual(run("invariance", "--network", net("fig1.abn"), "--set", "{}").returncode, 4)
        self.assertEqual(run("basin", "--network", net("fig1.abn"), "--set", "{101}").returncode, 4)
        self.assertEqual(run("simulate", "--network", net("fig1.abn"), "--init", "1", "--schedule", ";11").returncode, 4)


class Outputs(unittest.TestCase):
    def test_fig1_dot_golden(self):
        r = run("portrait", "--network", net("fig1.abn"))
        self.assertEqual(r.stdout, (ROOT / "tests" / "golden" / "fig1.dot").read_text())
        arrows = sorted(line.split("[")[0].strip() for line in r.stdout.splitlines() if "->" in line)
        self.assertEqual(arrows, ['"00" -> "01"', '"00" -> "10"', '"00" -> "11"', '"01" -> "11"', '"11" -> "01"'])

    def test_identity_has_no_arrows(self):
        r = run("portrait", "--network", net("identity.abn"))
        self.assertEqual(r.returncode, 0)
        self.assertNotIn("->", r.stdout)

    def test_out_file(self):
        with tempfile.TemporaryDirectory() as d:
            out = os.path.join(d, "fig1.dot")
            r = run("portrait", "--network", net("fig1.abn"), "--out", out)
            self.assertEqual(r.returncode, 0)
            self.assertEqual(r.stdout, "")
            self.assertEqual(Path(out).read_text(), (ROOT / "tests" / "golden" / "fig1.dot").read_text())

    def test_omega_example(self):
        r = run("simulate", "--table", net("omega.tt"), "--init", "10", "--schedule", ";11,01", "--omega")
        self.assertEqual(r.returncode, 0)
        lines = r.stdout.splitlines()
        self.assertEqual(lines[:5], ["(-inf, 0) -> 10", "[0, 1) -> 00", "[1, 2) -> 01", "[2, 3) -> 00", "[3, 4) -> 01"])
        r = run("omega", "--table", net("omega.tt"), "--init", "10", "--schedule", ";11,01")
        self.assertEqual(r.stdout.strip(), "{00, 01}")

    def test_fixed_point_is_one_segment(self):
        r = run("simulate", "--network", net("fig1.abn"), "--init", "10", "--schedule", ";11", "--format", "json")
        segs = json.loads(r.stdout)["segments"]
        self.assertEqual([s["value"] for s in segs], ["10"])

    def test_analysis_examples(self):
        r = json.loads(run("invariance", "--network", net("not.abn"), "--set", "{01, 10}", "--format", "json").stdout)
        self.assertTrue(r["p_invariant"])
        self.assertFalse(r["n_invariant"])
        r = json.loads(run("invariance", "--network", net("half.abn"), "--set", "{00, 01}", "--format", "json").stdout)
        self.assertTrue(r["n_invariant"])
        r = json.loads(run("basin", "--network", net("fig1.abn"), "--set", "{10}", "--format", "json").stdout)
        self.assertEqual(r["p_basin"], ["00", "10"])
        self.assertEqual(r["n_basin"], ["10"])


def sample_invocations():
    rng = random.Random(7)
    out = [
        ("portrait", ["--network", net("fig1.abn"), "--format", "json"], "portrait"),
        ("portrait", ["--network", net("toggle3.abn"), "--format", "json"], "portrait"),
        ("simulate", ["--table", net("omega.tt"), "--init", "10", "--schedule", ";11,01", "--format", "json"], "trajectory"),
        ("simulate", ["--table", net("omega.tt"), "--init", "10", "--schedule", "10;01,10@0,1/2,5/4/1.5",
                      "--omega", "--format", "json"], "trajectory"),
        ("omega", ["--network", net("toggle3.abn"), "--init", "000", "--schedule", "100;011,110", "--format", "json"], "omega"),
    ]
    for name, n in (("fig1.abn", 2), ("not.abn", 2), ("half.abn", 2), ("toggle3.abn", 3)):
        states = ["".join(b) for b in itertools.product("01", repeat=n)]
        for _ in range(4):
            s = set_literal(sorted(rng.sample(states, rng.randint(1, len(states)))))
            out.append(("invariance", ["--network", net(name), "--set", s, "--format", "json"], "invariance"))
            out.append(("basin", ["--network", net(name), "--set", s, "--format", "json"], "basin"))
            out.append(("classify", ["--network", net(name), "--set", s, "--attracted", s, "--format", "json"], "basin"))
    return out


class Contract(unittest.TestCase):
    def test_reruns_are_byte_identical(self):
        for cmd, args, _ in sample_invocations():
            a, b = run(cmd, *args), run(cmd, *args)
            self.assertEqual(a.returncode, 0, a.stderr)
            self.assertEqual(a.stdout, b.stdout, f"{cmd} {args}")
        for fmt in ("text", "dot"):
            a = run("portrait", "--network", net("toggle3.abn"), "--format", fmt)
            self.assertEqual(a.stdout, run("portrait", "--network", net("toggle3.abn"), "--format", fmt).stdout)

    def test_json_matches_schemas(self):
        for cmd, args, name in sample_invocations():
            doc = json.loads(run(cmd, *args).stdout)
            errors = list(validator(name).iter_errors(doc))
            self.assertEqual(errors, [], f"{cmd} {args}")
            for key in ("set", "p_basin", "n_basin", "states"):
                if isinstance(doc.get(key), list) and all(isinstance(x, str) for x in doc[key]):
                    self.assertEqual(doc[key], sorted(doc[key]), f"{key} not sorted in {cmd} {args}")

    def test_witnesses_resimulate(self):
        checked = 0
        for cmd, args, _ in sample_invocations():
            if cmd not in ("invariance", "basin"):
                continue
            network = args[:2]
            doc = json.loads(run(cmd, *args).stdout)
            a = set(doc["set"])

            def omega(w):
                r = run("simulate", *network, "--init", w["state"], "--schedule", w["schedule"], "--omega", "--format", "json")
                self.assertEqual(r.returncode, 0, r.stderr)
                return json.loads(r.stdout)

            for w in doc.get("witnesses", []):
                t = omega(w)
                # default horizon covers the transient and two tail periods
                self.assertLessEqual({s["value"] for s in t["segments"]}, a, w)
                checked += 1
            for w in doc.get("p_witnesses", []):
                self.assertLessEqual(set(omega(w)["omega"]["states"]), a, w)
                checked += 1
            for w in doc.get("n_escapes", []):
                self.assertFalse(set(omega(w)["omega"]["states"]) <= a, w)
                checked += 1
        self.assertGreater(checked, 0)


if __name__ == "__main__":
    p = argparse.ArgumentParser()
    p.add_argument("--cli", required=True)
    p.add_argument("--root", required=True)
    opts, rest = p.parse_known_args()
    CLI = os.path.abspath(opts.cli)
    ROOT = Path(opts.root)
    unittest.main(argv=[sys.argv[0], *rest], verbosity=2)
