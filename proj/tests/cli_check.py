#!/usr/bin/env python3
"""End-to-end checks for the varkit CLI: examples, exit codes, determinism, schemas."""

import json
import pathlib
import subprocess
import sys

import jsonschema

BIN = sys.argv[1]
ROOT = pathlib.Path(sys.argv[2])
failures = []


def run(*args):
    return subprocess.run([BIN, *args], capture_output=True, text=True, cwd=ROOT)


def check(name, cond, detail=""):
    print(f"{'ok  ' if cond else 'FAIL'} {name}{': ' + detail if detail and not cond else ''}")
    if not cond:
        failures.append(name)


def validate(sub, out):
    schema = json.loads((ROOT / "schemas" / f"{sub}.schema.json").read_text())
    try:
        jsonschema.validate(json.loads(out), schema)
        return True, ""
    except (jsonschema.ValidationError, json.JSONDecodeError) as e:
        return False, str(e).splitlines()[0]


QUICK = {
    "decompose": ["--a", "1/4", "--b", "7/8"],
    "variation": ["--r", "1", "--input", "data/family_010.csv"],
    "verify-domination": ["--trials", "20"],
    "verify-norm-chain": ["--trials", "2", "--depth", "3"],
    "bound-trial": ["--trials", "20"],
    "sharpness": ["--points", "5", "--n-steps", "400"],
    "fourier-2d": ["--trials", "3", "--points", "32"],
    "constants": [],
}

for sub, args in QUICK.items():
    first, second = run(sub, *args), run(sub, *args)
    check(f"{sub} exits 0", first.returncode == 0, first.stderr.strip())
    check(f"{sub} deterministic", first.stdout == second.stdout)
    ok, why = validate(sub, first.stdout)
    check(f"{sub} matches schema", ok, why)

# Documented examples.
r = run("decompose", "--a", "1/4", "--b", "7/8", "--format", "csv")
check("decompose text example", "(2,2),(2,3),(3,7)" in json.loads(run("decompose", "--a", "1/4", "--b", "7/8").stdout)["text"])
check("decompose csv output", r.returncode == 0 and r.stdout.count("\n") >= 3, r.stdout)
v = json.loads(run("variation", "--r", "1", "--input", "data/family_010.csv").stdout)
check("variation example equals 2", abs(v["samples"][0]["value"] - 2.0) < 1e-12)
c = json.loads(run("constants").stdout)
check("ck constant for (1, 2, 2)", abs(c["ck_maximal_constant"] - (2 + 2 ** 0.5)) < 1e-12)
f = run("fourier-2d", "--input", "data/coefficients_2d.csv")
check("fourier-2d coefficient file", f.returncode == 0, f.stderr)
ok, why = validate("fourier-2d", f.stdout)
check("fourier-2d coefficient file matches schema", ok, why)
b = run("bound-trial", "--operator", "data/operator_dense.json", "--size", "4", "--trials", "5")
check("bound-trial operator file", b.returncode == 0, b.stderr)

# Seeds change results.
a1 = json.loads(run("bound-trial", "--trials", "5", "--seed", "1").stdout)["max_ratio"]
a2 = json.loads(run("bound-trial", "--trials", "5", "--seed", "2").stdout)["max_ratio"]
check("seed changes bound-trial", a1 != a2)

# --out writes the same bytes.
out = ROOT / "build" / "cli_check_out.json"
run("constants", "--out", str(out))
check("--out writes file", out.exists() and out.read_text() == run("constants").stdout)

# Exit code 1: a failed check, with the seed on stderr.
fail = run("sharpness", "--x-min", "0.5", "--x-max", "1", "--points", "4")
check("failed assertion exits 1", fail.returncode == 1, str(fail.returncode))
check("failed assertion reports seed", "seed" in fail.stderr, fail.stderr)
check("failed run still emits pass=false",
      fail.stdout.strip() != "" and json.loads(fail.stdout)["pass"] is False)

# Exit code 2: parse and validation errors.
for args in (["decompose", "--a", "1/3", "--b", "1/2"],
             ["decompose", "--a", "3/4", "--b", "1/4"],
             ["variation", "--r", "0.5", "--input", "data/family_010.csv"],
             ["variation", "--r", "1", "--input", "missing.csv"],
             ["bound-trial", "--operator", "no_such_operator"],
             ["verify-norm-chain", "--p", "2", "--r", "1.5"],
             ["constants", "--format", "xml"],
             ["no-such-subcommand"]):
    res = run(*args)
    check(f"exit 2 for {' '.join(args)}", res.returncode == 2, f"got {res.returncode}: {res.stderr.strip()}")

print(f"{len(failures)} failures")
sys.exit(1 if failures else 0)
