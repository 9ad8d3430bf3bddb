#!/usr/bin/env python3
"""Runs vfkit commands, validates their JSON reports against the schema and
checks that repeated invocations are byte-identical."""

import json
import subprocess
import sys

import jsonschema

COMMANDS = [
    ["bracket", "--preset", "isolated-slice", "--fields", "X1,X2"],
    ["bracket", "--preset", "partial-orbits", "--fields", "X1,X2"],
    ["lie", "--preset", "quadratic", "--point", "0,0"],
    ["lie", "--preset", "bump", "--point", "0,0", "--depth", "8"],
    ["rank", "--preset", "partial-orbits", "--point", "2,0"],
    ["rank", "--preset", "nine-orbits", "--grid", "x1=-1:1:0.5,x2=-1:1:0.5"],
    ["rank", "--preset", "bump", "--grid", "x1=-1:1:0.5,x2=-1:1:0.5"],
    ["member", "--preset", "bad-generator", "--target", "(x1)", "--gens", "G", "--degree", "3"],
    ["member", "--preset", "involutive2", "--target", "(2*x1^3, x2)", "--degree", "2"],
    ["orbit", "--preset", "bump", "--point", "0,0", "--words", "50"],
    ["orbit", "--preset", "fixed-time", "--point", "1,1", "--fixed-time", "1", "--invariant", "x1*x2"],
    ["frobenius", "--preset", "heisenberg", "--chart", "0,0,0"],
    ["frobenius", "--preset", "bump", "--max-time", "1", "--depth", "8", "--chart", "0,0"],
    ["frobenius", "--preset", "mixed-pair"],
    ["examples", "--list"],
    ["examples", "--show", "umbrella"],
    ["examples", "--run", "nine-orbits"],
    ["examples", "--run-all"],
]


def run(binary, args):
    return subprocess.run([binary, *args, "--format", "json"], capture_output=True, text=True,
                          env={"PATH": "/usr/bin:/bin"})


def main():
    binary, schema_path = sys.argv[1], sys.argv[2]
    with open(schema_path) as f:
        schema = json.load(f)
    validator = jsonschema.Draft202012Validator(schema)
    failures = 0
    for args in COMMANDS:
        first, second = run(binary, args), run(binary, args)
        label = " ".join(args)
        if first.returncode not in (0, 4):
            print(f"FAIL {label}: exit {first.returncode}: {first.stderr.strip()}")
            failures += 1
            continue
        report = json.loads(first.stdout)
        errors = sorted(validator.iter_errors(report), key=lambda e: list(e.path))
        if errors:
            print(f"FAIL {label}: {errors[0].message} at {list(errors[0].path)}")
            failures += 1
        elif first.stdout != second.stdout:
            print(f"FAIL {label}: output differs between identical runs")
            failures += 1
        elif report["status"] != first.returncode:
            print(f"FAIL {label}: status {report['status']} but exit {first.returncode}")
            failures += 1
        else:
            print(f"ok   {label}")
    print(f"{len(COMMANDS) - failures}/{len(COMMANDS)} reports valid")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
