#!/usr/bin/env python3
"""Runs `check --json` over the negative corpus and validates every line
against the diagnostic schema. Also checks that each file yields the code
its manifest row expects, and that the output is identical across runs."""

import argparse
import json
import pathlib
import subprocess
import sys

import jsonschema


def manifest_negatives(root):
    rows = []
    for line in (root / "stdlib" / "MANIFEST").read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#") or line.startswith("version"):
            continue
        file, _, expect, _ = [c.strip() for c in line.split("|")]
        if expect != "pass":
            rows.append((file, expect))
    return rows


def run(cli, path):
    return subprocess.run([cli, "check", "--json", str(path)],
                          capture_output=True, text=True, check=False)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--cli", required=True)
    ap.add_argument("--schema", required=True)
    ap.add_argument("--root", required=True)
    args = ap.parse_args()

    root = pathlib.Path(args.root)
    validator = jsonschema.Draft202012Validator(json.loads(pathlib.Path(args.schema).read_text()))
    failures = 0
    rows = manifest_negatives(root)
    if not rows:
        print("no negative files in the manifest")
        return 1
    for file, expect in rows:
        first = run(args.cli, root / "stdlib" / file)
        second = run(args.cli, root / "stdlib" / file)
        lines = [l for l in first.stdout.splitlines() if l.strip()]
        problems = []
        if first.returncode != 1:
            problems.append(f"exit {first.returncode}, expected 1")
        if (first.stdout, first.returncode) != (second.stdout, second.returncode):
            problems.append("output differs between runs")
        if len(lines) != 1:
            problems.append(f"{len(lines)} lines, expected 1")
        for l in lines:
            try:
                obj = json.loads(l)
            except json.JSONDecodeError as e:
                problems.append(f"not JSON: {e}")
                continue
            for err in validator.iter_errors(obj):
                problems.append(f"schema: {err.message}")
            if obj.get("code") != expect:
                problems.append(f"code {obj.get('code')}, expected {expect}")
        print(("FAIL " if problems else "ok   ") + file)
        for p in problems:
            print("  " + p)
        failures += bool(problems)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
