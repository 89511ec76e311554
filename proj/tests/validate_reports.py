"""Runs every subcommand of the CLI and validates each report.json
against the shipped schema."""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema

RUNS = {
    "check": ["check", "--g", "1*s^2 + 1*s^3", "--N", "3"],
    "check-critical": ["check", "--g", "1*s^5", "--N", "3"],
    "shoot": ["shoot", "--g", "1*s^3", "--N", "2", "--lambda", "0.5"],
    "ground-state": ["ground-state", "--N", "1", "--p", "5", "--mu", "2"],
    "branch": ["branch", "--g", "1*s^2 + 1*s^5", "--N", "2", "--lambda-min", "0.01",
               "--lambda-max", "100", "--points-per-decade", "4"],
    "branch-degenerate": ["branch", "--g", "1*s^3", "--N", "1", "--lambda-min", "0.1",
                          "--lambda-max", "10", "--points-per-decade", "1", "--launch-scale", "0.5"],
    "normalize": ["normalize", "--g", "1*s^2 + 1*s^5", "--N", "2", "--a", "3",
                  "--lambda-min", "0.001", "--lambda-max", "1000", "--points-per-decade", "6"],
    "normalize-critical": ["normalize", "--g", "1*s^5", "--N", "1", "--a", "1",
                           "--lambda-min", "0.1", "--lambda-max", "10", "--points-per-decade", "2"],
    "verify": ["verify"],
}


def main() -> int:
    binary, schema_path = sys.argv[1], sys.argv[2]
    schema = json.loads(Path(schema_path).read_text())
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)
    failures = 0
    with tempfile.TemporaryDirectory() as tmp:
        for name, args in RUNS.items():
            out = Path(tmp) / name
            proc = subprocess.run([binary, *args, "--output", str(out)], capture_output=True, text=True)
            report = out / "report.json"
            if not report.exists():
                print(f"{name}: no report.json (exit {proc.returncode})\n{proc.stderr}")
                failures += 1
                continue
            errors = list(validator.iter_errors(json.loads(report.read_text())))
            for e in errors:
                print(f"{name}: {e.message} at {list(e.absolute_path)}")
            failures += bool(errors)
            print(f"{name}: exit {proc.returncode}, {'invalid' if errors else 'valid'}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
