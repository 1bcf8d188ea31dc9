"""Run every subcommand with --json and validate the output against the report schema."""

import json
import subprocess
import sys
from pathlib import Path

import jsonschema

ROOT = Path(__file__).resolve().parents[2]
ALG = ROOT / "data" / "algebras"
BAD = ROOT / "tests" / "data"

CASES = [
    (["show", "--algebra", ALG / "z4.json"], 0),
    (["free", "--k", "2", "--base", ALG / "semilattice2.json"], 0),
    (["conlat", "--algebra", ALG / "z4.json"], 0),
    (["member", "--algebra", ALG / "z2.json", "--generators", ALG / "z4.json"], 0),
    (["member", "--algebra", ALG / "semilattice2.json", "--generators", ALG / "z2.json"], 1),
    (["member", "--mode", "filter", "--algebra", ALG / "z2.json", "--generators", ALG / "z4.json"], 0),
    (["close", "--ops", "H,S", "--algebra", ALG / "z4.json"], 0),
    (["verify-correspondence", "--size-bound", "4", "--arity-bound", "2", "--base", ALG / "z2.json"], 0),
    (["verify-pointwise", "--k", "2", "--algebra", ALG / "semilattice2.json"], 0),
    (["entourages", "--k", "1", "--algebra", ALG / "z2.json"], 0),
    (["show", "--algebra", BAD / "bad_range.json"], 2),
    (["show", "--algebra", BAD / "bad_syntax.json"], 2),
    (["free", "--k", "3", "--max-elements", "10", "--base", ALG / "z4.json"], 3),
]


def main() -> int:
    binary = sys.argv[1]
    schema = json.loads((ROOT / "schema" / "report.schema.json").read_text())
    jsonschema.Draft7Validator.check_schema(schema)
    validator = jsonschema.Draft7Validator(schema)
    failed = 0
    for args, expected in CASES:
        cmd = [binary, "--json", *map(str, args)]
        proc = subprocess.run(cmd, capture_output=True, text=True, check=False)
        label = " ".join(map(str, args[:1]))
        if proc.returncode != expected:
            print(f"FAIL {label}: exit {proc.returncode}, expected {expected}")
            failed += 1
            continue
        errors = list(validator.iter_errors(json.loads(proc.stdout)))
        for e in errors:
            print(f"FAIL {label}: {e.json_path}: {e.message}")
        failed += bool(errors)
    print(f"{len(CASES) - failed}/{len(CASES)} reports valid")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
