"""Validate the design report against its schema and check repeat runs are identical."""

import json
import pathlib
import subprocess
import sys

import jsonschema


def run_design(tool, out):
    subprocess.run([tool, "--out", str(out), "design", "--points", "128"], check=True)
    return out.read_bytes()


def main():
    tool, schema_path, work = sys.argv[1], pathlib.Path(sys.argv[2]), pathlib.Path(sys.argv[3])
    work.mkdir(parents=True, exist_ok=True)
    first = run_design(tool, work / "design_a.json")
    second = run_design(tool, work / "design_b.json")
    if first != second:
        print("design report differs between identical runs")
        return 1
    schema = json.loads(schema_path.read_text())
    jsonschema.Draft202012Validator.check_schema(schema)
    errors = sorted(jsonschema.Draft202012Validator(schema).iter_errors(json.loads(first)), key=str)
    for e in errors:
        print(f"{'/'.join(map(str, e.absolute_path))}: {e.message}")
    if errors:
        return 1
    # The schema must reject a bare numeric key without a unit suffix.
    bad = json.loads(first)
    bad["spectral"]["tau"] = 1.0
    if jsonschema.Draft202012Validator(schema).is_valid(bad):
        print("schema accepted a unitless numeric key")
        return 1
    print("design report valid and reproducible")
    return 0


if __name__ == "__main__":
    sys.exit(main())
