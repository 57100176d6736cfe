"""Regenerate the oracle values and compare them with the committed data/golden.json."""

import json
import pathlib
import subprocess
import sys
import tempfile

HERE = pathlib.Path(__file__).resolve().parent
COMMITTED = HERE.parents[1] / "data" / "golden.json"


def main():
    with tempfile.TemporaryDirectory() as tmp:
        fresh_path = pathlib.Path(tmp) / "golden.json"
        subprocess.run([sys.executable, str(HERE / "golden.py"), str(fresh_path)], check=True)
        fresh = json.loads(fresh_path.read_text())
    committed = json.loads(COMMITTED.read_text())
    bad = sorted(set(fresh) ^ set(committed))
    for key in sorted(set(fresh) & set(committed)):
        a, b = fresh[key]["value"], committed[key]["value"]
        # Library versions may move the last digits; a tenth of the pinned tolerance is the budget.
        if abs(a - b) > 0.1 * committed[key]["tolerance"]:
            bad.append(f"{key}: oracle {a!r} vs committed {b!r}")
    for line in bad:
        print(line)
    if bad:
        return 1
    print(f"{len(committed)} pinned values match the oracle")
    return 0


if __name__ == "__main__":
    sys.exit(main())
