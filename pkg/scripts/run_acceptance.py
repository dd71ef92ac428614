"""Run the acceptance suite and print its one-line-per-criterion summary.

    python3 scripts/run_acceptance.py
"""

import pathlib
import re
import subprocess
import sys

ROOT = pathlib.Path(__file__).resolve().parents[1]


def main() -> int:
    proc = subprocess.run([sys.executable, "-m", "pytest", "tests/test_acceptance.py", "-q", "-s", "-p", "no:cacheprovider"],
                          cwd=ROOT, capture_output=True, text=True)
    lines = [ln for ln in proc.stdout.splitlines() if re.match(r"\[acceptance", ln)]
    print("\n".join(lines))
    print(f"{sum('PASS' in ln for ln in lines)}/{len(lines)} criteria pass")
    return proc.returncode


if __name__ == "__main__":
    sys.exit(main())
