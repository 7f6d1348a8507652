"""Run the acceptance criteria and save the PASS/FAIL lines.

    python scripts/run_acceptance.py [--out acceptance.txt]
"""
import argparse
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(ROOT / "acceptance.txt"))
    args = ap.parse_args()
    proc = subprocess.run([sys.executable, "-m", "pytest", str(ROOT / "tests" / "test_acceptance.py"), "-q"],
                          capture_output=True, text=True, cwd=ROOT)
    lines = [l for l in proc.stdout.splitlines() if l.startswith(("[PASS]", "[FAIL]"))]
    Path(args.out).write_text("\n".join(lines) + "\n")
    print("\n".join(lines))
    print(proc.stdout.strip().splitlines()[-1])
    return proc.returncode


if __name__ == "__main__":
    sys.exit(main())
