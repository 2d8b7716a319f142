"""Rewrite tests/golden/*.out from the current CLI.

Review the diff before committing: the goldens are regression baselines,
their numbers were checked against hand-derived values when first created.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from cli_cases import CASES, GOLDEN_DIR, run_cli  # noqa: E402


def main():
    GOLDEN_DIR.mkdir(exist_ok=True)
    for name, argv, expected in CASES:
        status, out, _ = run_cli(argv)
        if status != expected:
            raise SystemExit(f"{name}: exit {status}, expected {expected}")
        (GOLDEN_DIR / f"{name}.out").write_text(out)
        print(f"wrote {name}.out")


if __name__ == "__main__":
    main()
