#!/usr/bin/env python3
"""End-to-end demonstration: writes the once-punctured torus fixtures
to a scratch directory, runs every CLI verification suite, computes the
fixture trace polynomials through two distinct good positions, and
checks the outputs byte for byte.

Usage: python3 scripts/run_verification.py [scratch_dir]
"""

import filecmp
import sys
import tempfile
from pathlib import Path

from qtrace.cli import main as cli

TORUS = """\
n 3
triangles 2
edge d T0.0 T1.2
edge r T0.1 T1.0
edge b T0.2 T1.1
"""

FIXTURES = {
    "knot_a": (
        "arc T1 0 right 1\narc T0 0 left 1\n",
        "arc T1 0 right 1\narc T0 0 right 2\narc T0 2 right 1\nslice b inc_cw 1\n",
    ),
    "knot_b": (
        "arc T0 2 left 1\narc T1 2 right 1\n",
        "arc T0 2 left 1\narc T1 2 left 2\narc T1 0 left 1\nslice r inc_ccw 1\n",
    ),
    "unknot": ("slice d inc_ccw 1\nslice d dec_ccw 1\n",),
}


def run(workdir: Path) -> int:
    failures = 0

    print("== invariant suites ==")
    if cli(["verify", "--suite", "all"]) != 0:
        failures += 1

    surface = workdir / "torus.surface"
    surface.write_text(TORUS)

    print("\n== fixture traces ==")
    for name, positions in FIXTURES.items():
        outputs = []
        for i, content in enumerate(positions):
            link = workdir / f"{name}_{i}.link"
            link.write_text(content)
            out = workdir / f"{name}_{i}.poly"
            code = cli(["trace", str(surface), str(link), "--out", str(out)])
            if code != 0:
                print(f"FAIL trace {name} position {i} (exit {code})")
                failures += 1
                continue
            outputs.append(out)
        if len(outputs) == 2:
            same = filecmp.cmp(outputs[0], outputs[1], shallow=False)
            print(("PASS" if same else "FAIL") + f" {name}: positions agree byte for byte")
            failures += 0 if same else 1
        print(f"-- {name} --")
        cli(["explain", str(outputs[0])])

    print(f"\n{'all checks passed' if failures == 0 else f'{failures} failures'}")
    return 0 if failures == 0 else 1


if __name__ == "__main__":
    if len(sys.argv) > 1:
        sys.exit(run(Path(sys.argv[1])))
    with tempfile.TemporaryDirectory() as tmp:
        sys.exit(run(Path(tmp)))
