"""Smoke test for the pycxdist extension.

Builds the module with cargo, copies it next to this script and exercises
the main entry points:

    python3 python/smoke_test.py
"""

import os
import shutil
import subprocess
import sys
import sysconfig

HERE = os.path.dirname(os.path.abspath(__file__))
ROOT = os.path.dirname(HERE)


def build():
    env = dict(os.environ, PYO3_BUILD_EXTENSION_MODULE="1", PYO3_PYTHON=sys.executable)
    subprocess.run(
        ["cargo", "build", "--release", "-p", "cxdist-python"],
        cwd=ROOT,
        env=env,
        check=True,
    )
    target = os.environ.get("CARGO_TARGET_DIR", os.path.join(ROOT, "target"))
    lib = "pycxdist.dll" if os.name == "nt" else (
        "libpycxdist.dylib" if sys.platform == "darwin" else "libpycxdist.so"
    )
    suffix = sysconfig.get_config_var("EXT_SUFFIX") or ".so"
    dest = os.path.join(HERE, "pycxdist" + suffix)
    shutil.copyfile(os.path.join(target, "release", lib), dest)
    return dest


def main():
    if "--no-build" not in sys.argv:
        build()
    sys.path.insert(0, HERE)
    import pycxdist as cx

    square = [(0, 0), (1, 0), (0, 1), (1, 1)]
    assert cx.delta((0, 0), (1, 1)) == "2"
    assert cx.delta((0, 0), ("1", "i")) == "0"

    stats = cx.distance_statistics(square)
    assert stats["distinctDistanceCount"] == 2, stats
    assert stats["quadrupleCount"] == 68, stats
    assert stats["distinctDistances"] == ["1", "2"]
    assert cx.quadruples_bruteforce(square) == 68

    grid = cx.generate({"kind": "grid", "k": 3})
    assert len(grid) == 9
    assert cx.distance_statistics(grid)["distinctDistanceCount"] == 5

    lines = cx.esgk_family(square)
    assert len(lines) == 16
    assert all(isinstance(l, cx.Line3) for l in lines)
    # Two lines are coplanar exactly when the distances agree.
    a, b, c, d = square[0], square[1], square[2], square[3]
    la, lb = cx.esgk_line(a, c), cx.esgk_line(b, d)
    assert la.relation(lb) in ("intersecting", "parallel")
    assert la == lines[0 * 4 + 2]
    assert len(la.chart()) == 8

    l = cx.Line3((0, 0, 0), (1, 1, 1))
    assert l.contains(("2", "2", "2"))
    assert l.relation(cx.Line3.through((0, 0, 1), (1, 0, 1))) == "skew"
    assert l.intersection(cx.Line3((0, 0, 0), (1, 0, 0))) == ("0", "0", "0")

    rich = cx.rich_points(lines)
    assert max(rich) <= len(square)

    surfaces = cx.rich_surfaces(lines, 3)
    assert "planes" in surfaces, surfaces.keys()

    structure = cx.structure_report(lines, 2)
    assert isinstance(structure, dict)

    checks = cx.check_reductions([0, 1, 2])
    assert all(checks[k] for k in ("plus", "minus", "product")), checks
    sets = cx.growth_sets([0, 1, 2])
    assert isinstance(sets, dict)

    assert cx.parallel_pair_count(square) >= 0
    report = cx.verify_points(square)
    assert report["passed"], report

    try:
        cx.esgk_family([(0, 0), (0, 0)])
    except ValueError:
        pass
    else:
        raise AssertionError("duplicate points accepted")

    print("pycxdist smoke test passed")


if __name__ == "__main__":
    main()
