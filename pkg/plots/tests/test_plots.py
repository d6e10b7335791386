"""Figure scripts: render the golden fixtures, stay byte-stable, fail cleanly."""

import subprocess
import sys
from pathlib import Path

import pytest

PLOTS_DIR = Path(__file__).resolve().parents[1]
GOLDEN_TRIALS = Path(__file__).parent / "golden_trials.csv"
GOLDEN_COVERAGE = Path(__file__).parent / "golden_coverage.csv"


def run_script(name: str, *args):
    return subprocess.run(
        [sys.executable, str(PLOTS_DIR / name), *map(str, args)],
        capture_output=True,
        text=True,
        cwd=PLOTS_DIR,
    )


@pytest.mark.parametrize(
    "script,fixture",
    [
        ("plot_regret.py", GOLDEN_TRIALS),
        ("plot_scaling.py", GOLDEN_TRIALS),
        ("plot_coverage.py", GOLDEN_COVERAGE),
    ],
)
def test_renders_golden_fixture(script, fixture, tmp_path):
    out = tmp_path / "fig.png"
    res = run_script(script, fixture, out)
    assert res.returncode == 0, res.stderr
    assert out.exists() and out.stat().st_size > 0


@pytest.mark.parametrize(
    "script,fixture",
    [
        ("plot_regret.py", GOLDEN_TRIALS),
        ("plot_scaling.py", GOLDEN_TRIALS),
        ("plot_coverage.py", GOLDEN_COVERAGE),
    ],
)
def test_byte_stable_rendering(script, fixture, tmp_path):
    a, b = tmp_path / "a.png", tmp_path / "b.png"
    assert run_script(script, fixture, a).returncode == 0
    assert run_script(script, fixture, b).returncode == 0
    assert a.read_bytes() == b.read_bytes()


def test_empty_rows_error_without_output(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text(GOLDEN_TRIALS.read_text().splitlines()[0] + "\n")
    out = tmp_path / "fig.png"
    res = run_script("plot_regret.py", empty, out)
    assert res.returncode != 0
    assert "no data rows" in res.stderr
    assert not out.exists()


def test_schema_mismatch_rejected(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b,c\n1,2,3\n")
    res = run_script("plot_regret.py", bad, tmp_path / "fig.png")
    assert res.returncode != 0
    assert "schema" in res.stderr


def test_coverage_schema_mismatch(tmp_path):
    res = run_script("plot_coverage.py", GOLDEN_TRIALS, tmp_path / "fig.png")
    assert res.returncode != 0


def test_inputs_not_mutated(tmp_path):
    before = GOLDEN_TRIALS.read_bytes()
    run_script("plot_regret.py", GOLDEN_TRIALS, tmp_path / "fig.png")
    assert GOLDEN_TRIALS.read_bytes() == before


def test_acceptance_14_all_figures():
    # render the three figure families from the committed fixtures twice,
    # byte-stable at fixed DPI
    import tempfile

    ok = True
    with tempfile.TemporaryDirectory() as td:
        for script, fixture in [
            ("plot_regret.py", GOLDEN_TRIALS),
            ("plot_scaling.py", GOLDEN_TRIALS),
            ("plot_coverage.py", GOLDEN_COVERAGE),
        ]:
            p1 = Path(td) / f"1_{script}.png"
            p2 = Path(td) / f"2_{script}.png"
            ok &= run_script(script, fixture, p1).returncode == 0
            ok &= run_script(script, fixture, p2).returncode == 0
            ok &= p1.exists() and p1.read_bytes() == p2.read_bytes()
    print(f"ACCEPTANCE 14 figure scripts: {'PASS' if ok else 'FAIL'} (3 families, byte-stable)")
    assert ok
