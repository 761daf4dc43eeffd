import csv
import json
import subprocess
import sys
import textwrap

import pytest

from risnull import __version__
from risnull.cli import (
    EXIT_CONFIG,
    EXIT_MISSING,
    EXIT_OK,
    EXIT_SINGULAR,
    ConfigError,
    load_scenario,
    main,
)
from conftest import SCENARIOS

BASE = """\
seed: 7
geometry:
  diameter_m: 18.0
  rim_width_m: 0.5
  design_freq_hz: 1.5e9
mainlobe_delta: 0.01
"""


def write(tmp_path, body, name="s.yaml"):
    p = tmp_path / name
    p.write_text(textwrap.dedent(body))
    return p


def run(cmd, scenario, out, capsys=None):
    code = main([cmd, "--scenario", str(scenario), "--out", str(out)])
    err = capsys.readouterr().err if capsys is not None else ""
    return code, err


@pytest.fixture
def one_null(tmp_path):
    return write(tmp_path, BASE + """\
targets:
  - {psi_deg: 1.85, phi_deg: 0.0}
solvers:
  - method: pinv
  - method: gp
    max_iter: 2000
evaluation:
  psi_min_deg: 1.5
  psi_max_deg: 2.2
  step_deg: 0.05
  methods: [reference, pinv, gp]
""")


def test_shipped_scenarios_load():
    for name in ("minimal.yaml", "study.yaml"):
        sc = load_scenario(SCENARIOS / name)
        assert sc.targets and sc.solvers
    sc = load_scenario(SCENARIOS / "study.yaml")
    assert len(sc.table["angle_sets"]) == 6
    assert sc.geometry.focal_length == 7.4


def test_solve_minimal(one_null, tmp_path):
    out = tmp_path / "out"
    assert run("solve", one_null, out)[0] == EXIT_OK
    for m in ("pinv", "gp"):
        for stem in ("weights", "trace", "null_report"):
            ext = "csv" if stem == "trace" else "json"
            assert (out / f"{stem}_{m}.{ext}").exists()
    rep = json.loads((out / "null_report_pinv.json").read_text())
    assert rep["relative_residual"] < 1e-10 and rep["residual"] < 1e-10
    assert rep["targets"][0]["psi_deg"] == 1.85
    w = json.loads((out / "weights_gp.json").read_text())
    assert w["constraint"] == "unimodular" and isinstance(w["converged"], bool)
    assert all(len(p) == 2 for p in w["weights"])
    meta = w["metadata"]
    assert set(meta) >= {"config_hash", "f_over_d", "field_scale", "version"}
    assert meta["f_over_d"] == pytest.approx(0.375) and meta["version"] == __version__
    lines = (out / "trace_gp.csv").read_text().splitlines()
    header = [line for line in lines if not line.startswith("#")][0]
    assert header == "iter,objective,c"
    assert any(line.startswith("# config_hash") for line in lines)


def test_solve_is_byte_identical(one_null, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    run("solve", one_null, a)
    run("solve", one_null, b)
    for f in sorted(a.iterdir()):
        assert f.read_bytes() == (b / f.name).read_bytes(), f.name


def test_pattern_after_solve(one_null, tmp_path):
    out = tmp_path / "out"
    run("solve", one_null, out)
    assert run("pattern", one_null, out)[0] == EXIT_OK
    text = (out / "pattern_phi0.csv").read_text()
    rows = [line for line in text.splitlines() if not line.startswith("#")]
    assert rows[0] == "psi_deg,ref_db,pinv_db,gp_db"
    assert len(rows) == 1 + 15
    first = text
    run("pattern", one_null, out)
    assert (out / "pattern_phi0.csv").read_text() == first


def test_pattern_reference_only(tmp_path):
    sc = write(tmp_path, BASE + """\
targets:
  - {psi_deg: 1.85}
evaluation:
  psi_max_deg: 1.0
  step_deg: 0.1
  methods: [reference]
""")
    out = tmp_path / "out"
    assert run("pattern", sc, out)[0] == EXIT_OK
    rows = list(csv.reader(line for line in (out / "pattern_phi0.csv").read_text().splitlines()
                           if not line.startswith("#")))
    assert rows[0] == ["psi_deg", "ref_db"] and len(rows) == 12


def test_pattern_missing_weights(one_null, tmp_path, capsys):
    code, err = run("pattern", one_null, tmp_path / "empty", capsys)
    assert code == EXIT_MISSING
    assert "weights_pinv.json" in err


def test_bad_psi_names_field(tmp_path, capsys):
    sc = write(tmp_path, BASE + """\
targets:
  - {psi_deg: 1.85}
  - {psi_deg: 95.0}
solvers:
  - method: pinv
""")
    code, err = run("solve", sc, tmp_path / "o", capsys)
    assert code == EXIT_CONFIG
    assert "psi_deg" in err and "s.yaml:" in err


def test_unknown_key_rejected_with_line(tmp_path, capsys):
    sc = write(tmp_path, BASE + """\
targets:
  - {psi_deg: 1.85}
solvers:
  - method: pinv
    tolerance: 1e-9
""")
    code, err = run("solve", sc, tmp_path / "o", capsys)
    assert code == EXIT_CONFIG
    assert "tolerance" in err and "s.yaml:11:" in err


def test_unknown_top_level_key(tmp_path):
    sc = write(tmp_path, BASE + "targetz: []\n")
    with pytest.raises(ConfigError) as err:
        load_scenario(sc)
    assert err.value.line == 7


def test_sa_requires_seed(tmp_path, capsys):
    body = BASE.replace("seed: 7\n", "") + """\
targets:
  - {psi_deg: 1.85}
solvers:
  - method: sa
    n_steps: 100
"""
    code, err = run("solve", write(tmp_path, body), tmp_path / "o", capsys)
    assert code == EXIT_CONFIG and "seed" in err
    ok = body.replace("n_steps: 100", "n_steps: 100\n    seed: 3")
    assert run("solve", write(tmp_path, ok, "t.yaml"), tmp_path / "o")[0] == EXIT_OK


def test_bad_method_and_types(tmp_path, capsys):
    sc = write(tmp_path, BASE + """\
targets:
  - {psi_deg: 1.85}
solvers:
  - method: newton
""")
    assert run("solve", sc, tmp_path / "o", capsys)[0] == EXIT_CONFIG
    sc = write(tmp_path, BASE.replace("18.0", "big") + "targets:\n  - {psi_deg: 1.0}\n", "u.yaml")
    code, err = run("solve", sc, tmp_path / "o", capsys)
    assert code == EXIT_CONFIG and "diameter_m" in err


def test_duplicate_targets_config_error(tmp_path, capsys):
    sc = write(tmp_path, BASE + """\
targets:
  - {psi_deg: 1.85}
  - {psi_deg: 1.85}
solvers:
  - method: pinv
""")
    assert run("solve", sc, tmp_path / "o", capsys)[0] == EXIT_CONFIG


def test_singular_system_exit_4(tmp_path, capsys):
    sc = write(tmp_path, BASE + """\
targets:
  - {psi_deg: 1.85}
  - {psi_deg: 1.8500000001}
solvers:
  - method: pinv
""")
    code, err = run("solve", sc, tmp_path / "o", capsys)
    assert code == EXIT_SINGULAR and "smallest eigenvalue" in err


def test_missing_scenario_file(tmp_path, capsys):
    code, _ = run("solve", tmp_path / "nope.yaml", tmp_path / "o", capsys)
    assert code in (EXIT_CONFIG, EXIT_MISSING)


def test_analyze_identical_targets(tmp_path):
    sc = write(tmp_path, BASE + """\
targets:
  - {psi_deg: 2.0}
  - {psi_deg: 2.0}
""")
    out = tmp_path / "o"
    assert run("analyze", sc, out)[0] == EXIT_OK
    pair = json.loads((out / "correlation.json").read_text())["pairs"][0]
    assert pair["empirical_re"] == 1.0 and pair["empirical_im"] == 0.0
    assert pair["analytic_re"] == 1.0
    feas = json.loads((out / "feasibility.json").read_text())
    assert feas["feasibility"] is None


def test_analyze_distinct_targets(tmp_path):
    sc = write(tmp_path, BASE + """\
targets:
  - {psi_deg: 1.85}
  - {psi_deg: 2.05}
  - {psi_deg: 2.25}
""")
    out = tmp_path / "o"
    assert run("analyze", sc, out)[0] == EXIT_OK
    pairs = json.loads((out / "correlation.json").read_text())["pairs"]
    assert [(p["i"], p["j"]) for p in pairs] == [(0, 1), (0, 2), (1, 2)]
    assert all(p["abs_error"] < 0.05 for p in pairs)
    feas = json.loads((out / "feasibility.json").read_text())
    assert set(feas["feasibility"]) >= {"inf_norm", "epsilon", "energy_lhs", "energy_rhs", "feasible"}
    assert feas["eigenvalue_bounds"]["holds"]


def test_table_small(tmp_path):
    sc = write(tmp_path, BASE + """\
solvers:
  - method: gp
    max_iter: 3000
table:
  angle_sets: [[1.85], [1.85, 2.05]]
  methods: [pinv, gp, pair]
""")
    out = tmp_path / "o"
    assert run("table", sc, out)[0] == EXIT_OK
    rows = list(csv.DictReader(line for line in (out / "table.csv").read_text().splitlines()
                               if not line.startswith("#")))
    assert len(rows) == 2
    assert set(rows[0]) >= {"angles_deg", "cond_A", "w_star_inf", "epsilon", "feasible",
                            "pinv_suppression_db", "gp_suppression_db", "pair_suppression_db"}
    assert float(rows[1]["cond_A"]) > float(rows[0]["cond_A"])


def test_table_without_angle_sets(tmp_path, capsys):
    sc = write(tmp_path, BASE + "targets:\n  - {psi_deg: 1.85}\n")
    assert run("table", sc, tmp_path / "o", capsys)[0] == EXIT_CONFIG


def test_module_entry_point(one_null, tmp_path):
    res = subprocess.run([sys.executable, "-m", "risnull", "solve", "--scenario", str(one_null),
                          "--out", str(tmp_path / "o")], capture_output=True, text=True)
    assert res.returncode == 0, res.stderr
    assert "weights_pinv.json" in res.stdout
    res = subprocess.run([sys.executable, "-m", "risnull", "--version"], capture_output=True, text=True)
    assert __version__ in res.stdout
