import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from risnull.fields import FarFieldTarget, NullingSystem, assemble_system  # noqa: E402
from risnull.geometry import SPEED_OF_LIGHT, DishGeometry, build_rim_layout  # noqa: E402

FREQ = 1.5e9
WAVELENGTH = SPEED_OF_LIGHT / FREQ
# focal length used for the study scenarios (see scenarios/study.yaml)
STUDY_FOCAL = 7.4
STUDY_ROWS = [
    (1.85,),
    (1.85, 2.05),
    (1.85, 2.05, 2.25),
    (1.85, 2.125, 2.4, 2.675),
    (1.85, 2.1, 2.35, 2.6),
    (1.85, 2.05, 2.25, 2.45),
]
STUDY_WINF = [0.7747, 0.8479, 1.1378, 1.3923, 1.5682, 1.9420]
STUDY_COND = [1.0758, 3.0369, 11.4594, 13.5242, 18.9857, 42.0524]
SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


def h_targets(angles, freq=FREQ):
    return [FarFieldTarget.from_degrees(a, 0.0, freq) for a in angles]


def toy_system(A, y):
    A = np.ascontiguousarray(A, dtype=np.complex128)
    y = np.ascontiguousarray(y, dtype=np.complex128)
    return NullingSystem(A, y, (), -y.copy(), None)


@pytest.fixture(scope="session")
def study_geom():
    return DishGeometry.from_rim(18.0, 0.5, focal_length=STUDY_FOCAL)


@pytest.fixture(scope="session")
def default_geom():
    return DishGeometry.from_rim(18.0, 0.5)


@pytest.fixture(scope="session")
def study_layout(study_geom):
    return build_rim_layout(study_geom, WAVELENGTH)


@pytest.fixture(scope="session")
def study_systems(study_geom, study_layout):
    return [assemble_system(h_targets(r), 0.01, study_layout, study_geom) for r in STUDY_ROWS]


@pytest.fixture(scope="session")
def solved_cache():
    """Memo for expensive solver runs shared between test modules."""
    return {}


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def solve_row(study_systems, solved_cache):
    """``solve_row(method, row, **kw)`` with results memoised per session."""
    from risnull import solvers

    funcs = {"pinv": solvers.solve_pseudoinverse, "gp": solvers.solve_gp, "ap": solvers.solve_ap,
             "expp": solvers.solve_expp, "sa": solvers.solve_sa_baseline}

    def run(method, row, **kw):
        key = (method, row, tuple(sorted(kw.items())))
        if key not in solved_cache:
            sys_ = study_systems[row]
            if method == "pair":
                w_star = run("pinv", row).w
                solved_cache[key] = solvers.pair_merge_closed_form(sys_, w_star)
            else:
                solved_cache[key] = funcs[method](sys_, **kw)
        return solved_cache[key]

    return run


# ---- acceptance report ---------------------------------------------------

ACCEPTANCE = {}


@pytest.fixture(scope="session")
def accept():
    """``accept(criterion, name, ok, detail)`` records one acceptance sub-check."""

    def record(criterion, name, ok, detail=""):
        ACCEPTANCE.setdefault(criterion, []).append((name, bool(ok), detail))
        print(f"criterion {criterion} [{name}] {'PASS' if ok else 'FAIL'}: {detail}")
        return bool(ok)

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for crit in sorted(ACCEPTANCE):
        subs = ACCEPTANCE[crit]
        ok = all(s[1] for s in subs)
        tr.write_line(f"CRITERION {crit}: {'PASS' if ok else 'FAIL'}")
        for name, s_ok, detail in subs:
            tr.write_line(f"    {'pass' if s_ok else 'FAIL'}  {name}: {detail}")
