import pytest

from lamelattice.profiles import Family
from lamelattice.verification import GridSpec, build_cells, run_cell, run_grid


def small(**kw):
    base = {"N_max": 3, "draws": 2}
    base.update(kw)
    return GridSpec.from_dict(base)


def test_small_grid_passes_and_is_deterministic():
    a = run_grid(small(), seed=5)
    b = run_grid(small(), seed=5, jobs=2)
    assert a == b
    assert a["passed"] and a["cells"] == (6 + 6 + 4 + 4) * 3 * 2


def test_seed_changes_draws():
    assert build_cells(small(), 1)[0].beta != build_cells(small(), 2)[0].beta


def test_row_schema():
    row = run_grid(small(models=["salerno"]), seed=0)["rows"][0]
    for key in ("model", "family", "N", "params", "beta", "c2", "m", "max_residual", "rms_residual",
                "omega1", "omega2", "omega2_paper", "flags"):
        assert key in row


def test_mutation_trips_every_cell_above_order_one():
    rep = run_grid(small(mutate=True), seed=0)
    assert not rep["passed"]
    for r in rep["rows"]:
        assert r["passed"] == (r["N"] == 1)


def test_empty_grid():
    rep = run_grid(GridSpec.from_dict({"models": []}))
    assert rep["cells"] == 0 and rep["passed"] and rep["rows"] == []


def test_unbounded_rows_default_to_multiprecision():
    rep = run_grid(small(models=["al"], families={"al": ["cosh", "nd"]}), seed=0)
    assert rep["passed"]
    for r in rep["rows"]:
        assert r["metric"] == "abs" and "multiprecision" in r["flags"] and r["dps"] > 15
        assert r["max_residual"] < 1e-20


def test_float64_unbounded_rows_use_relative_metric():
    rep = run_grid(small(models=["al"], families={"al": ["cosh", "nd"]}, precision="float64"), seed=0)
    assert rep["passed"]
    assert all(r["metric"] == "rel" and "relative_metric" in r["flags"] for r in rep["rows"])
    # double precision cannot hold the absolute residual of these fields
    assert max(r["max_residual"] for r in rep["rows"]) > 1e-10


def test_multiprecision_everywhere():
    rep = run_grid(small(models=["phi4"], N_max=2, precision="multiprecision"), seed=0)
    assert rep["passed"] and all(r["dps"] for r in rep["rows"])


def test_invalid_grid():
    with pytest.raises(ValueError):
        GridSpec.from_dict({"models": ["kdv"]})
    with pytest.raises(ValueError):
        small(families={"phi4": ["cosh"]}).families_for("phi4")
    with pytest.raises(ValueError):
        small(precision="quad")


def test_threshold_breach():
    rep = run_grid(small(threshold=1e-30, models=["phi4"]), seed=0)
    assert not rep["passed"] and len(rep["failures"]) > 0
