"""
Tests for parameter sweeps.
"""

import numpy as np
import pandas as pd
import pytest

from bisqueeze.core.errors import ConfigError
from bisqueeze.generation import thermal_occupations
from bisqueeze.sweep import COLUMNS, SweepConfig, evaluate_point, run_sweep, write_csv


@pytest.fixture
def small_sweep():
    return SweepConfig(r_min=0.0, r_max=0.6, r_steps=4)


def test_defaults():
    sweep = SweepConfig()
    assert (sweep.omega_a, sweep.omega_b, sweep.omega_c) == (4.99e9, 5.00e9, 5.01e9)
    assert sweep.temperature == 0.015
    assert sweep.grid()[0] == 0.0 and sweep.grid()[-1] == 2.0
    assert len(sweep.grid()) == 101
    assert sweep.columns() == list(COLUMNS)


def test_rows_in_grid_order_for_any_thread_count(small_sweep):
    single = run_sweep(small_sweep, threads=1)
    pooled = run_sweep(small_sweep, threads=3)

    assert list(single.columns) == list(COLUMNS)
    assert np.allclose(single["r"], small_sweep.grid())
    pd.testing.assert_frame_equal(single, pooled)


def test_vacuum_point_has_no_entanglement(small_sweep):
    frame = run_sweep(small_sweep, threads=1)
    first = frame.iloc[0]
    for column in ("N_abc", "N_a_bc", "N_b_ac", "N_c_ab", "N_ab", "N_bc", "N_ac", "N_out"):
        assert first[column] == pytest.approx(0.0, abs=1e-12), column

    last = frame.iloc[-1]
    assert last["N_abc"] > 0
    assert last["N_out"] > 0
    assert last["N_ac"] == 0.0


def test_default_settings_reproduce_entanglement_trends():
    frame = run_sweep(SweepConfig(r_max=2.0, r_steps=41), threads=2)
    squeezed = frame[frame["r"] > 0]
    rising = frame[frame["r"] >= 0.1]

    assert (frame["N_ac"] == 0.0).all()
    assert np.max(np.abs(frame["N_ab"] - frame["N_bc"])) < 1e-6
    for column in ("N_ab", "adag_c", "C_ac"):
        assert (np.diff(rising[column]) > 0).all(), column

    assert (squeezed["N_abc"] > 0).all()
    assert (np.diff(squeezed["N_abc"]) > 0).all()
    assert (squeezed["N_out"] > 0).all()
    assert (np.abs(squeezed["adag_c_out"]) < np.abs(squeezed["adag_c"])).all()


def test_tripartite_onset_is_above_zero_at_finite_temperature():
    nus = thermal_occupations(SweepConfig().thermal_spec())
    assert evaluate_point(1e-8, nus)["N_abc"] == 0.0
    assert evaluate_point(1e-5, nus)["N_abc"] > 0


def test_point_values():
    nus = (1.0, 1.0, 1.0)
    row = evaluate_point(0.5, nus)
    assert row["N_abc"] == pytest.approx((row["N_a_bc"] * row["N_b_ac"] * row["N_c_ab"]) ** (1 / 3))
    assert row["out_11"] > 1.0
    assert row["C_ac"] > 0


def test_thread_count_must_be_positive(small_sweep):
    with pytest.raises(ConfigError, match="threads"):
        run_sweep(small_sweep, threads=0)


def test_output_subset(small_sweep):
    sweep = small_sweep.model_copy(update={"outputs": ["N_out", "N_abc"]})
    frame = run_sweep(sweep, threads=1)
    assert list(frame.columns) == ["r", "N_abc", "N_out"]


def test_unknown_output_rejected():
    with pytest.raises(ConfigError, match="outputs"):
        SweepConfig.load(outputs=["N_xyz"])


def test_load_from_yaml_with_overrides(tmp_path):
    path = tmp_path / "sweep.yaml"
    path.write_text("temperature: 0.02\nr_max: 1.0\nr_steps: 11\n")

    sweep = SweepConfig.load(path, r_steps=5, theta=None)
    assert sweep.temperature == 0.02
    assert sweep.r_max == 1.0
    assert sweep.r_steps == 5
    assert sweep.theta == 0.0


@pytest.mark.parametrize("content,field", [
    ("r_min: 1.0\nr_max: 0.5\n", None),
    ("r_steps: 1\n", "r_steps"),
    ("colour: blue\n", "colour"),
    ("logging:\n  level: INFO\n", "logging"),
])
def test_invalid_yaml_rejected(tmp_path, content, field):
    path = tmp_path / "sweep.yaml"
    path.write_text(content)
    with pytest.raises(ConfigError) as excinfo:
        SweepConfig.load(path)
    if field is not None:
        assert excinfo.value.field == field


def test_yaml_syntax_error_reports_line(tmp_path):
    path = tmp_path / "sweep.yaml"
    path.write_text("temperature: 0.02\nr_max: [1.0\n")
    with pytest.raises(ConfigError) as excinfo:
        SweepConfig.load(path)
    assert excinfo.value.line is not None


def test_missing_file():
    with pytest.raises(ConfigError):
        SweepConfig.load("/nonexistent/sweep.yaml")


def test_write_csv(tmp_path, small_sweep):
    frame = run_sweep(small_sweep, threads=1)
    path = tmp_path / "sweep.csv"
    write_csv(frame, path)

    loaded = pd.read_csv(path)
    assert list(loaded.columns) == list(COLUMNS)
    assert np.allclose(loaded.to_numpy(), frame.to_numpy(), rtol=1e-11, atol=1e-14)


def test_write_csv_to_stdout(capsys, small_sweep):
    frame = run_sweep(small_sweep.model_copy(update={"outputs": ["N_abc"]}), threads=1)
    capsys.readouterr()
    write_csv(frame, "-")
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "r,N_abc"
    assert len(lines) == 1 + small_sweep.r_steps
