"""Monte-Carlo harness: grids, pairing, failure isolation, annotations."""

from __future__ import annotations

import math

import numpy as np
import pytest

import opinionscape.sweep as sweep_mod
from opinionscape import (CellAggregate, DmpParams, ModelParams, SimConfig,
                          SweepSpec, analyze_cells, baseline_config,
                          connectivity_sweep, log_grid, run_sweep)

TINY_PM = math.exp(-20.0)


def _base(n=12, t=50, seed=9) -> SimConfig:
    return SimConfig(model=ModelParams(n_agents=n, t_final=t),
                     master_seed=seed, metrics_stride=25, snapshot_ticks=())


def test_log_grid_shape_and_endpoints():
    g = log_grid()
    assert g.shape == (19,)
    assert g[0] == pytest.approx(math.exp(-20.0), rel=1e-12)
    assert g[-1] == pytest.approx(math.exp(-2.0), rel=1e-12)
    steps = np.diff(np.log(g))
    assert np.allclose(steps, 1.0, rtol=1e-9)
    assert np.array_equal(log_grid(0.5, 0.5, 3), np.full(3, 0.5))
    assert log_grid(0.1, 0.2, 1).tolist() == [0.1]
    with pytest.raises(ValueError):
        log_grid(0.0, 0.1, 5)
    with pytest.raises(ValueError):
        log_grid(0.2, 0.1, 5)
    with pytest.raises(ValueError):
        log_grid(0.1, 0.2, 0)


def test_spec_defaults_and_validation():
    spec = SweepSpec()
    assert len(spec.grid) == 361
    assert spec.replicates == 24
    assert spec.paired_baseline
    with pytest.raises(ValueError):
        SweepSpec(grid=[]).validate()
    with pytest.raises(ValueError):
        SweepSpec(replicates=0).validate()
    with pytest.raises(ValueError):
        SweepSpec(grid=[(0.1, 2.0)]).validate()


def test_baseline_config_strips_messengers():
    cfg = _base()
    base = baseline_config(cfg)
    assert base.dmp == DmpParams(p_e=0.0, p_m=0.0)
    assert base.model == cfg.model
    assert base.master_seed == cfg.master_seed


def test_sweep_bookkeeping_and_pairing():
    spec = SweepSpec(grid=[(pe, pm) for pe in (0.05, 0.2)
                           for pm in (0.1, 0.3)], replicates=2)
    out = run_sweep(spec, _base())
    assert len(out.cells) == 4
    assert out.failures == []
    assert [(c.p_e, c.p_m) for c in out.cells] == spec.grid
    for c in out.cells:
        assert not c.is_baseline
        assert c.replicates == 2
        assert c.failed == 0
        assert not math.isnan(c.median_normalized_e_p_o)
    assert out.baseline.is_baseline
    # every baseline run normalizes against itself
    assert out.baseline.median_normalized_e_p_o == 1.0
    assert out.baseline.mean_normalized_e_p_o == 1.0
    assert out.baseline.median_normalized_n_clusters == 1.0


def test_vanishing_switch_rate_reproduces_baseline_exactly():
    spec = SweepSpec(grid=[(0.1, TINY_PM)], replicates=2)
    out = run_sweep(spec, _base())
    cell = out.cells[0]
    assert cell.median_normalized_e_p_o == 1.0
    assert cell.mean_normalized_e_p_o == 1.0
    assert cell.median_normalized_e_p_s == 1.0
    assert cell.mean_messenger_ratio == 0.0


def test_keep_results_exposes_runs():
    spec = SweepSpec(grid=[(0.1, 0.2)], replicates=2)
    out = run_sweep(spec, _base(), keep_results=True)
    assert set(out.runs) == {("baseline", 0), ("baseline", 1),
                             (0.1, 0.2, 0), (0.1, 0.2, 1)}
    assert run_sweep(spec, _base()).runs == {}


def test_parallel_and_serial_sweeps_agree():
    spec = SweepSpec(grid=[(0.05, 0.1), (0.2, 0.3)], replicates=2)
    serial = run_sweep(spec, _base(t=30), parallelism=1)
    pooled = run_sweep(spec, _base(t=30), parallelism=2)
    assert serial.cells == pooled.cells
    assert serial.baseline == pooled.baseline


def test_unpaired_baseline_uses_disjoint_seeds():
    spec_p = SweepSpec(grid=[(0.1, 0.2)], replicates=2)
    spec_u = SweepSpec(grid=[(0.1, 0.2)], replicates=2,
                       paired_baseline=False)
    paired = run_sweep(spec_p, _base(t=30), keep_results=True)
    unpaired = run_sweep(spec_u, _base(t=30), keep_results=True)
    assert {paired.runs[("baseline", k)].run_index for k in (0, 1)} == {0, 1}
    assert {unpaired.runs[("baseline", k)].run_index for k in (0, 1)} == {
        1_000_000, 1_000_001}
    # the reference ensemble really is seeded differently
    assert (paired.runs[("baseline", 0)].output_digest
            != unpaired.runs[("baseline", 0)].output_digest)
    # treatment runs are unchanged and normalization stays defined
    assert (paired.runs[(0.1, 0.2, 0)].output_digest
            == unpaired.runs[(0.1, 0.2, 0)].output_digest)
    assert not math.isnan(unpaired.cells[0].median_normalized_e_p_o)
    assert (unpaired.cells[0].median_normalized_e_p_o
            != paired.cells[0].median_normalized_e_p_o)


def test_one_failing_run_does_not_abort_the_sweep(monkeypatch):
    real = sweep_mod.run_simulation

    def flaky(config, run_index=0):
        if config.dmp.p_m == 0.3 and run_index == 1:
            raise RuntimeError("boom")
        return real(config, run_index=run_index)

    monkeypatch.setattr(sweep_mod, "run_simulation", flaky)
    spec = SweepSpec(grid=[(0.1, 0.2), (0.1, 0.3)], replicates=2)
    out = run_sweep(spec, _base())
    assert len(out.failures) == 1
    f = out.failures[0]
    assert (f.p_e, f.p_m, f.run_index) == (0.1, 0.3, 1)
    assert "boom" in f.error
    good = next(c for c in out.cells if c.p_m == 0.2)
    bad = next(c for c in out.cells if c.p_m == 0.3)
    assert good.failed == 0
    assert bad.failed == 1
    assert not math.isnan(bad.median_e_p_o)


def test_connectivity_rows_sorted_and_fully_connected_extreme():
    rows = connectivity_sweep([3.0, 0.15], _base(n=40, t=0), replicates=3)
    assert [r.r_comm for r in rows] == [0.15, 3.0]
    wide = rows[1]
    assert wide.median_initial_n_clusters == 1.0
    assert wide.mean_initial_n_clusters == 1.0
    narrow = rows[0]
    assert narrow.median_initial_n_clusters > 1.0
    for r in rows:
        assert r.replicates == 3
        # t_final = 0 makes the final tick the initial tick
        assert r.median_final_n_clusters == r.median_initial_n_clusters
        assert r.median_final_e_p_o == r.median_initial_e_p_o


def test_connectivity_rejects_bad_radii_and_failures(monkeypatch):
    with pytest.raises(ValueError):
        connectivity_sweep([0.1, -0.2], _base(t=0))

    def broken(config, run_index=0):
        raise RuntimeError("cannot run")

    monkeypatch.setattr(sweep_mod, "run_simulation", broken)
    with pytest.raises(RuntimeError, match="failed"):
        connectivity_sweep([0.1], _base(t=0), replicates=1)


def test_connectivity_keep_results_returns_runs():
    rows, results = connectivity_sweep([0.5], _base(n=8, t=0), replicates=2,
                                       keep_results=True)
    assert set(results) == {(0.5, 0), (0.5, 1)}
    assert rows[0].r_comm == 0.5


def _cell(p_e, p_m, med_epo, med_eps, is_baseline=False) -> CellAggregate:
    return CellAggregate(
        p_e=p_e, p_m=p_m, is_baseline=is_baseline, replicates=4, failed=0,
        mean_e_p_o=0.1, median_e_p_o=0.1, std_e_p_o=0.01,
        mean_e_p_s=0.2, median_e_p_s=0.2, std_e_p_s=0.02,
        mean_n_clusters=3.0, median_n_clusters=3.0,
        mean_messenger_ratio=0.1, mean_time_avg_messenger_ratio=0.1,
        median_normalized_e_p_o=med_epo, mean_normalized_e_p_o=med_epo,
        median_normalized_e_p_s=med_eps, mean_normalized_e_p_s=med_eps,
        median_normalized_n_clusters=1.0)


def test_analyze_cells_annotations_and_best_flags():
    cells = [
        _cell(0.0, 0.0, 1.0, 1.0, is_baseline=True),
        _cell(0.003, 0.0004, 0.4, 0.5),
        _cell(0.01, 0.01, 0.9, 0.2),
        _cell(0.05, 0.0, 1.1, 1.2),
    ]
    notes = analyze_cells(cells)
    assert len(notes) == 3
    example = notes[0]
    assert example.expected_messenger_ratio == pytest.approx(
        0.11764705882352941, rel=1e-12)
    assert example.expected_sojourn_ticks == pytest.approx(
        1416.6666666666667, rel=1e-12)
    assert example.best_e_p_o and not example.best_e_p_s
    mid = notes[1]
    assert mid.best_e_p_s and not mid.best_e_p_o
    degenerate = notes[2]
    assert degenerate.expected_messenger_ratio == 0.0
    assert math.isnan(degenerate.expected_sojourn_ticks)
    assert not degenerate.best_e_p_o


def test_analyze_cells_ignores_nan_and_requires_grid():
    cells = [_cell(0.1, 0.2, math.nan, math.nan),
             _cell(0.1, 0.3, 0.7, 0.8)]
    notes = analyze_cells(cells)
    assert notes[1].best_e_p_o and notes[1].best_e_p_s
    assert not notes[0].best_e_p_o
    with pytest.raises(ValueError):
        analyze_cells([_cell(0.0, 0.0, 1.0, 1.0, is_baseline=True)])
