import json

import numpy as np
import pytest

from photometrix.cli import load_config, main
from photometrix.errors import ConfigError
from photometrix.fisher import TwinFock
from photometrix.pipelines import parse_grid, run_pipeline, run_sweep
from photometrix.protocol import advantage_boundary


def read_csv(path):
    lines = path.read_text().splitlines()
    header = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:]]
    return header, rows


SMALL_FIG2 = {"nabs_points": "4", "N_list": "2,4"}


class TestPipelineRuns:
    def test_fig2_schema_and_classical_column(self, tmp_path):
        run_pipeline("fig2", [SMALL_FIG2], tmp_path)
        header, rows = read_csv(tmp_path / "fig2.csv")
        assert header == ["N_abs", "N", "dg2_per_gT", "nu_opt", "classical"]
        assert len(rows) == 8
        for row in rows:
            # gamma = 1: the classical column reduces to the budget itself
            assert float(row[4]) == pytest.approx(float(row[0]), rel=1e-15)

    def test_reruns_are_byte_identical(self, tmp_path):
        run_pipeline("fig2", [SMALL_FIG2], tmp_path / "a")
        run_pipeline("fig2", [SMALL_FIG2], tmp_path / "b")
        assert (tmp_path / "a/fig2.csv").read_bytes() == (tmp_path / "b/fig2.csv").read_bytes()

    def test_manifest_counts_rows(self, tmp_path):
        manifest = run_pipeline("fig2", [SMALL_FIG2], tmp_path)
        files = [o["file"] for o in manifest["outputs"]]
        assert files.count("fig2.csv") == 1
        _, rows = read_csv(tmp_path / "fig2.csv")
        assert manifest["outputs"][0]["rows"] == len(rows)
        assert manifest["parameters"]["N_list"] == [2, 4]
        on_disk = json.loads((tmp_path / "manifest_fig2.json").read_text())
        assert on_disk["outputs"] == manifest["outputs"]

    def test_unknown_parameter_rejected(self, tmp_path):
        with pytest.raises(ConfigError):
            run_pipeline("fig2", [{"no_such_knob": "1"}], tmp_path)

    def test_unknown_pipeline_rejected(self, tmp_path):
        with pytest.raises(ConfigError):
            run_pipeline("figure-nine", [], tmp_path)


class TestMainEntry:
    def test_unknown_pipeline_exits_2(self, tmp_path, capsys):
        assert main(["nosuchpipe", "--out", str(tmp_path)]) == 2
        err = capsys.readouterr().err
        assert "usage" in err and "fig2" in err

    def test_success_exit_0(self, tmp_path):
        rc = main(["fig2", "--out", str(tmp_path), "--nabs_points", "3", "--N_list", "2"])
        assert rc == 0
        assert (tmp_path / "fig2.csv").exists()

    def test_infeasible_parameters_exit_3(self, tmp_path):
        rc = main(["fig2", "--out", str(tmp_path), "--T", "-5"])
        assert rc == 3

    def test_config_file_with_flag_override(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("nabs_points = 3\nN_list = 2,4data\n".replace("data", ""))
        rc = main([
            "fig2", "--config", str(cfg), "--out", str(tmp_path),
            "--N_list", "2",  # flag wins over the config file
        ])
        assert rc == 0
        manifest = json.loads((tmp_path / "manifest_fig2.json").read_text())
        assert manifest["parameters"]["N_list"] == [2]
        assert manifest["parameters"]["nabs_points"] == 3

    def test_help_exit_0(self, capsys):
        assert main(["--help"]) == 0
        assert "pipelines" in capsys.readouterr().out

    def test_config_comments_and_blanks(self, tmp_path):
        cfg = tmp_path / "c.cfg"
        cfg.write_text("# comment\n\nnabs_points = 3  # trailing\n")
        assert load_config(cfg) == {"nabs_points": "3"}


class TestSweep:
    def test_grid_cardinality(self, tmp_path):
        manifest = run_sweep(
            "tfs-qfi-precision",
            ['eta=0.9,0.95,1.0', 't_ext=0:0.05:0.05'],
            [{"N": "8"}],
            tmp_path,
        )
        assert manifest["outputs"][0]["rows"] == 6
        header, rows = read_csv(tmp_path / "sweep.csv")
        assert header[:2] == ["eta", "t_ext"]
        assert len(rows) == 6

    def test_empty_grid_header_only(self, tmp_path):
        rc = main([
            "sweep", "--engine", "tfs-qfi-precision", "--grid", "eta=",
            "--out", str(tmp_path),
        ])
        assert rc == 0
        header, rows = read_csv(tmp_path / "sweep.csv")
        assert rows == []
        assert header[0] == "eta"

    def test_range_spec_inclusive(self):
        name, vals = parse_grid("eta=0.9:1.0:0.02")
        assert name == "eta"
        assert np.allclose(vals, [0.9, 0.92, 0.94, 0.96, 0.98, 1.0])

    def test_bad_grid_exits_2(self, tmp_path):
        rc = main([
            "sweep", "--engine", "tfs-qfi-precision", "--grid", "eta=0.9:1.0",
            "--out", str(tmp_path),
        ])
        assert rc == 2

    def test_unknown_engine_exits_2(self, tmp_path):
        rc = main(["sweep", "--engine", "wat", "--grid", "eta=1", "--out", str(tmp_path)])
        assert rc == 2

    def test_boundary_sweep_matches_library_rows(self, tmp_path):
        t_grid = np.geomspace(0.02, 0.08, 3)
        spec = "t_ext=" + ",".join(format(t, ".17g") for t in t_grid)
        run_sweep("boundary-eta", [spec], [{"N": "8"}], tmp_path)
        _, rows = read_csv(tmp_path / "sweep.csv")
        _, etas = advantage_boundary(TwinFock(4), 1.0, t_grid)
        assert len(rows) == 3
        for row, eta in zip(rows, etas):
            assert float(row[1]) == pytest.approx(eta, abs=2e-6)
