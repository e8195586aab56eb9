"""Smoke suite: generate a golden CSV set with the photometrix CLI (reduced
grids, full schemas) and render every bundled recipe from it."""

import hashlib
import subprocess
import sys

import pytest

from photometrix_figures.cli import main as figures_main
from photometrix_figures.recipes import RECIPES
from photometrix_figures.render import MissingColumn, load_table, render

# reduced grids: fewer points, same columns as the full runs
GOLDEN_RUNS = [
    ["fig1", "--nabs_points", "3", "--n_poisson", "120", "--gstar_scan", "6",
     "--q_max", "6"],
    ["fig2", "--nabs_points", "4", "--N_list", "2,4,6,8"],
    ["fig3a", "--nabs_points", "4", "--N_list", "2,4,6,8"],
    ["fig3b", "--text_points", "4", "--N_env", "2,8", "--bisect_tol", "1e-4"],
    ["cavity-perror", "--n_max", "4", "--N_at_list", "20,40"],
    ["cavity-ac", "--n_max", "3", "--N_at", "40", "--eta_list", "0.9,1.0"],
    ["app-cfi", "--phi_points", "5", "--N_list", "2,4", "--gstar_scan", "8"],
    ["app-regions", "--text_points", "4", "--bisect_tol", "1e-4"],
    ["app-tfs-noise", "--nabs_points", "4", "--N_list", "2,8"],
    ["app-dicke-prep", "--t_points", "25", "--N_at", "30"],
    ["app-timescale", "--N_list", "100,316", "--exact_max", "316"],
]


@pytest.fixture(scope="session")
def golden_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("golden")
    for run in GOLDEN_RUNS:
        cmd = [sys.executable, "-m", "photometrix.cli", run[0], "--out", str(out)]
        cmd += run[1:]
        proc = subprocess.run(cmd, capture_output=True, text=True)
        assert proc.returncode == 0, f"{run[0]} failed: {proc.stderr}"
    return out


def _tree_hash(path):
    digest = hashlib.sha256()
    for f in sorted(path.glob("*.csv")):
        digest.update(f.name.encode())
        digest.update(f.read_bytes())
    return digest.hexdigest()


def test_recipes_reference_their_inputs():
    for recipe in RECIPES.values():
        for curve in recipe.curves:
            assert curve.file in recipe.inputs


@pytest.mark.parametrize("name", sorted(RECIPES))
def test_bundled_recipe_renders(golden_dir, name):
    out = render(RECIPES[name], golden_dir)
    assert out.exists() and out.stat().st_size > 0


def test_rendering_never_mutates_inputs(golden_dir, tmp_path):
    before = _tree_hash(golden_dir)
    for recipe in RECIPES.values():
        render(recipe, golden_dir, tmp_path)
    assert _tree_hash(golden_dir) == before


def test_missing_column_error_names_it(tmp_path):
    (tmp_path / "fig1.csv").write_text("N_abs,qfi_tfs\n1,1\n")
    with pytest.raises(MissingColumn) as err:
        render(RECIPES["fig1"], tmp_path)
    assert "qfi_noon" in str(err.value)


def test_cli_reports_missing_column(tmp_path, capsys):
    (tmp_path / "fig1.csv").write_text("N_abs,qfi_tfs\n1,1\n")
    rc = figures_main([str(tmp_path), "--only", "fig1"])
    assert rc == 1
    assert "qfi_noon" in capsys.readouterr().err


def test_cli_renders_everything(golden_dir, tmp_path, capsys):
    rc = figures_main([str(golden_dir), "--out", str(tmp_path)])
    assert rc == 0
    rendered = {line.split()[-1] for line in capsys.readouterr().out.splitlines()}
    assert len(rendered) == len(RECIPES)
    for recipe in RECIPES.values():
        assert (tmp_path / recipe.output).exists()


def test_loader_round_trips_full_precision(golden_dir):
    table = load_table(golden_dir / "fig2.csv")
    assert table["N_abs"].dtype.kind == "f"
    assert len(table["N_abs"]) > 0
