"""Bundled recipes, one or two per photometrix pipeline."""

from .render import Curve, FigureRecipe

DASH = {"linestyle": "--", "color": "k"}

RECIPES = {
    "fig1": FigureRecipe(
        name="fig1",
        curves=(
            Curve("fig1.csv", "N_abs", "qfi_tfs", "twin Fock (QFI)"),
            Curve("fig1.csv", "N_abs", "qfi_noon", "NOON (QFI)"),
            Curve("fig1.csv", "N_abs", "cfi_nrm_g0", "twin Fock (NRM, g=0)"),
            Curve("fig1.csv", "N_abs", "cfi_nrm_gstar", "twin Fock (NRM, g=g*)"),
            Curve("fig1.csv", "N_abs", "cfi_squeezed", "squeezed (NRM)"),
            Curve("fig1.csv", "N_abs", "upper_bound", "loss bound", style=DASH),
        ),
        xlabel="absorbed photons per sample",
        ylabel="Fisher information per test (gamma^-2)",
        xscale="log",
        yscale="log",
        output="fig1.png",
    ),
    "fig2": FigureRecipe(
        name="fig2",
        curves=(
            Curve("fig2.csv", "N_abs", "dg2_per_gT", "twin Fock", group=("N",)),
            Curve("fig2.csv", "N_abs", "classical", "coherent bound", style=DASH),
        ),
        xlabel="absorbed photons per sample",
        ylabel="precision per unit time",
        xscale="log",
        yscale="log",
        output="fig2.png",
    ),
    "fig3a": FigureRecipe(
        name="fig3a",
        curves=(
            Curve("fig3a.csv", "N_abs", "dg2_per_gT", "twin Fock", group=("N",)),
            Curve("fig3a.csv", "N_abs", "classical", "coherent bound", style=DASH),
        ),
        xlabel="absorbed photons per sample",
        ylabel="precision per unit time",
        xscale="log",
        yscale="log",
        output="fig3a.png",
    ),
    "fig3b": FigureRecipe(
        name="fig3b",
        curves=(
            Curve("fig3b.csv", "gamma_t_ext", "eta_N2", "N=2", one_minus=True),
            Curve("fig3b.csv", "gamma_t_ext", "eta_N8", "N=8", one_minus=True),
            Curve("fig3b.csv", "gamma_t_ext", "eta_N20", "N=20", one_minus=True),
            Curve("fig3b.csv", "gamma_t_ext", "eta_any", "any N", style=DASH, one_minus=True),
        ),
        xlabel="overhead time (units of 1/gamma)",
        ylabel="detector inefficiency at the boundary",
        xscale="log",
        yscale="log",
        output="fig3b.png",
    ),
    "cavity-perror": FigureRecipe(
        name="cavity-perror",
        curves=(
            Curve("cavity_perror.csv", "n", "p_error", group=("N_at", "rounds")),
        ),
        xlabel="photons to absorb",
        ylabel="absorption error probability",
        yscale="log",
        output="cavity_perror.png",
    ),
    "cavity-ac": FigureRecipe(
        name="cavity-ac",
        curves=(
            Curve("cavity_ac.csv", "n", "dg2_ac_per_gT", "atom-cavity", group=("eta",)),
            Curve("cavity_ac.csv", "n", "dg2_tfs_per_gT", "ideal twin Fock",
                  group=("eta",), style={"linestyle": ":"}),
        ),
        xlabel="target photons per cavity",
        ylabel="precision per unit time",
        yscale="log",
        output="cavity_ac.png",
    ),
    "app-cfi-vs-phi": FigureRecipe(
        name="app-cfi-vs-phi",
        curves=(
            Curve("app_cfi_vs_phi.csv", "phi", "cfi_nrm", "CFI (NRM)"),
            Curve("app_cfi_vs_phi.csv", "phi", "qfi", "QFI", style=DASH),
            Curve("app_cfi_vs_phi.csv", "phi", "snl", "shot noise",
                  style={"linestyle": ":", "color": "gray"}),
        ),
        xlabel="interaction phase",
        ylabel="Fisher information per test",
        output="app_cfi_vs_phi.png",
    ),
    "app-cfi-vs-n": FigureRecipe(
        name="app-cfi-vs-n",
        curves=(
            Curve("app_cfi_vs_N.csv", "N", "cfi_nrm_g0", "CFI at g=0"),
            Curve("app_cfi_vs_N.csv", "N", "cfi_nrm_gstar", "CFI at g=g*"),
            Curve("app_cfi_vs_N.csv", "N", "qfi", "QFI", style=DASH),
            Curve("app_cfi_vs_N.csv", "N", "snl", "shot noise",
                  style={"linestyle": ":", "color": "gray"}),
        ),
        xlabel="total photon number",
        ylabel="Fisher information per test",
        output="app_cfi_vs_N.png",
    ),
    "app-regions": FigureRecipe(
        name="app-regions",
        curves=(
            Curve("app_regions.csv", "gamma_t_ext", "eta_max_t", "any state",
                  style=DASH, one_minus=True),
            Curve("app_regions.csv", "gamma_t_ext", "eta_N2", "N=2", one_minus=True),
            Curve("app_regions.csv", "gamma_t_ext", "eta_N4", "N=4", one_minus=True),
            Curve("app_regions.csv", "gamma_t_ext", "eta_N8", "N=8", one_minus=True),
            Curve("app_regions.csv", "gamma_t_ext", "eta_N16", "N=16", one_minus=True),
            Curve("app_regions.csv", "gamma_t_ext", "eta_N64", "N=64", one_minus=True),
        ),
        xlabel="overhead time (units of 1/gamma)",
        ylabel="detector inefficiency at the bound",
        xscale="log",
        yscale="log",
        output="app_regions.png",
    ),
    "app-tfs-noise": FigureRecipe(
        name="app-tfs-noise",
        curves=(
            Curve("app_tfs_noise.csv", "N_abs", "dg2_qfi_per_gT", "QFI", group=("N",)),
            Curve("app_tfs_noise.csv", "N_abs", "dg2_nrm_per_gT", "NRM",
                  group=("N",), style={"linestyle": ":"}),
            Curve("app_tfs_noise.csv", "N_abs", "classical", "coherent bound", style=DASH),
        ),
        xlabel="absorbed photons per sample",
        ylabel="precision per unit time",
        xscale="log",
        yscale="log",
        output="app_tfs_noise.png",
    ),
    "app-dicke-prep-meanphotons": FigureRecipe(
        name="app-dicke-prep-meanphotons",
        curves=(
            Curve("app_dicke_prep_meanphotons.csv", "t", "mean_photons", "cavity photons"),
        ),
        xlabel="time (units of 1/J)",
        ylabel="mean photon number",
        output="app_dicke_prep_meanphotons.png",
    ),
    "app-dicke-prep-pmf": FigureRecipe(
        name="app-dicke-prep-pmf",
        curves=(
            Curve("app_dicke_prep_pmf.csv", "k", "prob", "photon distribution",
                  style={"marker": "o", "linestyle": "-"}),
        ),
        xlabel="photon number",
        ylabel="probability",
        output="app_dicke_prep_pmf.png",
    ),
    "app-timescale": FigureRecipe(
        name="app-timescale",
        curves=(
            Curve("app_timescale.csv", "N", "t_switch_meanfield", "mean field",
                  style={"marker": "o"}),
            Curve("app_timescale.csv", "N", "t_switch_formula", "log(4N)/(2 sqrt N)",
                  style=DASH),
            Curve("app_timescale.csv", "N", "t_peak_exact", "exact ladder",
                  style={"marker": "s", "linestyle": "none"}),
        ),
        xlabel="initial excitation number",
        ylabel="switch time",
        xscale="log",
        yscale="log",
        output="app_timescale.png",
    ),
}
