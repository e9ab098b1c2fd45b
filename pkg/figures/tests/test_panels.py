import json
from pathlib import Path

import numpy as np
import pytest

from magnomit_figures import (EXPECTED_HEADER, Curve, EmptySpec, FigureSpec,
                              SchemaMismatch, read_sweep_csv, render_panel)
from magnomit_figures.cli import main as figures_main

SPECTRUM_GC_MHZ = (0.0, 4.0, 6.0, 8.0)
DELAY_GC_MHZ = (4.0, 4.30, 4.90, 4.93)


def four_curve_spec(sweep_csvs, omega_b_rad_s, panel, out, gcs):
    return FigureSpec(
        panel=panel,
        curves=[Curve(csv=str(sweep_csvs[gc]), label=f"G_c/2pi = {gc} MHz")
                for gc in gcs],
        out=str(out),
        omega_b_rad_s=omega_b_rad_s,
    )


class TestRendering:
    @pytest.mark.parametrize("panel,gcs", [
        ("absorption", SPECTRUM_GC_MHZ),
        ("dispersion", SPECTRUM_GC_MHZ),
        ("transmission", SPECTRUM_GC_MHZ),
        ("delay", DELAY_GC_MHZ),
    ])
    def test_four_curve_panels_render(self, sweep_csvs, omega_b_rad_s,
                                      tmp_path, panel, gcs):
        out = tmp_path / f"{panel}.png"
        spec = four_curve_spec(sweep_csvs, omega_b_rad_s, panel, out, gcs)
        assert render_panel(spec) == str(out)
        assert out.exists() and out.stat().st_size > 1000

    def test_svg_output(self, sweep_csvs, omega_b_rad_s, tmp_path):
        out = tmp_path / "absorption.svg"
        spec = four_curve_spec(sweep_csvs, omega_b_rad_s, "absorption", out,
                               SPECTRUM_GC_MHZ)
        render_panel(spec)
        assert out.read_text().startswith("<?xml")

    def test_raw_axis_scaling(self, sweep_csvs, tmp_path):
        out = tmp_path / "raw.png"
        spec = FigureSpec(panel="delay",
                          curves=[Curve(str(sweep_csvs[4.0]), "G_c = 4 MHz")],
                          out=str(out), x_scale="rad_s")
        render_panel(spec)
        assert out.exists()

    def test_rendering_is_reproducible(self, sweep_csvs, omega_b_rad_s,
                                       tmp_path):
        a, b = tmp_path / "a.png", tmp_path / "b.png"
        for out in (a, b):
            render_panel(four_curve_spec(sweep_csvs, omega_b_rad_s,
                                         "transmission", out, SPECTRUM_GC_MHZ))
        assert a.read_bytes() == b.read_bytes()

    def test_inputs_are_read_only(self, sweep_csvs, omega_b_rad_s, tmp_path):
        csv_path = Path(sweep_csvs[4.0])
        before = csv_path.read_bytes()
        render_panel(four_curve_spec(sweep_csvs, omega_b_rad_s, "absorption",
                                     tmp_path / "x.png", (4.0,)))
        assert csv_path.read_bytes() == before


class TestErrors:
    def test_empty_curve_list_writes_nothing(self, tmp_path):
        out = tmp_path / "never.png"
        spec = FigureSpec(panel="absorption", curves=[], out=str(out),
                          x_scale="rad_s")
        with pytest.raises(EmptySpec):
            render_panel(spec)
        assert not out.exists()

    def test_schema_mismatch_names_column(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("delta_rad_s,eps_R\n1.0,2.0\n")
        spec = FigureSpec(panel="delay", curves=[Curve(str(bad), "x")],
                          out=str(tmp_path / "y.png"), x_scale="rad_s")
        with pytest.raises(SchemaMismatch) as err:
            render_panel(spec)
        assert err.value.column == "eps_I"
        assert not (tmp_path / "y.png").exists()

    def test_unknown_panel_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            FigureSpec(panel="hologram", curves=[], out="x.png",
                       x_scale="rad_s")

    def test_omega_b_required_for_scaled_axis(self):
        with pytest.raises(ValueError):
            FigureSpec(panel="delay", curves=[], out="x.png",
                       x_scale="omega_b")


class TestReader:
    def test_round_trip_columns(self, sweep_csvs):
        data = read_sweep_csv(str(sweep_csvs[4.0]))
        assert set(data) == set(EXPECTED_HEADER)
        assert data["delta_rad_s"].size == 2001
        assert np.all(np.diff(data["delta_rad_s"]) > 0)


class TestStructuralFeatures:
    """The rendered curves carry the documented response structure."""

    def test_absorption_dips_appear_with_coupling(self, sweep_csvs):
        d0 = read_sweep_csv(str(sweep_csvs[0.0]))
        d4 = read_sweep_csv(str(sweep_csvs[4.0]))

        def count_minima(y):
            return sum(1 for i in range(1, y.size - 1)
                       if y[i] < y[i - 1] and y[i] <= y[i + 1])

        assert count_minima(d0["eps_R"]) == 0
        assert count_minima(d4["eps_R"]) == 2

    def test_delay_curve_has_both_signs_then_turns_positive(self, sweep_csvs):
        tau4 = read_sweep_csv(str(sweep_csvs[4.0]))["tau_s"]
        assert tau4.min() < 0.0 < tau4.max()
        d = read_sweep_csv(str(sweep_csvs[4.93]))
        i228 = int(np.argmin(np.abs(d["delta_rad_s"] - 2.28e8)))
        i269 = int(np.argmin(np.abs(d["delta_rad_s"] - 2.69e8)))
        assert d["tau_s"][i228] > 0.0 and d["tau_s"][i269] > 0.0

    def test_transmission_restored_inside_window(self, sweep_csvs,
                                                 omega_b_rad_s):
        d0 = read_sweep_csv(str(sweep_csvs[0.0]))
        d4 = read_sweep_csv(str(sweep_csvs[4.0]))
        # inside at least one absorption dip near the mechanical sideband
        # the transmission must beat the uncoupled value at that detuning
        y = d4["eps_R"]
        band = np.abs(d4["delta_rad_s"] - omega_b_rad_s) < 0.2 * omega_b_rad_s
        dips = [i for i in range(1, y.size - 1)
                if band[i] and y[i] < y[i - 1] and y[i] <= y[i + 1]]
        assert dips
        ratios = [d4["T_sq"][i] / d0["T_sq"][i] for i in dips]
        assert max(ratios) >= 2.0


class TestCli:
    def test_render_from_spec_file(self, sweep_csvs, omega_b_rad_s, tmp_path,
                                   capsys):
        out = tmp_path / "panel.png"
        spec = {
            "panel": "dispersion",
            "curves": [{"csv": str(sweep_csvs[gc]),
                        "label": f"G_c/2pi = {gc} MHz"}
                       for gc in SPECTRUM_GC_MHZ],
            "x_scale": "omega_b",
            "omega_b_rad_s": omega_b_rad_s,
            "out": str(out),
        }
        spec_path = tmp_path / "spec.json"
        spec_path.write_text(json.dumps(spec))
        assert figures_main([str(spec_path)]) == 0
        assert out.exists()
        assert "rendered dispersion panel" in capsys.readouterr().out

    def test_bad_spec_exits_nonzero(self, tmp_path, capsys):
        spec_path = tmp_path / "spec.json"
        spec_path.write_text(json.dumps({
            "panel": "absorption", "curves": [], "out": "x.png",
            "x_scale": "rad_s",
        }))
        assert figures_main([str(spec_path)]) == 2
        assert "EmptySpec" in capsys.readouterr().err
