import json

import numpy as np
import pytest

from fluoro.analytic import (
    FluorescentMaterial,
    ModelGaussian,
    discretize_fbar,
    reduce_fluorescence,
)
from fluoro.cli import main
from fluoro.colorimetry import albedo_to_reduced_R, lift_albedo_U
from fluoro.data import xyzu_basis
from fluoro.images import read_pfm, read_ppm
from fluoro.reradiation import (
    DecomposedRerad,
    compose_reduced,
    recompose,
    save_bispec,
)
from fluoro.spectral import Spectrum, make_grid

GRID = make_grid(300.0, 800.0, 5.0)
TRUE_LOBE = ModelGaussian(0.8, 400.0, 30.0, 600.0, 30.0)


@pytest.fixture(scope="module")
def bispec_file(tmp_path_factory):
    mat = FluorescentMaterial(np.zeros(3), (TRUE_LOBE,))
    fbar = discretize_fbar(mat, GRID)
    rho = Spectrum(GRID, np.full(GRID.count, 0.3))
    P = recompose(DecomposedRerad(rho, fbar, False))
    path = tmp_path_factory.mktemp("data") / "sample.bispec"
    save_bispec(P, path)
    return path


@pytest.fixture(scope="module")
def material_file(tmp_path_factory):
    mat = FluorescentMaterial(np.array([0.2, 0.3, 0.1]), (TRUE_LOBE,))
    path = tmp_path_factory.mktemp("mat") / "mat.json"
    path.write_text(mat.to_json(), encoding="utf-8")
    return path


class TestFit:
    def test_recovers_lobe(self, bispec_file, tmp_path):
        out = tmp_path / "fit.json"
        assert main(["fit", "--input", str(bispec_file), "--out", str(out)]) == 0
        got = FluorescentMaterial.from_json(out.read_text(encoding="utf-8"))
        lobe = got.gaussians[0]
        assert lobe.mu_a == pytest.approx(TRUE_LOBE.mu_a, abs=0.5)
        assert lobe.mu_e == pytest.approx(TRUE_LOBE.mu_e, abs=0.5)

    def test_missing_input_is_data_error(self, tmp_path):
        rc = main(["fit", "--input", str(tmp_path / "no.bispec"),
                   "--out", str(tmp_path / "o.json")])
        assert rc == 2

    def test_bad_albedo_is_usage_error(self, bispec_file, tmp_path):
        rc = main(["fit", "--input", str(bispec_file), "--albedo", "1,2",
                   "--out", str(tmp_path / "o.json")])
        assert rc == 1


class TestReduce:
    def test_material_matches_library(self, material_file, tmp_path):
        out = tmp_path / "red.json"
        assert main(["reduce", "--material", str(material_file),
                     "--out", str(out)]) == 0
        doc = json.loads(out.read_text(encoding="utf-8"))
        assert len(doc["labels"]) == 4
        mat = FluorescentMaterial.from_json(material_file.read_text(encoding="utf-8"))
        basis = xyzu_basis()
        want = compose_reduced(
            albedo_to_reduced_R(lift_albedo_U(mat.albedo[:3]), basis),
            reduce_fluorescence(mat, basis),
        )
        assert np.allclose(np.array(doc["entries"]), want.entries, atol=1e-12)

    def test_bispec_xyz_basis(self, bispec_file, tmp_path):
        out = tmp_path / "red3.json"
        rc = main(["reduce", "--input", str(bispec_file), "--basis", "xyz",
                   "--out", str(out)])
        # the sample matrix lives on a 5 nm grid; the built-in basis is 1 nm
        assert rc == 2

    def test_both_sources_rejected(self, bispec_file, material_file, tmp_path):
        rc = main(["reduce", "--input", str(bispec_file),
                   "--material", str(material_file),
                   "--out", str(tmp_path / "x.json")])
        assert rc == 1


class TestEval:
    def test_report_written(self, bispec_file, material_file, tmp_path):
        dataset = tmp_path / "ds"
        dataset.mkdir()
        (dataset / "m0.bispec").write_bytes(bispec_file.read_bytes())
        (dataset / "m0.json").write_text(
            material_file.read_text(encoding="utf-8"), encoding="utf-8"
        )
        report = tmp_path / "report.json"
        rc = main(["eval", "--dataset", str(dataset), "--paths", "analytic",
                   "--illuminants", "D65,A", "--report", str(report)])
        assert rc == 0
        doc = json.loads(report.read_text(encoding="utf-8"))
        stats = doc["paths"]["reduced-analytic"]
        assert set(stats) == {"D65", "A"}
        for per_illum in stats.values():
            assert set(per_illum) >= {"min", "q1", "mean", "q3", "max"}
            assert per_illum["min"] <= per_illum["mean"] <= per_illum["max"]

    def test_unknown_path_is_usage_error(self, bispec_file, tmp_path):
        dataset = tmp_path / "ds"
        dataset.mkdir()
        (dataset / "m0.bispec").write_bytes(bispec_file.read_bytes())
        rc = main(["eval", "--dataset", str(dataset), "--paths", "nope",
                   "--report", str(tmp_path / "r.json")])
        assert rc == 1

    def test_empty_dataset_is_data_error(self, tmp_path):
        empty = tmp_path / "empty"
        empty.mkdir()
        rc = main(["eval", "--dataset", str(empty),
                   "--report", str(tmp_path / "r.json")])
        assert rc == 2


class TestPalette:
    def test_byte_deterministic(self, tmp_path):
        outs = []
        for name in ("a", "b"):
            img = tmp_path / f"{name}.ppm"
            side = tmp_path / f"{name}.json"
            rc = main(["palette", "--res", "16", "--out", str(img),
                       "--params", str(side)])
            assert rc == 0
            outs.append((img.read_bytes(), side.read_bytes()))
        assert outs[0] == outs[1]
        assert outs[0][0].startswith(b"P6\n16 16\n255\n")

    def test_sidecar_grid(self, tmp_path):
        img, side = tmp_path / "p.ppm", tmp_path / "p.json"
        assert main(["palette", "--res", "8", "--out", str(img),
                     "--params", str(side)]) == 0
        doc = json.loads(side.read_text(encoding="utf-8"))
        assert len(doc["mu_e_nm"]) == 8 and len(doc["sigma_e_nm"]) == 8
        assert np.array(doc["resolved_alpha"]).shape == (8, 8)
        assert doc["context"]["illuminant"] == "D65"

    def test_config_defaults_and_override(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"res": 4, "illuminant": "A"}), encoding="utf-8")
        img, side = tmp_path / "c.ppm", tmp_path / "c.json"
        assert main(["palette", "--config", str(cfg), "--res", "8",
                     "--out", str(img), "--params", str(side)]) == 0
        # explicit --res wins over the config, illuminant comes from it
        assert read_ppm(img).shape == (8, 8, 3)
        assert json.loads(side.read_text())["context"]["illuminant"] == "A"

    def test_bad_config_is_data_error(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text("{not json", encoding="utf-8")
        rc = main(["palette", "--config", str(cfg),
                   "--out", str(tmp_path / "x.ppm")])
        assert rc == 2


class TestRender:
    def test_outputs(self, material_file, tmp_path):
        ppm, pfm = tmp_path / "r.ppm", tmp_path / "r.pfm"
        rc = main(["render", "--material", str(material_file), "--size", "32",
                   "--out", str(ppm), "--float-out", str(pfm)])
        assert rc == 0
        display = read_ppm(ppm)
        floats = read_pfm(pfm)
        assert display.shape == (32, 32, 3)
        assert floats.shape == (32, 32, 3)
        assert floats.dtype == np.float32

    def test_unknown_illuminant_is_data_error(self, material_file, tmp_path):
        rc = main(["render", "--material", str(material_file),
                   "--illuminant", "Z99", "--out", str(tmp_path / "x.ppm")])
        assert rc == 2


class TestInterp:
    def test_midpoint(self, material_file, tmp_path):
        other = FluorescentMaterial(
            np.array([0.4, 0.1, 0.3]), (ModelGaussian(0.2, 420.0, 40.0, 640.0, 50.0),)
        )
        b = tmp_path / "b.json"
        b.write_text(other.to_json(), encoding="utf-8")
        out = tmp_path / "mid.json"
        assert main(["interp", "--a", str(material_file), "--b", str(b),
                     "--t", "0.5", "--out", str(out)]) == 0
        mid = FluorescentMaterial.from_json(out.read_text(encoding="utf-8"))
        assert mid.gaussians[0].alpha_bar == pytest.approx(0.5)
        assert mid.gaussians[0].mu_e == pytest.approx(620.0)
        # albedo is deliberately kept from the first endpoint
        assert np.allclose(mid.albedo[:3], [0.2, 0.3, 0.1])

    def test_t_out_of_range(self, material_file, tmp_path):
        rc = main(["interp", "--a", str(material_file), "--b", str(material_file),
                   "--t", "1.5", "--out", str(tmp_path / "x.json")])
        assert rc == 1


class TestPlumbing:
    def test_version_and_help_exit_zero(self, capsys):
        assert main(["--version"]) == 0
        assert main(["--help"]) == 0
        capsys.readouterr()

    def test_no_command_is_usage_error(self):
        assert main([]) == 1

    def test_unknown_flag_is_usage_error(self, tmp_path):
        assert main(["palette", "--out", str(tmp_path / "x.ppm"),
                     "--bogus"]) == 1
