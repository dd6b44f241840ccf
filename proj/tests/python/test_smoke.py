import json
import pathlib

import numpy as np
import pytest

import tphom

ROOT = pathlib.Path(__file__).resolve().parents[2]
CONFIG = ROOT / "configs" / "cube_contrast.json"


def small_config():
    doc = json.loads(CONFIG.read_text())
    doc["macro"]["resolution"] = 4
    doc["time"] = {"dt": 0.05, "t_end": 0.1}
    doc["dns"]["epsilon"] = "1/2"
    return tphom.parse_config(json.dumps(doc))


def test_selftest_passes():
    code, report = tphom.selftest()
    assert code == 0
    assert "FAIL" not in report
    assert report.count("PASS") >= 5


def test_epsilon_parsing():
    assert tphom.parse_epsilon("1/8") == 0.125
    with pytest.raises(tphom.TphomError):
        tphom.parse_epsilon("0.3")


def test_bad_config_raises():
    with pytest.raises(tphom.TphomError):
        tphom.parse_config("{")
    with pytest.raises(ValueError):
        tphom.parse_config('{"nonsense": 1}')


def test_upscale_identities():
    cfg = tphom.load_config(str(CONFIG))
    c = tphom.upscale(cfg)
    A = c["A_hom"]
    assert A.shape == (6, 6)
    assert np.allclose(A, A.T, atol=1e-10)
    assert np.allclose(c["C1"] + c["C2"], np.eye(3), atol=1e-8)
    # inclusion strictly inside the cell: no macroscopic flow in phase 2
    assert np.abs(c["K2"]).max() < 1e-8


def test_macro_run_and_pipeline(tmp_path):
    cfg = small_config()
    coeffs = tphom._tphom.upscale(cfg)
    r = tphom.macro_run(cfg, coeffs)
    last = r["states"][-1]
    assert last["t"] == pytest.approx(0.1)
    assert last["p1"].shape == (r["nodes_per_axis"] ** 3,)
    assert np.isfinite(last["u"]).all() and np.abs(last["u"]).max() > 0

    assert tphom.run("upscale", cfg, str(tmp_path)) == 0
    path = tmp_path / "coefficients.json"
    assert path.exists()
    assert tphom.run("macro", cfg, str(tmp_path), str(path)) == 0
    assert any(p.suffix == ".vtk" for p in tmp_path.iterdir())
