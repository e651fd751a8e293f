import json

import numpy as np
import pytest

from scatlite import load_tensor, save_image
from scatlite.cli import main


@pytest.fixture()
def png64(tmp_path, rng):
    p = tmp_path / "in.png"
    save_image(rng.random((3, 64, 64)), p)
    return p


def _bank_args(n=64, J=3):
    return ["--N", str(n), "--J", str(J)]


def test_scatter_writes_tensor_and_sidecar(tmp_path, png64):
    out = tmp_path / "c.sct1"
    rc = main(["scatter", "--input", str(png64), "--out", str(out)]
              + _bank_args())
    assert rc == 0
    data = load_tensor(out)
    assert data.shape == (75, 8, 8) and data.dtype == np.float32
    meta = json.loads((tmp_path / "c.sct1.json").read_text())
    assert meta["coefficient_count"] == 3 * 25 * 64
    assert meta["compression_ratio"] == pytest.approx(25 / 64)
    assert meta["expansion"] is False
    assert meta["config"]["scale_J"] == 3
    assert len(meta["config_hash"]) == 16


def test_scatter_flags_expansion_below_J3(tmp_path, png64):
    out = tmp_path / "c.sct1"
    rc = main(["scatter", "--input", str(png64), "--out", str(out)]
              + _bank_args(J=2))
    assert rc == 0
    meta = json.loads((tmp_path / "c.sct1.json").read_text())
    assert meta["expansion"] is True
    assert meta["compression_ratio"] > 1.0


def test_scatter_missing_input_no_partial_output(tmp_path, capsys):
    out = tmp_path / "c.sct1"
    rc = main(["scatter", "--input", str(tmp_path / "nope.png"),
               "--out", str(out)] + _bank_args())
    assert rc == 3
    assert not out.exists()
    assert "error" in capsys.readouterr().err


def test_scatter_glob_batch(tmp_path, rng):
    for name in ("a", "b"):
        save_image(rng.random((16, 16)), tmp_path / f"{name}.png")
    outdir = tmp_path / "out"
    outdir.mkdir()
    rc = main(["scatter", "--input", str(tmp_path / "*.png"),
               "--out", str(outdir), "--N", "16", "--J", "2"])
    assert rc == 0
    assert sorted(p.name for p in outdir.iterdir()) == [
        "a.sct1", "a.sct1.json", "b.sct1", "b.sct1.json"]


def test_usage_error_exit_code_two():
    with pytest.raises(SystemExit) as e:
        main(["scatter"])  # missing required flags
    assert e.value.code == 2


def test_computation_error_exit_code_three(tmp_path, png64):
    rc = main(["scatter", "--input", str(png64),
               "--out", str(tmp_path / "c.sct1"), "--N", "100", "--J", "3"])
    assert rc == 3


def test_framecheck_prints_both_conventions(capsys):
    rc = main(["framecheck"] + _bank_args())
    assert rc == 0
    out = capsys.readouterr().out
    assert "conjugate-inclusive" in out and "single-sided" in out
    assert "epsilon0" in out


def test_reconstruct_uses_sidecar_and_reports_psnr(tmp_path, png64, capsys):
    coeffs = tmp_path / "c.sct1"
    main(["scatter", "--input", str(png64), "--out", str(coeffs)]
         + _bank_args())
    out = tmp_path / "r.png"
    rc = main(["reconstruct", "--coeffs", str(coeffs), "--out", str(out),
               "--iters", "3", "--seed", "5", "--reference", str(png64)])
    assert rc == 0
    assert out.exists()
    text = capsys.readouterr().out
    assert "err_J" in text and "PSNR" in text
    report = json.loads((tmp_path / "r.png.json").read_text())
    assert report["iterations_run"] == 3
    assert len(report["err_history"]) == 3
    assert "psnr_db" in report
    assert report["config"]["grid_size"] == 64


def test_blob_outputs_and_cosines(tmp_path, capsys):
    outdir = tmp_path / "blob"
    rc = main(["blob", "--sigma", "4", "0", "9", "--out-dir", str(outdir)]
              + _bank_args())
    assert rc == 0
    for f in ("blob.png", "numeric.sct1", "analytic.sct1", "numeric.png",
              "analytic.png", "blob.json"):
        assert (outdir / f).exists(), f
    meta = json.loads((outdir / "blob.json").read_text())
    assert meta["min_cosine"] >= 0.999
    assert "min cosine" in capsys.readouterr().out


def test_stability_rows_and_exit(capsys, tmp_path):
    rows_path = tmp_path / "rows.json"
    rc = main(["stability", "--trials", "4", "--seed", "1",
               "--out", str(rows_path)] + _bank_args())
    assert rc == 0
    out_lines = [l for l in capsys.readouterr().out.splitlines() if l.strip()]
    rows = [json.loads(l) for l in out_lines]
    assert len(rows) == 4
    assert all(r["holds"] for r in rows)
    assert all(r["lhs"] <= r["rhs"] for r in rows)
    saved = json.loads(rows_path.read_text())
    assert saved == rows


def test_stability_deterministic_under_seed(capsys):
    main(["stability", "--trials", "3", "--seed", "9"] + _bank_args())
    first = capsys.readouterr().out
    main(["stability", "--trials", "3", "--seed", "9"] + _bank_args())
    second = capsys.readouterr().out
    assert first == second


def test_threads_env_cap(monkeypatch):
    from scatlite.transform import _workers
    monkeypatch.setenv("SCATLITE_THREADS", "3")
    assert _workers() == 3
    monkeypatch.delenv("SCATLITE_THREADS")
    assert _workers() >= 1
