import csv
import hashlib
import json

import numpy as np
import pytest
from PIL import Image

from waterfill.cli import main
from waterfill.imaging import RgbImage, load_image, save_image
from waterfill.synthetic import CornerShadow, SyntheticSpec, generate_synthetic


@pytest.fixture
def shaded(tmp_path):
    spec = SyntheticSpec(width=120, height=90, glyph_size=9, shading=CornerShadow("top_left", 0.7, 0.4))
    _, dist = generate_synthetic(spec)
    path = tmp_path / "in.jpg"
    Image.fromarray(dist.pixels).save(path, quality=95)
    return path


def digest(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


def test_correct_defaults(tmp_path, shaded, capsys):
    before = digest(shaded)
    out = tmp_path / "out.png"
    assert main(["correct", str(shaded), "-o", str(out)]) == 0
    assert load_image(out).pixels.shape == (90, 120, 3)
    assert digest(shaded) == before
    assert "ok" in capsys.readouterr().err


def test_unstable_eta_rejected_before_io(tmp_path, shaded, capsys):
    out = tmp_path / "out.png"
    assert main(["correct", str(shaded), "-o", str(out), "--eta", "0.3"]) == 2
    assert "(0, 0.25]" in capsys.readouterr().err
    assert not out.exists()


def test_incremental_with_background_dump_and_json(tmp_path, shaded):
    out, bg, js = tmp_path / "o.png", tmp_path / "g.png", tmp_path / "m.json"
    code = main(["correct", str(shaded), "-o", str(out), "--method", "incremental",
                 "--dump-background", str(bg), "--json", str(js)])
    assert code == 0 and out.exists()
    with Image.open(bg) as im:
        assert im.mode == "L" and im.size == (120, 90)
    m = json.loads(js.read_text())
    assert m["input"] == str(shaded) and m["output"] == str(out)
    assert isinstance(m["coarse_iterations"], int) and isinstance(m["fine_iterations"], int)
    assert set(m["elapsed_ms"]) == {"coarse", "fine", "total"}
    assert set(m["converged"]) == {"coarse", "fine"}
    assert all(isinstance(v, bool) for v in m["converged"].values())


def test_identical_invocations_identical_outputs(tmp_path, shaded):
    a, b = tmp_path / "a.png", tmp_path / "b.png"
    main(["correct", str(shaded), "-o", str(a)])
    main(["correct", str(shaded), "-o", str(b)])
    assert digest(a) == digest(b)


def test_snapshots(tmp_path, shaded):
    out = tmp_path / "o.png"
    assert main(["correct", str(shaded), "-o", str(out), "--snapshot-every", "5",
                 "--snapshot-dir", str(tmp_path / "snaps")]) == 0
    snaps = sorted((tmp_path / "snaps").glob("in_G_t*.png"))
    assert snaps and snaps[0].name == "in_G_t00000.png"
    assert (tmp_path / "snaps" / "in_snapshots.png").exists()


def test_batch(tmp_path, shaded):
    second = tmp_path / "second.png"
    save_image(load_image(shaded), second)
    outdir = tmp_path / "outs"
    code = main(["correct", str(shaded), str(second), "-o", str(outdir), "--workers", "2",
                 "--json", str(tmp_path / "m.json")])
    assert code == 0
    assert (outdir / "in.png").exists() and (outdir / "second.png").exists()
    assert len(json.loads((tmp_path / "m.json").read_text())) == 2


def test_batch_needs_directory(tmp_path, shaded):
    assert main(["correct", str(shaded), str(shaded), "-o", str(tmp_path / "x.png")]) == 2


def test_missing_input_is_image_error(tmp_path):
    assert main(["correct", str(tmp_path / "none.png"), "-o", str(tmp_path / "o.png")]) == 3


def test_divergence_exit_code(tmp_path, shaded):
    assert main(["correct", str(shaded), "-o", str(tmp_path / "o.png"), "--divergence-limit", "50"]) == 4


def test_bad_flag_exits_2(shaded):
    with pytest.raises(SystemExit) as exc:
        main(["correct", str(shaded), "-o", "x.png", "--method", "magic"])
    assert exc.value.code == 2


def test_background_command(tmp_path, shaded):
    out = tmp_path / "bg.png"
    assert main(["background", str(shaded), "-o", str(out)]) == 0
    with Image.open(out) as im:
        assert im.mode == "L"


def gray_png(path, values):
    Image.fromarray(np.asarray(values, dtype=np.uint8), "L").save(path)


def test_psnr_identical(tmp_path, capsys):
    gray_png(tmp_path / "a.png", np.full((3, 3), 10))
    assert main(["psnr", str(tmp_path / "a.png"), str(tmp_path / "a.png")]) == 0
    assert capsys.readouterr().out.strip() == "inf"


def test_psnr_known_pair(tmp_path, capsys):
    a = np.zeros((3, 3))
    b = a.copy()
    b[1, 1] = 15  # MSE over 27 samples: 3 * 15**2 / 27 = 25
    gray_png(tmp_path / "a.png", a)
    gray_png(tmp_path / "b.png", b)
    assert main(["psnr", str(tmp_path / "a.png"), str(tmp_path / "b.png")]) == 0
    assert float(capsys.readouterr().out) == pytest.approx(34.15, abs=0.01)


def test_psnr_mismatch(tmp_path):
    gray_png(tmp_path / "a.png", np.zeros((3, 3)))
    gray_png(tmp_path / "b.png", np.zeros((4, 3)))
    assert main(["psnr", str(tmp_path / "a.png"), str(tmp_path / "b.png")]) == 3


def test_bench_default_corpus_sweep(tmp_path):
    out = tmp_path / "rep"
    code = main(["bench", "--default-corpus", "--corpus-size", "2", "--ks-sweep", "2,5,8,11,14",
                 "--out-dir", str(out)])
    assert code == 0
    with open(out / "sweep.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert [int(r["ks"]) for r in rows] == [2, 5, 8, 11, 14]
    assert (out / "sweep.png").exists() and (out / "bench.jsonl").exists()


def test_bench_spec_file(tmp_path):
    specs = [SyntheticSpec(width=100, height=80, glyph_size=8, seed=i, spec_id=f"s{i}").to_dict()
             for i in range(3)]
    (tmp_path / "specs.json").write_text(json.dumps(specs))
    out = tmp_path / "rep"
    assert main(["bench", str(tmp_path / "specs.json"), "--out-dir", str(out), "--no-plots"]) == 0
    with open(out / "bench.csv") as fh:
        names = [r["spec_id"] for r in csv.DictReader(fh)]
    assert names == ["s0", "s1", "s2", "mean"]


def test_bench_empty_spec_list(tmp_path):
    (tmp_path / "specs.json").write_text("[]")
    assert main(["bench", str(tmp_path / "specs.json"), "--out-dir", str(tmp_path / "r")]) == 2


def test_bench_failing_row_exit_5(tmp_path):
    specs = [SyntheticSpec(width=100, height=80, spec_id="a").to_dict(),
             SyntheticSpec(width=100, height=80, spec_id="b").to_dict()]
    (tmp_path / "specs.json").write_text(json.dumps(specs))
    # ks=40 leaves a 3x2 coarse grid, so every row fails but the report is written.
    code = main(["bench", str(tmp_path / "specs.json"), "--ks", "40", "--out-dir", str(tmp_path / "r"),
                 "--no-plots"])
    assert code == 5
    assert len((tmp_path / "r" / "bench.jsonl").read_text().splitlines()) == 2


def test_synth_command(tmp_path):
    assert main(["synth", "--default-corpus", "--corpus-size", "2", "--out-dir", str(tmp_path)]) == 0
    assert (tmp_path / "synth-00_gt.png").exists() and (tmp_path / "synth-01_distorted.png").exists()
    specs = json.loads((tmp_path / "specs.json").read_text())
    assert len(specs) == 2 and specs[0]["shading"]["kind"] == "linear_ramp"


def test_bench_rejects_specs_with_default_corpus(tmp_path):
    specs = tmp_path / "specs.json"
    specs.write_text("[]")
    assert main(["bench", str(specs), "--default-corpus", "--out-dir", str(tmp_path / "r")]) == 2
    assert not (tmp_path / "r").exists()
