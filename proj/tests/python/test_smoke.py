import json
import math
import os
import shutil
import subprocess

import numpy as np
import pytest

import tvbayes as tv


def test_bessel_half_order():
    x = 1.3
    assert tv.bessel_k(0.5, x) == pytest.approx(math.sqrt(math.pi / (2 * x)) * math.exp(-x), rel=1e-13)


def test_gig_exponential_limit():
    g = tv.GigParams(2.0, 0.0, 1.0)
    assert tv.gig_moment(g, 1.0) == pytest.approx(1.0, rel=1e-14)
    assert tv.gig_mode(g) == 0.0
    assert tv.classify(g)[0] == "Exp"
    draws = tv.gig_sample(g, 20000, seed=3)
    assert abs(draws.mean() - 1.0) < 4.0 / math.sqrt(20000)


def test_divergent_moment_raises():
    with pytest.raises(ArithmeticError):
        tv.gig_moment(tv.GigParams(0.0, 2.0, -1.0), 2.0)
    with pytest.raises(ValueError):
        tv.GigParams(-1.0, 1.0, 1.0)


def test_image_helpers_round_trip():
    img = tv.make_image_2d("blocks42")
    assert img.shape == (42 * 42,)
    arr = tv.to_image(img, 42, 42)
    assert np.array_equal(tv.from_image(arr), img)


def test_deblur_signal():
    truth = tv.make_signal_1d("blocky", 100)
    blurred = tv.blur(truth, 1, 100, kernel_size=7)
    y, sigma = tv.add_noise_bsnr(blurred, 30.0, seed=2024)
    assert sigma > 0
    out = tv.deblur(y, 1, 100)
    assert out["converged"]
    assert out["iterations"] <= 200
    err = tv.metrics(out["x"], truth)["rel_l2"]
    assert err <= 0.5 * tv.metrics(y, truth)["rel_l2"]


def test_vb_and_gibbs_small():
    truth = tv.make_signal_1d("blocky", 32)
    y, _ = tv.add_noise_bsnr(tv.blur(truth, 1, 32, kernel_size=5), 30.0, seed=5)
    vb = tv.deblur(y, 1, 32, method="vb", kernel_size=5)
    gb = tv.deblur(y, 1, 32, method="gibbs", kernel_size=5, samples=2000, seed=5)
    assert np.all(vb["sd"] > 0)
    assert len(gb["nu_trace"]) == 2000
    assert np.linalg.norm(vb["x"] - gb["x"]) / np.linalg.norm(gb["x"]) < 0.1


def test_capacity_error():
    y = tv.make_image_2d("blocks42", 65)
    with pytest.raises(MemoryError):
        tv.deblur(y, 65, 65, method="vb")


@pytest.mark.skipif(shutil.which("tvbayes") is None, reason="CLI not on PATH")
def test_cli_round_trip(tmp_path):
    prefix = str(tmp_path / "sig")
    subprocess.run(["tvbayes", "simulate", "--kind", "blocky", "--out-prefix", prefix], check=True)
    subprocess.run(["tvbayes", "deblur", "--input", prefix + "_noisy.csv", "--out-prefix", prefix], check=True)
    report = json.loads(open(prefix + "_report.json").read())
    assert report["schema_version"] == 1
    assert len(report["estimates"]["x"]) == 100
    bad = subprocess.run(["tvbayes", "deblur", "--input", os.path.join(str(tmp_path), "none.csv")])
    assert bad.returncode == 2
