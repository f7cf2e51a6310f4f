import numpy as np
import pytest
from sklearn.base import clone
from sklearn.pipeline import make_pipeline

from conftest import random_palette_image
from ragfilter import DenoiseParams, FilterParams, GraphFilter, TVDenoiser
from ragfilter import denoise, filter_image


def test_get_params_round_trips_through_clone():
    est = GraphFilter(d0=0.2, threshold_form="t1")
    params = est.get_params()
    assert params["d0"] == 0.2
    assert params["threshold_form"] == "t1"
    dup = clone(est)
    assert dup.get_params() == params


def test_set_params_chains():
    est = TVDenoiser().set_params(lam=3.0, max_iters=7)
    assert est.lam == 3.0
    assert est.max_iters == 7


def test_fit_validates_and_returns_self():
    est = GraphFilter(target_resolution=2.0)
    with pytest.raises(ValueError):
        est.fit()
    ok = GraphFilter()
    assert ok.fit() is ok


def test_filter_transform_matches_function_api():
    rng = np.random.default_rng(31)
    x = random_palette_image(rng, max_side=10, min_side=4)
    est = GraphFilter(d0=0.15).fit()
    out = est.transform(x)
    direct = filter_image(x, FilterParams(d0=0.15))
    assert np.array_equal(out, direct.image)
    assert est.node_count_ == direct.graph.node_count
    assert np.array_equal(est.labels_, direct.graph.labels)
    assert len(est.reports_) == len(direct.reports)


def test_denoiser_transform_matches_function_api():
    rng = np.random.default_rng(32)
    x = rng.uniform(0, 1, (8, 8, 3))
    est = TVDenoiser(max_iters=30).fit()
    out = est.transform(x)
    direct = denoise(x, DenoiseParams(max_iters=30))
    assert np.array_equal(out, direct.image)
    assert np.array_equal(est.loss_history_, direct.loss_history)
    assert est.increased_steps_ == direct.increased_steps


def test_pipeline_composes_denoise_then_filter():
    rng = np.random.default_rng(33)
    x = np.clip(0.5 + rng.normal(0, 0.05, (10, 10, 3)), 0, 1)
    pipe = make_pipeline(TVDenoiser(max_iters=20), GraphFilter(d0=0.3))
    out = pipe.fit_transform(x)
    assert out.shape == x.shape
    assert pipe.named_steps["graphfilter"].node_count_ >= 1


def test_transform_rejects_bad_input():
    with pytest.raises(ValueError):
        GraphFilter().fit().transform(np.zeros((4, 4)))
