import math

import numpy as np
import pytest

import lovo


def chain():
    return {"nodes": ["X", "Z", "Y"], "directed": [["X", "Z"], ["Z", "Y"]], "bidirected": []}


def test_projection_and_separation():
    g = lovo.latent_project(chain(), ["Z"])
    assert sorted(g["nodes"]) == ["X", "Y"]
    assert ["X", "Y"] in g["directed"]
    assert lovo.m_separated(chain(), "X", "Y", {"Z"})
    assert not lovo.m_separated(chain(), "X", "Y")


def test_decide_edge_absent_for_chain():
    gx = lovo.latent_project(chain(), ["Y"])
    gy = lovo.latent_project(chain(), ["X"])
    d = lovo.decide_edge(gx, gy, "X", "Y")
    assert d["verdict"] == "Absent"
    assert d["trace"]


def test_decide_edge_rejects_mismatched_sets():
    gx = {"nodes": ["X", "Z"], "directed": [], "bidirected": []}
    gy = {"nodes": ["Y", "W"], "directed": [], "bidirected": []}
    with pytest.raises(ValueError):
        lovo.decide_edge(gx, gy, "X", "Y")


def test_parent_adjustment_recovers_chain_correlation():
    rng = np.random.default_rng(0)
    n = 60000
    x = rng.uniform(-1, 1, n)
    z = 0.8 * x + rng.uniform(-1, 1, n)
    y = -0.7 * z + rng.uniform(-1, 1, n)
    data = np.column_stack([x, z, y])
    third = n // 3
    dx = data[:third, :2]
    dy = data[third : 2 * third, 1:]
    truth = np.corrcoef(data[2 * third :, 0], data[2 * third :, 2])[0, 1]
    rho = lovo.parent_adjustment(dx, ["X", "Z"], dy, ["Z", "Y"], "X", "Y", {"Z"})
    assert abs(rho - truth) < 0.03
    # With a single shared column MaxEnt and parent adjustment coincide.
    assert lovo.maxent(dx, ["X", "Z"], dy, ["Z", "Y"], "X", "Y") == pytest.approx(rho, abs=1e-12)


def test_singular_adjustment_abstains():
    z = np.linspace(0, 1, 30)
    dx = np.column_stack([z, np.ones(30)])
    dy = np.column_stack([z ** 2, np.ones(30)])
    r = lovo.parent_adjustment(dx, ["X", "Z"], dy, ["Y", "Z"], "X", "Y", {"Z"})
    assert isinstance(r, lovo.Abstained)
    assert r.reason == "SingularAdjustment"


def test_simulate_and_crossval_oracle():
    cols, data, joint = lovo.simulate(nodes=6, p=0.4, n=3000, seed=7)
    assert data.shape == (3000, 6)
    assert cols == joint["nodes"]
    rep = lovo.crossval(data, cols, joint, seed=7)
    assert rep["pairs_used"] > 0
    assert 0.0 <= rep["cv_lovo"] <= 2.0
    again = lovo.crossval(data, cols, joint, seed=7, jobs=3)
    assert again["cv_lovo"] == rep["cv_lovo"]


def test_lemma_study_point_shape():
    row = lovo.lemma_study_point(4, 6, 0.3, replications=10, seed=1)
    assert row["lemma"] == 4 and row["replications"] == 10
    assert 0.0 <= row["zero_fraction"] <= 1.0


def test_spearman():
    rho, p = lovo.spearman([1, 2, 3, 4, 5], [2, 4, 6, 8, 11])
    assert rho == pytest.approx(1.0)
    assert p < 0.01
    assert isinstance(lovo.spearman([1, 1, 1], [1, 2, 3]), lovo.Abstained)
