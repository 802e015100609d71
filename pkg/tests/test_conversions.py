import numpy as np
import pytest

from relwl import ContractViolation
from relwl.families import random_multirel
from relwl.gnn import (
    CompParams,
    RgcnParams,
    compgcn_forward,
    convert_mult_to_rgcn,
    init_features,
    random_params,
    relative_max_error,
    rgcn_forward,
    run_simulated_rgcn,
    simulate_rgcn_with_compgcn,
)
from relwl.rng import XorShift64Star

TOLERANCE = 1e-10


def random_instance(seed, n_max=20):
    rng = np.random.default_rng(seed)
    g = random_multirel(rng, n=int(rng.integers(4, n_max + 1)),
                        r=int(rng.integers(1, 4)), edge_prob=float(rng.uniform(0.2, 0.5)))
    h = init_features(g, "onehot-label", int(np.unique(g.labels).size))
    return g, h


def test_mult_to_rgcn_ones_copies_w1():
    xs = XorShift64Star(2)
    params = CompParams(w0=xs.matrix(3, 4), w1=xs.matrix(3, 4),
                        z=[np.ones(3), np.ones(3)], composition="mult")
    converted = convert_mult_to_rgcn(params)
    for w in converted.w_rel:
        assert np.array_equal(w, params.w1)


def test_mult_to_rgcn_zero_relation_features():
    g, h = random_instance(3)
    xs = XorShift64Star(5)
    params = CompParams(w0=xs.matrix(h.shape[1], 6), w1=xs.matrix(h.shape[1], 6),
                        z=[np.zeros(h.shape[1])] * g.r, composition="mult")
    out = compgcn_forward(g, params, h, "identity")
    assert out == pytest.approx(h @ params.w0, abs=1e-12)
    converted = convert_mult_to_rgcn(params)
    out2 = rgcn_forward(g, converted, h, "identity")
    assert relative_max_error(out2, out) <= TOLERANCE


def test_mult_to_rgcn_agrees_on_random_instances():
    for seed in range(20):
        g, h = random_instance(seed)
        xs = XorShift64Star(100 + seed)
        params = random_params("compgcn-mult", xs, h.shape[1], 8, g.r)
        for act in ("relu", "identity"):
            a = compgcn_forward(g, params, h, act)
            b = rgcn_forward(g, convert_mult_to_rgcn(params), h, act)
            assert relative_max_error(b, a) <= TOLERANCE


def test_mult_to_rgcn_rejects_other_compositions():
    xs = XorShift64Star(9)
    params = CompParams(w0=xs.matrix(2, 2), w1=xs.matrix(2, 2),
                        z=[xs.vector(2)], composition="add")
    with pytest.raises(ContractViolation):
        convert_mult_to_rgcn(params)


def test_simulation_structure_single_relation():
    xs = XorShift64Star(11)
    rp = RgcnParams(w0=xs.matrix(3, 4), w_rel=[xs.matrix(3, 4)])
    (first, act1), (second, _) = simulate_rgcn_with_compgcn(rp)
    assert act1 == "identity"
    assert np.array_equal(first.w0, np.eye(3))
    assert np.array_equal(second.w0, rp.w0)
    assert np.array_equal(second.w1, rp.w_rel[0])
    assert np.array_equal(second.z[0], np.ones(3))


def test_simulation_agrees_on_random_instances():
    for seed in range(20):
        g, h = random_instance(seed + 40)
        xs = XorShift64Star(200 + seed)
        rp = RgcnParams(w0=xs.matrix(h.shape[1], 4),
                        w_rel=[xs.matrix(h.shape[1], 4) for _ in range(g.r)])
        for act in ("relu", "identity"):
            direct = rgcn_forward(g, rp, h, act)
            simulated = run_simulated_rgcn(g, rp, h, act)
            assert relative_max_error(simulated, direct) <= TOLERANCE


def test_simulation_fixed_dims_case():
    # the d=3, e=4, r=3 configuration pinned by the operation's example
    rng = np.random.default_rng(77)
    g = random_multirel(rng, n=12, r=3, edge_prob=0.4, max_labels=3)
    h = init_features(g, "onehot-label", 3)
    xs = XorShift64Star(303)
    rp = RgcnParams(w0=xs.matrix(3, 4), w_rel=[xs.matrix(3, 4) for _ in range(3)])
    assert relative_max_error(run_simulated_rgcn(g, rp, h), rgcn_forward(g, rp, h)) <= TOLERANCE


def test_simulation_zero_weights():
    g, h = random_instance(7)
    rp = RgcnParams(w0=np.zeros((h.shape[1], 3)),
                    w_rel=[np.zeros((h.shape[1], 3)) for _ in range(g.r)])
    assert not run_simulated_rgcn(g, rp, h).any()
    assert not rgcn_forward(g, rp, h).any()


def test_simulation_rejects_mean_aggregation():
    xs = XorShift64Star(13)
    rp = RgcnParams(w0=xs.matrix(2, 2), w_rel=[xs.matrix(2, 2)], aggregate="mean")
    with pytest.raises(ContractViolation):
        simulate_rgcn_with_compgcn(rp)
