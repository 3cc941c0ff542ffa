"""Container, metric and serialization checks for the MDP core."""

import numpy as np
import pytest

import greybox_mdp as g


def tiny_mdp(rows=None, gamma=0.9):
    """Two states, two actions; rows override the default valid tensor."""
    p = np.zeros((2, 2, 2))
    p[:, :, 0] = 0.25
    p[:, :, 1] = 0.75
    if rows is not None:
        for (s, a), row in rows.items():
            p[s, a] = row
    r = np.array([[1.0, 0.0], [0.0, -1.0]])
    return g.from_dense(p, r, gamma)


def test_pair_index():
    assert g.pair_index(3, 2, 8) == 26
    assert g.pair_index(0, 0, 8) == 0


def test_horizon_scale():
    assert g.horizon_scale(0.9) == pytest.approx(10.0)
    assert g.horizon_scale(0.5) == pytest.approx(2.0)
    for bad in (0.0, 1.0, -0.2, 1.3):
        with pytest.raises(ValueError):
            g.horizon_scale(bad)


def test_validate_accepts_queue():
    report = g.validate_mdp(g.build_queue().mdp)
    assert report.ok
    assert report.violations == []


def test_validate_names_bad_row_sum():
    mdp = tiny_mdp({(1, 0): np.array([0.45, 0.45])})
    report = g.validate_mdp(mdp)
    assert not report.ok
    assert any("(s=1, a=0)" in v for v in report.violations)


def test_validate_names_negative_probability():
    mdp = tiny_mdp({(0, 1): np.array([-0.25, 1.25])})
    report = g.validate_mdp(mdp)
    assert not report.ok
    assert any("negative" in v and "(s=0, a=1)" in v for v in report.violations)


def test_validate_flags_gamma_and_reward_range():
    mdp = tiny_mdp()
    object.__setattr__(mdp, "gamma", 1.0)
    report = g.validate_mdp(mdp)
    assert any("gamma" in v for v in report.violations)

    mdp2 = tiny_mdp()
    object.__setattr__(mdp2, "r_max", -0.5)
    report2 = g.validate_mdp(mdp2)
    assert any("reward" in v for v in report2.violations)


def test_sup_norm_metric_properties():
    rng = np.random.default_rng(7)
    for _ in range(50):
        a, b, c = (rng.normal(size=(5, 3)) for _ in range(3))
        dab = g.sup_norm_diff(a, b)
        assert dab >= 0.0
        assert dab == pytest.approx(g.sup_norm_diff(b, a))
        assert g.sup_norm_diff(a, a) == 0.0
        assert g.sup_norm_diff(a, c) <= dab + g.sup_norm_diff(b, c) + 1e-15


def test_sup_norm_shape_mismatch():
    with pytest.raises(ValueError):
        g.sup_norm_diff(np.zeros((2, 2)), np.zeros((3, 2)))


def test_serialization_round_trip_queue():
    mdp = g.build_queue().mdp
    back = g.mdp_from_text(g.mdp_to_text(mdp))
    assert back.num_states == mdp.num_states
    assert back.num_actions == mdp.num_actions
    assert back.gamma == mdp.gamma
    assert back.r_min == mdp.r_min and back.r_max == mdp.r_max
    np.testing.assert_array_equal(back.rewards, mdp.rewards)
    assert (back.transitions != mdp.transitions).nnz == 0
    # a second trip is byte-stable
    assert g.mdp_to_text(back) == g.mdp_to_text(mdp)


def test_serialization_golden():
    p = np.zeros((2, 1, 2))
    p[0, 0] = [0.25, 0.75]
    p[1, 0] = [0.0, 1.0]
    mdp = g.from_dense(p, np.array([[0.5], [-1.0]]), 0.9)
    want = (
        "2 1 0.9 -1.0 0.5\n"
        "0.5 0 0.25 1 0.75\n"
        "-1.0 1 1.0\n"
    )
    assert g.mdp_to_text(mdp) == want
    back = g.mdp_from_text(want)
    assert back.transition_row(0, 0)[1] == 0.75


def test_serialization_rejects_malformed():
    with pytest.raises(ValueError):
        g.mdp_from_text("2 1 0.9\nrest\n")
    with pytest.raises(ValueError):
        g.mdp_from_text("2 1 0.9 -1.0 0.5\n0.5 0 0.25 1\n-1.0 1 1.0\n")


def test_value_bounds():
    mdp = g.build_queue().mdp
    lo, hi = mdp.value_bounds()
    assert lo == pytest.approx(-110.0)
    assert hi == 0.0
