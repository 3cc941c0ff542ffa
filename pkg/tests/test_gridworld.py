"""Windy gridworld semantics, parameter tying, and informative sets."""

import numpy as np
import pytest

import greybox_mdp as g


class ScriptedRng:
    """Stands in for a Generator, returning a fixed script of uniforms."""

    def __init__(self, values):
        self._vals = list(values)

    def random(self, size=None):
        if size is None:
            return self._vals.pop(0)
        return np.array([self._vals.pop(0) for _ in range(size)])


UP, DOWN, LEFT, RIGHT = range(4)


def test_default_sizes():
    cfg = g.GridConfig()
    assert cfg.num_states == 70
    assert cfg.num_actions == 4
    model = g.build_gridworld(cfg)
    assert model.mdp.num_states == 70
    assert model.mdp.num_actions == 4


def test_cell_index_round_trip():
    cfg = g.GridConfig()
    for x in range(cfg.width):
        for y in range(cfg.height):
            assert cfg.index_cell(cfg.cell_index(x, y)) == (x, y)


def test_hand_enumerated_row():
    # state (3,2), action right: 4 slip branches x wind on/off, slip 0.4,
    # column-3 wind strength 1 with probability 0.5
    cfg = g.GridConfig()
    s = cfg.cell_index(3, 2)
    row = g.grid_transition_row(cfg, s, RIGHT)
    want = {
        cfg.cell_index(4, 2): 0.35, cfg.cell_index(4, 3): 0.35,
        cfg.cell_index(3, 3): 0.05, cfg.cell_index(3, 4): 0.05,
        cfg.cell_index(3, 1): 0.05, cfg.cell_index(3, 2): 0.05,
        cfg.cell_index(2, 2): 0.05, cfg.cell_index(2, 3): 0.05,
    }
    assert set(row) == set(want)
    for nxt, p in want.items():
        assert row[nxt] == pytest.approx(p, abs=1e-12)


def test_goal_is_absorbing():
    model = g.build_gridworld()
    cfg = model.config
    goal = cfg.cell_index(*cfg.goal)
    dense = model.mdp.transitions.toarray()
    for a in range(4):
        z = goal * 4 + a
        assert dense[z, goal] == 1.0
        assert dense[z].sum() == 1.0
        assert model.mdp.rewards[goal, a] == 0.0
    q = g.policy_iteration(model.mdp)[1]
    np.testing.assert_allclose(q[goal], 0.0, atol=1e-12)


def test_rewards_are_minus_one_off_goal():
    model = g.build_gridworld()
    goal = model.config.cell_index(*model.config.goal)
    mask = np.ones(70, dtype=bool)
    mask[goal] = False
    assert np.all(model.mdp.rewards[mask] == -1.0)


def test_border_clipping_windless_column():
    cfg = g.GridConfig(slip_prob=0.0)
    s = cfg.cell_index(0, 0)
    row = g.grid_transition_row(cfg, s, LEFT)
    assert row == {s: 1.0}


def test_sample_step_forced_latents_more_info():
    # no slip, wind fires: (3,2) --right--> (4,3); strength-1 shared
    # parameter is index 0 and the slip parameter index 2
    cfg = g.GridConfig(tying="more-info")
    model = g.build_gridworld(cfg)
    s = cfg.cell_index(3, 2)
    rec = model.sample_step(s, RIGHT, ScriptedRng([0.99, 0.0]))
    assert rec.next_state == cfg.cell_index(4, 3)
    assert set(rec.latent) == {(2, 0), (0, 1)}


def test_sample_step_forced_latents_least_info():
    cfg = g.GridConfig(tying="least-info")
    model = g.build_gridworld(cfg)
    s = cfg.cell_index(3, 2)
    rec = model.sample_step(s, RIGHT, ScriptedRng([0.99, 0.0]))
    assert rec.next_state == cfg.cell_index(4, 3)
    assert set(rec.latent) == {(10, 0), (3, 1)}


def test_sample_step_windless_column_has_no_wind_annotation():
    cfg = g.GridConfig(tying="least-info")
    model = g.build_gridworld(cfg)
    s = cfg.cell_index(0, 0)
    rec = model.sample_step(s, LEFT, ScriptedRng([0.99]))
    assert rec.next_state == s
    assert rec.latent == ((10, 0),)


def test_sample_step_slip_direction_overrides_action():
    # slip (0.0 < 0.4), direction draw 0.6 -> index 2 (left), no wind
    cfg = g.GridConfig()
    model = g.build_gridworld(cfg)
    s = cfg.cell_index(5, 3)
    rec = model.sample_step(s, UP, ScriptedRng([0.0, 0.6, 0.99]))
    assert rec.next_state == cfg.cell_index(4, 3)
    assert (2, 1) in rec.latent


def test_sample_from_goal_raises():
    model = g.build_gridworld()
    goal = model.config.cell_index(*model.config.goal)
    with pytest.raises(ValueError):
        model.sample_step(goal, UP, np.random.default_rng(0))


def test_sampler_matches_analytic_row():
    cfg = g.GridConfig()
    model = g.build_gridworld(cfg)
    s = cfg.cell_index(6, 4)   # strength-2 column
    row = g.grid_transition_row(cfg, s, UP)
    rng = np.random.default_rng(23)
    n = 200_000
    hits = np.zeros(70)
    for _ in range(n):
        hits[model.sample_step(s, UP, rng).next_state] += 1
    for nxt in range(70):
        p = row.get(nxt, 0.0)
        se = np.sqrt(p * (1 - p) / n)
        assert abs(hits[nxt] / n - p) <= 4 * se + 1e-12, nxt


def test_batch_sampler_matches_analytic_row():
    cfg = g.GridConfig()
    model = g.build_gridworld(cfg)
    s = cfg.cell_index(6, 4)
    z = s * 4 + UP
    row = g.grid_transition_row(cfg, s, UP)
    rng = np.random.default_rng(29)
    n = 1_000_000
    nxt, _ = model.spec.sample_pairs_batch(np.full(n, z, dtype=np.int64), rng)
    counts = np.bincount(nxt, minlength=70)
    for j in range(70):
        p = row.get(j, 0.0)
        se = np.sqrt(p * (1 - p) / n)
        assert abs(counts[j] / n - p) <= 4 * se + 1e-12, j


def test_reconstruction_matches_direct_rows():
    for tying in ("more-info", "least-info"):
        cfg = g.GridConfig(tying=tying)
        model = g.build_gridworld(cfg)
        names, _, _, true_params, _ = g.param_layout(cfg)
        dense = model.spec.reconstruct(true_params).transitions.toarray()
        for s in range(70):
            for a in range(4):
                want = g.grid_transition_row(cfg, s, a)
                for nxt in range(70):
                    assert dense[s * 4 + a, nxt] == pytest.approx(
                        want.get(nxt, 0.0), abs=1e-12), (tying, s, a)


def test_strict_set_column3_no_slip_exact():
    # with slip off, the wind bit of column 3 is readable exactly when the
    # post-move cell is below the top two rows' clip shadow
    cfg = g.GridConfig(slip_prob=0.0, tying="least-info")
    model = g.build_gridworld(cfg)
    info = g.informative_sets(model.spec, "strict")
    want = set()
    for y in range(5):
        for a in range(4):
            want.add((cfg.cell_index(3, y), a))
    for a in (DOWN, LEFT, RIGHT):
        want.add((cfg.cell_index(3, 5), a))
    want.add((cfg.cell_index(3, 6), DOWN))
    got = {(z // 4, z % 4) for z in info.members[3]}
    assert got == want
    assert len(got) == 24


def test_zero_strength_columns_are_uninformative():
    cfg = g.GridConfig(tying="least-info")
    model = g.build_gridworld(cfg)
    for mode in ("strict", "oracle"):
        info = g.informative_sets(model.spec, mode)
        for col in (0, 1, 2, 9):
            assert len(info.members[col]) == 0, (mode, col)


def test_oracle_sets_default_config():
    cfg = g.GridConfig(tying="least-info")
    model = g.build_gridworld(cfg)
    info = g.informative_sets(model.spec, "oracle")
    sizes = [len(info.members[c]) for c in range(10)]
    assert sizes == [0, 0, 0, 28, 28, 28, 28, 24, 28, 0]
    # slip is informed at every non-goal pair in oracle mode
    assert len(info.members[10]) == 69 * 4


def test_wind_set_cardinality_lower_bound():
    floor = (7 - 2) * 4
    strict_cfg = g.GridConfig(slip_prob=0.0, tying="least-info")
    info = g.informative_sets(g.build_gridworld(strict_cfg).spec, "strict")
    for col in (3, 4, 5, 6, 7, 8):
        assert len(info.members[col]) >= floor, ("strict", col)
    oracle_cfg = g.GridConfig(tying="least-info")
    info = g.informative_sets(g.build_gridworld(oracle_cfg).spec, "oracle")
    for col in (3, 4, 5, 6, 7, 8):
        assert len(info.members[col]) >= floor, ("oracle", col)


def test_strict_decode_matches_latents():
    cfg = g.GridConfig(tying="more-info")
    model = g.build_gridworld(cfg)
    info = g.informative_sets(model.spec, "strict")
    in_strict = [set(info.members[i].tolist()) for i in range(3)]
    rng = np.random.default_rng(31)
    checked = 0
    for _ in range(20_000):
        s = int(rng.integers(70))
        if s == cfg.cell_index(*cfg.goal):
            continue
        a = int(rng.integers(4))
        rec = model.sample_step(s, a, rng)
        z = s * 4 + a
        decoded = dict(info.decode_pair(z, rec.next_state))
        truth = dict(rec.latent)
        for par, bit in decoded.items():
            assert z in in_strict[par]
            assert truth[par] == bit
            checked += 1
    assert checked > 1000


def test_more_info_layout():
    names, column_param, alpha_idx, true_params, active = g.param_layout(
        g.GridConfig(tying="more-info"))
    assert names == ["wind_strength_1", "wind_strength_2", "slip"]
    assert alpha_idx == 2
    assert [column_param[c] for c in (3, 4, 5, 8)] == [0, 0, 0, 0]
    assert [column_param[c] for c in (6, 7)] == [1, 1]
    assert all(column_param[c] is None for c in (0, 1, 2, 9))
    np.testing.assert_allclose(true_params, [0.5, 0.5, 0.4])
    assert active.all()


def test_least_info_layout_marks_inert_columns():
    names, column_param, alpha_idx, true_params, active = g.param_layout(
        g.GridConfig(tying="least-info"))
    assert len(names) == 11
    assert alpha_idx == 10
    assert list(active) == [False, False, False, True, True, True,
                            True, True, True, False, True]


def test_more_info_requires_equal_probs_within_tier():
    probs = [0.5] * 10
    probs[3] = 0.7
    with pytest.raises(ValueError):
        g.param_layout(g.GridConfig(wind_probs=tuple(probs),
                                    tying="more-info"))


def test_entrywise_build():
    cfg = g.GridConfig(tying="entrywise")
    model = g.build_gridworld(cfg)
    assert model.spec.is_entrywise
    goal = cfg.cell_index(*cfg.goal)
    assert goal in model.spec.terminal_states
    dense = model.spec.reconstruct(model.spec.true_params).transitions.toarray()
    np.testing.assert_allclose(dense, model.mdp.transitions.toarray(),
                               atol=1e-12)
    rec = model.sample_step(cfg.cell_index(3, 2), RIGHT,
                            np.random.default_rng(2))
    assert rec.latent == ()
