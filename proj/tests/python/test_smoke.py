"""End-to-end smoke tests for the python bindings."""

import json
import math

import pytest

import hanabi_rl as hb


def test_sigma0_table():
    assert hb.sigma0(2) == 89
    assert hb.sigma0(3) == 80
    assert hb.sigma0(4) == 79
    assert hb.sigma0(5) == 72
    ledger = hb.ledger_init(2)
    assert ledger == {"t": 0, "c": 8, "d": 40, "u": 39, "p_remaining": 2, "sigma": 89}


def test_perfect_upper_bounds():
    assert [hb.perfect_upper_bound(p) for p in (2, 3, 4, 5)] == [71, 63, 63, 57]


def test_stall_game_is_tight():
    for players in (2, 3, 4, 5):
        result = hb.stall_policy_game(players, seed=7)
        assert result["turns"] == result["sigma0"]
        assert result["score"] == 0


def test_perfect_game_script():
    script = hb.perfect_game_script()
    assert script["turns"] == 71
    assert script["score"] == 25
    assert len(script["deck"].split()) == 50
    assert len(script["actions"]) == 71


def test_engine_round_trip():
    state = hb.new_game(2, seed=3)
    assert state.deck_size == 40
    assert state.hint_tokens == 8
    assert state.life_tokens == 3
    actions = hb.legal_actions(state)
    assert len(actions) >= 5
    next_state, info = hb.apply_action(state, actions[0])
    assert next_state.turns_taken == 1
    assert isinstance(info["was_successful_play"], bool)

    deck = hb.format_deck(state.hands[0] + state.hands[1] + [])
    assert len(deck.split()) == 10


def test_explicit_deck_rejects_bad_multiset():
    with pytest.raises(Exception):
        hb.new_game_with_deck(2, "R1 " * 50)


def test_env_episode():
    env = hb.CheatEnv()
    obs = env.reset(seed=11)
    assert len(obs) == hb.OBSERVATION_SIZE == 136
    assert all(bit in (0.0, 1.0) for bit in obs)

    import random

    rng = random.Random(0)
    steps = 0
    done = False
    while not done:
        obs, reward, done, info = env.step(rng.randrange(hb.NUM_ACTIONS))
        steps += 1
        assert steps <= 89
    assert env.state.status != hb.Status.IN_PROGRESS
    assert info["turns"] == steps


def test_bounded_random_games():
    for players in (2, 5):
        for seed in range(20):
            assert hb.random_legal_game_turns(players, seed) <= hb.sigma0(players)


def test_training_runs_and_is_deterministic(tmp_path):
    config = json.loads(hb.default_config_json("vpg"))
    config["seed"] = 5
    config["epochs"] = 2
    config["batch_min_steps"] = 150

    csvs = []
    for name in ("a", "b"):
        config["out_dir"] = str(tmp_path / name)
        hb.run_training(json.dumps(config))
        csvs.append((tmp_path / name / "metrics.csv").read_text())
    assert csvs[0] == csvs[1]
    assert csvs[0].startswith("epoch,")

    report = hb.evaluate_checkpoint(
        str(tmp_path / "a" / "checkpoint_final.bin"), n_games=5, seed=1
    )
    assert report["n_games"] == 5
    assert 0.0 <= report["perfect_fraction"] <= 1.0


def test_grad_check_small():
    report = hb.run_grad_check(seed=5, batches=2)
    assert report["max"] < 1e-4
    assert math.isfinite(report["spg"])
