"""Hanabi engine, game-length verifier and policy-gradient training stack."""

from hanabi_rl._core import (
    Action,
    Card,
    CheatEnv,
    GameState,
    NUM_ACTIONS,
    OBSERVATION_SIZE,
    Status,
    apply_action,
    default_config_json,
    encode,
    evaluate_checkpoint,
    format_deck,
    ledger_init,
    legal_actions,
    new_game,
    new_game_with_deck,
    perfect_game_script,
    perfect_upper_bound,
    random_legal_game_turns,
    run_grad_check,
    run_training,
    sigma0,
    stall_policy_game,
)

__all__ = [
    "Action",
    "Card",
    "CheatEnv",
    "GameState",
    "NUM_ACTIONS",
    "OBSERVATION_SIZE",
    "Status",
    "apply_action",
    "default_config_json",
    "encode",
    "evaluate_checkpoint",
    "format_deck",
    "ledger_init",
    "legal_actions",
    "new_game",
    "new_game_with_deck",
    "perfect_game_script",
    "perfect_upper_bound",
    "random_legal_game_turns",
    "run_grad_check",
    "run_training",
    "sigma0",
    "stall_policy_game",
]
