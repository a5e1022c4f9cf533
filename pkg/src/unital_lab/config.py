"""Build scenario configs and channel specs from parsed JSON."""
from __future__ import annotations

from typing import Any, Mapping

import numpy as np

from .channels import EnergyBlock
from .linalg import IDENTITY_2, SIGMA_X, SIGMA_Y, SIGMA_Z, block_diagonal
from .scenarios.nspin import NSpinConfig
from .scenarios.three_lead import SpinState, ThreeLeadConfig
from .scenarios.tls_walk import TlsWalkConfig
from .serialization import ConfigError, complex_from_json, matrix_from_json

SCENARIOS = ("three-lead", "one-d", "nspin", "tls-walk", "diagonal")

NAMED_OPERATORS = {
    "I": IDENTITY_2,
    "X": SIGMA_X,
    "Y": SIGMA_Y,
    "Z": SIGMA_Z,
    "iX": 1j * SIGMA_X,
    "iY": 1j * SIGMA_Y,
    "iZ": 1j * SIGMA_Z,
}


def operator_from_json(obj, field: str, shape=None) -> np.ndarray:
    if isinstance(obj, str):
        if obj not in NAMED_OPERATORS:
            raise ConfigError(field, f"unknown operator name {obj!r}; known: {sorted(NAMED_OPERATORS)}")
        return NAMED_OPERATORS[obj].copy()
    return matrix_from_json(obj, field, shape)


def _get(cfg: Mapping, key: str, kind, default: Any = ...):
    if key not in cfg:
        if default is ...:
            raise ConfigError(key, "required field is missing")
        return default
    value = cfg[key]
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(key, f"expected an integer, got {value!r}")
    elif kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(key, f"expected a number, got {value!r}")
        value = float(value)
    elif kind is str and not isinstance(value, str):
        raise ConfigError(key, f"expected a string, got {value!r}")
    elif kind is list and not isinstance(value, list):
        raise ConfigError(key, f"expected a list, got {value!r}")
    return value


def _bloch(obj, field: str) -> tuple:
    if not isinstance(obj, (list, tuple)) or len(obj) != 3:
        raise ConfigError(field, f"expected a Bloch vector of 3 numbers, got {obj!r}")
    try:
        return tuple(float(x) for x in obj)
    except (TypeError, ValueError) as exc:
        raise ConfigError(field, f"non-numeric Bloch component in {obj!r}") from exc


def _wrap(field: str, build):
    try:
        return build()
    except ConfigError:
        raise
    except (ValueError, TypeError) as exc:
        raise ConfigError(field, str(exc)) from exc


def three_lead_config(cfg: Mapping) -> ThreeLeadConfig:
    kwargs: dict = {}
    if "s_offdiag" in cfg:
        kwargs["s_offdiag"] = complex_from_json(cfg["s_offdiag"], "s_offdiag")
    if "rotations" in cfg:
        rots = _get(cfg, "rotations", list)
        kwargs["rotations"] = tuple(operator_from_json(r, f"rotations[{k}]", (2, 2)) for k, r in enumerate(rots))
    spin = cfg.get("spin")
    if spin is not None:
        bloch = spin.get("bloch") if isinstance(spin, Mapping) else spin
        kwargs["spin"] = _wrap("spin", lambda: SpinState(_bloch(bloch, "spin.bloch")))
    if "demon_weight" in cfg:
        kwargs["demon_weight"] = _get(cfg, "demon_weight", float)
    return _wrap("rotations", lambda: ThreeLeadConfig(**kwargs))


def one_d_args(cfg: Mapping) -> dict:
    f_rr = operator_from_json(_get(cfg, "f_rr", object), "f_rr")
    r = f_rr.shape[0]
    out = {
        "s2": matrix_from_json(_get(cfg, "s2", object), "s2", (2, 2)),
        "f_rr": f_rr,
    }
    if cfg.get("reservoir_state") is not None:
        out["reservoir_state"] = matrix_from_json(cfg["reservoir_state"], "reservoir_state", (r, r))
    if cfg.get("input_state") is not None:
        out["input_state"] = matrix_from_json(cfg["input_state"], "input_state", (2, 2))
    return out


def nspin_config(cfg: Mapping, max_n: int | None = None) -> NSpinConfig:
    n = _get(cfg, "n_spins", int, None)
    if max_n is not None:
        n = max(n or 0, max_n)
    if n is None:
        raise ConfigError("n_spins", "required field is missing (or pass --max-n)")
    rotations = []
    for k, pair in enumerate(_get(cfg, "rotations", list)):
        if not isinstance(pair, list) or len(pair) != 2:
            raise ConfigError(f"rotations[{k}]", "expected a pair [U_ji, U_j'i]")
        rotations.append(tuple(operator_from_json(u, f"rotations[{k}][{m}]", (2, 2)) for m, u in enumerate(pair)))
    states = [_bloch(b, f"spin_states[{k}]") for k, b in enumerate(_get(cfg, "spin_states", list, [[0, 0, 1]]))]
    mode = _get(cfg, "mode", str, "generic")
    return _wrap("nspin", lambda: NSpinConfig(n, rotations, states, mode))


def tls_walk_config(cfg: Mapping, seed: int | None = None) -> TlsWalkConfig:
    return _wrap(
        "tls-walk",
        lambda: TlsWalkConfig(
            n_sites=_get(cfg, "n_sites", int, 4),
            n_steps=_get(cfg, "n_steps", int, 10),
            tls_open_prob=_get(cfg, "tls_open_prob", float, 0.5),
            refresh_policy=_get(cfg, "refresh_policy", str, "fresh-every-step"),
            seed=_get(cfg, "seed", int, 0) if seed is None else seed,
            initial_state=_get(cfg, "initial_state", str, "random"),
        ),
    )


def diagonal_args(cfg: Mapping) -> dict:
    positions = _get(cfg, "positions", list)
    if not positions:
        raise ConfigError("positions", "at least one position is required")
    weights = []
    s_of_position = {}
    for k, entry in enumerate(positions):
        if not isinstance(entry, Mapping):
            raise ConfigError(f"positions[{k}]", "expected an object with label, probability, s")
        label = str(entry.get("label", k))
        prob = entry.get("probability")
        if isinstance(prob, bool) or not isinstance(prob, (int, float)):
            raise ConfigError(f"positions[{k}].probability", f"expected a number, got {prob!r}")
        weights.append((label, float(prob)))
        s_of_position[label] = operator_from_json(entry.get("s"), f"positions[{k}].s")
    out: dict = {"positions_weights": weights, "s_of_position": s_of_position}
    if cfg.get("input_state") is not None:
        out["input_state"] = matrix_from_json(cfg["input_state"], "input_state")
    return out


def channel_spec(spec: Mapping):
    """Parse a channel-spec document into ``(blocks, pi, state)``.

    ``state`` is ``None`` when absent, otherwise a full matrix on the
    direct sum of the block subspaces (a per-block list is also accepted).
    """
    n = _get(spec, "dim_sys", int)
    r = _get(spec, "dim_res", int)
    if n < 1 or r < 1:
        raise ConfigError("dim_sys", "dimensions must be positive")
    raw_blocks = _get(spec, "blocks", list)
    if not raw_blocks:
        raise ConfigError("blocks", "at least one block is required")
    blocks = []
    for b, raw in enumerate(raw_blocks):
        where = f"blocks[{b}]"
        if not isinstance(raw, Mapping):
            raise ConfigError(where, "expected an object")
        s = matrix_from_json(raw.get("s"), f"{where}.s", (n, n))
        family_raw = raw.get("F")
        if not isinstance(family_raw, Mapping):
            raise ConfigError(f"{where}.F", "expected an object keyed by 'j,i'")
        family = {}
        for key, value in family_raw.items():
            try:
                j, i = (int(x) for x in str(key).split(","))
            except ValueError as exc:
                raise ConfigError(f"{where}.F", f"bad key {key!r}, expected 'j,i'") from exc
            if not (0 <= j < n and 0 <= i < n):
                raise ConfigError(f"{where}.F[{key}]", f"index out of range for dim_sys={n}")
            family[(j, i)] = operator_from_json(value, f"{where}.F[{key}]", (r, r))
        weight = raw.get("weight", 1.0 / len(raw_blocks))
        if isinstance(weight, bool) or not isinstance(weight, (int, float)):
            raise ConfigError(f"{where}.weight", f"expected a number, got {weight!r}")
        label = str(raw.get("label", b))
        blocks.append(_wrap(where, lambda: EnergyBlock(label, s, family, float(weight))))
    total = sum(b.weight for b in blocks)
    if abs(total - 1.0) > 1e-12:
        raise ConfigError("blocks", f"block weights sum to {total:.15g}, expected 1")
    pi = matrix_from_json(_get(spec, "reservoir_state", object), "reservoir_state", (r, r))

    state = None
    raw_state = spec.get("state")
    if raw_state is not None:
        size = n * len(blocks)
        if isinstance(raw_state, list) and len(raw_state) == len(blocks) and len(blocks) > 1 and _looks_like_block_list(raw_state, n):
            state = block_diagonal(
                *(matrix_from_json(m, f"state[{k}]", (n, n)) for k, m in enumerate(raw_state))
            )
        else:
            state = matrix_from_json(raw_state, "state", (size, size))
    return blocks, pi, state


def _looks_like_block_list(obj, n: int) -> bool:
    try:
        return all(matrix_from_json(m, "state", (n, n)) is not None for m in obj)
    except ConfigError:
        return False
