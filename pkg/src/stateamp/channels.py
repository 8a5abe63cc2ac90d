"""State-dependent channel models, encoder policies, and their joint laws.

A channel is a state prior p(s) plus a transition kernel p(y|x,s) over finite
alphabets (index sets 0..k-1; semantic labels live in the spec documents).
An encoder policy fixes an auxiliary alphabet U, a deterministic input map
x = f(u, s), and weights over U that either may depend on the current state
(noncausal) or must not (causal).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

import numpy as np

from .probability import (
    SIMPLEX_ATOL,
    Distribution,
    JointTable,
    ModelError,
    _clean_weights,
)

MODE_NONCAUSAL = "noncausal"
MODE_CAUSAL = "causal"
POLICY_MODES = (MODE_NONCAUSAL, MODE_CAUSAL)


@dataclass(frozen=True)
class StateChannel:
    """Memoryless channel p(y|x,s) with i.i.d. state prior p(s)."""

    name: str
    state_dist: Distribution
    transition: np.ndarray  # indexed [s][x][y]

    def __init__(self, name: str, state_dist, transition) -> None:
        if not isinstance(state_dist, Distribution):
            state_dist = Distribution(state_dist)
        kernel = _clean_weights(transition, f"channel {name!r} transition")
        if kernel.ndim != 3:
            raise ModelError(f"channel {name!r}: transition must be indexed [s][x][y]")
        if kernel.shape[0] != state_dist.size:
            raise ModelError(
                f"channel {name!r}: transition has {kernel.shape[0]} states, "
                f"state_dist has {state_dist.size}"
            )
        row_mass = kernel.sum(axis=2)
        bad = np.argwhere(np.abs(row_mass - 1.0) > SIMPLEX_ATOL)
        if bad.size:
            s, x = (int(v) for v in bad[0])
            raise ModelError(
                f"channel {name!r}: transition row (s={s}, x={x}) sums to {row_mass[s, x]!r}"
            )
        object.__setattr__(self, "name", str(name))
        object.__setattr__(self, "state_dist", state_dist)
        object.__setattr__(self, "transition", kernel)

    @property
    def num_states(self) -> int:
        return self.state_dist.size

    @property
    def num_inputs(self) -> int:
        return int(self.transition.shape[1])

    @property
    def num_outputs(self) -> int:
        return int(self.transition.shape[2])

    def is_deterministic(self, tol: float = 1e-12) -> bool:
        """True when every transition row is a point mass."""
        return bool(np.all(self.transition.max(axis=2) >= 1.0 - tol))

    def output_row_entropies(self) -> np.ndarray:
        """H(Y | X=x, S=s) for every row, as an [s][x] array of bits."""
        kernel = self.transition
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = np.where(kernel > 0.0, kernel * np.log2(kernel), 0.0)
        return -terms.sum(axis=2)


def memory_cell_channel(p: float, q: float, r: float) -> StateChannel:
    """Write-once memory cells: stuck at 0 (prob p), stuck at 1 (q), or good (r).

    States are indexed 0=stuck-at-0, 1=stuck-at-1, 2=good; input and output are
    binary, with Y=0 on stuck-at-0 cells, Y=1 on stuck-at-1 cells, Y=X on good
    cells.
    """
    weights = np.array([p, q, r], dtype=float)
    if weights.min() < -1e-12 or abs(weights.sum() - 1.0) > SIMPLEX_ATOL:
        raise ModelError(f"memory_cell_channel: (p, q, r)=({p}, {q}, {r}) not on the simplex")
    kernel = np.zeros((3, 2, 2))
    kernel[0, :, 0] = 1.0  # stuck at 0
    kernel[1, :, 1] = 1.0  # stuck at 1
    kernel[2, 0, 0] = 1.0  # good cell copies the input
    kernel[2, 1, 1] = 1.0
    return StateChannel("memory-cell", weights, kernel)


def binary_multiplying_channel(gamma: float) -> StateChannel:
    """Binary multiplying channel Y = X * S with S ~ Bernoulli(gamma)."""
    if not 0.0 <= gamma <= 1.0:
        raise ModelError(f"binary_multiplying_channel: gamma={gamma!r} outside [0, 1]")
    kernel = np.zeros((2, 2, 2))
    for s in range(2):
        for x in range(2):
            kernel[s, x, x * s] = 1.0
    return StateChannel("binary-multiplying", np.array([1.0 - gamma, gamma]), kernel)


@dataclass(frozen=True)
class AuxPolicy:
    """Auxiliary-codeword policy: x = f(u, s) plus weights over U.

    ``cond_u_given_s`` holds one distribution over U per state (noncausal);
    ``u_prior`` holds a single state-independent distribution (causal).
    Exactly one of the two is set, according to ``mode``.
    """

    mode: str
    f: np.ndarray  # indexed [u][s] -> x
    cond_u_given_s: np.ndarray | None = None  # [s][u]
    u_prior: np.ndarray | None = None  # [u]

    def __init__(self, mode: str, f, cond_u_given_s=None, u_prior=None) -> None:
        if mode not in POLICY_MODES:
            raise ModelError(f"AuxPolicy: mode must be one of {POLICY_MODES}, got {mode!r}")
        fmap = np.asarray(f, dtype=int)
        if fmap.ndim != 2 or fmap.shape[0] < 1 or fmap.shape[1] < 1:
            raise ModelError("AuxPolicy: f must be a [u][s] table of input indices")
        if fmap.min() < 0:
            raise ModelError("AuxPolicy: f contains negative input indices")
        aux_size, num_states = fmap.shape
        if mode == MODE_NONCAUSAL:
            if cond_u_given_s is None or u_prior is not None:
                raise ModelError("AuxPolicy: noncausal mode requires cond_u_given_s only")
            weights = _clean_weights(cond_u_given_s, "AuxPolicy cond_u_given_s")
            if weights.shape != (num_states, aux_size):
                raise ModelError(
                    f"AuxPolicy: cond_u_given_s shape {weights.shape} does not match "
                    f"(num_states={num_states}, aux_size={aux_size})"
                )
            rows = weights.sum(axis=1)
            if np.any(np.abs(rows - 1.0) > SIMPLEX_ATOL):
                s = int(np.argmax(np.abs(rows - 1.0)))
                raise ModelError(f"AuxPolicy: cond_u_given_s row s={s} sums to {rows[s]!r}")
            object.__setattr__(self, "cond_u_given_s", weights)
            object.__setattr__(self, "u_prior", None)
        else:
            if u_prior is None or cond_u_given_s is not None:
                raise ModelError("AuxPolicy: causal mode requires u_prior only")
            prior = Distribution(u_prior).weights
            if prior.shape[0] != aux_size:
                raise ModelError(
                    f"AuxPolicy: u_prior has {prior.shape[0]} weights, f has {aux_size} rows"
                )
            object.__setattr__(self, "cond_u_given_s", None)
            object.__setattr__(self, "u_prior", prior)
        fmap.flags.writeable = False
        object.__setattr__(self, "mode", mode)
        object.__setattr__(self, "f", fmap)

    @property
    def aux_size(self) -> int:
        return int(self.f.shape[0])

    @property
    def num_states(self) -> int:
        return int(self.f.shape[1])

    def weight_matrix(self) -> np.ndarray:
        """Weights as an [s][u] matrix (the causal prior tiled across states)."""
        if self.mode == MODE_NONCAUSAL:
            return np.array(self.cond_u_given_s)
        return np.tile(self.u_prior, (self.num_states, 1))

    def check_compatible(self, channel: StateChannel) -> None:
        """Validate alphabets against a channel, including the |U| <= |X||S| cap."""
        if self.num_states != channel.num_states:
            raise ModelError(
                f"policy expects {self.num_states} states, channel has {channel.num_states}"
            )
        if int(self.f.max()) >= channel.num_inputs:
            raise ModelError(
                f"policy maps to input {int(self.f.max())}, channel has {channel.num_inputs}"
            )
        cap = channel.num_inputs * channel.num_states
        if self.aux_size > cap:
            raise ModelError(f"policy aux_size {self.aux_size} exceeds cap |X||S| = {cap}")


@dataclass(frozen=True)
class GaussianParams:
    """Powers for the additive Gaussian model Y = X + S + Z.

    P bounds the input power, S ~ N(0, Q) is the state, Z ~ N(0, N) the noise;
    all three share the same (arbitrary) units.
    """

    P: float
    Q: float
    N: float

    def __post_init__(self) -> None:
        if not (np.isfinite(self.P) and np.isfinite(self.Q) and np.isfinite(self.N)):
            raise ModelError("GaussianParams: P, Q, N must be finite")
        if self.P < 0.0:
            raise ModelError(f"GaussianParams: P={self.P!r} must be nonnegative")
        if self.Q <= 0.0 or self.N <= 0.0:
            raise ModelError("GaussianParams: Q and N must be positive")


def joint_from_policy(channel: StateChannel, policy: AuxPolicy) -> JointTable:
    """Joint law p(s, u, x, y) = p(s) w(u|s) 1{x = f(u,s)} p(y|x,s).

    The factorization is recoverable exactly: X is a deterministic function of
    (U, S), so U -> (X, S) -> Y holds by construction.
    """
    policy.check_compatible(channel)
    p_s = channel.state_dist.weights
    kernel = channel.transition
    weights = policy.weight_matrix()
    num_s, num_u = weights.shape
    num_x, num_y = channel.num_inputs, channel.num_outputs
    table = np.zeros((num_s, num_u, num_x, num_y))
    for u in range(num_u):
        for s in range(num_s):
            x = int(policy.f[u, s])
            table[s, u, x, :] = p_s[s] * weights[s, u] * kernel[s, x, :]
    return JointTable(("S", "U", "X", "Y"), table)


# ---------------------------------------------------------------------------
# Structured-document ingestion (JSON)
# ---------------------------------------------------------------------------


def validate_and_load(doc: Mapping) -> StateChannel:
    """Build a validated StateChannel from a channel spec document.

    The document carries ``name`` (string), ``state_dist`` (array of |S|
    reals), and ``transition`` (array [s][x][y] of reals).
    """
    if not isinstance(doc, Mapping):
        raise ModelError("channel document must be a mapping")
    missing = [key for key in ("name", "state_dist", "transition") if key not in doc]
    if missing:
        raise ModelError(f"channel document missing fields: {missing}")
    name = doc["name"]
    if not isinstance(name, str):
        raise ModelError("channel document: 'name' must be a string")
    try:
        state = np.asarray(doc["state_dist"], dtype=float)
        kernel = np.asarray(doc["transition"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise ModelError(f"channel document: non-numeric entries ({exc})") from None
    if state.ndim != 1:
        raise ModelError("channel document: 'state_dist' must be a flat array")
    if kernel.ndim != 3:
        raise ModelError("channel document: 'transition' must be a [s][x][y] array")
    return StateChannel(name, state, kernel)


def channel_to_dict(channel: StateChannel) -> dict:
    return {
        "name": channel.name,
        "state_dist": channel.state_dist.weights.tolist(),
        "transition": channel.transition.tolist(),
    }


def load_channel(path: str | Path) -> StateChannel:
    with open(path, "r", encoding="utf-8") as fh:
        return validate_and_load(json.load(fh))


def save_channel(channel: StateChannel, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(channel_to_dict(channel), fh, indent=2)
        fh.write("\n")


def policy_from_dict(doc: Mapping) -> AuxPolicy:
    """Build a validated AuxPolicy from a policy spec document.

    Fields: ``mode`` ("noncausal" | "causal"), ``aux_size``, ``f`` (array
    [u][s] of input indices), ``weights`` (array [s][u] for noncausal, [u]
    for causal).
    """
    if not isinstance(doc, Mapping):
        raise ModelError("policy document must be a mapping")
    missing = [key for key in ("mode", "aux_size", "f", "weights") if key not in doc]
    if missing:
        raise ModelError(f"policy document missing fields: {missing}")
    mode = doc["mode"]
    if mode not in POLICY_MODES:
        raise ModelError(f"policy document: mode must be one of {POLICY_MODES}")
    f = np.asarray(doc["f"], dtype=int)
    if f.ndim != 2:
        raise ModelError("policy document: 'f' must be a [u][s] array")
    if int(doc["aux_size"]) != f.shape[0]:
        raise ModelError(
            f"policy document: aux_size={doc['aux_size']} but f has {f.shape[0]} rows"
        )
    weights = np.asarray(doc["weights"], dtype=float)
    if mode == MODE_NONCAUSAL:
        return AuxPolicy(mode, f, cond_u_given_s=weights)
    return AuxPolicy(mode, f, u_prior=weights)


def policy_to_dict(policy: AuxPolicy) -> dict:
    weights = policy.cond_u_given_s if policy.mode == MODE_NONCAUSAL else policy.u_prior
    return {
        "mode": policy.mode,
        "aux_size": policy.aux_size,
        "f": policy.f.tolist(),
        "weights": np.asarray(weights).tolist(),
    }


def load_policy(path: str | Path) -> AuxPolicy:
    with open(path, "r", encoding="utf-8") as fh:
        return policy_from_dict(json.load(fh))
