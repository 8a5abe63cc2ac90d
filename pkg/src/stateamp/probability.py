"""Exact finite-alphabet probability primitives.

Everything downstream (channel models, region solvers, coding experiments)
reduces to entropies and mutual informations of small dense joint tables,
so this module keeps those operations exact, validated, and immutable.
All information quantities are in bits.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

# Simplex membership tolerance; entries in [-NEG_CLAMP, 0) are treated as
# exact zeros because optimizer iterates live on simplex boundaries.
SIMPLEX_ATOL = 1e-9
NEG_CLAMP = 1e-12


class ModelError(ValueError):
    """A probability object violates its validity contract."""


def _clean_weights(values, what: str) -> np.ndarray:
    w = np.asarray(values, dtype=float)
    if w.size == 0:
        raise ModelError(f"{what}: empty weight array")
    if not np.all(np.isfinite(w)):
        raise ModelError(f"{what}: weights must be finite")
    if float(w.min()) < -NEG_CLAMP:
        raise ModelError(f"{what}: negative weight {w.min():.3e}")
    w = np.where(w < 0.0, 0.0, w)
    w.flags.writeable = False
    return w


def _check_mass(w: np.ndarray, what: str) -> None:
    mass = float(w.sum())
    if abs(mass - 1.0) > SIMPLEX_ATOL:
        raise ModelError(f"{what}: total mass {mass!r} differs from 1 beyond {SIMPLEX_ATOL}")


@dataclass(frozen=True)
class Distribution:
    """Probability mass function over a finite alphabet indexed 0..k-1."""

    weights: np.ndarray

    def __init__(self, weights) -> None:
        w = _clean_weights(weights, "Distribution")
        if w.ndim != 1:
            raise ModelError("Distribution weights must be one-dimensional")
        _check_mass(w, "Distribution")
        object.__setattr__(self, "weights", w)

    @property
    def size(self) -> int:
        return int(self.weights.shape[0])

    def __len__(self) -> int:
        return self.size


@dataclass(frozen=True)
class JointTable:
    """Dense joint law over named finite alphabets.

    ``axes`` names the dimensions of ``weights`` in order; the table always
    carries total mass one, so every marginal is a valid ``Distribution``.
    """

    axes: tuple[str, ...]
    weights: np.ndarray

    def __init__(self, axes: Sequence[str], weights) -> None:
        names = tuple(axes)
        if len(set(names)) != len(names):
            raise ModelError(f"JointTable: duplicate axis names in {names}")
        w = _clean_weights(weights, "JointTable")
        if w.ndim != len(names):
            raise ModelError(
                f"JointTable: {len(names)} axis names but weights have {w.ndim} dimensions"
            )
        _check_mass(w, "JointTable")
        object.__setattr__(self, "axes", names)
        object.__setattr__(self, "weights", w)

    def axis_index(self, name: str) -> int:
        try:
            return self.axes.index(name)
        except ValueError:
            raise ModelError(f"unknown axis {name!r}; table has {self.axes}") from None

    def marginal(self, keep_axes: Sequence[str]) -> "JointTable":
        return marginalize(self, keep_axes)

    def distribution(self) -> Distribution:
        """Flatten to a Distribution over the product alphabet."""
        return Distribution(self.weights.reshape(-1))


def entropy_bits(weights: np.ndarray) -> float:
    """Shannon entropy in bits of a raw weight array (0 log 0 := 0)."""
    w = np.asarray(weights, dtype=float).reshape(-1)
    positive = w[w > 0.0]
    return float(-(positive * np.log2(positive)).sum())


def binary_entropy(p: float) -> float:
    """Entropy in bits of a Bernoulli(p) variable."""
    if not 0.0 <= p <= 1.0:
        raise ModelError(f"binary_entropy: p={p!r} outside [0, 1]")
    return entropy_bits(np.array([p, 1.0 - p]))


def entropy(dist: Distribution) -> float:
    """Entropy of a distribution, in bits; lies in [0, log2(alphabet size)]."""
    return entropy_bits(dist.weights)


def _axis_tuple(axes) -> tuple[str, ...]:
    if isinstance(axes, str):
        return (axes,)
    return tuple(axes)


def joint_entropy(table: JointTable, axes: Sequence[str] | str | None = None) -> float:
    """Entropy in bits of the joint marginal over the named axes (all by default)."""
    if axes is None:
        return entropy_bits(table.weights)
    names = _axis_tuple(axes)
    return entropy_bits(marginalize(table, names).weights)


def marginalize(table: JointTable, keep_axes: Sequence[str] | str) -> JointTable:
    """Sum out all axes not named in ``keep_axes``; mass is preserved."""
    keep = _axis_tuple(keep_axes)
    if not keep:
        raise ModelError("marginalize: keep_axes must be nonempty")
    keep_idx = [table.axis_index(name) for name in keep]
    if len(set(keep_idx)) != len(keep_idx):
        raise ModelError(f"marginalize: repeated axis in {keep}")
    drop = tuple(i for i in range(table.weights.ndim) if i not in keep_idx)
    summed = table.weights.sum(axis=drop) if drop else table.weights
    # Summation leaves surviving axes in original order; restore caller's order.
    remaining = sorted(keep_idx)
    perm = [remaining.index(keep_idx[k]) for k in range(len(keep_idx))]
    return JointTable(keep, np.transpose(summed, perm))


def conditional_entropy(
    table: JointTable,
    target_axes: Sequence[str] | str,
    given_axes: Sequence[str] | str = (),
) -> float:
    """H(target | given) = H(target, given) - H(given), in bits; nonnegative."""
    target = _axis_tuple(target_axes)
    given = _axis_tuple(given_axes)
    if set(target) & set(given):
        raise ModelError(f"conditional_entropy: axes overlap between {target} and {given}")
    h_joint = joint_entropy(table, target + given)
    h_given = joint_entropy(table, given) if given else 0.0
    value = h_joint - h_given
    return max(value, 0.0)


def mutual_information(
    table: JointTable,
    axes_a: Sequence[str] | str,
    axes_b: Sequence[str] | str,
) -> float:
    """I(A; B) = H(A) + H(B) - H(A, B), clamped to be nonnegative."""
    a = _axis_tuple(axes_a)
    b = _axis_tuple(axes_b)
    if set(a) & set(b):
        raise ModelError(f"mutual_information: axes overlap between {a} and {b}")
    value = joint_entropy(table, a) + joint_entropy(table, b) - joint_entropy(table, a + b)
    if value < -1e-6:
        raise ModelError(f"mutual_information: inconsistent table (I={value!r})")
    return max(value, 0.0)


def conditional_mutual_information(
    table: JointTable,
    axes_a: Sequence[str] | str,
    axes_b: Sequence[str] | str,
    given_axes: Sequence[str] | str,
) -> float:
    """I(A; B | C) via entropy decomposition, clamped to be nonnegative."""
    a = _axis_tuple(axes_a)
    b = _axis_tuple(axes_b)
    c = _axis_tuple(given_axes)
    for pair in ((a, b), (a, c), (b, c)):
        if set(pair[0]) & set(pair[1]):
            raise ModelError("conditional_mutual_information: axis groups must be disjoint")
    value = (
        joint_entropy(table, a + c)
        + joint_entropy(table, b + c)
        - joint_entropy(table, a + b + c)
        - (joint_entropy(table, c) if c else 0.0)
    )
    return max(value, 0.0)
