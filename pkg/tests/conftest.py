"""Shared fixtures and independent oracle helpers.

The oracle functions deliberately avoid the package's numpy machinery: they
work on plain dicts keyed by state tuples, so agreement between the two is
evidence, not circularity.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
import pytest

from infodist import JointDistribution, Schema

XOR_SCHEMA = Schema((("X", 2), ("Y", 2), ("Z", 2)))


def make_xor() -> JointDistribution:
    probs = np.zeros(8)
    for x in range(2):
        for y in range(2):
            probs[XOR_SCHEMA.index_of((x, y, x ^ y))] = 0.25
    return JointDistribution(XOR_SCHEMA, probs)


@pytest.fixture
def xor_triple() -> JointDistribution:
    """Three fair bits with Z = X xor Y: pairwise independent, jointly locked."""
    return make_xor()


def random_joint(rng: np.random.Generator, cards: tuple[int, ...], positive: bool = False):
    """Random distribution over the given cardinalities (Dirichlet weights)."""
    names = tuple(f"V{i}" for i in range(len(cards)))
    schema = Schema(tuple(zip(names, cards)))
    probs = rng.dirichlet(np.ones(schema.n_states))
    if positive:
        probs = probs + 1e-3
        probs = probs / probs.sum()
    return JointDistribution(schema, probs)


def random_product(rng: np.random.Generator, cards: tuple[int, ...]):
    """Fully independent distribution: outer product of random marginals."""
    table = np.ones(())
    for c in cards:
        table = np.multiply.outer(table, rng.dirichlet(np.ones(c)))
    names = tuple(f"V{i}" for i in range(len(cards)))
    schema = Schema(tuple(zip(names, cards)))
    return JointDistribution(schema, table.reshape(-1))


def dist_as_dict(dist: JointDistribution) -> dict[tuple[int, ...], float]:
    return {dist.schema.state_of(i): float(p) for i, p in enumerate(dist.probs) if p > 0}


# ---------------------------------------------------------------------------
# dict-based oracles
# ---------------------------------------------------------------------------


def oracle_marginal(
    table: dict[tuple[int, ...], float], subset: tuple[int, ...]
) -> dict[tuple[int, ...], float]:
    out: dict[tuple[int, ...], float] = {}
    for state, p in table.items():
        key = tuple(state[i] for i in subset)
        out[key] = out.get(key, 0.0) + p
    return out


def oracle_entropy(table: dict[tuple[int, ...], float]) -> float:
    """Shannon entropy in bits from a dict of positive probabilities."""
    return -sum(p * math.log2(p) for p in table.values() if p > 0)


def oracle_subset_entropy(
    table: dict[tuple[int, ...], float], subset: tuple[int, ...]
) -> float:
    return oracle_entropy(oracle_marginal(table, subset))


def oracle_interaction(table: dict[tuple[int, ...], float], subset: tuple[int, ...]) -> float:
    """Alternating entropy sum over all non-empty sub-subsets."""
    total = 0.0
    for r in range(1, len(subset) + 1):
        for combo in itertools.combinations(subset, r):
            sign = 1.0 if r % 2 == 1 else -1.0
            total += sign * oracle_subset_entropy(table, combo)
    return total


def oracle_kl(p: dict[tuple[int, ...], float], q: dict[tuple[int, ...], float]) -> float:
    """KL divergence in bits; q must cover p's support."""
    return sum(pv * math.log2(pv / q[state]) for state, pv in p.items())
