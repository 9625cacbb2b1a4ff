"""Entropy and interaction measures on the subset lattice of a joint distribution.

Interaction information and joint entropy are alternating-sum transforms of
each other over the subset lattice:

    I(v) = sum over non-empty subsets t of v of (-1)^(|t|+1) H(t)
    H(v) = sum over non-empty subsets t of v of (-1)^(|t|+1) I(t)

The transform is an involution, so a full profile of either quantity
reconstructs the other exactly.  All quantities default to bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping

import numpy as np

from .distribution import JointDistribution, marginal, _check_subset
from .errors import DomainError, IncompleteProfileError

LOG2 = math.log(2.0)

#: Magnitude below which a lattice sum is treated as exact zero noise.
_DUST = 0.0  # kept for clarity; no silent clamping of reported values


def _units_factor(units: str) -> float:
    if units == "bits":
        return LOG2
    if units == "nats":
        return 1.0
    raise DomainError(f"unknown units {units!r}; expected 'bits' or 'nats'")


def subsets_of(mask: int) -> Iterator[int]:
    """Non-empty submasks of a bitmask, ascending."""
    sub = mask & (mask - 1) if mask else 0
    s = mask
    while s:
        yield s
        s = (s - 1) & mask


def mask_of(subset: Iterable[int]) -> int:
    m = 0
    for i in subset:
        m |= 1 << i
    return m


def indices_of(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def entropy(dist: JointDistribution, subset: Iterable[int] | None = None, units: str = "bits") -> float:
    """Shannon entropy of a marginal (the whole joint when subset is None)."""
    d = dist if subset is None else marginal(dist, subset)
    p = d.probs
    live = p[p > 0]
    return float(-(live * np.log(live)).sum() / _units_factor(units))


def interaction_information(
    dist: JointDistribution, subset: Iterable[int] | None = None, units: str = "bits"
) -> float:
    """Interaction information of a variable subset (alternating entropy sum).

    For two variables this is the mutual information; for a single variable
    it is the entropy itself.  Sign convention: odd-size subsets enter the
    sum positively.
    """
    idxs = (
        tuple(range(len(dist.schema)))
        if subset is None
        else _check_subset(dist.schema, subset, allow_empty=False)
    )
    mask = mask_of(idxs)
    total = 0.0
    for sub in subsets_of(mask):
        sign = -1.0 if (bin(sub).count("1") % 2 == 0) else 1.0
        total += sign * entropy(dist, indices_of(sub), units=units)
    return total


def mutual_information(dist: JointDistribution, i: int, j: int, units: str = "bits") -> float:
    """Pairwise mutual information H(i) + H(j) - H(i,j), clamped at zero.

    The alternating sum can land a hair below zero from rounding when the
    pair is independent; MI is non-negative by definition so tiny negatives
    are clamped.
    """
    if i == j:
        raise DomainError("mutual information needs two distinct variables")
    val = entropy(dist, [i], units) + entropy(dist, [j], units) - entropy(dist, [i, j], units)
    if val < 0.0:
        if val < -1e-9:
            raise DomainError(f"mutual information {val} is negative beyond rounding noise")
        val = 0.0
    return val


@dataclass(frozen=True)
class InfoProfile:
    """Lattice profile: one value per non-empty variable subset (bitmask key)."""

    n_variables: int
    kind: str  # "entropy" or "interaction"
    units: str
    values: Mapping[int, float] = field(compare=False)

    def __post_init__(self):
        if self.kind not in ("entropy", "interaction"):
            raise DomainError(f"unknown profile kind {self.kind!r}")
        full = (1 << self.n_variables) - 1
        for mask in self.values:
            if not 0 < mask <= full:
                raise DomainError(f"subset mask {mask} out of range for {self.n_variables} variables")

    def value(self, subset: Iterable[int]) -> float:
        mask = mask_of(subset)
        if mask not in self.values:
            raise IncompleteProfileError(f"profile has no entry for subset {indices_of(mask)}")
        return self.values[mask]

    def by_size(self) -> dict[int, dict[tuple[int, ...], float]]:
        out: dict[int, dict[tuple[int, ...], float]] = {}
        for mask, val in sorted(self.values.items()):
            out.setdefault(bin(mask).count("1"), {})[indices_of(mask)] = val
        return out

    def is_complete(self) -> bool:
        return len(self.values) == (1 << self.n_variables) - 1


def compute_profile(dist: JointDistribution, kind: str = "entropy", units: str = "bits") -> InfoProfile:
    """Entropy (or interaction) of every non-empty subset, one marginal pass each.

    Entropies are computed directly per subset; the interaction profile is
    derived from the entropy profile through the lattice transform so both
    profiles are mutually consistent to machine precision.
    """
    n = len(dist.schema)
    full = (1 << n) - 1
    ent: dict[int, float] = {}
    for mask in range(1, full + 1):
        ent[mask] = entropy(dist, indices_of(mask), units=units)
    if kind == "entropy":
        return InfoProfile(n, "entropy", units, ent)
    if kind == "interaction":
        inter = {mask: _mobius(ent, mask) for mask in ent}
        return InfoProfile(n, "interaction", units, inter)
    raise DomainError(f"unknown profile kind {kind!r}")


def _mobius(values: Mapping[int, float], mask: int) -> float:
    total = 0.0
    for sub in subsets_of(mask):
        sign = -1.0 if (bin(sub).count("1") % 2 == 0) else 1.0
        total += sign * values[sub]
    return total


def invert_profile(profile: InfoProfile) -> InfoProfile:
    """Apply the lattice transform; entropy <-> interaction (self-inverse).

    Needs every non-empty subset of the largest requested set, so a complete
    profile is required.
    """
    if not profile.is_complete():
        raise IncompleteProfileError("lattice inversion needs a complete profile")
    flipped = "interaction" if profile.kind == "entropy" else "entropy"
    vals = {mask: _mobius(profile.values, mask) for mask in profile.values}
    return InfoProfile(profile.n_variables, flipped, profile.units, vals)


def entropy_from_interactions(profile: InfoProfile, subset: Iterable[int]) -> float:
    """Joint entropy of a subset reconstructed from an interaction profile."""
    if profile.kind != "interaction":
        raise DomainError("reconstruction needs an interaction profile")
    mask = mask_of(tuple(subset))
    total = 0.0
    for sub in subsets_of(mask):
        if sub not in profile.values:
            raise IncompleteProfileError(
                f"profile has no entry for subset {indices_of(sub)}"
            )
        sign = -1.0 if (bin(sub).count("1") % 2 == 0) else 1.0
        total += sign * profile.values[sub]
    return total


def conditional_interaction(
    dist: JointDistribution,
    subset: Iterable[int],
    conditioning: int,
    units: str = "bits",
) -> float:
    """Interaction information of a subset, averaged over one conditioning variable.

    Each level x of the conditioning variable contributes P(x) times the
    interaction of the subset under the sliced distribution; zero-probability
    levels contribute nothing.
    """
    idxs = _check_subset(dist.schema, subset, allow_empty=False)
    if conditioning in idxs:
        raise DomainError("conditioning variable cannot be part of the subset")
    if not 0 <= conditioning < len(dist.schema):
        raise DomainError(f"conditioning variable {conditioning} out of range")

    cond_card = dist.schema.cardinalities[conditioning]
    table = dist.table()
    # positions of the subset inside the sliced schema (conditioning removed)
    kept = [i for i in range(len(dist.schema)) if i != conditioning]
    sub_positions = [kept.index(i) for i in idxs]
    sliced_schema = dist.schema.restrict(kept)

    total = 0.0
    for x in range(cond_card):
        slab = np.take(table, x, axis=conditioning)
        px = float(slab.sum())
        if px <= 0.0:
            continue
        slice_dist = JointDistribution(sliced_schema, (slab / px).reshape(-1))
        total += px * interaction_information(slice_dist, sub_positions, units=units)
    return total


def interaction_recursion_gap(
    dist: JointDistribution, subset: Iterable[int], units: str = "bits"
) -> float:
    """Residual of I(S) - [I(S \\ {last}) - I(S \\ {last} | last)]; zero in exact math."""
    idxs = _check_subset(dist.schema, subset, allow_empty=False)
    if len(idxs) < 2:
        raise DomainError("recursion needs at least two variables")
    head, last = idxs[:-1], idxs[-1]
    lhs = interaction_information(dist, idxs, units=units)
    rhs = interaction_information(dist, head, units=units) - conditional_interaction(
        dist, head, last, units=units
    )
    return lhs - rhs


def multi_information(dist: JointDistribution, units: str = "bits") -> float:
    """Total correlation: sum of single-variable entropies minus the joint entropy."""
    n = len(dist.schema)
    singles = sum(entropy(dist, [i], units=units) for i in range(n))
    return singles - entropy(dist, units=units)


@dataclass(frozen=True)
class OmegaDecomposition:
    """Multi-information split into per-size interaction sums.

    ``size_sums[k]`` is the sum of interaction informations over all subsets
    of exactly k variables.  The alternating recombination

        omega = sum over k >= 2 of (-1)^k size_sums[k]

    equals the multi-information; pairs add, triples subtract, and so on.
    """

    units: str
    size_sums: dict[int, float]
    omega: float
    recombined: float

    @property
    def gap(self) -> float:
        return self.recombined - self.omega


def omega_decomposition(dist: JointDistribution, units: str = "bits") -> OmegaDecomposition:
    """Decompose multi-information over subset sizes via the interaction profile."""
    n = len(dist.schema)
    profile = compute_profile(dist, kind="interaction", units=units)
    sums: dict[int, float] = {k: 0.0 for k in range(1, n + 1)}
    for mask, val in profile.values.items():
        sums[bin(mask).count("1")] += val
    omega = multi_information(dist, units=units)
    recombined = sum(((-1.0) ** k) * sums[k] for k in range(2, n + 1))
    return OmegaDecomposition(units=units, size_sums=sums, omega=omega, recombined=recombined)
