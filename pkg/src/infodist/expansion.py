"""Divergence expansion by interaction degree and truncation approximations.

The divergence D(P||Q) = H'(v) - H(v) splits into degree-ordered terms once
the cross-entropy H'(v) is pushed through the subset lattice: the degree-m
term collects the cross interaction informations of all size-m subsets.
Keeping terms up to degree m and zeroing the rest induces a factorized
approximate distribution (marginal product at m = 1, Kirkwood superposition
at m = 2 for three variables, the source itself at m = n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .distribution import JointDistribution, marginal, normalize, same_schema
from .errors import DomainError, UndefinedApproximationError
from .lattice import (
    _units_factor,
    conditional_interaction,
    entropy,
    indices_of,
    interaction_information,
    subsets_of,
)


class InfiniteDivergence(float):
    """Infinite divergence value carrying the state that broke support.

    Behaves as float('inf') in arithmetic and comparisons; ``state`` names
    the first state (row-major order) where p > 0 but q = 0.
    """

    state: tuple[int, ...]

    def __new__(cls, state: tuple[int, ...]):
        obj = super().__new__(cls, math.inf)
        obj.state = tuple(state)
        return obj

    def __repr__(self) -> str:
        return f"InfiniteDivergence(state={self.state})"


def _support_violation(p: JointDistribution, q: JointDistribution) -> tuple[int, ...] | None:
    bad = (p.probs > 0) & (q.probs == 0)
    if bad.any():
        return p.schema.state_of(int(np.argmax(bad)))
    return None


def cross_entropy(p: JointDistribution, q: JointDistribution, units: str = "bits") -> float:
    """-sum p log q; equals entropy(p) when q = p.

    A state with p > 0 and q = 0 makes the result infinite; that is signaled
    by returning an :class:`InfiniteDivergence` (a float) rather than raising,
    since an infinite cross-entropy is a legitimate value, not a usage error.
    """
    same_schema(p, q)
    bad = _support_violation(p, q)
    if bad is not None:
        return InfiniteDivergence(bad)
    live = p.probs > 0
    return float(-(p.probs[live] * np.log(q.probs[live])).sum() / _units_factor(units))


def kl_divergence(p: JointDistribution, q: JointDistribution, units: str = "bits") -> float:
    """Relative entropy sum p log(p/q); non-negative, zero only at p = q."""
    same_schema(p, q)
    bad = _support_violation(p, q)
    if bad is not None:
        return InfiniteDivergence(bad)
    live = p.probs > 0
    pl = p.probs[live]
    val = float((pl * np.log(pl / q.probs[live])).sum() / _units_factor(units))
    if val < 0.0:
        # the exact sum is >= 0; anything below is accumulated rounding
        if val < -1e-12:
            raise DomainError(f"divergence evaluated to {val}; inputs are not distributions")
        val = 0.0
    return val


@dataclass(frozen=True)
class ExpansionReport:
    """Degree-ordered expansion of D(p||q).

    ``degree_terms[m-1]`` is the total contribution of all size-m subsets,
    sign included; ``cumulative_a[m-1]`` is the partial sum A_m.  When q
    breaks p's support somewhere, ``divergence`` is infinite and the term
    sequences stop at the last degree whose subset cross-entropies are all
    finite (``infinite`` is set and the offending full state is recorded).
    """

    n_variables: int
    units: str
    degree_terms: tuple[float, ...]
    cumulative_a: tuple[float, ...]
    true_entropy: float
    divergence: float
    infinite: bool = False
    offending_state: tuple[int, ...] | None = None

    def degree_term(self, m: int) -> float:
        if not 1 <= m <= len(self.degree_terms):
            raise DomainError(f"no degree-{m} term in this report")
        return self.degree_terms[m - 1]

    def cumulative(self, m: int) -> float:
        if not 1 <= m <= len(self.cumulative_a):
            raise DomainError(f"no cumulative A_{m} in this report")
        return self.cumulative_a[m - 1]


def _marginal_cross_entropies(
    p: JointDistribution, q: JointDistribution, units: str
) -> dict[int, float]:
    """H'(tau) = -sum P_tau log Q_tau for every non-empty subset mask."""
    n = len(p.schema)
    out: dict[int, float] = {}
    for mask in range(1, 1 << n):
        idxs = indices_of(mask)
        pm = marginal(p, idxs)
        qm = marginal(q, idxs)
        live = pm.probs > 0
        if np.any(qm.probs[live] == 0):
            out[mask] = math.inf
        else:
            out[mask] = float(
                -(pm.probs[live] * np.log(qm.probs[live])).sum() / _units_factor(units)
            )
    return out


def expand_divergence(
    p: JointDistribution, q: JointDistribution, units: str = "bits"
) -> ExpansionReport:
    """Expand D(p||q) into per-degree interaction contributions.

    The cross interaction information I'(tau) is the alternating subset sum
    of marginal cross-entropies; the degree-m term is
    sum over |tau| = m of (-1)^(m+1) I'(tau), and the cumulative sums A_m
    satisfy A_n - H(v) = D(p||q) exactly.
    """
    same_schema(p, q)
    n = len(p.schema)
    hprime = _marginal_cross_entropies(p, q, units)
    h_true = entropy(p, units=units)

    # cross interaction informations by Moebius transform; a degree is kept
    # only while every cross-entropy at or below it is finite
    finite_up_to = n
    for mask, val in hprime.items():
        if math.isinf(val):
            finite_up_to = min(finite_up_to, bin(mask).count("1") - 1)
    iprime: dict[int, float] = {}
    for mask in hprime:
        if bin(mask).count("1") > finite_up_to:
            continue
        total = 0.0
        for sub in subsets_of(mask):
            sign = -1.0 if (bin(sub).count("1") % 2 == 0) else 1.0
            total += sign * hprime[sub]
        iprime[mask] = total

    terms = []
    for m in range(1, finite_up_to + 1):
        sign = -1.0 if (m % 2 == 0) else 1.0
        terms.append(
            sign * sum(val for mask, val in iprime.items() if bin(mask).count("1") == m)
        )
    cumulative = tuple(float(s) for s in np.cumsum(terms)) if terms else ()

    if finite_up_to < n:
        # a broken marginal always projects from a broken full state
        bad = _support_violation(p, q)
        assert bad is not None
        return ExpansionReport(
            n_variables=n,
            units=units,
            degree_terms=tuple(terms),
            cumulative_a=cumulative,
            true_entropy=h_true,
            divergence=InfiniteDivergence(bad),
            infinite=True,
            offending_state=bad,
        )

    return ExpansionReport(
        n_variables=n,
        units=units,
        degree_terms=tuple(terms),
        cumulative_a=cumulative,
        true_entropy=h_true,
        divergence=cumulative[-1] - h_true,
    )


# ---------------------------------------------------------------------------
# truncation-induced approximations
# ---------------------------------------------------------------------------


def truncation_coefficients(n: int, m: int) -> dict[int, int]:
    """Exponents c_k of the order-m factor product over n variables.

    log P'_m(s) = sum over k = 1..m of c_k * sum over |tau| = k of log P(s_tau),
    with c_k = (-1)^(m-k) * binom(n-k-1, m-k).  Zero coefficients are dropped,
    so m = n gives {n: 1} and m = 1 gives {1: 1}.
    """
    if not 1 <= m <= n:
        raise DomainError(f"truncation order {m} out of range 1..{n}")
    coeffs: dict[int, int] = {}
    for k in range(1, m + 1):
        if k == m:
            c = 1
        else:
            c = (-1) ** (m - k) * math.comb(n - k - 1, m - k)
        if c != 0:
            coeffs[k] = c
    return coeffs


@dataclass(frozen=True)
class TruncationFamily:
    """Order-m factorized approximation of a joint distribution."""

    order: int
    coefficients: dict[int, int] = field(compare=False)
    approximation: JointDistribution = None  # type: ignore[assignment]
    raw_z: float = 1.0


def truncated_approximation(p: JointDistribution, m: int) -> TruncationFamily:
    """Build the order-m factor product of p's marginals and normalize it.

    States where any positive-exponent factor vanishes get probability zero.
    A state kept alive by the positive factors but dividing by a zero marginal
    is genuinely undefined and raises, naming the state.
    """
    n = len(p.schema)
    coeffs = truncation_coefficients(n, m)
    if m == n:
        return TruncationFamily(order=m, coefficients=coeffs, approximation=p, raw_z=1.0)

    shape = p.schema.cardinalities
    alive = np.ones(shape, dtype=bool)

    factors: list[tuple[int, np.ndarray]] = []
    for mask in range(1, 1 << n):
        k = bin(mask).count("1")
        if k not in coeffs:
            continue
        idxs = indices_of(mask)
        marg = marginal(p, idxs).table()
        expand = [slice(None) if i in idxs else np.newaxis for i in range(n)]
        factors.append((coeffs[k], marg[tuple(expand)]))

    # positive-exponent factors set the support
    for c, tab in factors:
        if c > 0:
            alive &= np.broadcast_to(tab, shape) > 0
    for c, tab in factors:
        if c < 0:
            zero_div = alive & (np.broadcast_to(tab, shape) == 0)
            if zero_div.any():
                state = p.schema.state_of(int(np.argmax(zero_div.reshape(-1))))
                raise UndefinedApproximationError(
                    f"order-{m} product divides by a zero marginal at state {state}", state
                )

    # direct products keep dyadic fractions exact where log-space would not
    numerator = np.ones(shape)
    denominator = np.ones(shape)
    for c, tab in factors:
        if c > 0:
            numerator = numerator * np.broadcast_to(tab, shape) ** c
        else:
            denominator = denominator * np.broadcast_to(tab, shape) ** (-c)
    weights = np.divide(
        numerator, denominator, out=np.zeros(shape), where=alive & (denominator > 0)
    )
    dist, z = normalize(p.schema, weights.reshape(-1))
    return TruncationFamily(order=m, coefficients=coeffs, approximation=dist, raw_z=z)


class TruncationDivergence(NamedTuple):
    """D(p || normalized order-m product) plus the unnormalized surrogate.

    ``surrogate`` is A_m - H(v) from p's own subset entropies; it differs
    from ``divergence`` by exactly log2(raw_z) whenever the product keeps
    p's support.
    """

    divergence: float
    surrogate: float
    raw_z: float


def truncation_divergence(p: JointDistribution, m: int, units: str = "bits") -> TruncationDivergence:
    """Divergence from p to its order-m approximation, both normalized and raw."""
    fam = truncated_approximation(p, m)
    div = kl_divergence(p, fam.approximation, units=units)
    report = expand_divergence(p, p, units=units)
    surrogate = report.cumulative(m) - report.true_entropy
    return TruncationDivergence(divergence=div, surrogate=surrogate, raw_z=fam.raw_z)


def convergence_profile(p: JointDistribution, units: str = "bits") -> tuple[tuple[int, float], ...]:
    """(m, divergence) for every order 1..n; the final entry is exactly zero."""
    n = len(p.schema)
    return tuple((m, truncation_divergence(p, m, units=units).divergence) for m in range(1, n + 1))


def truncation_distance(p: JointDistribution, m1: int, m2: int, units: str = "bits") -> float:
    """|A_m2 - A_m1| between two truncation orders of p's own expansion.

    Equals the absolute sum of the expansion degree terms strictly above m1
    and up to m2; for (1, 2) this is the total pairwise mutual information.
    """
    n = len(p.schema)
    if not 1 <= m1 < m2 <= n:
        raise DomainError(f"need 1 <= m1 < m2 <= {n}, got ({m1}, {m2})")
    report = expand_divergence(p, p, units=units)
    return abs(report.cumulative(m2) - report.cumulative(m1))


# ---------------------------------------------------------------------------
# recursion and truncation consequences
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DeltaReport:
    """Residuals tying the degree-3 partial sum to conditional interactions.

    ``a3_lhs`` is A_3 - sum of single-variable entropies and ``a3_rhs`` is
    minus the sum of conditional pairwise interactions I(Xi Xj | Xk) over all
    k and pairs excluding k, both evaluated with the distribution's own
    entropies.  ``recursion_gaps[i]`` checks the exact recursion
    I(v) = I(v minus i) - I(v minus i | Xi); ``truncation_residuals[i]`` is
    I(v minus i | Xi) - I(v minus i), which equals -I(v) identically.
    """

    units: str
    a3_lhs: float
    a3_rhs: float
    interaction_full: float
    recursion_gaps: tuple[float, ...]
    truncation_residuals: tuple[float, ...]

    @property
    def a3_residual(self) -> float:
        return self.a3_lhs - self.a3_rhs


def delta_relation(p: JointDistribution, units: str = "bits") -> DeltaReport:
    """Evaluate the degree-3 identity and the n one-variable-out residuals."""
    n = len(p.schema)
    if n < 3:
        raise DomainError("delta relations need at least three variables")

    report = expand_divergence(p, p, units=units)
    a3_lhs = report.cumulative(3) - sum(entropy(p, [i], units=units) for i in range(n))
    a3_rhs = 0.0
    for k in range(n):
        rest = [i for i in range(n) if i != k]
        for a_pos in range(len(rest)):
            for b_pos in range(a_pos + 1, len(rest)):
                a3_rhs -= conditional_interaction(p, [rest[a_pos], rest[b_pos]], k, units=units)

    full = interaction_information(p, units=units)
    gaps = []
    residuals = []
    for i in range(n):
        head = [j for j in range(n) if j != i]
        part = interaction_information(p, head, units=units)
        cond = conditional_interaction(p, head, i, units=units)
        gaps.append(full - (part - cond))
        residuals.append(cond - part)
    return DeltaReport(
        units=units,
        a3_lhs=a3_lhs,
        a3_rhs=a3_rhs,
        interaction_full=full,
        recursion_gaps=tuple(gaps),
        truncation_residuals=tuple(residuals),
    )
