"""Reference-function distances between probability distributions.

A fixed reference distribution P turns the divergence difference

    dist(R, S) = |D(P||R) - D(P||S)| = |sum_s P(s) log(R(s)/S(s))|

into a symmetric, triangle-obeying distance between R and S.  Whether it is
a true metric or only a pseudometric (distinct points at distance zero)
depends on the reference and the function space; this module provides the
discrete form, closed forms for Gaussian, Dirac-point and Poisson families,
an independence distance, and a deterministic pseudometric witness search.

Discrete distances default to bits; the analytic closed forms are stated in
nats and carry their unit tag, with conversion always explicit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .distribution import JointDistribution, Schema, conditional, marginal, same_schema
from .errors import DomainError, UndefinedDistanceError
from .expansion import InfiniteDivergence
from .lattice import _units_factor

LOG2 = math.log(2.0)


@dataclass(frozen=True)
class DistanceResult:
    """Distance value together with its pre-absolute-value inner sum.

    ``value`` is ``abs(signed_inner)`` always, infinity included.  The unit
    tag is "bits" for discrete references and "nats" for the analytic closed
    forms; ``to()`` converts explicitly.
    """

    value: float
    signed_inner: float
    unit: str
    reference: str
    offending_state: tuple[int, ...] | None = None

    def __post_init__(self):
        if not math.isnan(self.value) and abs(self.signed_inner) != self.value:
            raise DomainError("value must be the absolute signed inner sum")

    def to(self, unit: str) -> "DistanceResult":
        if unit == self.unit:
            return self
        if {unit, self.unit} != {"bits", "nats"}:
            raise DomainError(f"cannot convert {self.unit!r} to {unit!r}")
        factor = LOG2 if self.unit == "bits" else 1.0 / LOG2
        return DistanceResult(
            value=self.value * factor,
            signed_inner=self.signed_inner * factor,
            unit=unit,
            reference=self.reference,
            offending_state=self.offending_state,
        )


# ---------------------------------------------------------------------------
# reference descriptions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GaussianParams:
    """Mean and standard deviation of a univariate Gaussian."""

    mu: float
    sigma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise DomainError(f"standard deviation must be positive, got {self.sigma}")

    def log_density(self, x: float) -> float:
        z = (x - self.mu) / self.sigma
        return -0.5 * z * z - math.log(self.sigma) - 0.5 * math.log(2.0 * math.pi)

    def density(self, x: float) -> float:
        return math.exp(self.log_density(x))


class ReferenceSpec:
    """Marker base for the reference-function variants below."""

    def describe(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class EmpiricalRef(ReferenceSpec):
    dist: JointDistribution

    def describe(self) -> str:
        return f"empirical reference over {list(self.dist.schema.names)}"


@dataclass(frozen=True)
class UniformRef(ReferenceSpec):
    def describe(self) -> str:
        return "uniform discrete reference"


@dataclass(frozen=True)
class GaussianRef(ReferenceSpec):
    mu: float
    sigma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise DomainError(f"reference sigma must be positive, got {self.sigma}")

    def describe(self) -> str:
        return f"gaussian reference (mu={self.mu}, sigma={self.sigma})"


@dataclass(frozen=True)
class DiracRef(ReferenceSpec):
    mu: float

    def describe(self) -> str:
        return f"point reference at {self.mu}"


@dataclass(frozen=True)
class PoissonRef(ReferenceSpec):
    lam: float

    def __post_init__(self):
        if not self.lam > 0:
            raise DomainError(f"reference rate must be positive, got {self.lam}")

    def describe(self) -> str:
        return f"poisson reference (lambda={self.lam})"


# ---------------------------------------------------------------------------
# discrete distances
# ---------------------------------------------------------------------------


def _log_ratio_sum(
    pref: JointDistribution,
    r: JointDistribution,
    s: JointDistribution,
    units: str,
    reference: str,
) -> DistanceResult:
    """Inner sum of pref-weighted log ratios with support bookkeeping.

    Computes sum pref * (log r - log s) as a difference of separate log
    arrays so swapping r and s negates the inner sum bit-for-bit, keeping
    the distance exactly symmetric.
    """
    live = pref.probs > 0
    r_zero = live & (r.probs == 0)
    s_zero = live & (s.probs == 0)
    both = r_zero & s_zero
    if both.any():
        state = pref.schema.state_of(int(np.argmax(both)))
        raise UndefinedDistanceError(
            f"log ratio is 0/0 at state {state} inside the reference support", state
        )
    if r_zero.any() and s_zero.any():
        state = pref.schema.state_of(int(np.argmax(r_zero)))
        raise UndefinedDistanceError(
            f"both infinities appear in the inner sum (first zero of r at state {state})",
            state,
        )
    if r_zero.any() or s_zero.any():
        bad = r_zero if r_zero.any() else s_zero
        state = pref.schema.state_of(int(np.argmax(bad)))
        inner = -math.inf if r_zero.any() else math.inf
        return DistanceResult(
            value=InfiniteDivergence(state),
            signed_inner=inner,
            unit=units,
            reference=reference,
            offending_state=state,
        )
    with np.errstate(divide="ignore"):
        diff = np.log(r.probs[live]) - np.log(s.probs[live])
    inner = float((pref.probs[live] * diff).sum() / _units_factor(units))
    return DistanceResult(value=abs(inner), signed_inner=inner, unit=units, reference=reference)


def reference_distance(
    pref: JointDistribution,
    r: JointDistribution,
    s: JointDistribution,
    units: str = "bits",
) -> DistanceResult:
    """|sum pref log(r/s)|: the divergence-difference distance under pref.

    Symmetric in (r, s) bit-for-bit and zero when the tables coincide.  A
    single-sided support violation yields an infinite result carrying the
    state; zeros in both r and s on pref's support are undefined and raise.
    """
    same_schema(pref, r)
    same_schema(pref, s)
    return _log_ratio_sum(pref, r, s, units, f"empirical reference over {list(pref.schema.names)}")


def uniform_distance(
    r: JointDistribution, s: JointDistribution, units: str = "bits"
) -> DistanceResult:
    """(1/N)|sum over all states of log(r/s)| with N the state count.

    The uniform reference weights every state, so any zero entry in either
    argument leaves the sum undefined and is rejected outright.
    """
    same_schema(r, s)
    if (r.probs == 0).any() or (s.probs == 0).any():
        which = r if (r.probs == 0).any() else s
        state = r.schema.state_of(int(np.argmax(which.probs == 0)))
        raise DomainError(
            f"uniform-reference distance needs strictly positive tables; zero at state {state}"
        )
    n = r.schema.n_states
    inner = float((np.log(r.probs) - np.log(s.probs)).sum() / (n * _units_factor(units)))
    return DistanceResult(
        value=abs(inner), signed_inner=inner, unit=units, reference="uniform discrete reference"
    )


def independence_distance_sides(
    pref: JointDistribution, r: JointDistribution, subset: Iterable[int], units: str = "bits"
) -> tuple[float, float]:
    """Both routes to the independence distance of a subset against its rest.

    Route one compares the subset marginal with the subset-given-rest
    conditional; route two compares the marginal product with the full
    joint.  The two inner sums are equal pointwise in exact arithmetic.
    Either may be infinite (one-sided zero of the full joint inside pref's
    support); undefined conditionals raise.
    """
    schema = r.schema
    same_schema(pref, r)
    idx_a = tuple(sorted(set(int(i) for i in subset)))
    if not idx_a or len(idx_a) >= len(schema):
        raise DomainError("subset must be non-empty and proper")
    idx_b = tuple(i for i in range(len(schema)) if i not in idx_a)

    marg_a = marginal(r, idx_a)
    marg_b = marginal(r, idx_b)
    cond = conditional(r, idx_a, idx_b)
    factor = _units_factor(units)

    side_cond = 0.0
    side_prod = 0.0
    inf_sign = 0
    for idx in range(schema.n_states):
        w = float(pref.probs[idx])
        if w == 0.0:
            continue
        state = schema.state_of(idx)
        s_a = tuple(state[i] for i in idx_a)
        s_b = tuple(state[i] for i in idx_b)
        pa = marg_a.prob(s_a)
        pb = marg_b.prob(s_b)
        if pb == 0.0:
            raise UndefinedDistanceError(
                f"conditional undefined at state {state}: rest-marginal is zero", state
            )
        if pa == 0.0:
            raise UndefinedDistanceError(
                f"log ratio undefined at state {state}: subset marginal is zero", state
            )
        ca = cond.prob(s_a, s_b)
        full = float(r.probs[idx])
        if ca == 0.0 or full == 0.0:
            inf_sign = 1
            continue
        side_cond += w * (math.log(pa) - math.log(ca)) / factor
        side_prod += w * (math.log(pa * pb) - math.log(full)) / factor
    if inf_sign:
        return (math.inf, math.inf)
    return (side_cond, side_prod)


def independence_distance(
    pref: JointDistribution,
    r: JointDistribution,
    subset: Iterable[int],
    units: str = "bits",
    check_tol: float = 1e-9,
) -> DistanceResult:
    """Distance between a subset's marginal and its conditional on the rest.

    Computes both equivalent routes, insists they agree within ``check_tol``
    and returns the common value.  Zero whenever the subset is independent
    of its complement under r, for every reference.
    """
    idx_a = tuple(sorted(set(int(i) for i in subset)))
    side_cond, side_prod = independence_distance_sides(pref, r, idx_a, units=units)
    ref_desc = f"independence of variables {list(idx_a)} under empirical reference"
    if math.isinf(side_cond) or math.isinf(side_prod):
        # both routes blow up on the same pointwise zeros
        bad = (pref.probs > 0) & (r.probs == 0)
        state = r.schema.state_of(int(np.argmax(bad)))
        return DistanceResult(
            value=InfiniteDivergence(state),
            signed_inner=math.inf,
            unit=units,
            reference=ref_desc,
            offending_state=state,
        )
    if abs(side_cond - side_prod) > check_tol:
        raise DomainError(
            f"independence-distance routes disagree: {side_cond} vs {side_prod}"
        )
    return DistanceResult(
        value=abs(side_prod), signed_inner=side_prod, unit=units, reference=ref_desc
    )


# ---------------------------------------------------------------------------
# analytic closed forms (nats)
# ---------------------------------------------------------------------------


def gaussian_distance(
    ref: GaussianParams, r: GaussianParams, s: GaussianParams, doubled_quadratic: bool = False
) -> DistanceResult:
    """Distance between two Gaussians under a Gaussian reference, in nats.

    The default is the evaluation of the defining integral
    int P log(R/S) dx in closed form:

        log(s2/s1) - (s^2 + (m-m1)^2)/(2 s1^2) + (s^2 + (m-m2)^2)/(2 s2^2)

    With equal candidate sigmas the reference sigma drops out and only the
    means matter.  ``doubled_quadratic`` switches to an alternate form that
    doubles the squared-mean terms; it does not match the defining integral
    and is kept for cross-checking other implementations only.
    """
    inner = math.log(s.sigma / r.sigma)
    if doubled_quadratic:
        inner -= (ref.sigma**2 / 2.0) * (1.0 / r.sigma**2 - 1.0 / s.sigma**2)
        inner -= (ref.mu - r.mu) ** 2 / r.sigma**2
        inner += (ref.mu - s.mu) ** 2 / s.sigma**2
    else:
        inner -= (ref.sigma**2 + (ref.mu - r.mu) ** 2) / (2.0 * r.sigma**2)
        inner += (ref.sigma**2 + (ref.mu - s.mu) ** 2) / (2.0 * s.sigma**2)
    return DistanceResult(
        value=abs(inner),
        signed_inner=inner,
        unit="nats",
        reference=f"gaussian reference (mu={ref.mu}, sigma={ref.sigma})",
    )


def dirac_distance(
    mu_ref: float, r: GaussianParams, s: GaussianParams, doubled_quadratic: bool = False
) -> DistanceResult:
    """Distance from a single-point reference: log(r/s) evaluated at mu_ref.

    Equals the vanishing-sigma limit of :func:`gaussian_distance`.  The
    ``doubled_quadratic`` variant again doubles the squared terms and is
    kept for cross-checking only.
    """
    if doubled_quadratic:
        inner = (
            (mu_ref - r.mu) ** 2 / r.sigma**2
            - (mu_ref - s.mu) ** 2 / s.sigma**2
            - math.log(s.sigma / r.sigma)
        )
    else:
        inner = (
            math.log(s.sigma / r.sigma)
            - (mu_ref - r.mu) ** 2 / (2.0 * r.sigma**2)
            + (mu_ref - s.mu) ** 2 / (2.0 * s.sigma**2)
        )
    return DistanceResult(
        value=abs(inner),
        signed_inner=inner,
        unit="nats",
        reference=f"point reference at {mu_ref}",
    )


def surprisal_coordinates(
    r: GaussianParams, s: GaussianParams, points: Sequence[float]
) -> tuple[float, ...]:
    """log(r(x)/s(x)) at each point, in nats.

    Each coordinate is the signed single-point comparison; its absolute
    value is the corresponding point-reference distance, and several points
    together embed the pair into a finite-dimensional comparison space.
    """
    if len(points) == 0:
        raise DomainError("need at least one evaluation point")
    return tuple(r.log_density(float(x)) - s.log_density(float(x)) for x in points)


def poisson_distance(lambda_ref: float, l1: float, l2: float) -> DistanceResult:
    """|(l1 - lam log l1) - (l2 - lam log l2)| in nats, for Poisson rates.

    This is the full inner sum over counts in closed form.  Zero exactly
    when the two rates share the value of f(x) = x - lam log x, which for a
    reference rate of one pairs rates on either side of one (a pseudometric
    there); far below both rates it approaches |l1 - l2| and far above it
    approaches lam |log(l2/l1)|.
    """
    for name, val in (("lambda_ref", lambda_ref), ("l1", l1), ("l2", l2)):
        if not val > 0:
            raise DomainError(f"{name} must be positive, got {val}")
    inner = (l1 - lambda_ref * math.log(l1)) - (l2 - lambda_ref * math.log(l2))
    return DistanceResult(
        value=abs(inner),
        signed_inner=inner,
        unit="nats",
        reference=f"poisson reference (lambda={lambda_ref})",
    )


def metric_distance(spec: ReferenceSpec, r, s, units: str = "bits") -> DistanceResult:
    """Dispatch a distance computation on the reference kind.

    Operand types follow the reference: joint distributions for empirical
    and uniform references, :class:`GaussianParams` for gaussian and point
    references, positive rates for the poisson reference.  ``units`` applies
    to the discrete kinds only; analytic kinds always report nats.
    """
    if isinstance(spec, EmpiricalRef):
        return reference_distance(spec.dist, r, s, units=units)
    if isinstance(spec, UniformRef):
        return uniform_distance(r, s, units=units)
    if isinstance(spec, GaussianRef):
        return gaussian_distance(GaussianParams(spec.mu, spec.sigma), r, s)
    if isinstance(spec, DiracRef):
        return dirac_distance(spec.mu, r, s)
    if isinstance(spec, PoissonRef):
        return poisson_distance(spec.lam, float(r), float(s))
    raise DomainError(f"unknown reference spec {spec!r}")


# ---------------------------------------------------------------------------
# pseudometric witness search
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SearchInterval:
    """Closed parameter interval scanned by the witness search."""

    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise DomainError(f"empty search interval [{self.lo}, {self.hi}]")


@dataclass(frozen=True)
class PseudometricWitness:
    """Two distinct parameters whose family members sit at distance ~ 0."""

    params: tuple[float, float]
    distance: float
    unit: str
    description: str


def _witness_family(
    spec: ReferenceSpec,
) -> tuple[Callable[[float], float], Callable[[float, float], DistanceResult], str]:
    """Potential function and verifier for a one-parameter candidate family.

    Every supported family has distance(t1, t2) = |phi(t1) - phi(t2)| for a
    scalar potential phi, which reduces the witness hunt to finding two
    parameters at equal potential.
    """
    if isinstance(spec, PoissonRef):
        lam = spec.lam

        def phi(t: float) -> float:
            return t - lam * math.log(t)

        def verify(t1: float, t2: float) -> DistanceResult:
            return poisson_distance(lam, t1, t2)

        return phi, verify, f"poisson rates under lambda={lam}"

    if isinstance(spec, UniformRef):
        schema = Schema((("X", 2),))

        def phi(t: float) -> float:
            return 0.5 * (math.log(t) + math.log(1.0 - t)) / LOG2

        def verify(t1: float, t2: float) -> DistanceResult:
            return uniform_distance(
                JointDistribution(schema, [t1, 1.0 - t1]),
                JointDistribution(schema, [t2, 1.0 - t2]),
            )

        return phi, verify, "binary distributions (p, 1-p) under the uniform reference"

    if isinstance(spec, EmpiricalRef):
        ref = spec.dist
        if ref.schema.n_states != 2:
            raise DomainError("empirical witness search works on a binary reference")
        a = float(ref.probs[0])

        def phi(t: float) -> float:
            return (a * math.log(t) + (1.0 - a) * math.log(1.0 - t)) / LOG2

        def verify(t1: float, t2: float) -> DistanceResult:
            return reference_distance(
                ref,
                JointDistribution(ref.schema, [t1, 1.0 - t1]),
                JointDistribution(ref.schema, [t2, 1.0 - t2]),
            )

        return phi, verify, "binary distributions (p, 1-p) under an empirical reference"

    if isinstance(spec, (GaussianRef, DiracRef)):
        mu = spec.mu
        sigma0 = spec.sigma if isinstance(spec, GaussianRef) else 0.0

        def phi(t: float) -> float:
            return -((sigma0**2 + (mu - t) ** 2) / 2.0)

        def verify(t1: float, t2: float) -> DistanceResult:
            r = GaussianParams(t1, 1.0)
            s = GaussianParams(t2, 1.0)
            if isinstance(spec, GaussianRef):
                return gaussian_distance(GaussianParams(mu, sigma0), r, s)
            return dirac_distance(mu, r, s)

        return phi, verify, "unit-sigma gaussians indexed by mean"

    raise DomainError(f"no witness family defined for {spec!r}")


def find_pseudometric_witness(
    spec: ReferenceSpec,
    domain: SearchInterval,
    budget: int = 256,
    tol: float = 1e-10,
    min_separation: float = 1e-3,
) -> PseudometricWitness | None:
    """Deterministic hunt for two distinct family members at distance zero.

    Scans a fixed grid of ``budget`` parameters, pairs up grid points at
    nearly equal potential, sharpens each candidate by bisection and checks
    the actual distance.  Returns the first verified witness in parameter
    order, or None; a None is "none found at this budget", not a proof of
    metricity.
    """
    if budget < 8:
        raise DomainError("witness search needs a budget of at least 8 grid points")
    phi, verify, desc = _witness_family(spec)
    grid = np.linspace(domain.lo, domain.hi, budget)
    pot = np.array([phi(float(t)) for t in grid])
    spread = float(pot.max() - pot.min())
    coarse = max(spread * 2.0 / budget, 1e-12)
    step = (domain.hi - domain.lo) / (budget - 1)

    candidates: list[tuple[float, float]] = []
    order = np.argsort(pot, kind="stable")
    for a, b in zip(order[:-1], order[1:]):
        i, j = (int(a), int(b)) if grid[a] < grid[b] else (int(b), int(a))
        if grid[j] - grid[i] < min_separation:
            continue
        if abs(pot[j] - pot[i]) <= coarse:
            candidates.append((float(grid[i]), float(grid[j])))
    candidates.sort()

    for t1, guess in candidates:
        target = phi(t1)
        lo = max(domain.lo, guess - step)
        hi = min(domain.hi, guess + step)
        f_lo = phi(lo) - target
        f_hi = phi(hi) - target
        if f_lo == 0.0:
            t2 = lo
        elif f_hi == 0.0:
            t2 = hi
        elif f_lo * f_hi > 0:
            continue
        else:
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                f_mid = phi(mid) - target
                if f_mid == 0.0:
                    break
                if f_lo * f_mid < 0:
                    hi, f_hi = mid, f_mid
                else:
                    lo, f_lo = mid, f_mid
            t2 = 0.5 * (lo + hi)
        if abs(t2 - t1) < min_separation:
            continue
        result = verify(t1, t2)
        if result.value < tol:
            return PseudometricWitness(
                params=(t1, t2), distance=result.value, unit=result.unit, description=desc
            )
    return None
