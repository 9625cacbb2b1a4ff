"""Reference distances: closed forms vs numeric oracles, axioms, witnesses."""

import math

import numpy as np
import pytest
from scipy import integrate, stats

from infodist import (
    DiracRef,
    DistanceResult,
    DomainError,
    EmpiricalRef,
    GaussianParams,
    GaussianRef,
    InfiniteDivergence,
    JointDistribution,
    PoissonRef,
    Schema,
    SearchInterval,
    UndefinedDistanceError,
    UniformRef,
    dirac_distance,
    find_pseudometric_witness,
    gaussian_distance,
    independence_distance,
    independence_distance_sides,
    kl_divergence,
    metric_distance,
    poisson_distance,
    reference_distance,
    surprisal_coordinates,
    uniform,
    uniform_distance,
)

from conftest import make_xor, random_joint, random_product

BINARY = Schema((("X", 2),))


def quad_gaussian_oracle(ref, r, s):
    """Adaptive quadrature of the defining integral, in nats."""

    def integrand(x):
        return ref.density(x) * (r.log_density(x) - s.log_density(x))

    lo = ref.mu - 12.0 * ref.sigma
    hi = ref.mu + 12.0 * ref.sigma
    val, err = integrate.quad(integrand, lo, hi, epsabs=1e-12, epsrel=1e-12, limit=300)
    # the estimate scales with |val| through epsrel; keep it well under the
    # 1e-8 tolerance the comparisons use
    assert err < 5e-9
    return abs(val)


def poisson_series_oracle(lam_ref, l1, l2):
    """Direct inner sum over counts, truncated once the tail is negligible."""
    n = int(lam_ref + 20.0 * math.sqrt(lam_ref) + 50)
    xs = np.arange(n + 1)
    weights = stats.poisson.pmf(xs, lam_ref)
    assert stats.poisson.sf(n, lam_ref) < 1e-14
    diff = stats.poisson.logpmf(xs, l1) - stats.poisson.logpmf(xs, l2)
    return abs(float((weights * diff).sum()))


# ---------------------------------------------------------------------------
# closed forms against oracles
# ---------------------------------------------------------------------------


def test_gaussian_hand_value():
    d = gaussian_distance(GaussianParams(0, 1), GaussianParams(0, 1), GaussianParams(1, 1))
    assert d.value == pytest.approx(0.5, abs=1e-12)
    assert d.unit == "nats"


def test_gaussian_matches_quadrature():
    rng = np.random.default_rng(101)
    for _ in range(25):
        ref = GaussianParams(rng.uniform(-5, 5), rng.uniform(0.2, 5))
        r = GaussianParams(rng.uniform(-5, 5), rng.uniform(0.2, 5))
        s = GaussianParams(rng.uniform(-5, 5), rng.uniform(0.2, 5))
        assert gaussian_distance(ref, r, s).value == pytest.approx(
            quad_gaussian_oracle(ref, r, s), abs=1e-8
        )


def test_gaussian_ignores_reference_sigma_when_candidates_match():
    r = GaussianParams(-1.0, 1.5)
    s = GaussianParams(2.0, 1.5)
    want = abs((0.3 + 1) ** 2 - (0.3 - 2) ** 2) / (2 * 1.5**2)
    for sig in (0.5, 1.0, 4.0):
        assert gaussian_distance(GaussianParams(0.3, sig), r, s).value == pytest.approx(
            want, abs=1e-12
        )


def test_dirac_hand_value():
    d = dirac_distance(0.0, GaussianParams(1, 1), GaussianParams(2, 1))
    assert d.value == pytest.approx(1.5, abs=1e-12)
    assert d.unit == "nats"


def test_dirac_is_narrow_gaussian_limit():
    rng = np.random.default_rng(102)
    for _ in range(20):
        mu0 = rng.uniform(-4, 4)
        r = GaussianParams(rng.uniform(-4, 4), rng.uniform(0.3, 3))
        s = GaussianParams(rng.uniform(-4, 4), rng.uniform(0.3, 3))
        narrow = gaussian_distance(GaussianParams(mu0, 1e-4), r, s)
        assert dirac_distance(mu0, r, s).value == pytest.approx(narrow.value, abs=1e-6)


def test_poisson_hand_value():
    d = poisson_distance(1.0, 2.0, 3.0)
    assert d.value == pytest.approx(0.5945348918918356, abs=1e-12)
    assert d.unit == "nats"


@pytest.mark.parametrize("lam_ref", [0.3, 1.0, 4.5, 20.0])
def test_poisson_matches_series(lam_ref):
    rng = np.random.default_rng(103)
    for _ in range(10):
        l1 = rng.uniform(0.2, 15)
        l2 = rng.uniform(0.2, 15)
        assert poisson_distance(lam_ref, l1, l2).value == pytest.approx(
            poisson_series_oracle(lam_ref, l1, l2), abs=1e-10
        )


def test_poisson_asymptotics():
    rng = np.random.default_rng(104)
    for _ in range(10):
        l1 = rng.uniform(5, 8)
        l2 = l1 + rng.uniform(1, 2)
        small = poisson_distance(1e-4, l1, l2).value
        assert small == pytest.approx(abs(l1 - l2), rel=0.01)
        big = poisson_distance(1e4, l1, l2).value
        assert big == pytest.approx(1e4 * abs(math.log(l2 / l1)), rel=0.01)


def test_doubled_quadratic_variants_differ():
    ref = GaussianParams(0.5, 1.0)
    r = GaussianParams(1.0, 2.0)
    s = GaussianParams(-2.0, 0.7)
    assert gaussian_distance(ref, r, s).value != pytest.approx(
        gaussian_distance(ref, r, s, doubled_quadratic=True).value, abs=1e-6
    )
    assert dirac_distance(0.5, r, s).value != pytest.approx(
        dirac_distance(0.5, r, s, doubled_quadratic=True).value, abs=1e-6
    )


# ---------------------------------------------------------------------------
# pseudometric axioms on discrete tables
# ---------------------------------------------------------------------------


def _quadruple(seed):
    rng = np.random.default_rng(seed)
    cards = (2, 3)
    pref = random_joint(rng, cards, positive=True)
    return pref, tuple(random_joint(rng, cards, positive=True) for _ in range(3))


@pytest.mark.parametrize("seed", range(30))
def test_axioms_on_random_quadruples(seed):
    pref, (r, s, t) = _quadruple(seed)
    d_rs = reference_distance(pref, r, s)
    d_sr = reference_distance(pref, s, r)
    assert d_rs.value >= 0.0
    assert d_rs.value == d_sr.value  # exact, not approximate
    assert d_rs.signed_inner == -d_sr.signed_inner
    assert reference_distance(pref, r, r).value == 0.0
    d_rt = reference_distance(pref, r, t).value
    d_st = reference_distance(pref, s, t).value
    assert d_rt <= d_rs.value + d_st + 1e-12


@pytest.mark.parametrize("seed", range(10))
def test_defining_identity(seed):
    """The distance is the gap between the two divergences from the reference."""
    pref, (r, s, _) = _quadruple(seed)
    want = abs(kl_divergence(pref, s) - kl_divergence(pref, r))
    assert reference_distance(pref, r, s).value == pytest.approx(want, abs=1e-9)


def test_unit_conversion():
    pref, (r, s, _) = _quadruple(99)
    bits = reference_distance(pref, r, s, units="bits")
    nats = reference_distance(pref, r, s, units="nats")
    assert nats.value == pytest.approx(bits.value * math.log(2), abs=1e-12)
    converted = bits.to("nats")
    assert converted.value == pytest.approx(nats.value, abs=1e-12)
    assert converted.unit == "nats"
    assert bits.to("bits") == bits
    with pytest.raises(DomainError):
        bits.to("hartleys")


def test_uniform_swap_is_a_pseudometric_witness():
    r = JointDistribution(BINARY, [0.25, 0.75])
    s = JointDistribution(BINARY, [0.75, 0.25])
    assert r != s
    assert uniform_distance(r, s).value == 0.0


def test_uniform_distance_rejects_zeros():
    r = JointDistribution(BINARY, [1.0, 0.0])
    with pytest.raises(DomainError, match="positive"):
        uniform_distance(r, uniform(BINARY))


def test_infinite_one_sided_support_gap():
    schema = Schema((("X", 3),))
    pref = uniform(schema)
    r = JointDistribution(schema, [0.5, 0.5, 0.0])
    s = uniform(schema)
    d = reference_distance(pref, r, s)
    assert isinstance(d.value, InfiniteDivergence)
    assert math.isinf(d.value)
    assert d.offending_state == (2,)
    # swapping operands flips the sign of the infinity but not the value
    assert math.isinf(reference_distance(pref, s, r).value)


def test_undefined_when_both_sides_vanish():
    schema = Schema((("X", 3),))
    pref = uniform(schema)
    r = JointDistribution(schema, [0.5, 0.5, 0.0])
    s = JointDistribution(schema, [0.4, 0.6, 0.0])
    with pytest.raises(UndefinedDistanceError):
        reference_distance(pref, r, s)


def test_undefined_on_mixed_zeros():
    schema = Schema((("X", 3),))
    pref = uniform(schema)
    r = JointDistribution(schema, [0.5, 0.5, 0.0])
    s = JointDistribution(schema, [0.0, 0.5, 0.5])
    with pytest.raises(UndefinedDistanceError):
        reference_distance(pref, r, s)


def test_zero_reference_mass_masks_disagreements():
    """States the reference never weights cannot contribute."""
    schema = Schema((("X", 3),))
    pref = JointDistribution(schema, [0.5, 0.5, 0.0])
    r = JointDistribution(schema, [0.25, 0.25, 0.5])
    s = JointDistribution(schema, [0.25, 0.25, 0.5])
    shifted = JointDistribution(schema, [0.25, 0.25, 0.5])
    assert reference_distance(pref, r, s).value == 0.0
    assert reference_distance(pref, r, shifted).value == 0.0


# ---------------------------------------------------------------------------
# surprisal coordinates
# ---------------------------------------------------------------------------


def test_surprisal_coordinates_hand_value():
    coords = surprisal_coordinates(GaussianParams(1, 1), GaussianParams(2, 1), (0.0,))
    assert coords == pytest.approx((1.5,), abs=1e-12)


def test_surprisal_coordinates_match_point_distances():
    r = GaussianParams(0.4, 1.1)
    s = GaussianParams(-0.3, 2.2)
    points = (-1.0, 0.0, 2.5)
    coords = surprisal_coordinates(r, s, points)
    assert len(coords) == 3
    for x, c in zip(points, coords):
        assert abs(c) == pytest.approx(dirac_distance(x, r, s).value, abs=1e-12)


def test_surprisal_coordinates_zero_for_equal_params():
    g = GaussianParams(0.7, 1.3)
    assert surprisal_coordinates(g, g, (0.0, 1.0)) == (0.0, 0.0)


def test_surprisal_coordinates_need_points():
    with pytest.raises(DomainError):
        surprisal_coordinates(GaussianParams(0, 1), GaussianParams(1, 1), ())


# ---------------------------------------------------------------------------
# independence distance
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("seed", range(8))
def test_independence_distance_zero_for_products(seed):
    rng = np.random.default_rng(600 + seed)
    r = random_product(rng, (2, 3, 2))
    pref = random_joint(rng, (2, 3, 2), positive=True)
    for subset in ((0,), (1,), (2,), (0, 1), (0, 2)):
        assert independence_distance(pref, r, subset).value == pytest.approx(
            0.0, abs=1e-9
        )


@pytest.mark.parametrize("seed", range(8))
def test_independence_routes_agree(seed):
    rng = np.random.default_rng(700 + seed)
    r = random_joint(rng, (2, 2, 3), positive=True)
    pref = random_joint(rng, (2, 2, 3), positive=True)
    for subset in ((0,), (2,), (1, 2)):
        cond, prod = independence_distance_sides(pref, r, subset)
        assert cond == pytest.approx(prod, abs=1e-9)


def test_independence_distance_xor_under_uniform_reference():
    xor = make_xor()
    pref = uniform(xor.schema)
    d = independence_distance(pref, xor, (2,))
    assert isinstance(d.value, InfiniteDivergence)
    assert d.offending_state is not None
    assert xor.prob(d.offending_state) == 0.0


def test_independence_distance_xor_self_reference():
    """On its own support the parity constraint costs exactly one bit."""
    xor = make_xor()
    d = independence_distance(xor, xor, (2,))
    assert d.value == pytest.approx(1.0, abs=1e-12)


def test_independence_subset_validation():
    r = random_joint(np.random.default_rng(0), (2, 2), positive=True)
    with pytest.raises(DomainError):
        independence_distance(r, r, ())
    with pytest.raises(DomainError):
        independence_distance(r, r, (0, 1))


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------


def test_metric_distance_dispatch():
    r2 = random_joint(np.random.default_rng(1), (2, 2), positive=True)
    s2 = random_joint(np.random.default_rng(2), (2, 2), positive=True)
    assert metric_distance(UniformRef(), r2, s2).value == uniform_distance(r2, s2).value
    assert (
        metric_distance(EmpiricalRef(r2), r2, s2).value
        == reference_distance(r2, r2, s2).value
    )
    g = metric_distance(GaussianRef(0, 1), GaussianParams(0, 1), GaussianParams(1, 1))
    assert g.unit == "nats"
    assert metric_distance(DiracRef(0.0), GaussianParams(1, 1), GaussianParams(2, 1)).value == pytest.approx(1.5)
    assert metric_distance(PoissonRef(1.0), 2.0, 3.0).value == pytest.approx(
        0.5945348918918356
    )


def test_reference_validation():
    with pytest.raises(DomainError):
        GaussianParams(0.0, 0.0)
    with pytest.raises(DomainError):
        GaussianRef(0.0, -1.0)
    with pytest.raises(DomainError):
        PoissonRef(0.0)
    with pytest.raises(DomainError):
        poisson_distance(1.0, -2.0, 3.0)


# ---------------------------------------------------------------------------
# witness search
# ---------------------------------------------------------------------------


def test_witness_poisson_unit_rate():
    w = find_pseudometric_witness(PoissonRef(1.0), SearchInterval(0.25, 4.0))
    assert w is not None
    t1, t2 = w.params
    assert t1 < 1.0 < t2
    assert abs(t1 - t2) >= 1e-3
    assert w.distance < 1e-8
    assert poisson_distance(1.0, t1, t2).value < 1e-8


def test_witness_poisson_monotone_region_finds_none():
    assert find_pseudometric_witness(PoissonRef(0.01), SearchInterval(2.0, 5.0)) is None


def test_witness_uniform_swap_pair():
    w = find_pseudometric_witness(UniformRef(), SearchInterval(0.1, 0.9))
    assert w is not None
    t1, t2 = w.params
    assert t1 + t2 == pytest.approx(1.0, abs=1e-6)
    assert w.distance < 1e-8


def test_witness_gaussian_mirror_pair():
    w = find_pseudometric_witness(GaussianRef(0.5, 1.0), SearchInterval(-2.0, 3.0))
    assert w is not None
    t1, t2 = w.params
    assert t1 + t2 == pytest.approx(1.0, abs=1e-6)
    assert gaussian_distance(
        GaussianParams(0.5, 1.0), GaussianParams(t1, 1.0), GaussianParams(t2, 1.0)
    ).value < 1e-8


def test_witness_dirac_mirror_pair():
    w = find_pseudometric_witness(DiracRef(0.0), SearchInterval(-2.0, 2.0))
    assert w is not None
    t1, t2 = w.params
    assert t1 + t2 == pytest.approx(0.0, abs=1e-6)


def test_witness_empirical_binary():
    ref = JointDistribution(BINARY, [0.3, 0.7])
    w = find_pseudometric_witness(EmpiricalRef(ref), SearchInterval(0.05, 0.95))
    assert w is not None
    t1, t2 = w.params
    assert t1 < 0.3 < t2
    assert reference_distance(
        ref, JointDistribution(BINARY, [t1, 1 - t1]), JointDistribution(BINARY, [t2, 1 - t2])
    ).value < 1e-8


def test_witness_search_is_deterministic():
    a = find_pseudometric_witness(PoissonRef(1.0), SearchInterval(0.25, 4.0))
    b = find_pseudometric_witness(PoissonRef(1.0), SearchInterval(0.25, 4.0))
    assert a == b


def test_witness_validation():
    with pytest.raises(DomainError):
        SearchInterval(2.0, 2.0)
    with pytest.raises(DomainError):
        find_pseudometric_witness(PoissonRef(1.0), SearchInterval(0.5, 2.0), budget=4)
    three_state = uniform(Schema((("X", 3),)))
    with pytest.raises(DomainError):
        find_pseudometric_witness(EmpiricalRef(three_state), SearchInterval(0.1, 0.9))


def test_distance_result_consistency():
    with pytest.raises(DomainError):
        DistanceResult(value=1.0, signed_inner=-2.0, unit="bits", reference="x")
