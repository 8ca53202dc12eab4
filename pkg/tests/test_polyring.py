import random

import pytest

from cmatlas.polyring import (MixedRings, PolyRing, UnboundVariable,
                              ZeroDivisor, divide_exact, gcd_univariate,
                              poly_arith, radical_match,
                              specialize_polynomial, substitute)
from cmatlas.scalars import (FieldDescriptor, NoRootExists,
                             find_specialization, make_field, random_prime)

QUAD = FieldDescriptor(base="Q", transcendentals=("lam",),
                       extensions=(("eps", "T^2 - (1 + lam)"),))


@pytest.fixture(scope="module")
def ctx():
    return make_field(QUAD)


@pytest.fixture(scope="module")
def ring(ctx):
    return PolyRing(ctx, ("u", "v"))


def _random_poly(ring, rng, terms=4, degree=3):
    out = {}
    for _ in range(terms):
        exps = (rng.randint(0, degree), rng.randint(0, degree))
        coeff = ring.ctx.random_element(rng)
        if not coeff.is_zero():
            out[exps] = coeff
    return ring.polynomial(out)


def test_product_definition(ring):
    u, v = ring.var("u"), ring.var("v")
    lam = ring.from_scalar(ring.ctx.param_element())
    product = poly_arith(poly_arith(u - v, lam * v - u, "mul"), u * v, "mul")
    assert product == u * v * (u - v) * (lam * v - u)
    assert poly_arith(product, ring.zero(), "mul").is_zero()


def test_mixed_rings_rejected(ring, ctx):
    other = PolyRing(ctx, ("a", "b"))
    with pytest.raises(MixedRings):
        ring.var("u") + other.var("a")


def test_product_specialization_cross_check(ring, ctx):
    # Schwartz-Zippel style: the symbolic product maps onto the product of
    # the images under >= 20 random prime-field specializations
    u, v = ring.var("u"), ring.var("v")
    lam = ring.from_scalar(ctx.param_element())
    f = (u - v) * (u - lam * v) * u * v
    rng = random.Random(20)
    done = 0
    while done < 20:
        prime = random_prime(rng, 1000, 100000)
        try:
            spec = find_specialization(ctx, prime, rng, forbidden=(0, 1))
        except NoRootExists:
            continue
        target = PolyRing(spec.target, ("u", "v"))
        image = specialize_polynomial(f, spec, target)
        ut, vt = target.var("u"), target.var("v")
        lam_t = target.from_int(spec.param_value)
        assert image == (ut - vt) * (ut - lam_t * vt) * ut * vt
        done += 1


def test_substitute_blowup_chart(ring, ctx):
    # F = uv(u-v)(u-lam v) pulled through u -> xi v gives
    # xi(xi-1)(xi-lam) v^4 = (xi^3 - (1+lam) xi^2 + lam xi) v^4,
    # expanded by hand and frozen here
    u, v = ring.var("u"), ring.var("v")
    lam_s = ctx.param_element()
    lam = ring.from_scalar(lam_s)
    chart = PolyRing(ctx, ("xi", "v"))
    xi, vc = chart.var("xi"), chart.var("v")
    image = substitute(u * v * (u - v) * (u - lam * v),
                       {"u": xi * vc, "v": vc})
    frozen = chart.polynomial({
        (3, 4): ctx.one(),
        (2, 4): -(ctx.one() + lam_s),
        (1, 4): lam_s,
    })
    assert image == frozen


def test_substitute_simple_chart(ring, ctx):
    # u(u-v) at u -> xi v is xi(xi-1) v^2 = (xi^2 - xi) v^2
    u, v = ring.var("u"), ring.var("v")
    chart = PolyRing(ctx, ("xi", "v"))
    image = substitute(u * (u - v), {"u": chart.var("xi") * chart.var("v"),
                                     "v": chart.var("v")})
    frozen = chart.polynomial({(2, 2): ctx.one(), (1, 2): -ctx.one()})
    assert image == frozen


def test_substitute_identity(ring):
    u, v = ring.var("u"), ring.var("v")
    f = u ** 3 - v * u + ring.from_int(5)
    assert substitute(f, {"u": u, "v": v}) == f


def test_substitute_unbound(ring):
    with pytest.raises(UnboundVariable):
        substitute(ring.var("u") * ring.var("v"), {"u": ring.var("u")})


def test_substitute_homomorphism(ring, ctx):
    chart = PolyRing(ctx, ("xi", "v"))
    bindings = {"u": chart.var("xi") * chart.var("v"), "v": chart.var("v")}
    rng = random.Random(31)
    for _ in range(25):
        f = _random_poly(ring, rng)
        g = _random_poly(ring, rng)
        assert substitute(f * g, bindings) == \
            substitute(f, bindings) * substitute(g, bindings)
        assert substitute(f + g, bindings) == \
            substitute(f, bindings) + substitute(g, bindings)


def test_divide_exact_cases(ring):
    u, v = ring.var("u"), ring.var("v")
    assert divide_exact(u * v * (u - v) ** 2, u - v) == u * v * (u - v)
    assert divide_exact(u * v, u - v) is None
    with pytest.raises(ZeroDivisor):
        divide_exact(u, ring.zero())


def test_divide_exact_round_trip(ring):
    rng = random.Random(17)
    for _ in range(40):
        f = _random_poly(ring, rng)
        g = _random_poly(ring, rng)
        if g.is_zero():
            continue
        assert divide_exact(f * g, g) == f


def test_divide_exact_laurent(ctx):
    laurent = PolyRing(ctx, ("u", "v"), invertible=("v",))
    u, v = laurent.var("u"), laurent.var("v")
    assert divide_exact(u, v ** 2) == laurent.monomial((1, -2))
    assert divide_exact(u * v, u - v) is None  # must terminate
    assert divide_exact(u * v - v ** 2, u - v) == v


def test_radical_match_cases(ring):
    u, v = ring.var("u"), ring.var("v")
    result = radical_match(u * u * v, [u, v])
    assert result is not None
    multiplicities, cofactor = result
    assert multiplicities == [2, 1] and cofactor.is_one()
    assert radical_match(u * u * v + ring.one(), [u]) is None
    # missing factor leaves a non-unit cofactor
    assert radical_match(u * u * v, [u]) is None


def test_radical_match_reconstruction(ring, ctx):
    u, v = ring.var("u"), ring.var("v")
    lam = ring.from_scalar(ctx.param_element())
    factors = [u, v, u - v, u - lam * v]
    rng = random.Random(23)
    for _ in range(10):
        exponents = [rng.randint(1, 3) for _ in factors]
        scale = ring.from_int(rng.choice((1, -2, 3, 5)))
        f = scale
        for factor, e in zip(factors, exponents):
            f = f * factor ** e
        multiplicities, cofactor = radical_match(f, factors)
        assert multiplicities == exponents
        rebuilt = ring.from_scalar(cofactor)
        for factor, e in zip(factors, multiplicities):
            rebuilt = rebuilt * factor ** e
        assert rebuilt == f


def test_gcd_univariate(ctx):
    ring = PolyRing(ctx, ("xi",))
    xi = ring.var("xi")
    lam = ring.from_scalar(ctx.param_element())
    c = xi * (xi - ring.one()) * (lam - xi)
    assert gcd_univariate(c, c.derivative("xi")) == ring.one()
    monic_c = c * ring.from_scalar(ctx.inverse(ctx.from_int(-1)))
    assert gcd_univariate(c, ring.zero()) == monic_c
    assert gcd_univariate(xi ** 2, xi ** 3) == xi ** 2


def test_parse_print_round_trip(ring, ctx):
    rng = random.Random(29)
    laurent = PolyRing(ctx, ("u", "v"), invertible=("v",))
    samples = [ring.zero(), ring.one(), ring.parse("2*eps*u*v - (1+lam)*v^2"),
               laurent.parse("u*v^-2 - eps")]
    for _ in range(30):
        samples.append(_random_poly(ring, rng))
    for f in samples:
        assert f.ring.parse(str(f)) == f


def test_laurent_invariants(ctx):
    laurent = PolyRing(ctx, ("u", "v"), invertible=("v",))
    laurent.monomial((2, -3))  # fine: v is invertible
    with pytest.raises(Exception):
        laurent.monomial((-1, 0))  # u is not invertible
    unit = laurent.monomial((0, -2), ctx.from_int(3))
    assert unit.is_unit()
    assert unit * unit.unit_inverse() == laurent.one()
