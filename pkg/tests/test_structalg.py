import json
import pathlib
import random

import pytest

from cmatlas import structalg
from cmatlas.polyring import PolyRing, radical_match
from cmatlas.scalars import (FieldDescriptor, NoRootExists,
                             find_specialization, make_field, random_prime)
from cmatlas.structalg import (CharDividesDegree, NotAnIdeal, ParseError,
                               build_example_algebra, matrix_units_algebra,
                               quotient_by_generators, ramification_witness,
                               reduced_trace, specialize_algebra,
                               trace_form_discriminant, verify_identity)

DATA = pathlib.Path(__file__).parent / "data"


# -- table entries -----------------------------------------------------------

def test_quaternion_table_entries(ex1_algebra):
    alg = ex1_algebra
    ring = alg.ring
    u, v = ring.var("u"), ring.var("v")
    eps = ring.from_scalar(ring.ctx.gen("eps"))
    x, y, z = alg.gen("x"), alg.gen("y"), alg.gen("z")
    assert (x * y) == z
    assert (y * x) == alg.scalar(2 * eps * u * v) - z
    assert (z * z) == alg.scalar(2 * eps * u * v) * z \
        - alg.scalar(u * v * (u * u + ring.parse("lam") * v * v))
    assert (x * x) == alg.scalar(v)


def test_cubic_table_entries(ex2_algebra):
    alg = ex2_algebra
    assert verify_identity(alg, "y*x", "zeta^2*x*y")
    assert verify_identity(alg, "x*x*x", "v")


def test_multiply_bilinear(ex1_algebra):
    alg = ex1_algebra
    a = alg.one()
    rng = random.Random(1)
    coords = tuple(alg.ring.from_int(rng.randint(-3, 3))
                   for _ in range(alg.dimension))
    b = alg.element(coords)
    assert a * b == b and b * a == b
    # cross terms collapse to the displayed anticommutator
    assert verify_identity(alg, "(x+y)*(x+y)",
                           "v + u*(u^2+lam*v^2) + 2*eps*u*v")


def test_mixed_algebras(ex1_algebra, ex2_algebra):
    with pytest.raises(structalg.MixedAlgebras):
        ex1_algebra.multiply(ex1_algebra.gen("x"), ex2_algebra.gen("x"))


# -- associativity ------------------------------------------------------------

def test_associativity_both_examples(ex1_algebra, ex2_algebra):
    assert ex1_algebra.check_associativity()
    assert ex2_algebra.check_associativity()


def test_single_mutation_breaks_something(ex1_algebra):
    alg = ex1_algebra
    one = alg.ring.one()
    rng = random.Random(99)
    identities = [("z*z", "2*eps*u*v*z - u*v*(u^2+lam*v^2)"),
                  ("x*y + y*x", "2*eps*u*v"),
                  ("x*x", "v"),
                  ("y*y", "u*(u^2+lam*v^2)"),
                  ("(z-eps*u*v)^2", "u*v*(u-v)*(lam*v-u)")]
    n = alg.dimension
    for _ in range(10):
        i, j, k = (rng.randrange(n) for _ in range(3))
        if i == alg.unit_index or j == alg.unit_index:
            continue
        mutant = alg.mutate(i, j, k, one)
        broken = (not mutant.check_associativity()
                  or any(not verify_identity(mutant, lhs, rhs)
                         for lhs, rhs in identities))
        assert broken, (i, j, k)


def test_sign_flip_mutation(ex1_algebra):
    # flipping the constant term of z*z breaks the displayed relation
    alg = ex1_algebra
    k = alg._index["z"]
    constant = alg.table[k][k][alg.unit_index]
    mutant = alg.mutate(k, k, alg.unit_index, -2 * constant)
    assert not (mutant.check_associativity()
                and verify_identity(mutant, "z*z",
                                    "2*eps*u*v*z - u*v*(u^2+lam*v^2)"))


def test_associativity_under_specializations(ex1_algebra, ex2_algebra):
    rng = random.Random(4)
    for alg in (ex1_algebra, ex2_algebra):
        done = 0
        while done < 5:
            prime = random_prime(rng, 1000, 100000)
            try:
                spec = find_specialization(alg.ring.ctx, prime, rng,
                                           forbidden=(0, 1))
            except NoRootExists:
                continue
            assert specialize_algebra(alg, spec).check_associativity()
            done += 1


# -- identities ---------------------------------------------------------------

def test_displayed_identity_chain(ex1_algebra):
    alg = ex1_algebra
    assert verify_identity(alg, "(z-eps*u*v)^2",
                           "z^2 - 2*eps*u*v*z + (1+lam)*u^2*v^2")
    assert verify_identity(alg, "z^2 - 2*eps*u*v*z + (1+lam)*u^2*v^2",
                           "-u*v*(u^2+lam*v^2) + (1+lam)*u^2*v^2")
    assert verify_identity(alg, "(z-eps*u*v)^2", "u*v*(u-v)*(lam*v-u)")


def test_cubic_commutation_chain(ex2_algebra):
    alg = ex2_algebra
    assert verify_identity(alg, "(x*y)^3", "x^3*y^3")
    assert verify_identity(alg, "x^3*y^3", "u*v*(u-v)")


def test_parse_error(ex1_algebra):
    with pytest.raises(ParseError):
        verify_identity(ex1_algebra, "x*)", "v")
    with pytest.raises(ParseError):
        verify_identity(ex1_algebra, "nosuch", "v")


# -- reduced trace and discriminant -------------------------------------------

def test_reduced_trace_values(ex1_algebra):
    alg = ex1_algebra
    ring = alg.ring
    u, v = ring.var("u"), ring.var("v")
    eps = ring.from_scalar(ring.ctx.gen("eps"))
    assert reduced_trace(alg.gen("z")) == 2 * eps * u * v
    assert reduced_trace(alg.one()) == ring.from_int(2)
    assert reduced_trace(alg.gen("x")).is_zero()
    assert reduced_trace(alg.gen("y")).is_zero()


def test_reduced_trace_symmetry(ex1_algebra, ex2_algebra):
    rng = random.Random(6)
    for alg in (ex1_algebra, ex2_algebra):
        for _ in range(10):
            a = alg.element([alg.ring.from_int(rng.randint(-2, 2))
                             for _ in range(alg.dimension)])
            b = alg.element([alg.ring.from_int(rng.randint(-2, 2))
                             for _ in range(alg.dimension)])
            assert reduced_trace(a * b) == reduced_trace(b * a)
            assert reduced_trace(a + b) == reduced_trace(a) + reduced_trace(b)


def test_reduced_trace_char_guard():
    ctx = make_field(FieldDescriptor(base=2))
    ring = PolyRing(ctx, ("u", "v"))
    alg = matrix_units_algebra(ring, 2)
    with pytest.raises(CharDividesDegree):
        reduced_trace(alg.one())


def test_quaternion_discriminant_frozen(ex1_algebra):
    # hand computation: the Gram matrix splits into two 2x2 blocks with
    # determinants -4uv(u-v)(u-lam v) and +4uv(u-v)(u-lam v), so the
    # discriminant is -16 (uv(u-v)(u-lam v))^2
    alg = ex1_algebra
    ring = alg.ring
    u, v = ring.var("u"), ring.var("v")
    lam = ring.parse("lam")
    disc = trace_form_discriminant(alg)
    product = u * v * (u - v) * (u - lam * v)
    assert disc == ring.from_int(-16) * product * product
    multiplicities, cofactor = radical_match(disc, [u, v, u - v, u - lam * v])
    assert multiplicities == [2, 2, 2, 2]
    assert cofactor == ring.ctx.from_int(-16)


def test_cubic_discriminant_frozen(ex2_algebra):
    # hand computation: the Gram matrix pairs opposite monomial classes, so
    # the determinant is a unit times 3^9 (uv(u-v))^6
    alg = ex2_algebra
    ring = alg.ring
    u, v = ring.var("u"), ring.var("v")
    disc = trace_form_discriminant(alg)
    result = radical_match(disc, [u, v, u - v])
    assert result is not None
    multiplicities, cofactor = result
    assert multiplicities == [6, 6, 6]
    assert cofactor == ring.ctx.from_int(3 ** 9)


def test_split_matrix_algebra_unit_discriminant(ex1_algebra):
    alg = matrix_units_algebra(ex1_algebra.ring, 2)
    disc = trace_form_discriminant(alg)
    assert disc.is_scalar() and not disc.is_zero()


# -- quotients ----------------------------------------------------------------

def test_quotient_first_chart(ex1_quotients):
    q1, _ = ex1_quotients
    assert q1.commutative
    assert set(q1.algebra.basis) == {"1", "z1"}
    assert q1.killed_variable == "v"
    assert q1.killed == ("x", "y1")
    assert verify_identity(q1.algebra, "z1^2", "xi*(xi-1)*(lam-xi)")


def test_quotient_second_chart(ex1_quotients):
    _, q2 = ex1_quotients
    assert q2.commutative
    assert set(q2.algebra.basis) == {"1", "z2"}
    assert q2.killed_variable == "u"
    assert verify_identity(q2.algebra, "z2^2", "eta*(1-eta)*(lam*eta-1)")


def test_quotient_cubic(ex2_quotients):
    r1, r2 = ex2_quotients
    assert r1.commutative and r2.commutative
    assert verify_identity(r1.algebra, "z1^3", "xi*(xi-1)")
    assert verify_identity(r2.algebra, "z2^3", "eta*(1-eta)")
    assert r1.killed_variable == "v" and r2.killed_variable == "u"


def test_quotient_unit_rejected(ex1_charts):
    (_, _, chart_alg, _) = ex1_charts[0]
    with pytest.raises(NotAnIdeal):
        quotient_by_generators(chart_alg.algebra, ["1"])


# -- ramification witnesses ----------------------------------------------------

def test_witness_for_every_component(ex1_algebra, ex2_algebra):
    ring1 = ex1_algebra.ring
    u, v = ring1.var("u"), ring1.var("v")
    lam = ring1.parse("lam")
    for component in (u, v, u - v, u - lam * v):
        assert ramification_witness(ex1_algebra, component) is not None
    ring2 = ex2_algebra.ring
    u2, v2 = ring2.var("u"), ring2.var("v")
    for component in (u2, v2, u2 - v2):
        assert ramification_witness(ex2_algebra, component) is not None
    # a component the order is NOT ramified on has no witness
    assert ramification_witness(ex1_algebra, u + v) is None


def test_paper_witness_element(ex1_algebra):
    # (z - eps u v)^2 = uv(u-v)(lam v - u) vanishes modulo both diagonal
    # components, so the same element witnesses both
    alg = ex1_algebra
    ring = alg.ring
    u, v = ring.var("u"), ring.var("v")
    lam = ring.parse("lam")
    w = alg.gen("z") - alg.scalar(ring.parse("eps") * u * v)
    square = (w * w).coords
    from cmatlas.polyring import divide_exact
    for component in (u - v, u - lam * v):
        assert all(divide_exact(c, component) is not None for c in square)
        assert not all(divide_exact(c, component) is not None
                       for c in w.coords)


# -- build / context guards -----------------------------------------------------

def test_build_rejects_wrong_context(ex1_ctx, ex2_ctx):
    from cmatlas.scalars import BadSpecialization
    with pytest.raises(BadSpecialization):
        build_example_algebra("ex1", ex2_ctx)
    with pytest.raises(BadSpecialization):
        build_example_algebra("ex2", ex1_ctx)
    with pytest.raises(ValueError):
        build_example_algebra("ex3", ex1_ctx)


def test_build_rejects_forbidden_parameter():
    from cmatlas.scalars import BadSpecialization, ReducibleMinimalPolynomial
    # lam = 1 mod 13: 1 + lam = 2, a non-square mod 13, so the tower exists,
    # but the order construction refuses the excluded parameter value
    ctx = make_field(FieldDescriptor(base=13, transcendentals=("lam",),
                                     extensions=(("eps", "T^2 - (1+lam)"),),
                                     bindings=(("lam", 1),)))
    with pytest.raises(BadSpecialization):
        build_example_algebra("ex1", ctx)


# -- dump golden ----------------------------------------------------------------

def test_dump_golden(ex1_algebra):
    golden = json.loads((DATA / "ex1_table.golden.json").read_text())
    assert ex1_algebra.dump() == golden
