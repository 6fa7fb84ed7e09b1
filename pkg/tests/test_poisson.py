import random
from math import comb

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from defcohom.chain_complex import cohomology_dims, validate_complex
from defcohom.lie_theory import (
    LieAlgebra,
    catalogue_algebras,
    ce_complex,
    coadjoint_rep,
    deformation_complex,
    heisenberg,
    so3,
    symmetric_power,
)
from defcohom.poisson import (
    CoordinateSpace,
    PolyMultivector,
    canonical_flip,
    fibre_linear_part,
    fibre_weight,
    format_multivector,
    is_poisson,
    linear_poisson,
    map_i,
    poisson_complex,
    random_multivector,
    reversal,
    schouten,
    space,
    tangent_lift,
    tangent_space,
    weight_plan,
    zero_poisson_dim,
)
from defcohom.reports import ValidationError

from .strategies import seeds

ALGEBRAS = catalogue_algebras()
X = space(1)  # one coordinate x1
NON_JACOBI = LieAlgebra(3, {(0, 1): [1, 0, 0], (0, 2): [0, 1, 0], (1, 2): [0, 0, 2]}, "broken")


def mv(sp, degree, terms):
    return PolyMultivector(sp, degree, terms)


def x_dx():
    return mv(X, 1, {((0,), (1,)): 1})


def dx():
    return PolyMultivector.basis_vector(X, 0)


def sign(p, q):
    return -1 if ((p - 1) * (q - 1)) % 2 else 1


# --- spaces and storage ----------------------------------------------------------

def test_coordinate_space_invariants():
    with pytest.raises(ValueError):
        CoordinateSpace(("x", "x"))
    with pytest.raises(ValueError):
        CoordinateSpace(("x",), frozenset({"y"}))
    tv = tangent_space(space(2))
    assert tv.names == ("x1", "x2", "x1_dot", "x2_dot")
    assert tv.fibre_mask == {"x1_dot", "x2_dot"}
    with pytest.raises(ValueError):
        tangent_space(tv)


def test_indices_are_normalized():
    sp = space(3)
    p = mv(sp, 2, {((1, 0), (0, 0, 0)): 1, ((0, 0), (1, 0, 0)): 5})
    assert p.terms == {((0, 1), (0, 0, 0)): -1}


def test_different_spaces_do_not_mix():
    with pytest.raises(ValueError):
        schouten(dx(), PolyMultivector.basis_vector(space(2), 0))


# --- the bracket ------------------------------------------------------------------

def test_functions_commute():
    sp = space(2)
    f = PolyMultivector.function(sp, {(2, 1): 3})
    g = PolyMultivector.function(sp, {(0, 4): -1})
    assert schouten(f, g).is_zero()


def test_vector_field_on_function():
    f = PolyMultivector.function(X, {(3,): 1})
    assert schouten(x_dx(), f) == PolyMultivector.function(X, {(3,): 3})


def test_lie_bracket_by_hand():
    assert schouten(x_dx(), dx()) == -dx()


def test_linear_poisson_examples():
    assert linear_poisson(ALGEBRAS["abelian-R3"]).is_zero()
    h = linear_poisson(heisenberg())
    assert format_multivector(h) == "1 xi3 dxi1^dxi2"
    p = linear_poisson(so3())
    sp = p.space
    want = mv(sp, 2, {((0, 1), (0, 0, 1)): 1, ((1, 2), (1, 0, 0)): 1, ((2, 0), (0, 1, 0)): 1})
    assert p == want


@pytest.mark.parametrize("name", sorted(ALGEBRAS))
def test_linear_poisson_is_poisson(name):
    ok, witness = is_poisson(linear_poisson(ALGEBRAS[name]))
    assert ok and witness.is_zero()


def test_constant_and_zero_bivectors_are_poisson():
    sp = space(2)
    assert is_poisson(PolyMultivector.zero(sp, 2))[0]
    assert is_poisson(mv(sp, 2, {((0, 1), (0, 0)): 1}))[0]


def test_non_jacobi_witness():
    ok, w = is_poisson(linear_poisson(NON_JACOBI))
    assert not ok
    assert w == mv(w.space, 3, {((0, 1, 2), (0, 1, 0)): 2})
    with pytest.raises(ValidationError):
        poisson_complex(linear_poisson(NON_JACOBI), 1)


def _random_triple(seed):
    rng = random.Random(seed)
    sp = space(rng.randint(1, 3))
    return sp, [random_multivector(rng, sp, rng.randint(0, min(3, sp.n))) for _ in range(3)]


@given(seeds)
@settings(max_examples=60)
def test_graded_antisymmetry(seed):
    _, (p, q, _r) = _random_triple(seed)
    assert schouten(p, q) == schouten(q, p).scale(-sign(p.degree, q.degree))


@given(seeds)
@settings(max_examples=60)
def test_graded_leibniz(seed):
    _, (p, q, r) = _random_triple(seed)
    lhs = schouten(p, q.wedge(r))
    s = -1 if ((p.degree - 1) * q.degree) % 2 else 1
    rhs = schouten(p, q).wedge(r) + q.wedge(schouten(p, r)).scale(s)
    assert lhs == rhs


@given(seeds)
@settings(max_examples=60)
def test_graded_jacobi(seed):
    _, (p, q, r) = _random_triple(seed)
    a, b, c = p.degree, q.degree, r.degree
    total = (schouten(p, schouten(q, r)).scale(sign(a, c))
             + schouten(q, schouten(r, p)).scale(sign(b, a))
             + schouten(r, schouten(p, q)).scale(sign(c, b)))
    assert total.is_zero()


# --- Poisson complexes --------------------------------------------------------------

@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("w", range(5))
def test_zero_poisson(n, w):
    c = poisson_complex(PolyMultivector.zero(space(n), 2), w)
    h = cohomology_dims(c)
    assert all(h[k] == comb(n, k) * comb(n + w - 1, w) == zero_poisson_dim(n, k, w) for k in range(n + 1))


def test_so3_casimir():
    pi = linear_poisson(so3())
    h = cohomology_dims(poisson_complex(pi, 2))
    assert h[0] == 1
    sq = PolyMultivector.function(pi.space, {(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): 1})
    assert schouten(pi, sq).is_zero()


@pytest.mark.parametrize("w", range(5))
def test_so3_poisson_matches_ce_symmetric_powers(w):
    g = so3()
    hp = cohomology_dims(poisson_complex(linear_poisson(g), w))
    hc = cohomology_dims(ce_complex(g, symmetric_power(coadjoint_rep(g), w)))
    assert hp == hc
    assert hp[1] == hp[2] == 0


@pytest.mark.parametrize("name", sorted(ALGEBRAS))
def test_weight_one_differential_is_deformation_differential(name):
    g = ALGEBRAS[name]
    c = poisson_complex(linear_poisson(g), 1)
    d = deformation_complex(g)
    assert validate_complex(c).ok
    assert all(c.d(k) == d.d(k) for k in range(g.dim))
    assert cohomology_dims(c) == cohomology_dims(d)


@pytest.mark.parametrize("name", sorted(ALGEBRAS))
def test_linear_pi_preserves_weight(name):
    assert weight_plan(linear_poisson(ALGEBRAS[name])).shift == 0


def test_d_squared_detects_non_jacobi():
    for g, expect in ((so3(), True), (NON_JACOBI, False)):
        pi = linear_poisson(g)
        sp = pi.space
        zero = all(schouten(pi, schouten(pi, PolyMultivector.coordinate(sp, i))).is_zero()
                   for i in range(sp.n))
        assert zero == expect == is_poisson(pi)[0]


def test_inhomogeneous_window():
    sp = space(2)
    # constant plus linear coefficient: weights up to the window are a subcomplex
    pi = mv(sp, 2, {((0, 1), (0, 0)): 1, ((0, 1), (1, 0)): 1})
    assert weight_plan(pi).mode == "sub"
    c = poisson_complex(pi, weights=(0, 2))
    assert validate_complex(c).ok and not c.closed_above
    with pytest.raises(ValueError):
        poisson_complex(pi, 1)
    mixed = mv(sp, 2, {((0, 1), (0, 0)): 1, ((0, 1), (2, 0)): 1})
    with pytest.raises(ValueError):
        weight_plan(mixed)


# --- tangent lifts ------------------------------------------------------------------

def test_lift_examples():
    tx = tangent_space(X)
    assert tangent_lift(dx()) == PolyMultivector.basis_vector(tx, 0)
    want = mv(tx, 1, {((0,), (1, 0)): 1, ((1,), (0, 1)): 1})
    assert tangent_lift(x_dx()) == want
    assert schouten(tangent_lift(x_dx()), tangent_lift(dx())) == tangent_lift(schouten(x_dx(), dx()))
    assert tangent_lift(schouten(x_dx(), dx())) == -PolyMultivector.basis_vector(tx, 0)


def test_fibre_linear_part_examples():
    tx = tangent_space(X)
    lifted = tangent_lift(x_dx())
    assert fibre_linear_part(lifted) == lifted
    assert fibre_linear_part(mv(tx, 1, {((1,), (0, 2)): 1})).is_zero()
    d = PolyMultivector.basis_vector(tx, 0)
    assert fibre_linear_part(d) == d
    with pytest.raises(ValueError):
        fibre_linear_part(x_dx())


@given(seeds)
@settings(max_examples=40)
def test_lift_is_bracket_homomorphism(seed):
    _, (p, q, _r) = _random_triple(seed)
    tp, tq = tangent_lift(p), tangent_lift(q)
    assert schouten(tp, tq) == tangent_lift(schouten(p, q))
    assert fibre_linear_part(tp) == tp
    assert all(fibre_weight(tp.space, key) == 1 for key in tp.terms)


@pytest.mark.parametrize("name", sorted(ALGEBRAS))
def test_lift_of_poisson_is_poisson(name):
    assert is_poisson(tangent_lift(linear_poisson(ALGEBRAS[name])))[0]


def test_map_i_euler_field_on_so3():
    pi = linear_poisson(so3())
    sp = pi.space
    euler = mv(sp, 1, {((i,), tuple(int(t == i) for t in range(3))): 1 for i in range(3)})
    lifted, ok = map_i(euler, pi)
    assert ok and lifted == tangent_lift(euler)


def test_map_i_casimir():
    pi = linear_poisson(so3())
    f = PolyMultivector.function(pi.space, {(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): 1})
    lifted, ok = map_i(f, pi)
    assert ok and schouten(tangent_lift(pi), lifted).is_zero()


def test_map_i_random_on_heisenberg():
    pi = linear_poisson(heisenberg())
    rng = random.Random(2024)
    for _ in range(20):
        x = random_multivector(rng, pi.space, rng.randint(0, 2), max_poly=2)
        assert map_i(x, pi)[1]


def test_map_i_requires_poisson():
    with pytest.raises(ValueError):
        map_i(PolyMultivector.zero(space(3, "xi"), 1), linear_poisson(NON_JACOBI))


# --- coordinate involutions ----------------------------------------------------------

def symbolic_blocks(n):
    names = ("x", "u", "dx", "du")
    return tuple(tuple(sympy.symbols(f"{b}1:{n + 1}")) for b in names)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_reversal_formula_and_involution(n):
    x, u, dx_, du = t = symbolic_blocks(n)
    assert reversal(t) == (x, du, tuple(-v for v in dx_), u)
    assert reversal(reversal(t)) == t


@pytest.mark.parametrize("n", [1, 2, 3])
def test_flip_formula_and_involution(n):
    x, a, b, c = t = symbolic_blocks(n)
    assert canonical_flip(t) == (x, b, a, c)
    assert canonical_flip(canonical_flip(t)) == t


def test_flip_fixed_points():
    t = ((1,), (2,), (2,), (3,))
    assert canonical_flip(t) == t
    assert canonical_flip(((1,), (2,), (5,), (3,))) != ((1,), (2,), (5,), (3,))
    zero = ((0, 0),) * 4
    assert reversal(zero) == zero


@given(st.integers(1, 3).flatmap(
    lambda n: st.tuples(*[st.tuples(*[st.integers(-5, 5)] * n)] * 4)))
def test_involutions_are_bijections(t):
    assert canonical_flip(canonical_flip(t)) == t
    assert reversal(reversal(t)) == t


def test_involutions_reject_bad_blocks():
    with pytest.raises(ValueError):
        reversal(((1,), (2,), (3,)))
    with pytest.raises(ValueError):
        canonical_flip(((1,), (2, 3), (4,), (5,)))
