from fractions import Fraction
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from defcohom.chain_complex import Complex, cohomology_dims, validate_complex
from defcohom.lie_theory import (
    LieAlgebra,
    Multiderivation,
    adjoint_rep,
    catalogue_algebras,
    ce_complex,
    ce_differential,
    coadjoint_rep,
    deformation_complex,
    deformation_differential,
    heisenberg,
    jacobiator,
    monomials,
    named_rep,
    so3,
    symmetric_power,
    validate_lie,
    validate_representation,
)
from defcohom.reports import ValidationError

from .strategies import small_rationals

ALGEBRAS = catalogue_algebras()

# cohomology with trivial and adjoint coefficients, from standard tables
ORACLES = {
    "so3": ((1, 0, 0, 1), (0, 0, 0, 0)),
    "sl2": ((1, 0, 0, 1), (0, 0, 0, 0)),
    "heisenberg": ((1, 2, 2, 1), (1, 4, 5, 2)),
    "aff1": ((1, 1, 0), (0, 0, 0)),
}

NON_JACOBI = LieAlgebra(3, {(0, 1): [1, 0, 0], (0, 2): [0, 1, 0], (1, 2): [0, 0, 2]}, "broken")


@pytest.mark.parametrize("name", sorted(ALGEBRAS))
def test_catalogue_satisfies_jacobi(name):
    assert validate_lie(ALGEBRAS[name]).ok


def test_jacobi_counterexample_is_caught():
    rep = validate_lie(NON_JACOBI)
    assert not rep.ok and "(e1, e2, e3)" in rep.failures[0]
    assert jacobiator(NON_JACOBI, 0, 1, 2) == (0, 1, 0)
    with pytest.raises(ValidationError):
        ce_complex(NON_JACOBI)
    with pytest.raises(ValidationError):
        deformation_complex(NON_JACOBI)


def test_bad_bracket_shape():
    rep = validate_lie(LieAlgebra(2, {(0, 1): [1, 0, 0]}))
    assert rep.shape_errors


@pytest.mark.parametrize("g", list(ALGEBRAS.values()) + [NON_JACOBI], ids=lambda g: g.name)
def test_ce_squares_to_zero_iff_jacobi(g):
    # built without validation so a broken bracket reaches the matrices
    rho = adjoint_rep(g)
    c = Complex((0, g.dim), {k: comb(g.dim, k) * g.dim for k in range(g.dim + 1)},
                {k: ce_differential(g, rho, k) for k in range(g.dim)})
    assert validate_complex(c).ok == validate_lie(g).ok


@pytest.mark.parametrize("name", sorted(ALGEBRAS))
def test_cochain_dimensions(name):
    g = ALGEBRAS[name]
    c = deformation_complex(g)
    assert [c.dim(k) for k in c.degrees] == [comb(g.dim, k) * g.dim for k in range(g.dim + 1)]


@pytest.mark.parametrize("name", sorted(ALGEBRAS))
def test_two_constructions_agree_matrix_for_matrix(name):
    g = ALGEBRAS[name]
    de, ad = deformation_complex(g), ce_complex(g, "adjoint")
    for k in range(g.dim):
        assert de.d(k) == ad.d(k)


@pytest.mark.parametrize("name", sorted(ALGEBRAS))
def test_cohomology_oracles(name):
    g = ALGEBRAS[name]
    tr, de = cohomology_dims(ce_complex(g)), cohomology_dims(deformation_complex(g))
    if g.is_abelian:
        want_tr = tuple(comb(g.dim, k) for k in range(g.dim + 1))
        want_de = tuple(comb(g.dim, k) * g.dim for k in range(g.dim + 1))
    else:
        want_tr, want_de = ORACLES[name]
    assert tuple(tr[k] for k in range(g.dim + 1)) == want_tr
    assert tuple(de[k] for k in range(g.dim + 1)) == want_de


def test_heisenberg_coadjoint():
    h = cohomology_dims(ce_complex(heisenberg(), "coadjoint"))
    assert [h[k] for k in range(4)] == [2, 5, 4, 1]


@pytest.mark.parametrize("name", sorted(ALGEBRAS))
def test_named_representations_are_valid(name):
    g = ALGEBRAS[name]
    for rho in ("trivial", "adjoint", "coadjoint"):
        assert validate_representation(g, named_rep(g, rho)).ok
    with pytest.raises(ValueError):
        named_rep(g, "spinor")


def test_monomial_order():
    assert monomials(2, 2) == [(2, 0), (1, 1), (0, 2)]
    assert len(monomials(3, 4)) == comb(6, 2)


@pytest.mark.parametrize("w", range(4))
def test_symmetric_powers_are_representations(w):
    for g in (so3(), heisenberg()):
        rho = symmetric_power(coadjoint_rep(g), w)
        assert rho.dim == comb(g.dim + w - 1, w)
        assert validate_representation(g, rho).ok


@pytest.mark.parametrize("w", range(5))
def test_so3_invariants(w):
    h = cohomology_dims(ce_complex(so3(), symmetric_power(coadjoint_rep(so3()), w)))
    even = int(w % 2 == 0)
    assert [h[k] for k in range(4)] == [even, 0, 0, even]


# --- the multiderivation formula --------------------------------------------------

def test_multiderivation_is_alternating():
    g = so3()
    D = Multiderivation(g, 1, {(0, 1): (1, 2, 3)})
    x, y = (1, 0, 0), (0, 1, 0)
    assert D(x, y) == (1, 2, 3) and D(y, x) == (-1, -2, -3)
    assert D(x, x) == (0, 0, 0)
    assert D.symbol.shape == (0, 3)
    with pytest.raises(ValueError):
        D(x)


@given(st.lists(small_rationals, min_size=3, max_size=3))
def test_delta_of_bracket_vanishes(coeffs):
    # the bracket itself is a cocycle: delta(mu) = 0 is the Jacobi identity
    g = heisenberg()
    mu = Multiderivation(g, 1, {(i, j): g.structure(i, j) for i in range(3) for j in range(i + 1, 3)})
    assert not deformation_differential(mu).values
    D = Multiderivation(g, 0, {(0,): tuple(coeffs)})
    assert not deformation_differential(deformation_differential(D)).values


def test_delta_of_zero_cochain_is_minus_ad():
    g = so3()
    x = (Fraction(1), Fraction(2), Fraction(0))
    D = Multiderivation(g, -1, {(): x})
    dD = deformation_differential(D)
    for i in range(3):
        e = tuple(Fraction(int(t == i)) for t in range(3))
        assert dD(e) == g.bracket(e, x)
