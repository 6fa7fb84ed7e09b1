from dataclasses import replace
from itertools import product

import pytest

from defcohom.chain_complex import cohomology_dims, validate_complex
from defcohom.finite_groupoid import (
    FiniteGroupoid,
    Nerve,
    action_groupoid,
    catalogue_groupoids,
    check_simplicial_identities,
    cyclic_group,
    differentiable_complex,
    disjoint_union,
    nerve,
    normalized_complex,
    pair_groupoid,
    quasi_isomorphism_degrees,
    unit_groupoid,
    validate_groupoid,
)
from defcohom.reports import ValidationError

CATALOGUE = catalogue_groupoids()
K_MAX = 4


@pytest.mark.parametrize("name", sorted(CATALOGUE))
def test_catalogue_groupoids_are_valid(name):
    assert validate_groupoid(CATALOGUE[name]).ok


@pytest.mark.parametrize("name", sorted(CATALOGUE))
def test_simplicial_identities_to_level_four(name):
    rep = check_simplicial_identities(CATALOGUE[name], 4)
    assert rep.ok, rep.summary()


@pytest.mark.parametrize("g, count", [
    (unit_groupoid(3), lambda k: 3),
    (cyclic_group(2), lambda k: 2 ** k),
    (cyclic_group(3), lambda k: 3 ** k),
    (pair_groupoid(2), lambda k: 2 ** (k + 1)),
    (pair_groupoid(3), lambda k: 3 ** (k + 1)),
    (action_groupoid(2, 2, (1, 0)), lambda k: 2 * 2 ** k),
])
def test_nerve_sizes(g, count):
    for k in range(K_MAX + 1):
        assert len(nerve(g, k)) == count(k)


def brute_force_strings(g, k):
    """Composable strings by filtering all k-tuples of arrows."""
    if k == 0:
        return sorted((x,) for x in g.objects)
    return sorted(s for s in product(g.arrows, repeat=k)
                  if all(g.src[s[i]] == g.tgt[s[i + 1]] for i in range(k - 1)))


@pytest.mark.parametrize("name", sorted(CATALOGUE))
def test_nerve_matches_brute_force(name):
    g = CATALOGUE[name]
    for k in range(4):
        assert list(nerve(g, k).simplices) == brute_force_strings(g, k)


def test_faces_of_a_two_simplex():
    g = pair_groupoid(3)
    nv = Nerve(g)
    s = ("a01", "a12")  # x2 -> x1 -> x0
    assert nv.face(0, s, 2) == ("a12",)
    assert nv.face(1, s, 2) == ("a02",)
    assert nv.face(2, s, 2) == ("a01",)
    assert nv.face(0, ("a01",), 1) == ("x1",)
    assert nv.face(1, ("a01",), 1) == ("x0",)
    assert nv.degeneracy(1, s, 2) == ("a00", "a01", "a12")
    assert nv.degeneracy(3, s, 2) == ("a01", "a12", "a22")


@pytest.mark.parametrize("name", sorted(CATALOGUE))
def test_coboundary_squares_to_zero(name):
    assert validate_complex(differentiable_complex(CATALOGUE[name], K_MAX)).ok


@pytest.mark.parametrize("name, h0", [
    ("unit-3", 3), ("Z2", 1), ("Z3", 1), ("pair-2", 1), ("pair-3", 1), ("Z2-on-2", 1),
])
def test_cohomology_oracles(name, h0):
    g = CATALOGUE[name]
    h = cohomology_dims(differentiable_complex(g, K_MAX))
    assert h[0] == h0 == len(g.orbits())
    assert all(h[k] == 0 for k in range(1, K_MAX))


@pytest.mark.parametrize("name", sorted(CATALOGUE))
def test_normalized_inclusion_is_quasi_isomorphism(name):
    sub, incl = normalized_complex(CATALOGUE[name], K_MAX)
    assert validate_complex(sub).ok
    qi = quasi_isomorphism_degrees(incl)
    assert set(qi) == set(range(K_MAX)) and all(qi.values())


def test_normalized_cochains_skip_units():
    sub, _ = normalized_complex(cyclic_group(3), 3)
    # strings of non-unit arrows in Z/3: 2^k
    assert [sub.dim(k) for k in range(4)] == [1, 2, 4, 8]


def test_disjoint_union_adds():
    a, b = pair_groupoid(2), cyclic_group(3)
    u = disjoint_union(a, b)
    assert validate_groupoid(u).ok
    for k in range(4):
        assert len(nerve(u, k)) == len(nerve(a, k)) + len(nerve(b, k))
    h = lambda g: cohomology_dims(differentiable_complex(g, 3))
    ha, hb, hu = h(a), h(b), h(u)
    assert all(hu[k] == ha[k] + hb[k] for k in hu)


def test_corrupted_composition_reports_triple():
    g = cyclic_group(3)
    comp = dict(g.comp)
    comp[("g1", "g1")] = "g0"
    bad = replace(g, comp=comp)
    rep = validate_groupoid(bad)
    assert not rep.ok
    assert any("associativity" in f and "(g1, g1, g2)" in f for f in rep.failures)
    with pytest.raises(ValidationError):
        Nerve(bad)


def test_missing_composite_is_shape_error():
    g = pair_groupoid(2)
    comp = dict(g.comp)
    del comp[("a01", "a10")]
    rep = validate_groupoid(replace(g, comp=comp))
    assert rep.shape_errors and "missing composite" in rep.shape_errors[0]


def test_bad_inverse_fails():
    g = cyclic_group(3)
    inv = dict(g.inv)
    inv["g1"] = "g1"
    rep = validate_groupoid(replace(g, inv=inv))
    assert any("inverse law" in f for f in rep.failures)


def test_action_groupoid_rejects_bad_generator():
    with pytest.raises(ValueError):
        action_groupoid(2, 3, (1, 2, 0))


def test_orbits():
    assert len(unit_groupoid(3).orbits()) == 3
    assert len(action_groupoid(2, 2, (1, 0)).orbits()) == 1
    assert len(action_groupoid(2, 2, (0, 1)).orbits()) == 2
    assert isinstance(CATALOGUE["Z2"], FiniteGroupoid)
