import random

import pytest
from hypothesis import given, settings

from defcohom.chain_complex import (
    Complex,
    cohomology_dims,
    cone_les,
    identity_map,
    induced_map,
    symplectic_model,
    validate_chain_map,
    zero_map,
)
from defcohom.double_complex import (
    COLS,
    ROWS,
    DoubleComplex,
    e_infinity,
    page_cohomology_dims,
    phi_isomorphism,
    rows_of,
    seven_term_extract,
    spectral_pages,
    stabilization_bound,
    stable_page,
    total,
    two_row,
    two_row_check,
    validate_double,
)
from defcohom.exact_linalg import RationalMatrix, rank
from defcohom.reports import ValidationError
from defcohom.synthetic import (
    RandomComplexConfig,
    random_chain_map,
    random_double_complex,
    random_map_pair,
    random_split_complex,
    staircase,
)

from .strategies import seeds

ONE = RationalMatrix.identity(1)


def square(h_top=1, v_right=1):
    """1-dim pieces on {0,1}^2 with all four arrows; commutes iff h_top == v_right."""
    m = lambda x: RationalMatrix.from_rows([[x]])
    return DoubleComplex((0, 1), (0, 1), {(0, 0): 1, (1, 0): 1, (0, 1): 1, (1, 1): 1},
                         {(0, 0): ONE, (0, 1): m(h_top)}, {(0, 0): ONE, (1, 0): m(v_right)})


def test_commuting_square_validates():
    assert validate_double(square()).ok


def test_anticommuting_square_fails():
    rep = validate_double(square(h_top=-1))
    assert not rep.ok and any("commute" in f for f in rep.failures)
    with pytest.raises(ValidationError):
        total(square(h_top=-1))


def test_total_sign_convention():
    tot = total(square())
    assert tot.dims == {0: 1, 1: 2, 2: 1}
    assert all(v == 0 for v in cohomology_dims(tot).values())
    # delta + (-1)^p d: the (1,0) -> (1,1) arrow enters with a minus sign
    assert tot.d(1) == RationalMatrix.from_rows([[1, -1]])


def test_single_piece():
    dc = DoubleComplex((0, 0), (0, 0), {(0, 0): 3})
    assert cohomology_dims(total(dc)) == {0: 3}
    pg = e_infinity(dc, ROWS)
    assert pg.entries == {(0, 0): 3}


def test_staircase_has_higher_differential():
    # right, down, right: acyclic, killed at E_1 by rows but only by d_2 by columns
    dc = staircase((0, 2), (0, 2), (0, 2), 3, True)
    assert validate_double(dc).ok
    assert all(v == 0 for v in cohomology_dims(total(dc)).values())
    bound = stabilization_bound(dc)
    assert stable_page(spectral_pages(dc, ROWS, bound)) == 1
    cols = spectral_pages(dc, COLS, bound)
    assert stable_page(cols) == 3
    assert cols[1].entries[(0, 2)] == 1 and not cols[1].differentials[(0, 2)].is_zero()


def test_bad_direction():
    with pytest.raises(ValueError):
        spectral_pages(square(), "diagonal", 2)


@given(seeds)
@settings(max_examples=20)
def test_pages_converge_to_total(seed):
    dc = random_double_complex(random.Random(seed))
    h = cohomology_dims(total(dc))
    bound = stabilization_bound(dc)
    for direction in (ROWS, COLS):
        pages = spectral_pages(dc, direction, bound)
        assert stable_page(pages) is not None
        einf = pages[-1].total_dims()
        assert {k: einf.get(k, 0) for k in h} == h
        # E_{r+1} = H(E_r, d_r), checked by ranks on each page
        for a, b in zip(pages, pages[1:]):
            assert page_cohomology_dims(a) == b.entries
            for (p, q), m in a.differentials.items():
                t = a.target(p, q)
                if t in a.differentials:
                    assert (a.differentials[t] @ m).is_zero()


@given(seeds)
@settings(max_examples=15)
def test_transpose_swaps_directions(seed):
    dc = random_double_complex(random.Random(seed))
    tr = dc.transpose()
    assert cohomology_dims(total(dc)) == cohomology_dims(total(tr))
    bound = stabilization_bound(dc)
    for a, b in zip(spectral_pages(dc, ROWS, bound), spectral_pages(tr, COLS, bound)):
        assert a.entries == {(q, p): n for (p, q), n in b.entries.items()}


def test_e1_pages_are_row_and_column_cohomology():
    dc = random_double_complex(random.Random(7))
    e1 = spectral_pages(dc, COLS, 1)[0].entries
    for (p, q), n in e1.items():
        into = rank(dc.v(p, q - 1))
        assert n == dc.dim(p, q) - rank(dc.v(p, q)) - into


# --- two-row instances ---------------------------------------------------------

def test_two_row_round_trip():
    f = random_map_pair(random.Random(4))
    g = rows_of(two_row(f))
    assert g.source == f.source and g.target == f.target
    assert all(g.component(k) == f.component(k) for k in f.degrees)


def test_two_row_zero_vertical():
    rng = random.Random(8)
    s, t = (random_split_complex(rng).complex for _ in range(2))
    rep = two_row_check(two_row(zero_map(s, t)))
    assert rep.ok, rep.mismatches
    hs, ht = cohomology_dims(s), cohomology_dims(t)
    assert rep.total == {k: hs.get(k, 0) + ht.get(k - 1, 0) for k in rep.total}


def test_two_row_identity_vertical_is_acyclic():
    c = random_split_complex(random.Random(9)).complex
    rep = two_row_check(two_row(identity_map(c)))
    assert rep.ok and set(rep.total.values()) == {0}


@given(seeds)
@settings(max_examples=20)
def test_two_row_degeneration(seed):
    rep = two_row_check(two_row(random_map_pair(random.Random(seed))))
    assert rep.ok, rep.mismatches
    assert rep.rows_e2 == rep.formula_e2


def test_two_row_rejects_third_row():
    dc = DoubleComplex((0, 1), (0, 2), {(0, 2): 1})
    with pytest.raises(ValidationError):
        two_row_check(dc)


@given(seeds)
@settings(max_examples=20)
def test_phi_is_chain_isomorphism(seed):
    f = random_map_pair(random.Random(seed))
    phi = phi_isomorphism(f)
    assert phi.source == symplectic_model(f.source, f.target, f)
    assert validate_chain_map(phi).ok
    for k in phi.degrees:
        m = phi.component(k)
        assert m.rows == m.cols and rank(m) == m.rows
    for k, m in induced_map(phi).items():
        assert rank(m) == m.rows == m.cols


# --- truncated sequence -----------------------------------------------------------

def seven_term_instance(seed):
    rng = random.Random(seed)
    s = random_split_complex(rng, RandomComplexConfig((0, 4), 5, vanishing_from=2))
    t = random_split_complex(rng, RandomComplexConfig((0, 4), 5))
    return random_chain_map(rng, s, t)


@given(seeds)
@settings(max_examples=20)
def test_seven_term(seed):
    les = cone_les(seven_term_instance(seed))
    ts = seven_term_extract(les, 2)
    assert ts.ok and ts.length == 7
    assert [n.label for n in ts.sequence.nodes] == [
        "H^0(cone)", "H^0(source)", "H^0(target)",
        "H^1(cone)", "H^1(source)", "H^1(target)", "H^2(cone)",
    ]
    assert sorted(ts.isomorphisms) == [3, 4, 5]


def test_seven_term_hypothesis_violated():
    rng = random.Random(0)
    while True:
        f = random_map_pair(rng)
        if cohomology_dims(f.source).get(3, 0):
            break
    with pytest.raises(ValidationError):
        seven_term_extract(cone_les(f), 2)


def test_seven_term_fully_acyclic():
    c = Complex((0, 4), {k: 0 for k in range(5)}, closed_below=True, closed_above=True)
    ts = seven_term_extract(cone_les(identity_map(c)), 2)
    assert ts.ok and all(n.dim == 0 for n in ts.sequence.nodes)
