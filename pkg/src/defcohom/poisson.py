"""Polynomial multivector fields, the Schouten bracket and Poisson cohomology.

A multivector of degree k is a finite sum ``sum f_I(x) theta_I`` where
``theta_I = d/dx_(i_1) ^ ... ^ d/dx_(i_k)`` for strictly increasing ``I`` and
``f_I`` is a polynomial with rational coefficients.  Terms are stored flat as
``{(I, exponents): coefficient}``.

Schouten bracket, with ``P <- theta_i`` the derivative removing ``theta_i``
from the right::

    [P, Q] = sum_i (P <- theta_i) ^ d_(x_i) Q
             - (-1)^((p-1)(q-1)) (Q <- theta_i) ^ d_(x_i) P

This gives ``[X, f] = X(f)`` for vector fields, graded antisymmetry and the
graded Leibniz rule.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Iterable, Mapping, Sequence

from .chain_complex import Complex
from .exact_linalg import RationalMatrix, to_rational
from .lie_theory import LieAlgebra, monomials
from .reports import Report, ValidationError

Index = tuple[int, ...]
Exps = tuple[int, ...]
TermKey = tuple[Index, Exps]

DOT_SUFFIX = "_dot"


@dataclass(frozen=True)
class CoordinateSpace:
    names: tuple[str, ...]
    fibre_mask: frozenset[str] = frozenset()
    # base space when this is a tangent space built by ``tangent_space``
    lifted_from: "CoordinateSpace | None" = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "fibre_mask", frozenset(self.fibre_mask))
        if len(set(self.names)) != len(self.names):
            raise ValueError("coordinate labels must be unique")
        if not self.fibre_mask <= set(self.names):
            raise ValueError("fibre_mask must be a subset of the coordinate labels")

    @property
    def n(self) -> int:
        return len(self.names)

    @cached_property
    def fibre_positions(self) -> frozenset[int]:
        return frozenset(i for i, x in enumerate(self.names) if x in self.fibre_mask)

    def index(self, name: str) -> int:
        return self.names.index(name)


def space(n: int, prefix: str = "x") -> CoordinateSpace:
    return CoordinateSpace(tuple(f"{prefix}{i + 1}" for i in range(n)))


def tangent_space(v: CoordinateSpace) -> CoordinateSpace:
    """``TV`` with coordinates ``x_1..x_n, x_1_dot..x_n_dot``; the dotted ones are fibre coordinates."""
    if v.lifted_from is not None or v.fibre_mask:
        raise ValueError("space is already a tangent/bundle space")
    dotted = tuple(x + DOT_SUFFIX for x in v.names)
    return CoordinateSpace(v.names + dotted, frozenset(dotted), lifted_from=v)


def _sort_sign(idx: Sequence[int]) -> tuple[int, Index] | None:
    """Sign of the permutation sorting ``idx``; None if an entry repeats."""
    if len(set(idx)) != len(idx):
        return None
    inv = sum(1 for a in range(len(idx)) for b in range(a + 1, len(idx)) if idx[a] > idx[b])
    return (-1 if inv % 2 else 1), tuple(sorted(idx))


class PolyMultivector:
    __slots__ = ("space", "degree", "terms")

    def __init__(self, sp: CoordinateSpace, degree: int, terms: Mapping[TermKey, object] = ()):
        self.space = sp
        self.degree = degree
        clean: dict[TermKey, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for (idx, exps), c in items:
            c = to_rational(c)
            if not c:
                continue
            if len(idx) != degree:
                raise ValueError(f"index {idx} does not have length {degree}")
            if len(exps) != sp.n or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent vector {exps}")
            if any(not 0 <= i < sp.n for i in idx):
                raise ValueError(f"index {idx} out of range")
            s = _sort_sign(idx)
            if s is None:
                continue
            key = (s[1], tuple(exps))
            v = clean.get(key, 0) + s[0] * c
            if v:
                clean[key] = v
            else:
                clean.pop(key, None)
        self.terms = clean

    @classmethod
    def _wrap(cls, sp, degree, terms):
        obj = cls.__new__(cls)
        obj.space, obj.degree, obj.terms = sp, degree, {k: v for k, v in terms.items() if v}
        return obj

    @classmethod
    def zero(cls, sp: CoordinateSpace, degree: int) -> "PolyMultivector":
        return cls._wrap(sp, degree, {})

    @classmethod
    def function(cls, sp: CoordinateSpace, poly: Mapping[Exps, object]) -> "PolyMultivector":
        return cls(sp, 0, {((), e): c for e, c in poly.items()})

    @classmethod
    def coordinate(cls, sp: CoordinateSpace, i: int) -> "PolyMultivector":
        return cls(sp, 0, {((), tuple(int(t == i) for t in range(sp.n))): 1})

    @classmethod
    def basis_vector(cls, sp: CoordinateSpace, i: int) -> "PolyMultivector":
        return cls(sp, 1, {((i,), (0,) * sp.n): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "PolyMultivector"):
        if self.space != other.space:
            raise ValueError("multivectors live on different coordinate spaces")

    def __add__(self, other):
        self._check(other)
        if self.degree != other.degree and self.terms and other.terms:
            raise ValueError("cannot add multivectors of different degrees")
        deg = self.degree if self.terms else other.degree
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return PolyMultivector._wrap(self.space, deg, out)

    def __neg__(self):
        return PolyMultivector._wrap(self.space, self.degree, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "PolyMultivector":
        c = to_rational(c)
        return PolyMultivector._wrap(self.space, self.degree, {k: c * v for k, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyMultivector):
            return NotImplemented
        if self.space != other.space:
            return False
        if self.terms or other.terms:
            return self.degree == other.degree and self.terms == other.terms
        return True

    __hash__ = None

    def __repr__(self) -> str:
        return f"PolyMultivector(degree={self.degree}, {format_multivector(self)})"

    @property
    def poly_degrees(self) -> set[int]:
        return {sum(e) for _, e in self.terms}

    def wedge(self, other: "PolyMultivector") -> "PolyMultivector":
        self._check(other)
        out: dict[TermKey, Fraction] = {}
        for (i1, e1), c1 in self.terms.items():
            for (i2, e2), c2 in other.terms.items():
                s = _sort_sign(i1 + i2)
                if s is None:
                    continue
                key = (s[1], tuple(a + b for a, b in zip(e1, e2)))
                out[key] = out.get(key, 0) + s[0] * c1 * c2
        return PolyMultivector._wrap(self.space, self.degree + other.degree, out)

    def partial(self, i: int) -> "PolyMultivector":
        """Coefficientwise ``d/dx_i``."""
        out: dict[TermKey, Fraction] = {}
        for (idx, e), c in self.terms.items():
            if e[i]:
                e2 = e[:i] + (e[i] - 1,) + e[i + 1:]
                out[(idx, e2)] = out.get((idx, e2), 0) + c * e[i]
        return PolyMultivector._wrap(self.space, self.degree, out)

    def right_contract(self, i: int) -> "PolyMultivector":
        """Remove ``theta_i`` from the right: ``theta_I <- theta_i``."""
        out: dict[TermKey, Fraction] = {}
        k = self.degree
        for (idx, e), c in self.terms.items():
            if i in idx:
                pos = idx.index(i)
                sign = -1 if (k - 1 - pos) % 2 else 1
                key = (idx[:pos] + idx[pos + 1:], e)
                out[key] = out.get(key, 0) + sign * c
        return PolyMultivector._wrap(self.space, max(k - 1, 0), out)


def format_multivector(p: PolyMultivector) -> str:
    if not p.terms:
        return "0"
    names = p.space.names
    parts = []
    for (idx, e), c in sorted(p.terms.items()):
        mono = "*".join(f"{names[t]}^{x}" if x > 1 else names[t] for t, x in enumerate(e) if x)
        dirs = "^".join(f"d{names[t]}" for t in idx)
        body = " ".join(s for s in (mono, dirs) if s) or "1"
        parts.append(f"{c} {body}")
    return " + ".join(parts)


def schouten(p: PolyMultivector, q: PolyMultivector) -> PolyMultivector:
    """Schouten-Nijenhuis bracket; degree ``deg p + deg q - 1``."""
    p._check(q)
    deg = p.degree + q.degree - 1
    if deg < 0:
        return PolyMultivector.zero(p.space, 0)
    sign = -1 if ((p.degree - 1) * (q.degree - 1)) % 2 else 1
    out = PolyMultivector.zero(p.space, deg)
    for i in range(p.space.n):
        a = p.right_contract(i)
        if a.terms:
            b = q.partial(i)
            if b.terms:
                out = out + a.wedge(b)
        a = q.right_contract(i)
        if a.terms:
            b = p.partial(i)
            if b.terms:
                out = out - a.wedge(b).scale(sign)
    out.degree = deg
    return out


def is_poisson(pi: PolyMultivector) -> tuple[bool, PolyMultivector]:
    """``([pi, pi] == 0, [pi, pi])``."""
    if pi.degree != 2 and pi.terms:
        raise ValueError("is_poisson expects a bivector")
    w = schouten(pi, pi)
    return w.is_zero(), w


def linear_poisson(g: LieAlgebra) -> PolyMultivector:
    """``sum_(i<j) (sum_k c^k_ij xi_k) d_i ^ d_j`` on coordinates xi_1..xi_n.

    The Jacobi identity is not enforced here so that the failure of
    ``[pi, pi] = 0`` can be observed for a bad table.
    """
    sp = space(g.dim, "xi")
    terms = {}
    for (i, j), coeffs in g.brackets.items():
        for k, c in enumerate(coeffs):
            if c:
                terms[((i, j), tuple(int(t == k) for t in range(g.dim)))] = c
    return PolyMultivector(sp, 2, terms)


# ---------------------------------------------------------------------------
# Poisson complexes

def multivector_basis(n: int, k: int, w: int) -> list[TermKey]:
    """Basis of degree-k multivectors with coefficients of weight w: I lexicographic, then monomials."""
    return [(idx, m) for idx in combinations(range(n), k) for m in monomials(n, w)]


def _coordinates(p: PolyMultivector, index: Mapping[TermKey, int], where: str) -> dict[int, Fraction]:
    out = {}
    for key, c in p.terms.items():
        if key not in index:
            raise AssertionError(f"term {key} falls outside the {where} basis")
        out[index[key]] = c
    return out


@dataclass(frozen=True)
class WeightPlan:
    """How polynomial weights are selected for a Poisson complex.

    ``mode`` is "homogeneous" (pi of single polynomial degree h, or pi = 0),
    "quotient" (all degrees >= 1: weights above the window form a subcomplex)
    or "sub" (degrees <= 1: weights up to the window form a subcomplex).
    """

    mode: str
    shift: int  # h - 1 in homogeneous mode


def weight_plan(pi: PolyMultivector) -> WeightPlan:
    degs = pi.poly_degrees
    if len(degs) <= 1:
        h = next(iter(degs), 1)
        return WeightPlan("homogeneous", h - 1)
    if min(degs) >= 1:
        return WeightPlan("quotient", 0)
    if max(degs) <= 1:
        return WeightPlan("sub", 0)
    raise ValueError("pi mixes constant and quadratic-or-higher coefficients; no finite weight window is a subquotient")


def poisson_complex(pi: PolyMultivector, weight: int | None = None, k_max: int | None = None,
                    weights: tuple[int, int] | None = None) -> Complex:
    """``d_pi = [pi, .]`` on polynomial multivectors.

    For homogeneous pi of polynomial degree h give ``weight`` = w: degree k
    carries coefficients of weight ``w + k (h - 1)``; the complex is exact
    data, not a truncation.  For inhomogeneous pi give ``weights = (0, D)``;
    the result is a subquotient complex flagged truncated at both ends.
    """
    ok, witness = is_poisson(pi)
    if not ok:
        rep = Report("Poisson bivector")
        rep.fail(f"[pi, pi] = {format_multivector(witness)}")
        raise ValidationError(rep)
    n = pi.space.n
    k_max = n if k_max is None else k_max
    if not 0 <= k_max <= n:
        raise ValueError(f"k_max must lie in [0, {n}]")
    plan = weight_plan(pi)
    if plan.mode == "homogeneous":
        if weight is None:
            raise ValueError("homogeneous pi needs a single weight")
        return _graded_complex(pi, k_max, lambda k: [weight + k * plan.shift], closed=True)
    if weights is None:
        raise ValueError("inhomogeneous pi needs a weight window (lo, hi)")
    lo, hi = weights
    return _graded_complex(pi, k_max, lambda k: list(range(lo, hi + 1)), closed=False)


def _graded_complex(pi: PolyMultivector, k_max: int, weights_at, closed: bool) -> Complex:
    n = pi.space.n
    bases, labels = {}, {}
    for k in range(k_max + 1):
        basis = [key for w in weights_at(k) if w >= 0 for key in multivector_basis(n, k, w)]
        bases[k] = basis
        labels[k] = tuple(format_multivector(PolyMultivector._wrap(pi.space, k, {key: 1})) for key in basis)
    diffs = {}
    for k in range(k_max):
        tgt = {key: t for t, key in enumerate(bases[k + 1])}
        entries = {}
        for col, key in enumerate(bases[k]):
            image = schouten(pi, PolyMultivector._wrap(pi.space, k, {key: 1}))
            for key2, c in image.terms.items():
                row = tgt.get(key2)
                if row is None:
                    if closed:
                        raise AssertionError(f"d_pi left the weight grading at {key2}")
                    continue  # discarded by the weight window
                entries[(row, col)] = c
        diffs[k] = RationalMatrix(len(bases[k + 1]), len(bases[k]), entries)
    dims = {k: len(b) for k, b in bases.items()}
    return Complex((0, k_max), dims, diffs, labels=labels, closed_below=closed,
                   closed_above=closed and k_max == n)


def zero_poisson_dim(n: int, k: int, w: int) -> int:
    """Closed form ``C(n, k) C(n + w - 1, w)`` for pi = 0."""
    return comb(n, k) * comb(n + w - 1, w)


# ---------------------------------------------------------------------------
# tangent lifts and fibre weights

def tangent_lift(p: PolyMultivector) -> PolyMultivector:
    """Complete lift to TV::

        f theta_I -> f_dot theta_dot_I + f sum_j theta_dot_(i_1) .. theta_(i_j) .. theta_dot_(i_k)

    with ``f_dot = sum_a x_a_dot d_a f``.
    """
    sp = p.space
    tv = tangent_space(sp)
    n = sp.n
    out: dict[TermKey, Fraction] = {}

    def add(idx, exps, c):
        s = _sort_sign(idx)
        if s is None:
            return
        key = (s[1], exps)
        out[key] = out.get(key, 0) + s[0] * c

    for (idx, e), c in p.terms.items():
        dotted = tuple(n + i for i in idx)
        for a in range(n):
            if e[a]:
                exps = e[:a] + (e[a] - 1,) + e[a + 1:] + tuple(int(t == a) for t in range(n))
                add(dotted, exps, c * e[a])
        base_exps = e + (0,) * n
        for j in range(len(idx)):
            add(dotted[:j] + (idx[j],) + dotted[j + 1:], base_exps, c)
    return PolyMultivector._wrap(tv, p.degree, out)


def fibre_weight(sp: CoordinateSpace, key: TermKey) -> int:
    """Fibre degree of the coefficient plus the number of base directions."""
    idx, e = key
    fib = sp.fibre_positions
    return sum(x for t, x in enumerate(e) if t in fib) + sum(1 for t in idx if t not in fib)


def fibre_linear_part(p: PolyMultivector) -> PolyMultivector:
    if not p.space.fibre_mask:
        raise ValueError("fibre_linear_part needs a space with fibre coordinates")
    return PolyMultivector._wrap(p.space, p.degree,
                                 {k: c for k, c in p.terms.items() if fibre_weight(p.space, k) == 1})


def map_i(x: PolyMultivector, pi: PolyMultivector) -> tuple[PolyMultivector, bool]:
    """Lift of X to a fibre-linear multivector on TV, and whether
    ``[T pi, T X] == T [pi, X]`` (the lift intertwines the Poisson differentials)."""
    ok, _ = is_poisson(pi)
    if not ok:
        raise ValueError("pi is not Poisson")
    lifted = tangent_lift(x)
    return lifted, schouten(tangent_lift(pi), lifted) == tangent_lift(schouten(pi, x))


# ---------------------------------------------------------------------------
# coordinate involutions on iterated tangent spaces

def _blocks(t: Sequence[Sequence]) -> tuple[tuple, ...]:
    if len(t) != 4:
        raise ValueError("expected four coordinate blocks")
    blocks = tuple(tuple(b) for b in t)
    if len({len(b) for b in blocks}) != 1:
        raise ValueError("coordinate blocks must have equal length")
    return blocks


def canonical_flip(t: Sequence[Sequence]) -> tuple[tuple, ...]:
    """``(x, x_dot, dx, dx_dot) -> (x, dx, x_dot, dx_dot)``."""
    x, a, b, c = _blocks(t)
    return (x, b, a, c)


def reversal(t: Sequence[Sequence]) -> tuple[tuple, ...]:
    """``(x, u, dx, du) -> (x, du, -dx, u)``."""
    x, u, dx, du = _blocks(t)
    return (x, du, tuple(-v for v in dx), u)


# ---------------------------------------------------------------------------
# random instances for property checks

def random_multivector(rng: random.Random, sp: CoordinateSpace, degree: int, max_poly: int = 2,
                       n_terms: int = 3, coeff: int = 3) -> PolyMultivector:
    if degree > sp.n:
        return PolyMultivector.zero(sp, degree)
    indices = list(combinations(range(sp.n), degree))
    terms = {}
    for _ in range(n_terms):
        idx = rng.choice(indices)
        w = rng.randint(0, max_poly)
        m = rng.choice(monomials(sp.n, w))
        c = rng.randint(-coeff, coeff)
        terms[(idx, m)] = terms.get((idx, m), 0) + c
    return PolyMultivector(sp, degree, terms)


def iter_terms(p: PolyMultivector) -> Iterable[tuple[Index, Exps, Fraction]]:
    for (idx, e), c in sorted(p.terms.items()):
        yield idx, e, c
