"""Lie algebras from structure constants, Chevalley-Eilenberg complexes and the
deformation complex built from multiderivations.

Indices are 0-based internally: ``brackets[(i, j)]`` (i < j) holds the
coefficients of ``[e_i, e_j] = sum_k c^k_ij e_k``.  Cochains of degree k with
values in V have basis ``e^I (x) v_a`` for strictly increasing ``I`` of length
k, ordered lexicographically in ``(I, a)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations, permutations
from math import comb
from typing import Mapping, Sequence

from .chain_complex import Complex
from .exact_linalg import RationalMatrix, Vector, to_rational, zero_vector
from .reports import Report

MultiIndex = tuple[int, ...]


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    dim: int
    brackets: Mapping[tuple[int, int], Sequence] = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        clean = {}
        for (i, j), coeffs in self.brackets.items():
            vec = tuple(to_rational(c) for c in coeffs)
            if any(vec):
                clean[(int(i), int(j))] = vec
        object.__setattr__(self, "brackets", clean)

    def structure(self, i: int, j: int) -> Vector:
        """Coefficients of ``[e_i, e_j]`` for any i, j (antisymmetry applied)."""
        if i == j:
            return zero_vector(self.dim)
        if i < j:
            return self.brackets.get((i, j), zero_vector(self.dim))
        return tuple(-c for c in self.brackets.get((j, i), zero_vector(self.dim)))

    def bracket(self, x: Sequence, y: Sequence) -> Vector:
        out = [Fraction(0)] * self.dim
        for (i, j), coeffs in self.brackets.items():
            w = x[i] * y[j] - x[j] * y[i]
            if w:
                for k, c in enumerate(coeffs):
                    out[k] += w * c
        return tuple(out)

    @cached_property
    def is_abelian(self) -> bool:
        return not self.brackets


def _unit(n: int, i: int) -> Vector:
    return tuple(Fraction(int(k == i)) for k in range(n))


def validate_lie(g: LieAlgebra) -> Report:
    """Shape of the bracket table, then the Jacobi identity on every basis triple."""
    rep = Report(f"Lie algebra {g.name}".strip())
    if g.dim < 0:
        rep.shape("negative dimension")
    for (i, j), coeffs in g.brackets.items():
        if not (0 <= i < j < g.dim):
            rep.shape(f"bracket index pair ({i + 1}, {j + 1}) is not 1 <= i < j <= {g.dim}")
        if len(coeffs) != g.dim:
            rep.shape(f"bracket ({i + 1}, {j + 1}) has {len(coeffs)} coefficients, expected {g.dim}")
    if rep.shape_errors:
        return rep
    for i, j, k in combinations(range(g.dim), 3):
        jac = jacobiator(g, i, j, k)
        if any(jac):
            shown = ", ".join(str(c) for c in jac)
            rep.fail(f"Jacobi fails on (e{i + 1}, e{j + 1}, e{k + 1}): cyclic sum = ({shown})")
    return rep


validate_jacobi = validate_lie


def jacobiator(g: LieAlgebra, i: int, j: int, k: int) -> Vector:
    e = [_unit(g.dim, t) for t in (i, j, k)]
    terms = [g.bracket(e[a], g.bracket(e[b], e[c])) for a, b, c in ((0, 1, 2), (1, 2, 0), (2, 0, 1))]
    return tuple(sum(col) for col in zip(*terms))


# ---------------------------------------------------------------------------
# representations

@dataclass(frozen=True, eq=False)
class Representation:
    """``action[i]`` is the matrix of ``rho(e_i)`` on V."""

    dim: int
    action: tuple[RationalMatrix, ...]
    name: str = ""


def validate_representation(g: LieAlgebra, rho: Representation) -> Report:
    rep = Report(f"representation {rho.name}".strip())
    if len(rho.action) != g.dim:
        rep.shape(f"{len(rho.action)} action matrices for a {g.dim}-dimensional algebra")
    for i, m in enumerate(rho.action):
        if m.shape != (rho.dim, rho.dim):
            rep.shape(f"rho(e{i + 1}) has shape {m.shape}")
    if rep.shape_errors:
        return rep
    for i, j in combinations(range(g.dim), 2):
        lhs = rho.action[i] @ rho.action[j] - rho.action[j] @ rho.action[i]
        rhs = RationalMatrix.zeros(rho.dim, rho.dim)
        for k, c in enumerate(g.structure(i, j)):
            if c:
                rhs = rhs + rho.action[k].scale(c)
        if lhs != rhs:
            rep.fail(f"rho([e{i + 1}, e{j + 1}]) != [rho(e{i + 1}), rho(e{j + 1})]")
    return rep


def trivial_rep(g: LieAlgebra) -> Representation:
    return Representation(1, tuple(RationalMatrix.zeros(1, 1) for _ in range(g.dim)), "trivial")


def adjoint_rep(g: LieAlgebra) -> Representation:
    n = g.dim
    mats = []
    for i in range(n):
        entries = {(k, j): c for j in range(n) for k, c in enumerate(g.structure(i, j)) if c}
        mats.append(RationalMatrix(n, n, entries))
    return Representation(n, tuple(mats), "adjoint")


def coadjoint_rep(g: LieAlgebra) -> Representation:
    """``(ad*_x xi)(y) = -xi([x, y])``, i.e. minus the transpose of ad."""
    return Representation(g.dim, tuple(-m.T for m in adjoint_rep(g).action), "coadjoint")


def monomials(n: int, w: int) -> list[tuple[int, ...]]:
    """Exponent vectors of total degree w in n variables, descending lexicographic."""
    if n == 0:
        return [()] if w == 0 else []
    out = []
    for first in range(w, -1, -1):
        out += [(first,) + rest for rest in monomials(n - 1, w - first)]
    return out


def symmetric_power(rho: Representation, w: int) -> Representation:
    """``S^w V`` with each ``rho(e_i)`` acting as a derivation on monomials."""
    basis = monomials(rho.dim, w)
    index = {m: t for t, m in enumerate(basis)}
    mats = []
    for r in rho.action:
        entries: dict[tuple[int, int], Fraction] = {}
        for col, m in enumerate(basis):
            for j, e in enumerate(m):
                if not e:
                    continue
                lowered = list(m)
                lowered[j] -= 1
                # v_j -> sum_k r[k, j] v_k
                for k in range(rho.dim):
                    c = r[k, j]
                    if c:
                        raised = list(lowered)
                        raised[k] += 1
                        key = (index[tuple(raised)], col)
                        entries[key] = entries.get(key, 0) + e * c
        mats.append(RationalMatrix(len(basis), len(basis), entries))
    return Representation(len(basis), tuple(mats), f"S^{w}({rho.name})")


_NAMED_REPS = {"trivial": trivial_rep, "adjoint": adjoint_rep, "coadjoint": coadjoint_rep}


def named_rep(g: LieAlgebra, name: str) -> Representation:
    try:
        return _NAMED_REPS[name](g)
    except KeyError:
        raise ValueError(f"unknown coefficients {name!r}; expected one of {sorted(_NAMED_REPS)}") from None


# ---------------------------------------------------------------------------
# exterior algebra helpers

def multi_indices(n: int, k: int) -> list[MultiIndex]:
    return list(combinations(range(n), k))


def _wedge_front(i: int, idx: MultiIndex) -> tuple[int, MultiIndex] | None:
    """``e^i ^ e^I = sign * e^J``."""
    if i in idx:
        return None
    pos = sum(1 for t in idx if t < i)
    return (-1 if pos % 2 else 1), idx[:pos] + (i,) + idx[pos:]


def _contract(k: int, idx: MultiIndex) -> tuple[int, MultiIndex] | None:
    """``iota(e_k) e^I = sign * e^(I minus k)``."""
    if k not in idx:
        return None
    pos = idx.index(k)
    return (-1 if pos % 2 else 1), idx[:pos] + idx[pos + 1:]


def cochain_basis(n: int, k: int, m: int) -> list[tuple[MultiIndex, int]]:
    return [(idx, a) for idx in multi_indices(n, k) for a in range(m)]


def ce_differential(g: LieAlgebra, rho: Representation, k: int) -> RationalMatrix:
    """``d = sum_i e^i ^ rho(e_i) - sum_(i<j) c^k_ij e^i ^ e^j ^ iota(e_k)`` on degree k."""
    n, m = g.dim, rho.dim
    src = cochain_basis(n, k, m)
    tgt = {b: t for t, b in enumerate(cochain_basis(n, k + 1, m))}
    entries: dict[tuple[int, int], Fraction] = {}

    def add(row_key, col, val):
        r = tgt[row_key]
        entries[(r, col)] = entries.get((r, col), 0) + val

    for col, (idx, a) in enumerate(src):
        for i in range(n):
            w = _wedge_front(i, idx)
            if w is None:
                continue
            s, J = w
            for b in range(m):
                c = rho.action[i][b, a]
                if c:
                    add((J, b), col, s * c)
        for (i, j), coeffs in g.brackets.items():
            for kk, c in enumerate(coeffs):
                if not c:
                    continue
                step = _contract(kk, idx)
                if step is None:
                    continue
                s1, K = step
                step = _wedge_front(j, K)
                if step is None:
                    continue
                s2, K = step
                step = _wedge_front(i, K)
                if step is None:
                    continue
                s3, K = step
                add((K, a), col, -c * s1 * s2 * s3)
    return RationalMatrix(len(tgt), len(src), entries)


def ce_complex(g: LieAlgebra, rho: Representation | str = "trivial", k_max: int | None = None) -> Complex:
    """Chevalley-Eilenberg complex ``Lambda^k g* (x) V`` for ``0 <= k <= k_max``."""
    validate_lie(g).raise_if_failed()
    if isinstance(rho, str):
        rho = named_rep(g, rho)
    validate_representation(g, rho).raise_if_failed()
    n = g.dim
    k_max = n if k_max is None else k_max
    if not 0 <= k_max <= n:
        raise ValueError(f"k_max must lie in [0, {n}]")
    dims = {k: comb(n, k) * rho.dim for k in range(k_max + 1)}
    diffs = {k: ce_differential(g, rho, k) for k in range(k_max)}
    return Complex((0, k_max), dims, diffs, closed_below=True, closed_above=(k_max == n))


# ---------------------------------------------------------------------------
# deformation complex by the multiderivation formula

def _det(rows: list[list[Fraction]]) -> Fraction:
    n = len(rows)
    if n == 0:
        return Fraction(1)
    total = Fraction(0)
    for perm in permutations(range(n)):
        inversions = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        term = Fraction(-1 if inversions % 2 else 1)
        for r, c in enumerate(perm):
            term *= rows[r][c]
            if not term:
                break
        total += term
    return total


@dataclass(frozen=True)
class Multiderivation:
    """An alternating map ``g^(degree+1) -> g`` given on basis tuples.

    Over a point the symbol takes values in vector fields on a point, so it
    is the zero map from ``Lambda^degree g`` to a zero-dimensional space.
    """

    algebra: LieAlgebra
    degree: int
    values: Mapping[MultiIndex, Vector]

    @property
    def arity(self) -> int:
        return self.degree + 1

    @property
    def symbol(self) -> RationalMatrix:
        return RationalMatrix.zeros(0, comb(self.algebra.dim, max(self.degree, 0)))

    def __call__(self, *args: Sequence) -> Vector:
        """Multilinear alternating evaluation through k x k minors."""
        if len(args) != self.arity:
            raise ValueError(f"expected {self.arity} arguments")
        out = [Fraction(0)] * self.algebra.dim
        for idx, val in self.values.items():
            minor = _det([[args[c][r] for c in range(self.arity)] for r in idx])
            if minor:
                for t, x in enumerate(val):
                    out[t] += minor * x
        return tuple(out)


def deformation_differential(D: Multiderivation) -> Multiderivation:
    """delta(D)(a_0..a_k) = sum_i (-1)^i [a_i, D(.. a_i omitted ..)]
    + sum_(i<j) (-1)^(i+j) D([a_i, a_j], .. a_i, a_j omitted ..)."""
    g = D.algebra
    n, k = g.dim, D.arity
    values = {}
    for J in multi_indices(n, k + 1):
        args = [_unit(n, t) for t in J]
        acc = [Fraction(0)] * n
        for i in range(k + 1):
            rest = args[:i] + args[i + 1:]
            term = g.bracket(args[i], D(*rest))
            sign = -1 if i % 2 else 1
            for t in range(n):
                acc[t] += sign * term[t]
        for i, j in combinations(range(k + 1), 2):
            rest = [a for t, a in enumerate(args) if t not in (i, j)]
            term = D(g.bracket(args[i], args[j]), *rest)
            sign = -1 if (i + j) % 2 else 1
            for t in range(n):
                acc[t] += sign * term[t]
        if any(acc):
            values[J] = tuple(acc)
    return Multiderivation(g, D.degree + 1, values)


def deformation_complex(g: LieAlgebra, k_max: int | None = None) -> Complex:
    """``C^k_def(g) = Der^(k-1)(g) = Hom(Lambda^k g, g)`` with the multiderivation differential."""
    validate_lie(g).raise_if_failed()
    n = g.dim
    k_max = n if k_max is None else k_max
    if not 0 <= k_max <= n:
        raise ValueError(f"k_max must lie in [0, {n}]")
    dims = {k: comb(n, k) * n for k in range(k_max + 1)}
    diffs = {}
    for k in range(k_max):
        tgt = {b: t for t, b in enumerate(cochain_basis(n, k + 1, n))}
        entries = {}
        for col, (idx, a) in enumerate(cochain_basis(n, k, n)):
            image = deformation_differential(Multiderivation(g, k - 1, {idx: _unit(n, a)}))
            for J, val in image.values.items():
                for b, x in enumerate(val):
                    if x:
                        entries[(tgt[(J, b)], col)] = x
        diffs[k] = RationalMatrix(len(tgt), dims[k], entries)
    return Complex((0, k_max), dims, diffs, closed_below=True, closed_above=(k_max == n))


# ---------------------------------------------------------------------------
# catalogue

def _from_one_based(n: int, table: Mapping[tuple[int, int], Mapping[int, int]], name: str) -> LieAlgebra:
    brackets = {}
    for (i, j), coeffs in table.items():
        vec = [0] * n
        for k, c in coeffs.items():
            vec[k - 1] = c
        brackets[(i - 1, j - 1)] = vec
    return LieAlgebra(n, brackets, name)


def abelian(n: int) -> LieAlgebra:
    return LieAlgebra(n, {}, f"abelian-R{n}")


def so3() -> LieAlgebra:
    return _from_one_based(3, {(1, 2): {3: 1}, (2, 3): {1: 1}, (1, 3): {2: -1}}, "so3")


def sl2() -> LieAlgebra:
    """Basis (e, f, h): [e, f] = h, [h, e] = 2e, [h, f] = -2f."""
    return _from_one_based(3, {(1, 2): {3: 1}, (1, 3): {1: -2}, (2, 3): {2: 2}}, "sl2")


def heisenberg() -> LieAlgebra:
    return _from_one_based(3, {(1, 2): {3: 1}}, "heisenberg")


def aff1() -> LieAlgebra:
    return _from_one_based(2, {(1, 2): {2: 1}}, "aff1")


def catalogue_algebras() -> dict[str, LieAlgebra]:
    gs = [abelian(1), abelian(2), abelian(3), so3(), sl2(), heisenberg(), aff1()]
    return {g.name: g for g in gs}
