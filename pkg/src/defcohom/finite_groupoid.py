"""Finite groupoids, their nerves and differentiable cohomology over the rationals.

A k-simplex of the nerve (k >= 1) is a string ``(g_1, ..., g_k)`` of arrows
with ``src(g_i) = tgt(g_(i+1))``; 0-simplices are objects, stored as 1-tuples
``(x,)``.  Faces::

    d_0 drops g_1,  d_i composes g_i g_(i+1),  d_k drops g_k
    (level 1: d_0 g = src g, d_1 g = tgt g)

Degeneracy ``s_i`` (1 <= i <= k+1) puts the unit in position i.  With rational
coefficients the positive-degree cohomology of a finite groupoid vanishes;
only H^0 (locally constant functions on orbits) survives.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Mapping

from .chain_complex import ChainMap, Complex, induced_map
from .exact_linalg import RationalMatrix, rank
from .reports import Report

Simplex = tuple[str, ...]


@dataclass(frozen=True, eq=False)
class FiniteGroupoid:
    """Objects, arrows and a composition table ``comp[(left, right)] = left o right``.

    ``left o right`` is defined when ``src(left) == tgt(right)``.
    """

    objects: tuple[str, ...]
    arrows: tuple[str, ...]
    src: Mapping[str, str]
    tgt: Mapping[str, str]
    unit: Mapping[str, str]
    inv: Mapping[str, str]
    comp: Mapping[tuple[str, str], str]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(sorted(self.objects)))
        object.__setattr__(self, "arrows", tuple(sorted(self.arrows)))
        object.__setattr__(self, "comp", {tuple(k): v for k, v in self.comp.items()})

    @cached_property
    def units(self) -> frozenset[str]:
        return frozenset(self.unit.values())

    def composable(self, left: str, right: str) -> bool:
        return self.src[left] == self.tgt[right]

    def orbits(self) -> list[frozenset[str]]:
        parent = {x: x for x in self.objects}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a in self.arrows:
            parent[find(self.src[a])] = find(self.tgt[a])
        groups: dict[str, set[str]] = {}
        for x in self.objects:
            groups.setdefault(find(x), set()).add(x)
        return sorted((frozenset(g) for g in groups.values()), key=min)


def validate_groupoid(g: FiniteGroupoid) -> Report:
    """Exhaustive axiom check.  Structural gaps are shape errors, failed laws are failures."""
    rep = Report(f"groupoid {g.name}".strip())
    objs, arrs = set(g.objects), set(g.arrows)
    if len(objs) != len(g.objects) or len(arrs) != len(g.arrows):
        rep.shape("duplicate labels")
    for a in g.arrows:
        for which, table in (("src", g.src), ("tgt", g.tgt)):
            if table.get(a) not in objs:
                rep.shape(f"arrow {a} has no valid {which}")
        if g.inv.get(a) not in arrs:
            rep.shape(f"arrow {a} has no inverse")
    for x in g.objects:
        if g.unit.get(x) not in arrs:
            rep.shape(f"object {x} has no unit")
    for (l, r), res in g.comp.items():
        if l not in arrs or r not in arrs or res not in arrs:
            rep.shape(f"composition entry ({l}, {r}) -> {res} uses unknown arrows")
    if rep.shape_errors:
        return rep
    for l, r in product(g.arrows, repeat=2):
        if g.composable(l, r):
            res = g.comp.get((l, r))
            if res is None:
                rep.shape(f"missing composite {l} o {r}")
            elif (g.src[res], g.tgt[res]) != (g.src[r], g.tgt[l]):
                rep.shape(f"{l} o {r} = {res} has wrong endpoints")
        elif (l, r) in g.comp:
            rep.shape(f"composite {l} o {r} given for a non-composable pair")
    if rep.shape_errors:
        return rep

    for x in g.objects:
        u = g.unit[x]
        if g.src[u] != x or g.tgt[u] != x:
            rep.fail(f"unit {u} of {x} is not a loop at {x}")
    for a in g.arrows:
        if g.comp[(g.unit[g.tgt[a]], a)] != a or g.comp[(a, g.unit[g.src[a]])] != a:
            rep.fail(f"unit law fails for {a}")
        b = g.inv[a]
        if g.src[b] != g.tgt[a] or g.tgt[b] != g.src[a]:
            rep.fail(f"inverse {b} of {a} has wrong endpoints")
            continue
        if g.comp[(b, a)] != g.unit[g.src[a]] or g.comp[(a, b)] != g.unit[g.tgt[a]]:
            rep.fail(f"inverse law fails for {a} with {b}")
    for a, b, c in product(g.arrows, repeat=3):
        if g.composable(a, b) and g.composable(b, c):
            lhs, rhs = g.comp[(g.comp[(a, b)], c)], g.comp[(a, g.comp[(b, c)])]
            if lhs != rhs:
                rep.fail(f"associativity fails on ({a}, {b}, {c}): {lhs} != {rhs}")
    return rep


# ---------------------------------------------------------------------------
# nerve

@dataclass(frozen=True)
class NerveLevel:
    k: int
    simplices: tuple[Simplex, ...]

    @cached_property
    def index(self) -> dict[Simplex, int]:
        return {s: i for i, s in enumerate(self.simplices)}

    def __len__(self) -> int:
        return len(self.simplices)


class Nerve:
    """Lazily enumerated nerve levels of a validated groupoid."""

    def __init__(self, g: FiniteGroupoid):
        validate_groupoid(g).raise_if_failed()
        self.g = g
        self._levels: dict[int, NerveLevel] = {0: NerveLevel(0, tuple((x,) for x in g.objects))}
        self._ending_at: dict[str, list[str]] = {x: [] for x in g.objects}
        for a in g.arrows:
            self._ending_at[g.tgt[a]].append(a)

    def level(self, k: int) -> NerveLevel:
        if k < 0:
            raise ValueError("nerve levels start at 0")
        if k not in self._levels:
            g = self.g
            if k == 1:
                strings = tuple((a,) for a in g.arrows)
            else:
                # appending in sorted order keeps the level lexicographic
                strings = tuple(s + (a,) for s in self.level(k - 1).simplices
                                for a in self._ending_at[g.src[s[-1]]])
            self._levels[k] = NerveLevel(k, strings)
        return self._levels[k]

    def face(self, i: int, s: Simplex, k: int) -> Simplex:
        """``d_i`` on a k-simplex (k >= 1)."""
        g = self.g
        if k == 1:
            return (g.src[s[0]],) if i == 0 else (g.tgt[s[0]],)
        if i == 0:
            return s[1:]
        if i == k:
            return s[:-1]
        return s[: i - 1] + (g.comp[(s[i - 1], s[i])],) + s[i + 1:]

    def degeneracy(self, i: int, s: Simplex, k: int) -> Simplex:
        """``s_i`` on a k-simplex, 1 <= i <= k+1: the unit goes to position i."""
        g = self.g
        if k == 0:
            return (g.unit[s[0]],)
        x = g.tgt[s[0]] if i == 1 else g.src[s[i - 2]]
        return s[: i - 1] + (g.unit[x],) + s[i - 1:]

    def is_degenerate(self, s: Simplex, k: int) -> bool:
        return k > 0 and any(a in self.g.units for a in s)


def nerve(g: FiniteGroupoid, k: int) -> NerveLevel:
    """The k-simplices in deterministic lexicographic order."""
    return Nerve(g).level(k)


@dataclass
class SimplicialMaps:
    """Index tables: ``faces[i][n]`` is the position of ``d_i`` of simplex n one level down;
    ``degeneracies[i - 1][n]`` is the position of ``s_i`` of simplex n one level up."""

    k: int
    faces: list[tuple[int, ...]]
    degeneracies: list[tuple[int, ...]]


def simplicial_maps(g: FiniteGroupoid, k: int, nv: Nerve | None = None) -> SimplicialMaps:
    nv = nv or Nerve(g)
    here = nv.level(k)
    faces = []
    if k >= 1:
        down = nv.level(k - 1).index
        faces = [tuple(down[nv.face(i, s, k)] for s in here.simplices) for i in range(k + 1)]
    up = nv.level(k + 1).index
    degs = [tuple(up[nv.degeneracy(i, s, k)] for s in here.simplices) for i in range(1, k + 2)]
    return SimplicialMaps(k, faces, degs)


def check_simplicial_identities(g: FiniteGroupoid, max_level: int) -> Report:
    """All face/degeneracy identities on levels up to ``max_level``.

    Written with 0-based degeneracy indices ``s_j = s_(j+1)`` of the nerve::

        d_i d_j = d_(j-1) d_i          (i < j)
        d_i s_j = s_(j-1) d_i          (i < j)
        d_j s_j = d_(j+1) s_j = id
        d_i s_j = s_j d_(i-1)          (i > j+1)
        s_i s_j = s_(j+1) s_i          (i <= j)
    """
    nv = Nerve(g)
    rep = Report(f"simplicial identities {g.name}".strip())
    maps = {k: simplicial_maps(g, k, nv) for k in range(max_level + 2)}

    def d(i, k, n):
        return maps[k].faces[i][n]

    def s(j, k, n):
        return maps[k].degeneracies[j][n]

    for k in range(max_level + 1):
        for n in range(len(nv.level(k))):
            if k >= 2:
                for j in range(k + 1):
                    for i in range(j):
                        if d(i, k - 1, d(j, k, n)) != d(j - 1, k - 1, d(i, k, n)):
                            rep.fail(f"d{i} d{j} != d{j - 1} d{i} at level {k}, simplex {n}")
            for j in range(k + 1):
                up = s(j, k, n)
                for i in range(k + 2):
                    lhs = d(i, k + 1, up)
                    if i in (j, j + 1):
                        rhs = n
                    elif i < j:
                        rhs = s(j - 1, k - 1, d(i, k, n))
                    else:
                        rhs = s(j, k - 1, d(i - 1, k, n))
                    if lhs != rhs:
                        rep.fail(f"d{i} s{j} identity fails at level {k}, simplex {n}")
                for i in range(j + 1):
                    if s(i, k + 1, up) != s(j + 1, k + 1, s(i, k, n)):
                        rep.fail(f"s{i} s{j} != s{j + 1} s{i} at level {k}, simplex {n}")
    return rep


# ---------------------------------------------------------------------------
# cochain complexes

def _coboundary(nv: Nerve, k: int) -> RationalMatrix:
    """``delta = sum_i (-1)^i d_i^*`` from functions on level k to level k+1."""
    src, tgt = nv.level(k), nv.level(k + 1)
    entries: dict[tuple[int, int], int] = {}
    for row, simplex in enumerate(tgt.simplices):
        for i in range(k + 2):
            col = src.index[nv.face(i, simplex, k + 1)]
            entries[(row, col)] = entries.get((row, col), 0) + (-1 if i % 2 else 1)
    return RationalMatrix(len(tgt), len(src), entries)


def differentiable_complex(g: FiniteGroupoid, k_max: int) -> Complex:
    """Functions on nerve levels 0..k_max; the top degree is window-truncated."""
    nv = Nerve(g)
    dims = {k: len(nv.level(k)) for k in range(k_max + 1)}
    diffs = {k: _coboundary(nv, k) for k in range(k_max)}
    labels = {k: tuple("|".join(s) for s in nv.level(k).simplices) for k in dims}
    return Complex((0, k_max), dims, diffs, labels=labels, closed_below=True, closed_above=False)


def normalized_complex(g: FiniteGroupoid, k_max: int) -> tuple[Complex, ChainMap]:
    """Cochains vanishing on degenerate simplices, with the inclusion into the full complex.

    In the basis of indicator functions this subcomplex is spanned by the
    indicators of simplices containing no unit arrow.
    """
    nv = Nerve(g)
    full = differentiable_complex(g, k_max)
    keep = {k: [n for n, s in enumerate(nv.level(k).simplices) if not nv.is_degenerate(s, k)]
            for k in full.degrees}
    dims = {k: len(v) for k, v in keep.items()}
    diffs = {}
    for k in range(k_max):
        delta = full.d(k)
        keep_set = set(keep[k + 1])
        # delta of a normalized cochain must again vanish on degenerate simplices
        for (r, c), _ in delta.submatrix(range(delta.rows), keep[k]).items():
            if r not in keep_set:  # pragma: no cover - would contradict the simplicial identities
                raise AssertionError(f"normalized cochains not closed under delta at degree {k}")
        diffs[k] = delta.submatrix(keep[k + 1], keep[k])
    labels = {k: tuple(full.labels[k][n] for n in keep[k]) for k in keep}
    sub = Complex((0, k_max), dims, diffs, labels=labels, closed_below=True, closed_above=False)
    incl = {k: RationalMatrix(full.dim(k), dims[k], {(n, j): 1 for j, n in enumerate(keep[k])})
            for k in full.degrees}
    return sub, ChainMap(sub, full, incl)


def quasi_isomorphism_degrees(f: ChainMap) -> dict[int, bool]:
    """Whether ``H^k(f)`` is invertible, for the degrees not truncated in either complex."""
    hf = induced_map(f)
    out = {}
    for k, m in hf.items():
        if f.source.truncated_at(k) or f.target.truncated_at(k):
            continue
        out[k] = m.rows == m.cols and rank(m) == m.rows
    return out


# ---------------------------------------------------------------------------
# catalogue constructors

def _build(name, objects, arrows, comp_fn, unit, inv) -> FiniteGroupoid:
    src = {a: s for a, (s, t) in arrows.items()}
    tgt = {a: t for a, (s, t) in arrows.items()}
    comp = {}
    for l, r in product(arrows, repeat=2):
        if src[l] == tgt[r]:
            comp[(l, r)] = comp_fn(l, r)
    return FiniteGroupoid(tuple(objects), tuple(arrows), src, tgt, unit, inv, comp, name)


def unit_groupoid(n: int = 3) -> FiniteGroupoid:
    """Only identity arrows: the discrete groupoid on n points."""
    objs = [f"x{i}" for i in range(n)]
    arrows = {f"1_{x}": (x, x) for x in objs}
    return _build(f"unit-{n}", objs, arrows, lambda l, r: l,
                  {x: f"1_{x}" for x in objs}, {a: a for a in arrows})


def cyclic_group(n: int) -> FiniteGroupoid:
    """Z/n as a one-object groupoid, arrows ``g0`` (unit) .. ``g(n-1)``."""
    lab = [f"g{i}" for i in range(n)]
    arrows = {a: ("*", "*") for a in lab}
    return _build(f"Z{n}", ["*"], arrows, lambda l, r: lab[(lab.index(l) + lab.index(r)) % n],
                  {"*": "g0"}, {lab[i]: lab[-i % n] for i in range(n)})


def pair_groupoid(n: int) -> FiniteGroupoid:
    """One arrow ``a{i}{j}: x{j} -> x{i}`` for every ordered pair of objects."""
    objs = [f"x{i}" for i in range(n)]
    arrows = {f"a{i}{j}": (f"x{j}", f"x{i}") for i in range(n) for j in range(n)}
    return _build(f"pair-{n}", objs, arrows, lambda l, r: f"a{l[1]}{r[2]}",
                  {f"x{i}": f"a{i}{i}" for i in range(n)},
                  {f"a{i}{j}": f"a{j}{i}" for i in range(n) for j in range(n)})


def action_groupoid(order: int, points: int, generator: tuple[int, ...]) -> FiniteGroupoid:
    """Z/order acting on ``points`` points, the generator acting by the given permutation.

    Arrow ``h{k}@p{x}`` is the pair (k, x) going from x to k.x.
    """
    perm = tuple(generator)
    if sorted(perm) != list(range(points)):
        raise ValueError("generator must be a permutation of the points")

    def act(k, x):
        for _ in range(k % order):
            x = perm[x]
        return x

    if any(act(order - 1, perm[x]) != x for x in range(points)):
        raise ValueError("generator order does not divide the group order")
    objs = [f"p{x}" for x in range(points)]
    arrows, key = {}, {}
    for k in range(order):
        for x in range(points):
            a = f"h{k}@p{x}"
            arrows[a] = (f"p{x}", f"p{act(k, x)}")
            key[a] = (k, x)

    def comp_fn(l, r):
        (k1, _), (k2, x2) = key[l], key[r]
        return f"h{(k1 + k2) % order}@p{x2}"

    inv = {a: f"h{-k % order}@p{act(k, x)}" for a, (k, x) in key.items()}
    return _build(f"Z{order}-on-{points}", objs, arrows, comp_fn,
                  {f"p{x}": f"h0@p{x}" for x in range(points)}, inv)


def disjoint_union(g1: FiniteGroupoid, g2: FiniteGroupoid) -> FiniteGroupoid:
    """Labels are prefixed with ``L.`` and ``R.`` to keep them apart."""
    def tag(p):
        return lambda s: f"{p}.{s}"

    parts = [(tag("L"), g1), (tag("R"), g2)]
    objects, arrows, src, tgt, unit, inv, comp = [], [], {}, {}, {}, {}, {}
    for t, g in parts:
        objects += [t(x) for x in g.objects]
        arrows += [t(a) for a in g.arrows]
        src.update({t(a): t(x) for a, x in g.src.items()})
        tgt.update({t(a): t(x) for a, x in g.tgt.items()})
        unit.update({t(x): t(a) for x, a in g.unit.items()})
        inv.update({t(a): t(b) for a, b in g.inv.items()})
        comp.update({(t(l), t(r)): t(v) for (l, r), v in g.comp.items()})
    return FiniteGroupoid(tuple(objects), tuple(arrows), src, tgt, unit, inv, comp,
                          f"{g1.name}+{g2.name}")


def catalogue_groupoids() -> dict[str, FiniteGroupoid]:
    gs = [unit_groupoid(3), cyclic_group(2), cyclic_group(3), pair_groupoid(2), pair_groupoid(3),
          action_groupoid(2, 2, (1, 0))]
    return {g.name: g for g in gs}
