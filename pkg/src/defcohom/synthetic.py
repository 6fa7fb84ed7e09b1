"""Seeded random instances: complexes with prescribed cohomology and chain maps.

Every complex is generated in split form ``C^k = H^k (+) B^k (+) E^k`` where
the differential maps ``E^k`` isomorphically onto ``B^(k+1)``, and then
conjugated degreewise by a random unimodular integer matrix.  In split form
every chain map is easy to write down, so :func:`random_chain_map` samples
from all chain maps rather than a special family.  None of this is used to
*check* anything: tests verify the generated objects with independent ranks.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .chain_complex import ChainMap, Complex
from .double_complex import DoubleComplex
from .exact_linalg import RationalMatrix, inverse


@dataclass(frozen=True)
class RandomComplexConfig:
    window: tuple[int, int] = (0, 4)
    max_dim: int = 5
    coeff_range: int = 2
    # force H^k = 0 for every k >= vanishing_from
    vanishing_from: int | None = None


@dataclass
class SplitComplex:
    complex: Complex
    h: dict[int, int]
    b: dict[int, int]
    e: dict[int, int]
    basis: dict[int, RationalMatrix] = field(repr=False)
    basis_inv: dict[int, RationalMatrix] = field(repr=False)

    def canonical_d(self, k: int) -> RationalMatrix:
        rows, cols = self.complex.dim(k + 1), self.complex.dim(k)
        if not rows or not cols:
            return RationalMatrix.zeros(rows, cols)
        off_e = self.h[k] + self.b[k]
        off_b = self.h[k + 1]
        return RationalMatrix(rows, cols, {(off_b + j, off_e + j): 1 for j in range(self.e[k])})


def _rand_entry(rng: random.Random, c: int) -> int:
    return rng.randint(-c, c)


def random_unimodular(rng: random.Random, n: int, c: int = 1) -> RationalMatrix:
    lower = RationalMatrix(n, n, {**{(i, i): 1 for i in range(n)},
                                  **{(i, j): _rand_entry(rng, c) for i in range(n) for j in range(i)}})
    upper = RationalMatrix(n, n, {**{(i, i): 1 for i in range(n)},
                                  **{(i, j): _rand_entry(rng, c) for i in range(n) for j in range(i + 1, n)}})
    perm = list(range(n))
    rng.shuffle(perm)
    p = RationalMatrix(n, n, {(i, perm[i]): 1 for i in range(n)})
    return p @ lower @ upper


def random_split_complex(rng: random.Random, cfg: RandomComplexConfig = RandomComplexConfig()) -> SplitComplex:
    lo, hi = cfg.window
    h, b, e = {}, {}, {}
    for k in range(lo, hi + 1):
        b[k] = e.get(k - 1, 0)
        room = cfg.max_dim - b[k]
        e[k] = rng.randint(0, room) if k < hi else 0
        vanish = cfg.vanishing_from is not None and k >= cfg.vanishing_from
        h[k] = 0 if vanish else rng.randint(0, room - e[k])
    dims = {k: h[k] + b[k] + e[k] for k in range(lo, hi + 1)}
    basis = {k: random_unimodular(rng, dims[k]) for k in dims}
    basis_inv = {k: inverse(m) for k, m in basis.items()}
    split = SplitComplex(Complex((lo, hi), dims, {}, closed_below=True, closed_above=True), h, b, e, basis, basis_inv)
    diffs = {k: basis[k + 1] @ split.canonical_d(k) @ basis_inv[k] for k in range(lo, hi)}
    split.complex = Complex((lo, hi), dims, diffs, closed_below=True, closed_above=True)
    return split


def random_chain_map(rng: random.Random, s: SplitComplex, t: SplitComplex, c: int = 2) -> ChainMap:
    """A random chain map ``s -> t`` (both windows must be the same)."""
    if s.complex.window != t.complex.window:
        raise ValueError("random_chain_map needs equal windows")
    lo, hi = s.complex.window
    canon: dict[int, RationalMatrix] = {}
    for k in range(lo, hi + 1):
        ns, nt = s.complex.dim(k), t.complex.dim(k)
        cols = []
        z_t = t.h[k] + t.b[k]
        for _ in range(s.h[k]):
            cols.append([_rand_entry(rng, c) if i < z_t else 0 for i in range(nt)])
        if s.b[k]:
            prev = canon[k - 1]
            off = s.h[k - 1] + s.b[k - 1]
            image = t.canonical_d(k - 1) @ prev.submatrix(range(prev.rows), range(off, off + s.e[k - 1]))
            cols += [list(col) for col in image.columns()]
        for _ in range(s.e[k]):
            cols.append([_rand_entry(rng, c) for _ in range(nt)])
        canon[k] = RationalMatrix.from_columns(cols, nt) if cols else RationalMatrix.zeros(nt, ns)
    comps = {k: t.basis[k] @ canon[k] @ s.basis_inv[k] for k in canon}
    return ChainMap(s.complex, t.complex, comps)


def random_map_pair(rng: random.Random, cfg: RandomComplexConfig = RandomComplexConfig(),
                    target_cfg: RandomComplexConfig | None = None) -> ChainMap:
    s = random_split_complex(rng, cfg)
    t = random_split_complex(rng, target_cfg or RandomComplexConfig(cfg.window, cfg.max_dim, cfg.coeff_range))
    return random_chain_map(rng, s, t, cfg.coeff_range)


# ---------------------------------------------------------------------------
# double complexes with nontrivial higher differentials

def kron(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    return RationalMatrix(a.rows * b.rows, a.cols * b.cols,
                          {(i * b.rows + k, j * b.cols + l): x * y
                           for (i, j), x in a.items() for (k, l), y in b.items()})


def tensor_double(a: Complex, b: Complex) -> DoubleComplex:
    """``D^(p,q) = A^p (x) B^q`` with ``delta = d_A (x) 1`` and ``d = 1 (x) d_B``; squares commute."""
    dims, hor, ver = {}, {}, {}
    for p in a.degrees:
        for q in b.degrees:
            dims[(p, q)] = a.dim(p) * b.dim(q)
            if p < a.window[1]:
                hor[(p, q)] = kron(a.d(p), RationalMatrix.identity(b.dim(q)))
            if q < b.window[1]:
                ver[(p, q)] = kron(RationalMatrix.identity(a.dim(p)), b.d(q))
    return DoubleComplex(a.window, b.window, dims, hor, ver)


def staircase(p_range: tuple[int, int], q_range: tuple[int, int], start: tuple[int, int],
              steps: int, horizontal_first: bool = True) -> DoubleComplex:
    """One-dimensional pieces along a path that alternately steps right and down.

    A right step is a ``delta`` arrow; a down step is a ``d`` arrow pointing
    back up from the lower piece.  Every piece is a pure source or a pure
    sink, so all composites vanish.  Long zig-zags carry higher spectral
    sequence differentials.
    """
    cells = [start]
    p, q = start
    for t in range(steps):
        if (t % 2 == 0) == horizontal_first:
            p += 1
        else:
            q -= 1
        cells.append((p, q))
    dims = {c: 1 for c in cells if p_range[0] <= c[0] <= p_range[1] and q_range[0] <= c[1] <= q_range[1]}
    hor, ver = {}, {}
    one = RationalMatrix.identity(1)
    for a, b in zip(cells, cells[1:]):
        if a not in dims or b not in dims:
            continue
        if b == (a[0] + 1, a[1]):
            hor[a] = one
        elif b == (a[0], a[1] - 1):
            ver[b] = one
    return DoubleComplex(p_range, q_range, dims, hor, ver)


def direct_sum_double(parts: list[DoubleComplex]) -> DoubleComplex:
    p_range, q_range = parts[0].p_range, parts[0].q_range
    dims = {b: sum(d.dim(*b) for d in parts) for b in parts[0].bidegrees}

    def diag(get, src, tgt):
        entries, r0, c0 = {}, 0, 0
        for d in parts:
            m = get(d)
            for (i, j), x in m.items():
                entries[(r0 + i, c0 + j)] = x
            r0 += d.dim(*tgt)
            c0 += d.dim(*src)
        return RationalMatrix(dims.get(tgt, 0), dims.get(src, 0), entries)

    hor, ver = {}, {}
    for (p, q) in parts[0].bidegrees:
        if parts[0].inside(p + 1, q):
            hor[(p, q)] = diag(lambda d: d.h(p, q), (p, q), (p + 1, q))
        if parts[0].inside(p, q + 1):
            ver[(p, q)] = diag(lambda d: d.v(p, q), (p, q), (p, q + 1))
    return DoubleComplex(p_range, q_range, dims, hor, ver)


def change_basis(dc: DoubleComplex, rng: random.Random) -> DoubleComplex:
    """Conjugate every piece by a random unimodular matrix; all laws are preserved."""
    basis = {b: random_unimodular(rng, dc.dim(*b)) for b in dc.bidegrees}
    inv = {b: inverse(m) for b, m in basis.items()}
    hor, ver = {}, {}
    for (p, q) in dc.bidegrees:
        if dc.inside(p + 1, q):
            hor[(p, q)] = basis[(p + 1, q)] @ dc.h(p, q) @ inv[(p, q)]
        if dc.inside(p, q + 1):
            ver[(p, q)] = basis[(p, q + 1)] @ dc.v(p, q) @ inv[(p, q)]
    return DoubleComplex(dc.p_range, dc.q_range, dict(dc.dims), hor, ver)


def random_double_complex(rng: random.Random, p_range: tuple[int, int] = (0, 3),
                          q_range: tuple[int, int] = (0, 2), max_dim: int = 2) -> DoubleComplex:
    """Sum of a tensor product, a few zig-zags of both orientations, in a scrambled basis."""
    lp = p_range[1] - p_range[0]
    lq = q_range[1] - q_range[0]
    a = random_split_complex(rng, RandomComplexConfig(p_range, max_dim)).complex
    b = random_split_complex(rng, RandomComplexConfig(q_range, max_dim)).complex
    parts = [tensor_double(a, b)]
    for _ in range(rng.randint(1, 3)):
        start = (rng.randint(p_range[0], p_range[1]), rng.randint(q_range[0], q_range[1]))
        parts.append(staircase(p_range, q_range, start, rng.randint(1, lp + lq), rng.random() < 0.5))
    return change_basis(direct_sum_double(parts), rng)
