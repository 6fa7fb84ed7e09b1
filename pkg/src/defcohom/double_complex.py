"""Bounded double complexes, totalization and their two spectral sequences.

Conventions: ``horizontal[(p, q)]`` maps ``D^{p,q} -> D^{p+1,q}``,
``vertical[(p, q)]`` maps ``D^{p,q} -> D^{p,q+1}``, squares *commute*, and the
total differential is ``delta + (-1)^p d``.

Pages are computed from the filtration of the total complex by explicit
subquotients::

    Z_r^s = {x in F^s : Dx in F^(s+r)}
    E_r^s = Z_r^s / (Z_(r-1)^(s+1) + D Z_(r-1)^(s-r+1))

"rows" filters by q: E_1 is row (horizontal) cohomology, d_1 is induced by the
vertical maps and d_r has bidegree (1-r, r).  "cols" filters by p: E_1 is
column cohomology and d_r has bidegree (r, 1-r).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Mapping

from .chain_complex import (
    ChainMap,
    Complex,
    ExactSequence,
    cohomology_dims,
    exactness,
    symplectic_model,
)
from .exact_linalg import (
    RationalMatrix,
    Subquotient,
    Vector,
    kernel_basis,
    rank,
)
from .reports import Report, ValidationError

Bidegree = tuple[int, int]

ROWS = "rows"
COLS = "cols"
_DIRECTION_ALIASES = {"rows": ROWS, "rows-first": ROWS, "cols": COLS, "columns": COLS, "columns-first": COLS}


@dataclass(frozen=True, eq=False)
class DoubleComplex:
    p_range: tuple[int, int]
    q_range: tuple[int, int]
    dims: Mapping[Bidegree, int]
    horizontal: Mapping[Bidegree, RationalMatrix] = field(default_factory=dict)
    vertical: Mapping[Bidegree, RationalMatrix] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "p_range", tuple(self.p_range))
        object.__setattr__(self, "q_range", tuple(self.q_range))
        for name in ("dims", "horizontal", "vertical"):
            object.__setattr__(self, name, {tuple(k): v for k, v in getattr(self, name).items()})

    def inside(self, p: int, q: int) -> bool:
        return self.p_range[0] <= p <= self.p_range[1] and self.q_range[0] <= q <= self.q_range[1]

    def dim(self, p: int, q: int) -> int:
        return self.dims.get((p, q), 0) if self.inside(p, q) else 0

    def h(self, p: int, q: int) -> RationalMatrix:
        m = self.horizontal.get((p, q))
        if m is not None and self.inside(p, q) and self.inside(p + 1, q):
            return m
        return RationalMatrix.zeros(self.dim(p + 1, q), self.dim(p, q))

    def v(self, p: int, q: int) -> RationalMatrix:
        m = self.vertical.get((p, q))
        if m is not None and self.inside(p, q) and self.inside(p, q + 1):
            return m
        return RationalMatrix.zeros(self.dim(p, q + 1), self.dim(p, q))

    @property
    def bidegrees(self) -> list[Bidegree]:
        (p0, p1), (q0, q1) = self.p_range, self.q_range
        return [(p, q) for p in range(p0, p1 + 1) for q in range(q0, q1 + 1)]

    @property
    def total_range(self) -> tuple[int, int]:
        return (self.p_range[0] + self.q_range[0], self.p_range[1] + self.q_range[1])

    def transpose(self) -> "DoubleComplex":
        return DoubleComplex(
            self.q_range,
            self.p_range,
            {(q, p): n for (p, q), n in self.dims.items()},
            {(q, p): m for (p, q), m in self.vertical.items()},
            {(q, p): m for (p, q), m in self.horizontal.items()},
        )

    @cached_property
    def _total(self) -> "_Total":
        validate_double(self).raise_if_failed()
        return _Total(self)


def validate_double(dc: DoubleComplex) -> Report:
    rep = Report("double complex")
    for (p, q), n in dc.dims.items():
        if n < 0:
            rep.shape(f"negative dimension at {(p, q)}")
    for name, maps, step in (("horizontal", dc.horizontal, (1, 0)), ("vertical", dc.vertical, (0, 1))):
        for (p, q), m in maps.items():
            tp, tq = p + step[0], q + step[1]
            if not (dc.inside(p, q) and dc.inside(tp, tq)):
                if not m.is_zero():
                    rep.shape(f"{name} map at {(p, q)} leaves the grid")
                continue
            want = (dc.dim(tp, tq), dc.dim(p, q))
            if m.shape != want:
                rep.shape(f"{name} map at {(p, q)} has shape {m.shape}, expected {want}")
    if rep.shape_errors:
        return rep
    for p, q in dc.bidegrees:
        if not (dc.h(p + 1, q) @ dc.h(p, q)).is_zero():
            rep.fail(f"horizontal^2 != 0 at {(p, q)}")
        if not (dc.v(p, q + 1) @ dc.v(p, q)).is_zero():
            rep.fail(f"vertical^2 != 0 at {(p, q)}")
        if dc.v(p + 1, q) @ dc.h(p, q) != dc.h(p, q + 1) @ dc.v(p, q):
            rep.fail(f"square at {(p, q)} does not commute")
    return rep


class _Total:
    """Total complex together with the coordinate bookkeeping pages need."""

    def __init__(self, dc: DoubleComplex):
        self.dc = dc
        lo, hi = dc.total_range
        self.offsets: dict[int, dict[Bidegree, int]] = {}
        dims = {}
        for n in range(lo, hi + 1):
            off, pos = {}, 0
            for p in range(dc.p_range[0], dc.p_range[1] + 1):
                q = n - p
                if dc.inside(p, q):
                    off[(p, q)] = pos
                    pos += dc.dim(p, q)
            self.offsets[n] = off
            dims[n] = pos
        diffs = {}
        for n in range(lo, hi):
            entries = {}
            for (p, q), c0 in self.offsets[n].items():
                for (i, j), x in dc.h(p, q).items():
                    entries[(self.offsets[n + 1][(p + 1, q)] + i, c0 + j)] = x
                sign = -1 if p % 2 else 1
                for (i, j), x in dc.v(p, q).items():
                    r0 = self.offsets[n + 1][(p, q + 1)]
                    entries[(r0 + i, c0 + j)] = entries.get((r0 + i, c0 + j), 0) + sign * x
            diffs[n] = RationalMatrix(dims[n + 1], dims[n], entries)
        self.complex = Complex((lo, hi), dims, diffs, closed_below=True, closed_above=True)

    def coords(self, n: int, pred) -> list[int]:
        """Total-degree-n coordinates lying in pieces whose bidegree satisfies ``pred``."""
        out = []
        for (p, q), c0 in self.offsets.get(n, {}).items():
            if pred(p, q):
                out.extend(range(c0, c0 + self.dc.dim(p, q)))
        return out


def total(dc: DoubleComplex) -> Complex:
    """``Tot^n = (+)_{p+q=n} D^{p,q}`` with differential ``delta + (-1)^p d``."""
    return dc._total.complex


def _direction(direction: str) -> str:
    try:
        return _DIRECTION_ALIASES[direction]
    except KeyError:
        raise ValueError(f"unknown direction {direction!r}; use 'rows' or 'cols'") from None


@dataclass
class SpectralPage:
    r: int
    direction: str
    entries: dict[Bidegree, int]
    differentials: dict[Bidegree, RationalMatrix]
    reps: dict[Bidegree, list[Vector]] = field(default_factory=dict, repr=False)

    def target(self, p: int, q: int) -> Bidegree:
        r = self.r
        return (p - r + 1, q + r) if self.direction == ROWS else (p + r, q - r + 1)

    def source(self, p: int, q: int) -> Bidegree:
        r = self.r
        return (p + r - 1, q - r) if self.direction == ROWS else (p - r, q + r - 1)

    @property
    def is_degenerate(self) -> bool:
        return all(m.is_zero() for m in self.differentials.values())

    def total_dims(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for (p, q), n in self.entries.items():
            out[p + q] = out.get(p + q, 0) + n
        return out


class _PageEngine:
    def __init__(self, dc: DoubleComplex, direction: str):
        self.dc = dc
        self.tot = dc._total
        self.direction = direction
        self._z: dict = {}

    def filt(self, p: int, q: int) -> int:
        return q if self.direction == ROWS else p

    def bidegree(self, s: int, n: int) -> Bidegree:
        return (n - s, s) if self.direction == ROWS else (s, n - s)

    def z(self, r: int, s: int, n: int) -> list[Vector]:
        """Basis of ``Z_r^{s}`` in total degree n, as vectors of Tot^n."""
        key = (r, s, n)
        if key in self._z:
            return self._z[key]
        total_c = self.tot.complex
        dim_n = total_c.dim(n)
        cols = self.tot.coords(n, lambda p, q: self.filt(p, q) >= s)
        if not cols:
            out: list[Vector] = []
        else:
            rows = self.tot.coords(n + 1, lambda p, q: self.filt(p, q) < s + r)
            d = total_c.d(n).submatrix(rows, cols)
            out = []
            for kv in kernel_basis(d):
                v = [Fraction(0)] * dim_n
                for c, x in zip(cols, kv):
                    v[c] = x
                out.append(tuple(v))
        self._z[key] = out
        return out

    def page(self, r: int) -> tuple[dict[Bidegree, Subquotient], dict[Bidegree, RationalMatrix]]:
        spaces: dict[Bidegree, Subquotient] = {}
        d_tot = self.tot.complex.d
        for p, q in self.dc.bidegrees:
            s, n = self.filt(p, q), p + q
            num = self.z(r, s, n)
            den = list(self.z(r - 1, s + 1, n))
            den += [d_tot(n - 1) @ x for x in self.z(r - 1, s - r + 1, n - 1)]
            spaces[(p, q)] = Subquotient(num, den, self.tot.complex.dim(n))
        diffs = {}
        for (p, q), sq in spaces.items():
            s, n = self.filt(p, q), p + q
            tgt = self.bidegree(s + r, n + 1)
            tsq = spaces.get(tgt)
            rows = tsq.dim if tsq is not None else 0
            cols = []
            for x in sq.reps:
                # off the grid the target page is zero, so the class of Dx vanishes
                cols.append(tsq.coordinates(d_tot(n) @ x) if tsq is not None else ())
            diffs[(p, q)] = RationalMatrix.from_columns(cols, rows) if cols else RationalMatrix.zeros(rows, 0)
        return spaces, diffs


def stabilization_bound(dc: DoubleComplex) -> int:
    """A page index after which every bounded spectral sequence of ``dc`` has degenerated."""
    lp = dc.p_range[1] - dc.p_range[0] + 1
    lq = dc.q_range[1] - dc.q_range[0] + 1
    return max(lp, lq) + 1


def spectral_pages(dc: DoubleComplex, direction: str, r_max: int) -> list[SpectralPage]:
    """Pages ``E_1 .. E_{r_max}`` with their dimensions and ``d_r`` matrices."""
    if r_max < 1:
        raise ValueError("r_max must be at least 1")
    direction = _direction(direction)
    eng = _PageEngine(dc, direction)
    pages = []
    for r in range(1, r_max + 1):
        spaces, diffs = eng.page(r)
        pages.append(SpectralPage(
            r, direction,
            {b: sq.dim for b, sq in spaces.items()},
            diffs,
            {b: sq.reps for b, sq in spaces.items()},
        ))
    return pages


def e_infinity(dc: DoubleComplex, direction: str) -> SpectralPage:
    return spectral_pages(dc, direction, stabilization_bound(dc))[-1]


def stable_page(pages: list[SpectralPage]) -> int | None:
    """First r such that E_r and every later computed page agree with zero differentials."""
    for i in range(len(pages)):
        tail = pages[i:]
        if all(pg.is_degenerate for pg in tail) and all(pg.entries == tail[0].entries for pg in tail):
            return pages[i].r
    return None


def page_cohomology_dims(page: SpectralPage) -> dict[Bidegree, int]:
    """Dimensions of ``H(E_r, d_r)``, from ranks of the page differentials alone."""
    out = {}
    for (p, q), n in page.entries.items():
        out_rank = rank(page.differentials[(p, q)])
        src = page.source(p, q)
        in_rank = rank(page.differentials[src]) if src in page.differentials else 0
        out[(p, q)] = n - out_rank - in_rank
    return out


# ---------------------------------------------------------------------------
# two-row double complexes

def two_row(vertical: ChainMap) -> DoubleComplex:
    """Two-row double complex: row 0 = source, row 1 = target, vertical maps = components."""
    s, t = vertical.source, vertical.target
    if s.window != t.window:
        raise ValueError("two_row needs both rows on the same window")
    lo, hi = s.window
    dims, hor, ver = {}, {}, {}
    for p in range(lo, hi + 1):
        dims[(p, 0)], dims[(p, 1)] = s.dim(p), t.dim(p)
        ver[(p, 0)] = vertical.component(p)
        if p < hi:
            hor[(p, 0)], hor[(p, 1)] = s.d(p), t.d(p)
    return DoubleComplex((lo, hi), (0, 1), dims, hor, ver)


def rows_of(dc: DoubleComplex) -> ChainMap:
    """Inverse of :func:`two_row`."""
    if dc.q_range != (0, 1):
        raise ValueError("expected q-range (0, 1)")
    lo, hi = dc.p_range
    rows = []
    for q in (0, 1):
        rows.append(Complex((lo, hi), {p: dc.dim(p, q) for p in range(lo, hi + 1)},
                            {p: dc.h(p, q) for p in range(lo, hi)}, closed_below=True, closed_above=True))
    return ChainMap(rows[0], rows[1], {p: dc.v(p, 0) for p in range(lo, hi + 1)})


def phi_isomorphism(vertical: ChainMap) -> ChainMap:
    """``(zeta, omega) -> (zeta, (-1)^n omega)`` from the symplectic model to Tot of the two-row complex."""
    model = symplectic_model(vertical.source, vertical.target, vertical)
    tot_ = two_row(vertical)._total
    comps = {}
    for n in model.degrees:
        a, b = model.layout.sizes(n)
        entries = {}
        offs = tot_.offsets.get(n, {})
        for i in range(a):
            entries[(offs[(n, 0)] + i, i)] = 1
        for j in range(b):
            entries[(offs[(n - 1, 1)] + j, a + j)] = -1 if n % 2 else 1
        comps[n] = RationalMatrix(tot_.complex.dim(n), a + b, entries)
    return ChainMap(model, tot_.complex, comps)


@dataclass
class TwoRowReport:
    ok: bool
    total: dict[int, int]
    rows_e2: dict[Bidegree, int]
    formula_e2: dict[Bidegree, int]
    cols_e3: dict[Bidegree, int]
    rows_stable_at: int | None
    cols_stable_at: int | None
    mismatches: list[str]


def _null_space_dim(m: RationalMatrix) -> int:
    return m.cols - rank(m)


def _formula_e2(dc: DoubleComplex) -> dict[Bidegree, int]:
    """Rows-first E_2 straight from its subquotient description, without pages.

    E_2^{p,0} = {x : delta x = 0, d x in im delta} / im delta
    E_2^{p,1} = ker delta / (im delta + d(ker delta on row 0))
    """
    lo, hi = dc.p_range
    out = {}
    for p in range(lo, hi + 1):
        h0, h1 = dc.h(p, 0), dc.h(p, 1)
        prev0, prev1 = dc.h(p - 1, 0), dc.h(p - 1, 1)
        v = dc.v(p, 0)
        # x in row 0 with delta x = 0 and v x = delta_1 y for some y
        stacked = RationalMatrix.block([
            [h0, RationalMatrix.zeros(h0.rows, prev1.cols)],
            [v, -prev1],
        ])
        pairs = kernel_basis(stacked)
        xs = [pr[: dc.dim(p, 0)] for pr in pairs]
        numerator0 = rank(RationalMatrix.from_columns(xs, dc.dim(p, 0))) if xs else 0
        out[(p, 0)] = numerator0 - rank(prev0)
        # row 1
        z1 = _null_space_dim(h1)
        z0 = kernel_basis(h0)
        gens = prev1.columns() + [v @ x for x in z0]
        den = rank(RationalMatrix.from_columns(gens, dc.dim(p, 1))) if gens else 0
        out[(p, 1)] = z1 - den
    return out


def two_row_check(dc: DoubleComplex) -> TwoRowReport:
    """Degeneration checks for a double complex concentrated in rows q = 0, 1."""
    for (p, q), n in dc.dims.items():
        if n and q not in (0, 1):
            rep = Report("two-row double complex")
            rep.shape(f"nonzero piece at {(p, q)} outside rows 0, 1")
            raise ValidationError(rep)
    if dc.q_range != (0, 1):
        dc = DoubleComplex(dc.p_range, (0, 1), {k: v for k, v in dc.dims.items() if k[1] in (0, 1)},
                           {k: m for k, m in dc.horizontal.items() if k[1] in (0, 1)},
                           {k: m for k, m in dc.vertical.items() if k[1] == 0})
    h_tot = cohomology_dims(total(dc))
    bound = stabilization_bound(dc)
    rows_pages = spectral_pages(dc, ROWS, bound)
    cols_pages = spectral_pages(dc, COLS, bound)
    e2 = rows_pages[1].entries
    formula = _formula_e2(dc)
    mism = []
    if e2 != formula:
        mism.append(f"rows-first E_2 {e2} != direct subquotients {formula}")
    for k, hk in h_tot.items():
        s = e2.get((k, 0), 0) + e2.get((k - 1, 1), 0)
        if s != hk:
            mism.append(f"H^{k}(Tot) = {hk} but E_2^({k},0) + E_2^({k - 1},1) = {s}")
    rows_at, cols_at = stable_page(rows_pages), stable_page(cols_pages)
    if rows_at is None or rows_at > 2:
        mism.append(f"rows-first sequence stabilizes at {rows_at}, expected <= 2")
    if cols_at is None or cols_at > 3:
        mism.append(f"columns-first sequence stabilizes at {cols_at}, expected <= 3")
    return TwoRowReport(not mism, h_tot, e2, formula, cols_pages[2].entries, rows_at, cols_at, mism)


# ---------------------------------------------------------------------------
# the truncated sequence for proper groupoids

@dataclass
class TruncatedSequence:
    sequence: ExactSequence
    isomorphisms: dict[int, RationalMatrix]
    isomorphisms_ok: bool

    @property
    def length(self) -> int:
        return len(self.sequence.nodes)

    @property
    def ok(self) -> bool:
        return self.sequence.is_exact and self.isomorphisms_ok


def seven_term_extract(les: ExactSequence, vanishing_from: int) -> TruncatedSequence:
    """Cut a cone sequence where the source cohomology starts to vanish.

    Requires ``H^k(source) = 0`` for every ``k >= vanishing_from`` present in
    ``les``.  Returns the exact sequence ``0 -> ... -> H^v(cone) -> 0`` and the
    isomorphisms ``H^(k-1)(target) -> H^k(cone)`` for ``k > v``.
    """
    bad = [n for n in les.nodes if n.space == "source" and n.degree >= vanishing_from and n.dim]
    if bad:
        rep = Report("vanishing hypothesis")
        for n in bad:
            rep.fail(f"{n.label} has dimension {n.dim}, expected 0")
        raise ValidationError(rep)
    end = les.index("cone", vanishing_from)
    start = 0
    while start < end and les.nodes[start].dim == 0 and les.nodes[start].space == "target":
        start += 1
    nodes = les.nodes[start:end + 1]
    maps = les.maps[start:end]
    seq = ExactSequence(nodes, maps, exactness(nodes, maps))
    isos, ok = {}, True
    for i, n in enumerate(les.nodes):
        if n.space == "cone" and n.degree > vanishing_from:
            m = les.maps[i - 1]
            isos[n.degree] = m
            ok = ok and m.rows == m.cols and rank(m) == m.rows
    return TruncatedSequence(seq, isos, ok)
