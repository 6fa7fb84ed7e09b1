"""Exact linear algebra over the rationals.

Matrices are stored sparsely as ``{(row, col): Fraction}`` with no explicit
zeros.  Row reduction uses a dense list-of-lists kernel when
``rows * cols <= DENSE_CUTOFF`` and a dict-of-rows kernel otherwise.  In both
kernels the pivot in a column is the candidate entry of smallest bit size
(numerator and denominator together), which keeps coefficient growth down.

Vectors are plain tuples of :class:`fractions.Fraction`.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

DENSE_CUTOFF = 4096

Vector = tuple  # tuple[Fraction, ...]

_ZERO = Fraction(0)
_ONE = Fraction(1)


class ContainmentError(ValueError):
    """Raised when a subspace is not contained where it must be."""


def to_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError(f"refusing float {x!r}; pass an int, a 'p/q' string or a Fraction")
    return Fraction(x)


def format_rational(x: Fraction) -> str:
    """``"p/q"``, or ``"p"`` when the denominator is one."""
    return str(x)


def vector(values: Iterable) -> Vector:
    return tuple(to_rational(v) for v in values)


def zero_vector(n: int) -> Vector:
    return (_ZERO,) * n


def unit_vector(n: int, i: int) -> Vector:
    return tuple(_ONE if j == i else _ZERO for j in range(n))


def is_zero_vector(v: Sequence[Fraction]) -> bool:
    return not any(v)


def _cost(x: Fraction) -> int:
    return abs(x.numerator).bit_length() + x.denominator.bit_length()


class RationalMatrix:
    """Immutable sparse matrix over Q."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, entries: Mapping | Iterable = ()):
        if rows < 0 or cols < 0:
            raise ValueError(f"negative shape {(rows, cols)}")
        items = entries.items() if isinstance(entries, Mapping) else entries
        data = {}
        for (i, j), v in items:
            if not (0 <= i < rows and 0 <= j < cols):
                raise IndexError(f"entry {(i, j)} outside shape {(rows, cols)}")
            v = to_rational(v)
            if v:
                data[(i, j)] = v
            else:
                data.pop((i, j), None)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "_data", data)

    def __setattr__(self, name, value):
        raise AttributeError("RationalMatrix is immutable")

    @classmethod
    def _wrap(cls, rows: int, cols: int, data: dict) -> "RationalMatrix":
        # trusted constructor: data already clean
        m = object.__new__(cls)
        object.__setattr__(m, "rows", rows)
        object.__setattr__(m, "cols", cols)
        object.__setattr__(m, "_data", data)
        return m

    # -- constructors -------------------------------------------------
    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls._wrap(rows, cols, {})

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls._wrap(n, n, {(i, i): _ONE for i in range(n)})

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "RationalMatrix":
        rows = list(rows)
        if cols is None:
            cols = len(rows[0]) if rows else 0
        entries = {}
        for i, row in enumerate(rows):
            if len(row) != cols:
                raise ValueError(f"row {i} has length {len(row)}, expected {cols}")
            for j, v in enumerate(row):
                v = to_rational(v)
                if v:
                    entries[(i, j)] = v
        return cls._wrap(len(rows), cols, entries)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "RationalMatrix":
        entries = {}
        for j, col in enumerate(columns):
            if len(col) != rows:
                raise ValueError(f"column {j} has length {len(col)}, expected {rows}")
            for i, v in enumerate(col):
                v = to_rational(v)
                if v:
                    entries[(i, j)] = v
        return cls._wrap(rows, len(columns), entries)

    @classmethod
    def block(cls, blocks: Sequence[Sequence["RationalMatrix"]]) -> "RationalMatrix":
        """Assemble from a 2-d grid of blocks with consistent shapes."""
        heights = [row[0].rows for row in blocks]
        widths = [b.cols for b in blocks[0]] if blocks else []
        entries = {}
        r0 = 0
        for bi, row in enumerate(blocks):
            if len(row) != len(widths):
                raise ValueError("ragged block grid")
            c0 = 0
            for bj, b in enumerate(row):
                if b.rows != heights[bi] or b.cols != widths[bj]:
                    raise ValueError(f"block {(bi, bj)} has shape {b.shape}")
                for (i, j), v in b._data.items():
                    entries[(r0 + i, c0 + j)] = v
                c0 += widths[bj]
            r0 += heights[bi]
        return cls._wrap(sum(heights), sum(widths), entries)

    # -- access -------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def nnz(self) -> int:
        return len(self._data)

    def __getitem__(self, key) -> Fraction:
        i, j = key
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(key)
        return self._data.get((i, j), _ZERO)

    def items(self) -> Iterator[tuple[tuple[int, int], Fraction]]:
        """Nonzero entries in row-major order."""
        for key in sorted(self._data):
            yield key, self._data[key]

    def is_zero(self) -> bool:
        return not self._data

    def to_rows(self) -> list[list[Fraction]]:
        out = [[_ZERO] * self.cols for _ in range(self.rows)]
        for (i, j), v in self._data.items():
            out[i][j] = v
        return out

    def row(self, i: int) -> Vector:
        return tuple(self._data.get((i, j), _ZERO) for j in range(self.cols))

    def column(self, j: int) -> Vector:
        return tuple(self._data.get((i, j), _ZERO) for i in range(self.rows))

    def columns(self) -> list[Vector]:
        cols = [[_ZERO] * self.rows for _ in range(self.cols)]
        for (i, j), v in self._data.items():
            cols[j][i] = v
        return [tuple(c) for c in cols]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "RationalMatrix":
        rpos = {r: a for a, r in enumerate(rows)}
        cpos = {c: b for b, c in enumerate(cols)}
        data = {}
        for (i, j), v in self._data.items():
            if i in rpos and j in cpos:
                data[(rpos[i], cpos[j])] = v
        return RationalMatrix._wrap(len(rows), len(cols), data)

    # -- arithmetic ---------------------------------------------------
    @property
    def T(self) -> "RationalMatrix":
        return RationalMatrix._wrap(self.cols, self.rows, {(j, i): v for (i, j), v in self._data.items()})

    def __neg__(self) -> "RationalMatrix":
        return RationalMatrix._wrap(self.rows, self.cols, {k: -v for k, v in self._data.items()})

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        data = dict(self._data)
        for k, v in other._data.items():
            s = data.get(k, _ZERO) + v
            if s:
                data[k] = s
            else:
                data.pop(k, None)
        return RationalMatrix._wrap(self.rows, self.cols, data)

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        return self + (-other)

    def scale(self, c) -> "RationalMatrix":
        c = to_rational(c)
        if not c:
            return RationalMatrix.zeros(self.rows, self.cols)
        return RationalMatrix._wrap(self.rows, self.cols, {k: c * v for k, v in self._data.items()})

    def __matmul__(self, other):
        if isinstance(other, RationalMatrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            by_row: dict[int, list] = {}
            for (k, j), b in other._data.items():
                by_row.setdefault(k, []).append((j, b))
            acc: dict = {}
            for (i, k), a in self._data.items():
                for j, b in by_row.get(k, ()):
                    acc[(i, j)] = acc.get((i, j), _ZERO) + a * b
            return RationalMatrix._wrap(self.rows, other.cols, {k: v for k, v in acc.items() if v})
        v = other
        if len(v) != self.cols:
            raise ValueError(f"vector of length {len(v)} for matrix with {self.cols} columns")
        out = [_ZERO] * self.rows
        for (i, j), a in self._data.items():
            x = v[j]
            if x:
                out[i] += a * x
        return tuple(out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, frozenset(self._data.items())))

    def __repr__(self) -> str:
        if self.rows * self.cols <= 64:
            body = [[format_rational(x) for x in r] for r in self.to_rows()]
            return f"RationalMatrix({self.rows}x{self.cols}, {body})"
        return f"RationalMatrix({self.rows}x{self.cols}, nnz={self.nnz})"


# ---------------------------------------------------------------------------
# elimination kernels

def _rref_dense(a: list[list[Fraction]], ncols: int, reduce_above: bool) -> list[int]:
    m = len(a)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == m:
            break
        best, best_cost = -1, 0
        for i in range(r, m):
            x = a[i][c]
            if x:
                cost = _cost(x)
                if best < 0 or cost < best_cost:
                    best, best_cost = i, cost
        if best < 0:
            continue
        a[r], a[best] = a[best], a[r]
        prow = a[r]
        p = prow[c]
        if p != 1:
            inv = 1 / p
            for j in range(c, ncols):
                if prow[j]:
                    prow[j] *= inv
        nz = [j for j in range(c + 1, ncols) if prow[j]]
        start = 0 if reduce_above else r + 1
        for i in range(start, m):
            if i == r:
                continue
            row = a[i]
            f = row[c]
            if f:
                row[c] = _ZERO
                for j in nz:
                    row[j] -= f * prow[j]
        pivots.append(c)
        r += 1
    return pivots


def _rref_sparse(rows: list[dict], ncols: int, reduce_above: bool) -> tuple[list[dict], list[int]]:
    pending = [r for r in rows if r]
    done: list[dict] = []
    pivots = []
    for c in range(ncols):
        if not pending:
            break
        best, best_cost = -1, 0
        for idx, row in enumerate(pending):
            x = row.get(c)
            if x is not None:
                cost = _cost(x)
                if best < 0 or cost < best_cost:
                    best, best_cost = idx, cost
        if best < 0:
            continue
        prow = pending.pop(best)
        p = prow[c]
        if p != 1:
            inv = 1 / p
            prow = {j: v * inv for j, v in prow.items()}
        targets = pending + done if reduce_above else pending
        for row in targets:
            f = row.get(c)
            if f is None:
                continue
            for j, v in prow.items():
                s = row.get(j, _ZERO) - f * v
                if s:
                    row[j] = s
                else:
                    del row[j]
        pending = [r for r in pending if r]
        done.append(prow)
        pivots.append(c)
    return done, pivots


def rref(m: RationalMatrix) -> tuple[RationalMatrix, list[int]]:
    """Reduced row echelon form and the (strictly increasing) pivot columns."""
    if m.rows * m.cols <= DENSE_CUTOFF:
        a = m.to_rows()
        pivots = _rref_dense(a, m.cols, reduce_above=True)
        data = {(i, j): v for i, row in enumerate(a[: len(pivots)]) for j, v in enumerate(row) if v}
        return RationalMatrix._wrap(m.rows, m.cols, data), pivots
    rows: list[dict] = [dict() for _ in range(m.rows)]
    for (i, j), v in m._data.items():
        rows[i][j] = v
    done, pivots = _rref_sparse(rows, m.cols, reduce_above=True)
    data = {(i, j): v for i, row in enumerate(done) for j, v in row.items()}
    return RationalMatrix._wrap(m.rows, m.cols, data), pivots


def rank(m: RationalMatrix) -> int:
    if m.is_zero():
        return 0
    if m.rows * m.cols <= DENSE_CUTOFF:
        # forward elimination only; transpose when that gives fewer rows
        src = m if m.rows <= m.cols else m.T
        return len(_rref_dense(src.to_rows(), src.cols, reduce_above=False))
    rows: list[dict] = [dict() for _ in range(m.rows)]
    for (i, j), v in m._data.items():
        rows[i][j] = v
    return len(_rref_sparse(rows, m.cols, reduce_above=False)[1])


def kernel_basis(m: RationalMatrix) -> list[Vector]:
    """Basis of the right null space, one vector per free column in increasing order."""
    r, pivots = rref(m)
    pivot_set = set(pivots)
    rows = {}
    for (i, j), v in r._data.items():
        rows.setdefault(i, {})[j] = v
    basis = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        v = [_ZERO] * m.cols
        v[f] = _ONE
        for i, p in enumerate(pivots):
            x = rows.get(i, {}).get(f)
            if x:
                v[p] = -x
        basis.append(tuple(v))
    return basis


def image_basis(m: RationalMatrix) -> list[Vector]:
    """Canonical basis of the column space: the nonzero rows of rref(m.T)."""
    r, pivots = rref(m.T)
    return [r.row(i) for i in range(len(pivots))]


def row_space_basis(vectors: Sequence[Sequence], length: int) -> list[Vector]:
    if not vectors:
        return []
    return image_basis(RationalMatrix.from_columns(vectors, length))


def span_rank(vectors: Sequence[Sequence], length: int) -> int:
    if not vectors:
        return 0
    return rank(RationalMatrix.from_rows(vectors, length))


class Echelon:
    """Incrementally maintained reduced echelon basis of a subspace of Q^n.

    With ``track=True`` every stored row also carries its expression as a
    combination of the vectors passed to :meth:`add`, which is what
    :meth:`solve` uses.
    """

    def __init__(self, n: int, track: bool = False):
        self.n = n
        self.track = track
        self._rows: dict[int, list[Fraction]] = {}  # pivot column -> row with 1 at pivot
        self._combo: dict[int, dict[int, Fraction]] = {}
        self._added = 0

    @property
    def rank(self) -> int:
        return len(self._rows)

    def basis(self) -> list[Vector]:
        return [tuple(self._rows[p]) for p in sorted(self._rows)]

    def _reduce(self, v: Sequence[Fraction]) -> tuple[list[Fraction], dict[int, Fraction]]:
        w = list(v)
        combo: dict[int, Fraction] = {}
        for p, row in self._rows.items():
            f = w[p]
            if f:
                for j in range(self.n):
                    if row[j]:
                        w[j] -= f * row[j]
                if self.track:
                    for k, c in self._combo[p].items():
                        combo[k] = combo.get(k, _ZERO) + f * c
        return w, combo

    def reduce(self, v: Sequence) -> Vector:
        if len(v) != self.n:
            raise ValueError(f"vector of length {len(v)} in Q^{self.n}")
        return tuple(self._reduce([to_rational(x) for x in v])[0])

    def contains(self, v: Sequence) -> bool:
        return is_zero_vector(self.reduce(v))

    def add(self, v: Sequence) -> bool:
        """Add ``v`` to the spanning set; return True if the rank grew."""
        if len(v) != self.n:
            raise ValueError(f"vector of length {len(v)} in Q^{self.n}")
        idx = self._added
        self._added += 1
        w, combo = self._reduce([to_rational(x) for x in v])
        p = next((j for j in range(self.n) if w[j]), None)
        if p is None:
            return False
        # w = v - sum(combo) ; normalise so w[p] == 1
        inv = 1 / w[p]
        w = [x * inv for x in w]
        if self.track:
            c = {k: -x * inv for k, x in combo.items() if x}
            c[idx] = c.get(idx, _ZERO) + inv
            combo = c
        for q, row in self._rows.items():
            f = row[p]
            if f:
                for j in range(self.n):
                    if w[j]:
                        row[j] -= f * w[j]
                if self.track:
                    qc = self._combo[q]
                    for k, x in combo.items():
                        s = qc.get(k, _ZERO) - f * x
                        if s:
                            qc[k] = s
                        else:
                            qc.pop(k, None)
        self._rows[p] = w
        if self.track:
            self._combo[p] = combo
        return True

    def solve(self, v: Sequence) -> Vector | None:
        """Coefficients of ``v`` in the added vectors (which must be independent), or None."""
        if not self.track:
            raise RuntimeError("solve() needs track=True")
        w, combo = self._reduce([to_rational(x) for x in v])
        if any(w):
            return None
        return tuple(combo.get(k, _ZERO) for k in range(self._added))


def quotient_basis(U: Sequence[Sequence], W: Sequence[Sequence]) -> list[Vector]:
    """Vectors completing a basis of span(W) to a basis of span(U).

    Each returned vector is the normal form of an element of U modulo the
    span of W and the previously returned vectors.
    """
    vecs = list(U) + list(W)
    if not vecs:
        return []
    n = len(vecs[0])
    if any(len(v) != n for v in vecs):
        raise ValueError("vectors of different lengths")
    ech = Echelon(n)
    for w in W:
        ech.add(w)
    reps = []
    for u in U:
        r = ech.reduce(u)
        if any(r):
            ech.add(r)
            reps.append(r)
    if ech.rank != span_rank(list(U), n):
        raise ContainmentError("span(W) is not contained in span(U)")
    return reps


class Subquotient:
    """The space span(numerator) / span(denominator) with chosen representatives."""

    def __init__(self, numerator: Sequence[Sequence], denominator: Sequence[Sequence], n: int):
        self.n = n
        den = Echelon(n)
        for w in denominator:
            den.add(w)
        self.denominator_basis = den.basis()
        self.reps = quotient_basis(list(numerator), self.denominator_basis)
        self._solver = Echelon(n, track=True)
        for v in self.denominator_basis + self.reps:
            self._solver.add(v)

    @property
    def dim(self) -> int:
        return len(self.reps)

    def contains(self, v: Sequence) -> bool:
        return self._solver.solve(v) is not None

    def coordinates(self, v: Sequence) -> Vector:
        """Coordinates of the class of ``v`` in the representative basis."""
        x = self._solver.solve(v)
        if x is None:
            raise ContainmentError("vector is not in the numerator space")
        return x[len(self.denominator_basis):]

    def is_zero_class(self, v: Sequence) -> bool:
        return is_zero_vector(self.coordinates(v))


def inverse(m: RationalMatrix) -> RationalMatrix:
    if m.rows != m.cols:
        raise ValueError(f"inverse of non-square {m.shape} matrix")
    n = m.rows
    r, pivots = rref(RationalMatrix.block([[m, RationalMatrix.identity(n)]]))
    if pivots[:n] != list(range(n)) or len(pivots) > n:
        raise ZeroDivisionError("matrix is singular")
    return r.submatrix(range(n), range(n, 2 * n))
