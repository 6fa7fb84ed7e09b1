"""Cochain complexes, chain maps, cohomology and mapping cones.

Complexes live on a finite window ``[lo, hi]`` of degrees and are treated as
zero outside it.  ``closed_below`` / ``closed_above`` record whether the
object being modelled really is zero past that end; when it is not, the
cohomology in the end degree is reported with ``truncated=True``.

Cone convention.  For a chain map ``f: S -> T`` the cone has
``Cone(f)^n = S^n (+) T^(n-1)`` and differential ``D(c, Y) = (dc, f c - dY)``.
Its cohomology sits in the long exact sequence

    ... -> H^(k-1)(T) -> H^k(Cone) -> H^k(S) --H(f)--> H^k(T) -> H^(k+1)(Cone) -> ...
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

from .exact_linalg import (
    RationalMatrix,
    Subquotient,
    Vector,
    kernel_basis,
    rank,
    unit_vector,
    zero_vector,
)
from .reports import Report


@dataclass(frozen=True)
class ConeLayout:
    """Block decomposition ``Cone^n = first^n (+) second^(n-1)`` with component tags."""

    splits: Mapping[int, tuple[int, int]]
    tags: tuple[str, str] = ("c", "Y")

    def sizes(self, n: int) -> tuple[int, int]:
        return self.splits.get(n, (0, 0))

    def join(self, n: int, first: Sequence, second: Sequence) -> Vector:
        a, b = self.sizes(n)
        if len(first) != a or len(second) != b:
            raise ValueError(f"degree {n} expects blocks of sizes {(a, b)}")
        return tuple(first) + tuple(second)

    def first(self, n: int, v: Sequence) -> Vector:
        return tuple(v[: self.sizes(n)[0]])

    def second(self, n: int, v: Sequence) -> Vector:
        return tuple(v[self.sizes(n)[0]:])


@dataclass(frozen=True, eq=False)
class Complex:
    window: tuple[int, int]
    dims: Mapping[int, int]
    differentials: Mapping[int, RationalMatrix] = field(default_factory=dict)
    labels: Mapping[int, tuple[str, ...]] | None = None
    closed_below: bool = False
    closed_above: bool = False
    layout: ConeLayout | None = None

    def __post_init__(self):
        lo, hi = self.window
        if lo > hi:
            raise ValueError(f"empty window {self.window}")
        object.__setattr__(self, "window", (int(lo), int(hi)))
        object.__setattr__(self, "dims", {int(k): int(v) for k, v in self.dims.items()})
        object.__setattr__(self, "differentials", {int(k): m for k, m in self.differentials.items()})

    @property
    def degrees(self) -> range:
        return range(self.window[0], self.window[1] + 1)

    def dim(self, k: int) -> int:
        lo, hi = self.window
        return self.dims.get(k, 0) if lo <= k <= hi else 0

    def d(self, k: int) -> RationalMatrix:
        """Differential ``C^k -> C^(k+1)`` (zero outside the window)."""
        m = self.differentials.get(k)
        lo, hi = self.window
        if m is not None and lo <= k < hi:
            return m
        return RationalMatrix.zeros(self.dim(k + 1), self.dim(k))

    def euler_characteristic(self) -> int:
        return sum((-1) ** (k % 2) * self.dim(k) for k in self.degrees)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Complex):
            return NotImplemented
        if self.window != other.window:
            return False
        return all(self.dim(k) == other.dim(k) and self.d(k) == other.d(k) for k in self.degrees)

    __hash__ = None

    def truncated_at(self, k: int) -> bool:
        lo, hi = self.window
        return (k == lo and not self.closed_below) or (k == hi and not self.closed_above)

    @cached_property
    def _cohomology(self) -> dict[int, "CohomologyGroup"]:
        validate_complex(self).raise_if_failed()
        out = {}
        for k in self.degrees:
            n = self.dim(k)
            z = kernel_basis(self.d(k)) if self.dim(k + 1) else [unit_vector(n, i) for i in range(n)]
            b = self.d(k - 1).columns()
            space = Subquotient(z, b, n)
            out[k] = CohomologyGroup(k, space, self.truncated_at(k))
        return out


@dataclass(frozen=True)
class CohomologyGroup:
    degree: int
    space: Subquotient
    truncated: bool = False

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def reps(self) -> list[Vector]:
        return self.space.reps

    def coordinates(self, v: Sequence) -> Vector:
        return self.space.coordinates(v)


def zero_group(degree: int) -> CohomologyGroup:
    return CohomologyGroup(degree, Subquotient([], [], 0))


@dataclass(frozen=True, eq=False)
class ChainMap:
    source: Complex
    target: Complex
    components: Mapping[int, RationalMatrix] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "components", {int(k): m for k, m in self.components.items()})

    @property
    def degrees(self) -> range:
        lo = min(self.source.window[0], self.target.window[0])
        hi = max(self.source.window[1], self.target.window[1])
        return range(lo, hi + 1)

    def component(self, k: int) -> RationalMatrix:
        m = self.components.get(k)
        if m is not None and self.source.dim(k) and self.target.dim(k):
            return m
        return RationalMatrix.zeros(self.target.dim(k), self.source.dim(k))

    def __call__(self, k: int, v: Sequence) -> Vector:
        return self.component(k) @ v


# ---------------------------------------------------------------------------
# validation

def validate_complex(c: Complex) -> Report:
    """Check matrix shapes, then ``d^2 = 0`` at every degree of the window."""
    rep = Report("complex")
    lo, hi = c.window
    for k, n in c.dims.items():
        if n < 0:
            rep.shape(f"negative dimension {n} in degree {k}")
    for k, m in c.differentials.items():
        if not lo <= k < hi:
            if not m.is_zero():
                rep.shape(f"nonzero differential stored at degree {k} outside window {c.window}")
            continue
        want = (c.dim(k + 1), c.dim(k))
        if m.shape != want:
            rep.shape(f"d_{k} has shape {m.shape}, expected {want}")
    if rep.shape_errors:
        return rep
    for k in range(lo, hi - 1):
        prod = c.d(k + 1) @ c.d(k)
        if not prod.is_zero():
            (i, j), v = next(prod.items())
            rep.fail(f"d_{k + 1} d_{k} != 0 in degree {k}: entry ({i},{j}) = {v}")
    return rep


def validate_chain_map(f: ChainMap) -> Report:
    rep = Report("chain map")
    for sub in (validate_complex(f.source), validate_complex(f.target)):
        rep.shape_errors += [f"{sub.subject} (source/target): {m}" for m in sub.shape_errors]
        rep.failures += [f"source/target: {m}" for m in sub.failures]
    for k, m in f.components.items():
        want = (f.target.dim(k), f.source.dim(k))
        if m.shape != want and not (m.is_zero() and 0 in want):
            rep.shape(f"f_{k} has shape {m.shape}, expected {want}")
    if rep.shape_errors:
        return rep
    lo, hi = f.degrees.start, f.degrees.stop - 1
    for k in range(lo - 1, hi + 1):
        lhs = f.component(k + 1) @ f.source.d(k)
        rhs = f.target.d(k) @ f.component(k)
        if lhs != rhs:
            rep.fail(f"f_{k + 1} d_{k} != d_{k} f_{k} in degree {k}")
    return rep


# ---------------------------------------------------------------------------
# cohomology and induced maps

def cohomology(c: Complex) -> dict[int, CohomologyGroup]:
    """Cohomology in every degree of the window, with representative bases.

    Raises :class:`~defcohom.reports.ValidationError` if ``d^2 != 0``.
    """
    return c._cohomology


def cohomology_dims(c: Complex) -> dict[int, int]:
    return {k: g.dim for k, g in cohomology(c).items()}


def group(c: Complex, k: int) -> CohomologyGroup:
    return cohomology(c).get(k) or zero_group(k)


def induced_map(f: ChainMap) -> dict[int, RationalMatrix]:
    """Matrix of ``H^k(f)`` in the representative bases, for every degree of ``f``."""
    validate_chain_map(f).raise_if_failed()
    out = {}
    for k in f.degrees:
        hs, ht = group(f.source, k), group(f.target, k)
        cols = [ht.coordinates(f(k, r)) for r in hs.reps]
        out[k] = RationalMatrix.from_columns(cols, ht.dim)
    return out


# ---------------------------------------------------------------------------
# constructions

def identity_map(c: Complex) -> ChainMap:
    return ChainMap(c, c, {k: RationalMatrix.identity(c.dim(k)) for k in c.degrees})


def zero_map(s: Complex, t: Complex) -> ChainMap:
    return ChainMap(s, t, {})


def negate(f: ChainMap) -> ChainMap:
    return ChainMap(f.source, f.target, {k: -m for k, m in f.components.items()})


def compose(g: ChainMap, f: ChainMap) -> ChainMap:
    """``g o f``; the middle complexes must agree."""
    if not (f.target == g.source):
        raise ValueError("compose: target of f differs from source of g")
    degrees = range(min(f.degrees.start, g.degrees.start), max(f.degrees.stop, g.degrees.stop))
    return ChainMap(f.source, g.target, {k: g.component(k) @ f.component(k) for k in degrees})


def cone(f: ChainMap, tags: tuple[str, str] = ("c", "Y")) -> Complex:
    """Mapping cone with ``D(c, Y) = (dc, f c - dY)``."""
    validate_chain_map(f).raise_if_failed()
    s, t = f.source, f.target
    lo = min(s.window[0], t.window[0] + 1)
    hi = max(s.window[1], t.window[1] + 1)
    splits = {n: (s.dim(n), t.dim(n - 1)) for n in range(lo, hi + 1)}
    dims = {n: a + b for n, (a, b) in splits.items()}
    diffs = {}
    for n in range(lo, hi):
        diffs[n] = RationalMatrix.block([
            [s.d(n), RationalMatrix.zeros(s.dim(n + 1), t.dim(n - 1))],
            [f.component(n), -t.d(n - 1)],
        ])
    labels = {
        n: tuple(f"{tags[0]}{i}" for i in range(a)) + tuple(f"{tags[1]}{j}" for j in range(b))
        for n, (a, b) in splits.items()
    }
    out = Complex(
        (lo, hi),
        dims,
        diffs,
        labels=labels,
        closed_below=s.closed_below and t.closed_below,
        closed_above=s.closed_above and t.closed_above,
        layout=ConeLayout(splits, tags),
    )
    rep = validate_complex(out)
    if not rep.ok:  # pragma: no cover - would mean the block formula is wrong
        raise AssertionError(rep.summary())
    return out


def symplectic_model(lower: Complex, upper: Complex, vertical: ChainMap) -> Complex:
    """Cone of ``-vertical``: ``(zeta, omega) -> (d zeta, -v zeta - d omega)``."""
    if not (vertical.source == lower and vertical.target == upper):
        raise ValueError("vertical must map lower -> upper")
    return cone(negate(vertical), tags=("zeta", "omega"))


# ---------------------------------------------------------------------------
# long exact sequence of the cone

@dataclass(frozen=True)
class SequenceNode:
    space: str  # "cone", "source" or "target"
    degree: int
    dim: int

    @property
    def label(self) -> str:
        return f"H^{self.degree}({self.space})"


@dataclass
class ExactSequence:
    """A finite sequence of linear maps between cohomology spaces.

    ``maps[i]`` goes from ``nodes[i]`` to ``nodes[i + 1]``; both ends are
    preceded/followed by zero.  ``exact[i]`` is the verdict at ``nodes[i]``.
    """

    nodes: list[SequenceNode]
    maps: list[RationalMatrix]
    exact: list[bool] = field(default_factory=list)
    connecting: dict[int, RationalMatrix] = field(default_factory=dict)
    connecting_is_induced: bool = True

    def __post_init__(self):
        if not self.exact:
            self.exact = exactness(self.nodes, self.maps)

    @property
    def is_exact(self) -> bool:
        return all(self.exact)

    def index(self, space: str, degree: int) -> int:
        for i, n in enumerate(self.nodes):
            if n.space == space and n.degree == degree:
                return i
        raise KeyError((space, degree))


def exactness(nodes: Sequence[SequenceNode], maps: Sequence[RationalMatrix]) -> list[bool]:
    """Exactness at every node, treating the sequence as padded by zeros."""
    verdicts = []
    for i, node in enumerate(nodes):
        inc = maps[i - 1] if i > 0 else RationalMatrix.zeros(node.dim, 0)
        out = maps[i] if i < len(maps) else RationalMatrix.zeros(0, node.dim)
        ok = (out @ inc).is_zero() and node.dim - rank(out) == rank(inc)
        verdicts.append(ok)
    return verdicts


def cone_les(f: ChainMap) -> ExactSequence:
    """The cone long exact sequence with explicit matrices for every arrow.

    The connecting map is obtained by the zig-zag through the cone
    differential and compared with the independently computed ``H(f)``.
    """
    c = cone(f)
    lay = c.layout
    s, t = f.source, f.target
    lo, hi = c.window
    hf = induced_map(f)

    nodes: list[SequenceNode] = []
    maps: list[RationalMatrix] = []
    connecting = {}
    agrees = True
    for k in range(lo, hi + 1):
        ht_prev, hc, hs, ht = group(t, k - 1), group(c, k), group(s, k), group(t, k)
        if k == lo:
            nodes.append(SequenceNode("target", k - 1, ht_prev.dim))
        # H^(k-1)(T) -> H^k(Cone): Y -> (0, Y)
        cols = [hc.coordinates(lay.join(k, zero_vector(s.dim(k)), y)) for y in ht_prev.reps]
        maps.append(RationalMatrix.from_columns(cols, hc.dim))
        nodes.append(SequenceNode("cone", k, hc.dim))
        # H^k(Cone) -> H^k(S): (c, Y) -> c
        cols = [hs.coordinates(lay.first(k, x)) for x in hc.reps]
        maps.append(RationalMatrix.from_columns(cols, hs.dim))
        nodes.append(SequenceNode("source", k, hs.dim))
        # connecting map by zig-zag: lift c to (c, 0), apply D, read off the T-part
        cols = []
        for rep_c in hs.reps:
            y = c.d(k) @ lay.join(k, rep_c, zero_vector(t.dim(k - 1)))
            if any(lay.first(k + 1, y)):  # pragma: no cover - rep_c is a cocycle
                raise AssertionError("lift of a cocycle has nonzero source part")
            cols.append(ht.coordinates(lay.second(k + 1, y)))
        delta = RationalMatrix.from_columns(cols, ht.dim)
        connecting[k] = delta
        agrees = agrees and delta == hf.get(k, RationalMatrix.zeros(ht.dim, hs.dim))
        maps.append(delta)
        nodes.append(SequenceNode("target", k, ht.dim))
    return ExactSequence(nodes, maps, connecting=connecting, connecting_is_induced=agrees)
