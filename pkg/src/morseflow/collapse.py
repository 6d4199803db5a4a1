"""Level subcomplexes, elementary collapses, collapse search, and basins.

The verifiers here return replayable ``CollapseSequence`` witnesses rather
than bare booleans: a witness re-checks the free-face condition step by step
when replayed, so a passing verification is a machine-checked certificate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .complexes import (
    DEFAULT_ENUM_BOUND,
    Simplex,
    SimplicialComplex,
    as_simplex,
    betti_numbers_mod2,
    is_subcomplex,
    simplex_key,
    _bits,
)
from .errors import (
    ComplexMismatch,
    CriticalValueInWindow,
    NotACriticalVertex,
    NotFreeFace,
    PreconditionViolated,
    ProofFailure,
    SignatureMismatch,
    SimplexNotInComplex,
    TooLargeForEnumeration,
)
from .morse import GradientField, MorseFunction, critical_cells, critical_values, gradient_field


@dataclass(frozen=True)
class FiltrationLevel:
    """Sublevel set and its closure at one threshold."""

    threshold: float
    sublevel: frozenset[Simplex]
    complex: SimplicialComplex


def level_subcomplex(f: MorseFunction, threshold: float) -> FiltrationLevel:
    """Cells valued at most the threshold, together with their face closure."""
    sub = frozenset(c for c in f.complex if f(c) <= threshold)
    return FiltrationLevel(float(threshold), sub, f.complex.closure_of(sub))


def elementary_collapse(complex: SimplicialComplex, free, coface) -> SimplicialComplex:
    """Remove a free face and its unique coface; raises ``NotFreeFace`` otherwise."""
    free = as_simplex(free)
    coface = as_simplex(coface)
    if free not in complex or coface not in complex:
        raise SimplexNotInComplex(f"({free!r}, {coface!r}) is not a pair of cells of the complex")
    if coface.dim != free.dim + 1 or not set(free) < set(coface):
        raise NotFreeFace(f"{coface!r} is not a codimension-1 coface of {free!r}")
    cofs = complex.cofaces_of(free)
    if cofs != (coface,):
        raise NotFreeFace(f"{free!r} has cofaces {[tuple(c) for c in cofs]}, so it is not free")
    return SimplicialComplex(complex.simplices - {free, coface})


@dataclass(frozen=True)
class CollapseSequence:
    """An ordered list of removed pairs, replayable as a certificate."""

    start: SimplicialComplex
    end: SimplicialComplex
    pairs: tuple[tuple[Simplex, Simplex], ...]

    def __len__(self) -> int:
        return len(self.pairs)

    def replay(self) -> SimplicialComplex:
        """Re-run every step, checking the free-face condition each time."""
        current = self.start
        for free, coface in self.pairs:
            current = elementary_collapse(current, free, coface)
        if current != self.end:
            raise ProofFailure("collapse replay did not reach the recorded end complex")
        return current


def collapses_to(
    complex: SimplicialComplex,
    target: SimplicialComplex,
    f: MorseFunction | None = None,
    max_enum: int = DEFAULT_ENUM_BOUND,
) -> CollapseSequence | None:
    """Exact collapse search with backtracking; ``None`` when impossible.

    Free pairs are tried in descending value order when a function is given
    (usually finding the witness without backtracking) and canonical order
    otherwise; dead states are memoised, so the decision is exact either way.
    """
    if len(complex) > max_enum:
        raise TooLargeForEnumeration(
            f"{len(complex)} simplices exceeds the enumeration bound {max_enum}"
        )
    if not is_subcomplex(target, complex):
        raise ComplexMismatch("the target is not a subcomplex of the start complex")
    goal = target.simplices
    if (len(complex) - len(target)) % 2:
        return None
    dead: set[frozenset[Simplex]] = set()

    def free_pairs(cells: frozenset[Simplex]) -> list[tuple[Simplex, Simplex]]:
        out = []
        for cell in cells:
            if cell in goal:
                continue
            cofs = [c for c in complex.cofaces_of(cell) if c in cells]
            if len(cofs) == 1 and cofs[0] not in goal:
                out.append((cell, cofs[0]))
        if f is not None:
            out.sort(key=lambda p: (-f(p[0]), -f(p[1]), simplex_key(p[0])))
        else:
            out.sort(key=lambda p: simplex_key(p[0]))
        return out

    def search(cells: frozenset[Simplex]):
        if cells == goal:
            return ()
        if cells in dead:
            return None
        for pair in free_pairs(cells):
            rest = search(cells - set(pair))
            if rest is not None:
                return (pair,) + rest
        dead.add(cells)
        return None

    pairs = search(complex.simplices)
    if pairs is None:
        return None
    return CollapseSequence(complex, target, pairs)


def pair_off_removable(field: GradientField, cells: Iterable[Simplex]) -> list:
    """Split a removable cell set into its matched pairs.

    Raises ``ProofFailure`` if some cell is unmatched or matched outside the
    set; valid inputs to the collapse verifiers never trigger this.
    """
    cells = frozenset(cells)
    pairs = []
    seen: set[Simplex] = set()
    for cell in sorted(cells, key=simplex_key):
        if cell in seen:
            continue
        partner = field.pair_of(cell)
        if partner is None:
            raise ProofFailure(f"{cell!r} is unmatched but should collapse away")
        if partner not in cells:
            raise ProofFailure(f"partner {partner!r} of {cell!r} is outside the removable set")
        lower, upper = (cell, partner) if cell.dim < partner.dim else (partner, cell)
        seen.add(lower)
        seen.add(upper)
        pairs.append((lower, upper))
    return pairs


def collapse_in_descending_order(
    start: SimplicialComplex,
    end: SimplicialComplex,
    pairs: Iterable[tuple[Simplex, Simplex]],
    f: MorseFunction,
) -> CollapseSequence:
    """Remove the pairs in decreasing value order, certifying each step."""
    ordered = sorted(
        pairs,
        key=lambda p: (-max(f(p[0]), f(p[1])), -min(f(p[0]), f(p[1])), simplex_key(p[0])),
    )
    current = start
    for lower, upper in ordered:
        try:
            current = elementary_collapse(current, lower, upper)
        except NotFreeFace as exc:
            raise ProofFailure(
                f"pair ({lower!r}, {upper!r}) was not free when its turn came"
            ) from exc
    if current != end:
        raise ProofFailure("descending pair removal did not reach the target complex")
    return CollapseSequence(start, end, tuple(ordered))


def verify_dmt_a(
    f: MorseFunction, a: float, b: float, field: GradientField | None = None
) -> CollapseSequence:
    """Certified collapse of the level subcomplex at ``b`` onto the one at ``a``.

    Requires a critical-value-free window ``(a, b]``; the cells in between
    then split into matched pairs, removed in decreasing value order.
    """
    if not a < b:
        raise PreconditionViolated(f"need a < b, got a={a}, b={b}")
    inside = [v for v in critical_values(f) if a < v <= b]
    if inside:
        raise CriticalValueInWindow(f"critical values {inside} lie in ({a}, {b}]")
    if field is None:
        field = gradient_field(f)
    top = level_subcomplex(f, b).complex
    bottom = level_subcomplex(f, a).complex
    pairs = pair_off_removable(field, top.simplices - bottom.simplices)
    return collapse_in_descending_order(top, bottom, pairs, f)


@dataclass(frozen=True)
class BettiDelta:
    """Mod-2 Betti vectors across one critical value, and the single change."""

    before: tuple[int, ...]
    after: tuple[int, ...]
    degree: int
    delta: int


def verify_dmt_b(f: MorseFunction, cell, a: float, b: float) -> BettiDelta:
    """Check the cell-attachment signature across one critical value.

    Exactly one Betti number may move: +1 in the cell's dimension or -1 one
    dimension below.  Anything else raises ``SignatureMismatch``.
    """
    cell = as_simplex(cell)
    crit = critical_cells(f)
    if cell not in crit:
        raise PreconditionViolated(f"{cell!r} is not a critical cell")
    if not (a < f(cell) <= b):
        raise PreconditionViolated(f"value {f(cell)} of {cell!r} is outside ({a}, {b}]")
    others = [c for c in crit if c != cell and a < f(c) <= b]
    if others:
        raise PreconditionViolated(f"other critical cells {sorted(map(tuple, others))} in window")
    before = betti_numbers_mod2(level_subcomplex(f, a).complex)
    after = betti_numbers_mod2(level_subcomplex(f, b).complex)
    width = max(len(before), len(after), cell.dim + 1)
    before = tuple(before) + (0,) * (width - len(before))
    after = tuple(after) + (0,) * (width - len(after))
    diffs = [(i, after[i] - before[i]) for i in range(width) if after[i] != before[i]]
    p = cell.dim
    if diffs == [(p, 1)] or (p >= 1 and diffs == [(p - 1, -1)]):
        degree, delta = diffs[0]
        return BettiDelta(before, after, degree, delta)
    raise SignatureMismatch(f"betti change {diffs} does not match attaching a {p}-cell")


@dataclass(frozen=True)
class Basin:
    """A minimum, the cells draining to it, and a collapse witness."""

    minimum: Simplex
    cells: SimplicialComplex
    witness: CollapseSequence


def basin(field: GradientField, f: MorseFunction, vertex) -> Basin:
    """Gradient basin of a critical vertex.

    Vertices whose (unique) gradient path ends at the minimum, together with
    the pairing edges along those paths.  The result is a tree, collapsed to
    the minimum deepest-vertex-first; the witness is stored after replay.
    """
    v = as_simplex(vertex)
    if v not in field.complex or v.dim != 0 or v not in field.critical:
        raise NotACriticalVertex(f"{v!r} is not a critical vertex")
    complex = field.complex
    term: dict[Simplex, Simplex] = {}
    depth: dict[Simplex, int] = {}

    def settle(u: Simplex) -> Simplex:
        walk: list[Simplex] = []
        x = u
        while x not in term and x in field.up:
            walk.append(x)
            edge = field.up[x]
            x = Simplex((edge[0] if edge[1] == x[0] else edge[1],))
        if x not in term:
            term[x] = x
            depth[x] = 0
        end = term[x]
        d = depth[x]
        for y in reversed(walk):
            d += 1
            term[y] = end
            depth[y] = d
        return end

    members = [u for u in complex.cells_of_dim(0) if settle(u) == v]
    pairs = sorted(
        ((u, field.up[u]) for u in members if u != v),
        key=lambda p: (-depth[p[0]], simplex_key(p[0])),
    )
    cells = set(members) | {edge for _, edge in pairs}
    sub = SimplicialComplex(cells)
    target = SimplicialComplex([v])
    witness = CollapseSequence(sub, target, tuple(pairs))
    witness.replay()
    return Basin(v, sub, witness)


def maximal_collapsible_to(
    complex: SimplicialComplex, vertex, max_enum: int = DEFAULT_ENUM_BOUND
) -> list[SimplicialComplex]:
    """Inclusion-maximal subcomplexes collapsing to the vertex, by brute force.

    Explores every anti-collapse expansion from the single vertex, then keeps
    the inclusion-maximal states.  Oracle for comparing against ``basin``.
    """
    v = as_simplex(vertex)
    if v not in complex or v.dim != 0:
        raise NotACriticalVertex(f"{v!r} is not a vertex of the complex")
    n = len(complex)
    if n > max_enum:
        raise TooLargeForEnumeration(f"{n} simplices exceeds the enumeration bound {max_enum}")
    cells = list(complex)
    index = {c: i for i, c in enumerate(cells)}
    face_mask = [0] * n
    coface_lists: list[list[int]] = [[] for _ in range(n)]
    for i, c in enumerate(cells):
        for t in complex.faces_of(c):
            face_mask[i] |= 1 << index[t]
        coface_lists[i] = [index[t] for t in complex.cofaces_of(c)]
    start = 1 << index[v]
    seen = {start}
    stack = [start]
    while stack:
        cur = stack.pop()
        for i in range(n):
            if cur >> i & 1:
                continue
            if face_mask[i] & ~cur:
                continue
            if any(cur >> k & 1 for k in coface_lists[i]):
                continue
            for j in coface_lists[i]:
                if face_mask[j] & ~(cur | 1 << i):
                    continue
                nxt = cur | 1 << i | 1 << j
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
    ordered = sorted(seen, key=lambda m: (-bin(m).count("1"), m))
    maximal = [
        m for m in ordered if not any(o != m and m & o == m for o in ordered)
    ]
    return [SimplicialComplex(cells[i] for i in _bits(m)) for m in maximal]


@dataclass(frozen=True)
class BasinReport:
    """Gradient basin versus the brute-force maximal collapsing subcomplexes."""

    basin: Basin
    containers: tuple[SimplicialComplex, ...]
    contained: bool
    strictly_larger: bool


def basin_maximality_report(
    field: GradientField,
    f: MorseFunction,
    vertex,
    max_enum: int = DEFAULT_ENUM_BOUND,
) -> BasinReport:
    """Report (never fail) how the gradient basin compares to the oracle."""
    bas = basin(field, f, vertex)
    candidates = maximal_collapsible_to(field.complex, vertex, max_enum)
    containers = tuple(
        c for c in candidates if bas.cells.simplices <= c.simplices
    )
    strictly = any(c.simplices != bas.cells.simplices for c in containers)
    return BasinReport(bas, containers, bool(containers), strictly)
