"""The chain-level gradient map, the discrete flow, and its set versions.

The flow of each basis cell is computed once through chain operations
(identity plus boundary-of-gradient plus gradient-of-boundary), while
``flow_matrix`` rebuilds the same data by sparse matrix composition; the two
routes are cross-checked in ``check_flow_matrix`` to catch sign errors.

Coefficients are Python integers, so arithmetic is exact at any size.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .collapse import (
    CollapseSequence,
    collapse_in_descending_order,
    level_subcomplex,
    pair_off_removable,
)
from .complexes import Chain, Simplex, SimplicialComplex, boundary, incidence_sign
from .errors import ComplexMismatch, PropertyViolation, SimplexNotInComplex
from .morse import GradientField, MorseFunction, gradient_field


class FlowOperator:
    """Chain maps attached to a Morse function and its gradient field."""

    __slots__ = ("function", "field", "complex", "_gradient", "_flow")

    def __init__(self, function: MorseFunction, field: GradientField | None = None):
        self.function = function
        self.complex = function.complex
        self.field = gradient_field(function) if field is None else field
        if self.field.complex != self.complex:
            raise ComplexMismatch("field and function live on different complexes")
        self._gradient: dict[Simplex, Chain] = {}
        for lower, upper in self.field.pairs:
            self._gradient[lower] = Chain(upper.dim, {upper: -incidence_sign(upper, lower)})
        self._flow: dict[Simplex, Chain] = {}
        for cell in self.complex:
            unit = Chain.unit(cell)
            self._flow[cell] = (
                unit + boundary(self.apply_gradient(unit)) + self.apply_gradient(boundary(unit))
            )

    def gradient_of(self, cell) -> Chain:
        """The matched-pair image of a single cell; zero when unmatched."""
        if cell not in self.complex:
            raise SimplexNotInComplex(f"{cell!r} is not in the complex")
        return self._gradient.get(cell, Chain.zero())

    def flow_of(self, cell) -> Chain:
        if cell not in self.complex:
            raise SimplexNotInComplex(f"{cell!r} is not in the complex")
        return self._flow[cell]

    def apply_gradient(self, chain: Chain) -> Chain:
        """Linear extension of the pair map over a chain."""
        acc = Chain.zero()
        for cell, coef in chain.coeffs.items():
            img = self.gradient_of(cell)
            if not img.is_zero:
                acc = acc + img.scaled(coef)
        return acc

    def apply_flow(self, chain: Chain) -> Chain:
        acc = Chain.zero()
        for cell, coef in chain.coeffs.items():
            acc = acc + self.flow_of(cell).scaled(coef)
        return acc

    def support_of(self, cell) -> frozenset[Simplex]:
        """Cells appearing in the flowed chain of one cell."""
        return self.flow_of(cell).support()


def flow_matrix(operator: FlowOperator, p: int) -> dict[Simplex, dict[Simplex, int]]:
    """Rows of the dimension-``p`` flow, built by sparse matrix composition.

    ``rows[s][t]`` is the coefficient of ``t`` in the flowed ``s``; zero
    entries are dropped.
    """
    complex = operator.complex
    if not 0 <= p <= complex.dim:
        raise ValueError(f"dimension {p} is outside 0..{complex.dim}")

    def boundary_row(cell: Simplex) -> dict[Simplex, int]:
        return {face: incidence_sign(cell, face) for face in complex.faces_of(cell)}

    def gradient_row(cell: Simplex) -> dict[Simplex, int]:
        img = operator._gradient.get(cell)
        return {} if img is None else dict(img.coeffs)

    rows: dict[Simplex, dict[Simplex, int]] = {}
    for cell in complex.cells_of_dim(p):
        acc: dict[Simplex, int] = {cell: 1}
        for mid, vc in gradient_row(cell).items():
            for target, bc in boundary_row(mid).items():
                acc[target] = acc.get(target, 0) + vc * bc
        for face, bc in boundary_row(cell).items():
            for target, vc in gradient_row(face).items():
                acc[target] = acc.get(target, 0) + bc * vc
        rows[cell] = {s: c for s, c in acc.items() if c}
    return rows


@dataclass(frozen=True)
class FlowMatrixReport:
    dim: int
    cells: int
    ok: bool
    problems: tuple[str, ...]


def check_flow_matrix(operator: FlowOperator, p: int) -> FlowMatrixReport:
    """Cross-check the matrix against the chain route and its sign structure.

    Asserts the diagonal is 0/1 and marks exactly the critical cells, and
    that every off-diagonal entry points at a strictly smaller value.
    Raises ``PropertyViolation`` with the report when anything fails.
    """
    rows = flow_matrix(operator, p)
    f = operator.function
    problems: list[str] = []
    for cell, row in rows.items():
        chain_row = dict(operator.flow_of(cell).coeffs)
        if chain_row != row:
            problems.append(f"matrix/chain mismatch at {tuple(cell)}")
        diag = row.get(cell, 0)
        if diag not in (0, 1):
            problems.append(f"diagonal {diag} at {tuple(cell)}")
        elif (diag == 1) != (cell in operator.field.critical):
            problems.append(f"diagonal {diag} disagrees with criticality at {tuple(cell)}")
        for other, coef in row.items():
            if other != cell and coef and not f(other) < f(cell):
                problems.append(f"non-decreasing support {tuple(other)} in row {tuple(cell)}")
    report = FlowMatrixReport(p, len(rows), not problems, tuple(problems))
    if problems:
        raise PropertyViolation(report)
    return report


def flow_image(operator: FlowOperator, cells: Iterable) -> frozenset[Simplex]:
    """Union of the supports of the flowed cells; empty input gives empty."""
    out: set[Simplex] = set()
    for cell in cells:
        out |= operator.support_of(cell)
    return frozenset(out)


def flow_image_closure(operator: FlowOperator, cells: Iterable) -> SimplicialComplex:
    """The subcomplex generated by the flow image."""
    return operator.complex.closure_of(flow_image(operator, cells))


def verify_flow_collapse(
    f: MorseFunction, threshold: float, operator: FlowOperator | None = None
) -> CollapseSequence:
    """Certified collapse of a level subcomplex onto its flow-image closure.

    The cells dropped by the flow split into matched pairs, removed in
    decreasing value order exactly as in the window verifier.
    """
    if operator is None:
        operator = FlowOperator(f)
    top = level_subcomplex(f, threshold).complex
    image = flow_image_closure(operator, top.simplices)
    pairs = pair_off_removable(operator.field, top.simplices - image.simplices)
    return collapse_in_descending_order(top, image, pairs, f)
