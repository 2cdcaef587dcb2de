"""Combinatorial transversality of thresholds and of networks.

A threshold t is transversal for F exactly when no cell of the canonical
complex on which F is constant takes the value t: every point of the level
set then has an F-nonconstant cellular neighborhood.  The constant-cell
values form a finite set, so all but finitely many thresholds are
transversal.  A network is transversal when every hidden node map admits 0
as a transversal threshold against the complex built from the layers before
it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .complexes import CanonicalComplex, Cell, build_complex
from .linalg import rat_str
from .network import NetworkClass, NodeRef, ReluNetwork, classify_layers


def cell_is_constant(cell: Cell) -> bool:
    """Whether F is constant on the cell: the restriction's gradient is
    orthogonal to the cell's affine hull, i.e. lies in the span of the
    active equality normals."""
    w, _ = cell.restriction.row(0)
    return cell.eq_basis.contains(w)


def constant_cell_values(cpx: CanonicalComplex) -> set[Fraction]:
    values = set()
    for cell in cpx.cells.values():
        if cell_is_constant(cell):
            values.add(cell.value(cell.witness))
    return values


def nontransversal_thresholds(source: CanonicalComplex | ReluNetwork) -> set[Fraction]:
    """The finite set of thresholds at which transversality fails: the values
    F takes on cells where it is constant."""
    cpx = source if isinstance(source, CanonicalComplex) else build_complex(source)
    return constant_cell_values(cpx)


def is_transversal_threshold(source: CanonicalComplex | ReluNetwork, t: Fraction) -> bool:
    return Fraction(t) not in nontransversal_thresholds(source)


@dataclass(frozen=True)
class TransversalityReport:
    generic: bool
    transversal: bool
    node_failures: tuple[NodeRef, ...]
    nontransversal_thresholds: tuple[Fraction, ...]
    classes: NetworkClass

    def to_json(self) -> dict:
        return {
            "generic": self.generic,
            "transversal": self.transversal,
            "node_failures": [
                {"layer": ref.layer, "unit": ref.unit} for ref in self.node_failures
            ],
            "nontransversal_thresholds": [
                rat_str(v) for v in sorted(self.nontransversal_thresholds)
            ],
            "layers": [
                {"degenerate": c.degenerate, "generic": c.generic}
                for c in self.classes.layers
            ],
        }


def analyze_network(net: ReluNetwork) -> tuple[CanonicalComplex, TransversalityReport]:
    """Build the canonical complex once, recording per-node transversality
    failures along the way, and classify the network."""
    failures: set[NodeRef] = set()
    cpx = build_complex(net, node_failures=failures)
    classes = classify_layers(net)
    report = TransversalityReport(
        generic=classes.generic,
        transversal=not failures,
        node_failures=tuple(sorted(failures)),
        nontransversal_thresholds=tuple(sorted(constant_cell_values(cpx))),
        classes=classes,
    )
    return cpx, report


def is_transversal_network(net: ReluNetwork) -> TransversalityReport:
    """Whether 0 is a transversal threshold for every hidden node map, each
    checked against the canonical complex of the preceding layers."""
    return analyze_network(net)[1]
