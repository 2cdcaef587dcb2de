"""The canonical polyhedral complex of a ReLU network.

Input space is carved into cells keyed by ternary sign vectors: one
coordinate per hidden unit (layer-major order), holding the sign of that
unit's pre-activation node map on the cell.  A cell's H-representation lists
the node-map affine forms composed through the cell's own masked prefix;
+/- coordinates are strict inequalities, 0 coordinates are equalities.  The
network is affine on every cell, and the stored restriction realizes that
affine map exactly.

Layers are processed in order and cells split node by node, pruning
infeasible sign extensions eagerly with exact LP; each cell carries a
strictly-feasible rational witness point, so most splits cost a single LP.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .affine import AffineMap
from .linalg import (
    RowBasis,
    Vec,
    dot,
    is_zero_vec,
    nullspace,
    rat_str,
    vadd,
    vscale,
    zeros,
)
from .lp import LinearSystem, _cone_is_trivial, feasible_point
from .network import NodeRef, ReluNetwork

Row = tuple[Vec, Fraction]

NODE = "node"
LEVEL = "level"


@dataclass(frozen=True)
class CoordInfo:
    """What one sign-vector coordinate tracks."""

    kind: str  # NODE or LEVEL
    layer: int
    unit: int
    bha: bool  # node with a nonzero original weight row (contributes to the BHA)


@dataclass(eq=False)
class Cell:
    """One cell: the set where every tracked affine form has its stored sign."""

    sign: tuple[int, ...]
    rows: tuple[Row, ...]
    witness: Vec  # a point of the relative interior
    dim: int
    eq_basis: RowBasis
    prefix: AffineMap | None = None  # masked composite of the processed layers
    restriction: AffineMap | None = None  # F as an affine map on this cell
    bounded: bool | None = None  # filled lazily

    def system(self, closed: bool = False) -> tuple[LinearSystem, tuple[int, ...]]:
        """The cell as a LinearSystem plus the strict inequality indices
        (empty when closed=True, giving the cell's closure)."""
        n = len(self.witness)
        ineqs: list[Row] = []
        eqs: list[Row] = []
        for (w, c), s in zip(self.rows, self.sign):
            if is_zero_vec(w):
                continue
            if s > 0:
                ineqs.append((w, c))
            elif s < 0:
                ineqs.append((tuple(-x for x in w), -c))
            else:
                eqs.append((w, c))
        strict = () if closed else tuple(range(len(ineqs)))
        return LinearSystem(n, tuple(ineqs), tuple(eqs)), strict

    def contains(self, x: Sequence[Fraction], closed: bool = False) -> bool:
        for (w, c), s in zip(self.rows, self.sign):
            v = dot(w, x) + c
            if s == 0:
                if v != 0:
                    return False
            elif s > 0:
                if v < 0 or (v == 0 and not closed):
                    return False
            else:
                if v > 0 or (v == 0 and not closed):
                    return False
        return True

    def value(self, x: Sequence[Fraction]) -> Fraction:
        w, c = self.restriction.row(0)
        return dot(w, x) + c


def sign_key(sign: Sequence[int]) -> str:
    return "".join("+" if s > 0 else "-" if s < 0 else "0" for s in sign)


def parse_sign_key(key: str) -> tuple[int, ...]:
    table = {"+": 1, "-": -1, "0": 0}
    return tuple(table[ch] for ch in key)


@dataclass
class CanonicalComplex:
    ambient_dim: int
    coords: tuple[CoordInfo, ...]
    cells: dict[tuple[int, ...], Cell]
    network: ReluNetwork | None = None
    threshold: Fraction | None = None

    def sorted_cells(self) -> list[Cell]:
        return [self.cells[k] for k in sorted(self.cells)]

    def cells_of_dim(self, k: int) -> list[Cell]:
        return [c for c in self.sorted_cells() if c.dim == k]


def is_face(face_sign: Sequence[int], cell_sign: Sequence[int]) -> bool:
    """Whether the first sign vector names a proper face of the second:
    obtained by turning some (at least one) +/- coordinates into 0."""
    if face_sign == cell_sign:
        return False
    strictly_smaller = False
    for f, c in zip(face_sign, cell_sign):
        if c == 0:
            if f != 0:
                return False
        else:
            if f == 0:
                strictly_smaller = True
            elif f != c:
                return False
    return strictly_smaller


def _bit_masks(sign: Sequence[int]) -> tuple[int, int]:
    pm = mm = 0
    for i, s in enumerate(sign):
        if s > 0:
            pm |= 1 << i
        elif s < 0:
            mm |= 1 << i
    return pm, mm


def face_pairs(cpx: CanonicalComplex) -> Iterable[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All (face key, cell key) pairs of distinct cells in the face relation."""
    keys = sorted(cpx.cells)
    masks = {k: _bit_masks(k) for k in keys}
    for kf in keys:
        pf, mf = masks[kf]
        for kc in keys:
            if kf == kc:
                continue
            pc, mc = masks[kc]
            if pf & ~pc == 0 and mf & ~mc == 0 and (pf | mf) != (pc | mc):
                yield kf, kc


# --- construction -----------------------------------------------------------


def _extend(cell: Cell, w: Vec, c: Fraction, s: int, witness: Vec, add_eq: bool = False) -> Cell:
    basis = cell.eq_basis
    dim = cell.dim
    if add_eq:
        basis = basis.copy()
        basis.add(w)
        dim -= 1
    return Cell(cell.sign + (s,), cell.rows + ((w, c),), witness, dim, basis, cell.prefix)


def _side_witness(cell: Cell, w: Vec, c: Fraction, side: int) -> Vec | None:
    system, strict = cell.system()
    row = (w, c) if side > 0 else (tuple(-x for x in w), -c)
    extended = LinearSystem(system.dim, system.inequalities + (row,), system.equalities)
    return feasible_point(extended, strict + (len(system.inequalities),))


def _cut_point(p: Vec, q: Vec, w: Vec, c: Fraction) -> Vec:
    vp = dot(w, p) + c
    vq = dot(w, q) + c
    lam = vp / (vp - vq)
    return tuple(a + lam * (b - a) for a, b in zip(p, q))


def _children(cell: Cell, w: Vec, c: Fraction) -> list[Cell]:
    """Split a cell by the sign of the affine form w·x + c."""
    if cell.eq_basis.contains(w):
        # constant on the cell's affine hull: a fixed sign, no split
        v = dot(w, cell.witness) + c
        s = 1 if v > 0 else -1 if v < 0 else 0
        return [_extend(cell, w, c, s, cell.witness)]
    v = dot(w, cell.witness) + c
    if v == 0:
        # nonconstant and vanishing at a relative-interior point: cuts the cell
        plus = _side_witness(cell, w, c, +1)
        minus = _side_witness(cell, w, c, -1)
        assert plus is not None and minus is not None
        return [
            _extend(cell, w, c, 1, plus),
            _extend(cell, w, c, -1, minus),
            _extend(cell, w, c, 0, cell.witness, add_eq=True),
        ]
    s = 1 if v > 0 else -1
    other = _side_witness(cell, w, c, -s)
    if other is None:
        return [_extend(cell, w, c, s, cell.witness)]
    mid = _cut_point(cell.witness, other, w, c)
    return [
        _extend(cell, w, c, s, cell.witness),
        _extend(cell, w, c, -s, other),
        _extend(cell, w, c, 0, mid, add_eq=True),
    ]


def build_complex(
    net: ReluNetwork,
    through_layers: int | None = None,
    node_failures: set[NodeRef] | None = None,
) -> CanonicalComplex:
    """Build the canonical polyhedral complex by iterated level-set
    subdivision, one hidden layer at a time.

    ``through_layers`` truncates the construction after that many hidden
    layers (the complex the next layer's node maps are measured against).
    When ``node_failures`` is given, every hidden node whose map is constant
    zero on some cell of the preceding complex is recorded there; those are
    exactly the nodes for which 0 fails to be a transversal threshold.
    """
    n0 = net.input_dim
    m = net.hidden_count
    upto = m if through_layers is None else through_layers
    if not 0 <= upto <= m:
        raise ValueError(f"through_layers must lie in [0, {m}]")
    root = Cell((), (), zeros(n0), n0, RowBasis(n0), AffineMap.identity(n0))
    cells: dict[tuple[int, ...], Cell] = {(): root}
    coords: list[CoordInfo] = []
    for i in range(upto):
        layer = net.layers[i]
        width = layer.out_dim
        for j in range(width):
            coords.append(CoordInfo(NODE, i, j, bha=not is_zero_vec(layer.weights[j])))
        nxt: dict[tuple[int, ...], Cell] = {}
        for cell in cells.values():
            pre = layer.compose(cell.prefix)
            if node_failures is not None:
                for j in range(width):
                    w, c = pre.row(j)
                    if cell.eq_basis.contains(w) and dot(w, cell.witness) + c == 0:
                        node_failures.add(NodeRef(i, j))
            pieces = [cell]
            for j in range(width):
                w, c = pre.row(j)
                pieces = [child for piece in pieces for child in _children(piece, w, c)]
            for piece in pieces:
                bits = tuple(1 if s > 0 else 0 for s in piece.sign[-width:])
                piece.prefix = pre.masked(bits)
                nxt[piece.sign] = piece
        cells = nxt
    cpx = CanonicalComplex(n0, tuple(coords), cells, net)
    if upto == m:
        out = net.output_layer
        for cell in cells.values():
            cell.restriction = out.compose(cell.prefix)
    return cpx


def refine_by_threshold(cpx: CanonicalComplex, t: Fraction) -> CanonicalComplex:
    """Subdivide every cell by the level set F = t, appending one sign
    coordinate for sign(F - t)."""
    if cpx.threshold is not None:
        raise ValueError("complex is already refined by a threshold")
    if any(cell.restriction is None for cell in cpx.cells.values()):
        raise ValueError("refinement needs the per-cell restriction of F")
    t = Fraction(t)
    refined: dict[tuple[int, ...], Cell] = {}
    for cell in cpx.cells.values():
        w, c = cell.restriction.row(0)
        for child in _children(cell, w, c - t):
            child.restriction = cell.restriction
            refined[child.sign] = child
    coords = cpx.coords + (CoordInfo(LEVEL, -1, 0, False),)
    return CanonicalComplex(cpx.ambient_dim, coords, refined, cpx.network, threshold=t)


# --- queries ----------------------------------------------------------------


def skeleton(cpx: CanonicalComplex, k: int) -> list[Cell]:
    """All cells of dimension at most k."""
    if not 0 <= k <= cpx.ambient_dim:
        raise ValueError(f"skeleton index {k} out of range [0, {cpx.ambient_dim}]")
    return [c for c in cpx.sorted_cells() if c.dim <= k]


def bent_hyperplane_arrangement(cpx: CanonicalComplex) -> list[Cell]:
    """Cells lying in the bent hyperplane arrangement: those with a zero sign
    at some nondegenerate node coordinate.  (Faces of such cells only add
    zeros, so the result is closed under faces.)"""
    bha_coords = [i for i, co in enumerate(cpx.coords) if co.bha]
    return [
        c
        for c in cpx.sorted_cells()
        if any(c.sign[i] == 0 for i in bha_coords)
    ]


def activation_regions(cpx: CanonicalComplex) -> list[Cell]:
    """Top-dimensional cells whose closures are activation-region closures:
    full-dimensional cells off the bent hyperplane arrangement.  Degenerate
    (zero-weight-row) nodes carry a fixed global sign and are ignored, since
    they contribute no bent hyperplane."""
    bha_coords = [i for i, co in enumerate(cpx.coords) if co.bha]
    return [
        c
        for c in cpx.sorted_cells()
        if c.dim == cpx.ambient_dim and all(c.sign[i] != 0 for i in bha_coords)
    ]


def cell_bounded(cell: Cell) -> bool:
    """Whether the closed cell is bounded (trivial recession cone)."""
    if cell.bounded is None:
        if cell.dim == 0:
            cell.bounded = True
        else:
            system, _ = cell.system(closed=True)
            cell.bounded = _cone_is_trivial(system)
    return cell.bounded


def locate(cpx: CanonicalComplex, x: Sequence[Fraction]) -> Cell:
    """The unique cell whose relative interior contains x."""
    from .network import evaluate, preactivations

    net = cpx.network
    pre = preactivations(net, x)
    sign: list[int] = []
    for co in cpx.coords:
        if co.kind == NODE:
            v = pre[co.layer][co.unit]
        else:
            v = evaluate(net, x) - cpx.threshold
        sign.append(1 if v > 0 else -1 if v < 0 else 0)
    key = tuple(sign)
    if key not in cpx.cells:
        raise KeyError(f"no cell with sign {sign_key(key)}; complex does not cover x")
    return cpx.cells[key]


def interior_points(cell: Cell, rng, count: int) -> list[Vec]:
    """Random points of the cell's relative interior (the witness first)."""
    n = len(cell.witness)
    eq_rows = tuple(
        w for (w, _), s in zip(cell.rows, cell.sign) if s == 0 and not is_zero_vec(w)
    )
    dirs = nullspace(eq_rows, n)
    points = [cell.witness]
    attempts = 0
    while len(points) < count and attempts < 50 * count:
        attempts += 1
        if not dirs:
            points.append(cell.witness)
            continue
        d = zeros(n)
        for basis_dir in dirs:
            coeff = Fraction(rng.randint(-3, 3))
            if coeff:
                d = vadd(d, vscale(basis_dir, coeff))
        if is_zero_vec(d):
            continue
        lo: Fraction | None = None
        hi: Fraction | None = None
        for (w, c), s in zip(cell.rows, cell.sign):
            if s == 0 or is_zero_vec(w):
                continue
            a = dot(w, d)
            v = dot(w, cell.witness) + c
            if s < 0:
                a, v = -a, -v
            if a == 0:
                continue
            bound = -v / a
            if a > 0:
                lo = bound if lo is None else max(lo, bound)
            else:
                hi = bound if hi is None else min(hi, bound)
        frac = Fraction(rng.randint(-7, 7), 8)
        if frac >= 0:
            step = frac * (hi if hi is not None else Fraction(2))
        else:
            step = -frac * (lo if lo is not None else Fraction(-2))
        points.append(vadd(cell.witness, vscale(d, step)))
    while len(points) < count:
        points.append(cell.witness)
    return points[:count]


def complex_to_json(cpx: CanonicalComplex) -> dict:
    """Deterministic JSON dump: cells sorted by sign key, each with its sign,
    dimension, boundedness, restriction, and proper faces."""
    keys = sorted(cpx.cells, key=sign_key)
    faces: dict[tuple[int, ...], list[str]] = {k: [] for k in keys}
    for kf, kc in face_pairs(cpx):
        faces[kc].append(sign_key(kf))
    cells = []
    for k in keys:
        cell = cpx.cells[k]
        entry = {
            "sign": sign_key(k),
            "dim": cell.dim,
            "bounded": cell_bounded(cell),
            "faces": sorted(faces[k]),
        }
        if cell.restriction is not None:
            w, c = cell.restriction.row(0)
            entry["restriction"] = {"w": [rat_str(v) for v in w], "b": rat_str(c)}
        cells.append(entry)
    out = {
        "ambient_dim": cpx.ambient_dim,
        "coords": [
            {"kind": co.kind, "layer": co.layer, "unit": co.unit, "bha": co.bha}
            for co in cpx.coords
        ],
        "cells": cells,
    }
    if cpx.threshold is not None:
        out["threshold"] = rat_str(cpx.threshold)
    return out
