"""Exact linear programming over the rationals.

A two-phase dense simplex with Bland's pivoting rule (no cycling, no
tolerances).  Systems are conjunctions of affine constraints:

    inequality rows (w, c) assert  w·x + c >= 0
    equality rows   (w, c) assert  w·x + c == 0

Strict feasibility (selected rows satisfied with > 0) is decided by a single
auxiliary LP that maximizes a shared slack variable, capped at 1; the system
admits a point with the selected rows strict iff the optimum is positive.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .linalg import ONE, ZERO, Vec, dot, is_zero_vec, unit, vec

Row = tuple[Vec, Fraction]


@dataclass(frozen=True)
class LinearSystem:
    dim: int
    inequalities: tuple[Row, ...] = ()
    equalities: tuple[Row, ...] = ()

    def __post_init__(self):
        for w, _ in self.inequalities + self.equalities:
            if len(w) != self.dim:
                raise ValueError(
                    f"dimension mismatch: row has {len(w)} coefficients in R^{self.dim}"
                )

    @staticmethod
    def of(dim: int, inequalities: Iterable = (), equalities: Iterable = ()) -> "LinearSystem":
        return LinearSystem(
            dim,
            tuple((vec(w), Fraction(c)) for w, c in inequalities),
            tuple((vec(w), Fraction(c)) for w, c in equalities),
        )


OPTIMAL = "optimal"
UNBOUNDED = "unbounded"
INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class LpResult:
    status: str
    value: Fraction | None = None
    point: Vec | None = None

    @property
    def is_optimal(self) -> bool:
        return self.status == OPTIMAL


def _bland_minimize(rows: list[list[Fraction]], cost: list[Fraction], basis: list[int]) -> bool:
    """Run simplex on a basic-feasible tableau. Returns False iff unbounded.

    rows[i] holds constraint coefficients with the rhs in the last slot; cost
    is the reduced-cost row.  Entering: lowest index with negative reduced
    cost; leaving: lowest basis index among minimal ratios (Bland).
    """
    ncols = len(cost) - 1
    while True:
        enter = -1
        for j in range(ncols):
            if cost[j] < 0:
                enter = j
                break
        if enter < 0:
            return True
        leave = -1
        best: Fraction | None = None
        for i, row in enumerate(rows):
            a = row[enter]
            if a > 0:
                ratio = row[-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:
            return False
        _pivot(rows, cost, basis, leave, enter)


def _pivot(rows, cost, basis, r, j):
    prow = rows[r]
    piv = prow[j]
    if piv != ONE:
        inv = ONE / piv
        prow = [a * inv for a in prow]
        rows[r] = prow
    for i, row in enumerate(rows):
        if i != r and row[j]:
            f = row[j]
            rows[i] = [a - f * b for a, b in zip(row, prow)]
    if cost[j]:
        f = cost[j]
        cost[:] = [a - f * b for a, b in zip(cost, prow)]
    basis[r] = j


def _solve_standard(
    a_rows: list[list[Fraction]], b: list[Fraction], costs: list[Fraction]
) -> tuple[str, list[Fraction] | None, Fraction | None]:
    """min costs·y  subject to  a_rows·y = b, y >= 0."""
    m = len(a_rows)
    n = len(costs)
    rows: list[list[Fraction]] = []
    for i in range(m):
        if b[i] < 0:
            rows.append([-x for x in a_rows[i]] + [ZERO] * m + [-b[i]])
        else:
            rows.append(list(a_rows[i]) + [ZERO] * m + [b[i]])
        rows[i][n + i] = ONE
    basis = list(range(n, n + m))

    # Phase 1: drive the artificial variables to zero.
    cost = [ZERO] * (n + m + 1)
    for row in rows:
        for j in range(n):
            cost[j] -= row[j]
        cost[-1] -= row[-1]
    _bland_minimize(rows, cost, basis)
    if cost[-1] < 0:  # residual artificial mass: objective = -cost[-1] > 0
        return INFEASIBLE, None, None
    for i in range(m - 1, -1, -1):
        if basis[i] >= n:
            col = next((j for j in range(n) if rows[i][j]), None)
            if col is None:
                del rows[i]
                del basis[i]
            else:
                _pivot(rows, cost, basis, i, col)

    # Phase 2: the real objective, with artificial columns dropped.
    rows = [row[:n] + [row[-1]] for row in rows]
    cost = list(costs) + [ZERO]
    for i, bv in enumerate(basis):
        if cost[bv]:
            f = cost[bv]
            cost = [a - f * bb for a, bb in zip(cost, rows[i])]
    if not _bland_minimize(rows, cost, basis):
        return UNBOUNDED, None, None
    y = [ZERO] * n
    for i, bv in enumerate(basis):
        y[bv] = rows[i][-1]
    return OPTIMAL, y, -cost[-1]


def _columns(system: LinearSystem, strict: frozenset[int], with_eps: bool):
    """Standard-form encoding with free x split as u - v.

    Column layout: u (dim), v (dim), [eps], one surplus per inequality,
    [cap slack].  Returns (rows, rhs, ncols, eps_col).
    """
    n = system.dim
    n_in = len(system.inequalities)
    eps_col = 2 * n if with_eps else -1
    ncols = 2 * n + (1 if with_eps else 0) + n_in + (1 if with_eps else 0)
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    surplus0 = 2 * n + (1 if with_eps else 0)
    for k, (w, c) in enumerate(system.inequalities):
        row = [ZERO] * ncols
        for j, wj in enumerate(w):
            if wj:
                row[j] = wj
                row[n + j] = -wj
        if with_eps and k in strict:
            row[eps_col] = -ONE
        row[surplus0 + k] = -ONE
        rows.append(row)
        rhs.append(-c)
    for w, c in system.equalities:
        row = [ZERO] * ncols
        for j, wj in enumerate(w):
            if wj:
                row[j] = wj
                row[n + j] = -wj
        rows.append(row)
        rhs.append(-c)
    if with_eps:
        cap = [ZERO] * ncols
        cap[eps_col] = ONE
        cap[-1] = ONE
        rows.append(cap)
        rhs.append(ONE)
    return rows, rhs, ncols, eps_col


def feasible_point(system: LinearSystem, strict: Iterable[int] = ()) -> Vec | None:
    """A rational point satisfying the system with the given inequality rows
    strict, or None when no such point exists."""
    strict_set = frozenset(strict)
    bad = [k for k in strict_set if not 0 <= k < len(system.inequalities)]
    if bad:
        raise ValueError(f"strict index out of range: {bad[0]}")
    rows, rhs, ncols, eps_col = _columns(system, strict_set, with_eps=True)
    costs = [ZERO] * ncols
    costs[eps_col] = -ONE  # maximize eps
    status, y, _ = _solve_standard(rows, rhs, costs)
    if status != OPTIMAL or y[eps_col] <= 0:
        return None
    n = system.dim
    return tuple(y[j] - y[n + j] for j in range(n))


def lp_feasible(system: LinearSystem, strict: Iterable[int] = ()) -> bool:
    """Whether some rational point satisfies the system, with the listed
    inequality rows required to hold strictly."""
    return feasible_point(system, strict) is not None


def lp_optimize(system: LinearSystem, objective: Sequence[Fraction], maximize: bool = False) -> LpResult:
    """Exact simplex optimum of objective·x over the system."""
    if len(objective) != system.dim:
        raise ValueError(
            f"dimension mismatch: objective has {len(objective)} coefficients in R^{system.dim}"
        )
    rows, rhs, ncols, _ = _columns(system, frozenset(), with_eps=False)
    n = system.dim
    costs = [ZERO] * ncols
    for j, oj in enumerate(objective):
        costs[j] = -oj if maximize else oj
        costs[n + j] = oj if maximize else -oj
    status, y, _ = _solve_standard(rows, rhs, costs)
    if status != OPTIMAL:
        return LpResult(status)
    point = tuple(y[j] - y[n + j] for j in range(n))
    return LpResult(OPTIMAL, dot(objective, point), point)


def recession_cone(system: LinearSystem) -> LinearSystem:
    """The cone of directions along which the closed solution set recedes."""
    n = system.dim
    return LinearSystem(
        n,
        tuple((w, ZERO) for w, _ in system.inequalities if not is_zero_vec(w)),
        tuple((w, ZERO) for w, _ in system.equalities if not is_zero_vec(w)),
    )


def _cone_is_trivial(system: LinearSystem) -> bool:
    """Whether the recession cone of the system is {0} (no feasibility check)."""
    cone = recession_cone(system)
    n = system.dim
    box = tuple((unit(n, i), ONE) for i in range(n)) + tuple(
        (tuple(-x for x in unit(n, i)), ONE) for i in range(n)
    )
    boxed = LinearSystem(n, cone.inequalities + box, cone.equalities)
    for i in range(n):
        e = unit(n, i)
        for obj in (e, tuple(-x for x in e)):
            res = lp_optimize(boxed, obj, maximize=True)
            if res.value > 0:
                return False
    return True


def recession_cone_is_trivial(system: LinearSystem) -> bool:
    """Whether the (nonempty) solution set is bounded.

    Decided by 2·dim LPs maximizing each signed coordinate over the recession
    cone intersected with the unit box.  Raises on an infeasible system.
    """
    if not lp_feasible(system):
        raise ValueError("recession cone of an infeasible system is undefined")
    return _cone_is_trivial(system)
