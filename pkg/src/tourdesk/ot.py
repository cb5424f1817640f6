"""Exact solver for the balanced transportation problem.

Minimizes sum(T[i,j] * cost[i,j]) over nonnegative T with row sums equal
to the source masses and column sums equal to the target masses.  The
solver is the classic transportation simplex: a northwest-corner basic
feasible solution, then dual-variable (MODI) pricing with cycle pivots
until no reduced cost is negative.  It is exact up to floating-point
arithmetic and returns an optimal basic feasible solution, which is what
lets tests compare it against exhaustive enumeration oracles.

Degenerate pivots are permitted; ties are broken lexicographically, and
a pivot-count guard switches the entering rule to Bland's (lowest index)
if an instance ever stalls, which guarantees termination.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, SolverError

# Reduced costs above -_PRICE_TOL are treated as nonnegative (optimal).
_PRICE_TOL = 1e-11


@dataclass(frozen=True)
class TransportPlan:
    """Optimal coupling between two mass distributions.

    ``plan[i, j]`` is the mass moved from source i to target j; ``value``
    is the objective sum(plan * cost) at the optimum.
    """

    plan: np.ndarray
    value: float


def _northwest_corner(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, list[tuple[int, int]]]:
    """Initial basic feasible solution with exactly n+m-1 basic cells."""
    n, m = len(a), len(b)
    x = np.zeros((n, m), dtype=np.float64)
    basis: list[tuple[int, int]] = []
    remaining_a = a.astype(np.float64).copy()
    remaining_b = b.astype(np.float64).copy()
    i = j = 0
    for _ in range(n + m - 1):
        basis.append((i, j))
        q = min(remaining_a[i], remaining_b[j])
        x[i, j] = q
        remaining_a[i] -= q
        remaining_b[j] -= q
        if i == n - 1:
            j += 1
        elif j == m - 1:
            i += 1
        elif remaining_a[i] <= remaining_b[j]:
            i += 1
        else:
            j += 1
    return x, basis


def _compute_duals(cost: np.ndarray, basis: list[tuple[int, int]], n: int, m: int
                   ) -> tuple[np.ndarray, np.ndarray]:
    """Solve c[i,j] == u[i] + v[j] over the basis tree (u[0] anchored at 0)."""
    u = np.full(n, np.nan)
    v = np.full(m, np.nan)
    row_cells: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    col_cells: list[list[tuple[int, int]]] = [[] for _ in range(m)]
    for (i, j) in basis:
        row_cells[i].append((i, j))
        col_cells[j].append((i, j))
    u[0] = 0.0
    stack = [("r", 0)]
    while stack:
        kind, k = stack.pop()
        if kind == "r":
            for (i, j) in row_cells[k]:
                if np.isnan(v[j]):
                    v[j] = cost[i, j] - u[i]
                    stack.append(("c", j))
        else:
            for (i, j) in col_cells[k]:
                if np.isnan(u[i]):
                    u[i] = cost[i, j] - v[j]
                    stack.append(("r", i))
    if np.isnan(u).any() or np.isnan(v).any():
        raise SolverError("basis does not span the transportation graph")
    return u, v


def _find_cycle(basis: set[tuple[int, int]], enter: tuple[int, int], n: int, m: int
                ) -> list[tuple[int, int]]:
    """Cells of the unique cycle closed by ``enter`` in the basis tree.

    Returned in cycle order starting at ``enter``; even positions gain
    mass, odd positions lose it.
    """
    row_adj: list[list[int]] = [[] for _ in range(n)]
    col_adj: list[list[int]] = [[] for _ in range(m)]
    for (i, j) in basis:
        row_adj[i].append(j)
        col_adj[j].append(i)

    # Path from row node enter[0] to column node enter[1] through the tree.
    start, goal = enter
    parent: dict[tuple[str, int], tuple[str, int]] = {}
    seen = {("r", start)}
    stack = [("r", start)]
    while stack:
        kind, k = stack.pop()
        if kind == "c" and k == goal:
            break
        neighbors = (("c", j) for j in row_adj[k]) if kind == "r" else (("r", i) for i in col_adj[k])
        for node in neighbors:
            if node not in seen:
                seen.add(node)
                parent[node] = (kind, k)
                stack.append(node)
    else:
        raise SolverError("entering cell closes no cycle; basis is not a tree")

    path = [("c", goal)]
    while path[-1] != ("r", start):
        path.append(parent[path[-1]])
    path.reverse()  # r-start, c, r, ..., c-goal

    cycle = [enter]
    for a, b in zip(path, path[1:]):
        (ka, na), (kb, nb) = a, b
        cycle.append((na, nb) if ka == "r" else (nb, na))
    return cycle


def solve_ot(a: np.ndarray, b: np.ndarray, cost: np.ndarray) -> TransportPlan:
    """Exact optimal transport between mass vectors ``a`` and ``b``.

    ``cost`` must be an |a| x |b| matrix of finite nonnegative entries.
    Raises InvalidInputError for shape mismatches or non-finite costs.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    cost = np.asarray(cost, dtype=np.float64)
    if a.ndim != 1 or b.ndim != 1 or len(a) == 0 or len(b) == 0:
        raise InvalidInputError("mass distributions must be nonempty 1-d arrays")
    if cost.shape != (len(a), len(b)):
        raise InvalidInputError(
            f"cost must be {len(a)}x{len(b)}, got {cost.shape}"
        )
    if not np.isfinite(cost).all():
        raise InvalidInputError("cost matrix contains non-finite entries")
    if (cost < 0).any():
        raise InvalidInputError("cost matrix contains negative entries")
    if (a <= 0).any() or (b <= 0).any():
        raise InvalidInputError("masses must be strictly positive")
    if abs(a.sum() - b.sum()) > 1e-9:
        raise InvalidInputError(
            f"unbalanced problem: supply {a.sum()!r} != demand {b.sum()!r}"
        )

    n, m = len(a), len(b)
    x, basis_list = _northwest_corner(a, b)
    basis = set(basis_list)

    max_pivots = 20 * (n * m + n + m) + 100
    bland_after = max_pivots // 2
    for pivot in range(max_pivots + 1):
        u, v = _compute_duals(cost, sorted(basis), n, m)
        reduced = cost - u[:, None] - v[None, :]

        entering = None
        if pivot < bland_after:
            best = -_PRICE_TOL
            for i in range(n):
                for j in range(m):
                    if (i, j) not in basis and reduced[i, j] < best:
                        best = reduced[i, j]
                        entering = (i, j)
        else:
            for i in range(n):
                for j in range(m):
                    if (i, j) not in basis and reduced[i, j] < -_PRICE_TOL:
                        entering = (i, j)
                        break
                if entering:
                    break

        if entering is None:
            value = float(np.sum(x * cost))
            plan = x.copy()
            plan.setflags(write=False)
            return TransportPlan(plan=plan, value=value)

        cycle = _find_cycle(basis, entering, n, m)
        losing = cycle[1::2]
        theta = min(x[c] for c in losing)
        leaving = min(c for c in losing if x[c] == theta)
        for k, cell in enumerate(cycle):
            x[cell] += theta if k % 2 == 0 else -theta
        x[leaving] = 0.0  # guard residual float dust on the leaving cell
        basis.remove(leaving)
        basis.add(entering)

    raise SolverError(f"no optimum after {max_pivots} pivots")
