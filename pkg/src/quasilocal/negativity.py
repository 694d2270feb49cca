"""Minimum-negativity search over the solution family of a box.

Total negativity (the summed magnitude of a measure vector's negative
weights) is a convex piecewise-linear function of the 7 free weights, so its
minimum over the whole solution family is an epigraph linear program: one
slack t_i >= max(0, -m_i(f)) per weight, objective sum(t).  The LP is tiny
(23 variables, 16 constraints) and is solved by a dense two-phase simplex
with Bland's rule, so results are deterministic and need no external solver.

Every CHSH variant also gives a closed-form lower bound: a variant sum of
delta forces one of its two complementary 8-strategy sums below zero by
(|delta| - 2) / 4, and the negative weights must cover that deficit.  The
reported minimum always sits at or above the largest such bound.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import (
    CHSH_VARIANTS,
    DEFAULT_EPS,
    chsh,
    total_negativity,
)
from .solver import (
    FreeParameters,
    IndependentProbabilities,
    general_solution,
    independent_probs,
    solution_affine_map,
)

#: Feasibility slack used inside the simplex.
LP_FEASIBILITY_EPS = 1e-8
#: Result-level slack: a minimum at or below this counts as "a nonnegative
#: model exists".
RESULT_EPS = 1e-6

_PIVOT_ELIGIBLE = 1e-9     # column entries below this cannot be ratio-test pivots
_PIVOT_BREAKDOWN = 1e-12   # chosen pivot below this aborts with a diagnostic
_MAX_PIVOTS = 10_000


class DegenerateSystemError(RuntimeError):
    """The simplex hit a numerically unusable pivot or failed to terminate."""


@dataclass(frozen=True)
class LinearProgram:
    """Minimize objective @ x subject to lhs @ x >= rhs.

    Variables with nonnegative[j] set are bounded below by zero; the rest are
    free.  All entries must be finite.
    """
    objective: np.ndarray
    lhs: np.ndarray
    rhs: np.ndarray
    nonnegative: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.objective, dtype=float)
        a = np.asarray(self.lhs, dtype=float)
        b = np.asarray(self.rhs, dtype=float)
        nn = np.asarray(self.nonnegative, dtype=bool)
        if a.ndim != 2:
            raise ValueError("lhs must be a matrix")
        rows, cols = a.shape
        if c.shape != (cols,) or b.shape != (rows,) or nn.shape != (cols,):
            raise ValueError(
                f"inconsistent LP dimensions: lhs {a.shape}, objective {c.shape}, "
                f"rhs {b.shape}, nonnegative {nn.shape}")
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise ValueError("LP contains non-finite entries")
        object.__setattr__(self, "objective", c)
        object.__setattr__(self, "lhs", a)
        object.__setattr__(self, "rhs", b)
        object.__setattr__(self, "nonnegative", nn)


@dataclass(frozen=True)
class LpSolution:
    status: str                      # "optimal" | "unbounded" | "infeasible"
    optimal_value: float | None
    assignment: np.ndarray | None    # values of the original variables


def _pivot(tableau: np.ndarray, row: int, col: int) -> None:
    pivot = tableau[row, col]
    if abs(pivot) < _PIVOT_BREAKDOWN:
        raise DegenerateSystemError(
            f"pivot magnitude {abs(pivot):.3e} below {_PIVOT_BREAKDOWN:.0e} "
            f"at row {row}, column {col}")
    tableau[row] /= pivot
    for i in range(tableau.shape[0]):
        if i != row and tableau[i, col] != 0.0:
            tableau[i] -= tableau[i, col] * tableau[row]


def _run_simplex(tableau: np.ndarray, basis: list[int], costs: np.ndarray) -> str:
    """Bland's-rule simplex on an equality tableau with rhs in the last column.

    Entering variable: lowest-index column with negative reduced cost.
    Leaving variable: minimum ratio, ties broken by lowest basic index.
    Returns "optimal" or "unbounded"; mutates tableau and basis in place.
    """
    rows, width = tableau.shape
    ncols = width - 1
    for _ in range(_MAX_PIVOTS):
        reduced = costs.copy()
        for i, b in enumerate(basis):
            if costs[b] != 0.0:
                reduced -= costs[b] * tableau[i, :ncols]
        entering = -1
        for j in range(ncols):
            if reduced[j] < -LP_FEASIBILITY_EPS:
                entering = j
                break
        if entering < 0:
            return "optimal"

        leaving = -1
        best_ratio = np.inf
        for i in range(rows):
            coeff = tableau[i, entering]
            if coeff > _PIVOT_ELIGIBLE:
                ratio = tableau[i, -1] / coeff
                if (ratio < best_ratio - _PIVOT_BREAKDOWN
                        or (abs(ratio - best_ratio) <= _PIVOT_BREAKDOWN
                            and (leaving < 0 or basis[i] < basis[leaving]))):
                    best_ratio = ratio
                    leaving = i
        if leaving < 0:
            return "unbounded"

        _pivot(tableau, leaving, entering)
        basis[leaving] = entering
    raise DegenerateSystemError(f"simplex did not terminate within {_MAX_PIVOTS} pivots")


def solve_lp(lp: LinearProgram) -> LpSolution:
    """Solve a LinearProgram with a dense two-phase simplex.

    Deterministic for identical input: Bland's rule fixes every pivot choice.
    Raises DegenerateSystemError on numerical breakdown.
    """
    rows, ncols = lp.lhs.shape

    # Split free variables into positive/negative parts.
    col_plus = np.full(ncols, -1, dtype=int)
    col_minus = np.full(ncols, -1, dtype=int)
    columns = []
    for j in range(ncols):
        col_plus[j] = len(columns)
        columns.append(lp.lhs[:, j])
        if not lp.nonnegative[j]:
            col_minus[j] = len(columns)
            columns.append(-lp.lhs[:, j])
    a_std = np.column_stack(columns)

    # Surplus columns turn lhs @ x >= rhs into equalities, then rows are
    # flipped as needed so the rhs is nonnegative and artificials can start
    # as the basis.
    a_eq = np.hstack([a_std, -np.eye(rows)])
    b = lp.rhs.astype(float).copy()
    for i in range(rows):
        if b[i] < 0.0:
            a_eq[i] *= -1.0
            b[i] = -b[i]
    n_real = a_eq.shape[1]

    costs_std = np.zeros(n_real)
    for j in range(ncols):
        costs_std[col_plus[j]] = lp.objective[j]
        if col_minus[j] >= 0:
            costs_std[col_minus[j]] = -lp.objective[j]

    tableau = np.hstack([a_eq, np.eye(rows), b[:, None]])
    basis = [n_real + i for i in range(rows)]

    phase1_costs = np.zeros(n_real + rows)
    phase1_costs[n_real:] = 1.0
    status = _run_simplex(tableau, basis, phase1_costs)
    if status != "optimal":
        raise DegenerateSystemError("phase-one subproblem reported unbounded")
    phase1_value = sum(phase1_costs[b] * tableau[i, -1] for i, b in enumerate(basis))
    if phase1_value > LP_FEASIBILITY_EPS:
        return LpSolution("infeasible", None, None)

    # Drive artificials out of the basis; rows with no real pivot are redundant.
    keep_rows = []
    for i in range(rows):
        if basis[i] >= n_real:
            pivot_col = -1
            for j in range(n_real):
                if abs(tableau[i, j]) > _PIVOT_ELIGIBLE:
                    pivot_col = j
                    break
            if pivot_col < 0:
                continue
            _pivot(tableau, i, pivot_col)
            basis[i] = pivot_col
        keep_rows.append(i)
    tableau = np.hstack([tableau[keep_rows, :n_real], tableau[keep_rows, -1:]])
    basis = [basis[i] for i in keep_rows]

    status = _run_simplex(tableau, basis, costs_std)
    if status == "unbounded":
        return LpSolution("unbounded", None, None)

    x_std = np.zeros(n_real)
    for i, bvar in enumerate(basis):
        x_std[bvar] = tableau[i, -1]
    x = np.empty(ncols)
    for j in range(ncols):
        x[j] = x_std[col_plus[j]]
        if col_minus[j] >= 0:
            x[j] -= x_std[col_minus[j]]
    return LpSolution("optimal", float(lp.objective @ x), x)


# ---------------------------------------------------------------------------
# Negativity over the solution family
# ---------------------------------------------------------------------------

def build_negativity_lp(ip: IndependentProbabilities) -> LinearProgram:
    """Epigraph LP whose optimum is the minimum total negativity over the
    solution family of ip.

    Variables are the 7 free weights (unbounded) followed by 16 slacks
    t_i >= 0 with t_i >= -m_i(f); the objective is sum(t).
    """
    base, coeffs = solution_affine_map(ip)
    lhs = np.hstack([coeffs, np.eye(16)])
    rhs = -base
    objective = np.concatenate([np.zeros(7), np.ones(16)])
    nonnegative = np.concatenate([np.zeros(7, dtype=bool), np.ones(16, dtype=bool)])
    return LinearProgram(objective, lhs, rhs, nonnegative)


def chsh_lower_bound(p, eps: float = DEFAULT_EPS) -> float:
    """Largest closed-form negativity bound over the 8 CHSH variants:
    max(0, (|delta_v| - 2) / 4)."""
    return max(max(0.0, (abs(chsh(p, v, eps)) - 2.0) / 4.0) for v in CHSH_VARIANTS)


@dataclass(frozen=True)
class NegativityResult:
    """Outcome of the minimum-negativity search for one box.

    witness is a measure vector attaining the minimum (taken from the
    simplex's terminal basis, not canonicalized); feasible records whether a
    nonnegative model exists, i.e. the minimum is zero up to RESULT_EPS.
    """
    min_negativity: float
    witness: np.ndarray
    witness_free_params: FreeParameters
    lower_bound: float
    feasible: bool


def min_negativity(p, eps: float = DEFAULT_EPS) -> NegativityResult:
    """Minimize total negativity over all measure vectors reproducing p.

    Requires p consistent within eps.  The returned minimum is recomputed
    from the witness, so the witness and the reported value always agree.
    """
    ip = independent_probs(p, eps)
    solution = solve_lp(build_negativity_lp(ip))
    if solution.status != "optimal":
        raise DegenerateSystemError(
            f"negativity LP unexpectedly {solution.status}; it is feasible and "
            "bounded by construction")
    free = FreeParameters.from_sequence(solution.assignment[:7])
    witness = general_solution(ip, free)
    return NegativityResult(
        min_negativity=total_negativity(witness),
        witness=witness,
        witness_free_params=free,
        lower_bound=chsh_lower_bound(p, eps),
        feasible=total_negativity(witness) <= RESULT_EPS,
    )
