"""Inversion of the forward map: measure vectors reproducing a given box.

A consistent probability set leaves only 8 of its 16 entries independent, so
the 16 measure weights are underdetermined: fixing the 7 weights
(m2, m3, m7, m10, m14, m15, m16) determines the remaining 9 uniquely.  The
resulting family is affine in the free weights, always sums to 1, and always
reproduces the input box; its sigma1 value is pinned by the box alone.

When one setting pair is perfectly correlated (p2 = p3 = 0) the 8 strategies
that would produce a disagreeing outcome there can be dropped, leaving a
one-parameter family in m16.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import (
    DEFAULT_EPS,
    INDEPENDENT_INDICES,
    ConsistencyError,
    as_probability_set,
    check_derived_relations,
    dependent_from_independent,
    DEPENDENT_INDICES,
)


class InfeasibleIndependentSetError(ValueError):
    """The 8 independent values do not extend to a valid probability set."""


@dataclass(frozen=True)
class IndependentProbabilities:
    """The 8 independent joint probabilities (p1, p4, p5, p8, p9, p12, p14, p15)."""
    p1: float
    p4: float
    p5: float
    p8: float
    p9: float
    p12: float
    p14: float
    p15: float

    def __post_init__(self):
        for name, value in self.__dict__.items():
            if not np.isfinite(value):
                raise ValueError(f"{name} is not finite: {value!r}")
            if value < -DEFAULT_EPS or value > 1.0 + DEFAULT_EPS:
                raise ValueError(f"{name} = {value!r} outside [0, 1]")

    def as_array(self) -> np.ndarray:
        return np.array([self.p1, self.p4, self.p5, self.p8,
                         self.p9, self.p12, self.p14, self.p15])

    @property
    def total(self) -> float:
        return float(self.as_array().sum())


@dataclass(frozen=True)
class FreeParameters:
    """The 7 free measure weights (m2, m3, m7, m10, m14, m15, m16).

    Any real values are admissible; zeros (the default) make the dependent
    weights read directly off the independent probabilities.
    """
    m2: float = 0.0
    m3: float = 0.0
    m7: float = 0.0
    m10: float = 0.0
    m14: float = 0.0
    m15: float = 0.0
    m16: float = 0.0

    def __post_init__(self):
        for name, value in self.__dict__.items():
            if not np.isfinite(value):
                raise ValueError(f"{name} is not finite: {value!r}")

    def as_array(self) -> np.ndarray:
        return np.array([self.m2, self.m3, self.m7, self.m10,
                         self.m14, self.m15, self.m16])

    @classmethod
    def from_sequence(cls, values) -> "FreeParameters":
        vals = [float(v) for v in values]
        if len(vals) != 7:
            raise ValueError(f"expected 7 free parameters, got {len(vals)}")
        return cls(*vals)


#: 0-based strategy indices of the free weights, in FreeParameters field order.
FREE_INDICES = (1, 2, 6, 9, 13, 14, 15)
#: 0-based strategy indices of the dependent weights (m1, m4, m5, m6, m8, m9, m11, m12, m13).
SOLVED_INDICES = (0, 3, 4, 5, 7, 8, 10, 11, 12)


def independent_probs(p, eps: float = DEFAULT_EPS) -> IndependentProbabilities:
    """Extract the 8 independent entries of a consistent probability set.

    Raises ConsistencyError listing the failed relations if the dependent
    entries disagree with the independent ones beyond eps.
    """
    p = as_probability_set(p)
    bad = check_derived_relations(p, eps)
    if bad:
        lines = "; ".join(v.describe() for v in bad)
        raise ConsistencyError(f"probability set is not consistent: {lines}", bad)
    return IndependentProbabilities(*(float(p[i]) for i in INDEPENDENT_INDICES))


def reconstruct_probs(ip: IndependentProbabilities, eps: float = DEFAULT_EPS) -> np.ndarray:
    """Rebuild the full 16-entry probability set from the independent 8.

    The dependent entries are forced by the consistency relations; if any of
    them leaves [0, 1] beyond eps the independent values do not describe a
    valid box and InfeasibleIndependentSetError is raised.
    """
    derived = dependent_from_independent(ip.as_array())
    bad = [(DEPENDENT_INDICES[row] + 1, float(v)) for row, v in enumerate(derived)
           if v < -eps or v > 1.0 + eps]
    if bad:
        detail = ", ".join(f"p{i} = {v!r}" for i, v in bad)
        raise InfeasibleIndependentSetError(
            f"independent probabilities do not extend to a valid box: {detail}")
    p = np.empty(16)
    p[list(INDEPENDENT_INDICES)] = ip.as_array()
    p[list(DEPENDENT_INDICES)] = derived
    return p


def general_solution(ip: IndependentProbabilities,
                     free: FreeParameters | None = None) -> np.ndarray:
    """The measure vector determined by the independent probabilities and the
    7 free weights.

    Total affine map: the result always sums to 1 and its forward map always
    reproduces the box extended from ip, for any real free weights.  Its
    sigma1 equals (3 - sum of the independent probabilities) / 2 regardless
    of the free weights.
    """
    if free is None:
        free = FreeParameters()
    p1, p4, p5, p8, p9, p12, p14, p15 = ip.as_array()
    f2, f3, f7, f10, f14, f15, f16 = free.as_array()

    m1 = 0.5 * (-1.0 - 2.0 * (f2 + f3 + f7 + f10 + f14 + f15 + f16)
                + p1 + p4 + p5 + p8 + p9 + p12 + p14 + p15)
    m4 = 0.5 * (1.0 + 2.0 * (f7 + f10 + f14 + f15 + f16)
                + p1 - p4 - p5 - p8 - p9 - p12 - p14 - p15)
    m5 = 0.5 * (1.0 + 2.0 * (f2 + f10 + f14 + f15 + f16)
                - p1 - p4 + p5 - p8 - p9 - p12 - p14 - p15)
    m6 = -f2 - f10 - f14 + p14
    m8 = -f7 - f15 - f16 + p12
    m9 = 0.5 * (1.0 + 2.0 * (f3 + f7 + f14 + f15 + f16)
                - p1 - p4 - p5 - p8 + p9 - p12 - p14 - p15)
    m11 = -f3 - f7 - f15 + p15
    m12 = -f10 - f14 - f16 + p8
    m13 = -f14 - f15 - f16 + p4

    return np.array([m1, f2, f3, m4, m5, m6, f7, m8,
                     m9, f10, m11, m12, m13, f14, f15, f16])


def solution_affine_map(ip: IndependentProbabilities) -> tuple[np.ndarray, np.ndarray]:
    """Affine coefficients of the solution family: m(f) = base + coeffs @ f.

    Returns (base, coeffs) with base of shape (16,) and coeffs of shape (16, 7),
    columns in FreeParameters field order.
    """
    base = general_solution(ip)
    coeffs = np.empty((16, 7))
    for col in range(7):
        unit = np.zeros(7)
        unit[col] = 1.0
        coeffs[:, col] = general_solution(ip, FreeParameters(*unit)) - base
    return base, coeffs


def solve(p, free: FreeParameters | None = None, eps: float = DEFAULT_EPS) -> np.ndarray:
    """Measure vector reproducing the consistent probability set p, at the
    given point of the 7-parameter solution family (zeros by default)."""
    return general_solution(independent_probs(p, eps), free)


def perfect_correlation_solution(p, m16: float = 0.0,
                                 eps: float = DEFAULT_EPS) -> np.ndarray:
    """One-parameter solution family for boxes with p2 = p3 = 0.

    The 8 strategies predicting disagreeing (a1, b1) outcomes are given zero
    weight (m5 .. m12 = 0) and the remaining 7 weights follow from the box and
    the chosen m16.  Requires p consistent and p2, p3 both zero within eps.

    The pair sum m4 + m13 always equals 1 - p8 - p9 - p15, so whenever
    p8 + p9 + p15 > 1 (canonical CHSH above 2) one of the two is negative.
    """
    p = as_probability_set(p)
    bad = check_derived_relations(p, eps)
    if bad:
        lines = "; ".join(v.describe() for v in bad)
        raise ConsistencyError(f"probability set is not consistent: {lines}", bad)
    if abs(p[1]) > eps or abs(p[2]) > eps:
        raise ConsistencyError(
            f"perfect correlation requires p2 = p3 = 0, got p2 = {p[1]!r}, p3 = {p[2]!r}")
    if not np.isfinite(m16):
        raise ValueError(f"m16 must be finite, got {m16!r}")

    p4, p8, p9, p12, p14, p15 = (float(p[i]) for i in (3, 7, 8, 11, 13, 14))
    m = np.zeros(16)
    m[0] = -m16 + p8 + p9 - p14
    m[1] = m16 - p8 + p14
    m[2] = m16 - p12 + p15
    m[3] = 1.0 - m16 - p4 - p9 + p12 - p15
    m[12] = m16 + p4 - p8 - p12
    m[13] = -m16 + p8
    m[14] = -m16 + p12
    m[15] = m16
    return m
