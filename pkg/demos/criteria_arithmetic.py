"""
Exact arithmetic behind the normality hypotheses
================================================

The normality criteria compare a sum of reciprocal multiplicity floors
against a rational function of the monomial shape (n, pairs) and the
target count q.  Everything here is exact Fraction arithmetic, so the
checks either hold or fail with no tolerance involved.
"""

from fractions import Fraction

from nevanlab import (
    CriterionParams,
    INFINITE_MULTIPLICITY,
    check_holomorphic_criterion,
    check_meromorphic_criterion,
    holomorphic_reduction,
    meromorphic_reduction,
)

INF = INFINITE_MULTIPLICITY

# a passing meromorphic case: f^3 (f^3)' with one target of multiplicity
# floor 3 gives 1/3 < 3/7
report = check_meromorphic_criterion(CriterionParams(3, ((3, 1),), (1.0,),
                                                     (3,)))
print(f"n=3, pairs=(3,1), q=1, ell=3: lhs={report.lhs} rhs={report.rhs}"
      f" -> {'PASS' if report.applicable else 'FAIL'}")

# shrinking n to 2 flips the comparison: 1/2 is no longer below 1/3
report = check_meromorphic_criterion(CriterionParams(2, ((3, 1),), (1.0,),
                                                     (2,)))
print(f"n=2, pairs=(3,1), q=1, ell=2: lhs={report.lhs} rhs={report.rhs}"
      f" -> {'PASS' if report.applicable else 'FAIL'}")

# the holomorphic variant degenerates for the pure derivative-of-power
# shape (k+1, k) with a single target: the right side collapses to 0
print()
print("holomorphic boundary shapes (k+1, k), q=1")
for k in range(1, 5):
    report = check_holomorphic_criterion(
        CriterionParams(0, ((k + 1, k),), (1.0,), (INF,)))
    print(f"  k={k}: rhs={report.rhs}"
          f" -> {'PASS' if report.condition_b else 'FAIL'}")

# adding a second target restores a positive right side
report = check_holomorphic_criterion(
    CriterionParams(0, ((2, 1),), (1.0, 2.0), (INF, INF)))
print(f"  k=1 with two targets: rhs={report.rhs}"
      f" -> {'PASS' if report.condition_b else 'FAIL'}")

# with q=1 and infinite multiplicity floors the full criteria reduce to
# integer comparisons on the shape alone
print()
print("integer reductions at q=1, ell=inf")
for n, pairs in ((3, ((3, 1),)), (0, ((2, 1),)), (1, ((2, 2), (1, 1)))):
    lhs, rhs, holds = meromorphic_reduction(n, pairs)
    full = check_meromorphic_criterion(
        CriterionParams(n, pairs, (1.0,), (INF,))).condition_b
    assert full == holds
    print(f"  meromorphic n={n} pairs={pairs}: {lhs} >= {rhs}"
          f" -> {'PASS' if holds else 'FAIL'}")
    lhs, rhs, holds = holomorphic_reduction(n, pairs)
    print(f"  holomorphic  n={n} pairs={pairs}: {lhs} >= {rhs}"
          f" -> {'PASS' if holds else 'FAIL'}")

# multiplicity floors enter through the reciprocal sum, with 1/inf = 0
params = CriterionParams(3, ((3, 1),), (1.0, 2.0), (2, INF))
report = check_meromorphic_criterion(params)
print()
print(f"mixed floors (2, inf): reciprocal sum {report.lhs}"
      f" = {Fraction(1, 2)} + 0, rhs {report.rhs}")
