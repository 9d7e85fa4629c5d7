"""
Empirical slack in the growth bounds
====================================

The library's central check: T(r, g) should stay below a weighted count
of the zeros of g and of P - a_j, where P is a monomial in g and its
derivatives and the a_j are nonzero targets.  Since the analytic bound
carries an o(T) error term, the harness reports the per-radius slack
rhs - lhs and a verdict that tolerates small normalized dips on a tail
fraction of the grid.
"""

from nevanlab import (
    MonomialSpec,
    RadialGrid,
    build_standard_monomial,
    check_hinchliffe,
    check_hinchliffe_multi,
    check_smt,
    parse,
    slack_verdict,
)

grid = RadialGrid.geometric(2.0, 128.0, 16)

# g = z with P = g (g^2)' = 2 g^2 g' and targets {1, 2}: every quantity
# is a multiple of log r, so the slack is exactly 0.4 log r
g = parse("z")
p = build_standard_monomial(MonomialSpec(1, ((2, 1),)))
series = check_hinchliffe_multi(g, p, (1.0, 2.0), grid=grid, samples=512)
print("meromorphic variant, g = z, P = 2 g^2 g', targets {1, 2}")
print(series.to_csv_text())
verdict = slack_verdict(series)
print(f"verdict: {'PASS' if verdict.passed else 'FAIL'}"
      f" (worst normalized slack {verdict.worst_normalized_slack:+.4f})")

# the entire variant uses the larger denominator q d and needs a
# pole-free g; the slack tightens to log r / 6 here
series = check_hinchliffe_multi(g, p, (1.0, 2.0), grid=grid, samples=512,
                                entire=True)
print()
print("entire variant, same data")
last = series.rows[-1]
print(f"  at r={last[0]:.1f}: lhs={last[1]:.4f} rhs={last[2]:.4f}")
print(f"  verdict: {'PASS' if slack_verdict(series).passed else 'FAIL'}")

# single-target bound as the q = 1 slice of the general one
single = check_hinchliffe(g, p, grid=grid, samples=512)
multi = check_hinchliffe_multi(g, p, (1.0,), grid=grid, samples=512)
agree = max(abs(x - y) for rs, rm in zip(single.rows, multi.rows)
            for x, y in zip(rs, rm))
print()
print(f"single-value vs q=1 multi-value rows agree to {agree:.2e}")

# a classical cross-check on the same machinery: for q targets the
# truncated counting functions dominate (q - 1) T(r, f)
series = check_smt(parse("z^2"), (0.0, 1.0, -1.0), grid=grid, samples=512)
verdict = slack_verdict(series)
print()
print("three-target counting bound for f = z^2:",
      "PASS" if verdict.passed else "FAIL")
