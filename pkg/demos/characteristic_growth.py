"""
Radial growth tables for concrete functions
===========================================

The characteristic T(r) = m(r) + N(r) is the basic growth gauge for a
meromorphic function: m averages log+ |f| over the circle |z| = r and N
integrates the pole count up to radius r.  This script tabulates both
pieces for a few functions whose growth is known in closed form.
"""

import math

from nevanlab import RadialGrid, characteristic_T, parse, radial_report

grid = RadialGrid.geometric(2.0, 128.0, 16)

# the identity map has no poles and log+ |z| = log r on the circle,
# so T(r, z) = log r exactly
f = parse("z")
print("T(r, z) against log r")
for r in grid:
    print(f"  r={r:8.2f}  T={float(characteristic_T(f, r)):.6f}"
          f"  log r={math.log(r):.6f}")

# a function with one simple pole: m stays bounded, N carries the growth
print()
print("radial table for 1/(z - 1), a single simple pole")
report = radial_report(parse("1/(z - 1)"), grid=grid, samples=512)
print(report.to_csv_text())

# the exponential grows like r/pi; the quadrature recovers the constant
print("T(r, e^z) against r/pi")
f = parse("exp(z)")
for r in (10.0, 20.0, 50.0, 100.0):
    got = float(characteristic_T(f, r))
    print(f"  r={r:6.1f}  T={got:10.6f}  r/pi={r / math.pi:10.6f}"
          f"  rel err={abs(got - r / math.pi) / (r / math.pi):.2e}")

# T is nondecreasing in r for every function; the report records the check
print()
print("monotone in r:", report.monotone_ok)
