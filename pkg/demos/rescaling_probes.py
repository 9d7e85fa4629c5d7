"""
Normal-family probes: spherical maxima and rescaling limits
===========================================================

Two numerical windows onto normality.  The first tabulates the maximum
spherical derivative across a one-parameter family: bounded maxima are
consistent with normality, divergent maxima witness its failure.  The
second rescales a family near a point, g_v(xi) = rho_v^-alpha
f_v(z_v + rho_v xi), and tracks convergence of the zoomed functions;
lower-index extra terms of a generalized monomial die off under the
same zoom.
"""

from fractions import Fraction

from nevanlab import (
    FamilySpec,
    MonomialSpec,
    RescalingSpec,
    marty_probe,
    parse,
    rescale_extras_check,
    zalcman_rescale,
)

# f_v(z) = v z concentrates spherical curvature at the origin; the
# maxima grow linearly in v and the probe flags the family
fam = FamilySpec("v*z", tuple(float(4 ** i) for i in range(5)))
report = marty_probe(fam, resolution=15)
print("f_v = v z on the unit disc")
print(report.to_csv_text())
print("flag:", report.flag)

# translations f_v(z) = z + v leave the derivative alone; the spherical
# derivative is bounded by 1 and nothing diverges
fam = FamilySpec("z + v", tuple(float(4 ** i) for i in range(5)))
report = marty_probe(fam, resolution=15)
print()
print("f_v = z + v on the unit disc")
print("flag:", report.flag)

# rescaling f_v = v z at the origin with rho_v = 1/v and alpha = 0
# reproduces the identity map exactly at every stage
params = tuple(float(2 ** i) for i in range(2, 7))
fam = FamilySpec("v*z", params)
spec = RescalingSpec.from_rules(0, params, lambda v: 0j, lambda v: 1.0 / v)
report = zalcman_rescale(fam, spec, limit=parse("z"))
print()
print("zoomed family g_v(xi) = f_v(xi / v), expected limit xi")
print(report.to_csv_text())
print("converged:", report.converged)

# generalized monomial M = g (g^2)' + extra f^3 f': the main term has
# index alpha = 1/3 and the extra index 1/4 < 1/3, so zooming with
# rho_v = v^(-3/2) keeps the main term fixed while the extra vanishes
params = tuple(float(10 ** k) for k in (2, 4, 6, 8))
fam = FamilySpec("v*z", params)
spec = RescalingSpec.from_rules(Fraction(1, 3), params, lambda v: 0j,
                                lambda v: v ** -1.5)
report = rescale_extras_check(MonomialSpec(1, ((2, 1),)),
                              ((1.0, MonomialSpec(3, ((1, 1),))),),
                              fam, spec)
print()
print("extra-term decay under the main-term zoom")
print(report.to_csv_text())
print("main term converged:", report.main_converged)
print("extras vanish:", report.extras_vanish)
