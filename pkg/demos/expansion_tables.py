"""
Expanding derivatives of powers
===============================

Repeated differentiation of g^n produces an integer combination of
products g^{m_0} (g')^{m_1} (g'')^{m_2} ... with Sum m_j = n and
Sum j m_j = t.  Two exact invariants make good spot checks: the
coefficients sum to n^t (set g = e^z, evaluate at 0), and the minimum
total degree d and maximum derivative weight theta of a product of such
blocks are read off the block parameters directly.
"""

from nevanlab import (
    MonomialSpec,
    alpha_index,
    build_standard_monomial,
    degree_d,
    expand_power_derivative,
    print_diffpoly,
    weight_theta,
)

print("(g^n)^(t) expansions")
for n in (2, 3):
    for t in (1, 2, 3):
        terms = expand_power_derivative(n, t)
        text = print_diffpoly(build_standard_monomial(
            MonomialSpec(0, ((n, t),))))
        total = sum(c for c, _ in terms)
        print(f"  n={n} t={t}  {len(terms):2d} terms,"
              f" coefficient sum {total:4d} = {n}^{t}")
        print(f"           {text}")

# products of blocks: d(P) adds the powers, theta(P) adds the orders
print()
print("degree and weight of product monomials g^n (g^n1)^(t1) ...")
for spec in (MonomialSpec(1, ((2, 1),)),
             MonomialSpec(0, ((3, 2),)),
             MonomialSpec(2, ((2, 2), (3, 1)))):
    p = build_standard_monomial(spec)
    print(f"  n={spec.n} pairs={spec.pairs}:"
          f" d={degree_d(p)} theta={weight_theta(p)}"
          f" alpha={alpha_index(spec)}")

# the expanded form can get wide quickly; term counts stay exact
print()
print("term counts for (g^5)^(t)")
for t in range(0, 6):
    print(f"  t={t}: {len(expand_power_derivative(5, t))} terms")
