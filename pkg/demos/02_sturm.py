"""
Counting real roots exactly
===========================

Sturm chains over the rationals count the distinct real roots of a
polynomial without any floating point.  Repeated roots are detected through
the gcd with the derivative.
"""
from fractions import Fraction

from tensoreig import UnivarPoly, parse_poly, real_roots, sturm_chain

p = parse_poly("t^5 - 3*t^3 + t - 1/7")
chain = sturm_chain(p)
print("chain length:", len(chain.polys))
report = real_roots(p)
print(report.count, "real roots near", [round(r, 6) for r in report.refined])

# a double root is counted once and flagged
t = UnivarPoly.t()
q = (t - Fraction(1, 2)) ** 2 * (t**2 + 1) * (t + 3)
r = real_roots(q)
print(r.count, "distinct roots, multiple:", r.multiple, "gcd:", r.gcd)
print("roots:", [round(x, 9) for x in r.refined])

# %%
# Root count on a subinterval
print(real_roots(p, range=(Fraction(0), Fraction(2))).count, "roots in [0, 2]")
