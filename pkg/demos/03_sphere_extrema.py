"""
Critical points of a form on the sphere
=======================================

For a cubic form q the stationary points of q restricted to the unit sphere
are the unit representatives of the real eigenlines of its gradient map.
Each one carries an index; over the sphere S^2 the indices add up to 2.
"""
import numpy as np

from tensoreig import (Form, extremum_on_sphere, find_eigenlines, gradient_map, poincare_hopf_check,
                       sphere_field_index)

# q = (x1^2 + x2^2 + x3^2)(x1 + x2 + x3)
terms = {}
for i in range(3):
    for j in range(3):
        e = [0, 0, 0]
        e[i] += 2
        e[j] += 1
        terms[tuple(e)] = terms.get(tuple(e), 0) + 1
q = Form(3, 3, terms)
Q = gradient_map(q)

lines = find_eigenlines(Q, field="real", strict=False)
points = [sphere_field_index(Q, s * line.rep) for line in lines for s in (1, -1)]
for p in points:
    print(np.round(p.point, 4), p.stationary_type, "index", p.index)

check = poincare_hopf_check([sphere_field_index(Q, line.rep) for line in lines], n=3, m=2)
print("index sum", check.index_sum, "expected", check.expected)

# %%
# The global minimum found by descent matches one of the points above.
low = extremum_on_sphere(q, "min")
print("minimum", np.round(low.point, 4), "value", round(low.value, 6))
