"""
Eigenlines of a quadratic map
=============================

A homogeneous map Q of degree m on C^n has, generically, exactly
(m^n - 1)/(m - 1) eigenlines.  We build a random complex quadratic map on C^3,
enumerate its seven lines and check each one.
"""
import numpy as np

from tensoreig import HomogeneousMap, bezout_count, find_eigenlines, verify_eigenline
from tensoreig.tensor_core import multi_indices

rng = np.random.default_rng(1)
n, m = 3, 2
coeffs = {(j, e): complex(*rng.standard_normal(2)) for j in range(n) for e in multi_indices(n, m)}
Q = HomogeneousMap(n, m, coeffs)
print("expected count:", bezout_count(n, m))

lines = find_eigenlines(Q, seed=0)
for line in lines:
    print(np.round(line.rep, 4), "lambda class", line.lambda_class, "residual %.1e" % line.residual)

# recomputed from scratch: tiny residuals, all lines simple
checks = [verify_eigenline(Q, line.rep) for line in lines]
print("max residual %.1e, all simple: %s" % (max(c.residual for c in checks), all(c.simple for c in checks)))

# %%
# Real maps: only the real lines.  The gradient of x1 x2 x3 has seven.
from tensoreig import Form, gradient_map

xyz = Form(3, 3, {(1, 1, 1): 1})
real = find_eigenlines(gradient_map(xyz), field="real")
print(len(real), "real lines")
for line in real:
    print(np.round(line.rep, 4))
