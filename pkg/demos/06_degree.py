"""
Brouwer degree of polynomial maps
=================================

The global degree of a real polynomial map counts preimages of a regular
value with signs.  Its parity matches the parity of the degree of the map,
and complex maps viewed as real maps have degree m^n.
"""
import numpy as np

from tensoreig import HomogeneousMap, global_degree
from tensoreig.eigen import real_rep
from tensoreig.tensor_core import realify

square = realify(HomogeneousMap(1, 2, {(0, (2,)): 1}))
print("z -> z^2 has degree", global_degree(square).degree)

cube = HomogeneousMap(2, 3, {(0, (3, 0)): 1, (0, (0, 3)): -1, (1, (1, 2)): 1, (1, (0, 3)): 2})
report = global_degree(cube, seed=3)
print("cubic map: degree", report.degree, "from", report.solutions_per_sample, "preimages per sample")

# %%
# The real form of a complex matrix has nonnegative determinant.
rng = np.random.default_rng(0)
A, B = rng.standard_normal((2, 3, 3))
print("det of real form: %.4f" % np.linalg.det(real_rep(A, B)))
