"""
Harmonic cubics on R^3
======================

A harmonic cubic is rotated so that its minimum on the sphere lies on the
first axis.  Four parameters then describe it, and the real eigenlines come
from the real roots of a single univariate polynomial.
"""
from collections import Counter
from fractions import Fraction as F

from tensoreig import CubicCanonicalForm, analyze
from tensoreig.cubic3 import random_harmonic_cubic

rep = analyze(CubicCanonicalForm(1, F(1, 2), F(1, 5), F(1, 7)))
print(rep.classification.tag, rep.classification.subcase)
print("polynomial:", rep.rho)
print(rep.real_line_count, "real lines;", rep.maxima_count, "maxima,", rep.minima_count, "minima,",
      rep.saddle_count, "saddles")

# %%
# Special families are solved in closed form.
axial = analyze(CubicCanonicalForm(1, F(1, 2), 0, 0))
print("axial:", axial.real_line_count, "lines")
print("quadric:", analyze(CubicCanonicalForm(1, 1, 0, 0)).quadric)

# %%
# How many maxima do random harmonic cubics have?
hist = Counter()
for seed in range(40):
    r = analyze(random_harmonic_cubic(seed), seed=seed)
    if not r.degenerate:
        hist[r.maxima_count] += 1
print("maxima histogram:", dict(sorted(hist.items())))
