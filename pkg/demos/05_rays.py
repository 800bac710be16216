"""
Blow-up along eigenlines
========================

If Q(c) = alpha c, the curve x(t) = phi(t) c solves x' = Q(x) as soon as
phi' = alpha phi^m.  With alpha > 0 the solution leaves every bounded set at
time T = 1 / (alpha (m - 1) y0^(m-1)).
"""
from fractions import Fraction

import numpy as np

from tensoreig import HomogeneousMap, infinity_spectrum, ray_solution, unbounded_certificate
from tensoreig.odeflow import ray_deviation

# x' = (x1^2 + x2^2, 2 x1 x2) has the eigenline spanned by (1, 1)
Q = HomogeneousMap(2, 2, {(0, (2, 0)): 1, (0, (0, 2)): 1, (1, (1, 1)): 2})
ray = ray_solution(Q, [1, 1], y0=Fraction(1, 2))
print("alpha =", ray.alpha, " blow-up time =", ray.blow_up_time)
print("phi on [0, 0.9 T]:", np.round(ray(np.linspace(0, 0.9 * float(ray.blow_up_time), 5)), 4))

err, drift = ray_deviation(Q, ray)
print("numeric vs closed form: relative error %.1e, drift %.1e" % (err, drift))

# %%
# A positive eigenvalue certifies an unbounded solution; the spectrum at
# infinity tells whether nearby solutions follow the ray.
cert = unbounded_certificate(Q)
print("certificate:", np.round(cert.c, 4), "alpha", round(cert.alpha, 4))
print("spectrum at infinity:", np.round(infinity_spectrum(Q, cert.c).spectrum, 4))
