"""The simplest case: a constant kernel K == -1 on [0, 1].

The operator u -> -int u is rank one with a single eigenvalue -1, so the
count of negative eigenvalues is exactly 1.  The bound from any symmetric
measure is 1/2 + 4/16 = 0.75, which rounds up to the right answer.
"""
import numpy as np

from spectral_census import constant_kernel, kappa, make_quadrature, make_symmetric, theorem_bound
from spectral_census.oracle import count_below

k = constant_kernel(-1.0)

# kappa is the smaller eigenvalue of [[K(x,x), K(x,y)], [K(y,x), K(y,y)]]
print("kappa(0.2, 0.7) =", kappa(k, [0.2], [0.7]))  # -2

# any measure gives C = 4; try a lopsided one
mu = make_symmetric([((0.1, 0.9), 3.0), ((0.4, 0.4), 0.5), ((0.2, 0.3), 1.0)])
rep = theorem_bound(k, mu, 0.0)
print(f"C_0 = {rep.c_t:.15g}, raw bound = {rep.raw_bound}, integer bound = {rep.integer_bound}")

# brute force: Nystrom discretization on Gauss-Legendre grids
for n in (8, 16, 32):
    res = count_below(k, make_quadrature("gauss-legendre-interval", a=0, b=1, n=n), 0.0)
    print(f"n={n:3d}  eigenvalues below 0: {res.count_below_t}  (smallest {res.eigenvalues[0]:.12f})")

# moving t below -1 leaves nothing to count, and c_t refuses
try:
    theorem_bound(k, mu, -2.5)
except ValueError as exc:
    print("t = -2.5:", exc)

# scaling the measure does not change C
print("C for 10 * mu:", theorem_bound(k, mu.scaled(10.0), 0.0).c_t)
print("weights of mu:", np.round(mu.weights, 3))
