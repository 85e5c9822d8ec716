## The bound functions and what they certify

import numpy as np

from tilepack import gen_random, pack
from tilepack.bounds import certify, check_point_convexity, rho_star, tangent, xi, xi_prime

## Critical densities
r = rho_star("strong")
print("weak   rho* =", rho_star("weak"))
print("strong rho* = %.12f   xi_s(rho*) = %.12f   xi_s'(rho*) = %.4f" % (r, xi("strong", r), xi_prime("strong", r)))

## The strong bound jumps at 1/2
print("xi_s(1/2)      = %.6f" % xi("strong", 0.5))
print("xi_s(1/2 + )   = %.6f" % xi("strong", 0.5 + 1e-12))
print("tangent at 1/2 = %.4f" % tangent("strong", r)(0.5))

## A short table
for rho in np.linspace(0.3, 1.0, 8):
    print("rho %.2f   xi_w %.4f   xi_s %.4f" % (rho, xi("weak", rho), xi("strong", rho)))

## The tangent at rho* stays below xi_s
rep = check_point_convexity("strong", r)
print("point-convex:", rep.passed, " worst gap %.2e at rho %.4f" % (rep.max_violation, rep.worst_rho))

## Certificates for a few random packings
for seed in range(5):
    cert = certify(pack(gen_random(150, seed)))
    print("seed %d  c* %.4f  certified %.4f  actual %.4f" % (seed, cert.c_star, cert.certified_coverage, cert.coverage))

## Worst case of the certificate
print("c* = 3/2 certifies %.2f%% of the square" % (100 * r))
