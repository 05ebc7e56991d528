"""Four proxy functions on the simplex and what they cost in the bound.

The mirror map sends a dual accumulator ``z`` to the simplex point that
minimizes ``z.theta + beta V(theta)``.  Entropy gives a softmax; the power
proxy needs a one-dimensional root find; the p-norm proxy falls back to a
generic solver; the squared euclidean norm gives a projection.
"""

import numpy as np

from smdagg import generic_mirror_map, make_proxy, performance_ratio

lam, M = 1.0, 8
z = np.array([0.3, -0.4, 0.0, 1.2, -0.1, 0.5, 0.9, -0.6])

for kind in ("entropy", "power", "pnorm", "euclidean"):
    proxy = make_proxy(kind, lam, M)
    theta = proxy.mirror_map(z, beta=0.5).theta.values
    print(f"{kind:<10} alpha={proxy.alpha:.4f}  vmax/alpha={performance_ratio(proxy):7.4f}  "
          f"theta={np.array2string(theta, precision=3, suppress_small=True)}")

# Smaller vmax/alpha means a smaller constant in front of sqrt(t+1)/t.
# Entropy's lambda^2 ln M grows slowly with M; euclidean's lambda^2 M / 2 does not.
for M in (2, 16, 256, 4096):
    e, q = make_proxy("entropy", 1.0, M), make_proxy("euclidean", 1.0, M)
    print(f"M={M:<5} entropy {performance_ratio(e):8.3f}   euclidean {performance_ratio(q):8.1f}")

# Closed forms agree with the generic solver.
for kind in ("entropy", "power"):
    proxy = make_proxy(kind, lam, 8)
    gap = np.abs(proxy.mirror_map(z, 0.5).theta.values
                 - generic_mirror_map(proxy, z, 0.5).theta.values).sum()
    print(f"{kind}: closed form vs generic solver, l1 gap {gap:.1e}")

try:
    make_proxy("l1", lam, M)
except ValueError as exc:
    print(f"l1 penalty rejected: {exc}")
