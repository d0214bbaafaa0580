# Copyright 2026 The vbem Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Independent oracle for the frozen estimator values in test_estimate.cpp.

Point values use 50-digit mpmath arithmetic in linear space (the C++ code
works in log space). Optima use scipy Nelder-Mead from many random starts
with a penalty outside the feasible region (the C++ code uses pattern
search from Halton starts). Run: python3 tests/oracles/bound_oracle.py
"""

import numpy as np
from mpmath import mp, mpf, exp
from scipy.optimize import minimize

mp.dps = 50


def terms(k, p, pmax, tau, psi, e1, e2, e3, n):
    k, p, pmax, tau, psi, e1, e2, e3, n = map(mpf, (k, p, pmax, tau, psi, e1, e2, e3, n))
    r = (2 * p - 1) / (2 * p - 2)
    delta = 1 - tau
    e4 = (mpf(1) / 2 - r + psi - e3) / (1 - r + psi - e3) - p
    phi = (1 / k - e2) * (r - psi - e1)
    b1 = exp(-2 * (1 - r + psi - e3) * delta * e4**2 * n) + exp(-2 * delta**2 * e3**2 / (r - psi) * n)
    b2 = exp(-2 * (r - psi - e1) * tau * e2**2 * n) + exp(-2 * tau**2 * e1**2 / (r - psi) * n)
    rej = exp(-2 * (phi - pmax) ** 2 * tau * n)
    ver = max(b1, b2)
    return dict(phi=phi, eps4=e4, branch1=b1, branch2=b2, ver=ver, rej=rej, total=ver + rej)


def feasible(k, p, pmax, tau, psi, e1, e2, e3):
    r = (2 * p - 1) / (2 * p - 2)
    phi = (1 / k - e2) * (r - psi - e1)
    return (0 < tau < 1 and 0 < psi < r and 0 < e1 < 0.5 - psi and 0 < e2 < 1 / k
            and 0 < e3 < psi and 0 <= pmax < phi < r / k)


def best_eps(k, p, pmax, n, tau=None, starts=400, seed=7):
    rng = np.random.default_rng(seed)

    def f(v):
        t = tau if tau is not None else v[4]
        psi, e1, e2, e3 = v[:4]
        if not feasible(k, p, pmax, t, psi, e1, e2, e3):
            return 10.0
        return float(terms(k, p, pmax, t, psi, e1, e2, e3, n)["total"])

    best = (10.0, None)
    r = (2 * p - 1) / (2 * p - 2)
    for _ in range(starts):
        psi = rng.uniform(0, min(r, 0.5))
        v0 = [psi, rng.uniform(0, 0.5 - psi), rng.uniform(0, 1 / k), rng.uniform(0, psi), rng.uniform(0.05, 0.95)]
        if f(v0) >= 10:
            continue
        res = minimize(f, v0 if tau is None else v0[:4], method="Nelder-Mead",
                       options=dict(xatol=1e-12, fatol=1e-15, maxiter=20000, maxfev=40000))
        if res.fun < best[0]:
            best = (res.fun, res.x)
    return best


if __name__ == "__main__":
    print("phi(k=2,p=0,psi=.15,e1=.01,e2=.01) =", terms(2, 0, 0, 0.5, 0.15, 0.01, 0.01, 0.1, 1)["phi"])
    for args in [(2, 0, 0.10, 0.9, 0.13, 0.02, 0.03, 0.09, 5198),
                 (3, 0.1, 0.03, 0.7, 0.2, 0.05, 0.1, 0.1, 20000)]:
        t = terms(*args)
        print(args)
        for key in ("phi", "eps4", "branch1", "branch2", "ver", "rej", "total"):
            print(f"  {key:8s} {mp.nstr(t[key], 17)}")
    for n in (5198, 6818, 10000):
        print(f"min eps, tau=0.9, n={n}: {best_eps(2, 0, 0.15, n, tau=0.9)[0]:.7f}")
    # Boundary of the smallest n with eps <= 0.05, tau pinned and free.
    for n in (7595, 7596):
        print(f"min eps, tau=0.9, n={n}: {best_eps(2, 0, 0.15, n, tau=0.9)[0]:.9f}")
    for n in (3351, 3352, 3353):
        value, x = best_eps(2, 0, 0.15, n, starts=1500, seed=3)
        print(f"min eps, free tau, n={n}: {value:.9f} at tau={x[4]:.4f}")
