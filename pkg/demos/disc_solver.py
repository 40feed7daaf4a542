"""
Counting holomorphic discs numerically
======================================

Discs in the class H - 2beta + m*alpha are zeros of a small analytic system
in one complex parameter a.  The solver continues solutions in t, certifies
them by residual, and tracks them once around the theta circle to see the
Z/4 symmetry as a cyclic permutation.
"""

import numpy as np

from wallcross.numeric import (
    DiscParams,
    algebraic_count_H2b,
    beta_disc,
    limit_disc_p114,
    orbit_count_z5,
    solve_family_H2b,
    verify_asymptotics,
)

p = DiscParams(c=1.0, r=0.5, t=1e-3)
for m in (2, 1, 0, -1):
    s = solve_family_H2b(m, p, steps=128)
    if s.solutions:
        worst = max(x.residual for x in s.solutions)
        print(f"m={m:2}: {len(s.solutions)} solutions, count {algebraic_count_H2b(s)}, "
              f"residual {worst:.1e}, permutation {s.orbit_data['permutation']}")
    else:
        ex = s.orbit_data["exclusion"]
        print(f"m={m:2}: none; {ex['grid_points']} grid points excluded, min residual {ex['min_residual']:.3f}")

# |a| and |eta_0| shrink like sqrt(t)
rep = verify_asymptotics(m=2, p=DiscParams(1.0, 0.5))
print("log-log slopes:", {k: round(v, 3) for k, v in rep.slopes.items()})

# at t = 0 the discs degenerate to explicit maps into P(1,1,4)
d = limit_disc_p114((1, 3), theta=0.3)
w = np.exp(2j * np.pi * np.linspace(0, 1, 9))
print("limit disc boundary deviation", f"{d.boundary_deviation():.1e}", "avoids (0:0:1):", d.avoids_orbifold_point())
print("x on the boundary:", np.round(d.x(w[:3]), 4))
print("Z/5 orbit counts:", [orbit_count_z5(k) for k in range(6)])
print("beta disc residual", f"{beta_disc(p).product_residual():.1e}")
