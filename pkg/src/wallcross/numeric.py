"""Numerical certification of disc counts for the torus fibers |f - c| = r.

The discs in classes H - 2beta + m*alpha are fixed by a point ``a`` of the
unit disc and an angle ``theta``.  For each ``a`` the quartic

    Xi(w) = r(w - a) + c w^3 (1 - conj(a) w)

has three roots eta_0, eta_1, eta_2 inside the unit disc and one root zeta
outside, and ``a`` is admissible when

    a r ((1-t)/t)^2 prod_{j not in I} eta_j^3 = e^{6 i theta} prod_{j in I} eta_j^3

for the index set I of size 2 - m.  We solve this as a real 2x2 system by
Newton's method, started from the small-t approximation and continued in t
and then in theta.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from .errors import AmbiguousRootError, CertificationError, DomainError, SolverError

GUARD_BAND = 1e-8
RESIDUAL_TOL = 1e-9
SHIFT_TOL = 1e-6
SEXTIC_FAMILY = "sextic"

# m -> the index set I (0 is never in I for small t)
INDEX_SETS = {2: (), 1: (2,), 0: (1, 2), -1: (0, 1, 2)}


# --- polynomial roots -------------------------------------------------------


def _horner(coeffs, z):
    p = 0j
    dp = 0j
    for c in coeffs:
        dp = dp * z + p
        p = p * z + c
    return p, dp


def poly_roots(coeffs: Sequence[complex], tol: float = 1e-10, max_iter: int = 500) -> list[complex]:
    """All roots of ``coeffs[0] z^n + ... + coeffs[n]`` (Aberth-Ehrlich, then Newton polish)."""
    cs = [complex(c) for c in coeffs]
    if len(cs) < 2:
        raise DomainError("polynomial of degree < 1 has no roots to find")
    if cs[0] == 0:
        raise DomainError("leading coefficient must be nonzero")
    n = len(cs) - 1
    lead = cs[0]
    monic = [c / lead for c in cs]
    # Cauchy-type radius for the starting circle
    radius = 1 + max(abs(c) for c in monic[1:])
    inner = min(radius, max(abs(monic[-1]) ** (1.0 / n), 1e-3))
    zs = [inner * cmath.exp(1j * (2 * math.pi * k / n + 0.4)) for k in range(n)]
    scale = max(abs(c) for c in cs)
    for _ in range(max_iter):
        moved = 0.0
        for i in range(n):
            p, dp = _horner(monic, zs[i])
            if p == 0:
                continue
            ratio = p / dp if dp != 0 else complex(1e-3)
            s = sum(1 / (zs[i] - zs[j]) for j in range(n) if j != i and zs[i] != zs[j])
            denom = 1 - ratio * s
            step = ratio / denom if denom != 0 else ratio
            zs[i] -= step
            moved = max(moved, abs(step) / max(1.0, abs(zs[i])))
        if moved < 1e-15:
            break
    out = []
    for z in zs:
        for _ in range(6):
            p, dp = _horner(cs, z)
            if dp == 0 or p == 0:
                break
            step = p / dp
            z -= step
            if abs(step) <= 1e-16 * max(1.0, abs(z)):
                break
        out.append(z)
    for z in out:
        # backward error: relative to the size of the terms being summed
        res = abs(_horner(cs, z)[0])
        size = sum(abs(c) * abs(z) ** (n - i) for i, c in enumerate(cs))
        if res > tol * max(size, scale if abs(z) <= 1 else 0.0):
            raise SolverError(f"root {z} has residual {res:.3e}", {"coeffs": [str(c) for c in cs]})
    return out


# --- parameters and roots of Xi ------------------------------------------------


@dataclass(frozen=True)
class DiscParams:
    c: float = 1.0
    r: float = 0.5
    t: float = 1e-3
    theta: float = 0.0

    def __post_init__(self):
        if not (self.c > 0 and self.r > 0):
            raise DomainError("c and r must be positive")
        if not self.r < self.c:
            raise DomainError("the torus needs r < c")
        if not 0 < self.t <= 1:
            raise DomainError("t must lie in (0, 1]")

    def at(self, **changes) -> DiscParams:
        d = dict(c=self.c, r=self.r, t=self.t, theta=self.theta)
        d.update(changes)
        return DiscParams(**d)


def xi_coefficients(a: complex, c: float, r: float) -> list[complex]:
    return [-c * a.conjugate(), c, 0, r, -r * a]


def split_roots(a: complex, c: float, r: float):
    """(eta_0, eta_1, eta_2, zeta): eta_0 smallest, eta_1 the higher of the other two."""
    a = complex(a)
    if a == 0:
        raise DomainError("a = 0 does not give a disc of this class")
    roots = poly_roots(xi_coefficients(a, c, r))
    for z in roots:
        if abs(abs(z) - 1) < GUARD_BAND:
            raise AmbiguousRootError(f"root {z} lies within {GUARD_BAND} of the unit circle")
    inside = [z for z in roots if abs(z) < 1]
    outside = [z for z in roots if abs(z) > 1]
    if len(inside) != 3 or len(outside) != 1:
        raise AmbiguousRootError(f"expected 3 roots inside the disc and 1 outside, got {len(inside)} and {len(outside)}")
    inside.sort(key=abs)
    eta0 = inside[0]
    eta1, eta2 = sorted(inside[1:], key=lambda z: -z.imag)
    return eta0, eta1, eta2, outside[0]


def _xi_prime(w, a, c, r):
    return -4 * c * a.conjugate() * w**3 + 3 * c * w**2 + r


def _system(a: complex, I: tuple, p: DiscParams):
    """Value of the consistency condition and its Wirtinger derivatives."""
    eta0, eta1, eta2, zeta = split_roots(a, p.c, p.r)
    etas = (eta0, eta1, eta2)
    Kp = ((1 - p.t) / p.t) ** 2
    E = cmath.exp(6j * p.theta)
    out_idx = [j for j in range(3) if j not in I]
    P_out = 1 + 0j
    for j in out_idx:
        P_out *= etas[j] ** 3
    P_in = 1 + 0j
    for j in I:
        P_in *= etas[j] ** 3
    left = a * p.r * Kp * P_out
    right = E * P_in
    F = left - right

    def logd(indices):
        da = db = 0j
        for j in indices:
            e = etas[j]
            d = _xi_prime(e, a, p.c, p.r)
            da += 3 * (p.r / d) / e
            db += 3 * (p.c * e**4 / d) / e
        return da, db

    oa, ob = logd(out_idx)
    ia, ib = logd(I)
    Fa = p.r * Kp * P_out + left * oa - right * ia
    Fb = left * ob - right * ib
    scale = abs(left) + abs(right)
    return F, Fa, Fb, scale, (eta0, eta1, eta2, zeta)


def condition_residual(a: complex, I: tuple, p: DiscParams) -> float:
    F, _, _, scale, _ = _system(complex(a), I, p)
    return abs(F) / scale if scale else abs(F)


@dataclass
class DiscSolution:
    a: complex
    eta: tuple
    zeta: complex
    residual: float
    iterations: int = 0


def newton_solve(a0: complex, I: tuple, p: DiscParams, max_iter: int = 60) -> DiscSolution:
    a = complex(a0)
    for it in range(1, max_iter + 1):
        F, Fa, Fb, scale, roots = _system(a, I, p)
        A = Fa + Fb
        B = 1j * (Fa - Fb)
        M = np.array([[A.real, B.real], [A.imag, B.imag]])
        try:
            x, y = np.linalg.solve(M, [-F.real, -F.imag])
        except np.linalg.LinAlgError:
            raise SolverError("singular Jacobian", {"a": repr(a), "iteration": it}) from None
        step = complex(x, y)
        # damp steps that would leave the disc or jump past the origin
        lim = 0.5 * abs(a)
        if abs(step) > lim:
            step *= lim / abs(step)
        a += step
        if abs(step) <= 1e-15 * max(abs(a), 1e-300):
            break
    F, _, _, scale, roots = _system(a, I, p)
    res = abs(F) / scale
    if not (abs(a) < 1) or not math.isfinite(res) or res > RESIDUAL_TOL:
        raise SolverError(
            "Newton iteration did not converge",
            {"a": repr(a), "residual": res, "theta": p.theta, "t": p.t, "I": list(I)},
        )
    eta0, eta1, eta2, zeta = roots
    return DiscSolution(a, (eta0, eta1, eta2), zeta, res, it)


def asymptotic_guesses(I: tuple, p: DiscParams) -> list[complex]:
    """The four small-t approximations a^4 = e^{6 i theta} prod_I eta^3 / (r K' prod_{not I, j != 0} eta^3)."""
    s = math.sqrt(p.r / p.c)
    limits = {1: 1j * s, 2: -1j * s}
    Kp = ((1 - p.t) / p.t) ** 2
    num = cmath.exp(6j * p.theta)
    for j in I:
        num *= limits[j] ** 3
    den = p.r * Kp
    for j in (1, 2):
        if j not in I:
            den *= limits[j] ** 3
    base = (num / den) ** 0.25
    return [base * 1j**k for k in range(4)]


def _dedupe(sols: list[DiscSolution], tol=1e-8) -> list[DiscSolution]:
    out = []
    for s in sols:
        if all(abs(s.a - o.a) > tol * abs(s.a) for o in out):
            out.append(s)
    return out


def _ccw(sols):
    return sorted(sols, key=lambda s: cmath.phase(s.a) % (2 * math.pi))


def _solve_at(I: tuple, p: DiscParams, t_start: float = 1e-7) -> list[DiscSolution]:
    """Solutions at ``p`` by continuation in t from ``t_start`` (no-op if p.t is smaller)."""
    t0 = min(p.t, t_start)
    n = max(1, math.ceil(6 * math.log10(p.t / t0))) if p.t > t0 else 0
    ts = [t0 * (p.t / t0) ** (k / n) for k in range(n + 1)] if n else [p.t]
    sols = []
    for guess in asymptotic_guesses(I, p.at(t=ts[0])):
        a = guess
        s = None
        for tk in ts:
            s = newton_solve(a, I, p.at(t=tk))
            a = s.a
        sols.append(s)
    return _ccw(_dedupe(sols))


@dataclass
class DiscSolutionSet:
    family: str
    m: int
    index_set: tuple
    params: DiscParams
    solutions: list[DiscSolution]
    orbit_data: dict = field(default_factory=dict)

    def to_data(self) -> dict:
        cx = lambda z: [float(z.real), float(z.imag)]
        return {
            "family": self.family,
            "m": self.m,
            "index_set": list(self.index_set),
            "params": {"c": self.params.c, "r": self.params.r, "t": self.params.t, "theta": self.params.theta},
            "solutions": [
                {"a": cx(s.a), "eta": [cx(e) for e in s.eta], "zeta": cx(s.zeta), "residual": s.residual}
                for s in self.solutions
            ],
            "orbit_data": self.orbit_data,
        }


def exclusion_sweep(I: tuple, p: DiscParams, n_radii: int = 64, n_angles: int = 64, polish: int = 8) -> dict:
    """Grid search of the normalized residual over the unit disc.

    Radii are log-spaced so that both tiny and large ``a`` are sampled.  The
    best grid points are then handed to Newton; if none converges to a
    solution inside the disc, the minimum residual is reported as the
    certificate.
    """
    radii = np.geomspace(1e-8, 0.98, n_radii)
    angles = 2 * np.pi * (np.arange(n_angles) + 0.5) / n_angles
    best = []
    skipped = 0
    for rho in radii:
        for phi in angles:
            a = complex(rho * math.cos(phi), rho * math.sin(phi))
            try:
                best.append((condition_residual(a, I, p), a))
            except CertificationError:
                skipped += 1
    best.sort(key=lambda x: x[0])
    converged = []
    for _, a in best[:polish]:
        try:
            s = newton_solve(a, I, p)
        except (SolverError, AmbiguousRootError, DomainError):
            continue
        converged.append(s)
    return {
        "grid_points": n_radii * n_angles,
        "skipped": skipped,
        "min_residual": best[0][0] if best else None,
        "argmin": [best[0][1].real, best[0][1].imag] if best else None,
        "newton_hits": len(converged),
        "excluded": not converged and bool(best) and best[0][0] > 1e-3,
    }


def _track(sol: DiscSolution, I: tuple, p: DiscParams, span: float, steps: int) -> DiscSolution:
    a = sol.a
    dtheta = span / steps
    s = sol
    for k in range(1, steps + 1):
        # a^4 carries e^{6 i theta}, so a turns by e^{3i dtheta/2} to first order
        a = a * cmath.exp(1.5j * dtheta)
        s = newton_solve(a, I, p.at(theta=p.theta + k * dtheta))
        a = s.a
    return s


def solve_family_H2b(m: int, p: DiscParams | None = None, steps: int = 256, track: bool = True) -> DiscSolutionSet:
    """Discs in class H - 2beta + m*alpha at the angle ``p.theta``.

    With ``track`` the four solutions are followed over a sixth of a turn in
    theta and the induced permutation is stored in ``orbit_data``.
    """
    p = p or DiscParams()
    if m not in INDEX_SETS:
        raise DomainError(f"m must be one of {sorted(INDEX_SETS)}")
    I = INDEX_SETS[m]
    if len(I) == 3:
        sweep = exclusion_sweep(I, p)
        if not sweep["excluded"]:
            raise SolverError("exclusion sweep found candidate solutions", sweep)
        return DiscSolutionSet("h2b", m, I, p, [], {"exclusion": sweep})
    sols = _solve_at(I, p)
    if len(sols) != 4:
        raise SolverError(f"expected 4 solutions, found {len(sols)}", {"a": [repr(s.a) for s in sols]})
    orbit = {}
    if track:
        span = math.pi / 3
        ends = [_track(s, I, p, span, steps) for s in sols]
        perm, err = [], 0.0
        for e in ends:
            dists = [abs(e.a - s.a) for s in sols]
            j = int(np.argmin(dists))
            perm.append(j)
            err = max(err, dists[j])
        orbit = {
            "period": span,
            "steps": steps,
            "permutation": perm,
            "shift_error": err,
            "max_residual": max(e.residual for e in ends),
        }
    return DiscSolutionSet("h2b", m, I, p, sols, orbit)


def is_cyclic_shift(perm: Sequence[int]) -> bool:
    n = len(perm)
    return n > 0 and all(perm[j] == (j + 1) % n for j in range(n))


def _sign_classes(sols: Sequence[DiscSolution], tol: float = 1e-8):
    """Group solutions under a ~ -a; returns the classes as index tuples."""
    classes, used = [], set()
    for i, s in enumerate(sols):
        if i in used:
            continue
        partner = None
        for j in range(len(sols)):
            if j != i and j not in used and abs(sols[j].a + s.a) <= tol * abs(s.a):
                partner = j
                break
        used.add(i)
        if partner is None:
            classes.append((i,))
        else:
            used.add(partner)
            classes.append((i, partner))
    return classes


def algebraic_count_H2b(s: DiscSolutionSet) -> int:
    """Unsigned count: discs per angle after identifying ``a`` with ``-a``.

    The theta-shift must act as a single cycle on the solutions, and the
    identification must either pair every solution or none of them.
    """
    if not s.solutions:
        if s.orbit_data.get("exclusion", {}).get("excluded"):
            return 0
        raise CertificationError("empty solution set without an exclusion certificate")
    perm = s.orbit_data.get("permutation")
    if perm is None:
        raise CertificationError("orbit data missing; solve with track=True")
    if not is_cyclic_shift(perm) or s.orbit_data.get("shift_error", 1.0) > SHIFT_TOL:
        raise CertificationError(f"theta shift does not cycle the solutions: {perm}")
    classes = _sign_classes(s.solutions)
    sizes = {len(c) for c in classes}
    if len(sizes) != 1:
        raise CertificationError("the a ~ -a identification pairs only some solutions")
    return len(classes)


# --- asymptotics ----------------------------------------------------------------


@dataclass
class AsymptoticsReport:
    m: int
    t: list
    quantities: dict
    slopes: dict
    matching: str = "nearest-neighbor in arg(a); flagged heuristic"

    def to_data(self):
        return {"m": self.m, "t": self.t, "quantities": self.quantities, "slopes": self.slopes, "matching": self.matching}


def verify_asymptotics(family="h2b", t_sequence=(1e-2, 1e-3, 1e-4, 1e-5), m: int = 2, p: DiscParams | None = None) -> AsymptoticsReport:
    if family == SEXTIC_FAMILY:
        raise DomainError("the sextic family is only treated in the t = 0 limit (limit_disc_p114)")
    if family != "h2b":
        raise DomainError(f"unknown family {family!r}")
    p = p or DiscParams()
    ts = sorted(t_sequence, reverse=True)
    if len(ts) < 2:
        raise DomainError("need at least two values of t")
    target = 1j * math.sqrt(p.r / p.c)
    a_abs, e0_abs, e1_dev = [], [], []
    prev = None
    for t in ts:
        sols = solve_family_H2b(m, p.at(t=t), track=False).solutions
        if prev is None:
            pick = sols[0]
        else:
            pick = min(sols, key=lambda s: abs(cmath.phase(s.a / prev.a)))
        prev = pick
        a_abs.append(abs(pick.a))
        e0_abs.append(abs(pick.eta[0]))
        e1_dev.append(abs(pick.eta[1] - target))
    lt = np.log(ts)
    slope = lambda ys: float(np.polyfit(lt, np.log(ys), 1)[0])
    q = {"abs_a": a_abs, "abs_eta0": e0_abs, "eta1_deviation": e1_dev}
    return AsymptoticsReport(m, list(ts), q, {k: slope(v) for k, v in q.items()})


# --- t = 0 limit discs and the Z/5 count -------------------------------------------


def _blaschke(v: complex):
    return lambda w: (w - v) / (1 - v.conjugate() * w)


@dataclass(frozen=True)
class LimitDisc:
    """Disc w -> (x(w) : y(w) : z(w)) in CP(1,1,4) for an index set I of {1..5}."""

    I: frozenset
    theta: float
    c: float
    r: float

    @property
    def centers(self) -> dict:
        rho = (self.r / self.c) ** 0.2
        return {j: -rho * cmath.exp(2j * math.pi * j / 5) for j in range(1, 6)}

    def _sqrt(self, w):
        # principal branch; r w^5 + c stays in the right half plane on the closed disc
        return np.sqrt(self.r * w**5 + self.c)

    def x(self, w):
        w = np.asarray(w, dtype=complex)
        out = np.exp(-1j * self.theta) * self._sqrt(w)
        for j, v in self.centers.items():
            if j not in self.I:
                out = out * (w - v) / (1 - np.conj(v) * w)
        return out

    def y(self, w):
        return np.asarray(w, dtype=complex)

    def z(self, w):
        w = np.asarray(w, dtype=complex)
        out = np.exp(1j * self.theta) * self._sqrt(w)
        for j, v in self.centers.items():
            if j in self.I:
                out = out * (w - v) / (1 - np.conj(v) * w)
        return out

    def __call__(self, w):
        return self.x(w), self.y(w), self.z(w)

    def boundary_deviation(self, samples: int = 1024) -> float:
        """max |x z - (c w^5 + r)| on the unit circle."""
        w = np.exp(2j * np.pi * np.arange(samples) / samples)
        return float(np.max(np.abs(self.x(w) * self.z(w) - (self.c * w**5 + self.r))))

    def torus_deviation(self, samples: int = 1024) -> float:
        """max | |x z / y^5 - c| - r | on the unit circle."""
        w = np.exp(2j * np.pi * np.arange(samples) / samples)
        f = self.x(w) * self.z(w) / self.y(w) ** 5
        return float(np.max(np.abs(np.abs(f - self.c) - self.r)))

    def avoids_orbifold_point(self) -> bool:
        """x and y never vanish together: y = 0 only at w = 0, where x is nonzero."""
        return abs(complex(self.x(0))) > 0


def limit_disc_p114(I, theta: float, c: float = 1.0, r: float = 0.5) -> LimitDisc:
    I = frozenset(int(j) for j in I)
    if not I <= {1, 2, 3, 4, 5}:
        raise DomainError("I must be a subset of {1, ..., 5}")
    DiscParams(c=c, r=r)  # validates r < c
    return LimitDisc(I, float(theta), float(c), float(r))


def z5_action(I: frozenset, k: int) -> frozenset:
    return frozenset(((j - k - 1) % 5) + 1 for j in I)


def z5_theta_shift(size: int, k: int) -> float:
    return ((size + 1) * k % 5) * 2 * math.pi / 5


def z5_orbits(size: int) -> list[dict]:
    """Orbits of k in Z/5 acting on families (I, theta) with |I| = size."""
    if not 0 <= size <= 5:
        raise DomainError("size must be between 0 and 5")
    seen = set()
    out = []
    for combo in combinations(range(1, 6), size):
        I = frozenset(combo)
        if I in seen:
            continue
        orbit = {z5_action(I, k) for k in range(5)}
        seen |= orbit
        stab = [k for k in range(5) if z5_action(I, k) == I]
        out.append({
            "representative": tuple(sorted(I)),
            "orbit": sorted(tuple(sorted(J)) for J in orbit),
            "stabilizer": stab,
            "theta_shifts": [z5_theta_shift(size, k) for k in stab],
        })
    return out


def orbit_count_z5(size: int) -> int:
    """Unsigned count for |I| = size.

    Each orbit sweeps the torus five times in total; the stabilizer of its
    representative divides that among the discs identified by rotation.
    """
    return sum(5 // len(o["stabilizer"]) for o in z5_orbits(size))


# --- the beta disc ---------------------------------------------------------------


@dataclass(frozen=True)
class BetaDisc:
    c: float
    r: float
    theta: float

    def psi(self, w):
        return self.r * np.asarray(w, dtype=complex) + self.c

    def z2(self, w):
        return np.exp(0.5j * self.theta) * np.sqrt(self.psi(w))

    def z3(self, w):
        return np.exp(-1j * self.theta) * self.z2(w)

    def product_residual(self, samples: int = 1024) -> float:
        """max |z2 z3 - Psi| over the boundary, a circle just inside it, and the center."""
        ring = np.exp(2j * np.pi * np.arange(samples) / samples)
        w = np.concatenate([ring, 0.5 * ring, [0]])
        return float(np.max(np.abs(self.z2(w) * self.z3(w) - self.psi(w))))

    def torus_deviation(self, samples: int = 1024) -> float:
        w = np.exp(2j * np.pi * np.arange(samples) / samples)
        return float(np.max(np.abs(np.abs(self.psi(w) - self.c) - self.r)))


def beta_disc(p: DiscParams, theta: float | None = None) -> BetaDisc:
    return BetaDisc(p.c, p.r, p.theta if theta is None else float(theta))
