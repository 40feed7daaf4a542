"""Monotone inflation, critical points of potentials, and the pearl differential.

Areas are exact rationals in units of Lambda, the area of the line class.  The
inflation coefficient K is returned as the rational kappa with K = kappa *
Lambda / pi, so no floating-point pi enters the arithmetic.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .errors import DomainError, NoSolutionError
from .laurent import LaurentExpr, eval_complex, log_derivative, substitute, to_laurent

CRIT_TOL = 1e-9


# --- monotonicity -------------------------------------------------------------


@dataclass(frozen=True)
class AreaFunctional:
    """Symplectic areas of the basis classes, in units of Lambda."""

    areas: Mapping[str, Fraction]

    def __post_init__(self):
        object.__setattr__(self, "areas", {k: Fraction(v) for k, v in self.areas.items()})

    def __getitem__(self, label):
        return self.areas[label]

    def inflate(self, kappa, pairings: Mapping[str, int]) -> AreaFunctional:
        """Areas after adding kappa * pairing (the K * pi * pairing term, in Lambda units)."""
        kappa = Fraction(kappa)
        return AreaFunctional({k: v + kappa * pairings[k] for k, v in self.areas.items()})


@dataclass(frozen=True)
class Inflation:
    kappa: Fraction  # K = kappa * Lambda / pi
    target: Fraction
    areas: AreaFunctional

    def describe(self) -> str:
        return f"K = {self.kappa} * Lambda / pi"


def monotone_inflation(
    areas: AreaFunctional,
    divisor_pairings: Mapping[str, int],
    maslov: Mapping[str, int],
    target: Fraction | None = None,
    classes: tuple[str, str] = ("beta", "H"),
) -> Inflation:
    """Inflate along a divisor until area(num)/area(den) equals ``target``.

    ``target`` defaults to the Maslov ratio of the two classes, which is what
    monotonicity asks for.
    """
    num, den = classes
    if target is None:
        target = Fraction(maslov[num], maslov[den])
    target = Fraction(target)
    a_n, a_d = areas[num], areas[den]
    p_n, p_d = Fraction(divisor_pairings[num]), Fraction(divisor_pairings[den])
    if a_d <= 0 or p_d <= 0:
        raise NoSolutionError(f"{den} needs positive area and positive pairing")
    if p_n / p_d <= target:
        raise NoSolutionError(f"divisor ratio {p_n / p_d} does not exceed the target {target}")
    if a_n / a_d > target:
        raise NoSolutionError(f"area ratio {a_n / a_d} already exceeds the target {target}")
    kappa = (target * a_d - a_n) / (p_n - target * p_d)
    return Inflation(kappa, target, areas.inflate(kappa, divisor_pairings))


def monotonicity_constant(areas: AreaFunctional, maslov: Mapping[str, int]) -> Fraction | None:
    """M with area(c) = M * mu(c) for every basis class, or None."""
    M = None
    for k, mu in maslov.items():
        a = areas[k]
        if mu == 0:
            if a != 0:
                return None
            continue
        ratio = a / mu
        if M is None:
            M = ratio
        elif ratio != M:
            return None
    if M is None or M <= 0:
        return None
    return M


def check_monotone(areas: AreaFunctional, maslov: Mapping[str, int]) -> bool:
    return monotonicity_constant(areas, maslov) is not None


# --- critical points ------------------------------------------------------------


def specialize(W: LaurentExpr, values: Mapping[str, object]) -> LaurentExpr:
    """Substitute numbers for the area symbols."""
    if not values:
        return W
    return to_laurent(substitute(W, {k: Fraction(v) for k, v in values.items()}))


def _terms(W: LaurentExpr, vars: Sequence[str]):
    extra = set()
    coeffs, exps = [], []
    for m, c in W.items():
        extra |= set(m.variables) - set(vars)
        coeffs.append(complex(c))
        exps.append([m[v] for v in vars])
    if extra:
        raise DomainError(f"potential still depends on {sorted(extra)}; give values for them")
    return np.array(coeffs), np.array(exps, dtype=float)



def _grad_hess(coeffs, exps, S):
    mono = coeffs[None, :] * np.exp(S @ exps.T)  # (N, K)
    n = exps.shape[1]
    G = mono @ exps
    H = (mono @ (exps[:, :, None] * exps[:, None, :]).reshape(len(exps), n * n)).reshape(-1, n, n)
    return G, H


def _solve_small(J, G):
    """Batched solve of J x = G for 1x1 or 2x2 systems."""
    if J.shape[1] == 1:
        return G / J[:, :, 0]
    a, b, c, d = J[:, 0, 0], J[:, 0, 1], J[:, 1, 0], J[:, 1, 1]
    det = a * d - b * c
    return np.stack([(d * G[:, 0] - b * G[:, 1]) / det, (a * G[:, 1] - c * G[:, 0]) / det], axis=1)


def _newton_batch(coeffs, exps, S, iterations):
    """Damped Newton steps in log coordinates; diverging rows become NaN."""
    S = S.copy()
    active = np.arange(len(S))
    with np.errstate(all="ignore"):
        for _ in range(iterations):
            if not len(active):
                break
            T = S[active]
            G, H = _grad_hess(coeffs, exps, T)
            step = _solve_small(H, G)
            size = np.abs(step).max(axis=1, keepdims=True)
            T = T - step * np.minimum(1.0, 1.0 / np.maximum(size, 1e-300))
            bad = ~np.isfinite(T).all(axis=1) | (np.abs(T.real) > 14).any(axis=1)
            T[bad] = np.nan
            S[active] = T
            active = active[~bad & (size[:, 0] > 1e-14)]
    return S


def _start_grid(n_vars: int, per_axis: int, seed: int):
    moduli = np.logspace(-2, 2, per_axis)
    angles = 2 * np.pi * (np.arange(per_axis) + 0.5) / per_axis
    axis = (moduli[:, None] * np.exp(1j * angles)[None, :]).ravel()
    grids = np.meshgrid(*([axis] * n_vars), indexing="ij")
    X = np.stack([g.ravel() for g in grids], axis=1)
    order = list(range(len(X)))
    random.Random(seed).shuffle(order)
    return X[order]


def critical_points(
    W: LaurentExpr,
    vars: Sequence[str],
    area_values: Mapping[str, object] | None = None,
    per_axis: int = 20,
    seed: int = 0,
    iterations: int = 60,
    threads: int = 1,
) -> list[dict[str, complex]]:
    """Zeros of the logarithmic gradient of W, from a log-polar multistart.

    Starts that fail to converge are dropped silently, so a point whose
    basin misses the grid can be lost.
    """
    vars = list(vars)
    if not 1 <= len(vars) <= 2:
        raise DomainError("critical_points handles one or two variables")
    Wn = specialize(W, area_values or {})
    coeffs, exps = _terms(Wn, vars)
    S = np.log(_start_grid(len(vars), per_axis, seed))
    chunks = np.array_split(S, max(1, int(threads)))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            S = np.concatenate(list(pool.map(lambda c: _newton_batch(coeffs, exps, c, iterations), chunks)))
    else:
        S = _newton_batch(coeffs, exps, S, iterations)
    with np.errstate(all="ignore"):
        X = np.exp(S)
        G, _ = _grad_hess(coeffs, exps, S)
    res = np.abs(G).max(axis=1)
    good = np.isfinite(res) & (res < 1e-6) & (np.abs(X) > 1e-8).all(axis=1) & (np.abs(X) < 1e8).all(axis=1)
    cand = X[good]
    # collapse starts that landed on the same point before polishing
    keys = np.round(np.concatenate([cand.real, cand.imag], axis=1), 6)
    _, first = np.unique(keys, axis=0, return_index=True)
    found: list[np.ndarray] = []
    for x in cand[np.sort(first)]:
        x = _polish(coeffs, exps, x)
        if x is None:
            continue
        if all(np.max(np.abs(x - y) / np.maximum(1.0, np.abs(y))) > 1e-7 for y in found):
            found.append(x)
    found.sort(key=lambda x: tuple(v for z in x for v in (round(abs(z), 9), round(float(np.angle(z)) % (2 * np.pi), 9))))
    return [dict(zip(vars, map(complex, x))) for x in found]


def _polish(coeffs, exps, x, steps: int = 8):
    s = np.log(x.astype(complex))
    for _ in range(steps):
        G, H = _grad_hess(coeffs, exps, s[None, :])
        try:
            ds = np.linalg.solve(H[0], G[0])
        except np.linalg.LinAlgError:
            return None
        s = s - ds
        if np.max(np.abs(ds)) < 1e-15:
            break
    G, _ = _grad_hess(coeffs, exps, s[None, :])
    if not np.all(np.isfinite(G)) or np.max(np.abs(G)) > CRIT_TOL:
        return None
    return np.exp(s)


# --- pearl differential -------------------------------------------------------------


def pearl_delta2(W: LaurentExpr, point: Mapping[str, complex], vars: Sequence[str] | None = None) -> list[complex]:
    """(z_j dW/dz_j)(point) for each torus coordinate z_j; all signs taken +."""
    if vars is None:
        vars = [v for v in sorted(point) if any(m[v] for m, _ in W.items())]
    return [eval_complex(log_derivative(W, v), point) for v in vars]


def hf_nonvanishing(W: LaurentExpr, vars: Sequence[str], area_values=None, seed: int = 0, threads: int = 1) -> dict:
    """Critical local systems of W and the size of delta_2 at each one."""
    Wn = specialize(W, area_values or {})
    pts = critical_points(Wn, vars, seed=seed, threads=threads)
    norms = [max(abs(x) for x in pearl_delta2(Wn, p, vars)) for p in pts]
    return {
        "critical_points": pts,
        "delta2_max": norms,
        "nonvanishing": any(n <= CRIT_TOL for n in norms),
    }
