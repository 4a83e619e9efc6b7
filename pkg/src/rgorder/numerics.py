"""Scalar formulas behind the sparse-regime dimension bounds.

* ``solve_alpha``: root of ``(e^2 / x^2) e^{-cx} = 1``.
* ``dilog``: Li2 on ``[0, 1]`` by power series, reflected above 1/2.
* ``f_eval`` / ``sup_f_check``: the large-deviation exponent whose negativity
  certifies a ``G(n, c/n)`` lower bound, and its supremum over ``t``.
* ``upset_pmf`` / ``downset_pmf``: exact law of the up-set size reached from
  a block of low labels, in float or rational arithmetic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np
from scipy.optimize import minimize_scalar

PI2_6 = math.pi ** 2 / 6
Number = Union[float, Fraction]


# ---------------------------------------------------------------- alpha_c

def _alpha_log_residual(x: float, c: float) -> float:
    # log of (e^2/x^2) e^{-cx}; strictly decreasing in x
    return 2.0 - 2.0 * math.log(x) - c * x


def solve_alpha(c: float, max_iter: int = 200) -> float:
    """Unique positive root of ``(e^2/x^2) e^{-cx} = 1`` by bisection."""
    if not c > 0:
        raise ValueError("c must be positive")
    hi = 1.0
    while _alpha_log_residual(hi, c) > 0:
        hi *= 2.0
    lo = hi / 2.0
    while _alpha_log_residual(lo, c) < 0:
        lo /= 2.0
    if _alpha_log_residual(hi, c) == 0:
        return hi
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        r = _alpha_log_residual(mid, c)
        if r == 0:
            return mid
        if r > 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * hi:
            break
    return 0.5 * (lo + hi)


def alpha_residual(x: float, c: float) -> float:
    """``(e^2/x^2) e^{-cx} - 1``."""
    return math.e ** 2 / x ** 2 * math.exp(-c * x) - 1.0


# ---------------------------------------------------------------- dilogarithm

def _li2_series(w: np.ndarray) -> np.ndarray:
    """Power series on ``0 <= w <= 1/2``, cut once the geometric tail is below 1e-15."""
    total = np.zeros_like(w)
    power = np.ones_like(w)
    wmax = float(w.max()) if w.size else 0.0
    k = 0
    while True:
        k += 1
        power = power * w
        total += power / (k * k)
        tail = wmax ** (k + 1) / ((k + 1) ** 2 * (1.0 - wmax))
        if tail < 1e-15:
            return total


def dilog(z):
    """Dilogarithm ``Li2(z) = sum_k z^k / k^2`` for ``0 <= z <= 1``.

    Arguments above 1/2 go through ``Li2(z) = pi^2/6 - ln z ln(1-z) - Li2(1-z)``.
    Accepts scalars or arrays.
    """
    arr = np.asarray(z, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < 0) or np.any(arr > 1):
        raise ValueError("dilog is only defined here on [0, 1]")
    flat = arr.ravel()
    out = np.empty_like(flat)
    low = flat <= 0.5
    if low.any():
        out[low] = _li2_series(flat[low])
    high = ~low
    if high.any():
        zh = flat[high]
        w = 1.0 - zh
        res = np.full_like(zh, PI2_6)
        inner = w > 0
        if inner.any():
            wi = w[inner]
            res[inner] = PI2_6 - np.log(zh[inner]) * np.log(wi) - _li2_series(wi)
        out[high] = res
    out = out.reshape(arr.shape)
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------- bound function

@dataclass(frozen=True)
class NumericParams:
    c: float
    xi: float
    beta: float
    t: float = 0.0

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError("c must be positive")
        if not 0 < self.xi < 0.5:
            raise ValueError("xi must lie in (0, 1/2)")
        if not self.beta > 0:
            raise ValueError("beta must be positive")
        if not 0 <= self.t < 0.5:
            raise ValueError("t must lie in [0, 1/2)")
        if not 0.5 - self.xi - self.t > 0:
            raise ValueError("need 1/2 - xi - t > 0")


def f_eval(c: float, xi: float, beta: float, t):
    """Exponent ``f(c, xi, beta, t)``; vectorised over ``t``.

    ``beta log(e xi/beta) - c beta (1/2 - xi - t) + [Li2(1) - Li2(e^{-ct})]/c
    + [Li2(e^{-c beta - ct}) - Li2(e^{-c beta}) + Li2(e^{-c r - ct}) - Li2(e^{-c r})]/c``
    with ``r = 1/2 - xi - t``.
    """
    t_arr = np.asarray(t, dtype=float)
    if not c > 0 or not xi > 0 or not beta > 0:
        raise ValueError("c, xi and beta must be positive")
    r = 0.5 - xi - t_arr
    if np.any(t_arr < 0) or np.any(r <= 0):
        raise ValueError("need t >= 0 and 1/2 - xi - t > 0")
    val = beta * math.log(math.e * xi / beta) - c * beta * r
    val = val + (PI2_6 - dilog(np.exp(-c * t_arr))) / c
    val = val + (dilog(np.exp(-c * beta - c * t_arr)) - dilog(np.full_like(t_arr, math.exp(-c * beta)))) / c
    val = val + (dilog(np.exp(-c * r - c * t_arr)) - dilog(np.exp(-c * r))) / c
    val = np.asarray(val)
    return float(val) if val.ndim == 0 else val


@dataclass(frozen=True)
class SupCheck:
    sup: float
    argmax: float
    feasible: bool
    reason: str = ""


def sup_f_check(c: float, xi: float, beta: float, grid: int = 10_000, xtol: float = 1e-10) -> SupCheck:
    """Maximise ``f`` over ``t`` in ``[0, alpha_c]``: dense grid, then bounded refinement.

    If ``xi + alpha_c >= 1/2`` the check is infeasible; the sup is still
    reported over the part of the range where ``f`` is defined (``t < 1/2 - xi``).
    """
    if not 0 < xi < 0.5:
        raise ValueError("xi must lie in (0, 1/2)")
    alpha = solve_alpha(c)
    geometry = xi + alpha < 0.5
    t_hi = alpha if geometry else (0.5 - xi) * (1 - 1e-9)
    ts = np.linspace(0.0, t_hi, grid)
    vals = f_eval(c, xi, beta, ts)
    i = int(np.argmax(vals))
    best_t, best = float(ts[i]), float(vals[i])
    lo, hi = ts[max(i - 1, 0)], ts[min(i + 1, grid - 1)]
    if hi > lo:
        res = minimize_scalar(lambda s: -f_eval(c, xi, beta, s), bounds=(lo, hi),
                              method="bounded", options={"xatol": xtol})
        if -res.fun > best:
            best_t, best = float(res.x), float(-res.fun)
    if not geometry:
        return SupCheck(best, best_t, False, f"xi + alpha_c = {xi + alpha:.6g} >= 1/2")
    return SupCheck(best, best_t, best < 0, "" if best < 0 else "sup f >= 0")


# ---------------------------------------------------------------- curves

def bipartite_lower_curve(c: float) -> float:
    """``1 / (2 alpha_c)``, the asymptotic lower bound for ``B(n, n, c/n)``."""
    if c < 2:
        raise ValueError("the bipartite bound needs c >= 2")
    return 1.0 / (2.0 * solve_alpha(c))


def gnp_gamma(c: float) -> float:
    """Exponent ``1/6 - 1/log c - log(2 log c)/c`` of the large-c ``e^{gamma c}`` bound."""
    lc = math.log(c)
    return 1 / 6 - 1 / lc - math.log(2 * lc) / c


class InfeasibleError(ValueError):
    pass


@dataclass(frozen=True)
class GnpBound:
    c: float
    xi: float
    beta: float
    bound: float
    gamma: float
    sup: float


XI_RULES = ("inv15log", "largec")


def _xi_for(c: float, rule: str) -> float:
    if rule == "inv15log":
        return 1.0 / (15.0 * math.log(c))
    if rule == "largec":
        return 1.0 / math.log(c)
    raise ValueError(f"unknown xi rule {rule!r}; choose from {XI_RULES}")


def gnp_lower_curve(c: float, xi_rule: str = "inv15log", grid_points: int = 80, beta_max: float = 100.0,
                    bisect_steps: int = 40, t_grid: int = 10_000) -> GnpBound:
    """Largest certified ``xi / (2 beta)`` for ``G(n, c/n)`` under a rule for ``xi``.

    ``inv15log`` fixes ``xi = 1/(15 log c)`` and searches ``beta`` on a log grid
    in ``[xi e^{-c}, beta_max]``, refining the smallest feasible grid value by
    bisection.  For small ``c`` the optimum has ``beta > xi`` and the bound
    falls below 1/2; it is reported as computed.  ``largec`` uses ``xi = 1/log c`` and ``beta = exp(-c/6 + c/log c)``.
    """
    if c <= 1:
        raise ValueError("c must exceed 1")
    xi = _xi_for(c, xi_rule)
    if xi_rule == "largec":
        beta = math.exp(-c / 6 + c / math.log(c))
        chk = sup_f_check(c, xi, beta, grid=t_grid)
        if not chk.feasible:
            raise InfeasibleError(f"c={c}: {chk.reason}")
        return GnpBound(c, xi, beta, xi / (2 * beta), gnp_gamma(c), chk.sup)

    def feasible(b: float) -> SupCheck:
        return sup_f_check(c, xi, b, grid=t_grid)

    betas = np.geomspace(xi * math.exp(-c), beta_max, grid_points)
    first = None
    for i, b in enumerate(betas):
        chk = feasible(float(b))
        if chk.feasible:
            first = i
            best_beta, best_chk = float(b), chk
            break
    if first is None:
        raise InfeasibleError(f"c={c}: no beta on the grid passes the sup check")
    if first > 0:
        lo, hi = float(betas[first - 1]), best_beta
        for _ in range(bisect_steps):
            mid = math.sqrt(lo * hi)
            chk = feasible(mid)
            if chk.feasible:
                hi, best_beta, best_chk = mid, mid, chk
            else:
                lo = mid
    return GnpBound(c, xi, best_beta, xi / (2 * best_beta), gnp_gamma(c), best_chk.sup)


# ---------------------------------------------------------------- up/down-set laws

def _as_exact(q) -> Fraction:
    return q if isinstance(q, Fraction) else Fraction(q)


def upset_pmf(sizeU: int, sizeV: int, q, s: int, exact: bool = False) -> Number:
    """``P(|U_P[V] & U| = s)`` when every label of ``V`` is below every label of ``U``.

    ``q = 1 - p``.  Rational ``q`` (a :class:`~fractions.Fraction` or int) or
    ``exact=True`` gives an exact :class:`~fractions.Fraction`.
    """
    if sizeV < 1 or sizeU < 0 or not 0 <= s <= sizeU:
        raise ValueError("need sizeV >= 1 and 0 <= s <= sizeU")
    if not 0 <= q <= 1:
        raise ValueError("q must lie in [0, 1]")
    if exact or isinstance(q, (Fraction, int)):
        q = _as_exact(q)
        if q == 1:
            return Fraction(int(s == 0))
        val = q ** (sizeV * (sizeU - s))
        for j in range(s):
            val *= 1 - q ** (j + sizeV)
        for i in range(1, s + 1):
            val *= (1 - q ** (sizeU - s + i)) / (1 - q ** i)
        return val
    q = float(q)
    if q == 1.0:
        return float(s == 0)
    if q == 0.0:
        return float(s == sizeU)
    lq = math.log(q)

    def log1m(k: int) -> float:
        # log(1 - q^k), stable for q near 1
        return math.log(-math.expm1(k * lq))

    terms = [sizeV * (sizeU - s) * lq]
    terms += [log1m(j + sizeV) for j in range(s)]
    terms += [log1m(sizeU - s + i) - log1m(i) for i in range(1, s + 1)]
    return math.exp(math.fsum(terms))


def downset_pmf(sizeU: int, sizeV: int, q, s: int, exact: bool = False) -> Number:
    """``P(|D_P[U] & V| = s)`` for the same split, by duality (``0 <= s <= sizeV``)."""
    return upset_pmf(sizeV, sizeU, q, s, exact)


def upset_distribution(sizeU: int, sizeV: int, q, exact: bool = False) -> list[Number]:
    return [upset_pmf(sizeU, sizeV, q, s, exact) for s in range(sizeU + 1)]


# ---------------------------------------------------------------- paths

def path_expectation(gap: int, length: int, c: float, n: int) -> tuple[float, float]:
    """Expected number of label-increasing paths of ``length`` edges between labels ``gap`` apart.

    Returns ``(exact, bound)`` with ``exact = C(gap-1, length-1) (c/n)^length``
    and the cruder ``length c^length / (n length!)``.
    """
    if length < 1 or gap < length or n < 1 or c < 0:
        raise ValueError("need 1 <= length <= gap and n >= 1")
    p = c / n
    exact = math.comb(gap - 1, length - 1) * p ** length
    bound = length * c ** length / (n * math.factorial(length))
    return exact, bound
