"""Special functions written from scratch on top of numpy.

Everything here works on float64 arrays and returns plain floats for scalar
input.  Gamma-ratio constants are always formed as ``exp(sum of ln_gamma)``
so that they stay finite for polynomial degrees up to ~1e5.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "JacobiParams",
    "BesselOrder",
    "ln_gamma",
    "ln_gamma_signed",
    "ln_gamma_ratio",
    "jacobi_p",
    "jacobi_norm",
    "gegenbauer_c",
    "gegenbauer_norm",
    "gegenbauer_constant",
    "chebyshev_t",
    "bessel_j",
    "bessel_i_series",
    "hilb_main_term",
]

EULER_GAMMA = 0.57721566490153286061
HALF_LN_2PI = 0.91893853320467274178


@dataclass(frozen=True)
class JacobiParams:
    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > -1.0 and self.beta > -1.0):
            raise DomainError(f"Jacobi parameters need alpha > -1 and beta > -1, got ({self.alpha}, {self.beta})")


@dataclass(frozen=True)
class BesselOrder:
    nu: float

    def __post_init__(self):
        if not self.nu > -1.0:
            raise DomainError(f"Bessel order must exceed -1, got {self.nu}")


def _scalar_out(x_in, out):
    if np.ndim(x_in) == 0:
        return float(out)
    return out


# {{{ log-gamma

# Bernoulli numbers B_2 .. B_16 for the Stirling series
_BERNOULLI = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6, -3617 / 510)


def _zeta_minus_one(k: int, N: int = 10, J: int = 8) -> float:
    """zeta(k) - 1 by Euler-Maclaurin summation (k >= 2)."""
    s = math.fsum(n ** -float(k) for n in range(2, N))
    s += N ** (1.0 - k) / (k - 1) + 0.5 * N ** -float(k)
    rising = float(k)  # k(k+1)...(k+2j-2)
    fact = 2.0  # (2j)!
    for j in range(1, J + 1):
        s += _BERNOULLI[j - 1] / fact * rising * N ** (-k - 2 * j + 1.0)
        rising *= (k + 2 * j - 1) * (k + 2 * j)
        fact *= (2 * j + 1) * (2 * j + 2)
    return s


_TAYLOR_K = 40
# series coefficients (-1)^k (zeta(k)-1)/k, k = 2.._TAYLOR_K
_TAYLOR_C = np.array([(-1) ** k * _zeta_minus_one(k) / k for k in range(2, _TAYLOR_K + 1)])


def _lgamma_taylor_tail(z):
    """S(z) = sum_{k>=2} (-1)^k (zeta(k)-1) z^k / k, valid for |z| <= 1/2."""
    acc = np.zeros_like(z)
    for c in _TAYLOR_C[::-1]:
        acc = acc * z + c
    return acc * z * z


def _lgamma_stirling(y):
    inv = 1.0 / y
    inv2 = inv * inv
    acc = np.zeros_like(y)
    for k in range(len(_BERNOULLI), 0, -1):
        acc = acc * inv2 + _BERNOULLI[k - 1] / (2 * k * (2 * k - 1))
    return (y - 0.5) * np.log(y) - y + HALF_LN_2PI + acc * inv


def ln_gamma(x):
    """ln Gamma(x) for x > 0, relative error ~1e-15 on (0, 1e6]."""
    xa = np.asarray(x, dtype=float)
    if np.any(~(xa > 0)):
        raise DomainError("ln_gamma requires x > 0")
    xf = np.atleast_1d(xa).ravel()
    out = np.empty_like(xf)

    lo = xf < 0.5
    if lo.any():
        z = xf[lo]
        out[lo] = -np.log1p(z) + z * (1 - EULER_GAMMA) + _lgamma_taylor_tail(z) - np.log(z)
    mid = (xf >= 0.5) & (xf <= 1.5)
    if mid.any():
        z = xf[mid] - 1.0
        out[mid] = -np.log1p(z) + z * (1 - EULER_GAMMA) + _lgamma_taylor_tail(z)
    up = (xf > 1.5) & (xf < 12.0)
    if up.any():
        y = xf[up]
        m = np.ceil(y - 2.5).clip(min=0)  # shift down into [1.5, 2.5]
        z = y - m - 2.0
        base = z * (1 - EULER_GAMMA) + _lgamma_taylor_tail(z)
        prod = np.ones_like(y)
        for j in range(1, int(m.max()) + 1 if m.size else 1):
            prod = np.where(m >= j, prod * (y - j), prod)
        out[up] = base + np.log(prod)
    big = xf >= 12.0
    if big.any():
        out[big] = _lgamma_stirling(xf[big])
    return _scalar_out(x, out.reshape(np.shape(xa)))


def ln_gamma_ratio(z: float, a: float) -> float:
    """ln(Gamma(z+a)/Gamma(z)) without the cancellation of two large ln_gamma.

    z and z+a must be positive.  Shifts z above 20, then uses the difference
    of two Stirling series with log1p for the leading term.
    """
    if not (z > 0 and z + a > 0):
        raise DomainError("ln_gamma_ratio needs z > 0 and z + a > 0")
    if a == 0:
        return 0.0
    shift = 0.0
    while z < 20.0:
        shift += math.log(z) - math.log(z + a)
        z += 1.0
    za = z + a
    val = (za - 0.5) * math.log1p(a / z) + a * math.log(z) - a
    for k, b2k in enumerate(_BERNOULLI, start=1):
        val += b2k / (2 * k * (2 * k - 1)) * (za ** (1 - 2 * k) - z ** (1 - 2 * k))
    return val + shift


def ln_gamma_signed(x: float) -> tuple[float, float]:
    """(ln|Gamma(x)|, sign Gamma(x)) for real x that is not a non-positive integer."""
    x = float(x)
    if x > 0:
        return ln_gamma(x), 1.0
    if x == math.floor(x):
        raise DomainError(f"Gamma has a pole at {x}")
    s = math.sin(math.pi * x)
    return math.log(math.pi) - math.log(abs(s)) - ln_gamma(1.0 - x), math.copysign(1.0, s)


# }}}


# {{{ orthogonal polynomials


def _as_params(p) -> JacobiParams:
    if isinstance(p, JacobiParams):
        return p
    a, b = p
    return JacobiParams(float(a), float(b))


def jacobi_recurrence(n: int, a: float, b: float) -> tuple[float, float, float]:
    """Coefficients (A, B, C) with P_n = (A x + B) P_{n-1} - C P_{n-2}, n >= 2."""
    s = 2 * n + a + b
    den = 2.0 * n * (n + a + b) * (s - 2)
    A = (s - 1) * s * (s - 2) / den
    B = (s - 1) * (a * a - b * b) / den
    C = 2.0 * (n + a - 1) * (n + b - 1) * s / den
    return A, B, C


def jacobi_p(n: int, p, x):
    """P_n^{(alpha,beta)}(x) by forward three-term recurrence."""
    if n < 0:
        raise DomainError("degree must be non-negative")
    p = _as_params(p)
    a, b = p.alpha, p.beta
    xa = np.asarray(x, dtype=float)
    p0 = np.ones_like(xa)
    if n == 0:
        return _scalar_out(x, p0)
    p1 = (a + 1) + 0.5 * (a + b + 2) * (xa - 1)
    for k in range(2, n + 1):
        A, B, C = jacobi_recurrence(k, a, b)
        p0, p1 = p1, (A * xa + B) * p1 - C * p0
    return _scalar_out(x, p1)


def ln_jacobi_norm(n, a: float, b: float):
    n = np.asarray(n, dtype=float)
    nf = np.atleast_1d(n)
    res = np.empty_like(nf)
    zero = nf == 0
    if zero.any():
        res[zero] = (a + b + 1) * math.log(2) + ln_gamma(a + 1) + ln_gamma(b + 1) - ln_gamma(a + b + 2)
    pos = ~zero
    if pos.any():
        m = nf[pos]
        res[pos] = (
            (a + b + 1) * math.log(2)
            + ln_gamma(m + a + 1)
            + ln_gamma(m + b + 1)
            - ln_gamma(m + 1)
            - np.log(2 * m + a + b + 1)
            - ln_gamma(m + a + b + 1)
        )
    return res.reshape(np.shape(n))


def jacobi_norm(n, p):
    """sigma_n = int_{-1}^1 (1-x)^a (1+x)^b P_n(x)^2 dx."""
    p = _as_params(p)
    if np.any(np.asarray(n) < 0):
        raise DomainError("degree must be non-negative")
    return _scalar_out(n, np.exp(ln_jacobi_norm(n, p.alpha, p.beta)))


def _check_lambda(lam: float):
    if not lam > -0.5 or lam == 0:
        raise DomainError(f"Gegenbauer parameter must satisfy lambda > -1/2, lambda != 0 (got {lam})")


def gegenbauer_constant(n: int, lam: float) -> float:
    """K with C_n^{(lam)} = K * P_n^{(lam-1/2, lam-1/2)}."""
    _check_lambda(lam)
    l1, s1 = ln_gamma_signed(n + 2 * lam)
    l2, s2 = ln_gamma_signed(2 * lam)
    val = ln_gamma(lam + 0.5) + l1 - l2 - ln_gamma(n + lam + 0.5)
    return s1 * s2 * math.exp(val)


def gegenbauer_c(n: int, lam: float, x):
    """C_n^{(lam)}(x) through its Jacobi representation."""
    _check_lambda(lam)
    return gegenbauer_constant(n, lam) * jacobi_p(n, (lam - 0.5, lam - 0.5), x)


def gegenbauer_norm(n, lam: float):
    """h_n = int (1-x^2)^{lam-1/2} C_n^{(lam)}(x)^2 dx."""
    _check_lambda(lam)
    nn = np.atleast_1d(np.asarray(n, dtype=float))
    lg_lam, _ = ln_gamma_signed(lam)
    res = np.empty_like(nn)
    for i, m in enumerate(nn):
        lg, _ = ln_gamma_signed(m + 2 * lam)
        res[i] = math.exp(
            (1 - 2 * lam) * math.log(2) + math.log(math.pi) - 2 * lg_lam + lg - ln_gamma(m + 1) - math.log(abs(m + lam))
        )
    return _scalar_out(n, res.reshape(np.shape(n)))


def chebyshev_t(n: int, x):
    """T_n(x) = cos(n arccos x)."""
    if n < 0:
        raise DomainError("degree must be non-negative")
    xa = np.clip(np.asarray(x, dtype=float), -1.0, 1.0)
    return _scalar_out(x, np.cos(n * np.arccos(xa)))


# }}}


# {{{ Bessel J

SERIES_WINDOW = 20.0
"""The power series is tried for x <= nu + SERIES_WINDOW and kept only while
the sum of absolute terms stays below SERIES_ABS_LIMIT (cancellation control)."""
SERIES_ABS_LIMIT = 10.0
HANKEL_MAX_TERMS = 80
HANKEL_ACCEPT = 1.0e-15


def _bessel_series(nu: float, x: np.ndarray):
    """Power series with Kahan summation; returns (value, sum of |terms|)."""
    lead = np.exp(nu * np.log(0.5 * x) - ln_gamma(nu + 1.0))
    q = -0.25 * x * x
    term = lead.copy()
    s = lead.copy()
    comp = np.zeros_like(x)
    sabs = np.abs(lead)
    k = 0
    while True:
        k += 1
        term = term * q / (k * (nu + k))
        y = term - comp
        t = s + y
        comp = (t - s) - y
        s = t
        sabs = sabs + np.abs(term)
        if np.all(np.abs(term) <= 1e-17 * sabs) or k > 500:
            break
    return s, sabs


def _bessel_hankel(nu: float, x: np.ndarray):
    """Hankel expansion truncated at its smallest term.

    Returns (value, smallest term, largest term before it).  A small smallest
    term alone is not enough: for large order the numerator 4 nu^2 - (2k-1)^2
    passes near zero and produces a tiny term after huge ones.
    """
    P = np.ones_like(x)
    Q = np.zeros_like(x)
    bestP, bestQ = P.copy(), Q.copy()
    best = np.full_like(x, np.inf)
    peak = np.ones_like(x)
    peak_at_best = np.ones_like(x)
    term = np.ones_like(x)
    mu = 4.0 * nu * nu
    for k in range(1, HANKEL_MAX_TERMS + 1):
        term = term * (mu - (2 * k - 1) ** 2) / (8.0 * k * x)
        a = np.abs(term)
        better = a < best
        best = np.where(better, a, best)
        peak_at_best = np.where(better, peak, peak_at_best)
        peak = np.maximum(peak, a)
        bestP = np.where(better, P, bestP)
        bestQ = np.where(better, Q, bestQ)
        sign = -1.0 if (k // 2) % 2 else 1.0
        if k % 2 == 0:
            P = P + sign * term
        else:
            Q = Q + sign * term
        if np.all(best == 0):
            break
    c = 0.5 * math.pi * nu + 0.25 * math.pi
    cosx, sinx = np.cos(x), np.sin(x)
    cos_chi = cosx * math.cos(c) + sinx * math.sin(c)
    sin_chi = sinx * math.cos(c) - cosx * math.sin(c)
    val = np.sqrt(2.0 / (math.pi * x)) * (bestP * cos_chi - bestQ * sin_chi)
    return val, best, peak_at_best


def _gl_nodes(n: int):
    # scipy-free Gauss-Legendre used only inside the Bessel integral branch
    t, w = np.polynomial.legendre.leggauss(n)
    return t, w


def _bessel_integral(nu: float, x: np.ndarray):
    """Integral representation for the gap between series and Hankel ranges."""
    out = np.empty_like(x)
    n1 = (np.ceil((0.8 * (x + abs(nu)) + 40) / 32.0) * 32).astype(int)
    s = math.sin(nu * math.pi)
    for n in np.unique(n1):
        sel = n1 == n
        xs = x[sel]
        t, w = _gl_nodes(int(n))
        th = 0.5 * math.pi * (t + 1)
        wt = 0.5 * math.pi * w
        first = np.cos(np.outer(xs, np.sin(th)) - nu * th) @ wt / math.pi
        if s != 0.0:
            T = np.arcsinh((50.0 + 2.0) / xs) + 0.5
            t2, w2 = _gl_nodes(80)
            u = 0.5 * np.outer(T, t2 + 1)
            f2 = np.exp(-xs[:, None] * np.sinh(u) - nu * u)
            second = (f2 @ w2) * 0.5 * T
            first = first - s / math.pi * second
        out[sel] = first
    return out


def bessel_j(nu, x):
    """J_nu(x) for real nu > -1 and x >= 0.

    Three branches: power series (while cancellation stays harmless), Hankel asymptotics cut at the smallest term when that term is
    below 1e-15, and otherwise the integral representation evaluated with
    Gauss-Legendre.
    """
    if isinstance(nu, BesselOrder):
        nu = nu.nu
    nu = float(nu)
    if not nu > -1.0:
        raise DomainError(f"Bessel order must exceed -1, got {nu}")
    xa = np.asarray(x, dtype=float)
    if np.any(~(xa >= 0)):
        raise DomainError("bessel_j requires x >= 0")
    xf = np.atleast_1d(xa).ravel().copy()
    out = np.empty_like(xf)
    todo = xf > 0
    out[~todo] = 1.0 if nu == 0 else (0.0 if nu > 0 else np.inf)

    cand = todo & (xf <= max(nu, 0.0) + SERIES_WINDOW)
    if cand.any():
        val, sabs = _bessel_series(nu, xf[cand])
        ok = sabs <= SERIES_ABS_LIMIT
        idx = np.flatnonzero(cand)[ok]
        out[idx] = val[ok]
        todo[idx] = False
    if todo.any():
        idx = np.flatnonzero(todo)
        val, small, peak = _bessel_hankel(nu, xf[idx])
        ok = (small <= HANKEL_ACCEPT) & (peak <= 10.0)
        out[idx[ok]] = val[ok]
        todo[idx[ok]] = False
    if todo.any():
        idx = np.flatnonzero(todo)
        out[idx] = _bessel_integral(nu, xf[idx])
    return _scalar_out(x, out.reshape(np.shape(xa)))


def bessel_i_series(nu: float, x: float) -> float:
    """Modified Bessel I_nu(x) by its (positive-term) power series."""
    if x == 0:
        return 1.0 if nu == 0 else 0.0
    term = math.exp(nu * math.log(0.5 * x) - ln_gamma(nu + 1.0))
    total = term
    q = 0.25 * x * x
    k = 0
    while term > 1e-18 * total:
        k += 1
        term *= q / (k * (nu + k))
        total += term
    return total


# }}}


def hilb_main_term(n: int, p, theta):
    """Hilb-type approximation to P_n^{(alpha,beta)}(cos theta).

    Gamma(n+a+1)/(sqrt(2) n! Nt^a) J_a(Nt theta), divided by the weight
    theta^{-1/2} sin^{a+1/2}(theta/2) cos^{b+1/2}(theta/2), Nt = n+(a+b+1)/2.
    """
    if n < 1:
        raise DomainError("hilb_main_term needs n >= 1")
    p = _as_params(p)
    a, b = p.alpha, p.beta
    th = np.asarray(theta, dtype=float)
    if np.any((th <= 0) | (th >= math.pi)):
        raise DomainError("theta must lie strictly inside (0, pi)")
    Nt = n + 0.5 * (a + b + 1)
    ln_pref = ln_gamma_ratio(n + 1.0, a) - a * math.log(Nt) - 0.5 * math.log(2.0)
    ln_weight = -0.5 * np.log(th) + (a + 0.5) * np.log(np.sin(0.5 * th)) + (b + 0.5) * np.log(np.cos(0.5 * th))
    val = bessel_j(a, Nt * th) * np.exp(ln_pref - ln_weight)
    return _scalar_out(theta, val)
