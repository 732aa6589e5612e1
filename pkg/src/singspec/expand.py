"""Expansion coefficients in Jacobi, Gegenbauer, Legendre and Chebyshev bases.

Coefficients are weighted integrals computed on one composite rule shared by
all degrees n = 0..N: the rule is graded toward every singular site and
additionally split at x_j = cos(pi j / M) so that each panel holds less than
one oscillation of the highest-degree polynomial.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numpy.polynomial import chebyshev as npcheb
from numpy.polynomial import polynomial as nppoly

from .errors import BasisMismatch, DomainError, LengthError, NoConvergence, NotInL2w, NotInSobolev, TailDominates
from .quad import CompositeRule, build_composite_rule
from .specfun import (
    JacobiParams,
    bessel_i_series,
    bessel_j,
    gegenbauer_norm,
    jacobi_recurrence,
    ln_gamma,
    ln_gamma_signed,
    ln_jacobi_norm,
)

__all__ = [
    "SingularFactor",
    "SmoothFactor",
    "SingularFunction",
    "Basis",
    "CoefficientSeries",
    "ProjectionError",
    "jacobi_coeffs",
    "gegenbauer_coeffs",
    "legendre_coeffs",
    "chebyshev_coeffs",
    "coefficients",
    "convert_jacobi_to_gegenbauer",
    "convert_jacobi_to_chebyshev",
    "derivative_coeffs",
    "l2w_projection_error",
    "l2w_projection_error_details",
    "sobolev_projection_error",
    "evaluate_projection",
]

DEFAULT_TOL = 1e-12
CHUNK = 8192  # fixed node-chunk size, so sums do not depend on the thread count
BLOCK = 64


# {{{ functions with singular factors


@dataclass(frozen=True)
class SingularFactor:
    """dist^exponent * ln^log_power(dist) at one site.

    ``site`` is "right" (dist = 1-x), "left" (dist = 1+x) or a float z0 in
    (-1, 1) (dist = |x - z0|).
    """

    site: str | float
    exponent: float = 0.0
    log_power: int = 0

    def __post_init__(self):
        if isinstance(self.site, str):
            if self.site not in ("right", "left"):
                raise DomainError(f"unknown site {self.site!r}")
        else:
            z = float(self.site)
            if not -1.0 < z < 1.0:
                raise DomainError("interior site must lie strictly inside (-1, 1)")
            object.__setattr__(self, "site", z)
        if int(self.log_power) != self.log_power or self.log_power < 0:
            raise DomainError("log power must be a non-negative integer")
        object.__setattr__(self, "exponent", float(self.exponent))
        object.__setattr__(self, "log_power", int(self.log_power))

    @property
    def kind(self) -> str:
        return self.site if isinstance(self.site, str) else "interior"

    @property
    def location(self) -> float:
        return {"right": 1.0, "left": -1.0}.get(self.site, self.site) if isinstance(self.site, str) else self.site


@dataclass(frozen=True)
class SmoothFactor:
    """Builtin smooth factor: sin, cos, exp, or a polynomial (constant first)."""

    name: str
    coeffs: tuple[float, ...] = ()

    def __post_init__(self):
        if self.name not in ("sin", "cos", "exp", "poly"):
            raise DomainError(f"unknown smooth factor {self.name!r}")
        if self.name == "poly" and not self.coeffs:
            raise DomainError("poly needs at least one coefficient")
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))

    def __call__(self, x):
        if self.name == "sin":
            return np.sin(x)
        if self.name == "cos":
            return np.cos(x)
        if self.name == "exp":
            return np.exp(x)
        return nppoly.polyval(x, self.coeffs)


_SITE_ORDER = {"right": 0, "left": 1, "interior": 2}


@dataclass(frozen=True)
class SingularFunction:
    """f(x) = g(x) * prod_i dist_i^e_i ln^mu_i(dist_i) * ln^J(1-x^2).

    g is the product of builtin smooth factors and an optional caller closure.
    ``joint_log`` J stores a ln(1-x^2) power; it is evaluated as a product
    and counted as a log power at both endpoints for rate prediction.
    """

    factors: tuple[SingularFactor, ...] = ()
    smooth: tuple[SmoothFactor, ...] = ()
    closure: Callable[[np.ndarray], np.ndarray] | None = field(default=None, compare=True)
    joint_log: int = 0

    def __post_init__(self):
        merged: dict = {}
        for fac in self.factors:
            key = fac.site
            if key in merged:
                old = merged[key]
                merged[key] = SingularFactor(key, old.exponent + fac.exponent, old.log_power + fac.log_power)
            else:
                merged[key] = fac
        facs = sorted(merged.values(), key=lambda f: (_SITE_ORDER[f.kind], f.location))
        object.__setattr__(self, "factors", tuple(facs))
        object.__setattr__(self, "smooth", tuple(self.smooth))
        if int(self.joint_log) != self.joint_log or self.joint_log < 0:
            raise DomainError("joint log power must be a non-negative integer")

    # -- structure

    def factor_at(self, site) -> SingularFactor | None:
        for f in self.factors:
            if f.site == site:
                return f
        return None

    def site_terms(self) -> list[SingularFactor]:
        """Per-site (exponent, log power), with ln(1-x^2) split onto both endpoints."""
        out = []
        for side in ("right", "left"):
            f = self.factor_at(side)
            e = f.exponent if f else 0.0
            mu = (f.log_power if f else 0) + self.joint_log
            if f is not None or self.joint_log:
                out.append(SingularFactor(side, e, mu))
        out.extend(f for f in self.factors if f.kind == "interior")
        return out

    def site_exponents(self) -> dict[float, tuple[float, int]]:
        return {f.location: (f.exponent, f.log_power) for f in self.site_terms()}

    @property
    def is_polynomial_times_builtins(self) -> bool:
        """True when every factor is analytic on [-1, 1] (no closure)."""
        if self.closure is not None or self.joint_log:
            return False
        for f in self.factors:
            if f.log_power or f.exponent < 0 or f.exponent != int(f.exponent):
                return False
            if f.kind == "interior" and int(f.exponent) % 2:
                return False
        return True

    # -- evaluation

    def smooth_value(self, x):
        g = np.ones_like(np.asarray(x, dtype=float))
        for s in self.smooth:
            g = g * s(x)
        if self.closure is not None:
            g = g * self.closure(x)
        return g

    def _product(self, x, dist: Callable[[float], np.ndarray]):
        val = self.smooth_value(x)
        for f in self.factors:
            d = dist(f.location)
            if f.exponent != 0:
                val = val * d**f.exponent
            if f.log_power:
                val = val * np.log(d) ** f.log_power
        if self.joint_log:
            val = val * (np.log(dist(1.0)) + np.log(dist(-1.0))) ** self.joint_log
        return val

    def __call__(self, x):
        xa = np.asarray(x, dtype=float)
        out = self._product(xa, lambda c: np.abs(xa - c))
        return float(out) if np.ndim(x) == 0 else out

    def evaluate_on(self, rule: CompositeRule) -> np.ndarray:
        """Values at the rule nodes using exact site distances."""
        return self._product(rule.x, rule.distance)

    def scaled(self, c: float) -> "SingularFunction":
        """c * f (as an extra constant polynomial factor)."""
        return SingularFunction(self.factors, self.smooth + (SmoothFactor("poly", (c,)),), self.closure, self.joint_log)


# }}}


# {{{ bases


@dataclass(frozen=True)
class Basis:
    family: str
    alpha: float = 0.0
    beta: float = 0.0
    lam: float = 0.5

    def __post_init__(self):
        if self.family not in ("jacobi", "gegenbauer", "legendre", "chebyshev"):
            raise DomainError(f"unknown basis family {self.family!r}")
        if self.family == "jacobi":
            JacobiParams(self.alpha, self.beta)
        if self.family == "gegenbauer" and (not self.lam > -0.5 or self.lam == 0):
            raise DomainError("Gegenbauer parameter must satisfy lambda > -1/2, lambda != 0")

    @classmethod
    def jacobi(cls, alpha: float, beta: float) -> "Basis":
        return cls("jacobi", float(alpha), float(beta))

    @classmethod
    def gegenbauer(cls, lam: float) -> "Basis":
        return cls("gegenbauer", lam=float(lam))

    @classmethod
    def legendre(cls) -> "Basis":
        return cls("legendre")

    @classmethod
    def chebyshev(cls) -> "Basis":
        return cls("chebyshev")

    @classmethod
    def parse(cls, text: str) -> "Basis":
        """'jacobi:a,b', 'gegenbauer:l', 'legendre' or 'chebyshev'."""
        name, _, rest = text.strip().partition(":")
        name = name.strip().lower()
        try:
            if name == "jacobi":
                a, b = (float(v) for v in rest.split(","))
                return cls.jacobi(a, b)
            if name == "gegenbauer":
                return cls.gegenbauer(float(rest))
        except ValueError as exc:
            raise DomainError(f"bad basis parameters in {text!r}") from exc
        if name in ("legendre", "chebyshev") and not rest:
            return cls(name)
        raise DomainError(f"unknown basis {text!r}")

    def __str__(self) -> str:
        if self.family == "jacobi":
            return f"jacobi:{self.alpha!r},{self.beta!r}"
        if self.family == "gegenbauer":
            return f"gegenbauer:{self.lam!r}"
        return self.family

    @property
    def weight_exponents(self) -> tuple[float, float]:
        """(a, b) of the weight (1-x)^a (1+x)^b."""
        if self.family == "jacobi":
            return self.alpha, self.beta
        if self.family == "gegenbauer":
            return self.lam - 0.5, self.lam - 0.5
        if self.family == "legendre":
            return 0.0, 0.0
        return -0.5, -0.5

    @property
    def is_jacobi_normalized(self) -> bool:
        return self.family in ("jacobi", "legendre")

    def norms(self, n) -> np.ndarray:
        n = np.asarray(n, dtype=float)
        if self.is_jacobi_normalized:
            a, b = self.weight_exponents
            return np.exp(ln_jacobi_norm(n, a, b))
        if self.family == "gegenbauer":
            return np.asarray(gegenbauer_norm(n, self.lam), dtype=float)
        return np.where(n == 0, math.pi, 0.5 * math.pi)

    def recurrence(self, k: int, x):
        """(alpha_k(x), beta_k) with phi_{k+1} = alpha_k phi_k + beta_k phi_{k-1}, k >= 1."""
        if self.is_jacobi_normalized:
            a, b = self.weight_exponents
            A, B, C = jacobi_recurrence(k + 1, a, b)
            return A * x + B, -C
        if self.family == "gegenbauer":
            lam = self.lam
            return 2.0 * x * (k + lam) / (k + 1), -(k + 2 * lam - 1) / (k + 1)
        return 2.0 * x, -1.0

    def phi1(self, x):
        if self.is_jacobi_normalized:
            a, b = self.weight_exponents
            return (a + 1) + 0.5 * (a + b + 2) * (x - 1)
        if self.family == "gegenbauer":
            return 2.0 * self.lam * x
        return np.asarray(x, dtype=float) * 1.0

    def evaluate(self, n: int, x):
        xa = np.asarray(x, dtype=float)
        p0 = np.ones_like(xa)
        if n == 0:
            return p0
        p1 = self.phi1(xa)
        for k in range(1, n):
            ak, bk = self.recurrence(k, xa)
            p0, p1 = p1, ak * p1 + bk * p0
        return p1


@dataclass(frozen=True, eq=False)
class CoefficientSeries:
    basis: Basis
    values: np.ndarray
    err_ests: np.ndarray
    tol: float = DEFAULT_TOL
    method: str = "quadrature"
    round_ests: np.ndarray | None = None  # rounding level of each coefficient

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        e = np.asarray(self.err_ests, dtype=float)
        if v.shape != e.shape or v.ndim != 1 or v.size < 1:
            raise LengthError("values and err_ests must be 1-d arrays of equal length")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "err_ests", e)
        r = np.zeros_like(v) if self.round_ests is None else np.asarray(self.round_ests, dtype=float)
        if r.shape != v.shape:
            raise LengthError("round_ests must match values")
        object.__setattr__(self, "round_ests", r)

    @property
    def noise(self) -> np.ndarray:
        """Per-coefficient accuracy: quadrature estimate or rounding, whichever is larger."""
        return np.maximum(self.err_ests, self.round_ests)

    @property
    def N(self) -> int:
        return self.values.size - 1

    def __len__(self) -> int:
        return self.values.size


# }}}


# {{{ hypothesis checks


def check_l2w(f: SingularFunction, basis: Basis) -> None:
    """Raise NotInL2w unless f lies in L^2_w and its coefficient integrals exist."""
    a, b = basis.weight_exponents
    for t in f.site_terms():
        if t.kind == "right":
            if not min(a + t.exponent, a + 2 * t.exponent) > -1:
                raise NotInL2w("min{alpha+gamma, alpha+2*gamma} > -1", f"gamma={t.exponent}, alpha={a}")
        elif t.kind == "left":
            if not min(b + t.exponent, b + 2 * t.exponent) > -1:
                raise NotInL2w("min{beta+delta, beta+2*delta} > -1", f"delta={t.exponent}, beta={b}")
        elif not t.exponent > -0.5:
            raise NotInL2w("s > -1/2", f"s={t.exponent} at z0={t.site}")


def check_sobolev(f: SingularFunction, basis: Basis, m: int) -> None:
    a, b = basis.weight_exponents
    for t in f.site_terms():
        if t.kind == "right" and not a + 2 * t.exponent - m > -1:
            raise NotInSobolev("alpha+2*gamma-m > -1", f"gamma={t.exponent}, alpha={a}, m={m}")
        if t.kind == "left" and not b + 2 * t.exponent - m > -1:
            raise NotInSobolev("beta+2*delta-m > -1", f"delta={t.exponent}, beta={b}, m={m}")
        if t.kind == "interior" and not t.exponent > m - 0.5:
            raise NotInSobolev("s > m-1/2", f"s={t.exponent}, m={m}")


# }}}


# {{{ coefficient engine


def _kernel_scale(basis: Basis, N: int) -> float:
    """Rough max over n <= N of |phi_n| / norm_n at the endpoints."""
    a, b = basis.weight_exponents
    n = np.array([0.0, float(N)])
    top = np.maximum(
        np.abs(basis_endpoint_values(basis, n, a)),
        np.abs(basis_endpoint_values(basis, n, b)),
    )
    return float(np.max(top / basis.norms(n)))


def basis_endpoint_values(basis: Basis, n: np.ndarray, e: float) -> np.ndarray:
    """|phi_n(+-1)| where e is the weight exponent at that endpoint."""
    if basis.family == "chebyshev":
        return np.ones_like(n)
    # binomial(n+e, n) for the Jacobi normalization
    val = np.exp(ln_gamma(n + e + 1) - ln_gamma(n + 1) - ln_gamma(e + 1))
    if basis.family == "gegenbauer":
        val = val * np.abs([_geg_const(int(k), basis.lam) for k in n])
    return val


def _geg_const(n: int, lam: float) -> float:
    l1, s1 = ln_gamma_signed(n + 2 * lam)
    l2, s2 = ln_gamma_signed(2 * lam)
    return s1 * s2 * math.exp(ln_gamma(lam + 0.5) + l1 - l2 - ln_gamma(n + lam + 0.5))


def _theta(rule: CompositeRule) -> np.ndarray:
    """arccos(x) evaluated from exact endpoint offsets where available."""
    th = np.arccos(np.clip(rule.x, -1.0, 1.0))
    for i, c in enumerate(rule.anchors):
        if c in (1.0, -1.0):
            sel = rule.anchor == i
            t = 2.0 * np.arcsin(np.sqrt(0.5 * rule.offset[sel]))
            th[sel] = t if c == 1.0 else math.pi - t
    return th


def _chunk_sums(basis: Basis, N: int, x: np.ndarray, th: np.ndarray | None, vecs: np.ndarray) -> np.ndarray:
    """sum_j phi_n(x_j) vecs[:, j] for n = 0..N, plus sum_j |phi_n(x_j) vecs[0, j]|.

    Returns shape (N+1, nvec+1); the last column feeds the rounding estimate.
    """
    nv = vecs.shape[0]
    out = np.empty((N + 1, nv + 1))
    absv = np.abs(vecs[0])
    if basis.family == "chebyshev":
        for s in range(0, N + 1, BLOCK):
            ns = np.arange(s, min(N + 1, s + BLOCK), dtype=float)
            rows = np.cos(np.outer(ns, th))
            for v in range(nv):
                out[s : s + ns.size, v] = np.sum(rows * vecs[v], axis=1)
            out[s : s + ns.size, nv] = np.abs(rows) @ absv
        return out
    p0 = np.ones_like(x)
    out[0, :nv] = np.sum(vecs * p0, axis=1)
    out[0, nv] = np.sum(absv)
    if N == 0:
        return out
    p1 = basis.phi1(x)
    out[1, :nv] = np.sum(vecs * p1, axis=1)
    out[1, nv] = np.abs(p1) @ absv
    for k in range(1, N):
        ak, bk = basis.recurrence(k, x)
        p0, p1 = p1, ak * p1 + bk * p0
        out[k + 1, :nv] = np.sum(vecs * p1, axis=1)
        out[k + 1, nv] = np.abs(p1) @ absv
    return out


def _quadrature_coeffs(f: SingularFunction, basis: Basis, N: int, tol: float, threads: int, max_refinements: int = 12):
    a, b = basis.weight_exponents
    sites = {}
    for t in f.site_terms():
        if t.kind == "right":
            sites[1.0] = (a + t.exponent, t.log_power)
        elif t.kind == "left":
            sites[-1.0] = (b + t.exponent, t.log_power)
        else:
            sites[t.location] = (t.exponent, t.log_power)
    for c, e in ((1.0, a), (-1.0, b)):
        if c not in sites and e != int(e):
            sites[c] = (e, 0)
    M = math.ceil(0.75 * N) + 8
    breaks = np.cos(math.pi * np.arange(1, M) / M)
    scale = _kernel_scale(basis, N)
    norms = basis.norms(np.arange(N + 1))
    values = errs = None
    for r in range(max_refinements + 1):
        rule = build_composite_rule(-1.0, 1.0, sites, breaks=breaks, depth_extra=6 * r, tol=tol, scale=scale)
        F = f.evaluate_on(rule)
        if a != 0:
            F = F * rule.distance(1.0) ** a
        if b != 0:
            F = F * rule.distance(-1.0) ** b
        vecs = np.vstack([rule.w * F, rule.w_diff * F])
        th = _theta(rule) if basis.family == "chebyshev" else None
        starts = list(range(0, rule.x.size, CHUNK))

        def work(s0):
            sl = slice(s0, s0 + CHUNK)
            return _chunk_sums(basis, N, rule.x[sl], None if th is None else th[sl], vecs[:, sl])

        if threads > 1 and len(starts) > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                parts = list(pool.map(work, starts))
        else:
            parts = [work(s0) for s0 in starts]
        total = parts[0].copy()
        for p in parts[1:]:
            total += p
        values = total[:, 0] / norms
        errs = np.abs(total[:, 1]) / norms
        if not np.all(np.isfinite(values)):
            raise NoConvergence(float("nan"), float("inf"), tol, "non-finite coefficient")
        if errs.max() <= tol:
            rounding = np.finfo(float).eps * np.sqrt(np.arange(N + 1) + 10.0) * total[:, 2] / norms
            return values, errs, rounding
    k = int(np.argmax(errs))
    raise NoConvergence(float(values[k]), float(errs[k]), tol, f"coefficient n={k} did not converge")


def _builtin_cheb_series(s: SmoothFactor, L: int) -> np.ndarray:
    if s.name == "poly":
        return npcheb.poly2cheb(np.asarray(s.coeffs, dtype=float))
    k = np.arange(L)
    c = np.zeros(L)
    if s.name == "exp":
        c[:] = [bessel_i_series(float(j), 1.0) for j in k]
        c[1:] *= 2
        return c
    jk = np.array([bessel_j(float(j), 1.0) for j in k])
    if s.name == "cos":
        even = k % 2 == 0
        c[even] = 2.0 * (-1.0) ** (k[even] // 2) * jk[even]
        c[0] = jk[0]
    else:
        odd = k % 2 == 1
        c[odd] = 2.0 * (-1.0) ** (k[odd] // 2) * jk[odd]
    return c


def _exact_chebyshev(f: SingularFunction, N: int) -> np.ndarray:
    """Chebyshev coefficients of a polynomial times sin/cos/exp, by series algebra."""
    L = N + 64
    poly = np.array([1.0])
    for fac in f.factors:
        k = int(fac.exponent)
        if fac.kind == "right":
            base = np.array([1.0, -1.0])
        elif fac.kind == "left":
            base = np.array([1.0, 1.0])
        else:
            base = np.array([-fac.location, 1.0])
        poly = nppoly.polymul(poly, nppoly.polypow(base, k))
    c = npcheb.poly2cheb(poly)
    for s in f.smooth:
        c = npcheb.chebmul(c, _builtin_cheb_series(s, L))[:L]
    out = np.zeros(N + 1)
    m = min(N + 1, c.size)
    out[:m] = c[:m]
    return out


def coefficients(
    f: SingularFunction, basis: Basis, N: int, tol: float = DEFAULT_TOL, *, threads: int = 1
) -> CoefficientSeries:
    """Expansion coefficients a_0..a_N of f in ``basis``."""
    if not (isinstance(N, (int, np.integer)) and N >= 1):
        raise DomainError("N must be a positive integer")
    if tol < 1e-14:
        raise DomainError("tol must be >= 1e-14")
    check_l2w(f, basis)
    if basis.family == "chebyshev" and f.is_polynomial_times_builtins:
        vals = _exact_chebyshev(f, int(N))
        errs = np.full(vals.shape, np.finfo(float).eps * max(1.0, float(np.max(np.abs(vals)))))
        return CoefficientSeries(basis, vals, errs, tol, method="series-algebra", round_ests=errs)
    vals, errs, rounding = _quadrature_coeffs(f, basis, int(N), tol, max(1, int(threads)))
    return CoefficientSeries(basis, vals, errs, tol, round_ests=rounding)


def jacobi_coeffs(f: SingularFunction, p, N: int, tol: float = DEFAULT_TOL, **kw) -> CoefficientSeries:
    if not isinstance(p, JacobiParams):
        p = JacobiParams(*p)
    return coefficients(f, Basis.jacobi(p.alpha, p.beta), N, tol, **kw)


def gegenbauer_coeffs(f: SingularFunction, lam: float, N: int, tol: float = DEFAULT_TOL, **kw) -> CoefficientSeries:
    return coefficients(f, Basis.gegenbauer(lam), N, tol, **kw)


def legendre_coeffs(f: SingularFunction, N: int, tol: float = DEFAULT_TOL, **kw) -> CoefficientSeries:
    return coefficients(f, Basis.legendre(), N, tol, **kw)


def chebyshev_coeffs(f: SingularFunction, N: int, tol: float = DEFAULT_TOL, **kw) -> CoefficientSeries:
    return coefficients(f, Basis.chebyshev(), N, tol, **kw)


# }}}


# {{{ conversions and derivatives


def _symmetric_jacobi_param(basis: Basis) -> float:
    if not basis.is_jacobi_normalized:
        raise BasisMismatch(f"expected a Jacobi series, got {basis}")
    a, b = basis.weight_exponents
    if a != b:
        raise BasisMismatch(f"expected symmetric Jacobi parameters, got {basis}")
    return a


def convert_jacobi_to_gegenbauer(s: CoefficientSeries, lam: float | None = None) -> CoefficientSeries:
    """a_n(lam) = a_n(lam-1/2, lam-1/2) Gamma(2 lam) Gamma(n+lam+1/2) / (Gamma(lam+1/2) Gamma(n+2 lam))."""
    a = _symmetric_jacobi_param(s.basis)
    if lam is None:
        lam = a + 0.5
    elif abs(lam - 0.5 - a) > 1e-14:
        raise BasisMismatch(f"series parameter {a} does not match lambda - 1/2 = {lam - 0.5}")
    basis = Basis.gegenbauer(lam)
    n = np.arange(s.values.size)
    lg2, sg2 = ln_gamma_signed(2 * lam)
    fac = np.empty(n.size)
    for k in n:
        lgn, sgn = ln_gamma_signed(k + 2 * lam)
        fac[k] = sg2 * sgn * math.exp(lg2 + ln_gamma(k + lam + 0.5) - ln_gamma(lam + 0.5) - lgn)
    return CoefficientSeries(basis, s.values * fac, s.err_ests * np.abs(fac), s.tol, s.method, s.round_ests * np.abs(fac))


def convert_jacobi_to_chebyshev(s: CoefficientSeries) -> CoefficientSeries:
    """c_0 = a_0, c_n = Gamma(n+1/2) / (n Gamma(1/2) Gamma(n)) a_n(-1/2, -1/2)."""
    a = _symmetric_jacobi_param(s.basis)
    if a != -0.5:
        raise BasisMismatch(f"expected Jacobi(-1/2,-1/2), got {s.basis}")
    n = np.arange(s.values.size, dtype=float)
    fac = np.ones(n.size)
    pos = n > 0
    fac[pos] = np.exp(ln_gamma(n[pos] + 0.5) - 0.5 * math.log(math.pi) - ln_gamma(n[pos] + 1))
    return CoefficientSeries(Basis.chebyshev(), s.values * fac, s.err_ests * fac, s.tol, s.method, s.round_ests * fac)


def derivative_coeffs(s: CoefficientSeries, q: int) -> CoefficientSeries:
    """Jacobi(alpha+q, beta+q) coefficients of the q-th derivative.

    a^(q)_n = (sigma_{n+q}^{a,b} / sigma_n^{a+q,b+q}) 2^q (n+q)...(n+1) a_{n+q}.
    """
    if not s.basis.is_jacobi_normalized:
        raise BasisMismatch(f"derivative coefficients need a Jacobi series, got {s.basis}")
    if not (isinstance(q, (int, np.integer)) and q >= 1):
        raise DomainError("q must be a positive integer")
    if s.N < q:
        raise LengthError(f"series of length {s.values.size} too short for q={q}")
    a, b = s.basis.weight_exponents
    n = np.arange(s.N - q + 1, dtype=float)
    ln_fac = (
        ln_jacobi_norm(n + q, a, b)
        - ln_jacobi_norm(n, a + q, b + q)
        + q * math.log(2)
        + ln_gamma(n + q + 1)
        - ln_gamma(n + 1)
    )
    fac = np.exp(ln_fac)
    basis = Basis.jacobi(a + q, b + q)
    return CoefficientSeries(basis, s.values[q:] * fac, s.err_ests[q:] * fac, s.tol, s.method, s.round_ests[q:] * fac)


# }}}


# {{{ projection errors


@dataclass(frozen=True)
class ProjectionError:
    value: float
    stored: float
    unstored: float
    flag: str  # "exact", "extrapolated", "noise-floor"


def _tail_energy(s: CoefficientSeries, start: int) -> tuple[float, float, str]:
    """(stored, extrapolated unstored) energy sum_{n>=start} a_n^2 h_n."""
    from .asymp import fit_tail_energy

    e = s.values**2 * s.basis.norms(np.arange(s.values.size))
    stored = float(np.sum(e[start:]))
    if stored == 0.0:
        return 0.0, 0.0, "exact"
    noise = (10 * s.noise) ** 2 * s.basis.norms(np.arange(s.values.size))
    unstored, flag = fit_tail_energy(e, noise)
    if unstored > 0.1 * stored:
        raise TailDominates(f"extrapolated tail {unstored:.3e} exceeds 10% of stored tail {stored:.3e}")
    return stored, unstored, flag


def l2w_projection_error_details(s: CoefficientSeries, N: int) -> ProjectionError:
    if not 0 <= N < s.N:
        raise LengthError(f"N={N} must be below the series degree {s.N}")
    stored, unstored, flag = _tail_energy(s, N + 1)
    return ProjectionError(math.sqrt(stored + unstored), math.sqrt(stored), math.sqrt(unstored), flag)


def l2w_projection_error(s: CoefficientSeries, N: int) -> float:
    """sqrt(sum_{n>N} a_n^2 h_n), with the unstored tail extrapolated."""
    return l2w_projection_error_details(s, N).value


def sobolev_projection_error(s: CoefficientSeries, N: int, m: int, f: SingularFunction | None = None) -> float:
    """Jacobi-weighted H^m error of the degree-N projection.

    The q-th derivative of f - P_N f has Jacobi(alpha+q, beta+q) coefficients
    a^(q)_k for k >= N - q + 1, so each tail starts there.
    """
    if not s.basis.is_jacobi_normalized:
        raise BasisMismatch("Sobolev norms are defined for Jacobi series")
    if m < 0:
        raise DomainError("m must be non-negative")
    if f is not None:
        check_sobolev(f, s.basis, m)
    if not 0 <= N < s.N:
        raise LengthError(f"N={N} must be below the series degree {s.N}")
    total = 0.0
    for q in range(m + 1):
        sq = s if q == 0 else derivative_coeffs(s, q)
        stored, unstored, _ = _tail_energy(sq, max(0, N - q + 1))
        total += stored + unstored
    return math.sqrt(total)


def evaluate_projection(s: CoefficientSeries, N: int, x):
    """sum_{n<=N} a_n phi_n(x) by Clenshaw's backward recurrence."""
    if not 0 <= N <= s.N:
        raise LengthError(f"N={N} exceeds the series degree {s.N}")
    xa = np.asarray(x, dtype=float)
    a = s.values
    basis = s.basis
    if N == 0:
        out = a[0] * np.ones_like(xa)
        return float(out) if np.ndim(x) == 0 else out
    b1 = np.zeros_like(xa)
    b2 = np.zeros_like(xa)
    for k in range(N, 0, -1):
        ak, _ = basis.recurrence(k, xa)
        _, bk1 = basis.recurrence(k + 1, xa)
        b1, b2 = a[k] + ak * b1 + bk1 * b2, b1
    _, beta1 = basis.recurrence(1, xa)
    out = a[0] + basis.phi1(xa) * b1 + beta1 * b2
    return float(out) if np.ndim(x) == 0 else out


# }}}
