"""Quadrature: Gauss rules, singularity-graded composite rules, Bessel transforms.

The composite rules keep, for every node, its offset from the site it is
anchored to.  Offsets are exact (they are produced by scaling the panel
endpoints, not by subtracting from x), so factors like (1-x)^e ln(1-x) can be
evaluated accurately at distances far below machine epsilon.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import DomainError, NoConvergence
from .specfun import BesselOrder, JacobiParams, bessel_j, jacobi_recurrence, ln_gamma

__all__ = [
    "QuadratureRule",
    "GradedMesh",
    "CompositeRule",
    "OscIntegralSpec",
    "gauss_legendre",
    "gauss_jacobi",
    "build_composite_rule",
    "integrate_singular",
    "bessel_transform",
    "bessel_transform_with_error",
    "bessel_moment_tail",
]

GRADING_RATIO = 0.15
PANEL_ORDER = 24
CAP_LEVELS = 3
MIN_PANEL = 1e-15
MAX_DEPTH = 160
BESSEL_ORDER_FAR = 12


# {{{ Gauss rules


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    kind: str
    alpha: float = 0.0
    beta: float = 0.0

    def integrate(self, f: Callable[[np.ndarray], np.ndarray]) -> float:
        return float(np.sum(self.weights * f(self.nodes)))

    @property
    def moment0(self) -> float:
        a, b = self.alpha, self.beta
        return math.exp((a + b + 1) * math.log(2) + ln_gamma(a + 1) + ln_gamma(b + 1) - ln_gamma(a + b + 2))


def _jacobi_and_derivative(n: int, a: float, b: float, x: np.ndarray):
    """P_n^{(a,b)}(x) and its derivative, both by recurrence."""

    def run(nn, aa, bb):
        p0 = np.ones_like(x)
        if nn == 0:
            return p0
        p1 = (aa + 1) + 0.5 * (aa + bb + 2) * (x - 1)
        for k in range(2, nn + 1):
            A, B, C = jacobi_recurrence(k, aa, bb)
            p0, p1 = p1, (A * x + B) * p1 - C * p0
        return p1

    return run(n, a, b), 0.5 * (n + a + b + 1) * run(n - 1, a + 1, b + 1)


def gauss_jacobi(n: int, p) -> QuadratureRule:
    """n-point Gauss-Jacobi rule for the weight (1-x)^alpha (1+x)^beta.

    Nodes from the Jacobi matrix eigenvalues, polished by Newton steps on the
    recurrence; weights from the closed form in P_n', which keeps tiny weights
    near the endpoints relatively accurate.
    """
    if not (isinstance(n, (int, np.integer)) and 1 <= n <= 10_000):
        raise DomainError(f"rule size must be an integer in [1, 10000], got {n}")
    if not isinstance(p, JacobiParams):
        p = JacobiParams(*p)
    a, b = float(p.alpha), float(p.beta)
    k = np.arange(n, dtype=float)
    s = 2 * k + a + b
    diag = np.empty(n)
    diag[0] = (b - a) / (a + b + 2)
    if n > 1:
        diag[1:] = (b * b - a * a) / (s[1:] * (s[1:] + 2))
    kk = k[: n - 1] + 1  # off-diagonal index j = 1..n-1
    sj = 2 * kk + a + b
    with np.errstate(invalid="ignore", divide="ignore"):
        off = 2.0 / sj * np.sqrt(kk * (kk + a) * (kk + b) * (kk + a + b) / ((sj - 1) * (sj + 1)))
    if n > 1 and abs(a + b + 1) < 1e-15:
        off[0] = 2.0 / (a + b + 2) * math.sqrt((a + 1) * (b + 1) / (a + b + 3))
    x = eigh_tridiagonal(diag, off, eigvals_only=True) if n > 1 else diag.copy()
    for _ in range(3):
        pn, dpn = _jacobi_and_derivative(n, a, b, x)
        x = x - pn / dpn
    x = np.sort(x)
    _, dpn = _jacobi_and_derivative(n, a, b, x)
    ln_c = (a + b + 1) * math.log(2) + ln_gamma(n + a + 1) + ln_gamma(n + b + 1) - ln_gamma(n + a + b + 1) - ln_gamma(n + 1)
    w = math.exp(ln_c) / ((1 - x) * (1 + x) * dpn * dpn)
    kind = "GaussLegendre" if a == 0 and b == 0 else "GaussJacobi"
    return QuadratureRule(nodes=x, weights=w, kind=kind, alpha=a, beta=b)


def gauss_legendre(n: int) -> QuadratureRule:
    return gauss_jacobi(n, JacobiParams(0.0, 0.0))


_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gl(order: int) -> tuple[np.ndarray, np.ndarray]:
    if order not in _GL_CACHE:
        r = gauss_legendre(order)
        _GL_CACHE[order] = (r.nodes, r.weights)
    return _GL_CACHE[order]


# }}}


# {{{ composite graded rules


@dataclass(frozen=True)
class GradedMesh:
    breakpoints: np.ndarray
    grading_ratio: float
    panels_per_singularity: int
    panel_order: int


@dataclass(frozen=True)
class CompositeRule:
    """Nodes and weights of a composite rule plus a coarser comparison rule.

    ``w`` integrates with the full grading depth; ``w_diff`` gives
    (full - coarse), where coarse replaces the innermost CAP_LEVELS graded
    panels at every site by a single panel.
    """

    x: np.ndarray
    w: np.ndarray
    w_diff: np.ndarray
    anchor: np.ndarray
    offset: np.ndarray
    anchors: tuple[float, ...]
    mesh: GradedMesh
    depths: dict = field(default_factory=dict)

    def distance(self, c: float) -> np.ndarray:
        """|x - c|, exact for nodes anchored at c."""
        d = np.abs(self.x - c)
        for i, a in enumerate(self.anchors):
            if a == c:
                sel = self.anchor == i
                d[sel] = self.offset[sel]
        return d

    def apply(self, values: np.ndarray) -> tuple[float, float]:
        return float(np.sum(self.w * values)), float(abs(np.sum(self.w_diff * values)))


def _depth_for(half: float, exponent: float, log_power: int, scale: float, tol: float, ratio: float) -> int:
    """Grading depth: innermost panel shorter than MIN_PANEL or contributing < tol/10."""
    k_len = max(1, math.ceil(math.log(MIN_PANEL / half) / math.log(ratio)))
    k_con = k_len
    if exponent > -1:
        for k in range(1, MAX_DEPTH + 1):
            h = half * ratio**k
            contrib = scale * h ** (1 + exponent) * (1 + abs(math.log(h))) ** log_power / (1 + exponent)
            if contrib < tol / 10:
                k_con = k
                break
        else:
            k_con = MAX_DEPTH
    return max(CAP_LEVELS + 1, min(k_len, k_con))


def build_composite_rule(
    a: float,
    b: float,
    sites: dict[float, tuple[float, int]] | None = None,
    *,
    breaks: Sequence[float] = (),
    depth_extra: int = 0,
    tol: float = 1e-12,
    scale: float = 1.0,
    ratio: float = GRADING_RATIO,
    order: int = PANEL_ORDER,
    order_far: int | None = None,
) -> CompositeRule:
    """Composite Gauss-Legendre rule on [a, b] graded toward ``sites``.

    ``sites`` maps a location to (exponent, log_power) of the integrand there;
    endpoints a, b are always anchors, but only listed sites get a geometric
    mesh.  ``breaks`` are additional breakpoints (for oscillation).  Panels
    that are far from their anchor relative to their length use
    ``order_far`` (default: ``order``).
    """
    sites = dict(sites or {})
    if not a < b:
        raise DomainError("empty interval")
    order_far = order if order_far is None else order_far
    anchors = sorted({float(a), float(b)} | {float(s) for s in sites if a < s < b})
    brk = np.asarray(sorted(float(v) for v in breaks if a < v < b), dtype=float)

    xs, ws, wd, anc, offs = [], [], [], [], []
    depths = {}
    t_near, w_near = _gl(order)
    t_far, w_far = _gl(order_far)

    for i in range(len(anchors) - 1):
        L, R = anchors[i], anchors[i + 1]
        half = 0.5 * (R - L)
        for idx, sign in ((i, 1.0), (i + 1, -1.0)):
            c = anchors[idx]
            if sign > 0:
                u_br = brk[(brk > L) & (brk < L + half)] - L
            else:
                u_br = R - brk[(brk < R) & (brk > R - half)]
            graded = c in sites
            if graded:
                e, mu = sites[c]
                K = _depth_for(half, e, mu, scale, tol, ratio) + depth_extra
                K = min(K, MAX_DEPTH)
                depths[(c, int(sign))] = K
                g = half * ratio ** np.arange(0, K + 1)
                cap = half * ratio ** (K - CAP_LEVELS)
                u_br = u_br[u_br > 2 * cap]
                u = np.unique(np.concatenate([[0.0], g, u_br, [half]]))
            else:
                cap = None
                u = np.unique(np.concatenate([[0.0], u_br, [half]]))
            u0, u1 = u[:-1], u[1:]
            near = u0 < (u1 - u0)
            for sel, (tt, ww) in ((near, (t_near, w_near)), (~near, (t_far, w_far))):
                if not sel.any():
                    continue
                p0, p1 = u0[sel], u1[sel]
                hl = 0.5 * (p1 - p0)
                uu = (p0[:, None] + hl[:, None] * (tt[None, :] + 1)).ravel()
                wq = (hl[:, None] * ww[None, :]).ravel()
                inner = np.repeat(p1 <= cap * (1 + 1e-12), len(tt)) if cap is not None else np.zeros(uu.size, bool)
                xs.append(c + sign * uu)
                ws.append(wq)
                wd.append(np.where(inner, wq, 0.0))
                anc.append(np.full(uu.size, idx))
                offs.append(uu)
            if cap is not None:
                hl = 0.5 * cap
                uu = hl * (t_near + 1)
                wq = hl * w_near
                xs.append(c + sign * uu)
                ws.append(np.zeros_like(wq))
                wd.append(-wq)
                anc.append(np.full(uu.size, idx))
                offs.append(uu)

    x = np.concatenate(xs)
    order_idx = np.argsort(x, kind="stable")
    mesh_bp = np.unique(np.concatenate([np.asarray(anchors), brk]))
    mesh = GradedMesh(
        breakpoints=mesh_bp,
        grading_ratio=ratio,
        panels_per_singularity=max(depths.values()) if depths else 0,
        panel_order=order,
    )
    return CompositeRule(
        x=x[order_idx],
        w=np.concatenate(ws)[order_idx],
        w_diff=np.concatenate(wd)[order_idx],
        anchor=np.concatenate(anc)[order_idx],
        offset=np.concatenate(offs)[order_idx],
        anchors=tuple(anchors),
        mesh=mesh,
        depths=depths,
    )


def integrate_singular(
    f,
    kernel: Callable[[np.ndarray], np.ndarray] | None = None,
    interval: tuple[float, float] = (-1.0, 1.0),
    tol: float = 1e-12,
    *,
    max_refinements: int = 24,
) -> tuple[float, float]:
    """Integrate f(x) * kernel(x) over ``interval`` with a graded composite rule.

    ``f`` is a SingularFunction (anything with ``site_exponents()`` and
    ``evaluate_on(rule)``).  The grading depth grows until the depth
    comparison estimate is below ``tol``; otherwise NoConvergence is raised.
    Exponents near -1 converge slowly in depth, hence the generous
    refinement budget (each step adds six graded levels).
    """
    if tol < 1e-14:
        raise DomainError("tol must be >= 1e-14")
    a, b = map(float, interval)
    if not (-1.0 <= a < b <= 1.0):
        raise DomainError("interval must satisfy -1 <= a < b <= 1")
    sites = {c: v for c, v in f.site_exponents().items() if a <= c <= b}
    value = err = math.nan
    for r in range(max_refinements + 1):
        rule = build_composite_rule(a, b, sites, depth_extra=6 * r, tol=tol)
        vals = f.evaluate_on(rule)
        if kernel is not None:
            vals = vals * kernel(rule.x)
        value, err = rule.apply(vals)
        if err <= tol:
            return value, err
        if max(rule.depths.values(), default=MAX_DEPTH) >= MAX_DEPTH:
            break
    raise NoConvergence(value, err, tol)


# }}}


# {{{ Bessel transforms

PSI_BUILTINS: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "one": np.ones_like,
    "cos": np.cos,
    "sin": np.sin,
    "exp": np.exp,
}


@dataclass(frozen=True)
class OscIntegralSpec:
    """int_0^t ln^mu(.) x^alpha (b-x)^beta psi(x) J_nu(omega x) dx.

    ``log_site`` is "AtZero" for ln^mu(x) and "AtB" for ln^mu(b-x).
    """

    alpha: float
    beta: float
    mu: int
    nu: float
    b: float
    log_site: str = "AtZero"
    psi: str | Callable = "one"
    t: float | None = None

    def __post_init__(self):
        if self.t is None:
            object.__setattr__(self, "t", float(self.b))
        BesselOrder(self.nu)
        if not self.alpha + self.nu > -1:
            raise DomainError("need alpha + nu > -1")
        if not self.beta > -1:
            raise DomainError("need beta > -1")
        if not self.b > 0:
            raise DomainError("need b > 0")
        if not (0 <= self.t <= self.b):
            raise DomainError("need 0 <= t <= b")
        if self.log_site not in ("AtZero", "AtB"):
            raise DomainError("log_site must be AtZero or AtB")
        if int(self.mu) != self.mu or self.mu < 0:
            raise DomainError("mu must be a non-negative integer")

    @property
    def psi_fn(self) -> Callable[[np.ndarray], np.ndarray]:
        return PSI_BUILTINS[self.psi] if isinstance(self.psi, str) else self.psi


def bessel_transform_with_error(
    spec: OscIntegralSpec,
    omega: float,
    *,
    panel_length: float | None = None,
    tol: float | None = None,
    max_refinements: int = 4,
) -> tuple[float, float]:
    """Value and depth-comparison error estimate of the Bessel transform."""
    if not omega >= 1:
        raise DomainError("omega must be >= 1")
    t = float(spec.t)
    if t == 0:
        return 0.0, 0.0
    b = float(spec.b)
    h = math.pi / (2 * omega) if panel_length is None else float(panel_length)
    nb = int(math.floor(t / h))
    breaks = h * np.arange(1, nb + 1)
    mu0 = spec.mu if spec.log_site == "AtZero" else 0
    mub = spec.mu if spec.log_site == "AtB" else 0
    sites = {0.0: (spec.alpha + spec.nu, mu0)}
    if t == b:
        sites[t] = (spec.beta, mub)
    else:
        sites[t] = (0.0, 0)
    scale = max(1.0, (omega / 2) ** spec.nu) * max(1.0, b**spec.beta) * 10.0
    value = err = math.nan
    for r in range(max_refinements + 1):
        rule = build_composite_rule(
            0.0, t, sites, breaks=breaks, depth_extra=6 * r, scale=scale, tol=1e-13, order_far=BESSEL_ORDER_FAR
        )
        d0 = rule.distance(0.0)
        db = (b - t) + rule.distance(t)
        x = rule.x
        vals = d0**spec.alpha * db**spec.beta * spec.psi_fn(x) * bessel_j(spec.nu, omega * d0)
        if spec.mu:
            vals = vals * (np.log(d0) if spec.log_site == "AtZero" else np.log(db)) ** spec.mu
        parts = rule.w * vals
        value = math.fsum(parts.tolist())
        err = abs(math.fsum((rule.w_diff * vals).tolist()))
        limit = (1e-11 + 1e-8 * abs(value)) if tol is None else tol
        if err <= limit:
            return value, err
    raise NoConvergence(value, err, limit)


def bessel_transform(spec: OscIntegralSpec, omega: float, **kw) -> float:
    """int_0^t ln^mu x^alpha (b-x)^beta psi(x) J_nu(omega x) dx.

    Graded panels at both ends of [0, t], oscillation panels of length
    pi/(2 omega) in between; exactly rounded summation (math.fsum), so the
    result does not depend on evaluation order.
    """
    return bessel_transform_with_error(spec, omega, **kw)[0]


def bessel_moment_tail(alpha: float, nu: float, X: float, terms: int = 12) -> float:
    """Asymptotic value of int_X^inf x^alpha J_nu(x) dx for large X.

    Uses the Hankel expansion of J_nu and integrates each term
    int_X^inf x^p e^{ix} dx = i e^{iX} X^p sum_j i^j p(p-1)...(p-j+1) X^{-j}.
    """
    mu = 4.0 * nu * nu
    total = 0j
    a_k = 1.0
    for k in range(terms):
        if k > 0:
            a_k *= (mu - (2 * k - 1) ** 2) / (8.0 * k)
        p = alpha - 0.5 - k
        inner = 0j
        fall = 1.0
        for j in range(terms):
            inner += (1j**j) * fall * X ** (p - j)
            fall *= p - j
        total += (1j**k) * a_k * 1j * inner
    phase = complex(math.cos(X - 0.5 * math.pi * nu - 0.25 * math.pi), math.sin(X - 0.5 * math.pi * nu - 0.25 * math.pi))
    return math.sqrt(2 / math.pi) * (phase * total).real


# }}}
