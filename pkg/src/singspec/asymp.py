"""Predicted decay rates and empirical slope fits.

A rate is a pair (exponent p, log power m) standing for n^p ln^m n.  Rates of
several singular sites combine by taking the slowest one: largest exponent,
ties broken by the larger log power.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, HypothesisViolated, InsufficientData
from .expand import Basis, SingularFunction
from .quad import OscIntegralSpec
from .specfun import JacobiParams, hilb_main_term, jacobi_p

__all__ = [
    "RatePrediction",
    "DecayFit",
    "ThetaGrid",
    "SUPER_ALGEBRAIC",
    "combine",
    "predict_coeff_decay",
    "predict_projection_rate",
    "predict_bessel_rate",
    "fit_decay",
    "block_envelope",
    "fit_tail_energy",
    "hilb_residual_scan",
]


@dataclass(frozen=True)
class RatePrediction:
    exponent: float
    log_power: int
    applicability: str
    source: str
    flags: tuple[str, ...] = ()

    @property
    def super_algebraic(self) -> bool:
        return self.exponent == -math.inf

    def key(self) -> tuple[float, int]:
        return (self.exponent, self.log_power)

    def envelope(self, n) -> np.ndarray:
        n = np.asarray(n, dtype=float)
        if self.super_algebraic:
            return np.zeros_like(n)
        return n**self.exponent * np.log(n) ** self.log_power


SUPER_ALGEBRAIC = -math.inf


def combine(preds: Iterable[RatePrediction], applicability: str | None = None, source: str | None = None) -> RatePrediction:
    """Slowest-decay dominance; independent of the order of ``preds``."""
    preds = list(preds)
    if not preds:
        return RatePrediction(SUPER_ALGEBRAIC, 0, applicability or "CoefficientDecay", source or "none")
    best = max(p.key() for p in preds)
    winners = sorted(p.source for p in preds if p.key() == best)
    flags = set()
    for p in preds:
        flags.update(p.flags)
    same_exp = {p.log_power for p in preds if p.exponent == best[0]}
    if len(same_exp) > 1 and best[0] != SUPER_ALGEBRAIC:
        flags.add("tie-larger-log")
    return RatePrediction(
        best[0],
        best[1],
        applicability or preds[0].applicability,
        source or winners[0],
        tuple(sorted(flags)),
    )


def _is_nonneg_int(v: float) -> bool:
    return v >= 0 and v == int(v)


# {{{ coefficient and projection predictions


def _basis_kind(basis: Basis) -> tuple[float, float, float, str]:
    """(alpha_eq, beta_eq, shift, family tag) in the Jacobi normalization."""
    a, b = basis.weight_exponents
    if basis.family == "gegenbauer":
        return a, b, 0.5 - basis.lam, "geg"
    if basis.family == "chebyshev":
        return a, b, -0.5, "cheb"
    return a, b, 0.0, "jac"


def _endpoint_condition(tag: str, side: str) -> str:
    g = "gamma" if side == "right" else "delta"
    if tag == "jac":
        return ("alpha" if side == "right" else "beta") + f"+{g}>-1"
    if tag == "geg":
        return f"lambda+{g}>-1/2"
    return f"{g}>-1/2"


def predict_coeff_decay(f: SingularFunction, basis: Basis) -> RatePrediction:
    """Slowest per-site coefficient decay rate of f in ``basis``."""
    a, b, shift, tag = _basis_kind(basis)
    preds = []
    for t in f.site_terms():
        if t.kind in ("right", "left"):
            w = a if t.kind == "right" else b
            if not w + t.exponent > -1:
                raise HypothesisViolated(_endpoint_condition(tag, t.kind), f"exponent {t.exponent}")
            src = {"jac": "Thm1" if t.kind == "right" else "Thm2", "geg": "Cor2", "cheb": "Cor2"}[tag]
            if _is_nonneg_int(t.exponent):
                if t.log_power == 0:
                    continue
                mu = t.log_power - 1
            else:
                mu = t.log_power
            preds.append(RatePrediction(-w - 2 * t.exponent - 1 + shift, mu, "CoefficientDecay", src))
        else:
            s, mu = t.exponent, t.log_power
            if not s > -1:
                raise HypothesisViolated("s>-1", f"s={s}")
            if mu == 0 and _is_nonneg_int(s) and int(s) % 2 == 0:
                continue
            if s > 0:
                src = "Thm3" if tag == "jac" else "Cor3"
                preds.append(RatePrediction(-s - 0.5 + shift, mu, "CoefficientDecay", src))
            else:
                src = "Rem3"
                preds.append(combine([
                    RatePrediction(-s - 0.5 + shift, mu, "CoefficientDecay", src),
                    RatePrediction(-min(1 + a, 1 + b) + shift, 0, "CoefficientDecay", src),
                ]))
    if not preds:
        return RatePrediction(SUPER_ALGEBRAIC, 0, "CoefficientDecay", "Rem5")
    if len(preds) == 1:
        return preds[0]
    multi = "Cor1" if tag == "jac" and all(t.kind != "interior" for t in f.site_terms()) else "Cor6"
    return combine(preds, "CoefficientDecay", multi)


def predict_projection_rate(f: SingularFunction, basis: Basis, m: int = 0) -> RatePrediction:
    """Rate of ||f - P_N f|| in L^2_w (m = 0) or the weighted H^m norm."""
    if not (isinstance(m, (int, np.integer)) and m >= 0):
        raise DomainError("m must be a non-negative integer")
    a, b, _, tag = _basis_kind(basis)
    app = "ProjectionL2" if m == 0 else f"ProjectionSobolev({m})"
    if tag == "jac":
        src = "Thm4" if m == 0 else "Thm5"
    else:
        src = "Cor4" if m == 0 else "Cor5"
    preds = []
    for t in f.site_terms():
        if t.kind in ("right", "left"):
            w = a if t.kind == "right" else b
            g = "gamma" if t.kind == "right" else "delta"
            wn = "alpha" if t.kind == "right" else "beta"
            if not min(w + t.exponent, w + 2 * t.exponent) > m - 1:
                raise HypothesisViolated(f"min{{{wn}+{g},{wn}+2*{g}}}>m-1", f"{g}={t.exponent}, {wn}={w}, m={m}")
            if _is_nonneg_int(t.exponent):
                if t.log_power == 0:
                    continue
                mu = t.log_power - 1
            else:
                mu = t.log_power
            preds.append(RatePrediction(m - w - 2 * t.exponent - 1, mu, app, src))
        else:
            s, mu = t.exponent, t.log_power
            if not s > m - 0.5:
                raise HypothesisViolated("s>m-1/2", f"s={s}, m={m}")
            if not min(a, b) >= -0.5:
                raise HypothesisViolated("min{alpha,beta}>=-1/2", f"alpha={a}, beta={b}")
            if mu == 0 and _is_nonneg_int(s) and int(s) % 2 == 0:
                continue
            preds.append(RatePrediction(m - s - 0.5, mu, app, src))
    if not preds:
        return RatePrediction(SUPER_ALGEBRAIC, 0, app, "Rem8")
    if len(preds) == 1:
        return preds[0]
    return combine(preds, app, "Cor6")


def predict_bessel_rate(spec: OscIntegralSpec) -> RatePrediction:
    """omega-exponent and log power of the Bessel transform envelope."""
    if not spec.alpha + spec.nu > -1:
        raise HypothesisViolated("alpha+nu>-1")
    if not spec.beta > -1:
        raise HypothesisViolated("beta>-1")
    al, be, mu = spec.alpha, spec.beta, int(spec.mu)
    full = spec.t == spec.b
    app = "BesselTransform"
    if spec.log_site == "AtZero":
        if full:
            src = "Lem7"
            second = (-be - mu - 1.5, 0) if (spec.b == 1 and mu >= 1) else (-be - 1.5, 0)
        else:
            src = "Lem3" if be == 0 else "Lem5"
            second = (-1.5, 0) if (spec.b == 1 and mu >= 1) else (-min(be + 1.5, 1.5), 0)
        first = (-al - 1, mu)
    else:
        a_eff = al + mu if (spec.b == 1 and mu >= 1) else al
        first = (-a_eff - 1, 0)
        if full:
            src = "Lem9"
            second = (-be - 1.5, mu)
        else:
            src = "Lem8"
            second = (-min(be + 1.5, 1.5), mu)
    return combine([RatePrediction(*first, app, src), RatePrediction(*second, app, src)], app, src)


# }}}


# {{{ fitting


@dataclass(frozen=True)
class DecayFit:
    exponent: float
    amplitude: float
    log_power_used: int
    residual_rms: float
    window: tuple[float, float]
    n_used: int = 0
    n_excluded: int = 0


def _as_arrays(samples) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(samples, tuple) and len(samples) == 2 and np.ndim(samples[0]) == 1:
        n, a = samples
    else:
        arr = np.asarray(list(samples), dtype=float)
        if arr.size == 0:
            return np.empty(0), np.empty(0)
        n, a = arr[:, 0], arr[:, 1]
    return np.asarray(n, dtype=float), np.abs(np.asarray(a, dtype=float))


def fit_decay(samples, log_power: int = 0, window: Sequence[float] = (100, 1000)) -> DecayFit:
    """Least squares for ln|a| = ln c + p ln n + m ln ln n with m fixed.

    ``samples`` is a sequence of (n, magnitude) pairs or a pair of arrays.
    Zero, denormal and non-finite magnitudes are dropped and counted.
    """
    lo, hi = float(window[0]), float(window[1])
    if lo < 10:
        raise DomainError("fit windows must start at n >= 10")
    if not hi > lo:
        raise DomainError("empty fit window")
    if log_power < 0 or int(log_power) != log_power:
        raise DomainError("log power must be a non-negative integer")
    n, a = _as_arrays(samples)
    inwin = (n >= lo) & (n <= hi)
    good = inwin & np.isfinite(a) & (a >= np.finfo(float).tiny)
    excluded = int(np.count_nonzero(inwin & ~good))
    if np.count_nonzero(good) < 8:
        raise InsufficientData(f"need at least 8 usable samples in [{lo}, {hi}], got {np.count_nonzero(good)}")
    nn, aa = n[good], a[good]
    y = np.log(aa) - log_power * np.log(np.log(nn))
    X = np.column_stack([np.ones_like(nn), np.log(nn)])
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    resid = y - X @ coef
    return DecayFit(
        exponent=float(coef[1]),
        amplitude=float(math.exp(coef[0])),
        log_power_used=int(log_power),
        residual_rms=float(math.sqrt(np.mean(resid**2))),
        window=(lo, hi),
        n_used=int(nn.size),
        n_excluded=excluded,
    )


def block_envelope(samples, block: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-block maxima of |a| over consecutive blocks of ``block`` samples.

    Oscillating sequences (interior singularities, Bessel transforms) are fit
    through these envelope points instead of every sample.
    """
    n, a = _as_arrays(samples)
    order = np.argsort(n, kind="stable")
    n, a = n[order], a[order]
    nb = n.size // block
    if nb == 0:
        return np.empty(0), np.empty(0)
    idx = [i * block + int(np.argmax(a[i * block : (i + 1) * block])) for i in range(nb)]
    return n[idx], a[idx]


def fit_tail_energy(energy: np.ndarray, noise: np.ndarray | None = None, block: int = 8) -> tuple[float, str]:
    """Extrapolate sum_{n >= L} e_n for e_n stored at n = 0..L-1.

    Fits block means of the last half to C n^q and integrates from L - 1/2.
    Returns (estimate, flag); estimate is inf when the fit does not decay fast
    enough for the sum to converge.
    """
    L = energy.size
    start = max(1, L // 2)
    e = energy[start:]
    nb = e.size // block
    if nb < 4:
        return 0.0, "short"
    e = e[e.size - nb * block :]
    n = np.arange(L - nb * block, L, dtype=float)
    means = e.reshape(nb, block).mean(axis=1)
    centers = n.reshape(nb, block).mean(axis=1)
    if noise is not None:
        nz = noise[L - nb * block :].reshape(nb, block).mean(axis=1)
        above = means > nz
        if np.count_nonzero(above) < max(4, nb // 2):
            return 0.0, "noise-floor"
    keep = means > 0
    if np.count_nonzero(keep) < 4:
        return 0.0, "noise-floor"
    q, lnC = np.polyfit(np.log(centers[keep]), np.log(means[keep]), 1)
    if q >= -1:
        return math.inf, "non-decaying"
    return float(math.exp(lnC) * (L - 0.5) ** (q + 1) / (-q - 1)), "extrapolated"


# }}}


# {{{ Hilb residual scan


@dataclass(frozen=True)
class ThetaGrid:
    """theta grid on [lo, hi]; defaults to the validity strip [c/n, pi - eps]."""

    c: float = 2.0
    eps: float = 0.3
    points: int = 2000
    lo: float | None = None
    hi: float | None = None

    def nodes(self, n: int) -> np.ndarray:
        lo = self.c / n if self.lo is None else self.lo
        hi = math.pi - self.eps if self.hi is None else self.hi
        if lo < self.c / n * (1 - 1e-12) or hi > math.pi - self.eps + 1e-12 or not lo < hi:
            raise HypothesisViolated("c/n <= theta <= pi-eps", f"grid [{lo}, {hi}] for n={n}")
        return np.linspace(lo, hi, self.points)


def hilb_residual_scan(p, n_list: Sequence[int], grid: ThetaGrid | None = None) -> list[tuple[int, float]]:
    """(n, max over the grid of |w (P_n - hilb)| Nt^{3/2} theta^{-1/2}).

    w is the weight theta^{-1/2} sin^{a+1/2}(theta/2) cos^{b+1/2}(theta/2).
    Each theta is replaced by arccos(fl(cos theta)) so that P_n and the main
    term see the same point.  Differences below a rounding floor
    50 (n+10) eps max|P_n| are treated as zero; for alpha = beta = -1/2 the
    main term is exact and only rounding remains.
    """
    if not isinstance(p, JacobiParams):
        p = JacobiParams(*p)
    grid = grid or ThetaGrid()
    a, b = p.alpha, p.beta
    eps = np.finfo(float).eps
    out = []
    for n in n_list:
        x = np.cos(grid.nodes(int(n)))
        th = np.arccos(x)
        Pn = jacobi_p(int(n), p, x)
        H = hilb_main_term(int(n), p, th)
        w = th**-0.5 * np.sin(th / 2) ** (a + 0.5) * np.cos(th / 2) ** (b + 0.5)
        floor = 50 * (n + 10) * eps * np.max(np.abs(Pn))
        diff = np.maximum(np.abs(Pn - H) - floor, 0.0)
        Nt = n + 0.5 * (a + b + 1)
        scaled = diff * w * Nt**1.5 * th**-0.5
        out.append((int(n), float(np.max(scaled))))
    return out


# }}}
