"""One-off arbitrary-precision oracle run.

Prints the reference values frozen in tests/oracles.py.  Needs mpmath; the
library itself never imports it.

    python scripts/oracle_values.py > /tmp/oracles.txt
"""

from __future__ import annotations

import mpmath as mp

mp.mp.dps = 30


def jacobi_quad_norm(n, a, b):
    f = lambda x: (1 - x) ** a * (1 + x) ** b * mp.jacobi(n, a, b, x) ** 2
    return mp.quad(f, [-1, 0, 1])


def gegenbauer_quad_norm(n, lam):
    f = lambda x: (1 - x * x) ** (lam - mp.mpf(1) / 2) * mp.gegenbauer(n, lam, x) ** 2
    return mp.quad(f, [-1, 0, 1])


def coeff(fun, n, a, b):
    """a_n of fun in Jacobi(a, b) by tanh-sinh quadrature."""
    w = lambda x: (1 - x) ** a * (1 + x) ** b
    num = mp.quad(lambda x: w(x) * mp.jacobi(n, a, b, x) * fun(x), mp.linspace(-1, 1, 9))
    return num / jacobi_quad_norm(n, a, b)


def cheb_coeff(fun, n):
    # c_n = (2/pi) int_0^pi f(cos t) cos(n t) dt
    v = mp.quad(lambda t: fun(mp.cos(t)) * mp.cos(n * t), mp.linspace(0, mp.pi, 9))
    return (1 if n == 0 else 2) * v / mp.pi


def bessel_transform(alpha, beta, mu, nu, b, log_site, omega):
    b = mp.mpf(b)

    def f(x):
        lg = mp.log(x) if log_site == "AtZero" else mp.log(b - x)
        return lg**mu * x**alpha * (b - x) ** beta * mp.cos(x) * mp.besselj(nu, omega * x)

    pts = mp.linspace(0, b, int(omega * b / mp.pi * 4) + 3)
    return mp.quad(f, pts)


def main():
    out = {}
    out["ln_gamma_10.3"] = mp.loggamma(mp.mpf("10.3"))
    out["ln_gamma_1e-5"] = mp.loggamma(mp.mpf("1e-5"))
    out["ln_gamma_2.5"] = mp.loggamma(mp.mpf("2.5"))
    out["ln_gamma_123456.7"] = mp.loggamma(mp.mpf("123456.7"))
    out["jacobi_norm_7_-0.5_-0.5"] = jacobi_quad_norm(7, -0.5, -0.5)
    out["gegenbauer_norm_10_1.5"] = gegenbauer_quad_norm(10, 1.5)
    out["bessel_j_2.7_37.4"] = mp.besselj(mp.mpf("2.7"), mp.mpf("37.4"))
    for nu, x in [(0, 5), (0.3, 13.1), (1, 16.5), (10, 30), (30.5, 29), (60, 48.5), (60, 90), (-0.5, 3), (2.7, 4000)]:
        out[f"bessel_j_{nu}_{x}"] = mp.besselj(mp.mpf(nu), mp.mpf(x))
    out["jacobi_p_100_0.3_1.2_0.41"] = mp.jacobi(100, mp.mpf("0.3"), mp.mpf("1.2"), mp.mpf("0.41"))
    out["jacobi_a10_sqrt_log"] = coeff(lambda x: mp.sqrt(1 - x) * mp.log(1 - x), 10, 0, 0)
    out["cheb_c7_pow03_sin"] = cheb_coeff(lambda x: (1 - x) ** mp.mpf("0.3") * mp.sin(x), 7)
    out["jacobi_a5_interior"] = coeff(
        lambda x: abs(x - mp.mpf("0.5")) ** mp.mpf("0.5") * mp.log(abs(x - mp.mpf("0.5"))) * mp.cos(x), 5, 1, 2
    )
    out["geg_a4_lam1_pow07_log"] = None  # filled below
    lam = 1
    fun = lambda x: (1 + x) ** mp.mpf("0.7") * mp.log(1 + x)
    num = mp.quad(lambda x: (1 - x * x) ** (lam - 0.5) * mp.gegenbauer(4, lam, x) * fun(x), mp.linspace(-1, 1, 9))
    out["geg_a4_lam1_pow07_log"] = num / gegenbauer_quad_norm(4, lam)
    for cfg in [
        (-0.5, 0, 1, 0, 0.5, "AtZero"),
        (0, 1, 1, 0, 0.5, "AtZero"),
        (2, -0.5, 1, 0, 0.5, "AtZero"),
        (-0.5, 0.5, 1, 0, 0.5, "AtB"),
        (0, 1.5, 1, 0, 0.5, "AtB"),
        (2, -0.5, 1, 0, 0.5, "AtB"),
    ]:
        for om in (10, 100, 1000):
            out[f"bt_{cfg}_{om}"] = bessel_transform(*cfg, om)
    for k, v in out.items():
        print(f"{k!r}: {mp.nstr(v, 20)!s},")


if __name__ == "__main__":
    main()
