"""Local decay slopes over successive windows, to see pre-asymptotic drift.

    python scripts/local_slopes.py "(1-x)^0.3*log^2(1-x)" legendre 8000

Fits |a_n| in windows [n, 2n] with the predicted log power and prints the
fitted exponent next to the prediction.
"""

from __future__ import annotations

import sys

import numpy as np

from singspec.asymp import block_envelope, fit_decay, predict_coeff_decay
from singspec.descr import parse
from singspec.expand import Basis, coefficients


def main(src: str, basis: str, N: int) -> None:
    f, b = parse(src), Basis.parse(basis)
    pred = predict_coeff_decay(f, b)
    a = np.abs(coefficients(f, b, N).values)
    n = np.arange(N + 1, dtype=float)
    lo = 100
    print(f"predicted exponent {pred.exponent} log power {pred.log_power}")
    while 2 * lo <= N:
        sel = (n >= lo) & (n <= 2 * lo)
        ne, ae = block_envelope((n[sel], a[sel]), 10)
        fit = fit_decay((ne, ae), pred.log_power, (lo, 2 * lo))
        print(f"[{lo:6d}, {2 * lo:6d}]  {fit.exponent:8.4f}")
        lo *= 2


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2], int(sys.argv[3]) if len(sys.argv) > 3 else 4000)
