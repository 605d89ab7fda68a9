"""Regenerate the frozen oracle values used by the test suite.

Independent of the package: N0 from mpmath's elliptic K (AGM very close to
0), integrals by tanh-sinh quadrature split at the kernel's scales, roots by
mpmath.findroot.  Requires the ``oracle`` extra.
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass

from mpmath import ellipk, exp, findroot, mp, mpf, pi, quad, sqrt


@dataclass(frozen=True)
class OracleConfig:
    digits: int = 25


def n0(e):
    e = abs(mpf(e))
    if e >= 4 or e == 0:
        return mpf(0)
    if e < mpf("1e-3"):
        return 1 / (4 * pi * mp.agm(1, e / 4))
    return ellipk(1 - e * e / 16) / (2 * pi**2)


def integrate(f, a, b, extra=()):
    pts = sorted({mpf(a), mpf(b), *(mpf(p) for p in extra if a < p < b)})
    return quad(f, pts)


def tail(x):
    x = mpf(x)
    if x >= 4:
        return mpf(0)
    if x <= -4:
        return mpf(1)
    return integrate(n0, x, 4, [-1, 0, 1])


def kernel_inv_sqrt(b, d):
    return integrate(lambda e: n0(e) / sqrt(d * d + e * e), b, 4, [d, 1])


def kernel_sqrt(b, d):
    return integrate(lambda e: n0(e) * sqrt(d * d + e * e), b, 4, [d, 1])


def kernel_inv_32(b, d):
    return integrate(lambda e: n0(e) / (d * d + e * e) ** 1.5, b, 4, [d, 1])


def inv_eps_tail(b):
    return integrate(lambda e: n0(e) / e, b, 4, [1])


def gap(U):
    U = mpf(U)
    g0 = U / 2 if U > 5 else 32 * exp(-2 * pi / sqrt(U))
    return findroot(lambda d: kernel_inv_sqrt(0, d) - 1 / U, (g0 * mpf("0.9"), g0 * mpf("1.1")),
                    solver="illinois")


def b_plus_max(U):
    U = mpf(U)
    b0 = 16 * exp(-2 * pi / sqrt(U))
    return findroot(lambda b: inv_eps_tail(b) - 1 / U, (b0 * mpf("0.8"), b0 * mpf("1.2")),
                    solver="illinois")


def p_doping(U, mu, lo, hi):
    U, mu = mpf(U), mpf(mu)
    return findroot(lambda d: d - 1 + 2 * tail(mu - U * d / 2), (mpf(lo), mpf(hi)),
                    solver="illinois")


def af_half_filled_energy(U):
    d = gap(U)
    return d * d / U - 2 * kernel_sqrt(0, d)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--digits", type=int, default=OracleConfig.digits)
    cfg = OracleConfig(parser.parse_args().digits)
    mp.dps = cfg.digits
    out = {
        "n0": {e: n0(e) for e in (0.1, 1.0, 2.5, 3.9, 3.999)},
        "tail_mass": {x: tail(x) for x in (0.01, 0.5, 2.0, 3.5)},
        "kernel_inv_sqrt": {(0, 10): kernel_inv_sqrt(0, 10), (0.5, 1): kernel_inv_sqrt(0.5, 1),
                            (0, 0.01): kernel_inv_sqrt(0, mpf("0.01"))},
        "kernel_sqrt": {(0, 0.01): kernel_sqrt(0, mpf("0.01")), (1, 2): kernel_sqrt(1, 2)},
        "kernel_inv_32": {(1, 1): kernel_inv_32(1, 1),
                          (1e-3, 1e-3): kernel_inv_32(mpf("1e-3"), mpf("1e-3"))},
        "inv_eps_tail": {b: inv_eps_tail(mpf(b)) for b in ("1e-4", "0.5")},
        "gap_delta": {U: gap(U) for U in (20, 1, 0.5, 4, 30)},
        "b_plus_max": {U: b_plus_max(U) for U in (0.5, 1, 2)},
        "p_doping": {(40, 18): p_doping(40, 18, "0.6", "0.9"),
                     (8, 1): p_doping(8, 1, "0.01", "0.5")},
        "f_af_half_filled": {U: af_half_filled_energy(U) for U in (40, 0.5)},
    }
    for name, table in out.items():
        for key, value in table.items():
            print(f"{name}[{key}] = {float(value)!r}")


if __name__ == "__main__":
    main()
