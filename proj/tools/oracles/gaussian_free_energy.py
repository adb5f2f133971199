"""Genus-2 and genus-3 Gaussian free energies from ln G(N+1) = ln prod_{k<N} k!.

The remainder after the N^2, N, ln N and constant terms is fitted in 1/N^2 by
Richardson extrapolation. The acceptance binary freezes the printed values.
"""
import json
from fractions import Fraction

import mpmath as mp

mp.mp.dps = 60


def remainder(n):
    n = mp.mpf(n)
    head = n**2 / 2 * mp.log(n) - 3 * n**2 / 4 + n / 2 * mp.log(2 * mp.pi) - mp.log(n) / 12 + mp.zeta(-1, derivative=1)
    return mp.log(mp.barnesg(n + 1)) - head


def richardson(f, ns, powers):
    # eliminate the listed powers of 1/N^2 from f(N)
    vals = [f(n) for n in ns]
    for p in powers:
        ratio = [(ns[i + 1] / ns[i]) ** (2 * p) for i in range(len(ns) - 1)]
        vals = [(ratio[i] * vals[i + 1] - vals[i]) / (ratio[i] - 1) for i in range(len(vals) - 1)]
        ns = ns[1:]
    return vals[-1]


ns = [mp.mpf(n) for n in (200, 400, 800, 1600, 3200, 6400)]
f2 = richardson(lambda n: n**2 * remainder(n), ns, [1, 2, 3, 4])
f3 = richardson(lambda n: n**4 * (remainder(n) - f2 / n**2), ns, [1, 2, 3])
print(json.dumps({
    "F2": mp.nstr(f2, 20),
    "F2_fraction": str(Fraction(mp.nstr(f2, 30)).limit_denominator(10**5)),
    "F3": mp.nstr(f3, 20),
    "F3_fraction": str(Fraction(mp.nstr(f3, 30)).limit_denominator(10**5)),
}, indent=2))
