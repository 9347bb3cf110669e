#!/usr/bin/env python3
"""Generate Taylor coefficients (in x = p - 1/2) of the Riemann-Siegel
remainder functions C0..C4 used by src/zeta/riemann_siegel.cpp.

Psi(p) = cos(2 pi (p^2 - p - 1/16)) / cos(2 pi p) = -cos(2 pi x^2 - 5 pi / 8) / cos(2 pi x)

C0 = Psi
C1 = -Psi'''/(96 pi^2)
C2 = Psi''/(64 pi^2) + Psi^(6)/(18432 pi^4)
C3 = -Psi'/(64 pi^2) - Psi^(5)/(3840 pi^4) - Psi^(9)/(5308416 pi^6)
C4 = Psi/(128 pi^2) + 19 Psi^(4)/(24576 pi^4) + 11 Psi^(8)/(5898240 pi^6)
     + Psi^(12)/(2038431744 pi^8)
"""
import mpmath as mp

mp.mp.dps = 60
NTERMS = 90


def series_mul(a, b):
    out = [mp.mpf(0)] * NTERMS
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j in range(NTERMS - i):
            out[i + j] += ai * b[j]
    return out


def series_div(a, b):
    out = [mp.mpf(0)] * NTERMS
    for n in range(NTERMS):
        s = a[n] - sum(out[k] * b[n - k] for k in range(n))
        out[n] = s / b[0]
    return out


def cos_series(scale, power):
    # cos(scale * x^power)
    out = [mp.mpf(0)] * NTERMS
    j = 0
    while power * 2 * j < NTERMS:
        out[power * 2 * j] = (-1) ** j * scale ** (2 * j) / mp.factorial(2 * j)
        j += 1
    return out


def sin_series(scale, power):
    out = [mp.mpf(0)] * NTERMS
    j = 0
    while power * (2 * j + 1) < NTERMS:
        out[power * (2 * j + 1)] = (-1) ** j * scale ** (2 * j + 1) / mp.factorial(2 * j + 1)
        j += 1
    return out


def deriv(a, times):
    out = list(a)
    for _ in range(times):
        out = [out[i + 1] * (i + 1) for i in range(len(out) - 1)] + [mp.mpf(0)]
    return out


def add(*terms):
    out = [mp.mpf(0)] * NTERMS
    for coef, s in terms:
        for i in range(NTERMS):
            out[i] += coef * s[i]
    return out


pi = mp.pi
c58, s58 = mp.cos(5 * pi / 8), mp.sin(5 * pi / 8)
num = add((c58, cos_series(2 * pi, 2)), (s58, sin_series(2 * pi, 2)))
den = add((-1, cos_series(2 * pi, 1)))
psi = series_div(num, den)

C = [
    psi,
    add((-1 / (96 * pi**2), deriv(psi, 3))),
    add((1 / (64 * pi**2), deriv(psi, 2)), (1 / (18432 * pi**4), deriv(psi, 6))),
    add((-1 / (64 * pi**2), deriv(psi, 1)), (-1 / (3840 * pi**4), deriv(psi, 5)),
        (-1 / (5308416 * pi**6), deriv(psi, 9))),
    add((1 / (128 * pi**2), psi), (19 / (24576 * pi**4), deriv(psi, 4)),
        (11 / (5898240 * pi**6), deriv(psi, 8)), (1 / (2038431744 * pi**8), deriv(psi, 12))),
]


if __name__ == "__main__":
    print("// Generated by tools/gen_rs_coefficients.py. Do not edit.")
    print("// C_k(z) = z^(k mod 2) * sum_j coeff[k][j] * z^(2j), z = 2p - 1.")
    for k, s in enumerate(C):
        zs = [s[i] / mp.mpf(2) ** i for i in range(NTERMS)]
        par = k % 2
        vals = [zs[i] for i in range(par, NTERMS, 2)]
        last = max(j for j, v in enumerate(vals) if abs(v) > mp.mpf(10) ** -20)
        body = ",\n    ".join(format(float(v), ".17g") for v in vals[: last + 1])
        print(f"inline constexpr double kRsC{k}[] = {{\n    {body}}};")
