#!/usr/bin/env python3
"""Regenerate the frozen reference values used by the C++ test suites.

Evaluates the closed-form solutions of the trigonometric Rosen-Morse model
with mpmath at 40-digit working precision and prints them as C++ literals
(12 significant digits). The two-term forms are evaluated on the same
slightly-inset circle |z| = 1 - 1e-12 the library uses, so the printed
values are directly comparable at tolerances well below 1e-10.

Requires: python3, mpmath.  Usage: python3 tools/make_reference.py
"""

import mpmath as mp

mp.mp.dps = 40

INSET = mp.mpf("1e-12")


def exponents(a, b, E):
    s = mp.sqrt(E + mp.sqrt(E * E + b * b))
    return 2 * b / s, 1 - s  # mu, nu


def kappa_L(a, mu, nu):
    return (mp.gamma(2 * a + 2) * mp.gamma(1 - nu - 1j * mu / 2)
            / (mp.gamma(a + 1 - 1j * mu / 2) * mp.gamma(a + 2 - nu)))


def rho_L(a, mu, nu):
    return ((1j / 2) ** (2 * a + 1) * mp.gamma(2 * a + 2)
            * mp.gamma(nu - 1 + 1j * mu / 2)
            / (mp.gamma(a + 1 + 1j * mu / 2) * mp.gamma(a + nu)))


def kappa_R(a, mu, nu):
    lead = mp.gamma(nu - 1j * mu / 2) * mp.gamma(1 - nu + 1j * mu / 2)
    br = (mp.e ** (mu * mp.pi / 2) / (mp.gamma(a + 1 + 1j * mu / 2) * mp.gamma(-a - 1j * mu / 2))
          + mp.e ** (-1j * nu * mp.pi) / (mp.gamma(a + nu) * mp.gamma(1 - a - nu)))
    return lead * kappa_L(a, mu, nu) * br


def rho_R(a, mu, nu):
    lead = mp.gamma(nu - 1j * mu / 2) * mp.gamma(1 - nu + 1j * mu / 2)
    br = (mp.e ** (-mu * mp.pi / 2) / (mp.gamma(a + 1 - 1j * mu / 2) * mp.gamma(-a + 1j * mu / 2))
          + mp.e ** (1j * nu * mp.pi) / (mp.gamma(a + 2 - nu) * mp.gamma(nu - a - 1)))
    return -lead * rho_L(a, mu, nu) * br


def psi_L_single(a, b, E, x):
    mu, nu = exponents(a, b, E)
    z = 1 - mp.e ** (-2j * x)
    return (mp.e ** (-(mu / 2 + 1j * (nu + a)) * x) * mp.sin(x) ** (a + 1)
            * mp.hyp2f1(nu + a, a + 1 - 1j * mu / 2, 2 * a + 2, z))


def psi_R_single(a, b, E, x):
    mu, nu = exponents(a, b, E)
    z = 1 - mp.e ** (2j * x)
    pe = -mu / 2 + 1j * (nu + a)
    return (mp.e ** (-pe * mp.pi) * mp.e ** (pe * x) * mp.sin(x) ** (a + 1)
            * mp.hyp2f1(nu + a, a + 1 + 1j * mu / 2, 2 * a + 2, z))


def two_term(a, b, E, x, kap, rho):
    mu, nu = exponents(a, b, E)
    z = (1 - INSET) * mp.e ** (2j * x)
    F1 = mp.hyp2f1(nu + a, a + 1 + 1j * mu / 2, nu + 1j * mu / 2, z)
    F2 = mp.hyp2f1(1 - nu - a, -a - 1j * mu / 2, 2 - nu - 1j * mu / 2, z)
    t1 = kap * mp.e ** ((-mu / 2 + 1j * (nu + a)) * x) * mp.sin(x) ** (a + 1) * F1
    t2 = rho * mp.e ** ((mu / 2 + 1j * (1 - nu - a)) * x) * mp.sin(x) ** (-a) * F2
    return t1 + t2


def psi_L(a, b, E, x):
    mu, nu = exponents(a, b, E)
    if x < mp.mpf("0.25"):
        return psi_L_single(a, b, E, x)
    return two_term(a, b, E, x, kappa_L(a, mu, nu), rho_L(a, mu, nu))


def psi_R(a, b, E, x):
    mu, nu = exponents(a, b, E)
    if x > mp.pi - mp.mpf("0.25"):
        return psi_R_single(a, b, E, x)
    return two_term(a, b, E, x, kappa_R(a, mu, nu), rho_R(a, mu, nu))


def bound_raw(a, b, n, x):
    s = n + 1 + a
    z = 1 - mp.e ** (-2j * x)
    return (mp.e ** ((-b / s + 1j * n) * x) * mp.sin(x) ** (a + 1)
            * mp.hyp2f1(-n, a + 1 - 1j * b / s, 2 * a + 2, z))


def lit(v):
    return mp.nstr(mp.mpf(v), 12, strip_zeros=False)


def cpair(name, fn, x):
    v = fn(x)
    d = mp.diff(fn, x)
    print(f"  // {name} at x = {lit(x)}")
    print(f"  {{{lit(x)}, {lit(v.real)}, {lit(d.real)}}},  // Im/|v| = {mp.nstr(abs(v.imag)/abs(v), 3)}")


def main():
    a, b = mp.mpf(2), mp.mpf(50)
    E = mp.mpf(-200)

    print("// exponents at a=2, b=50, E=-200")
    mu, nu = exponents(a, b, E)
    print(f"//   mu = {lit(mu)}   nu = {lit(nu)}")

    print("\n// psi_L(E=-200) {x, value, derivative}:")
    for xq in ("0.1", "0.7", "1.3", "2.6"):
        cpair("psi_L", lambda t: psi_L(a, b, E, t), mp.mpf(xq))

    print("\n// psi_R(E=-200) {x, value, derivative}:")
    for xq in ("0.6", "2.2", "3.0"):
        cpair("psi_R", lambda t: psi_R(a, b, E, t), mp.mpf(xq))

    x0 = mp.mpf("1.0")
    wl = psi_L(a, b, E, x0)
    wld = mp.diff(lambda t: psi_L(a, b, E, t), x0)
    wr = psi_R(a, b, E, x0)
    wrd = mp.diff(lambda t: psi_R(a, b, E, t), x0)
    W = wl * wrd - wld * wr
    print(f"\n// Wronskian psi_L psi_R' - psi_L' psi_R at E=-200: {mp.nstr(W.real, 12)}")

    print("\n// bound-state normalization 1/sqrt(int |psi_n_raw|^2):")
    for n in (0, 1):
        nrm = mp.quad(lambda t: abs(bound_raw(a, b, n, t)) ** 2, [0, mp.pi])
        print(f"//   C_{n} = {mp.nstr(1 / mp.sqrt(nrm), 12)}")

    print("\n// raw (un-normalized) psi_0 values:")
    for xq in ("0.3", "1.0"):
        v = bound_raw(a, b, 0, mp.mpf(xq))
        print(f"//   psi0_raw({xq}) = {mp.nstr(v.real, 10)}")

    print("\n// complex energy E = -16.722 + 1i, psi_L at x=1.3 (value, derivative):")
    Ec = mp.mpc("-16.722", "1")
    mu, nu = exponents(a, b, Ec)
    fn = lambda t: two_term(a, b, Ec, t, kappa_L(a, mu, nu), rho_L(a, mu, nu))
    v = fn(mp.mpf("1.3"))
    d = mp.diff(fn, mp.mpf("1.3"))
    print(f"//   value = {mp.nstr(v.real, 12)} + {mp.nstr(v.imag, 12)} i")
    print(f"//   deriv = {mp.nstr(d.real, 12)} + {mp.nstr(d.imag, 12)} i")


if __name__ == "__main__":
    main()
