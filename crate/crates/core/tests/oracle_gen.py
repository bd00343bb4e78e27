"""Regenerates the frozen reference values used by the Rust test suites.

Every value here comes from mpmath at high working precision through a route
that does not share code or algorithms with the crate:

* Mittag-Leffler values: direct power series summed with enough digits to
  absorb the cancellation, or closed forms (exp, exp(x^2)erfc(x)).
* Extended beta values: mpmath tanh-sinh quadrature at 40 digits with the
  exact kernel.
* Series constants: mpmath polylog / zeta / nsum.

Run with `python3 oracle_gen.py` and paste the printed tables into the tests.
"""

import mpmath as mp


def ml_series(lam, z, dps):
    with mp.workdps(dps):
        lam = mp.mpf(lam)
        z = mp.mpf(z)
        s = mp.mpf(0)
        n = 0
        tiny = mp.mpf(10) ** (-(dps - 10))
        small = 0
        while True:
            t = z**n / mp.gamma(lam * n + 1)
            s += t
            if abs(t) < tiny * max(abs(s), mp.mpf(1e-300)):
                small += 1
                if small >= 3:
                    break
            else:
                small = 0
            n += 1
        return s


def ml(lam, z):
    lam = mp.mpf(lam)
    if lam == 1:
        return mp.exp(z)
    if lam == mp.mpf("0.5") and z <= 0:
        x = -mp.mpf(z)
        if x > 50:
            # exp(x^2) erfc(x) ~ 1/(x sqrt(pi)) * sum (-1)^k (2k-1)!! / (2x^2)^k
            s, term = mp.mpf(1), mp.mpf(1)
            for k in range(1, 30):
                term *= -(2 * k - 1) / (2 * x * x)
                s += term
            return s / (x * mp.sqrt(mp.pi))
        return mp.exp(x * x) * mp.erfc(x)
    x = abs(mp.mpf(z))
    t = x ** (1 / lam) if x > 0 else 0
    digits = int(t / 2.3) + 40
    return ml_series(lam, z, max(digits, 40))


def main():
    mp.mp.dps = 40
    print("// log_gamma")
    for x in ["0.5", "1e-8", "0.1", "0.9", "1.1", "1.5", "1.9999", "2.3", "3.7", "7.5", "12.25", "33.3", "171.5", "1000.5"]:
        print(f"({x}, {mp.nstr(mp.loggamma(mp.mpf(x)), 20)}),")

    print("// Mittag-Leffler")
    cases = [
        ("0.3", "-1"), ("0.3", "-3"), ("0.3", "-5"),
        ("0.5", "-1"), ("0.5", "-3"), ("0.5", "-7"), ("0.5", "-10"), ("0.5", "-30"),
        ("0.7", "-2"), ("0.7", "-8"), ("0.7", "-15"), ("0.7", "-40"),
        ("0.9", "-5"), ("0.9", "-12"), ("0.9", "-30"),
        ("0.99", "-3"), ("0.99", "-12"), ("0.99", "-25"),
        ("1.3", "-4"), ("1.3", "-20"), ("1.3", "-60"),
        ("1.5", "-2"), ("1.5", "-10"), ("1.5", "-50"), ("1.5", "-100"),
        ("1.9", "-5"), ("1.9", "-30"), ("1.9", "-200"),
        ("0.5", "0.5"), ("0.7", "1"), ("1.5", "1"),
    ]
    for lam, z in cases:
        print(f"({lam}, {z}, {mp.nstr(ml(lam, mp.mpf(z)), 20)}),")

    print("// Mittag-Leffler far field")
    for lam, z in [("0.5", "-1e4"), ("1.5", "-1e4"), ("0.3", "-1e3"), ("0.7", "-1e3")]:
        lamf = mp.mpf(lam)
        x = -mp.mpf(z)
        if lam == "0.5":
            v = ml(lam, mp.mpf(z))
        else:
            # Laplace-type spectral integral, evaluated with mpmath's own quadrature.
            th = mp.pi * lamf
            f = lambda u: mp.exp(-(x * u) ** (1 / lamf)) / (u * u + 2 * u * mp.cos(th) + 1)
            v = mp.sin(th) / (mp.pi * lamf) * mp.quad(f, [0, 1, mp.inf])
            if lamf > 1:
                tt = x ** (1 / lamf)
                v += 2 / lamf * mp.exp(tt * mp.cos(mp.pi / lamf)) * mp.cos(tt * mp.sin(mp.pi / lamf))
        print(f"({lam}, {z}, {mp.nstr(v, 20)}),")

    print("// ML Mellin closed form")
    for r, lam in [("0.5", "0.5"), ("0.3", "1")]:
        r = mp.mpf(r); lam = mp.mpf(lam)
        print(mp.nstr(mp.gamma(r) * mp.gamma(1 - r) / mp.gamma(1 - r * lam), 20))

    print("// extended beta")
    def eb(x, y, p, lam):
        x, y, p = mp.mpf(x), mp.mpf(y), mp.mpf(p)
        def f(t):
            if t <= 0 or t >= 1:
                return mp.mpf(0)
            arg = -p / (t * (1 - t))
            return t ** (x - 1) * (1 - t) ** (y - 1) * ml(lam, arg)
        return mp.quad(f, [0, mp.mpf("0.5"), 1])
    for args in [("1.5", "2.5", "0.5", "1"), ("1.5", "2.5", "0.5", "0.5"), ("1", "1", "1", "1"),
                 ("0.7", "3", "0.1", "1"), ("3", "0.7", "5", "1"), ("2", "3", "1", "0.5"), ("0.7", "1.5", "0.1", "0.5")]:
        print(args, mp.nstr(eb(*args), 20))

    print("// infinite form (x=y=1, p=1, lambda=1)")
    g = lambda x: (1 + x) ** -2 * mp.exp(-(2 + x + 1 / x))
    print(mp.nstr(mp.quad(g, [0, 1, mp.inf]), 20))

    print("// series constants")
    print("Li3(1/2)/(1/2)", mp.nstr(mp.polylog(3, 0.5) / 0.5, 20))
    print("Li2(1/2)/(1/2)", mp.nstr(mp.polylog(2, 0.5) / 0.5, 20))
    print("zeta3", mp.nstr(mp.zeta(3), 20), "zeta4", mp.nstr(mp.zeta(4), 20))
    # Phi_{1,1.5;3}(0.5, 2, 1) classical Garg series
    gs = mp.nsum(lambda n: mp.rf(1, n) * mp.rf(mp.mpf("1.5"), n) / (mp.rf(3, n) * mp.factorial(n)) * mp.mpf("0.5") ** n / (n + 1) ** 2, [0, mp.inf])
    print("Garg Phi_{1,1.5;3}(0.5,2,1)", mp.nstr(gs, 20))
    pref = mp.sqrt(mp.pi) * mp.beta(1.5, 1.5)
    print("mellin prefactor", mp.nstr(pref, 20), "rhs", mp.nstr(pref * gs, 20))
    # Case 2 reference: theta = 1/2, a = 1, sigma = 2, z = 1/2, p = 0
    c2 = mp.nsum(lambda n: mp.rf(mp.mpf("0.5"), n) / mp.factorial(n) * mp.mpf("0.5") ** n / (n + 1) ** 2, [0, mp.inf])
    print("case2", mp.nstr(c2, 20))


if __name__ == "__main__":
    main()
