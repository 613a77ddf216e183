"""Recompute the frozen reference values used by the test suite.

Everything here uses mpmath at 30 significant digits and never imports the
package, so the numbers are independent of the code they check. Run with
``python3 scripts/derive_oracles.py``.
"""
import mpmath as mp

mp.mp.dps = 30


def db(x):
    return mp.mpf(10) ** (mp.mpf(x) / 10)


def xi(m, m_s, gbar):
    return mp.mpf(m) / (m_s * gbar)


def pdf(m, m_s, gbar, g):
    x = xi(m, m_s, gbar)
    return x**m / mp.beta(m, m_s) * g ** (m - 1) * (1 + x * g) ** (-(m + m_s))


def cdf(m, m_s, gbar, g):
    x = xi(m, m_s, gbar) * g
    return mp.betainc(m, m_s, 0, x / (1 + x), regularized=True)


def integral(f, m, m_s, gbar):
    """int_0^inf f(g) pdf(g) dg on a log scale."""
    c = -mp.log(xi(m, m_s, gbar))
    return mp.quad(lambda u: f(mp.e**u) * pdf(m, m_s, gbar, mp.e**u) * mp.e**u,
                   [-mp.inf, c - 10, c, c + 10, mp.inf])


def main():
    out = {}
    out["log_gamma(10.3)"] = mp.loggamma(mp.mpf("10.3"))
    out["beta(2.5, 5)"] = mp.beta(2.5, 5)
    out["2F1(7.5, 2.5; 3.5; -0.8)"] = mp.hyp2f1(7.5, 2.5, 3.5, -0.8)
    out["pdf(2.5, 5, 3.1623; 2)"] = pdf(2.5, 5, mp.mpf("3.1623"), 2)
    out["cdf(2.5, 5, 3.1623; 2) via quad"] = mp.quad(lambda g: pdf(2.5, 5, mp.mpf("3.1623"), g), [0, 2])
    out["nakagami(2.5, 2; 1.3)"] = (mp.mpf(2.5) ** 2.5 * mp.mpf(1.3) ** 1.5 * mp.e ** (-2.5 * 1.3 / 2)
                                    / (mp.gamma(2.5) * 2 ** 2.5))
    # E[ln(1 + g)] with m = 1.5, m_s = 2.5 and Xi = 0.3
    gbar_i3 = mp.mpf(1.5) / (2.5 * mp.mpf("0.3"))
    out["I3(m=1.5, m_s=2.5, Xi=0.3)"] = integral(lambda g: mp.log1p(g), 1.5, 2.5, gbar_i3)

    d, e = (2.5, 5, db(10)), (1, 2, db(5))
    out["I1 (2.5,5,10dB | 1,2,5dB)"] = integral(lambda g: mp.log1p(g) * cdf(*e, g), *d)
    out["I2 (2.5,5,10dB | 1,2,5dB)"] = integral(lambda g: mp.log1p(g) * cdf(*d, g), *e)
    out["ASC (2.5,5,10dB | 1,2,5dB)"] = (out["I1 (2.5,5,10dB | 1,2,5dB)"] + out["I2 (2.5,5,10dB | 1,2,5dB)"]
                                         - integral(lambda g: mp.log1p(g), *e))
    theta = mp.e
    out["SOP (2.5,5,10dB | 1,2,5dB), theta=e"] = integral(lambda g: cdf(*d, theta * g + theta - 1), *e)

    d, e = (2.5, 5, db(15)), (1.5, 2.5, db(5))
    out["SOP (2.5,5 | 1.5,2.5), lambda=10dB, R_s=1"] = integral(lambda g: cdf(*d, theta * g + theta - 1), *e)
    out["SOP^L (2.5,5 | 1.5,2.5), lambda=10dB, R_s=1"] = integral(lambda g: cdf(*d, theta * g), *e)

    d, e = (2.5, 5, db(15)), (0.5, 50, db(5))
    out["SPSC (2.5,5 | 0.5,50), lambda=10dB"] = integral(lambda g: 1 - cdf(*d, g), *e)

    for key, value in out.items():
        print(f"{key:48s} {mp.nstr(value, 20)}")


if __name__ == "__main__":
    main()
