"""Extended-precision reference values frozen into the unit tests.

Run with: python3 tests/oracles/specfun_oracles.py
"""
import mpmath as mp

mp.mp.dps = 50


def psi(alpha):
    a = mp.mpf(alpha)
    z = mp.sqrt(2) / a
    return 2 + 4 / a**2 - (mp.sqrt(2 * mp.pi) / a) * mp.erfc(z) * mp.exp(z**2)


def chi2_cdf(x, m):
    return mp.gammainc(mp.mpf(m) / 2, 0, mp.mpf(x) / 2, regularized=True)


def chi2_pdf(x, m):
    x = mp.mpf(x)
    k = mp.mpf(m) / 2
    return mp.exp((k - 1) * mp.log(x / 2) - x / 2 - mp.loggamma(k)) / 2


def nc_cdf(x, m, lam):
    lam = mp.mpf(lam)
    return mp.nsum(lambda j: mp.exp(-lam / 2) * (lam / 2) ** j / mp.factorial(j) * chi2_cdf(x, m + 2 * j), [0, mp.inf])


def nc_pdf(x, m, lam):
    lam = mp.mpf(lam)
    return mp.nsum(lambda j: mp.exp(-lam / 2) * (lam / 2) ** j / mp.factorial(j) * chi2_pdf(x, m + 2 * j), [0, mp.inf])


def erf_series(x, terms=60):
    x = mp.mpf(x)
    s = sum((-1) ** k * x ** (2 * k + 1) / (mp.factorial(k) * (2 * k + 1)) for k in range(terms))
    return 2 / mp.sqrt(mp.pi) * s


print("erf(1)       ", mp.nstr(erf_series(1), 20))
print("erf(0.5)     ", mp.nstr(erf_series(0.5), 20))
print("psi(sqrt2)   ", mp.nstr(psi(mp.sqrt(2)), 20))
print("psi(0.1)     ", mp.nstr(psi(0.1), 20))
print("psi(2)       ", mp.nstr(psi(2), 20))
print("psi(0.5)     ", mp.nstr(psi(0.5), 20))
print("psi(0.01)    ", mp.nstr(psi(0.01), 20))
print("erfcx(3)     ", mp.nstr(mp.erfc(3) * mp.exp(9), 20))
print("erfcx(30)    ", mp.nstr(mp.erfc(30) * mp.exp(900), 20))
print("erfcx(0.7)   ", mp.nstr(mp.erfc(0.7) * mp.exp(0.49), 20))
q = mp.findroot(lambda x: chi2_cdf(x, 1) - mp.mpf("0.95"), 3.8)
print("chi2q(.95,1) ", mp.nstr(q, 20))
q2 = mp.findroot(lambda x: chi2_cdf(x, 2) - mp.mpf("0.95"), 6)
print("chi2q(.95,2) ", mp.nstr(q2, 20))
print("G(3;5,4)     ", mp.nstr(nc_cdf(3, 5, 4), 20))
print("G(3;7,4)     ", mp.nstr(nc_cdf(3, 7, 4), 20))
print("g(3;7,4)     ", mp.nstr(nc_pdf(3, 7, 4), 20))
print("G(10;3,10)   ", mp.nstr(nc_cdf(10, 3, 10), 20))
print("g(5;7,2)     ", mp.nstr(nc_pdf(5, 7, 2), 20))
print("power(l=4,df=2,.05)", mp.nstr(1 - nc_cdf(q2, 2, 4), 20))

# reduced alpha-test coefficients at alpha0=0.5, eps=0.1, n=50, p=3
a, e, n, p = mp.mpf("0.5"), mp.mpf("0.1"), 50, 3
ps = psi(a)
t = 2 * p * (2 + a**2) * e / (a**3 * ps)
c = n * e**3 / a**3
b = {
    (1, 1): -3 * c - t, (1, 2): 4 * c / 3, (1, 3): 0,
    (2, 1): -3 * c + 5 * e / (2 * a) - t, (2, 2): 3 * c - 5 * e / (2 * a), (2, 3): -5 * c / 3,
    (3, 1): -3 * c - 2 * e / a - t, (3, 2): 2 * e / a, (3, 3): 4 * c / 3,
    (4, 1): -3 * c - 5 * e / (4 * a) - t, (4, 2): 5 * e / (4 * a) + c / 2, (4, 3): 5 * c / 6,
}
for i in range(1, 5):
    row = [b[(i, k)] for k in (1, 2, 3)]
    print("b%d" % i, mp.nstr(-sum(row), 20), *[mp.nstr(v, 20) for v in row])
