"""Independent re-implementation of the log-likelihood and score.

Values printed here are frozen into test_model.cpp.
Run with: python3 tests/oracles/model_oracles.py
"""
import mpmath as mp

mp.mp.dps = 40

y = ["0.31", "-0.42", "1.05", "0.77", "-0.13", "0.58"]
X = [["1", "0.2", "1.5"], ["1", "0.9", "-0.3"], ["1", "0.4", "0.8"],
     ["1", "0.7", "0.1"], ["1", "0.1", "-1.2"], ["1", "0.5", "0.6"]]
beta = ["0.25", "-0.4", "0.3"]
alpha = mp.mpf("0.7")

y = [mp.mpf(v) for v in y]
X = [[mp.mpf(v) for v in row] for row in X]
beta = [mp.mpf(v) for v in beta]


def loglik(b, a):
    total = mp.mpf(0)
    for yi, xi in zip(y, X):
        r = yi - sum(x * bb for x, bb in zip(xi, b))
        xi1 = 2 / a * mp.cosh(r / 2)
        xi2 = 2 / a * mp.sinh(r / 2)
        total += mp.log(xi1) - xi2**2 / 2
    return total


print("loglik", mp.nstr(loglik(beta, alpha), 25))
for j in range(3):
    f = lambda t, j=j: loglik([t if k == j else beta[k] for k in range(3)], alpha)
    print("d/dbeta%d" % j, mp.nstr(mp.diff(f, beta[j]), 25))
print("d/dalpha", mp.nstr(mp.diff(lambda a: loglik(beta, a), alpha), 25))
