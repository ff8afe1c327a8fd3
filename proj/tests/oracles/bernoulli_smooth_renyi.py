"""Exact smooth Renyi entropy of i.i.d. Bernoulli products via type classes.

High-precision independent oracle used to freeze the expected values in
test_bounds.cpp and the acceptance suite. Run: python3 bernoulli_smooth_renyi.py
"""
from mpmath import mp, mpf, binomial, log, sqrt, ceil, quad, exp, pi, inf, findroot

mp.dps = 80


def smooth_renyi_bernoulli(p, n, alpha, eps):
    hi, lo = max(p, 1 - p), min(p, 1 - p)
    target = 1 - eps
    cum = mpf(0)
    total = mpf(0)
    for k in range(n + 1):
        v = hi ** (n - k) * lo ** k
        m = binomial(n, k)
        if cum + m * v >= target:
            whole = ceil((target - cum) / v) - 1
            partial = target - cum - whole * v
            total += whole * v ** alpha + partial ** alpha
            break
        cum += m * v
        total += m * v ** alpha
    return log(total, 2) / (1 - alpha)


def main():
    p, alpha, eps = mpf(1) / 4, mpf(1) / 3, mpf(1) / 10
    h = -(p * log(p, 2) + (1 - p) * log(1 - p, 2))
    v = p * (-log(p, 2) - h) ** 2 + (1 - p) * (-log(1 - p, 2) - h) ** 2
    phi = lambda u: quad(lambda t: exp(-t * t / 2) / sqrt(2 * pi), [-inf, u])
    q = findroot(lambda u: phi(u) - eps, -1)
    c = 1 / (2 * (1 - alpha))
    print("n,exact,expansion,residual,normalized_so")
    for n in [1, 8, 16, 32, 64, 128, 256, 512]:
        ex = smooth_renyi_bernoulli(p, n, alpha, eps)
        expn = n * h - sqrt(n * v) * q - c * log(n, 2)
        so = (ex - n * h + c * log(n, 2)) / sqrt(n)
        print(f"{n},{mp.nstr(ex, 15)},{mp.nstr(expn, 15)},{mp.nstr(ex - expn, 15)},{mp.nstr(so, 15)}")
    print("limit", mp.nstr(-sqrt(v) * q, 15))


if __name__ == "__main__":
    main()
