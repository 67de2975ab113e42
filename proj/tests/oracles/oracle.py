"""Independent reference values for the C++ test suites.

Computed with sympy (exact integers/rationals) and mpmath (high precision);
nothing here shares code with the library. Values printed by this script are
frozen into tests/*.cpp.
"""
from fractions import Fraction
from mpmath import mp, mpf, nsum, inf, log, zeta, quad, pi

mp.dps = 40


def mobius_naive(limit):
    mu = [0] * (limit + 1)
    for k in range(1, limit + 1):
        n, sign, sq = k, 1, False
        p = 2
        while p * p <= n:
            if n % p == 0:
                n //= p
                if n % p == 0:
                    sq = True
                    break
                sign = -sign
            p += 1
        if sq:
            continue
        if n > 1:
            sign = -sign
        mu[k] = sign
    return mu


def main():
    N = 10 ** 6
    # linear sieve is fine for the prefix checks; trial division for <= 1e5
    mu = mobius_naive(10 ** 5)
    M = [0] * (10 ** 5 + 1)
    for k in range(1, 10 ** 5 + 1):
        M[k] = M[k - 1] + mu[k]
    print("M(1e5) =", M[10 ** 5])
    first_pos = next(n for n in range(2, 10 ** 5) if M[n] > 0)
    print("first n>1 with M(n)>0 =", first_pos)
    print("M(1..12) =", M[1:13])
    g = Fraction(0)
    g500 = None
    for k in range(1, 501):
        g += Fraction(mu[k], k)
    print("g(500) =", float(g))
    print("zeta(3) =", zeta(3))
    # ||chi + rho(1/x)||_2^2 = 1 + sum_k [1 - 2(k-1)log((k+1)/k) + (k-1)^2 (1/k - 1/(k+1))]
    s = nsum(lambda k: 1 - 2 * (k - 1) * log((k + 1) / k) + (k - 1) ** 2 * (1 / k - 1 / (k + 1)), [1, inf])
    print("||chi+S_1||_2 =", mp.sqrt(1 + s))
    # ||rho(1/x)||_2^2 = int_1^inf rho(y)^2 / y^2 dy + int_1^inf x^-2 ... rho(1/x) on (0,1]: sub y = 1/x
    r = nsum(lambda k: (1 - 2 * (k) * log((k + 1) / k) + k ** 2 * (1 / k - 1 / (k + 1))), [1, inf])
    print("||rho(1/x)||_2 =", mp.sqrt(1 + r))


main()
