"""Independent high-precision evaluation of the constants frozen in the C++ tests.

Run with: python3 tests/oracle_scripts/frozen_values.py
The moment values for b = 3 come from the exact law of Z_n, built as a finite
distribution (value -> probability) by convolving independent children; no
moment recursion is involved.
"""
from collections import defaultdict
from fractions import Fraction

import mpmath as mp

mp.mp.dps = 40


def law_of_z(b, weight, p_plus, n):
    """Exact distribution of Z_n as {value: probability} (values as mpf)."""
    law = {mp.mpf(1): mp.mpf(1)}
    for _ in range(n):
        # One child: eps * weight * Z_{k}; b independent children are summed.
        child = defaultdict(lambda: mp.mpf(0))
        for v, p in law.items():
            child[mp.nstr(weight * v, 35)] += p * p_plus
            child[mp.nstr(-weight * v, 35)] += p * (1 - p_plus)
        child = {mp.mpf(k): p for k, p in child.items()}
        total = {mp.mpf(0): mp.mpf(1)}
        for _ in range(b):
            nxt = defaultdict(lambda: mp.mpf(0))
            for v1, p1 in total.items():
                for v2, p2 in child.items():
                    nxt[mp.nstr(v1 + v2, 35)] += p1 * p2
            total = {mp.mpf(k): p for k, p in nxt.items()}
        law = total
    return law


def moments(law, q_max):
    return [mp.fsum(p * v**q for v, p in law.items()) for q in range(1, q_max + 1)]


def main():
    h = mp.mpf("0.7")
    print("p_plus(b=2,H=0.7) =", mp.nstr((1 + mp.power(2, h - 1)) / 2, 20))
    print("2^-0.3 =", mp.nstr(mp.power(2, -0.3), 20))
    print("sigma(b=2,H=-2) =", mp.nstr(mp.sqrt(1 + 1 / (mp.power(2, 6) - 2)), 20))
    print("sigma_H(b=2,H=0.7) =", mp.nstr((2 - mp.power(2, 0.6)) ** -0.5, 20))
    print("sqrt(2-2^0.6) =", mp.nstr(mp.sqrt(2 - mp.power(2, 0.6)), 20))
    print("E Z^2 limit (H=0.7) =", mp.nstr(1 / (2 - mp.power(2, 0.6)), 20))
    print("residual sigma (H=0.7) =", mp.nstr(mp.sqrt(1 / (2 - mp.power(2, 0.6)) - 1), 20))
    print("sigma(b=3,H=1/2) =", mp.nstr(mp.sqrt(mp.mpf(2) / 3), 20))
    print("E(eps)^16 (b=2,H=0.7) =", mp.nstr(mp.power(2, -0.3 * 16), 20))

    # (2p-1)!! by direct product.
    print("double factorials:", [int(mp.fprod(range(1, 2 * p, 2))) for p in range(1, 9)])

    # Exact law of Z_n for b = 3, H = 0.7.
    b = 3
    w = mp.power(b, -h)
    pp = (1 + mp.power(b, h - 1)) / 2
    for n in (1, 2, 3):
        m = moments(law_of_z(b, w, pp, n), 6)
        print(f"b=3 H=0.7 n={n} E Z^q, q=1..6:", [mp.nstr(x, 20) for x in m])

    # Same construction at b = 2, H = 0.5 (E Z_n^2 = 1 + n/2).
    w2 = mp.power(2, -mp.mpf("0.5"))
    pp2 = (1 + mp.power(2, mp.mpf("-0.5"))) / 2
    for n in (1, 2, 3, 4):
        m = moments(law_of_z(2, w2, pp2, n), 4)
        print(f"b=2 H=0.5 n={n} E Z^q:", [mp.nstr(x, 20) for x in m])

    # b = 2, H = 0.7, n = 3, orders 1..6.
    w7 = mp.power(2, -h)
    pp7 = (1 + mp.power(2, h - 1)) / 2
    m = moments(law_of_z(2, w7, pp7, 3), 6)
    print("b=2 H=0.7 n=3 E Z^q:", [mp.nstr(x, 20) for x in m])

    # H = -2 (b = 2) is rational: exact fractions.
    wq = Fraction(4)
    pq = (1 + Fraction(1, 8)) / 2
    law = {Fraction(1): Fraction(1)}
    for _ in range(2):
        child = defaultdict(Fraction)
        for v, p in law.items():
            child[wq * v] += p * pq
            child[-wq * v] += p * (1 - pq)
        total = defaultdict(Fraction)
        for v1, p1 in child.items():
            for v2, p2 in child.items():
                total[v1 + v2] += p1 * p2
        law = dict(total)
    print("b=2 H=-2 n=2 E Z^q exact:", [str(sum(p * v**q for v, p in law.items())) for q in range(1, 7)])


if __name__ == "__main__":
    main()
