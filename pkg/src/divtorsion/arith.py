"""Integer factorization and divisor helpers."""

from __future__ import annotations

import math
import random
from functools import lru_cache
from typing import Dict, List

TRIAL_LIMIT = 10 ** 6
_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin with the first twelve prime bases (deterministic below 3.3e24)."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int, rng: random.Random) -> int:
    if n % 2 == 0:
        return 2
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g, r, q = 1, 1, 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def _split(n: int, out: Dict[int, int], rng: random.Random) -> None:
    if n == 1:
        return
    if is_probable_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    d = _pollard_brent(n, rng)
    _split(d, out, rng)
    _split(n // d, out, rng)


@lru_cache(maxsize=65536)
def _factor_cached(n: int) -> tuple:
    out: Dict[int, int] = {}
    m = n
    p = 2
    while p * p <= m and p <= TRIAL_LIMIT:
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
        p += 1 if p == 2 else 2
    if m > 1:
        if p * p > m:
            out[m] = out.get(m, 0) + 1
        else:
            _split(m, out, random.Random(m))
    return tuple(sorted(out.items()))


def factorize(n: int) -> Dict[int, int]:
    """Prime factorization ``{p: e}``: trial division to 10^6, then Pollard-Brent."""
    if n < 1:
        raise ValueError("factorize needs a positive integer")
    return dict(_factor_cached(n))


def divisors(n: int) -> List[int]:
    ds = [1]
    for p, e in factorize(n).items():
        ds = [d * p ** k for d in ds for k in range(e + 1)]
    return sorted(ds)


def jordan(k: int, n: int) -> int:
    """Jordan's totient ``J_k(n) = n^k * prod_{p | n} (1 - p^-k)``."""
    if k < 1 or n < 1:
        raise ValueError("jordan needs k >= 1 and n >= 1")
    out = 1
    for p, e in factorize(n).items():
        out *= p ** (k * (e - 1)) * (p ** k - 1)
    return out


def I_factor(n: int) -> int:
    return 2 if n == 2 else 1


def D(n: int) -> int:
    """Degree of the n-th primitive division polynomial, ``J_2(n) I(n) / 2``."""
    if n < 2:
        raise ValueError("D(n) needs n >= 2")
    return jordan(2, n) * I_factor(n) // 2
