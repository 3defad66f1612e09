"""Integer factorization at desk scale, radicals, and k-powerful certificates."""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import gcd, isqrt

TRIAL_LIMIT = 100_000
PRIME_PROOF_LIMIT = 2**64
LARGE_MR_ROUNDS = 40
DIGIT_LIMIT_DEFAULT = 120

_RHO_RETRIES = 24
_RHO_MAX_STEPS = 1 << 21

# Deterministic Miller-Rabin witness set for n < 2**64.
_MR_BASES_64 = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_prime_table: list[int] | None = None


class UnfactoredCofactorError(Exception):
    """Rho gave up; carries the partial factorization and the stuck cofactor."""

    def __init__(self, n: int, partial: tuple[tuple[int, int], ...], cofactor: int):
        super().__init__(f"unfactored composite cofactor {cofactor} while factoring {n}")
        self.n = n
        self.partial = partial
        self.cofactor = cofactor


@dataclass(frozen=True)
class Factorization:
    """Prime factorization of n, sorted by prime.

    proven is False when any listed prime only passed a probabilistic
    primality battery (possible above 2**64).
    """

    n: int
    factors: tuple[tuple[int, int], ...]
    proven: bool


def _small_primes() -> list[int]:
    global _prime_table
    if _prime_table is None:
        sieve = bytearray([1]) * TRIAL_LIMIT
        sieve[0] = sieve[1] = 0
        for i in range(2, isqrt(TRIAL_LIMIT) + 1):
            if sieve[i]:
                sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
        _prime_table = [i for i, flag in enumerate(sieve) if flag]
    return _prime_table


def _mr_composite_witness(a: int, d: int, s: int, n: int) -> bool:
    x = pow(a, d, n)
    if x in (1, n - 1):
        return False
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return False
    return True


def is_prime(n: int, rounds: int = LARGE_MR_ROUNDS) -> bool:
    """Miller-Rabin: deterministic below 2**64, probabilistic battery above."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if n < PRIME_PROOF_LIMIT:
        witnesses = _MR_BASES_64
    else:
        rng = random.Random(n)
        witnesses = [rng.randrange(2, n - 1) for _ in range(max(rounds, LARGE_MR_ROUNDS))]
    return not any(_mr_composite_witness(a, d, s, n) for a in witnesses)


def _brent_rho(n: int, attempt: int) -> int | None:
    """One bounded Brent-cycle attempt at a factor of odd composite n."""
    rng = random.Random(n ^ (attempt * 0x9E3779B97F4A7C15))
    y = rng.randrange(1, n)
    c = rng.randrange(1, n)
    m = 128
    g = r = q = 1
    x = ys = y
    steps = 0
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
            g = gcd(q, n)
            k += m
        r *= 2
        steps += r
        if steps > _RHO_MAX_STEPS:
            return None
    if g == n:
        g = 1
        while g == 1:
            ys = (ys * ys + c) % n
            g = gcd(abs(x - ys), n)
    return g if g != n else None


def _rho_factor(n: int) -> int | None:
    for attempt in range(_RHO_RETRIES):
        f = _brent_rho(n, attempt)
        if f is not None and f not in (1, n):
            return f
    return None


def factorize(n: int) -> Factorization:
    """Full factorization of n >= 1: trial division, then Brent-cycle rho."""
    if n < 1:
        raise ValueError(f"factorize needs n >= 1, got {n}")
    counts: dict[int, int] = {}
    m = n
    for p in _small_primes():
        if p * p > m:
            break
        while m % p == 0:
            counts[p] = counts.get(p, 0) + 1
            m //= p
    if m > 1:
        stack = [m]
        while stack:
            c = stack.pop()
            if is_prime(c):
                counts[c] = counts.get(c, 0) + 1
                continue
            f = _rho_factor(c)
            if f is None:
                raise UnfactoredCofactorError(n, tuple(sorted(counts.items())), c)
            stack.append(f)
            stack.append(c // f)
    factors = tuple(sorted(counts.items()))
    proven = all(p < PRIME_PROOF_LIMIT for p, _ in factors)
    return Factorization(n, factors, proven)


def radical(n: int) -> int:
    """Product of the distinct primes dividing n."""
    r = 1
    for p, _ in factorize(n).factors:
        r *= p
    return r


def is_squarefree(n: int) -> bool:
    return all(e == 1 for _, e in factorize(n).factors)


def is_k_powerful(n: int, k: int) -> bool:
    """True when p | n implies p**k | n.  n = 1 is vacuously k-powerful."""
    if n < 1:
        raise ValueError(f"is_k_powerful needs n >= 1, got {n}")
    if k < 1:
        raise ValueError(f"is_k_powerful needs k >= 1, got {k}")
    return all(e >= k for _, e in factorize(n).factors)


def iroot(n: int, k: int) -> tuple[int, bool]:
    """Floor k-th root of n >= 0, plus whether the root is exact."""
    if n < 0 or k < 1:
        raise ValueError(f"iroot needs n >= 0 and k >= 1, got ({n}, {k})")
    if n == 0:
        return 0, True
    if k == 1:
        return n, True
    if k == 2:
        r = isqrt(n)
        return r, r * r == n
    r = 1 << -(-n.bit_length() // k)
    while True:
        nr = ((k - 1) * r + n // r ** (k - 1)) // k
        if nr >= r:
            break
        r = nr
    return r, r**k == n


@dataclass(frozen=True)
class KPowerfulCheck:
    """Outcome of a k-powerful test that may decline to factor huge inputs."""

    n_digits: int
    verdict: bool | None
    method: str  # "factored" | "perfect-power" | "undecided"
    factors: tuple[tuple[int, int], ...] | None


def certify_k_powerful(n: int, k: int = 3, digit_limit: int = DIGIT_LIMIT_DEFAULT) -> KPowerfulCheck:
    """k-powerful check backed by a factorization below digit_limit digits.

    Above the limit only the unconditional perfect k-th power test runs, so
    the verdict can be None (undecided) for large non-powers.
    """
    if n < 1:
        raise ValueError(f"certify_k_powerful needs n >= 1, got {n}")
    digits = len(str(n))
    if digits <= digit_limit:
        try:
            fac = factorize(n)
        except UnfactoredCofactorError:
            fac = None
        if fac is not None:
            verdict = all(e >= k for _, e in fac.factors)
            return KPowerfulCheck(digits, verdict, "factored", fac.factors)
    _, exact = iroot(n, k)
    if exact:
        return KPowerfulCheck(digits, True, "perfect-power", None)
    return KPowerfulCheck(digits, None, "undecided", None)
