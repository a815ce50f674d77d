from __future__ import annotations


def factorize(n: int) -> list[int]:
    """Ascending prime factors of ``n``; ``factorize(1) == []``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    factors = []
    p = 2
    while p * p <= n:
        while n % p == 0:
            factors.append(p)
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        factors.append(n)
    return factors
