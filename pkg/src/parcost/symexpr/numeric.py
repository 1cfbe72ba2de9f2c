"""Exact integer sequences used by the Fib/Lucas symbols."""

from __future__ import annotations

from functools import lru_cache


@lru_cache(maxsize=4096)
def _fib_pair(n: int) -> tuple[int, int]:
    # fast doubling: returns (F(n), F(n+1))
    if n == 0:
        return (0, 1)
    a, b = _fib_pair(n >> 1)
    c = a * (2 * b - a)
    d = a * a + b * b
    if n & 1:
        return (d, c + d)
    return (c, d)


def fib_value(n: int) -> int:
    if n < 0:
        v = fib_value(-n)
        return v if (-n) % 2 == 1 else -v
    return _fib_pair(n)[0]


def lucas_value(n: int) -> int:
    if n < 0:
        v = lucas_value(-n)
        return v if (-n) % 2 == 0 else -v
    f, f1 = _fib_pair(n)
    return 2 * f1 - f
