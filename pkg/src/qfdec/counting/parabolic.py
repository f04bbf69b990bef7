"""Divisor-method count of J_{S,2}(N) for the pair (r^2, s^2 + r t).

With x1 - x2 = a and z1 - z3 = e, a solution reduces to the y-system

    y1 - y3 = y4 - y2,    y1^2 - y3^2 + a*e = y4^2 - y2^2,

and for C = a*e != 0 the difference D = y1 - y3 must divide C. Summing the
y-count over (a, e) with the multiplicities of the x- and z-variables gives
J exactly:

    J = sum_{a,e} w(a) (N+1-|a|) (N+1-|e|)^2 Y(a e),   w(0) = 1, w(a) = 2 otherwise,

where the factor 2 counts the two ways {x1, x2} can match {x3, x4}.
"""
from __future__ import annotations

import time

from .records import CountRecord, Method


def divisor_table(M: int):
    """Sieve the divisors of 1..M. Returns (lists, sum of divisor counts)."""
    if M < 1:
        raise ValueError("M must be >= 1")
    divs = [[] for _ in range(M + 1)]
    for d in range(1, M + 1):
        for multiple in range(d, M + 1, d):
            divs[multiple].append(d)
    table = divs[1:]
    return table, sum(len(x) for x in table)


def _y_count_zero(N: int) -> int:
    # D = 0 gives y1 = y3, y2 = y4; D != 0 forces y1 = y4, y2 = y3; overlap y1 = y3 = y2.
    return 2 * (N + 1) ** 2 - (N + 1)


def _y_count(C: int, N: int, divisors) -> int:
    """Quadruples in [0, N]^4 solving the y-system for offset C != 0."""
    total = 0
    for d in divisors:
        if d > N:
            break
        for D in (d, -d):
            E = C // D
            if E % 2:
                continue
            h = E // 2
            # y3 = y1 - D, y2 = y1 - D + h, y4 = y1 + h, all in [0, N].
            lo = max(0, D, D - h, -h)
            hi = min(N, N + D, N + D - h, N - h)
            if hi >= lo:
                total += hi - lo + 1
    return total


def y_solutions(C: int, N: int) -> int:
    if C == 0:
        return _y_count_zero(N)
    C = abs(C)
    return _y_count(C, N, [d for d in range(1, min(C, N) + 1) if C % d == 0])


def fast_count_parabolic(N: int) -> CountRecord:
    if N < 0:
        raise ValueError("N must be >= 0")
    t0 = time.perf_counter()
    table = divisor_table(N * N)[0] if N >= 1 else []
    y_cache = {0: _y_count_zero(N)}
    total = 0
    for a in range(-N, N + 1):
        wa = (1 if a == 0 else 2) * (N + 1 - abs(a))
        for e in range(-N, N + 1):
            C = abs(a * e)  # the y-count is even in C
            if C not in y_cache:
                y_cache[C] = _y_count(C, N, table[C - 1])
            total += wa * (N + 1 - abs(e)) ** 2 * y_cache[C]
    return CountRecord(N, 2, total, Method.DIVISOR_METHOD, time.perf_counter() - t0)
