"""Compiled inner loops for the departure recursions.

All kernels take arrival/service vectors already sorted by arrival time and
return departures plus 1-based server assignments (0 marks a customer that
is never served).  They are deliberately free of Python objects so numba can
compile them; the wrappers in :mod:`departq.core` do validation, sorting and
order restoration.
"""

import numpy as np
from numba import njit

INF = np.inf


@njit(cache=True)
def lindley_loop(a, s):
    n = a.shape[0]
    d = np.empty(n)
    prev = 0.0
    for i in range(n):
        start = a[i] if a[i] > prev else prev
        prev = start + s[i]
        d[i] = prev
    return d


@njit(cache=True)
def fixed_loop(a, s, k):
    n = a.shape[0]
    b = np.zeros(k)
    d = np.empty(n)
    p = np.empty(n, np.int64)
    for i in range(n):
        j = 0
        bj = b[0]
        for m in range(1, k):
            if b[m] < bj:
                bj = b[m]
                j = m
        start = a[i] if a[i] > bj else bj
        dep = start + s[i]
        b[j] = dep
        d[i] = dep
        p[i] = j + 1
    return d, p


@njit(cache=True)
def stepfun_loop(a, s, x, y):
    """Departure recursion under an open-server count that changes at knots.

    State changes are applied lazily: the change at knot x[l] is folded into
    the availability vector once the current customer, or every server, has
    moved past that knot.  Multiple consecutive knots may be crossed at once
    (long arrival gaps, zero-server epochs).  Customers reaching the final
    epoch while it has zero servers can never start and are marked missed.
    """
    n = a.shape[0]
    nknots = x.shape[0]
    k = int(np.max(y))
    b = np.full(k, INF)
    for m in range(y[0]):
        b[m] = 0.0
    d = np.empty(n)
    p = np.zeros(n, np.int64)
    l = 0
    for i in range(n):
        ai = a[i]
        while l < nknots:
            knot = x[l]
            advance = ai >= knot
            if not advance:
                advance = True
                for m in range(k):
                    if b[m] < knot:
                        advance = False
                        break
            if not advance:
                break
            new = y[l + 1]
            old = y[l]
            if new > old:
                for m in range(old, new):
                    b[m] = knot
            elif new < old:
                # closing servers stop taking work; an in-progress job has
                # already had its departure recorded and simply finishes
                for m in range(new, old):
                    b[m] = INF
            l += 1
        if y[l] == 0:
            d[i] = INF
            continue
        # choose by availability for this customer, max(b, a_i), so that
        # ties between idle servers resolve to the lowest index; which idle
        # server takes a job decides what is lost when a server later closes
        j = 0
        kj = b[0] if b[0] > ai else ai
        for m in range(1, k):
            km = b[m] if b[m] > ai else ai
            if km < kj:
                kj = km
                j = m
        dep = kj + s[i]
        b[j] = dep
        d[i] = dep
        p[i] = j + 1
    return d, p
