# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled interval-union kernels; same contract as ``_kernels_py``."""


def normalize(pairs):
    cdef list items = sorted([(p, q) for p, q in pairs if p <= q])
    cdef list out = []
    cdef long long lo, hi, last_lo, last_hi
    cdef bint have = False
    for item in items:
        lo = item[0]
        hi = item[1]
        if have and lo <= last_hi + 1:
            if hi > last_hi:
                last_hi = hi
        else:
            if have:
                out.append((last_lo, last_hi))
            last_lo = lo
            last_hi = hi
            have = True
    if have:
        out.append((last_lo, last_hi))
    return tuple(out)


def intersect(tuple a, tuple b):
    cdef list out = []
    cdef Py_ssize_t i = 0, j = 0, na = len(a), nb = len(b)
    cdef long long alo, ahi, blo, bhi, lo, hi
    while i < na and j < nb:
        alo = a[i][0]
        ahi = a[i][1]
        blo = b[j][0]
        bhi = b[j][1]
        lo = alo if alo > blo else blo
        hi = ahi if ahi < bhi else bhi
        if lo <= hi:
            out.append((lo, hi))
        if ahi < bhi:
            i += 1
        else:
            j += 1
    return tuple(out)


def clamp(tuple a, long long lo, long long hi):
    cdef list out = []
    cdef long long x, y
    for pair in a:
        x = pair[0]
        y = pair[1]
        if y < lo:
            continue
        if x > hi:
            break
        out.append((x if x > lo else lo, y if y < hi else hi))
    return tuple(out)


def remove_value(tuple a, long long v):
    cdef list out = []
    cdef long long x, y
    for pair in a:
        x = pair[0]
        y = pair[1]
        if x <= v <= y:
            if x < v:
                out.append((x, v - 1))
            if v < y:
                out.append((v + 1, y))
        else:
            out.append((x, y))
    return tuple(out)


def contains(tuple a, long long v):
    cdef long long x, y
    for pair in a:
        x = pair[0]
        y = pair[1]
        if v < x:
            return False
        if v <= y:
            return True
    return False


def size(tuple a):
    cdef long long total = 0
    for pair in a:
        total += <long long>pair[1] - <long long>pair[0] + 1
    return total
