"""Pure-Python interval-union kernels.

Intervals are tuples of ``(lo, hi)`` pairs, sorted, disjoint and
non-adjacent. Every function returns a new tuple; inputs are never mutated.
The compiled ``_kernels`` extension exposes the same functions.
"""


def normalize(pairs):
    """Sort and merge arbitrary ``(lo, hi)`` pairs, dropping empty ones."""
    items = sorted((lo, hi) for lo, hi in pairs if lo <= hi)
    out = []
    for lo, hi in items:
        if out and lo <= out[-1][1] + 1:
            if hi > out[-1][1]:
                out[-1] = (out[-1][0], hi)
        else:
            out.append((lo, hi))
    return tuple(out)


def intersect(a, b):
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        lo = max(a[i][0], b[j][0])
        hi = min(a[i][1], b[j][1])
        if lo <= hi:
            out.append((lo, hi))
        if a[i][1] < b[j][1]:
            i += 1
        else:
            j += 1
    return tuple(out)


def clamp(a, lo, hi):
    out = []
    for x, y in a:
        if y < lo:
            continue
        if x > hi:
            break
        out.append((max(x, lo), min(y, hi)))
    return tuple(out)


def remove_value(a, v):
    out = []
    for x, y in a:
        if x <= v <= y:
            if x < v:
                out.append((x, v - 1))
            if v < y:
                out.append((v + 1, y))
        else:
            out.append((x, y))
    return tuple(out)


def contains(a, v):
    for x, y in a:
        if v < x:
            return False
        if v <= y:
            return True
    return False


def size(a):
    return sum(y - x + 1 for x, y in a)
