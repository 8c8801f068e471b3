"""Pure-Python instrumented Quick Sort kernel.

Reference implementation of the counting scheme described in
:mod:`ohhcsim.kernels`. The compiled kernel in ``_sortcore.pyx`` must produce
bit-identical counts; the two are cross-checked in the test suite.
"""


def sort_with_counts(a):
    """Sort the list ``a`` in place, ascending.

    Returns ``(recursion_calls, iterations, swaps, comparisons)``.
    """
    n = len(a)
    calls = 0
    iters = 0
    swaps = 0
    comps = 0
    if n == 0:
        return 0, 0, 0, 0
    stack = [(0, n - 1)]
    while stack:
        lo, hi = stack.pop()
        calls += 1
        if hi <= lo:
            continue
        pivot = a[(lo + hi) // 2]
        i = lo
        j = hi
        while True:
            while True:
                comps += 1
                if a[i] < pivot:
                    i += 1
                    iters += 1
                else:
                    break
            while True:
                comps += 1
                if pivot < a[j]:
                    j -= 1
                    iters += 1
                else:
                    break
            if i <= j:
                if i < j:
                    a[i], a[j] = a[j], a[i]
                    swaps += 1
                i += 1
                j -= 1
            if i > j:
                break
        # Both sub-segments are visited unconditionally; empty and
        # single-element segments count as base-case calls.
        stack.append((i, hi))
        stack.append((lo, j))
    return calls, iters, swaps, comps
