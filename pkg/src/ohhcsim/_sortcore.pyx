# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled instrumented Quick Sort kernel.

Mirrors ``_sortcore_py.sort_with_counts`` exactly: same pivot choice, same
partition exchanges, same counter semantics. Kept in lockstep so that the
backend choice never changes simulation results.
"""

from libc.stdlib cimport free, malloc, realloc


def sort_with_counts(long long[::1] a):
    """Sort the int64 buffer ``a`` in place, ascending.

    Returns ``(recursion_calls, iterations, swaps, comparisons)``.
    """
    cdef Py_ssize_t n = a.shape[0]
    cdef long long calls = 0, iters = 0, swaps = 0, comps = 0
    cdef Py_ssize_t lo, hi, i, j
    cdef long long pivot, tmp
    cdef Py_ssize_t top, cap
    cdef Py_ssize_t* stack
    cdef Py_ssize_t* grown
    cdef bint oom = False

    if n == 0:
        return 0, 0, 0, 0

    cap = 2048
    stack = <Py_ssize_t*> malloc(cap * 2 * sizeof(Py_ssize_t))
    if stack == NULL:
        raise MemoryError()

    with nogil:
        stack[0] = 0
        stack[1] = n - 1
        top = 1
        while top > 0:
            top -= 1
            lo = stack[2 * top]
            hi = stack[2 * top + 1]
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
                        tmp = a[i]
                        a[i] = a[j]
                        a[j] = tmp
                        swaps += 1
                    i += 1
                    j -= 1
                if i > j:
                    break
            if top + 2 > cap:
                grown = <Py_ssize_t*> realloc(stack, cap * 4 * sizeof(Py_ssize_t))
                if grown == NULL:
                    oom = True
                    break
                stack = grown
                cap *= 2
            # Push order matches the Python kernel: left segment is popped first.
            stack[2 * top] = i
            stack[2 * top + 1] = hi
            stack[2 * top + 2] = lo
            stack[2 * top + 3] = j
            top += 2

    free(stack)
    if oom:
        raise MemoryError()
    return calls, iters, swaps, comps
