# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Term-level arithmetic on exponent-dict polynomials (compiled backend).

Compiled twin of _termops_py; see that module for the contracts.  Exponents
are small machine integers in practice, so tuple arithmetic is done through
C longs.
"""

import heapq

BACKEND = "compiled"


cdef inline tuple _tadd(tuple a, tuple b):
    cdef Py_ssize_t i, n = len(a)
    cdef list out = [None] * n
    cdef long x
    for i in range(n):
        x = <long> a[i] + <long> b[i]
        out[i] = x
    return tuple(out)


cdef inline tuple _tsub(tuple a, tuple b):
    cdef Py_ssize_t i, n = len(a)
    cdef list out = [None] * n
    cdef long x
    for i in range(n):
        x = <long> a[i] - <long> b[i]
        out[i] = x
    return tuple(out)


cdef inline bint _tdivides(tuple small, tuple big):
    cdef Py_ssize_t i, n = len(small)
    for i in range(n):
        if <long> small[i] > <long> big[i]:
            return False
    return True


cdef inline long _tsum(tuple a):
    cdef Py_ssize_t i, n = len(a)
    cdef long s = 0
    for i in range(n):
        s += <long> a[i]
    return s


cdef inline int _grevlex_cmp(tuple a, tuple b):
    """-1, 0, 1 comparison of monomials under grevlex."""
    cdef long sa = _tsum(a), sb = _tsum(b)
    cdef Py_ssize_t i
    cdef long da, db
    if sa != sb:
        return 1 if sa > sb else -1
    for i in range(len(a) - 1, -1, -1):
        da = <long> a[i]
        db = <long> b[i]
        if da != db:
            # smaller trailing exponent wins
            return 1 if da < db else -1
    return 0


def grevlex_key(exp):
    return (_tsum(exp),) + tuple(-e for e in reversed(exp))


cdef inline tuple _heap_key(tuple exp):
    cdef Py_ssize_t i, n = len(exp)
    cdef list out = [None] * (n + 2)
    out[0] = -_tsum(exp)
    for i in range(n):
        out[i + 1] = exp[n - 1 - i]
    out[n + 1] = exp
    return tuple(out)


def lead_exponent(dict terms):
    cdef tuple best = None
    for exp in terms:
        if best is None or _grevlex_cmp(<tuple> exp, best) > 0:
            best = <tuple> exp
    return best


def add_terms(dict A, dict B):
    if not A:
        return dict(B)
    if not B:
        return dict(A)
    if len(A) < len(B):
        A, B = B, A
    cdef dict out = dict(A)
    for exp, c in B.items():
        acc = out.get(exp)
        if acc is None:
            out[exp] = c
        else:
            s = acc + c
            if s:
                out[exp] = s
            else:
                del out[exp]
    return out


def sub_terms(dict A, dict B):
    cdef dict out = dict(A)
    for exp, c in B.items():
        acc = out.get(exp)
        if acc is None:
            out[exp] = -c
        else:
            s = acc - c
            if s:
                out[exp] = s
            else:
                del out[exp]
    return out


def neg_terms(dict A):
    cdef dict out = {}
    for exp, c in A.items():
        out[exp] = -c
    return out


def scale_terms(dict A, c):
    if not c:
        return {}
    cdef dict out = {}
    for exp, v in A.items():
        out[exp] = c * v
    return out


def mul_monomial(dict A, tuple exp, c):
    if not A:
        return {}
    cdef dict out = {}
    for e, v in A.items():
        out[_tadd(<tuple> e, exp)] = c * v
    return out


def mul_terms(dict A, dict B):
    if not A or not B:
        return {}
    if len(A) < len(B):
        A, B = B, A
    cdef dict out = {}
    cdef tuple exp
    for eb, cb in B.items():
        for ea, ca in A.items():
            exp = _tadd(<tuple> ea, <tuple> eb)
            acc = out.get(exp)
            if acc is None:
                out[exp] = ca * cb
            else:
                s = acc + ca * cb
                if s:
                    out[exp] = s
                else:
                    del out[exp]
    return out


def divmod_terms(dict A, dict B):
    if not B:
        raise ZeroDivisionError("polynomial division by zero")
    cdef tuple lb = lead_exponent(B)
    cb = B[lb]
    cdef dict work = dict(A)
    cdef list heap = [_heap_key(<tuple> e) for e in work]
    heapq.heapify(heap)
    cdef dict Q = {}
    cdef dict R = {}
    cdef tuple exp, qe, e2
    while heap:
        popped = <tuple> heapq.heappop(heap)
        exp = <tuple> popped[len(popped) - 1]
        ca = work.get(exp)
        if ca is None:
            continue
        del work[exp]
        if _tdivides(lb, exp):
            qe = _tsub(exp, lb)
            qc = ca / cb
            Q[qe] = qc
            for eb, cbb in B.items():
                if eb == lb:
                    continue
                e2 = _tadd(qe, <tuple> eb)
                acc = work.get(e2)
                if acc is None:
                    work[e2] = -qc * cbb
                    heapq.heappush(heap, _heap_key(e2))
                else:
                    s = acc - qc * cbb
                    if s:
                        work[e2] = s
                    else:
                        del work[e2]
        else:
            R[exp] = ca
    return Q, R


def exact_div_terms(dict A, dict B):
    if not B:
        raise ZeroDivisionError("polynomial division by zero")
    if not A:
        return {}
    cdef tuple lb = lead_exponent(B)
    cb = B[lb]
    cdef dict work = dict(A)
    cdef list heap = [_heap_key(<tuple> e) for e in work]
    heapq.heapify(heap)
    cdef dict Q = {}
    cdef tuple exp, qe, e2
    while heap:
        popped = <tuple> heapq.heappop(heap)
        exp = <tuple> popped[len(popped) - 1]
        ca = work.get(exp)
        if ca is None:
            continue
        del work[exp]
        if not _tdivides(lb, exp):
            return None
        qe = _tsub(exp, lb)
        qc = ca / cb
        Q[qe] = qc
        for eb, cbb in B.items():
            if eb == lb:
                continue
            e2 = _tadd(qe, <tuple> eb)
            acc = work.get(e2)
            if acc is None:
                work[e2] = -qc * cbb
                heapq.heappush(heap, _heap_key(e2))
            else:
                s = acc - qc * cbb
                if s:
                    work[e2] = s
                else:
                    del work[e2]
    return Q


def normal_form(dict A, list divisors):
    if not divisors:
        return dict(A)
    cdef list leads = [(lead_exponent(B), B) for B in divisors]
    cdef dict work = dict(A)
    cdef list heap = [_heap_key(<tuple> e) for e in work]
    heapq.heapify(heap)
    cdef dict R = {}
    cdef tuple exp, lb, qe, e2
    cdef dict B
    cdef bint found
    while heap:
        popped = <tuple> heapq.heappop(heap)
        exp = <tuple> popped[len(popped) - 1]
        ca = work.get(exp)
        if ca is None:
            continue
        del work[exp]
        found = False
        for pair in leads:
            lb = <tuple> (<tuple> pair)[0]
            if _tdivides(lb, exp):
                B = <dict> (<tuple> pair)[1]
                found = True
                break
        if not found:
            R[exp] = ca
            continue
        qe = _tsub(exp, lb)
        qc = ca / B[lb]
        for eb, cbb in B.items():
            if eb == lb:
                continue
            e2 = _tadd(qe, <tuple> eb)
            acc = work.get(e2)
            if acc is None:
                work[e2] = -qc * cbb
                heapq.heappush(heap, _heap_key(e2))
            else:
                s = acc - qc * cbb
                if s:
                    work[e2] = s
                else:
                    del work[e2]
    return R
