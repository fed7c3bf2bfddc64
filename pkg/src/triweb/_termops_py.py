"""Term-level arithmetic on exponent-dict polynomials (pure-Python backend).

A polynomial is represented as a dict mapping exponent tuples (one slot per
variable) to nonzero coefficients.  Coefficients may be any exact field
element supporting +, -, *, / (fractions.Fraction, gmpy2.mpq).  The monomial
order is graded reverse lexicographic with the first tuple slot most
significant.  All functions are pure: inputs are never mutated.

This module has a compiled twin (_termops_c) with identical semantics; the
active backend is chosen in triweb.kernel.
"""

import heapq
from operator import add as _iadd, sub as _isub

BACKEND = "python"


def grevlex_key(exp):
    """Sort key: k(a) > k(b) iff a > b in grevlex."""
    return (sum(exp),) + tuple(-e for e in reversed(exp))


def _heap_key(exp):
    # elementwise negation of grevlex_key, for min-heap pops of the lead term
    return (-sum(exp),) + tuple(reversed(exp))


def lead_exponent(terms):
    """Exponent of the grevlex-leading term, or None for the zero polynomial."""
    best = None
    best_key = None
    for exp in terms:
        k = grevlex_key(exp)
        if best_key is None or k > best_key:
            best, best_key = exp, k
    return best


def add_terms(A, B):
    if not A:
        return dict(B)
    if not B:
        return dict(A)
    if len(A) < len(B):
        A, B = B, A
    out = dict(A)
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


def sub_terms(A, B):
    out = dict(A)
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


def neg_terms(A):
    return {exp: -c for exp, c in A.items()}


def scale_terms(A, c):
    if not c:
        return {}
    return {exp: c * v for exp, v in A.items()}


def mul_monomial(A, exp, c):
    """A * (c * X^exp); c must be nonzero."""
    if not A:
        return {}
    return {tuple(map(_iadd, e, exp)): c * v for e, v in A.items()}


def mul_terms(A, B):
    if not A or not B:
        return {}
    if len(A) < len(B):
        A, B = B, A
    out = {}
    get = out.get
    for eb, cb in B.items():
        for ea, ca in A.items():
            exp = tuple(map(_iadd, ea, eb))
            acc = get(exp)
            if acc is None:
                out[exp] = ca * cb
            else:
                s = acc + ca * cb
                if s:
                    out[exp] = s
                else:
                    del out[exp]
    return out


def _divides(small, big):
    for a, b in zip(small, big):
        if a > b:
            return False
    return True


def divmod_terms(A, B):
    """Multivariate division by a single divisor: A = Q*B + R.

    No term of R is divisible by the leading monomial of B.  The pair (Q, R)
    is uniquely determined by the monomial order.
    """
    if not B:
        raise ZeroDivisionError("polynomial division by zero")
    lb = lead_exponent(B)
    cb = B[lb]
    work = dict(A)
    heap = [_heap_key(e) + (e,) for e in work]
    heapq.heapify(heap)
    Q = {}
    R = {}
    while heap:
        exp = heapq.heappop(heap)[-1]
        # lazy deletion: the same exponent may have been pushed twice or
        # cancelled since it was pushed
        ca = work.get(exp)
        if ca is None:
            continue
        del work[exp]
        if _divides(lb, exp):
            qe = tuple(map(_isub, exp, lb))
            qc = ca / cb
            Q[qe] = qc
            for eb, cbb in B.items():
                if eb is lb or eb == lb:
                    continue
                e2 = tuple(map(_iadd, qe, eb))
                acc = work.get(e2)
                if acc is None:
                    work[e2] = -qc * cbb
                    heapq.heappush(heap, _heap_key(e2) + (e2,))
                else:
                    s = acc - qc * cbb
                    if s:
                        work[e2] = s
                    else:
                        del work[e2]
        else:
            R[exp] = ca
    return Q, R


def exact_div_terms(A, B):
    """Quotient A/B when the division is exact, else None."""
    if not B:
        raise ZeroDivisionError("polynomial division by zero")
    if not A:
        return {}
    lb = lead_exponent(B)
    cb = B[lb]
    work = dict(A)
    heap = [_heap_key(e) + (e,) for e in work]
    heapq.heapify(heap)
    Q = {}
    while heap:
        exp = heapq.heappop(heap)[-1]
        ca = work.get(exp)
        if ca is None:
            continue
        del work[exp]
        if not _divides(lb, exp):
            return None
        qe = tuple(map(_isub, exp, lb))
        qc = ca / cb
        Q[qe] = qc
        for eb, cbb in B.items():
            if eb == lb:
                continue
            e2 = tuple(map(_iadd, qe, eb))
            acc = work.get(e2)
            if acc is None:
                work[e2] = -qc * cbb
                heapq.heappush(heap, _heap_key(e2) + (e2,))
            else:
                s = acc - qc * cbb
                if s:
                    work[e2] = s
                else:
                    del work[e2]
    return Q


def normal_form(A, divisors):
    """Fully reduce A modulo a list of nonzero divisor dicts."""
    if not divisors:
        return dict(A)
    leads = [(lead_exponent(B), B) for B in divisors]
    work = dict(A)
    heap = [_heap_key(e) + (e,) for e in work]
    heapq.heapify(heap)
    R = {}
    while heap:
        exp = heapq.heappop(heap)[-1]
        ca = work.get(exp)
        if ca is None:
            continue
        del work[exp]
        hit = None
        for lb, B in leads:
            if _divides(lb, exp):
                hit = (lb, B)
                break
        if hit is None:
            R[exp] = ca
            continue
        lb, B = hit
        qe = tuple(map(_isub, exp, lb))
        qc = ca / B[lb]
        for eb, cbb in B.items():
            if eb == lb:
                continue
            e2 = tuple(map(_iadd, qe, eb))
            acc = work.get(e2)
            if acc is None:
                work[e2] = -qc * cbb
                heapq.heappush(heap, _heap_key(e2) + (e2,))
            else:
                s = acc - qc * cbb
                if s:
                    work[e2] = s
                else:
                    del work[e2]
    return R
