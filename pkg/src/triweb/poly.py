"""Exact multivariate polynomials over the rationals.

Poly is immutable.  Terms live in a dict mapping exponent tuples to nonzero
rational coefficients; the monomial order is graded reverse lexicographic
(grevlex) where position 0 of the exponent tuple is the most significant
variable.  Variable tuples are kept sorted by name, so the ASCII-first
variable is the grevlex-largest.

The gcd is computed by an integer-evaluation heuristic with a primitive-
remainder-sequence fallback; resultants use the subresultant PRS algorithm,
which keeps intermediate coefficient growth polynomial instead of the
factorial blow-up of expanding the Sylvester determinant.
"""

from __future__ import annotations

import math

from .kernel import QQ, QQ1, termops

_add = termops.add_terms
_sub = termops.sub_terms
_neg = termops.neg_terms
_scale = termops.scale_terms
_mul = termops.mul_terms
_mul_mono = termops.mul_monomial
_lead = termops.lead_exponent
_exact = termops.exact_div_terms
_grevlex_key = termops.grevlex_key


class PolynomialError(ValueError):
    pass


def _as_coeff(c):
    if type(c) is type(QQ1):
        return c
    return QQ(c)


class Poly:
    """A multivariate polynomial with exact rational coefficients."""

    __slots__ = ("vars", "terms")

    def __init__(self, terms, vars):
        # trusted constructor: terms canonical (no zeros, aligned widths)
        self.vars = vars
        self.terms = terms

    # -- construction ------------------------------------------------------

    @staticmethod
    def const(c, vars=()):
        c = _as_coeff(c)
        if not c:
            return Poly({}, tuple(vars))
        return Poly({(0,) * len(vars): c}, tuple(vars))

    @staticmethod
    def zero(vars=()):
        return Poly({}, tuple(vars))

    @staticmethod
    def variable(name):
        return Poly({(1,): QQ1}, (name,))

    @staticmethod
    def from_terms(terms, vars):
        """Build from an arbitrary {exponent tuple: coefficient} mapping."""
        vars = tuple(vars)
        clean = {}
        for exp, c in terms.items():
            c = _as_coeff(c)
            if not c:
                continue
            if len(exp) != len(vars):
                raise PolynomialError("exponent width does not match variables")
            key = tuple(int(e) for e in exp)
            clean[key] = clean.get(key, QQ(0)) + c
        return Poly({e: c for e, c in clean.items() if c}, vars)

    # -- basic queries -----------------------------------------------------

    @property
    def is_zero(self):
        return not self.terms

    @property
    def is_const(self):
        if not self.terms:
            return True
        if len(self.terms) > 1:
            return False
        return not any(next(iter(self.terms)))

    def const_value(self):
        if not self.terms:
            return QQ(0)
        if not self.is_const:
            raise PolynomialError("not a constant polynomial")
        return next(iter(self.terms.values()))

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree(self, var):
        try:
            i = self.vars.index(var)
        except ValueError:
            return 0
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def lead_exponent(self):
        return _lead(self.terms)

    def lead_coeff(self):
        if not self.terms:
            return QQ(0)
        return self.terms[_lead(self.terms)]

    def used_vars(self):
        used = [False] * len(self.vars)
        for exp in self.terms:
            for i, e in enumerate(exp):
                if e:
                    used[i] = True
        return frozenset(v for v, u in zip(self.vars, used) if u)

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    # -- variable alignment ------------------------------------------------

    def embed(self, vars):
        """Re-express over a (sorted) superset of the current variables."""
        vars = tuple(vars)
        if vars == self.vars:
            return self
        pos = []
        for v in self.vars:
            try:
                pos.append(vars.index(v))
            except ValueError:
                raise PolynomialError(f"variable {v!r} missing from target")
        n = len(vars)
        out = {}
        for exp, c in self.terms.items():
            ne = [0] * n
            for p, e in zip(pos, exp):
                ne[p] = e
            out[tuple(ne)] = c
        return Poly(out, vars)

    def trim(self):
        """Drop variables that do not occur; keeps the sorted order."""
        used = [False] * len(self.vars)
        for exp in self.terms:
            for i, e in enumerate(exp):
                if e:
                    used[i] = True
        if all(used):
            return self
        keep = [i for i, u in enumerate(used) if u]
        vars = tuple(self.vars[i] for i in keep)
        out = {tuple(exp[i] for i in keep): c for exp, c in self.terms.items()}
        return Poly(out, vars)

    def _align(self, other):
        if self.vars == other.vars:
            return self, other
        merged = tuple(sorted(set(self.vars) | set(other.vars)))
        return self.embed(merged), other.embed(merged)

    # -- arithmetic ---------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Poly):
            a, b = self._align(other)
            return a.terms == b.terms
        if isinstance(other, (int, type(QQ1))):
            return self.is_const and self.const_value() == other
        return NotImplemented

    def __hash__(self):
        t = self.trim()
        return hash((t.vars, tuple(sorted(t.terms.items()))))

    def __neg__(self):
        return Poly(_neg(self.terms), self.vars)

    def __add__(self, other):
        if isinstance(other, (int, type(QQ1))):
            other = Poly.const(other, self.vars)
        elif not isinstance(other, Poly):
            return NotImplemented
        a, b = self._align(other)
        return Poly(_add(a.terms, b.terms), a.vars)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, type(QQ1))):
            other = Poly.const(other, self.vars)
        elif not isinstance(other, Poly):
            return NotImplemented
        a, b = self._align(other)
        return Poly(_sub(a.terms, b.terms), a.vars)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, (int, type(QQ1))):
            return Poly(_scale(self.terms, _as_coeff(other)), self.vars)
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self._align(other)
        return Poly(_mul(a.terms, b.terms), a.vars)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise PolynomialError("polynomial powers must be nonnegative integers")
        result = Poly.const(1, self.vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def divmod(self, other):
        """Division with remainder by a single divisor (grevlex)."""
        a, b = self._align(other)
        q, r = termops.divmod_terms(a.terms, b.terms)
        return Poly(q, a.vars), Poly(r, a.vars)

    def exact_div(self, other):
        """Exact quotient, or None when ``other`` does not divide ``self``."""
        a, b = self._align(other)
        if not b.terms:
            raise ZeroDivisionError("polynomial division by zero")
        q = _exact(a.terms, b.terms)
        if q is None:
            return None
        return Poly(q, a.vars)

    def scaled(self, c):
        return Poly(_scale(self.terms, _as_coeff(c)), self.vars)

    def monic(self):
        if not self.terms:
            return self
        lc = self.lead_coeff()
        if lc == 1:
            return self
        return self.scaled(QQ1 / lc)

    # -- calculus and evaluation --------------------------------------------

    def diff(self, var):
        try:
            i = self.vars.index(var)
        except ValueError:
            return Poly.zero(self.vars)
        out = {}
        for exp, c in self.terms.items():
            e = exp[i]
            if not e:
                continue
            ne = exp[:i] + (e - 1,) + exp[i + 1:]
            nc = c * e
            acc = out.get(ne)
            out[ne] = nc if acc is None else acc + nc
        return Poly({e: c for e, c in out.items() if c}, self.vars)

    def eval(self, values, convert=None):
        """Evaluate with every variable bound.

        ``values`` maps names to scalars of any ring; ``convert`` maps each
        rational coefficient into that ring (None keeps exact rationals).
        """
        vals = []
        for v in self.vars:
            if v not in values:
                raise PolynomialError(f"unbound variable {v!r}")
            vals.append(values[v])
        if not self.terms:
            return convert(QQ(0)) if convert else QQ(0)
        powcache = [dict() for _ in vals]

        def vpow(i, e):
            cache = powcache[i]
            got = cache.get(e)
            if got is None:
                got = vals[i] ** e
                cache[e] = got
            return got

        acc = None
        for exp, c in self.terms.items():
            term = convert(c) if convert else c
            for i, e in enumerate(exp):
                if e:
                    term = term * vpow(i, e)
            acc = term if acc is None else acc + term
        return acc

    def subs_poly(self, mapping):
        """Substitute variables by polynomials; unmapped variables persist."""
        out = Poly.zero(())
        for exp, c in self.terms.items():
            term = Poly.const(c)
            for v, e in zip(self.vars, exp):
                if not e:
                    continue
                repl = mapping.get(v)
                if repl is None:
                    repl = Poly.variable(v)
                term = term * repl ** e
            out = out + term
        return out

    # -- structure helpers ---------------------------------------------------

    def min_exponents(self):
        """Componentwise minimum exponent vector (the monomial content)."""
        it = iter(self.terms)
        first = next(it)
        mins = list(first)
        for exp in it:
            for i, e in enumerate(exp):
                if e < mins[i]:
                    mins[i] = e
        return tuple(mins)

    def coeffs_in(self, var):
        """View as univariate in ``var``: dict degree -> Poly coefficient."""
        try:
            i = self.vars.index(var)
        except ValueError:
            return {0: self}
        out = {}
        for exp, c in self.terms.items():
            d = exp[i]
            key = exp[:i] + (0,) + exp[i + 1:]
            bucket = out.setdefault(d, {})
            bucket[key] = c
        return {d: Poly(t, self.vars) for d, t in out.items()}

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: _grevlex_key(kv[0]),
                      reverse=True)

    # -- printing ------------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exp, c in self.sorted_terms():
            factors = []
            for v, e in zip(self.vars, exp):
                if e == 1:
                    factors.append(v)
                elif e:
                    factors.append(f"{v}^{e}")
            mono = "*".join(factors)
            neg = c < 0
            ac = -c if neg else c
            if mono and ac == 1:
                body = mono
            elif mono:
                body = f"{ac}*{mono}"
            else:
                body = str(ac)
            if not parts:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f"- {body}" if neg else f"+ {body}")
        return " ".join(parts)

    def __repr__(self):
        return f"Poly({self})"


# -- gcd ---------------------------------------------------------------------


def _int_content(terms):
    g = 0
    for c in terms.values():
        g = math.gcd(g, int(c.numerator))
        if g == 1:
            return 1
    return g or 1


def _clear_denominators(terms):
    """Scale a QQ-coefficient dict to integer values, primitive, lead > 0."""
    if not terms:
        return terms
    den_lcm = 1
    for c in terms.values():
        d = int(c.denominator)
        den_lcm = den_lcm * d // math.gcd(den_lcm, d)
    out = {e: c * den_lcm for e, c in terms.items()}
    g = _int_content(out)
    if g != 1:
        out = {e: c / g for e, c in out.items()}
    if out[_lead(out)] < 0:
        out = _neg(out)
    return out


def _eval_var_int(terms, i, xi):
    """Substitute integer xi for variable slot i; slot exponent becomes 0."""
    out = {}
    powcache = {}
    for exp, c in terms.items():
        e = exp[i]
        if e:
            p = powcache.get(e)
            if p is None:
                p = QQ(xi) ** e
                powcache[e] = p
            c = c * p
            exp = exp[:i] + (0,) + exp[i + 1:]
        acc = out.get(exp)
        if acc is None:
            out[exp] = c
        else:
            s = acc + c
            if s:
                out[exp] = s
            else:
                del out[exp]
    return {e: c for e, c in out.items() if c}


def _interpolate_int(ev, i, xi):
    """Invert _eval_var_int by balanced base-xi digit extraction."""
    out = {}
    half = xi // 2
    e = 0
    ev = dict(ev)
    while ev:
        nxt = {}
        for exp, c in ev.items():
            ci = int(c)
            r = ci % xi
            if r > half:
                r -= xi
            if r:
                nexp = exp[:i] + (e,) + exp[i + 1:]
                out[nexp] = QQ(r)
            q = (ci - r) // xi
            if q:
                nxt[exp] = QQ(q)
        ev = nxt
        e += 1
    return out


class _HeuristicFailed(Exception):
    pass


def _present_vars(terms, n):
    present = [False] * n
    for exp in terms:
        for i, e in enumerate(exp):
            if e:
                present[i] = True
    return [i for i, p in enumerate(present) if p]


def _max_norm(terms):
    return max(abs(int(c.numerator)) for c in terms.values())


def _strip_content(f):
    c = _int_content(f)
    if c != 1:
        f = {e: v / c for e, v in f.items()}
    return f, c


def _divides_int(f, h):
    """ZZ-divisibility of integral dicts; h must be primitive (Gauss)."""
    return _exact(f, h) is not None


def _heugcd(f, g, n, depth=0):
    """Heuristic gcd of integer-valued dicts (coefficients are integral QQ).

    Integer contents are split off first so candidate divisibility checks act
    on primitive parts; over primitive integral polynomials a successful
    field division is a ZZ division by the Gauss lemma.
    """
    f, cf = _strip_content(f)
    g, cg = _strip_content(g)
    cc = QQ(math.gcd(cf, cg))
    fv = _present_vars(f, n)
    gv = _present_vars(g, n)
    shared = [i for i in fv if i in gv]
    if not shared:
        # one side constant (after content stripping: a unit), or disjoint
        if not fv or not gv:
            return {(0,) * n: cc}
        return {(0,) * n: cc}
    i = shared[0]
    fn = _max_norm(f)
    gn = _max_norm(g)
    xi = 2 * min(fn, gn) + 29
    for _ in range(6):
        fe = _eval_var_int(f, i, xi)
        ge = _eval_var_int(g, i, xi)
        if fe and ge:
            rest = set(_present_vars(fe, n)) | set(_present_vars(ge, n))
            if not rest:
                a = abs(int(next(iter(fe.values()))))
                b = abs(int(next(iter(ge.values()))))
                h_ev = {(0,) * n: QQ(math.gcd(a, b))}
            else:
                try:
                    h_ev = _heugcd(fe, ge, n, depth + 1)
                except _HeuristicFailed:
                    h_ev = None
            if h_ev:
                h = _interpolate_int(h_ev, i, xi)
                if h:
                    h, _ = _strip_content(h)
                    if _divides_int(f, h) and _divides_int(g, h):
                        if cc != 1:
                            h = {e: v * cc for e, v in h.items()}
                        return h
        xi = xi * 73794 // 27011 + 1
    raise _HeuristicFailed


def _prem_terms(A, B, i, nvars):
    """Pseudo-remainder of A by B w.r.t. variable slot i: lc^(d+1)-scaled."""
    degB = max(e[i] for e in B)
    lB = {e[:i] + (0,) + e[i + 1:]: c for e, c in B.items() if e[i] == degB}
    R = dict(A)
    e = (max(e[i] for e in A) if A else -1) - degB + 1
    while R:
        degR = max(x[i] for x in R)
        if degR < degB:
            break
        lR = {x[:i] + (0,) + x[i + 1:]: c for x, c in R.items() if x[i] == degR}
        shift = (0,) * i + (degR - degB,) + (0,) * (nvars - i - 1)
        R = _sub(_mul(lB, R), _mul(lR, _mul_mono(B, shift, QQ1)))
        e -= 1
    for _ in range(e):
        R = _mul(lB, R)
    return R


def _content_wrt(terms, i, n):
    """gcd of the coefficients of the slot-i powers (a poly in other vars)."""
    buckets = {}
    for exp, c in terms.items():
        key = exp[i]
        b = buckets.setdefault(key, {})
        b[exp[:i] + (0,) + exp[i + 1:]] = c
    cont = None
    for b in buckets.values():
        cont = b if cont is None else _gcd_terms(cont, b, n)
        if cont and not any(any(e) for e in cont):
            break
    return cont


def _prs_gcd(f, g, n):
    """Primitive PRS gcd; correct for any input, slower than the heuristic."""
    fv = _present_vars(f, n)
    gv = _present_vars(g, n)
    shared = [i for i in fv if i in gv]
    if not shared:
        return {(0,) * n: QQ1}
    i = shared[0]
    cf = _content_wrt(f, i, n)
    cg = _content_wrt(g, i, n)
    fp = _exact(f, cf)
    gp = _exact(g, cg)
    if max(e[i] for e in fp) < max(e[i] for e in gp):
        fp, gp = gp, fp
    while True:
        if not gp:
            res = fp
            break
        if max(e[i] for e in gp) == 0:
            res = {(0,) * n: QQ1}
            break
        r = _prem_terms(fp, gp, i, n)
        if r:
            rc = _content_wrt(r, i, n)
            r = _exact(r, rc)
        fp, gp = gp, r
    cont = _gcd_terms(cf, cg, n)
    return _mul(res, cont)


def _gcd_terms(f, g, n):
    if not f:
        return dict(g)
    if not g:
        return dict(f)
    if not any(any(e) for e in f) or not any(any(e) for e in g):
        return {(0,) * n: QQ1}
    if f == g:
        return dict(f)
    # common monomial factor
    fm = [min(e[i] for e in f) for i in range(n)]
    gm = [min(e[i] for e in g) for i in range(n)]
    common = tuple(min(a, b) for a, b in zip(fm, gm))
    if any(common):
        down = tuple(-c for c in common)
        f = {tuple(map(int.__add__, e, down)): c for e, c in f.items()}
        g = {tuple(map(int.__add__, e, down)): c for e, c in g.items()}
    fi = _clear_denominators(f)
    gi = _clear_denominators(g)
    try:
        h = _heugcd(fi, gi, n)
    except _HeuristicFailed:
        h = _prs_gcd(fi, gi, n)
    if any(common):
        h = _mul_mono(h, common, QQ1)
    elif not any(any(e) for e in h):
        return {(0,) * n: QQ1}
    lc = h[_lead(h)]
    if lc != 1:
        h = _scale(h, QQ1 / lc)
    return h


def gcd(p, q):
    """Monic gcd of two polynomials (gcd(0, q) = monic q; gcd of units = 1)."""
    a, b = p._align(q)
    if a.is_zero:
        return b.monic()
    if b.is_zero:
        return a.monic()
    return Poly(_gcd_terms(a.terms, b.terms, len(a.vars)), a.vars)


def lcm(p, q):
    g = gcd(p, q)
    if g.is_zero:
        return g
    return (p * q).exact_div(g).monic()


# -- resultants ----------------------------------------------------------------


def resultant(p, q, var):
    """Sylvester resultant of p and q eliminating ``var``.

    Computed through the subresultant polynomial remainder sequence.  Both
    inputs must have positive degree in ``var``.
    """
    a, b = p._align(q)
    n = len(a.vars)
    try:
        i = a.vars.index(var)
    except ValueError:
        raise PolynomialError(f"variable {var!r} not present")
    da = a.degree(var)
    db = b.degree(var)
    if da <= 0 or db <= 0:
        raise PolynomialError("resultant needs positive degree in the variable")
    A, B = a.terms, b.terms
    s = 1
    if da < db:
        A, B = B, A
        if (da * db) % 2:
            s = -1
    one = {(0,) * n: QQ1}
    g = dict(one)
    h = dict(one)
    while True:
        dA = max(e[i] for e in A)
        dB = max(e[i] for e in B) if B else -1
        if dA % 2 and dB % 2:
            s = -s
        delta = dA - dB
        R = _prem_terms(A, B, i, n)
        if not R:
            return Poly.zero(a.vars)
        A = B
        hd = dict(one)
        for _ in range(delta):
            hd = _mul(hd, h)
        denom = _mul(g, hd)
        B = _exact(R, denom)
        if B is None:
            raise PolynomialError("subresultant division failed (kernel bug)")
        dA = max(e[i] for e in A)
        g = {e[:i] + (0,) + e[i + 1:]: c for e, c in A.items() if e[i] == dA}
        if delta == 0:
            pass  # h unchanged
        elif delta == 1:
            h = dict(g)
        else:
            num = g
            for _ in range(delta - 1):
                num = _mul(num, g)
            hp = dict(one)
            for _ in range(delta - 1):
                hp = _mul(hp, h)
            h = _exact(num, hp)
        if not B or max(e[i] for e in B) == 0:
            break
    if not B:
        return Poly.zero(a.vars)
    dA = max(e[i] for e in A)
    num = {e: c for e, c in B.items()}
    acc = dict(one)
    for _ in range(dA):
        acc = _mul(acc, num)
    hp = dict(one)
    for _ in range(dA - 1):
        hp = _mul(hp, h)
    res = _exact(acc, hp)
    if res is None:
        raise PolynomialError("subresultant final division failed (kernel bug)")
    if s < 0:
        res = _neg(res)
    return Poly(res, a.vars)


# -- square-free decomposition ---------------------------------------------------


def squarefree(p):
    """Square-free decomposition: list of (factor, multiplicity).

    The product of factor**multiplicity equals ``p`` up to a rational
    constant; factors are monic, pairwise coprime and square-free.
    """
    if p.is_zero:
        raise PolynomialError("square-free decomposition of zero")
    if p.is_const:
        return []
    p = p.monic()
    used = sorted(p.used_vars())
    v = used[0]
    # split off the content w.r.t. v (factors free of v), recurse on it
    n = len(p.vars)
    i = p.vars.index(v)
    cont_terms = _content_wrt(p.terms, i, n)
    cont = Poly(cont_terms, p.vars)
    pp = p.exact_div(cont)
    result = squarefree(cont) if not cont.is_const else []
    # Yun's algorithm on the v-primitive part
    d = pp.diff(v)
    a = gcd(pp, d)
    b = pp.exact_div(a)
    c = d.exact_div(a)
    k = 1
    while True:
        z = c - b.diff(v)
        if z.is_zero:
            if b.total_degree() > 0:
                result.append((b.monic(), k))
            break
        g = gcd(b, z)
        if g.total_degree() > 0:
            result.append((g.monic(), k))
        b = b.exact_div(g)
        c = z.exact_div(g)
        k += 1
    merged = {}
    order = []
    for f, m in result:
        key = (f.vars, tuple(sorted(f.terms.items())))
        if key in merged:
            merged[key] = (f, merged[key][1] + m)
        else:
            merged[key] = (f, m)
            order.append(key)
    return [merged[k] for k in order]


def trial_divide(p, f):
    """Exact quotient p/f, or None with a definite not-divisible verdict."""
    if f.is_zero:
        raise ZeroDivisionError("trial division by zero")
    return p.exact_div(f)
