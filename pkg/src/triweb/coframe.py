"""Abstract coframe calculus, signature sets, and the symmetry criterion.

The three operators of the web calculus act on scalars through
df = f2 U1 - f1 U2 with f3 = -f1 - f2.  The signature of a web at a point
collects (a, b, c, a2, b3, c1, a22, b33, c11); its image over a domain is a
point, a curve, or a surface, and that dimension is estimated numerically
from the rank of the 9x2 Jacobian of the signature map.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

import numpy as np

from .kernel import QQ
from .numeric import TaylorScalar, DomainError
from .poly import Poly, squarefree
from .rational import RatExpr
from . import web as W


class CoframeError(ValueError):
    pass


@dataclass(frozen=True)
class Coframe:
    """A web coframe: U1, U2 as (d-coordinate) coefficient pairs of RatExpr.

    Coordinates default to (u, v); U3 = -U1 - U2 is implied.  Invariants
    (a, b, c) ride along when the coframe came from a concrete web.
    """

    U1: tuple
    U2: tuple
    coords: tuple = ("u", "v")
    abc: tuple | None = None

    @property
    def U3(self):
        return (-(self.U1[0] + self.U2[0]), -(self.U1[1] + self.U2[1]))

    def d1(self, f):
        return f.diff(self.coords[0])

    def d2(self, f):
        return f.diff(self.coords[1])

    def area_coefficient(self):
        """Coefficient of du^dv in U1^U2; must not vanish identically."""
        p, q = self.U1
        m, n = self.U2
        return p * n - q * m


def partials(f, cf):
    """(f1, f2, f3) with df = f2 U1 - f1 U2 and f1 + f2 + f3 = 0."""
    p, q = cf.U1
    m, n = cf.U2
    det = m * q - p * n
    if isinstance(det, RatExpr) and det.is_zero:
        raise CoframeError("degenerate coframe: U1 ^ U2 = 0")
    fx = cf.d1(f)
    fy = cf.d2(f)
    f2 = (m * fy - n * fx) / det
    f1 = (p * fy - q * fx) / det
    return f1, f2, -f1 - f2


def reconstruct_df(parts, cf):
    """df back from (f1, f2, f3); inverse of partials by construction."""
    f1, f2, _ = parts
    return (f2 * cf.U1[0] - f1 * cf.U2[0], f2 * cf.U1[1] - f1 * cf.U2[1])


# -- signatures -------------------------------------------------------------------


SIGNATURE_NAMES = ("a", "b", "c", "a2", "b3", "c1", "a22", "b33", "c11")


@dataclass
class SignatureVector:
    values: tuple
    point: object = None
    consistency: object = None

    def as_dict(self):
        return dict(zip(SIGNATURE_NAMES, self.values))

    def __iter__(self):
        return iter(self.values)


def _signature_from_scalars(a, b, c, U1, U2, d1, d2, numeric):
    def parts(f):
        p, q = U1
        m, n = U2
        det = m * q - p * n
        fx, fy = d1(f), d2(f)
        f2 = (m * fy - n * fx) / det
        f1 = (p * fy - q * fx) / det
        return f1, f2, -f1 - f2

    a1, a2, a3 = parts(a)
    b1, b2, b3 = parts(b)
    c1, c2, c3 = parts(c)
    _, a22, _ = parts(a2)
    b33 = parts(b3)[2]
    c11 = parts(c1)[0]
    # first-derivative structure relations double as a consistency check
    res = (a1 - a * (1 + 2 * (b - c)),
           b2 - b * (1 + 2 * (c - a)),
           c3 - c * (1 + 2 * (a - b)))
    if numeric:
        vals = tuple(x.value if isinstance(x, TaylorScalar) else float(x)
                     for x in (a, b, c, a2, b3, c1, a22, b33, c11))
        cons = tuple(r.value if isinstance(r, TaylorScalar) else float(r)
                     for r in res)
    else:
        vals = (a, b, c, a2, b3, c1, a22, b33, c11)
        cons = res
    return vals, cons


def signature(web, at=None, check=True):
    """The 9-component signature at a point (or as field functions).

    Needs jets of the slope fields to order 4.  The Eq-type structure
    relations among first derivatives are evaluated as a consistency probe
    and reported on the result.
    """
    numeric = web is not None and web.mode == "numeric"
    values = W._jet_values_for(web, at if numeric else None, order=4,
                               extra_orders=0)
    d = W._ev(W.delta_formula(), values)
    if numeric:
        W._check_delta(d.value if isinstance(d, TaylorScalar) else d,
                       "numeric")
    else:
        if isinstance(d, RatExpr) and d.is_zero:
            raise W.DegenerateWeb("regular web: delta vanishes identically")
        if at is not None and isinstance(d, RatExpr) and \
                not W.evaluate_at_point(d, at):
            raise W.DegenerateWeb("delta vanishes at the point")
    a, b, c = (W._ev(f, values) for f in W.abc_formulas())
    U = [tuple(W._ev(cf, values) for cf in pair)
         for pair in W.coframe_formulas()]
    if numeric:
        d1 = lambda f: f.deriv_jet(0)
        d2 = lambda f: f.deriv_jet(1)
    elif web is None:
        from .jets import total_dx, total_dy
        d1, d2 = total_dx, total_dy
    else:
        d1 = lambda f: f.diff("x")
        d2 = lambda f: f.diff("y")
    vals, cons = _signature_from_scalars(a, b, c, U[0], U[1], d1, d2, numeric)
    if at is not None and not numeric:
        vals = tuple(W.evaluate_at_point(v, at) if isinstance(v, RatExpr)
                     else v for v in vals)
        cons = tuple(W.evaluate_at_point(r, at) if isinstance(r, RatExpr)
                     else r for r in cons)
    if check:
        for r in cons:
            bad = (abs(r) > 1e-8) if numeric else \
                (not r.is_zero if isinstance(r, RatExpr) else bool(r))
            if bad:
                raise CoframeError("structure relations fail on this input "
                                   "(is the web linear?)")
    return SignatureVector(values=vals, point=at, consistency=cons)


def s3_orbit_abc(abc):
    """The six relabelings of (a, b, c): even permutations act plainly,
    transpositions act with a global sign flip."""
    a, b, c = abc
    return [
        (a, b, c), (b, c, a), (c, a, b),
        (-b, -a, -c), (-a, -c, -b), (-c, -b, -a),
    ]


def signature_matches(sig, target, tol=1e-8):
    """Compare signatures modulo foliation relabeling.

    The (a, b, c) block is compared through its full orbit; derivative
    entries transform into mixed derivatives outside the signature, so they
    are compared directly (which is exact whenever either block vanishes,
    the case for all constant-signature webs)."""
    sv = tuple(float(x) for x in sig)
    tv = tuple(float(x) for x in target)
    for abc in s3_orbit_abc(tv[:3]):
        if all(abs(s - t) <= tol for s, t in zip(sv[:3], abc)):
            if all(abs(s - t) <= tol for s, t in zip(sv[3:], tv[3:])):
                return True
    return False


def sample_points(region, count, seed, admissible=None, max_tries=None):
    """Deterministic rejection sampler over a rectangle."""
    x0, y0, x1, y1 = region
    rng = random.Random(seed)
    out = []
    tries = 0
    cap = max_tries or count * 200
    while len(out) < count and tries < cap:
        tries += 1
        p = (rng.uniform(x0, x1), rng.uniform(y0, y1))
        if admissible is None or admissible(p):
            out.append(p)
    return out


@dataclass
class DimensionReport:
    dimension: int
    singular_values: list
    per_point: list
    admissible: int
    confidence: str
    details: str = ""


def signature_dimension(web, samples, rel_threshold=1e-6, h=1e-4):
    """Estimated dimension of the signature set over the sampled points.

    Per point, the 9x2 Jacobian of the signature map is built by central
    differences of jet-evaluated signatures at two step sizes; the rank
    comes from the singular values with the documented relative threshold.
    The overall dimension is the generic (maximal reliable) rank.
    """
    good = []
    per_point = []
    all_sv = []
    sigs = []
    for (x, y) in samples:
        try:
            rows = {}
            for hh in (h, h / 2):
                cols = []
                for dx, dy in ((hh, 0.0), (0.0, hh)):
                    sp = signature(web, (x + dx, y + dy), check=False)
                    sm = signature(web, (x - dx, y - dy), check=False)
                    cols.append([(u - v) / (2 * hh)
                                 for u, v in zip(sp.values, sm.values)])
                rows[hh] = np.array(cols, dtype=float).T
            s0 = signature(web, (x, y), check=False)
        except (W.DegenerateWeb, DomainError, ZeroDivisionError):
            continue
        sigs.append([float(v) for v in s0.values])
        ranks = {}
        svs = {}
        for hh, J in rows.items():
            sv = np.linalg.svd(J, compute_uv=False)
            svs[hh] = sv
            top = sv[0] if len(sv) else 0.0
            floor = 1e-7 * (1.0 + float(np.max(np.abs(sigs[-1]))))
            if top <= floor:
                ranks[hh] = 0
            else:
                ranks[hh] = int(np.sum(sv > rel_threshold * top))
        agreed = len(set(ranks.values())) == 1
        rank = min(ranks.values())
        good.append((rank, agreed))
        per_point.append({"point": (x, y), "rank": rank,
                          "cross_validated": agreed,
                          "singular_values": [list(map(float, svs[k]))
                                              for k in svs]})
        all_sv.append([float(v) for v in svs[h]])
    if len(good) < 25:
        raise CoframeError(f"insufficient admissible samples "
                           f"({len(good)} < 25)")
    reliable = [r for r, ok in good if ok]
    pool = reliable if reliable else [r for r, _ in good]
    dim = max(pool)
    if dim == 0:
        spread = np.ptp(np.array(sigs), axis=0).max() if sigs else 0.0
        if spread > 1e-6:
            dim = 1  # values move but the local rank rounded to zero
    agree_frac = sum(1 for _, ok in good if ok) / len(good)
    confidence = "high" if agree_frac > 0.9 else \
        ("medium" if agree_frac > 0.6 else "low")
    return DimensionReport(dimension=dim, singular_values=all_sv,
                           per_point=per_point, admissible=len(good),
                           confidence=confidence,
                           details=f"cross-validation agreement "
                                   f"{agree_frac:.2f}")


@dataclass
class HexagonalityVerdict:
    hexagonal: bool
    mode: str
    max_abs_k: float = 0.0
    witness: object = None


def hexagonality(web, samples=None, tol=1e-9):
    """Decide whether the Blaschke curvature k = a + b + c vanishes."""
    if web.mode == "symbolic":
        rec = W.invariants(web)
        k = rec.k
        return HexagonalityVerdict(hexagonal=k.is_zero, mode="symbolic",
                                   witness=None if k.is_zero else str(k))
    if not samples:
        raise CoframeError("numeric hexagonality needs sample points")
    worst = 0.0
    witness = None
    used = 0
    for p in samples:
        try:
            rec = W.invariants(web, p)
        except (W.DegenerateWeb, DomainError, ZeroDivisionError):
            continue
        used += 1
        if abs(rec.k) > worst:
            worst = abs(rec.k)
            witness = p
    if not used:
        raise CoframeError("no admissible samples for hexagonality")
    return HexagonalityVerdict(hexagonal=worst < tol, mode="numeric",
                               max_abs_k=worst, witness=witness)


# -- infinitesimal symmetry of a 1-form ----------------------------------------------


@dataclass
class SymmetryResult:
    holds: bool
    residual: RatExpr
    scale: object = None  # LambdaScale when recovered

    def lambda_available(self):
        return self.scale is not None


@dataclass
class LambdaScale:
    """lambda = exp(exp_part) * prod(poly_i ^ pow_i), up to a constant."""

    exp_part: RatExpr
    powers: list

    def log_derivative(self, var):
        out = self.exp_part.diff(var)
        for p, e in self.powers:
            pe = RatExpr(p)
            out = out + RatExpr.const(e) * pe.diff(var) / pe
        return out


def _integrate_rational(f, var):
    """Antiderivative of a univariate rational function in the form
    rational + sum of rational multiples of logs; None when the residue
    solve leaves our closed-form class."""
    num, den = f.as_numer_denom()
    if den.degree(var) == 0:
        # polynomial in var (other symbols are constants here)
        num_c = num.coeffs_in(var)
        acc = RatExpr.zero()
        for d, coeff in num_c.items():
            acc = acc + RatExpr(coeff) * RatExpr.var(var) ** (d + 1) / (d + 1)
        return acc / RatExpr(den), []
    q, r = num.divmod(den)
    poly_part = RatExpr.zero()
    for d, coeff in q.coeffs_in(var).items():
        poly_part = poly_part + RatExpr(coeff) * RatExpr.var(var) ** (d + 1) \
            / (d + 1)
    if r.is_zero:
        return poly_part, []
    # proper part: require a squarefree denominator and constant residues
    facs = squarefree(den)
    if any(m > 1 for _, m in facs):
        return None
    logs = []
    basis = []
    for fac, _ in facs:
        cof = den.exact_div(fac)
        basis.append((fac, fac.diff(var) * cof))
    # solve r = sum c_i * fac_i' * (den / fac_i) with constant c_i
    names = [f"_c{i}" for i in range(len(basis))]
    lhs = RatExpr(r)
    for name, (_, b) in zip(names, basis):
        lhs = lhs - RatExpr.var(name) * RatExpr(b)
    poly = lhs.num
    eqs = poly.coeffs_in(var)
    rows = []
    rhs = []
    for d, coeff in eqs.items():
        rows.append(coeff)
    # linear solve over QQ via numpy on exact data is wrong; do it manually
    sol = _solve_constant_residues(rows, names)
    if sol is None:
        return None
    for (fac, _), name in zip(basis, names):
        c = sol[name]
        if c:
            logs.append((fac, c))
    return poly_part, logs


def _solve_constant_residues(rows, names):
    """Solve the linear system 'every row polynomial == 0' for the names,
    requiring rational constant solutions."""
    # rows are Polys in the unknown names (and possibly other symbols,
    # which makes the solve fail -> None)
    eqs = []
    for p in rows:
        bad = [v for v in p.used_vars() if v not in names]
        if bad:
            return None
        eqs.append(p)
    mat = []
    vec = []
    for p in eqs:
        row = [QQ(0)] * len(names)
        const = QQ(0)
        for exp, c in p.terms.items():
            support = [i for i, e in enumerate(exp) if e]
            if not support:
                const = c
            elif len(support) == 1 and exp[support[0]] == 1:
                row[names.index(p.vars[support[0]])] = c
            else:
                return None
        mat.append(row)
        vec.append(-const)
    # Gaussian elimination over QQ
    n = len(names)
    m = len(mat)
    aug = [row[:] + [vec[i]] for i, row in enumerate(mat)]
    piv_cols = []
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, m):
            if aug[i][c]:
                piv = i
                break
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        scale = aug[r][c]
        aug[r] = [x / scale for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        piv_cols.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if aug[i][n]:
            return None
    sol = {name: QQ(0) for name in names}
    for i, c in enumerate(piv_cols):
        sol[names[c]] = aug[i][n]
    return sol


def symmetry_test(p, q, coords=("u", "v")):
    """Criterion for a vertical-flow symmetry of omega = p du + q dv.

    The form is invariant along some X = lambda(u,v) d/dv exactly when
    d/dv (p_v / q) = d/du (q_v / q); when that holds, lambda solves
    q lambda_u = -lambda p_v and q lambda_v = -lambda q_v and is recovered
    in closed form when the residues are constant.
    """
    u, v = coords
    if q.is_zero:
        raise CoframeError("the dv coefficient must not vanish")
    lhs = (p.diff(v) / q).diff(v)
    rhs = (q.diff(v) / q).diff(u)
    residual = lhs - rhs
    if not residual.is_zero:
        return SymmetryResult(holds=False, residual=residual)
    # log-derivative of lambda: d(ln lambda) = -(p_v/q) du - (q_v/q) dv
    t = (q.diff(u) - p.diff(v)) / q
    if not t.diff(v).is_zero:
        return SymmetryResult(holds=True, residual=residual, scale=None)
    integ = _integrate_rational(t, u)
    if integ is None:
        return SymmetryResult(holds=True, residual=residual, scale=None)
    exp_part, logs = integ
    powers = [(fac, QQ(e)) for fac, e in logs]
    powers.append((q.num, QQ(-1)))
    if not q.den.is_const:
        powers.append((q.den, QQ(1)))
    scale = LambdaScale(exp_part=exp_part, powers=powers)
    # verify the defining relations through the logarithmic derivative
    lu = scale.log_derivative(u)
    lv = scale.log_derivative(v)
    ok_u = (q * lu + p.diff(v)).is_zero
    ok_v = (q * lv + q.diff(v)).is_zero
    if not (ok_u and ok_v):
        return SymmetryResult(holds=True, residual=residual, scale=None)
    return SymmetryResult(holds=True, residual=residual, scale=scale)
