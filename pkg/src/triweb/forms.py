"""Differential forms over a two-dimensional chart with symbolic scalars.

A Chart packages the two derivations of the plane plus the structure
functions of the basis pair (e1, e2): d(e1) = s1 e1^e2, d(e2) = s2 e1^e2.
Coordinate charts (dx, dy) have s1 = s2 = 0; abstract coframes carry
nonzero structure functions.  Scalars may be RatExpr, quadratic-extension
elements, or anything with ring arithmetic.
"""

from __future__ import annotations


class Chart:
    def __init__(self, d1, d2, s1, s2, zero):
        self.d1 = d1
        self.d2 = d2
        self.s1 = s1
        self.s2 = s2
        self.zero = zero

    def d_scalar(self, f):
        return OneForm(self, self.d1(f), self.d2(f))


def coordinate_chart(dx, dy, zero):
    """Chart of a coordinate basis: the basis forms are closed."""
    z = zero()
    return Chart(dx, dy, z, z, zero)


class OneForm:
    __slots__ = ("chart", "a", "b")

    def __init__(self, chart, a, b):
        self.chart = chart
        self.a = a
        self.b = b

    def __add__(self, other):
        return OneForm(self.chart, self.a + other.a, self.b + other.b)

    def __sub__(self, other):
        return OneForm(self.chart, self.a - other.a, self.b - other.b)

    def __neg__(self):
        return OneForm(self.chart, -self.a, -self.b)

    def __rmul__(self, scalar):
        return OneForm(self.chart, scalar * self.a, scalar * self.b)

    __mul__ = __rmul__

    def wedge(self, other):
        return TwoForm(self.chart, self.a * other.b - self.b * other.a)

    def d(self):
        ch = self.chart
        coeff = (ch.d1(self.b) - ch.d2(self.a)
                 + ch.s1 * self.a + ch.s2 * self.b)
        return TwoForm(ch, coeff)

    @property
    def is_zero(self):
        return not self.a and not self.b

    def __eq__(self, other):
        return self.a == other.a and self.b == other.b

    def __repr__(self):
        return f"OneForm({self.a}, {self.b})"


class TwoForm:
    __slots__ = ("chart", "c")

    def __init__(self, chart, c):
        self.chart = chart
        self.c = c

    def __add__(self, other):
        return TwoForm(self.chart, self.c + other.c)

    def __sub__(self, other):
        return TwoForm(self.chart, self.c - other.c)

    def __neg__(self):
        return TwoForm(self.chart, -self.c)

    def __rmul__(self, scalar):
        return TwoForm(self.chart, scalar * self.c)

    __mul__ = __rmul__

    @property
    def is_zero(self):
        return not self.c

    def __eq__(self, other):
        return self.c == other.c

    def __repr__(self):
        return f"TwoForm({self.c})"


def zero_form(chart):
    return OneForm(chart, chart.zero(), chart.zero())


class MatrixForm:
    """3x3 matrix of 1-forms (gauge potentials, Darboux derivatives)."""

    __slots__ = ("chart", "rows")

    def __init__(self, chart, rows):
        self.chart = chart
        self.rows = rows

    def __getitem__(self, ij):
        return self.rows[ij[0]][ij[1]]

    def __add__(self, other):
        return MatrixForm(self.chart, [
            [self.rows[i][j] + other.rows[i][j] for j in range(3)]
            for i in range(3)])

    def __sub__(self, other):
        return MatrixForm(self.chart, [
            [self.rows[i][j] - other.rows[i][j] for j in range(3)]
            for i in range(3)])

    def trace(self):
        out = zero_form(self.chart)
        for i in range(3):
            out = out + self.rows[i][i]
        return out

    def d(self):
        return [[self.rows[i][j].d() for j in range(3)] for i in range(3)]

    def wedge_square(self):
        """Matrix product with the wedge as entry multiplication."""
        out = []
        for i in range(3):
            row = []
            for j in range(3):
                acc = TwoForm(self.chart, self.chart.zero())
                for k in range(3):
                    acc = acc + self.rows[i][k].wedge(self.rows[k][j])
                row.append(acc)
            out.append(row)
        return out

    def maurer_cartan(self):
        """dM + M^M as a 3x3 array of 2-forms."""
        dm = self.d()
        sq = self.wedge_square()
        return [[dm[i][j] + sq[i][j] for j in range(3)] for i in range(3)]

    def scalar_mul(self, s):
        return MatrixForm(self.chart, [[s * self.rows[i][j] for j in range(3)]
                                       for i in range(3)])
