"""Exact pointwise multilinear algebra on a 4-dimensional real fiber.

Conventions, fixed once and relied on by every downstream module:

* coordinates (x1, y1, x2, y2) are numbered 1..4, the coframe is
  e1 = dx1, e2 = dy1, e3 = dx2, e4 = dy2;
* a 2-form is stored by its six coefficients on e^{ab} = e^a wedge e^b
  with a < b, in slot order (12, 13, 14, 23, 24, 34);
* the interior product is (i_v s)_j = s(v, e_j), and the bundle map of a
  2-form sends v to i_v s;
* ``compose_i(omega, f)`` returns the unique linear map I with
  omega(I u, .) = f(u, .), i.e. I = omega^{-1} o f under the convention
  above.

All formulas are plain arithmetic on the stored scalars, so every
operation works identically over floats and over exact ``int`` /
``fractions.Fraction`` inputs.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DegenerateForm, NonDegenerateRequired, NotAlmostComplex

#: bivector slot order used by Form2 (1-based index pairs a < b)
BIVECTOR_SLOTS = ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))


def _is_exact(*values):
    return all(isinstance(v, (int, Fraction)) for v in values)


def _half(exact):
    return Fraction(1, 2) if exact else 0.5


@dataclass(frozen=True)
class Form1:
    """A 1-form, coefficients on (dx1, dy1, dx2, dy2)."""

    c: tuple

    def __add__(self, other):
        return Form1(tuple(a + b for a, b in zip(self.c, other.c)))

    def __neg__(self):
        return Form1(tuple(-a for a in self.c))

    def __rmul__(self, s):
        return Form1(tuple(s * a for a in self.c))


@dataclass(frozen=True)
class Form2:
    """A 2-form, coefficients on e^{12}, e^{13}, e^{14}, e^{23}, e^{24}, e^{34}."""

    c12: object = 0
    c13: object = 0
    c14: object = 0
    c23: object = 0
    c24: object = 0
    c34: object = 0

    @property
    def coeffs(self):
        return (self.c12, self.c13, self.c14, self.c23, self.c24, self.c34)

    @classmethod
    def from_coeffs(cls, coeffs):
        return cls(*coeffs)

    def __add__(self, other):
        return Form2.from_coeffs(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        return Form2.from_coeffs(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return Form2.from_coeffs(tuple(-a for a in self.coeffs))

    def __rmul__(self, s):
        return Form2.from_coeffs(tuple(s * a for a in self.coeffs))

    __mul__ = __rmul__

    def max_abs(self):
        return max(abs(a) for a in self.coeffs)


@dataclass(frozen=True)
class Form4:
    """A 4-form, single coefficient on e^{1234}."""

    v: object = 0


@dataclass(frozen=True)
class ComplexForm2:
    """A complex 2-form split into real and imaginary parts."""

    re: Form2
    im: Form2


@dataclass(frozen=True)
class LinearMap4:
    """A linear map on tangent coefficients in the basis (dx1_dual..dy2_dual).

    ``m`` is a 4-tuple of 4-tuples of scalars; (M v)_k = sum_i m[k][i] v_i.
    """

    m: tuple

    @classmethod
    def from_rows(cls, rows):
        return cls(tuple(tuple(r) for r in rows))

    @classmethod
    def identity(cls):
        return cls.from_rows([[1 if i == j else 0 for j in range(4)] for i in range(4)])

    def apply(self, v):
        return tuple(sum(row[i] * v[i] for i in range(4)) for row in self.m)

    def __matmul__(self, other):
        rows = [
            [sum(self.m[i][k] * other.m[k][j] for k in range(4)) for j in range(4)]
            for i in range(4)
        ]
        return LinearMap4.from_rows(rows)

    def transpose(self):
        return LinearMap4.from_rows(tuple(zip(*self.m)))

    def max_abs(self):
        return max(abs(e) for row in self.m for e in row)


def matrix_of_form2(f: Form2):
    """Full antisymmetric 4x4 matrix B with B[a][b] = f(e_{a+1}, e_{b+1})."""
    (c12, c13, c14, c23, c24, c34) = f.coeffs
    z = 0 * c12  # keeps the scalar type of the input
    return (
        (z, c12, c13, c14),
        (-c12, z, c23, c24),
        (-c13, -c23, z, c34),
        (-c14, -c24, -c34, z),
    )


def form2_of_matrix(b):
    """Inverse of :func:`matrix_of_form2`; reads the strict upper triangle."""
    return Form2(
        c12=b[0][1], c13=b[0][2], c14=b[0][3], c23=b[1][2], c24=b[1][3], c34=b[2][3]
    )


def wedge22(a: Form2, b: Form2) -> Form4:
    """Wedge product of two 2-forms, as the coefficient of e^{1234}.

    Symmetric and bilinear; wedge22(a, a) vanishes for decomposable a.
    """
    return Form4(
        a.c12 * b.c34
        + a.c34 * b.c12
        - a.c13 * b.c24
        - a.c24 * b.c13
        + a.c14 * b.c23
        + a.c23 * b.c14
    )


def pfaffian(f: Form2):
    """Pfaffian of the matrix of f; its square is the determinant."""
    return f.c12 * f.c34 - f.c13 * f.c24 + f.c14 * f.c23


def interior(v, s: Form2) -> Form1:
    """Interior product (i_v s)_j = s(v, e_j) for tangent coefficients v."""
    b = matrix_of_form2(s)
    return Form1(tuple(sum(v[a] * b[a][j] for a in range(4)) for j in range(4)))


def _solve4(a_rows, rhs_rows, tol):
    """Solve A X = R by Gaussian elimination with partial pivoting.

    Works over floats and exact rationals alike; raises
    NonDegenerateRequired when a pivot falls below ``tol`` (floats) or
    vanishes (exact scalars).
    """
    exact = _is_exact(
        *(e for row in a_rows for e in row), *(e for row in rhs_rows for e in row)
    )
    if exact:
        a = [[Fraction(e) for e in row] for row in a_rows]
        r = [[Fraction(e) for e in row] for row in rhs_rows]
    else:
        a = [[float(e) for e in row] for row in a_rows]
        r = [[float(e) for e in row] for row in rhs_rows]
    n = 4
    for col in range(n):
        piv = max(range(col, n), key=lambda i: abs(a[i][col]))
        if (exact and a[piv][col] == 0) or (not exact and abs(a[piv][col]) <= tol):
            raise NonDegenerateRequired("singular 2-form matrix")
        a[col], a[piv] = a[piv], a[col]
        r[col], r[piv] = r[piv], r[col]
        inv = a[col][col]
        for i in range(n):
            if i == col:
                continue
            factor = a[i][col] / inv
            if factor == 0:
                continue
            a[i] = [ai - factor * ac for ai, ac in zip(a[i], a[col])]
            r[i] = [ri - factor * rc for ri, rc in zip(r[i], r[col])]
    return [[r[i][j] / a[i][i] for j in range(n)] for i in range(n)]


def compose_i(omega: Form2, f: Form2, tol: float = 1e-12) -> LinearMap4:
    """The unique map I with omega(I u, v) = f(u, v) for all u, v.

    Requires omega non-degenerate (pfaffian bounded away from zero).
    Exact over rational inputs.
    """
    pf = pfaffian(omega)
    if (_is_exact(pf) and pf == 0) or abs(pf * pf) <= tol:
        raise NonDegenerateRequired("omega is degenerate (pfaffian^2 <= tol)")
    b_omega = matrix_of_form2(omega)
    b_f = matrix_of_form2(f)
    return LinearMap4.from_rows(_solve4(b_omega, b_f, tol))


def is_almost_complex(i: LinearMap4, tol: float = 1e-9) -> bool:
    """True iff the max-norm of i@i + Id is at most tol."""
    sq = i @ i
    resid = max(
        abs(sq.m[a][b] + (1 if a == b else 0)) for a in range(4) for b in range(4)
    )
    return resid <= tol


def pullback_form2(p: LinearMap4, f: Form2) -> Form2:
    """(p^* f)(u, v) = f(p u, p v); matrix P^T B P."""
    b = matrix_of_form2(f)
    pt = p.transpose()
    rows = (pt @ LinearMap4.from_rows(b) @ p).m
    return form2_of_matrix(rows)


def type_projectors(i: LinearMap4, beta: Form2, tol: float = 1e-9):
    """Split beta into its (1,1) and (2,0)+(0,2) parts for the structure i.

    Returns (p11, p2002) with p11 = (beta + beta(i., i.))/2 and
    p2002 = (beta - beta(i., i.))/2; the two parts sum to beta and are
    orthogonal for the wedge pairing.
    """
    if not is_almost_complex(i, tol):
        raise NotAlmostComplex("type projectors need i*i = -Id")
    invol = pullback_form2(i, beta)
    half = _half(_is_exact(*beta.coeffs, *(e for row in i.m for e in row)))
    p11 = half * (beta + invol)
    p2002 = half * (beta - invol)
    return p11, p2002


def kernel_of_complex_2form(o: ComplexForm2, tol: float = 1e-9):
    """Basis of the 2-dimensional complex kernel of a complex 2-form.

    The form must be non-degenerate (re+i*im wedged with its conjugate
    positive) and isotropic (square zero) within tol; the kernel cuts
    out the antiholomorphic tangent bundle of the induced complex
    structure.  Returns a (4, 2) complex array whose columns span the
    kernel.
    """
    re, im = o.re, o.im
    w_rr = wedge22(re, re).v
    w_ii = wedge22(im, im).v
    w_ri = wedge22(re, im).v
    square = complex(w_rr - w_ii, 2 * w_ri)  # (re+i im) wedge itself
    positivity = w_rr + w_ii  # (re+i im) wedge its conjugate
    if abs(square) > tol:
        raise DegenerateForm(f"form has nonzero square {square}")
    if positivity <= tol:
        raise DegenerateForm(f"form wedge conjugate is {positivity}, not positive")
    b = np.array(matrix_of_form2(re), dtype=float) + 1j * np.array(
        matrix_of_form2(im), dtype=float
    )
    _, s, vh = np.linalg.svd(b)
    cutoff = max(tol, s[0] * np.finfo(float).eps * 8)
    null_mask = s < cutoff
    if int(null_mask.sum()) != 2:
        raise DegenerateForm(f"kernel dimension {int(null_mask.sum())} != 2")
    return vh[null_mask].conj().T
