"""Differential forms on the 4-torus R^4/(2 pi Z)^4 with trigonometric
polynomial coefficients.

Coefficient functions are finite sums  f(x) = sum_k a_k cos<k, x> + b_k sin<k, x>
over integer frequency 4-vectors k.  The ring is closed under addition,
multiplication and partial derivatives, so exterior derivatives are exact
(symbolic); only point evaluation produces floats.  Frequencies are kept in a
canonical form: one entry per k, the first nonzero component of k positive,
and no sine term on k = 0.

The module also hosts the finite-difference integrability diagnostics: the
Nijenhuis defect of the candidate complex structure I = omega^{-1} o F over a
grid, and the residual of the identity

    omega((L_{IY} I - I L_Y I)(X), .) = (i_{IY} dF)(X, .) + (i_Y dF)(I X, .)

which ties the Lie-derivative expression (computed by central differences) to
the exact exterior derivative, providing an independent cross-check.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import NonDegenerateRequired, NotPointwiseBrane
from .exterior4 import (
    BIVECTOR_SLOTS,
    Form2,
    matrix_of_form2,
    pfaffian,
)

ZERO_K = (0, 0, 0, 0)

#: trivector slot order used by TrigPolyForm3 (1-based index triples a < b < c)
TRIVECTOR_SLOTS = ((1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4))


def _canonical_modes(raw):
    """Merge duplicate frequencies and normalise signs; drop zero modes."""
    acc = {}
    for k, a, b in raw:
        k = tuple(int(ki) for ki in k)
        lead = next((ki for ki in k if ki != 0), 0)
        if lead < 0:
            k = tuple(-ki for ki in k)
            b = -b
        if k == ZERO_K:
            b = 0 * b
        a0, b0 = acc.get(k, (0, 0))
        acc[k] = (a0 + a, b0 + b)
    items = []
    for k in sorted(acc):
        a, b = acc[k]
        if a == 0 and b == 0:
            continue
        items.append((k, a, b))
    return tuple(items)


@dataclass(frozen=True)
class TrigPolyFn:
    """A real trigonometric polynomial on the 4-torus."""

    modes: tuple = ()

    @classmethod
    def constant(cls, c):
        return cls(_canonical_modes([(ZERO_K, c, 0)]))

    @classmethod
    def mode(cls, k, cos=0, sin=0):
        return cls(_canonical_modes([(tuple(k), cos, sin)]))

    @classmethod
    def zero(cls):
        return cls()

    @property
    def is_constant(self):
        return all(k == ZERO_K for k, _, _ in self.modes)

    @property
    def constant_term(self):
        for k, a, _ in self.modes:
            if k == ZERO_K:
                return a
        return 0

    def coefficient_norm(self):
        """Sum of |a| + |b| over modes; an upper bound for the sup norm,
        zero exactly when the function is zero."""
        return sum(abs(a) + abs(b) for _, a, b in self.modes)

    def __add__(self, other):
        if not isinstance(other, TrigPolyFn):
            other = TrigPolyFn.constant(other)
        return TrigPolyFn(_canonical_modes(list(self.modes) + list(other.modes)))

    __radd__ = __add__

    def __neg__(self):
        return TrigPolyFn(tuple((k, -a, -b) for k, a, b in self.modes))

    def __sub__(self, other):
        return self + (-other if isinstance(other, TrigPolyFn) else TrigPolyFn.constant(-other))

    def __mul__(self, other):
        if not isinstance(other, TrigPolyFn):
            if not isinstance(other, (int, float, Fraction)):
                return NotImplemented
            return TrigPolyFn(tuple((k, other * a, other * b) for k, a, b in self.modes))
        exact = all(
            isinstance(v, (int, Fraction))
            for _, a, b in list(self.modes) + list(other.modes)
            for v in (a, b)
        )
        half = Fraction(1, 2) if exact else 0.5
        raw = []
        for k1, a1, b1 in self.modes:
            for k2, a2, b2 in other.modes:
                kp = tuple(x + y for x, y in zip(k1, k2))
                km = tuple(x - y for x, y in zip(k1, k2))
                # cos cos, sin sin -> cosines; cross terms -> sines
                raw.append((km, half * (a1 * a2 + b1 * b2), half * (b1 * a2 - a1 * b2)))
                raw.append((kp, half * (a1 * a2 - b1 * b2), half * (a1 * b2 + b1 * a2)))
        return TrigPolyFn(_canonical_modes(raw))

    __rmul__ = __mul__

    def derivative(self, i):
        """Partial derivative along coordinate i (0-based)."""
        return TrigPolyFn(
            _canonical_modes([(k, b * k[i], -a * k[i]) for k, a, b in self.modes])
        )

    def eval(self, x):
        total = 0.0
        for k, a, b in self.modes:
            phase = sum(ki * xi for ki, xi in zip(k, x))
            total += a * math.cos(phase) + b * math.sin(phase)
        return total

    def eval_grid(self, pts):
        """Evaluate at an (N, 4) array of points; returns shape (N,)."""
        out = np.zeros(len(pts))
        for k, a, b in self.modes:
            phase = pts @ np.asarray(k, dtype=float)
            out += float(a) * np.cos(phase) + float(b) * np.sin(phase)
        return out


def _as_fn(value):
    return value if isinstance(value, TrigPolyFn) else TrigPolyFn.constant(value)


@dataclass(frozen=True)
class TrigPolyForm1:
    c: tuple  # 4 TrigPolyFn, slots e^1..e^4

    @classmethod
    def from_fns(cls, fns):
        return cls(tuple(_as_fn(f) for f in fns))


@dataclass(frozen=True)
class TrigPolyForm2:
    c: tuple  # 6 TrigPolyFn, slot order BIVECTOR_SLOTS

    @classmethod
    def from_fns(cls, fns):
        return cls(tuple(_as_fn(f) for f in fns))

    @classmethod
    def from_constant(cls, f: Form2):
        return cls.from_fns(f.coeffs)

    @property
    def is_constant(self):
        return all(fn.is_constant for fn in self.c)

    def constant_part(self) -> Form2:
        return Form2.from_coeffs(tuple(fn.constant_term for fn in self.c))

    def __add__(self, other):
        return TrigPolyForm2(tuple(a + b for a, b in zip(self.c, other.c)))

    def __sub__(self, other):
        return TrigPolyForm2(tuple(a - b for a, b in zip(self.c, other.c)))

    def __mul__(self, s):
        return TrigPolyForm2(tuple(fn * s for fn in self.c))

    __rmul__ = __mul__

    def eval_grid(self, pts):
        """Coefficients at an (N, 4) array of points; returns (N, 6)."""
        return np.stack([fn.eval_grid(pts) for fn in self.c], axis=1)


@dataclass(frozen=True)
class TrigPolyForm3:
    c: tuple  # 4 TrigPolyFn, slot order TRIVECTOR_SLOTS

    @classmethod
    def from_fns(cls, fns):
        return cls(tuple(_as_fn(f) for f in fns))

    def coefficient_norm(self):
        return max(fn.coefficient_norm() for fn in self.c)

    def eval_grid(self, pts):
        return np.stack([fn.eval_grid(pts) for fn in self.c], axis=1)


def exterior_d(form):
    """Exact exterior derivative of a trig-poly function, 1-form or 2-form."""
    if isinstance(form, TrigPolyFn):
        return TrigPolyForm1(tuple(form.derivative(i) for i in range(4)))
    if isinstance(form, TrigPolyForm1):
        out = []
        for a, b in BIVECTOR_SLOTS:
            # d(c_b e^b) picks up +d_a c_b e^{ab}; d(c_a e^a) picks up -d_b c_a
            out.append(form.c[b - 1].derivative(a - 1) - form.c[a - 1].derivative(b - 1))
        return TrigPolyForm2(tuple(out))
    if isinstance(form, TrigPolyForm2):
        slot = {ab: fn for ab, fn in zip(BIVECTOR_SLOTS, form.c)}
        out = []
        for a, b, c in TRIVECTOR_SLOTS:
            out.append(
                slot[(b, c)].derivative(a - 1)
                - slot[(a, c)].derivative(b - 1)
                + slot[(a, b)].derivative(c - 1)
            )
        return TrigPolyForm3(tuple(out))
    raise TypeError(f"no exterior derivative for {type(form).__name__}")


def eval_at(f: TrigPolyForm2, x) -> Form2:
    """Pointwise Fourier evaluation of a trig-poly 2-form."""
    return Form2.from_coeffs(tuple(fn.eval(x) for fn in f.c))


def integrate(f: TrigPolyFn) -> float:
    """Integral over the torus: (2 pi)^4 times the constant Fourier mode."""
    return (2 * math.pi) ** 4 * float(f.constant_term)


def wedge_density(a: TrigPolyForm2, b: TrigPolyForm2) -> TrigPolyFn:
    """Coefficient function of a wedge b on e^{1234} (symbolic, exact)."""
    a12, a13, a14, a23, a24, a34 = a.c
    b12, b13, b14, b23, b24, b34 = b.c
    return a12 * b34 + a34 * b12 - a13 * b24 - a24 * b13 + a14 * b23 + a23 * b14


def uniform_grid(n: int):
    """The n^4 uniform grid on [0, 2 pi)^4 as an (n^4, 4) float array."""
    axis = 2 * math.pi * np.arange(n) / n
    mesh = np.meshgrid(axis, axis, axis, axis, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


# --- canonical constant forms on the torus ---------------------------------


def standard_symplectic() -> Form2:
    """dx1^dy2 + dy1^dx2, the symplectic form of the standard brane pair."""
    return Form2(c14=1, c23=1)


def standard_brane() -> Form2:
    """dx1^dx2 - dy1^dy2, a spacefilling brane for standard_symplectic()."""
    return Form2(c13=1, c24=-1)


def standard_kahler() -> Form2:
    """dx1^dy1 + dx2^dy2, the compatible positive (1,1) form."""
    return Form2(c12=1, c34=1)


def rotation_family(k) -> TrigPolyForm2:
    """cos<k, x> * standard_brane + sin<k, x> * standard_kahler.

    Satisfies the pointwise wedge conditions of a brane everywhere (by
    cos^2 + sin^2 = 1) but is closed only for k = 0, which makes it the
    canonical non-integrable test family.
    """
    c = TrigPolyFn.mode(k, cos=1)
    s = TrigPolyFn.mode(k, sin=1)
    return c * TrigPolyForm2.from_constant(standard_brane()) + s * TrigPolyForm2.from_constant(
        standard_kahler()
    )


def _coerce_trig(f) -> TrigPolyForm2:
    return TrigPolyForm2.from_constant(f) if isinstance(f, Form2) else f


def _check_omega(omega: Form2, tol):
    pf = pfaffian(omega)
    if abs(float(pf)) <= tol:
        raise NonDegenerateRequired("omega is degenerate")


def _i_field(omega: Form2, f: TrigPolyForm2, pts):
    """Batched I = omega^{-1} o F at each point; returns (N, 4, 4)."""
    b_omega = np.array(matrix_of_form2(omega), dtype=float)
    coeff = f.eval_grid(pts)  # (N, 6)
    n = len(pts)
    b_f = np.zeros((n, 4, 4))
    for idx, (a, b) in enumerate(BIVECTOR_SLOTS):
        b_f[:, a - 1, b - 1] = coeff[:, idx]
        b_f[:, b - 1, a - 1] = -coeff[:, idx]
    return np.linalg.solve(b_omega[None, :, :], b_f)


def _require_pointwise_complex(i_mats, tol):
    sq = np.einsum("nij,njk->nik", i_mats, i_mats)
    resid = np.abs(sq + np.eye(4)).max()
    if resid > tol:
        raise NotPointwiseBrane(f"I^2 + Id has max entry {resid:.3e} > {tol:.1e}")


def _i_derivatives(omega, f, pts, h):
    """Central-difference derivatives of the I field: (N, 4, 4, 4), axis 1 = direction."""
    n = len(pts)
    d_i = np.empty((n, 4, 4, 4))
    for m in range(4):
        shift = np.zeros(4)
        shift[m] = h
        d_i[:, m] = (_i_field(omega, f, pts + shift) - _i_field(omega, f, pts - shift)) / (
            2.0 * h
        )
    return d_i


def _nijenhuis_tensor(i_mats, d_i):
    """N(e_i, e_j) components from I and its first derivatives.

    With I[k, i] the matrix entries and D[m, k, i] = d_m I[k, i]:
    N[k, i, j] = I[m, j] D[m, k, i] - I[m, i] D[m, k, j]
                 + I[k, m] D[i, m, j] - I[k, m] D[j, m, i]  (sum over m).
    """
    t1 = np.einsum("nmj,nmki->nkij", i_mats, d_i)
    t2 = np.einsum("nmi,nmkj->nkij", i_mats, d_i)
    t3 = np.einsum("nkm,nimj->nkij", i_mats, d_i)
    t4 = np.einsum("nkm,njmi->nkij", i_mats, d_i)
    return t1 - t2 + t3 - t4


def nijenhuis_defect(omega: Form2, f, grid: int = 8, h: float = 1e-5, tol: float = 1e-9):
    """(max Nijenhuis defect, max |dF|) of I = omega^{-1} o F over a grid.

    The defect is the largest component of N(e_i, e_j) over all grid
    points and index pairs, with I-field derivatives taken by central
    differences of step h; max |dF| evaluates the exact exterior
    derivative pointwise on the same grid.  Both vanish together: the
    structure is integrable exactly when F is closed.
    """
    _check_omega(omega, tol)
    f = _coerce_trig(f)
    pts = uniform_grid(grid)
    i_mats = _i_field(omega, f, pts)
    _require_pointwise_complex(i_mats, tol)
    defect = np.abs(_nijenhuis_tensor(i_mats, _i_derivatives(omega, f, pts, h))).max()
    df = exterior_d(f)
    max_df = float(np.abs(df.eval_grid(pts)).max()) if any(fn.modes for fn in df.c) else 0.0
    return float(defect), max_df


def integrability_identity_residual(
    omega: Form2, f, x, h: float = 1e-4, tol: float = 1e-9
) -> float:
    """Residual of the Lie-derivative vs exterior-derivative identity at x.

    Compares omega((L_{I e_j} I - I L_{e_j} I)(e_i), e_k), with the Lie
    derivatives computed by central differences, against
    dF(I e_j, e_i, e_k) + dF(e_j, I e_i, e_k) with dF exact.  The two
    sides agree up to the O(h^2) finite-difference error.
    """
    _check_omega(omega, tol)
    f = _coerce_trig(f)
    pts = np.asarray([x], dtype=float)
    i_mats = _i_field(omega, f, pts)
    _require_pointwise_complex(i_mats, tol)
    n_tensor = _nijenhuis_tensor(i_mats, _i_derivatives(omega, f, pts, h))[0]
    i_mat = i_mats[0]

    # left side: omega(N(e_i, e_j), e_k) = sum_m N[m, i, j] B[m, k]
    b_omega = np.array(matrix_of_form2(omega), dtype=float)
    lhs = np.einsum("mij,mk->ijk", n_tensor, b_omega)

    # right side from the exact exterior derivative
    df = exterior_d(f)
    t = np.zeros((4, 4, 4))
    for (a, b, c), fn in zip(TRIVECTOR_SLOTS, df.c):
        val = fn.eval(x)
        for (p, q, r), sign in (
            ((a, b, c), 1), ((b, c, a), 1), ((c, a, b), 1),
            ((b, a, c), -1), ((a, c, b), -1), ((c, b, a), -1),
        ):
            t[p - 1, q - 1, r - 1] = sign * val
    rhs = np.einsum("mj,mik->ijk", i_mat, t) + np.einsum("mi,jmk->ijk", i_mat, t)
    return float(np.abs(lhs - rhs).max())
