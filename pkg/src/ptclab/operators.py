"""Momentum-space linear operators with matrix coefficients.

An operator is a finite sum of terms (matrix of scalar expressions) times a
partial-derivative multi-index in (p1, p2, p3).  Composition applies the full
Leibniz rule, so derivative terms acting on the right factor's coefficients
generate the expected lower-order pieces; commutators and anticommutators are
built on top of that.

Cancellations (for example the second-order pieces of a commutator of two
first-order operators) are detected numerically: after every composition the
coefficient matrices are probed at a fixed set of generic points and terms
that vanish there are dropped.  The derivative order of any surviving term is
capped at two, which is all the generator algebra ever needs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .expr import Const, Var, as_expr, add, mul, I_UNIT, ZERO
from .sampling import env_arrays, sample_points

Index = tuple  # (n1, n2, n3) derivative multi-index

ZERO_INDEX = (0, 0, 0)
MAX_ORDER = 2
PRUNE_TOL = 1e-10

# Generic probe points used to decide whether a coefficient matrix vanishes
# identically.  Times are nonzero so t-dependent terms cannot hide.
_PRUNE_ENV = env_arrays(
    sample_points(count=5, seed=0x0ACE, masses=(1.0, 1.7), times=(0.3, 0.7))
)


class OperatorOrderError(ValueError):
    """Raised when a composition leaves a genuine term of order > 2."""


def index_add(a: Index, b: Index) -> Index:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def index_order(a: Index) -> int:
    return a[0] + a[1] + a[2]


def _subindices(alpha: Index):
    return product(range(alpha[0] + 1), range(alpha[1] + 1), range(alpha[2] + 1))


def _multi_binom(alpha: Index, gamma: Index) -> int:
    return (
        math.comb(alpha[0], gamma[0])
        * math.comb(alpha[1], gamma[1])
        * math.comb(alpha[2], gamma[2])
    )


# ---------------------------------------------------------------------------
# matrices of expressions


def expr_matrix(data) -> np.ndarray:
    """Coerce a nested sequence or complex ndarray to an object matrix of Expr."""
    raw = np.asarray(data, dtype=object)
    if raw.ndim != 2 or raw.shape[0] != raw.shape[1]:
        raise ValueError("expected a square matrix")
    out = np.empty(raw.shape, dtype=object)
    for i in range(raw.shape[0]):
        for j in range(raw.shape[1]):
            out[i, j] = as_expr(raw[i, j])
    return out


def const_matrix(mat: np.ndarray) -> np.ndarray:
    mat = np.asarray(mat)
    out = np.empty(mat.shape, dtype=object)
    for i in range(mat.shape[0]):
        for j in range(mat.shape[1]):
            out[i, j] = Const(complex(mat[i, j]))
    return out


def identity_matrix(dim: int) -> np.ndarray:
    out = np.empty((dim, dim), dtype=object)
    for i in range(dim):
        for j in range(dim):
            out[i, j] = Const(1) if i == j else ZERO
    return out


def mat_add(a, b):
    d = a.shape[0]
    out = np.empty_like(a)
    for i in range(d):
        for j in range(d):
            out[i, j] = add(a[i, j], b[i, j])
    return out


def mat_scale(a, factor):
    factor = as_expr(factor)
    d = a.shape[0]
    out = np.empty_like(a)
    for i in range(d):
        for j in range(d):
            out[i, j] = mul(factor, a[i, j])
    return out


def mat_mul(a, b):
    d = a.shape[0]
    out = np.empty_like(a)
    for i in range(d):
        for j in range(d):
            acc = ZERO
            for k in range(d):
                acc = add(acc, mul(a[i, k], b[k, j]))
            out[i, j] = acc
    return out


def mat_diff(a, var: str):
    d = a.shape[0]
    out = np.empty_like(a)
    for i in range(d):
        for j in range(d):
            out[i, j] = a[i, j].diff(var)
    return out


def mat_map(a, fn):
    d = a.shape[0]
    out = np.empty_like(a)
    for i in range(d):
        for j in range(d):
            out[i, j] = fn(a[i, j])
    return out


def mat_dagger(a):
    d = a.shape[0]
    out = np.empty_like(a)
    for i in range(d):
        for j in range(d):
            out[i, j] = a[j, i].conjugated()
    return out


def mat_eval(a, env, memo=None) -> np.ndarray:
    """Evaluate an Expr matrix; returns shape (n, d, d) for array envs."""
    if memo is None:
        memo = {}
    d = a.shape[0]
    shape = np.shape(env["p1"])
    out = np.empty(shape + (d, d), dtype=complex)
    for i in range(d):
        for j in range(d):
            out[..., i, j] = a[i, j].eval(env, memo)
    return out


# ---------------------------------------------------------------------------
# flag transforms (momentum-space shadow of the discrete substitutions)


@dataclass(frozen=True)
class FlagTransform:
    """Signature of a substitution map: p -> eta_p p, t -> eta_t t, m -> eta_m m,
    with optional complex conjugation (antilinear case)."""

    eta_p: int = 1
    eta_t: int = 1
    eta_m: int = 1
    conj: bool = False

    def compose(self, other: "FlagTransform") -> "FlagTransform":
        return FlagTransform(
            self.eta_p * other.eta_p,
            self.eta_t * other.eta_t,
            self.eta_m * other.eta_m,
            self.conj ^ other.conj,
        )

    @property
    def is_identity(self) -> bool:
        return self.eta_p == self.eta_t == self.eta_m == 1 and not self.conj

    def var_signs(self) -> dict:
        signs = {}
        if self.eta_p == -1:
            signs.update({"p1": -1, "p2": -1, "p3": -1})
        if self.eta_t == -1:
            signs["t"] = -1
        if self.eta_m == -1:
            signs["m"] = -1
        return signs


IDENTITY_FLAGS = FlagTransform()


# ---------------------------------------------------------------------------
# the operator type


@dataclass(frozen=True, eq=False)
class MomentumOperator:
    """Sum over derivative multi-indices of (Expr matrix) * d^alpha/dp^alpha."""

    dim: int
    terms: dict = field(default_factory=dict)

    @property
    def order(self) -> int:
        return max((index_order(a) for a in self.terms), default=0)

    def term(self, alpha: Index) -> np.ndarray:
        try:
            return self.terms[tuple(alpha)]
        except KeyError:
            d = self.dim
            out = np.empty((d, d), dtype=object)
            out[:, :] = ZERO
            return out

    def __add__(self, other: "MomentumOperator") -> "MomentumOperator":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        terms = dict(self.terms)
        for alpha, mat in other.terms.items():
            terms[alpha] = mat_add(terms[alpha], mat) if alpha in terms else mat
        return MomentumOperator(self.dim, terms)

    def __sub__(self, other: "MomentumOperator") -> "MomentumOperator":
        return self + other.scale(-1)

    def __neg__(self) -> "MomentumOperator":
        return self.scale(-1)

    def scale(self, factor) -> "MomentumOperator":
        factor = as_expr(factor)
        return MomentumOperator(
            self.dim, {a: mat_scale(m, factor) for a, m in self.terms.items()}
        )

    # constructors ---------------------------------------------------------

    @staticmethod
    def zero(dim: int) -> "MomentumOperator":
        return MomentumOperator(dim, {})

    @staticmethod
    def from_matrix(matrix, alpha: Index = ZERO_INDEX) -> "MomentumOperator":
        mat = (
            matrix
            if isinstance(matrix, np.ndarray) and matrix.dtype == object
            else expr_matrix(matrix)
        )
        return MomentumOperator(mat.shape[0], {tuple(alpha): mat})

    @staticmethod
    def identity(dim: int) -> "MomentumOperator":
        return MomentumOperator.from_matrix(identity_matrix(dim))

    @staticmethod
    def scalar(expr, dim: int) -> "MomentumOperator":
        return MomentumOperator.from_matrix(mat_scale(identity_matrix(dim), expr))

    @staticmethod
    def position(a: int, dim: int) -> "MomentumOperator":
        """x_a in momentum space: i d/dp_a with identity matrix coefficient."""
        alpha = tuple(1 if k == a - 1 else 0 for k in range(3))
        return MomentumOperator(
            dim, {alpha: mat_scale(identity_matrix(dim), I_UNIT)}
        )

    @staticmethod
    def momentum(a: int, dim: int) -> "MomentumOperator":
        return MomentumOperator.scalar(Var(f"p{a}"), dim)


# ---------------------------------------------------------------------------
# composition, brackets, flags


def _prune(dim: int, raw: dict) -> dict:
    memo = {}
    kept = {}
    for alpha, mat in raw.items():
        values = mat_eval(mat, _PRUNE_ENV, memo)
        if np.max(np.abs(values)) >= PRUNE_TOL:
            kept[alpha] = mat
    return kept


def _check_order(raw: dict):
    for alpha in raw:
        if index_order(alpha) > MAX_ORDER:
            raise OperatorOrderError(
                f"term of derivative order {index_order(alpha)} survives; "
                f"orders above {MAX_ORDER} are not supported"
            )


def _compose_raw(a: MomentumOperator, b: MomentumOperator) -> dict:
    out: dict = {}
    diff_cache: dict = {}
    for alpha, amat in a.terms.items():
        for beta, bmat in b.terms.items():
            for gamma in _subindices(alpha):
                delta = (alpha[0] - gamma[0], alpha[1] - gamma[1], alpha[2] - gamma[2])
                key = (id(bmat), delta)
                dmat = diff_cache.get(key)
                if dmat is None:
                    dmat = bmat
                    for k, reps in enumerate(delta):
                        for _ in range(reps):
                            dmat = mat_diff(dmat, f"p{k + 1}")
                    diff_cache[key] = dmat
                coeff = _multi_binom(alpha, gamma)
                contrib = mat_mul(amat, dmat)
                if coeff != 1:
                    contrib = mat_scale(contrib, coeff)
                target = index_add(gamma, beta)
                out[target] = (
                    mat_add(out[target], contrib) if target in out else contrib
                )
    return out


def compose(a: MomentumOperator, b: MomentumOperator) -> MomentumOperator:
    """Operator product with the full product rule."""
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    raw = _prune(a.dim, _compose_raw(a, b))
    _check_order(raw)
    return MomentumOperator(a.dim, raw)


def bracket(a: MomentumOperator, b: MomentumOperator, kind: str = "commutator") -> MomentumOperator:
    """AB -+ BA; cancellation of the top-order pieces is detected numerically."""
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    if kind == "commutator":
        sign = -1
    elif kind == "anticommutator":
        sign = 1
    else:
        raise ValueError("kind must be 'commutator' or 'anticommutator'")
    raw = _compose_raw(a, b)
    for alpha, mat in _compose_raw(b, a).items():
        scaled = mat_scale(mat, sign)
        raw[alpha] = mat_add(raw[alpha], scaled) if alpha in raw else scaled
    raw = _prune(a.dim, raw)
    _check_order(raw)
    return MomentumOperator(a.dim, raw)


def apply_flags(g: MomentumOperator, f: FlagTransform) -> MomentumOperator:
    """Conjugate by the substitution map R: returns R g R^-1.

    Coefficients get their variables sign-flipped (E is structurally even),
    each derivative picks up a factor eta_p, and for antilinear R every
    complex constant is conjugated.
    """
    signs = f.var_signs()
    terms = {}
    for alpha, mat in g.terms.items():
        new = mat_map(mat, lambda e: e.mapped(signs, f.conj))
        if f.eta_p == -1 and index_order(alpha) % 2 == 1:
            new = mat_scale(new, -1)
        terms[alpha] = new
    return MomentumOperator(g.dim, terms)


def adjoint(g: MomentumOperator) -> MomentumOperator:
    """Formal adjoint: (M d^alpha)^dagger = (-1)^|alpha| d^alpha M^dagger."""
    raw: dict = {}
    for alpha, mat in g.terms.items():
        dop = MomentumOperator(g.dim, {alpha: identity_matrix(g.dim)})
        contrib = _compose_raw(dop, MomentumOperator.from_matrix(mat_dagger(mat)))
        sign = -1 if index_order(alpha) % 2 else 1
        for idx, m in contrib.items():
            scaled = mat_scale(m, sign) if sign == -1 else m
            raw[idx] = mat_add(raw[idx], scaled) if idx in raw else scaled
    raw = _prune(g.dim, raw)
    _check_order(raw)
    return MomentumOperator(g.dim, raw)


def equal_at(a: MomentumOperator, b: MomentumOperator, points, tol: float = 1e-9):
    """Compare coefficient matrices per multi-index at every sample point.

    Returns (equal, max_residual).
    """
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    env = env_arrays(points)
    memo = {}
    residual = 0.0
    for alpha in set(a.terms) | set(b.terms):
        va = mat_eval(a.term(alpha), env, memo)
        vb = mat_eval(b.term(alpha), env, memo)
        residual = max(residual, float(np.max(np.abs(va - vb))))
    return residual < tol, residual


# ---------------------------------------------------------------------------
# fast numeric evaluation of operators and their brackets

@dataclass
class EvaluatedOperator:
    """Coefficient matrices (and their p-derivatives) stacked over samples."""

    dim: int
    coeffs: dict  # Index -> ndarray (n, d, d)
    dcoeffs: dict  # (var 0..2, Index) -> ndarray (n, d, d)


def eval_operator(g: MomentumOperator, env, derivatives: bool = True) -> EvaluatedOperator:
    memo = {}
    coeffs = {alpha: mat_eval(mat, env, memo) for alpha, mat in g.terms.items()}
    dcoeffs = {}
    if derivatives:
        for alpha, mat in g.terms.items():
            for k in range(3):
                dmat = mat_diff(mat, f"p{k + 1}")
                dcoeffs[(k, alpha)] = mat_eval(dmat, env, memo)
    return EvaluatedOperator(g.dim, coeffs, dcoeffs)


def compose_eval(a: EvaluatedOperator, b: EvaluatedOperator) -> dict:
    """Numeric composition for operators of derivative order <= 1."""
    out: dict = {}

    def acc(idx, val):
        if idx in out:
            out[idx] = out[idx] + val
        else:
            out[idx] = val

    for alpha, amat in a.coeffs.items():
        o = index_order(alpha)
        if o > 1:
            raise ValueError("numeric composition supports order <= 1 inputs")
        for beta, bmat in b.coeffs.items():
            acc(index_add(alpha, beta), amat @ bmat)
        if o == 1:
            var = alpha.index(1)
            for beta in b.coeffs:
                acc(beta, amat @ b.dcoeffs[(var, beta)])
    return out


def bracket_eval(a: EvaluatedOperator, b: EvaluatedOperator, kind: str = "commutator") -> dict:
    sign = -1 if kind == "commutator" else 1
    out = compose_eval(a, b)
    for alpha, mat in compose_eval(b, a).items():
        if alpha in out:
            out[alpha] = out[alpha] + sign * mat
        else:
            out[alpha] = sign * mat
    return out


def max_coeff_residual(lhs: dict, rhs: dict) -> float:
    residual = 0.0
    for alpha in set(lhs) | set(rhs):
        l = lhs.get(alpha)
        r = rhs.get(alpha)
        if l is None:
            residual = max(residual, float(np.max(np.abs(r))))
        elif r is None:
            residual = max(residual, float(np.max(np.abs(l))))
        else:
            residual = max(residual, float(np.max(np.abs(l - r))))
    return residual
