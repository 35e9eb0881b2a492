"""Gamma-matrix bases, spin tensors, Casimirs and spectral projectors.

The canonical construction starts from five mutually anticommuting hermitian
4x4 matrices built as Pauli tensor products:

    D1 = s1 x s1,  D2 = s1 x s2,  D3 = s1 x s3,  D4 = s2 x 1,  D5 = s3 x 1.

The 4x4 basis is gamma0 = D5 (already diagonal, diag(1,1,-1,-1)) and
gamma_k = i*D_k for k = 1..4, so gamma0 is hermitian with square +1 and the
spatial gammas are anti-hermitian with square -1.  The 8x8 basis doubles up:
Gamma0 = s3 x 1_4 and Gamma_k = s1 x (i*D_k); the extra anticommuting element
s2 x 1_4 completes a six-element set used by the commutant scan.

All entries are exact integers or half-integers times i, so the basis
invariants hold with zero floating error.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, reduce

import numpy as np

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (I2, SX, SY, SZ)

# metric for indices 0..4: {gamma_mu, gamma_nu} = 2 g_mu_nu
METRIC = np.diag([1.0, -1.0, -1.0, -1.0, -1.0])

EPSILON = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    EPSILON[_i, _j, _k] = 1.0
    EPSILON[_j, _i, _k] = -1.0


def kron(*mats) -> np.ndarray:
    return reduce(np.kron, mats)


DELTAS = (
    kron(SX, SX),
    kron(SX, SY),
    kron(SX, SZ),
    kron(SY, I2),
    kron(SZ, I2),
)


@dataclass(frozen=True)
class CliffordBasis:
    """gamma0 plus four 'spatial' gammas (index 4 pairs with the mass).

    For dim 8 `extra` holds the sixth mutually anticommuting element used by
    the commutant scan; it is None for dim 4.
    """

    dim: int
    gamma0: np.ndarray
    gammas: tuple  # gamma_1..gamma_4
    extra: np.ndarray | None = None

    def gamma(self, mu: int) -> np.ndarray:
        if mu == 0:
            return self.gamma0
        return self.gammas[mu - 1]

    def anticommuting_set(self) -> list:
        """All mutually anticommuting hermitian involutions backing the basis."""
        elems = [self.gamma0] + [-1j * g for g in self.gammas]
        if self.extra is not None:
            elems.append(self.extra)
        return elems


def build_basis(dim: int) -> CliffordBasis:
    """Construct the documented canonical basis for dim 4 or 8."""
    if dim == 4:
        basis = CliffordBasis(
            4, DELTAS[4].copy(), tuple(1j * DELTAS[k] for k in range(4))
        )
    elif dim == 8:
        eye4 = np.eye(4, dtype=complex)
        basis = CliffordBasis(
            8,
            np.kron(SZ, eye4),
            tuple(np.kron(SX, 1j * DELTAS[k]) for k in range(4)),
            extra=np.kron(SY, eye4),
        )
    else:
        raise ValueError(f"unsupported dimension {dim}; expected 4 or 8")
    _validate(basis)
    return basis


def _validate(basis: CliffordBasis):
    eye = np.eye(basis.dim, dtype=complex)
    g0 = basis.gamma0
    if not np.array_equal(g0, g0.conj().T):
        raise AssertionError("gamma0 must be hermitian")
    if not np.array_equal(g0 @ g0, eye):
        raise AssertionError("gamma0 squared must be the identity")
    for mu in range(5):
        for nu in range(5):
            anti = basis.gamma(mu) @ basis.gamma(nu) + basis.gamma(nu) @ basis.gamma(mu)
            if not np.array_equal(anti, 2 * METRIC[mu, nu] * eye):
                raise AssertionError(f"anticommutator ({mu},{nu}) violates the metric")
    for gk in basis.gammas:
        if not np.array_equal(gk, -gk.conj().T):
            raise AssertionError("spatial gammas must be anti-hermitian")


@dataclass(frozen=True)
class SpinGenerators:
    """Rotation generators S_mu_nu plus the commuting su(2) triples."""

    dim: int
    table: dict  # (mu, nu) with mu < nu -> ndarray
    S: tuple  # (S_1, S_2, S_3)
    T: tuple
    s_squared: np.ndarray
    t_squared: np.ndarray

    def entry(self, mu: int, nu: int) -> np.ndarray:
        if mu == nu:
            return np.zeros((self.dim, self.dim), dtype=complex)
        if mu < nu:
            return self.table[(mu, nu)]
        return -self.table[(nu, mu)]


def spin_tensor(basis: CliffordBasis) -> SpinGenerators:
    """S_mu_nu = i/4 [gamma_mu, gamma_nu] over indices 0..4, with the split
    S_a = (eps_abc S_bc / 2 + S_4a) / 2 and T_a likewise with a minus sign."""
    table = {}
    for mu in range(5):
        for nu in range(mu + 1, 5):
            gm, gn = basis.gamma(mu), basis.gamma(nu)
            table[(mu, nu)] = 0.25j * (gm @ gn - gn @ gm)

    zero = np.zeros((basis.dim, basis.dim), dtype=complex)

    def entry(mu, nu):
        if mu == nu:
            return zero
        if mu < nu:
            return table[(mu, nu)]
        return -table[(nu, mu)]

    S, T = [], []
    for a in range(1, 4):
        rot = sum(
            EPSILON[a - 1, b - 1, c - 1] * entry(b, c)
            for b in range(1, 4)
            for c in range(1, 4)
        )
        S.append(0.5 * (0.5 * rot + entry(4, a)))
        T.append(0.5 * (0.5 * rot - entry(4, a)))
    s_sq = sum(s @ s for s in S)
    t_sq = sum(t @ t for t in T)
    return SpinGenerators(basis.dim, table, tuple(S), tuple(T), s_sq, t_sq)


@lru_cache(maxsize=None)
def cached_basis(dim: int) -> CliffordBasis:
    return build_basis(dim)


@lru_cache(maxsize=None)
def cached_spin(dim: int) -> SpinGenerators:
    return spin_tensor(cached_basis(dim))


def _snap_casimir(value: float, tol: float) -> float:
    """Snap an eigenvalue to the nearest s(s+1) with s a half-integer >= 0."""
    s = 0.5 * (-1.0 + np.sqrt(max(1.0 + 4.0 * value, 0.0)))
    s0 = round(2.0 * s) / 2.0
    snapped = s0 * (s0 + 1.0)
    if abs(value - snapped) > tol:
        raise AssertionError(
            f"eigenvalue {value} is not within {tol} of an s(s+1) value"
        )
    return snapped


def casimir_spectrum(gens: SpinGenerators, tol: float = 1e-9) -> dict:
    """Eigenvalue histograms of S^2 and T^2, snapped to s(s+1) values."""
    out = {}
    for name, mat in (("s_squared", gens.s_squared), ("t_squared", gens.t_squared)):
        values = np.linalg.eigvalsh(mat)
        hist: dict = {}
        for v in values:
            key = _snap_casimir(float(v), tol)
            hist[key] = hist.get(key, 0) + 1
        out[name] = hist
    return out


def spectral_projector(matrix: np.ndarray, eigenvalue: float, tol: float = 1e-8) -> np.ndarray:
    """Orthogonal projector onto the eigenspace of a hermitian matrix."""
    matrix = np.asarray(matrix, dtype=complex)
    if np.max(np.abs(matrix - matrix.conj().T)) > 1e-12:
        raise ValueError("spectral_projector expects a hermitian matrix")
    values, vectors = np.linalg.eigh(matrix)
    mask = np.abs(values - eigenvalue) <= tol
    if not np.any(mask):
        nearest = values[np.argmin(np.abs(values - eigenvalue))]
        raise ValueError(
            f"{eigenvalue} is not an eigenvalue within tol={tol}; "
            f"nearest is {nearest}"
        )
    sel = vectors[:, mask]
    return sel @ sel.conj().T


@dataclass(frozen=True)
class CommutantScan:
    """Which antisymmetrized bilinears commute with the diagonal Hamiltonian."""

    total: int
    count: int
    members: tuple  # index pairs (A, B) into the anticommuting set
    max_residual: float


def commutant_scan(basis: CliffordBasis, points=None, tol: float = 1e-12) -> CommutantScan:
    """Scan the bilinears of the six-element anticommuting set against Gamma0*E.

    Element 0 is Gamma0 itself, 1..4 are the spatial gammas (as hermitian
    involutions) and 5 is the extra doubling element; the scan reports which
    of the 15 products S_AB = i/4 [e_A, e_B] commute with the canonical
    Hamiltonian at every sample.
    """
    if basis.dim != 8:
        raise ValueError("the commutant scan is defined for the dim-8 basis")
    if points is None:
        from .sampling import sample_points

        points = sample_points(count=5)
    elems = basis.anticommuting_set()
    n = len(elems)
    members = []
    worst = 0.0
    for a in range(n):
        for b in range(a + 1, n):
            bil = 0.25j * (elems[a] @ elems[b] - elems[b] @ elems[a])
            residual = 0.0
            for pt in points:
                h = basis.gamma0 * pt.energy
                residual = max(residual, float(np.max(np.abs(bil @ h - h @ bil))))
            if residual < tol:
                members.append((a, b))
                worst = max(worst, residual)
    return CommutantScan(n * (n - 1) // 2, len(members), tuple(members), worst)
