"""
Dense complex linear algebra used by the automata and the equivalence engine.

Matrices are plain ``numpy`` complex arrays.  Spans of matrices are kept as
orthonormal bases of their row-major vectorizations, built incrementally by
modified Gram-Schmidt with one re-orthogonalization pass.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

EPS_UNITARY = 1e-8
EPS_SPAN = 1e-9
EPS_PROB = 1e-9


def as_matrix(M) -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    return M


def _square(M) -> np.ndarray:
    M = as_matrix(M)
    if M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    return M


def dagger(M: np.ndarray) -> np.ndarray:
    return M.conj().T


def check_unitary(M, eps: float = EPS_UNITARY) -> bool:
    """True iff every entry of M^dagger M - I is at most `eps` in modulus."""
    M = _square(M)
    dev = dagger(M) @ M - np.eye(M.shape[0])
    return bool(np.max(np.abs(dev)) <= eps)


def diagonal_sum(A, B) -> np.ndarray:
    """Block-diagonal matrix with A in the top-left corner and B bottom-right."""
    A = _square(A)
    B = _square(B)
    m, n = A.shape[0], B.shape[0]
    out = np.zeros((m + n, m + n), dtype=complex)
    out[:m, :m] = A
    out[m:, m:] = B
    return out


def projector(indices, n: int) -> np.ndarray:
    """Diagonal 0/1 projector onto the basis states listed in `indices`."""
    d = np.zeros(n)
    d[list(indices)] = 1.0
    return np.diag(d).astype(complex)


def vectorize(M) -> np.ndarray:
    return _square(M).reshape(-1)


def unvectorize(v: np.ndarray) -> np.ndarray:
    n = int(round(np.sqrt(v.size)))
    return np.asarray(v).reshape(n, n)


@dataclass(frozen=True)
class MatrixSpanBasis:
    """
    Orthonormal basis of a subspace of n x n complex matrices.

    ``vectors`` has one row per basis element (length n**2, row-major
    vectorization).  ``words[i]`` is the input word whose matrix contributed
    row ``i``.
    """

    order: int
    vectors: np.ndarray = field(default=None, repr=False)
    words: tuple = ()

    def __post_init__(self):
        if self.vectors is None:
            v = np.zeros((0, self.order * self.order), dtype=complex)
        else:
            v = np.array(self.vectors, dtype=complex).reshape(-1, self.order * self.order)
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)
        if len(self.words) != v.shape[0]:
            raise ValueError("one provenance word per basis vector is required")

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    @property
    def ambient_dim(self) -> int:
        return self.order * self.order

    def __len__(self):
        return self.dim

    def matrices(self):
        return [unvectorize(v) for v in self.vectors]

    def residual(self, M):
        """Return (coefficients, residual vector) of vectorize(M) against the basis."""
        x = vectorize(M).astype(complex, copy=True)
        coef = np.zeros(self.dim, dtype=complex)
        # two passes of modified Gram-Schmidt
        for _ in range(2):
            for i, q in enumerate(self.vectors):
                c = np.vdot(q, x)
                coef[i] += c
                x -= c * q
        return coef, x


def _scale(M) -> float:
    return max(1.0, float(np.linalg.norm(vectorize(M))))


def span_add(basis: MatrixSpanBasis, M, word=None, eps: float = EPS_SPAN):
    """
    Try to extend `basis` by the matrix M.

    Returns ``(new_basis, added)``; the input basis is never modified.
    """
    M = _square(M)
    if M.shape[0] != basis.order:
        raise ValueError(f"matrix order {M.shape[0]} does not match basis order {basis.order}")
    _, r = basis.residual(M)
    nr = np.linalg.norm(r)
    if nr <= eps * _scale(M) or basis.dim >= basis.ambient_dim:
        return basis, False
    vectors = np.vstack([basis.vectors, (r / nr)[None, :]])
    return MatrixSpanBasis(basis.order, vectors, basis.words + (word,)), True


def span_contains(basis: MatrixSpanBasis, M, eps: float = EPS_SPAN):
    """
    Membership test.  Returns ``(inside, coefficients)`` where the coefficients
    expand M over the orthonormal basis vectors.
    """
    M = _square(M)
    if M.shape[0] != basis.order:
        raise ValueError(f"matrix order {M.shape[0]} does not match basis order {basis.order}")
    coef, r = basis.residual(M)
    return bool(np.linalg.norm(r) <= eps * _scale(M)), coef


def random_unitary(n: int, seed=None) -> np.ndarray:
    """
    Haar-distributed unitary of order n from the QR factorization of a
    complex Gaussian matrix, with the phases of R's diagonal absorbed into Q.

    `seed` may be an int or a ``numpy.random.Generator``.
    """
    if n < 1:
        raise ValueError("order must be positive")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_state(n: int, seed=None) -> np.ndarray:
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v)
