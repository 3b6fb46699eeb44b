"""Covariance matrices of Gaussian bosonic states."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import matcore
from .matcore import I2, Z

BONA_FIDE_TOL = 1e-9


class MalformedCMError(ValueError):
    """Input cannot be read as a 2n x 2n real matrix."""


class NotBonaFideError(ValueError):
    """Matrix violates the uncertainty principle V + i Omega >= 0."""


class InsufficientModesError(ValueError):
    pass


class CovarianceMatrix:
    """Immutable 2n x 2n covariance matrix in (q1, p1, ..., qn, pn) ordering.

    The stored matrix is always exactly symmetric: the input is replaced by
    ``(V + V^T) / 2``. With ``check=True`` (the default) construction rejects
    matrices that fail the uncertainty principle; pass ``check=False`` to
    experiment with unphysical inputs.
    """

    __slots__ = ("_matrix", "_raw_defect")

    def __init__(self, matrix, check: bool = True):
        m = np.array(matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise MalformedCMError(f"covariance matrix must be square, got shape {m.shape}")
        if m.shape[0] == 0 or m.shape[0] % 2:
            raise MalformedCMError(f"covariance matrix needs even positive dimension, got {m.shape[0]}")
        if not np.all(np.isfinite(m)):
            raise MalformedCMError("covariance matrix has non-finite entries")
        self._raw_defect = float(np.max(np.abs(m - m.T)))
        m = matcore.symmetrize(m)
        m.setflags(write=False)
        self._matrix = m
        if check:
            report = validate(self)
            if not report.passed:
                raise NotBonaFideError(
                    "matrix violates V + i Omega >= 0: min eigenvalue "
                    f"{report.min_eigenvalue:.3e} < -{BONA_FIDE_TOL:g}"
                )

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def n_modes(self) -> int:
        return self._matrix.shape[0] // 2

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._matrix.copy()
        return self._matrix.astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, CovarianceMatrix):
            return NotImplemented
        return np.array_equal(self._matrix, other._matrix)

    __hash__ = None

    def __repr__(self):
        return f"CovarianceMatrix(n_modes={self.n_modes})"

    def reduced(self, modes: Sequence[int]) -> "CovarianceMatrix":
        """Reduced CM of the listed modes (partial trace)."""
        idx = _quadrature_indices(modes)
        return CovarianceMatrix(self._matrix[np.ix_(idx, idx)], check=False)

    def __add__(self, other):
        # direct sum, V1 (+) V2
        if not isinstance(other, CovarianceMatrix):
            return NotImplemented
        return CovarianceMatrix(matcore.direct_sum(self._matrix, other._matrix), check=False)


def as_cm(V, check: bool = True) -> CovarianceMatrix:
    if isinstance(V, CovarianceMatrix):
        return V
    return CovarianceMatrix(V, check=check)


def _quadrature_indices(modes: Sequence[int]) -> list[int]:
    return [k for m in modes for k in (2 * m, 2 * m + 1)]


@dataclass(frozen=True)
class ValidationReport:
    symmetry_defect: float
    min_eigenvalue: float
    passed: bool

    def __str__(self):
        verdict = "bona fide" if self.passed else "NOT bona fide"
        return (
            f"symmetry_defect: {self.symmetry_defect:.3e}\n"
            f"min_uncertainty_eigenvalue: {self.min_eigenvalue:.6e}\n"
            f"verdict: {verdict}"
        )


def validate(V, tol: float = BONA_FIDE_TOL) -> ValidationReport:
    """Check the uncertainty principle ``V + i Omega >= 0``.

    Accepts a :class:`CovarianceMatrix` or any square array. The symmetry
    defect is measured on the matrix as given; the eigenvalue test runs on its
    symmetric part.
    """
    if isinstance(V, CovarianceMatrix):
        m = V.matrix
        defect = V._raw_defect
    else:
        m = np.asarray(V, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2 or m.size == 0:
            raise MalformedCMError(f"expected a 2n x 2n matrix, got shape {m.shape}")
        defect = float(np.max(np.abs(m - m.T)))
        m = matcore.symmetrize(m)
    n = m.shape[0] // 2
    lam = matcore.min_sym_eigenvalue(m, matcore.symplectic_form(n))
    return ValidationReport(defect, lam, lam >= -tol)


@dataclass(frozen=True)
class BlockPartition:
    """Blocks of an (n+2)-mode CM relative to its last two modes.

    Layout::

        [[A,    C1,  C2],
         [C1^T, B1,  D ],
         [C2^T, D^T, B2]]
    """

    A: np.ndarray
    C1: np.ndarray
    C2: np.ndarray
    B1: np.ndarray
    B2: np.ndarray
    D: np.ndarray

    @property
    def n(self) -> int:
        """Number of surviving modes."""
        return self.A.shape[0] // 2

    @property
    def beta(self) -> tuple[float, float, float]:
        """(beta1, beta2, beta3) read from B1 = [[beta1, beta3], [beta3, beta2]]."""
        return self.B1[0, 0], self.B1[1, 1], self.B1[0, 1]

    @property
    def beta_prime(self) -> tuple[float, float, float]:
        return self.B2[0, 0], self.B2[1, 1], self.B2[0, 1]

    @property
    def delta(self) -> tuple[float, float, float, float]:
        """(delta1, delta2, delta3, delta4) read from D = [[d1, d3], [d4, d2]]."""
        return self.D[0, 0], self.D[1, 1], self.D[0, 1], self.D[1, 0]

    @property
    def C(self) -> np.ndarray:
        return np.hstack([self.C1, self.C2])

    @property
    def B(self) -> np.ndarray:
        """Reduced CM of the two measured modes."""
        return np.block([[self.B1, self.D], [self.D.T, self.B2]])

    def reassemble(self) -> np.ndarray:
        return np.block(
            [
                [self.A, self.C1, self.C2],
                [self.C1.T, self.B1, self.D],
                [self.C2.T, self.D.T, self.B2],
            ]
        )


def partition(V) -> BlockPartition:
    """Split a CM of n+2 modes (n >= 1) into the blocks used by Bell-like maps."""
    m = as_cm(V, check=False).matrix
    n_modes = m.shape[0] // 2
    if n_modes < 3:
        raise InsufficientModesError(
            f"need at least 3 modes (one surviving, two measured), got {n_modes}"
        )
    k = m.shape[0] - 4
    return BlockPartition(
        A=m[:k, :k].copy(),
        C1=m[:k, k:k + 2].copy(),
        C2=m[:k, k + 2:].copy(),
        B1=m[k:k + 2, k:k + 2].copy(),
        B2=m[k + 2:, k + 2:].copy(),
        D=m[k:k + 2, k + 2:].copy(),
    )


def split_last_mode(V) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return ``(A, C, B)`` for a CM of n+1 modes, B being the last mode's 2x2 block."""
    m = as_cm(V, check=False).matrix
    if m.shape[0] < 4:
        raise InsufficientModesError(
            f"need at least 2 modes (one surviving, one measured), got {m.shape[0] // 2}"
        )
    return m[:-2, :-2].copy(), m[:-2, -2:].copy(), m[-2:, -2:].copy()


def permute_modes(V, order: Sequence[int]) -> CovarianceMatrix:
    """Reorder modes so that new mode k is old mode ``order[k]``."""
    cm = as_cm(V, check=False)
    if sorted(order) != list(range(cm.n_modes)):
        raise ValueError(f"{list(order)} is not a permutation of {cm.n_modes} modes")
    idx = _quadrature_indices(order)
    return CovarianceMatrix(cm.matrix[np.ix_(idx, idx)], check=False)


def vacuum_cm(n: int) -> CovarianceMatrix:
    if n < 1:
        raise ValueError(f"mode count must be >= 1, got {n}")
    return CovarianceMatrix(np.eye(2 * n), check=False)


def epr_cm(mu: float) -> CovarianceMatrix:
    """Two-mode squeezed vacuum ``[[mu I, c Z], [c Z, mu I]]`` with ``c = sqrt(mu^2 - 1)``."""
    mu = float(mu)
    if not mu >= 1.0:
        raise ValueError(f"EPR variance mu must be >= 1, got {mu}")
    c = np.sqrt(mu * mu - 1.0)
    return CovarianceMatrix(np.block([[mu * I2, c * Z], [c * Z, mu * I2]]), check=False)


def random_symplectic(n: int, rng: np.random.Generator, layers: int = 2) -> np.ndarray:
    """Random symplectic matrix from phase rotations, squeezers and beam splitters."""
    S = matcore.identity(n)
    for _ in range(layers):
        local = [
            matcore.squeezer(rng.uniform(-1.0, 1.0)) @ matcore.phase_rotation(rng.uniform(0, 2 * np.pi))
            for _ in range(n)
        ]
        S = matcore.direct_sum(*local) @ S
        if n > 1:
            for i in rng.permutation(n - 1):
                bs = matcore.beam_splitter(rng.uniform(0.0, 1.0))
                S = matcore.embed_mode_pair(bs, n, i, i + 1) @ S
    return S


def random_cm(n: int, seed: int) -> CovarianceMatrix:
    """Deterministic random bona fide CM: ``S diag(nu) S^T`` with thermal nu in [1, 3]."""
    if n < 1:
        raise ValueError(f"mode count must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    S = random_symplectic(n, rng)
    nu = np.repeat(rng.uniform(1.0, 3.0, size=n), 2)
    return CovarianceMatrix(S @ np.diag(nu) @ S.T, check=False)
