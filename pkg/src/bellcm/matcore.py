"""Small dense real-matrix primitives shared by the rest of the package.

Conventions: quadratures are ordered (q1, p1, ..., qn, pn) and the vacuum
covariance matrix is the identity (shot-noise units, hbar = 2). Libraries that
use the I/2 vacuum differ from these matrices by a factor of two.
"""

from __future__ import annotations

import enum

import numpy as np

OMEGA = np.array([[0.0, 1.0], [-1.0, 0.0]])
I2 = np.eye(2)
PI_Q = np.array([[1.0, 0.0], [0.0, 0.0]])
PI_P = np.array([[0.0, 0.0], [0.0, 1.0]])
Z = np.array([[1.0, 0.0], [0.0, -1.0]])
X1 = np.array([[0.0, 1.0], [1.0, 0.0]])
X2 = OMEGA


class Quadrature(enum.Enum):
    """Quadrature selected by a homodyne detector."""

    Q = "q"
    P = "p"

    @property
    def projector(self) -> np.ndarray:
        return PI_Q if self is Quadrature.Q else PI_P

    @property
    def index(self) -> int:
        return 0 if self is Quadrature.Q else 1


def symmetrize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.T)


def identity(n: int) -> np.ndarray:
    """The n-mode identity, a 2n x 2n matrix."""
    return np.eye(2 * n)


def symplectic_form(n: int) -> np.ndarray:
    """Return the n-mode symplectic form, n copies of [[0, 1], [-1, 0]]."""
    if n < 1:
        raise ValueError(f"symplectic form needs at least one mode, got n={n}")
    return np.kron(np.eye(n), OMEGA)


def _check_unit_interval(x: float, name: str) -> float:
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {x}")
    return x


def beam_splitter(T: float) -> np.ndarray:
    """Two-mode beam-splitter symplectic matrix of transmissivity ``T``.

    Maps input modes (1, 2) to output modes (+, -)::

        [[ sqrt(T) I,    sqrt(1-T) I],
         [-sqrt(1-T) I,  sqrt(T) I  ]]
    """
    T = _check_unit_interval(T, "transmissivity")
    t = np.sqrt(T)
    r = np.sqrt(1.0 - T)
    return np.block([[t * I2, r * I2], [-r * I2, t * I2]])


def phase_rotation(phi: float) -> np.ndarray:
    c, s = np.cos(phi), np.sin(phi)
    return np.array([[c, s], [-s, c]])


def squeezer(r: float) -> np.ndarray:
    return np.diag([np.exp(r), np.exp(-r)])


def direct_sum(*blocks: np.ndarray) -> np.ndarray:
    size = sum(b.shape[0] for b in blocks)
    out = np.zeros((size, size))
    k = 0
    for b in blocks:
        m = b.shape[0]
        out[k:k + m, k:k + m] = b
        k += m
    return out


def embed_last_two(S4: np.ndarray, n: int) -> np.ndarray:
    """Return ``I^(n) + S4`` (direct sum): S4 acts on the last two of n+2 modes."""
    S4 = np.asarray(S4, dtype=float)
    if S4.shape != (4, 4):
        raise ValueError(f"expected a 4x4 two-mode matrix, got shape {S4.shape}")
    if n < 0:
        raise ValueError(f"mode count must be non-negative, got {n}")
    return direct_sum(identity(n), S4)


def embed_mode_pair(S4: np.ndarray, n: int, i: int, j: int) -> np.ndarray:
    """Embed a two-mode symplectic acting on modes ``i`` and ``j`` of ``n``."""
    out = identity(n)
    idx = [2 * i, 2 * i + 1, 2 * j, 2 * j + 1]
    out[np.ix_(idx, idx)] = S4
    return out


def projected_pseudoinverse(B: np.ndarray, quad: Quadrature) -> np.ndarray:
    """Pseudoinverse of ``Pi B Pi`` for a 2x2 block, in closed form.

    ``Pi B Pi`` equals ``b Pi`` where ``b`` is the selected diagonal entry, and
    ``(b Pi)^+ = Pi / b``.

    Raises:
        ValueError: if the selected diagonal entry is not strictly positive,
            which no valid reduced covariance matrix allows.
    """
    B = np.asarray(B, dtype=float)
    if B.shape != (2, 2):
        raise ValueError(f"expected a 2x2 block, got shape {B.shape}")
    b = B[quad.index, quad.index]
    if not b > 0.0:
        raise ValueError(
            f"reduced CM must be positive definite: {quad.value}-variance is {b}"
        )
    return quad.projector / b


def min_sym_eigenvalue(M: np.ndarray, imag: np.ndarray | None = None) -> float:
    """Smallest eigenvalue of a symmetric matrix, or of the Hermitian ``M + i imag``.

    The Hermitian case is handled through the real symmetric embedding
    ``[[M, -imag], [imag, M]]``, which has the same spectrum with every
    eigenvalue doubled in multiplicity.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    if imag is None:
        H = M
    else:
        Y = np.asarray(imag, dtype=float)
        if Y.shape != M.shape:
            raise ValueError("real and imaginary parts must have the same shape")
        H = np.block([[M, -Y], [Y, M]])
    return float(np.linalg.eigvalsh(symmetrize(H))[0])


def is_symplectic(S: np.ndarray, atol: float = 1e-12) -> bool:
    n = S.shape[0] // 2
    om = symplectic_form(n)
    return bool(np.allclose(S @ om @ S.T, om, rtol=0.0, atol=atol))
