"""Closed-form conditional covariance matrices after Gaussian detections.

Every map takes an input CM whose measured modes are the last ones and
returns the CM of the surviving modes. The result does not depend on the
measurement outcome, so none of the maps take one.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import matcore
from .gaussian import CovarianceMatrix, as_cm, partition, split_last_mode
from .matcore import I2, OMEGA, X1, X2, Z, Quadrature

DEGENERACY_TOL = 1e-12


class InvalidEfficiencyError(ValueError):
    pass


class DegenerateMeasurementError(ValueError):
    """The measured block is not positive definite, so the input is not a valid CM."""


def check_efficiency(eta: float, name: str = "eta") -> float:
    eta = float(eta)
    if not 0.0 < eta <= 1.0:
        raise InvalidEfficiencyError(f"{name} must lie in (0, 1], got {eta}")
    return eta


def efficiency_noise(eta: float) -> float:
    """Added variance (1 - eta) / eta of a detector with efficiency ``eta``."""
    return (1.0 - eta) / eta


def efficiency_shift(eta: float, eta_prime: float) -> np.ndarray:
    """diag((1-eta)/eta, (1-eta')/eta')."""
    return np.diag([efficiency_noise(eta), efficiency_noise(eta_prime)])


def _output(m: np.ndarray) -> CovarianceMatrix:
    return CovarianceMatrix(m, check=False)


def homodyne(V, quad: Quadrature = Quadrature.Q, eta: float = 1.0, check: bool = True) -> CovarianceMatrix:
    """Homodyne the last mode in ``quad`` with detector efficiency ``eta``.

    Returns ``A - (b + (1-eta)/eta)^-1 C Pi C^T``, where ``b`` is the measured
    variance of the last mode and ``Pi`` projects on the measured quadrature.
    """
    eta = check_efficiency(eta)
    A, C, B = split_last_mode(as_cm(V, check=check))
    b = B[quad.index, quad.index]
    if not b > 0.0:
        raise DegenerateMeasurementError(
            f"measured {quad.value}-variance of the last mode must be positive, got {b}"
        )
    if eta == 1.0:
        G = matcore.projected_pseudoinverse(B, quad)
    else:
        G = quad.projector / (b + efficiency_noise(eta))
    return _output(matcore.symmetrize(A - C @ G @ C.T))


@dataclass(frozen=True)
class GammaMatrix:
    """Symmetric 2x2 matrix [[gamma1, gamma3], [gamma3, gamma2]] of a Bell-like detection."""

    gamma1: float
    gamma2: float
    gamma3: float

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.gamma1, self.gamma3], [self.gamma3, self.gamma2]])

    @property
    def det(self) -> float:
        return self.gamma1 * self.gamma2 - self.gamma3 * self.gamma3

    def with_efficiency(self, eta: float = 1.0, eta_prime: float = 1.0) -> "GammaMatrix":
        """Shift the diagonal by the detector noise: gamma1 + (1-eta)/eta, gamma2 + (1-eta')/eta'."""
        eta = check_efficiency(eta, "eta")
        eta_prime = check_efficiency(eta_prime, "eta_prime")
        return GammaMatrix(
            self.gamma1 + efficiency_noise(eta),
            self.gamma2 + efficiency_noise(eta_prime),
            self.gamma3,
        )

    def require_positive(self, tol: float = DEGENERACY_TOL) -> None:
        if not self.gamma1 > tol:
            raise DegenerateMeasurementError(
                f"gamma1 = {self.gamma1:.3e} is not positive; measured modes do not form a valid CM"
            )
        if not self.det > tol:
            raise DegenerateMeasurementError(
                f"det(gamma) = {self.det:.3e} is not positive; measured modes do not form a valid CM"
            )


@dataclass(frozen=True)
class KappaSet:
    K11: np.ndarray
    K22: np.ndarray
    K12: np.ndarray

    @property
    def K21(self) -> np.ndarray:
        return self.K12.T

    def __getitem__(self, ij: tuple[int, int]) -> np.ndarray:
        return {(1, 1): self.K11, (2, 2): self.K22, (1, 2): self.K12, (2, 1): self.K21}[ij]


def gamma_matrix(p, T: float) -> GammaMatrix:
    """Gamma matrix of the two measured modes for a beam splitter of transmissivity T."""
    T = matcore._check_unit_interval(T, "transmissivity")
    beta1, beta2, beta3 = p.beta
    beta1p, beta2p, beta3p = p.beta_prime
    delta1, delta2, delta3, delta4 = p.delta
    r = np.sqrt(T * (1.0 - T))
    return GammaMatrix(
        gamma1=(1.0 - T) * beta1 + T * beta1p - 2.0 * r * delta1,
        gamma2=T * beta2 + (1.0 - T) * beta2p + 2.0 * r * delta2,
        gamma3=r * (beta3p - beta3) - (1.0 - T) * delta3 + T * delta4,
    )


def kappa_matrices(g: GammaMatrix, T: float) -> KappaSet:
    T = matcore._check_unit_interval(T, "transmissivity")
    r = np.sqrt(T * (1.0 - T))
    g1, g2, g3 = g.gamma1, g.gamma2, g.gamma3
    return KappaSet(
        K11=np.array([[(1.0 - T) * g2, r * g3], [r * g3, T * g1]]),
        K22=np.array([[T * g2, -r * g3], [-r * g3, (1.0 - T) * g1]]),
        K12=np.array([[-r * g2, (1.0 - T) * g3], [-T * g3, r * g1]]),
    )


def _bell_correction(C1, C2, kappa: KappaSet, det: float) -> np.ndarray:
    s = C1 @ kappa.K11 @ C1.T + C2 @ kappa.K22 @ C2.T
    cross = C1 @ kappa.K12 @ C2.T
    return (s + cross + cross.T) / det


def bell_like(
    V, T: float = 0.5, eta: float = 1.0, eta_prime: float = 1.0, check: bool = True
) -> CovarianceMatrix:
    """Bell-like detection of the last two modes.

    The two modes are mixed on a beam splitter of transmissivity ``T``; output
    mode "-" is homodyned in q with efficiency ``eta`` and output mode "+" in p
    with efficiency ``eta_prime``.
    """
    p = partition(as_cm(V, check=check))
    g = gamma_matrix(p, T).with_efficiency(eta, eta_prime)
    g.require_positive()
    kappa = kappa_matrices(g, T)
    return _output(matcore.symmetrize(p.A - _bell_correction(p.C1, p.C2, kappa, g.det)))


def standard_bell_gamma(p) -> np.ndarray:
    """Gamma matrix of the balanced beam splitter, ``(Z B1 Z + B2 - Z D - D^T Z) / 2``."""
    return 0.5 * (Z @ p.B1 @ Z + p.B2 - Z @ p.D - p.D.T @ Z)


def standard_bell(V, eta: float = 1.0, eta_prime: float = 1.0, check: bool = True) -> CovarianceMatrix:
    """Bell detection with a balanced beam splitter, via ``K_ij = X_i^T gamma X_j / 2``."""
    p = partition(as_cm(V, check=check))
    eta = check_efficiency(eta, "eta")
    eta_prime = check_efficiency(eta_prime, "eta_prime")
    gm = standard_bell_gamma(p) + efficiency_shift(eta, eta_prime)
    g = GammaMatrix(gm[0, 0], gm[1, 1], 0.5 * (gm[0, 1] + gm[1, 0]))
    g.require_positive()
    gm = g.matrix
    X = (X1, X2)
    C = (p.C1, p.C2)
    corr = sum(C[i] @ (X[i].T @ gm @ X[j]) @ C[j].T for i in range(2) for j in range(2))
    return _output(matcore.symmetrize(p.A - corr / (2.0 * g.det)))


def heterodyne_theta(B1: np.ndarray, eta: float = 1.0, eta_prime: float = 1.0) -> float:
    """theta1(eta, eta') = det B1 + Tr B1 + 1 + 4 det Phi + 2 Tr Phi + 2 Tr(Omega Phi Omega^T B1).

    Equals four times det(gamma + Phi) for a heterodyned mode.
    """
    phi = efficiency_shift(eta, eta_prime)
    theta = np.linalg.det(B1) + np.trace(B1) + 1.0
    return float(
        theta + 4.0 * np.linalg.det(phi) + 2.0 * np.trace(phi) + 2.0 * np.trace(OMEGA @ phi @ OMEGA.T @ B1)
    )


def heterodyne(V, eta: float = 1.0, eta_prime: float = 1.0, check: bool = True) -> CovarianceMatrix:
    """Heterodyne the last mode: a balanced Bell detection against a vacuum ancilla.

    Returns ``A - C1 [Omega (B1 + 2 Phi) Omega^T + I] C1^T / theta1(eta, eta')``.
    ``eta`` is the q-detector efficiency, ``eta_prime`` the p-detector one.
    """
    eta = check_efficiency(eta, "eta")
    eta_prime = check_efficiency(eta_prime, "eta_prime")
    A, C1, B1 = split_last_mode(as_cm(V, check=check))
    phi = efficiency_shift(eta, eta_prime)
    # gamma = (Z B1 Z + I)/2 + Phi for the vacuum-padded input
    g = GammaMatrix(0.5 * (B1[0, 0] + 1.0) + phi[0, 0], 0.5 * (B1[1, 1] + 1.0) + phi[1, 1], -0.5 * B1[0, 1])
    g.require_positive()
    theta = heterodyne_theta(B1, eta, eta_prime)
    bracket = OMEGA @ (B1 + 2.0 * phi) @ OMEGA.T + I2
    return _output(matcore.symmetrize(A - C1 @ bracket @ C1.T / theta))


def remote_state_prep(mu: float, quad: Quadrature = Quadrature.Q, eta: float = 1.0) -> CovarianceMatrix:
    """CM left on one half of an EPR pair after homodyning the other half.

    For q-detection: ``diag((eta + (1-eta) mu) / (eta mu + 1 - eta), mu)``;
    p-detection swaps the two entries.
    """
    mu = float(mu)
    if not mu >= 1.0:
        raise ValueError(f"EPR variance mu must be >= 1, got {mu}")
    eta = check_efficiency(eta)
    squeezed = (eta + (1.0 - eta) * mu) / (eta * mu + 1.0 - eta)
    diag = [squeezed, mu] if quad is Quadrature.Q else [mu, squeezed]
    return _output(np.diag(diag))


class DetectionKind(enum.Enum):
    HOMODYNE_Q = "homodyne-q"
    HOMODYNE_P = "homodyne-p"
    BELL_LIKE = "bell"
    STANDARD_BELL = "standard-bell"
    HETERODYNE = "heterodyne"

    @property
    def measured_modes(self) -> int:
        return 2 if self in (DetectionKind.BELL_LIKE, DetectionKind.STANDARD_BELL) else 1


@dataclass(frozen=True)
class DetectionSpec:
    """A detection to apply to the last mode(s) of a CM.

    ``T`` is set only for Bell-like detection. Homodyne detections use
    ``eta`` alone; ``eta_prime`` must stay at 1 for them.
    """

    kind: DetectionKind
    T: float | None = None
    eta: float = 1.0
    eta_prime: float = 1.0

    def __post_init__(self):
        if (self.T is not None) != (self.kind is DetectionKind.BELL_LIKE):
            raise ValueError(f"transmissivity is required for, and only for, Bell-like detection (kind={self.kind.value})")
        if self.T is not None:
            matcore._check_unit_interval(self.T, "transmissivity")
        check_efficiency(self.eta, "eta")
        check_efficiency(self.eta_prime, "eta_prime")
        if self.kind in (DetectionKind.HOMODYNE_Q, DetectionKind.HOMODYNE_P) and self.eta_prime != 1.0:
            raise ValueError("homodyne detection takes a single efficiency; eta_prime does not apply")

    def apply(self, V, check: bool = True) -> CovarianceMatrix:
        k = self.kind
        if k is DetectionKind.HOMODYNE_Q:
            return homodyne(V, Quadrature.Q, self.eta, check=check)
        if k is DetectionKind.HOMODYNE_P:
            return homodyne(V, Quadrature.P, self.eta, check=check)
        if k is DetectionKind.BELL_LIKE:
            return bell_like(V, self.T, self.eta, self.eta_prime, check=check)
        if k is DetectionKind.STANDARD_BELL:
            return standard_bell(V, self.eta, self.eta_prime, check=check)
        return heterodyne(V, self.eta, self.eta_prime, check=check)
