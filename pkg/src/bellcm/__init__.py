"""Covariance-matrix maps for Gaussian states under homodyne, Bell-like and heterodyne detection.

Units: the vacuum covariance matrix is the identity; quadratures are ordered
(q1, p1, ..., qn, pn).
"""

from .detection import (
    DegenerateMeasurementError,
    DetectionKind,
    DetectionSpec,
    GammaMatrix,
    InvalidEfficiencyError,
    KappaSet,
    bell_like,
    gamma_matrix,
    heterodyne,
    homodyne,
    kappa_matrices,
    remote_state_prep,
    standard_bell,
)
from .gaussian import (
    BlockPartition,
    CovarianceMatrix,
    InsufficientModesError,
    MalformedCMError,
    NotBonaFideError,
    ValidationReport,
    epr_cm,
    partition,
    permute_modes,
    random_cm,
    vacuum_cm,
    validate,
)
from .matcore import Quadrature

__version__ = "0.1.0"
