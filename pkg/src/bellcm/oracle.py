"""Stepwise reference pipeline used to certify the closed forms in ``detection``.

Nothing here uses the closed-form shortcuts. Inefficient detectors are
modelled literally (vacuum ancilla, beam splitter, partial trace) and every
conditioning step goes through a general SVD pseudoinverse.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import matcore
from .detection import check_efficiency
from .gaussian import BlockPartition, CovarianceMatrix, as_cm, partition, split_last_mode
from .matcore import I2, Quadrature

SVD_CUTOFF = 1e-12


def general_pseudoinverse(M) -> np.ndarray:
    """Moore-Penrose pseudoinverse via SVD.

    Singular values below ``SVD_CUTOFF * sigma_max`` are treated as zero.
    """
    M = np.atleast_2d(np.asarray(M, dtype=float))
    U, s, Vt = np.linalg.svd(M, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros(M.T.shape)
    keep = s > SVD_CUTOFF * s[0]
    inv = np.zeros_like(s)
    inv[keep] = 1.0 / s[keep]
    return (Vt.T * inv) @ U.T


@dataclass
class StepTrace:
    """Labeled intermediate CMs, in the order they were produced."""

    steps: list[tuple[str, np.ndarray]] = field(default_factory=list)

    def add(self, label: str, m: np.ndarray) -> None:
        self.steps.append((label, np.array(m, dtype=float)))

    def extend(self, other: "StepTrace", prefix: str) -> None:
        for label, m in other.steps:
            self.steps.append((f"{prefix}/{label}", m))

    def labels(self) -> list[str]:
        return [label for label, _ in self.steps]

    def __getitem__(self, label: str) -> np.ndarray:
        for name, m in self.steps:
            if name == label:
                return m
        raise KeyError(label)

    def to_dict(self) -> dict:
        return {
            "steps": [
                {"label": label, "n_modes": m.shape[0] // 2, "matrix": m.tolist()}
                for label, m in self.steps
            ]
        }


def condition_last_mode(m: np.ndarray, quad: Quadrature) -> np.ndarray:
    """Ideal homodyne of the last mode: ``A - C (Pi B Pi)^+ C^T``."""
    A, C, B = m[:-2, :-2], m[:-2, -2:], m[-2:, -2:]
    P = quad.projector
    return A - C @ general_pseudoinverse(P @ B @ P) @ C.T


def homodyne_stepwise(V, quad: Quadrature = Quadrature.Q, eta: float = 1.0) -> tuple[CovarianceMatrix, StepTrace]:
    """Homodyne the last mode through an explicit loss beam splitter."""
    eta = check_efficiency(eta)
    cm = as_cm(V, check=False)
    split_last_mode(cm)  # mode-count check
    n1 = cm.n_modes
    trace = StepTrace()
    trace.add("input", cm.matrix)

    dilated = matcore.direct_sum(cm.matrix, I2)
    trace.add("dilated", dilated)

    S = matcore.embed_last_two(matcore.beam_splitter(eta), n1 - 1)
    mixed = S @ dilated @ S.T
    trace.add("loss_beam_splitter", mixed)

    # drop the environment output, the last mode
    lossy = mixed[:-2, :-2]
    trace.add("environment_traced", lossy)

    out = matcore.symmetrize(condition_last_mode(lossy, quad))
    trace.add(f"conditioned_{quad.value}", out)
    return CovarianceMatrix(out, check=False), trace


def bell_like_stepwise(
    V, T: float = 0.5, eta: float = 1.0, eta_prime: float = 1.0
) -> tuple[CovarianceMatrix, StepTrace]:
    """Beam splitter on the last two modes, then q on mode "-" and p on mode "+"."""
    cm = as_cm(V, check=False)
    partition(cm)  # mode-count check
    trace = StepTrace()
    trace.add("input", cm.matrix)

    S = matcore.embed_last_two(matcore.beam_splitter(T), cm.n_modes - 2)
    mixed = S @ cm.matrix @ S.T
    trace.add("beam_splitter", mixed)

    after_minus, t1 = homodyne_stepwise(CovarianceMatrix(mixed, check=False), Quadrature.Q, eta)
    trace.extend(t1, "minus_q")
    out, t2 = homodyne_stepwise(after_minus, Quadrature.P, eta_prime)
    trace.extend(t2, "plus_p")
    return out, trace


def heterodyne_stepwise(V, eta: float = 1.0, eta_prime: float = 1.0) -> tuple[CovarianceMatrix, StepTrace]:
    cm = as_cm(V, check=False)
    padded = CovarianceMatrix(matcore.direct_sum(cm.matrix, I2), check=False)
    return bell_like_stepwise(padded, 0.5, eta, eta_prime)


def mixed_blocks(p: BlockPartition, T: float) -> BlockPartition:
    """Blocks after the beam splitter, written out entry by entry from (C1, C2, B1, B2, D)."""
    t = T
    r = np.sqrt(T * (1.0 - T))
    DDt = p.D + p.D.T
    return BlockPartition(
        A=p.A,
        C1=np.sqrt(t) * p.C1 + np.sqrt(1.0 - t) * p.C2,
        C2=-np.sqrt(1.0 - t) * p.C1 + np.sqrt(t) * p.C2,
        B1=t * p.B1 + (1.0 - t) * p.B2 + r * DDt,
        B2=t * p.B2 + (1.0 - t) * p.B1 - r * DDt,
        D=r * (p.B2 - p.B1) + t * p.D - (1.0 - t) * p.D.T,
    )
