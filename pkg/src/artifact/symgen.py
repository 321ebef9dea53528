"""Symmetry generators: copy-space charges, their lifts to regions of the
lattice, projection-dressed flux generators, and parity generators.

Stacked-space index order is (site, majorana index, copy) with the copy index
fastest, so a copy-space charge q lifted to the sites of a region X is the
Kronecker product kron(diag(mask_X), q).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._util import ComputationError, hermiticity_residual
from .geometry import LatticeGeometry, region_mask
from .quasifree import BasisProjection


@dataclass
class ChargeMatrix:
    q: np.ndarray
    copies: int

    def validate(self, tol: float = 1e-12):
        q = self.q
        if q.shape != (self.copies, self.copies):
            raise ComputationError("dimension mismatch")
        if hermiticity_residual(q) > tol:
            raise ComputationError("charge matrix is not Hermitian")
        if float(np.max(np.abs(q.T + q))) > tol:
            raise ComputationError("charge matrix is not antisymmetric")


@dataclass
class FluxGenerator:
    Qtilde: np.ndarray
    kind: str  # "dressed-charge" | "parity"
    region: Optional[object] = None

    def validate(self, P: BasisProjection, tol: float = 1e-10):
        comm = P.matrix @ self.Qtilde - self.Qtilde @ P.matrix
        if float(np.max(np.abs(comm))) > tol:
            raise ComputationError("generator does not commute with projection")


def cyclic_charge(N: int) -> ChargeMatrix:
    """Hermitian antisymmetric generator of the cyclic rotation on N copies.

    Built from the discrete-Fourier eigenvectors of the cyclic shift with
    integer weights j = -(N-1)/2 ... (N-1)/2, so the spectrum is exactly that
    integer window. Only odd N is meaningful here; even N is refused.
    """
    if N % 2 == 0:
        raise ComputationError("even copies unsupported")
    if N < 1:
        raise ComputationError("copies must be >= 1")
    if N == 1:
        return ChargeMatrix(np.zeros((1, 1), dtype=complex), 1)
    half = (N - 1) // 2
    js = np.arange(-half, half + 1)
    k = np.arange(N)
    F = np.exp(2j * np.pi * np.outer(k, js) / N) / np.sqrt(N)
    q = (F * js) @ F.conj().T
    # entries are purely imaginary (j <-> -j symmetry); store that exactly
    B = q.imag
    q = 1j * (B - B.T) / 2
    cm = ChargeMatrix(q, N)
    cm.validate()
    return cm


def lift_charge(q: ChargeMatrix, geometry: LatticeGeometry, region) -> np.ndarray:
    """Charge acting as q on the copy index of every Majorana mode of every
    site in the region, zero elsewhere: kron(diag(mask), q).

    `geometry` is the single-copy geometry; the result lives on the stacked
    space of dimension dim_K * copies.
    """
    mask = region_mask(region, geometry).astype(float)
    return np.kron(np.diag(mask), q.q)


def dress_charge(P: BasisProjection, Q: np.ndarray, region=None) -> FluxGenerator:
    """Block-diagonal part of Q w.r.t. P: Qtilde = PQP + (1-P)Q(1-P).

    Commutes with P by construction; the returned matrix is re-Hermitized to
    absorb rounding noise.
    """
    if Q.shape != P.matrix.shape:
        raise ComputationError("dimension mismatch")
    Pm = P.matrix
    D = Pm @ Q
    Qt = Q - D - D.conj().T + 2.0 * (D @ Pm)
    Qt = (Qt + Qt.conj().T) / 2
    return FluxGenerator(Qt, "dressed-charge", region)


def parity_charge(P: BasisProjection, region, geometry: LatticeGeometry) -> FluxGenerator:
    """Symmetrized region parity (Pi T + T Pi)/2 with T = 1 - 2P, which
    simplifies to Pi - Pi P - P Pi and commutes with P identically."""
    if geometry.dim_K != P.matrix.shape[0]:
        raise ComputationError("dimension mismatch")
    mask = region_mask(region, geometry).astype(float)
    Pm = P.matrix
    Qt = np.diag(mask).astype(complex) - mask[:, None] * Pm - Pm * mask[None, :]
    return FluxGenerator(Qt, "parity", region)


def flux_unitary(g: FluxGenerator, alpha: float) -> np.ndarray:
    """exp(i alpha Qtilde) through the Hermitian eigendecomposition of the
    generator (exactly unitary up to rounding; no series)."""
    if alpha == 0.0:
        return np.eye(g.Qtilde.shape[0], dtype=complex)
    lam, V = np.linalg.eigh(g.Qtilde)
    return (V * np.exp(1j * alpha * lam)) @ V.conj().T
