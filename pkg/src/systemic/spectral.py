"""Symmetric eigensolver, Laplacian pseudo-inverse, and the PSD partial order.

The eigensolver is a classic two-stage dense method: Householder reduction to
tridiagonal form followed by implicit-shift QL iteration, with eigenvectors
accumulated through both stages.  It is deterministic for identical input
bits, which the property-check machinery relies on for replayable trials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConnectivityError, DimensionError, DomainError, NumericalError
from .graphs import Laplacian, WeightedGraph, laplacian

MAX_QL_SWEEPS = 50
ORTHONORMALITY_TOL = 1e-10
RESIDUAL_TOL = 1e-9
ZERO_TOL_SCALE = 1e-8
SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues with orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residual: float

    def __post_init__(self):
        self.eigenvalues.setflags(write=False)
        self.eigenvectors.setflags(write=False)

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]

    @property
    def nonzero(self) -> np.ndarray:
        """Eigenvalues with the structural zero mode dropped (index >= 2 convention)."""
        return self.eigenvalues[1:]


def _householder_tridiagonalize(a: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Reduce symmetric a to tridiagonal (d, e) with accumulated transform v."""
    n = a.shape[0]
    v = np.eye(n)
    e = np.zeros(n)
    for k in range(n - 2):
        x = a[k + 1:, k].copy()
        norm_x = float(np.linalg.norm(x))
        if norm_x == 0.0:
            continue
        alpha = -math.copysign(norm_x, x[0]) if x[0] != 0.0 else -norm_x
        u = x
        u[0] -= alpha
        unorm2 = float(u @ u)
        e[k] = alpha
        if unorm2 == 0.0:
            continue
        beta = 2.0 / unorm2
        block = a[k + 1:, k + 1:]
        p = beta * (block @ u)
        q = p - (0.5 * beta * float(u @ p)) * u
        block -= np.outer(q, u) + np.outer(u, q)
        a[k + 1:, k] = 0.0
        a[k, k + 1:] = 0.0
        a[k + 1, k] = alpha
        a[k, k + 1] = alpha
        v[:, k + 1:] -= np.outer(v[:, k + 1:] @ u, beta * u)
    if n >= 2:
        e[n - 2] = a[n - 1, n - 2]
    return np.diag(a).copy(), e, v


def _ql_implicit_shift(d: np.ndarray, e: np.ndarray, v: np.ndarray,
                       max_sweeps: int = MAX_QL_SWEEPS) -> None:
    """Diagonalize the tridiagonal (d, e) in place, rotating v's columns along."""
    n = d.shape[0]
    eps = np.finfo(float).eps
    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                scale = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= eps * scale:
                    break
                m += 1
            if m == l:
                break
            sweeps += 1
            if sweeps > max_sweeps:
                raise NumericalError(
                    f"QL iteration stalled on eigenvalue {l}", iterations=sweeps - 1)
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            clean = True
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    clean = False
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                upper = v[:, i + 1].copy()
                v[:, i + 1] = s * v[:, i] + c * upper
                v[:, i] = c * v[:, i] - s * upper
            if clean:
                d[l] -= p
                e[l] = g
                e[m] = 0.0


def _fix_signs(v: np.ndarray) -> None:
    """Make the first nonzero component of each eigenvector positive."""
    for j in range(v.shape[1]):
        column = v[:, j]
        nonzero = np.nonzero(column)[0]
        if nonzero.size and column[nonzero[0]] < 0:
            v[:, j] = -column


def eig_sym(matrix: np.ndarray, max_sweeps: int = MAX_QL_SWEEPS) -> Spectrum:
    """Full spectrum of a symmetric matrix, eigenvalues ascending.

    Raises DomainError for non-symmetric input and NumericalError if the QL
    iteration fails to converge or the result misses its accuracy bounds.
    """
    m = np.array(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    scale = max(1.0, float(np.abs(m).max(initial=0.0)))
    asym = float(np.abs(m - m.T).max(initial=0.0))
    if asym > SYMMETRY_TOL * scale:
        raise DomainError(f"matrix is not symmetric (max asymmetry {asym:.3e})")
    work = 0.5 * (m + m.T)
    d, e, v = _householder_tridiagonalize(work)
    _ql_implicit_shift(d, e, v, max_sweeps=max_sweeps)
    order = np.argsort(d, kind="stable")
    d = d[order]
    v = v[:, order]
    _fix_signs(v)
    residual = float(np.abs(m @ v - v * d).max(initial=0.0))
    gram_error = float(np.abs(v.T @ v - np.eye(d.shape[0])).max(initial=0.0))
    value_scale = max(1.0, float(np.abs(d).max(initial=0.0)))
    if gram_error > ORTHONORMALITY_TOL:
        raise NumericalError(f"eigenvectors lost orthonormality ({gram_error:.3e})")
    if residual > RESIDUAL_TOL * value_scale:
        raise NumericalError(f"eigen residual too large ({residual:.3e})")
    return Spectrum(eigenvalues=d, eigenvectors=v, residual=residual)


def zero_tolerance(eigenvalues: np.ndarray) -> float:
    """Threshold separating the structural zero eigenvalue from the rest."""
    top = float(eigenvalues[-1]) if eigenvalues.size else 0.0
    return ZERO_TOL_SCALE * max(1.0, top)


def _as_matrix(operand: WeightedGraph | Laplacian | np.ndarray) -> np.ndarray:
    if isinstance(operand, WeightedGraph):
        return laplacian(operand).matrix
    if isinstance(operand, Laplacian):
        return operand.matrix
    return np.asarray(operand, dtype=float)


def laplacian_spectrum(operand: WeightedGraph | Laplacian | np.ndarray) -> Spectrum:
    """Spectrum of a connected-graph Laplacian (or any matrix similar to one).

    The smallest eigenvalue must sit below the zero tolerance; it is snapped
    to exactly 0.  A second eigenvalue below the tolerance means the graph is
    disconnected and raises ConnectivityError.
    """
    matrix = _as_matrix(operand)
    if matrix.shape[0] < 2:
        raise DomainError("consensus spectra need at least 2 nodes")
    spec = eig_sym(matrix)
    tol = zero_tolerance(spec.eigenvalues)
    lam = spec.eigenvalues
    if abs(lam[0]) >= tol:
        raise DomainError(
            f"smallest eigenvalue {lam[0]:.3e} is not a structural zero (tol {tol:.3e})")
    if lam[1] <= tol:
        raise ConnectivityError(
            f"second eigenvalue {lam[1]:.3e} below tolerance {tol:.3e}: graph is disconnected")
    snapped = lam.copy()
    snapped[0] = 0.0
    return Spectrum(eigenvalues=snapped, eigenvectors=spec.eigenvectors,
                    residual=spec.residual)


@lru_cache(maxsize=512)
def graph_spectrum(graph: WeightedGraph) -> Spectrum:
    """Cached laplacian_spectrum keyed by the (immutable) graph."""
    return laplacian_spectrum(graph)


def pseudo_inverse(operand: WeightedGraph | Laplacian | np.ndarray) -> np.ndarray:
    """Moore-Penrose pseudo-inverse of a connected-graph Laplacian.

    Assembled from the spectrum as sum over nonzero modes of v v^T / lambda;
    the result is symmetric, doubly centered and positive semidefinite.
    """
    spec = laplacian_spectrum(operand)
    vectors = spec.eigenvectors[:, 1:]
    inverse = (vectors / spec.nonzero) @ vectors.T
    return 0.5 * (inverse + inverse.T)


def psd_order(a: np.ndarray, b: np.ndarray, tol: float = 1e-10) -> bool:
    """True iff a <= b in the positive semidefinite order, within tol."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch: {a.shape} vs {b.shape}")
    gap = eig_sym(b - a)
    return bool(gap.eigenvalues[0] >= -tol)
