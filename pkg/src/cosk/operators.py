"""Curvature operators induced on two-forms and trace-free symmetric tensors.

Builds the operator of the second kind in an orthonormal basis of the
trace-free symmetric two-tensors, the classical operator on two-forms, a
deterministic cyclic Jacobi eigensolver, and the slot-wise action of a
symmetric endomorphism on rank-4 tensors together with the Weyl action norms
it induces.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .tensors import CurvatureTensor, _as_table, ricci

MAX_SWEEPS = 100
OFF_DIAGONAL_FACTOR = 1e-13


class JacobiConvergenceError(RuntimeError):
    """The cyclic Jacobi iteration did not converge within the sweep cap."""


def dim_tracefree(n: int) -> int:
    """Dimension (n-1)(n+2)/2 of the trace-free symmetric two-tensors."""
    return (n - 1) * (n + 2) // 2


def dim_twoforms(n: int) -> int:
    return n * (n - 1) // 2


@dataclass
class TracefreeBasis:
    """Ordered orthonormal basis of the trace-free symmetric two-tensors.

    Off-diagonal elements (e_i o e_j)/sqrt(2) for i < j come first, followed
    by the n-1 Helmert diagonal matrices.  Orthonormal for <A, B> = tr(A^T B).
    """

    n: int
    elements: np.ndarray  # stacked, shape (N, n, n)

    @property
    def N(self) -> int:
        return self.elements.shape[0]


def tracefree_basis(n: int) -> TracefreeBasis:
    if n < 2:
        raise ValueError("basis needs n >= 2")
    mats = []
    for i in range(n):
        for j in range(i + 1, n):
            m = np.zeros((n, n))
            m[i, j] = m[j, i] = 1.0 / math.sqrt(2.0)
            mats.append(m)
    for k in range(1, n):
        d = np.zeros((n, n))
        c = 1.0 / math.sqrt(k * (k + 1))
        for i in range(k):
            d[i, i] = c
        d[k, k] = -k * c
        mats.append(d)
    return TracefreeBasis(n, np.stack(mats))


@dataclass
class SecondKindOperator:
    """Matrix of the curvature operator of the second kind in a given basis."""

    basis: TracefreeBasis
    matrix: np.ndarray


def build_second_kind(r: CurvatureTensor) -> SecondKindOperator:
    """Restrict and project the induced operator to trace-free tensors.

    Entry (j, k) is the pairing of R-bar applied to the j-th basis element
    with the k-th one; pairing against trace-free elements realizes the
    projection implicitly.
    """
    basis = tracefree_basis(r.n)
    rbar = np.einsum("iklj,akl->aij", r.components, basis.elements)
    m = np.einsum("aij,bij->ab", rbar, basis.elements)
    defect = float(np.max(np.abs(m - m.T)))
    if defect > 1e-12 * max(1.0, float(np.max(np.abs(m)))):
        raise ValueError(f"operator matrix not symmetric (defect {defect:.3e}); invalid input tensor")
    return SecondKindOperator(basis, (m + m.T) / 2.0)


def build_first_kind(r: CurvatureTensor) -> np.ndarray:
    """Matrix of the operator on two-forms in the basis e_i ^ e_j, i < j."""
    n = r.n
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    rows = np.array([p[0] for p in pairs])
    cols = np.array([p[1] for p in pairs])
    m = r.components[rows[:, None], cols[:, None], rows[None, :], cols[None, :]]
    return (m + m.T) / 2.0


def _jacobi_sweeps(a, v, max_sweeps, threshold):
    # Cyclic row-major sweeps; rotations applied two-sided, v accumulates
    # the eigenvector columns.  Written to compile under numba unchanged.
    n = a.shape[0]
    sweeps = 0
    while sweeps < max_sweeps:
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off += a[p, q] * a[p, q]
        if math.sqrt(2.0 * off) <= threshold:
            return sweeps, True
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                scale = abs(a[p, p]) + abs(a[q, q]) + 1.0
                if abs(apq) <= 1e-150 * scale:
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                for i in range(n):
                    aip = a[i, p]
                    aiq = a[i, q]
                    a[i, p] = c * aip - s * aiq
                    a[i, q] = s * aip + c * aiq
                for i in range(n):
                    api = a[p, i]
                    aqi = a[q, i]
                    a[p, i] = c * api - s * aqi
                    a[q, i] = s * api + c * aqi
                for i in range(n):
                    vip = v[i, p]
                    viq = v[i, q]
                    v[i, p] = c * vip - s * viq
                    v[i, q] = s * vip + c * viq
        sweeps += 1
    return sweeps, False


_jacobi_compiled = None


def _jacobi_kernel():
    global _jacobi_compiled
    if _jacobi_compiled is None:
        try:
            from numba import njit

            _jacobi_compiled = njit(cache=True)(_jacobi_sweeps)
        except ImportError:
            _jacobi_compiled = _jacobi_sweeps
    return _jacobi_compiled


def symmetric_eigen(m, max_sweeps: int = MAX_SWEEPS) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.

    Deterministic: fixed row-major sweep order, stable ascending sort, exact
    eigenvalue ties broken by the first differing eigenvector coordinate, and
    each eigenvector's first significant coordinate made positive.
    """
    a = np.array(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix")
    a = (a + a.T) / 2.0
    size = a.shape[0]
    v = np.eye(size)
    norm = float(np.sqrt(np.einsum("ij,ij->", a, a)))
    if norm == 0.0:
        return np.zeros(size), v
    sweeps, converged = _jacobi_kernel()(a, v, max_sweeps, OFF_DIAGONAL_FACTOR * norm)
    if not converged:
        raise JacobiConvergenceError(f"no convergence after {sweeps} sweeps")
    values = np.diagonal(a).copy()
    order = np.argsort(values, kind="stable")
    values = values[order]
    vectors = v[:, order]
    for j in range(size):
        col = vectors[:, j]
        nz = np.nonzero(np.abs(col) > 1e-12)[0]
        if nz.size and col[nz[0]] < 0.0:
            vectors[:, j] = -col
    j = 0
    while j < size - 1:
        k = j + 1
        while k < size and values[k] == values[j]:
            k += 1
        if k - j > 1:
            cols = sorted(range(j, k), key=lambda c: tuple(vectors[:, c]))
            vectors[:, j:k] = vectors[:, cols]
        j = k
    return values, vectors


@dataclass
class Spectrum:
    """Sorted eigenvalues with eigenvectors in basis coordinates."""

    values: np.ndarray
    vectors: np.ndarray | None
    lambda_bar: float
    n: int

    @property
    def N(self) -> int:
        return len(self.values)

    @classmethod
    def from_values(cls, values, n: int) -> "Spectrum":
        values = np.sort(np.asarray(values, dtype=float))
        return cls(values, None, float(values.mean()), n)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "N": self.N,
            "values": [float(x) for x in self.values],
            "lambda_bar": self.lambda_bar,
        }


def spectrum(op: SecondKindOperator, max_sweeps: int = MAX_SWEEPS) -> Spectrum:
    """Full eigen-decomposition of an operator of the second kind."""
    values, vectors = symmetric_eigen(op.matrix, max_sweeps=max_sweeps)
    return Spectrum(values, vectors, float(values.mean()), op.basis.n)


def sym_action(s, t) -> np.ndarray:
    """Act with a symmetric endomorphism on every slot of a rank-4 tensor."""
    a = _as_table(t)
    s = np.asarray(s, dtype=float)
    if s.shape != a.shape[:2]:
        raise ValueError(f"dimension mismatch: {s.shape} vs table {a.shape}")
    return (
        np.einsum("im,mjkl->ijkl", s, a)
        + np.einsum("jm,imkl->ijkl", s, a)
        + np.einsum("km,ijml->ijkl", s, a)
        + np.einsum("lm,ijkm->ijkl", s, a)
    )


def _sym_action_stack(mats: np.ndarray, a: np.ndarray) -> np.ndarray:
    return (
        np.einsum("aim,mjkl->aijkl", mats, a)
        + np.einsum("ajm,imkl->aijkl", mats, a)
        + np.einsum("akm,ijml->aijkl", mats, a)
        + np.einsum("alm,ijkm->aijkl", mats, a)
    )


def eigen_matrices(spec: Spectrum, basis: TracefreeBasis) -> np.ndarray:
    """Reconstitute eigenvectors as trace-free matrices, in spectrum order."""
    if spec.vectors is None:
        raise ValueError("spectrum carries no eigenvectors")
    return np.einsum("bj,bim->jim", spec.vectors, basis.elements)


def weyl_action_norms(spec: Spectrum | None, mats, weyl, tol: float = 1e-8) -> np.ndarray:
    """Squared norms of the slot action of each matrix on a trace-free tensor.

    ``mats`` must be an orthonormal family (canonical basis elements or
    reconstituted eigenvectors); with a spectrum given, the order is the
    spectrum order and the lengths must agree.
    """
    mats = np.asarray(mats, dtype=float)
    a = _as_table(weyl)
    scale = max(1.0, float(np.max(np.abs(a))))
    trace_defect = float(np.max(np.abs(ricci(a))))
    if trace_defect > tol * scale:
        raise ValueError(f"tensor is not trace-free (defect {trace_defect:.3e})")
    gram = np.einsum("aij,bij->ab", mats, mats)
    gram_defect = float(np.max(np.abs(gram - np.eye(len(mats)))))
    if gram_defect > 1e-8:
        raise ValueError(f"matrix family not orthonormal (defect {gram_defect:.3e})")
    if spec is not None and len(mats) != spec.N:
        raise ValueError("family size does not match the spectrum length")
    sw = _sym_action_stack(mats, a)
    return np.einsum("aijkl,aijkl->a", sw, sw)
