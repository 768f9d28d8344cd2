"""Algebraic curvature tensors at a single point.

Dense rank-4 component tables with the curvature symmetries, Kulkarni-Nomizu
products, Ricci contractions, the Weyl decomposition, seeded random Einstein
instances, and a JSON interchange format for component tables.  Everything
here is pointwise linear algebra in an orthonormal frame; there are no
metrics, charts or derivatives.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

DEFAULT_TOL = 1e-10
DUPLICATE_TOL = 1e-12


class SymmetryDefectError(ValueError):
    """A rank-4 table violates a curvature symmetry beyond tolerance."""

    def __init__(self, message: str, defects: dict[str, float] | None = None):
        super().__init__(message)
        self.defects = dict(defects or {})


class TensorFormatError(ValueError):
    """A tensor component file is malformed or self-inconsistent."""


def metric(n: int) -> np.ndarray:
    """Metric components in an orthonormal frame (the identity matrix)."""
    return np.eye(n)


@dataclass
class CurvatureTensor:
    """Dense table R[i, j, k, l] carrying the algebraic curvature symmetries.

    The constructor only checks the shape; use :func:`from_table` to validate
    and canonicalize an untrusted table.  Values are treated as immutable
    after construction.
    """

    n: int
    components: np.ndarray

    def __post_init__(self):
        comp = np.asarray(self.components, dtype=float)
        if self.n < 2:
            raise ValueError("curvature tensors need dimension n >= 2")
        if comp.shape != (self.n,) * 4:
            raise ValueError(f"expected component shape {(self.n,) * 4}, got {comp.shape}")
        self.components = comp

    def norm_sq(self) -> float:
        return tensor_norm_sq(self.components)


def _as_table(t) -> np.ndarray:
    if isinstance(t, CurvatureTensor):
        return t.components
    a = np.asarray(t, dtype=float)
    if a.ndim != 4 or len(set(a.shape)) != 1:
        raise ValueError(f"expected a rank-4 table with equal axes, got shape {a.shape}")
    return a


def tensor_norm_sq(t) -> float:
    """Squared norm by full contraction: sum of all squared components."""
    a = _as_table(t)
    return float(np.einsum("ijkl,ijkl->", a, a))


def symmetry_check(t) -> dict[str, float]:
    """Max absolute defect of each curvature symmetry of a rank-4 table."""
    a = _as_table(t)
    cyc = a + a.transpose(0, 2, 3, 1) + a.transpose(0, 3, 1, 2)
    return {
        "antisymmetry_first_pair": float(np.max(np.abs(a + a.transpose(1, 0, 2, 3)))),
        "antisymmetry_second_pair": float(np.max(np.abs(a + a.transpose(0, 1, 3, 2)))),
        "pair_symmetry": float(np.max(np.abs(a - a.transpose(2, 3, 0, 1)))),
        "bianchi": float(np.max(np.abs(cyc))),
    }


def _canonicalize_pairs(a: np.ndarray) -> np.ndarray:
    # Sequential averaging over the three commuting involutions; each step
    # leaves the previously enforced symmetries bitwise exact.
    a = (a - a.transpose(1, 0, 2, 3)) / 2.0
    a = (a - a.transpose(0, 1, 3, 2)) / 2.0
    a = (a + a.transpose(2, 3, 0, 1)) / 2.0
    return a


def from_table(raw, tol: float = DEFAULT_TOL) -> CurvatureTensor:
    """Validate an untrusted rank-4 table and canonicalize the pair symmetries.

    Antisymmetry and pair-exchange defects above ``tol`` are rejected, then
    removed exactly by averaging.  The first Bianchi identity is checked to
    ``tol`` but never modified; use :func:`bianchi_project` for raw tables.
    """
    a = _as_table(raw)
    defects = symmetry_check(a)
    for key in ("antisymmetry_first_pair", "antisymmetry_second_pair", "pair_symmetry"):
        if defects[key] > tol:
            raise SymmetryDefectError(
                f"{key} defect {defects[key]:.3e} exceeds tolerance {tol:.1e}", defects
            )
    a = _canonicalize_pairs(a)
    bianchi = symmetry_check(a)["bianchi"]
    if bianchi > tol:
        raise SymmetryDefectError(
            f"bianchi defect {bianchi:.3e} exceeds tolerance {tol:.1e}", defects
        )
    return CurvatureTensor(a.shape[0], a)


def kulkarni_nomizu(a, b) -> CurvatureTensor:
    """Kulkarni-Nomizu product of two symmetric matrices.

    Component formula A_ik B_jl + A_jl B_ik - A_jk B_il - A_il B_jk.  The
    terms are grouped so that the output satisfies the antisymmetries and the
    pair symmetry bitwise exactly.
    """
    A = np.asarray(a, dtype=float)
    B = np.asarray(b, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("first factor is not a square matrix")
    if A.shape != B.shape:
        raise ValueError(f"dimension mismatch: {A.shape} vs {B.shape}")
    A = (A + A.T) / 2.0
    B = (B + B.T) / 2.0
    plus = np.einsum("ik,jl->ijkl", A, B) + np.einsum("jl,ik->ijkl", A, B)
    minus = np.einsum("jk,il->ijkl", A, B) + np.einsum("il,jk->ijkl", A, B)
    return CurvatureTensor(A.shape[0], plus - minus)


def ricci(r) -> np.ndarray:
    """Ricci contraction Ric_ik = sum_j R_ijkj."""
    a = _as_table(r)
    ric = np.einsum("ijkj->ik", a)
    return (ric + ric.T) / 2.0


def scalar_curvature(r) -> float:
    """Scalar curvature: the trace of the Ricci contraction."""
    return float(np.trace(ricci(r)))


@dataclass
class WeylSplit:
    """Irreducible pieces of a curvature tensor: Weyl part, Ricci, scalar."""

    weyl: CurvatureTensor
    ricci: np.ndarray
    scal: float

    def recompose(self) -> CurvatureTensor:
        n = self.weyl.n
        g = metric(n)
        comp = (
            self.weyl.components
            + kulkarni_nomizu(self.ricci, g).components / (n - 2)
            - self.scal / (2.0 * (n - 1) * (n - 2)) * kulkarni_nomizu(g, g).components
        )
        return CurvatureTensor(n, comp)


def weyl_decompose(r: CurvatureTensor) -> WeylSplit:
    """Split off the totally trace-free Weyl part of a curvature tensor."""
    n = r.n
    if n < 3:
        raise ValueError("the Weyl decomposition needs n >= 3")
    ric = ricci(r)
    scal = float(np.trace(ric))
    g = metric(n)
    w = (
        r.components
        - kulkarni_nomizu(ric, g).components / (n - 2)
        + scal / (2.0 * (n - 1) * (n - 2)) * kulkarni_nomizu(g, g).components
    )
    return WeylSplit(CurvatureTensor(n, w), ric, scal)


def bianchi_project(raw, tol: float = DEFAULT_TOL) -> CurvatureTensor:
    """Remove the totally antisymmetric part so the first Bianchi identity holds.

    The input must already be antisymmetric in each index pair and symmetric
    under pair exchange; this is verified by checking that the cyclic sum is
    totally antisymmetric.
    """
    a = _as_table(raw)
    cyc = a + a.transpose(0, 2, 3, 1) + a.transpose(0, 3, 1, 2)
    worst = max(
        float(np.max(np.abs(cyc + cyc.transpose(1, 0, 2, 3)))),
        float(np.max(np.abs(cyc + cyc.transpose(0, 2, 1, 3)))),
        float(np.max(np.abs(cyc + cyc.transpose(0, 1, 3, 2)))),
    )
    if worst > tol:
        raise SymmetryDefectError(
            "cyclic sum is not totally antisymmetric "
            f"(defect {worst:.3e}); input lacks the pair symmetries"
        )
    return CurvatureTensor(a.shape[0], _canonicalize_pairs(a - cyc / 3.0))


def random_einstein(n: int, seed: int, weyl_scale: float = 1.0, scal: float | None = None) -> CurvatureTensor:
    """Seeded random Einstein curvature tensor.

    A random table is symmetrized, Bianchi-projected and reduced to its Weyl
    part, which is then scaled and recombined with the constant-curvature
    part carrying the requested scalar curvature (default n(n-1), i.e. unit
    average eigenvalue).  Deterministic in ``seed``.
    """
    if n < 3:
        raise ValueError("random Einstein tensors need n >= 3")
    if weyl_scale < 0:
        raise ValueError("weyl_scale must be nonnegative")
    if scal is None:
        scal = float(n * (n - 1))
    rng = np.random.default_rng(seed)
    raw = rng.uniform(-1.0, 1.0, size=(n, n, n, n))
    sym = _canonicalize_pairs(raw)
    w = weyl_decompose(bianchi_project(sym)).weyl
    g = metric(n)
    comp = weyl_scale * w.components + scal / (2.0 * n * (n - 1)) * kulkarni_nomizu(g, g).components
    return CurvatureTensor(n, comp)


def rotate(r: CurvatureTensor, q: np.ndarray) -> CurvatureTensor:
    """Pull back the tensor through the frame change given by the matrix q."""
    q = np.asarray(q, dtype=float)
    if q.shape != (r.n, r.n):
        raise ValueError("rotation matrix has the wrong shape")
    comp = np.einsum("ia,jb,kc,ld,abcd->ijkl", q, q, q, q, r.components, optimize=True)
    return CurvatureTensor(r.n, comp)


def canonical_entries(r: CurvatureTensor) -> list[list]:
    """Nonzero components over the canonical generating set.

    Slots with i < j, k < l and (i, j) <= (k, l) lexicographically generate
    the full table under the pair symmetries.
    """
    n = r.n
    comp = r.components
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                for l in range(k + 1, n):
                    if (i, j) > (k, l):
                        continue
                    v = comp[i, j, k, l]
                    if v != 0.0:
                        out.append([i, j, k, l, float(v)])
    return out


def save_tensor(r: CurvatureTensor, path) -> None:
    """Write the canonical generating set as JSON."""
    doc = {"n": r.n, "components": canonical_entries(r)}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, sort_keys=True)
        fh.write("\n")


def tensor_from_entries(n: int, entries, tol: float = DEFAULT_TOL) -> CurvatureTensor:
    """Complete a generating set of components by symmetry.

    Entries are [i, j, k, l, value] rows in any index order; each row is mapped
    to its canonical slot with the appropriate sign.  Duplicates that disagree
    beyond 1e-12 are rejected, as are nonzero rows with a repeated index in a
    pair.  The completed table must satisfy the first Bianchi identity to
    ``tol``.
    """
    if not isinstance(n, int) or n < 2:
        raise TensorFormatError(f"invalid dimension {n!r}")
    seen: dict[tuple, float] = {}
    for row in entries:
        try:
            i, j, k, l = (int(x) for x in row[:4])
            v = float(row[4])
        except (TypeError, ValueError, IndexError) as exc:
            raise TensorFormatError(f"malformed component row {row!r}") from exc
        if len(row) != 5:
            raise TensorFormatError(f"malformed component row {row!r}")
        if not all(0 <= x < n for x in (i, j, k, l)):
            raise TensorFormatError(f"index out of range in row {row!r}")
        if i == j or k == l:
            if abs(v) > DUPLICATE_TOL:
                raise SymmetryDefectError(
                    f"antisymmetry defect: nonzero component at repeated pair index {row!r}"
                )
            continue
        sign = 1.0
        if i > j:
            i, j = j, i
            sign = -sign
        if k > l:
            k, l = l, k
            sign = -sign
        if (i, j) > (k, l):
            i, j, k, l = k, l, i, j
        v = sign * v
        key = (i, j, k, l)
        if key in seen and abs(seen[key] - v) > DUPLICATE_TOL:
            raise TensorFormatError(
                f"inconsistent duplicate for slot {key}: {seen[key]!r} vs {v!r}"
            )
        seen[key] = v
    comp = np.zeros((n, n, n, n))
    for (i, j, k, l), v in seen.items():
        for (a, b), s1 in (((i, j), 1.0), ((j, i), -1.0)):
            for (c, d), s2 in (((k, l), 1.0), ((l, k), -1.0)):
                comp[a, b, c, d] = s1 * s2 * v
                comp[c, d, a, b] = s1 * s2 * v
    tensor = CurvatureTensor(n, comp)
    bianchi = symmetry_check(comp)["bianchi"]
    if bianchi > tol:
        raise SymmetryDefectError(
            f"bianchi defect {bianchi:.3e} exceeds tolerance {tol:.1e}",
            symmetry_check(comp),
        )
    return tensor


def load_tensor(path, tol: float = DEFAULT_TOL) -> CurvatureTensor:
    """Read a tensor component file written by :func:`save_tensor`."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise TensorFormatError(f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(doc, dict) or "n" not in doc or "components" not in doc:
        raise TensorFormatError("tensor file must be an object with 'n' and 'components'")
    n = doc["n"]
    if not isinstance(n, int):
        raise TensorFormatError(f"invalid dimension {n!r}")
    entries = doc["components"]
    if not isinstance(entries, list):
        raise TensorFormatError("'components' must be a list of [i, j, k, l, value] rows")
    return tensor_from_entries(n, entries, tol=tol)
