"""Operators of both kinds, the Jacobi eigensolver, and the slot action."""
import numpy as np
import pytest

from cosk import (
    Spectrum,
    build_first_kind,
    build_second_kind,
    dim_tracefree,
    eigen_matrices,
    random_einstein,
    scalar_curvature,
    spectrum,
    sym_action,
    symmetric_eigen,
    tensor_norm_sq,
    tracefree_basis,
    weyl_action_norms,
    weyl_decompose,
)
from cosk.models import flat, sphere
from cosk.operators import JacobiConvergenceError


def random_weyl(n, seed):
    return weyl_decompose(random_einstein(n, seed, weyl_scale=1.0, scal=0.0)).weyl


def test_basis_sizes():
    assert tracefree_basis(4).N == 9
    assert tracefree_basis(5).N == 14
    for n in range(2, 11):
        assert tracefree_basis(n).N == dim_tracefree(n)


def test_basis_orthonormal_and_tracefree():
    for n in (2, 3, 5, 8):
        basis = tracefree_basis(n)
        gram = np.einsum("aij,bij->ab", basis.elements, basis.elements)
        assert np.max(np.abs(gram - np.eye(basis.N))) < 1e-12
        assert np.max(np.abs(np.trace(basis.elements, axis1=1, axis2=2))) < 1e-14


def test_second_kind_sphere_is_identity():
    for n in (4, 6):
        op = build_second_kind(sphere(n))
        assert np.max(np.abs(op.matrix - np.eye(op.basis.N))) < 1e-12


def test_second_kind_zero():
    op = build_second_kind(flat(5))
    assert np.all(op.matrix == 0.0)


def test_second_kind_scalar_identity():
    r = random_einstein(6, seed=4)
    spec = spectrum(build_second_kind(r))
    scal = scalar_curvature(r)
    assert scal == pytest.approx(6 * 5 * spec.lambda_bar, rel=1e-9)


def test_first_kind_sphere_identity_and_zero():
    m = build_first_kind(sphere(4))
    assert np.max(np.abs(m - np.eye(6))) < 1e-14
    assert np.all(build_first_kind(flat(4)) == 0.0)


def test_first_kind_symmetric_for_random_tensor():
    m = build_first_kind(random_einstein(5, seed=6))
    assert np.max(np.abs(m - m.T)) < 1e-12


def test_jacobi_identity_and_diagonal():
    values, vectors = symmetric_eigen(np.eye(7))
    assert np.allclose(values, 1.0)
    assert np.allclose(vectors @ vectors.T, np.eye(7), atol=1e-12)
    diag = np.diag([3.0, -1.0, 2.0, 0.0])
    values, _ = symmetric_eigen(diag)
    assert np.array_equal(values, np.array([-1.0, 0.0, 2.0, 3.0]))


def test_jacobi_against_library_oracle():
    rng = np.random.default_rng(12)
    for size in (9, 35, 54):
        m = rng.normal(size=(size, size))
        m = (m + m.T) / 2
        values, vectors = symmetric_eigen(m)
        assert np.max(np.abs(values - np.linalg.eigvalsh(m))) < 1e-10
        assert np.max(np.abs(m - vectors @ np.diag(values) @ vectors.T)) < 1e-10
        assert np.max(np.abs(vectors.T @ vectors - np.eye(size))) < 1e-10


def test_jacobi_deterministic():
    rng = np.random.default_rng(21)
    m = rng.normal(size=(20, 20))
    m = (m + m.T) / 2
    v1, w1 = symmetric_eigen(m)
    v2, w2 = symmetric_eigen(m)
    assert np.array_equal(v1, v2)
    assert np.array_equal(w1, w2)


def test_jacobi_sweep_cap():
    rng = np.random.default_rng(5)
    m = rng.normal(size=(12, 12))
    m = (m + m.T) / 2
    with pytest.raises(JacobiConvergenceError):
        symmetric_eigen(m, max_sweeps=1)


def test_spectrum_sphere_all_ones():
    for n in (4, 5, 8):
        spec = spectrum(build_second_kind(sphere(n)))
        assert np.max(np.abs(spec.values - 1.0)) < 1e-12
        assert spec.lambda_bar == pytest.approx(1.0, abs=1e-12)
        assert spec.N == dim_tracefree(n)


def test_spectrum_invariants():
    spec = spectrum(build_second_kind(random_einstein(5, seed=3)))
    assert np.all(np.diff(spec.values) >= 0)
    assert float(spec.values.sum()) == pytest.approx(spec.N * spec.lambda_bar, rel=1e-12)
    assert np.max(np.abs(spec.vectors.T @ spec.vectors - np.eye(spec.N))) < 1e-10


def test_spectrum_export_keys():
    doc = spectrum(build_second_kind(sphere(4))).to_dict()
    assert set(doc) == {"n", "N", "values", "lambda_bar"}
    assert doc["N"] == 9 and doc["n"] == 4


def test_sym_action_metric_multiplies_by_slot_count():
    t = random_einstein(4, seed=1)
    out = sym_action(np.eye(4), t)
    assert np.allclose(out, 4.0 * t.components, rtol=1e-15, atol=0)


def test_sym_action_zero_and_linearity():
    t = random_einstein(4, seed=2)
    assert np.all(sym_action(np.zeros((4, 4)), t) == 0.0)
    rng = np.random.default_rng(9)
    s1 = rng.normal(size=(4, 4))
    s1 = (s1 + s1.T) / 2
    s2 = rng.normal(size=(4, 4))
    s2 = (s2 + s2.T) / 2
    lhs = sym_action(2.0 * s1 - 3.0 * s2, t)
    rhs = 2.0 * sym_action(s1, t) - 3.0 * sym_action(s2, t)
    assert np.max(np.abs(lhs - rhs)) < 1e-12 * max(1.0, np.max(np.abs(rhs)))


def test_weyl_action_sum_identity():
    n = 6
    basis = tracefree_basis(n)
    for seed in range(5):
        w = random_weyl(n, seed)
        norms = weyl_action_norms(None, basis.elements, w)
        target = 2 * (n * n + n - 8) / n * tensor_norm_sq(w)
        assert float(norms.sum()) == pytest.approx(target, rel=1e-9)


def test_weyl_action_max_bound():
    n = 6
    basis = tracefree_basis(n)
    for seed in range(5):
        w = random_weyl(n, seed + 50)
        norms = weyl_action_norms(None, basis.elements, w)
        bound = (8 * n - 16) / n * tensor_norm_sq(w)
        assert float(norms.max()) <= bound + 1e-9


def test_weyl_action_zero_tensor():
    basis = tracefree_basis(4)
    norms = weyl_action_norms(None, basis.elements, np.zeros((4,) * 4))
    assert np.all(norms == 0.0)


def test_weyl_action_rejects_non_tracefree():
    basis = tracefree_basis(4)
    with pytest.raises(ValueError):
        weyl_action_norms(None, basis.elements, sphere(4))


def test_weyl_action_rejects_non_orthonormal_family():
    basis = tracefree_basis(4)
    with pytest.raises(ValueError):
        weyl_action_norms(None, 2.0 * basis.elements, random_weyl(4, 0))


def test_weyl_action_sum_is_basis_independent():
    n = 6
    r = random_einstein(n, seed=17)
    w = weyl_decompose(r).weyl
    op = build_second_kind(r)
    spec = spectrum(op)
    canonical = weyl_action_norms(None, op.basis.elements, w)
    eigen = weyl_action_norms(spec, eigen_matrices(spec, op.basis), w)
    total = float(canonical.sum())
    assert float(eigen.sum()) == pytest.approx(total, rel=1e-9)


def test_weighted_sum_stable_under_basis_permutation():
    # Degenerate eigenspaces only contribute through a basis-free trace.
    n = 6
    r = random_einstein(n, seed=23, weyl_scale=0.2)
    w = weyl_decompose(r).weyl
    op = build_second_kind(r)
    rng = np.random.default_rng(0)
    perm = rng.permutation(op.basis.N)
    permuted_elements = op.basis.elements[perm]
    permuted_matrix = op.matrix[np.ix_(perm, perm)]
    weighted = []
    for elements, matrix in ((op.basis.elements, op.matrix), (permuted_elements, permuted_matrix)):
        values, vectors = symmetric_eigen(matrix)
        mats = np.einsum("bj,bim->jim", vectors, elements)
        norms = weyl_action_norms(None, mats, w)
        weighted.append(float(values @ norms))
    assert weighted[0] == pytest.approx(weighted[1], rel=1e-8, abs=1e-8)


def test_spectrum_from_values_helper():
    spec = Spectrum.from_values([3.0, -1.0, 2.0], n=2)
    assert np.array_equal(spec.values, np.array([-1.0, 2.0, 3.0]))
    assert spec.lambda_bar == pytest.approx(4.0 / 3.0)
