"""Built-in curvature models used by the command line and the test suites."""
from __future__ import annotations

import numpy as np

from .tensors import (
    CurvatureTensor,
    kulkarni_nomizu,
    metric,
    random_einstein,
    tensor_norm_sq,
    weyl_decompose,
)

MODEL_NAMES = ("sphere", "flat", "near_sphere", "fubini_study")


def sphere(n: int) -> CurvatureTensor:
    """Constant curvature one: half the Kulkarni-Nomizu square of the metric."""
    comp = 0.5 * kulkarni_nomizu(metric(n), metric(n)).components
    return CurvatureTensor(n, comp)


def flat(n: int) -> CurvatureTensor:
    return CurvatureTensor(n, np.zeros((n, n, n, n)))


def near_sphere(n: int, seed: int = 0, epsilon: float = 0.05) -> CurvatureTensor:
    """Sphere tensor plus epsilon times a unit-norm random Weyl direction."""
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    weyl = weyl_decompose(random_einstein(n, seed, weyl_scale=1.0, scal=0.0)).weyl
    norm = np.sqrt(tensor_norm_sq(weyl))
    comp = sphere(n).components
    if norm > 0:
        comp = comp + epsilon * weyl.components / norm
    return CurvatureTensor(n, comp)


def complex_structure(n: int) -> np.ndarray:
    """Standard orthogonal complex structure on even-dimensional space."""
    if n % 2 != 0:
        raise ValueError("a complex structure needs even dimension")
    j = np.zeros((n, n))
    for a in range(n // 2):
        j[2 * a, 2 * a + 1] = -1.0
        j[2 * a + 1, 2 * a] = 1.0
    return j


def fubini_study(n: int) -> CurvatureTensor:
    """Complex projective space curvature in real dimension n (n even, >= 4)."""
    if n % 2 != 0 or n < 4:
        raise ValueError("the Fubini-Study model needs even real dimension n >= 4")
    g = metric(n)
    j = complex_structure(n)
    comp = (
        np.einsum("ik,jl->ijkl", g, g)
        - np.einsum("il,jk->ijkl", g, g)
        + np.einsum("ik,jl->ijkl", j, j)
        - np.einsum("il,jk->ijkl", j, j)
        + 2.0 * np.einsum("ij,kl->ijkl", j, j)
    )
    return CurvatureTensor(n, comp)


def build_model(name: str, n: int, seed: int = 0, epsilon: float = 0.05) -> CurvatureTensor:
    if name == "sphere":
        return sphere(n)
    if name == "flat":
        return flat(n)
    if name == "near_sphere":
        return near_sphere(n, seed=seed, epsilon=epsilon)
    if name == "fubini_study":
        return fubini_study(n)
    raise ValueError(f"unknown model {name!r}; choose from {MODEL_NAMES}")
