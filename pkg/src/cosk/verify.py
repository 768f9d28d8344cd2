"""Named verification suites: every identity and inequality gets a check.

Each check runs a seeded sweep, records its worst measured defect and
passes or fails against the pinned tolerance.  The fixed ordering makes the
first failing check well defined for the command-line exit path.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import models
from .bochner import (
    _chain_parts,
    _delta_r_from_parts,
    _weighted_bound_values,
    delta_r_inner_low_dim,
    delta_r_lower_bound,
    delta_r_lower_bound_unsimplified,
    einstein_defect,
)
from .cone import NotApplicableError, theta_in_window, theta_threshold
from .extremal import (
    InfeasibleFamilyError,
    boundary_critical,
    boundary_profile,
    cubic_objective,
    enumerate_minimum,
    interior_critical,
    pin_interval,
)
from .operators import build_second_kind, dim_tracefree, spectrum, tracefree_basis, weyl_action_norms
from .tensors import (
    CurvatureTensor,
    random_einstein,
    scalar_curvature,
    symmetry_check,
    tensor_norm_sq,
    weyl_decompose,
)

DEFAULT_DIMS = (4, 5, 8, 9, 10)
IDENTITY_TOL = 1e-9
CHAIN_SLACK = 1e-8


@dataclass
class CheckResult:
    name: str
    passed: bool
    defect: float
    detail: str

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": bool(self.passed),
            "defect": float(self.defect),
            "detail": self.detail,
        }


def _result(name: str, defect: float, tol: float, detail: str) -> CheckResult:
    return CheckResult(name, defect <= tol, float(defect), detail)


def check_norm_convention() -> CheckResult:
    worst = 0.0
    for n in range(3, 13):
        worst = max(worst, abs(tensor_norm_sq(models.sphere(n)) - 2.0 * n * (n - 1)))
    return _result("norm_convention", worst, 1e-10, "constant-curvature norm anchor, n in 3..12")


def check_theta_constants() -> CheckResult:
    anchors = theta_threshold(4) == Fraction(1, 2) and theta_threshold(5) == Fraction(2, 3) \
        and theta_threshold(8) == Fraction(1, 20)
    window = all(theta_in_window(n) for n in range(8, 65))
    ok = anchors and window
    return CheckResult("theta_constants", ok, 0.0 if ok else 1.0,
                       "exact threshold anchors and the rational window 8..64")


def check_coefficient_identities() -> CheckResult:
    ok = True
    for n in range(8, 65):
        big_n = Fraction(dim_tracefree(n))
        theta = theta_threshold(n)
        lhs1 = (big_n - 3) * theta - (2 * big_n - 9 * n + 6)
        lhs2 = (2 * big_n - 12 * n + 6) - (big_n - 3) * theta
        if lhs1 != -6 * n * theta or lhs2 != 6 * n * theta - 3 * n:
            ok = False
    return CheckResult("coefficient_identities", ok, 0.0 if ok else 1.0,
                       "exact rational coefficient eliminations, n in 8..64")


def check_einstein_identities(dims, trials, seed) -> CheckResult:
    worst = 0.0
    for n in dims:
        for t in range(trials):
            scal = float(n * (n - 1)) * (0.5 + (t % 10) / 10.0)
            r = random_einstein(n, seed + 1000 * n + t, weyl_scale=1.0, scal=scal)
            spec = spectrum(build_second_kind(r))
            rsq = tensor_norm_sq(r)
            wsq = tensor_norm_sq(weyl_decompose(r).weyl)
            mean = spec.lambda_bar
            s2 = float(np.sum(spec.values**2))
            worst = max(
                worst,
                abs(rsq - (wsq + 2.0 * n * (n - 1) * mean**2)) / max(1.0, rsq),
                abs(s2 - (0.75 * rsq - (n - 1) ** 2 * mean**2)) / max(1.0, abs(s2)),
                abs(wsq - (4.0 / 3.0 * s2 - 4.0 * spec.N / 3.0 * mean**2)) / max(1.0, wsq),
                abs(scalar_curvature(r) - n * (n - 1) * mean) / max(1.0, abs(scal)),
            )
    return _result("einstein_identities", worst, IDENTITY_TOL,
                   f"norm split, eigenvalue square sum, weyl norm, scalar identity; dims {list(dims)}")


def check_weyl_action_sum(dims, trials, seed) -> CheckResult:
    worst = 0.0
    used = [n for n in dims if n >= 4]
    for n in used:
        basis = tracefree_basis(n)
        for t in range(trials):
            w = weyl_decompose(random_einstein(n, seed + 2000 * n + t, 1.0, 0.0)).weyl
            norms = weyl_action_norms(None, basis.elements, w)
            wsq = tensor_norm_sq(w)
            target = 2.0 * (n * n + n - 8) / n * wsq
            worst = max(worst, abs(float(norms.sum()) - target) / max(1.0, target))
    return _result("weyl_action_sum", worst, IDENTITY_TOL,
                   f"total weyl action norm identity; dims {used}")


def check_weyl_action_max(dims, trials, seed) -> CheckResult:
    worst = -np.inf
    used = [n for n in dims if n >= 4]
    for n in used:
        basis = tracefree_basis(n)
        for t in range(trials):
            w = weyl_decompose(random_einstein(n, seed + 3000 * n + t, 1.0, 0.0)).weyl
            norms = weyl_action_norms(None, basis.elements, w)
            bound = (8.0 * n - 16.0) / n * tensor_norm_sq(w)
            worst = max(worst, float(norms.max()) - bound)
    return _result("weyl_action_max", max(0.0, worst), IDENTITY_TOL,
                   f"per-element weyl action norm bound; dims {used}")


def check_lower_bound_forms(dims, seed) -> CheckResult:
    worst = 0.0
    used = [n for n in dims if n >= 8]
    rng = np.random.default_rng(seed)
    for n in used:
        theta = float(theta_threshold(n))
        big_n = dim_tracefree(n)
        for _ in range(200):
            values = rng.uniform(-1.0, 2.0, size=big_n)
            simplified = delta_r_lower_bound(values, n, theta)
            full = delta_r_lower_bound_unsimplified(values, n, theta)
            worst = max(worst, abs(simplified - full) / max(1.0, abs(full)))
    return _result("lower_bound_forms", worst, 1e-10,
                   f"simplified vs raw-coefficient bound at the threshold; dims {used}")


def check_weighted_weyl_inequality(dims, trials, seed) -> CheckResult:
    worst = np.inf
    used = [n for n in dims if n >= 8]
    tried = 0
    for n in used:
        theta = float(theta_threshold(n))
        for eps in (0.01, 0.05, 0.1):
            for t in range(trials):
                r = models.near_sphere(n, seed=seed + 100 * t + int(eps * 1000), epsilon=eps)
                spec, norms = _chain_parts(r)
                if spec.values[0] + spec.values[1] < -2.0 * theta * spec.lambda_bar:
                    continue
                tried += 1
                lhs, rhs = _weighted_bound_values(spec.values, norms, n, theta)
                worst = min(worst, lhs - rhs)
    if not used or tried == 0:
        return CheckResult("weighted_weyl_inequality", True, 0.0, "no applicable dimension in the run")
    return _result("weighted_weyl_inequality", max(0.0, -worst), CHAIN_SLACK,
                   f"eigenvalue-weighted weyl bound on {tried} near-sphere instances; dims {used}")


def check_chain_nonnegativity(dims, trials, seed) -> CheckResult:
    worst = np.inf
    used = [n for n in dims if n in (4, 5) or n >= 8]
    tried = 0
    for n in used:
        theta = float(theta_threshold(n))
        for t in range(trials):
            scale = 0.02 * (t % 8)
            r = random_einstein(n, seed + 4000 * n + t, weyl_scale=scale, scal=float(n * (n - 1)))
            spec, norms = _chain_parts(r)
            if spec.values[0] + spec.values[1] < -2.0 * theta * spec.lambda_bar:
                continue
            tried += 1
            if n in (4, 5):
                delta = delta_r_inner_low_dim(spec.values, n)
            else:
                delta = _delta_r_from_parts(spec.values, norms, n)
                lower = delta_r_lower_bound(spec.values, n, theta)
                worst = min(worst, 3.0 * delta - lower)
            worst = min(worst, delta)
    return _result("chain_nonnegativity", max(0.0, -worst), CHAIN_SLACK,
                   f"laplacian pairing nonnegative on {tried} cone-satisfying tensors; dims {used}")


def check_low_dim_identity(dims, seed) -> CheckResult:
    used = [n for n in dims if n in (4, 5)]
    worst = 0.0
    rng = np.random.default_rng(seed)
    for n in used:
        big_n = dim_tracefree(n)
        theta = float(theta_threshold(n))
        count = 0
        while count < 1000:
            values = rng.uniform(-1.0, 2.0, size=big_n)
            if values.mean() <= 0:
                continue
            count += 1
            lhs = 2.0 * delta_r_inner_low_dim(values, n)
            rhs = delta_r_lower_bound(values, n, theta)
            worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))
    if not used:
        return CheckResult("low_dim_identity", True, 0.0, "no low dimension in the run")
    return _result("low_dim_identity", worst, IDENTITY_TOL,
                   f"twice the closed form equals the cubic bound; dims {used}")


def check_extremal_minimum(dims, seed, restarts) -> CheckResult:
    worst = 0.0
    details = []
    for n in dims:
        try:
            theta = float(theta_threshold(n))
        except NotApplicableError:
            continue
        big_n = dim_tracefree(n)
        rep = enumerate_minimum(big_n, 1.0 + theta, oracle_restarts=restarts, seed=seed)
        worst = max(worst, abs(rep.global_min), rep.agreement, max(0.0, -rep.oracle_min))
        details.append(f"n={n}: min {rep.global_min:.1e}, oracle gap {rep.agreement:.1e}")
    return _result("extremal_minimum", worst, 1e-6, "; ".join(details))


def check_infeasible_families(dims) -> CheckResult:
    ok = True
    for n in dims:
        big_n = dim_tracefree(n)
        beta = 1.5
        try:
            boundary_critical(big_n, beta, 2, 1, 0.0)
            ok = False
        except InfeasibleFamilyError:
            pass
        if big_n % 2 == 0:
            try:
                interior_critical(big_n, beta, big_n // 2)
                ok = False
            except InfeasibleFamilyError:
                pass
    return CheckResult("infeasible_families", ok, 0.0 if ok else 1.0,
                       "inconsistent equal-split families raise the designated error")


def check_closed_form_agreement(dims, seed) -> CheckResult:
    worst = 0.0
    rng = np.random.default_rng(seed)
    for n in dims:
        try:
            beta = 1.0 + float(theta_threshold(n))
        except NotApplicableError:
            beta = 1.25
        big_n = dim_tracefree(n)
        for m in range(0, min(6, (big_n + 1) // 2)):
            if 2 * m == big_n:
                continue
            p = interior_critical(big_n, beta, m)
            direct = cubic_objective(p.coordinates, big_n, beta)
            worst = max(worst, abs(p.value - direct) / max(1.0, abs(direct)))
        lo, hi = pin_interval(big_n, beta)
        for _ in range(40):
            k = int(rng.integers(1, big_n - 1))
            l = int(rng.integers(0, max(1, (k - 1) // 2 + 1)))
            if 2 * l == k:
                l = 0
            a = float(rng.uniform(lo, hi))
            p = boundary_critical(big_n, beta, k, l, a)
            direct = cubic_objective(p.coordinates, big_n, beta)
            worst = max(worst, abs(p.value - direct) / max(1.0, abs(direct)))
            q = boundary_profile(big_n, beta, a)
            dom = boundary_critical(big_n, beta, big_n - 2, 0, a)
            worst = max(worst, abs(q - cubic_objective(dom.coordinates, big_n, beta)) / max(1.0, abs(q)))
    return _result("closed_form_agreement", worst, IDENTITY_TOL,
                   "closed-form family values match the direct objective")


def check_ordering_chain(dims, seed, grid_points=2001) -> CheckResult:
    used = [n for n in dims if n >= 8]
    worst = 0.0
    rng = np.random.default_rng(seed)
    for n in used:
        beta = 1.0 + float(theta_threshold(n))
        big_n = dim_tracefree(n)
        lo, hi = pin_interval(big_n, beta)
        grid = np.linspace(lo, hi, grid_points)
        dom = np.array([boundary_profile(big_n, beta, float(a)) for a in grid])
        worst = max(worst, float(-dom.min()))
        for _ in range(10):
            k = int(rng.integers(1, big_n - 2))
            a = float(rng.uniform(lo, hi))
            base = boundary_critical(big_n, beta, k, 0, a).value
            worst = max(worst, boundary_profile(big_n, beta, a) - base)
            for l in range(1, min(3, (k - 1) // 2 + 1)):
                if 2 * l == k:
                    continue
                worst = max(worst, base - boundary_critical(big_n, beta, k, l, a).value)
        for m in range(1, (big_n + 1) // 2):
            if 2 * m == big_n:
                continue
            worst = max(worst, -interior_critical(big_n, beta, m).value)
    if not used:
        return CheckResult("ordering_chain", True, 0.0, "no applicable dimension in the run")
    return _result("ordering_chain", worst, 1e-10,
                   f"boundary dominance orderings and interior positivity; dims {used}")


def run_suite(dims=DEFAULT_DIMS, trials: int = 100, seed: int = 0,
              restarts: int = 20, grid_points: int = 2001) -> list[CheckResult]:
    """Run every named check; order is fixed so the first failure is stable."""
    dims = tuple(dims)
    return [
        check_norm_convention(),
        check_theta_constants(),
        check_coefficient_identities(),
        check_einstein_identities(dims, trials, seed),
        check_weyl_action_sum(dims, trials, seed),
        check_weyl_action_max(dims, trials, seed),
        check_lower_bound_forms(dims, seed),
        check_weighted_weyl_inequality(dims, trials, seed),
        check_chain_nonnegativity(dims, trials, seed),
        check_low_dim_identity(dims, seed),
        check_extremal_minimum(dims, seed, restarts),
        check_infeasible_families(dims),
        check_closed_form_agreement(dims, seed),
        check_ordering_chain(dims, seed, grid_points),
    ]


def input_checks(tensor: CurvatureTensor, tol: float = 1e-10) -> list[CheckResult]:
    """Per-tensor checks for a user-supplied component file."""
    defects = symmetry_check(tensor)
    sym_worst = max(defects.values())
    results = [_result("input_symmetry", sym_worst, tol,
                       "; ".join(f"{k}={v:.2e}" for k, v in defects.items()))]
    e_defect = einstein_defect(tensor)
    results.append(CheckResult("input_einstein", True, e_defect,
                               "ricci deviation from its trace part (informational)"))
    spec = spectrum(build_second_kind(tensor))
    if e_defect <= 1e-8:
        n = tensor.n
        rsq = tensor_norm_sq(tensor)
        wsq = tensor_norm_sq(weyl_decompose(tensor).weyl)
        mean = spec.lambda_bar
        s2 = float(np.sum(spec.values**2))
        worst = max(
            abs(rsq - (wsq + 2.0 * n * (n - 1) * mean**2)) / max(1.0, rsq),
            abs(s2 - (0.75 * rsq - (n - 1) ** 2 * mean**2)) / max(1.0, abs(s2)),
            abs(scalar_curvature(tensor) - n * (n - 1) * mean) / max(1.0, abs(scalar_curvature(tensor))),
        )
        results.append(_result("input_einstein_identities", worst, IDENTITY_TOL,
                               "spectral identities on the supplied tensor"))
    return results
