"""Resource accounting and protocol optimization.

Accumulates per-test Fisher information over repeated tests under a joint
budget of total time, absorbed photons per sample, per-test overhead time,
and detector efficiency; provides the classical and general quantum-advantage
ceilings; and solves advantage-boundary curves in the
(overhead time, detector inefficiency) plane.
"""

from dataclasses import dataclass, field

import numpy as np

from .core import LossChannel
from .errors import NoCrossing
from .fisher import per_test_qfi
from .search import bisect_root, golden_section_max, scan_then_golden

__all__ = [
    "Budget",
    "PrecisionResult",
    "n_abs",
    "classical_bound",
    "optimize_nu",
    "bound_finite_N",
    "bound_eta",
    "bound_text",
    "j_of_t",
    "j_max",
    "advantage_ratio",
    "advantage_eta_threshold",
    "advantage_boundary",
    "general_boundary",
    "crossing_n_abs",
]

T_CAP_FACTOR = 50.0  # cap on gamma*t when the budget can never be exhausted


@dataclass(frozen=True)
class Budget:
    """Experimental resources: total time T, mean absorbed photons allowed
    per sample, overhead time per test, and detector efficiency."""

    T: float
    N_abs_max: float
    t_ext: float = 0.0
    eta: float = 1.0

    def __post_init__(self):
        if self.T <= 0 or self.N_abs_max <= 0:
            raise ValueError("T and N_abs_max must be positive")
        if self.t_ext < 0:
            raise ValueError("t_ext must be nonnegative")
        if not (0 < self.eta <= 1):
            raise ValueError("eta must lie in (0, 1]")


@dataclass(frozen=True)
class PrecisionResult:
    """Optimized protocol: continuous test count, per-test interrogation
    time, per-test Fisher information, and the accumulated precision
    nu * F.  ``integer_neighbors`` holds the two realizable protocols with
    whole test counts."""

    nu: float
    t: float
    per_test_fisher: object
    accumulated: float
    capped: bool = False
    integer_neighbors: tuple = ()


def n_abs(N, gamma, t):
    """Mean photons absorbed by the sample: N (1 - e^(-gamma t))."""
    return N * -np.expm1(-gamma * t)


def classical_bound(T, gamma, N_abs):
    """Best accumulated precision achievable with coherent probes of any
    intensity: T N_abs / gamma."""
    return T * N_abs / gamma


def bound_finite_N(N, T, gamma):
    """Precision ceiling for any probe of N photons: T N / gamma."""
    return T * N / gamma


def bound_eta(eta):
    """Quantum-advantage ratio ceiling from detector efficiency alone."""
    if not 0 < eta < 1:
        raise ValueError("eta must lie in (0, 1)")
    return eta / (1 - eta)


def bound_text(gamma, t_ext):
    """Quantum-advantage ratio ceiling from overhead time alone."""
    if t_ext <= 0:
        raise ValueError("t_ext must be positive")
    return 1.0 / (gamma * t_ext)


def j_of_t(t, gamma, eta, t_ext):
    """Advantage-ratio bound at interrogation time t for given detector
    efficiency and overhead time; no advantage is possible where it stays
    at or below 1 for every t."""
    if t <= 0:
        raise ValueError("t must be positive")
    e = np.exp(-gamma * t)
    return gamma * t * t * eta * e / ((t + t_ext) * (1 - e) * (1 - eta * e))


def j_max(gamma, eta, t_ext, t_hi=None, n_scan=128):
    """Maximum of the advantage-ratio bound over interrogation time."""
    if t_hi is None:
        t_hi = T_CAP_FACTOR / gamma
    ts = np.geomspace(1e-9 / gamma, t_hi, n_scan)
    vals = [j_of_t(t, gamma, eta, t_ext) for t in ts]
    i = int(np.argmax(vals))
    lo = ts[max(i - 1, 0)]
    hi = ts[min(i + 1, n_scan - 1)]
    _, v = golden_section_max(lambda t: j_of_t(t, gamma, eta, t_ext), lo, hi, tol=1e-12)
    return max(v, vals[i])


def _saturation_time(N, s, gamma):
    # interrogation time at which a probe of N photons has deposited s
    return -np.log1p(-s / N) / gamma


def optimize_nu(probe, budget, gamma, fisher_fn=per_test_qfi):
    """Maximize nu * F over the test count under the time and absorption
    budget.

    For each candidate absorption level s the interrogation time saturates
    the budget at s and nu fills the total time; a coarse scan plus golden
    section picks the best s, which handles budgets where exhausting the
    sample is not optimal.  When the budget exceeds the probe's photon
    number the time is capped at 50/gamma and the result flagged.
    """
    N = probe.total_photons
    capped = budget.N_abs_max >= N
    t_cap = T_CAP_FACTOR / gamma
    s_hi = min(budget.N_abs_max, n_abs(N, gamma, t_cap))
    s_hi = min(s_hi, N * (1 - 1e-15))

    def value_at(t):
        channel = LossChannel(gamma, t, budget.eta)
        fr = fisher_fn(probe, channel)
        return budget.T / (t + budget.t_ext) * fr.value, fr

    def objective(s):
        return value_at(_saturation_time(N, s, gamma))[0]

    s_star, _ = scan_then_golden(objective, s_hi * 1e-9, s_hi, n_scan=64, tol=s_hi * 1e-11)
    t_star = _saturation_time(N, s_star, gamma)
    acc, fr = value_at(t_star)
    nu = budget.T / (t_star + budget.t_ext)

    t_sat = _saturation_time(N, s_hi, gamma)
    neighbors = []
    for nu_int in {max(1, int(np.floor(nu))), max(1, int(np.ceil(nu)))}:
        t_i = budget.T / nu_int - budget.t_ext
        if t_i <= 0:
            neighbors.append((nu_int, 0.0))
            continue
        t_i = min(t_i, t_sat)
        neighbors.append((nu_int, nu_int * value_at(t_i)[0] * (t_i + budget.t_ext) / budget.T))
    neighbors.sort()

    assert nu * (t_star + budget.t_ext) <= budget.T * (1 + 1e-9)
    assert n_abs(N, gamma, t_star) <= budget.N_abs_max * (1 + 1e-9) + 1e-15
    return PrecisionResult(
        nu=nu,
        t=t_star,
        per_test_fisher=fr,
        accumulated=acc,
        capped=capped,
        integer_neighbors=tuple(neighbors),
    )


def advantage_ratio(probe, budget, gamma, fisher_fn=per_test_qfi):
    """Accumulated precision relative to the coherent-probe bound."""
    res = optimize_nu(probe, budget, gamma, fisher_fn)
    return res.accumulated / classical_bound(budget.T, gamma, budget.N_abs_max)


def advantage_eta_threshold(
    probe, n_abs_max, t_ext, gamma=1.0, T=10.0, fisher_fn=per_test_qfi, tol=1e-6
):
    """Detector efficiency at which the probe's advantage ratio crosses 1
    for a fixed overhead time; raises NoCrossing when even a perfect
    detector gives no advantage."""

    def ratio(eta):
        return advantage_ratio(probe, Budget(T, n_abs_max, t_ext, eta), gamma, fisher_fn)

    etas = (0.3, 0.7, 1.0)
    r = [ratio(e) for e in etas]
    if not (r[0] <= r[1] + 1e-9 and r[1] <= r[2] + 1e-9):
        raise RuntimeError("advantage ratio is not monotone in eta")
    if r[2] < 1.0:
        raise NoCrossing(f"ratio stays below 1 for all eta at t_ext={t_ext}")
    lo = 1e-6
    if ratio(lo) >= 1.0:
        return lo
    return bisect_root(lambda e: ratio(e) - 1.0, lo, 1.0, tol=tol)


def advantage_boundary(
    probe, n_abs_max, t_ext_grid=None, gamma=1.0, T=10.0, fisher_fn=per_test_qfi, tol=1e-6
):
    """Advantage-boundary curve for one probe: for each overhead time, the
    efficiency where the ratio to the coherent bound equals 1.

    Grid points with no crossing are reported as NaN.  Default grid:
    200 log-spaced values of gamma t_ext in [1e-3, 1].
    """
    if t_ext_grid is None:
        t_ext_grid = np.geomspace(1e-3, 1.0, 200) / gamma
    etas = np.full(len(t_ext_grid), np.nan)
    for i, t_ext in enumerate(t_ext_grid):
        try:
            etas[i] = advantage_eta_threshold(
                probe, n_abs_max, t_ext, gamma, T, fisher_fn, tol
            )
        except NoCrossing:
            pass
    return np.asarray(t_ext_grid), etas


def general_boundary(t_ext_grid=None, gamma=1.0, N=None, n_abs_max=1.0, tol=1e-6):
    """Efficiency threshold where the general advantage bound reaches 1.

    With ``N`` given, the interrogation time is fixed by exhausting the
    absorption budget on an N-photon probe; otherwise the bound is
    maximized over all times (the strongest, probe-independent limit).
    """
    if t_ext_grid is None:
        t_ext_grid = np.geomspace(1e-3, 1.0, 200) / gamma
    etas = np.full(len(t_ext_grid), np.nan)
    for i, t_ext in enumerate(t_ext_grid):
        if N is None:
            f = lambda eta: j_max(gamma, eta, t_ext) - 1.0
        else:
            t_fix = _saturation_time(N, min(n_abs_max, N * (1 - 1e-12)), gamma)
            f = lambda eta: j_of_t(t_fix, gamma, eta, t_ext) - 1.0
        hi = 1.0 - 1e-12
        if f(hi) < 0:
            continue
        lo = 1e-9
        if f(lo) >= 0:
            etas[i] = lo
            continue
        etas[i] = bisect_root(f, lo, hi, tol=tol)
    return np.asarray(t_ext_grid), etas


def crossing_n_abs(probe, gamma=1.0, T=10.0, fisher_fn=per_test_qfi, lo=0.05, hi=4.0, tol=1e-4):
    """Absorption budget at which an ideal probe's accumulated precision
    crosses the coherent bound (eta = 1, no overhead)."""

    def f(na):
        return advantage_ratio(probe, Budget(T, na), gamma, fisher_fn) - 1.0

    return bisect_root(f, lo, hi, tol=tol)
