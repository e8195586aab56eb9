"""Exact symmetric-subspace atom-cavity dynamics.

One cavity mode coupled collectively to N_at resonant atoms conserves the
total excitation number, so each sector is a real symmetric tridiagonal
ladder diagonalized exactly.  This module covers Fock-state preparation
(superradiant pumping from fully excited atoms), absorption readout with
repetition, the linearized closed forms for preparation/measurement times,
the aggregated atom-cavity estimation precision, and the mean-field
switch-timescale law.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import eigh_tridiagonal

from .core import LossChannel, PhotonPMF
from .errors import ODEFailure
from .fisher import cfi_nrm_g0_closed, qfi_fock_pair
from .protocol import T_CAP_FACTOR
from .search import golden_section_max

__all__ = [
    "DickeConfig",
    "LadderSector",
    "build_sector",
    "evolve_sector",
    "photon_pmf",
    "mean_photons",
    "peak_mean_photons",
    "t_prep",
    "q_linear",
    "t_meas",
    "p_error",
    "eta_from_perror",
    "ac_precision",
    "exact_prep_time",
    "h2_couplings",
    "MeanFieldTrajectory",
    "meanfield_evolve",
    "switch_time",
    "switch_time_formula",
]


@dataclass(frozen=True)
class DickeConfig:
    """Atoms per cavity, collective coupling rate, bare frequency, and the
    target mean photon number per cavity."""

    N_at: int
    J: float = 1.0
    omega: float = 0.0
    n_target: int = 1

    def __post_init__(self):
        if self.N_at < 1:
            raise ValueError("N_at must be >= 1")
        if self.J <= 0:
            raise ValueError("J must be positive")


class LadderSector:
    """Conserved-excitation sector: states (k photons, E - k collective
    atomic excitations) with tridiagonal coupling.

    The bare frequency only shifts the whole sector spectrum by omega * E,
    a global phase on every amplitude.
    """

    def __init__(self, excitations, k_min, couplings, omega=0.0):
        self.excitations = int(excitations)
        self.k_min = int(k_min)
        self.couplings = np.asarray(couplings, dtype=float)
        self.omega = omega
        self._eig = None

    @property
    def dim(self):
        return len(self.couplings) + 1

    @property
    def labels(self):
        return [(k, self.excitations - k) for k in range(self.k_min, self.excitations + 1)]

    def eigensystem(self):
        if self._eig is None:
            if self.dim == 1:
                self._eig = (np.zeros(1), np.ones((1, 1)))
            else:
                self._eig = eigh_tridiagonal(np.zeros(self.dim), self.couplings)
        return self._eig


def build_sector(config, excitations, regime="preparation"):
    """Tridiagonal sector with ``excitations`` total quanta.

    Both regimes share the collective-spin ladder algebra; the coupling
    between k and k+1 photons is J sqrt(k+1) sqrt(m (N_at - m + 1)) with
    m = excitations - k atomic excitations before the transfer.  For the
    preparation sector (all atoms excited, E = N_at) this is
    J (k+1) sqrt(N_at - k).
    """
    if regime not in ("preparation", "absorption"):
        raise ValueError("regime must be 'preparation' or 'absorption'")
    E = int(excitations)
    if E < 0:
        raise ValueError("excitations must be nonnegative")
    k_min = max(0, E - config.N_at)
    k = np.arange(k_min, E)
    m = E - k
    couplings = config.J * np.sqrt(k + 1.0) * np.sqrt(m * (config.N_at - m + 1.0))
    return LadderSector(E, k_min, couplings, config.omega)


def evolve_sector(sector, t, initial_index=0):
    """Amplitude vector after time t, starting from one basis state."""
    w, V = sector.eigensystem()
    phases = np.exp(-1j * (w + sector.omega * sector.excitations) * t)
    return V @ (phases * V[initial_index, :])


def photon_pmf(config, t):
    """Cavity photon distribution during preparation (atoms all excited,
    cavity initially empty)."""
    sector = build_sector(config, config.N_at, "preparation")
    amps = evolve_sector(sector, t, initial_index=0)
    return PhotonPMF(np.abs(amps) ** 2)


def mean_photons(config, t):
    return photon_pmf(config, t).mean()


def peak_mean_photons(config, window_factor=3.0, n_scan=600):
    """Time and value of the superradiant photon-number maximum.

    Returns (t_star, mean_photons(t_star)).
    """
    sector = build_sector(config, config.N_at, "preparation")
    w, V = sector.eigensystem()
    row0 = V[0, :]
    ks = np.arange(sector.dim)

    def mean_n(t):
        amps = V @ (np.exp(-1j * w * t) * row0)
        return float(ks @ (np.abs(amps) ** 2))

    t_hi = window_factor * switch_time_formula(config.N_at) / config.J
    ts = np.linspace(0, t_hi, n_scan)
    vals = [mean_n(t) for t in ts]
    i = int(np.argmax(vals))
    lo, hi = ts[max(i - 1, 0)], ts[min(i + 1, n_scan - 1)]
    t_star, v = golden_section_max(mean_n, lo, hi, tol=1e-12 + t_hi * 1e-10)
    if vals[i] > v:
        return ts[i], vals[i]
    return t_star, v


def t_prep(config):
    """Linearized preparation time giving n_target mean photons."""
    return np.arcsinh(np.sqrt(config.n_target)) / (np.sqrt(config.N_at) * config.J)


def q_linear(n, k):
    """Linearized photon-number distribution at the preparation time:
    geometric with mean n.  Evaluated in log space so large k never
    overflows."""
    k = np.asarray(k, dtype=float)
    if n == 0:
        return np.where(k == 0, 1.0, 0.0)
    return np.exp(k * (np.log(n) - np.log(n + 1.0)) - np.log(n + 1.0))


def t_meas(config):
    """Half-period of the collective absorption oscillation."""
    return np.pi / (2 * config.J * np.sqrt(config.N_at))


def p_error(config, n, rounds=1):
    """Probability that not all n photons are absorbed by the atoms.

    Each round evolves the residual photon Fock components (atoms reset to
    ground) for the collective half-period; measuring the atoms projects
    the cavity back onto a photon-number mixture between rounds.
    """
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    if n == 0:
        return 0.0
    tm = t_meas(config)
    weights = np.zeros(n + 1)
    weights[n] = 1.0
    for _ in range(rounds):
        nxt = np.zeros(n + 1)
        nxt[0] = weights[0]
        for r in range(1, n + 1):
            if weights[r] == 0.0:
                continue
            sector = build_sector(config, r, "absorption")
            amps = evolve_sector(sector, tm, initial_index=sector.dim - 1)
            nxt[: r + 1] += weights[r] * np.abs(amps) ** 2
        weights = nxt
    return float(1.0 - weights[0])


def eta_from_perror(p_err, n):
    """Per-photon detector efficiency equivalent to an absorption error."""
    if n == 0:
        return 1.0
    return (1.0 - p_err) ** (1.0 / n)


def exact_prep_time(config):
    """Preparation time at which the exact dynamics reaches n_target mean
    photons, found on the rising edge below the superradiant peak."""
    n = config.n_target
    t_peak, n_peak = peak_mean_photons(config)
    if n_peak < n:
        return t_peak
    lo, hi = 0.0, t_peak
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if mean_photons(config, mid) < n:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def ac_precision(
    config,
    budget,
    gamma,
    kind="qfi",
    q_mode="exact",
    eta=None,
    q_cutoff_factor=12.0,
    t_empty=None,
    use_exact_prep_time=False,
    infeasible_pairs="skip",
):
    """Accumulated precision of the probabilistic atom-cavity protocol.

    Preparation yields Fock pairs (m, l) with independent weights q(m) q(l);
    each pair is interrogated until it absorbs the per-sample budget, and
    the per-pair Fisher information (``kind="qfi"`` or the small-coupling
    number-resolved ``"cfi-nrm-g0"``) is averaged against the time spent.
    Empty pairs contribute a dead time ``t_empty`` (default: the budget's
    overhead time).

    Pairs with m + l <= N_abs_max can never deposit the budget; by default
    they are not interrogated at all (zero information, dead time only),
    which is also what maximizes the aggregate precision.
    ``infeasible_pairs="cap"`` interrogates them for 50/gamma instead.
    ``q_mode="linear"`` swaps in the geometric closed form for the photon
    distribution; ``use_exact_prep_time`` re-solves the preparation time so
    the exact dynamics (rather than its linearization) yields n_target mean
    photons.
    """
    n = config.n_target
    if eta is None:
        eta = budget.eta
    if infeasible_pairs not in ("skip", "cap"):
        raise ValueError("infeasible_pairs must be 'skip' or 'cap'")
    cutoff = int(np.ceil(q_cutoff_factor * n))
    if isinstance(q_mode, (list, tuple, np.ndarray)):
        q = np.asarray(q_mode, dtype=float)
    elif q_mode == "exact":
        tp = exact_prep_time(config) if use_exact_prep_time else t_prep(config)
        q = photon_pmf(config, tp).probs[: cutoff + 1]
    elif q_mode == "linear":
        q = q_linear(n, np.arange(cutoff + 1))
    else:
        raise ValueError("q_mode must be 'exact', 'linear', or a probability vector")
    q = q / q.sum()

    if t_empty is None:
        t_empty = budget.t_ext
    capped = False

    kmax = len(q) - 1
    fish = np.zeros((kmax + 1, kmax + 1))
    times = np.zeros((kmax + 1, kmax + 1))
    times[0, 0] = t_empty
    for m in range(kmax + 1):
        for l in range(m, kmax + 1):
            if m + l == 0:
                continue
            if budget.N_abs_max >= m + l:
                capped = True
                if infeasible_pairs == "skip":
                    times[m, l] = times[l, m] = t_empty
                    continue
                t_ml = T_CAP_FACTOR / gamma
            else:
                t_ml = -np.log1p(-budget.N_abs_max / (m + l)) / gamma
            channel = LossChannel(gamma, t_ml, eta)
            if kind == "qfi":
                f = qfi_fock_pair(m, l, channel).value
            elif kind == "cfi-nrm-g0":
                f = cfi_nrm_g0_closed(m, l, channel).value
            else:
                raise ValueError("kind must be 'qfi' or 'cfi-nrm-g0'")
            fish[m, l] = fish[l, m] = f
            times[m, l] = times[l, m] = t_ml
    if capped:
        warnings.warn(
            "some Fock pairs cannot absorb the budget; they were "
            f"{'skipped' if infeasible_pairs == 'skip' else 'time-capped'}",
            stacklevel=2,
        )
    qq = np.outer(q, q)
    mean_f = float(np.sum(qq * fish))
    mean_t = float(np.sum(qq * (times + budget.t_ext)))
    return budget.T * mean_f / mean_t


def h2_couplings(N, m=None):
    """Tridiagonal elements of the cubic-interaction ladder that mimics the
    collective one; close to (m+1) sqrt(N-m) once m is a few tens."""
    if m is None:
        m = np.arange(N)
    m = np.asarray(m, dtype=float)
    return np.sqrt((N - m) * (m + 0.5) * (m + 1.0))


# ---------------------------------------------------------------------------
# mean-field switch dynamics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MeanFieldTrajectory:
    """Sampled mean-field trajectory with the dense interpolant kept for
    refinement."""

    t: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    sol: object = field(repr=False, default=None)

    @property
    def K(self):
        return np.abs(self.alpha) ** 2 + np.abs(self.beta) ** 2 / 2


def _meanfield_rhs(t, y):
    al = y[0] + 1j * y[1]
    be = y[2] + 1j * y[3]
    dal = -0.5j * be * be
    dbe = -1j * np.conj(be) * al
    return [dal.real, dal.imag, dbe.real, dbe.imag]


def meanfield_evolve(N, t_span=None, rtol=1e-9, atol=1e-12, n_points=2000):
    """Integrate the classical amplitude equations from a fully inverted
    ensemble seeded with one photon.

    Initial phases put the relative phase arg(alpha) - 2 arg(beta) at pi/2,
    which drives the photon amplitude to grow.  K = |alpha|^2 + |beta|^2/2
    is a constant of motion used as an accuracy check.
    """
    if N < 2:
        raise ValueError("N must be >= 2")
    if t_span is None:
        t_span = (0.0, 3.0 * switch_time_formula(N))
    y0 = [0.0, np.sqrt(N), 1.0, 0.0]
    sol = solve_ivp(
        _meanfield_rhs, t_span, y0, method="RK45", rtol=rtol, atol=atol,
        dense_output=True,
    )
    if not sol.success:
        raise ODEFailure(sol.message)
    ts = np.linspace(t_span[0], t_span[1], n_points)
    y = sol.sol(ts)
    return MeanFieldTrajectory(
        t=ts, alpha=y[0] + 1j * y[1], beta=y[2] + 1j * y[3], sol=sol
    )


def switch_time(N, **kwargs):
    """Time of the photon-amplitude maximum along the mean-field trajectory,
    refined by golden section on the dense solution."""
    traj = meanfield_evolve(N, **kwargs)
    b2 = np.abs(traj.beta) ** 2
    i = int(np.argmax(b2))
    lo = traj.t[max(i - 1, 0)]
    hi = traj.t[min(i + 1, len(traj.t) - 1)]

    def f(t):
        y = traj.sol.sol(t)
        return y[2] ** 2 + y[3] ** 2

    t_star, _ = golden_section_max(f, lo, hi, tol=1e-12)
    return t_star


def switch_time_formula(N):
    """Large-N estimate of the switch time: log(4N) / (2 sqrt(N))."""
    return np.log(4.0 * N) / (2.0 * np.sqrt(N))
