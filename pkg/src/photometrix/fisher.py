"""Fisher-information engines for each probe family.

Closed-form quantum Fisher information (QFI) for coherent, twin-Fock, NOON,
and general Fock-pair probes under symmetric photon loss; classical Fisher
information (CFI) of photon-number-resolved measurements evaluated through
stable amplitude sums; their Poisson-limit counterparts; the loss upper
bound; the squeezed-state CFI with its simplex optimizer; and the optimal
global measurement that saturates the twin-Fock QFI at small coupling.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize
from scipy.special import xlogy

from .core import (
    LossChannel,
    TwoModeBasis,
    _logfact,
    beamsplitter_amplitudes,
    binomial_loss_pmf,
    poisson_cutoff,
    poisson_pmf,
)
from .errors import InvalidFractions, MuZero
from .search import golden_section_max, scan_then_golden

__all__ = [
    "Coherent",
    "TwinFock",
    "Noon",
    "FockPair",
    "Squeezed",
    "SqueezedParams",
    "FisherResult",
    "qfi_coherent",
    "qfi_upper_bound",
    "qfi_tfs_exact",
    "qfi_tfs_poisson",
    "qfi_noon",
    "qfi_noon_poisson",
    "qfi_fock_pair",
    "cfi_nrm",
    "cfi_nrm_g0_closed",
    "cfi_nrm_gstar",
    "cfi_nrm_poisson",
    "cfi_nrm_poisson_gstar",
    "cfi_squeezed",
    "squeezed_poisson_cfi",
    "optimize_squeezed",
    "optimal_measurement_L",
    "cfi_of_L",
    "per_test_qfi",
    "per_test_cfi_nrm_g0",
]


# ---------------------------------------------------------------------------
# probe families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Coherent:
    N: float

    @property
    def total_photons(self):
        return self.N


@dataclass(frozen=True)
class TwinFock:
    n: int

    @property
    def total_photons(self):
        return 2 * self.n


@dataclass(frozen=True)
class Noon:
    N: int

    @property
    def total_photons(self):
        return self.N


@dataclass(frozen=True)
class FockPair:
    m: int
    l: int

    @property
    def total_photons(self):
        return self.m + self.l


@dataclass(frozen=True)
class SqueezedParams:
    """Mean photon number and the fractions of it carried by the two
    squeezers; the remainder N(1 - beta_r - beta_s) sits in the coherent
    displacement."""

    N: float
    beta_r: float
    beta_s: float

    def __post_init__(self):
        if not (0 < self.beta_r < 1 and 0 < self.beta_s < 1):
            raise InvalidFractions("squeezing fractions must lie in (0, 1)")
        if self.beta_r + self.beta_s > 1 + 1e-12:
            raise InvalidFractions("beta_r + beta_s must not exceed 1")

    @property
    def alpha_sq(self):
        return self.N * max(1.0 - self.beta_r - self.beta_s, 0.0)

    @property
    def total_photons(self):
        return self.N


Squeezed = SqueezedParams


@dataclass(frozen=True)
class FisherResult:
    """Fisher information per test (dimension time^2), tagged with what
    produced it."""

    value: float
    kind: str  # "QFI" or "CFI"
    probe: object
    channel: LossChannel
    g: float | None = None
    note: str = ""

    def __post_init__(self):
        if self.value < -1e-12:
            raise ValueError(f"negative Fisher information {self.value}")
        object.__setattr__(self, "value", max(self.value, 0.0))


# ---------------------------------------------------------------------------
# closed-form QFI
# ---------------------------------------------------------------------------

def qfi_coherent(N, channel):
    """Shot-noise QFI of a coherent probe: t^2 N eta e^(-gamma t)."""
    if channel.survival == 0.0:
        return FisherResult(0.0, "QFI", Coherent(N), channel)
    value = channel.t**2 * N * channel.survival
    return FisherResult(value, "QFI", Coherent(N), channel)


def qfi_upper_bound(N, channel):
    """Loss-limited ceiling t^2 N (1 - mu)/mu valid for any N-photon probe."""
    mu = channel.mu
    if mu == 0:
        raise MuZero("bound diverges for a lossless channel")
    return channel.t**2 * N * (1 - mu) / mu


def _significant_range(p, rel=1e-20):
    nz = np.nonzero(p > p.max() * rel)[0]
    return np.arange(nz[0], nz[-1] + 1)


def _tfs_weight(n, i, j):
    # population weights and interference bracket of the lossy twin-Fock QFI
    I, J = np.meshgrid(i, j, indexing="ij")
    with np.errstate(divide="ignore"):
        ratio = (n - J + 1.0) * (I + 1.0) / (J * (n - I * 1.0))
    bracket = np.where(J == 0, 0.5, 0.5 - 1.0 / (1.0 + ratio))
    return np.where(n - I == 0, 0.0, (n - I) * (n - J + 1.0) * bracket)


def qfi_tfs_exact(n, channel):
    """QFI of a lossy twin-Fock probe |n, n> after interrogation time t.

    Double sum over per-mode loss counts; the j = 0 limit of the
    interference bracket is 1/2 and fully depleted rows contribute zero.
    """
    if n < 1:
        raise ValueError("twin-Fock index must be >= 1")
    if channel.survival == 0.0:
        return FisherResult(0.0, "QFI", TwinFock(n), channel)
    p = binomial_loss_pmf(n, channel.mu).probs
    idx = _significant_range(p)
    w = _tfs_weight(n, idx, idx)
    value = 4 * channel.t**2 * float(p[idx] @ w @ p[idx])
    return FisherResult(value, "QFI", TwinFock(n), channel)


def qfi_tfs_poisson(n_abs, gamma=1.0, tail_tol=1e-12):
    """Poisson-limit twin-Fock QFI divided by gamma^2.

    Equal to n_abs^2 sum_ij p_i p_j (1/2 - j/(i+1+j)) with Poisson(n_abs/2)
    loss counts, truncated at cumulative mass 1 - tail_tol.
    """
    if n_abs < 0:
        raise ValueError("n_abs must be nonnegative")
    if n_abs == 0:
        return 0.0
    lam = n_abs / 2
    p = poisson_pmf(lam, poisson_cutoff(lam, tail_tol), tail_tol=1.0).probs
    k = np.arange(len(p), dtype=float)
    i, j = np.meshgrid(k, k, indexing="ij")
    s = np.sum(p[:, None] * p[None, :] * (0.5 - j / (i + 1.0 + j)))
    return n_abs**2 * float(s) / gamma**2


def qfi_noon(N, channel):
    """QFI of a NOON probe: N^2 t^2 times the probability that no photon is
    lost from either branch."""
    if N < 1:
        raise ValueError("NOON photon number must be >= 1")
    if channel.survival == 0.0:
        return FisherResult(0.0, "QFI", Noon(N), channel)
    value = N**2 * channel.t**2 * (1 - channel.mu) ** N
    return FisherResult(value, "QFI", Noon(N), channel)


def qfi_noon_poisson(n_abs, gamma=1.0):
    """Poisson-limit NOON QFI: n_abs^2 e^(-n_abs) / gamma^2."""
    return n_abs**2 * np.exp(-n_abs) / gamma**2


def qfi_fock_pair(m, l, channel):
    """QFI of a general lossy Fock pair |m, l>; reduces to the twin-Fock
    expression at m = l and to t^2 (m + l + 2 m l) without loss."""
    if m < 0 or l < 0:
        raise ValueError("photon numbers must be nonnegative")
    if channel.survival == 0.0:
        return FisherResult(0.0, "QFI", FockPair(m, l), channel)
    mu = channel.mu
    pl = binomial_loss_pmf(l, mu).probs
    pm = binomial_loss_pmf(m, mu).probs
    il = _significant_range(pl)
    jm = _significant_range(pm)
    I, J = np.meshgrid(il, jm, indexing="ij")
    with np.errstate(divide="ignore"):
        r1 = (m - J + 1.0) * (I + 1.0) / (J * (l - I * 1.0))
        r2 = (l - I + 1.0) * (J + 1.0) / (I * (m - J * 1.0))
    b1 = np.where(J == 0, 0.5, 0.5 - 1.0 / (1.0 + r1))
    b2 = np.where(I == 0, 0.5, 0.5 - 1.0 / (1.0 + r2))
    term1 = np.where(l - I == 0, 0.0, (l - I) * (m - J + 1.0) * b1)
    term2 = np.where(m - J == 0, 0.0, (m - J) * (l - I + 1.0) * b2)
    value = 2 * channel.t**2 * float(pl[il] @ (term1 + term2) @ pm[jm])
    return FisherResult(value, "QFI", FockPair(m, l), channel)


# ---------------------------------------------------------------------------
# number-resolved measurement CFI
# ---------------------------------------------------------------------------

def _binom_head(n, mu, k_max):
    # first k_max+1 binomial loss probabilities without building the full pmf
    k = np.arange(min(k_max, n) + 1)
    lf = _logfact(n + 1)
    logp = (lf[n] - lf[k] - lf[n - k]) + xlogy(k, mu) + xlogy(n - k, 1.0 - mu)
    return np.exp(logp)


def _cfi_from_paths(out_ids, n_out, weights, amps, damps_g):
    """Assemble sum_o (dP_o)^2 / P_o from per-path amplitudes.

    Outcomes with exactly zero probability contribute their quadratic limit
    2 P'' = 4 sum w A'^2 (zero when the outcome is flat in g), so the value
    is continuous in g and correct at g = 0.
    """
    P = np.zeros(n_out)
    dP = np.zeros(n_out)
    lim = np.zeros(n_out)
    np.add.at(P, out_ids, weights * amps * amps)
    np.add.at(dP, out_ids, 2 * weights * amps * damps_g)
    np.add.at(lim, out_ids, 4 * weights * damps_g * damps_g)
    pos = P > 0
    value = float(np.sum(dP[pos] ** 2 / P[pos]) + np.sum(lim[~pos]))
    return value


def cfi_nrm(m, l, channel, g, derivative="analytic"):
    """CFI of the joint photon-number-resolved measurement on a lossy Fock
    pair |m, l> interrogated at coupling ``g``.

    Outcomes are the surviving photon numbers in each mode; loss patterns
    are summed incoherently and the amplitude derivative is taken
    analytically (``derivative="fd"`` switches to a central difference
    cross-check).
    """
    t = channel.t
    mu = channel.mu
    pa = binomial_loss_pmf(m, mu).probs
    pb = binomial_loss_pmf(l, mu).probs
    ks, ms, qs, out_ids, wts = [], [], [], [], []
    n_out = 0
    for s_total in range(m + l + 1):
        for s_a in range(s_total + 1):
            oid = n_out
            n_out += 1
            # loss pattern (k1 from a, k2 from b) consistent with s_total
            for k1 in range(max(0, m - s_total), m + 1):
                k2 = (m + l - s_total) - k1
                if k2 < 0 or k2 > l:
                    continue
                M, L = m - k1, l - k2
                ks.append(M)
                ms.append(L)
                qs.append(M - s_a)
                out_ids.append(oid)
                wts.append(pa[k1] * pb[k2])
    out_ids = np.array(out_ids)
    wts = np.array(wts)
    theta = g * t / 2

    if derivative == "analytic":
        A, dA = beamsplitter_amplitudes(ks, ms, qs, theta, want_derivative=True)
        dAg = dA * (t / 2)
    elif derivative == "fd":
        step = 1e-6 * max(1.0, 1.0 / t)
        A = beamsplitter_amplitudes(ks, ms, qs, theta)
        Ap = beamsplitter_amplitudes(ks, ms, qs, (g + step) * t / 2)
        Am = beamsplitter_amplitudes(ks, ms, qs, (g - step) * t / 2)
        dAg = (Ap - Am) / (2 * step)
    else:
        raise ValueError("derivative must be 'analytic' or 'fd'")
    value = _cfi_from_paths(out_ids, n_out, wts, A, dAg)
    return FisherResult(value, "CFI", FockPair(m, l), channel, g=g)


def cfi_nrm_g0_closed(m, l, channel):
    """Small-coupling limit of the number-resolved CFI in closed form."""
    mu = channel.mu
    t = channel.t
    value = t * t * (
        (1 - mu) ** (l + 1) * (l + 1) * m + (1 - mu) ** (m + 1) * (m + 1) * l
    )
    return FisherResult(value, "CFI", FockPair(m, l), channel, g=0.0)


def cfi_nrm_gstar(m, l, channel, n_scan=64, tol=1e-8):
    """Coupling that maximizes the number-resolved CFI over g t in (0, pi).

    Returns (g_star, FisherResult).  Seeded by an ``n_scan``-point sweep,
    refined by golden section to ``tol`` in g t.
    """
    t = channel.t

    def f(phi):
        return cfi_nrm(m, l, channel, phi / t).value

    phi0, val = scan_then_golden(f, tol, np.pi - 1e-12, n_scan=n_scan, tol=tol)
    g_star = phi0 / t
    return g_star, FisherResult(val, "CFI", FockPair(m, l), channel, g=g_star)


def cfi_nrm_poisson(n_abs, g, gamma=1.0, n=500, q_max=10, n_loss_max=None):
    """Poisson-limit number-resolved CFI for twin-Fock probes, evaluated at
    large finite ``n`` with interrogation time t = n_abs / (2 gamma n).

    The outcome sum keeps net transfers |q| <= q_max and total losses up to
    ``n_loss_max`` (default 4 n_abs, at least 2); the discarded outcomes are
    exponentially small as long as the mixing parameter
    chi = g n_abs / (4 gamma) stays well below q_max.
    """
    if n_abs < 0:
        raise ValueError("n_abs must be nonnegative")
    if n_abs == 0:
        return 0.0
    if n_loss_max is None:
        n_loss_max = max(2, int(np.ceil(4 * n_abs)))
    n_loss_max = min(int(n_loss_max), 2 * n)
    t = n_abs / (2 * gamma * n)
    mu = -np.expm1(-gamma * t)
    p = _binom_head(n, mu, n_loss_max)
    theta = g * t / 2

    ks, ms, qs, out_ids, wts = [], [], [], [], []
    n_out = 0
    for n_loss in range(n_loss_max + 1):
        for q in range(-q_max, q_max + 1):
            oid = n_out
            n_out += 1
            for l2 in range(n_loss + 1):
                M = n - l2
                L = n + l2 - n_loss
                qq = q - l2
                if qq < -L or qq > M or L < 0:
                    continue
                ks.append(M)
                ms.append(L)
                qs.append(qq)
                out_ids.append(oid)
                wts.append(p[l2] * p[n_loss - l2])
    out_ids = np.array(out_ids)
    wts = np.array(wts)
    A, dA = beamsplitter_amplitudes(ks, ms, qs, theta, want_derivative=True)
    return _cfi_from_paths(out_ids, n_out, wts, A, dA * (t / 2))


def cfi_nrm_poisson_gstar(n_abs, gamma=1.0, n=500, q_max=10, n_scan=32, tol=1e-6):
    """Coupling maximizing the Poisson-limit number-resolved CFI.

    The search runs over the mixing parameter chi = g n_abs / (4 gamma) up
    to q_max / 2, beyond which the q truncation itself becomes unreliable.
    Returns (g_star, value).
    """
    chi_max = q_max / 2

    def f(chi):
        return cfi_nrm_poisson(n_abs, 4 * gamma * chi / n_abs, gamma, n, q_max)

    chi0, val = scan_then_golden(f, 1e-9, chi_max, n_scan=n_scan, tol=tol)
    v0 = cfi_nrm_poisson(n_abs, 0.0, gamma, n, q_max)
    if v0 >= val:
        return 0.0, v0
    return 4 * gamma * chi0 / n_abs, val


# ---------------------------------------------------------------------------
# squeezed probes
# ---------------------------------------------------------------------------

def squeezed_poisson_cfi(n_abs, beta_r, beta_s, gamma=1.0):
    """Poisson-limit CFI of the displaced two-squeezer probe with
    number-resolved readout (limit of the finite-time form)."""
    if not (0 < beta_r < 1 and 0 < beta_s < 1) or beta_r + beta_s > 1 + 1e-12:
        raise InvalidFractions("fractions must lie in the open simplex")
    bracket = 1.0 / beta_r + beta_r / beta_s - 3.0
    return (n_abs**2 / gamma**2) * 4 * (1 - 2 * beta_r) ** 2 / (4 * n_abs + bracket)


def cfi_squeezed(params, channel, poisson=False):
    """CFI of a displaced two-squeezer probe with number-resolved readout.

    Derived for mean photon number N >> 1; the note field records that
    validity regime.  With ``poisson=True`` the absorbed-photon budget
    N (1 - e^(-gamma t)) replaces the finite-time loss factor.
    """
    N = params.N
    if poisson:
        n_abs = N * channel.mu_abs
        value = squeezed_poisson_cfi(n_abs, params.beta_r, params.beta_s, channel.gamma)
    else:
        mu = channel.mu
        bracket = 0.25 * (1.0 / params.beta_r + params.beta_r / params.beta_s - 3.0)
        value = N**2 * channel.t**2 * (1 - 2 * params.beta_r) ** 2 / (
            N * mu / (1 - mu) + bracket
        )
    return FisherResult(
        value, "CFI", params, channel, g=0.0, note="derived for N >> 1"
    )


def optimize_squeezed(n_abs, gamma=1.0, grid=200):
    """Maximize the Poisson-limit squeezed CFI over the fraction simplex.

    Coarse grid over (beta_r, beta_s) followed by Nelder-Mead refinement.
    Returns (beta_r, beta_s, value).
    """
    best_v, best_x = -1.0, None
    brs = np.linspace(1e-4, 1 - 1e-4, grid)
    fracs = np.linspace(1e-4, 1.0, grid)
    for br in brs:
        bs = (1 - br) * fracs
        ok = bs > 0
        vals = (n_abs**2 / gamma**2) * 4 * (1 - 2 * br) ** 2 / (
            4 * n_abs + 1.0 / br + br / bs[ok] - 3.0
        )
        i = int(np.argmax(vals))
        if vals[i] > best_v:
            best_v, best_x = float(vals[i]), (float(br), float(bs[ok][i]))

    def neg(x):
        br, bs = x
        if not (0 < br < 1 and 0 < bs < 1 and br + bs <= 1):
            return 1e300
        return -squeezed_poisson_cfi(n_abs, br, bs, gamma)

    res = minimize(
        neg,
        best_x,
        method="Nelder-Mead",
        options=dict(xatol=1e-10, fatol=1e-14, maxiter=20000, maxfev=20000),
    )
    if -res.fun >= best_v:
        return float(res.x[0]), float(res.x[1]), float(-res.fun)
    return best_x[0], best_x[1], best_v


# ---------------------------------------------------------------------------
# optimal global measurement for twin-Fock probes
# ---------------------------------------------------------------------------

def optimal_measurement_L(n, mu):
    """Observable whose eigenbasis saturates the lossy twin-Fock QFI at
    small coupling.

    Built on the truncated two-mode basis with total photon number <= 2n;
    couples |k, l> to |k-1, l+1> (and the mode-swapped pair) with a weight
    set by survival-probability ratios.  Returns (basis, L).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0 <= mu < 1:
        raise ValueError("mu must lie in [0, 1)")
    basis = TwoModeBasis(2 * n)
    p = binomial_loss_pmf(n, mu).probs

    def survivors(x):
        return p[n - x] if 0 <= n - x <= n else 0.0

    L = np.zeros((basis.dim, basis.dim), dtype=complex)
    for (k, l) in basis.labels:
        if k < 1 or (k - 1, l + 1) not in basis.index:
            continue
        w1 = survivors(k) * survivors(l)
        w2 = survivors(k - 1) * survivors(l + 1)
        if w1 + w2 == 0:
            continue
        coeff = 1j * (w1 - w2) / (w1 + w2) * np.sqrt(k * (l + 1))
        L[basis.index[(k, l)], basis.index[(k - 1, l + 1)]] += coeff
        L[basis.index[(l, k)], basis.index[(l + 1, k - 1)]] += coeff
    return basis, L


def cfi_of_L(n, channel, g, eig_tol=1e-8):
    """CFI of measuring the eigenbasis of the optimal observable on the
    lossy, evolved twin-Fock state."""
    from scipy.linalg import eigh

    mu = channel.mu
    t = channel.t
    basis, L = optimal_measurement_L(n, mu)
    H = basis.h_int()
    p = binomial_loss_pmf(n, mu).probs
    rho0 = np.zeros((basis.dim, basis.dim))
    for k1 in range(n + 1):
        for k2 in range(n + 1):
            i = basis.index[(n - k1, n - k2)]
            rho0[i, i] += p[k1] * p[k2]
    lamH, vecH = eigh(H)
    U = (vecH * np.exp(-1j * g * t * lamH)) @ vecH.conj().T
    rho = U @ rho0 @ U.conj().T
    drho = -1j * t * (H @ rho - rho @ H)

    lam, vec = eigh(L)
    order = np.argsort(lam)
    lam, vec = lam[order], vec[:, order]
    value = 0.0
    i = 0
    while i < len(lam):
        j = i
        while j + 1 < len(lam) and lam[j + 1] - lam[j] < eig_tol * max(1.0, abs(lam[j])):
            j += 1
        block = vec[:, i : j + 1]
        P = float(np.real(np.einsum("ia,ij,ja->", block.conj(), rho, block)))
        dP = float(np.real(np.einsum("ia,ij,ja->", block.conj(), drho, block)))
        if P > 1e-14:
            value += dP * dP / P
        i = j + 1
    return value


# ---------------------------------------------------------------------------
# per-test engine dispatch
# ---------------------------------------------------------------------------

def per_test_qfi(probe, channel):
    """QFI engine for a probe under a loss channel."""
    if isinstance(probe, Coherent):
        return qfi_coherent(probe.N, channel)
    if isinstance(probe, TwinFock):
        return qfi_tfs_exact(probe.n, channel)
    if isinstance(probe, Noon):
        return qfi_noon(probe.N, channel)
    if isinstance(probe, FockPair):
        return qfi_fock_pair(probe.m, probe.l, channel)
    raise TypeError(f"no QFI engine for probe {probe!r}")


def per_test_cfi_nrm_g0(probe, channel):
    """Small-coupling number-resolved CFI engine."""
    if isinstance(probe, TwinFock):
        return cfi_nrm_g0_closed(probe.n, probe.n, channel)
    if isinstance(probe, FockPair):
        return cfi_nrm_g0_closed(probe.m, probe.l, channel)
    raise TypeError(f"no number-resolved CFI engine for probe {probe!r}")
