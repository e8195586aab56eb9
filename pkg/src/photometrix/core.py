"""Number-basis probability machinery for two lossy bosonic modes.

Photon-loss distributions, beamsplitter transition probabilities evaluated
as stable signed log-space sums, and two independent brute-force Fisher
information oracles (an orthogonal-ensemble formula and a full spectral
decomposition) used to validate every closed form in :mod:`photometrix.fisher`.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln, gammainc, xlogy
from scipy.linalg import eigh

from .errors import CutoffTooSmall, IndexOutOfRange, NotAState

__all__ = [
    "PhotonPMF",
    "LossChannel",
    "JointFockPMF",
    "MixedFockDecomposition",
    "binomial_loss_pmf",
    "poisson_pmf",
    "beamsplitter_amplitudes",
    "beamsplitter_prob",
    "apply_loss_joint",
    "fock_variance",
    "fock_coupling",
    "mixed_qfi_oracle",
    "spectral_qfi_oracle",
    "TwoModeBasis",
]

# log-factorial table, grown on demand; index x holds log(x!)
_LOGFACT = gammaln(np.arange(1, 4098, dtype=float))


def _logfact(max_index):
    global _LOGFACT
    if max_index >= len(_LOGFACT):
        _LOGFACT = gammaln(np.arange(1, 2 * max_index + 2, dtype=float))
    return _LOGFACT


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PhotonPMF:
    """Probability per photon count, indexed 0..k_max.

    ``tail_mass`` is the probability truncated away by the cutoff; raw
    construction never renormalizes silently.
    """

    probs: np.ndarray
    tail_mass: float = 0.0

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if np.any(p < -1e-12):
            raise ValueError("negative probability entry")
        object.__setattr__(self, "probs", np.clip(p, 0.0, None))
        total = self.probs.sum() + self.tail_mass
        if not (1 - 1e-9 <= total <= 1 + 1e-9):
            raise ValueError(f"pmf plus tail sums to {total}, not 1")

    def mean(self):
        return float(np.sum(np.arange(len(self.probs)) * self.probs))

    def renormalized(self):
        """Explicitly fold the tail back by rescaling the retained entries."""
        s = self.probs.sum()
        return PhotonPMF(self.probs / s, 0.0)

    def __len__(self):
        return len(self.probs)


@dataclass(frozen=True)
class LossChannel:
    """Exponential photon absorption at rate ``gamma`` over time ``t``, read
    out by a detector of efficiency ``eta``.

    ``mu`` is the per-photon probability of not being registered
    (absorbed or missed); ``mu_abs`` counts only absorption, which is what
    damages the sample.
    """

    gamma: float
    t: float
    eta: float = 1.0

    def __post_init__(self):
        if self.gamma < 0 or self.t < 0:
            raise ValueError("gamma and t must be nonnegative")
        if not (0 < self.eta <= 1):
            raise ValueError("eta must lie in (0, 1]")

    @property
    def survival(self):
        return self.eta * np.exp(-self.gamma * self.t)

    @property
    def mu(self):
        return 1.0 - self.survival

    @property
    def mu_abs(self):
        return -np.expm1(-self.gamma * self.t)


@dataclass(frozen=True)
class JointFockPMF:
    """Joint distribution over (photons surviving in mode a, in mode b)."""

    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if np.any(p < -1e-12):
            raise ValueError("negative probability entry")
        object.__setattr__(self, "probs", np.clip(p, 0.0, None))
        if abs(self.probs.sum() - 1.0) > 1e-12:
            raise ValueError("joint pmf does not sum to 1")


@dataclass(frozen=True)
class MixedFockDecomposition:
    """Orthogonal mixture of two-mode Fock states evolved for time ``t``.

    ``weights[s]`` is the population of the Fock pair ``labels[s]``; labels
    must be pairwise distinct so the mixture is an eigendecomposition.
    """

    weights: np.ndarray
    labels: list
    t: float
    g: float = 0.0

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "weights", w)
        if np.any(w < -1e-12) or abs(w.sum() - 1.0) > 1e-9:
            raise ValueError("weights must form a probability vector")
        if len(set(map(tuple, self.labels))) != len(self.labels):
            raise ValueError("labels must be pairwise distinct")


# ---------------------------------------------------------------------------
# photon-count distributions
# ---------------------------------------------------------------------------

def binomial_loss_pmf(n, mu):
    """Distribution of the number of photons lost from an n-photon mode.

    Entry ``k`` is C(n,k) mu^k (1-mu)^(n-k), computed in log space.
    """
    if not 0 <= mu <= 1:
        raise ValueError("mu must lie in [0, 1]")
    if n < 0:
        raise ValueError("n must be nonnegative")
    n = int(n)
    k = np.arange(n + 1)
    lf = _logfact(n + 1)
    logc = lf[n] - lf[k] - lf[n - k]
    logp = logc + xlogy(k, mu) + xlogy(n - k, 1.0 - mu)
    return PhotonPMF(np.exp(logp))


def poisson_pmf(lam, k_max, tail_tol=1e-9):
    """Poisson distribution truncated at ``k_max``; raises if the truncated
    tail exceeds ``tail_tol``."""
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    k = np.arange(int(k_max) + 1)
    lf = _logfact(int(k_max) + 1)
    logp = xlogy(k, lam) - lam - lf[k]
    tail = float(gammainc(k_max + 1, lam)) if lam > 0 else 0.0
    if tail > tail_tol:
        raise CutoffTooSmall(
            f"Poisson({lam}) tail beyond k_max={k_max} is {tail:.3e} > {tail_tol:.0e}"
        )
    return PhotonPMF(np.exp(logp), tail_mass=tail)


def poisson_cutoff(lam, tail_tol=1e-12):
    """Smallest cutoff that keeps the truncated Poisson tail below ``tail_tol``."""
    k = int(np.ceil(lam + 10 * np.sqrt(lam + 1) + 20))
    while gammainc(k + 1, lam) > tail_tol:
        k *= 2
    return k


def apply_loss_joint(m, l, channel):
    """Joint survival distribution of a two-mode Fock pair (m, l) after the
    loss channel; the two modes lose photons independently."""
    if m < 0 or l < 0:
        raise ValueError("photon numbers must be nonnegative")
    mu = channel.mu
    pa = binomial_loss_pmf(m, mu).probs[::-1]  # index = survivors in a
    pb = binomial_loss_pmf(l, mu).probs[::-1]
    return JointFockPMF(np.outer(pa, pb))


# ---------------------------------------------------------------------------
# beamsplitter transition amplitudes
# ---------------------------------------------------------------------------
#
# The generator (a^dag b + a b^dag)/2 applied for phase phi = g*t rotates the
# modes by theta = phi/2.  The transition amplitude
# <k-q, m+q| U |k, m> equals (-i)^q times a real finite sum over j of
# signed products of binomials and powers of cos/sin.  All magnitudes are
# accumulated in log space, sorted in descending order before summation, and
# the tangent power is kept folded into the cos/sin factors so nothing
# diverges near theta = pi/2.

def _signed_pow(log_base, sign_base, p):
    # log|base^p| and its sign, with the 0^0 = 1 convention
    if np.isneginf(log_base):
        return np.where(p == 0, 0.0, -np.inf), np.ones_like(p, dtype=float)
    if sign_base < 0:
        return p * log_base, np.where(p % 2 == 0, 1.0, -1.0)
    return p * log_base, np.ones(np.shape(p), dtype=float)


def _segmented_signed_sum(seg, logmag, sign, n_seg, lens_zero):
    # descending-magnitude signed accumulation within each segment
    ok = np.isfinite(logmag)
    lm = np.where(ok, logmag, -np.inf)
    segmax = np.full(n_seg, -np.inf)
    np.maximum.at(segmax, seg, lm)
    with np.errstate(invalid="ignore"):
        rel = np.where(ok, np.exp(lm - segmax[seg]) * sign, 0.0)
    order = np.lexsort((-lm, seg))
    sums = np.add.reduceat(rel[order], np.searchsorted(seg[order], np.arange(n_seg)))
    sums[lens_zero] = 0.0
    return np.where(np.isfinite(segmax), sums * np.exp(segmax), 0.0)


def beamsplitter_amplitudes(ks, ms, qs, theta, want_derivative=False):
    """Batched transition amplitudes for net transfer ``q`` out of Fock pairs
    ``(k, m)`` under a beamsplitter of half-angle ``theta``.

    Returns the real amplitude (the constant global phase is stripped) and,
    when requested, its derivative with respect to ``theta``.  Transfers
    outside [-m, k] yield amplitude zero.
    """
    ks = np.atleast_1d(np.asarray(ks, dtype=np.int64))
    ms = np.atleast_1d(np.asarray(ms, dtype=np.int64))
    qs = np.atleast_1d(np.asarray(qs, dtype=np.int64))
    n_path = len(ks)
    lf = _logfact(int(ks.max() + np.abs(qs).max() + ms.max()) + 2)

    c, s = np.cos(theta), np.sin(theta)
    logc = np.log(abs(c)) if c != 0 else -np.inf
    logs = np.log(abs(s)) if s != 0 else -np.inf
    sgnc = 1.0 if c >= 0 else -1.0
    sgns = 1.0 if s >= 0 else -1.0

    jlo = np.maximum(0, -qs)
    jhi = np.minimum(ms, ks - qs)
    # terms peak near j ~ |tan theta| sqrt(k m) and then decay
    # superexponentially; a generous window around the peak loses nothing
    if c != 0:
        chi = abs(np.tan(theta)) * np.sqrt(np.maximum(ks * ms, 1).astype(float))
        width = (80 + np.ceil(4 * np.minimum(chi, 2**40))).astype(np.int64)
        jhi = np.minimum(jhi, jlo + width)
    lens = np.maximum(jhi - jlo + 1, 0)
    total = int(lens.sum())
    if total == 0:
        z = np.zeros(n_path)
        return (z, z) if want_derivative else z

    seg = np.repeat(np.arange(n_path), lens)
    offsets = np.concatenate(([0], np.cumsum(lens)))[:-1]
    j = np.arange(total) - np.repeat(offsets, lens) + np.repeat(jlo, lens)
    K = np.repeat(ks, lens)
    M = np.repeat(ms, lens)
    Q = np.repeat(qs, lens)
    a = K + M - 2 * j - Q  # cos power
    b = 2 * j + Q          # sin power

    log_w = (lf[M] - lf[j] - lf[M - j]) + (lf[K] - lf[j + Q] - lf[K - j - Q])
    pref = 0.5 * (lf[M + Q] + lf[K - Q] - lf[M] - lf[K])
    sign_j = np.where(j % 2 == 0, 1.0, -1.0)

    lga, sga = _signed_pow(logc, sgnc, a)
    lgb, sgb = _signed_pow(logs, sgns, b)
    amp = _segmented_signed_sum(
        seg, log_w + pref + lga + lgb, sign_j * sga * sgb, n_path, lens == 0
    )
    if not want_derivative:
        return amp

    # d/dtheta [c^a s^b] = -a c^(a-1) s^(b+1) + b c^(a+1) s^(b-1)
    lg1a, sg1a = _signed_pow(logc, sgnc, a - 1)
    lg1b, sg1b = _signed_pow(logs, sgns, b + 1)
    lm1 = np.where(a > 0, log_w + pref + np.log(np.maximum(a, 1)) + lg1a + lg1b, -np.inf)
    sn1 = -sign_j * sg1a * sg1b
    lg2a, sg2a = _signed_pow(logc, sgnc, a + 1)
    lg2b, sg2b = _signed_pow(logs, sgns, b - 1)
    lm2 = np.where(b > 0, log_w + pref + np.log(np.maximum(b, 1)) + lg2a + lg2b, -np.inf)
    sn2 = sign_j * sg2a * sg2b
    damp = _segmented_signed_sum(
        np.concatenate([seg, seg]),
        np.concatenate([lm1, lm2]),
        np.concatenate([sn1, sn2]),
        n_path,
        lens == 0,
    )
    return amp, damp


def beamsplitter_prob(k, m, q, theta):
    """Probability of a net transfer of ``q`` photons from a Fock pair
    ``(k, m)`` under a beamsplitter of half-angle ``theta``."""
    if q < -m or q > k:
        raise IndexOutOfRange(f"transfer q={q} outside [-{m}, {k}]")
    amp = beamsplitter_amplitudes([k], [m], [q], theta)[0]
    return float(amp * amp)


# ---------------------------------------------------------------------------
# Fisher information oracles
# ---------------------------------------------------------------------------

def fock_variance(m, l):
    """Variance of the mode-exchange generator on the Fock pair |m, l>."""
    return (m + l + 2 * m * l) / 4.0


def fock_coupling(label_i, label_j):
    """Matrix element of the mode-exchange generator between Fock pairs."""
    mi, li = label_i
    mj, lj = label_j
    if (mi, li) == (mj + 1, lj - 1):
        return 0.5 * np.sqrt((mj + 1) * lj)
    if (mi, li) == (mj - 1, lj + 1):
        return 0.5 * np.sqrt(mj * (lj + 1))
    return 0.0


def mixed_qfi_oracle(dec):
    """Quantum Fisher information of an orthogonal Fock-pair mixture evolved
    under the mode-exchange generator for time ``dec.t``.

    Population terms add 4 t^2 q_i Var_i; coherence terms subtract
    8 t^2 q_i q_j |H_ij|^2 / (q_i + q_j) over distinct pairs.  Pairs with
    q_i + q_j = 0 are skipped.
    """
    q = dec.weights
    labels = dec.labels
    t = dec.t
    var_term = sum(qi * fock_variance(m, l) for qi, (m, l) in zip(q, labels))
    cross = 0.0
    for i in range(len(labels)):
        for jj in range(len(labels)):
            if i == jj:
                continue
            s = q[i] + q[jj]
            if s <= 0:
                continue
            h = fock_coupling(labels[i], labels[jj])
            if h != 0.0:
                cross += 2 * q[i] * q[jj] * h * h / s
    return 4 * t * t * (var_term - cross)


class TwoModeBasis:
    """Truncated two-mode Fock basis {(i, j): i + j <= n_max} with the dense
    operators needed by the spectral oracle."""

    def __init__(self, n_max):
        self.n_max = int(n_max)
        self.labels = [
            (i, j) for i in range(self.n_max + 1) for j in range(self.n_max + 1 - i)
        ]
        self.index = {lab: k for k, lab in enumerate(self.labels)}
        self.dim = len(self.labels)

    def h_int(self):
        """Dense matrix of the mode-exchange generator (a^dag b + a b^dag)/2."""
        H = np.zeros((self.dim, self.dim))
        for (i, j), k in self.index.items():
            if j >= 1:
                H[self.index[(i + 1, j - 1)], k] += 0.5 * np.sqrt((i + 1) * j)
            if i >= 1:
                H[self.index[(i - 1, j + 1)], k] += 0.5 * np.sqrt(i * (j + 1))
        return H

    def fock_state(self, m, l):
        psi = np.zeros(self.dim)
        psi[self.index[(m, l)]] = 1.0
        return psi

    def noon_state(self, n_photons):
        """NOON state of the beamsplitter eigenmodes (a +- b)/sqrt(2),
        expanded in the bare-mode Fock basis."""
        lf = _logfact(n_photons + 1)
        psi = np.zeros(self.dim)
        for r in range(n_photons + 1):
            parity = 1 + (-1) ** (n_photons - r)
            if parity == 0:
                continue
            logc = lf[n_photons] - lf[r] - lf[n_photons - r]
            coeff = parity * np.exp(logc + 0.5 * (lf[r] + lf[n_photons - r]))
            psi[self.index[(r, n_photons - r)]] += coeff
        psi /= np.sqrt(2 * np.exp(lf[n_photons]) * 2.0**n_photons)
        return psi

    def coherent_state(self, alpha_a, alpha_b):
        """Truncated product coherent state (truncation tail discarded)."""
        psi = np.zeros(self.dim, dtype=complex)
        lf = _logfact(self.n_max + 1)
        for (i, j), k in self.index.items():
            psi[k] = alpha_a**i * alpha_b**j / np.exp(0.5 * (lf[i] + lf[j]))
        psi *= np.exp(-(abs(alpha_a) ** 2 + abs(alpha_b) ** 2) / 2)
        return psi

    def apply_loss(self, rho, mu):
        """Independent photon loss with probability ``mu`` on both modes."""
        if mu == 0:
            return rho.copy()
        n_max = self.n_max
        # single-mode Kraus coefficients K_r[m] for |m-r><m|
        lf = _logfact(n_max + 1)
        kraus = np.zeros((n_max + 1, n_max + 1))
        for r in range(n_max + 1):
            m = np.arange(r, n_max + 1)
            logc = lf[m] - lf[r] - lf[m - r]
            kraus[r, r:] = np.exp(0.5 * (logc + xlogy(r, mu) + xlogy(m - r, 1 - mu)))
        out = np.zeros_like(rho, dtype=complex)
        for ra in range(n_max + 1):
            for rb in range(n_max + 1 - ra):
                K = np.zeros((self.dim, self.dim))
                for (i, j), k in self.index.items():
                    if i + ra <= n_max and j + rb <= n_max - i - ra:
                        K[k, self.index[(i + ra, j + rb)]] = (
                            kraus[ra, i + ra] * kraus[rb, j + rb]
                        )
                out += K @ rho @ K.conj().T
        return out


def spectral_qfi_oracle(rho, generator, t, check_tol=1e-10):
    """Quantum Fisher information from the eigendecomposition of ``rho``.

    Independent of every closed form: diagonalizes the state and sums
    2 (p_a - p_b)^2 / (p_a + p_b) |<a| t G |b>|^2 over eigenpairs.
    """
    rho = np.asarray(rho)
    if np.max(np.abs(rho - rho.conj().T)) > check_tol:
        raise NotAState("input is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > check_tol:
        raise NotAState(f"trace is {np.trace(rho).real}, not 1")
    lam, vec = eigh(rho)
    if lam.min() < -check_tol:
        raise NotAState(f"negative eigenvalue {lam.min()}")
    lam = np.clip(lam, 0.0, None)
    G = vec.conj().T @ (t * np.asarray(generator)) @ vec
    ssum = lam[:, None] + lam[None, :]
    diff = lam[:, None] - lam[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        w = np.where(ssum > 1e-14, diff * diff / ssum, 0.0)
    return float(2 * np.sum(w * np.abs(G) ** 2))
