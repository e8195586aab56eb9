"""Independent brute-force oracles used to validate library closed forms.

Everything here goes through dense matrix exponentials and explicit state
enumeration, never through the library's own summation formulas.
"""

import itertools
from math import comb, factorial, sqrt

import numpy as np
from scipy.linalg import expm


def two_mode_labels(n_max):
    return [(i, j) for i in range(n_max + 1) for j in range(n_max + 1 - i)]


def dense_h_int(labels):
    index = {lab: k for k, lab in enumerate(labels)}
    d = len(labels)
    H = np.zeros((d, d))
    for (i, j), k in index.items():
        if j >= 1 and (i + 1, j - 1) in index:
            H[index[(i + 1, j - 1)], k] += 0.5 * sqrt((i + 1) * j)
        if i >= 1 and (i - 1, j + 1) in index:
            H[index[(i - 1, j + 1)], k] += 0.5 * sqrt(i * (j + 1))
    return H, index


def dense_beamsplitter(labels, phi):
    """exp(-i phi H) by scipy's dense matrix exponential."""
    H, index = dense_h_int(labels)
    return expm(-1j * phi * H), index


def loss_kraus_single(n_max, mu):
    Ks = []
    for r in range(n_max + 1):
        K = np.zeros((n_max + 1, n_max + 1))
        for m in range(r, n_max + 1):
            K[m - r, m] = sqrt(comb(m, r) * mu**r * (1 - mu) ** (m - r))
        Ks.append(K)
    return Ks


def apply_loss_dense(rho, labels, mu):
    """Two-mode loss channel via explicit Kraus enumeration."""
    index = {lab: k for k, lab in enumerate(labels)}
    n_max = max(i + j for i, j in labels)
    Ks = loss_kraus_single(n_max, mu)
    d = len(labels)
    out = np.zeros((d, d), dtype=complex)
    for ra in range(n_max + 1):
        for rb in range(n_max + 1 - ra):
            K2 = np.zeros((d, d))
            for (i, j), k in index.items():
                if (i + ra, j + rb) in index:
                    K2[k, index[(i + ra, j + rb)]] = Ks[ra][i, i + ra] * Ks[rb][j, j + rb]
            out += K2 @ rho @ K2.conj().T
    return out


def lossy_fock_rho(m, l, mu, labels):
    index = {lab: k for k, lab in enumerate(labels)}
    d = len(labels)
    rho = np.zeros((d, d))
    rho[index[(m, l)], index[(m, l)]] = 1.0
    return apply_loss_dense(rho, labels, mu).real


def cfi_nrm_brute(m, l, mu, t, g, fd_step=1e-7):
    """Number-resolved CFI by dense evolution and finite differences."""
    labels = two_mode_labels(m + l)
    H, index = dense_h_int(labels)
    rho0 = lossy_fock_rho(m, l, mu, labels)

    def probs(gv):
        U = expm(-1j * gv * t * H)
        return np.real(np.diag(U @ rho0 @ U.conj().T))

    p = probs(g)
    dp = (probs(g + fd_step) - probs(g - fd_step)) / (2 * fd_step)
    F = 0.0
    for pi, dpi in zip(p, dp):
        if pi > 1e-12:
            F += dpi * dpi / pi
    if abs(g) < 1e-300:
        # quadratic outcomes: second difference supplies the limit 2 P''
        h = 1e-4
        pp, pm = probs(h), probs(-h)
        for i in range(len(p)):
            if p[i] <= 1e-12:
                F += 2 * (pp[i] + pm[i] - 2 * p[i]) / h**2
    return F


def dicke_dense_pmf(N_at, n_ph_max, t, J=1.0):
    """One-cavity photon distribution from the full 2^N_at atomic Hilbert
    space, starting from all atoms excited and the cavity empty."""
    states = [
        (k, s)
        for k in range(n_ph_max + 1)
        for s in itertools.product((0, 1), repeat=N_at)
    ]
    index = {st: i for i, st in enumerate(states)}
    d = len(states)
    H = np.zeros((d, d))
    for (k, s), i in index.items():
        for at in range(N_at):
            if s[at] == 1 and k + 1 <= n_ph_max:
                s2 = list(s)
                s2[at] = 0
                j = index[(k + 1, tuple(s2))]
                H[j, i] += J * sqrt(k + 1)
                H[i, j] += J * sqrt(k + 1)
    psi = np.zeros(d)
    psi[index[(0, tuple([1] * N_at))]] = 1.0
    psi_t = expm(-1j * H * t) @ psi
    pmf = np.zeros(n_ph_max + 1)
    for (k, s), i in index.items():
        pmf[k] += abs(psi_t[i]) ** 2
    return pmf


def noon_plus_minus_state(N, labels):
    """NOON state of the (a +- b)/sqrt(2) modes in the bare Fock basis."""
    index = {lab: k for k, lab in enumerate(labels)}
    psi = np.zeros(len(labels))
    for r in range(N + 1):
        coeff = comb(N, r) * (1 + (-1) ** (N - r)) * sqrt(factorial(r) * factorial(N - r))
        psi[index[(r, N - r)]] += coeff
    psi /= np.sqrt(2 * factorial(N) * 2.0**N)
    return psi
