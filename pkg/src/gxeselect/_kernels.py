"""Compiled inner loops for the per-gene Gibbs updates.

Everything here is plain-array code so numba can compile it; the public
wrappers live in ``gibbs``.  All draws go through the chain's single
``numpy.random.Generator``, which numba advances exactly like numpy does,
so results are identical whether an update runs compiled or interpreted.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .rng import _invgauss_one

# Latent scales are clipped to this range purely as a float guard; the
# bounds are far outside anything the conditionals visit in practice.
TAU2_MIN = 1e-12
TAU2_MAX = 1e12


@njit(cache=True)
def slab_probability(pi: float, log_spike_ratio: float) -> float:
    """Posterior slab probability l = pi / (pi + (1 - pi) * exp(log_spike_ratio)).

    Computed on the logit scale so extreme ratios saturate to 0/1 instead of
    overflowing.
    """
    if pi <= 0.0:
        return 0.0
    if pi >= 1.0:
        return 1.0
    logit = np.log(pi) - np.log1p(-pi) - log_spike_ratio
    if logit >= 0.0:
        return 1.0 / (1.0 + np.exp(-logit))
    ex = np.exp(logit)
    return ex / (1.0 + ex)


@njit(cache=True)
def _solve_lower(chol: np.ndarray, b: np.ndarray) -> np.ndarray:
    d = b.shape[0]
    out = np.empty(d)
    for i in range(d):
        s = b[i]
        for k in range(i):
            s -= chol[i, k] * out[k]
        out[i] = s / chol[i, i]
    return out


@njit(cache=True)
def _solve_upper_from_lower(chol: np.ndarray, b: np.ndarray) -> np.ndarray:
    # solves chol.T @ x = b
    d = b.shape[0]
    out = np.empty(d)
    for i in range(d - 1, -1, -1):
        s = b[i]
        for k in range(i + 1, d):
            s -= chol[k, i] * out[k]
        out[i] = s / chol[i, i]
    return out


@njit(cache=True)
def scalar_effect_update(
    j, coef, phi, tau2, r, col, gram, sigma2, pi, spike, rng
):
    """Spike-and-slab (or pure slab) draw for one scalar coefficient.

    ``col`` is the design column, ``gram`` its squared norm.  Mutates
    ``coef``, ``phi`` and the residual ``r`` in place.
    """
    old = coef[j]
    v = np.dot(col, r) + gram * old
    prec = gram + 1.0 / tau2[j]
    if spike:
        log_ratio = 0.5 * np.log(tau2[j] * prec) - 0.5 * v * v / (sigma2 * prec)
        take = rng.random() <= slab_probability(pi, log_ratio)
    else:
        take = True
    if take:
        new = v / prec + np.sqrt(sigma2 / prec) * rng.standard_normal()
        phi[j] = 1
    else:
        new = 0.0
        phi[j] = 0
    coef[j] = new
    if new != old:
        delta = new - old
        for i in range(r.shape[0]):
            r[i] -= delta * col[i]


@njit(cache=True)
def group_effect_update(
    j, gamma_star, phi, tau2, r, ujt, gram, sigma2, pi, spike, rng
):
    """Spike-and-slab (or pure slab) draw for one coefficient group.

    ``ujt`` is the gene's (L, n) design block transposed; ``gram`` its L x L
    Gram matrix.  Mutates ``gamma_star`` row j, ``phi`` and ``r`` in place.
    """
    L = gamma_star.shape[1]
    old = gamma_star[j].copy()
    active = phi[j] == 1
    v = ujt @ r
    if active:
        v += gram @ old
    prec = gram.copy()
    inv_tau2 = 1.0 / tau2[j]
    for k in range(L):
        prec[k, k] += inv_tau2
    chol = np.linalg.cholesky(prec)
    half = _solve_lower(chol, v)
    if spike:
        quad = 0.0
        logdet = 0.0
        for k in range(L):
            quad += half[k] * half[k]
            logdet += np.log(chol[k, k])
        log_ratio = 0.5 * L * np.log(tau2[j]) + logdet - 0.5 * quad / sigma2
        take = rng.random() <= slab_probability(pi, log_ratio)
    else:
        take = True
    if take:
        mean = _solve_upper_from_lower(chol, half)
        noise = _solve_upper_from_lower(chol, rng.standard_normal(L))
        sigma = np.sqrt(sigma2)
        new = mean + sigma * noise
        phi[j] = 1
    else:
        new = np.zeros(L)
        phi[j] = 0
    gamma_star[j] = new
    if active or take:
        delta = new - old
        for i in range(r.shape[0]):
            acc = 0.0
            for k in range(L):
                acc += delta[k] * ujt[k, i]
            r[i] -= acc


@njit(cache=True)
def _clip_tau2(value: float) -> float:
    if value < TAU2_MIN:
        return TAU2_MIN
    if value > TAU2_MAX:
        return TAU2_MAX
    return value


@njit(cache=True)
def tau2_update(norm2: float, active: bool, group_size: float, lambda2: float, sigma2: float, rng) -> float:
    """Latent scale draw: Gamma prior branch when the block is zero, else the
    inverse-Gaussian conditional on 1/tau^2."""
    if not active:
        shape = 0.5 * (group_size + 1.0)
        rate = 0.5 * group_size * lambda2
        return _clip_tau2(rng.gamma(shape, 1.0 / rate))
    mean_ig = np.sqrt(group_size * lambda2 * sigma2 / norm2)
    inv = _invgauss_one(mean_ig, group_size * lambda2, rng)
    return _clip_tau2(1.0 / inv)


@njit(cache=True)
def sweep_genes(
    r,
    gamma1, gamma_star, zeta,
    phi_c, phi_v, phi_e,
    tau_c2, tau_v2, tau_e2,
    xt, xtx, ut, utu, tt, ttt,
    sigma2, pi_c, pi_v, pi_e,
    lambda_c2, lambda_v2, lambda_e2,
    split, spike,
    rng,
):
    """One full pass over the genes: coefficient blocks then latent scales."""
    p = gamma1.shape[0]
    L = float(gamma_star.shape[1])
    for j in range(p):
        if split:
            scalar_effect_update(
                j, gamma1, phi_c, tau_c2, r, xt[j], xtx[j], sigma2, pi_c, spike, rng
            )
        group_effect_update(
            j, gamma_star, phi_v, tau_v2, r, ut[j], utu[j], sigma2, pi_v, spike, rng
        )
        scalar_effect_update(
            j, zeta, phi_e, tau_e2, r, tt[j], ttt[j], sigma2, pi_e, spike, rng
        )
        if split:
            g2 = gamma1[j] * gamma1[j]
            tau_c2[j] = tau2_update(g2, phi_c[j] == 1, 1.0, lambda_c2, sigma2, rng)
        norm2 = 0.0
        for k in range(gamma_star.shape[1]):
            norm2 += gamma_star[j, k] * gamma_star[j, k]
        tau_v2[j] = tau2_update(norm2, phi_v[j] == 1, L, lambda_v2, sigma2, rng)
        z2 = zeta[j] * zeta[j]
        tau_e2[j] = tau2_update(z2, phi_e[j] == 1, 1.0, lambda_e2, sigma2, rng)
