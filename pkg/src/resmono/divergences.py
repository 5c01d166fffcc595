"""Renyi divergence family: sandwiched, Petz, Umegaki, max-divergence.

Values are floats in bits; +inf is returned (never raised) when the support
conditions of the piecewise definitions fail,

    sandwiched finite iff (alpha < 1 and rho not orthogonal to sigma)
                          or supp(rho) <= supp(sigma).

At alpha = 1/2 the sandwiched divergence equals -log2 (Tr|sqrt rho sqrt sigma|)^2
exactly (the plain root-fidelity, without the subnormalized deficit term, which
is what the trace formula evaluates to for subnormalized arguments).
"""

from __future__ import annotations

import math

import numpy as np

from . import qmat
from .errors import AlphaOutOfRange, DimensionMismatch, SupportViolation
from .qmat import asmat, eigh, hermitize, mpow, nuclear_norm, sqrtm_psd

SUPPORT_RTOL = 1e-12     # eigenvalue threshold relative to the largest
ALPHA_ONE_WINDOW = 1e-6  # |alpha - 1| below this dispatches to umegaki
OVERLAP_TOL = 1e-12


def _support_masks(sigma_evals: np.ndarray) -> np.ndarray:
    top = max(float(sigma_evals[0]), qmat.KERNEL_TOL)
    return sigma_evals > SUPPORT_RTOL * top


def _support_leak(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Mass of rho outside supp(sigma)."""
    w, u = eigh(sigma)
    keep = _support_masks(w)
    if keep.all():
        return 0.0
    uk = u[:, ~keep]
    return float(np.trace(uk.conj().T @ rho @ uk).real)


def _overlap(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Mass of rho inside supp(sigma); zero means orthogonal."""
    w, u = eigh(sigma)
    keep = _support_masks(w)
    uk = u[:, keep]
    return float(np.trace(uk.conj().T @ rho @ uk).real)


def sandwiched(rho, sigma, alpha: float) -> float:
    """Sandwiched Renyi divergence log2 Tr(s^((1-a)/2a) r s^((1-a)/2a))^a / (a-1).

    alpha = 1 dispatches to the Umegaki relative entropy, alpha = inf to the
    max-divergence, alpha = 1/2 to -log2 of the plain fidelity.
    """
    if alpha < 0.5:
        raise AlphaOutOfRange(f"sandwiched divergence needs alpha >= 1/2, got {alpha}")
    if math.isinf(alpha):
        return dmax(rho, sigma)
    if abs(alpha - 1.0) < ALPHA_ONE_WINDOW:
        return umegaki(rho, sigma)
    r, s = asmat(rho), asmat(sigma)
    if alpha == 0.5:
        rf = nuclear_norm(sqrtm_psd(r) @ sqrtm_psd(s))
        if rf <= 0.0:
            return math.inf
        return -2.0 * float(np.log2(rf))
    if alpha > 1.0 and _support_leak(r, s) > OVERLAP_TOL:
        return math.inf
    if alpha < 1.0 and _overlap(r, s) <= OVERLAP_TOL:
        return math.inf
    a = mpow(s, (1.0 - alpha) / (2.0 * alpha))
    m = hermitize(a @ r @ a)
    w = qmat.spectral_clip(np.linalg.eigvalsh(m))
    q = float((w ** alpha).sum())
    if q <= 0.0:
        return math.inf
    return float(np.log2(q)) / (alpha - 1.0)


def petz(rho, sigma, alpha: float) -> float:
    """Petz Renyi divergence log2 Tr[rho^a sigma^(1-a)] / (a - 1)."""
    if not (0.0 < alpha <= 2.0) or abs(alpha - 1.0) < ALPHA_ONE_WINDOW:
        if abs(alpha - 1.0) < ALPHA_ONE_WINDOW:
            return umegaki(rho, sigma)
        raise AlphaOutOfRange(f"Petz divergence needs alpha in (0,1)U(1,2], got {alpha}")
    r, s = asmat(rho), asmat(sigma)
    if alpha > 1.0 and _support_leak(r, s) > OVERLAP_TOL:
        return math.inf
    if alpha < 1.0 and _overlap(r, s) <= OVERLAP_TOL:
        return math.inf
    q = float(np.trace(mpow(r, alpha) @ mpow(s, 1.0 - alpha)).real)
    if q <= 0.0:
        return math.inf
    return float(np.log2(q)) / (alpha - 1.0)


def umegaki(rho, sigma) -> float:
    """Umegaki relative entropy Tr rho (log2 rho - log2 sigma), +inf off support."""
    r, s = asmat(rho), asmat(sigma)
    if _support_leak(r, s) > OVERLAP_TOL:
        return math.inf
    wr, ur = eigh(r)
    wr = np.clip(wr, 0.0, None)
    pos = wr > qmat.KERNEL_TOL
    term1 = float((wr[pos] * np.log2(wr[pos])).sum())
    ws, us = eigh(s)
    keep = _support_masks(ws)
    diag = np.einsum("ij,jk,ki->i", us.conj().T, r, us).real
    term2 = float((np.log2(ws[keep]) * diag[keep]).sum())
    return term1 - term2


def dmax(rho, sigma) -> float:
    """Max-divergence inf{lam : rho <= 2^lam sigma} in bits."""
    r, s = asmat(rho), asmat(sigma)
    if _support_leak(r, s) > OVERLAP_TOL:
        return math.inf
    x = mpow(s, -0.5)
    w = np.linalg.eigvalsh(hermitize(x @ r @ x))
    lam = float(w[-1])
    if lam <= 0.0:
        return -math.inf
    return float(np.log2(lam))


def q_alpha(rho, sigma, alpha: float) -> float:
    """Q_alpha = 2^((alpha-1) D_alpha), in [0, 1] for alpha in [1/2, 1)."""
    if not 0.5 <= alpha < 1.0:
        raise AlphaOutOfRange(f"q_alpha needs alpha in [1/2, 1), got {alpha}")
    d = sandwiched(rho, sigma, alpha)
    if math.isinf(d):
        return 0.0
    return float(2.0 ** ((alpha - 1.0) * d))


def rel_entropy_variance(rho, sigma) -> float:
    """V = Tr[rho (log2 rho - log2 sigma)^2] - D(rho||sigma)^2, in bits^2."""
    r, s = asmat(rho), asmat(sigma)
    if _support_leak(r, s) > OVERLAP_TOL:
        raise SupportViolation("supp(rho) not contained in supp(sigma)")
    ell = qmat.plog2m(r) - qmat.plog2m(s)
    d = umegaki(r, s)
    return float(np.trace(r @ ell @ ell).real) - d * d


# ---------------------------------------------------------------------------
# classical fast paths
# ---------------------------------------------------------------------------

def _probs(p) -> np.ndarray:
    if isinstance(p, qmat.ClassicalDist):
        return p.probs
    return np.asarray(p, dtype=float)


def classical_renyi(p, q, alpha: float) -> float:
    """Classical Renyi divergence, matching sandwiched on diagonal embeddings."""
    pv, qv = _probs(p), _probs(q)
    if pv.shape != qv.shape:
        raise DimensionMismatch(f"dims {pv.shape} vs {qv.shape}")
    if math.isinf(alpha):
        mask = pv > 0
        if np.any(mask & (qv <= 0)):
            return math.inf
        return float(np.log2(np.max(pv[mask] / qv[mask])))
    if abs(alpha - 1.0) < ALPHA_ONE_WINDOW:
        return classical_kl(pv, qv)
    if alpha > 1.0:
        if np.any((pv > OVERLAP_TOL) & (qv <= 0)):
            return math.inf
        mask = (pv > 0) & (qv > 0)   # mass below tolerance on ker(q) is dropped
        s = float((pv[mask] ** alpha * qv[mask] ** (1.0 - alpha)).sum())
    else:
        mask = (pv > 0) & (qv > 0)
        s = float((pv[mask] ** alpha * qv[mask] ** (1.0 - alpha)).sum())
        if s <= 0.0:
            return math.inf
    return float(np.log2(s)) / (alpha - 1.0)


def classical_kl(p, q) -> float:
    pv, qv = _probs(p), _probs(q)
    if pv.shape != qv.shape:
        raise DimensionMismatch(f"dims {pv.shape} vs {qv.shape}")
    if np.any((pv > OVERLAP_TOL) & (qv <= 0)):
        return math.inf
    mask = (pv > 0) & (qv > 0)
    return float((pv[mask] * np.log2(pv[mask] / qv[mask])).sum())


def classical_rel_entropy_variance(p, q) -> float:
    pv, qv = _probs(p), _probs(q)
    if np.any((pv > OVERLAP_TOL) & (qv <= 0)):
        raise SupportViolation("supp(p) not contained in supp(q)")
    mask = (pv > 0) & (qv > 0)
    llr = np.log2(pv[mask] / qv[mask])
    d = float((pv[mask] * llr).sum())
    return float((pv[mask] * llr ** 2).sum()) - d * d


def shannon_entropy(p) -> float:
    pv = _probs(p)
    pv = pv[pv > 0]
    return float(-(pv * np.log2(pv)).sum())


def renyi_entropy(p, alpha: float) -> float:
    pv = _probs(p)
    pv = pv[pv > 0]
    if abs(alpha - 1.0) < ALPHA_ONE_WINDOW:
        return shannon_entropy(pv)
    if math.isinf(alpha):
        return -float(np.log2(pv.max()))
    return float(np.log2((pv ** alpha).sum())) / (1.0 - alpha)


def binary_entropy(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return float(-x * np.log2(x) - (1 - x) * np.log2(1 - x))
