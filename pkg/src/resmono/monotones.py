"""Resource monotones: free-set minimizations of the Renyi family.

Three free-set families are supported: athermality (singleton Gibbs state),
coherence (diagonal states), and pure bipartite entanglement (closed forms
from the Schmidt vector). The fidelity of coherence comes in a primal form
(concave maximization over the simplex) and a dual Alberti-type form

    F_coh(rho) = inf_{R > 0} Tr[rho R^-1] ||Delta(R)||_inf

whose optimizers cross-validate each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from . import divergences as dv
from . import qmat
from .errors import (AlphaOutOfRange, DimensionCap, InvalidGibbs,
                     TheoryUnsupported)
from .qmat import ClassicalDist, DensityOperator, asmat, hermitize

SIMPLEX_TOL = 1e-10      # objective-decrement stopping tolerance
PURITY_TOL = 1e-10
MULT_DIM_CAP = 16


# ---------------------------------------------------------------------------
# free-set descriptors
# ---------------------------------------------------------------------------

class ResourceTheory:
    pass


class Athermality(ResourceTheory):
    """Free set = {gibbs}; gibbs must be full rank and normalized."""

    def __init__(self, gibbs):
        self.classical = isinstance(gibbs, ClassicalDist) or (
            not isinstance(gibbs, DensityOperator) and np.asarray(gibbs).ndim == 1)
        if self.classical:
            probs = gibbs.probs if isinstance(gibbs, ClassicalDist) else np.asarray(gibbs, dtype=float)
            if abs(probs.sum() - 1.0) > 1e-10 or np.min(probs) <= 0:
                raise InvalidGibbs("Gibbs state must be normalized with full support")
            self.gibbs_probs = probs
            self.gibbs = np.diag(probs.astype(complex))
        else:
            g = asmat(gibbs)
            w = np.linalg.eigvalsh(hermitize(g))
            if abs(float(np.trace(g).real) - 1.0) > 1e-10 or w[0] <= 0:
                raise InvalidGibbs("Gibbs state must be normalized with full support")
            self.gibbs_probs = None
            self.gibbs = g


class Coherence(ResourceTheory):
    """Free set = states diagonal in the computational basis."""


class PureBipartiteEntanglement(ResourceTheory):
    """Free set = separable states; only pure input states are supported."""

    def __init__(self, d_a: int, d_b: int):
        self.d_a = int(d_a)
        self.d_b = int(d_b)


# ---------------------------------------------------------------------------
# simplex optimizers (entropic mirror descent keeps iterates interior)
# ---------------------------------------------------------------------------

def _mirror_opt(obj, grad, d, maximize, starts, iters=2000, tol=SIMPLEX_TOL):
    sign = 1.0 if maximize else -1.0
    best_val, best_q = -math.inf, None
    for q0 in starts:
        q = np.clip(np.asarray(q0, dtype=float), 1e-14, None)
        q = q / q.sum()
        val = sign * obj(q)
        step = 0.5
        for _ in range(iters):
            g = sign * grad(q)
            scale = np.max(np.abs(g))
            if scale < 1e-16:
                break
            accepted = False
            for _ in range(25):
                qn = q * np.exp(step * g / scale)
                qn = np.clip(qn, 1e-300, None)
                qn = qn / qn.sum()
                vn = sign * obj(qn)
                if vn > val + 1e-18:
                    accepted = True
                    break
                step *= 0.5
                if step < 1e-14:
                    break
            if not accepted:
                break
            improved = vn - val
            q, val = qn, vn
            step = min(step * 1.5, 50.0)
            if improved < tol:
                break
        if val > best_val:
            best_val, best_q = val, q
    return sign * best_val, best_q


def _coherence_q_obj(rho: np.ndarray, alpha: float):
    """Objective Tr[M^alpha], M = diag(q)^c rho diag(q)^c, c = (1-a)/2a, and
    its analytic gradient in q."""
    c = (1.0 - alpha) / (2.0 * alpha)

    def obj(q):
        s = q ** c
        m = hermitize((s[:, None] * rho) * s[None, :])
        w = qmat.spectral_clip(np.linalg.eigvalsh(m))
        return float((w ** alpha).sum())

    def grad(q):
        s = q ** c
        m = hermitize((s[:, None] * rho) * s[None, :])
        w, u = np.linalg.eigh(m)
        w = qmat.spectral_clip(w)
        wp = np.where(w > 0.0, w, np.inf) ** (alpha - 1.0)
        wp = np.where(w > 0.0, wp, 0.0)
        inner = (u * wp) @ u.conj().T
        rs = rho * s[None, :]
        diag = np.einsum("ij,ji->i", rs, inner).real
        return 2.0 * alpha * c * q ** (c - 1.0) * diag

    return obj, grad


def _simplex_starts(rho: np.ndarray, restarts: int, seed: int):
    d = rho.shape[0]
    starts = [np.full(d, 1.0 / d)]
    diag = np.clip(np.diag(rho).real, 1e-12, None)
    starts.append(diag / diag.sum())
    rng = np.random.default_rng(seed)
    for _ in range(max(0, restarts - 2)):
        starts.append(rng.dirichlet(np.ones(d)))
    return starts


def coherence_monotone(rho, alpha: float, restarts: int = 10, iters: int = 2000,
                       seed: int = 0):
    """min over diagonal sigma of the sandwiched divergence, with its argmin.

    For alpha in [1/2,1) the trace functional is concave in sigma and is
    maximized; for alpha > 1 it is convex and minimized. Either way a
    stationary point of the mirror iteration is a global optimum.
    """
    r = asmat(rho)
    d = r.shape[0]
    if abs(alpha - 1.0) < dv.ALPHA_ONE_WINDOW:
        q = np.clip(np.diag(r).real, 0.0, None)
        return relative_entropy_coherence(r), q / max(q.sum(), 1e-300)
    if math.isinf(alpha):
        val, q = _robustness_coherence(r)
        return val, q
    obj, grad = _coherence_q_obj(r, alpha)
    starts = _simplex_starts(r, restarts, seed)
    maximize = alpha < 1.0
    qval, qarg = _mirror_opt(obj, grad, d, maximize, starts, iters=iters)
    if qval <= 0.0:
        return math.inf, qarg
    return float(np.log2(qval)) / (alpha - 1.0), qarg


def coherence_optimal_sigma(rho, alpha: float, restarts: int = 6, iters: int = 800,
                            seed: int = 0) -> np.ndarray:
    return coherence_monotone(rho, alpha, restarts=restarts, iters=iters, seed=seed)[1]


def relative_entropy_coherence(rho) -> float:
    """D(rho || Delta(rho)) = S(Delta rho) - S(rho), the alpha=1 closed form."""
    r = asmat(rho)
    return qmat.vn_entropy(np.diag(np.diag(r))) - qmat.vn_entropy(r)


# ---------------------------------------------------------------------------
# the monotone family
# ---------------------------------------------------------------------------

def schmidt_vector(rho, d_a: int, d_b: int) -> np.ndarray:
    """Schmidt coefficients (squared) of a pure bipartite state, descending."""
    r = asmat(rho)
    if float(np.trace(r @ r).real) < 1.0 - PURITY_TOL:
        raise TheoryUnsupported("entanglement monotones support only pure states")
    red = qmat.partial_trace(r, [d_a, d_b], [0])
    w = np.clip(np.linalg.eigvalsh(hermitize(red)), 0.0, None)[::-1]
    return w / w.sum()


def monotone_alpha(rho, theory: ResourceTheory, alpha: float,
                   restarts: int = 10, iters: int = 2000, seed: int = 0) -> float:
    """Resource monotone min over free sigma of the sandwiched divergence, bits."""
    if not (alpha >= 0.5 or math.isinf(alpha)):
        raise AlphaOutOfRange(f"monotone needs alpha in [1/2, inf], got {alpha}")
    if isinstance(theory, Athermality):
        if theory.classical and isinstance(rho, ClassicalDist):
            return dv.classical_renyi(rho, theory.gibbs_probs, alpha)
        return dv.sandwiched(asmat(rho), theory.gibbs, alpha)
    if isinstance(theory, Coherence):
        return coherence_monotone(rho, alpha, restarts=restarts, iters=iters, seed=seed)[0]
    if isinstance(theory, PureBipartiteEntanglement):
        lam = schmidt_vector(rho, theory.d_a, theory.d_b)
        if abs(alpha - 1.0) < dv.ALPHA_ONE_WINDOW:
            return dv.shannon_entropy(lam)
        if alpha == 0.5:
            return -float(np.log2(lam[0]))
        raise TheoryUnsupported("entanglement closed forms exist only for alpha in {1/2, 1}")
    raise TheoryUnsupported(f"unknown theory {type(theory).__name__}")


# ---------------------------------------------------------------------------
# fidelity of coherence: primal and dual
# ---------------------------------------------------------------------------

@dataclass
class CoherencePrimal:
    value: float
    argmax: np.ndarray


@dataclass
class CoherenceDual:
    value: float
    argmin_r: np.ndarray


def fidelity_coherence_primal(rho, restarts: int = 10, iters: int = 3000,
                              seed: int = 0) -> CoherencePrimal:
    """max over diagonal sigma of F(rho, sigma): concave in sigma."""
    r = asmat(rho)
    obj, grad = _coherence_q_obj(r, 0.5)   # Tr[M^1/2] = root fidelity to diag(q)
    starts = _simplex_starts(r, restarts, seed)
    root, q = _mirror_opt(obj, grad, r.shape[0], True, starts, iters=iters)
    return CoherencePrimal(value=float(root ** 2), argmax=q)


def fidelity_coherence_dual(rho, restarts: int = 10, floor: float = 1e-10,
                            seed: int = 0) -> CoherenceDual:
    """Alberti-form dual: every iterate upper-bounds the fidelity of coherence.

    R is parameterized as N N^dag + floor*I with unit-norm rows of N, which
    pins ||Delta(R)||_inf = 1 + floor and removes the scale flat direction.
    """
    r = asmat(rho)
    d = r.shape[0]
    eye = np.eye(d)

    def unpack(x):
        m = x[:d * d].reshape(d, d) + 1j * x[d * d:].reshape(d, d)
        norms = np.sqrt((np.abs(m) ** 2).sum(axis=1))
        return m / np.clip(norms, 1e-12, None)[:, None]

    def obj(x):
        n = unpack(x)
        big = n @ n.conj().T + floor * eye
        try:
            inv = np.linalg.inv(big)
        except np.linalg.LinAlgError:
            return 1e6
        return float(np.trace(r @ inv).real) * (1.0 + floor)

    rng = np.random.default_rng(seed)
    best_val, best_x = math.inf, None
    inits = [np.eye(d, dtype=complex), qmat.sqrtm_psd(r + floor * eye)]
    while len(inits) < restarts:
        inits.append(rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)))
    for m0 in inits[:restarts]:
        x0 = np.concatenate([np.asarray(m0).real.reshape(-1), np.asarray(m0).imag.reshape(-1)])
        res = optimize.minimize(obj, x0, method="L-BFGS-B",
                                options={"maxiter": 2000, "ftol": 1e-16, "gtol": 1e-12})
        if res.fun < best_val:
            best_val, best_x = res.fun, res.x
    n = unpack(best_x)
    return CoherenceDual(value=float(best_val), argmin_r=hermitize(n @ n.conj().T + floor * eye))


@dataclass
class MultiplicativityReport:
    lhs: float
    rhs: float
    gap: float


def multiplicativity_check(rho, tau, restarts: int = 10, seed: int = 0) -> MultiplicativityReport:
    """F_coh(rho (x) tau) versus F_coh(rho) * F_coh(tau)."""
    r, t = asmat(rho), asmat(tau)
    if r.shape[0] * t.shape[0] > MULT_DIM_CAP:
        raise DimensionCap(f"product dimension exceeds {MULT_DIM_CAP}")
    lhs = fidelity_coherence_primal(np.kron(r, t), restarts=restarts, seed=seed).value
    rhs = (fidelity_coherence_primal(r, restarts=restarts, seed=seed).value
           * fidelity_coherence_primal(t, restarts=restarts, seed=seed).value)
    return MultiplicativityReport(lhs=lhs, rhs=rhs, gap=lhs - rhs)


# ---------------------------------------------------------------------------
# generalized robustness
# ---------------------------------------------------------------------------

def _feasible_dmax_coherence(c: np.ndarray, iters: int = 400) -> tuple[bool, float]:
    """Is there a diagonal state q with diag(q) >= c? Subgradient descent on
    min over the simplex of lambda_max(c - diag q)."""
    d = c.shape[0]
    diag = np.clip(np.diag(c).real, 1e-12, None)
    best = math.inf
    for q0 in (np.full(d, 1.0 / d), diag / diag.sum()):
        q = q0.copy()
        q_avg = q.copy()
        for t in range(iters):
            w, u = np.linalg.eigh(hermitize(c - np.diag(q)))
            val = float(w[-1])
            if val < best:
                best = val
            if best <= 0.0:
                return True, best
            g = -np.abs(u[:, -1]) ** 2
            eta = 0.5 / math.sqrt(t + 1.0)
            q = q * np.exp(-eta * g / max(np.max(np.abs(g)), 1e-15))
            q = q / q.sum()
        w = np.linalg.eigvalsh(hermitize(c - np.diag(q)))
        best = min(best, float(w[-1]))
    return best <= 1e-9, best


def _robustness_coherence(r: np.ndarray, tol: float = 1e-7):
    top = float(np.linalg.eigvalsh(hermitize(r))[-1])
    hi = math.log2(max(r.shape[0] * top, 1.0)) + 1e-6
    lo = 0.0
    if _feasible_dmax_coherence(r)[0]:
        return 0.0, np.clip(np.diag(r).real, 0, None)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        ok, _ = _feasible_dmax_coherence(2.0 ** (-mid) * r)
        if ok:
            hi = mid
        else:
            lo = mid
    return hi, None


def generalized_robustness(rho, theory: ResourceTheory, tol: float = 1e-7) -> float:
    """Log-robustness log2(1 + R_g) = min over free sigma of D_max(rho||sigma)."""
    if isinstance(theory, Athermality):
        if theory.classical and isinstance(rho, ClassicalDist):
            return dv.classical_renyi(rho, theory.gibbs_probs, math.inf)
        return dv.dmax(asmat(rho), theory.gibbs)
    if isinstance(theory, Coherence):
        return _robustness_coherence(asmat(rho), tol=tol)[0]
    raise TheoryUnsupported("generalized robustness supports athermality and coherence")


# ---------------------------------------------------------------------------
# free-operation samplers for property tests
# ---------------------------------------------------------------------------

def gibbs_preserving_channel(gibbs, weight: float, d: int | None = None) -> qmat.KrausChannel:
    """Mixture of the identity and the replace-with-gibbs map; both fix gibbs."""
    g = asmat(gibbs)
    d = g.shape[0]
    w, u = qmat.eigh(g)
    kraus = [math.sqrt(1.0 - weight) * np.eye(d, dtype=complex)]
    for i in range(d):
        for j in range(d):
            k = np.zeros((d, d), dtype=complex)
            k += math.sqrt(weight * max(w[i], 0.0)) * np.outer(u[:, i], np.conj(np.eye(d)[:, j]))
            kraus.append(k)
    return qmat.KrausChannel(kraus)


def dephasing_covariant_channel(d: int, seed: int) -> qmat.KrausChannel:
    """Random mixture of identity, full dephasing and a basis permutation."""
    rng = np.random.default_rng(seed)
    a, b, c = rng.dirichlet(np.ones(3))
    eye = np.eye(d, dtype=complex)
    perm = rng.permutation(d)
    p = eye[:, perm]
    kraus = [math.sqrt(a) * eye]
    kraus += [math.sqrt(b) * np.outer(eye[:, i], eye[:, i]) for i in range(d)]
    kraus += [math.sqrt(c) * (p @ np.outer(eye[:, i], eye[:, i])) for i in range(d)]
    return qmat.KrausChannel(kraus)
