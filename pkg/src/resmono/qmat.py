"""Dense complex Hermitian matrix core: states, channels, distances.

All public quantities are in bits (base-2 logarithms). Subnormalized states
(trace < 1) are first class: fidelity, purified distance and the generalized
trace distance use the definitions valid on positive operators with trace at
most one,

    sqrt(F)(rho, sigma) = Tr|sqrt(rho) sqrt(sigma)| + sqrt((1-tr rho)(1-tr sigma))
    P(rho, sigma)       = sqrt(1 - F(rho, sigma))
    2 Delta(rho, sigma) = Tr|rho - sigma| + |Tr(rho - sigma)|
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidRank, NonHermitian

HERM_TOL = 1e-12       # entrywise tolerance for M == M^dagger
EVAL_NEG_TOL = 1e-10   # eigenvalues above -EVAL_NEG_TOL are clipped to 0
TRACE_TOL = 1e-10      # slack on trace <= 1
KERNEL_TOL = 1e-14     # eigenvalues <= KERNEL_TOL are kernel for powers t <= 0
SUM_TOL = 1e-12        # slack on classical sums

LOG2E = float(np.log2(np.e))


# ---------------------------------------------------------------------------
# value types
# ---------------------------------------------------------------------------

@dataclass
class DensityOperator:
    """Hermitian PSD matrix with 0 < trace <= 1 (subnormalized allowed)."""

    dim: int
    data: np.ndarray
    trace_tol: float = TRACE_TOL

    def __init__(self, data, trace_tol: float = TRACE_TOL):
        data = np.asarray(data, dtype=complex)
        if data.ndim != 2 or data.shape[0] != data.shape[1]:
            raise DimensionMismatch(f"expected a square matrix, got {data.shape}")
        if np.max(np.abs(data - data.conj().T)) > HERM_TOL:
            raise NonHermitian("matrix is not Hermitian within 1e-12")
        w = np.linalg.eigvalsh(hermitize(data))
        if w[0] < -EVAL_NEG_TOL:
            raise ValueError(f"matrix not PSD: min eigenvalue {w[0]:.3e}")
        tr = float(np.trace(data).real)
        if not 0.0 < tr <= 1.0 + trace_tol:
            raise ValueError(f"trace {tr} outside (0, 1]")
        self.dim = data.shape[0]
        self.data = data
        self.trace_tol = trace_tol

    @property
    def trace(self) -> float:
        return float(np.trace(self.data).real)


@dataclass
class ClassicalDist:
    """Nonnegative vector with sum <= 1 (subnormalized allowed)."""

    dim: int
    probs: np.ndarray

    def __init__(self, probs):
        probs = np.asarray(probs, dtype=float)
        if probs.ndim != 1:
            raise DimensionMismatch("expected a 1-d vector")
        if np.min(probs) < -SUM_TOL:
            raise ValueError(f"negative entry {np.min(probs):.3e}")
        if probs.sum() > 1.0 + SUM_TOL:
            raise ValueError(f"sum {probs.sum()} exceeds 1")
        self.dim = probs.shape[0]
        self.probs = np.clip(probs, 0.0, None)

    def as_density(self) -> DensityOperator:
        return DensityOperator(np.diag(self.probs.astype(complex)))


@dataclass
class KrausChannel:
    """CPTP (or flagged trace-nonincreasing) map given by Kraus operators."""

    in_dim: int
    out_dim: int
    kraus: list
    trace_preserving: bool = True

    def __init__(self, kraus, trace_preserving: bool = True):
        kraus = [np.asarray(k, dtype=complex) for k in kraus]
        if not kraus:
            raise ValueError("need at least one Kraus operator")
        out_dim, in_dim = kraus[0].shape
        if any(k.shape != (out_dim, in_dim) for k in kraus):
            raise DimensionMismatch("inconsistent Kraus shapes")
        s = sum(k.conj().T @ k for k in kraus)
        if trace_preserving:
            if np.max(np.abs(s - np.eye(in_dim))) > 1e-10:
                raise ValueError("Kraus completeness sum K^dag K != 1 within 1e-10")
        else:
            w = np.linalg.eigvalsh(hermitize(s))
            if w[-1] > 1.0 + 1e-10:
                raise ValueError("trace-nonincreasing channel has sum K^dag K > 1")
        self.in_dim = in_dim
        self.out_dim = out_dim
        self.kraus = kraus
        self.trace_preserving = trace_preserving


def asmat(x) -> np.ndarray:
    """Coerce a DensityOperator / ClassicalDist / array to a complex matrix."""
    if isinstance(x, DensityOperator):
        return x.data
    if isinstance(x, ClassicalDist):
        return np.diag(x.probs.astype(complex))
    return np.asarray(x, dtype=complex)


def hermitize(m: np.ndarray) -> np.ndarray:
    return (m + m.conj().T) / 2.0


# ---------------------------------------------------------------------------
# spectral calculus
# ---------------------------------------------------------------------------

def eigh(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    Returns (w, U) with m = U diag(w) U^dag. Raises NonHermitian when the
    symmetry check fails.
    """
    m = asmat(m)
    if np.max(np.abs(m - m.conj().T)) > HERM_TOL:
        raise NonHermitian("matrix is not Hermitian within 1e-12")
    w, u = np.linalg.eigh(hermitize(m))
    order = np.argsort(w)[::-1]
    return w[order].real, u[:, order]


def spectral_clip(w: np.ndarray) -> np.ndarray:
    """Zero out eigenvalues at noise level: below KERNEL_TOL or 1e-14 * max.

    Fractional powers amplify eigensolver noise (1e-16 noise contributes 1e-8
    to sum w^(1/2)), so rank-deficient inputs must be cleaned before powers.
    """
    w = np.clip(w, 0.0, None)
    thr = max(KERNEL_TOL, 1e-14 * float(w.max(initial=0.0)))
    return np.where(w > thr, w, 0.0)


def mpow(m, t: float) -> np.ndarray:
    """Fractional matrix power of a PSD matrix with kernel convention.

    Eigenvalues at noise level are mapped to 0 (pseudo-power on the support
    for t <= 0); small negative eigenvalues are clipped.
    """
    w, u = eigh(m)
    w = spectral_clip(w)
    if t <= 0:
        wt = np.where(w > 0.0, w, np.inf) ** t
        wt = np.where(w > 0.0, wt, 0.0)
    else:
        wt = w ** t
    return (u * wt) @ u.conj().T


def sqrtm_psd(m) -> np.ndarray:
    return mpow(m, 0.5)


def plog2m(m) -> np.ndarray:
    """Base-2 matrix logarithm on the support (kernel eigenvalues -> 0)."""
    w, u = eigh(m)
    lw = np.where(w > KERNEL_TOL, np.log2(np.where(w > KERNEL_TOL, w, 1.0)), 0.0)
    return (u * lw) @ u.conj().T


def support_projector(m, rtol: float = 1e-12) -> np.ndarray:
    w, u = eigh(m)
    keep = w > rtol * max(w[0], KERNEL_TOL)
    uk = u[:, keep]
    return uk @ uk.conj().T


def nuclear_norm(a: np.ndarray) -> float:
    return float(np.linalg.svd(a, compute_uv=False).sum())


def trace_norm_herm(m: np.ndarray) -> float:
    return float(np.abs(np.linalg.eigvalsh(hermitize(m))).sum())


# ---------------------------------------------------------------------------
# distances
# ---------------------------------------------------------------------------

def root_fidelity(rho, sigma) -> float:
    """Generalized root fidelity Tr|sqrt(rho) sqrt(sigma)| + deficit term."""
    r, s = asmat(rho), asmat(sigma)
    overlap = nuclear_norm(sqrtm_psd(r) @ sqrtm_psd(s))
    dr = max(0.0, 1.0 - float(np.trace(r).real))
    ds = max(0.0, 1.0 - float(np.trace(s).real))
    return min(overlap + np.sqrt(dr * ds), 1.0)


def fidelity(rho, sigma) -> float:
    """Generalized fidelity F = (root fidelity)^2, in [0, 1]."""
    return root_fidelity(rho, sigma) ** 2


def purified_distance(rho, sigma) -> float:
    return float(np.sqrt(max(0.0, 1.0 - fidelity(rho, sigma))))


def gen_trace_distance(rho, sigma) -> float:
    """Generalized trace distance (Tr|rho-sigma| + |Tr(rho-sigma)|) / 2."""
    d = asmat(rho) - asmat(sigma)
    return 0.5 * (trace_norm_herm(d) + abs(float(np.trace(d).real)))


# ---------------------------------------------------------------------------
# composition
# ---------------------------------------------------------------------------

def tensor(a, b) -> np.ndarray:
    return np.kron(asmat(a), asmat(b))


def partial_trace(tau, dims, keep) -> np.ndarray:
    """Trace out all subsystems not listed in keep.

    dims is the list of subsystem dimensions; keep is an iterable of indices
    into dims. Subsystem order is preserved.
    """
    tau = asmat(tau)
    dims = list(dims)
    n = len(dims)
    if tau.shape[0] != int(np.prod(dims)):
        raise DimensionMismatch(f"dims {dims} do not match matrix of size {tau.shape[0]}")
    keep = sorted(set(keep))
    if any(k < 0 or k >= n for k in keep):
        raise DimensionMismatch(f"keep indices {keep} out of range")
    t = tau.reshape(dims + dims)
    traced = [i for i in range(n) if i not in keep]
    for count, i in enumerate(traced):
        axis = i - sum(1 for j in traced[:count] if j < i)
        nleft = len(t.shape) // 2
        t = np.trace(t, axis1=axis, axis2=axis + nleft)
    d_keep = int(np.prod([dims[k] for k in keep])) if keep else 1
    return t.reshape(d_keep, d_keep)


def apply_channel(rho, ch: KrausChannel) -> np.ndarray:
    r = asmat(rho)
    if r.shape[0] != ch.in_dim:
        raise DimensionMismatch(f"state dim {r.shape[0]} != channel input dim {ch.in_dim}")
    out = np.zeros((ch.out_dim, ch.out_dim), dtype=complex)
    for k in ch.kraus:
        out += k @ r @ k.conj().T
    return hermitize(out)


def dephasing_channel(d: int) -> KrausChannel:
    """Full dephasing in the computational basis."""
    eye = np.eye(d, dtype=complex)
    return KrausChannel([np.outer(eye[:, i], eye[:, i]) for i in range(d)])


def dephase(rho) -> np.ndarray:
    r = asmat(rho)
    return np.diag(np.diag(r))


def embedding_isometry_channel(d_in: int, d_out: int) -> KrausChannel:
    """Isometric embedding of C^d_in into the first d_in coordinates of C^d_out."""
    if d_out < d_in:
        raise DimensionMismatch("output dimension must not shrink")
    v = np.zeros((d_out, d_in), dtype=complex)
    v[:d_in, :] = np.eye(d_in)
    return KrausChannel([v])


# ---------------------------------------------------------------------------
# random instances
# ---------------------------------------------------------------------------

def random_state(d: int, rank: int, seed: int) -> DensityOperator:
    """Deterministic random state GG^dag / tr with complex Gaussian G (d x rank)."""
    if not 1 <= rank <= d:
        raise InvalidRank(f"rank {rank} outside [1, {d}]")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    m = g @ g.conj().T
    return DensityOperator(hermitize(m / np.trace(m).real))


def random_channel(d_in: int, d_out: int, n_kraus: int, seed: int) -> KrausChannel:
    """Random channel from a Haar-ish isometry (QR of a Gaussian block matrix)."""
    if n_kraus < 1:
        raise InvalidRank("need at least one Kraus operator")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((d_out * n_kraus, d_in)) + 1j * rng.standard_normal((d_out * n_kraus, d_in))
    q, _ = np.linalg.qr(g)
    return KrausChannel([q[i * d_out:(i + 1) * d_out, :] for i in range(n_kraus)])


def random_classical(d: int, seed: int) -> ClassicalDist:
    rng = np.random.default_rng(seed)
    p = rng.random(d) + 1e-3
    return ClassicalDist(p / p.sum())


# ---------------------------------------------------------------------------
# entropies
# ---------------------------------------------------------------------------

def vn_entropy(rho) -> float:
    """Von Neumann entropy in bits."""
    w = np.clip(np.linalg.eigvalsh(hermitize(asmat(rho))), 0.0, None)
    w = w[w > 0]
    return float(-(w * np.log2(w)).sum())


def mutual_information(tau, dims) -> float:
    """I(S:C) = H(S) + H(C) - H(SC) in bits for a normalized bipartite state."""
    t = asmat(tau)
    d_s, d_c = dims
    if t.shape[0] != d_s * d_c:
        raise DimensionMismatch(f"dims {dims} do not match state of size {t.shape[0]}")
    h_s = vn_entropy(partial_trace(t, [d_s, d_c], [0]))
    h_c = vn_entropy(partial_trace(t, [d_s, d_c], [1]))
    return h_s + h_c - vn_entropy(t)


# ---------------------------------------------------------------------------
# JSON I/O
# ---------------------------------------------------------------------------

def matrix_to_json(m) -> str:
    m = asmat(m)
    return json.dumps({
        "dim": m.shape[0],
        "re": m.real.reshape(-1).tolist(),
        "im": m.imag.reshape(-1).tolist(),
    })


def matrix_from_json(s: str) -> np.ndarray:
    obj = json.loads(s)
    d = obj["dim"]
    re = np.asarray(obj["re"], dtype=float).reshape(d, d)
    im = np.asarray(obj["im"], dtype=float).reshape(d, d)
    return re + 1j * im


def dist_to_json(p) -> str:
    probs = p.probs if isinstance(p, ClassicalDist) else np.asarray(p, dtype=float)
    return json.dumps(probs.tolist())


def dist_from_json(s: str) -> ClassicalDist:
    return ClassicalDist(np.asarray(json.loads(s), dtype=float))
