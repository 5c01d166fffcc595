"""Explicit hard-to-transform state pairs and region characterizations.

A hard pair orders the relative-entropy monotone one way while reversing the
fidelity monotone: D(rho) >= D(rho') together with F(rho) > F(rho'). The
builders realize the three published families (athermal qutrit via the
embedding channel, pure bipartite Schmidt vectors, block-coherent states) and
report the realized parameters after integer rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import divergences as dv
from . import qmat
from .errors import (DimensionOverflow, InfeasibleRounding, InvalidGibbs,
                     NotRational, SupportViolation)
from .qmat import ClassicalDist, DensityOperator

EMBED_DIM_CAP = 10 ** 6
CMP_TOL = 1e-12


@dataclass
class HardPairReport:
    rho: object
    rho_prime: object
    theory_kind: str
    d_gap: float                 # D(rho) - D(rho') in bits
    fid_gap: float               # sqrt(F)(rho) - sqrt(F)(rho')
    conditions_met: dict
    diagnostics: dict = field(default_factory=dict)

    @property
    def is_hard(self) -> bool:
        return bool(self.conditions_met["relent_ordered"]
                    and self.conditions_met["fidelity_reversed"])


@dataclass
class RegionGrid:
    points: np.ndarray
    labels: np.ndarray
    d_bits: np.ndarray
    f_value: np.ndarray
    alpha_grid: np.ndarray | None = None
    red_margin: np.ndarray | None = None
    nesting_violations: int = 0
    oracle_disagreements: int | None = None
    counts: dict = field(default_factory=dict)
    fo_mask: np.ndarray | None = None
    co_mask: np.ndarray | None = None
    cco_mask: np.ndarray | None = None


# ---------------------------------------------------------------------------
# embedding channel
# ---------------------------------------------------------------------------

def embedding_blocks(gamma) -> tuple[int, list[int]]:
    """Common denominator D and block sizes D_i for a rational Gibbs vector."""
    fracs = []
    for g in gamma:
        if not isinstance(g, Fraction):
            raise NotRational(f"Gibbs entries must be fractions, got {type(g).__name__}")
        fracs.append(g)
    if sum(fracs) != 1:
        raise NotRational("Gibbs vector must sum to exactly 1")
    den = 1
    for g in fracs:
        den = den * g.denominator // math.gcd(den, g.denominator)
    if den > EMBED_DIM_CAP:
        raise DimensionOverflow(f"common denominator {den} exceeds {EMBED_DIM_CAP}")
    blocks = [int(g * den) for g in fracs]
    return den, blocks


def embedding_channel(p, gamma) -> ClassicalDist:
    """Map p to the D-dimensional block-uniform distribution p_hat.

    Block i holds D_i copies of p_i / D_i; the Gibbs vector itself maps to the
    uniform distribution, and all classical Renyi divergences to the reference
    are preserved.
    """
    pv = p.probs if isinstance(p, ClassicalDist) else np.asarray(p, dtype=float)
    den, blocks = embedding_blocks(gamma)
    if len(blocks) != pv.shape[0]:
        raise DimensionOverflow("state and Gibbs vector dimensions differ")
    out = np.concatenate([np.full(b, pv[i] / b) for i, b in enumerate(blocks)])
    return ClassicalDist(out)


# ---------------------------------------------------------------------------
# hard pairs
# ---------------------------------------------------------------------------

def _classical_sqrt_f(p: np.ndarray, g: np.ndarray) -> float:
    return float(np.sqrt(p * g).sum())


def build_athermal_qutrit_pair(big_d: int, eps_param: float) -> HardPairReport:
    """Three-level athermal pair with Gibbs weights (D1/D, D2/D, 1/D).

    The top level carries mass mu = eps' + 1/log2(D-1); after embedding, rho
    is near-uniform over D-1 slots plus the mu slot, while rho' is uniform on
    the last n2 = (D-1)^(1-eps') slots.
    """
    if big_d < 100:
        raise InfeasibleRounding("need D >= 100")
    target = (big_d - 1) ** (1.0 - eps_param)
    n2 = int(round(target))
    if n2 < 2 or n2 > big_d - 1 or abs(n2 - target) > 0.01 * target:
        raise InfeasibleRounding(f"no integer block count near {target:.3f}")
    log_dm1 = math.log2(big_d - 1)
    eps_real = 1.0 - math.log2(n2) / log_dm1
    mu = eps_real + 1.0 / log_dm1
    d2 = n2 - 1
    d1 = big_d - n2
    if d1 < 1 or d2 < 1:
        raise InfeasibleRounding("degenerate block sizes")
    gamma = np.array([d1, d2, 1.0]) / big_d
    p = np.array([(1.0 - mu) * d1 / (big_d - 1), (1.0 - mu) * d2 / (big_d - 1), mu])
    pp = np.array([0.0, d2 / n2, 1.0 / n2])

    d_rho = dv.classical_kl(p, gamma)
    d_rhop = dv.classical_kl(pp, gamma)
    sf_rho = _classical_sqrt_f(p, gamma)
    sf_rhop = _classical_sqrt_f(pp, gamma)
    return HardPairReport(
        rho=ClassicalDist(p), rho_prime=ClassicalDist(pp), theory_kind="athermality",
        d_gap=d_rho - d_rhop, fid_gap=sf_rho - sf_rhop,
        conditions_met={
            "relent_ordered": d_rho >= d_rhop - CMP_TOL,
            "fidelity_reversed": sf_rho > sf_rhop,
        },
        diagnostics={
            "gibbs": gamma, "D": big_d, "n2": n2, "eps_requested": eps_param,
            "eps_realized": eps_real, "mu": mu,
            "F_rho": sf_rho ** 2, "F_rho_prime": sf_rhop ** 2,
            "F_rho_target": 1.0 - eps_param,
            "F_rho_prime_target": big_d ** (-eps_param),
        })


def build_entanglement_pair(d: int, kappa: float) -> HardPairReport:
    """Pure bipartite Schmidt-vector pair in local dimension d.

    lambda puts mass kappa on one coefficient and spreads the rest; lambda'
    is uniform on m ~ (d-1)^(1-kappa) coefficients. m is clamped to >= 2 so
    that rho' stays entangled (m = 1 would be a product state); the realized
    exponent is reported.
    """
    if d < 3 or not 0.0 < kappa < 1.0:
        raise InfeasibleRounding("need d >= 3 and kappa in (0,1)")
    target = (d - 1) ** (1.0 - kappa)
    m = max(2, int(round(target)))
    if m > d:
        raise InfeasibleRounding(f"slot count {m} exceeds dimension {d}")
    lam = np.array([(1.0 - kappa) / (d - 1)] * (d - 1) + [kappa])
    lamp = np.array([0.0] * (d - m) + [1.0 / m] * m)
    h_lam = dv.shannon_entropy(lam)
    h_lamp = dv.shannon_entropy(lamp)
    sf = math.sqrt(lam.max())
    sfp = math.sqrt(lamp.max())
    return HardPairReport(
        rho=ClassicalDist(lam), rho_prime=ClassicalDist(lamp), theory_kind="entanglement",
        d_gap=h_lam - h_lamp, fid_gap=sf - sfp,
        conditions_met={
            "relent_ordered": h_lam >= h_lamp - CMP_TOL,
            "fidelity_reversed": sf > sfp,
        },
        diagnostics={
            "m": m, "kappa_requested": kappa,
            "kappa_realized": 1.0 - math.log2(m) / math.log2(d - 1),
            "entropy": h_lam, "entropy_prime": h_lamp,
        })


def maximally_coherent_state(d: int) -> np.ndarray:
    v = np.full(d, 1.0 / math.sqrt(d), dtype=complex)
    return np.outer(v, v.conj())


def build_coherence_pair(d: int, eps_param: float, mu: float) -> HardPairReport:
    """Block state mu (+) (1-mu)|Phi_(d-1)> vs the product |d1-1> (x) |Phi_d2>.

    Both monotones have closed forms here: D(rho) = (1-mu) log2(d-1),
    D(phi) = log2 d2, F(rho) = mu + (1-mu)/(d-1) and F(phi) = 1/d2.
    """
    d1 = int(round(d ** (1.0 - eps_param)))
    d2 = int(round(d ** eps_param))
    if d1 < 1 or d2 < 2 or d1 * d2 > d:
        raise InfeasibleRounding(f"block split d1={d1}, d2={d2} infeasible in dimension {d}")
    rho = np.zeros((d, d), dtype=complex)
    rho[0, 0] = mu
    rho[1:, 1:] = (1.0 - mu) * maximally_coherent_state(d - 1)
    phi = np.zeros(d, dtype=complex)
    base = (d1 - 1) * d2
    phi[base:base + d2] = 1.0 / math.sqrt(d2)
    phi_op = np.outer(phi, phi.conj())

    d_rho = (1.0 - mu) * math.log2(d - 1)
    d_phi = math.log2(d2)
    f_rho = mu + (1.0 - mu) / (d - 1)
    f_phi = 1.0 / d2
    witness = (mu + (1.0 - mu) / math.sqrt(d - 1)) ** 2
    return HardPairReport(
        rho=DensityOperator(rho), rho_prime=DensityOperator(phi_op), theory_kind="coherence",
        d_gap=d_rho - d_phi, fid_gap=math.sqrt(f_rho) - math.sqrt(f_phi),
        conditions_met={
            "relent_ordered": d_rho >= d_phi - 1e-9,
            "fidelity_reversed": f_rho > f_phi,
        },
        diagnostics={
            "d1": d1, "d2": d2, "mu": mu,
            "D_rho": d_rho, "D_phi": d_phi,
            "F_rho": f_rho, "F_phi": f_phi, "F_rho_witness": witness,
        })


# ---------------------------------------------------------------------------
# qubit Bloch sweep
# ---------------------------------------------------------------------------

def _qubit_d_bits(x, z, g0: float, g1: float):
    """D(rho(x,z) || diag(g0,g1)) in bits, vectorized over x, z."""
    r = np.sqrt(np.clip(x * x + z * z, 0.0, 1.0))
    w1 = (1.0 + r) / 2.0
    w2 = (1.0 - r) / 2.0
    ent = np.zeros_like(r)
    for w in (w1, w2):
        mask = w > 0
        ent = ent - np.where(mask, w * np.log2(np.where(mask, w, 1.0)), 0.0)
    cross = (1.0 + z) / 2.0 * math.log2(g0) + (1.0 - z) / 2.0 * math.log2(g1)
    return -ent - cross


def _qubit_f(x, z, g0: float, g1: float):
    """F(rho(x,z), diag(g0,g1)) via Tr(rho gamma) + 2 sqrt(det rho det gamma)."""
    tr = g0 * (1.0 + z) / 2.0 + g1 * (1.0 - z) / 2.0
    det_rho = np.clip((1.0 - (x * x + z * z)) / 4.0, 0.0, None)
    return tr + 2.0 * np.sqrt(det_rho * g0 * g1)


def bloch_sweep(gamma, grid_n: int, d_target: float,
                theta_points: int = 720) -> tuple[RegionGrid, HardPairReport]:
    """Classify the x-z Bloch disk by free-energy bands and extract the
    D = d_target level set with its fidelity extremes.

    Level-set points are found by bisection along rays from gamma (the unique
    interior point of every sublevel set), refined to 1e-9 in D.
    """
    g = np.asarray(qmat.asmat(gamma)).real
    if g.shape != (2, 2) or abs(g[0, 1]) > 1e-14 or abs(g[1, 0]) > 1e-14:
        raise InvalidGibbs("gamma must be a diagonal qubit state")
    g0, g1 = float(g[0, 0]), float(g[1, 1])
    if g0 <= 0 or g1 <= 0 or abs(g0 + g1 - 1.0) > 1e-10:
        raise InvalidGibbs("gamma must be normalized with full rank")

    xs = np.linspace(-1.0, 1.0, grid_n)
    zs = np.linspace(-1.0, 1.0, grid_n)
    xg, zg = np.meshgrid(xs, zs, indexing="ij")
    inside = xg * xg + zg * zg <= 1.0
    d_vals = np.where(inside, _qubit_d_bits(xg, zg, g0, g1), np.nan)
    f_vals = np.where(inside, _qubit_f(xg, zg, g0, g1), np.nan)
    bands = np.where(inside, np.minimum(np.floor(d_vals), 9), -1)
    labels = np.array([f"D{int(b)}" if b >= 0 else "outside" for b in bands.ravel()])
    grid = RegionGrid(points=np.column_stack([xg.ravel(), zg.ravel()]),
                      labels=labels, d_bits=d_vals.ravel(), f_value=f_vals.ravel())

    cz = g0 - g1   # gamma sits on the z axis

    def ray_point(theta, r):
        return r * math.sin(theta), cz + r * math.cos(theta)

    def r_max(theta):
        # ||c + r u|| = 1 with c = (0, cz)
        cu = cz * math.cos(theta)
        return -cu + math.sqrt(cu * cu + 1.0 - cz * cz)

    def crossing(theta):
        rm = r_max(theta)
        x1, z1 = ray_point(theta, rm)
        if _qubit_d_bits(np.array(x1), np.array(z1), g0, g1) < d_target:
            return None
        lo, hi = 0.0, rm
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            xm, zm = ray_point(theta, mid)
            if _qubit_d_bits(np.array(xm), np.array(zm), g0, g1) >= d_target:
                hi = mid
            else:
                lo = mid
        return ray_point(theta, hi)

    def f_at(theta):
        pt = crossing(theta)
        if pt is None:
            return None
        return float(_qubit_f(np.array(pt[0]), np.array(pt[1]), g0, g1)), pt

    # the feasible directions form [theta0, pi]; theta0 is where the ray's
    # sphere endpoint has D = d_target exactly (a pure state on the level set)
    lo, hi = 0.0, math.pi
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        xm, zm = ray_point(mid, r_max(mid))
        if _qubit_d_bits(np.array(xm), np.array(zm), g0, g1) >= d_target:
            hi = mid
        else:
            lo = mid
    theta0 = hi

    thetas = np.linspace(theta0, math.pi, theta_points)
    best_max = (-math.inf, None)
    best_min = (math.inf, None)
    level_set = []
    for th in thetas:
        res = f_at(th)
        if res is None:
            continue
        fv, pt = res
        level_set.append((float(th), float(pt[0]), float(pt[1]), fv))
        if fv > best_max[0]:
            best_max = (fv, (th, pt))
        if fv < best_min[0]:
            best_min = (fv, (th, pt))

    def refine(th_center, sign):
        span = (math.pi - theta0) / theta_points
        a = max(theta0, th_center - 2 * span)
        b = min(math.pi, th_center + 2 * span)
        golden = (math.sqrt(5.0) - 1.0) / 2.0
        c1 = b - golden * (b - a)
        c2 = a + golden * (b - a)
        f1 = sign * f_at(c1)[0]
        f2 = sign * f_at(c2)[0]
        for _ in range(60):
            if f1 < f2:
                b, c2, f2 = c2, c1, f1
                c1 = b - golden * (b - a)
                f1 = sign * f_at(c1)[0]
            else:
                a, c1, f1 = c1, c2, f2
                c2 = a + golden * (b - a)
                f2 = sign * f_at(c2)[0]
        th = 0.5 * (a + b)
        fv, pt = f_at(th)
        return fv, pt

    f_hi, pt_hi = refine(best_max[1][0], -1.0)
    f_lo, pt_lo = refine(best_min[1][0], +1.0)
    # the maximum can sit exactly at the pure endpoint theta0
    f_end, pt_end = f_at(theta0)
    if f_end > f_hi:
        f_hi, pt_hi = f_end, pt_end

    def as_state(pt):
        x, z = pt
        m = 0.5 * np.array([[1.0 + z, x], [x, 1.0 - z]], dtype=complex)
        return DensityOperator(m)

    rho_hi = as_state(pt_hi)
    rho_lo = as_state(pt_lo)
    theta_bloch = math.atan2(abs(pt_hi[0]), pt_hi[1])
    report = HardPairReport(
        rho=rho_hi, rho_prime=rho_lo, theory_kind="athermality",
        d_gap=0.0, fid_gap=math.sqrt(f_hi) - math.sqrt(f_lo),
        conditions_met={"relent_ordered": True, "fidelity_reversed": f_hi > f_lo},
        diagnostics={
            "theta_bloch": theta_bloch, "F_rho": f_hi, "F_rho_prime": f_lo,
            "F_gap": f_hi - f_lo, "rho_prime_diag": (float(rho_lo.data[0, 0].real),
                                                     float(rho_lo.data[1, 1].real)),
            "level_bits": d_target, "level_set": level_set,
        })
    return grid, report


# ---------------------------------------------------------------------------
# thermomajorization
# ---------------------------------------------------------------------------

def _lorenz_curve(p: np.ndarray, g: np.ndarray):
    order = np.argsort(-(p / g), kind="stable")
    xs = np.concatenate([[0.0], np.cumsum(g[order])])
    ys = np.concatenate([[0.0], np.cumsum(p[order])])
    return xs, ys


def thermomajorizes(p, p_prime, gamma) -> tuple[bool, dict]:
    """(p, gamma) thermomajorizes (p', gamma): Lorenz-curve domination.

    Both curves are concave piecewise-linear, so domination at the merged
    breakpoints is equivalent to domination everywhere.
    """
    pv = p.probs if isinstance(p, ClassicalDist) else np.asarray(p, dtype=float)
    qv = p_prime.probs if isinstance(p_prime, ClassicalDist) else np.asarray(p_prime, dtype=float)
    gv = gamma.probs if isinstance(gamma, ClassicalDist) else np.asarray(gamma, dtype=float)
    if np.min(gv) <= 0:
        raise SupportViolation("Gibbs vector must have full support")
    xs_p, ys_p = _lorenz_curve(pv, gv)
    xs_q, ys_q = _lorenz_curve(qv, gv)
    merged = np.union1d(xs_p, xs_q)
    cp = np.interp(merged, xs_p, ys_p)
    cq = np.interp(merged, xs_q, ys_q)
    ok = bool(np.all(cp >= cq - CMP_TOL))
    return ok, {"x": merged, "curve_p": cp, "curve_p_prime": cq}


def _classical_d_family(pv: np.ndarray, gv: np.ndarray, pts: np.ndarray, alphas):
    """D_alpha(point||g) and D_alpha(g||point) for all grid points, per alpha.

    Returns two arrays of shape (len(alphas), n_points) with +inf where the
    support conditions fail.
    """
    n = pts.shape[0]
    d_pg = np.empty((len(alphas), n))
    d_gp = np.empty((len(alphas), n))
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        for i, a in enumerate(alphas):
            if math.isinf(a):
                ratio = np.where(pts > 0, pts / gv[None, :], 0.0)
                d_pg[i] = np.log2(ratio.max(axis=1))
                ratio2 = np.where(pts > 0, gv[None, :] / pts, np.inf).max(axis=1)
                d_gp[i] = np.log2(ratio2)
            elif abs(a - 1.0) < dv.ALPHA_ONE_WINDOW:
                terms = np.where(pts > 0, pts * np.log2(np.where(pts > 0, pts, 1.0) / gv[None, :]), 0.0)
                d_pg[i] = terms.sum(axis=1)
                bad = (pts <= 0).any(axis=1)
                vals = (gv[None, :] * np.log2(gv[None, :] / np.where(pts > 0, pts, 1.0))).sum(axis=1)
                d_gp[i] = np.where(bad, np.inf, vals)
            else:
                s_pg = (pts ** a * gv[None, :] ** (1.0 - a)).sum(axis=1)
                d_pg[i] = np.log2(s_pg) / (a - 1.0)
                if a > 1.0:
                    zero = (pts <= 0).any(axis=1)
                    s_gp = np.where(zero, np.inf,
                                    np.where(pts > 0, gv[None, :] ** a * np.where(pts > 0, pts, 1.0) ** (1.0 - a), 0.0).sum(axis=1))
                    d_gp[i] = np.where(np.isinf(s_gp), np.inf, np.log2(s_gp) / (a - 1.0))
                else:
                    s_gp = np.where(pts > 0, gv[None, :] ** a * np.where(pts > 0, pts, 1.0) ** (1.0 - a), 0.0).sum(axis=1)
                    d_gp[i] = np.log2(s_gp) / (a - 1.0)
    return d_pg, d_gp


def default_alpha_grid(n: int = 64) -> np.ndarray:
    return np.concatenate([np.geomspace(0.5, 40.0, n), [1.0, math.inf]])


def classify_simplex_regions(p, gamma, grid_n: int, alpha_grid=None,
                             gamma_rational=None) -> RegionGrid:
    """Label the 3-simplex by reachability region relative to the input p.

    FO by thermomajorization; the closure of CO by the two one-parameter
    divergence orderings over the alpha grid; the closure of CCO by relative
    entropy ordering; RED marks CCO points where some alpha in [1/2, 1)
    reverses the ordering. The continuum condition is approximated by a finite
    grid: sound for rejection, grid-approximate for acceptance.
    """
    pv = p.probs if isinstance(p, ClassicalDist) else np.asarray(p, dtype=float)
    gv = gamma.probs if isinstance(gamma, ClassicalDist) else np.asarray(gamma, dtype=float)
    if alpha_grid is None:
        alpha_grid = default_alpha_grid()
    alpha_grid = np.asarray(alpha_grid, dtype=float)

    ii, jj = np.meshgrid(np.arange(grid_n + 1), np.arange(grid_n + 1), indexing="ij")
    mask = ii + jj <= grid_n
    a = ii[mask]
    b = jj[mask]
    pts = np.column_stack([a, b, grid_n - a - b]).astype(float) / grid_n

    # FO: curve_p evaluated at each point's Lorenz breakpoints dominates it
    xs_p, ys_p = _lorenz_curve(pv, gv)
    order = np.argsort(-(np.where(pts > 0, pts, 0.0) / gv[None, :]), axis=1, kind="stable")
    g_sorted = np.take_along_axis(np.broadcast_to(gv, pts.shape), order, axis=1)
    p_sorted = np.take_along_axis(pts, order, axis=1)
    bx = np.cumsum(g_sorted, axis=1)
    by = np.cumsum(p_sorted, axis=1)
    cp_at = np.interp(bx.ravel(), xs_p, ys_p).reshape(bx.shape)
    fo = np.all(cp_at >= by - CMP_TOL, axis=1)

    d_pg_all, d_gp_all = _classical_d_family(pv, gv, pts, alpha_grid)
    d_pg_ref = np.array([dv.classical_renyi(pv, gv, a) for a in alpha_grid])
    d_gp_ref = np.array([dv.classical_renyi(gv, pv, a) for a in alpha_grid])
    co = np.all((d_pg_ref[:, None] >= d_pg_all - CMP_TOL)
                & (d_gp_ref[:, None] >= d_gp_all - CMP_TOL), axis=0)

    kl_idx = int(np.where(np.abs(alpha_grid - 1.0) < 1e-9)[0][0])
    cco = d_pg_ref[kl_idx] >= d_pg_all[kl_idx] - CMP_TOL

    sub = (alpha_grid >= 0.5) & (alpha_grid < 1.0)
    red_margin = (d_pg_all[sub] - d_pg_ref[sub, None]).max(axis=0)
    red = cco & ~co & (red_margin > CMP_TOL)

    nesting = int(np.sum(fo & ~co) + np.sum(co & ~cco))

    labels = np.where(fo, "FO",
                      np.where(co, "CO_only",
                               np.where(red, "RED",
                                        np.where(cco, "CCO_only", "OUTSIDE"))))

    oracle_dis = None
    if gamma_rational is not None:
        den, blocks = embedding_blocks(gamma_rational)
        phat = np.concatenate([np.full(bk, pv[i] / bk) for i, bk in enumerate(blocks)])
        cum_p = np.cumsum(np.sort(phat)[::-1])
        cols = np.concatenate([np.repeat(pts[:, i:i + 1] / bk, bk, axis=1)
                               for i, bk in enumerate(blocks)], axis=1)
        cum_q = np.cumsum(-np.sort(-cols, axis=1), axis=1)
        major = np.all(cum_p[None, :] >= cum_q - CMP_TOL, axis=1)
        oracle_dis = int(np.sum(major != fo))

    counts = {"FO": int(fo.sum()), "CO": int(co.sum()), "CCO": int(cco.sum()),
              "RED": int(red.sum())}
    with np.errstate(divide="ignore", invalid="ignore"):
        f_vals = (np.sqrt(pts * gv[None, :]).sum(axis=1)) ** 2
    return RegionGrid(points=pts, labels=labels, d_bits=d_pg_all[kl_idx],
                      f_value=f_vals, alpha_grid=alpha_grid, red_margin=red_margin,
                      nesting_violations=nesting, oracle_disagreements=oracle_dis,
                      counts=counts, fo_mask=fo, co_mask=co, cco_mask=cco)
