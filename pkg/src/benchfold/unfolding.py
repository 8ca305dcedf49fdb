"""Ordinal multidimensional unfolding of a rankings table.

Given a K x M table of ranks (one row per ranking, one column per ranked
object, small rank = preferred), the fitter places K ideal points and M
object points in a low-dimensional space so that Euclidean distances from
ideal points to object points reproduce the ranks as well as possible.

The loss is a penalized stress: the normalized residual between fitted
distances and *disparities* (row-wise monotone transforms of the ranks),
multiplied by a penalty on the coefficient of variation of the disparities
that keeps the monotone transforms from collapsing to constants.
Coordinates are updated by majorization (a Guttman transform restricted to
the rectangular between-set weight structure), disparities by weighted
monotone regression, alternating until the penalized stress stalls.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "PRIMARY",
    "SECONDARY",
    "ORDINAL",
    "IDENTITY",
    "DegenerateDisparitiesError",
    "UnfoldOptions",
    "UnfoldingSolution",
    "euclidean_distances",
    "monotone_regress",
    "penalized_stress",
    "raw_stress",
    "smacof_step",
    "fit",
]

PRIMARY = "primary"
SECONDARY = "secondary"

ORDINAL = "ordinal"
IDENTITY = "identity"  # test mode: dissimilarities used as disparities directly

_DIST_FLOOR = 1e-12  # zero fitted distances are floored in the Guttman ratio


class DegenerateDisparitiesError(ValueError):
    """Disparities collapsed to a constant (or zero-mean) configuration."""


@dataclass(frozen=True)
class UnfoldOptions:
    dim: int = 2
    max_iter: int = 10000
    eps: float = 1e-6  # relative penalized-stress decrease to stop at
    penalty_lambda: float = 0.5
    penalty_omega: float = 1.0
    n_starts: int = 1
    seed: int = 0
    weights: np.ndarray | None = None  # K x M nonnegative, default all ones
    tie_rule: str = PRIMARY
    transform: str = ORDINAL

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError("dim must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be positive")
        if not self.eps > 0:
            raise ValueError("eps must be positive")
        if not 0.0 < self.penalty_lambda <= 1.0:
            raise ValueError("penalty_lambda must lie in (0, 1]")
        if self.penalty_omega < 0.0:
            raise ValueError("penalty_omega must be nonnegative")
        if self.n_starts < 1:
            raise ValueError("n_starts must be positive")
        if self.tie_rule not in (PRIMARY, SECONDARY):
            raise ValueError(f"unknown tie rule {self.tie_rule!r}")
        if self.transform not in (ORDINAL, IDENTITY):
            raise ValueError(f"unknown transform mode {self.transform!r}")


@dataclass(frozen=True)
class UnfoldingSolution:
    """Fitted configuration plus everything needed to audit the fit."""

    Z1: np.ndarray  # K x dim ideal points
    Z2: np.ndarray  # M x dim object points
    disparities: np.ndarray  # K x M transformed ranks
    distances: np.ndarray  # K x M fitted Euclidean distances
    stress_penalized: float
    stress_raw: float  # weighted sum of squared disparity-distance residuals
    transform: tuple  # per row: ((rank level, disparity), ...) breakpoints
    iterations: int
    converged: bool
    stress_history: tuple  # penalized stress after each outer iteration


def euclidean_distances(Z1: np.ndarray, Z2: np.ndarray) -> np.ndarray:
    """All pairwise distances between ideal-point and object-point rows."""
    diff = Z1[:, None, :] - Z2[None, :, :]
    return np.sqrt((diff * diff).sum(axis=-1))


def _pava(y, w):
    """Weighted nondecreasing least-squares fit on a chain (pool adjacent
    violators), on plain Python floats. Zero-weight entries ride along
    without influencing pooled means."""
    vals: list = []
    wts: list = []
    counts: list = []
    for yi, wi in zip(y, w):
        vals.append(yi)
        wts.append(wi)
        counts.append(1)
        while len(vals) > 1 and vals[-2] > vals[-1]:
            v2, w2, c2 = vals.pop(), wts.pop(), counts.pop()
            v1, w1, c1 = vals.pop(), wts.pop(), counts.pop()
            tw = w1 + w2
            if tw > 0.0:
                nv = (v1 * w1 + v2 * w2) / tw
            else:
                nv = (v1 * c1 + v2 * c2) / (c1 + c2)
            vals.append(nv)
            wts.append(tw)
            counts.append(c1 + c2)
    out = []
    for v, c in zip(vals, counts):
        out.extend([v] * c)
    return out


def monotone_regress(ranks, targets, weights=None, tie_rule: str = PRIMARY):
    """Weighted least-squares disparities that weakly follow the rank order.

    Under the ``primary`` tie rule, equal ranks impose no mutual constraint
    (their targets are pre-sorted, which is optimal by rearrangement);
    under ``secondary`` equal ranks are forced to share one disparity.
    """
    ranks = np.asarray(ranks, dtype=float)
    targets = np.asarray(targets, dtype=float)
    if ranks.shape != targets.shape or ranks.ndim != 1:
        raise ValueError("ranks and targets must be equal-length vectors")
    if len(ranks) == 0:
        raise ValueError("need at least one observation")
    if weights is None:
        weights = np.ones_like(targets)
    else:
        weights = np.asarray(weights, dtype=float)
        if weights.shape != targets.shape:
            raise ValueError("weights must match targets in length")
        if np.any(weights < 0):
            raise ValueError("weights must be nonnegative")

    if tie_rule == PRIMARY:
        order = np.lexsort((targets, ranks))
        fitted = _pava(targets[order].tolist(), weights[order].tolist())
        out = np.empty(len(ranks), dtype=float)
        out[order] = fitted
        return out

    if tie_rule != SECONDARY:
        raise ValueError(f"unknown tie rule {tie_rule!r}")

    levels, inverse = np.unique(ranks, return_inverse=True)
    group_w = np.zeros(len(levels))
    group_y = np.zeros(len(levels))
    group_n = np.zeros(len(levels))
    np.add.at(group_w, inverse, weights)
    np.add.at(group_y, inverse, weights * targets)
    np.add.at(group_n, inverse, targets)
    counts = np.bincount(inverse, minlength=len(levels))
    means = np.where(group_w > 0, group_y / np.where(group_w > 0, group_w, 1.0),
                     group_n / counts)
    fitted = np.asarray(_pava(means.tolist(), group_w.tolist()))
    return fitted[inverse]


def _cv_squared(dhat: np.ndarray, w: np.ndarray) -> float:
    wsum = w.sum()
    mean = float((w * dhat).sum() / wsum)
    if mean == 0.0:
        raise DegenerateDisparitiesError("disparities have zero mean")
    var = float((w * (dhat - mean) ** 2).sum() / wsum)
    return var / (mean * mean)


def penalized_stress(disparities, distances, weights=None,
                     lam: float = 0.5, omega: float = 1.0,
                     row_conditional: bool = False,
                     free_rows=None) -> float:
    """Normalized stress to the power ``lam`` times the variation penalty.

    The penalty involves the (weighted) coefficient of variation v of the
    disparities: constant disparities make it blow up, which is exactly the
    degeneracy it exists to discourage. By default the factor is
    1 + omega / v^2 over the whole matrix. With ``row_conditional=True``
    (the form matching row-wise monotone transforms, used by :func:`fit`)
    the factor is averaged over per-row penalties, so no single row may
    collapse to a constant. Rows listed in ``free_rows`` carry no ordinal
    information (their input ranks are all tied) and are exempted.
    """
    dhat = np.asarray(disparities, dtype=float)
    d = np.asarray(distances, dtype=float)
    if dhat.shape != d.shape:
        raise ValueError("disparities and distances must have equal shapes")
    if weights is None:
        w = np.ones_like(dhat)
    else:
        w = np.asarray(weights, dtype=float)
        if w.shape != dhat.shape:
            raise ValueError("weights must match disparities in shape")

    raw = float((w * (dhat - d) ** 2).sum())
    denom = float((w * dhat * dhat).sum())
    if denom == 0.0:
        raise DegenerateDisparitiesError("disparities are identically zero")

    if not row_conditional:
        cv2 = _cv_squared(dhat, w)
        if cv2 == 0.0:
            raise DegenerateDisparitiesError("disparities are constant")
        penalty = 1.0 + omega / cv2
    else:
        free = np.zeros(dhat.shape[0], dtype=bool)
        if free_rows is not None:
            free[list(free_rows)] = True
        terms = _row_penalty_terms(dhat, w, omega)
        bad = ~np.isfinite(terms) & ~free
        if np.any(bad):
            raise DegenerateDisparitiesError(
                f"disparities of row {int(np.flatnonzero(bad)[0])} are constant"
            )
        terms = np.where(free, 1.0, terms)
        penalty = float(terms.mean())

    return (raw / denom) ** lam * penalty


def _row_penalty_terms(dhat: np.ndarray, w: np.ndarray, omega: float) -> np.ndarray:
    """Vectorized per-row 1 + omega/cv^2; non-finite where a row is constant."""
    wsums = w.sum(axis=1)
    means = (w * dhat).sum(axis=1) / wsums
    var = (w * (dhat - means[:, None]) ** 2).sum(axis=1) / wsums
    with np.errstate(divide="ignore", invalid="ignore"):
        cv2 = var / (means * means)
        terms = 1.0 + omega / cv2
    return terms


def raw_stress(disparities, distances, weights=None) -> float:
    """Weighted sum of squared residuals between disparities and distances."""
    dhat = np.asarray(disparities, dtype=float)
    d = np.asarray(distances, dtype=float)
    w = np.ones_like(dhat) if weights is None else np.asarray(weights, dtype=float)
    return float((w * (dhat - d) ** 2).sum())


def _weight_pseudoinverse(w: np.ndarray) -> np.ndarray:
    """Moore-Penrose inverse of the Laplacian of the bipartite weight matrix."""
    K, M = w.shape
    n = K + M
    V = np.zeros((n, n))
    V[:K, :K] = np.diag(w.sum(axis=1))
    V[K:, K:] = np.diag(w.sum(axis=0))
    V[:K, K:] = -w
    V[K:, :K] = -w.T
    return np.linalg.pinv(V)


def _guttman(Z1, Z2, dhat, w, vpinv):
    """One majorization update of both point sets for fixed disparities."""
    d = euclidean_distances(Z1, Z2)
    ratio = w * dhat / np.maximum(d, _DIST_FLOOR)
    upper = ratio.sum(axis=1)[:, None] * Z1 - ratio @ Z2
    lower = ratio.sum(axis=0)[:, None] * Z2 - ratio.T @ Z1
    X = vpinv @ np.vstack([upper, lower])
    K = Z1.shape[0]
    return X[:K], X[K:]


def smacof_step(Z1, Z2, disparities, weights=None):
    """Single majorization step; raw stress never increases for fixed
    disparities as long as current distances are strictly positive (exact
    zeros are floored in the update ratio)."""
    Z1 = np.asarray(Z1, dtype=float)
    Z2 = np.asarray(Z2, dtype=float)
    dhat = np.asarray(disparities, dtype=float)
    w = np.ones_like(dhat) if weights is None else np.asarray(weights, dtype=float)
    if not np.any(w > 0):
        raise ValueError("all weights are zero; update is undefined")
    vpinv = _weight_pseudoinverse(w)
    return _guttman(Z1, Z2, dhat, w, vpinv)


# ---------------------------------------------------------------------------
# fit internals


class _RowTransform:
    """Precomputed per-row ordering for the repeated disparity updates.

    The rank-based structure of each row never changes during a fit, so the
    stable rank order, the tie blocks, and the reordered weights are built
    once. Only the targets (current distances) vary per iteration.
    """

    def __init__(self, delta: np.ndarray, w: np.ndarray, tie_rule: str):
        self.tie_rule = tie_rule
        K, M = delta.shape
        self.order = np.vstack(
            [np.lexsort((np.arange(M), delta[k])) for k in range(K)]
        )
        sorted_ranks = np.take_along_axis(delta, self.order, axis=1)
        self.w_sorted = np.take_along_axis(w, self.order, axis=1)
        self.w_lists = [row.tolist() for row in self.w_sorted]
        # tie blocks (start, stop) with length > 1, per row
        self.blocks = []
        for k in range(K):
            row = sorted_ranks[k]
            bounds = np.flatnonzero(np.diff(row) != 0) + 1
            edges = [0, *bounds.tolist(), M]
            self.blocks.append(
                [(a, b) for a, b in zip(edges, edges[1:]) if b - a > 1]
            )
        # secondary rule: per-row block edges (all blocks) and block weights
        self.all_edges = []
        for k in range(K):
            row = sorted_ranks[k]
            bounds = np.flatnonzero(np.diff(row) != 0) + 1
            self.all_edges.append([0, *bounds.tolist(), M])

    def regress(self, dists: np.ndarray) -> np.ndarray:
        """Row-wise monotone regression of distances onto the stored ranks."""
        targets = np.take_along_axis(dists, self.order, axis=1)
        t_lists = targets.tolist()
        order_lists = self.order.tolist()
        result = np.empty_like(targets)
        if self.tie_rule == PRIMARY:
            for k, t in enumerate(t_lists):
                wl = self.w_lists[k]
                o = order_lists[k]
                if self.blocks[k]:
                    # Within a tie block the target order is free; sorting
                    # targets (with their weights and indices) is optimal.
                    wl = wl[:]
                    o = o[:]
                    for a, b in self.blocks[k]:
                        seg = sorted(range(a, b), key=t.__getitem__)
                        t[a:b] = [t[i] for i in seg]
                        wl[a:b] = [wl[i] for i in seg]
                        o[a:b] = [o[i] for i in seg]
                fitted = _pava(t, wl)
                row = result[k]
                for i, oi in enumerate(o):
                    row[oi] = fitted[i]
        else:
            for k, t in enumerate(t_lists):
                wl = self.w_lists[k]
                o = order_lists[k]
                edges = self.all_edges[k]
                means, bw = [], []
                for a, b in zip(edges, edges[1:]):
                    tw = sum(wl[a:b])
                    if tw > 0:
                        means.append(sum(ti * wi for ti, wi in zip(t[a:b], wl[a:b])) / tw)
                    else:
                        means.append(sum(t[a:b]) / (b - a))
                    bw.append(tw)
                fitted = _pava(means, bw)
                row = result[k]
                for (a, b), v in zip(zip(edges, edges[1:]), fitted):
                    for i in range(a, b):
                        row[o[i]] = v
        return result


def _normalize(dhat: np.ndarray, w: np.ndarray) -> np.ndarray:
    ssq = float((w * dhat * dhat).sum())
    if ssq <= 0.0:
        raise DegenerateDisparitiesError("disparities are identically zero")
    return dhat * math.sqrt(w.sum() / ssq)


def _objective(dhat, d, w, options, free_mask) -> float:
    """Fit objective: normalized stress^lambda times the mean row penalty.

    Infinite when any informative row has collapsed to a constant, which
    makes such candidates unacceptable to the safeguarded updates.
    """
    raw = float((w * (dhat - d) ** 2).sum())
    denom = float((w * dhat * dhat).sum())
    if denom == 0.0:
        return math.inf
    terms = _row_penalty_terms(dhat, w, options.penalty_omega)
    terms = np.where(free_mask, 1.0, terms)
    if not np.all(np.isfinite(terms)):
        return math.inf
    return (raw / denom) ** options.penalty_lambda * float(terms.mean())


def _classical_start(delta: np.ndarray, dim: int):
    """Deterministic start by algebraic metric unfolding of the rank matrix.

    Double-centering the squared dissimilarities yields the cross products
    of the centered point sets; an SVD factorizes them up to an oblique
    dim x dim transform, and the column-centered squared dissimilarities
    are linear in that transform's Gram matrix and the between-set offset,
    so both are recovered by least squares. Exact Euclidean input is
    reproduced to machine precision; rank input gets a structured start.
    Falls back to the balanced SVD split when the Gram estimate is not
    positive definite.
    """
    K, M = delta.shape
    sq = delta.astype(float) ** 2
    cross = -0.5 * (
        sq
        - sq.mean(axis=1, keepdims=True)
        - sq.mean(axis=0, keepdims=True)
        + sq.mean()
    )
    u, s, vt = np.linalg.svd(cross, full_matrices=False)
    ncomp = min(dim, len(s))
    # Canonical sign: the largest-magnitude loading of each component is
    # positive, so permuting input rows permutes the start identically.
    for j in range(ncomp):
        pivot = np.argmax(np.abs(u[:, j]))
        if u[pivot, j] < 0:
            u[:, j] = -u[:, j]
            vt[j, :] = -vt[j, :]
    scale = np.sqrt(np.maximum(s[:ncomp], 0.0))
    P = u[:, :ncomp] * scale
    Q = vt[:ncomp, :].T * scale

    Z1 = np.zeros((K, dim))
    Z2 = np.zeros((M, dim))
    split = _oblique_split(sq, cross, P, ncomp)
    if split is None:
        Z1[:, :ncomp] = P
        Z2[:, :ncomp] = Q
    else:
        T, offset = split
        Z1[:, :ncomp] = P @ T
        Z2[:, :ncomp] = Q @ np.linalg.inv(T).T - offset
    return Z1, Z2


def _oblique_split(sq, cross, P, d):
    """Solve for the factor-splitting transform T and the centroid offset.

    The column-centered squared dissimilarities satisfy, per subject k,
    ``P_k G P_k' + 2 P_k t + const = a_k`` with G = T T' and t = T g; both
    follow from one least-squares solve. Returns None when the estimated
    Gram matrix is not positive definite (no usable metric split).
    """
    colc = sq - sq.mean(axis=0, keepdims=True)
    a = (colc + 2.0 * cross).mean(axis=1)
    rows = []
    for p in P:
        quad = [p[i] * p[j] * (1.0 if i == j else 2.0)
                for i in range(d) for j in range(i, d)]
        rows.append(quad + list(2.0 * p) + [1.0])
    coef, *_ = np.linalg.lstsq(np.asarray(rows), a, rcond=None)
    G = np.zeros((d, d))
    idx = 0
    for i in range(d):
        for j in range(i, d):
            G[i, j] = G[j, i] = coef[idx]
            idx += 1
    t = coef[idx : idx + d]
    evals, evecs = np.linalg.eigh(G)
    if np.any(evals <= 1e-12 * max(1.0, evals.max(initial=0.0))):
        return None
    T = evecs @ np.diag(np.sqrt(evals)) @ evecs.T
    return T, np.linalg.solve(T, t)


def _random_start(delta: np.ndarray, dim: int, seed: int, start: int):
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(start,)))
    half = math.sqrt(float((delta.astype(float) ** 2).mean())) / 2.0
    K, M = delta.shape
    Z1 = rng.uniform(-half, half, size=(K, dim))
    Z2 = rng.uniform(-half, half, size=(M, dim))
    return Z1, Z2


def _transform_breakpoints(delta, dhat, w) -> tuple:
    """Per-row (rank level -> disparity) step-function breakpoints."""
    rows = []
    for k in range(delta.shape[0]):
        levels = np.unique(delta[k])
        pairs = []
        for lev in levels:
            mask = delta[k] == lev
            wk = w[k][mask]
            dk = dhat[k][mask]
            rep = float(dk.mean()) if wk.sum() == 0 else float((wk * dk).sum() / wk.sum())
            pairs.append((float(lev), rep))
        rows.append(tuple(pairs))
    return tuple(rows)


def _fit_single(delta: np.ndarray, w: np.ndarray, options: UnfoldOptions, start: int):
    if start == 0:
        Z1, Z2 = _classical_start(delta, options.dim)
    else:
        Z1, Z2 = _random_start(delta, options.dim, options.seed, start)

    # Rows with fully tied ranks carry no order information; they are
    # exempt from the per-row collapse penalty.
    free_mask = np.all(delta == delta[:, :1], axis=1)

    identity = options.transform == IDENTITY
    rowtf = None if identity else _RowTransform(delta, w, options.tie_rule)
    identity_dhat = _normalize(delta.astype(float).copy(), w) if identity else None

    vpinv = _weight_pseudoinverse(w)
    d = euclidean_distances(Z1, Z2)
    dhat = None
    sp = math.inf
    history = []
    converged = False
    iterations = 0

    for iterations in range(1, options.max_iter + 1):
        # (a) disparity update, kept only if it does not raise the objective
        if identity:
            candidate = identity_dhat
        else:
            candidate = _normalize(rowtf.regress(d), w)
        if dhat is None:
            dhat = candidate
            if not np.isfinite(_objective(dhat, d, w, options, free_mask)):
                # Some rows pooled flat; fall back to the raw dissimilarities.
                dhat = _normalize(delta.astype(float).copy(), w)
        elif candidate is not dhat:
            # Accept the regression candidate only if it lowers the
            # penalized objective; otherwise back off toward the previous
            # disparities (the monotone cone is convex, so blends stay
            # feasible). Exhausting the backoff keeps the previous ones.
            current = _objective(dhat, d, w, options, free_mask)
            cand = candidate
            for _ in range(10):
                if _objective(cand, d, w, options, free_mask) <= current + 1e-14:
                    dhat = cand
                    break
                cand = _normalize(0.5 * (cand + dhat), w)

        # (b) coordinate update: plain majorization step, or its relaxed
        # (doubled) variant when that lowers the stress further; keep the
        # configuration when neither improves (floored-ratio edge case).
        rs_old = raw_stress(dhat, d, w)
        Z1g, Z2g = _guttman(Z1, Z2, dhat, w, vpinv)
        dg = euclidean_distances(Z1g, Z2g)
        rs_g = raw_stress(dhat, dg, w)
        Z1r, Z2r = 2.0 * Z1g - Z1, 2.0 * Z2g - Z2
        dr = euclidean_distances(Z1r, Z2r)
        rs_r = raw_stress(dhat, dr, w)
        if rs_r < rs_g and rs_r <= rs_old + 1e-12:
            Z1, Z2, d = Z1r, Z2r, dr
        elif rs_g <= rs_old + 1e-12:
            Z1, Z2, d = Z1g, Z2g, dg

        sp_new = _objective(dhat, d, w, options, free_mask)
        history.append(sp_new)
        if np.isfinite(sp) and (sp - sp_new) < options.eps * max(sp, 1e-30):
            sp = min(sp, sp_new)
            converged = True
            break
        sp = sp_new
        if sp == 0.0:
            converged = True
            break

    return {
        "Z1": Z1,
        "Z2": Z2,
        "dhat": dhat,
        "d": d,
        "sp": sp,
        "history": tuple(history),
        "iterations": iterations,
        "converged": converged,
    }


def fit(delta, options: UnfoldOptions | None = None) -> UnfoldingSolution:
    """Fit the unfolding model to a K x M table of ranks.

    Ranks are used directly as dissimilarities (small rank = preferred =
    small distance). Start 0 is a deterministic algebraic configuration;
    further starts are seeded uniform draws. The solution with the lowest
    penalized stress wins, ties broken by start index.
    """
    options = options or UnfoldOptions()
    delta = np.asarray(delta, dtype=float)
    if delta.ndim != 2 or delta.shape[0] < 2 or delta.shape[1] < 2:
        raise ValueError("need a K x M table with K >= 2 and M >= 2")
    K, M = delta.shape
    if options.dim > M:
        raise ValueError("dim must not exceed the number of ranked objects")
    if np.any(delta < 0):
        raise ValueError("dissimilarities must be nonnegative")
    if np.all(delta == delta.flat[0]):
        raise DegenerateDisparitiesError("all dissimilarities are equal")

    if options.weights is None:
        w = np.ones_like(delta)
    else:
        w = np.asarray(options.weights, dtype=float)
        if w.shape != delta.shape:
            raise ValueError("weights must be K x M")
        if np.any(w < 0):
            raise ValueError("weights must be nonnegative")

    best = None
    for start in range(options.n_starts):
        result = _fit_single(delta, w, options, start)
        if best is None or result["sp"] < best["sp"]:
            best = result

    return UnfoldingSolution(
        Z1=best["Z1"],
        Z2=best["Z2"],
        disparities=best["dhat"],
        distances=best["d"],
        stress_penalized=float(best["sp"]),
        stress_raw=raw_stress(best["dhat"], best["d"], w),
        transform=_transform_breakpoints(delta, best["dhat"], w),
        iterations=best["iterations"],
        converged=best["converged"],
        stress_history=best["history"],
    )
