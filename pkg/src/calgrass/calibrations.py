"""Comass, contact sets, free subspaces and critical points of calibration forms.

Everything here optimizes ``v -> <v, phi>`` over the oriented Grassmannian,
working on batches of orthonormal frames so that all starts of a multistart
run advance together.

Hessians are taken in the graph chart ``X -> span(F + F_perp X)`` around a
frame ``F``.  The metric of the Grassmannian is stationary to first order at
``X = 0`` in this chart, so the chart Hessian there is the Riemannian Hessian.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exterior import (
    MultiVector,
    associative_form,
    coassociative_form,
    im_sl_form,
    kaehler_form,
    kaehler_power,
    sl_form,
)
from .grassmannian import (
    OrientedFrame,
    SubspaceGrassmannian,
    orthogonal_complement,
    orthonormalize,
    random_frames,
    random_subspace,
)

_EPS = np.finfo(float).eps
_LETTERS = "abcdefgh"


class InconclusiveError(RuntimeError):
    """Raised when numerical evidence does not support a definite answer."""


@dataclass(frozen=True)
class CalibrationSpec:
    name: str
    n: int
    k: int
    form: MultiVector
    claimed_comass: float = 1.0

    def __post_init__(self):
        if self.form.n != self.n or self.form.k != self.k:
            raise ValueError(
                f"{self.name}: form lives in Lambda^{self.form.k} R^{self.form.n}, "
                f"expected Lambda^{self.k} R^{self.n}"
            )


def builtin_calibrations() -> dict[str, CalibrationSpec]:
    return {
        "sl2": CalibrationSpec("sl2", 4, 2, sl_form(2)),
        "sl3": CalibrationSpec("sl3", 6, 3, sl_form(3)),
        "sl4": CalibrationSpec("sl4", 8, 4, sl_form(4)),
        "kaehler4": CalibrationSpec("kaehler4", 4, 2, kaehler_form(2)),
        "kaehler6": CalibrationSpec("kaehler6", 6, 2, kaehler_form(3)),
        "kaehler6_2": CalibrationSpec("kaehler6_2", 6, 4, kaehler_power(3, 2)),
        "assoc7": CalibrationSpec("assoc7", 7, 3, associative_form()),
        "coassoc7": CalibrationSpec("coassoc7", 7, 4, coassociative_form()),
    }


def get_calibration(name: str) -> CalibrationSpec:
    cals = builtin_calibrations()
    try:
        return cals[name]
    except KeyError:
        raise KeyError(f"unknown calibration {name!r}; valid: {', '.join(sorted(cals))}") from None


# -- batched evaluation ----------------------------------------------------

class FormEvaluator:
    """Values and gradients of a k-form on (batches of) n-by-k matrices.

    The form is held as a dense antisymmetric tensor; for non-orthonormal
    inputs the value is the multilinear extension ``phi(y_1, ..., y_k)``.
    """

    def __init__(self, form):
        if isinstance(form, MultiVector):
            self.T = form.to_dense()
        else:
            self.T = np.asarray(form, dtype=float)
        self.k = self.T.ndim
        if self.k < 1:
            raise ValueError("need a form of positive degree")
        self.n = self.T.shape[0]
        letters = _LETTERS[: self.k]
        cols = ",".join("..." + c for c in letters)
        self._value_expr = f"{letters},{cols}->..."
        self._grad_exprs = []
        for j in range(self.k):
            others = ",".join("..." + c for i, c in enumerate(letters) if i != j)
            expr = f"{letters},{others}->...{letters[j]}" if others else f"{letters}->{letters}"
            self._grad_exprs.append(expr)

    def value(self, F: np.ndarray) -> np.ndarray:
        cols = [F[..., :, j] for j in range(self.k)]
        return np.einsum(self._value_expr, self.T, *cols, optimize=True)

    def egrad(self, F: np.ndarray) -> np.ndarray:
        """Euclidean gradient with respect to the matrix entries."""
        out = np.empty(np.broadcast_shapes(F.shape))
        for j in range(self.k):
            others = [F[..., :, i] for i in range(self.k) if i != j]
            if others:
                out[..., :, j] = np.einsum(self._grad_exprs[j], self.T, *others, optimize=True)
            else:
                out[..., :, j] = self.T
        return out

    def value_and_rgrad(self, F: np.ndarray):
        """Value and Riemannian (horizontal) gradient at orthonormal frames."""
        G = self.egrad(F)
        # multilinear in the columns: <F, G> column-wise is k * value
        v = np.einsum("...ij,...ij->...", F, G) / self.k
        R = G - F @ (np.swapaxes(F, -1, -2) @ G)
        return v, R

    def rgrad(self, F: np.ndarray) -> np.ndarray:
        return self.value_and_rgrad(F)[1]

    def chart(self, F: np.ndarray, Fp: np.ndarray, X: np.ndarray):
        """Value and gradient of ``X -> Phi(span(F + Fp X))`` (graph chart)."""
        k = F.shape[-1]
        Y = F + Fp @ X
        M = np.eye(k) + np.swapaxes(X, -1, -2) @ X
        s = np.sqrt(np.linalg.det(M))
        f = self.value(Y) / s
        g = np.swapaxes(Fp, -1, -2) @ self.egrad(Y) / s[..., None, None]
        g = g - f[..., None, None] * (X @ np.linalg.inv(M))
        return f, g

    def hessian(self, frame, step: float = 1e-4) -> np.ndarray:
        """Riemannian Hessian at ``frame`` by central differences of the chart gradient."""
        F = frame.columns if isinstance(frame, OrientedFrame) else np.asarray(frame)
        n, k = F.shape
        Fp = orthogonal_complement(F)
        m = (n - k) * k
        if m == 0:
            return np.zeros((0, 0))
        E = np.eye(m).reshape(m, n - k, k)
        _, gp = self.chart(F, Fp, step * E)
        _, gm = self.chart(F, Fp, -step * E)
        H = ((gp - gm) / (2 * step)).reshape(m, m).T
        return 0.5 * (H + H.T)


# -- optimization ------------------------------------------------------------

@dataclass
class _AscentState:
    frames: np.ndarray
    values: np.ndarray
    grad_norms: np.ndarray
    converged: np.ndarray
    iterations: int


def _ascend(ev: FormEvaluator, F: np.ndarray, gtol: float, max_iter: int,
            c1: float = 0.25, max_step: float = 8.0) -> _AscentState:
    """Projected-gradient ascent with backtracking line search and QR retraction."""
    F = np.array(F, dtype=float)
    S = F.shape[0]
    v, G = ev.value_and_rgrad(F)
    gn = np.linalg.norm(G, axis=(-2, -1))
    t = np.full(S, 0.5)
    converged = gn <= gtol
    stalled = np.zeros(S, dtype=bool)
    it = 0
    for it in range(1, max_iter + 1):
        active = np.nonzero(~(converged | stalled))[0]
        if active.size == 0:
            it -= 1
            break
        Fa, Ga, va = F[active], G[active], v[active]
        ga = gn[active]
        ta = t[active].copy()
        pending = np.ones(active.size, dtype=bool)
        newF, newv, newG, newn = Fa.copy(), va.copy(), Ga.copy(), ga.copy()
        # once the predicted increase is below round-off the value test cannot
        # discriminate; then a step must at least shrink the gradient
        slack = 16 * _EPS * np.maximum(1.0, np.abs(va))
        for _ in range(60):
            p = np.nonzero(pending)[0]
            if p.size == 0:
                break
            trial = orthonormalize(Fa[p] + ta[p, None, None] * Ga[p])
            tv, tG = ev.value_and_rgrad(trial)
            tn = np.linalg.norm(tG, axis=(-2, -1))
            ok = (tv >= va[p] + c1 * ta[p] * ga[p] ** 2) | (
                (tv >= va[p] - slack[p]) & (tn < 0.9 * ga[p])
            )
            q = p[ok]
            newF[q], newv[q], newG[q], newn[q] = trial[ok], tv[ok], tG[ok], tn[ok]
            pending[q] = False
            ta[p[~ok]] *= 0.5
        stalled[active[pending]] = True
        F[active], v[active], G[active], gn[active] = newF, newv, newG, newn
        t[active] = np.minimum(2 * ta, max_step)
        converged |= gn <= gtol
    return _AscentState(F, v, gn, converged, it)


@dataclass
class ComassReport:
    max_value: float
    argmax: OrientedFrame
    hessian_spectrum: np.ndarray
    nullity: int
    index: int
    starts_used: int
    converged_fraction: float
    grad_norm: float
    null_tol: float
    values: np.ndarray = field(repr=False)
    inconclusive: bool = False

    @property
    def converged(self) -> bool:
        return not self.inconclusive

    @property
    def positive(self) -> int:
        return len(self.hessian_spectrum) - self.nullity - self.index

    def to_dict(self) -> dict:
        return {
            "max_value": float(self.max_value),
            "argmax": self.argmax.columns.tolist(),
            "hessian_spectrum": [float(x) for x in self.hessian_spectrum],
            "nullity": self.nullity,
            "index": self.index,
            "starts_used": self.starts_used,
            "converged_fraction": self.converged_fraction,
            "grad_norm": float(self.grad_norm),
            "inconclusive": self.inconclusive,
        }


def spectrum_counts(eigs: np.ndarray, null_tol: float) -> tuple[int, int, float]:
    """(nullity, index, threshold) with a threshold relative to the largest |eigenvalue|."""
    if eigs.size == 0:
        return 0, 0, 0.0
    scale = float(np.abs(eigs).max())
    thr = null_tol * scale
    if scale == 0.0:
        return eigs.size, 0, 0.0
    nullity = int(np.sum(np.abs(eigs) < thr))
    index = int(np.sum(eigs <= -thr))
    return nullity, index, thr


def _resolve_form(form, k):
    if isinstance(form, CalibrationSpec):
        return form.form, form.k
    if isinstance(form, str):
        cal = get_calibration(form)
        return cal.form, cal.k
    if k is not None and form.k != k:
        raise ValueError(f"form has degree {form.k}, expected {k}")
    return form, form.k


def comass(form, k: int | None = None, *, starts: int = 64, seed=0, gtol: float = 1e-9,
           max_iter: int = 2000, null_tol: float = 1e-5, hessian_step: float = 1e-4,
           initial_frames: np.ndarray | None = None) -> ComassReport:
    """Maximize ``<pluecker(v), form>`` over oriented k-planes by multistart ascent.

    The maximum over oriented planes equals the comass because reversing the
    orientation negates the value.
    """
    form, k = _resolve_form(form, k)
    ev = FormEvaluator(form)
    if initial_frames is None:
        initial_frames = random_frames(ev.n, k, starts, seed)
    state = _ascend(ev, initial_frames, gtol, max_iter)
    best = int(np.argmax(state.values))
    argmax = OrientedFrame(state.frames[best])
    H = ev.hessian(argmax, hessian_step)
    eigs = np.sort(np.linalg.eigvalsh(H)) if H.size else np.zeros(0)
    nullity, index, _ = spectrum_counts(eigs, null_tol)
    return ComassReport(
        max_value=float(state.values[best]),
        argmax=argmax,
        hessian_spectrum=eigs,
        nullity=nullity,
        index=index,
        starts_used=len(state.values),
        converged_fraction=float(state.converged.mean()),
        grad_norm=float(state.grad_norms[best]),
        null_tol=null_tol,
        values=state.values,
        inconclusive=not state.converged.any(),
    )


def contact_nullity(form, report: ComassReport, straddle: float = 10.0) -> int:
    """Local dimension of the face at the maximizer: nullity of the Hessian.

    Raises :class:`InconclusiveError` if the ascent did not converge or some
    eigenvalue sits within a factor ``straddle`` of the null threshold.
    """
    if report.inconclusive:
        raise InconclusiveError("comass optimization did not converge")
    eigs = report.hessian_spectrum
    nullity, _, thr = spectrum_counts(eigs, report.null_tol)
    if thr > 0:
        near = np.abs(eigs)
        if np.any((near > thr / straddle) & (near < thr * straddle)):
            raise InconclusiveError(
                f"Hessian eigenvalues straddle the null threshold {thr:.2e}: {eigs}"
            )
    return nullity


def is_sl_plane(frame: OrientedFrame, tol: float = 1e-8) -> bool:
    """True iff the oriented n-plane in R^{2n} is special Lagrangian.

    Tested as ``omega|_L = 0``, ``Im(Omega)|_L = 0`` and ``Re(Omega)(L) > 0``.
    """
    N, k = frame.n, frame.k
    if N % 2 or 2 * k != N:
        raise ValueError(f"need an n-plane in R^(2n), got k={k} in R^{N}")
    F = frame.columns
    omega = kaehler_form(k)
    for i in range(k):
        for j in range(i + 1, k):
            if abs(omega.evaluate(F[:, [i, j]])) >= tol:
                return False
    if abs(im_sl_form(k).evaluate(F)) >= tol:
        return False
    return sl_form(k).evaluate(F) > 0


def is_calibrated(frame: OrientedFrame, form: MultiVector, tol: float = 1e-6) -> bool:
    """``|form(frame)| >= 1 - tol`` (calibrated for one of the two orientations)."""
    return abs(form.evaluate(frame.columns)) >= 1 - tol


# -- free subspaces ----------------------------------------------------------

@dataclass
class FreeSubspaceCertificate:
    W: np.ndarray
    restricted_max: float
    verdict: str  # "free" | "not_free" | "inconclusive"
    witness: OrientedFrame | None
    starts_used: int

    def to_dict(self) -> dict:
        return {
            "dim": int(self.W.shape[1]),
            "restricted_max": float(self.restricted_max),
            "verdict": self.verdict,
            "starts_used": self.starts_used,
        }


def is_free_subspace(W, cal: CalibrationSpec, *, starts: int = 24, batch: int = 8, seed=0,
                     margin: float = 1e-3, tol: float = 1e-6, gtol: float = 1e-9,
                     max_iter: int = 2000) -> FreeSubspaceCertificate:
    """Decide whether span(W) contains a plane calibrated by ``cal``.

    The form is pulled back to the subspace and maximized there.  Starts are
    run in batches and the search stops at the first calibrated plane.
    """
    W = np.asarray(W, dtype=float)
    sub = SubspaceGrassmannian(W, cal.k)
    restricted = cal.form.pullback(W)
    ev = FormEvaluator(restricted)
    rng = np.random.default_rng(seed)
    best_value, best_frame, used, any_converged = -np.inf, None, 0, False
    while used < starts:
        size = min(batch, starts - used)
        state = _ascend(ev, random_frames(sub.d, cal.k, size, rng), gtol, max_iter)
        used += size
        any_converged |= bool(state.converged.any())
        i = int(np.argmax(state.values))
        if state.values[i] > best_value:
            best_value, best_frame = float(state.values[i]), state.frames[i]
        if best_value >= cal.claimed_comass - tol:
            witness = sub.embed(best_frame)
            return FreeSubspaceCertificate(W, best_value, "not_free", witness, used)
    if best_value < cal.claimed_comass - margin and any_converged:
        verdict = "free"
    else:
        verdict = "inconclusive"
    return FreeSubspaceCertificate(W, best_value, verdict, None, used)


@dataclass
class FreeDimensionReport:
    calibration: str
    value: int | None
    low: int
    high: int
    trials: int
    free_example: FreeSubspaceCertificate | None
    witnesses: list[FreeSubspaceCertificate]
    log: list[dict]

    @property
    def not_free_count(self) -> int:
        return sum(c.verdict == "not_free" for c in self.witnesses)

    def to_dict(self) -> dict:
        return {
            "calibration": self.calibration,
            "free_dimension": self.value,
            "range": [self.low, self.high],
            "trials": self.trials,
            "not_free_witnesses": self.not_free_count,
            "free_example_max": None if self.free_example is None
            else float(self.free_example.restricted_max),
            "log": self.log,
        }


def free_dimension(cal: CalibrationSpec, trials: int = 50, *, seed=0, **opts) -> FreeDimensionReport:
    """Largest dimension of a subspace free of ``cal``-planes, by sampling.

    Subspaces of dimension below the degree are free trivially.  From there
    the search moves up one dimension at a time: as soon as a sampled
    (d+1)-subspace is certified free it continues with d+1; if all ``trials``
    sampled (d+1)-subspaces are certified not free it stops at d.
    """
    rng = np.random.default_rng(seed)
    d = cal.k - 1
    free_example = None
    log = []
    while d + 1 <= cal.n:
        certs = []
        for _ in range(trials):
            W = random_subspace(cal.n, d + 1, rng)
            cert = is_free_subspace(W, cal, seed=rng, **opts)
            certs.append(cert)
            if cert.verdict == "free":
                break
        verdicts = [c.verdict for c in certs]
        log.append({
            "dim": d + 1,
            "sampled": len(certs),
            "free": verdicts.count("free"),
            "not_free": verdicts.count("not_free"),
            "inconclusive": verdicts.count("inconclusive"),
        })
        if certs[-1].verdict == "free":
            free_example = certs[-1]
            d += 1
            continue
        if "inconclusive" in verdicts:
            return FreeDimensionReport(cal.name, None, d, d + 1, trials, free_example, certs, log)
        return FreeDimensionReport(cal.name, d, d, d, trials, free_example, certs, log)
    return FreeDimensionReport(cal.name, cal.n, cal.n, cal.n, trials, free_example, [], log)


# -- Morse scan --------------------------------------------------------------

@dataclass
class CriticalPoint:
    value: float
    index: int
    nullity: int
    grad_norm: float
    frame: OrientedFrame = field(repr=False)


@dataclass
class MorseScanReport:
    critical_points: list[CriticalPoint]
    unresolved: list[dict]
    spurious: int
    starts: int
    level_set_dimension: int
    level_set_point: OrientedFrame | None = field(repr=False, default=None)

    def classes(self, decimals: int = 6) -> list[dict]:
        table: dict[tuple, int] = {}
        for cp in self.critical_points:
            key = (round(cp.value, decimals) + 0.0, cp.index, cp.nullity)
            table[key] = table.get(key, 0) + 1
        return [
            {"value": v, "index": i, "nullity": z, "count": c}
            for (v, i, z), c in sorted(table.items(), reverse=True)
        ]

    def to_dict(self) -> dict:
        return {
            "classes": self.classes(),
            "unresolved": self.unresolved,
            "spurious": self.spurious,
            "starts": self.starts,
            "level_set_zero_dimension": self.level_set_dimension,
        }


def _grad_norm_descent(ev: FormEvaluator, F: np.ndarray, crit_tol: float, max_iter: int,
                       fd_step: float = 1e-5, c1: float = 1e-4):
    """Minimize ``||grad Phi||^2 / 2`` using finite-difference Hessian-vector products."""
    F = np.array(F, dtype=float)
    S, n, k = F.shape
    _, G = ev.value_and_rgrad(F)
    gn = np.linalg.norm(G, axis=(-2, -1))
    t = np.ones(S)
    done = gn <= crit_tol
    stalled = np.zeros(S, dtype=bool)
    for _ in range(max_iter):
        act = np.nonzero(~(done | stalled))[0]
        if act.size == 0:
            break
        Fa = F[act]
        Fp = orthogonal_complement(Fa)
        c = np.swapaxes(Fp, -1, -2) @ G[act]
        cn = np.linalg.norm(c, axis=(-2, -1))
        V = c / cn[:, None, None]
        _, gp = ev.chart(Fa, Fp, fd_step * V)
        _, gm = ev.chart(Fa, Fp, -fd_step * V)
        Hc = (gp - gm) / (2 * fd_step) * cn[:, None, None]
        h2 = np.sum(Hc ** 2, axis=(-2, -1))
        old = 0.5 * cn ** 2
        ta = t[act].copy()
        pending = np.ones(act.size, dtype=bool)
        newF, newG, newn = Fa.copy(), G[act].copy(), gn[act].copy()
        for _ in range(50):
            p = np.nonzero(pending)[0]
            if p.size == 0:
                break
            trial = orthonormalize(Fa[p] - Fp[p] @ (ta[p, None, None] * Hc[p]))
            _, tg = ev.value_and_rgrad(trial)
            tn = np.linalg.norm(tg, axis=(-2, -1))
            ok = 0.5 * tn ** 2 <= old[p] - c1 * ta[p] * h2[p] + 16 * _EPS
            newF[p[ok]], newG[p[ok]], newn[p[ok]] = trial[ok], tg[ok], tn[ok]
            pending[p[ok]] = False
            ta[p[~ok]] *= 0.5
        stalled[act[pending]] = True
        F[act], G[act], gn[act] = newF, newG, newn
        t[act] = np.minimum(2 * ta, 16.0)
        done |= gn <= crit_tol
    return F, gn


def _level_set_probe(ev: FormEvaluator, rng, level: float = 0.0, tol: float = 1e-13):
    """Newton-project a random frame onto ``Phi = level``; return (frame, dimension)."""
    F = random_frames(ev.n, ev.k, 1, rng)[0]
    for _ in range(100):
        v, G = ev.value_and_rgrad(F)
        if abs(v - level) < tol:
            break
        F = orthonormalize(F - (v - level) * G / np.sum(G * G))
    frame = OrientedFrame(F)
    Fp = orthogonal_complement(F)
    jac = (Fp.T @ ev.rgrad(F)).reshape(1, -1)
    sv = np.linalg.svd(jac, compute_uv=False)
    rank = int(np.sum(sv > 1e-8))
    return frame, jac.shape[1] - rank


def morse_scan(cal: CalibrationSpec | None = None, *, starts: int = 32, seed=0,
               crit_tol: float = 1e-7, newton_tol: float = 1e-3, max_iter: int = 3000,
               null_tol: float = 1e-5, hessian_step: float = 1e-4) -> MorseScanReport:
    """Locate and classify critical points of ``Phi(v) = <v, phi>``.

    Critical points are found by minimizing ``||grad Phi||^2`` from random
    starts.  Endpoints whose gradient is not below ``crit_tol`` are kept as
    unresolved when a Newton step predicts a critical point within
    ``newton_tol`` and dropped as spurious otherwise.
    """
    if cal is None:
        cal = get_calibration("sl3")
    ev = FormEvaluator(cal.form)
    rng = np.random.default_rng(seed)
    F0 = random_frames(cal.n, cal.k, starts, rng)
    F, gn = _grad_norm_descent(ev, F0, crit_tol, max_iter)
    crit, unresolved, spurious = [], [], 0
    for frame_arr, g in zip(F, gn):
        frame = OrientedFrame(frame_arr)
        H = ev.hessian(frame, hessian_step)
        eigs = np.linalg.eigvalsh(H)
        value = float(ev.value(frame_arr))
        if g <= crit_tol:
            nullity, index, _ = spectrum_counts(eigs, null_tol)
            crit.append(CriticalPoint(value, index, nullity, float(g), frame))
            continue
        Fp = orthogonal_complement(frame_arr)
        c = (Fp.T @ ev.rgrad(frame_arr)).reshape(-1)
        step = np.linalg.lstsq(H, c, rcond=1e-6)[0]
        if np.linalg.norm(step) < newton_tol:
            unresolved.append({"value": value, "grad_norm": float(g),
                               "newton_step": float(np.linalg.norm(step))})
        else:
            spurious += 1
    level_frame, level_dim = _level_set_probe(ev, rng)
    return MorseScanReport(crit, unresolved, spurious, starts, level_dim, level_frame)


def unitary_rotation(n: int, seed=None) -> np.ndarray:
    """A random element of U(n) acting on R^{2n} (commutes with J)."""
    rng = np.random.default_rng(seed)
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    Q, R = np.linalg.qr(Z)
    Q = Q * (np.diag(R) / np.abs(np.diag(R)))
    M = np.zeros((2 * n, 2 * n))
    # z_j = x_{2j-1} + i x_{2j}: a + ib acts as [[a, -b], [b, a]] on each pair
    M[0::2, 0::2] = Q.real
    M[0::2, 1::2] = -Q.imag
    M[1::2, 0::2] = Q.imag
    M[1::2, 1::2] = Q.real
    return M


def complex_structure(n: int) -> np.ndarray:
    """J on R^{2n} with ``J e_{2j-1} = e_{2j}``."""
    J = np.zeros((2 * n, 2 * n))
    for j in range(n):
        J[2 * j + 1, 2 * j] = 1.0
        J[2 * j, 2 * j + 1] = -1.0
    return J


def local_face_dimension(form, report: ComassReport, samples: int = 24, radius: float = 1e-2,
                         seed=0, rel_tol: float = 0.1) -> int:
    """Brute-force estimate of the face dimension near ``report.argmax``.

    Perturbs the maximizer, re-optimizes, and counts principal components of
    the resulting maximizers in the graph chart.  Independent of the Hessian.
    """
    form, k = _resolve_form(form, None)
    ev = FormEvaluator(form)
    F = report.argmax.columns
    Fp = orthogonal_complement(F)
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((samples,) + (Fp.shape[1], k))
    X *= radius / np.linalg.norm(X, axis=(-2, -1))[:, None, None]
    starts = orthonormalize(F + Fp @ X)
    state = _ascend(ev, starts, 1e-10, 4000)
    pts = []
    for G in state.frames[state.values > report.max_value - 1e-8]:
        # graph-chart coordinates of span(G) around F
        pts.append((Fp.T @ G @ np.linalg.inv(F.T @ G)).reshape(-1))
    pts = np.array(pts)
    pts -= pts.mean(axis=0)
    sv = np.linalg.svd(pts, compute_uv=False)
    return int(np.sum(sv > rel_tol * sv[0]))
