"""Energy descent, eigenpair search, and the mountain-pass saddle.

All solvers work on the total energy

    total_energy(u) = seminorm_energy(u) - h * sum_i F(i, u_i)

whose exact gradient is apply_operator(u) - h * f(., u).  minimize is
plain gradient descent with Armijo backtracking; trial steps start
from a Barzilai-Borwein estimate built from the last accepted move.
find_saddle runs a mountain-pass search on the capped energy between
the zero function and a known minimizer: the maximal-energy point of a
piecewise-linear path is pushed downhill, with the path redistributed
at fixed arclength fractions, until progress stalls at the path
resolution; the maximal point then climbs to the saddle by reflecting
the gradient across the locally most-unstable directions and a damped
Newton polish finishes the degenerate modes.  Every stage consumes
gradient evaluations only; curvature is always estimated from
gradient differences.
"""

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .core import GridFunction, MeshMismatchError, ParameterError, odd_power
from .kernel import (apply_operator, seminorm_energy,
                     seminorm_energy_and_operator)
from .reaction import ReactionModel, F_values, f_values, sign_threshold_delta


class SolverError(RuntimeError):
    """Raised when a solver cannot produce a trustworthy result."""


class SaddleNotFound(SolverError):
    """Raised when the mountain-pass path collapses onto an endpoint."""


@dataclass(frozen=True)
class SolverOptions:
    """Knobs shared by the descent-based solvers."""

    tol: float = 1e-9
    max_iter: int = 50_000
    armijo: float = 1e-4
    backtrack: float = 0.5
    step_min: float = 1e-8
    step_max: float = 1e2
    zero_tol: float = 1e-6
    starts: int = 10
    path_points: int = 41
    damping: float = 0.2
    width: float = 0.05


@dataclass
class SolveReport:
    """Outcome of one energy descent (or saddle search)."""

    solution: GridFunction
    energy: float
    residual: float
    iterations: int
    converged: bool
    classification: str


@dataclass
class EigenResult:
    value: float
    eigenfunction: GridFunction
    residual: float
    iterations: int
    converged: bool


@dataclass
class MountainPassPath:
    points: np.ndarray      # (P, n) path in state space, endpoints fixed
    energies: np.ndarray    # (P,)
    max_index: int


def _check_compat(kern, params):
    sigma = params.p * params.s
    if abs(kern.sigma - sigma) > 1e-9 * max(1.0, sigma):
        raise MeshMismatchError(
            "kernel of order %g used with parameters of order p*s=%g"
            % (kern.sigma, sigma))


def total_energy(kern, model, u):
    """Seminorm energy minus the integrated reaction primitive."""
    S = seminorm_energy(kern, u, model.params.p)
    return S - kern.mesh.h * float(np.sum(F_values(model, u)))


def total_gradient(kern, model, u):
    """Exact gradient of total_energy at u."""
    A = apply_operator(kern, u, model.params.p)
    return A - kern.mesh.h * f_values(model, u)


def _energy_and_gradient(kern, model, u):
    S, A = seminorm_energy_and_operator(kern, u, model.params.p)
    h = kern.mesh.h
    E = S - h * float(np.sum(F_values(model, u)))
    g = A - h * f_values(model, u)
    return E, g


def _batch_energy(kern, model, Z):
    """total_energy for every row of Z at once."""
    p = model.params.p
    D = np.abs(Z[:, :, None] - Z[:, None, :])
    pair = np.einsum("kij,ij->k", D ** p, kern.K)
    tail = 2.0 * (np.abs(Z) ** p) @ kern.T
    S = (pair + tail) / p
    return S - kern.mesh.h * np.sum(F_values(model, Z), axis=1)


def _sup(x):
    return float(np.max(np.abs(x)))


def _clip_box(w, top):
    return np.minimum(np.maximum(w, 0.0), top)


def minimize(kern, model, u0, opts=None):
    """Armijo-backtracking gradient descent on the total energy.

    Stops when the gradient sup-norm falls below tol * max(1, |E|) or
    after max_iter accepted steps.  For the plain reaction the negative
    part of the result is removed and descent resumed, which never
    increases the energy; exact critical points are nonnegative anyway.
    """
    opts = opts or SolverOptions()
    _check_compat(kern, model.params)
    # Inside the box max(u) < delta the reaction primitive is <= 0, so
    # the energy is >= 0 there while energy(0) = 0, and pairing the
    # operator with u+ shows zero is the only critical point in the
    # box: descent that enters it can be finished at zero exactly.
    delta = None
    if model.variant == "plain" and model.params.lam > 0.0:
        delta = sign_threshold_delta(model.params)
    u = np.array(u0, dtype=float)
    E, g = _energy_and_gradient(kern, model, u)
    step = 1.0 / max(1.0, _sup(g))
    du = dg = None
    iterations = 0
    stalled = 0
    for _round in range(4):
        while iterations < opts.max_iter:
            if delta is not None and float(np.max(u)) < delta:
                u = np.zeros_like(u)
                E = 0.0
                g = np.zeros_like(g)
                iterations += 1
                break
            if _sup(g) <= opts.tol * max(1.0, abs(E)):
                break
            if du is not None:
                sy = float(du @ dg)
                if sy > 0.0:
                    step = float(du @ du) / sy
            step = min(max(step, opts.step_min), opts.step_max)
            gg = float(g @ g)
            accepted = False
            while step > 1e-20:
                u_new = u - step * g
                E_new = total_energy(kern, model, u_new)
                if E_new <= E - opts.armijo * step * gg:
                    accepted = True
                    break
                step *= opts.backtrack
            if not accepted:
                break       # no representable decrease left
            # decreases below one ulp of the energy carry no signal;
            # a run of them means the floor of float resolution
            if E - E_new <= 4e-16 * max(1.0, abs(E)):
                stalled += 1
                if stalled >= 25:
                    u, E = u_new, E_new
                    g = total_gradient(kern, model, u)
                    iterations += 1
                    break
            else:
                stalled = 0
            E_new, g_new = _energy_and_gradient(kern, model, u_new)
            du, dg = u_new - u, g_new - g
            u, E, g = u_new, E_new, g_new
            iterations += 1
        if model.variant == "plain" and float(np.min(u)) < 0.0:
            u = np.maximum(u, 0.0)
            E, g = _energy_and_gradient(kern, model, u)
            du = dg = None
            continue
        break
    residual = _sup(g)
    converged = residual <= opts.tol * max(1.0, abs(E))
    cls = "zero" if _sup(u) <= opts.zero_tol else "minimizer"
    return SolveReport(solution=GridFunction(u, kern.mesh), energy=float(E),
                       residual=residual, iterations=iterations,
                       converged=converged, classification=cls)


def default_starts(mesh, params, count, seed):
    """Randomized positive starting profiles, amplitudes spread around
    the sign-threshold scale so at least one lands in a nontrivial
    basin whenever there is one."""
    rng = np.random.default_rng(seed)
    base = (mesh.dist / np.max(mesh.dist)) ** params.s
    scale = sign_threshold_delta(params) if params.lam > 0.0 else 1.0
    amps = scale * np.logspace(-0.5, 2.5, count)
    starts = []
    for amp in amps:
        jitter = 1.0 + 0.2 * rng.uniform(-1.0, 1.0, mesh.n)
        starts.append(amp * base * jitter)
    return starts


def minimize_multistart(kern, model, opts=None, seed=0, threads=1,
                        stop_at_nontrivial=False):
    """Run minimize from the default randomized starts; returns all reports.

    With stop_at_nontrivial the sweep short-circuits at the first
    converged nontrivial solution (useful inside bisection predicates).
    Thread count never changes the reports, only the wall time.
    """
    opts = opts or SolverOptions()
    starts = default_starts(kern.mesh, model.params, opts.starts, seed)
    if threads > 1 and not stop_at_nontrivial:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(lambda u0: minimize(kern, model, u0, opts),
                                    starts))
        return reports
    reports = []
    for u0 in starts:
        rep = minimize(kern, model, u0, opts)
        reports.append(rep)
        if (stop_at_nontrivial and rep.converged
                and rep.classification != "zero"):
            break
    return reports


def select_solution(reports, zero_tol=1e-6):
    """Lowest-energy converged nontrivial report, else the cleanest zero."""
    nontrivial = [r for r in reports
                  if r.converged and r.solution.sup_norm > zero_tol]
    if nontrivial:
        return min(nontrivial, key=lambda r: r.energy)
    return min(reports, key=lambda r: (not r.converged, r.residual))


def solve_above(kern, params, subsol, opts=None):
    """Least solution above a nonnegative subsolution.

    Minimizes the energy with the reaction frozen below the anchor,
    which pins every critical point above the anchor.  The anchor is
    checked for the subsolution inequality first (a warning only: a
    discretized subsolution may violate it at truncation level).
    """
    opts = opts or SolverOptions()
    _check_compat(kern, params)
    subsol = np.asarray(getattr(subsol, "values", subsol), dtype=float)
    plain = ReactionModel.plain(params)
    slack = apply_operator(kern, subsol, params.p) - kern.mesh.h * f_values(plain, subsol)
    worst = float(np.max(slack))
    if worst > 1e-6 * max(1.0, _sup(subsol)):
        warnings.warn("anchor violates the subsolution inequality by %.3e" % worst)
    model = ReactionModel.floored(params, subsol)
    rep = minimize(kern, model, subsol, opts)
    u = rep.solution.values
    pin = float(np.min(u - subsol))
    if pin < -1e-6 * max(1.0, _sup(subsol)):
        raise SolverError("minimizer dropped %.3e below the anchor" % -pin)
    E = total_energy(kern, plain, u)
    res = _sup(total_gradient(kern, plain, u))
    return replace(rep, energy=float(E), residual=res,
                   converged=res <= opts.tol * max(1.0, abs(E)),
                   classification="pinned")


def principal_eigenpair(kern, p, opts=None, start=None):
    """Smallest Rayleigh quotient of the discrete operator.

    Minimizes pairing(A(u), u) / (h * sum |u_i|^p) by projected descent:
    after each step the iterate is replaced by its absolute value
    (which never increases the quotient) and renormalized.  Returns the
    eigenvalue, a nonnegative eigenfunction with h*sum|u|^p = 1, and
    the sup-norm of the eigen-equation residual.
    """
    opts = opts or SolverOptions()
    h = kern.mesh.h
    n = kern.n
    s_eff = kern.sigma / p

    def normalized(v):
        nv = (h * float(np.sum(np.abs(v) ** p))) ** (1.0 / p)
        if nv == 0.0:
            raise SolverError("eigen iteration degenerated to zero")
        return v / nv

    if start is None:
        u = (kern.mesh.dist / np.max(kern.mesh.dist)) ** s_eff
    else:
        u = np.asarray(getattr(start, "values", start), dtype=float)
    u = normalized(np.abs(u))
    Au = apply_operator(kern, u, p)
    R = float(np.dot(Au, u))
    step = 1.0
    du = dg = None
    iterations = 0
    residual = np.inf
    while iterations < opts.max_iter:
        rvec = Au - R * h * odd_power(u, p)
        residual = _sup(rvec)
        if residual <= opts.tol * max(1.0, R):
            break
        grad = p * rvec
        if du is not None:
            sy = float(du @ dg)
            if sy > 0.0:
                step = float(du @ du) / sy
        step = min(max(step, opts.step_min), opts.step_max)
        gg = float(grad @ grad)
        accepted = False
        while step > 1e-20:
            v = normalized(np.abs(u - step * grad))
            Av = apply_operator(kern, v, p)
            R_try = float(np.dot(Av, v))
            if R_try <= R - opts.armijo * step * gg:
                accepted = True
                break
            step *= opts.backtrack
        if not accepted:
            break
        grad_new = p * (Av - R_try * h * odd_power(v, p))
        du, dg = v - u, grad_new - grad
        u, Au, R = v, Av, R_try
        iterations += 1
    converged = residual <= opts.tol * max(1.0, R)
    return EigenResult(value=float(R), eigenfunction=GridFunction(u, kern.mesh),
                       residual=float(residual), iterations=iterations,
                       converged=converged)


def _reequispace(Z, keep=None, frac=None):
    """Redistribute path points at fixed arclength fractions.

    frac gives the target cumulative-arclength fraction of every point
    (uniform when omitted); keeping it non-uniform preserves a
    resolution bias along the path across redistributions.  With
    keep=m the point m stays put and the two halves are redistributed
    separately (used while an interior point climbs).
    """
    if frac is None:
        frac = np.linspace(0.0, 1.0, Z.shape[0])
    if keep is not None:
        fl = frac[:keep + 1] / frac[keep]
        fr = (frac[keep:] - frac[keep]) / (frac[-1] - frac[keep])
        left = _reequispace(Z[:keep + 1], frac=fl)
        right = _reequispace(Z[keep:], frac=fr)
        return np.vstack([left, right[1:]])
    seg = np.linalg.norm(np.diff(Z, axis=0), axis=1)
    total = float(np.sum(seg))
    if total <= 0.0:
        raise SaddleNotFound("mountain-pass path has zero length")
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    targets = total * frac
    idx = np.clip(np.searchsorted(cum, targets[1:-1], side="right") - 1,
                  0, len(seg) - 1)
    t = (targets[1:-1] - cum[idx]) / np.where(seg[idx] > 0.0, seg[idx], 1.0)
    out = np.empty_like(Z)
    out[0] = Z[0]
    out[-1] = Z[-1]
    out[1:-1] = Z[idx] + t[:, None] * (Z[idx + 1] - Z[idx])
    return out


def find_saddle(kern, params, u_big, opts=None, seed=0, return_path=False):
    """Mountain-pass critical point between 0 and a known minimizer.

    Works on the energy with the reaction capped above u_big, for which
    both endpoints are local minimizers (probed before starting).  The
    returned point satisfies 0 <= v <= u_big up to solver tolerance and
    its residual is reported for the uncapped reaction, which coincides
    with the capped one on that range.
    """
    opts = opts or SolverOptions()
    _check_compat(kern, params)
    u_big = np.asarray(getattr(u_big, "values", u_big), dtype=float)
    if _sup(u_big) <= opts.zero_tol:
        raise SaddleNotFound("ceiling solution is numerically zero")
    model = ReactionModel.capped(params, u_big)
    plain = ReactionModel.plain(params)
    P = int(opts.path_points)
    if P < 5:
        raise ParameterError("path needs at least 5 points, got %d" % P)

    _probe_local_min(kern, model, np.zeros_like(u_big), params, seed)
    _probe_local_min(kern, model, u_big, params, seed + 1)

    # quadratic spacing: the barrier hugs the zero endpoint once the
    # minimizer towers over the saddle, and a uniform path would bury
    # it inside the first segment
    frac = np.linspace(0.0, 1.0, P) ** 2
    Z = frac[:, None] * u_big[None, :]
    energies = _batch_energy(kern, model, Z)
    end_energy = max(energies[0], energies[-1])
    step = None
    climb_step = None
    best_residual = np.inf
    stall = 0
    polish_left = 3
    iterations = 0
    phase = "descent"
    tau = None
    v_prev = g_prev = None
    prev_m = None
    m = 1 + int(np.argmax(energies[1:-1]))
    while iterations < opts.max_iter:
        iterations += 1
        if phase == "descent":
            # once the climb starts the index is frozen: the climber
            # walks freely and re-picking the argmax point after each
            # redistribution would discard its direction history
            m = 1 + int(np.argmax(energies[1:-1]))
        if m != prev_m:
            tau = None          # climbing point changed, direction stale
        prev_m = m
        E_m, g = _energy_and_gradient(kern, model, Z[m])
        residual = _sup(g)
        scale = max(1.0, abs(E_m))
        if residual <= opts.tol * scale:
            break
        if residual < 0.95 * best_residual:
            best_residual = residual
            stall = 0
        else:
            stall += 1
        # descend while the best residual keeps improving; switch once
        # it stalls at the path resolution, avoiding moments when the
        # residual spikes from a redistribution
        if phase == "descent" and ((stall >= 15 and residual <= 2.0 * best_residual)
                                   or stall > 80):
            phase = "climb"
            climb_step = None
            stall = 0
        elif phase == "climb" and stall > 120:
            break
        if phase == "descent":
            if step is None:
                step = 1.0 / max(1.0, residual)
            step = min(step * 2.0, opts.step_max)
            gg = float(g @ g)
            # projected step: boundary nodes overshoot below zero
            # otherwise, and redistribution then smears the violation
            # along the whole path
            while step > 1e-20:
                trial = _clip_box(Z[m] - opts.damping * step * g, u_big)
                E_try = total_energy(kern, model, trial)
                if E_try <= E_m - opts.armijo * opts.damping * step * gg:
                    break
                step *= opts.backtrack
            Z[m] = trial
            Z = _reequispace(Z, frac=frac)
            energies = _batch_energy(kern, model, Z)
        else:
            if tau is None:
                tau = Z[m + 1] - Z[m - 1]
                tau = tau / max(np.linalg.norm(tau), 1e-300)
                v_prev = g_prev = None
            tau, ray0 = _refine_downhill_direction(kern, model, Z[m], tau)
            modes = [tau]
            # the leftover gradient may sit in a second, weakly
            # negative mode invisible to tau; test it and reflect it
            # too while its curvature is genuinely downhill
            rest = g - float(g @ tau) * tau
            size = float(np.linalg.norm(rest))
            if size > 1e-14 * max(1.0, residual):
                cand, ray1 = _refine_downhill_direction(
                    kern, model, Z[m], rest / size, ortho=(tau,))
                if ray1 < -1e-8 * max(1.0, abs(ray0)):
                    modes.append(cand)

            def reflect(vec):
                out = vec
                for b in modes:
                    out = out - 2.0 * float(out @ b) * b
                return out

            d = reflect(g)
            if climb_step is None:
                climb_step = opts.damping / max(1.0, residual)
            if v_prev is not None:
                dv = Z[m] - v_prev
                dd = d - reflect(g_prev)
                sy = float(dv @ dd)
                if sy > 0.0:
                    # flat modes need steps ~ 1/curvature, far beyond
                    # the descent-phase cap; acceptance guards excess
                    climb_step = min(max(float(dv @ dv) / sy, 1e-12), 1e8)
            moved = False
            for _try in range(40):
                w = _clip_box(Z[m] - climb_step * d, u_big)
                res_try = _sup(total_gradient(kern, model, w))
                if res_try < residual:
                    v_prev, g_prev = Z[m].copy(), g
                    Z[m] = w
                    climb_step = min(climb_step * 1.25, 1e8)
                    moved = True
                    break
                climb_step *= 0.5
            if moved:
                Z = _reequispace(Z, keep=m, frac=frac)
                energies = _batch_energy(kern, model, Z)
            want_polish = not moved or (stall >= 8 and residual <= 1e-4 * scale)
            if want_polish and polish_left > 0:
                polish_left -= 1
                w, res_p = _newton_polish(kern, model, Z[m], opts.tol * scale)
                if res_p < residual:
                    Z[m] = w
                    v_prev = g_prev = None
                    stall = 0
                    best_residual = min(best_residual, res_p)
                    Z = _reequispace(Z, keep=m, frac=frac)
                    energies = _batch_energy(kern, model, Z)
                    continue
            if not moved:
                break
        if energies[m] <= end_energy + 1e-12 * scale:
            gap = min(np.linalg.norm(Z[m]), np.linalg.norm(Z[m] - u_big))
            if gap <= 1e-8 * max(1.0, _sup(u_big)):
                raise SaddleNotFound(
                    "mountain-pass path collapsed onto an endpoint")

    v = Z[m]
    bound_tol = 1e-6 * max(1.0, _sup(u_big))
    if float(np.min(v)) < -bound_tol or float(np.max(v - u_big)) > bound_tol:
        raise SolverError("saddle point escaped the [0, ceiling] range")
    E = total_energy(kern, plain, v)
    res = _sup(total_gradient(kern, plain, v))
    converged = res <= opts.tol * max(1.0, abs(E))
    report = SolveReport(solution=GridFunction(v, kern.mesh), energy=float(E),
                         residual=res, iterations=iterations,
                         converged=converged, classification="saddle")
    if return_path:
        path = MountainPassPath(points=Z, energies=energies, max_index=m)
        return report, path
    return report


def _refine_downhill_direction(kern, model, v, tau, sweeps=2, ortho=()):
    """Rotate tau toward the most-unstable direction at v.

    Minimizes the curvature quotient tau.H(v)tau using only gradient
    differences (no Hessian is formed): the directional curvature is
    (grad(v + l*tau) - grad(v - l*tau)) / 2l, and tau is rotated
    against the transverse component of that vector while the rotation
    keeps lowering the quotient.  With ortho given, the search stays in
    the orthogonal complement of those unit directions.  Returns the
    refined direction and its curvature.
    """
    ell = 1e-6 * max(1.0, float(np.linalg.norm(v)))

    def project(t):
        for b in ortho:
            t = t - float(t @ b) * b
        return t

    def curvature(t):
        gp = total_gradient(kern, model, v + ell * t)
        gm = total_gradient(kern, model, v - ell * t)
        Ht = (gp - gm) / (2.0 * ell)
        return Ht, float(t @ Ht)

    tau = project(np.array(tau, dtype=float))
    norm = float(np.linalg.norm(tau))
    if norm <= 1e-300:
        return tau, np.inf
    tau /= norm
    Ht, rayleigh = curvature(tau)
    for _ in range(sweeps):
        rot = project(Ht - rayleigh * tau)
        rot = rot - float(rot @ tau) * tau
        size = float(np.linalg.norm(rot))
        if size <= 1e-12 * max(1.0, abs(rayleigh)):
            break
        angle = 0.5
        improved = False
        while angle > 1e-3:
            trial = project(tau - angle * rot / size)
            trial = trial / float(np.linalg.norm(trial))
            Ht_try, ray_try = curvature(trial)
            if ray_try < rayleigh:
                tau, Ht, rayleigh = trial, Ht_try, ray_try
                improved = True
                break
            angle *= 0.25
        if not improved:
            break
    return tau, rayleigh


def _newton_polish(kern, model, v, tol_scale, rounds=6):
    """Damped Newton finish for an almost-converged saddle.

    Close to the critical point the leftover gradient can sit in modes
    whose curvature is orders of magnitude below the rest of the
    spectrum, and those modes couple: moving along one leaks gradient
    into the others, so per-direction steps stall.  Solving H d = -g
    treats all modes at once.  The Hessian is built column by column
    from central differences of the gradient (first-order data only,
    2n evaluations) and inverted through its eigendecomposition with
    curvatures below noise level dropped.  Candidate steps are
    projected onto the box where the capped reaction agrees with the
    plain one and kept only when the gradient sup-norm falls, so the
    iterate cannot leave the basin the climb ended in.  Returns the
    refined point and its residual.
    """
    n = v.size
    top = model.ceiling if model.ceiling is not None else np.inf
    g = total_gradient(kern, model, v)
    res = _sup(g)
    for _ in range(rounds):
        if res <= tol_scale:
            break
        eps = 1e-6 * max(1.0, float(np.linalg.norm(v)))
        H = np.empty((n, n))
        bump = np.zeros(n)
        for j in range(n):
            bump[j] = eps
            gp = total_gradient(kern, model, v + bump)
            gm = total_gradient(kern, model, v - bump)
            H[:, j] = (gp - gm) / (2.0 * eps)
            bump[j] = 0.0
        H = 0.5 * (H + H.T)
        curv, Q = np.linalg.eigh(H)
        floor = 1e-9 * float(np.max(np.abs(curv)))
        keep = np.abs(curv) > floor
        coef = Q.T @ g
        d = -(Q[:, keep] @ (coef[keep] / curv[keep]))
        t = 1.0
        improved = False
        for _half in range(30):
            w = _clip_box(v + t * d, top)
            gw = total_gradient(kern, model, w)
            rw = _sup(gw)
            if rw < res:
                v, g, res = w, gw, rw
                improved = True
                break
            t *= 0.5
        if not improved:
            break
    return v, res


def _probe_local_min(kern, model, point, params, seed, probes=6):
    """Check a path endpoint is a local minimizer of the capped energy."""
    rng = np.random.default_rng(seed)
    top = max(_sup(point), sign_threshold_delta(params) if params.lam > 0 else 1.0)
    amp = 1e-3 * top
    E0 = total_energy(kern, model, point)
    for _ in range(probes):
        pert = amp * rng.standard_normal(point.shape)
        if total_energy(kern, model, point + pert) < E0 - 1e-10 * max(1.0, abs(E0)):
            raise SolverError("path endpoint is not a local minimizer")
