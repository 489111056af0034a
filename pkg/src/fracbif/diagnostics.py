"""Qualitative checks on computed solutions.

Positive solutions of the continuous problem behave like dist(x)^s at
the boundary: the ratio u/d^s is bounded above (weighted sup norm),
bounded below away from zero (Hopf-type ratio), and Holder continuous
with any exponent below s.  These diagnostics report the discrete
counterparts, plus ordering margins between two solutions and the
energy-versus-growth bound chain used to sanity-check solvers.
"""

from dataclasses import dataclass

import numpy as np

from .core import ParameterError, odd_power
from .kernel import apply_operator, pairing, seminorm_energy
from .reaction import ReactionModel, f_values
from .solvers import total_energy, total_gradient


def _ratio(u):
    values = u.values
    d = u.mesh.dist
    return values, d


def hopf_ratio(u, s):
    """min_i u_i / dist_i^s; positive iff u sits above a multiple of d^s."""
    values, d = _ratio(u)
    return float(np.min(values / d ** s))


def boundary_ratios(u, s, alpha=None):
    """Weighted boundary norms of u/d^s.

    Returns (sup_ratio, holder_ratio): the sup norm of w = u/d^s and
    the discrete Holder quotient max |w_i - w_j| / |x_i - x_j|^alpha.
    alpha defaults to 0.9*s and must satisfy 0 <= alpha < s.
    """
    if alpha is None:
        alpha = 0.9 * s
    if not 0.0 <= alpha < s:
        raise ParameterError("need 0 <= alpha < s, got alpha=%g, s=%g" % (alpha, s))
    values, d = _ratio(u)
    w = values / d ** s
    x = u.mesh.nodes
    dw = np.abs(w[:, None] - w[None, :])
    dx = np.abs(x[:, None] - x[None, :])
    iu = np.triu_indices(len(w), k=1)
    holder = float(np.max(dw[iu] / dx[iu] ** alpha))
    return float(np.max(np.abs(w))), holder


def check_ordering(u, v, s=None):
    """Margins of u >= v: plain min(u - v) and, when s is given, the
    weighted margin min((u - v)/d^s)."""
    if u.mesh != v.mesh:
        raise ValueError("ordering check needs both functions on one mesh")
    diff = u.values - v.values
    margin = float(np.min(diff))
    if s is None:
        return margin, None
    weighted = float(np.min(diff / u.mesh.dist ** s))
    return margin, weighted


def verify_operator_properties(kern, p, trials=200, seed=0,
                               exponents=(1.0, 1.7, 2.4), tol=1e-12):
    """Monotonicity/positivity trials for the discrete operator.

    For seeded random pairs (u, v) this checks, with slack `tol`:

    * pairing(A(u), u+) >= p * energy(u+), same with -u^- and u^-;
    * pairing(A(u) - A(v), (u - v)+) > 0 whenever (u - v)+ is nonzero;
    * pairing(A(u) - A(v), odd_power(u - v, t + 1)) >= 0 for t >= 1.

    Returns a dict of worst margins and an overall pass flag.
    """
    rng = np.random.default_rng(seed)
    n = kern.n
    worst = {"mon-i": np.inf, "mon-ii": np.inf, "mon-iii": np.inf}
    for k in range(trials):
        scale = 10.0 ** rng.uniform(-1.0, 1.0)
        u = scale * rng.standard_normal(n)
        v = scale * rng.standard_normal(n)
        Au = apply_operator(kern, u, p)
        Av = apply_operator(kern, v, p)

        up = np.maximum(u, 0.0)
        um = np.maximum(-u, 0.0)
        mi = min(pairing(Au, up) - p * seminorm_energy(kern, up, p),
                 pairing(Au, -um) - p * seminorm_energy(kern, um, p))
        worst["mon-i"] = min(worst["mon-i"], mi)

        w = np.maximum(u - v, 0.0)
        if np.max(w) > 0.0:
            worst["mon-ii"] = min(worst["mon-ii"], pairing(Au - Av, w))

        t = exponents[k % len(exponents)]
        probe = odd_power(u - v, t + 1.0)
        worst["mon-iii"] = min(worst["mon-iii"], pairing(Au - Av, probe))
    checks = {"mon-i": worst["mon-i"] >= -tol,
              "mon-ii": worst["mon-ii"] > 1e-14,
              "mon-iii": worst["mon-iii"] >= -tol}
    return {"worst": worst, "checks": checks,
            "passed": all(checks.values()),
            "failures": sorted(k for k, ok in checks.items() if not ok)}


def gradient_check(kern, model, u, step=1e-6):
    """Max relative sup-error of the analytic gradient against central
    differences of the total energy."""
    u = np.asarray(getattr(u, "values", u), dtype=float)
    g = total_gradient(kern, model, u)
    fd = np.empty_like(g)
    for i in range(len(u)):
        bump = np.zeros_like(u)
        bump[i] = step
        fd[i] = (total_energy(kern, model, u + bump)
                 - total_energy(kern, model, u - bump)) / (2.0 * step)
    denom = max(float(np.max(np.abs(g))), 1e-300)
    return float(np.max(np.abs(fd - g))) / denom


def verify_energy_bound(kern, params, u):
    """Energy/pairing/growth chain for a residual-verified solution.

    Measures p * energy(u) = pairing(A(u), u) = h * sum f(u) u and the
    growth bound by c0 * (h*sum|u| + h*sum|u|^q); returns all measured
    constants and pass flags.  The middle equality only holds up to the
    solution residual, which is measured and used as its tolerance.
    """
    values = np.asarray(getattr(u, "values", u), dtype=float)
    model = ReactionModel.plain(params)
    h = kern.mesh.h
    p = params.p
    lhs = p * seminorm_energy(kern, values, p)
    Au = apply_operator(kern, values, p)
    pair = pairing(Au, values)
    weak = h * float(np.sum(f_values(model, values) * values))
    residual = float(np.max(np.abs(Au - h * f_values(model, values))))
    rhs = model.c0 * (h * float(np.sum(np.abs(values)))
                      + h * float(np.sum(np.abs(values) ** params.q)))
    scale = max(1.0, abs(lhs))
    slack = residual * float(np.sum(np.abs(values))) + 1e-10 * scale
    out = {"p_energy": lhs, "pairing": pair, "weak_form": weak,
           "growth_rhs": rhs, "residual": residual,
           "identity_ok": abs(lhs - pair) <= 1e-10 * scale,
           "weak_ok": abs(pair - weak) <= slack,
           "bound_ok": weak <= rhs + 1e-10 * max(1.0, rhs)}
    out["passed"] = out["identity_ok"] and out["weak_ok"] and out["bound_ok"]
    return out


@dataclass
class DiagnosticReport:
    hopf_ratio: float
    sup_ratio: float
    holder_ratio: float
    ordering_margin: float = None
    weighted_margin: float = None
    bound: dict = None

    def as_dict(self):
        d = {"hopf_ratio": self.hopf_ratio, "sup_ratio": self.sup_ratio,
             "holder_ratio": self.holder_ratio}
        if self.ordering_margin is not None:
            d["ordering_margin"] = self.ordering_margin
            d["weighted_margin"] = self.weighted_margin
        if self.bound is not None:
            d["bound"] = self.bound
        return d


def make_report(kern, params, u, v=None):
    """Bundle the standard diagnostics for a solution (and an optional
    smaller companion solution v <= u)."""
    hr = hopf_ratio(u, params.s)
    sup_r, holder_r = boundary_ratios(u, params.s)
    margin = weighted = None
    if v is not None:
        margin, weighted = check_ordering(u, v, params.s)
    bound = verify_energy_bound(kern, params, u)
    return DiagnosticReport(hopf_ratio=hr, sup_ratio=sup_r,
                            holder_ratio=holder_r, ordering_margin=margin,
                            weighted_margin=weighted, bound=bound)
