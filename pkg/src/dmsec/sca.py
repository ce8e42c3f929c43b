"""Successive convex approximation for the two robust secrecy designers.

Both designers maximize a sum-secrecy-rate objective over signal covariances
{W_i} and an AN covariance Q under a power budget and PSD constraints.  Log
ratios are handled with exponential substitutions: per-user variables bound
the numerator/denominator of each SINR fraction, concave pieces stay exact
(affine >= exp is an exponential cone), and the two nonconvex pieces are
linearized at the current iterate (first-order tangent of exp), giving an
inner convex approximation whose solution can only improve the true
objective - the trace of true objective values is nondecreasing up to solver
tolerance.

Designer variants:

* ``sca_vmd`` - eavesdroppers enter through expected covariances (von Mises
  averaged outer products); subproblems need exponential + PSD cones.
* ``sca_maee`` - eavesdroppers enter through estimated channels plus a
  worst-case norm-bounded error; the +/- 2 eps ||W h|| correction terms add
  second-order cone epigraphs (the objective maximized is a lower bound on
  the true rate).

Numerical note: channel gains (~1e-8) and the power budget (~10 W) are far
apart, so constraint data is pre-scaled by the noise powers inside the
builders (covariances divided by sigma^2, noise -> 1).  The matrix variables
stay in physical units; the scalar log variables are shifted by ln sigma^2,
which cancels in every difference the objective uses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Literal, Sequence

import cvxpy as cp
import numpy as np

from .model import Scenario
from .secrecy import BeamformerSet, sum_secrecy_rate
from .vonmises import ExpectedCovariance, expected_covariance

ConeKind = Literal["linear", "second_order", "exponential", "psd"]

_LN2 = math.log(2.0)


@dataclass
class ConeConstraint:
    kind: ConeKind
    expr: cp.constraints.constraint.Constraint
    label: str = ""


@dataclass
class ConicProgram:
    """A convex subproblem with every constraint tagged by its cone kind."""

    matrix_vars: dict[str, cp.Variable]
    scalar_vars: dict[str, cp.Variable]
    constraints: list[ConeConstraint]
    objective: cp.Maximize

    def cone_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for con in self.constraints:
            counts[con.kind] = counts.get(con.kind, 0) + 1
        return counts

    def problem(self) -> cp.Problem:
        return cp.Problem(self.objective, [con.expr for con in self.constraints])


@dataclass(frozen=True)
class SCAOptions:
    max_iterations: int = 50
    rel_tolerance: float = 1e-4      # on successive true-objective change
    solver_tolerance: float = 1e-8
    randomization_trials: int = 200
    seed: int | None = None
    max_restarts: int = 5

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.rel_tolerance <= 0 or self.solver_tolerance <= 0:
            raise ValueError("tolerances must be > 0")


@dataclass
class SolveOutcome:
    status: Literal["optimal", "infeasible", "numerical_limit"]
    objective: float | None
    matrix_values: dict[str, np.ndarray]
    scalar_values: dict[str, np.ndarray]


def solve_conic(program: ConicProgram, solver_tolerance: float = 1e-8) -> SolveOutcome:
    """Solve a cone program, normalizing solver-specific statuses."""
    problem = program.problem()
    try:
        problem.solve(solver=cp.CLARABEL,
                      tol_gap_abs=solver_tolerance, tol_gap_rel=solver_tolerance,
                      tol_feas=solver_tolerance)
    except cp.error.SolverError:
        problem.solve(solver=cp.SCS, eps=solver_tolerance)

    if problem.status == cp.OPTIMAL:
        status = "optimal"
    elif problem.status in (cp.INFEASIBLE, cp.INFEASIBLE_INACCURATE):
        status = "infeasible"
    else:
        status = "numerical_limit"

    def _hermitized(value):
        return (value + value.conj().T) / 2

    matrices = {}
    scalars = {}
    if status != "infeasible" and problem.value is not None:
        for name, var in program.matrix_vars.items():
            if var.value is not None:
                matrices[name] = _hermitized(np.asarray(var.value))
        for name, var in program.scalar_vars.items():
            if var.value is not None:
                scalars[name] = np.atleast_1d(np.asarray(var.value))
    return SolveOutcome(status=status,
                        objective=None if problem.value is None else float(problem.value),
                        matrix_values=matrices, scalar_values=scalars)


# ---------------------------------------------------------------------------
# shared pieces
# ---------------------------------------------------------------------------

def _user_outer_products(scenario: Scenario) -> list[np.ndarray]:
    return [np.outer(h.entries, h.entries.conj()) for h in scenario.user_channels()]


def _covariance_matrices(covariances) -> list[np.ndarray]:
    return [c.matrix if isinstance(c, ExpectedCovariance) else np.asarray(c)
            for c in covariances]


def _tr(mat: np.ndarray, var) -> cp.Expression:
    return cp.real(cp.trace(mat @ var))


def _tr_val(mat: np.ndarray, value: np.ndarray) -> float:
    return float(np.trace(mat @ value).real)


# ---------------------------------------------------------------------------
# expected-covariance designer (exp + PSD cones)
# ---------------------------------------------------------------------------

def linearization_points_vmd(scenario: Scenario, eve_covariances,
                             current_ws: Sequence[np.ndarray], current_q: np.ndarray,
                             ) -> tuple[np.ndarray, np.ndarray]:
    """Expansion points: logs of user-interference and eavesdropper-total powers."""
    h_users = _user_outer_products(scenario)
    h_eves = _covariance_matrices(eve_covariances)
    m = scenario.num_users
    q_bar = np.array([
        math.log(sum(_tr_val(h_users[i], current_ws[mm]) for mm in range(m) if mm != i)
                 + _tr_val(h_users[i], current_q) + scenario.noise_user)
        for i in range(m)])
    c_bar = np.array([
        math.log(sum(_tr_val(h_e, w) for w in current_ws)
                 + _tr_val(h_e, current_q) + scenario.noise_eve)
        for h_e in h_eves])
    return q_bar, c_bar


def build_vmd_subproblem(scenario: Scenario, eve_covariances,
                         q_bar: np.ndarray, c_bar: np.ndarray) -> ConicProgram:
    """Convex subproblem around (q_bar, c_bar) for the expected-covariance designer.

    Maximize sum_i (p_i - q_i - r_i) subject to
      user totals   >= e^{p_i}                       (exponential)
      user interf   <= tangent of e^q at q_bar_i      (linear)
      eve totals    <= tangent of e^c at c_bar_k      (linear)
      eve interf    >= e^{d_ik}                      (exponential)
      r_i >= c_k - d_ik, power budget                (linear)
      W_i, Q PSD.
    """
    m, kk, n = scenario.num_users, scenario.num_eves, scenario.geometry.num_antennas
    # noise-scaled data (see module docstring); scalar vars absorb the ln-sigma shifts
    h_users = [h / scenario.noise_user for h in _user_outer_products(scenario)]
    h_eves = [h / scenario.noise_eve for h in _covariance_matrices(eve_covariances)]
    qb = q_bar - math.log(scenario.noise_user)
    cb = c_bar - math.log(scenario.noise_eve)

    ws = [cp.Variable((n, n), hermitian=True, name=f"W{i}") for i in range(m)]
    q_an = cp.Variable((n, n), hermitian=True, name="Q")
    p = cp.Variable(m, name="p")
    q = cp.Variable(m, name="q")
    c = cp.Variable(kk, name="c")
    d = cp.Variable((m, kk), name="d")
    r = cp.Variable(m, name="r")

    cons: list[ConeConstraint] = []
    for i in range(m):
        total = sum(_tr(h_users[i], w) for w in ws) + _tr(h_users[i], q_an) + 1.0
        interf = (sum(_tr(h_users[i], ws[mm]) for mm in range(m) if mm != i)
                  + _tr(h_users[i], q_an) + 1.0)
        cons.append(ConeConstraint("exponential", cp.exp(p[i]) <= total, f"user_total[{i}]"))
        cons.append(ConeConstraint(
            "linear", interf <= math.exp(qb[i]) * (q[i] - qb[i] + 1), f"user_interf[{i}]"))
    for k in range(kk):
        total = sum(_tr(h_eves[k], w) for w in ws) + _tr(h_eves[k], q_an) + 1.0
        cons.append(ConeConstraint(
            "linear", total <= math.exp(cb[k]) * (c[k] - cb[k] + 1), f"eve_total[{k}]"))
        for i in range(m):
            interf = (sum(_tr(h_eves[k], ws[mm]) for mm in range(m) if mm != i)
                      + _tr(h_eves[k], q_an) + 1.0)
            cons.append(ConeConstraint("exponential", cp.exp(d[i, k]) <= interf,
                                       f"eve_interf[{i},{k}]"))
            cons.append(ConeConstraint("linear", r[i] >= c[k] - d[i, k], f"epigraph[{i},{k}]"))
    cons.append(ConeConstraint(
        "linear",
        cp.real(cp.trace(q_an)) + sum(cp.real(cp.trace(w)) for w in ws) <= scenario.total_power,
        "power"))
    for i, w in enumerate(ws):
        cons.append(ConeConstraint("psd", w >> 0, f"psd_W[{i}]"))
    cons.append(ConeConstraint("psd", q_an >> 0, "psd_Q"))

    return ConicProgram(
        matrix_vars={**{f"W{i}": w for i, w in enumerate(ws)}, "Q": q_an},
        scalar_vars={"p": p, "q": q, "c": c, "d": d, "r": r},
        constraints=cons,
        objective=cp.Maximize(cp.sum(p) - cp.sum(q) - cp.sum(r)),
    )


def vmd_true_objective(scenario: Scenario, eve_covariances,
                       ws: Sequence[np.ndarray], q_an: np.ndarray) -> float:
    """Exact designer objective (bits/s/Hz) at the given iterate."""
    h_users = _user_outer_products(scenario)
    h_eves = _covariance_matrices(eve_covariances)
    total = 0.0
    for i in range(scenario.num_users):
        user_tot = (sum(_tr_val(h_users[i], w) for w in ws)
                    + _tr_val(h_users[i], q_an) + scenario.noise_user)
        user_int = (sum(_tr_val(h_users[i], ws[mm]) for mm in range(scenario.num_users) if mm != i)
                    + _tr_val(h_users[i], q_an) + scenario.noise_user)
        worst_eve = -math.inf
        for h_e in h_eves:
            eve_tot = sum(_tr_val(h_e, w) for w in ws) + _tr_val(h_e, q_an) + scenario.noise_eve
            eve_int = (sum(_tr_val(h_e, ws[mm]) for mm in range(scenario.num_users) if mm != i)
                       + _tr_val(h_e, q_an) + scenario.noise_eve)
            worst_eve = max(worst_eve, math.log(eve_tot) - math.log(eve_int))
        total += math.log(user_tot) - math.log(user_int) - worst_eve
    return total / _LN2


# ---------------------------------------------------------------------------
# worst-case-error designer (exp + SOC + PSD cones)
# ---------------------------------------------------------------------------

def _maee_bound_terms(eve_hats: Sequence[np.ndarray], epsilons: np.ndarray,
                      ws_vals: Sequence[np.ndarray], q_val: np.ndarray):
    """Per-eve upper totals a and per-(i,k) lower interference b at a fixed iterate."""
    uppers = []
    lowers = []  # lowers[k][i]
    for k, h_hat in enumerate(eve_hats):
        h_outer = np.outer(h_hat, h_hat.conj())
        eps = epsilons[k]
        norm_w = [float(np.linalg.norm(w @ h_hat)) for w in ws_vals]
        norm_q = float(np.linalg.norm(q_val @ h_hat))
        uppers.append(sum(_tr_val(h_outer, w) + 2 * eps * nw for w, nw in zip(ws_vals, norm_w))
                      + _tr_val(h_outer, q_val) + 2 * eps * norm_q)
        lowers.append([
            sum(_tr_val(h_outer, ws_vals[mm]) - 2 * eps * norm_w[mm]
                for mm in range(len(ws_vals)) if mm != i)
            + _tr_val(h_outer, q_val) - 2 * eps * norm_q
            for i in range(len(ws_vals))])
    return uppers, lowers


def linearization_points_maee(scenario: Scenario, eve_hat_channels, epsilons,
                              current_ws: Sequence[np.ndarray], current_q: np.ndarray,
                              ) -> tuple[np.ndarray, np.ndarray]:
    """Expansion points: logs of user interference and worst-case eve totals."""
    h_users = _user_outer_products(scenario)
    m = scenario.num_users
    t_bar = np.array([
        math.log(sum(_tr_val(h_users[i], current_ws[mm]) for mm in range(m) if mm != i)
                 + _tr_val(h_users[i], current_q) + scenario.noise_user)
        for i in range(m)])
    eve_hats = [np.asarray(h) for h in eve_hat_channels]
    uppers, _ = _maee_bound_terms(eve_hats, np.asarray(epsilons, dtype=float),
                                  current_ws, current_q)
    a_bar = np.array([math.log(upper + scenario.noise_eve) for upper in uppers])
    return t_bar, a_bar


def build_maee_subproblem(scenario: Scenario, eve_hat_channels, epsilons,
                          t_bar: np.ndarray, a_bar: np.ndarray) -> ConicProgram:
    """Convex subproblem around (t_bar, a_bar) for the worst-case-error designer.

    Same skeleton as the expected-covariance subproblem, but each
    eavesdropper trace term carries a +/- 2 eps ||W h|| correction handled by
    shared second-order-cone epigraphs nrm[m, k] >= ||W_m h_k|| (index m = M
    is the AN matrix).  Upper-bound totals gain +2 eps nrm and are tangent-
    linearized; lower-bound interference loses 2 eps nrm and is rearranged to
    e^b + 2 eps sum(nrm) <= affine, which is jointly convex.
    """
    m, kk, n = scenario.num_users, scenario.num_eves, scenario.geometry.num_antennas
    h_users = [h / scenario.noise_user for h in _user_outer_products(scenario)]
    # noise-scaled eavesdropper data: channel / sigma_E, bound / sigma_E
    sigma_e = math.sqrt(scenario.noise_eve)
    eve_hats = [np.asarray(h) / sigma_e for h in eve_hat_channels]
    eps = np.asarray(epsilons, dtype=float) / sigma_e
    tb = t_bar - math.log(scenario.noise_user)
    ab = a_bar - math.log(scenario.noise_eve)

    ws = [cp.Variable((n, n), hermitian=True, name=f"W{i}") for i in range(m)]
    q_an = cp.Variable((n, n), hermitian=True, name="Q")
    s = cp.Variable(m, name="s")
    t = cp.Variable(m, name="t")
    a = cp.Variable(kk, name="a")
    b = cp.Variable((m, kk), name="b")
    r = cp.Variable(m, name="r")
    nrm = cp.Variable((m + 1, kk), name="nrm")  # ||W_m h_k|| epigraphs; row m=M is Q

    all_mats = ws + [q_an]
    cons: list[ConeConstraint] = []
    for mm in range(m + 1):
        for k in range(kk):
            cons.append(ConeConstraint(
                "second_order", cp.norm(all_mats[mm] @ eve_hats[k], 2) <= nrm[mm, k],
                f"norm[{mm},{k}]"))
    for i in range(m):
        total = sum(_tr(h_users[i], w) for w in ws) + _tr(h_users[i], q_an) + 1.0
        interf = (sum(_tr(h_users[i], ws[mm]) for mm in range(m) if mm != i)
                  + _tr(h_users[i], q_an) + 1.0)
        cons.append(ConeConstraint("exponential", cp.exp(s[i]) <= total, f"user_total[{i}]"))
        cons.append(ConeConstraint(
            "linear", interf <= math.exp(tb[i]) * (t[i] - tb[i] + 1), f"user_interf[{i}]"))
    for k in range(kk):
        h_outer = np.outer(eve_hats[k], eve_hats[k].conj())
        upper = (sum(_tr(h_outer, w) for w in ws) + _tr(h_outer, q_an)
                 + 2 * eps[k] * cp.sum(nrm[:, k]) + 1.0)
        cons.append(ConeConstraint(
            "linear", upper <= math.exp(ab[k]) * (a[k] - ab[k] + 1), f"eve_upper[{k}]"))
        for i in range(m):
            interf_traces = (sum(_tr(h_outer, ws[mm]) for mm in range(m) if mm != i)
                             + _tr(h_outer, q_an) + 1.0)
            norm_sum = sum(nrm[mm, k] for mm in range(m) if mm != i) + nrm[m, k]
            cons.append(ConeConstraint(
                "exponential", cp.exp(b[i, k]) + 2 * eps[k] * norm_sum <= interf_traces,
                f"eve_lower[{i},{k}]"))
            cons.append(ConeConstraint("linear", r[i] >= a[k] - b[i, k], f"epigraph[{i},{k}]"))
    cons.append(ConeConstraint(
        "linear",
        cp.real(cp.trace(q_an)) + sum(cp.real(cp.trace(w)) for w in ws) <= scenario.total_power,
        "power"))
    for i, w in enumerate(ws):
        cons.append(ConeConstraint("psd", w >> 0, f"psd_W[{i}]"))
    cons.append(ConeConstraint("psd", q_an >> 0, "psd_Q"))

    return ConicProgram(
        matrix_vars={**{f"W{i}": w for i, w in enumerate(ws)}, "Q": q_an},
        scalar_vars={"s": s, "t": t, "a": a, "b": b, "r": r, "nrm": nrm},
        constraints=cons,
        objective=cp.Maximize(cp.sum(s) - cp.sum(t) - cp.sum(r)),
    )


def maee_true_objective(scenario: Scenario, eve_hat_channels, epsilons,
                        ws: Sequence[np.ndarray], q_an: np.ndarray) -> float:
    """Worst-case-bound objective (bits/s/Hz) at the given iterate."""
    h_users = _user_outer_products(scenario)
    eve_hats = [np.asarray(h) for h in eve_hat_channels]
    uppers, lowers = _maee_bound_terms(eve_hats, np.asarray(epsilons, dtype=float), ws, q_an)
    total = 0.0
    for i in range(scenario.num_users):
        user_tot = (sum(_tr_val(h_users[i], w) for w in ws)
                    + _tr_val(h_users[i], q_an) + scenario.noise_user)
        user_int = (sum(_tr_val(h_users[i], ws[mm]) for mm in range(scenario.num_users) if mm != i)
                    + _tr_val(h_users[i], q_an) + scenario.noise_user)
        worst_eve = max(
            math.log(uppers[k] + scenario.noise_eve) - math.log(lowers[k][i] + scenario.noise_eve)
            for k in range(scenario.num_eves))
        total += math.log(user_tot) - math.log(user_int) - worst_eve
    return total / _LN2


# ---------------------------------------------------------------------------
# rank-one extraction
# ---------------------------------------------------------------------------

def extract_rank_one(w_mat: np.ndarray, evaluator: Callable[[np.ndarray], float] | None,
                     trials: int = 200, seed=None) -> tuple[np.ndarray, bool]:
    """Recover a beamforming vector from a PSD covariance.

    Numerically rank-one matrices give their scaled dominant eigenvector
    directly; otherwise draw `trials` Gaussian candidates with covariance
    w_mat, rescale each to the full trace, and keep the evaluator's best.
    Returns (vector, exact_flag).
    """
    eigvals, eigvecs = np.linalg.eigh(w_mat)
    eigvals = np.clip(eigvals, 0.0, None)
    lead = eigvals[-1]
    if lead == 0.0:
        return np.zeros(w_mat.shape[0], dtype=complex), True
    if eigvals[-2] / lead < 1e-6:
        return np.sqrt(lead) * eigvecs[:, -1], True

    if evaluator is None:
        return np.sqrt(lead) * eigvecs[:, -1], False
    rng = np.random.default_rng(seed)
    factor = eigvecs * np.sqrt(eigvals)
    trace = float(np.trace(w_mat).real)
    best_vec, best_val = None, -math.inf
    for _ in range(trials):
        z = (rng.standard_normal(w_mat.shape[0]) + 1j * rng.standard_normal(w_mat.shape[0]))
        cand = factor @ z / math.sqrt(2)
        nrm2 = float(np.vdot(cand, cand).real)
        if nrm2 == 0.0:
            continue
        cand *= math.sqrt(trace / nrm2)
        val = evaluator(cand)
        if val > best_val:
            best_vec, best_val = cand, val
    return best_vec, False


# ---------------------------------------------------------------------------
# the SCA drivers
# ---------------------------------------------------------------------------

@dataclass
class SCAResult:
    beams: BeamformerSet
    trace: np.ndarray            # true objective (bits/s/Hz) after each solve
    powers: np.ndarray           # transmit power used at each iterate
    converged: bool
    statuses: list[str]
    restarts: int
    hit_numerical_limit: bool = False

    @property
    def iterations(self) -> int:
        return len(self.trace)

    @property
    def objective(self) -> float:
        return float(self.trace[-1])

    def iteration_rows(self):
        """(iteration, objective_bits, power_used, status) rows for CSV export."""
        return [(idx + 1, float(obj), float(self.powers[idx]), self.statuses[idx])
                for idx, obj in enumerate(self.trace)]


def _random_feasible_init(scenario: Scenario, rng: np.random.Generator):
    """Rank-one draws splitting 0.9 of the budget equally over signals and AN."""
    n, m = scenario.geometry.num_antennas, scenario.num_users
    share = 0.9 * scenario.total_power / (m + 1)
    mats = []
    for _ in range(m + 1):
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        v *= math.sqrt(share) / np.linalg.norm(v)
        mats.append(np.outer(v, v.conj()))
    return mats[:m], mats[m]


def _run_sca(scenario: Scenario, options: SCAOptions,
             linearize: Callable, build: Callable, true_objective: Callable) -> SCAResult:
    rng = np.random.default_rng(options.seed)
    last_error = None
    for restart in range(options.max_restarts + 1):
        ws, q_an = _random_feasible_init(scenario, rng)
        trace: list[float] = []
        powers: list[float] = []
        statuses: list[str] = []
        hit_limit = False
        failed = False

        for _ in range(options.max_iterations):
            points = linearize(ws, q_an)
            outcome = solve_conic(build(*points), options.solver_tolerance)
            if outcome.status == "infeasible" or not outcome.matrix_values:
                # subproblems are feasible by construction, so this is a numerical
                # breakdown: keep accumulated iterates if any, else re-initialize
                if trace:
                    hit_limit = True
                    break
                failed = True
                break
            new_ws = [outcome.matrix_values[f"W{i}"] for i in range(scenario.num_users)]
            new_q = outcome.matrix_values["Q"]
            new_obj = true_objective(new_ws, new_q)
            if outcome.status == "numerical_limit":
                hit_limit = True
                # a reduced-accuracy iterate is only trusted if it keeps the
                # ascent property; otherwise stop on the previous clean iterate,
                # which counts as converged when the step was below tolerance
                if trace and new_obj < trace[-1] - 1e-9:
                    settled = (abs(new_obj - trace[-1])
                               <= options.rel_tolerance * max(abs(trace[-1]), 1e-12))
                    if settled:
                        return _finish(scenario, options, ws, q_an, trace, powers,
                                       statuses, restart, converged=True, hit_limit=True)
                    break
            ws, q_an = new_ws, new_q
            statuses.append(outcome.status)
            trace.append(new_obj)
            powers.append(float(np.trace(q_an).real + sum(np.trace(w).real for w in ws)))
            if len(trace) >= 2:
                prev, curr = trace[-2], trace[-1]
                if abs(curr - prev) <= options.rel_tolerance * max(abs(prev), 1e-12):
                    return _finish(scenario, options, ws, q_an, trace, powers, statuses,
                                   restart, converged=True, hit_limit=hit_limit)
        if not failed and trace:
            return _finish(scenario, options, ws, q_an, trace, powers, statuses,
                           restart, converged=False, hit_limit=hit_limit)
        last_error = "solver reported infeasible/failed at the first iterate"
    raise RuntimeError(f"SCA failed after {options.max_restarts + 1} initializations: {last_error}")


def _finish(scenario: Scenario, options: SCAOptions, ws, q_an, trace, powers, statuses,
            restarts, converged, hit_limit) -> SCAResult:
    est_angles = scenario.eve_angles_est

    vectors = []
    exact_flags = []
    for i, w_mat in enumerate(ws):
        def evaluator(candidate, i=i):
            mats = list(ws)
            mats[i] = np.outer(candidate, candidate.conj())
            trial = BeamformerSet(signal_matrices=mats, an_matrix=q_an)
            return sum_secrecy_rate(scenario, est_angles, trial).sum_rate

        vec, exact = extract_rank_one(w_mat, evaluator, options.randomization_trials,
                                      seed=(options.seed, 104729, i)
                                      if options.seed is not None else None)
        vectors.append(vec)
        exact_flags.append(exact)

    beams = BeamformerSet(signal_matrices=list(ws), an_matrix=q_an,
                          signal_vectors=vectors, rank_one_exact=exact_flags)
    return SCAResult(beams=beams, trace=np.asarray(trace), powers=np.asarray(powers),
                     converged=converged, statuses=statuses, restarts=restarts,
                     hit_numerical_limit=hit_limit)


def sca_vmd(scenario: Scenario, options: SCAOptions = SCAOptions(),
            eve_covariances=None) -> SCAResult:
    """Expected-covariance robust designer.

    eve_covariances defaults to the closed-form expected outer products; pass
    explicit matrices (e.g. zero-error outer products) to change the model.
    """
    if eve_covariances is None:
        eve_covariances = [expected_covariance(scenario, k, "closed_form")
                           for k in range(scenario.num_eves)]
    cov_mats = _covariance_matrices(eve_covariances)
    return _run_sca(
        scenario, options,
        linearize=lambda ws, q: linearization_points_vmd(scenario, cov_mats, ws, q),
        build=lambda qb, cb: build_vmd_subproblem(scenario, cov_mats, qb, cb),
        true_objective=lambda ws, q: vmd_true_objective(scenario, cov_mats, ws, q),
    )


def sca_maee(scenario: Scenario, options: SCAOptions = SCAOptions(),
             epsilons=None) -> SCAResult:
    """Worst-case norm-bounded-error robust designer.

    epsilons defaults to the first-order angle-error bounds at the estimated
    angles; pass zeros to collapse onto the point-estimate designer.
    """
    from .errbound import scenario_error_bounds  # local import to avoid cycle at import time

    eve_hats = [scenario.eve_channel(k).entries for k in range(scenario.num_eves)]
    if epsilons is None:
        epsilons = np.array([b.epsilon for b in scenario_error_bounds(scenario)])
    epsilons = np.asarray(epsilons, dtype=float)
    return _run_sca(
        scenario, options,
        linearize=lambda ws, q: linearization_points_maee(scenario, eve_hats, epsilons, ws, q),
        build=lambda tb, ab: build_maee_subproblem(scenario, eve_hats, epsilons, tb, ab),
        true_objective=lambda ws, q: maee_true_objective(scenario, eve_hats, epsilons, ws, q),
    )
