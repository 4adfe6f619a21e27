"""Turn a delta-stationary profile plus its dual into a 1/3+delta
approximate equilibrium.

With g the stationary max regret, lambda and mu the dual gains, the
output is chosen by cases on (lambda, mu):

  1. min(lambda, mu) <= 1/2        -> the stationary profile itself
  2. min(lambda, mu) >= 2/3        -> the dual profile (w, z)
  3. both in (1/2, 2/3]            -> the stationary profile
  4. 1/2 < lambda <= 2/3 < mu      -> a mixed candidate built from a
     half-step y_hat = (y_s + z)/2, the pure best response w_hat to it,
     and the gaps t_r, v_r, mu_hat (subcases 4.1 / 4.2 below)
  5. 1/2 < mu <= 2/3 < lambda      -> the player-swapped mirror of 4

Boundaries resolve in the listed order, so lambda = mu = 2/3 is case 2.
Rather than trusting the governing case alone, every well-defined
candidate is scored with a full regret report and the lowest max regret
wins (first listed wins ties); the case analysis guarantees at least
one candidate meets 1/3 + delta, and a final check enforces that.

Subcase 4.1 applies when v_r + t_r >= (mu - lambda)/2 and
mu_hat >= mu - v_r - t_r; it mixes w with w_hat using
p = (2(v_r + t_r) - (mu - lambda)) / (2(v_r + t_r)) against z.
Otherwise 4.2 keeps w and mixes y_hat toward z with weight
q = (1 - mu/2 - t_r) / (1 + mu/2 - lambda - t_r) on z.
"""

from dataclasses import dataclass

import numpy as np

from .errors import GuaranteeViolationError, InvariantViolationError
from .game import (
    MixedStrategy,
    RegretReport,
    StrategyProfile,
    col_payoff,
    mix,
    regret_report,
    row_payoff,
)
from .duals import compute_lambda_mu

GUARANTEE_SLACK = 1e-6
LEMMA_TOL = 1e-7
IDENTITY_TOL = 1e-9
COEFF_CLAMP_TOL = 1e-9


@dataclass(frozen=True)
class Case4Params:
    y_hat: MixedStrategy
    w_hat: MixedStrategy
    t_r: float
    v_r: float
    mu_hat: float
    p: float  # set for subcase 4.1, None otherwise
    q: float  # set for subcase 4.2, None otherwise


@dataclass(frozen=True)
class Case5Params:
    x_hat: MixedStrategy
    z_hat: MixedStrategy
    t_c: float
    v_c: float
    lambda_hat: float
    p: float  # set for subcase 5.1, None otherwise
    q: float  # set for subcase 5.2, None otherwise


@dataclass(frozen=True)
class Candidate:
    profile: StrategyProfile
    report: RegretReport
    description: str


@dataclass(frozen=True)
class ConstructionTrace:
    case_label: str
    params: object  # Case4Params | Case5Params | None
    candidates: list
    chosen_index: int
    certificate: object  # the StationaryCertificate that was constructed from
    duals: object
    lam: float
    mu: float
    delta: float

    @property
    def chosen(self):
        return self.candidates[self.chosen_index]


def dispatch_case(params):
    """Case number for (lambda, mu); boundaries fall to the earlier case."""
    lam, mu = params.lam, params.mu
    lo = min(lam, mu)
    hi = max(lam, mu)
    if lo <= 0.5:
        return 1
    if lo >= 2.0 / 3.0:
        return 2
    if hi <= 2.0 / 3.0:
        return 3
    return 4 if lam <= 2.0 / 3.0 else 5


def case4_coefficients(lam, mu, t_r, v_r, mu_hat):
    """Subcase test and mixing coefficient, as scalars.

    Returns ("4.1", p, None) or ("4.2", None, q). Written for case 4;
    case 5 calls it with lambda and mu (and the row/column quantities)
    exchanged. Raises on a nonpositive denominator, which cannot happen
    when the corresponding case actually governs.
    """
    s = v_r + t_r
    if s >= (mu - lam) / 2.0 and mu_hat >= mu - v_r - t_r:
        if s <= 0.0:
            raise InvariantViolationError(
                f"subcase 4.1 denominator 2*(v+t) = {2 * s!r} not positive"
            )
        p = (2.0 * s - (mu - lam)) / (2.0 * s)
        return "4.1", _clamp_unit(p, "p"), None
    denom = 1.0 + mu / 2.0 - lam - t_r
    if denom <= 0.0:
        raise InvariantViolationError(
            f"subcase 4.2 denominator {denom!r} not positive"
        )
    q = (1.0 - mu / 2.0 - t_r) / denom
    return "4.2", None, _clamp_unit(q, "q")


def _clamp_unit(value, name):
    if value < -COEFF_CLAMP_TOL or value > 1.0 + COEFF_CLAMP_TOL:
        raise InvariantViolationError(
            f"mixing coefficient {name} = {value!r} outside [0, 1]"
        )
    return min(max(value, 0.0), 1.0)


def compute_case4_params(game, stationary_profile, duals, strict=True):
    """Half-step quantities for case 4. With strict=False (used when
    case 4 is only being tried opportunistically) coefficient failures
    yield p = q = None instead of raising."""
    y_s = stationary_profile.col
    w, z = duals.w, duals.z
    cp = compute_lambda_mu(game, stationary_profile, duals)
    y_hat = mix(y_s, z, 0.5)
    w_hat = MixedStrategy.pure(int(np.argmax(game.R @ y_hat.probs)), game.n)
    t_r = row_payoff(game, w_hat, y_hat) - row_payoff(game, w, y_hat)
    v_r = row_payoff(game, w, y_s) - row_payoff(game, w_hat, y_s)
    mu_hat = col_payoff(game, w_hat, z) - col_payoff(game, w_hat, y_s)
    try:
        _, p, q = case4_coefficients(cp.lam, cp.mu, t_r, v_r, mu_hat)
    except InvariantViolationError:
        if strict:
            raise
        p = q = None
    return Case4Params(
        y_hat=y_hat, w_hat=w_hat, t_r=t_r, v_r=v_r, mu_hat=mu_hat, p=p, q=q
    )


def compute_case5_params(game, stationary_profile, duals, strict=True):
    """Player-swapped mirror of compute_case4_params."""
    x_s = stationary_profile.row
    w = duals.w
    cp = compute_lambda_mu(game, stationary_profile, duals)
    x_hat = mix(x_s, w, 0.5)
    z_hat = MixedStrategy.pure(int(np.argmax(x_hat.probs @ game.C)), game.n)
    t_c = col_payoff(game, x_hat, z_hat) - col_payoff(game, x_hat, duals.z)
    v_c = col_payoff(game, x_s, duals.z) - col_payoff(game, x_s, z_hat)
    lambda_hat = row_payoff(game, w, z_hat) - row_payoff(game, x_s, z_hat)
    try:
        _, p, q = case4_coefficients(cp.mu, cp.lam, t_c, v_c, lambda_hat)
    except InvariantViolationError:
        if strict:
            raise
        p = q = None
    return Case5Params(
        x_hat=x_hat, z_hat=z_hat, t_c=t_c, v_c=v_c, lambda_hat=lambda_hat,
        p=p, q=q,
    )


def case41_candidate(params, duals):
    """(p*w + (1-p)*w_hat, z)."""
    return StrategyProfile(mix(duals.w, params.w_hat, params.p), duals.z)


def case42_candidate(params, duals):
    """(w, (1-q)*y_hat + q*z), i.e. weight q on z."""
    return StrategyProfile(duals.w, mix(duals.z, params.y_hat, params.q))


def case51_candidate(params, duals):
    """(w, p*z + (1-p)*z_hat)."""
    return StrategyProfile(duals.w, mix(duals.z, params.z_hat, params.p))


def case52_candidate(params, duals):
    """((1-q)*x_hat + q*w, z), i.e. weight q on w."""
    return StrategyProfile(mix(duals.w, params.x_hat, params.q), duals.z)


def _check_case4_lemmas(game, certificate, duals, params, cp, delta, candidate):
    """Runtime guards for the inequalities case 4 relies on."""
    lam, mu = cp.lam, cp.mu
    g = certificate.g_value
    P = duals.P
    w, z = duals.w, duals.z
    lhs = row_payoff(game, params.w_hat, z)
    if lhs < lam + params.v_r + 2.0 * params.t_r - LEMMA_TOL:
        raise InvariantViolationError(
            f"w_hat payoff against z is {lhs!r}, below "
            f"lambda + v_r + 2 t_r = {lam + params.v_r + 2 * params.t_r!r}"
        )
    if params.t_r > (1.0 - lam - params.v_r) / 2.0 + LEMMA_TOL:
        raise InvariantViolationError(
            f"t_r = {params.t_r!r} exceeds (1 - lambda - v_r)/2"
        )
    bound = min(P * lam, (1.0 - P) * mu,
                P * params.v_r + (1.0 - P) * params.mu_hat)
    if g > bound + delta + GUARANTEE_SLACK:
        raise InvariantViolationError(
            f"stationary regret g = {g!r} exceeds the dual bound {bound!r} "
            f"+ delta"
        )
    half_step = regret_report(game, StrategyProfile(w, params.y_hat))
    if abs(half_step.row_regret - params.t_r) > IDENTITY_TOL:
        raise InvariantViolationError(
            f"row regret at (w, y_hat) is {half_step.row_regret!r}, "
            f"expected t_r = {params.t_r!r}"
        )
    if half_step.col_regret > 1.0 - mu / 2.0 + IDENTITY_TOL:
        raise InvariantViolationError(
            f"column regret at (w, y_hat) is {half_step.col_regret!r}, "
            f"above 1 - mu/2"
        )
    if params.p is not None:
        prof = candidate.profile
        floor = (lam + mu) / 2.0 - LEMMA_TOL
        rp = row_payoff(game, prof.row, prof.col)
        cpay = col_payoff(game, prof.row, prof.col)
        if rp < floor or cpay < floor:
            raise InvariantViolationError(
                f"subcase 4.1 payoffs ({rp!r}, {cpay!r}) fall below "
                f"(lambda + mu)/2"
            )
    else:
        q = params.q
        cap = q * (1.0 - lam) + (1.0 - q) * params.t_r + LEMMA_TOL
        if candidate.report.max_regret > cap:
            raise InvariantViolationError(
                f"subcase 4.2 regret {candidate.report.max_regret!r} exceeds "
                f"q(1 - lambda) + (1 - q) t_r = {cap!r}"
            )


def _check_case5_lemmas(game, certificate, duals, params, cp, delta, candidate):
    """Mirror of _check_case4_lemmas with the players exchanged."""
    lam, mu = cp.lam, cp.mu
    g = certificate.g_value
    P = duals.P
    w, z = duals.w, duals.z
    lhs = col_payoff(game, w, params.z_hat)
    if lhs < mu + params.v_c + 2.0 * params.t_c - LEMMA_TOL:
        raise InvariantViolationError(
            f"z_hat payoff against w is {lhs!r}, below "
            f"mu + v_c + 2 t_c = {mu + params.v_c + 2 * params.t_c!r}"
        )
    if params.t_c > (1.0 - mu - params.v_c) / 2.0 + LEMMA_TOL:
        raise InvariantViolationError(
            f"t_c = {params.t_c!r} exceeds (1 - mu - v_c)/2"
        )
    bound = min(P * lam, (1.0 - P) * mu,
                (1.0 - P) * params.v_c + P * params.lambda_hat)
    if g > bound + delta + GUARANTEE_SLACK:
        raise InvariantViolationError(
            f"stationary regret g = {g!r} exceeds the dual bound {bound!r} "
            f"+ delta"
        )
    half_step = regret_report(game, StrategyProfile(params.x_hat, z))
    if abs(half_step.col_regret - params.t_c) > IDENTITY_TOL:
        raise InvariantViolationError(
            f"column regret at (x_hat, z) is {half_step.col_regret!r}, "
            f"expected t_c = {params.t_c!r}"
        )
    if half_step.row_regret > 1.0 - lam / 2.0 + IDENTITY_TOL:
        raise InvariantViolationError(
            f"row regret at (x_hat, z) is {half_step.row_regret!r}, "
            f"above 1 - lambda/2"
        )
    if params.p is not None:
        prof = candidate.profile
        floor = (lam + mu) / 2.0 - LEMMA_TOL
        rp = row_payoff(game, prof.row, prof.col)
        cpay = col_payoff(game, prof.row, prof.col)
        if rp < floor or cpay < floor:
            raise InvariantViolationError(
                f"subcase 5.1 payoffs ({rp!r}, {cpay!r}) fall below "
                f"(lambda + mu)/2"
            )
    else:
        q = params.q
        cap = q * (1.0 - mu) + (1.0 - q) * params.t_c + LEMMA_TOL
        if candidate.report.max_regret > cap:
            raise InvariantViolationError(
                f"subcase 5.2 regret {candidate.report.max_regret!r} exceeds "
                f"q(1 - mu) + (1 - q) t_c = {cap!r}"
            )


def _candidate(game, profile, description):
    return Candidate(profile, regret_report(game, profile), description)


def construct_output(game, certificate, duals, params, config):
    """Build the candidate pool, pick the lowest max regret, and enforce
    the 1/3 + delta guarantee on the winner.

    Raises GuaranteeViolationError if even the best candidate misses the
    bound; when the certificate is non-stationary the guarantee does not
    apply and the caller is expected to treat that as a solver failure.
    """
    lam, mu = params.lam, params.mu
    delta = config.delta
    stationary = certificate.profile
    candidates = [_candidate(game, stationary, "stationary profile")]
    case_params = None

    if duals.degenerate_w or duals.degenerate_z:
        label = "degenerate-dual"
    elif lam <= 0.0 or mu <= 0.0:
        label = "lambda-mu-nonpositive"
    else:
        candidates.append(
            _candidate(game, StrategyProfile(duals.w, duals.z), "dual profile")
        )
        case = dispatch_case(params)
        if case == 4:
            case_params = compute_case4_params(game, stationary, duals)
            if case_params.p is not None:
                label = "4.1"
                cand = _candidate(
                    game, case41_candidate(case_params, duals),
                    "case 4.1 row mixture",
                )
            else:
                label = "4.2"
                cand = _candidate(
                    game, case42_candidate(case_params, duals),
                    "case 4.2 column mixture",
                )
            candidates.append(cand)
            if certificate.stationary:
                _check_case4_lemmas(
                    game, certificate, duals, case_params, params, delta, cand
                )
            _append_mirror(
                game, candidates,
                compute_case5_params(game, stationary, duals, strict=False),
                duals, mirror_of=5,
            )
        elif case == 5:
            case_params = compute_case5_params(game, stationary, duals)
            if case_params.p is not None:
                label = "5.1"
                cand = _candidate(
                    game, case51_candidate(case_params, duals),
                    "case 5.1 column mixture",
                )
            else:
                label = "5.2"
                cand = _candidate(
                    game, case52_candidate(case_params, duals),
                    "case 5.2 row mixture",
                )
            candidates.append(cand)
            if certificate.stationary:
                _check_case5_lemmas(
                    game, certificate, duals, case_params, params, delta, cand
                )
            _append_mirror(
                game, candidates,
                compute_case4_params(game, stationary, duals, strict=False),
                duals, mirror_of=4,
            )
        else:
            label = str(case)

    regrets = [c.report.max_regret for c in candidates]
    chosen = int(np.argmin(regrets))
    trace = ConstructionTrace(
        case_label=label,
        params=case_params,
        candidates=candidates,
        chosen_index=chosen,
        certificate=certificate,
        duals=duals,
        lam=lam,
        mu=mu,
        delta=delta,
    )
    limit = 1.0 / 3.0 + delta + GUARANTEE_SLACK
    if trace.chosen.report.max_regret > limit:
        raise GuaranteeViolationError(
            f"best candidate has max regret "
            f"{trace.chosen.report.max_regret!r} > 1/3 + delta (case {label})",
            trace=trace,
        )
    return trace


def _append_mirror(game, candidates, params, duals, mirror_of):
    """Opportunistic candidate from the non-governing case, if its
    coefficient came out well-defined."""
    if mirror_of == 5:
        if params.p is not None:
            candidates.append(_candidate(
                game, case51_candidate(params, duals), "case 5.1 mirror"
            ))
        elif params.q is not None:
            candidates.append(_candidate(
                game, case52_candidate(params, duals), "case 5.2 mirror"
            ))
    else:
        if params.p is not None:
            candidates.append(_candidate(
                game, case41_candidate(params, duals), "case 4.1 mirror"
            ))
        elif params.q is not None:
            candidates.append(_candidate(
                game, case42_candidate(params, duals), "case 4.2 mirror"
            ))
