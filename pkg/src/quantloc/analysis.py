"""Error exponents and exponential bounds for the geometric detector.

False-alarm and miss probabilities decay like 12 e^{-eta K} in the record
length K.  The exponents come from large-deviations rate functions of the
per-sensor zero-bit frequency:

  * rate_eta1 / rate_eta2 govern the frequency overshooting or
    undershooting its mean by t = delta / (2 Xi_j), where Xi_j converts a
    frequency deviation into a distance deviation;
  * rate_eps_lower / rate_eps_upper govern the frequency escaping the
    bracket [eps_L, eps_U] on which that conversion is valid.

All four are algebraic forms of Bernoulli relative entropies; the code
keeps the explicit logarithm expressions, with the boundary conventions
spelled out (a deviation to an impossible frequency has infinite rate, and
a vanishing linear factor silences its logarithm: 0 * ln(...) = 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from .attacks import AttackAssignment, post_attack_prob
from .detector import DetectorConfig
from .errors import DomainError
from .measurement import prob_zero
from .noise import NoiseModel
from .scenario import ScenarioConfig, compute_distance_bounds, rho_bounds

__all__ = [
    "ExponentParams",
    "SensorRates",
    "RateReport",
    "epsilon_bracket",
    "xi_factor",
    "xi_factor_from",
    "rate_eta1",
    "rate_eta2",
    "rate_eps",
    "composite_exponents",
]

INF = math.inf

PREFACTOR = 12.0


@dataclass(frozen=True)
class ExponentParams:
    """Interpolation weights placing eps_L below rho_L and eps_U above rho_U.

    eps_L = sigma_l * rho_L and eps_U = sigma_u * rho_U + (1 - sigma_u) * F(tau),
    with both sigmas in (0, 1).  The defaults split the gaps evenly.
    """

    sigma_l: float = 0.5
    sigma_u: float = 0.5

    def __post_init__(self) -> None:
        for name, value in (("sigma_l", self.sigma_l), ("sigma_u", self.sigma_u)):
            if not (0.0 < value < 1.0):
                raise DomainError(f"{name} must lie in (0, 1), got {value}")


def epsilon_bracket(
    s: ScenarioConfig,
    j: int,
    params: ExponentParams | None = None,
    bounds=None,
) -> tuple[float, float]:
    """The widened frequency bracket (eps_L, eps_U) for sensor j."""
    params = params or ExponentParams()
    sensor = s.sensor(j)
    rho_l, rho_u = rho_bounds(s, j, bounds)
    f_tau = float(sensor.noise.cdf(sensor.threshold))
    eps_l = params.sigma_l * rho_l
    eps_u = params.sigma_u * rho_u + (1.0 - params.sigma_u) * f_tau
    return eps_l, eps_u


def xi_factor_from(
    noise: NoiseModel,
    tau: float,
    p0: float,
    d0: float,
    gamma: float,
    eps_l: float,
    eps_u: float,
) -> float:
    """Frequency-to-distance conversion factor from explicit constants.

    Xi = d0 * p0^(1/gamma) * (tau - F^{-1}(eps_U))^(-(gamma+1)/gamma)
         / inf f over [F^{-1}(eps_L), F^{-1}(eps_U)].

    A distance-estimate deviation of x in frequency is at most Xi * x while
    the frequency stays inside [eps_L, eps_U].
    """
    if not (0.0 < eps_l < eps_u < 1.0):
        raise DomainError(f"need 0 < eps_l < eps_u < 1, got {eps_l}, {eps_u}")
    f_tau = float(noise.cdf(tau))
    if eps_u >= f_tau:
        raise DomainError(
            f"eps_u = {eps_u} must stay below F(tau) = {f_tau}; the "
            "conversion factor diverges at the boundary"
        )
    x_l = float(noise.inv_cdf(eps_l))
    x_u = float(noise.inv_cdf(eps_u))
    numerator = d0 * p0 ** (1.0 / gamma) * (tau - x_u) ** (-(gamma + 1.0) / gamma)
    inf_f = noise.density_extremum(x_l, x_u, "inf")
    return numerator / inf_f


def xi_factor(
    s: ScenarioConfig, j: int, params: ExponentParams | None = None, bounds=None
) -> float:
    """Conversion factor Xi_j for sensor j under the given bracket weights."""
    sensor = s.sensor(j)
    eps_l, eps_u = epsilon_bracket(s, j, params, bounds)
    return xi_factor_from(
        sensor.noise, sensor.threshold, s.p0, s.d0, s.gamma, eps_l, eps_u
    )


def _check_p_t(p: float, t: float) -> None:
    if not (0.0 < p < 1.0):
        raise DomainError(f"p must lie in (0, 1), got {p}")
    if not (t >= 0.0 and math.isfinite(t)):
        raise DomainError(f"t must be finite and >= 0, got {t}")


def rate_eta1(p: float, t: float) -> float:
    """Rate of the zero-frequency exceeding p + t; infinite when p + t > 1.

    At t = 1 - p exactly the printed form degenerates to the limit -ln p.
    """
    _check_p_t(p, t)
    if t > 1.0 - p:
        return INF
    if t == 0.0:
        return 0.0
    rest = 1.0 - t - p
    if rest == 0.0:
        return -math.log(p)
    return (t + p) * math.log(((t + p) * (1.0 - p)) / (p * rest)) - math.log(
        (1.0 - p) / rest
    )


def rate_eta2(p: float, t: float) -> float:
    """Rate of the zero-frequency dropping below p - t; infinite when t > p.

    At t = p the second term carries a vanishing factor and drops out
    (0 * ln(...) = 0), leaving -ln(1 - p).
    """
    _check_p_t(p, t)
    if t > p:
        return INF
    if t == 0.0:
        return 0.0
    lead = math.log((1.0 + t - p) / (1.0 - p))
    if p - t == 0.0:
        return lead
    return lead - (p - t) * math.log(
        (p * (1.0 + t - p)) / ((p - t) * (1.0 - p))
    )


def rate_eps(p: float, eps_l: float, eps_u: float) -> tuple[float, float]:
    """Rates of the frequency escaping [eps_L, eps_U] below and above.

    Requires the strict ordering 0 < eps_L < p < eps_U < 1: escape in
    either direction must be a deviation from the mean, otherwise no decay
    is possible.  Returns (eta_lower, eta_upper).
    """
    if not (0.0 < eps_l < p < eps_u < 1.0):
        raise DomainError(
            f"need 0 < eps_l < p < eps_u < 1, got eps_l={eps_l}, p={p}, "
            f"eps_u={eps_u}"
        )
    eta_upper = eps_u * math.log((eps_u * (1.0 - p)) / (p * (1.0 - eps_u))) - math.log(
        (1.0 - p) / (1.0 - eps_u)
    )
    eta_lower = math.log((1.0 - eps_l) / (1.0 - p)) - eps_l * math.log(
        (p * (1.0 - eps_l)) / (eps_l * (1.0 - p))
    )
    return eta_lower, eta_upper


@dataclass(frozen=True)
class SensorRates:
    """The four escape rates for one sensor at one zero-probability."""

    eta1: float
    eta2: float
    eta_eps_lower: float
    eta_eps_upper: float

    @property
    def minimum(self) -> float:
        return min(self.eta1, self.eta2, self.eta_eps_lower, self.eta_eps_upper)

    @property
    def terms(self) -> tuple[float, float, float, float]:
        return (self.eta1, self.eta2, self.eta_eps_lower, self.eta_eps_upper)


def _sensor_rates(
    p: float, t: float, eps_l: float, eps_u: float
) -> SensorRates:
    eta_lower, eta_upper = rate_eps(p, eps_l, eps_u)
    return SensorRates(
        eta1=rate_eta1(p, t),
        eta2=rate_eta2(p, t),
        eta_eps_lower=eta_lower,
        eta_eps_upper=eta_upper,
    )


def _sum_exp(terms: tuple[float, ...], k: int) -> float:
    return sum(0.0 if r == INF else math.exp(-r * k) for r in terms)


@dataclass(frozen=True)
class RateReport:
    """All exponents for a scenario, attack assignment, and delta.

    fa_exponent bounds every unattacked sensor's false-alarm probability,
    miss_exponent every attacked sensor's miss probability (None when no
    sensor is attacked), and err_exponent the network average error:

        FA <= 12 exp(-fa_exponent * K),  and so on.

    The raw_* methods evaluate the 12-term sums the single-exponent bounds
    compress, which are tighter at small K.
    """

    delta: float
    plain: Mapping[int, SensorRates]
    tilde: Mapping[int, SensorRates]
    secure_ids: tuple[int, int]
    attacked_ids: tuple[int, ...]
    fa_exponents: Mapping[int, float]
    miss_exponents: Mapping[int, float]

    @property
    def unsecure_ids(self) -> tuple[int, ...]:
        return tuple(sorted(self.fa_exponents))

    @property
    def fa_exponent(self) -> float:
        unattacked = [
            j for j in self.fa_exponents if j not in set(self.attacked_ids)
        ]
        if not unattacked:
            return INF
        return min(self.fa_exponents[j] for j in unattacked)

    @property
    def miss_exponent(self) -> float | None:
        if not self.attacked_ids:
            return None
        return min(self.miss_exponents[j] for j in self.attacked_ids)

    @property
    def err_exponent(self) -> float:
        return min(
            min(self.fa_exponents[j], self.miss_exponents[j])
            for j in self.fa_exponents
        )

    def fa_bound(self, k: int) -> float:
        return PREFACTOR * math.exp(-self.fa_exponent * k) if self.fa_exponent != INF else 0.0

    def miss_bound(self, k: int) -> float | None:
        eta = self.miss_exponent
        if eta is None:
            return None
        return PREFACTOR * math.exp(-eta * k)

    def err_bound(self, k: int) -> float:
        return PREFACTOR * math.exp(-self.err_exponent * k)

    def raw_fa_bound(self, j: int, k: int) -> float:
        """Exact 12-term sum bounding sensor j's false-alarm probability."""
        terms = self.plain[j].terms
        for sid in self.secure_ids:
            terms = terms + self.plain[sid].terms
        return _sum_exp(terms, k)

    def raw_miss_bound(self, j: int, k: int) -> float:
        """Exact 12-term sum bounding sensor j's miss probability."""
        terms = self.tilde[j].terms
        for sid in self.secure_ids:
            terms = terms + self.plain[sid].terms
        return _sum_exp(terms, k)

    def to_table(self, k_grid: tuple[int, ...]) -> str:
        header = ["sensor_id", "eta0", "eta1"]
        header += [f"fa_bound_K{k}" for k in k_grid]
        header += [f"miss_bound_K{k}" for k in k_grid]
        lines = ["\t".join(header)]
        for j in self.unsecure_ids:
            cells = [str(j), _fmt(self.fa_exponents[j]), _fmt(self.miss_exponents[j])]
            cells += [
                f"{PREFACTOR * math.exp(-self.fa_exponents[j] * k):.6e}"
                for k in k_grid
            ]
            cells += [
                f"{PREFACTOR * math.exp(-self.miss_exponents[j] * k):.6e}"
                for k in k_grid
            ]
            lines.append("\t".join(cells))
        return "\n".join(lines) + "\n"


def _fmt(value: float) -> str:
    return "inf" if value == INF else f"{value:.6e}"


def composite_exponents(
    s: ScenarioConfig,
    assignment: AttackAssignment,
    cfg: DetectorConfig,
    params: ExponentParams | None = None,
) -> RateReport:
    """Evaluate every exponent for the given attack assignment and delta.

    Per unsecure sensor j the false-alarm exponent is the minimum escape
    rate among j and the two secure sensors at their true probabilities;
    the miss exponent substitutes j's post-attack probability (identical
    when j is unattacked).  Secure sensors always contribute their plain
    rates: their records are tamper-proof by construction.
    """
    params = params or ExponentParams()
    bounds = compute_distance_bounds(s)
    s1, s2 = s.secure_pair()
    delta = cfg.delta

    plain: dict[int, SensorRates] = {}
    tilde: dict[int, SensorRates] = {}
    for sensor in s.sensors:
        j = sensor.id
        p = prob_zero(s, j, s.target)
        eps_l, eps_u = epsilon_bracket(s, j, params, bounds)
        xi = xi_factor_from(
            sensor.noise, sensor.threshold, s.p0, s.d0, s.gamma, eps_l, eps_u
        )
        t = delta / (2.0 * xi)
        plain[j] = _sensor_rates(p, t, eps_l, eps_u)
        if not sensor.secure:
            tp = post_attack_prob(assignment.spec_for(j), p, noise=sensor.noise)
            tilde[j] = (
                plain[j] if tp == p else _sensor_rates(tp, t, eps_l, eps_u)
            )

    secure_min = min(plain[s1.id].minimum, plain[s2.id].minimum)
    fa_exponents = {
        j: min(plain[j].minimum, secure_min) for j in tilde
    }
    miss_exponents = {
        j: min(tilde[j].minimum, secure_min) for j in tilde
    }
    return RateReport(
        delta=delta,
        plain=plain,
        tilde=tilde,
        secure_ids=(s1.id, s2.id),
        attacked_ids=assignment.attacked_ids(),
        fa_exponents=fa_exponents,
        miss_exponents=miss_exponents,
    )
