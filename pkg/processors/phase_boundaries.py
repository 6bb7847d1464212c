"""
相界函數模組
q=2 的 ζ₁、ζ₂、γ 與 q=3 的 ψ₁、ψ₂、ψ₃、ψ_s、ψ_d，
分支切換點 A、B，以及解析相區判定
"""

import math
import logging
from dataclasses import dataclass, asdict
from functools import lru_cache
from typing import Dict, Optional

from core.exceptions import DomainError, NoSolutionError
from core.model import Coupling, Regime
from core.stats import CensusCounts
from processors.scalar_analysis import critical_constants, find_root, solve_branches, theta, theta_prime


logger = logging.getLogger("CWPLogger")

# 與 β₁、β₃ 距離小於此值的 β 一律視為未定
EDGE_BAND = 1e-9


# ============================================================================
# q=2
# ============================================================================

def _require_q2_domain(beta: float) -> None:
    if not beta >= 2.0:
        raise DomainError(f"ζ₁、ζ₂、γ 只定義於 β ≥ 2，收到 β={beta}")


def zeta1(beta: float) -> float:
    """ζ₁(β) = (β−2)/(β+2)"""
    _require_q2_domain(beta)
    return (beta - 2.0) / (beta + 2.0)


def zeta2(beta: float) -> float:
    """ζ₂(β) = (√(β(β−2)) − 2L)/(√(β(β−2)) + 2L)，L = log((√β+√(β−2))/√2) = arcsinh(√((β−2)/2))"""
    _require_q2_domain(beta)
    root = math.sqrt(beta * (beta - 2.0))
    if root == 0.0:
        return 0.0
    log_term = 2.0 * math.asinh(math.sqrt(0.5 * (beta - 2.0)))
    return (root - log_term) / (root + log_term)


def gamma(beta: float) -> float:
    """γ(β) = √((β−2)/β)，Θ′(γ) = 1 的位置"""
    _require_q2_domain(beta)
    return math.sqrt((beta - 2.0) / beta)


@dataclass(frozen=True)
class Q2Equivalences:
    """Θ′(0) 與九交點條件 Θ(γ) < −γ"""
    theta0_slope: float
    five_to_nine: bool

    def to_dict(self) -> dict:
        return asdict(self)


def q2_equivalences(beta: float, J: float) -> Q2Equivalences:
    """β ≤ 2 時 γ 不存在（或為 0），九交點條件回報為 False"""
    slope = theta_prime(0.0, beta, J)
    if beta <= 2.0:
        return Q2Equivalences(slope, False)
    g = gamma(beta)
    return Q2Equivalences(slope, theta(g, beta, J) < -g)


def q2_census_expectation(beta: float, J: float) -> CensusCounts:
    """依 ζ₁、ζ₂ 推得的 q=2 臨界點個數"""
    if beta < 2.0:
        return CensusCounts(minima=1)
    if J > zeta1(beta):
        return CensusCounts(minima=2, saddles=1)
    if J > zeta2(beta):
        return CensusCounts(minima=2, saddles=2, maxima=1)
    return CensusCounts(minima=4, saddles=4, maxima=1)


# ============================================================================
# q=3
# ============================================================================

def _require_nonnegative(beta: float) -> None:
    if not beta >= 0.0:
        raise DomainError(f"β 必須非負，收到 {beta}")


def psi1(beta: float) -> float:
    """ψ₁ = (β − 1/x_l)/(β + 1/x_l)，β < β₃ 時為 0"""
    _require_nonnegative(beta)
    if beta < critical_constants().beta3:
        return 0.0
    k = 1.0 / solve_branches(beta).x_l
    return (beta - k) / (beta + k)


def psi2(beta: float) -> float:
    """ψ₂ = (β − k)/(β + k)，k = 1/(3x_l(1−2x_l))，只在 [β₁, β₃] 上非零"""
    _require_nonnegative(beta)
    constants = critical_constants()
    if not constants.beta1 <= beta <= constants.beta3:
        return 0.0
    try:
        x_l = solve_branches(beta).x_l
    except NoSolutionError:
        # β₁ 的單側極限
        return 0.0
    k = 1.0 / (3.0 * x_l * (1.0 - 2.0 * x_l))
    return max(0.0, (beta - k) / (beta + k))


def psi3(beta: float) -> float:
    """ψ₃ = (β − 3 + √(25β² − 50β + 1))/(2(1+6β))，根號內為負或結果為負時取 0"""
    _require_nonnegative(beta)
    radicand = 25.0 * beta * beta - 50.0 * beta + 1.0
    if radicand < 0.0:
        return 0.0
    return max(0.0, (beta - 3.0 + math.sqrt(radicand)) / (2.0 * (1.0 + 6.0 * beta)))


def psi_sync(beta: float) -> float:
    """ψ_s = max(ψ₁, min(J_c, ψ₃))，β ≤ β₁ 時為 0"""
    _require_nonnegative(beta)
    constants = critical_constants()
    if beta <= constants.beta1:
        return 0.0
    return max(psi1(beta), min(constants.jc, psi3(beta)))


def psi_desync(beta: float) -> float:
    """ψ_d = ψ₁ + ψ₂"""
    return psi1(beta) + psi2(beta)


@dataclass(frozen=True)
class Crossings:
    """ψ_s 的分支切換點"""
    A: float
    B: float

    def to_dict(self) -> dict:
        return {'A': self.A, 'B': self.B}


@lru_cache(maxsize=1)
def crossings() -> Crossings:
    """
    B：ψ₁(β) = min(J_c, ψ₃(β)) 在 (β₃, 6) 的根，之後 ψ_s = ψ₁
    A：ψ₃(β) = J_c 在 (β₁, B) 的根，min 在此換支

    Raises:
        SolverError: 區間兩端不變號
    """
    constants = critical_constants()
    jc = constants.jc
    b = find_root(lambda beta: psi1(beta) - min(jc, psi3(beta)), constants.beta3, 6.0, "B")
    a = find_root(lambda beta: psi3(beta) - jc, constants.beta1, b, "A")
    logger.debug(f"分支切換點：A={a:.6f}, B={b:.6f}")
    return Crossings(A=a, B=b)


# ============================================================================
# 解析相區
# ============================================================================

@dataclass(frozen=True)
class AnalyticRegime:
    """解析相區判定與其依據"""
    regime: Regime
    reason: str
    boundaries: Dict[str, Optional[float]]

    def to_dict(self) -> dict:
        return {'regime': self.regime.value, 'reason': self.reason, 'boundaries': dict(self.boundaries)}


def boundary_values(q: int, beta: float) -> Dict[str, Optional[float]]:
    """指定 β 上的相界值；q=2 且 β < 2 時 ζ 為 None"""
    if q == 3:
        return {
            'psi1': psi1(beta),
            'psi2': psi2(beta),
            'psi3': psi3(beta),
            'psi_s': psi_sync(beta),
            'psi_d': psi_desync(beta),
        }
    if q == 2:
        if beta < 2.0:
            return {'zeta1': None, 'zeta2': None}
        return {'zeta1': zeta1(beta), 'zeta2': zeta2(beta)}
    raise DomainError(f"相界只定義於 q ∈ {{2, 3}}，收到 q={q}")


def decide_analytic(q: int, beta: float, coupling: Coupling,
                    boundaries: Dict[str, Optional[float]]) -> AnalyticRegime:
    """以預先算好的相界值判定相區（掃描時每列 β 只算一次相界）"""
    if q == 3:
        constants = critical_constants()
        if not coupling.is_finite:
            return AnalyticRegime(Regime.SYNCHRONIZED, "no componentwise interaction", boundaries)
        if abs(beta - constants.beta1) < EDGE_BAND or abs(beta - constants.beta3) < EDGE_BAND:
            return AnalyticRegime(Regime.UNRESOLVED, "beta at a regime edge", boundaries)
        if beta < constants.beta1:
            return AnalyticRegime(Regime.SYNCHRONIZED, "beta below beta1", boundaries)
        J = coupling.value
        if J > boundaries['psi_s']:
            return AnalyticRegime(Regime.SYNCHRONIZED, "J above psi_s", boundaries)
        if J < boundaries['psi_d']:
            return AnalyticRegime(Regime.DESYNCHRONIZED, "J below psi_d", boundaries)
        return AnalyticRegime(Regime.UNRESOLVED, "J between psi_d and psi_s", boundaries)

    if abs(beta - 2.0) < EDGE_BAND:
        return AnalyticRegime(Regime.UNRESOLVED, "beta at 2", boundaries)
    if beta < 2.0:
        return AnalyticRegime(Regime.SYNCHRONIZED, "beta below 2", boundaries)
    if not coupling.is_finite:
        return AnalyticRegime(Regime.SYNCHRONIZED, "no componentwise interaction", boundaries)
    J = coupling.value
    if J > boundaries['zeta1']:
        return AnalyticRegime(Regime.SYNCHRONIZED, "J above zeta1", boundaries)
    if J < boundaries['zeta1']:
        return AnalyticRegime(Regime.DESYNCHRONIZED, "J below zeta1", boundaries)
    return AnalyticRegime(Regime.UNRESOLVED, "J at zeta1", boundaries)


def analytic_regime(q: int, beta: float, coupling: Coupling) -> AnalyticRegime:
    """依相界判定同步 / 不同步 / 未定"""
    if not beta > 0:
        raise DomainError(f"逆溫度 β 必須為正數，收到 {beta}")
    return decide_analytic(q, beta, coupling, boundary_values(q, beta))
