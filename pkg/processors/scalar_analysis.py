"""
一維解析工具模組
提供 Θ、Φ、Ψ、ξ 曲線及其導數、臨界常數 m₁、β₁、β₂、β₃、J_c、
分支解 x_s(β)、x_l(β) 與極小值比較函數 f、F̃
"""

import math
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from core.config import SolverConfig
from core.exceptions import DomainError, NoSolutionError, SolverError


logger = logging.getLogger("CWPLogger")

_SOLVER = SolverConfig()
_RTOL = 4 * np.finfo(float).eps

# ξ 在 x = 1/3 的泰勒係數：ξ(1/3 + h) = 3 + 9h/2 + 27h² + 405h³/4 + …
_XI_SERIES = (3.0, 4.5, 27.0, 101.25)
# ξ′(1/3 + h) = 9/2 + 54h + 1215h²/4 + 10692h³/5 + …
_XI_PRIME_SERIES = (4.5, 54.0, 303.75, 2138.4)


# ============================================================================
# 資料結構
# ============================================================================

@dataclass(frozen=True)
class CriticalConstants:
    """q=3 臨界常數"""
    m1: float
    beta1: float
    beta2: float
    beta3: float
    jc: float

    def to_dict(self) -> dict:
        return {
            'm1': self.m1,
            'beta1': self.beta1,
            'beta2': self.beta2,
            'beta3': self.beta3,
            'jc': self.jc,
        }


@dataclass(frozen=True)
class BranchPair:
    """ξ(x) = β 的兩個解 x_s < m₁ < x_l"""
    x_s: float
    x_l: float
    beta: float


# ============================================================================
# 共用
# ============================================================================

def _require_positive_J(J: float) -> None:
    if not J > 0:
        raise DomainError(f"此曲線需要 J > 0，收到 J={J}")


def _entropy_weight(beta: float, J: float) -> float:
    if not beta > 0:
        raise DomainError(f"逆溫度 β 必須為正數，收到 {beta}")
    return (1.0 + J) / beta


def find_root(func: Callable[[float], float], lower: float, upper: float, label: str,
              xtol: float = None) -> float:
    """
    有界區間上的 Brent 求根

    Raises:
        SolverError: 區間兩端不變號
    """
    xtol = _SOLVER.root_xtol if xtol is None else xtol
    f_lower, f_upper = func(lower), func(upper)
    if f_lower == 0.0:
        return lower
    if f_upper == 0.0:
        return upper
    if np.sign(f_lower) == np.sign(f_upper):
        raise SolverError(f"{label} 的求根區間 ({lower}, {upper}) 兩端同號：{f_lower}, {f_upper}")
    return float(brentq(func, lower, upper, xtol=xtol, rtol=_RTOL, maxiter=500))


# ============================================================================
# Θ (q=2)
# ============================================================================

def theta(s: float, beta: float, J: float) -> float:
    """Θ(s) = (1/J)(−s + ((1+J)/β) log((1+s)/(1−s)))"""
    _require_positive_J(J)
    if not abs(s) < 1:
        raise DomainError(f"Θ 的引數必須滿足 |s| < 1，收到 {s}")
    c = _entropy_weight(beta, J)
    return (-s + c * (math.log1p(s) - math.log1p(-s))) / J


def theta_prime(s: float, beta: float, J: float) -> float:
    """Θ′(s) = (1/J)(2(1+J)/(β(1−s²)) − 1)"""
    _require_positive_J(J)
    if not abs(s) < 1:
        raise DomainError(f"Θ′ 的引數必須滿足 |s| < 1，收到 {s}")
    c = _entropy_weight(beta, J)
    return (2.0 * c / (1.0 - s * s) - 1.0) / J


# ============================================================================
# Φ 與 Ψ (q=3)
# ============================================================================

def phi(x: float, beta: float, J: float) -> float:
    """Φ(x) = (1/J)(−x + ((1+J)/β) log x)"""
    _require_positive_J(J)
    if not x > 0:
        raise DomainError(f"Φ 的引數必須為正，收到 {x}")
    return (-x + _entropy_weight(beta, J) * math.log(x)) / J


def phi_prime(x: float, beta: float, J: float) -> float:
    """Φ′(x) = (1/J)((1+J)/(βx) − 1)"""
    _require_positive_J(J)
    if not x > 0:
        raise DomainError(f"Φ′ 的引數必須為正，收到 {x}")
    return (_entropy_weight(beta, J) / x - 1.0) / J


def phi_second(x: float, beta: float, J: float) -> float:
    """Φ″(x) = −(1+J)/(Jβx²)"""
    _require_positive_J(J)
    if not x > 0:
        raise DomainError(f"Φ″ 的引數必須為正，收到 {x}")
    return -_entropy_weight(beta, J) / (J * x * x)


def _require_half_open(x: float, name: str) -> None:
    if not (0.0 < x < 0.5):
        raise DomainError(f"{name} 的引數必須位於 (0, 1/2)，收到 {x}")


def psi_fn(x: float, beta: float, J: float) -> float:
    """Ψ(x) = (1/(3J))(1 − 3x + ((1+J)/β) log(x/(1−2x)) + J)"""
    _require_positive_J(J)
    _require_half_open(x, "Ψ")
    c = _entropy_weight(beta, J)
    return (1.0 - 3.0 * x + c * math.log(x / (1.0 - 2.0 * x)) + J) / (3.0 * J)


def psi_fn_prime(x: float, beta: float, J: float) -> float:
    """Ψ′(x) = (1/J)((1+J)/(β·3x(1−2x)) − 1)"""
    _require_positive_J(J)
    _require_half_open(x, "Ψ′")
    c = _entropy_weight(beta, J)
    return (c / (3.0 * x * (1.0 - 2.0 * x)) - 1.0) / J


# ============================================================================
# ξ 與其導數
# ============================================================================

def _series(coefficients, h: float) -> float:
    value = 0.0
    for coefficient in reversed(coefficients):
        value = value * h + coefficient
    return value


def xi(x: float) -> float:
    """ξ(x) = log((1−2x)/x)/(1−3x)，ξ(1/3) = 3"""
    _require_half_open(x, "ξ")
    h = x - 1.0 / 3.0
    if abs(h) < _SOLVER.series_cutoff:
        return _series(_XI_SERIES, h)
    return math.log((1.0 - 2.0 * x) / x) / (1.0 - 3.0 * x)


def xi_prime(x: float) -> float:
    """ξ′(x) = (1 − 3x + 3x(1−2x) log(x/(1−2x))) / (x(2x−1)(3x−1)²)"""
    _require_half_open(x, "ξ′")
    h = x - 1.0 / 3.0
    if abs(h) < _SOLVER.derivative_series_cutoff:
        return _series(_XI_PRIME_SERIES, h)
    numerator = 1.0 - 3.0 * x + 3.0 * x * (1.0 - 2.0 * x) * math.log(x / (1.0 - 2.0 * x))
    return numerator / (x * (2.0 * x - 1.0) * (3.0 * x - 1.0) ** 2)


def _xi_from_right(w: float) -> float:
    """以 w = 1/2 − x 表示的 ξ，x 趨近 1/2 時保持精度"""
    if w < 1e-3:
        return math.log(4.0 * w / (1.0 - 2.0 * w)) / (3.0 * w - 0.5)
    return xi(0.5 - w)


# ============================================================================
# 臨界常數
# ============================================================================

def _jc_function(x: float) -> float:
    return (1.0 + x) * (1.0 / (1.0 - x) - 1.0 / (2.0 + x)) - math.log((2.0 + x) / (1.0 - x))


@lru_cache(maxsize=1)
def critical_constants() -> CriticalConstants:
    """
    計算臨界常數

    m₁ 為 ξ′ 在 (0.1, 0.3) 的根，β₁ = ξ(m₁)，β₂ = 4 log 2，β₃ = 3，
    J_c 為 (1+x)(1/(1−x) − 1/(2+x)) − log((2+x)/(1−x)) 在 (0, 0.9) 的根
    """
    m1 = find_root(xi_prime, 0.1, 0.3, "m₁")
    jc = find_root(_jc_function, 0.0, 0.9, "J_c")
    constants = CriticalConstants(
        m1=m1,
        beta1=xi(m1),
        beta2=4.0 * math.log(2.0),
        beta3=3.0,
        jc=jc,
    )
    logger.debug(f"臨界常數：m₁={constants.m1:.6f}, β₁={constants.beta1:.6f}, J_c={constants.jc:.6f}")
    return constants


@lru_cache(maxsize=4096)
def solve_branches(beta: float) -> BranchPair:
    """
    解 ξ(x) = β 的兩個分支

    Raises:
        NoSolutionError: β ≤ β₁ + 1e−9
    """
    constants = critical_constants()
    if not beta > constants.beta1 + 1e-9:
        raise NoSolutionError(f"β={beta} ≤ β₁={constants.beta1:.10f}，ξ(x) = β 無解")
    m1 = constants.m1

    def small_side(x):
        return xi(x) - beta

    # ξ 在 0⁺ 發散，逐步縮小左端點直到 ξ > β
    lower = 1e-3
    while small_side(lower) <= 0.0:
        lower *= 1e-3
        if lower < 1e-300:
            raise SolverError(f"β={beta} 過大，x_s 超出浮點數範圍")
    x_s = find_root(small_side, lower, m1, "x_s")

    def large_side(w):
        return _xi_from_right(w) - beta

    w_lower = 1e-3
    while large_side(w_lower) <= 0.0:
        w_lower *= 1e-3
        if w_lower < 1e-300:
            raise SolverError(f"β={beta} 過大，x_l 超出浮點數範圍")
    w = find_root(large_side, w_lower, 0.5 - m1, "x_l")
    return BranchPair(x_s=x_s, x_l=0.5 - w, beta=beta)


# ============================================================================
# 極小值比較函數
# ============================================================================

def f_compare(x: float) -> float:
    """f(x) = (x/2) log((1+x)/(1−x)) − 2[((1+x)/2)log((1+x)/2) + ((1−x)/2)log((1−x)/2)]"""
    if not (0.0 <= x < 1.0):
        raise DomainError(f"f 的引數必須位於 [0, 1)，收到 {x}")
    plus, minus = 0.5 * (1.0 + x), 0.5 * (1.0 - x)
    return 0.5 * x * (math.log1p(x) - math.log1p(-x)) - 2.0 * (plus * math.log(plus) + minus * math.log(minus))


def f_tilde(x: float) -> float:
    """F̃(x) = −6x² + 4x − 2/3 + (2/ξ(x))(2x log x + (1−2x) log(1−2x) + log 3)"""
    _require_half_open(x, "F̃")
    bracket = 2.0 * x * math.log(x) + (1.0 - 2.0 * x) * math.log(1.0 - 2.0 * x) + math.log(3.0)
    return -6.0 * x * x + 4.0 * x - 2.0 / 3.0 + (2.0 / xi(x)) * bracket


def configure_solver(config: SolverConfig) -> bool:
    """套用純量求解配置；配置改變時清除已快取的常數與分支解並回傳 True"""
    global _SOLVER
    if config == _SOLVER:
        return False
    _SOLVER = config
    critical_constants.cache_clear()
    solve_branches.cache_clear()
    logger.debug(f"純量求解配置：{config}")
    return True
