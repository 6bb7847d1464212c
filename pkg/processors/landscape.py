"""
自由能地景模組
計算雙成分 CWP 模型自由能、梯度與 Hessian（完整座標與約化座標）
"""

from typing import Tuple

import numpy as np
from scipy.special import xlogy

from core.exceptions import DomainError, UnsupportedCouplingError
from core.model import ModelParams, PairMagnetization, ReducedPoint


# 梯度 / Hessian 拒絕距單體邊界小於此值的點
BOUNDARY_MARGIN = 1e-10


def _require_matching_q(p: ModelParams, q: int) -> None:
    if p.q != q:
        raise DomainError(f"模型 q={p.q} 與點的 q={q} 不一致")


# ============================================================================
# 完整座標上的函數值
# ============================================================================

def energy_part(p: ModelParams, x: PairMagnetization) -> float:
    """
    能量項 H(x) = −Σ_k Σ_i (x_i⁽ᵏ⁾)²/2 − J Σ_i x_i⁽¹⁾ x_i⁽²⁾

    Raises:
        UnsupportedCouplingError: J = ∞ 時請改用 free_energy_no_componentwise
    """
    if not p.is_finite:
        raise UnsupportedCouplingError("energy_part 只支援有限 J，J = ∞ 請使用 free_energy_no_componentwise")
    _require_matching_q(p, x.q)
    first = x.first.as_array()
    second = x.second.as_array()
    self_term = -0.5 * (np.dot(first, first) + np.dot(second, second))
    return float(self_term - p.J * np.dot(first, second))


def entropy_part(x: PairMagnetization) -> float:
    """熵項 S(x) = Σ_k Σ_i x log x，約定 0·log 0 = 0"""
    values = x.as_array()
    return float(np.sum(xlogy(values, values)))


def free_energy(p: ModelParams, x: PairMagnetization) -> float:
    """自由能 F = H + ((1+J)/β)·S"""
    return energy_part(p, x) + ((1.0 + p.J) / p.beta) * entropy_part(x)


def free_energy_no_componentwise(beta: float, x: PairMagnetization) -> float:
    """J = ∞ 的自由能 F = −Σ_i x_i⁽¹⁾ x_i⁽²⁾ + (1/β)·S"""
    if beta <= 0:
        raise DomainError(f"逆溫度 β 必須為正數，收到 {beta}")
    cross = float(np.dot(x.first.as_array(), x.second.as_array()))
    return -cross + (1.0 / beta) * entropy_part(x)


def free_energy_of(p: ModelParams, x: PairMagnetization) -> float:
    """依耦合型態選擇自由能公式"""
    if p.is_finite:
        return free_energy(p, x)
    _require_matching_q(p, x.q)
    return free_energy_no_componentwise(p.beta, x)


# ============================================================================
# 約化座標上的向量化運算
# ============================================================================

def split_components(z: np.ndarray, q: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """把約化座標拆成 (x 自由座標, x 最後座標, y 自由座標, y 最後座標)，最後座標保留長度 1 的軸"""
    d = q - 1
    x_free = z[..., :d]
    y_free = z[..., d:]
    x_last = 1.0 - x_free.sum(axis=-1, keepdims=True)
    y_last = 1.0 - y_free.sum(axis=-1, keepdims=True)
    return x_free, x_last, y_free, y_last


def full_coordinates(z: np.ndarray, q: int) -> np.ndarray:
    """約化座標陣列 (..., 2(q−1)) → 完整座標陣列 (..., 2, q)"""
    x_free, x_last, y_free, y_last = split_components(np.asarray(z, dtype=float), q)
    x = np.concatenate([x_free, x_last], axis=-1)
    y = np.concatenate([y_free, y_last], axis=-1)
    return np.stack([x, y], axis=-2)


def interior_mask(z: np.ndarray, q: int, margin: float = BOUNDARY_MARGIN) -> np.ndarray:
    """每個點的所有完整座標是否都大於 margin"""
    full = full_coordinates(z, q)
    return np.all(full.reshape(full.shape[:-2] + (-1,)) > margin, axis=-1)


def free_energy_array(p: ModelParams, z: np.ndarray) -> np.ndarray:
    """批次計算約化座標上的自由能（任一耦合）"""
    a, b, c = p.coefficients()
    full = full_coordinates(z, p.q)
    x = full[..., 0, :]
    y = full[..., 1, :]
    energy = -0.5 * a * (np.sum(x * x, axis=-1) + np.sum(y * y, axis=-1)) - b * np.sum(x * y, axis=-1)
    return energy + c * np.sum(xlogy(full, full), axis=(-2, -1))


def gradient_array(p: ModelParams, z: np.ndarray) -> np.ndarray:
    """
    批次梯度（不檢查邊界，呼叫端需保證內點）

    ∂F/∂x_k = −a(x_k−x_q) − b(y_k−y_q) + c(log x_k − log x_q)，y 對稱
    """
    a, b, c = p.coefficients()
    x_free, x_last, y_free, y_last = split_components(np.asarray(z, dtype=float), p.q)
    dx = x_free - x_last
    dy = y_free - y_last
    log_x = np.log(x_free) - np.log(x_last)
    log_y = np.log(y_free) - np.log(y_last)
    grad_x = -a * dx - b * dy + c * log_x
    grad_y = -a * dy - b * dx + c * log_y
    return np.concatenate([grad_x, grad_y], axis=-1)


def hessian_array(p: ModelParams, z: np.ndarray) -> np.ndarray:
    """批次 Hessian，區塊形式 [[A_x, B], [B, A_y]]（不檢查邊界）"""
    a, b, c = p.coefficients()
    d = p.q - 1
    x_free, x_last, y_free, y_last = split_components(np.asarray(z, dtype=float), p.q)
    eye = np.eye(d)
    ones = np.ones((d, d))

    def entropy_block(free, last):
        return c * (eye * (1.0 / free)[..., None, :] + (1.0 / last)[..., None] * ones) - a * (eye + ones)

    batch_shape = x_free.shape[:-1]
    hess = np.empty(batch_shape + (2 * d, 2 * d))
    hess[..., :d, :d] = entropy_block(x_free, x_last)
    hess[..., d:, d:] = entropy_block(y_free, y_last)
    cross = -b * (eye + ones)
    hess[..., :d, d:] = cross
    hess[..., d:, :d] = cross
    return hess


def _checked_interior(p: ModelParams, r: ReducedPoint) -> np.ndarray:
    _require_matching_q(p, r.q)
    z = r.as_array()
    if not interior_mask(z, p.q):
        raise DomainError(f"點位於單體邊界附近，無法計算導數：{r.coords}")
    return z


def gradient(p: ModelParams, r: ReducedPoint) -> np.ndarray:
    """約化座標梯度，長度 2(q−1)"""
    return gradient_array(p, _checked_interior(p, r))


def hessian(p: ModelParams, r: ReducedPoint) -> np.ndarray:
    """約化座標 Hessian，2(q−1)×2(q−1) 對稱矩陣"""
    return hessian_array(p, _checked_interior(p, r))


def eigenvalues(p: ModelParams, r: ReducedPoint) -> np.ndarray:
    """Hessian 特徵值（遞增排序）"""
    return np.linalg.eigvalsh(hessian(p, r))


# ============================================================================
# 對稱形式 (s,s,1−2s,t,t,1−2t) 的譜分解
# ============================================================================

def symmetric_blocks(p: ModelParams, s: float, t: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    對稱點的兩個 2×2 區塊

    Hessian 在 (1,−1) 方向與 (1,1) 方向上分解成兩個 2×2 矩陣，
    其特徵多項式即兩個二次因式。

    Returns:
        (first_block, second_block)
    """
    if p.q != 3:
        raise DomainError(f"對稱譜分解只適用於 q=3，收到 q={p.q}")
    for name, value in (('s', s), ('t', t)):
        if not (0.0 < value < 0.5):
            raise DomainError(f"{name} 必須位於 (0, 1/2)，收到 {value}")
    a, b, c = p.coefficients()
    s1, t1 = c / s, c / t
    s2, t2 = c / (1.0 - 2.0 * s), c / (1.0 - 2.0 * t)
    first = np.array([[s1 - a, -b], [-b, t1 - a]])
    second = np.array([[s1 + 2.0 * s2 - 3.0 * a, -3.0 * b], [-3.0 * b, t1 + 2.0 * t2 - 3.0 * a]])
    return first, second


def _quadratic_roots(block: np.ndarray) -> Tuple[float, float]:
    """2×2 對稱矩陣特徵多項式 λ² − tr·λ + det 的兩根（遞增）"""
    half_trace = 0.5 * (block[0, 0] + block[1, 1])
    radius = np.hypot(0.5 * (block[0, 0] - block[1, 1]), block[0, 1])
    return float(half_trace - radius), float(half_trace + radius)


def symmetric_spectrum(p: ModelParams, s: float, t: float) -> Tuple[float, float, float, float]:
    """
    對稱點 (s,s,1−2s,t,t,1−2t) 的四個 Hessian 特徵值

    Returns:
        (λ₁, λ₂, λ₃, λ₄)：λ₁ ≤ λ₂ 來自第一個二次因式（Φ′ 判準），
        λ₃ ≤ λ₄ 來自第二個二次因式（Ψ′ 判準）
    """
    first, second = symmetric_blocks(p, s, t)
    return _quadratic_roots(first) + _quadratic_roots(second)


def symmetric_point(s: float, t: float) -> PairMagnetization:
    """建立 (s,s,1−2s,t,t,1−2t)"""
    return PairMagnetization.from_weights((s, s, 1.0 - 2.0 * s), (t, t, 1.0 - 2.0 * t))
