"""
模型資料結構模組
定義模型參數、單體點、雙成分磁化與約化座標等不可變資料型態
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Tuple

import numpy as np

from core.exceptions import DomainError, UnsupportedCouplingError


# 單體座標和的容許誤差
SIMPLEX_TOLERANCE = 1e-12

# 分析運算支援的自旋數
ANALYSIS_SPIN_COUNTS = (2, 3)


# ============================================================================
# 耦合型態
# ============================================================================

class CouplingKind(str, Enum):
    """耦合型態"""
    FINITE = "finite"
    NO_COMPONENTWISE = "no_componentwise"


@dataclass(frozen=True)
class Coupling:
    """成分間耦合：有限 J 或無成分內交互作用（J = ∞）"""
    kind: CouplingKind
    value: Optional[float] = None

    def __post_init__(self):
        if self.kind == CouplingKind.FINITE:
            if self.value is None or not math.isfinite(self.value) or self.value < 0:
                raise DomainError(f"耦合強度 J 必須為非負有限實數，收到 {self.value}")
        elif self.value is not None:
            raise DomainError("NoComponentwise 耦合不接受 J 值")

    @classmethod
    def finite(cls, J: float) -> "Coupling":
        return cls(CouplingKind.FINITE, float(J))

    @classmethod
    def no_componentwise(cls) -> "Coupling":
        return cls(CouplingKind.NO_COMPONENTWISE)

    @property
    def is_finite(self) -> bool:
        return self.kind == CouplingKind.FINITE

    def to_dict(self) -> dict:
        return {'kind': self.kind.value, 'J': self.value}

    @classmethod
    def from_dict(cls, data: dict) -> "Coupling":
        kind = CouplingKind(data['kind'])
        if kind == CouplingKind.FINITE:
            return cls.finite(data['J'])
        return cls.no_componentwise()

    def __str__(self) -> str:
        return f"J={self.value}" if self.is_finite else "J=∞"


class Regime(str, Enum):
    """同步相區判定結果"""
    SYNCHRONIZED = "synchronized"
    DESYNCHRONIZED = "desynchronized"
    INDETERMINATE = "indeterminate"
    UNRESOLVED = "unresolved"


# ============================================================================
# 模型參數
# ============================================================================

@dataclass(frozen=True)
class ModelParams:
    """模型參數：自旋數 q、逆溫度 β、耦合"""
    q: int
    beta: float
    coupling: Coupling

    def __post_init__(self):
        if not isinstance(self.q, (int, np.integer)) or self.q < 2:
            raise DomainError(f"自旋數 q 必須為 ≥ 2 的整數，收到 {self.q}")
        if not math.isfinite(self.beta) or self.beta <= 0:
            raise DomainError(f"逆溫度 β 必須為正數，收到 {self.beta}")

    @classmethod
    def finite(cls, q: int, beta: float, J: float) -> "ModelParams":
        return cls(int(q), float(beta), Coupling.finite(J))

    @classmethod
    def no_componentwise(cls, q: int, beta: float) -> "ModelParams":
        return cls(int(q), float(beta), Coupling.no_componentwise())

    @property
    def is_finite(self) -> bool:
        return self.coupling.is_finite

    @property
    def J(self) -> float:
        """有限耦合的 J；J = ∞ 時拋出 UnsupportedCouplingError"""
        if not self.coupling.is_finite:
            raise UnsupportedCouplingError("NoComponentwise 耦合沒有有限的 J")
        return self.coupling.value

    @property
    def dimension(self) -> int:
        """約化座標維度 2(q−1)"""
        return 2 * (self.q - 1)

    def coefficients(self) -> Tuple[float, float, float]:
        """
        自由能係數 (a, b, c)

        F = −a Σ_k Σ_i x_i²/2 − b Σ_i x_i y_i + c·S

        Returns:
            有限 J 為 (1, J, (1+J)/β)；J = ∞ 為 (0, 1, 1/β)
        """
        if self.coupling.is_finite:
            J = self.coupling.value
            return 1.0, J, (1.0 + J) / self.beta
        return 0.0, 1.0, 1.0 / self.beta

    def require_analysis_q(self) -> None:
        if self.q not in ANALYSIS_SPIN_COUNTS:
            raise DomainError(f"分析運算只支援 q ∈ {{2, 3}}，收到 q={self.q}")

    def to_dict(self) -> dict:
        return {'q': self.q, 'beta': self.beta, 'coupling': self.coupling.to_dict()}

    @classmethod
    def from_dict(cls, data: dict) -> "ModelParams":
        return cls(int(data['q']), float(data['beta']), Coupling.from_dict(data['coupling']))

    def __str__(self) -> str:
        return f"q={self.q}, β={self.beta}, {self.coupling}"


# ============================================================================
# 單體點與雙成分磁化
# ============================================================================

@dataclass(frozen=True)
class SimplexPoint:
    """q−1 維單體上的機率向量"""
    weights: Tuple[float, ...]

    def __post_init__(self):
        weights = tuple(float(w) for w in self.weights)
        object.__setattr__(self, 'weights', weights)
        if len(weights) < 2:
            raise DomainError("單體點至少需要兩個座標")
        if any(not (0.0 <= w <= 1.0) for w in weights):
            raise DomainError(f"單體座標必須位於 [0, 1]：{weights}")
        if abs(math.fsum(weights) - 1.0) > SIMPLEX_TOLERANCE:
            raise DomainError(f"單體座標和必須為 1：{weights}")

    @property
    def q(self) -> int:
        return len(self.weights)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.weights, dtype=float)


@dataclass(frozen=True)
class PairMagnetization:
    """雙成分經驗磁化 x = (x⁽¹⁾, x⁽²⁾)"""
    first: SimplexPoint
    second: SimplexPoint

    def __post_init__(self):
        if self.first.q != self.second.q:
            raise DomainError(f"兩個成分的 q 不一致：{self.first.q} 與 {self.second.q}")

    @classmethod
    def from_weights(cls, first: Sequence[float], second: Sequence[float]) -> "PairMagnetization":
        return cls(SimplexPoint(tuple(first)), SimplexPoint(tuple(second)))

    @classmethod
    def uniform(cls, q: int) -> "PairMagnetization":
        weights = tuple([1.0 / q] * q)
        return cls(SimplexPoint(weights), SimplexPoint(weights))

    @property
    def q(self) -> int:
        return self.first.q

    def as_array(self) -> np.ndarray:
        """形狀 (2, q) 的陣列"""
        return np.vstack([self.first.as_array(), self.second.as_array()])

    def permuted(self, permutation: Sequence[int]) -> "PairMagnetization":
        """兩成分同時套用自旋標籤置換"""
        return PairMagnetization.from_weights(
            [self.first.weights[i] for i in permutation],
            [self.second.weights[i] for i in permutation],
        )

    def swapped(self) -> "PairMagnetization":
        """交換兩個成分"""
        return PairMagnetization(self.second, self.first)

    def to_list(self) -> list:
        return [list(self.first.weights), list(self.second.weights)]


@dataclass(frozen=True)
class ReducedPoint:
    """約化座標：每個成分去掉最後一個座標後的 2(q−1) 個自由座標"""
    coords: Tuple[float, ...]

    def __post_init__(self):
        coords = tuple(float(c) for c in self.coords)
        object.__setattr__(self, 'coords', coords)
        if len(coords) < 2 or len(coords) % 2 != 0:
            raise DomainError(f"約化座標長度必須為 2(q−1)，收到 {len(coords)}")
        half = len(coords) // 2
        for component in (coords[:half], coords[half:]):
            if any(not (0.0 <= c <= 1.0) for c in component):
                raise DomainError(f"約化座標必須位於 [0, 1]：{coords}")
            if math.fsum(component) > 1.0 + SIMPLEX_TOLERANCE:
                raise DomainError(f"約化座標的部分和超過 1：{coords}")

    @property
    def q(self) -> int:
        return len(self.coords) // 2 + 1

    def as_array(self) -> np.ndarray:
        return np.asarray(self.coords, dtype=float)


def embed(r: ReducedPoint) -> PairMagnetization:
    """約化座標 → 完整座標，每個成分補上 1 − Σ 自由座標"""
    half = len(r.coords) // 2
    components = []
    for free in (r.coords[:half], r.coords[half:]):
        last = 1.0 - math.fsum(free)
        if last < -SIMPLEX_TOLERANCE:
            raise DomainError(f"隱含的最後座標為負：{last}")
        components.append(tuple(free) + (max(last, 0.0),))
    return PairMagnetization.from_weights(*components)


def reduce(x: PairMagnetization) -> ReducedPoint:
    """完整座標 → 約化座標"""
    return ReducedPoint(x.first.weights[:-1] + x.second.weights[:-1])
