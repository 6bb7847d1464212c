"""
曲線交點模組
處理 y = Φ(x) + u 與 x = Φ(y) + v 的交點 P、R、S、Q，
以及座標和的單調性診斷與 P+R+S 下界檢查
"""

import math
import logging
from dataclasses import dataclass, asdict
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from core.exceptions import DomainError
from core.model import ModelParams


logger = logging.getLogger("CWPLogger")

Point2 = Tuple[float, float]

_ROOT_XTOL = 1e-15
_RTOL = 4 * np.finfo(float).eps


# ============================================================================
# 掃描求根
# ============================================================================

def unit_scan_grid(points: int = 3000) -> np.ndarray:
    """(0, 1) 上的掃描網格：兩端幾何加密加上均勻網格"""
    near = np.geomspace(1e-15, 0.5, points)
    grid = np.concatenate([near, 1.0 - near, np.linspace(0.0, 1.0, 2 * points + 1)])
    grid = np.unique(grid)
    return grid[(grid > 0.0) & (grid < 1.0)]


def scan_roots(vector_func: Callable[[np.ndarray], np.ndarray],
               scalar_func: Callable[[float], float],
               grid: np.ndarray) -> List[float]:
    """
    密集掃描找變號區間後以 Brent 法精修

    Args:
        vector_func: 向量化函數，定義域外回傳 nan
        scalar_func: 同一函數的純量版本（供 brentq 使用）
        grid: 遞增的掃描點

    Returns:
        遞增排序的根
    """
    with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
        values = vector_func(grid)
    finite = np.isfinite(values)
    roots = [float(x) for x in grid[finite & (values == 0.0)]]
    left = values[:-1]
    right = values[1:]
    brackets = np.flatnonzero(finite[:-1] & finite[1:] & (np.sign(left) * np.sign(right) < 0))
    for i in brackets:
        try:
            roots.append(float(brentq(scalar_func, grid[i], grid[i + 1], xtol=_ROOT_XTOL, rtol=_RTOL)))
        except (ValueError, RuntimeError) as e:
            logger.debug(f"區間 ({grid[i]}, {grid[i + 1]}) 精修失敗：{e}")
    return sorted(roots)


# ============================================================================
# 曲線系統
# ============================================================================

@dataclass(frozen=True)
class CurveSystem:
    """
    Φ 曲線族：Φ(x) = (c log x − a x)/b

    有限 J 時 (a, b, c) = (1, J, (1+J)/β)；J = ∞ 時 (0, 1, 1/β)
    """
    a: float
    b: float
    c: float

    def __post_init__(self):
        if not self.b > 0:
            raise DomainError(f"曲線系統需要正的成分間耦合，收到 b={self.b}")

    @classmethod
    def from_params(cls, params: ModelParams) -> "CurveSystem":
        return cls(*params.coefficients())

    @classmethod
    def from_coupling(cls, beta: float, J: float) -> "CurveSystem":
        if not J > 0:
            raise DomainError(f"Φ 曲線需要 J > 0，收到 J={J}")
        if not beta > 0:
            raise DomainError(f"逆溫度 β 必須為正數，收到 {beta}")
        return cls(1.0, float(J), (1.0 + J) / beta)

    def phi(self, x):
        return (self.c * np.log(x) - self.a * x) / self.b

    def phi_scalar(self, x: float) -> float:
        return (self.c * math.log(x) - self.a * x) / self.b

    def phi_prime(self, x):
        return (self.c / x - self.a) / self.b

    @property
    def tangency_point(self) -> float:
        """Φ(x) − x 的極大點 c/(a+b)，兩種耦合下都等於 1/β"""
        return self.c / (self.a + self.b)

    def tangency_shift(self) -> float:
        """y = Φ(x) + u 與 y = x 相切時的 u"""
        x_star = self.tangency_point
        return x_star - self.phi_scalar(x_star)

    def period_doubling_point(self) -> Optional[float]:
        """Φ′(Q) = −1 的 Q = c/(a−b)；a ≤ b 時不存在"""
        if self.a <= self.b:
            return None
        return self.c / (self.a - self.b)

    def quadruple_onset(self) -> Optional[float]:
        """u = v 時 R、S 出現的位移量（Q 越過 Φ′ = −1 的位置）"""
        q_star = self.period_doubling_point()
        if q_star is None:
            return None
        return q_star - self.phi_scalar(q_star)

    # ------------------------------------------------------------------
    # 對角交點
    # ------------------------------------------------------------------

    def diagonal_roots(self, u: float) -> Tuple[float, ...]:
        """Φ(x) + u = x 的根（0、1 或 2 個，遞增）"""
        x_star = self.tangency_point

        def g(x):
            return self.phi_scalar(x) + u - x

        peak = g(x_star)
        if abs(peak) <= 1e-13 * max(1.0, abs(u)):
            return (x_star,)
        if peak < 0:
            return ()

        roots = []
        lower = 0.5 * x_star
        while g(lower) >= 0:
            lower *= 0.5
            if lower < 1e-300:
                break
        else:
            roots.append(float(brentq(g, lower, x_star, xtol=_ROOT_XTOL, rtol=_RTOL)))

        upper = 2.0 * x_star
        while g(upper) >= 0:
            upper *= 2.0
            if upper > 1e300:
                break
        else:
            roots.append(float(brentq(g, x_star, upper, xtol=_ROOT_XTOL, rtol=_RTOL)))
        return tuple(roots)

    # ------------------------------------------------------------------
    # 一般交點
    # ------------------------------------------------------------------

    def _admissible_interval(self, u: float, v: float) -> Optional[Tuple[float, float]]:
        """Φ(x) + u > 0 的區間；J = ∞ 時右端取到合成映射之後不再有根的位置"""

        def k(x):
            return self.phi_scalar(x) + u

        if self.a > 0:
            peak_x = self.c / self.a
            if k(peak_x) <= 0:
                return None
        else:
            peak_x = 1.0
            while k(peak_x) <= 0:
                peak_x *= 2.0
                if peak_x > 1e300:
                    return None

        lower = 0.5 * peak_x
        while k(lower) > 0:
            lower *= 0.5
            if lower < 1e-300:
                break
        x_lo = float(brentq(k, lower, peak_x, xtol=_ROOT_XTOL, rtol=_RTOL)) if k(lower) <= 0 else lower

        if self.a > 0:
            upper = 2.0 * peak_x
            while k(upper) > 0:
                upper *= 2.0
            x_hi = float(brentq(k, peak_x, upper, xtol=_ROOT_XTOL, rtol=_RTOL))
        else:
            # 兩條遞增曲線：x·y > (c/b)² 之後合成映射嚴格遞減
            x_hi = 2.0 * peak_x
            threshold = (self.c / self.b) ** 2
            while True:
                y = k(x_hi)
                if x_hi * y > threshold and self.phi_scalar(y) + v - x_hi < 0:
                    break
                x_hi *= 2.0
        return x_lo, x_hi

    def offdiagonal_roots(self, u: float, v: float) -> List[Point2]:
        """Φ(Φ(x)+u)+v = x 的所有根，配對 y = Φ(x)+u，依 x 遞增"""
        interval = self._admissible_interval(u, v)
        if interval is None:
            return []
        x_lo, x_hi = interval
        width = x_hi - x_lo
        grid = x_lo + width * unit_scan_grid()

        def h_vector(x):
            y = self.phi(x) + u
            y = np.where(y > 0, y, np.nan)
            return self.phi(y) + v - x

        def h_scalar(x):
            y = self.phi_scalar(x) + u
            if y <= 0:
                return -math.inf
            return self.phi_scalar(y) + v - x

        roots = scan_roots(h_vector, h_scalar, grid)
        return [(x, self.phi_scalar(x) + u) for x in roots]


# ============================================================================
# 交點四元組
# ============================================================================

@dataclass(frozen=True)
class IntersectionQuadruple:
    """交點 P、R、S、Q，依第一座標 P₁ ≤ R₁ ≤ Q₁ ≤ S₁"""
    u: float
    v: float
    P: Optional[Point2] = None
    R: Optional[Point2] = None
    S: Optional[Point2] = None
    Q: Optional[Point2] = None

    @classmethod
    def from_roots(cls, u: float, v: float, roots: List[Point2]) -> "IntersectionQuadruple":
        """依交點個數標記：4 → P,R,Q,S；3 → P,R,Q；2 → P,Q；1 → P"""
        labels = {4: "PRQS", 3: "PRQ", 2: "PQ", 1: "P"}.get(len(roots))
        if labels is None:
            if roots:
                logger.warning(f"(u, v)=({u}, {v}) 找到 {len(roots)} 個交點，僅保留前四個")
                roots = roots[:4]
                labels = "PRQS"
            else:
                labels = ""
        return cls(u=u, v=v, **dict(zip(labels, roots)))

    @property
    def count(self) -> int:
        return sum(point is not None for point in (self.P, self.R, self.S, self.Q))

    @property
    def complete(self) -> bool:
        return self.count == 4

    def points(self) -> Dict[str, Point2]:
        return {label: point for label, point in
                (('P', self.P), ('R', self.R), ('S', self.S), ('Q', self.Q)) if point is not None}


def diagonal_intersections(beta: float, J: float, u: float) -> Tuple[float, ...]:
    """y = Φ(x) + u 與 y = x 的交點（切點時回傳單一根）"""
    return CurveSystem.from_coupling(beta, J).diagonal_roots(u)


def offdiagonal_intersections(beta: float, J: float, u: float, v: float) -> IntersectionQuadruple:
    """y = Φ(x) + u 與 x = Φ(y) + v 的交點四元組（可能不完整）"""
    system = CurveSystem.from_coupling(beta, J)
    return IntersectionQuadruple.from_roots(u, v, system.offdiagonal_roots(u, v))


# ============================================================================
# 座標和診斷
# ============================================================================

@dataclass(frozen=True)
class SumDiagnostics:
    """
    單調性 / 凸性定理所涉及的座標和，交點不存在者為 None

    未標下標者一律取第一座標：r_plus_s_plus_q 即 R₁+S₁+Q₁，p_plus_s_plus_q 即 P₁+S₁+Q₁
    """
    u: float
    v: float
    two_p_plus_q: Optional[float] = None
    p_plus_two_q: Optional[float] = None
    p_plus_r_plus_s: Optional[float] = None
    r_plus_s_plus_q: Optional[float] = None
    p_plus_s_plus_q: Optional[float] = None
    p2_r2_s2: Optional[float] = None
    p2_r2_q2: Optional[float] = None

    def to_dict(self) -> dict:
        return asdict(self)


def _sum(points: Dict[str, Point2], labels: str, axis: int, weights: Tuple[int, ...] = None) -> Optional[float]:
    if any(label not in points for label in labels):
        return None
    weights = weights or (1,) * len(labels)
    return float(sum(w * points[label][axis] for w, label in zip(weights, labels)))


def sum_diagnostics(beta: float, J: float, u: float, v: float) -> SumDiagnostics:
    """
    計算交點座標和

    u = v 時 P、Q 在對角線上，第一座標即對角參數；
    一般情況下下標 1、2 代表第一、第二座標
    """
    quadruple = offdiagonal_intersections(beta, J, u, v)
    points = quadruple.points()
    return SumDiagnostics(
        u=u,
        v=v,
        two_p_plus_q=_sum(points, "PQ", 0, (2, 1)),
        p_plus_two_q=_sum(points, "PQ", 0, (1, 2)),
        p_plus_r_plus_s=_sum(points, "PRS", 0),
        r_plus_s_plus_q=_sum(points, "RSQ", 0),
        p_plus_s_plus_q=_sum(points, "PSQ", 0),
        p2_r2_s2=_sum(points, "PRS", 1),
        p2_r2_q2=_sum(points, "PRQ", 1),
    )


@dataclass(frozen=True)
class AuxiliaryInequalities:
    """P+R+S 單調性證明中的三個不等式（X̃ = −1 + (1+J)/(βX)）"""
    j_plus_gamma_rs: float
    p_tilde_minus_3j: float
    p_tilde_minus_j_minus_1: float

    def to_dict(self) -> dict:
        return asdict(self)


def auxiliary_inequalities(beta: float, J: float, u: float) -> Optional[AuxiliaryInequalities]:
    """u = v 四元組完整時回傳三個不等式的左式值，否則回傳 None"""
    quadruple = offdiagonal_intersections(beta, J, u, u)
    if not quadruple.complete:
        return None
    c = (1.0 + J) / beta
    p = quadruple.P[0]
    r, s = quadruple.R[0], quadruple.S[0]
    p_tilde = -1.0 + c / p
    gamma_rs = -1.0 + c / math.sqrt(r * s)
    return AuxiliaryInequalities(
        j_plus_gamma_rs=J + gamma_rs,
        p_tilde_minus_3j=p_tilde - 3.0 * J,
        p_tilde_minus_j_minus_1=p_tilde - J - 1.0,
    )


# ============================================================================
# P+R+S 下界
# ============================================================================

@dataclass(frozen=True)
class PRSMinimumCheck:
    """(P+R+S)(u) > 1 的檢查結果"""
    exceeds_one: bool
    closed_form_minimum: Optional[float]
    grid_minimum: Optional[float]
    beyond_closed_form: bool = False

    def to_dict(self) -> dict:
        return asdict(self)


def prs_closed_form_minimum(beta: float, J: float) -> float:
    """(1+J)(2+J)/(β(1−2J)(1+3J))，於 (1+J)/(βP) = 3J+1 取得"""
    if not (0.0 < J < 0.5):
        raise DomainError(f"封閉形式只適用於 J ∈ (0, 1/2)，收到 J={J}")
    return (1.0 + J) * (2.0 + J) / (beta * (1.0 - 2.0 * J) * (1.0 + 3.0 * J))


def prs_grid_minimum(beta: float, J: float, points: int = 400) -> Optional[float]:
    """u = v 四元組存在區間上 (P+R+S)(u) 的網格最小值；四元組不存在時回傳 None"""
    system = CurveSystem.from_coupling(beta, J)
    onset = system.quadruple_onset()
    if onset is None:
        return None
    # u 超過 Q = 1 之後 S > Q > 1，和必定大於 1
    upper = max(1.0 - system.phi_scalar(1.0), onset + 0.1)
    best = None
    for u in np.linspace(onset, upper, points + 1)[1:]:
        quadruple = IntersectionQuadruple.from_roots(u, u, system.offdiagonal_roots(u, u))
        if not quadruple.complete:
            continue
        total = quadruple.P[0] + quadruple.R[0] + quadruple.S[0]
        best = total if best is None else min(best, total)
    return best


def prs_minimum_exceeds_one(beta: float, J: float, grid_points: int = 400) -> PRSMinimumCheck:
    """
    判斷 (P+R+S)(u) 的最小值是否大於 1

    J ≥ 1/2 時封閉形式不適用，回傳 True 並標記 beyond_closed_form
    """
    if not J > 0:
        raise DomainError(f"P+R+S 檢查需要 J > 0，收到 J={J}")
    grid_minimum = prs_grid_minimum(beta, J, grid_points)
    if J >= 0.5:
        return PRSMinimumCheck(True, None, grid_minimum, beyond_closed_form=True)
    closed_form = prs_closed_form_minimum(beta, J)
    if grid_minimum is not None and grid_minimum < closed_form - 1e-6:
        logger.warning(f"β={beta}, J={J}：網格最小值 {grid_minimum:.8f} 低於封閉形式 {closed_form:.8f}")
    return PRSMinimumCheck(closed_form > 1.0, closed_form, grid_minimum)


# ============================================================================
# 交換對稱族候選點
# ============================================================================

def swap_family_candidates(system: CurveSystem, points: int = 240) -> List[Tuple[Tuple[float, ...], Tuple[float, ...]]]:
    """
    u = v 時由 {P,R,S}、{Q,R,S} 組成的候選臨界點

    在 u 網格上找座標和穿越 1 的位置，回傳正規化後的 (x, y) 近似值，
    其中 x = (X, R, S)、y = (X, S, R)
    """
    onset = system.quadruple_onset()
    if onset is None:
        return []
    upper = max(1.0 - system.phi_scalar(1.0), onset + 0.1)
    grid = np.linspace(onset, upper, points + 1)[1:]

    previous: Dict[str, Tuple[float, Tuple[float, float, float]]] = {}
    candidates = []
    for u in grid:
        quadruple = IntersectionQuadruple.from_roots(u, u, system.offdiagonal_roots(u, u))
        if not quadruple.complete:
            previous.clear()
            continue
        r, s = quadruple.R[0], quadruple.S[0]
        for label, anchor in (('P', quadruple.P[0]), ('Q', quadruple.Q[0])):
            triple = (anchor, r, s)
            excess = sum(triple) - 1.0
            if label in previous:
                prev_excess, prev_triple = previous[label]
                if prev_excess * excess <= 0:
                    best_excess, best = min((abs(prev_excess), prev_triple), (abs(excess), triple))
                    total = sum(best)
                    x = tuple(value / total for value in best)
                    candidates.append((x, (x[0], x[2], x[1])))
            previous[label] = (excess, triple)
    return candidates
