"""
臨界點分析模組
以多起點阻尼 Newton 找出自由能的所有臨界點，依 Hessian 譜分類、
判定 𝔖² / 𝔏² / 均勻點歸屬、排序極小值並判斷兩成分是否同步
"""

import math
import logging
import itertools
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np

from core.config import NewtonConfig
from core.exceptions import DomainError, NoSolutionError, SolverError
from core.model import ModelParams, PairMagnetization, ReducedPoint, Regime, embed
from core.stats import CensusCounts
from processors.intersections import CurveSystem, scan_roots, swap_family_candidates, unit_scan_grid
from processors.landscape import (
    BOUNDARY_MARGIN, free_energy_array, gradient_array, hessian_array, interior_mask,
)
from processors.phase_boundaries import psi_desync, psi_sync, zeta1, zeta2
from processors.scalar_analysis import (
    critical_constants, f_compare, f_tilde, phi_prime, psi_fn_prime, solve_branches, theta_prime,
)


# 同一能階的鞍點視為並列最低
SADDLE_VALUE_TOLERANCE = 1e-9

MIN_GRID_DENSITY = 8


# ============================================================================
# 列舉型態
# ============================================================================

class PointClass(str, Enum):
    """臨界點類型"""
    LOCAL_MIN = "LocalMin"
    SADDLE = "Saddle"
    HIGHER_INDEX = "HigherIndex"
    LOCAL_MAX = "LocalMax"
    DEGENERATE = "Degenerate"


class Membership(str, Enum):
    """臨界點所屬的對稱族"""
    UNIFORM = "Uniform"
    IN_S2 = "InS2"
    IN_L2 = "InL2"
    OTHER = "Other"


SYNC_COMPATIBLE = frozenset({Membership.UNIFORM, Membership.IN_S2, Membership.IN_L2})


def classify_index(morse_index: int, dimension: int) -> PointClass:
    if morse_index == 0:
        return PointClass.LOCAL_MIN
    if morse_index == dimension:
        return PointClass.LOCAL_MAX
    if morse_index == 1:
        return PointClass.SADDLE
    return PointClass.HIGHER_INDEX


# ============================================================================
# 資料結構
# ============================================================================

@dataclass(frozen=True)
class CriticalPoint:
    """單一臨界點"""
    location: PairMagnetization
    value: float
    spectrum: Tuple[float, ...]
    morse_index: int
    classification: PointClass
    membership: Membership

    def reduced(self) -> np.ndarray:
        return _to_reduced(self.location.as_array())

    def to_dict(self) -> dict:
        return {
            'location': self.location.to_list(),
            'value': self.value,
            'spectrum': list(self.spectrum),
            'morse_index': self.morse_index,
            'classification': self.classification.value,
            'membership': self.membership.value,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CriticalPoint":
        first, second = data['location']
        return cls(
            location=PairMagnetization.from_weights(first, second),
            value=float(data['value']),
            spectrum=tuple(float(v) for v in data['spectrum']),
            morse_index=int(data['morse_index']),
            classification=PointClass(data['classification']),
            membership=Membership(data['membership']),
        )


@dataclass(frozen=True)
class LandscapeSummary:
    """find_critical_points 的結果"""
    params: ModelParams
    points: Tuple[CriticalPoint, ...]
    minima_order: Tuple[int, ...]
    lowest_saddles: Tuple[int, ...]
    regime: Regime
    grid_density: int = MIN_GRID_DENSITY

    def __post_init__(self):
        n = len(self.points)
        for index in self.minima_order + self.lowest_saddles:
            if not 0 <= index < n:
                raise DomainError(f"索引 {index} 超出臨界點清單範圍 (共 {n} 個)")
        values = [self.points[i].value for i in self.minima_order]
        if any(b < a for a, b in zip(values, values[1:])):
            raise DomainError("minima_order 必須依自由能遞增排序")

    def counts(self) -> CensusCounts:
        counts = CensusCounts()
        attribute = {
            PointClass.LOCAL_MIN: 'minima',
            PointClass.SADDLE: 'saddles',
            PointClass.HIGHER_INDEX: 'higher_index',
            PointClass.LOCAL_MAX: 'maxima',
            PointClass.DEGENERATE: 'degenerate',
        }
        for point in self.points:
            name = attribute[point.classification]
            setattr(counts, name, getattr(counts, name) + 1)
            key = f"{point.classification.value}/{point.membership.value}"
            counts.by_membership[key] = counts.by_membership.get(key, 0) + 1
        return counts

    def select(self, classification: PointClass = None, membership: Membership = None) -> List[CriticalPoint]:
        """依類型與歸屬篩選臨界點"""
        return [p for p in self.points
                if (classification is None or p.classification == classification)
                and (membership is None or p.membership == membership)]

    def to_dict(self) -> dict:
        return {
            'params': self.params.to_dict(),
            'grid_density': self.grid_density,
            'regime': self.regime.value,
            'points': [point.to_dict() for point in self.points],
            'minima_order': list(self.minima_order),
            'lowest_saddles': list(self.lowest_saddles),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LandscapeSummary":
        return cls(
            params=ModelParams.from_dict(data['params']),
            points=tuple(CriticalPoint.from_dict(p) for p in data['points']),
            minima_order=tuple(int(i) for i in data['minima_order']),
            lowest_saddles=tuple(int(i) for i in data['lowest_saddles']),
            regime=Regime(data['regime']),
            grid_density=int(data.get('grid_density', MIN_GRID_DENSITY)),
        )


@dataclass(frozen=True)
class OrderedMinimum:
    index: int
    value: float
    gap: float
    membership: Membership

    def to_dict(self) -> dict:
        return {'index': self.index, 'value': self.value, 'gap': self.gap, 'membership': self.membership.value}


@dataclass(frozen=True)
class MinimaOrdering:
    """依自由能排序的極小值與對稱族間的能隙"""
    ordered: Tuple[OrderedMinimum, ...]
    analytic_gap: Optional[float] = None
    gap_label: Optional[str] = None
    numeric_gap: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            'ordered': [entry.to_dict() for entry in self.ordered],
            'gap_label': self.gap_label,
            'analytic_gap': self.analytic_gap,
            'numeric_gap': self.numeric_gap,
        }


# ============================================================================
# 對稱軌道
# ============================================================================

def _orbit_arrays(full: np.ndarray) -> List[np.ndarray]:
    """同時置換兩成分的自旋標籤，以及交換兩成分"""
    q = full.shape[-1]
    orbit = []
    for permutation in itertools.permutations(range(q)):
        permuted = full[:, list(permutation)]
        orbit.append(permuted)
        orbit.append(permuted[::-1])
    return orbit


def symmetry_orbit(location: PairMagnetization) -> List[PairMagnetization]:
    """點在自旋置換與成分交換下的所有像"""
    return [PairMagnetization.from_weights(*image) for image in _orbit_arrays(location.as_array())]


def _to_reduced(full: np.ndarray) -> np.ndarray:
    return np.concatenate([full[0, :-1], full[1, :-1]])


# ============================================================================
# 臨界點搜尋器
# ============================================================================

class CriticalPointFinder:
    """
    多起點阻尼 Newton 臨界點搜尋器

    起點為約化定義域的內部網格節點加上解析種子，
    收斂點去重後再以對稱軌道補齊。
    """

    def __init__(self, config: Optional[NewtonConfig] = None):
        self.config = config or NewtonConfig()
        self.logger = logging.getLogger("CWPLogger")

    # ------------------------------------------------------------------
    # 起點
    # ------------------------------------------------------------------

    @staticmethod
    def grid_starts(q: int, density: int) -> np.ndarray:
        """每個成分取 (q−1) 維網格 i/n 的內部節點，兩成分做笛卡兒積"""
        nodes = [c for c in itertools.product(range(1, density), repeat=q - 1) if sum(c) <= density - 1]
        component = np.asarray(nodes, dtype=float) / density
        m = len(component)
        return np.concatenate([np.repeat(component, m, axis=0), np.tile(component, (m, 1))], axis=1)

    def seed_starts(self, params: ModelParams) -> np.ndarray:
        """解析種子（含對稱軌道），形狀 (n, 2(q−1))"""
        if params.q == 3:
            seeds = self._symmetric_form_seeds(params) + self._swap_family_seeds(params)
        else:
            seeds = self._two_cycle_seeds(params)
        reduced = [_to_reduced(image) for seed in seeds for image in _orbit_arrays(seed)]
        if not reduced:
            return np.empty((0, params.dimension))
        starts = np.asarray(reduced)
        return starts[np.all(np.isfinite(starts), axis=1)]

    def _symmetric_form_seeds(self, params: ModelParams) -> List[np.ndarray]:
        a, b, c = params.coefficients()

        def triple(s: float, odd: int) -> List[float]:
            values = [s, s, s]
            values[odd] = 1.0 - 2.0 * s
            return values

        # 對角不動點 ψ(s) = s 即單成分方程的 {1/3, x_s, x_l}；x_s 緊貼 ψ < 0 的區域，
        # 掃描無法夾擠，直接播種。b = 0 時兩成分獨立，任意排列組合皆為臨界點；
        # b ≠ 0 時不同排列的組合只作為靠近頂點的 Newton 起點
        levels = [1.0 / 3.0]
        try:
            branches = solve_branches(params.beta)
            levels += [branches.x_s, branches.x_l]
        except NoSolutionError:
            pass
        seeds = [np.array([triple(s, i), triple(t, j)])
                 for s in levels for t in levels for i in range(3) for j in range(3)]
        if b == 0.0:
            return seeds

        def psi(s):
            return 1.0 / 3.0 + (a * (1.0 - 3.0 * s) + c * np.log(s / (1.0 - 2.0 * s))) / (3.0 * b)

        def h_vector(s):
            t = psi(s)
            t = np.where((t > 0.0) & (t < 0.5), t, np.nan)
            return psi(t) - s

        def h_scalar(s):
            t = float(psi(s))
            if not 0.0 < t < 0.5:
                return math.nan
            return float(psi(t)) - s

        roots = scan_roots(h_vector, h_scalar, 0.5 * unit_scan_grid(1000))
        for s in roots:
            t = float(psi(s))
            if 0.0 < t < 0.5:
                seeds.append(np.array([triple(s, 2), triple(t, 2)]))
        return seeds

    def _swap_family_seeds(self, params: ModelParams) -> List[np.ndarray]:
        a, b, c = params.coefficients()
        if b == 0.0:
            return []
        candidates = swap_family_candidates(CurveSystem(a, b, c))
        return [np.array([x, y]) for x, y in candidates]

    def _two_cycle_seeds(self, params: ModelParams) -> List[np.ndarray]:
        a, b, c = params.coefficients()
        grid = 2.0 * unit_scan_grid(1000) - 1.0

        def to_full(sigma: float, tau: float) -> np.ndarray:
            return np.array([[0.5 * (1.0 + sigma), 0.5 * (1.0 - sigma)],
                             [0.5 * (1.0 + tau), 0.5 * (1.0 - tau)]])

        def log_ratio(s):
            return np.log1p(s) - np.log1p(-s)

        if b == 0.0:
            def g(s):
                return c * log_ratio(s) - a * s

            levels = scan_roots(g, lambda s: float(g(s)), grid)
            return [to_full(s, t) for s in levels for t in levels]

        def T(s):
            return (c * log_ratio(s) - a * s) / b

        def h_vector(s):
            t = T(s)
            t = np.where(np.abs(t) < 1.0, t, np.nan)
            return T(t) - s

        def h_scalar(s):
            t = float(T(s))
            if not abs(t) < 1.0:
                return math.nan
            return float(T(t)) - s

        seeds = []
        for sigma in scan_roots(h_vector, h_scalar, grid):
            tau = float(T(sigma))
            if abs(tau) < 1.0:
                seeds.append(to_full(sigma, tau))
        return seeds

    # ------------------------------------------------------------------
    # 阻尼 Newton
    # ------------------------------------------------------------------

    @staticmethod
    def _newton_steps(hess: np.ndarray, rhs: np.ndarray) -> np.ndarray:
        try:
            return np.linalg.solve(hess, rhs[..., None])[..., 0]
        except np.linalg.LinAlgError:
            steps = np.full_like(rhs, np.nan)
            for i in range(len(hess)):
                try:
                    steps[i] = np.linalg.solve(hess[i], rhs[i])
                except np.linalg.LinAlgError:
                    pass
            return steps

    def _line_search(self, params: ModelParams, z: np.ndarray, g: np.ndarray, norms: np.ndarray,
                     idx: np.ndarray, steps: np.ndarray) -> np.ndarray:
        """步長減半直到仍在內部且梯度範數下降；就地更新 z、g、norms"""
        accepted = np.zeros(len(idx), dtype=bool)
        pending = np.all(np.isfinite(steps), axis=1)
        alpha = 1.0
        for _ in range(self.config.max_halvings + 1):
            rows = np.flatnonzero(pending)
            if rows.size == 0:
                break
            trial = z[idx[rows]] + alpha * steps[rows]
            inside = interior_mask(trial, params.q, BOUNDARY_MARGIN)
            ok = np.zeros(rows.size, dtype=bool)
            if inside.any():
                g_trial = gradient_array(params, trial[inside])
                n_trial = np.linalg.norm(g_trial, axis=1)
                better = n_trial < norms[idx[rows[inside]]]
                inside_rows = np.flatnonzero(inside)[better]
                target = idx[rows[inside_rows]]
                z[target] = trial[inside_rows]
                g[target] = g_trial[better]
                norms[target] = n_trial[better]
                ok[inside_rows] = True
            accepted[rows[ok]] = True
            pending[rows[ok]] = False
            alpha *= 0.5
        return accepted

    def polish(self, params: ModelParams, starts: np.ndarray) -> np.ndarray:
        """
        批次阻尼 Newton

        Returns:
            收斂點（梯度範數 < gradient_tolerance），發散的起點直接捨棄
        """
        cfg = self.config
        z = np.array(starts, dtype=float, copy=True).reshape(-1, params.dimension)
        z = z[np.all(np.isfinite(z), axis=1)]
        z = z[interior_mask(z, params.q, BOUNDARY_MARGIN)]
        if len(z) == 0:
            return z

        with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
            g = gradient_array(params, z)
            norms = np.linalg.norm(g, axis=1)
            active = np.isfinite(norms)
            converged = np.zeros(len(z), dtype=bool)
            for _ in range(cfg.max_iterations):
                done = active & (norms < cfg.gradient_tolerance)
                converged |= done
                active &= ~done
                idx = np.flatnonzero(active)
                if idx.size == 0:
                    break
                steps = self._newton_steps(hessian_array(params, z[idx]), -g[idx])
                accepted = self._line_search(params, z, g, norms, idx, steps)
                active[idx[~accepted]] = False
            converged |= active & (norms < cfg.gradient_tolerance)

        self.logger.debug(f"Newton：{len(z)} 個起點，{int(converged.sum())} 個收斂")
        return z[converged]

    def deduplicate(self, z: np.ndarray) -> np.ndarray:
        """距離小於 dedup_radius 的點合併為同一代表點"""
        if len(z) == 0:
            return z
        _, first = np.unique(np.round(z, 7), axis=0, return_index=True)
        representatives: List[np.ndarray] = []
        for point in z[np.sort(first)]:
            if representatives:
                distances = np.linalg.norm(np.asarray(representatives) - point, axis=1)
                if distances.min() < self.config.dedup_radius:
                    continue
            representatives.append(point)
        return np.asarray(representatives)

    # ------------------------------------------------------------------
    # 分類與歸屬
    # ------------------------------------------------------------------

    def classify_spectrum(self, spectrum: np.ndarray) -> Tuple[int, PointClass]:
        tol = self.config.eigen_tolerance
        morse_index = int(np.sum(spectrum < -tol))
        if np.any(np.abs(spectrum) <= tol):
            return morse_index, PointClass.DEGENERATE
        return morse_index, classify_index(morse_index, len(spectrum))

    def membership(self, params: ModelParams, full: np.ndarray) -> Membership:
        tol = self.config.membership_tolerance
        q = params.q
        if np.max(np.abs(full - 1.0 / q)) < tol:
            return Membership.UNIFORM
        if np.max(np.abs(full[0] - full[1])) >= tol:
            return Membership.OTHER
        if q == 2:
            return Membership.IN_S2
        try:
            branches = solve_branches(params.beta)
        except NoSolutionError:
            return Membership.OTHER
        ordered = np.sort(full[0])
        for membership, level in ((Membership.IN_S2, branches.x_s), (Membership.IN_L2, branches.x_l)):
            target = np.sort([level, level, 1.0 - 2.0 * level])
            if np.max(np.abs(ordered - target)) < tol:
                return membership
        return Membership.OTHER

    def near_boundary(self, params: ModelParams) -> bool:
        """(β, J) 是否落在相界附近的不確定帶內"""
        band = self.config.boundary_band
        beta = params.beta
        if params.q == 3:
            constants = critical_constants()
            if any(abs(beta - edge) < band for edge in (constants.beta1, constants.beta2, constants.beta3)):
                return True
            if params.is_finite:
                J = params.J
                return abs(J - psi_sync(beta)) < band or abs(J - psi_desync(beta)) < band
            return False
        if abs(beta - 2.0) < band:
            return True
        if params.is_finite and beta >= 2.0:
            J = params.J
            return abs(J - zeta1(beta)) < band or abs(J - zeta2(beta)) < band
        return False

    def decide_regime(self, params: ModelParams, points: Sequence[CriticalPoint],
                      minima: Sequence[int], lowest_saddles: Sequence[int]) -> Regime:
        if any(p.classification == PointClass.DEGENERATE for p in points) or self.near_boundary(params):
            return Regime.INDETERMINATE
        governing = list(minima) + list(lowest_saddles)
        if all(points[i].membership in SYNC_COMPATIBLE for i in governing):
            return Regime.SYNCHRONIZED
        return Regime.DESYNCHRONIZED

    # ------------------------------------------------------------------
    # 主流程
    # ------------------------------------------------------------------

    def find(self, params: ModelParams, grid_density: Optional[int] = None) -> LandscapeSummary:
        params.require_analysis_q()
        density = self.config.default_grid_density if grid_density is None else int(grid_density)
        if density < MIN_GRID_DENSITY:
            raise DomainError(f"grid_density 必須 ≥ {MIN_GRID_DENSITY}，收到 {density}")

        starts = np.concatenate([self.grid_starts(params.q, density), self.seed_starts(params)])
        found = self.deduplicate(self.polish(params, starts))

        # 以對稱軌道補齊
        closure = [_to_reduced(image) for z in found
                   for image in _orbit_arrays(np.asarray(embed(ReducedPoint(tuple(z))).as_array()))]
        if closure:
            found = self.deduplicate(np.concatenate([found, self.polish(params, np.asarray(closure))]))

        if len(found) == 0:
            raise SolverError(f"{params}：所有 Newton 起點皆未收斂")

        values = free_energy_array(params, found)
        order = np.lexsort(tuple(found.T[::-1]) + (values,))
        found, values = found[order], values[order]
        spectra = np.linalg.eigvalsh(hessian_array(params, found))

        points = []
        for z, value, spectrum in zip(found, values, spectra):
            location = embed(ReducedPoint(tuple(z)))
            morse_index, classification = self.classify_spectrum(spectrum)
            points.append(CriticalPoint(
                location=location,
                value=float(value),
                spectrum=tuple(float(v) for v in spectrum),
                morse_index=morse_index,
                classification=classification,
                membership=self.membership(params, location.as_array()),
            ))

        minima = [i for i, p in enumerate(points) if p.classification == PointClass.LOCAL_MIN]
        if not minima:
            raise SolverError(f"{params}：找不到任何局部極小值")
        minima.sort(key=lambda i: points[i].value)

        saddles = [i for i, p in enumerate(points) if p.classification == PointClass.SADDLE]
        lowest = []
        if saddles:
            floor = min(points[i].value for i in saddles)
            lowest = [i for i in saddles if points[i].value <= floor + SADDLE_VALUE_TOLERANCE]

        regime = self.decide_regime(params, points, minima, lowest)
        summary = LandscapeSummary(
            params=params,
            points=tuple(points),
            minima_order=tuple(minima),
            lowest_saddles=tuple(lowest),
            regime=regime,
            grid_density=density,
        )
        self.logger.debug(f"{params}：{summary.counts()}，相區 {regime.value}")
        return summary


def find_critical_points(params: ModelParams, grid_density: int = MIN_GRID_DENSITY,
                         config: Optional[NewtonConfig] = None) -> LandscapeSummary:
    """找出所有臨界點並判定同步相區"""
    return CriticalPointFinder(config).find(params, grid_density)


# ============================================================================
# 對稱點分類（斜率判準）
# ============================================================================

def _block_signs(trace: float, det: float, tol: float) -> Optional[int]:
    """2×2 區塊的負特徵值個數；行列式接近 0 時回傳 None"""
    if abs(det) <= tol:
        return None
    if det < 0:
        return 1
    return 0 if trace > 0 else 2


def classify_symmetric(params: ModelParams, s: float, t: float, tol: float = 1e-8) -> PointClass:
    """
    以斜率判準分類對稱點

    q=3 的點為 (s,s,1−2s, t,t,1−2t)，判準為 Φ′(s)+Φ′(t)、Φ′(s)Φ′(t)−1、
    Ψ′(s)+Ψ′(t)、Ψ′(s)Ψ′(t)−1；q=2 的點為 (s,1−s, t,1−t)，判準為 Θ′
    """
    params.require_analysis_q()
    a, b, c = params.coefficients()
    slope_form = params.is_finite and params.J > 0

    if params.q == 3:
        for name, value in (('s', s), ('t', t)):
            if not 0.0 < value < 0.5:
                raise DomainError(f"{name} 必須位於 (0, 1/2)，收到 {value}")
        if slope_form:
            beta, J = params.beta, params.J
            ps, pt = phi_prime(s, beta, J), phi_prime(t, beta, J)
            qs, qt = psi_fn_prime(s, beta, J), psi_fn_prime(t, beta, J)
            blocks = ((J * (ps + pt), J * J * (ps * pt - 1.0)),
                      (3.0 * J * (qs + qt), 9.0 * J * J * (qs * qt - 1.0)))
        else:
            ds, dt = c / s - a, c / t - a
            es, et = c / (s * (1.0 - 2.0 * s)) - 3.0 * a, c / (t * (1.0 - 2.0 * t)) - 3.0 * a
            blocks = ((ds + dt, ds * dt - b * b), (es + et, es * et - 9.0 * b * b))
        dimension = 4
    else:
        for name, value in (('s', s), ('t', t)):
            if not 0.0 < value < 1.0:
                raise DomainError(f"{name} 必須位於 (0, 1)，收到 {value}")
        if slope_form:
            beta, J = params.beta, params.J
            ts, tt = theta_prime(2.0 * s - 1.0, beta, J), theta_prime(2.0 * t - 1.0, beta, J)
            blocks = ((2.0 * J * (ts + tt), 4.0 * J * J * (ts * tt - 1.0)),)
        else:
            ds = c / (s * (1.0 - s)) - 2.0 * a
            dt = c / (t * (1.0 - t)) - 2.0 * a
            blocks = ((ds + dt, ds * dt - 4.0 * b * b),)
        dimension = 2

    negatives = [_block_signs(trace, det, tol) for trace, det in blocks]
    if any(n is None for n in negatives):
        return PointClass.DEGENERATE
    return classify_index(sum(negatives), dimension)


# ============================================================================
# 極小值排序
# ============================================================================

def _q2_axis_minimum(summary: LandscapeSummary, antidiagonal: bool) -> Optional[CriticalPoint]:
    tol = 1e-6
    for point in summary.select(PointClass.LOCAL_MIN):
        x, y = point.location.first.weights[0], point.location.second.weights[0]
        if abs(x - 0.5) < tol and abs(y - 0.5) < tol:
            continue
        if antidiagonal and abs(x + y - 1.0) < tol:
            return point
        if not antidiagonal and abs(x - y) < tol:
            return point
    return None


def minima_ordering(summary: LandscapeSummary) -> MinimaOrdering:
    """
    依自由能排序極小值，並回報對稱族間的能隙

    q=3：uniform_vs_small = F(𝔖² 點) − F(q₃) = (1+J)·F̃(x_s)；
    q=2：antidiagonal_vs_diagonal = F(反對角極小) − F(對角極小) = ((1+J)/β)(f(s₁) − f(s₂))
    """
    if not summary.minima_order:
        raise DomainError("摘要中沒有局部極小值")
    points = summary.points
    lowest = points[summary.minima_order[0]].value
    ordered = tuple(
        OrderedMinimum(index=i, value=points[i].value, gap=points[i].value - lowest,
                       membership=points[i].membership)
        for i in summary.minima_order
    )

    params = summary.params
    if params.q == 3:
        try:
            branches = solve_branches(params.beta)
        except NoSolutionError:
            return MinimaOrdering(ordered)
        scale = (1.0 + params.J) if params.is_finite else 1.0
        analytic = scale * f_tilde(branches.x_s)
        small = summary.select(membership=Membership.IN_S2)
        uniform = summary.select(membership=Membership.UNIFORM)
        numeric = small[0].value - uniform[0].value if small and uniform else None
        return MinimaOrdering(ordered, analytic, "uniform_vs_small", numeric)

    if not params.is_finite:
        return MinimaOrdering(ordered)
    diagonal = _q2_axis_minimum(summary, antidiagonal=False)
    anti = _q2_axis_minimum(summary, antidiagonal=True)
    if diagonal is None or anti is None:
        return MinimaOrdering(ordered)
    s1 = abs(2.0 * diagonal.location.first.weights[0] - 1.0)
    s2 = abs(2.0 * anti.location.first.weights[0] - 1.0)
    c = params.coefficients()[2]
    analytic = c * (f_compare(s1) - f_compare(s2))
    return MinimaOrdering(ordered, analytic, "antidiagonal_vs_diagonal", anti.value - diagonal.value)
