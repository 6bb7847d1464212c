"""
相圖掃描模組
在 (β, J) 網格上計算相界值、解析相區，並可選擇以臨界點普查取得數值相區
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Tuple

import numpy as np

from core.config import NewtonConfig, SweepConfig
from core.exceptions import DomainError, LandscapeError
from core.model import Coupling, ModelParams, Regime
from processors.critical_points import CriticalPointFinder
from processors.phase_boundaries import boundary_values, decide_analytic



@dataclass(frozen=True)
class PhaseSample:
    """相圖上的單一節點"""
    q: int
    beta: float
    J: float
    boundaries: Dict[str, Optional[float]]
    analytic_regime: Regime
    reason: str = ""
    numeric_regime: Optional[Regime] = None
    error: Optional[str] = None

    def columns(self) -> List[str]:
        return ['beta', 'J'] + list(self.boundaries) + ['analytic_regime', 'numeric_regime']

    def to_row(self, include_error: bool = False) -> dict:
        """CSV 列：beta, J, 相界值, analytic_regime, numeric_regime（未計算時為空字串）"""
        row = {'beta': self.beta, 'J': self.J}
        row.update(self.boundaries)
        row['analytic_regime'] = self.analytic_regime.value
        row['numeric_regime'] = self.numeric_regime.value if self.numeric_regime is not None else ""
        if include_error:
            row['error'] = self.error or ""
        return row


def _axis(bounds: Tuple[float, float], count: int, name: str, allow_zero: bool) -> np.ndarray:
    start, stop = bounds
    if count < 2:
        raise DomainError(f"{name} 的節點數必須 ≥ 2，收到 {count}")
    lowest = min(start, stop)
    if lowest < 0 or (lowest == 0 and not allow_zero):
        raise DomainError(f"{name} 的範圍必須為正：{start}:{stop}")
    return np.linspace(start, stop, count)


class PhaseSweeper:
    """(β, J) 網格掃描器"""

    def __init__(self, sweep_config: Optional[SweepConfig] = None,
                 newton_config: Optional[NewtonConfig] = None):
        self.sweep_config = sweep_config or SweepConfig()
        self.finder = CriticalPointFinder(newton_config)
        self.logger = logging.getLogger("CWPLogger")

    def _numeric(self, sample: PhaseSample, grid_density: int) -> PhaseSample:
        params = ModelParams.finite(sample.q, sample.beta, sample.J)
        try:
            summary = self.finder.find(params, grid_density)
        except LandscapeError as e:
            self.logger.warning(f"節點 β={sample.beta}, J={sample.J} 數值普查失敗：{e}")
            return replace(sample, error=f"{type(e).__name__}: {e}")
        return replace(sample, numeric_regime=summary.regime)

    def sweep(self, beta_range: Tuple[float, float], J_range: Tuple[float, float],
              n_beta: int, n_J: int, with_numeric: bool = False, q: int = 3,
              grid_density: int = 8) -> List[PhaseSample]:
        """
        依網格順序（β 外層、J 內層）產生 PhaseSample

        每列 β 只計算一次相界；數值普查以執行緒池平行執行，結果維持網格順序
        """
        if q not in (2, 3):
            raise DomainError(f"相圖掃描只支援 q ∈ {{2, 3}}，收到 q={q}")
        betas = _axis(beta_range, n_beta, "β", allow_zero=False)
        couplings = _axis(J_range, n_J, "J", allow_zero=True)

        samples = []
        for beta in betas:
            beta = float(beta)
            boundaries = boundary_values(q, beta)
            for J in couplings:
                J = float(J)
                decision = decide_analytic(q, beta, Coupling.finite(J), boundaries)
                samples.append(PhaseSample(q, beta, J, boundaries, decision.regime, decision.reason))
        self.logger.info(f"已計算 {len(samples)} 個節點的解析相區")

        if not with_numeric:
            return samples

        threads = self.sweep_config.resolve_threads()
        self.logger.info(f"以 {threads} 個執行緒進行數值普查 (grid_density={grid_density})")
        with ThreadPoolExecutor(max_workers=threads) as executor:
            return list(executor.map(lambda s: self._numeric(s, grid_density), samples))


def sweep(beta_range: Tuple[float, float], J_range: Tuple[float, float], n_beta: int, n_J: int,
          with_numeric: bool = False, q: int = 3, grid_density: int = 8,
          sweep_config: Optional[SweepConfig] = None,
          newton_config: Optional[NewtonConfig] = None) -> List[PhaseSample]:
    """相圖掃描"""
    return PhaseSweeper(sweep_config, newton_config).sweep(
        beta_range, J_range, n_beta, n_J, with_numeric, q, grid_density)
