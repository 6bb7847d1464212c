"""
分析流程協調器
負責把命令列設定分派到各業務模組，並寫出唯一的產出物
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

from core.config import ConfigManager
from core.exceptions import DomainError, LandscapeError
from core.logger import LoggerManager
from core.model import ModelParams, PairMagnetization, ReducedPoint, embed, reduce
from processors import (
    ExcelExporter,
    PhaseSweeper,
    ReportService,
    CriticalPointFinder,
    minima_ordering,
)
from processors.finite_system import (
    MAX_BRUTE_FORCE_STATES,
    MAX_MEASURABILITY_N,
    argmax_distance,
    enumerate_nu,
    exact_nu,
    hamiltonian_is_magnetization_measurable,
    stirling_gap,
)
from processors.landscape import eigenvalues, energy_part, entropy_part, free_energy_of, gradient, hessian
from processors.phase_boundaries import analytic_regime, crossings
from processors.scalar_analysis import configure_solver, critical_constants
from testing import AgreementScorer, PropertyValidator
from utils.file_helpers import is_stdout, write_text_output


COMMANDS = ('eval', 'critical-points', 'classify', 'constants', 'phase-diagram', 'verify-finite')
FORMATS = ('csv', 'json', 'xlsx')

# enumerate_nu 比對的最大 N
ORACLE_MAX_N = 4


@dataclass
class RunConfig:
    """一次命令列執行的完整設定"""
    command: str
    q: int = 3
    beta: Optional[float] = None
    J: Optional[float] = None
    no_componentwise: bool = False
    point: Tuple[float, ...] = ()
    grid_density: Optional[int] = None
    beta_range: Optional[Tuple[float, float, int]] = None
    J_range: Optional[Tuple[float, float, int]] = None
    numeric: bool = False
    n: int = 60
    trials: int = 100
    seed: int = 0
    table_path: Optional[str] = None
    output: Optional[str] = None
    format: Optional[str] = None
    config_path: Optional[str] = None
    overrides: Dict[str, Dict[str, Any]] = field(default_factory=dict)

    def validate(self) -> None:
        """
        分派前檢查旗標

        Raises:
            DomainError: 旗標值不合法
        """
        if self.command not in COMMANDS:
            raise DomainError(f"未知的指令：{self.command}")
        if self.format is not None and self.format not in FORMATS:
            raise DomainError(f"輸出格式必須為 {', '.join(FORMATS)} 之一，收到 {self.format}")
        if self.format == 'xlsx':
            if self.command != 'phase-diagram':
                raise DomainError("xlsx 格式只支援 phase-diagram")
            if is_stdout(self.output):
                raise DomainError("xlsx 格式必須以 --output 指定檔案")
        if self.format == 'csv' and self.command != 'phase-diagram':
            raise DomainError(f"{self.command} 只輸出 JSON")
        if self.command in ('eval', 'critical-points', 'classify', 'verify-finite'):
            if self.beta is None:
                raise DomainError(f"{self.command} 需要 --beta")
            if self.no_componentwise == (self.J is not None):
                raise DomainError("必須指定 --j 或 --no-componentwise 其中之一")
        if self.command == 'eval' and not self.point:
            raise DomainError("eval 需要 --point")
        if self.command == 'phase-diagram' and (self.beta_range is None or self.J_range is None):
            raise DomainError("phase-diagram 需要 --beta 與 --j 範圍 (start:stop:count)")
        if self.command == 'verify-finite':
            if self.n < 1:
                raise DomainError(f"N 必須為正整數，收到 {self.n}")
            if self.trials < 1:
                raise DomainError(f"trials 必須為正整數，收到 {self.trials}")

    def params(self) -> ModelParams:
        if self.no_componentwise:
            return ModelParams.no_componentwise(self.q, self.beta)
        return ModelParams.finite(self.q, self.beta, self.J)


class AnalysisOrchestrator:
    """
    分析流程協調器

    每個指令一個方法，回傳要寫出的文字產出物
    """

    def __init__(self, config_manager: Optional[ConfigManager] = None):
        self.config = config_manager or ConfigManager()
        self.logger = logging.getLogger("CWPLogger")
        self.reports = ReportService()

    def run(self, run_config: RunConfig) -> int:
        """
        執行單一指令並寫出產出物

        Returns:
            結束代碼：0 成功、2 定義域錯誤、3 求解失敗
        """
        try:
            run_config.validate()
            self.config.load_runtime_config(run_config.config_path)
            if configure_solver(self.config.get_solver_config(run_config.overrides.get('Solver'))):
                crossings.cache_clear()
            handler = {
                'eval': self.evaluate,
                'critical-points': self.critical_points,
                'classify': self.classify,
                'constants': self.constants,
                'phase-diagram': self.phase_diagram,
                'verify-finite': self.verify_finite,
            }[run_config.command]
            LoggerManager.log_section(run_config.command, self.logger)
            with LoggerManager.log_duration(run_config.command, self.logger):
                artifact = handler(run_config)
            if artifact is not None:
                write_text_output(artifact, run_config.output)
            return 0
        except LandscapeError as e:
            self.logger.error(f"{type(e).__name__}: {e}")
            return e.exit_code

    # ========================================================================
    # eval
    # ========================================================================

    def _parse_point(self, q: int, coords: Tuple[float, ...]) -> PairMagnetization:
        """接受完整座標 (2q 個) 或約化座標 (2(q−1) 個)"""
        if len(coords) == 2 * q:
            return PairMagnetization.from_weights(coords[:q], coords[q:])
        if len(coords) == 2 * (q - 1):
            return embed(ReducedPoint(coords))
        raise DomainError(f"q={q} 的點需要 {2 * q} 個完整座標或 {2 * (q - 1)} 個約化座標，收到 {len(coords)} 個")

    def evaluate(self, run_config: RunConfig) -> str:
        params = run_config.params()
        x = self._parse_point(params.q, run_config.point)
        r = reduce(x)
        self.logger.info(f"計算自由能與導數：{params}")
        payload = {
            'params': params.to_dict(),
            'point': x.to_list(),
            'energy': energy_part(params, x) if params.is_finite else None,
            'entropy': entropy_part(x),
            'free_energy': free_energy_of(params, x),
            'gradient': gradient(params, r).tolist(),
            'hessian': hessian(params, r).tolist(),
            'eigenvalues': eigenvalues(params, r).tolist(),
        }
        return self.reports.to_json(payload)

    # ========================================================================
    # critical-points / classify
    # ========================================================================

    def _finder(self, run_config: RunConfig) -> CriticalPointFinder:
        return CriticalPointFinder(self.config.get_newton_config(run_config.overrides.get('Newton')))

    def _grid_density(self, run_config: RunConfig) -> int:
        if run_config.grid_density is not None:
            return run_config.grid_density
        return self.config.get_newton_config(run_config.overrides.get('Newton')).default_grid_density

    def critical_points(self, run_config: RunConfig) -> str:
        params = run_config.params()
        LoggerManager.log_step(1, 2, "多起點 Newton 搜尋", self.logger)
        summary = self._finder(run_config).find(params, self._grid_density(run_config))
        LoggerManager.log_step(2, 2, "極小值排序", self.logger)
        ordering = minima_ordering(summary)
        self.logger.info(f"普查結果：{summary.counts()}，相區 {summary.regime.value}")
        payload = summary.to_dict()
        payload['counts'] = summary.counts().to_dict()
        payload['minima_ordering'] = ordering.to_dict()
        return self.reports.to_json(payload)

    def classify(self, run_config: RunConfig) -> str:
        params = run_config.params()
        params.require_analysis_q()
        decision = analytic_regime(params.q, params.beta, params.coupling)
        self.logger.info(f"解析相區：{decision.regime.value} ({decision.reason})")
        payload = {'params': params.to_dict()}
        payload.update(decision.to_dict())
        if run_config.numeric:
            summary = self._finder(run_config).find(params, self._grid_density(run_config))
            payload['numeric_regime'] = summary.regime.value
            payload['counts'] = summary.counts().to_dict()
            self.logger.info(f"數值相區：{summary.regime.value}")
        return self.reports.to_json(payload)

    # ========================================================================
    # constants
    # ========================================================================

    def constants(self, run_config: RunConfig) -> str:
        payload = critical_constants().to_dict()
        payload.update(crossings().to_dict())
        for key, value in payload.items():
            self.logger.debug(f"{key} = {value:.10g}")
        return self.reports.to_json(payload)

    # ========================================================================
    # phase-diagram
    # ========================================================================

    def phase_diagram(self, run_config: RunConfig) -> Optional[str]:
        beta_start, beta_stop, n_beta = run_config.beta_range
        J_start, J_stop, n_J = run_config.J_range
        total_steps = 3 if run_config.numeric else 2

        LoggerManager.log_step(1, total_steps, "掃描 (β, J) 網格", self.logger)
        sweeper = PhaseSweeper(
            self.config.get_sweep_config(run_config.overrides.get('Sweep')),
            self.config.get_newton_config(run_config.overrides.get('Newton')),
        )
        samples = sweeper.sweep((beta_start, beta_stop), (J_start, J_stop), n_beta, n_J,
                                with_numeric=run_config.numeric, q=run_config.q,
                                grid_density=self._grid_density(run_config))

        summary_rows = [("網格", "β 節點數", n_beta), ("網格", "J 節點數", n_J)]
        if run_config.numeric:
            LoggerManager.log_step(2, total_steps, "比對解析與數值相區", self.logger)
            _, stats = AgreementScorer().score(samples)
            self.logger.info(f"相區一致性：{stats}")
            summary_rows += [("一致性", key, value) for key, value in stats.to_dict().items()]

        LoggerManager.log_step(total_steps, total_steps, "輸出相圖", self.logger)
        fmt = run_config.format or 'csv'
        if fmt == 'json':
            return self.reports.phase_json(samples)
        if fmt == 'xlsx':
            frame = self.reports.phase_frame(samples)
            rows = frame.astype(object).where(frame.notna(), None).to_dict('records')
            if not ExcelExporter().export_phase_diagram(rows, list(frame.columns), run_config.output, summary_rows):
                raise DomainError(f"無法寫入 Excel 檔案：{run_config.output}")
            return None
        return self.reports.phase_csv(samples)

    # ========================================================================
    # verify-finite
    # ========================================================================

    def verify_finite(self, run_config: RunConfig) -> str:
        params = run_config.params()
        N = run_config.n
        verifier_config = self.config.get_verifier_config(run_config.overrides.get('Verifier'))
        validator = PropertyValidator()
        payload: Dict[str, Any] = {'params': params.to_dict(), 'N': N}

        LoggerManager.log_step(1, 5, "精確計算 ν_N", self.logger)
        table = exact_nu(N, params, verifier_config)
        normalization = validator.check_normalization(table.log_probs, f"ν_{N}")
        payload['normalization'] = {k: normalization[k] for k in ('total_mass', 'error', 'result')}

        LoggerManager.log_step(2, 5, "與完整組態列舉比對", self.logger)
        if N <= ORACLE_MAX_N and params.q ** (2 * N) <= MAX_BRUTE_FORCE_STATES:
            brute = enumerate_nu(N, params)
            difference = float(abs(brute.log_probs - table.log_probs).max())
            payload['oracle'] = {'max_abs_difference': difference,
                                 'result': 'PASS' if difference <= 1e-10 else 'FAIL'}
        else:
            payload['oracle'] = {'max_abs_difference': None, 'result': 'SKIP'}

        LoggerManager.log_step(3, 5, "Hamiltonian 可測性", self.logger)
        check_n = min(N, MAX_MEASURABILITY_N)
        measurability = hamiltonian_is_magnetization_measurable(
            check_n, params.q, params.coupling, run_config.trials, run_config.seed)
        payload['measurability'] = dict(measurability.to_dict(), N=check_n)

        LoggerManager.log_step(4, 5, "Stirling 展開比較", self.logger)
        try:
            payload['stirling'] = stirling_gap(N, params, config=verifier_config).to_dict()
        except DomainError as e:
            self.logger.warning(f"略過 Stirling 比較：{e}")
            payload['stirling'] = None

        LoggerManager.log_step(5, 5, "ν_N 最大值與 F 的極小值", self.logger)
        if params.q in (2, 3):
            summary = self._finder(run_config).find(params, self._grid_density(run_config))
            minima = [summary.points[i].location for i in summary.minima_order]
            payload['argmax_distance'] = argmax_distance(table, minima)
            payload['argmax'] = table.argmax().as_magnetization().to_list()
        else:
            payload['argmax_distance'] = None
            payload['argmax'] = table.argmax().as_magnetization().to_list()

        if run_config.table_path:
            write_text_output(self.reports.table_csv(table), run_config.table_path)
        return self.reports.to_json(payload)


def run(run_config: RunConfig, config_manager: Optional[ConfigManager] = None) -> int:
    """依 RunConfig 執行一個指令，回傳結束代碼"""
    return AnalysisOrchestrator(config_manager).run(run_config)
