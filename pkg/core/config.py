"""
配置管理模組
負責所有系統配置的集中管理，包括數值求解容差、Newton 參數、精確列舉上限、掃描執行緒與路徑
"""

import os
import configparser
from dataclasses import dataclass, field, fields, replace
from typing import Any, Dict, Optional

from core.exceptions import DomainError


# 執行緒數量的環境變數
THREADS_ENV_VAR = "CWP_THREADS"


# ============================================================================
# 純量求解配置
# ============================================================================

@dataclass(frozen=True)
class SolverConfig:
    """純量求根與邊界處理配置"""
    root_xtol: float = 1e-15
    series_cutoff: float = 1e-6
    derivative_series_cutoff: float = 1e-4


# ============================================================================
# Newton 多起點配置
# ============================================================================

@dataclass(frozen=True)
class NewtonConfig:
    """多起點阻尼 Newton 與臨界點分類配置"""
    max_iterations: int = 200
    max_halvings: int = 50
    gradient_tolerance: float = 1e-9
    dedup_radius: float = 1e-6
    eigen_tolerance: float = 1e-8
    membership_tolerance: float = 1e-6
    boundary_band: float = 1e-6
    default_grid_density: int = 8


# ============================================================================
# 有限系統驗證配置
# ============================================================================

@dataclass(frozen=True)
class VerifierConfig:
    """精確分佈列舉上限與 Stirling 比較配置"""
    max_n_q2: int = 1500
    max_n_q3: int = 60
    max_entries: int = 4_000_000
    stirling_min_fraction: float = 0.1

    def max_n(self, q: int) -> Optional[int]:
        """取得指定 q 的 N 上限；未設定者回傳 None（改以 max_entries 判斷）"""
        return {2: self.max_n_q2, 3: self.max_n_q3}.get(q)


# ============================================================================
# 掃描配置
# ============================================================================

@dataclass(frozen=True)
class SweepConfig:
    """相圖掃描配置"""
    threads: int = 0

    def resolve_threads(self) -> int:
        """環境變數優先，0 代表使用 CPU 數量"""
        env_value = os.environ.get(THREADS_ENV_VAR, '').strip()
        threads = self.threads
        if env_value:
            try:
                threads = int(env_value)
            except ValueError:
                raise DomainError(f"環境變數 {THREADS_ENV_VAR} 必須為整數，收到 {env_value!r}")
        if threads <= 0:
            threads = os.cpu_count() or 1
        return threads


# ============================================================================
# 路徑配置
# ============================================================================

@dataclass
class PathConfig:
    """路徑配置類別"""
    work_dir: str = field(default_factory=os.getcwd)
    config_file: str = 'config.ini'
    log_dir: Optional[str] = None

    def get_log_dir(self) -> Optional[str]:
        """取得日誌目錄；None 代表不寫日誌檔"""
        return self.log_dir

    def set_log_dir(self, log_dir: str) -> None:
        """設定日誌目錄"""
        self.log_dir = log_dir


def _merge_section(default, section: Optional[configparser.SectionProxy],
                   override: Optional[Dict[str, Any]]):
    """依欄位型別把 config.ini 區段與覆蓋設定合併到預設 dataclass"""
    updates = {}
    for f in fields(default):
        if not f.init:
            continue
        caster = type(getattr(default, f.name))
        raw = None
        if section is not None and f.name in section:
            raw = section.get(f.name)
        if override and f.name in override:
            raw = override[f.name]
        if raw is None:
            continue
        try:
            updates[f.name] = caster(float(raw)) if caster is int else caster(raw)
        except (TypeError, ValueError):
            raise DomainError(f"配置項 {f.name} 的值無效：{raw!r}")
    return replace(default, **updates)


# ============================================================================
# 統一配置管理器 (單例模式)
# ============================================================================

class ConfigManager:
    """
    統一配置管理器 (Singleton Pattern)

    集中管理所有系統配置，包括：
    - 純量求解配置
    - Newton 多起點配置
    - 有限系統驗證配置
    - 掃描配置
    - 路徑配置
    - 執行時配置 (從 config.ini 載入)
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            cls._instance._initialized = False
        return cls._instance

    def __init__(self):
        if self._initialized:
            return

        # 初始化基礎配置
        self.paths = PathConfig()

        # 執行時配置 (從 config.ini 載入)
        self.runtime_config: Optional[configparser.ConfigParser] = None

        self._initialized = True

    def load_runtime_config(self, config_path: Optional[str] = None) -> configparser.ConfigParser:
        """
        從 config.ini 載入執行時配置

        Args:
            config_path: 配置檔案路徑，若為 None 則使用預設路徑；檔案不存在時使用全部預設值

        Returns:
            ConfigParser 物件

        Raises:
            DomainError: 明確指定的配置檔案不存在
        """
        explicit = config_path is not None
        if config_path is None:
            config_path = os.path.join(self.paths.work_dir, self.paths.config_file)
        if explicit and not os.path.isfile(config_path):
            raise DomainError(f"找不到配置檔案: {config_path}")

        config = configparser.ConfigParser()
        config.read(config_path, encoding='utf-8')
        self.runtime_config = config

        if config.has_section('Path') and config['Path'].get('log_path'):
            self.paths.set_log_dir(config['Path']['log_path'])
        return config

    def reset(self) -> None:
        """清除已載入的執行時配置"""
        self.runtime_config = None
        self.paths = PathConfig()

    def _section(self, name: str) -> Optional[configparser.SectionProxy]:
        if self.runtime_config is None:
            self.load_runtime_config()
        if self.runtime_config.has_section(name):
            return self.runtime_config[name]
        return None

    def get_solver_config(self, override_config: Optional[Dict[str, Any]] = None) -> SolverConfig:
        """取得純量求解配置"""
        return _merge_section(SolverConfig(), self._section('Solver'), override_config)

    def get_newton_config(self, override_config: Optional[Dict[str, Any]] = None) -> NewtonConfig:
        """取得 Newton 多起點配置"""
        return _merge_section(NewtonConfig(), self._section('Newton'), override_config)

    def get_verifier_config(self, override_config: Optional[Dict[str, Any]] = None) -> VerifierConfig:
        """取得有限系統驗證配置"""
        return _merge_section(VerifierConfig(), self._section('Verifier'), override_config)

    def get_sweep_config(self, override_config: Optional[Dict[str, Any]] = None) -> SweepConfig:
        """取得掃描配置"""
        return _merge_section(SweepConfig(), self._section('Sweep'), override_config)

    def set_log_dir(self, log_dir: str) -> None:
        """設定日誌目錄"""
        self.paths.set_log_dir(log_dir)


# ============================================================================
# 便利函式
# ============================================================================

def get_config_manager() -> ConfigManager:
    """取得 ConfigManager 單例實例"""
    return ConfigManager()
