"""
例外定義模組
定義分析流程中使用的例外類別，並對應命令列的結束代碼
"""


class LandscapeError(Exception):
    """分析工具的基礎例外"""

    exit_code = 1


class DomainError(LandscapeError):
    """輸入不在運算的定義域內（不變量違反、邊界點、參數超出範圍）"""

    exit_code = 2


class UnsupportedCouplingError(DomainError):
    """運算不支援指定的耦合型態"""


class NoSolutionError(DomainError):
    """方程式在給定參數下無解（例如 β ≤ β₁ 時的 ξ(x) = β）"""


class CapacityError(DomainError):
    """精確列舉所需的記憶體超過設定上限"""

    def __init__(self, message: str, required_bytes: int):
        super().__init__(message)
        self.required_bytes = required_bytes


class SolverError(LandscapeError):
    """數值求解失敗（區間不含根、Newton 全部發散等）"""

    exit_code = 3
