"""
統計資料結構模組
定義臨界點普查計數與解析/數值相區一致性統計
"""

from dataclasses import dataclass, field
from typing import Any, Dict


@dataclass
class CensusCounts:
    """臨界點普查計數"""
    minima: int = 0
    saddles: int = 0
    higher_index: int = 0
    maxima: int = 0
    degenerate: int = 0
    by_membership: Dict[str, int] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return self.minima + self.saddles + self.higher_index + self.maxima + self.degenerate

    def to_dict(self) -> Dict[str, Any]:
        """轉換為字典"""
        return {
            'total': self.total,
            'minima': self.minima,
            'saddles': self.saddles,
            'higher_index': self.higher_index,
            'maxima': self.maxima,
            'degenerate': self.degenerate,
            'by_membership': dict(sorted(self.by_membership.items())),
        }

    def __str__(self) -> str:
        return (f"Total: {self.total}, Min: {self.minima}, Saddle: {self.saddles}, "
                f"Higher: {self.higher_index}, Max: {self.maxima}, Degenerate: {self.degenerate}")


@dataclass
class AgreementStatistics:
    """解析相區與數值相區的一致性統計"""
    total: int = 0
    passed: int = 0
    failed: int = 0
    skipped: int = 0

    @property
    def compared(self) -> int:
        return self.passed + self.failed

    @property
    def pass_rate(self) -> float:
        """一致率 (0-100)，只計入有比較的節點"""
        if self.compared == 0:
            return 0.0
        return (self.passed / self.compared) * 100

    def to_dict(self) -> Dict[str, Any]:
        """轉換為字典"""
        return {
            'total': self.total,
            'pass': self.passed,
            'fail': self.failed,
            'skip': self.skipped,
            'pass_rate': round(self.pass_rate, 2)
        }

    def __str__(self) -> str:
        return (f"Total: {self.total}, Pass: {self.passed}, Fail: {self.failed}, "
                f"Skip: {self.skipped} ({self.pass_rate:.1f}%)")
