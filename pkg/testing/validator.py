"""
性質驗證器
負責單調性、凸性與機率正規化的數值檢查
"""

import logging
from typing import Any, Dict, Optional, Sequence

import numpy as np


class PropertyValidator:
    """性質驗證器 - 以寬容量 slack 檢查數列性質"""

    def __init__(self, slack: float = 1e-8):
        """
        初始化驗證器

        Args:
            slack: 容許的數值誤差
        """
        self.slack = slack
        self.logger = logging.getLogger("CWPLogger")

    def _result(self, check: str, label: str, violations: np.ndarray, worst: float) -> Dict[str, Any]:
        valid = violations.size == 0
        result = {
            'check': check,
            'label': label,
            'valid': valid,
            'violations': [int(i) for i in violations],
            'worst': float(worst),
            'result': 'PASS' if valid else 'FAIL',
        }
        if valid:
            self.logger.debug(f"{label} {check} 檢查通過")
        else:
            self.logger.warning(self.format_error_message(result))
        return result

    def check_nondecreasing(self, values: Sequence[float], label: str = "序列",
                            slack: Optional[float] = None) -> Dict[str, Any]:
        """
        檢查序列是否非遞減：values[i+1] ≥ values[i] − slack

        Returns:
            {'check', 'label', 'valid', 'violations', 'worst', 'result'}
            violations 為違反位置 i（values[i] → values[i+1]）
        """
        slack = self.slack if slack is None else slack
        diffs = np.diff(np.asarray(values, dtype=float))
        bad = np.flatnonzero(diffs < -slack)
        worst = float(diffs.min()) if diffs.size else 0.0
        return self._result("nondecreasing", label, bad, worst)

    def check_nonincreasing(self, values: Sequence[float], label: str = "序列",
                            slack: Optional[float] = None) -> Dict[str, Any]:
        """檢查序列是否非遞增"""
        result = self.check_nondecreasing(-np.asarray(values, dtype=float), label, slack)
        result['check'] = "nonincreasing"
        result['worst'] = -result['worst']
        return result

    def check_convex(self, grid: Sequence[float], values: Sequence[float], label: str = "函數",
                     slack: Optional[float] = None) -> Dict[str, Any]:
        """
        以二階差分檢查凸性（容許非等距網格）

        斜率序列 (f[i+1]−f[i])/(u[i+1]−u[i]) 必須非遞減
        """
        slack = self.slack if slack is None else slack
        u = np.asarray(grid, dtype=float)
        f = np.asarray(values, dtype=float)
        if u.shape != f.shape or u.size < 3:
            self.logger.warning(f"{label} 凸性檢查需要至少 3 個等長的點")
            return self._result("convex", label, np.array([], dtype=int), 0.0)
        slopes = np.diff(f) / np.diff(u)
        second = np.diff(slopes)
        bad = np.flatnonzero(second < -slack)
        return self._result("convex", label, bad, float(second.min()))

    def check_positive(self, values: Sequence[float], label: str = "序列",
                       slack: Optional[float] = None) -> Dict[str, Any]:
        """檢查每個值 > −slack"""
        slack = self.slack if slack is None else slack
        arr = np.asarray(values, dtype=float)
        bad = np.flatnonzero(arr <= -slack)
        worst = float(arr.min()) if arr.size else 0.0
        return self._result("positive", label, bad, worst)

    def check_normalization(self, log_probs: Sequence[float], label: str = "分佈",
                            tolerance: float = 1e-10) -> Dict[str, Any]:
        """
        檢查 Σ exp(log_probs) = 1

        Returns:
            {'check', 'label', 'valid', 'total_mass', 'error', 'result'}
        """
        arr = np.asarray(log_probs, dtype=float)
        total = float(np.exp(arr).sum())
        error = abs(total - 1.0)
        valid = error <= tolerance
        result = {
            'check': "normalization",
            'label': label,
            'valid': valid,
            'total_mass': total,
            'error': error,
            'result': 'PASS' if valid else 'FAIL',
        }
        if not valid:
            self.logger.warning(f"{label} 機率總和偏離 1：{total:.17g}")
        return result

    def format_error_message(self, result: Dict[str, Any]) -> str:
        """
        格式化檢查失敗訊息

        Args:
            result: check_* 的結果

        Returns:
            單行錯誤訊息
        """
        if result.get('valid', True):
            return ""
        violations = result.get('violations', [])
        shown = ", ".join(str(i) for i in violations[:5])
        if len(violations) > 5:
            shown += ", ..."
        return (f"{result['label']} 未通過 {result['check']} 檢查："
                f"{len(violations)} 處違反 (位置 {shown})，最差值 {result['worst']:.3e}")
