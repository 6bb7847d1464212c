"""
評分器
負責相圖節點的一致性評分與統計
"""

import logging
from typing import Dict, Iterable, List, Optional, Tuple

from core.stats import AgreementStatistics
from processors.phase_sweep import PhaseSample
from testing.comparator import RegimeComparator


class AgreementScorer:
    """一致性評分器 - 彙整 RegimeComparator 的結果"""

    def __init__(self, comparator: Optional[RegimeComparator] = None):
        """初始化評分器"""
        self.comparator = comparator or RegimeComparator()
        self.logger = logging.getLogger("CWPLogger")

    def score_samples(self, samples: Iterable[PhaseSample]) -> List[Dict]:
        """
        對相圖節點逐一比對

        Returns:
            比對結果列表（每筆包含 PASS/FAIL/SKIP）
        """
        results = [self.comparator.compare_sample(sample) for sample in samples]
        stats = self.calculate_statistics(results)
        self.logger.info(f"評分完成：PASS={stats.passed}，FAIL={stats.failed}，SKIP={stats.skipped}")
        return results

    def calculate_statistics(self, scored: List[Dict]) -> AgreementStatistics:
        """計算一致性統計"""
        stats = AgreementStatistics(total=len(scored))
        for row in scored:
            outcome = row.get('result')
            if outcome == 'PASS':
                stats.passed += 1
            elif outcome == 'FAIL':
                stats.failed += 1
            else:
                stats.skipped += 1
        return stats

    def score(self, samples: Iterable[PhaseSample]) -> Tuple[List[Dict], AgreementStatistics]:
        """比對並統計"""
        results = self.score_samples(samples)
        return results, self.calculate_statistics(results)
