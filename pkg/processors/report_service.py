"""
產出序列化服務
將分析結果轉為 JSON 或 CSV 文字；浮點數以 round-trip 精度輸出
"""

import json
import logging
import math
from typing import Any, List, Sequence

import pandas as pd

from processors.finite_system import DistributionTable
from processors.phase_sweep import PhaseSample


CSV_FLOAT_FORMAT = '%.17g'


def _json_safe(value: Any) -> Any:
    """把 numpy 純量與 inf/nan 轉為 JSON 可表示的值"""
    if isinstance(value, dict):
        return {str(k): _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    if hasattr(value, 'item') and not isinstance(value, (str, bytes)):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


class ReportService:
    """產出序列化服務"""

    def __init__(self):
        self.logger = logging.getLogger("CWPLogger")

    def to_json(self, payload: Any) -> str:
        """
        序列化為 JSON

        鍵依插入順序輸出；float 使用 repr，可完整還原；nan/inf 寫成 null
        """
        return json.dumps(_json_safe(payload), indent=2, ensure_ascii=False, allow_nan=False)

    def frame_to_csv(self, frame: pd.DataFrame) -> str:
        """DataFrame 轉 CSV 文字（含標題列，不含索引）"""
        return frame.to_csv(index=False, float_format=CSV_FLOAT_FORMAT, lineterminator='\n')

    def phase_frame(self, samples: Sequence[PhaseSample]) -> pd.DataFrame:
        """
        PhaseSample 列表轉 DataFrame

        任一節點帶有錯誤時附加 error 欄位
        """
        if not samples:
            return pd.DataFrame()
        include_error = any(s.error for s in samples)
        columns = samples[0].columns() + (['error'] if include_error else [])
        rows = [s.to_row(include_error) for s in samples]
        self.logger.debug(f"相圖表格：{len(rows)} 列，欄位 {columns}")
        return pd.DataFrame(rows, columns=columns)

    def phase_csv(self, samples: Sequence[PhaseSample]) -> str:
        return self.frame_to_csv(self.phase_frame(samples))

    def phase_json(self, samples: Sequence[PhaseSample]) -> str:
        include_error = any(s.error for s in samples)
        rows: List[dict] = [s.to_row(include_error) for s in samples]
        return self.to_json(rows)

    def table_csv(self, table: DistributionTable) -> str:
        """精確分佈表轉 CSV"""
        return self.frame_to_csv(table.to_frame())
