"""
Excel 匯出服務
將相圖掃描結果匯出至 Excel，包含資料表格式與摘要工作表
"""

import os
import logging
from typing import Any, Dict, List, Sequence

from openpyxl import Workbook
from openpyxl.styles import Alignment
from openpyxl.utils import get_column_letter
from openpyxl.worksheet.table import Table, TableStyleInfo


class ExcelExporter:
    """Excel 匯出服務"""

    def __init__(self):
        """初始化 Excel 匯出器"""
        self.logger = logging.getLogger("CWPLogger")
        self.center_alignment = Alignment(horizontal='center', vertical='center')

    def export_phase_diagram(
        self,
        rows: List[Dict[str, Any]],
        columns: List[str],
        output_path: str,
        summary: Sequence[Sequence[Any]] = (),
    ) -> bool:
        """
        將 PhaseSample 列匯出至 Excel

        Args:
            rows: PhaseSample.to_row() 的結果
            columns: 欄位順序
            output_path: 輸出檔案路徑
            summary: 摘要工作表的 (分類, 指標, 數值) 列

        Returns:
            成功返回 True，失敗返回 False
        """
        self.logger.info(f"開始匯出 Excel - 路徑: {output_path}")

        if not rows:
            self.logger.warning("沒有資料可以匯出")
            return False

        try:
            wb = Workbook()
            ws = wb.active
            ws.title = 'PhaseDiagram'

            # 寫入標題列
            ws.append(columns)
            for cell in ws[1]:
                cell.alignment = self.center_alignment

            # 寫入資料列，None 寫成空白儲存格
            for row_data in rows:
                ws.append([row_data.get(col) for col in columns])

            table_ref = f"A1:{get_column_letter(len(columns))}{ws.max_row}"
            table = Table(displayName="PhaseTable", ref=table_ref)
            table.tableStyleInfo = TableStyleInfo(name="TableStyleMedium9", showFirstColumn=False,
                                                  showLastColumn=False, showRowStripes=True,
                                                  showColumnStripes=False)
            ws.add_table(table)
            ws.freeze_panes = 'A2'

            self._apply_formatting(ws)
            self._auto_adjust_columns(ws, len(columns))

            if summary:
                self._create_summary_sheet(wb, summary)

            directory = os.path.dirname(output_path)
            if directory:
                os.makedirs(directory, exist_ok=True)
            wb.save(output_path)
            self.logger.info(f"Excel 匯出成功: {output_path}，共 {len(rows)} 筆資料")
            return True

        except (OSError, ValueError) as e:
            self.logger.error(f"Excel 匯出失敗: {e}")
            return False

    def _apply_formatting(self, ws) -> None:
        """資料列置中"""
        for row in ws.iter_rows(min_row=2, max_row=ws.max_row):
            for cell in row:
                cell.alignment = self.center_alignment

    def _auto_adjust_columns(self, ws, column_count: int) -> None:
        """自動調整欄寬 (限制在 10-40 之間)"""
        for idx in range(1, column_count + 1):
            max_length = 0
            for row in ws.iter_rows(min_row=1, max_row=ws.max_row, min_col=idx, max_col=idx):
                for cell in row:
                    if cell.value is not None:
                        max_length = max(max_length, len(str(cell.value)))
            ws.column_dimensions[get_column_letter(idx)].width = min(max(max_length + 2, 10), 40)

    def _create_summary_sheet(self, wb: Workbook, summary: Sequence[Sequence[Any]]) -> None:
        """摘要工作表：分類 / 指標 / 數值"""
        ws = wb.create_sheet(title='Summary')
        ws.append(["分類", "指標", "數值"])
        for row_data in summary:
            ws.append(list(row_data))
        for row in ws.iter_rows(min_row=1, max_row=ws.max_row):
            for cell in row:
                cell.alignment = self.center_alignment
        self._auto_adjust_columns(ws, 3)
