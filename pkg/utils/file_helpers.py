"""
檔案處理輔助函式
提供輸出目標（標準輸出或檔案）的寫入功能
"""

import os
import sys
import logging
from typing import Optional

from core.exceptions import DomainError


def is_stdout(output_path: Optional[str]) -> bool:
    """未指定或為 '-' 時輸出到標準輸出"""
    return output_path in (None, '', '-')


def ensure_parent_dir(file_path: str) -> None:
    """
    建立輸出檔案的上層目錄

    Raises:
        DomainError: 目錄無法建立
    """
    directory = os.path.dirname(os.path.abspath(file_path))
    try:
        os.makedirs(directory, exist_ok=True)
    except OSError as e:
        raise DomainError(f"無法建立輸出目錄 {directory}: {e}")


def write_text_output(text: str, output_path: Optional[str] = None) -> None:
    """
    將產出寫入標準輸出或 UTF-8 檔案

    Args:
        text: 產出內容
        output_path: 輸出檔案路徑，None 或 '-' 代表標準輸出

    Raises:
        DomainError: 路徑無法寫入
    """
    logger = logging.getLogger("CWPLogger")
    if not text.endswith('\n'):
        text += '\n'

    if is_stdout(output_path):
        sys.stdout.write(text)
        sys.stdout.flush()
        return

    ensure_parent_dir(output_path)
    try:
        with open(output_path, 'w', encoding='utf-8', newline='') as f:
            f.write(text)
    except OSError as e:
        raise DomainError(f"無法寫入輸出檔案 {output_path}: {e}")
    logger.info(f"已寫入輸出檔案: {output_path}")
