"""
日誌管理模組
命名 logger CWPLogger：主控台寫到標準錯誤串流，另可寫入 <log_dir>/<timestamp>/Log.txt
"""

import os
import sys
import time
import logging
import datetime
from contextlib import contextmanager
from typing import Iterator, Optional


CONSOLE_FORMAT = '%(asctime)s [%(levelname)s] [%(filename)s]: %(message)s'
# 相圖掃描在執行緒池上跑，檔案日誌多記執行緒名稱
FILE_FORMAT = '%(asctime)s [%(levelname)s] [%(threadName)s] %(filename)s: %(message)s'
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'


class LoggerManager:
    """
    日誌管理器

    產出物只寫到標準輸出或 --output 檔案，日誌一律走標準錯誤串流
    """

    LOGGER_NAME = "CWPLogger"

    _current_log_file: Optional[str] = None

    @staticmethod
    def setup_logger(
        log_dir: Optional[str] = None,
        level: int = logging.INFO,
        stream=None
    ) -> logging.Logger:
        """
        設定 CWPLogger

        Args:
            log_dir: 日誌根目錄，None 表示不寫檔
            level: 日誌級別
            stream: 主控台串流 (預設 sys.stderr)

        Raises:
            OSError: 日誌目錄無法建立
        """
        logger = logging.getLogger(LoggerManager.LOGGER_NAME)
        logger.setLevel(level)
        for handler in list(logger.handlers):
            handler.close()
            logger.removeHandler(handler)
        logger.propagate = False

        console_handler = logging.StreamHandler(stream if stream is not None else sys.stderr)
        console_handler.setFormatter(logging.Formatter(CONSOLE_FORMAT, datefmt=DATE_FORMAT))
        logger.addHandler(console_handler)

        LoggerManager._current_log_file = None
        if log_dir:
            logger.addHandler(LoggerManager._file_handler(log_dir))

        logger.debug(f"CWPLogger 已啟動，級別 {logging.getLevelName(level)}")
        return logger

    @staticmethod
    def _file_handler(log_dir: str) -> logging.FileHandler:
        """在 <log_dir>/<timestamp>/ 下建立 Log.txt"""
        run_dir = os.path.join(log_dir, datetime.datetime.now().strftime('%Y%m%d_%H%M%S'))
        os.makedirs(run_dir, exist_ok=True)
        log_file = os.path.join(run_dir, 'Log.txt')
        LoggerManager._current_log_file = log_file

        handler = logging.FileHandler(log_file, mode='w', encoding='utf-8')
        handler.setFormatter(logging.Formatter(FILE_FORMAT, datefmt=DATE_FORMAT))
        return handler

    @staticmethod
    def get_current_log_file() -> Optional[str]:
        """目前的日誌檔路徑，未寫檔時為 None"""
        return LoggerManager._current_log_file

    @staticmethod
    def get_logger() -> logging.Logger:
        return logging.getLogger(LoggerManager.LOGGER_NAME)

    @staticmethod
    def log_section(title: str, logger: Optional[logging.Logger] = None):
        """記錄指令標題"""
        logger = logger or LoggerManager.get_logger()
        logger.info("-" * 40)
        logger.info(f"【{title}】")
        logger.info("-" * 40)

    @staticmethod
    def log_step(step_num: int, total_steps: int, title: str, logger: Optional[logging.Logger] = None):
        logger = logger or LoggerManager.get_logger()
        logger.info(f"【步驟 {step_num}/{total_steps}】{title}")

    @staticmethod
    @contextmanager
    def log_duration(title: str, logger: Optional[logging.Logger] = None) -> Iterator[None]:
        """區塊結束時記錄耗時（例外時同樣記錄）"""
        logger = logger or LoggerManager.get_logger()
        start = time.perf_counter()
        try:
            yield
        finally:
            logger.info(f"{title} 耗時 {time.perf_counter() - start:.2f} 秒")
