"""
工具函式模組
Utility functions for argument parsing and output handling
"""

from .file_helpers import ensure_parent_dir, is_stdout, write_text_output
from .data_helpers import parse_bool, parse_float, parse_point, parse_range

__all__ = [
    'ensure_parent_dir',
    'is_stdout',
    'write_text_output',
    'parse_bool',
    'parse_float',
    'parse_point',
    'parse_range',
]
