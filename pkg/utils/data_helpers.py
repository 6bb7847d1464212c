"""
資料處理輔助函式
提供命令列數值參數的解析
"""

import math
from typing import Tuple

from core.exceptions import DomainError


_TRUE_VALUES = {'true', '1', 'yes', 'y', 'on'}
_FALSE_VALUES = {'false', '0', 'no', 'n', 'off'}


def parse_float(text: str, name: str = "數值") -> float:
    """
    解析有限浮點數

    Raises:
        DomainError: 無法解析或非有限值
    """
    try:
        value = float(text)
    except (TypeError, ValueError):
        raise DomainError(f"{name} 必須為數值，收到 {text!r}")
    if not math.isfinite(value):
        raise DomainError(f"{name} 必須為有限值，收到 {text!r}")
    return value


def parse_range(text: str, name: str = "範圍") -> Tuple[float, float, int]:
    """
    解析 start:stop:count 格式的範圍

    Examples:
        >>> parse_range("0.5:6:200")
        (0.5, 6.0, 200)
    """
    parts = str(text).split(':')
    if len(parts) != 3:
        raise DomainError(f"{name} 必須為 start:stop:count 格式，收到 {text!r}")
    start = parse_float(parts[0], f"{name} 起點")
    stop = parse_float(parts[1], f"{name} 終點")
    try:
        count = int(parts[2])
    except ValueError:
        raise DomainError(f"{name} 的節點數必須為整數，收到 {parts[2]!r}")
    if count < 2:
        raise DomainError(f"{name} 的節點數必須 ≥ 2，收到 {count}")
    return start, stop, count


def parse_bool(text: str, name: str = "旗標") -> bool:
    """解析 true/false 類型的旗標值"""
    lowered = str(text).strip().lower()
    if lowered in _TRUE_VALUES:
        return True
    if lowered in _FALSE_VALUES:
        return False
    raise DomainError(f"{name} 必須為 true 或 false，收到 {text!r}")


def parse_point(text: str, name: str = "點座標") -> Tuple[float, ...]:
    """解析以逗號分隔的座標"""
    parts = [p for p in str(text).replace(' ', '').split(',') if p]
    if not parts:
        raise DomainError(f"{name} 不可為空")
    return tuple(parse_float(p, name) for p in parts)
