"""
測試驗證模組
Property checks and regime agreement scoring
"""

from .validator import PropertyValidator
from .scorer import AgreementScorer
from .comparator import RegimeComparator

__all__ = ['PropertyValidator', 'AgreementScorer', 'RegimeComparator']
