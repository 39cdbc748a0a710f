from .scoring import VocabItem, VocabTest, merge_raters, score_item
from .stats import UndefinedStatisticError, cronbach_alpha, descriptive_stats
from .survey import LikertResponse, construct_summary
from .words import SelectionResult, select_test_words

__all__ = [
    "LikertResponse",
    "SelectionResult",
    "UndefinedStatisticError",
    "VocabItem",
    "VocabTest",
    "construct_summary",
    "cronbach_alpha",
    "descriptive_stats",
    "merge_raters",
    "score_item",
    "select_test_words",
]
