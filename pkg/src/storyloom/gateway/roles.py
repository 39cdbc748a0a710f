"""Named model roles.

Every generation call is made under exactly one role; which concrete
provider serves a role is configuration, never code.
"""

from __future__ import annotations

from enum import Enum


class ModelRole(str, Enum):
    PROFICIENCY = "proficiency"  # six-level sample generation
    OUTLINE = "outline"          # milestone/decision/ending planning
    PLOT = "plot"                # story segments and the ending
    SUMMARY = "summary"          # per-segment condensation
    LANGUAGE = "language"        # in-context explanations
