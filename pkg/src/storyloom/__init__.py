"""Branching text-adventure service for language learners.

Subpackages:

- ``gateway``: role-routed text-generation providers, templates, mock
- ``engine``: game state machine and story pipelines
- ``store``: append-only event persistence with replay
- ``assistant``: in-context vocabulary explanations and the query log
- ``api``: the HTTP facade
- ``study``: evaluation toolkit (word selection, scoring, survey stats)
"""

__version__ = "0.1.0"
