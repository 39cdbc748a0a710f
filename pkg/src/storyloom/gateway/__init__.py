from .gateway import CaptureEntry, CompletionRequest, CompletionResult, LlmGateway
from .mock import MockProvider
from .providers import HttpProvider, Provider, RetryPolicy, TransientProviderError
from .roles import ModelRole
from .templates import PromptTemplate, TemplateCatalog

__all__ = [
    "CaptureEntry",
    "CompletionRequest",
    "CompletionResult",
    "HttpProvider",
    "LlmGateway",
    "MockProvider",
    "ModelRole",
    "PromptTemplate",
    "Provider",
    "RetryPolicy",
    "TemplateCatalog",
    "TransientProviderError",
]
