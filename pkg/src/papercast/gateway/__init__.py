from .core import Gateway, gateway_from_env
from .offline import OfflineProvider
from .request import CAPABILITIES, ModelRequest, ModelResponse
from .store import FixtureStore

__all__ = [
    "CAPABILITIES",
    "FixtureStore",
    "Gateway",
    "ModelRequest",
    "ModelResponse",
    "OfflineProvider",
    "gateway_from_env",
]
