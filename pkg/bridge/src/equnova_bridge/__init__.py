from .app import BACKENDS, EchoBackend, create_app, __version__

__all__ = ["BACKENDS", "EchoBackend", "create_app", "__version__"]
