from .language import Document, parse, serialize
from .main import dispatch, main

__all__ = ["Document", "dispatch", "main", "parse", "serialize"]
