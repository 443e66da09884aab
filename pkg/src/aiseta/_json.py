"""Dataclass <-> JSON binding shared by every persisted document.

Documents are rendered on a single line so they can double as line-oriented
records (graph files, report records, truth sidecars).
"""

import warnings
from pathlib import Path
from typing import Any, TypeVar

from xsdata.exceptions import ConverterWarning, ParserError
from xsdata.formats.dataclass.context import XmlContext
from xsdata.formats.dataclass.parsers import JsonParser
from xsdata.formats.dataclass.parsers.config import ParserConfig
from xsdata.formats.dataclass.serializers import JsonSerializer

from aiseta.errors import MalformedRecordError

T = TypeVar("T")

_context = XmlContext()
_serializer = JsonSerializer(context=_context)
_parser = JsonParser(
    config=ParserConfig(fail_on_unknown_properties=True),
    context=_context,
)


def render(obj: Any) -> str:
    """Render a dataclass instance as a single-line JSON document."""
    return _serializer.render(obj)


def parse(text: str, cls: type[T]) -> T:
    """Parse a JSON document into a dataclass instance.

    Args:
        text: The JSON document.
        cls: The dataclass type to bind to.

    Returns:
        The bound instance.

    Raises:
        MalformedRecordError: If the document does not match the dataclass, or a
            value cannot be converted to its field type.
    """
    try:
        # xsdata keeps unconvertible values as raw strings unless told otherwise
        with warnings.catch_warnings():
            warnings.simplefilter("error", ConverterWarning)
            return _parser.from_string(text, cls)
    except (ParserError, ConverterWarning, ValueError, TypeError) as exc:
        raise MalformedRecordError(f"Cannot decode {cls.__name__}: {exc}") from exc


def read(path: str | Path, cls: type[T]) -> T:
    """Parse a JSON document from a file."""
    return parse(Path(path).read_text(encoding="utf-8"), cls)
