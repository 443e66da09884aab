from collections.abc import Iterable, Iterator
from typing import Generic, TypeVar

T = TypeVar("T")
K = TypeVar("K")


class QuerySet(Iterable[T], Generic[K, T]):
    """Read-only view of keyed objects.

    Querysets iterate in ascending key order, so everything downstream of
    ingest sees vessels in the same order whatever order the input had.
    """

    def __init__(self, data: dict[K, T]) -> None:
        """Initialize a queryset.

        Args:
            data: The data dictionary to view.
        """
        self._data = data

    def __iter__(self) -> Iterator[T]:
        """Return an iterator over the objects, in ascending key order."""
        for key in sorted(self._data):  # type: ignore[type-var]
            yield self._data[key]

    def __len__(self) -> int:
        """Return the number of objects."""
        return len(self._data)

    def get(self, key: K) -> T | None:
        """Get the object with the given key."""
        return self._data.get(key)
