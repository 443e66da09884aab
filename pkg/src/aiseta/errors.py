"""Library exceptions."""


class AisEtaError(Exception):
    """Base exception for the library."""


class GeoError(AisEtaError):
    """Base exception for geodesy and geohash errors."""


class DegenerateBearingError(GeoError):
    """A bearing was requested between two coincident positions."""


class InvalidGeohashError(GeoError, ValueError):
    """A geohash string contains characters outside the base-32 alphabet."""


class DataError(AisEtaError):
    """Base exception for errors caused by input data."""


class UnreadableSourceError(DataError):
    """An input file could not be opened or parsed."""


class MalformedRecordError(DataError):
    """A line in a record file could not be decoded."""


class DegenerateDataError(DataError):
    """Too few distinct points to fit a mixture model."""


class SingularComponentError(DataError):
    """A mixture component covariance is not positive definite."""


class EmptyInputError(DataError):
    """An operation that needs data was given none."""


class InvalidSpecError(DataError):
    """A synthetic world specification is invalid."""


class LeakageError(DataError):
    """A graph was built from data that overlaps the test period."""


class GraphError(AisEtaError):
    """Base exception for knowledge graph queries."""


class UnknownCellError(GraphError, KeyError):
    """The requested cell is not a node of the graph."""


class NoRouteError(GraphError):
    """No path exists between the requested positions."""


class GraphFileError(AisEtaError):
    """Base exception for graph file errors."""


class CorruptFileError(GraphFileError):
    """A graph file failed its checksum or could not be decoded."""


class VersionMismatchError(GraphFileError):
    """A graph file or graph uses an unsupported format version or precision."""