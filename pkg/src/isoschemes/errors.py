"""Exception hierarchy shared by every module."""


class IsoError(Exception):
    """Base class for all package errors."""


class ParseError(IsoError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class MalformedHeader(ParseError):
    pass


class DuplicateEdge(ParseError):
    pass


class SelfLoop(ParseError):
    pass


class VertexOutOfRange(ParseError):
    pass


class PreconditionError(IsoError, ValueError):
    pass


class ForestError(PreconditionError):
    pass


class CyclicForest(ForestError):
    pass


class IncomparableEdge(ForestError):
    def __init__(self, edge):
        super().__init__(f"edge {edge[0]}-{edge[1]} joins incomparable vertices")
        self.edge = edge


class DecompositionError(PreconditionError):
    pass


class RefusalError(IsoError):
    """Instance exceeds a desk-scale size bound."""


class ConfigurationError(IsoError, ValueError):
    pass


class IntegrityError(IsoError):
    pass


class InvalidRoot(PreconditionError):
    pass


class InsufficientModuli(PreconditionError):
    pass


class DomainError(IsoError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "domain error"


class NotFound(IsoError):
    pass


class NotConstructible(PreconditionError):
    pass


class MinNotUnique(PreconditionError):
    def __init__(self, configuration, count):
        super().__init__(f"{count} minimum-weight compliant sets for {configuration}")
        self.configuration = configuration
        self.count = count
