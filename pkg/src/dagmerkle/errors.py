class GraphError(ValueError):
    """Base class for malformed-graph and precondition errors."""


class DuplicateNode(GraphError):
    pass


class UnknownNode(GraphError, KeyError):
    def __str__(self) -> str:
        # KeyError would repr() the id
        return f"unknown node {self.args[0]!r}" if self.args else "unknown node"


class DuplicateElement(GraphError):
    pass


class InconsistentCondensation(GraphError):
    pass


class TooLarge(GraphError):
    """Raised by the brute-force oracle when the input exceeds its size limit."""
