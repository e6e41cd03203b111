"""Exception hierarchy shared by every module."""


class HomtwError(Exception):
    """Base class for library errors."""


class GraphError(HomtwError, ValueError):
    """Malformed graph input (bad endpoint, unknown name, bad parameters)."""


class VertexLimitError(HomtwError):
    """A materialized graph would exceed the configured vertex limit."""


class ParseError(HomtwError, ValueError):
    """Malformed text in one of the interchange formats."""


class DecompositionError(HomtwError, ValueError):
    """A tree decomposition is invalid for the graph it is used with."""


class PreconditionError(HomtwError, ValueError):
    """An operation was called outside its documented domain."""


class Inconclusive(HomtwError):
    """A search ran out of budget before reaching a definite answer.

    Never conflated with a negative answer.
    """
