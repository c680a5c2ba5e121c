"""Exception hierarchy shared by all fragalign modules."""


class FragalignError(Exception):
    """Base class for every error raised by this package."""


class InvalidNet(FragalignError, ValueError):
    pass


class NotEnabled(FragalignError):
    def __init__(self, transition, marking):
        super().__init__(f"transition {transition!r} is not enabled in {marking!r}")
        self.transition = transition
        self.marking = marking


class StateSpaceCapExceeded(FragalignError):
    def __init__(self, cap, what="state space"):
        super().__init__(f"{what} exceeded the cap of {cap} states")
        self.cap = cap


class ParseError(FragalignError, ValueError):
    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class ArityError(ParseError):
    pass


class UnknownNode(FragalignError, KeyError):
    def __str__(self):
        return f"unknown node {self.args[0]!r}"


class NoMatchingLeaf(FragalignError, ValueError):
    pass


class UnsupportedMarking(FragalignError, ValueError):
    pass


class NoGoalReachable(FragalignError):
    pass


class MalformedPath(FragalignError, ValueError):
    pass


class MethodNotApplicable(FragalignError, ValueError):
    pass


class XmlError(FragalignError, ValueError):
    def __init__(self, message, location=None):
        if location is not None:
            message = f"{message} (line {location[0]}, column {location[1]})"
        super().__init__(message)
        self.location = location


class MissingColumn(FragalignError, KeyError):
    def __str__(self):
        return f"missing column {self.args[0]!r}"


class EmptyLog(FragalignError, ValueError):
    pass
