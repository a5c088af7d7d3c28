"""Exception hierarchy. Everything raised on bad user input derives from TaxosimError."""


class TaxosimError(Exception):
    pass


class ParseError(TaxosimError, ValueError):
    """Malformed input file; ``lineno`` is 1-based, or None for whole-file problems."""

    def __init__(self, message, lineno=None, source_name=None):
        self.lineno = lineno
        self.source_name = source_name
        where = ""
        if source_name:
            where = f"{source_name}:"
        if lineno is not None:
            where += f"{lineno}:"
        super().__init__(f"{where} {message}" if where else message)


class CycleError(ParseError):
    pass


class UnknownConceptError(TaxosimError, KeyError):
    def __str__(self):
        return f"unknown concept {self.args[0]!r}"


class UnknownWordError(TaxosimError, KeyError):
    def __str__(self):
        return f"unknown word {self.args[0]!r}"


class NoCommonSubsumerError(TaxosimError):
    pass


class UnreachableError(TaxosimError):
    pass


class MissingICError(TaxosimError, KeyError):
    def __str__(self):
        return f"no information content for concept {self.args[0]!r}"


class InfiniteICError(TaxosimError, ValueError):
    """A measure needed a finite IC but the concept has zero probability."""


class EvaluationError(TaxosimError):
    pass
