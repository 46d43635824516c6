"""Error categories; the CLI maps each to its own exit code."""


class QCanonError(Exception):
    exit_code = 1


class ConfigError(QCanonError, ValueError):
    """Invalid input: files, weights, labels."""

    exit_code = 2


class ConsistencyError(QCanonError, ArithmeticError):
    """A mathematical self-check failed (convention or implementation bug)."""

    exit_code = 3


class DepthError(QCanonError, IndexError):
    """An operation would leave the computed depth of a module."""

    exit_code = 4


class UnsupportedError(QCanonError, NotImplementedError):
    exit_code = 3
