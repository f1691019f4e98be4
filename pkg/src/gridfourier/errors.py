"""Exception types shared across the package.

Two failure families matter to callers (and map to distinct CLI exit codes):
bad input (malformed spec files, out-of-range parameters, points outside the
support) and blown resource budgets (refusing work that would not fit in
memory/time). Everything else is a plain bug and raises normally.
"""


class InputError(ValueError):
    """Invalid input: spec file contents, parameters, or unsupported requests."""


class BudgetError(RuntimeError):
    """A requested computation exceeds a declared resource budget."""
