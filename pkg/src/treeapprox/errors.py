"""Exception hierarchy shared across the package.

``InputError`` subclasses signal rejected inputs (CLI exit code 2);
``BoundViolation`` signals a broken internal guarantee (CLI exit code 3)
and is never caught silently.
"""


class TreeApproxError(Exception):
    pass


class InputError(TreeApproxError):
    """Invalid user-supplied data."""


class AsymmetricMatrix(InputError):
    pass


class NegativeOrZeroOffDiagonal(InputError):
    pass


class TriangleViolation(InputError):
    def __init__(self, a: str, b: str, c: str):
        self.witness = (a, b, c)
        super().__init__(f"triangle inequality fails on ({a}, {b}, {c})")


class DuplicateLabel(InputError):
    pass


class NonPositiveScale(InputError):
    pass


class SinglePoint(InputError):
    pass


class NotASpanningTree(InputError):
    pass


class NotZeroHyperbolic(InputError):
    def __init__(self, witness=None):
        self.witness = witness
        msg = "metric violates the four-point condition"
        if witness is not None:
            msg += f" on {witness}"
        super().__init__(msg)


class TooLarge(InputError):
    pass


class OutOfRange(InputError):
    pass


class InfeasibleConstraints(InputError):
    pass


class BoundViolation(TreeApproxError):
    """A proof-backed bound failed on a concrete run.  Always a bug."""
