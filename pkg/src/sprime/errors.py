"""Exception hierarchy.  Precondition failures are errors, not false verdicts."""


class SPrimeError(Exception):
    """Base class for all package errors."""


class CapExceeded(SPrimeError):
    """A structure or enumeration would exceed the configured order cap."""


class StructureError(SPrimeError):
    """Tables or subsets fail the axioms required of them."""


class ImproperError(SPrimeError):
    """A predicate requiring a proper ideal/submodule received the whole carrier."""


class NotDisjointError(SPrimeError):
    """The m-system meets the ideal (or colon ideal) it must avoid."""


class NotMSystemError(SPrimeError):
    """A subset handed in as an m-system is empty or fails the m-system test."""
