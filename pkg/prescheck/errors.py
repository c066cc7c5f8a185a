"""Domain errors.

Every error is a ``ValueError`` carrying a ``witness`` that the CLI serialises
into its exit-2 diagnostic.
"""
from __future__ import annotations

from typing import Any


class CheckError(ValueError):
    """Base class: message plus a JSON-friendly witness."""

    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness


class NotALattice(CheckError):
    def __init__(self, axiom: str, witness: tuple[int, ...]):
        super().__init__(f"lattice axiom {axiom!r} fails at {witness}", list(witness))
        self.axiom = axiom


class NonDistributive(CheckError):
    def __init__(self, witness: tuple[int, int, int]):
        a, b, c = witness
        super().__init__(f"a ∧ (b ∨ c) != (a ∧ b) ∨ (a ∧ c) for (a, b, c) = {witness}", [a, b, c])


class BoundsMismatch(CheckError):
    pass


class TooManyGenerators(CheckError):
    pass


class ElementOutOfRange(CheckError):
    pass


class PreconditionViolated(CheckError):
    pass


class HypothesisFailed(CheckError):
    pass


class NotARing(CheckError):
    def __init__(self, axiom: str, witness: tuple[int, ...]):
        super().__init__(f"ring axiom {axiom!r} fails at {witness}", list(witness))
        self.axiom = axiom


class NotAModule(CheckError):
    def __init__(self, axiom: str, witness: tuple[int, ...]):
        super().__init__(f"module axiom {axiom!r} fails at {witness}", list(witness))
        self.axiom = axiom


class NotUnimodular(CheckError):
    def __init__(self, cover: tuple[int, ...], ideal: tuple[int, ...] = ()):
        super().__init__(
            f"cover {list(cover)} is not unimodular: generated ideal is {list(ideal)}",
            {"cover": list(cover), "ideal": list(ideal)},
        )


class ShapeMismatch(CheckError):
    pass


class NotSurjective(CheckError):
    def __init__(self, witness: int):
        super().__init__(f"map is not surjective: {witness} has an empty fiber", witness)


class EnumerationTooLarge(CheckError):
    def __init__(self, size: int, bound: int):
        super().__init__(f"enumeration of {size} candidates exceeds bound {bound}", {"size": size, "bound": bound})


class MatrixTooLarge(CheckError):
    def __init__(self, size: int, bound: int):
        super().__init__(f"complex has {size} simplices, bound is {bound}", {"size": size, "bound": bound})


class SpecParseError(CheckError):
    pass
