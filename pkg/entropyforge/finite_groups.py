"""Finite groups attached to a tree: rooted groups S_d and the boundary group F.

Rooted groups act on the children of a vertex. The default is the full
symmetric group; a transitive subgroup can be given by generators, in which
case sympy decides transitivity and the order, and the elements are
enumerated once and cached.

The boundary group F labels the spine. It is either cyclic (elements are
ints mod m) or symmetric (elements are permutation tuples of degree m).

Architecture Note:
    Both classes are frozen dataclasses holding only tuples and ints, so a
    GroupSpec that references them pickles cleanly into worker processes.
    sympy objects are rebuilt on demand and never stored.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Union

import numpy as np
from sympy.combinatorics import Permutation, PermutationGroup

from . import perms
from .const import DEFAULT_ENUMERATION_CAP, FStructure
from .exceptions import SpecValidationError
from .perms import Perm

_LOGGER = logging.getLogger(__name__)

# Boundary group element: int for cyclic F, permutation tuple for symmetric F
FElem = Union[int, Perm]


@dataclass(frozen=True)
class RootedGroup:
    """A permutation group acting on the children of one vertex.

    Attributes:
        degree: Number of children d
        generators: Generating permutations; empty for the full group
        full: True when the group is all of S_d
    """

    degree: int
    generators: tuple[Perm, ...] = ()
    full: bool = True

    @classmethod
    def symmetric(cls, degree: int) -> RootedGroup:
        return cls(degree=degree)

    @classmethod
    def from_generators(cls, degree: int, generators: list[Perm]) -> RootedGroup:
        """Build a rooted group from explicit generators.

        Raises:
            SpecValidationError: If a generator is not a permutation of the
                degree or the generated group is not transitive
        """
        for gen in generators:
            if not perms.is_perm(gen, degree):
                raise SpecValidationError(
                    f"Generator {list(gen)} is not a permutation of degree {degree}"
                )
        group = cls(degree=degree, generators=tuple(generators), full=False)
        if not group.is_transitive:
            raise SpecValidationError(
                f"Rooted group of degree {degree} generated by "
                f"{[list(g) for g in generators]} is not transitive"
            )
        if group.order == math.factorial(degree):
            return cls.symmetric(degree)
        _LOGGER.warning(
            "Rooted group of degree %s has order %s; non-full rooted groups "
            "are experimental",
            degree,
            group.order,
        )
        return group

    def _sympy_group(self) -> PermutationGroup:
        gens = [Permutation(list(g)) for g in self.generators]
        if not gens:
            gens = [Permutation(self.degree - 1)]
        return PermutationGroup(gens)

    @cached_property
    def order(self) -> int:
        if self.full:
            return math.factorial(self.degree)
        return int(self._sympy_group().order())

    @cached_property
    def is_transitive(self) -> bool:
        if self.full or self.degree == 1:
            return True
        return bool(self._sympy_group().is_transitive())

    @property
    def identity(self) -> Perm:
        return perms.identity(self.degree)

    def contains(self, p: Perm) -> bool:
        if not perms.is_perm(p, self.degree):
            return False
        if self.full:
            return True
        return p in self._element_set

    @cached_property
    def _element_set(self) -> frozenset[Perm]:
        return frozenset(self.elements())

    def elements(self) -> tuple[Perm, ...]:
        """Return all elements in lexicographic order.

        Raises:
            SpecValidationError: If the group is too large to enumerate
        """
        if self.order > DEFAULT_ENUMERATION_CAP:
            raise SpecValidationError(
                f"Rooted group of degree {self.degree} has order {self.order}, "
                f"above the enumeration cap {DEFAULT_ENUMERATION_CAP}"
            )
        return self._elements

    @cached_property
    def _elements(self) -> tuple[Perm, ...]:
        if self.full:
            return tuple(perms.all_perms(self.degree))
        found = {
            perms.from_sympy(g, self.degree) for g in self._sympy_group().generate()
        }
        return tuple(sorted(found))

    def random(self, rng: np.random.Generator) -> Perm:
        """Draw a uniform element."""
        if self.full:
            return tuple(int(x) for x in rng.permutation(self.degree))
        elems = self.elements()
        return elems[int(rng.integers(len(elems)))]

    def stabilizer_of_zero(self) -> tuple[Perm, ...]:
        """Elements fixing child 0, in lexicographic order."""
        if self.full:
            return tuple(
                (0,) + tuple(q + 1 for q in p)
                for p in perms.all_perms(self.degree - 1)
            )
        return tuple(p for p in self.elements() if p[0] == 0)


@dataclass(frozen=True)
class FGroup:
    """The finite boundary group F.

    Attributes:
        structure: cyclic (Z/m) or symmetric (S_m)
        size: The parameter m; the order is m for cyclic and m! for symmetric
    """

    structure: FStructure
    size: int

    def __post_init__(self) -> None:
        if self.size < 1:
            raise SpecValidationError(
                f"Boundary group size must be >= 1, got {self.size}"
            )

    @property
    def order(self) -> int:
        if self.structure is FStructure.CYCLIC:
            return self.size
        return math.factorial(self.size)

    @property
    def is_abelian(self) -> bool:
        return self.structure is FStructure.CYCLIC or self.size <= 2

    @property
    def identity(self) -> FElem:
        if self.structure is FStructure.CYCLIC:
            return 0
        return perms.identity(self.size)

    def is_identity(self, f: FElem) -> bool:
        return f == self.identity

    def mul(self, a: FElem, b: FElem) -> FElem:
        if self.structure is FStructure.CYCLIC:
            assert isinstance(a, int) and isinstance(b, int)
            return (a + b) % self.size
        assert isinstance(a, tuple) and isinstance(b, tuple)
        return perms.compose(a, b)

    def inv(self, a: FElem) -> FElem:
        if self.structure is FStructure.CYCLIC:
            assert isinstance(a, int)
            return (-a) % self.size
        assert isinstance(a, tuple)
        return perms.inverse(a)

    def elements(self) -> tuple[FElem, ...]:
        if self.structure is FStructure.CYCLIC:
            return tuple(range(self.size))
        return tuple(perms.all_perms(self.size))

    def random(self, rng: np.random.Generator) -> FElem:
        if self.structure is FStructure.CYCLIC:
            return int(rng.integers(self.size))
        return tuple(int(x) for x in rng.permutation(self.size))
