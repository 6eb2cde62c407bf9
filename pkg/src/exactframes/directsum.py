"""The l2 direct sum of a sequence of component spaces.

Two name formats coexist for the same space.  A SumName gives each
component as a vector name plus the total squared norm as one CReal; a
FourierName gives the doubly indexed basis coordinates plus the same
total.  Converting SumName -> FourierName is free; the converse
genuinely needs a computable sequence of component norms, which is why
fourier_to_sum takes it as an explicit argument and certifies against
it.

The injected basis E(i, j) (component basis vector j placed at slot i)
is orthonormal for the sum space; flat indexing threads through the
pairing bijection.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from typing import Callable, Mapping

from .errors import SpaceMismatchError
from .realcore import (
    CReal,
    CRealSeq,
    certified_tail_cut,
    creal_from_rational,
    creal_mul,
    creal_sqrt,
    creal_sum,
    pow2,
    unpairing,
)
from .hilbert import (
    FiniteCombo,
    SpaceDescriptor,
    VectorName,
    basis_vector,
    inner_product,
    same_space,
    vector_from_coefficients,
)


class SumSpace:
    """The l2 sum of the component spaces produced by an oracle."""

    def __init__(self, components: Callable[[int], SpaceDescriptor]):
        self._components = components
        self._cache: dict[int, SpaceDescriptor] = {}
        self._lock = threading.Lock()
        self.descriptor = SpaceDescriptor(dimension=None)

    def component(self, i: int) -> SpaceDescriptor:
        if i < 0:
            raise ValueError("component index must be a natural number")
        with self._lock:
            got = self._cache.get(i)
            if got is None:
                got = self._components(i)
                self._cache[i] = got
            return got

    def basis(self, i: int, j: int) -> "SumName":
        return sum_embed(self, i, basis_vector(self.component(i), j))

    def flat_basis(self, k: int) -> "SumName":
        i, j = unpairing(k)
        return self.basis(i, j)


class SumName:
    """Componentwise names plus the total squared norm as extra data.

    The normsq field is part of the name, not derivable from the
    components: without it no truncation of the component sequence can
    be certified.
    """

    __slots__ = ("space", "_fn", "normsq", "_cache", "_lock")

    def __init__(self, space: SumSpace, fn: Callable[[int], VectorName],
                 normsq: CReal):
        self.space = space
        self._fn = fn
        self.normsq = normsq
        self._cache: dict[int, VectorName] = {}
        self._lock = threading.RLock()

    def component(self, i: int) -> VectorName:
        with self._lock:
            got = self._cache.get(i)
            if got is None:
                got = self._fn(i)
                if not same_space(got.space, self.space.component(i)):
                    raise SpaceMismatchError(
                        f"component {i} lives in the wrong space")
                self._cache[i] = got
            return got

    @classmethod
    def finite(cls, space: SumSpace,
               comps: Mapping[int, FiniteCombo]) -> "SumName":
        """A finitely supported element with exact combination data; the
        squared norm is then an exact rational."""
        table = {i: VectorName.from_combo(c) for i, c in comps.items()}
        normsq = sum((c.norm_squared() for c in comps.values()), Fraction(0))

        def fn(i: int) -> VectorName:
            got = table.get(i)
            return got if got is not None else VectorName.zero(space.component(i))

        return cls(space, fn, creal_from_rational(normsq))

    @classmethod
    def zero(cls, space: SumSpace) -> "SumName":
        return cls.finite(space, {})

    def in_space(self, space: SumSpace) -> "SumName":
        """View this name in another sum space over the same component
        spaces; membership is still checked component by component."""
        if space is self.space:
            return self
        return SumName(space, self.component, self.normsq)


class FourierName:
    """Doubly indexed basis coordinates plus the total squared norm."""

    __slots__ = ("space", "_fn", "normsq", "_cache", "_lock")

    def __init__(self, space: SumSpace, fn: Callable[[int, int], CReal],
                 normsq: CReal):
        self.space = space
        self._fn = fn
        self.normsq = normsq
        self._cache: dict[tuple[int, int], CReal] = {}
        self._lock = threading.RLock()

    def coeff(self, i: int, j: int) -> CReal:
        key = (i, j)
        with self._lock:
            got = self._cache.get(key)
            if got is None:
                got = self._fn(i, j)
                self._cache[key] = got
            return got


def sum_embed(space: SumSpace, i: int, f: VectorName) -> SumName:
    """Coordinate injection: f at slot i, zero elsewhere."""
    if not same_space(f.space, space.component(i)):
        raise SpaceMismatchError(f"vector does not live in component {i}")

    def fn(k: int) -> VectorName:
        return f if k == i else VectorName.zero(space.component(k))

    return SumName(space, fn, inner_product(f, f))


def sum_norm(F: SumName) -> CReal:
    return creal_sqrt(F.normsq)


def _component_normsq_partial(F: SumName, count: int) -> CReal:
    return creal_sum([inner_product(F.component(i), F.component(i))
                      for i in range(count)])


def component_cut(F: SumName, theta: Fraction, p: int, limit: int) -> int:
    """Certified count with the component tail square <= 2*theta; partial
    square sums are monotone, so any larger count keeps the bound."""
    return certified_tail_cut(
        F.normsq, lambda count: _component_normsq_partial(F, count),
        theta, p, limit, what="sum norm datum")


def sum_inner_product(F: SumName, G: SumName, *,
                      max_terms_shift: int = 16) -> CReal:
    """Certified inner product: the cross tail is bounded by the product
    of the two certified component tails."""
    if F.space is not G.space:
        raise SpaceMismatchError("sum names from different sum spaces")

    def fn(n: int) -> Fraction:
        # per-side tail squares <= 2*theta, so cross tail <= 2*theta <= 2^-(n+2)
        theta = pow2(-(n + 3))
        limit = 1 << (n + max_terms_shift)
        count = max(component_cut(F, theta, n + 6, limit),
                    component_cut(G, theta, n + 6, limit))
        finite = creal_sum([inner_product(F.component(i), G.component(i))
                            for i in range(count)])
        return finite.approx(n + 1)

    return CReal(fn)


def sum_to_fourier(F: SumName) -> FourierName:
    """Componentwise basis coordinates; the norm datum passes through."""

    def fn(i: int, j: int) -> CReal:
        space_i = F.space.component(i)
        if space_i.dimension is not None and j >= space_i.dimension:
            return creal_from_rational(0)
        return inner_product(F.component(i), basis_vector(space_i, j))

    return FourierName(F.space, fn, F.normsq)


def fourier_to_sum(G: FourierName, compnorms: CRealSeq, *,
                   max_terms_shift: int = 16) -> SumName:
    """Reassemble components from coordinates.

    compnorms.at(i) must equal the norm of component i; that sequence is
    the load-bearing hypothesis here, and each component assembly
    certifies its truncation against it (failing loudly when it is
    understated)."""

    def fn(i: int) -> VectorName:
        space_i = G.space.component(i)
        norm_i = compnorms.at(i)
        return vector_from_coefficients(
            space_i, lambda j: G.coeff(i, j), creal_mul(norm_i, norm_i),
            max_terms_shift=max_terms_shift)

    return SumName(G.space, fn, G.normsq)
