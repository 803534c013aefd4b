"""Exact ladder-operator algebra on a few bosonic modes.

States live in an occupation-number (Fock) basis over a fixed registry of
``n_modes`` modes and are stored sparsely as ``{occupations: amplitude}``
maps.  Operators are complex-weighted sums of ordered products of creation
and annihilation operators; the rightmost factor of a product acts on the
state first.  All operations are exact linear algebra on small
dictionaries: no truncation, and only amplitudes that are exactly zero are
pruned.

States are never normalized behind the caller's back; unnormalized
superpositions yield unnormalized expectation values.
"""

from __future__ import annotations

import math
import operator
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence

__all__ = [
    "LadderKind",
    "LadderOp",
    "StateVector",
    "OperatorExpression",
    "create",
    "annihilate",
    "vacuum",
    "basis_state",
    "apply_ladder",
    "apply_expression",
    "inner_product",
    "adjoint",
    "expectation",
    "normal_order",
    "is_normal_ordered",
    "states_allclose",
]

Occupation = tuple[int, ...]


class LadderKind(Enum):
    CREATE = "create"
    ANNIHILATE = "annihilate"


@dataclass(frozen=True)
class LadderOp:
    """A single creation or annihilation operator on one mode."""

    mode: int
    kind: LadderKind

    def __post_init__(self):
        if not isinstance(self.kind, LadderKind):
            raise ValueError(f"kind must be a LadderKind, got {self.kind!r}")
        if self.mode < 0:
            raise ValueError(f"mode index must be non-negative, got {self.mode}")

    def adjoint(self) -> "LadderOp":
        if self.kind is LadderKind.CREATE:
            return LadderOp(self.mode, LadderKind.ANNIHILATE)
        return LadderOp(self.mode, LadderKind.CREATE)

    def __repr__(self):
        dag = "†" if self.kind is LadderKind.CREATE else ""
        return f"a{dag}[{self.mode}]"


def create(mode: int) -> LadderOp:
    """Creation operator for ``mode``: maps |n⟩ to √(n+1)|n+1⟩."""
    return LadderOp(mode, LadderKind.CREATE)


def annihilate(mode: int) -> LadderOp:
    """Annihilation operator for ``mode``: maps |n⟩ to √n|n−1⟩."""
    return LadderOp(mode, LadderKind.ANNIHILATE)


def _checked_amplitude(value) -> complex:
    z = complex(value)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"amplitude must be finite, got {z!r}")
    return z


def _checked_occupation(occ, n_modes: int) -> Occupation:
    try:
        occ = tuple(operator.index(n) for n in occ)
    except TypeError:
        raise ValueError(f"occupations must be integers, got {occ!r}") from None
    if len(occ) != n_modes:
        raise ValueError(
            f"occupation vector {occ} does not match mode count {n_modes}"
        )
    if any(n < 0 for n in occ):
        raise ValueError(f"occupations must be non-negative, got {occ}")
    return occ


class StateVector:
    """Sparse state over the occupation-number basis of ``n_modes`` modes.

    Instances are immutable by convention; the algebra (addition, scalar
    multiplication) returns new states.  Equality is exact, amplitude by
    amplitude — use :func:`states_allclose` for numerical comparison.
    """

    __slots__ = ("n_modes", "_amp")

    def __init__(self, n_modes: int, amplitudes: Mapping[Occupation, complex] | None = None):
        if n_modes < 1:
            raise ValueError(f"need at least one mode, got {n_modes}")
        amp: dict[Occupation, complex] = {}
        if amplitudes:
            for occ, value in amplitudes.items():
                occ = _checked_occupation(occ, n_modes)
                z = _checked_amplitude(value)
                if z != 0:
                    amp[occ] = z
        self.n_modes = n_modes
        self._amp = amp

    @property
    def terms(self) -> dict[Occupation, complex]:
        """Copy of the stored {occupations: amplitude} map."""
        return dict(self._amp)

    def amplitude(self, occupations: Sequence[int]) -> complex:
        return self._amp.get(tuple(occupations), 0j)

    def norm_squared(self) -> float:
        return sum(a.real * a.real + a.imag * a.imag for a in self._amp.values())

    def __len__(self):
        return len(self._amp)

    def __add__(self, other):
        if not isinstance(other, StateVector):
            return NotImplemented
        if other.n_modes != self.n_modes:
            raise ValueError("cannot add states with different mode counts")
        amp = dict(self._amp)
        for occ, value in other._amp.items():
            acc = amp.get(occ, 0j) + value
            if acc != 0:
                amp[occ] = acc
            elif occ in amp:
                del amp[occ]
        out = StateVector(self.n_modes)
        out._amp = amp
        return out

    def __sub__(self, other):
        if not isinstance(other, StateVector):
            return NotImplemented
        return self + (-1.0) * other

    def __mul__(self, scalar):
        if isinstance(scalar, StateVector):
            return NotImplemented
        z = _checked_amplitude(scalar)
        out = StateVector(self.n_modes)
        if z != 0:
            out._amp = {occ: v * z for occ, v in self._amp.items() if v * z != 0}
        return out

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, StateVector):
            return NotImplemented
        return self.n_modes == other.n_modes and self._amp == other._amp

    __hash__ = None

    def __repr__(self):
        body = ", ".join(f"{occ}: {v}" for occ, v in sorted(self._amp.items()))
        return f"StateVector({self.n_modes}, {{{body}}})"


def vacuum(n_modes: int) -> StateVector:
    """The vacuum state: single term, all-zero occupations, amplitude 1."""
    if n_modes < 1:
        raise ValueError(f"need at least one mode, got {n_modes}")
    return StateVector(n_modes, {(0,) * n_modes: 1.0 + 0j})


def basis_state(occupations: Sequence[int]) -> StateVector:
    """Unit-amplitude basis state |n₀, n₁, …⟩."""
    occ = tuple(occupations)
    return StateVector(len(occ), {occ: 1.0 + 0j})


def states_allclose(first: StateVector, second: StateVector, atol: float = 1e-12) -> bool:
    """Whether two states agree amplitude-by-amplitude within ``atol``."""
    if first.n_modes != second.n_modes:
        raise ValueError("cannot compare states with different mode counts")
    for occ in first._amp.keys() | second._amp.keys():
        if abs(first._amp.get(occ, 0j) - second._amp.get(occ, 0j)) > atol:
            return False
    return True


def _term_sort_key(factors: tuple[LadderOp, ...]):
    return (len(factors), tuple((f.mode, f.kind.value) for f in factors))


class OperatorExpression:
    """Complex-weighted sum of ordered ladder-operator products.

    ``terms`` is a tuple of ``(coefficient, factors)`` pairs; ``factors``
    is an ordered tuple of :class:`LadderOp` applied right to left, and an
    empty tuple denotes the identity.  Construction merges duplicate
    products, drops exactly-zero coefficients and sorts terms canonically,
    so structurally equal operators compare equal with ``==``.

    ``+`` adds expressions, ``*`` scales by a number, ``@`` composes
    (operator product; the right operand acts first).
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[tuple[complex, Iterable[LadderOp]]] = ()):
        merged: dict[tuple[LadderOp, ...], complex] = {}
        for coeff, factors in terms:
            factors = tuple(factors)
            for f in factors:
                if not isinstance(f, LadderOp):
                    raise ValueError(f"factors must be LadderOp, got {f!r}")
            acc = merged.get(factors, 0j) + _checked_amplitude(coeff)
            if acc != 0:
                merged[factors] = acc
            elif factors in merged:
                del merged[factors]
        self.terms = tuple(
            sorted(((c, f) for f, c in merged.items()), key=lambda t: _term_sort_key(t[1]))
        )

    @classmethod
    def identity(cls, coeff: complex = 1.0) -> "OperatorExpression":
        return cls(((coeff, ()),))

    @classmethod
    def from_ladder(cls, op: LadderOp, coeff: complex = 1.0) -> "OperatorExpression":
        return cls(((coeff, (op,)),))

    def max_mode(self) -> int:
        """Largest mode index appearing in any factor; −1 for pure scalars."""
        return max((f.mode for _, factors in self.terms for f in factors), default=-1)

    def __add__(self, other):
        if not isinstance(other, OperatorExpression):
            return NotImplemented
        return OperatorExpression(self.terms + other.terms)

    def __neg__(self):
        return OperatorExpression((-c, f) for c, f in self.terms)

    def __sub__(self, other):
        if not isinstance(other, OperatorExpression):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, OperatorExpression):
            raise TypeError("use @ for operator products, * is scalar multiplication")
        z = _checked_amplitude(scalar)
        return OperatorExpression((c * z, f) for c, f in self.terms)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if not isinstance(other, OperatorExpression):
            return NotImplemented
        return OperatorExpression(
            (c1 * c2, f1 + f2) for c1, f1 in self.terms for c2, f2 in other.terms
        )

    def __eq__(self, other):
        if not isinstance(other, OperatorExpression):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def __repr__(self):
        if not self.terms:
            return "OperatorExpression(0)"
        parts = []
        for coeff, factors in self.terms:
            product = " ".join(repr(f) for f in factors) if factors else "1"
            parts.append(f"({coeff})·{product}")
        return " + ".join(parts)


def _check_expression_modes(expr: OperatorExpression, n_modes: int):
    top = expr.max_mode()
    if top >= n_modes:
        raise ValueError(f"expression touches mode {top}, state has {n_modes} modes")


def apply_ladder(op: LadderOp, state: StateVector) -> StateVector:
    """Apply one ladder operator: a†|…,n,…⟩ = √(n+1)|…,n+1,…⟩ and
    a|…,n,…⟩ = √n|…,n−1,…⟩, term by term."""
    if not 0 <= op.mode < state.n_modes:
        raise ValueError(f"mode {op.mode} out of range for {state.n_modes}-mode state")
    out: dict[Occupation, complex] = {}
    m = op.mode
    for occ, ampl in state._amp.items():
        n = occ[m]
        if op.kind is LadderKind.CREATE:
            value = ampl * math.sqrt(n + 1)
            new = occ[:m] + (n + 1,) + occ[m + 1 :]
        else:
            if n == 0:
                continue
            value = ampl * math.sqrt(n)
            new = occ[:m] + (n - 1,) + occ[m + 1 :]
        if value != 0:
            out[new] = value
    result = StateVector(state.n_modes)
    result._amp = out
    return result


def apply_expression(expr: OperatorExpression, state: StateVector) -> StateVector:
    """Apply a sum of ladder-operator products; linear in both arguments."""
    _check_expression_modes(expr, state.n_modes)
    acc: dict[Occupation, complex] = defaultdict(complex)
    for coeff, factors in expr.terms:
        current = state._amp
        for factor in reversed(factors):
            m = factor.mode
            moved: dict[Occupation, complex] = {}
            if factor.kind is LadderKind.CREATE:
                for occ, ampl in current.items():
                    n = occ[m]
                    moved[occ[:m] + (n + 1,) + occ[m + 1 :]] = ampl * math.sqrt(n + 1)
            else:
                for occ, ampl in current.items():
                    n = occ[m]
                    if n:
                        moved[occ[:m] + (n - 1,) + occ[m + 1 :]] = ampl * math.sqrt(n)
            current = moved
        for occ, ampl in current.items():
            acc[occ] += coeff * ampl
    result = StateVector(state.n_modes)
    result._amp = {occ: v for occ, v in acc.items() if v != 0}
    return result


def inner_product(bra: StateVector, ket: StateVector) -> complex:
    """⟨bra|ket⟩ = Σ conj(bra amplitude)·ket amplitude over shared basis states."""
    if bra.n_modes != ket.n_modes:
        raise ValueError("cannot take inner product of states with different mode counts")
    total = 0j
    if len(bra._amp) <= len(ket._amp):
        for occ, a in bra._amp.items():
            b = ket._amp.get(occ)
            if b is not None:
                total += a.conjugate() * b
    else:
        for occ, b in ket._amp.items():
            a = bra._amp.get(occ)
            if a is not None:
                total += a.conjugate() * b
    return total


def adjoint(expr: OperatorExpression) -> OperatorExpression:
    """Hermitian adjoint: conjugate coefficients, reverse each product,
    swap creation and annihilation.  An involution."""
    return OperatorExpression(
        (c.conjugate(), tuple(f.adjoint() for f in reversed(factors)))
        for c, factors in expr.terms
    )


def expectation(expr: OperatorExpression, state: StateVector) -> complex:
    """⟨state|expr|state⟩, unnormalized."""
    return inner_product(state, apply_expression(expr, state))


def is_normal_ordered(expr: OperatorExpression) -> bool:
    """Whether every term has all creation factors left of all annihilations."""
    for _, factors in expr.terms:
        seen_annihilate = False
        for f in factors:
            if f.kind is LadderKind.ANNIHILATE:
                seen_annihilate = True
            elif seen_annihilate:
                return False
    return True


def normal_order(expr: OperatorExpression) -> OperatorExpression:
    """Rewrite into normal order using a_i a_j† = a_j† a_i + δ_ij.

    The result is equal as an operator; every term carries its creation
    factors (sorted by mode) left of its annihilation factors (sorted by
    mode).  Each rewrite either removes an inversion or shortens a term,
    so the recursion terminates.
    """
    pending = list(expr.terms)
    finished: dict[tuple[LadderOp, ...], complex] = defaultdict(complex)
    while pending:
        coeff, factors = pending.pop()
        for i in range(len(factors) - 1):
            left, right = factors[i], factors[i + 1]
            if left.kind is LadderKind.ANNIHILATE and right.kind is LadderKind.CREATE:
                swapped = factors[:i] + (right, left) + factors[i + 2 :]
                pending.append((coeff, swapped))
                if left.mode == right.mode:
                    pending.append((coeff, factors[:i] + factors[i + 2 :]))
                break
        else:
            creations = sorted(
                (f for f in factors if f.kind is LadderKind.CREATE), key=lambda f: f.mode
            )
            annihilations = sorted(
                (f for f in factors if f.kind is LadderKind.ANNIHILATE), key=lambda f: f.mode
            )
            finished[tuple(creations + annihilations)] += coeff
    return OperatorExpression((c, f) for f, c in finished.items())
