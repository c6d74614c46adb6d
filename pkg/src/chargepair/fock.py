"""Fermionic Fock-space kernel for a chain of spin-1/2 modes.

A chain of L sites carries 2L fermionic modes.  The canonical mode order is
all spin-up modes by ascending site followed by all spin-down modes by
ascending site:

    mode(up, j)   = j - 1          (j = 1..L)
    mode(down, j) = L + j - 1

A basis state is encoded as a single 2L-bit word ``up_bits | down_bits << L``
and the basis is enumerated in increasing word order, so the local ordering
at L = 1 is (empty, up, down, up+down).  The many-body state attached to a
word is the product of creation operators applied in ascending mode order to
the vacuum; fermionic signs follow from counting occupied modes below the
target mode.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.sparse as sp

UP = "up"
DOWN = "down"
CREATE = "create"
ANNIHILATE = "annihilate"

MAX_SITES = 12

#: dimension up to which assembled operators are returned dense
DENSE_DIM_LIMIT = 4096

Factor = Tuple[str, str, int]
Term = Tuple[complex, Sequence[Factor]]
Matrix = Union[np.ndarray, sp.csr_matrix]


@dataclass(frozen=True)
class Sector:
    """Particle-number block (N_up, N_down) of the chain Hilbert space."""

    n_up: int
    n_down: int

    def validate(self, L: int) -> None:
        if not (0 <= self.n_up <= L and 0 <= self.n_down <= L):
            raise ValueError(f"sector {self} out of range for L={L}")


@dataclass(frozen=True)
class FockState:
    """Occupation configuration of the 2L modes of an L-site chain."""

    up_bits: int
    down_bits: int
    L: int

    def __post_init__(self):
        mask = (1 << self.L) - 1
        if self.up_bits & ~mask or self.down_bits & ~mask:
            raise ValueError("occupation bits beyond site count")

    @property
    def word(self) -> int:
        return self.up_bits | (self.down_bits << self.L)

    @property
    def n_up(self) -> int:
        return self.up_bits.bit_count()

    @property
    def n_down(self) -> int:
        return self.down_bits.bit_count()

    @classmethod
    def from_word(cls, word: int, L: int) -> "FockState":
        mask = (1 << L) - 1
        return cls(word & mask, word >> L, L)

    def __repr__(self):
        up = format(self.up_bits, f"0{self.L}b")
        down = format(self.down_bits, f"0{self.L}b")
        return f"FockState(up={up}, down={down})"


def mode_index(L: int, spin: str, site: int) -> int:
    """Canonical mode number of (spin, site); sites are 1-based."""
    if not 1 <= site <= L:
        raise ValueError(f"site {site} outside 1..{L}")
    if spin == UP:
        return site - 1
    if spin == DOWN:
        return L + site - 1
    raise ValueError(f"unknown spin {spin!r}")


def _check_L(L: int) -> None:
    if not 1 <= L <= MAX_SITES:
        raise ValueError(f"site count L={L} outside 1..{MAX_SITES}")


def enumerate_basis(L: int, sector: Optional[Sector] = None) -> list[FockState]:
    """All basis states of the chain, in increasing encoded-word order.

    Without a sector the full 4**L states are returned; with one, the
    C(L, n_up) * C(L, n_down) states of that particle-number block.
    """
    _check_L(L)
    if sector is None:
        return [FockState.from_word(w, L) for w in range(4**L)]
    sector.validate(L)
    ups = _bit_patterns(L, sector.n_up)
    downs = _bit_patterns(L, sector.n_down)
    words = sorted(u | (d << L) for u in ups for d in downs)
    return [FockState.from_word(w, L) for w in words]


def _bit_patterns(L: int, n: int) -> list[int]:
    out = []
    for positions in combinations(range(L), n):
        w = 0
        for p in positions:
            w |= 1 << p
        out.append(w)
    return out


def sector_dimension(L: int, sector: Optional[Sector]) -> int:
    if sector is None:
        return 4**L
    return comb(L, sector.n_up) * comb(L, sector.n_down)


def apply_mode(
    state: FockState, kind: str, spin: str, site: int
) -> Optional[Tuple[int, FockState]]:
    """Apply one creation/annihilation operator to a basis state.

    Returns ``None`` when Pauli-blocked, else ``(sign, new_state)`` where the
    sign is the parity of the occupied modes preceding the target in
    canonical order.
    """
    m = mode_index(state.L, spin, site)
    word = state.word
    occupied = (word >> m) & 1
    if kind == CREATE:
        if occupied:
            return None
    elif kind == ANNIHILATE:
        if not occupied:
            return None
    else:
        raise ValueError(f"unknown operator kind {kind!r}")
    sign = -1 if (word & ((1 << m) - 1)).bit_count() & 1 else 1
    return sign, FockState.from_word(word ^ (1 << m), state.L)


def _apply_word(word: int, L: int, factors: Sequence[Factor]) -> Optional[Tuple[int, int]]:
    """Apply an ordered operator product to an encoded word (rightmost first)."""
    sign = 1
    for kind, spin, site in reversed(factors):
        m = mode_index(L, spin, site)
        occupied = (word >> m) & 1
        if kind == CREATE:
            if occupied:
                return None
        elif kind == ANNIHILATE:
            if not occupied:
                return None
        else:
            raise ValueError(f"unknown operator kind {kind!r}")
        if (word & ((1 << m) - 1)).bit_count() & 1:
            sign = -sign
        word ^= 1 << m
    return sign, word


def assemble_operator(
    L: int,
    terms: Iterable[Term],
    sector: Optional[Sector] = None,
    dense: Optional[bool] = None,
) -> Matrix:
    """Assemble sum(coeff * product of mode operators) as a matrix.

    Each term is ``(coefficient, factors)`` with factors listed left to right
    as written in the operator product; an empty factor list contributes
    ``coefficient * identity``.  With a sector, any term mapping a sector
    state outside the block raises.  Returns a dense array up to dimension
    ``DENSE_DIM_LIMIT`` and a CSR matrix above (overridable via ``dense``).
    """
    _check_L(L)
    basis = enumerate_basis(L, sector)
    dim = len(basis)
    index = {s.word: i for i, s in enumerate(basis)}
    if dense is None:
        dense = dim <= DENSE_DIM_LIMIT

    rows, cols, vals = [], [], []
    for coeff, factors in terms:
        if coeff == 0:
            continue
        for col, state in enumerate(basis):
            res = _apply_word(state.word, L, list(factors))
            if res is None:
                continue
            sign, word = res
            row = index.get(word)
            if row is None:
                raise ValueError(
                    f"operator term {list(factors)} leaves sector {sector}: "
                    f"maps word {state.word:#x} to {word:#x}"
                )
            rows.append(row)
            cols.append(col)
            vals.append(sign * coeff)

    mat = sp.coo_matrix(
        (np.asarray(vals, dtype=complex), (rows, cols)), shape=(dim, dim)
    ).tocsr()
    mat.sum_duplicates()
    if dense:
        return mat.toarray()
    return mat


def basis_vector(L: int, state: FockState, sector: Optional[Sector] = None) -> np.ndarray:
    """Unit amplitude vector of a basis state in the enumerated basis."""
    basis = enumerate_basis(L, sector)
    vec = np.zeros(len(basis), dtype=complex)
    for i, s in enumerate(basis):
        if s.word == state.word:
            vec[i] = 1.0
            return vec
    raise ValueError("state not contained in the enumerated basis")


def vacuum_state(L: int) -> FockState:
    return FockState(0, 0, L)
