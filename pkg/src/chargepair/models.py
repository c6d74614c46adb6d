"""Hamiltonians and symmetry generators of the pairing chain family.

Fermionic models are assembled on the Fock basis of :mod:`chargepair.fock`.
Spin-chain models live on the same 2L-qubit index layout: qubit ``j-1``
carries the sigma spin of site j and qubit ``L+j-1`` the tau spin, with bit
value 1 meaning spin projection +1/2.  Under the string map

    c_up(j)   = prod_{k<j} sigma^z_k sigma^-_j
    c_down(j) = prod_{k=1..L} sigma^z_k prod_{k<j} tau^z_k tau^-_j

this layout makes spin-chain matrices directly comparable, element by
element, with the fermionic ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp

from . import fock
from .fock import ANNIHILATE, CREATE, DOWN, UP, Matrix, Sector

MODEL_KINDS = (
    "hubbard",
    "charge_pair",
    "charge_pair_transformed",
    "charge_pair_extended",
    "spin_coupled",
    "spin_xx_even",
    "spin_xx_odd",
    "charge_pair_jw",
)

GENERATOR_KINDS = (
    "S_x",
    "S_y",
    "S_z",
    "R_x",
    "R_y",
    "R_z",
    "S_x_staggered",
    "S_z_staggered",
    "R_y_staggered",
    "R_z_staggered",
)

_FERMION_KINDS = frozenset(
    {"hubbard", "charge_pair", "charge_pair_transformed", "charge_pair_extended"}
)
_SPIN_KINDS = frozenset({"spin_coupled", "spin_xx_even", "spin_xx_odd"})


@dataclass(frozen=True)
class ModelParams:
    """Couplings of the model family; fluxes and chemical potentials default
    to zero and are read only by the extended model."""

    L: int
    U: float
    theta_up: float = 0.0
    theta_down: float = 0.0
    h1: float = 0.0
    h2: float = 0.0


def _site_next(j: int, L: int) -> int:
    return 1 if j == L else j + 1


def _term_product(a: Iterable[fock.Term], b: Iterable[fock.Term]) -> List[fock.Term]:
    out = []
    for ca, fa in a:
        for cb, fb in b:
            out.append((ca * cb, list(fa) + list(fb)))
    return out


def _interaction_terms(L: int, U: float) -> List[fock.Term]:
    """U * sum_j (n_up - 1/2)(n_down - 1/2) expanded into mode products."""
    terms: List[fock.Term] = []
    for j in range(1, L + 1):
        nu = [(CREATE, UP, j), (ANNIHILATE, UP, j)]
        nd = [(CREATE, DOWN, j), (ANNIHILATE, DOWN, j)]
        terms.append((U, nu + nd))
        terms.append((-U / 2, nu))
        terms.append((-U / 2, nd))
        terms.append((U / 4, []))
    return terms


def _hubbard_terms(params: ModelParams) -> List[fock.Term]:
    L = params.L
    terms: List[fock.Term] = []
    for j in range(1, L + 1):
        jn = _site_next(j, L)
        for spin in (UP, DOWN):
            terms.append((-1.0, [(CREATE, spin, j), (ANNIHILATE, spin, jn)]))
            terms.append((-1.0, [(CREATE, spin, jn), (ANNIHILATE, spin, j)]))
    return terms + _interaction_terms(L, params.U)


def _charge_pair_terms(params: ModelParams) -> List[fock.Term]:
    L = params.L
    terms: List[fock.Term] = []
    for j in range(1, L + 1):
        jn = _site_next(j, L)
        for spin in (UP, DOWN):
            terms.append((1.0, [(ANNIHILATE, spin, j), (ANNIHILATE, spin, jn)]))
            terms.append((1.0, [(CREATE, spin, jn), (CREATE, spin, j)]))
    return terms + _interaction_terms(L, params.U)


def _transformed_terms(params: ModelParams) -> List[fock.Term]:
    """Hopping with phases exp(+-i pi/2); up and down move with opposite sign."""
    L = params.L
    terms: List[fock.Term] = []
    for j in range(1, L + 1):
        jn = _site_next(j, L)
        terms.append((1j, [(CREATE, UP, j), (ANNIHILATE, UP, jn)]))
        terms.append((-1j, [(CREATE, UP, jn), (ANNIHILATE, UP, j)]))
        terms.append((-1j, [(CREATE, DOWN, j), (ANNIHILATE, DOWN, jn)]))
        terms.append((1j, [(CREATE, DOWN, jn), (ANNIHILATE, DOWN, j)]))
    return terms + _interaction_terms(L, params.U)


def _extended_terms(params: ModelParams) -> List[fock.Term]:
    L, U = params.L, params.U
    tu, td = params.theta_up, params.theta_down
    h1, h2 = params.h1, params.h2
    phases = {UP: tu, DOWN: td}
    terms: List[fock.Term] = []
    for j in range(1, L + 1):
        jn = _site_next(j, L)
        for spin in (UP, DOWN):
            th = phases[spin]
            terms.append((np.exp(1j * th), [(ANNIHILATE, spin, j), (ANNIHILATE, spin, jn)]))
            terms.append((np.exp(-1j * th), [(CREATE, spin, jn), (CREATE, spin, j)]))
    terms += _interaction_terms(L, U)
    half_diff = (tu - td) / 2
    half_sum = (tu + td) / 2
    for j in range(1, L + 1):
        terms.append((1j * h1 * np.exp(1j * half_diff), [(CREATE, DOWN, j), (ANNIHILATE, UP, j)]))
        terms.append((-1j * h1 * np.exp(-1j * half_diff), [(CREATE, UP, j), (ANNIHILATE, DOWN, j)]))
        terms.append((h2 * np.exp(-1j * half_sum), [(CREATE, UP, j), (CREATE, DOWN, j)]))
        terms.append((h2 * np.exp(1j * half_sum), [(ANNIHILATE, DOWN, j), (ANNIHILATE, UP, j)]))
    return terms


def build_model(kind: str, params: ModelParams, sector: Optional[Sector] = None) -> Matrix:
    """Matrix of the requested model on the full chain space.

    ``sector`` restricts to a particle-number block and is supported for the
    transformed model only (the others do not conserve mode numbers).
    """
    if kind not in MODEL_KINDS:
        raise ValueError(f"unknown model kind {kind!r}")
    L = params.L
    if L < 2:
        raise ValueError("ring models need L >= 2")
    if kind != "charge_pair_extended" and (
        params.theta_up or params.theta_down or params.h1 or params.h2
    ):
        raise ValueError(f"model {kind!r} does not accept fluxes or chemical potentials")
    if kind == "spin_xx_even" and L % 2:
        raise ValueError("spin_xx_even needs even L")
    if kind == "spin_xx_odd" and L % 2 == 0:
        raise ValueError("spin_xx_odd needs odd L")
    if sector is not None and kind != "charge_pair_transformed":
        raise ValueError("sector blocks are available for charge_pair_transformed only")

    if kind == "hubbard":
        return fock.assemble_operator(L, _hubbard_terms(params))
    if kind == "charge_pair":
        return fock.assemble_operator(L, _charge_pair_terms(params))
    if kind == "charge_pair_transformed":
        return fock.assemble_operator(L, _transformed_terms(params), sector=sector)
    if kind == "charge_pair_extended":
        return fock.assemble_operator(L, _extended_terms(params))
    if kind == "spin_coupled":
        return _coupled_spin_chain(L, params.U)
    if kind == "spin_xx_even":
        return _xx_chain_even(L, params.U)
    if kind == "spin_xx_odd":
        return _xx_chain_odd(L, params.U)
    if kind == "charge_pair_jw":
        return jordan_wigner_image(L, params.U)
    raise AssertionError(kind)


def extended_charges(params: ModelParams) -> Tuple[Matrix, Matrix]:
    """Flux-dressed conserved charges of the extended model.

    Returns (S, R) with the extended Hamiltonian satisfying
    H(theta, h1, h2) = H(theta, 0, 0) + 2 h1 S + 2 h2 R; at zero flux S and R
    reduce to the y spin rotation and x pseudo-spin rotation generators.
    """
    L = params.L
    half_diff = (params.theta_up - params.theta_down) / 2
    half_sum = (params.theta_up + params.theta_down) / 2
    s_terms: List[fock.Term] = []
    r_terms: List[fock.Term] = []
    for j in range(1, L + 1):
        s_terms.append((0.5j * np.exp(1j * half_diff), [(CREATE, DOWN, j), (ANNIHILATE, UP, j)]))
        s_terms.append((-0.5j * np.exp(-1j * half_diff), [(CREATE, UP, j), (ANNIHILATE, DOWN, j)]))
        r_terms.append((0.5 * np.exp(-1j * half_sum), [(CREATE, UP, j), (CREATE, DOWN, j)]))
        r_terms.append((0.5 * np.exp(1j * half_sum), [(ANNIHILATE, DOWN, j), (ANNIHILATE, UP, j)]))
    return fock.assemble_operator(L, s_terms), fock.assemble_operator(L, r_terms)


def _generator_site_terms(kind: str, j: int) -> List[fock.Term]:
    cu, au = (CREATE, UP, j), (ANNIHILATE, UP, j)
    cd, ad = (CREATE, DOWN, j), (ANNIHILATE, DOWN, j)
    if kind == "S_x":
        return [(0.5, [cu, ad]), (0.5, [cd, au])]
    if kind == "S_y":
        return [(0.5j, [cd, au]), (-0.5j, [cu, ad])]
    if kind == "S_z":
        return [(0.5, [cu, au]), (-0.5, [cd, ad])]
    if kind == "R_x":
        return [(0.5, [cu, cd]), (0.5, [ad, au])]
    if kind == "R_y":
        return [(0.5j, [ad, au]), (-0.5j, [cu, cd])]
    if kind == "R_z":
        return [(0.5, [cu, au]), (0.5, [cd, ad]), (-0.5, [])]
    raise AssertionError(kind)


def symmetry_generator(kind: str, L: int) -> Matrix:
    """Sum over sites of the on-site spin / pseudo-spin generator; staggered
    variants carry a factor (-1)^j."""
    if kind not in GENERATOR_KINDS:
        raise ValueError(f"unknown generator kind {kind!r}")
    base = kind.replace("_staggered", "")
    staggered = kind.endswith("_staggered")
    terms: List[fock.Term] = []
    for j in range(1, L + 1):
        weight = (-1.0) ** j if staggered else 1.0
        for coeff, factors in _generator_site_terms(base, j):
            terms.append((weight * coeff, factors))
    return fock.assemble_operator(L, terms)


# ---------------------------------------------------------------------------
# on-site basis rotation


_V_LOCAL = np.array(
    [
        [1, 0, 0, 1],
        [0, -1j, 1, 0],
        [0, -1, 1j, 0],
        [-1, 0, 0, 1],
    ],
    dtype=complex,
) / np.sqrt(2)


def _local_unit_terms(j: int) -> List[List[fock.Term]]:
    """Hubbard operators X_ab = |a><b| of site j as mode-operator term lists,
    in the local order (empty, up, down, up+down)."""
    cu, au = (CREATE, UP, j), (ANNIHILATE, UP, j)
    cd, ad = (CREATE, DOWN, j), (ANNIHILATE, DOWN, j)
    one: List[fock.Term] = [(1.0, [])]
    nu: List[fock.Term] = [(1.0, [cu, au])]
    nd: List[fock.Term] = [(1.0, [cd, ad])]
    pu = [(1.0, []), (-1.0, [cu, au])]   # 1 - n_up
    pd = [(1.0, []), (-1.0, [cd, ad])]   # 1 - n_down
    x = [[None] * 4 for _ in range(4)]
    x[0][0] = _term_product(pu, pd)
    x[1][1] = _term_product(nu, pd)
    x[2][2] = _term_product(pu, nd)
    x[3][3] = _term_product(nu, nd)
    x[0][1] = _term_product([(1.0, [au])], pd)
    x[1][0] = _term_product([(1.0, [cu])], pd)
    x[0][2] = _term_product([(1.0, [ad])], pu)
    x[2][0] = _term_product([(1.0, [cd])], pu)
    x[0][3] = [(1.0, [ad, au])]
    x[3][0] = [(1.0, [cu, cd])]
    x[1][2] = [(1.0, [cu, ad])]
    x[2][1] = [(1.0, [cd, au])]
    x[1][3] = [(-1.0, [ad, cu, au])]
    x[3][1] = [(-1.0, [cu, au, cd])]
    x[2][3] = [(1.0, [au, cd, ad])]
    x[3][2] = [(1.0, [cd, ad, cu])]
    return x


def local_operator(L: int, j: int, local: np.ndarray) -> Matrix:
    """Embed a 4x4 on-site operator (local basis empty, up, down, up+down)
    into the chain space, with fermionic sign bookkeeping."""
    x = _local_unit_terms(j)
    terms: List[fock.Term] = []
    for a in range(4):
        for b in range(4):
            c = local[a, b]
            if c != 0:
                terms += [(c * w, f) for w, f in x[a][b]]
    return fock.assemble_operator(L, terms)


def basis_rotation(L: int) -> np.ndarray:
    """Product over sites of the on-site unitary that trades the pairing form
    for the imaginary-hopping form.

    The returned W is the product of the printed on-site factors, satisfies
    W W^dag = 1, and realizes ``W @ H_charge_pair @ W^dag == H_transformed``
    element by element once the on-site factors are embedded with the Fock
    kernel's sign bookkeeping.
    """
    fock._check_L(L)
    w = np.eye(4**L, dtype=complex)
    for j in range(1, L + 1):
        vj = local_operator(L, j, _V_LOCAL)
        w = w @ (vj.toarray() if sp.issparse(vj) else vj)
    return w


def printed_local_rotation() -> np.ndarray:
    """The on-site 4x4 rotation matrix as printed (one site factor)."""
    return _V_LOCAL.copy()


def transformed_fermion_matrix(L: int, spin: str, site: int, dagger: bool = False) -> Matrix:
    """Matrix of the rotated annihilation (or creation) operator d(site) in
    the original basis, built from its linear combination of c and c^dag."""
    cu, au = (CREATE, UP, site), (ANNIHILATE, UP, site)
    cd, ad = (CREATE, DOWN, site), (ANNIHILATE, DOWN, site)
    if spin == UP:
        terms = [(0.5, [au]), (0.5j, [cu]), (-0.5j, [ad]), (0.5, [cd])]
    elif spin == DOWN:
        terms = [(0.5j, [au]), (0.5, [cu]), (-0.5, [ad]), (0.5j, [cd])]
    else:
        raise ValueError(f"unknown spin {spin!r}")
    if dagger:
        terms = [(np.conj(c), [_dagger_factor(f) for f in reversed(fs)]) for c, fs in terms]
    return fock.assemble_operator(L, terms)


def _dagger_factor(f):
    kind, spin, site = f
    return (ANNIHILATE if kind == CREATE else CREATE, spin, site)


# ---------------------------------------------------------------------------
# Pauli strings on the 2L-qubit layout

_PZ = np.array([[-1.0, 0.0], [0.0, 1.0]])
_PP = np.array([[0.0, 0.0], [1.0, 0.0]])   # raises spin: bit 0 -> 1
_PM = np.array([[0.0, 1.0], [0.0, 0.0]])

_SYMBOLS = {"z": _PZ, "+": _PP, "-": _PM}

PauliFactor = Tuple[int, str]


def pauli_string_matrix(
    n_qubits: int, coeff: complex, factors: Sequence[PauliFactor]
) -> sp.csr_matrix:
    """Sparse matrix of coeff * product of single-qubit operators.

    Factors are (qubit, symbol) with symbol in {'z', '+', '-'}, listed left
    to right as written; repeated qubits multiply in that order.
    """
    per_qubit = {}
    for q, sym in factors:
        op = _SYMBOLS[sym]
        per_qubit[q] = per_qubit[q] @ op if q in per_qubit else op

    dim = 1 << n_qubits
    cols = np.arange(dim, dtype=np.int64)
    amp = np.full(dim, coeff, dtype=complex)
    rows = cols.copy()
    valid = np.ones(dim, dtype=bool)
    for q, op in per_qubit.items():
        bits = (cols >> q) & 1
        # monomial per column: at most one nonzero entry
        col_amp = np.empty(2, dtype=complex)
        col_out = np.empty(2, dtype=np.int64)
        col_ok = np.empty(2, dtype=bool)
        for b in (0, 1):
            nz = np.nonzero(op[:, b])[0]
            if len(nz) > 1:
                raise ValueError("per-qubit operator is not monomial")
            if len(nz) == 0:
                col_ok[b], col_out[b], col_amp[b] = False, b, 0.0
            else:
                col_ok[b], col_out[b], col_amp[b] = True, nz[0], op[nz[0], b]
        valid &= col_ok[bits]
        amp = amp * col_amp[bits]
        flip = (col_out[bits] != bits)
        rows = np.where(flip, rows ^ (1 << q), rows)
    return sp.coo_matrix(
        (amp[valid], (rows[valid], cols[valid])), shape=(dim, dim)
    ).tocsr()


def assemble_pauli(
    n_qubits: int,
    terms: Sequence[Tuple[complex, Sequence[PauliFactor]]],
    dense: Optional[bool] = None,
) -> Matrix:
    dim = 1 << n_qubits
    acc = sp.csr_matrix((dim, dim), dtype=complex)
    for coeff, factors in terms:
        acc = acc + pauli_string_matrix(n_qubits, coeff, factors)
    if dense is None:
        dense = dim <= fock.DENSE_DIM_LIMIT
    return acc.toarray() if dense else acc


def _sigma(j: int) -> int:
    return j - 1


def _tau(j: int, L: int) -> int:
    return L + j - 1


def _pair_bond(q1: int, q2: int) -> list:
    return [(1.0, [(q1, "-"), (q2, "-")]), (1.0, [(q1, "+"), (q2, "+")])]


def _xx_bond(q1: int, q2: int) -> list:
    return [(1.0, [(q1, "-"), (q2, "+")]), (1.0, [(q1, "+"), (q2, "-")])]


def _zz_terms(L: int, U: float) -> list:
    return [(U / 4, [(_sigma(j), "z"), (_tau(j, L), "z")]) for j in range(1, L + 1)]


def _coupled_spin_chain(L: int, U: float) -> Matrix:
    """Pairing-coupled chain: uniform sigma/tau pair bonds on every ring bond
    plus the on-site zz coupling."""
    terms = []
    for j in range(1, L + 1):
        jn = _site_next(j, L)
        terms += _pair_bond(_sigma(j), _sigma(jn))
        terms += _pair_bond(_tau(j, L), _tau(jn, L))
    terms += _zz_terms(L, U)
    return assemble_pauli(2 * L, terms)


def _xx_chain_even(L: int, U: float) -> Matrix:
    terms = []
    for j in range(1, L + 1):
        jn = _site_next(j, L)
        terms += _xx_bond(_sigma(j), _sigma(jn))
        terms += _xx_bond(_tau(j, L), _tau(jn, L))
    terms += _zz_terms(L, U)
    return assemble_pauli(2 * L, terms)


def _xx_chain_odd(L: int, U: float) -> Matrix:
    terms = []
    for j in range(1, L):
        terms += _xx_bond(_sigma(j), _sigma(j + 1))
        terms += _xx_bond(_tau(j, L), _tau(j + 1, L))
    terms += _pair_bond(_sigma(L), _sigma(1))
    terms += _pair_bond(_tau(L, L), _tau(1, L))
    terms += _zz_terms(L, U)
    return assemble_pauli(2 * L, terms)


def jordan_wigner_image(L: int, U: float) -> Matrix:
    """Pauli-string matrix of the pairing chain: open pair bonds, on-site zz
    coupling, and the string-dressed boundary terms.

    The string convention counts occupied modes, matching the Fock kernel's
    parity bookkeeping, so on this module's qubit layout the result equals
    the fermionic charge-pair matrix element by element.  A convention whose
    strings count empty modes differs by a site-parity gauge that flips the
    bulk bond signs.
    """
    if L < 2:
        raise ValueError("needs L >= 2")
    terms = []
    for j in range(1, L):
        terms += [(-c, f) for c, f in _pair_bond(_sigma(j), _sigma(j + 1))]
        terms += [(-c, f) for c, f in _pair_bond(_tau(j, L), _tau(j + 1, L))]
    terms += _zz_terms(L, U)
    # boundary strings run over the interior sites 2..L-1
    bsign = (-1.0) ** L
    sigma_string = [(_sigma(k), "z") for k in range(2, L)]
    tau_string = [(_tau(k, L), "z") for k in range(2, L)]
    terms.append((bsign, [(_sigma(1), "-")] + sigma_string + [(_sigma(L), "-")]))
    terms.append((bsign, [(_sigma(1), "+")] + sigma_string + [(_sigma(L), "+")]))
    terms.append((bsign, [(_tau(1, L), "-")] + tau_string + [(_tau(L, L), "-")]))
    terms.append((bsign, [(_tau(1, L), "+")] + tau_string + [(_tau(L, L), "+")]))
    return assemble_pauli(2 * L, terms)


def sublattice_rotation_check(L: int, U: float) -> float:
    """Residual of conjugating the coupled chain by the even-site spin flips
    against the XX chain of matching parity."""
    if L < 2:
        raise ValueError("needs L >= 2")
    hs = _coupled_spin_chain(L, U)
    target = _xx_chain_even(L, U) if L % 2 == 0 else _xx_chain_odd(L, U)
    w = _even_site_flip(L)
    hs = hs.toarray() if sp.issparse(hs) else hs
    target = target.toarray() if sp.issparse(target) else target
    rotated = w @ hs @ w.conj().T
    return float(np.max(np.abs(rotated - target)))


def _even_site_flip(L: int) -> np.ndarray:
    """Product of sigma^x tau^x over even sites (spin flip on those sites)."""
    dim = 1 << (2 * L)
    mask = 0
    for j in range(2, L + 1, 2):
        mask |= 1 << _sigma(j)
        mask |= 1 << _tau(j, L)
    cols = np.arange(dim, dtype=np.int64)
    rows = cols ^ mask
    return sp.coo_matrix(
        (np.ones(dim), (rows, cols)), shape=(dim, dim)
    ).toarray().astype(complex)


def translation_operator(L: int) -> Matrix:
    """One-site shift on the fermionic chain, T c(j) T^dag = c(j+1), with the
    permutation sign of reordering the shifted modes."""
    fock._check_L(L)
    basis = fock.enumerate_basis(L)
    index = {s.word: i for i, s in enumerate(basis)}
    rows, cols, vals = [], [], []
    for col, state in enumerate(basis):
        modes = [m for m in range(2 * L) if (state.word >> m) & 1]
        shifted = [_shift_mode(m, L) for m in modes]
        sign = _permutation_sign(shifted)
        word = 0
        for m in shifted:
            word |= 1 << m
        rows.append(index[word])
        cols.append(col)
        vals.append(sign)
    return sp.coo_matrix(
        (np.asarray(vals, dtype=complex), (rows, cols)), shape=(len(basis), len(basis))
    ).toarray()


def _shift_mode(m: int, L: int) -> int:
    if m < L:
        return (m + 1) % L
    return L + (m - L + 1) % L


def _permutation_sign(seq: Sequence[int]) -> int:
    inv = 0
    n = len(seq)
    for i in range(n):
        for k in range(i + 1, n):
            if seq[i] > seq[k]:
                inv += 1
    return -1 if inv & 1 else 1
