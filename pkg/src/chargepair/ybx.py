"""Vertex-model integrability engine.

Free-fermion eight-vertex building blocks with one null weight, the coupled
Lax operator, Shastry-form R-matrix, transfer matrices, the quartic spectral
curve, the graded fermionic Lax operator and R-matrix, and the Yang-Baxter
residual checks in spin, graded-tensor and grading-insensitive check form.

Local spaces are four dimensional, ordered (empty, up, down, up+down) with
Grassmann parities (0, 1, 1, 0).  A local space is the pair of qubits
(tau, sigma) with the sigma qubit on the low bit, so sigma operators embed
as kron(I2, s) and tau operators as kron(t, I2).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from . import models
from .models import ModelParams

_ID2 = np.eye(2)
_Z = np.array([[-1.0, 0.0], [0.0, 1.0]])
_SP = np.array([[0.0, 0.0], [1.0, 0.0]])
_SM = np.array([[0.0, 1.0], [0.0, 0.0]])

PARITIES = (0, 1, 1, 0)


def _kron(*ops: np.ndarray) -> np.ndarray:
    out = ops[0]
    for op in ops[1:]:
        out = np.kron(out, op)
    return out


@dataclass(frozen=True)
class VertexWeights:
    """Weights of the symmetric free-fermion eight-vertex Lax operator."""

    a: float
    b: float
    c: float
    d: float

    @property
    def free_fermion_residual(self) -> float:
        return abs(self.a**2 + self.b**2 - self.c**2 - self.d**2)

    @classmethod
    def from_spectral(cls, lam: float) -> "VertexWeights":
        """The null-b family a=1, c=cos(lam), d=sin(lam)."""
        return cls(1.0, 0.0, float(np.cos(lam)), float(np.sin(lam)))


def coupling_h(lam: float, U: float) -> float:
    """Coupling strength from sinh(2h) = (U/4) sin(2 lam), principal branch."""
    return 0.5 * float(np.arcsinh(0.25 * U * np.sin(2.0 * lam)))


@dataclass(frozen=True)
class CurvePoint:
    """Point (x, y) on the quartic curve (x^2+y^2)^2 - U x y - 1 = 0."""

    x: float
    y: float
    U: float

    @property
    def residual(self) -> float:
        r2 = self.x**2 + self.y**2
        return abs(r2 * r2 - self.U * self.x * self.y - 1.0)

    @property
    def spectral_parameter(self) -> float:
        return float(np.arctan2(self.y, self.x))


def curve_point(lam: float, U: float) -> CurvePoint:
    """Map the spectral parameter onto the curve via x = cos(lam) e^h,
    y = sin(lam) e^h."""
    eh = np.exp(coupling_h(lam, U))
    return CurvePoint(float(np.cos(lam) * eh), float(np.sin(lam) * eh), U)


def _pauli_pair(a: np.ndarray, b: np.ndarray, family: str) -> np.ndarray:
    """Embed one-qubit operators on the (family) qubit of two local spaces."""
    if family == "sigma":
        return _kron(_ID2, a, _ID2, b)
    return _kron(a, _ID2, b, _ID2)


def single_lax(lam: float, family: str) -> np.ndarray:
    """One free-fermion eight-vertex block acting on the family qubits of
    two local spaces (16 x 16)."""
    c, d = np.cos(lam), np.sin(lam)
    eye = np.eye(16)
    zz = _pauli_pair(_Z, _Z, family)
    hop = _pauli_pair(_SP, _SM, family) + _pauli_pair(_SM, _SP, family)
    pair = _pauli_pair(_SP, _SP, family) + _pauli_pair(_SM, _SM, family)
    return 0.5 * (eye + zz) + c * hop + d * pair


def coupled_lax(lam: float, U: float) -> np.ndarray:
    """Shastry-coupled Lax operator on (auxiliary space, site space)."""
    h = coupling_h(lam, U)
    zz4 = _kron(_Z, _Z)
    e_half = np.diag(np.exp(0.5 * h * (np.diag(zz4) + 1.0)))
    e16 = _kron(e_half, np.eye(4))
    return e16 @ (single_lax(lam, "sigma") @ single_lax(lam, "tau")) @ e16


def _coupling_dressing(h1: float, h2: float) -> np.ndarray:
    """exp[(h1/2)(zz+1)] on the first space times exp[(h2/2)(zz+1)] on the
    second: the same dressing that wraps the coupled Lax operator."""
    zz4 = np.diag(_kron(_Z, _Z))
    d1 = np.diag(np.exp(0.5 * h1 * (zz4 + 1.0)))
    d2 = np.diag(np.exp(0.5 * h2 * (zz4 + 1.0)))
    return _kron(d1, d2)


def shastry_r(lam1: float, lam2: float, U: float) -> np.ndarray:
    """Intertwiner of two coupled Lax operators (16 x 16).

    The two-term cosh/sinh combination of null-b blocks at the difference
    and sum arguments, wrapped in the coupling dressing of both auxiliary
    spaces; the wrap is what makes the combination satisfy the Yang-Baxter
    equation in these conventions (checked against the unique intertwiner
    obtained by a null-space solve).
    """
    h1, h2 = coupling_h(lam1, U), coupling_h(lam2, U)
    dh = h1 - h2
    lm, lp = lam1 - lam2, lam1 + lam2
    first = np.cos(lp) * np.cosh(dh) * (single_lax(lm, "sigma") @ single_lax(lm, "tau"))
    zz_first = _kron(_kron(_Z, _Z), np.eye(4))
    second = (
        np.cos(lm)
        * np.sinh(dh)
        * (single_lax(lp, "sigma") @ single_lax(lp, "tau"))
        @ zz_first
    )
    dress = _coupling_dressing(h1, h2)
    undress = _coupling_dressing(-h1, -h2)
    return dress @ (first + second) @ undress


def _embed_pair(a: np.ndarray, spaces: Tuple[int, int], d: int = 4) -> np.ndarray:
    """Embed a two-space operator into the triple product space."""
    eye = np.eye(d)
    if spaces == (0, 1):
        return np.kron(a, eye)
    if spaces == (1, 2):
        return np.kron(eye, a)
    if spaces == (0, 2):
        swap = _swap_matrix(d)
        s23 = np.kron(eye, swap)
        return s23 @ np.kron(a, eye) @ s23
    raise ValueError(f"unsupported space pair {spaces}")


def _swap_matrix(d: int) -> np.ndarray:
    s = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            s[i * d + j, j * d + i] = 1.0
    return s


def ybe_residual_spin(lam1: float, lam2: float, U: float) -> float:
    """Max-norm residual of R12 L13 L23 = L23 L13 R12 on the 64-dim space."""
    r12 = _embed_pair(shastry_r(lam1, lam2, U), (0, 1))
    l13 = _embed_pair(coupled_lax(lam1, U), (0, 2))
    l23 = _embed_pair(coupled_lax(lam2, U), (1, 2))
    return float(np.max(np.abs(r12 @ l13 @ l23 - l23 @ l13 @ r12)))


# ---------------------------------------------------------------------------
# transfer matrix


def transfer_matrix(lam: float, U: float, L: int) -> np.ndarray:
    """Trace over the auxiliary space of the ordered product of Lax
    operators; returned on the canonical qubit layout of :mod:`models`.

    At lam = 0 this is the one-site shift."""
    if L > 4:
        raise ValueError("transfer matrices are kept to L <= 4")
    if L < 2:
        raise ValueError("needs L >= 2")
    lax = coupled_lax(lam, U).reshape(4, 4, 4, 4)   # [a_out, i_out, a_in, i_in]
    mono = lax.transpose(0, 2, 1, 3)                # [a_out, a_in, i_out, i_in]
    for _ in range(L - 1):
        mono = np.einsum("abIJ,bcij->acIiJj", mono, lax.transpose(0, 2, 1, 3))
        s = mono.shape
        mono = mono.reshape(s[0], s[1], s[2] * s[3], s[4] * s[5])
    t_site_major = np.einsum("aaIJ->IJ", mono)
    perm = _site_major_permutation(L)
    return t_site_major[np.ix_(perm, perm)]


def _site_major_permutation(L: int) -> np.ndarray:
    """perm[f] = site-major index of canonical (bit-layout) index f."""
    dim = 4**L
    perm = np.empty(dim, dtype=np.int64)
    for f in range(dim):
        idx = 0
        for j in range(1, L + 1):
            i_loc = ((f >> (j - 1)) & 1) + 2 * ((f >> (L + j - 1)) & 1)
            idx = idx * 4 + i_loc if j > 1 else i_loc
        # site 1 most significant
        perm[f] = idx
    return perm


def shift_operator(L: int) -> np.ndarray:
    """Spin-chain one-site shift on the canonical layout (no fermion signs),
    moving the content of site j+1 onto site j; equals the transfer matrix
    at zero spectral parameter."""
    dim = 4**L
    cols = np.arange(dim, dtype=np.int64)
    mask = (1 << L) - 1
    up = cols & mask
    down = (cols >> L) & mask
    up_s = ((up >> 1) | (up << (L - 1))) & mask
    down_s = ((down >> 1) | (down << (L - 1))) & mask
    rows = up_s | (down_s << L)
    t = np.zeros((dim, dim))
    t[rows, cols] = 1.0
    return t


def log_derivative_hamiltonian(U: float, L: int, delta: float = 1e-4) -> np.ndarray:
    """d/d lam log T at lam = 0 via central differences with one Richardson
    step; equals the coupled spin chain plus a multiple of the identity."""
    t0_inv = np.linalg.inv(transfer_matrix(0.0, U, L))

    def diff(step):
        return (transfer_matrix(step, U, L) - transfer_matrix(-step, U, L)) / (2 * step) @ t0_inv

    d1 = diff(delta)
    d2 = diff(delta / 2)
    return (4.0 * d2 - d1) / 3.0


def spin_chain_constant_fit(U: float, L: int, delta: float = 1e-4) -> Tuple[float, float]:
    """Residual of the log-derivative against the coupled chain after fitting
    the additive constant; returns (residual, constant)."""
    d = log_derivative_hamiltonian(U, L, delta)
    hs = models.build_model("spin_coupled", ModelParams(L=L, U=U))
    hs = hs if isinstance(hs, np.ndarray) else hs.toarray()
    c = np.trace(d - hs).real / d.shape[0]
    return float(np.max(np.abs(d - hs - c * np.eye(d.shape[0])))), float(c)


# ---------------------------------------------------------------------------
# graded objects


def graded_permutation() -> np.ndarray:
    p = np.zeros((16, 16))
    for j in range(4):
        for k in range(4):
            sign = (-1.0) ** (PARITIES[j] * PARITIES[k])
            p[4 * j + k, 4 * k + j] = sign
    return p


_TWIST_M = np.diag(
    [1, 1, -1, -1, 1, 1, -1, -1, 1, -1, 1, -1, 1, -1, 1, -1]
).astype(float)
_TWIST_MBAR = np.diag(
    [1, 1, 1, 1, 1, -1, 1, -1, -1, 1, -1, 1, -1, -1, -1, -1]
).astype(float)

_CURVE_TOL = 1e-9


def _check_on_curve(p: CurvePoint) -> None:
    if p.residual > _CURVE_TOL:
        raise ValueError(f"point ({p.x}, {p.y}) off the curve (residual {p.residual:.3e})")


def graded_lax(p: CurvePoint) -> np.ndarray:
    """Fermionic Lax operator at a curve point, as the explicit 16 x 16
    matrix in the spectral variables."""
    _check_on_curve(p)
    x, y = p.x, p.y
    r2 = x * x + y * y
    w1 = r2
    w2 = x * y / r2
    w3 = -y * y / r2
    w4 = -x * x / r2
    m = np.zeros((16, 16))
    rows = [
        [(0, w1), (5, -y), (10, -y), (15, -y * y)],
        [(4, x), (14, -x * y)],
        [(8, x), (13, x * y)],
        [(12, x * x)],
        [(1, x), (11, w2)],
        [(0, y), (5, -1.0), (10, w3), (15, -y)],
        [(9, w4)],
        [(8, w2), (13, x)],
        [(2, x), (7, -w2)],
        [(6, w4)],
        [(0, y), (5, w3), (10, -1.0), (15, -y)],
        [(4, -w2), (14, x)],
        [(3, x * x)],
        [(2, -x * y), (7, x)],
        [(1, x * y), (11, x)],
        [(0, -y * y), (5, y), (10, y), (15, w1)],
    ]
    for i, entries in enumerate(rows):
        for jcol, val in entries:
            m[i, jcol] = val
    return m


def graded_lax_from_twist(p: CurvePoint) -> np.ndarray:
    """The same operator built by twisting the coupled Lax operator with the
    printed diagonal matrices."""
    _check_on_curve(p)
    lam = p.spectral_parameter
    return _TWIST_M @ coupled_lax(lam, p.U) @ _TWIST_MBAR


def graded_r(p1: CurvePoint, p2: CurvePoint) -> np.ndarray:
    """Graded R-matrix between two points of the same-coupling curve."""
    if p1.U != p2.U:
        raise ValueError("curve points carry different couplings")
    _check_on_curve(p1)
    _check_on_curve(p2)
    x1, y1, x2, y2 = p1.x, p1.y, p2.x, p2.y
    r1 = x1 * x1 + y1 * y1
    r2 = x2 * x2 + y2 * y2
    den = x1 * x1 * x2 * x2 - y1 * y1 * y2 * y2
    if abs(den) < 1e-12 or abs(r1) < 1e-12 or abs(r2) < 1e-12:
        raise ValueError("singular denominator for this pair of points")
    a = y1 * y2 / r1 + x1 * x2 / r2
    b = -x1 * y2 / r1 + y1 * x2 / r2
    bb = y1 * x2 / r1 - x1 * y2 / r2
    d = (x1 * y1 - x2 * y2) / den
    g = -x1 * x2 / r1 - y1 * y2 / r2
    h = (x1 * x2 * r1 - y1 * y2 * r2) / den
    q = (y1 * y2 * r1 - x1 * x2 * r2) / den
    m = np.zeros((16, 16))
    rows = [
        [(0, h), (5, -d), (10, -d), (15, a - h)],
        [(4, 1.0), (14, -b)],
        [(8, 1.0), (13, b)],
        [(12, a)],
        [(1, 1.0), (11, bb)],
        [(0, d), (5, q), (10, q - g), (15, -d)],
        [(9, g)],
        [(8, bb), (13, 1.0)],
        [(2, 1.0), (7, -bb)],
        [(6, g)],
        [(0, d), (5, q - g), (10, q), (15, -d)],
        [(4, -bb), (14, 1.0)],
        [(3, a)],
        [(2, -b), (7, 1.0)],
        [(1, b), (11, 1.0)],
        [(0, a - h), (5, d), (10, d), (15, h)],
    ]
    for i, entries in enumerate(rows):
        for jcol, val in entries:
            m[i, jcol] = val
    return m


def ybe_residual_graded(p1: CurvePoint, p2: CurvePoint) -> float:
    """Max-norm residual of the grading-insensitive check-form relation.

    With RC = P_g R and LC = P_g L the relation reads
    RC_23(p1,p2) LC_12(p1) LC_23(p2) = LC_12(p2) LC_23(p1) RC_12(p1,p2),
    evaluated with plain tensor embeddings.
    """
    pg = graded_permutation()
    rc = pg @ graded_r(p1, p2)
    lc1 = pg @ graded_lax(p1)
    lc2 = pg @ graded_lax(p2)
    lhs = _embed_pair(rc, (1, 2)) @ _embed_pair(lc1, (0, 1)) @ _embed_pair(lc2, (1, 2))
    rhs = _embed_pair(lc2, (0, 1)) @ _embed_pair(lc1, (1, 2)) @ _embed_pair(rc, (0, 1))
    return float(np.max(np.abs(lhs - rhs)))


def _graded_sign_matrix(convention: int) -> np.ndarray:
    """Diagonal sign factor attached to embedding an operator on the outer
    spaces (0, 2): its legs cross the middle space.

    Sandwiching the plain embedding between this factor multiplies entry
    [(i0,i1,i2),(j0,j1,j2)] by (-1)^(p(i1)(p(i2)+p(j2))) for convention 2
    (middle parity times the crossing legs of the last space) and by
    (-1)^(p(i1)(p(i0)+p(i2)) + same for j) for convention 1."""
    par = np.array(PARITIES)
    sign = np.ones((4, 4, 4))
    for i0 in range(4):
        for i1 in range(4):
            for i2 in range(4):
                if convention == 1:
                    sign[i0, i1, i2] = (-1.0) ** (par[i1] * (par[i0] + par[i2]))
                else:
                    sign[i0, i1, i2] = (-1.0) ** (par[i1] * par[i2])
    return np.diag(sign.reshape(-1))


#: the sign placement that closes the graded-tensor relation (asserted in tests)
GRADED_SIGN_CONVENTION = 2


def ybe_residual_graded_tensor(
    p1: CurvePoint, p2: CurvePoint, convention: int = GRADED_SIGN_CONVENTION
) -> float:
    """Residual of R12 L13 L23 = L23 L13 R12 with graded embeddings.

    The graded tensor product attaches parity signs when operator legs cross
    the middle space; of the two standard placements, convention
    ``GRADED_SIGN_CONVENTION`` is the one that drives the residual to zero
    and is the recorded choice.
    """
    r = graded_r(p1, p2)
    l1 = graded_lax(p1)
    l2 = graded_lax(p2)
    r12 = _embed_pair(r, (0, 1))
    l23 = _embed_pair(l2, (1, 2))
    s = _graded_sign_matrix(convention)
    l13 = s @ _embed_pair(l1, (0, 2)) @ s
    return float(np.max(np.abs(r12 @ l13 @ l23 - l23 @ l13 @ r12)))


def random_curve_points(U: float, count: int, seed: int) -> list:
    rng = np.random.default_rng(seed)
    return [curve_point(lam, U) for lam in rng.uniform(0.0, 2.0 * np.pi, size=count)]


# ---------------------------------------------------------------------------
# density expansion


def regular_point(U: float) -> CurvePoint:
    return CurvePoint(1.0, 0.0, U)


def density_expansion(U: float, base_lambda: float = 4e-2, levels: int = 6) -> np.ndarray:
    """Two-body Hamiltonian density extracted from the first-order expansion
    of the fermionic Lax operator around the regular point.

    The expansion parameter is the second spectral variable y; finite
    differences at a geometric ladder of y values are Richardson-refined to
    the limit y -> 0.
    """
    pg = graded_permutation()
    eye = np.eye(16)
    lams = [base_lambda / (2**i) for i in range(levels)]
    eps = []
    tableau = []
    for lam in lams:
        p = curve_point(lam, U)
        eps.append(p.y)
        tableau.append((pg @ graded_lax(p) - eye) / p.y)
    # Neville extrapolation of the matrix samples to eps = 0
    for m in range(1, levels):
        tableau = [
            (eps[i] * tableau[i + 1] - eps[i + m] * tableau[i]) / (eps[i] - eps[i + m])
            for i in range(levels - m)
        ]
    return tableau[0]


def two_site_density_reference(U: float) -> np.ndarray:
    """The printed two-body density as a fermionic 16 x 16 matrix: pairing
    terms for both spins plus half the on-site interaction of each end plus
    U/4 times the identity (site-major mode order up1, down1, up2, down2)."""
    mat = np.zeros((16, 16), dtype=complex)
    # pairing: c(1) c(2) + c+(2) c+(1) for each spin
    for spin_off in (0, 1):   # up modes are bits 0/2, down modes bits 1/3
        m1, m2 = spin_off, spin_off + 2
        mat += _ts_pair(m1, m2)
    for site in (0, 1):
        mat += 0.5 * U * _ts_interaction(site)
    mat += 0.25 * U * np.eye(16)
    return _site_major_to_local(mat)


def _ts_apply(word: int, mode: int, create: bool) -> Optional[Tuple[int, int]]:
    occ = (word >> mode) & 1
    if create == bool(occ):
        return None
    sign = -1 if bin(word & ((1 << mode) - 1)).count("1") & 1 else 1
    return sign, word ^ (1 << mode)


def _ts_matrix(ops: Sequence[Tuple[int, bool]]) -> np.ndarray:
    """Two-site operator product in the mode-word basis (modes up1, down1,
    up2, down2 on bits 0..3), rightmost factor applied first."""
    m = np.zeros((16, 16))
    for col in range(16):
        word, sign = col, 1
        ok = True
        for mode, create in reversed(list(ops)):
            res = _ts_apply(word, mode, create)
            if res is None:
                ok = False
                break
            s, word = res
            sign *= s
        if ok:
            m[word, col] += sign
    return m


def _ts_pair(m1: int, m2: int) -> np.ndarray:
    ann = _ts_matrix([(m1, False), (m2, False)])
    return ann + ann.conj().T


def _ts_interaction(site: int) -> np.ndarray:
    up, down = 2 * site, 2 * site + 1
    n_up = _ts_matrix([(up, True), (up, False)])
    n_down = _ts_matrix([(down, True), (down, False)])
    eye = np.eye(16)
    return (n_up - 0.5 * eye) @ (n_down - 0.5 * eye)


def _site_major_to_local(mat: np.ndarray) -> np.ndarray:
    """Reindex from the mode-word basis to the local-state basis
    (4 * i_site1 + i_site2 with i = n_up + 2 n_down)."""
    perm = np.empty(16, dtype=np.int64)
    for word in range(16):
        i1 = (word & 1) + 2 * ((word >> 1) & 1)
        i2 = ((word >> 2) & 1) + 2 * ((word >> 3) & 1)
        perm[4 * i1 + i2] = word
    return mat[np.ix_(perm, perm)]
