"""Nested Bethe equations of the pairing chain in logarithmic real-root form.

The two-level equations for momenta k_j and spin rapidities mu_l read

    L k_j = 2 pi q1_j - sum_l theta1(sin k_j - mu_l)
    sum_l theta1(mu_m - sin k_l) = 2 pi q2_m + sum_{l != m} theta2(mu_m - mu_l)

with theta1(x) = 2 atan(4x/U), theta2(x) = 2 atan(2x/U).  For even L the
branch numbers q1, q2 are used as tabulated; for odd L the ring phases shift
them by -1/4 (first level) and +1/2 (second level).  Quantum numbers are kept
as exact rationals so half-integer branches never drift.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg as sla

from .fock import Sector

EVEN = "even"
ODD = "odd"

STATES_EVEN = ("ground", "charge_excitation", "spin_excitation")
STATES_ODD = ("ground", "first_excitation", "charge_excitation")


def _strictly_monotone(seq) -> bool:
    pairs = list(zip(seq, seq[1:]))
    return all(a < b for a, b in pairs) or all(a > b for a, b in pairs)


class SolverError(RuntimeError):
    """Newton iteration failed; carries the last residual for diagnosis."""

    def __init__(self, message: str, residual: Optional[float] = None):
        if residual is not None:
            message = f"{message} (last max-residual {residual:.3e})"
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True)
class BetheConfig:
    """A root-class target: lattice, coupling, sector and branch numbers."""

    L: int
    U: float
    sector: Sector
    q1: Tuple[Fraction, ...]
    q2: Tuple[Fraction, ...]
    parity: str

    def __post_init__(self):
        if self.parity not in (EVEN, ODD):
            raise ValueError(f"parity must be even or odd, got {self.parity!r}")
        if self.U <= 0:
            raise ValueError("coupling U must be positive")
        n = self.sector.n_up + self.sector.n_down
        if len(self.q1) != n or len(self.q2) != self.sector.n_down:
            raise ValueError("branch-number counts do not match the sector")
        for seq in (self.q1, self.q2):
            if not (_strictly_monotone(seq) or len(seq) < 2):
                raise ValueError("branch numbers must be strictly monotone")
        if n > self.L or self.sector.n_up < self.sector.n_down:
            raise ValueError("sector outside the N_up + N_down <= L, N_up >= N_down wedge")

    @property
    def shifts(self) -> Tuple[float, float]:
        if self.parity == ODD:
            return (-0.25, 0.5)
        return (0.0, 0.0)


@dataclass(frozen=True)
class BetheRoots:
    """Solved rapidities, ordered to match the branch numbers of the config."""

    k: np.ndarray
    mu: np.ndarray
    residual_norm: float
    iterations: int


def _frac_seq(start: Fraction, step: int, count: int) -> Tuple[Fraction, ...]:
    return tuple(start + step * j for j in range(count))


def quantum_numbers(state: str, L: int, U: float = 1.0) -> BetheConfig:
    """Branch numbers of the tabulated low-lying states.

    Even parity covers L = 2 (mod 4) (sizes that are multiples of four share
    the spectrum of the plain hopping chain and are excluded here); odd
    parity covers odd L.
    """
    if L % 2 == 0:
        if L % 4 != 2:
            raise ValueError("even-parity states need L = 2 (mod 4)")
        if state == "ground":
            q1 = _frac_seq(Fraction(L, 2), -1, L)
            q2 = _frac_seq(-Fraction(L - 2, 4), 1, L // 2)
            sector = Sector(L // 2, L // 2)
        elif state == "charge_excitation":
            q1 = _frac_seq(Fraction(L - 1, 2), -1, L - 1)
            q2 = _frac_seq(-Fraction(L - 2, 4), 1, L // 2 - 1)
            sector = Sector(L // 2, L // 2 - 1)
        elif state == "spin_excitation":
            q1 = _frac_seq(Fraction(L - 1, 2), -1, L)
            q2 = _frac_seq(-Fraction(L - 4, 4), 1, L // 2 - 1)
            sector = Sector(L // 2 + 1, L // 2 - 1)
        else:
            raise ValueError(f"unsupported even-parity state {state!r}")
        return BetheConfig(L, U, sector, q1, q2, EVEN)

    if state == "ground":
        q1 = _frac_seq(Fraction(L, 2), -1, L)
        q2 = _frac_seq(-Fraction(L - 1, 4), 1, (L - 1) // 2)
        sector = Sector((L + 1) // 2, (L - 1) // 2)
    elif state == "first_excitation":
        q1 = _frac_seq(-Fraction(L, 2), 1, L)
        q2 = _frac_seq(Fraction(L - 1, 4), -1, (L - 1) // 2)
        sector = Sector((L + 1) // 2, (L - 1) // 2)
    elif state == "charge_excitation":
        q1 = _frac_seq(Fraction(L - 2, 2), -1, L - 1)
        q2 = _frac_seq(-Fraction(L - 3, 4), 1, (L - 1) // 2)
        sector = Sector((L - 1) // 2, (L - 1) // 2)
    else:
        raise ValueError(f"unsupported odd-parity state {state!r}")
    return BetheConfig(L, U, sector, q1, q2, ODD)


def _with_u(config: BetheConfig, U: float) -> BetheConfig:
    return BetheConfig(config.L, U, config.sector, config.q1, config.q2, config.parity)


def _theta1(x: np.ndarray, U: float) -> np.ndarray:
    return 2.0 * np.arctan(4.0 * x / U)


def _theta2(x: np.ndarray, U: float) -> np.ndarray:
    return 2.0 * np.arctan(2.0 * x / U)


def _dtheta1(x: np.ndarray, U: float) -> np.ndarray:
    return 8.0 * U / (U * U + 16.0 * x * x)


def _dtheta2(x: np.ndarray, U: float) -> np.ndarray:
    return 4.0 * U / (U * U + 4.0 * x * x)


def _targets(config: BetheConfig) -> Tuple[np.ndarray, np.ndarray]:
    s1, s2 = config.shifts
    a1 = 2.0 * np.pi * (np.array([float(q) for q in config.q1]) + s1)
    a2 = 2.0 * np.pi * (np.array([float(q) for q in config.q2]) + s2)
    return a1, a2


def bethe_residual(roots: BetheRoots, config: BetheConfig) -> np.ndarray:
    """Stacked left-minus-right sides of the two logarithmic equation sets."""
    return _residual(roots.k, roots.mu, config)


def _residual(k: np.ndarray, mu: np.ndarray, config: BetheConfig) -> np.ndarray:
    U = config.U
    a1, a2 = _targets(config)
    sk = np.sin(k)
    f1 = config.L * k - a1
    if len(mu):
        f1 = f1 + _theta1(sk[:, None] - mu[None, :], U).sum(axis=1)
        f2 = _theta1(mu[:, None] - sk[None, :], U).sum(axis=1) - a2
        dmm = mu[:, None] - mu[None, :]
        t2 = _theta2(dmm, U)
        np.fill_diagonal(t2, 0.0)
        f2 = f2 - t2.sum(axis=1)
        return np.concatenate([f1, f2])
    return f1


def _jacobian(k: np.ndarray, mu: np.ndarray, config: BetheConfig) -> np.ndarray:
    U = config.U
    n, m = len(k), len(mu)
    sk = np.sin(k)
    ck = np.cos(k)
    jac = np.zeros((n + m, n + m))
    if m:
        d1 = _dtheta1(sk[:, None] - mu[None, :], U)      # n x m
        jac[:n, :n] = np.diag(config.L + ck * d1.sum(axis=1))
        jac[:n, n:] = -d1
        d2 = _dtheta1(mu[:, None] - sk[None, :], U)      # m x n
        jac[n:, :n] = -d2 * ck[None, :]
        dmm = _dtheta2(mu[:, None] - mu[None, :], U)
        np.fill_diagonal(dmm, 0.0)
        jac[n:, n:] = np.diag(d2.sum(axis=1) - dmm.sum(axis=1)) + dmm
    else:
        jac[:n, :n] = np.diag(np.full(n, float(config.L)))
    return jac


def _initial_guess(config: BetheConfig) -> Tuple[np.ndarray, np.ndarray]:
    """Strong-coupling decoupled start: free momenta from the branch numbers,
    rapidities from the isolated second-level equation.

    At strong coupling the rescaled rapidities solve the twisted isotropic
    chain equation; solving that small system makes the residual of the
    guess O(1/U) and gives Newton a head start at any size."""
    a1, a2 = _targets(config)
    k = a1 / config.L
    n = len(config.q1)
    m = len(config.q2)
    if m == 0:
        return k, np.zeros(0)
    # the limit solve pays off for small systems or strong coupling; at
    # moderate coupling and large size the direct tangent seed is closer
    if m <= 96 or config.U >= 16.0:
        try:
            lam = _twisted_heisenberg_solve(n, a2, max_iter=80)
            return k, (config.U / 2.0) * lam
        except SolverError:
            pass
    arg = np.clip(a2 / (2.0 * n), -0.47 * np.pi, 0.47 * np.pi)
    return k, (config.U / 4.0) * np.tan(arg)


def _newton(
    k: np.ndarray,
    mu: np.ndarray,
    config: BetheConfig,
    tol: float,
    max_iter: int,
) -> Tuple[np.ndarray, np.ndarray, float, int]:
    n = len(k)
    x = np.concatenate([k, mu])
    f = _residual(x[:n], x[n:], config)
    best = float(np.max(np.abs(f))) if len(f) else 0.0
    for it in range(1, max_iter + 1):
        if best <= tol:
            return x[:n], x[n:], best, it - 1
        jac = _jacobian(x[:n], x[n:], config)
        try:
            step = sla.solve(jac, f)
        except sla.LinAlgError as exc:
            raise SolverError(
                "singular Jacobian, try continuation in U", residual=best
            ) from exc
        lam = 1.0
        for _ in range(30):
            xn = x - lam * step
            fn = _residual(xn[:n], xn[n:], config)
            norm = float(np.max(np.abs(fn)))
            if norm < best:
                x, f, best = xn, fn, norm
                break
            lam *= 0.5
        else:
            raise SolverError("damped Newton stalled", residual=best)
    if best <= tol:
        return x[:n], x[n:], best, max_iter
    raise SolverError(f"no convergence after {max_iter} iterations", residual=best)


def solve(config: BetheConfig, tol: float = 1e-12, max_iter: int = 200) -> BetheRoots:
    """Solve the logarithmic equations for the configured root class.

    Starts from the decoupled strong-coupling guess and runs a damped Newton
    iteration (step halving on residual increase).  Falls back to a
    continuation in decreasing U when the direct start fails.
    """
    k0, mu0 = _initial_guess(config)
    try:
        k, mu, res, its = _newton(k0, mu0, config, tol, max_iter)
        return _validated_roots(k, mu, res, its)
    except SolverError:
        pass
    # continuation: walk the coupling down from an easy strong-coupling start
    u_path = _continuation_path(config.U)
    cfg = _with_u(config, u_path[0])
    k, mu = _initial_guess(cfg)
    its_total = 0
    for u in u_path:
        cfg = _with_u(config, u)
        k, mu, res, its = _newton(k, mu, cfg, tol, max_iter)
        its_total += its
    return _validated_roots(k, mu, res, its_total)


def _validated_roots(k: np.ndarray, mu: np.ndarray, res: float, its: int) -> BetheRoots:
    for arr, name in ((k, "momenta"), (mu, "rapidities")):
        if len(arr) > 1 and np.min(np.diff(np.sort(arr))) < 1e-11:
            raise SolverError(f"collapsed {name}: root class left the real-root branch", residual=res)
    return BetheRoots(k, mu, res, its)


def _continuation_path(u_target: float, u_start: float = 20.0) -> List[float]:
    if u_target >= u_start:
        return [u_target]
    path = []
    u = u_start
    while u > u_target * 1.0001:
        path.append(u)
        u /= 1.5
    path.append(u_target)
    return path


def energy(
    roots: BetheRoots, config: BetheConfig, h1: float = 0.0, h2: float = 0.0
) -> float:
    """Eigenenergy of the root set; h1, h2 add the chemical-potential terms
    of the extended model."""
    n_up, n_down = config.sector.n_up, config.sector.n_down
    n = n_up + n_down
    e = -2.0 * float(np.sum(np.cos(roots.k))) + (config.U / 2.0) * (config.L / 2.0 - n)
    return e + h1 * (n_up - n_down) + h2 * (n - config.L)


@lru_cache(maxsize=4096)
def state_energy(state: str, L: int, U: float, tol: float = 1e-12) -> float:
    """Energy of one tabulated state class at (L, U); solves are pure, so
    repeat lookups (gap plus estimator pipelines) are cached."""
    config = quantum_numbers(state, L, U)
    return energy(solve(config, tol=tol), config)


def charge_gap(L: int, U: float, parity: str) -> float:
    """Gap of one charge excitation over the half-filled ground state.

    Even parity: E0(L/2, L/2-1) - E0(L/2, L/2) at L = 2 (mod 4).
    Odd parity: E0((L-1)/2, (L-1)/2) - E0((L+1)/2, (L-1)/2) at odd L.
    """
    if parity == EVEN:
        if L % 4 != 2:
            raise ValueError("even-parity gap needs L = 2 (mod 4)")
    elif parity == ODD:
        if L % 2 == 0:
            raise ValueError("odd-parity gap needs odd L")
    else:
        raise ValueError(f"parity must be even or odd, got {parity!r}")
    return state_energy("charge_excitation", L, U) - state_energy("ground", L, U)


def l2_closed_forms(U: float) -> List[dict]:
    """The five closed-form rows of the two-site chain.

    The (1,1) upper state is reported through the exponentials e^{ik} solving
    z^2 + (U/2) z + 1 = 0; they are complex of unit modulus for U < 4.
    """
    disc = complex(U * U - 16.0)
    root = np.sqrt(disc)
    z1 = (-U - root) / 4.0
    z2 = (-U + root) / 4.0
    return [
        {"sector": Sector(0, 0), "energy": U / 2.0, "k": [], "mu": [],
         "description": "empty set"},
        {"sector": Sector(1, 0), "energy": 0.0, "k": [np.pi / 2], "mu": [],
         "description": "k1 = +-pi/2"},
        {"sector": Sector(2, 0), "energy": -U / 2.0,
         "k": [np.pi / 2, -np.pi / 2], "mu": [],
         "description": "k1 = pi/2; k2 = -pi/2"},
        {"sector": Sector(1, 1), "energy": U / 2.0, "k": [], "mu": [0.0],
         "exp_ik": [z1, z2],
         "description": "e^{ik} roots of z^2 + (U/2) z + 1 = 0; mu1 = 0"},
        {"sector": Sector(1, 1), "energy": -U / 2.0, "k": [0.0, np.pi],
         "mu": [0.0], "description": "k1 = 0; k2 = pi; mu1 = 0"},
    ]


def _twisted_heisenberg_solve(
    n: int, targets: np.ndarray, tol: float = 1e-12, max_iter: int = 200
) -> np.ndarray:
    """Real roots of n * 2 atan(2 lam_m) = targets_m + sum 2 atan(lam_m - lam_l)."""
    lam = 0.5 * np.tan(np.clip(targets / (2.0 * n), -0.47 * np.pi, 0.47 * np.pi))

    def resid(x):
        t = 2.0 * np.arctan(x[:, None] - x[None, :])
        np.fill_diagonal(t, 0.0)
        return n * 2.0 * np.arctan(2.0 * x) - targets - t.sum(axis=1)

    def jac(x):
        d = 1.0 / (1.0 + (x[:, None] - x[None, :]) ** 2)
        np.fill_diagonal(d, 0.0)
        j = -2.0 * d
        j += np.diag(4.0 * n / (1.0 + 4.0 * x * x) + 2.0 * d.sum(axis=1))
        return j

    f = resid(lam)
    best = float(np.max(np.abs(f)))
    for _ in range(max_iter):
        if best <= tol:
            return lam
        step = sla.solve(jac(lam), f)
        lam_new = lam - step
        f_new = resid(lam_new)
        norm = float(np.max(np.abs(f_new)))
        scale = 1.0
        while norm >= best and scale > 1e-8:
            scale *= 0.5
            lam_new = lam - scale * step
            f_new = resid(lam_new)
            norm = float(np.max(np.abs(f_new)))
        lam, f, best = lam_new, f_new, norm
    raise SolverError("twisted spin-chain solve failed", residual=best)


def heisenberg_twisted_roots(
    L: int, m_down: int, q2: Sequence[Fraction], tol: float = 1e-12
) -> np.ndarray:
    """Real roots of the isotropic two-level limit: the twisted spin chain
    equation L * 2 atan(2 lam) = 2 pi (q2 + 1/2) + sum 2 atan(lam - lam')."""
    targets = 2.0 * np.pi * (np.array([float(q) for q in q2]) + 0.5)
    return _twisted_heisenberg_solve(L, targets, tol=tol)


def strong_coupling_check(L: int, n: Fraction, U: float) -> float:
    """Deviation of the rescaled spin rapidities from the twisted-chain roots.

    Solves the full equations in the half-filled sector with spin imbalance
    2n, rescales mu -> 2 mu / U, and compares against the decoupled two-level
    equation; the deviation decays like 1/U.
    """
    if L % 2 == 0:
        raise ValueError("strong-coupling check is set up for odd L")
    if U < 50:
        raise ValueError("strong-coupling check expects U >= 50")
    n = Fraction(n)
    if (2 * n).denominator != 1 or (2 * n).numerator % 2 == 0 or n <= 0:
        raise ValueError("spin imbalance n must be a positive half-odd integer")
    n_up = Fraction(L, 2) + n
    if n_up.denominator != 1:
        raise ValueError("n incompatible with odd L")
    n_up = int(n_up)
    n_down = L - n_up
    if n_down <= 0:
        raise ValueError("sector has no spin rapidities")
    q1 = _frac_seq(Fraction(L, 2), -1, L)
    q2 = _frac_seq(-Fraction(L - 1, 4), 1, n_down)
    config = BetheConfig(L, U, Sector(n_up, n_down), q1, q2, ODD)
    roots = solve(config)
    lam_full = np.sort(2.0 * roots.mu / U)
    lam_ref = np.sort(heisenberg_twisted_roots(L, n_down, q2))
    return float(np.max(np.abs(lam_full - lam_ref)))
