"""Exact diagonalization, spectrum comparison and reference-state checks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from . import fock, models
from .fock import Matrix, Sector
from .models import ModelParams

#: full diagonalization up to this dimension, iterative lowest-k above
FULL_DIAG_LIMIT = 4096

#: eigenvalues within this relative distance are grouped as degenerate
DEGENERACY_RTOL = 1e-9


@dataclass(frozen=True)
class SpectrumReport:
    eigenvalues: np.ndarray
    degeneracies: np.ndarray
    sector: Optional[Sector] = None
    model: Optional[str] = None
    params: Optional[ModelParams] = None

    @property
    def distinct(self) -> np.ndarray:
        """One representative eigenvalue per degenerate group."""
        out, i = [], 0
        for g in self.degeneracies:
            out.append(self.eigenvalues[i])
            i += g
        return np.asarray(out)


def _as_dense(h: Matrix) -> np.ndarray:
    return h.toarray() if sp.issparse(h) else np.asarray(h)


def _check_hermitian(h: Matrix, tol: float = 1e-10) -> None:
    if sp.issparse(h):
        dev = abs(h - h.conj().T).max()
    else:
        dev = np.max(np.abs(h - h.conj().T))
    if dev > tol:
        raise ValueError(f"matrix is not Hermitian (deviation {dev:.3e})")


def _group_degeneracies(ev: np.ndarray) -> np.ndarray:
    groups = []
    i = 0
    while i < len(ev):
        j = i + 1
        while j < len(ev) and abs(ev[j] - ev[i]) <= DEGENERACY_RTOL * max(1.0, abs(ev[i])):
            j += 1
        groups.append(j - i)
        i = j
    return np.asarray(groups, dtype=int)


def spectrum(
    h: Matrix,
    k: Optional[int] = None,
    sector: Optional[Sector] = None,
    model: Optional[str] = None,
    params: Optional[ModelParams] = None,
) -> SpectrumReport:
    """Sorted eigenvalues with degeneracy counts.

    Full dense diagonalization up to dimension ``FULL_DIAG_LIMIT``; above
    that, or when ``k`` is given for a large matrix, a Lanczos solve of the
    lowest k eigenvalues with an explicit residual check against ghosts.
    """
    _check_hermitian(h)
    dim = h.shape[0]
    if k is None and dim > FULL_DIAG_LIMIT:
        raise ValueError(
            f"dimension {dim} needs an explicit eigenvalue count k for the iterative solver"
        )
    if dim <= FULL_DIAG_LIMIT and (k is None or k >= dim - 1):
        ev = np.linalg.eigvalsh(_as_dense(h))
        if k is not None:
            ev = ev[:k]
    else:
        hs = h if sp.issparse(h) else sp.csr_matrix(h)
        vals, vecs = spla.eigsh(hs, k=k, which="SA")
        order = np.argsort(vals)
        vals, vecs = vals[order], vecs[:, order]
        for i, lam in enumerate(vals):
            r = np.linalg.norm(hs @ vecs[:, i] - lam * vecs[:, i])
            if r > 1e-8:
                raise RuntimeError(f"iterative eigenvalue {lam} has residual {r:.3e}")
        ev = vals
    ev = np.sort(np.real(ev))
    return SpectrumReport(ev, _group_degeneracies(ev), sector, model, params)


@dataclass(frozen=True)
class MatchReport:
    match: bool
    deviation: float
    tol: float


def compare_spectra(a: SpectrumReport, b: SpectrumReport, tol: float) -> MatchReport:
    """Multiset comparison of two sorted spectra."""
    if len(a.eigenvalues) != len(b.eigenvalues):
        raise ValueError("spectra have different dimensions")
    dev = float(np.max(np.abs(a.eigenvalues - b.eigenvalues)))
    return MatchReport(dev <= tol, dev, tol)


def commutator_norm(a: Matrix, b: Matrix) -> float:
    """Max-norm of the commutator AB - BA; sparse products for large inputs."""
    if a.shape != b.shape:
        raise ValueError("dimension mismatch")
    if a.shape[0] > 512 or sp.issparse(a) or sp.issparse(b):
        asp = a if sp.issparse(a) else sp.csr_matrix(a)
        bsp = b if sp.issparse(b) else sp.csr_matrix(b)
        comm = asp @ bsp - bsp @ asp
        return float(abs(comm).max()) if comm.nnz else 0.0
    comm = np.asarray(a) @ np.asarray(b) - np.asarray(b) @ np.asarray(a)
    return float(np.max(np.abs(comm)))


REFERENCE_STATES = (
    "table1_plus",
    "table1_minus",
    "table1_ferro",
    "table10_plus",
    "table10_minus",
)


def _table1_state(which: str, L: int) -> np.ndarray:
    """Product states of the pairing chain with energy +-LU/4."""
    v = fock.basis_vector(L, fock.vacuum_state(L))
    if which in ("table1_plus", "table1_minus"):
        sign = 1.0 if which == "table1_plus" else -1.0
        for j in range(L, 0, -1):
            pair = fock.assemble_operator(
                L, [(1.0, [(fock.CREATE, fock.UP, j), (fock.CREATE, fock.DOWN, j)])],
                dense=False,
            )
            v = v + sign * (pair @ v)
        return v
    # ferromagnet-like product (c+_up + i c+_down) over all sites
    for j in range(L, 0, -1):
        op = fock.assemble_operator(
            L,
            [(1.0, [(fock.CREATE, fock.UP, j)]), (1j, [(fock.CREATE, fock.DOWN, j)])],
            dense=False,
        )
        v = op @ v
    return v


def _table10_state(which: str, L: int) -> np.ndarray:
    """Factorized eigenvectors of the odd-L transformed coupled chain, with
    the alternating phases exp(i pi (2j - 1) / 2) on the second component."""
    if which == "table10_plus":
        base, partner = 0, 3    # local empty and doubly occupied slots
    else:
        base, partner = 1, 2    # local up and down slots
    local = []
    for j in range(1, L + 1):
        a = np.zeros(4, dtype=complex)
        a[base] = 1.0
        a[partner] = np.exp(1j * np.pi * (2 * j - 1) / 2)
        local.append(a)
    dim = 4**L
    v = np.zeros(dim, dtype=complex)
    for idx in range(dim):
        amp = 1.0 + 0j
        for j in range(1, L + 1):
            i_loc = ((idx >> (j - 1)) & 1) + 2 * ((idx >> (L + j - 1)) & 1)
            amp *= local[j - 1][i_loc]
            if amp == 0:
                break
        v[idx] = amp
    return v


def reference_state_residual(which: str, L: int, U: float) -> float:
    """Eigen-residual ||H v - E v|| / ||v|| of a printed product state.

    table1 variants test the pairing chain at E = +-LU/4; table10 variants
    test the transformed coupled spin chain (odd L only).
    """
    if which not in REFERENCE_STATES:
        raise ValueError(f"unknown reference state {which!r}")
    if which.startswith("table10"):
        if L % 2 == 0:
            raise ValueError("table10 states exist for odd L only")
        h = models.build_model("spin_xx_odd", ModelParams(L=L, U=U))
        v = _table10_state(which, L)
        e = L * U / 4.0 if which == "table10_plus" else -L * U / 4.0
    else:
        h = models.build_model("charge_pair", ModelParams(L=L, U=U))
        v = _table1_state(which, L)
        e = -L * U / 4.0 if which == "table1_ferro" else L * U / 4.0
    h = h if sp.issparse(h) else sp.csr_matrix(h)
    return float(np.linalg.norm(h @ v - e * v) / np.linalg.norm(v))


def translation_expectation(v: np.ndarray, L: int) -> complex:
    """Diagnostic: expectation of the one-site shift on an eigenvector; its
    phase exposes the lattice momentum."""
    t = models.translation_operator(L)
    return complex(np.vdot(v, t @ v) / np.vdot(v, v))
