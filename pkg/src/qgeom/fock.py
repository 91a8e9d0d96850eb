"""Truncated bosonic Fock-space engine.

Builds dense ladder / position / momentum operator matrices for one or two
modes, Weyl-ordered products, and gauge-fixed Hermitian eigendecompositions.
Units: hbar = 1; a mode with basis frequency w_b has q = (a + a^dag)/sqrt(2 w_b)
and p = i sqrt(w_b/2) (a^dag - a).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
import scipy.linalg

from .errors import ConvergenceError, DegeneracyError

HERMITICITY_RTOL = 1e-12
DEGENERACY_RTOL = 1e-8


@dataclass(frozen=True)
class FockBasis:
    """Truncated multimode Fock basis.

    modes: number of bosonic modes N (1 or 2 for the systems treated here)
    cutoff: occupation cutoff n_max per mode; total dimension is n_max**N
    frequencies: basis frequency w_b per mode, used to scale q and p
    """

    modes: int
    cutoff: int
    frequencies: tuple[float, ...]

    def __post_init__(self):
        if self.modes < 1:
            raise ValueError("modes must be >= 1")
        if self.cutoff < 2:
            raise ValueError("cutoff must be >= 2 per mode")
        freqs = tuple(float(w) for w in self.frequencies)
        if len(freqs) != self.modes:
            raise ValueError("need one basis frequency per mode")
        if any(w <= 0 for w in freqs):
            raise ValueError("basis frequencies must be positive")
        object.__setattr__(self, "frequencies", freqs)

    @property
    def dim(self) -> int:
        return self.cutoff ** self.modes

    def with_cutoff(self, cutoff: int) -> "FockBasis":
        return FockBasis(self.modes, cutoff, self.frequencies)


def basis(modes: int, cutoff: int, frequency: float | Sequence[float] = 1.0) -> FockBasis:
    """Convenience constructor; a scalar frequency is shared by all modes."""
    if np.isscalar(frequency):
        freqs = (float(frequency),) * modes
    else:
        freqs = tuple(float(w) for w in frequency)
    return FockBasis(modes, cutoff, freqs)


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense operator in the truncated Fock basis with a Hermiticity flag."""

    entries: np.ndarray
    hermitian: bool = False

    def __post_init__(self):
        m = np.asarray(self.entries)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("operator entries must be a square matrix")
        object.__setattr__(self, "entries", m)
        if self.hermitian:
            scale = np.abs(m).max() or 1.0
            dev = np.abs(m - m.conj().T).max()
            if dev > HERMITICITY_RTOL * scale:
                raise ValueError(
                    f"hermitian flag set but max|A - A^dag| = {dev:.3e} "
                    f"exceeds {HERMITICITY_RTOL:.0e} * max|A|"
                )

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def _trusted(cls, entries: np.ndarray, hermitian: bool) -> "OperatorMatrix":
        """Skip validation; used where Hermiticity is exact by construction
        (conjugation commutes with IEEE add/sub and real scalar products)."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "entries", entries)
        object.__setattr__(obj, "hermitian", hermitian)
        return obj

    def dagger(self) -> "OperatorMatrix":
        return OperatorMatrix._trusted(self.entries.conj().T, self.hermitian)

    # Small arithmetic layer so model builders read like the formulas.
    def __add__(self, other):
        if isinstance(other, OperatorMatrix):
            return OperatorMatrix._trusted(self.entries + other.entries,
                                           self.hermitian and other.hermitian)
        if np.isscalar(other):  # scalar: shift by other * identity
            herm = self.hermitian and np.imag(other) == 0
            return OperatorMatrix._trusted(
                self.entries + other * np.eye(self.dim), bool(herm))
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        return self.__add__(-1 * other if isinstance(other, OperatorMatrix) else -other)

    def __rsub__(self, other):
        return (-1 * self).__add__(other)

    def __mul__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        real = np.imag(scalar) == 0
        return OperatorMatrix._trusted(scalar * self.entries,
                                       self.hermitian and bool(real))

    __rmul__ = __mul__

    def __matmul__(self, other):
        if not isinstance(other, OperatorMatrix):
            return NotImplemented
        return OperatorMatrix._trusted(self.entries @ other.entries, hermitian=False)

    def assert_hermitian(self) -> "OperatorMatrix":
        """Re-tag the matrix as Hermitian (validates)."""
        return OperatorMatrix(self.entries, hermitian=True)


def identity(fb: FockBasis) -> OperatorMatrix:
    return OperatorMatrix(np.eye(fb.dim), hermitian=True)


def _embed(fb: FockBasis, single: np.ndarray, mode: int) -> np.ndarray:
    """Kronecker-embed a single-mode matrix; mode 0 is the slowest index."""
    out = single
    eye = np.eye(fb.cutoff)
    for m in range(mode):
        out = np.kron(eye, out)
    for m in range(mode + 1, fb.modes):
        out = np.kron(out, eye)
    return out


def ladder(fb: FockBasis, mode: int = 0) -> tuple[OperatorMatrix, OperatorMatrix]:
    """Annihilation/creation pair (a, a^dag) acting on the given mode.

    a|n> = sqrt(n)|n-1>, truncated at the cutoff; identity on other modes.
    """
    if not 0 <= mode < fb.modes:
        raise ValueError(f"mode {mode} out of range for {fb.modes}-mode basis")
    a1 = np.diag(np.sqrt(np.arange(1, fb.cutoff)), 1)
    a = _embed(fb, a1, mode)
    return OperatorMatrix(a), OperatorMatrix(a.T.copy())


def position_momentum(fb: FockBasis, mode: int = 0) -> tuple[OperatorMatrix, OperatorMatrix]:
    """Dimensionless q and p for one mode, [q, p] = i up to the truncation edge."""
    a, adag = ladder(fb, mode)
    wb = fb.frequencies[mode]
    q = (a.entries + adag.entries) / math.sqrt(2.0 * wb)
    p = 1j * math.sqrt(wb / 2.0) * (adag.entries - a.entries)
    return OperatorMatrix(q, hermitian=True), OperatorMatrix(p, hermitian=True)


def weyl_product(*ops: OperatorMatrix) -> OperatorMatrix:
    """Fully symmetrized (Weyl-ordered) product: average over all orderings."""
    if not ops:
        raise ValueError("weyl_product needs at least one operand")
    dim = ops[0].dim
    if any(o.dim != dim for o in ops):
        raise ValueError("operand dimensions differ")
    if len(ops) == 1:
        return ops[0]
    acc = np.zeros((dim, dim), dtype=complex)
    perms = list(itertools.permutations(range(len(ops))))
    for perm in perms:
        term = ops[perm[0]].entries
        for k in perm[1:]:
            term = term @ ops[k].entries
        acc += term
    acc /= len(perms)
    herm = all(o.hermitian for o in ops)
    if herm:
        acc = 0.5 * (acc + acc.conj().T)  # kill roundoff asymmetry
    return OperatorMatrix(acc, hermitian=herm)


@dataclass(frozen=True)
class QuadraticSet:
    """Point-independent quadratic monomials of a basis, built once.

    Hamiltonians and deformation operators of the catalog models are linear
    combinations of these, so caching them turns every rebuild at a displaced
    parameter point into O(dim^2) scalar work instead of O(dim^3) products.
    Matrices are shared; treat them as read-only.
    """

    qs: tuple[OperatorMatrix, ...]
    ps: tuple[OperatorMatrix, ...]
    qq: dict  # (a, b) a <= b -> q_a q_b symmetrized (real entries)
    pp: dict  # (a, b) a <= b -> p_a p_b symmetrized (real entries)
    qp: tuple[OperatorMatrix, ...]  # same-mode (q_a p_a + p_a q_a)/2

    def qq_at(self, a: int, b: int) -> OperatorMatrix:
        return self.qq[(a, b) if a <= b else (b, a)]

    def pp_at(self, a: int, b: int) -> OperatorMatrix:
        return self.pp[(a, b) if a <= b else (b, a)]


@lru_cache(maxsize=4)
def _unit_quadratics(modes: int, cutoff: int):
    """Raw monomial matrices at unit basis frequency (the expensive products)."""
    fb1 = FockBasis(modes, cutoff, (1.0,) * modes)
    qmats, pims = [], []
    for a in range(modes):
        q, p = position_momentum(fb1, a)
        # q is real; p is purely imaginary, so its imaginary part carries it
        qmats.append(np.ascontiguousarray(q.entries.real))
        pims.append(np.ascontiguousarray(p.entries.imag))
    qq, pp, qp = {}, {}, []
    for a in range(modes):
        for b in range(a, modes):
            qab = qmats[a] @ qmats[b]
            qq[(a, b)] = 0.5 * (qab + qab.T)
            pab = -(pims[a] @ pims[b])
            pp[(a, b)] = 0.5 * (pab + pab.T)
    for a in range(modes):
        qp.append(0.5 * (qmats[a] @ pims[a] + pims[a] @ qmats[a]))
    return qmats, pims, qq, pp, qp


@lru_cache(maxsize=4)
def quadratics(fb: FockBasis) -> QuadraticSet:
    """All q_a, p_a and their symmetrized pairwise products for a basis.

    Built by rescaling cached unit-frequency monomials: q scales as
    w_b^(-1/2) and p as w_b^(1/2) per mode, so no matrix products are needed
    when only the basis frequency changes (as it does along every parameter
    sweep and finite-difference stencil).
    """
    qmats, pims, qq1, pp1, qp1 = _unit_quadratics(fb.modes, fb.cutoff)
    root = [math.sqrt(w) for w in fb.frequencies]
    qs = tuple(OperatorMatrix(qmats[a] / root[a], hermitian=True)
               for a in range(fb.modes))
    ps = tuple(OperatorMatrix(1j * (root[a] * pims[a]), hermitian=True)
               for a in range(fb.modes))
    qq = {key: OperatorMatrix(mat / (root[key[0]] * root[key[1]]), hermitian=True)
          for key, mat in qq1.items()}
    pp = {key: OperatorMatrix(mat * (root[key[0]] * root[key[1]]), hermitian=True)
          for key, mat in pp1.items()}
    qp = tuple(OperatorMatrix(1j * mat, hermitian=True) for mat in qp1)
    return QuadraticSet(qs, ps, qq, pp, qp)


@dataclass(frozen=True)
class Spectrum:
    """Eigendecomposition with a deterministic phase convention.

    energies are ascending; states holds unit-norm column eigenvectors whose
    largest-magnitude component is real and positive.
    """

    energies: np.ndarray
    states: np.ndarray
    gauge: str = "max-component-positive"

    @property
    def dim(self) -> int:
        return len(self.energies)

    def vector(self, k: int) -> np.ndarray:
        return self.states[:, k]

    def gap_scale(self) -> float:
        return float(np.abs(self.energies).max() or 1.0)

    def flagged_gaps(self, rtol: float = DEGENERACY_RTOL) -> np.ndarray:
        """Boolean mask over adjacent gaps |E_{k+1} - E_k| < rtol * max|E|."""
        return np.diff(self.energies) < rtol * self.gap_scale()

    def min_gap(self, k: int, upto: int | None = None) -> float:
        """Smallest |E_m - E_k| over m != k (restricted to the first `upto`)."""
        e = self.energies if upto is None else self.energies[:upto]
        gaps = np.abs(e - self.energies[k])
        gaps[k] = np.inf
        return float(gaps.min())

    def check_nondegenerate(self, k: int, upto: int | None = None,
                            rtol: float = DEGENERACY_RTOL) -> None:
        if self.min_gap(k, upto) < rtol * self.gap_scale():
            raise DegeneracyError(
                f"state {k} (E={self.energies[k]:.6g}) sits within "
                f"{rtol:.0e} * max|E| of another level"
            )


def gauge_fix(states: np.ndarray) -> np.ndarray:
    """Rotate each column's phase so its largest-|.| entry is real positive.

    Ties in |.| resolve to the first index (argmax), keeping repeated runs
    bitwise identical.
    """
    idx = np.argmax(np.abs(states), axis=0)
    pivots = states[idx, np.arange(states.shape[1])]
    mags = np.abs(pivots)
    mags[mags == 0] = 1.0
    return states * (np.conj(pivots) / mags)


def eigh(op: OperatorMatrix) -> Spectrum:
    """Gauge-fixed Hermitian eigendecomposition.

    Real-symmetric input (up to the Hermiticity tolerance) takes the faster
    real LAPACK path; eigenvectors then stay real.
    """
    if not op.hermitian:
        raise ValueError("eigh requires the hermitian flag to be set")
    m = op.entries
    if np.iscomplexobj(m):
        scale = np.abs(m).max() or 1.0
        if np.abs(m.imag).max() <= HERMITICITY_RTOL * scale:
            m = m.real
    m = 0.5 * (m + m.conj().T)
    energies, states = scipy.linalg.eigh(m, driver="evd")
    return Spectrum(energies, gauge_fix(states))


def expectation(op: OperatorMatrix, state: np.ndarray) -> complex:
    """<state|op|state> for a unit-norm vector of matching dimension."""
    state = np.asarray(state)
    if state.shape != (op.dim,):
        raise ValueError("state dimension does not match operator")
    return complex(np.vdot(state, op.entries @ state))


def commutator(a: OperatorMatrix, b: OperatorMatrix) -> np.ndarray:
    return a.entries @ b.entries - b.entries @ a.entries


@dataclass(frozen=True)
class ConvergenceReport:
    value: object
    deviation: float
    tol: float
    cutoffs: tuple[int, int]

    @property
    def converged(self) -> bool:
        return self.deviation <= self.tol


def truncation_convergence(evaluate: Callable[[FockBasis], np.ndarray | float],
                           fb: FockBasis, tol: float = 1e-8,
                           raise_on_failure: bool = False) -> ConvergenceReport:
    """Check that doubling the cutoff moves the result by < tol (relative).

    `evaluate` maps a basis to a scalar or array; the deviation is the
    max-abs difference normalized by the doubled-cutoff result's scale.
    """
    v1 = np.asarray(evaluate(fb), dtype=complex)
    v2 = np.asarray(evaluate(fb.with_cutoff(2 * fb.cutoff)), dtype=complex)
    scale = max(float(np.abs(v2).max()), 1e-300)
    dev = float(np.abs(v1 - v2).max()) / scale
    report = ConvergenceReport(v2, dev, tol, (fb.cutoff, 2 * fb.cutoff))
    if raise_on_failure and not report.converged:
        raise ConvergenceError(
            f"result changed by {dev:.3e} (rel) when doubling cutoff "
            f"{fb.cutoff} -> {2 * fb.cutoff}; tol = {tol:.0e}"
        )
    return report
