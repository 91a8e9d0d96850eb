"""Two coupled harmonic oscillators: symmetric and linear coupling.

Symmetric:  H = (1/2)[p1^2 + p2^2 + k0(q1^2 + q2^2) + k1(q1 - q2)^2],
            w1 = sqrt(k0), w2 = sqrt(k0 + 2 k1).
Linear:     H = (1/2)(p1^2 + p2^2 + A q1^2 + B q2^2 + C q1 q2),
            normal modes via the rotation angle zeta with
            tan(zeta) = sqrt(eps^2 + 1) - eps, eps = (B - A)/C  (eps > 0 branch).

Both expose the excited-state parameter metric, the 4x4 phase-space block of
the generalized QGT, covariance matrices, and ground-state entanglement
closed forms. The per-model weight c_m differs on purpose: 2m + 1 in the
symmetric system, m + 1/2 in the linear one (the source uses both).
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import DomainError
from ..fock import quadratics
from .base import Model, NormalModeData, aval, bval


def _omega_block(gq: np.ndarray, gp: np.ndarray) -> np.ndarray:
    """Assemble Re(phase QGT) + i Omega/2 from its qq and pp blocks."""
    z = np.zeros((2, 2))
    real = np.block([[gq, z], [z, gp]])
    omega = np.block([[z, np.eye(2)], [-np.eye(2), z]])
    return real + 0.5j * omega


class SymmetricCoupled(Model):
    """Symmetrically coupled pair, parameters (k0, k1)."""

    name = "sym-coupled"
    dof = 2
    param_names = ("k0", "k1")

    _closed = {
        "energy": "_cf_energy",
        "qgt": "_cf_qgt",
        "metric": "_cf_metric",
        "berry": "_cf_berry",
        "metric_det": "_cf_det",
        "phase_qgt": "_cf_phase_qgt",
        "phase_metric": "_cf_phase_metric",
        "phase_metric_reduced": "_cf_phase_reduced",
        "covariance": "_cf_covariance",
        "covariance_reduced": "_cf_covariance_reduced",
        "symplectic_nu": "_cf_nu",
        "purity": "_cf_purity",
        "entropy": "_cf_entropy",
        "christoffel": "_cf_christoffel",
        "beltrami": "_cf_beltrami",
        "scalar:param": "_cf_scalar_param",
        "scalar:phase-reduced": "_cf_scalar_phase_reduced",
    }

    def validate(self, point):
        k0, k1 = point.values
        if k0 <= 0:
            raise DomainError(f"k0 must be positive, got {k0}")
        if k0 + 2 * k1 <= 0:
            raise DomainError(f"k0 + 2 k1 must be positive, got {k0 + 2 * k1}")

    def _freqs(self, point):
        k0, k1 = point.values
        return math.sqrt(k0), math.sqrt(k0 + 2 * k1)

    def normal_modes(self, point):
        return NormalModeData(self._freqs(point))

    def hamiltonian(self, point, fb):
        k0, k1 = point.values
        quads = quadratics(fb)
        kinetic = 0.5 * (quads.pp[(0, 0)] + quads.pp[(1, 1)])
        self_term = quads.qq[(0, 0)] + quads.qq[(1, 1)]
        rel_sq = self_term - 2 * quads.qq[(0, 1)]  # (q1 - q2)^2
        return kinetic + 0.5 * k0 * self_term + 0.5 * k1 * rel_sq

    def deformations(self, point, fb):
        k0, k1 = point.values
        quads = quadratics(fb)
        q1, q2 = quads.qs
        self_term = quads.qq[(0, 0)] + quads.qq[(1, 1)]
        rel_sq = self_term - 2 * quads.qq[(0, 1)]
        rel = q1 - q2
        return {
            "k0": 0.5 * self_term,
            "k1": 0.5 * rel_sq,
            "q1": k0 * q1 + k1 * rel,
            "q2": k0 * q2 + (-k1) * rel,
            "p1": quads.ps[0],
            "p2": quads.ps[1],
        }

    def normal_coordinates(self, point, fb):
        (q1, q2), (p1, p2) = self.qp_operators(fb)
        s = 1.0 / math.sqrt(2.0)
        return [(s * (q1 + q2), s * (p1 + p2)),
                (s * (q1 - q2), s * (p1 - p2))]

    # -- closed forms ---------------------------------------------------------

    def _cf_energy(self, point, qn):
        w1, w2 = self._freqs(point)
        return w1 * aval(qn[0]) + w2 * aval(qn[1])

    def _cf_metric(self, point, qn):
        w1, w2 = self._freqs(point)
        bm, bn = bval(qn[0]), bval(qn[1])
        return (1 / 32) * np.array([
            [bm / w1**4 + bn / w2**4, 2 * bn / w2**4],
            [2 * bn / w2**4, 4 * bn / w2**4],
        ])

    def _cf_qgt(self, point, qn):
        return self._cf_metric(point, qn) + 0j

    def _cf_berry(self, point, qn):
        return np.zeros((2, 2))

    def _cf_det(self, point, qn):
        w1, w2 = self._freqs(point)
        return bval(qn[0]) * bval(qn[1]) / (256 * w1**4 * w2**4)

    def _c(self, qn):
        return 2 * qn[0] + 1.0, 2 * qn[1] + 1.0

    def _cf_phase_qgt(self, point, qn):
        w1, w2 = self._freqs(point)
        cm, cn = self._c(qn)
        gq = 0.25 * np.array([[cm * w1 + cn * w2, cm * w1 - cn * w2],
                              [cm * w1 - cn * w2, cm * w1 + cn * w2]])
        gp = 0.25 * np.array([[cm / w1 + cn / w2, cm / w1 - cn / w2],
                              [cm / w1 - cn / w2, cm / w1 + cn / w2]])
        return _omega_block(gq, gp)

    def _cf_phase_metric(self, point, qn):
        return self._cf_phase_qgt(point, qn).real

    def _cf_phase_reduced(self, point, qn):
        w1, w2 = self._freqs(point)
        cm, cn = self._c(qn)
        return 0.25 * np.array([[cm * w1 + cn * w2, 0.0],
                                [0.0, cm / w1 + cn / w2]])

    def _cf_covariance(self, point, qn):
        g = self._cf_phase_metric(point, qn)
        qq, pp, qp = g[2:, 2:], g[:2, :2], -g[:2, 2:]
        return np.block([[qq, qp], [qp.T, pp]])

    def _cf_covariance_reduced(self, point, qn):
        s = self._cf_covariance(point, qn)
        return s[np.ix_([0, 2], [0, 2])]

    def _require_ground(self, qn, what):
        if qn != (0, 0):
            raise ValueError(f"{what} closed form covers the ground state only")

    def _cf_nu(self, point, qn):
        self._require_ground(qn, "symplectic_nu")
        w1, w2 = self._freqs(point)
        return (w1 + w2) / (4 * math.sqrt(w1 * w2))

    def _cf_purity(self, point, qn):
        self._require_ground(qn, "purity")
        w1, w2 = self._freqs(point)
        return 2 * math.sqrt(w1 * w2) / (w1 + w2)

    def _cf_entropy(self, point, qn):
        nu = self._cf_nu(point, qn)
        if nu <= 0.5:
            return 0.0
        return (nu + 0.5) * math.log(nu + 0.5) - (nu - 0.5) * math.log(nu - 0.5)

    def _cf_christoffel(self, point, qn):
        k0, k1 = point.values
        t = np.zeros((2, 2, 2))
        t[0, 0, 0] = -1 / k0
        t[1, 0, 0] = k1 / (k0 * (k0 + 2 * k1))
        t[1, 0, 1] = t[1, 1, 0] = -1 / (k0 + 2 * k1)
        t[1, 1, 1] = -2 / (k0 + 2 * k1)
        return t

    def _cf_beltrami(self, point, qn):
        """Flat coordinates (u, v) with ds^2 = du^2 + dv^2 (pullback-exact)."""
        k0, k1 = point.values
        bm, bn = bval(qn[0]), bval(qn[1])
        det = self._cf_det(point, qn)
        u = math.sqrt(bm * bn / (128 * (bm + bn))) * math.log(det)
        v = (bm * math.log(k0) - bn * math.log(k0 + 2 * k1)) / math.sqrt(32 * (bm + bn))
        return np.array([u, v])

    def _cf_scalar_param(self, point, qn):
        return 0.0  # flat parameter manifold

    def _cf_scalar_phase_reduced(self, point, qn):
        self._require_ground(qn, "scalar:phase-reduced")
        w1, w2 = self._freqs(point)
        return (2 * w1 * (w1 + 3 * w2) / (w2**2 * (w1 + w2) ** 3)
                - (w1**2 + w1 * w2 + w2**2) * (5 * w1**2 - 8 * w1 * w2 + 5 * w2**2)
                / (2 * w1**4 * w2**4 * (w1 + w2)))


class LinearCoupled(Model):
    """Linearly coupled pair, parameters (A, B, C); B > A >= 0, C >= 0 branch."""

    name = "lin-coupled"
    dof = 2
    param_names = ("A", "B", "C")

    _closed = {
        "energy": "_cf_energy",
        "qgt": "_cf_qgt",
        "metric": "_cf_metric",
        "berry": "_cf_berry",
        "metric_det": "_cf_det",
        "phase_qgt": "_cf_phase_qgt",
        "phase_metric": "_cf_phase_metric",
        "phase_metric_reduced": "_cf_phase_reduced",
        "covariance": "_cf_covariance",
        "covariance_reduced": "_cf_covariance_reduced",
        "purity": "_cf_purity",
        "entropy": "_cf_entropy",
        "christoffel": "_cf_christoffel",
        "scalar:param": "_cf_scalar_param",
    }

    def validate(self, point):
        A, B, C = point.values
        if A <= 0:
            raise DomainError(f"A must be positive, got {A}")
        if B <= A:
            raise DomainError(f"need B > A (implemented branch), got A={A}, B={B}")
        if C < 0:
            raise DomainError(f"need C >= 0 (implemented branch), got C={C}")
        if 4 * A * B - C * C <= 0:
            raise DomainError(f"need 4AB - C^2 > 0, got {4 * A * B - C * C}")

    def mixing(self, point):
        """(w1, w2, zeta); zeta = 0 at C = 0 by continuity."""
        A, B, C = point.values
        if C == 0.0:
            return math.sqrt(A), math.sqrt(B), 0.0
        eps = (B - A) / C
        tz = math.sqrt(eps * eps + 1) - eps
        w1 = math.sqrt(A - 0.5 * C * tz)
        w2 = math.sqrt(B + 0.5 * C * tz)
        return w1, w2, math.atan(tz)

    def normal_modes(self, point):
        w1, w2, zeta = self.mixing(point)
        return NormalModeData((w1, w2), angle=zeta)

    def hamiltonian(self, point, fb):
        A, B, C = point.values
        quads = quadratics(fb)
        return (0.5 * (quads.pp[(0, 0)] + quads.pp[(1, 1)])
                + 0.5 * A * quads.qq[(0, 0)] + 0.5 * B * quads.qq[(1, 1)]
                + 0.5 * C * quads.qq[(0, 1)])

    def deformations(self, point, fb):
        A, B, C = point.values
        quads = quadratics(fb)
        q1, q2 = quads.qs
        return {
            "A": 0.5 * quads.qq[(0, 0)],
            "B": 0.5 * quads.qq[(1, 1)],
            "C": 0.5 * quads.qq[(0, 1)],
            "q1": A * q1 + 0.5 * C * q2,
            "q2": B * q2 + 0.5 * C * q1,
            "p1": quads.ps[0],
            "p2": quads.ps[1],
        }

    def normal_coordinates(self, point, fb):
        _, _, zeta = self.mixing(point)
        c, s = math.cos(zeta), math.sin(zeta)
        (q1, q2), (p1, p2) = self.qp_operators(fb)
        return [(c * q1 + (-s) * q2, c * p1 + (-s) * p2),
                (s * q1 + c * q2, s * p1 + c * p2)]

    # -- closed forms ---------------------------------------------------------

    def _cf_energy(self, point, qn):
        w1, w2, _ = self.mixing(point)
        return w1 * aval(qn[0]) + w2 * aval(qn[1])

    def _cf_metric(self, point, qn):
        A, B, C = point.values
        w1, w2, zeta = self.mixing(point)
        if C == 0.0:
            eta, phi = 1.0, 0.0
        else:
            eps = (B - A) / C
            r = math.sqrt(eps * eps + 1)
            eta, phi = eps / r, 1 / r
        bm, bn = bval(qn[0]), bval(qn[1])
        M = 0.25 * np.array([
            [(1 + eta) ** 2, phi**2, -(1 + eta) * phi],
            [phi**2, (1 - eta) ** 2, -(1 - eta) * phi],
            [-(1 + eta) * phi, -(1 - eta) * phi, phi**2],
        ])
        N = 0.25 * np.array([
            [(1 - eta) ** 2, phi**2, (1 - eta) * phi],
            [phi**2, (1 + eta) ** 2, (1 + eta) * phi],
            [(1 - eta) * phi, (1 + eta) * phi, phi**2],
        ])
        L = np.array([
            [phi**2, -phi**2, eta * phi],
            [-phi**2, phi**2, -eta * phi],
            [eta * phi, -eta * phi, eta**2],
        ])
        coupling = ((w1 / w2 + w2 / w1) * aval(qn[0]) * aval(qn[1]) - 0.5)
        return (bm / (32 * w1**4) * M + bn / (32 * w2**4) * N
                + coupling / (4 * (w2**2 - w1**2) ** 2) * L)

    def _cf_qgt(self, point, qn):
        return self._cf_metric(point, qn) + 0j

    def _cf_berry(self, point, qn):
        return np.zeros((3, 3))

    def _cf_det(self, point, qn):
        w1, w2, _ = self.mixing(point)
        m, n = qn
        return (bval(m) * bval(n)
                * (aval(m) * aval(n) * (w1**2 + w2**2) - w1 * w2 / 2)
                / (4096 * w1**5 * w2**5 * (w2**2 - w1**2) ** 2))

    def _cf_phase_qgt(self, point, qn):
        w1, w2, zeta = self.mixing(point)
        cm, cn = aval(qn[0]), aval(qn[1])
        c, s = math.cos(zeta), math.sin(zeta)
        gq = np.array([
            [cm * w1 * c * c + cn * w2 * s * s, (cn * w2 - cm * w1) * s * c],
            [(cn * w2 - cm * w1) * s * c, cm * w1 * s * s + cn * w2 * c * c],
        ])
        gp = np.array([
            [cm * c * c / w1 + cn * s * s / w2, (cn / w2 - cm / w1) * s * c],
            [(cn / w2 - cm / w1) * s * c, cm * s * s / w1 + cn * c * c / w2],
        ])
        return _omega_block(gq, gp)

    def _cf_phase_metric(self, point, qn):
        return self._cf_phase_qgt(point, qn).real

    def _cf_phase_reduced(self, point, qn):
        g = self._cf_phase_metric(point, qn)
        # (p1p1, q1q1) diagonal, matching the printed reduced metric ordering
        return np.array([[g[2, 2], 0.0], [0.0, g[0, 0]]])

    def _cf_covariance(self, point, qn):
        g = self._cf_phase_metric(point, qn)
        qq, pp, qp = g[2:, 2:], g[:2, :2], -g[:2, 2:]
        return np.block([[qq, qp], [qp.T, pp]])

    def _cf_covariance_reduced(self, point, qn):
        s = self._cf_covariance(point, qn)
        return s[np.ix_([0, 2], [0, 2])]

    def _cf_purity(self, point, qn):
        """Transcription of the printed ground-state purity.

        Known to disagree with the covariance this model actually produces;
        see the consistency notes in the test suite.
        """
        if qn != (0, 0):
            raise ValueError("purity closed form covers the ground state only")
        A, B, C = point.values
        return math.sqrt((4 * A * B - C * C) / (4 * A * B))

    def _cf_entropy(self, point, qn):
        if qn != (0, 0):
            raise ValueError("entropy closed form covers the ground state only")
        A, B, C = point.values
        if C == 0.0:
            return 0.0
        nu = math.sqrt(4 * A * B / (4 * A * B - C * C))
        return (nu + 0.5) * math.log(nu + 0.5) - (nu - 0.5) * math.log(nu - 0.5)

    def _cf_christoffel(self, point, qn):
        if tuple(qn) != (0, 0):
            raise ValueError("Christoffel table covers the ground state only")
        A, B, C = point.values
        E = math.sqrt(4 * A * B - C * C)
        F = A + B + E
        t = np.zeros((3, 3, 3))

        def put(i, j, k, v):
            t[i, j, k] = v
            t[i, k, j] = v

        put(0, 0, 0, -((2 * B + E) ** 2) / (E * E * F))
        put(0, 1, 0, -C * C / (2 * E * E * F))
        put(1, 1, 0, -C * C / (2 * E * E * F))
        put(0, 2, 0, C * (3 * B + 2 * E) / (2 * E * E * F))
        put(0, 2, 1, A * C / (2 * E * E * F))
        put(0, 2, 2, -A * (2 * B + E) / (E * E * F))
        put(1, 1, 1, -((2 * A + E) ** 2) / (E * E * F))
        put(1, 2, 0, B * C / (2 * E * E * F))
        put(1, 2, 1, C * (3 * A + 2 * E) / (2 * E * E * F))
        put(1, 2, 2, -B * (2 * A + E) / (E * E * F))
        put(2, 0, 0, 2 * B * C / (E * E * F))
        put(2, 1, 0, C * (A + B + 2 * E) / (E * E * F))
        put(2, 1, 1, 2 * A * C / (E * E * F))
        put(2, 2, 0, -B * (3 * A + B + 2 * E) / (E * E * F))
        put(2, 2, 1, -A * (A + 3 * B + 2 * E) / (E * E * F))
        put(2, 2, 2, C / (E * E))
        return t

    def _cf_scalar_param(self, point, qn):
        m, n = qn
        if m != 0 and n != 0:
            raise ValueError("parameter scalar curvature known for (0, n)/(m, 0) only")
        if n == 0:
            n = m  # the formula is symmetric under swapping the excited mode
        A, B, C = point.values
        E = math.sqrt(4 * A * B - C * C)
        if n == 0:
            return -8.0
        pref = -1.0 / (bval(n) * (2 * n * (A + B) + A + B - E) ** 3)
        inner = (A**3 * (2 * n + 1) ** 2
                 + A * A * (B * (28 * n * (n + 1) + 15) - 3 * (2 * n + 1) * E)
                 - A * (10 * B * (2 * n + 1) * E - B * B * (28 * n * (n + 1) + 15)
                        + C * C * (4 * n * (n + 1) + 3))
                 - 3 * B * B * (2 * n + 1) * E + C * C * (2 * n + 1) * E
                 + B**3 * (2 * n + 1) ** 2 - B * C * C * (4 * n * (n + 1) + 3))
        return pref * 4 * (2 * n + 1) * (n * n + n + 2) * inner
