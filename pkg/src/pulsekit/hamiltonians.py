"""Hamiltonian builders: driven two- and three-level models, oscillator-noise
qubit, and the effective two-qubit cross-resonance model.

All models are :class:`TimeDependentHamiltonian` instances: sums of constant
operators weighted by scalar coefficient functions, with complex-coefficient
terms stored together with their Hermitian conjugates so that ``evaluate(t)``
is Hermitian by construction.  hbar = 1 everywhere; coefficients are angular
frequencies.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .linalg import SX, SY, SZ, pauli_product


def _as_coeff_fn(coeff):
    if callable(coeff):
        return coeff
    return lambda t, c=coeff: c


class TimeDependentHamiltonian:
    """Sum of constant operators times scalar functions of time.

    Terms added through :meth:`add` must keep the total Hermitian (Hermitian
    operator with a real coefficient); complex coefficients on ladder-type
    operators go through :meth:`add_conjugate_pair`, which inserts the
    conjugate partner automatically.
    """

    def __init__(self, dim):
        self.dim = int(dim)
        self._terms = []

    def add(self, operator, coefficient):
        operator = np.asarray(operator, dtype=complex)
        if operator.shape != (self.dim, self.dim):
            raise ValueError(f"operator shape {operator.shape} != ({self.dim}, {self.dim})")
        self._terms.append((operator, coefficient))
        return self

    def add_conjugate_pair(self, operator, coefficient_fn):
        """Add ``c(t) * A + conj(c(t)) * A^dag``."""
        operator = np.asarray(operator, dtype=complex)
        fn = _as_coeff_fn(coefficient_fn)
        self.add(operator, fn)
        self.add(np.conj(operator.T), lambda t, f=fn: np.conj(f(t)))
        return self

    @property
    def terms(self):
        return tuple(self._terms)

    def is_constant(self):
        return all(not callable(c) for _, c in self._terms)

    def evaluate(self, t):
        total = np.zeros((self.dim, self.dim), dtype=complex)
        for op, coeff in self._terms:
            total += (coeff(t) if callable(coeff) else coeff) * op
        return total

    def constant_matrix(self):
        if not self.is_constant():
            raise ValueError("model has time-dependent coefficients")
        return self.evaluate(0.0)

    def coefficient_scale(self, duration, probes=129):
        """Largest total coefficient magnitude seen on a probe grid.

        Used for the default step-count heuristic of the propagator.
        """
        if self.is_constant():
            grid = [0.0]
        else:
            grid = np.linspace(0.0, duration, probes)
        best = 0.0
        for t in grid:
            total = 0.0
            for _, coeff in self._terms:
                total += abs(coeff(t) if callable(coeff) else coeff)
            best = max(best, total)
        return best


def constant_hamiltonian(matrix):
    """Wrap a constant Hermitian matrix as a model."""
    matrix = np.asarray(matrix, dtype=complex)
    model = TimeDependentHamiltonian(matrix.shape[0])
    model.add(matrix, 1.0)
    return model


# --- three-level ladder operators (basis |0>, |1>, |2>) -------------------

def sigma01_x():
    m = np.zeros((3, 3), dtype=complex)
    m[0, 1] = m[1, 0] = 1.0
    return m


def sigma01_y():
    m = np.zeros((3, 3), dtype=complex)
    m[1, 0] = 1.0j
    m[0, 1] = -1.0j
    return m


def sigma01_z():
    return np.diag([1.0, -1.0, 0.0]).astype(complex)


def sigma12_z():
    return np.diag([0.0, 1.0, -1.0]).astype(complex)


def sigma12_plus():
    m = np.zeros((3, 3), dtype=complex)
    m[2, 1] = 1.0
    return m


def sigma02_plus():
    m = np.zeros((3, 3), dtype=complex)
    m[2, 0] = 1.0
    return m


# --- single-qubit models ---------------------------------------------------

def two_level_lab(wq, wd, alpha, env):
    """Lab-frame driven qubit: ``-wq/2 sz + A(t) sin(wd t + alpha) sy``.

    Exists to validate the rotating-wave approximation numerically; the
    rotating-frame builders are the production path.
    """
    if env.has_quadrature:
        raise ValueError("lab-frame model drives a single line; Q must be zero")
    model = TimeDependentHamiltonian(2)
    model.add(SZ, -wq / 2.0)
    model.add(SY, lambda t: env.i(t) * np.sin(wd * t + alpha))
    return model


def two_level_rwa(delta, env):
    """Rotating-frame qubit: ``-delta/2 sz + A(t)/2 sx`` (drive phase pi)."""
    if env.has_quadrature:
        raise ValueError("this model drives a single line; Q must be zero")
    model = TimeDependentHamiltonian(2)
    model.add(SZ, -delta / 2.0)
    model.add(SX, lambda t: env.i(t) / 2.0)
    return model


def two_level_iq(delta, cenv):
    """Rotating-frame qubit with both quadratures: ``(I sx - Q sy)/2``.

    The sign convention matches the computational-subspace block of
    :func:`three_level_rwa`, which makes a baseband phase update
    ``value -> value * exp(-i theta)`` exactly equivalent to conjugation by
    ``exp(-i theta sz / 2)``.
    """
    model = TimeDependentHamiltonian(2)
    model.add(SZ, -delta / 2.0)
    model.add(SX, lambda t: cenv.i(t) / 2.0)
    model.add(SY, lambda t: -cenv.q(t) / 2.0)
    return model


def three_level_rwa(anharm, lam, env):
    """Resonantly driven three-level ladder in the interaction picture.

    ``anharm`` is the 1<->2 detuning (anharmonicity, negative for a
    transmon); ``lam`` the 1<->2 coupling relative to 0<->1.  The 1<->2 term
    carries the interaction-picture phase ``exp(+i anharm t)`` on the raising
    operator, paired with its conjugate.
    """
    model = TimeDependentHamiltonian(3)
    model.add(sigma01_x(), lambda t: env.i(t) / 2.0)
    model.add(sigma01_y(), lambda t: -env.q(t) / 2.0)
    model.add_conjugate_pair(
        sigma12_plus(),
        lambda t: (lam / 2.0) * (env.i(t) + 1.0j * env.q(t)) * np.exp(1.0j * anharm * t),
    )
    return model


def lo_noise_qubit(env, phi_c, phi_n_dot, delta_w0):
    """Qubit in the doubly rotated frame of a noisy local oscillator.

    ``phi_c``, ``phi_n_dot`` and ``delta_w0`` are scalar functions of time:
    the control phase, the oscillator frequency fluctuation, and the
    environmental detuning.  The two dephasing terms enter identically.
    ``env = None`` drops the drive entirely (free dephasing).
    """
    phi_c = _as_coeff_fn(phi_c)
    phi_n_dot = _as_coeff_fn(phi_n_dot)
    delta_w0 = _as_coeff_fn(delta_w0)
    model = TimeDependentHamiltonian(2)
    model.add(SZ, lambda t: 0.5 * (delta_w0(t) + phi_n_dot(t)))
    if env is not None:
        model.add(SX, lambda t: 0.5 * env.i(t) * np.cos(phi_c(t)))
        model.add(SY, lambda t: 0.5 * env.i(t) * np.sin(phi_c(t)))
    return model


# --- effective two-qubit cross-resonance model ------------------------------

@dataclass(frozen=True)
class CrCoefficients:
    """The five effective cross-resonance rates (rad per time unit)."""

    w_ix: float = 0.0
    w_iz: float = 0.0
    w_zi: float = 0.0
    w_zx: float = 0.0
    w_zz: float = 0.0

    def as_dict(self):
        return {
            "IX": self.w_ix,
            "IZ": self.w_iz,
            "ZI": self.w_zi,
            "ZX": self.w_zx,
            "ZZ": self.w_zz,
        }


def cr_effective(c, sign=1, extra_iy=0.0):
    """Constant effective CR Hamiltonian ``sum w_ab (P_a x P_b) / 2``.

    ``sign = -1`` models the drive with inverted amplitude, which flips the
    drive-linear terms (IX, ZX, and the optional IY) and preserves IZ, ZI,
    ZZ.  ``extra_iy`` adds a drive-linear I(x)Y rate absent from the ideal
    five-coefficient model; calibration experiments use it as the synthetic
    phase-misalignment error.
    """
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    matrix = (
        sign * c.w_ix * pauli_product("IX")
        + c.w_iz * pauli_product("IZ")
        + c.w_zi * pauli_product("ZI")
        + sign * c.w_zx * pauli_product("ZX")
        + c.w_zz * pauli_product("ZZ")
        + sign * extra_iy * pauli_product("IY")
    ) / 2.0
    return constant_hamiltonian(matrix)


def scaling_model(j, omega, k=(1.0, 1.0, 1.0, 1.0, 1.0)):
    """Map coupling ``j`` and drive ``omega`` to CR rates by their power laws.

    ``k`` holds the five dimensionless prefactors for (IX, ZX, ZZ, ZI, IZ).
    The effective model is derived for weak coupling; a warning is emitted
    when ``j`` exceeds ``omega / 10``.
    """
    if j < 0 or omega < 0:
        raise ValueError("j and omega must be non-negative")
    if j > omega / 10.0:
        warnings.warn(
            f"coupling j = {j} is not small against drive omega = {omega}; "
            "the effective model assumes j << omega",
            RuntimeWarning,
            stacklevel=2,
        )
    k1, k2, k3, k4, k5 = k
    return CrCoefficients(
        w_ix=k1 * j * omega,
        w_zx=k2 * j * omega,
        w_zz=k3 * j * j,
        w_zi=k4 * omega * omega,
        w_iz=k5 * j * j,
    )


def control_line_pulse(env, sign=1):
    """Two-qubit model driving the control line: ``(I (XxI) - Q (YxI))/2``."""
    model = TimeDependentHamiltonian(4)
    model.add(pauli_product("XI"), lambda t: sign * env.i(t) / 2.0)
    model.add(pauli_product("YI"), lambda t: -sign * env.q(t) / 2.0)
    return model
