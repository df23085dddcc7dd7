"""First- and second-order effective-generator (Magnus) analysis.

With ``Htilde(t) = -i H(t)``, the first term is the plain time integral and
the second is half the ordered double integral of the commutator
``[Htilde(t'), Htilde(t'')]``.  Both are anti-Hermitian, so every truncation
exponentiates to a unitary.
"""

from dataclasses import dataclass, field

import numpy as np

from . import hamiltonians
from .envelopes import area
from .linalg import (
    SX,
    SY,
    SZ,
    GL5_NODES,
    GL5_WEIGHTS,
    dagger,
    expm_hermitian_generator,
    quad_integrate,
)


@dataclass
class MagnusTerms:
    """First two expansion terms and the unitary of their sum."""

    omega1: np.ndarray
    omega2: np.ndarray
    truncated_unitary: np.ndarray = field(init=False)

    def __post_init__(self):
        total = self.omega1 + self.omega2
        # exp(M) for anti-Hermitian M, via the Hermitian generator i*M
        self.truncated_unitary = expm_hermitian_generator(1.0j * total, 1.0)


def _gl5(f, lo, hi):
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    total = None
    for x, w in zip(GL5_NODES, GL5_WEIGHTS):
        contrib = (w * half) * f(mid + half * x)
        total = contrib if total is None else total + contrib
    return total


def magnus_numeric(model, duration, panels=64):
    """Numerically integrated first and second expansion terms over ``[0, T]``.

    The inner integral of the second term is accumulated panel by panel on
    the same composite Gauss-Legendre grid as the outer one.
    """
    if panels < 8:
        raise ValueError(f"panels must be >= 8, got {panels}")

    def htilde(t):
        return -1.0j * model.evaluate(t)

    omega1 = quad_integrate(htilde, 0.0, duration, panels)

    edges = np.linspace(0.0, duration, panels + 1)
    dim = model.dim
    cumulative = np.zeros((dim, dim), dtype=complex)
    acc = np.zeros((dim, dim), dtype=complex)
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        for x, w in zip(GL5_NODES, GL5_WEIGHTS):
            t_outer = mid + half * x
            inner = cumulative + _gl5(htilde, lo, t_outer)
            h_outer = htilde(t_outer)
            acc += (w * half) * (h_outer @ inner - inner @ h_outer)
        cumulative += _gl5(htilde, lo, hi)
    return MagnusTerms(omega1=omega1, omega2=0.5 * acc)


def omega1_two_level(delta, env, duration=None):
    """First-order generator of the rotating-frame two-level model.

    Equals the time integral of ``-i H(t)`` for
    ``H = -delta/2 sz + A(t)/2 sx``, i.e.
    ``(i/2) (delta T sz - area sx)``.  Note the sz sign: it follows the
    Hamiltonian convention of :func:`hamiltonians.two_level_rwa`, so this
    closed form and :func:`magnus_numeric` agree identically.
    """
    duration = env.duration if duration is None else duration
    pulse_area = area(env)
    return 0.5j * (delta * duration * SZ - pulse_area * SX)


def omega2_triangular_closed(delta, a0, duration):
    """Tabulated closed-form second-order term for the triangular pulse.

    Returns ``(i delta / 8)(a0 / 12)(T / 2)**2 sy``.  Direct evaluation of
    the ordered commutator integral vanishes identically for any envelope
    symmetric about its midpoint (the integrand reduces to
    ``A(t) (T - 2t)``, odd about T/2), so this tabulated value disagrees
    with :func:`magnus_numeric`; it is kept because the closed-form
    transition-probability curve for the triangular pulse is built from it.
    """
    return (1.0j * delta / 8.0) * (a0 / 12.0) * (duration / 2.0) ** 2 * SY


def p01_square_closed(delta, a0, duration):
    """Ground-to-excited transition probability for the square pulse."""
    w = np.hypot(delta, a0)
    if w == 0.0:
        return 0.0
    return float(a0**2 / (a0**2 + delta**2) * np.sin(w * duration / 2.0) ** 2)


def p01_triangular_closed(delta, a0, duration):
    """Transition probability for the triangular pulse from the truncated
    second-order generator.

    Exponentiates the closed-form first- plus second-order terms
    (rotation vector ``(a0 T/4, delta a0 T^2/384, delta T/2)``) through the
    two-level rotation identity.  At ``delta = 0`` this reduces to
    ``sin(a0 T / 4)**2``.
    """
    bx = a0 * duration / 4.0
    by = delta * a0 * duration**2 / 384.0
    bz = delta * duration / 2.0
    theta = np.sqrt(bx**2 + by**2 + bz**2)
    if theta == 0.0:
        return 0.0
    return float((bx**2 + by**2) / theta**2 * np.sin(theta) ** 2)


def _hs_coefficient(basis_op, m):
    """Hilbert-Schmidt coefficient of ``m`` along unit-Frobenius ``basis_op``."""
    return complex(np.trace(dagger(basis_op) @ m))


def drag_first_order_check(anharm, lam, env, panels=256):
    """Residual first-order error channels of the three-level model.

    Returns ``(comp_error, leak_error)``: the magnitudes of the unwanted
    in-subspace y component and of the 1<->2 ladder components of the
    first-order generator.  Both vanish (to quadrature accuracy) for a
    derivative-quadrature envelope with ``I(0) = I(T) = 0``.
    """
    model = hamiltonians.three_level_rwa(anharm, lam, env)
    omega1 = quad_integrate(lambda t: -1.0j * model.evaluate(t), 0.0, env.duration, panels)
    sy01 = hamiltonians.sigma01_y() / np.sqrt(2.0)
    comp_error = abs(_hs_coefficient(sy01, omega1))
    up = _hs_coefficient(hamiltonians.sigma12_plus(), omega1)
    down = _hs_coefficient(dagger(hamiltonians.sigma12_plus()), omega1)
    leak_error = float(np.hypot(abs(up), abs(down)))
    return comp_error, leak_error


def channel_decompose_omega2(anharm, lam, env, panels=128):
    """Split the second-order generator into its error channels.

    Least-squares projection (Hilbert-Schmidt metric, unit-Frobenius basis)
    onto the two ac-Stark z channels and the two quadratures of the direct
    0<->2 leakage channel; whatever falls outside is reported as
    ``residual``.
    """
    model = hamiltonians.three_level_rwa(anharm, lam, env)
    omega2 = magnus_numeric(model, env.duration, panels=panels).omega2

    s02 = hamiltonians.sigma02_plus()
    basis = [
        hamiltonians.sigma01_z() / np.sqrt(2.0),
        hamiltonians.sigma12_z() / np.sqrt(2.0),
        (s02 + dagger(s02)) / np.sqrt(2.0),
        1.0j * (s02 - dagger(s02)) / np.sqrt(2.0),
    ]
    gram = np.array(
        [[np.trace(dagger(a) @ b) for b in basis] for a in basis], dtype=complex
    )
    rhs = np.array([_hs_coefficient(b, omega2) for b in basis])
    coeffs = np.linalg.solve(gram, rhs)
    recon = sum(c * b for c, b in zip(coeffs, basis))
    residual = float(np.linalg.norm(omega2 - recon))
    return {
        "s01z": abs(coeffs[0]),
        "s12z": abs(coeffs[1]),
        "s02plus": float(np.hypot(abs(coeffs[2]), abs(coeffs[3]))),
        "residual": residual,
    }
