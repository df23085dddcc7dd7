"""Small dense complex linear algebra and quadrature kernel.

Operators and states are plain complex ``numpy`` arrays (dimensions 2, 3, 4
or 9 in practice).  Generators follow the physics convention throughout the
package: a Hermitian ``H`` generates the unitary ``U = exp(-i H t)``.
"""

import numpy as np
import scipy.linalg

HERMITICITY_TOL = 1e-10
UNITARITY_TOL = 1e-10
BRANCH_MARGIN = 1e-6

SI = np.eye(2, dtype=complex)
SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SY = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SZ = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
PAULIS = {"I": SI, "X": SX, "Y": SY, "Z": SZ}

#: Labels of the 16 two-qubit Pauli products, row-major in (left, right).
PAULI_LABELS = tuple(a + b for a in "IXYZ" for b in "IXYZ")


class HermiticityError(ValueError):
    """Input expected to be Hermitian is not (within tolerance)."""


class UnitarityError(ValueError):
    """Input expected to be unitary is not (within tolerance)."""


class BranchAmbiguityError(ValueError):
    """A unitary has an eigenphase too close to the +/-pi branch cut."""


def dagger(m):
    return np.conj(np.asarray(m).T)


def commutator(a, b):
    return a @ b - b @ a


def frobenius_norm(m):
    return float(np.linalg.norm(np.asarray(m)))


def hermiticity_defect(m):
    """Max entrywise asymmetry ``|M - M^dag|``."""
    m = np.asarray(m)
    return float(np.max(np.abs(m - dagger(m)))) if m.size else 0.0


def unitarity_defect(u):
    """Max entrywise deviation of ``U^dag U`` from the identity."""
    u = np.asarray(u)
    return float(np.max(np.abs(dagger(u) @ u - np.eye(u.shape[0]))))


def require_hermitian(m, tol=HERMITICITY_TOL, what="operator"):
    defect = hermiticity_defect(m)
    if defect > tol:
        raise HermiticityError(
            f"{what} is not Hermitian: max |M[i,j] - conj(M[j,i])| = "
            f"{defect:.3e} exceeds {tol:.1e}"
        )


def require_unitary(u, tol=UNITARITY_TOL, what="matrix"):
    defect = unitarity_defect(u)
    if defect > tol:
        raise UnitarityError(
            f"{what} is not unitary: max |U^dag U - I| = {defect:.3e} "
            f"exceeds {tol:.1e}"
        )


def expm_hermitian_generator(h, t=1.0):
    """Unitary ``exp(-i h t)`` for a Hermitian generator ``h``.

    Computed through the Hermitian eigendecomposition, so the result is
    unitary to machine precision regardless of ``t``.
    """
    h = np.asarray(h, dtype=complex)
    require_hermitian(h, what="generator")
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1.0j * w * t)) @ dagger(v)


def principal_log_unitary(u):
    """Hermitian ``H`` with ``exp(-i H) = U`` and eigenvalues in (-pi, pi).

    Raises :class:`BranchAmbiguityError` when any eigenphase of ``U`` lies
    within ``BRANCH_MARGIN`` of +/-pi, in which case the caller should
    shorten the evolution time that produced ``U``.
    """
    u = np.asarray(u, dtype=complex)
    require_unitary(u, what="input")
    # Schur of a normal matrix is its spectral decomposition with an
    # orthonormal basis, which eig() does not guarantee for degenerate
    # eigenvalues.
    t, q = scipy.linalg.schur(u, output="complex")
    phases = np.angle(np.diag(t))
    worst = float(np.max(np.pi - np.abs(phases))) if phases.size else np.pi
    if np.any(np.pi - np.abs(phases) < BRANCH_MARGIN):
        raise BranchAmbiguityError(
            f"eigenphase within {BRANCH_MARGIN:.0e} of +/-pi (closest gap "
            f"{worst:.3e}); shorten the evolution time so the generator's "
            "spectral radius stays below pi"
        )
    h = q @ np.diag(-phases) @ dagger(q)
    return 0.5 * (h + dagger(h))


def pauli_product(label):
    """4x4 two-qubit Pauli product for a two-letter label such as ``"ZX"``."""
    a, b = label
    return np.kron(PAULIS[a], PAULIS[b])


class PauliCoefficients:
    """Coefficients of a 4x4 operator in the 16-element Pauli product basis.

    ``coeffs`` holds the real parts ``Re[Tr(P_ab M)] / 4`` in the order of
    :data:`PAULI_LABELS`; imaginary parts are kept separately in ``imag``
    (zero for Hermitian input).
    """

    def __init__(self, coeffs, imag=None):
        self.coeffs = np.asarray(coeffs, dtype=float)
        self.imag = np.zeros(16) if imag is None else np.asarray(imag, dtype=float)
        if self.coeffs.shape != (16,) or self.imag.shape != (16,):
            raise ValueError("expected 16 coefficients")

    def __getitem__(self, label):
        return float(self.coeffs[PAULI_LABELS.index(label.upper())])

    def complex_coefficient(self, label):
        k = PAULI_LABELS.index(label.upper())
        return complex(self.coeffs[k] + 1.0j * self.imag[k])

    def reconstruct(self):
        """Sum the basis back up; inverts :func:`pauli_decompose`."""
        m = np.zeros((4, 4), dtype=complex)
        for k, label in enumerate(PAULI_LABELS):
            m += (self.coeffs[k] + 1.0j * self.imag[k]) * pauli_product(label)
        return m

    def as_dict(self):
        return {label: float(self.coeffs[k]) for k, label in enumerate(PAULI_LABELS)}

    def __repr__(self):
        terms = ", ".join(
            f"{label}={self.coeffs[k]:+.4g}"
            for k, label in enumerate(PAULI_LABELS)
            if abs(self.coeffs[k]) > 1e-14 or abs(self.imag[k]) > 1e-14
        )
        return f"PauliCoefficients({terms or '0'})"


def pauli_decompose(m):
    """Decompose a 4x4 matrix over the two-qubit Pauli product basis."""
    m = np.asarray(m, dtype=complex)
    if m.shape != (4, 4):
        raise ValueError(f"pauli_decompose expects a 4x4 matrix, got {m.shape}")
    traces = np.array([np.trace(pauli_product(label) @ m) / 4.0 for label in PAULI_LABELS])
    return PauliCoefficients(traces.real, traces.imag)


GL5_NODES, GL5_WEIGHTS = np.polynomial.legendre.leggauss(5)


def quad_integrate(f, a, b, panels=64):
    """Composite 5-point Gauss-Legendre integral of ``f`` over ``[a, b]``.

    ``f`` may return scalars or numpy arrays (all of one shape).  Doubling
    ``panels`` changes the result by less than 1e-10 for smooth integrands.
    """
    if b < a:
        raise ValueError(f"integration bounds reversed: a={a}, b={b}")
    if panels < 1:
        raise ValueError(f"panel count must be >= 1, got {panels}")
    if b == a:
        return 0.0 * np.asarray(f(a))
    edges = np.linspace(a, b, panels + 1)
    total = None
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        for x, w in zip(GL5_NODES, GL5_WEIGHTS):
            contrib = (w * half) * np.asarray(f(mid + half * x))
            total = contrib if total is None else total + contrib
    return total


def global_phase_distance(u, v):
    """Max entrywise distance between ``u`` and ``v`` after phase alignment.

    Returns ``(distance, phase)`` where ``phase`` is the unit complex number
    minimizing ``|u - phase * v|`` in the trace sense.
    """
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    overlap = np.trace(dagger(v) @ u)
    if abs(overlap) < 1e-300:
        return float(np.max(np.abs(u - v))), 1.0 + 0.0j
    phase = overlap / abs(overlap)
    return float(np.max(np.abs(u - phase * v))), complex(phase)
