"""Simulated calibration: effective-Hamiltonian tomography via generator
extraction, the active-cancellation parameter search, and generic parameter
sweeps.  All routines are deterministic.
"""

from dataclasses import dataclass

import numpy as np

from . import hamiltonians
from .linalg import (
    expm_hermitian_generator,
    pauli_decompose,
    pauli_product,
    principal_log_unitary,
)


@dataclass(frozen=True)
class TomographyResult:
    """Extracted generator coefficients of a constant two-qubit segment."""

    coefficients: hamiltonians.CrCoefficients
    pauli: object  # full PauliCoefficients of the generator
    residual: float  # norm of components outside the five-rate model

    def rate(self, label):
        """Generator rate ``w_ab`` for any Pauli-product label."""
        return 2.0 * self.pauli[label]


def _segment_matrix(model):
    if isinstance(model, hamiltonians.TimeDependentHamiltonian):
        return model.constant_matrix()
    return np.asarray(model, dtype=complex)


def effective_tomography(model, tau_probe):
    """Recover the constant generator of a segment from a short evolution.

    Propagates for ``tau_probe``, takes the principal matrix logarithm, and
    Pauli-decomposes the generator; exact for constant segments as long as
    ``norm(H) * tau_probe`` stays below pi (branch errors propagate with
    guidance to shorten ``tau_probe``).
    """
    if tau_probe <= 0:
        raise ValueError(f"tau_probe must be positive, got {tau_probe}")
    matrix = _segment_matrix(model)
    unitary = expm_hermitian_generator(matrix, tau_probe)
    generator = principal_log_unitary(unitary) / tau_probe
    coeffs = pauli_decompose(generator)
    rates = hamiltonians.CrCoefficients(
        w_ix=2.0 * coeffs["IX"],
        w_iz=2.0 * coeffs["IZ"],
        w_zi=2.0 * coeffs["ZI"],
        w_zx=2.0 * coeffs["ZX"],
        w_zz=2.0 * coeffs["ZZ"],
    )
    named = {"II", "IX", "IZ", "ZI", "ZX", "ZZ"}
    residual = float(
        np.sqrt(
            sum(
                coeffs[label] ** 2 + coeffs.imag[k] ** 2
                for k, label in enumerate(coeffs.as_dict())
                if label not in named
            )
        )
    )
    return TomographyResult(coefficients=rates, pauli=coeffs, residual=residual)


@dataclass(frozen=True)
class CancellationResult:
    amp: float
    phase: float
    residual: float
    evaluations: int


_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


def _golden_min(f, lo, hi, iters=20):
    """Golden-section minimum of a unimodal scalar function on [lo, hi]."""
    a, b = lo, hi
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(iters):
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = f(x2)
    return (x1, f1) if f1 <= f2 else (x2, f2)


def cancellation_search(
    true_model,
    amp_grid=None,
    phase_grid=None,
    refine_iters=4,
    tau_probe=None,
    extra_iy=0.0,
):
    """Find the target-tone amplitude and phase nulling the IX/IY rates.

    ``true_model`` is either :class:`~pulsekit.hamiltonians.CrCoefficients`
    (with ``extra_iy`` adding a synthetic IY rate) or a constant 4x4
    Hermitian segment generator.  The objective is the root-sum-square of
    the tomographed IX and IY rates of the compensated segment; a coarse
    grid scan is refined by alternating golden-section line searches.
    """
    if isinstance(true_model, hamiltonians.CrCoefficients):
        base_matrix = hamiltonians.cr_effective(true_model, extra_iy=extra_iy).constant_matrix()
        amp_default = 2.0 * abs(true_model.w_ix)
    else:
        base_matrix = np.asarray(true_model, dtype=complex)
        w_ix = 2.0 * float(np.trace(pauli_product("IX") @ base_matrix).real) / 4.0
        amp_default = 2.0 * abs(w_ix)

    if amp_grid is None:
        amp_grid = np.linspace(0.0, amp_default if amp_default > 0 else 1.0, 21)
    else:
        amp_grid = np.asarray(amp_grid, dtype=float)
    if phase_grid is None:
        phase_grid = np.linspace(0.0, 2.0 * np.pi, 24, endpoint=False)
    else:
        phase_grid = np.asarray(phase_grid, dtype=float)
    if amp_grid.size == 0 or phase_grid.size == 0:
        raise ValueError("search grids must be non-empty")

    scale = max(float(np.max(np.abs(base_matrix))), 1e-12)
    if tau_probe is None:
        tau_probe = 1.0 / (4.0 * scale)

    evaluations = 0

    def objective(amp, phase):
        nonlocal evaluations
        evaluations += 1
        tone = amp * (
            np.cos(phase) * pauli_product("IX") + np.sin(phase) * pauli_product("IY")
        ) / 2.0
        tom = effective_tomography(base_matrix + tone, tau_probe)
        return float(np.hypot(tom.coefficients.w_ix, tom.rate("IY")))

    best_amp, best_phase, best = None, None, np.inf
    for amp in amp_grid:
        for phase in phase_grid:
            value = objective(amp, phase)
            if value < best:
                best_amp, best_phase, best = float(amp), float(phase), value

    amp_step = float(amp_grid[-1] - amp_grid[0]) / max(1, amp_grid.size - 1)
    phase_step = float(2.0 * np.pi / phase_grid.size)
    for _ in range(refine_iters):
        lo = max(0.0, best_amp - amp_step)
        hi = best_amp + amp_step
        best_amp, best = _golden_min(lambda a: objective(a, best_phase), lo, hi)
        best_phase, best = _golden_min(
            lambda p: objective(best_amp, p), best_phase - phase_step, best_phase + phase_step
        )
        amp_step /= 4.0
        phase_step /= 4.0

    return CancellationResult(
        amp=float(best_amp), phase=float(best_phase), residual=float(best), evaluations=evaluations
    )


@dataclass
class SweepResult:
    """Metric values over a parameter axis, with per-point error capture."""

    axis: np.ndarray
    objective: np.ndarray
    coefficients: list
    errors: list

    def __post_init__(self):
        if not (len(self.axis) == len(self.objective) == len(self.coefficients) == len(self.errors)):
            raise ValueError("sweep result arrays must have equal length")


def parameter_sweep(factory, axis, metric):
    """Evaluate ``metric(factory(x))`` for every ``x`` on the axis.

    Failures are recorded per point (objective NaN) and the sweep
    continues.  When the factory output carries extracted coefficients
    (e.g. a :class:`TomographyResult`), they are collected alongside.
    """
    axis = np.asarray(axis, dtype=float)
    if axis.size == 0:
        raise ValueError("sweep axis must be non-empty")
    values = np.full(axis.size, np.nan)
    coefficients = []
    errors = []
    for k, x in enumerate(axis):
        try:
            produced = factory(float(x))
            values[k] = float(metric(produced))
            coefficients.append(getattr(produced, "coefficients", None))
            errors.append(None)
        except Exception as exc:  # noqa: BLE001 - per-point capture is the contract
            coefficients.append(None)
            errors.append(f"{type(exc).__name__}: {exc}")
    return SweepResult(axis=axis, objective=values, coefficients=coefficients, errors=errors)
