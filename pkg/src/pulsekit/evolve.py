"""Exact numerical time evolution and gate metrics.

The propagator uses midpoint piecewise-constant exponential stepping:
``U <- exp(-i H(t_mid) h) U`` with ``h = T / steps``, second-order accurate
and exactly unitary at every step.
"""

from dataclasses import dataclass

import numpy as np

from .linalg import dagger, expm_hermitian_generator, require_unitary

MAX_STEPS = 2**20


@dataclass
class PropagationResult:
    """Final unitary plus per-step population and coherence trajectories."""

    times: np.ndarray
    populations: np.ndarray  # shape (dim, steps + 1)
    coherence01: np.ndarray  # rho_01 of the evolving pure state
    final_unitary: np.ndarray
    final_state: np.ndarray

    @property
    def dim(self):
        return self.populations.shape[0]

    def final_populations(self):
        return self.populations[:, -1].copy()


def default_steps(model, duration):
    """``max(4096, 64 * T * max|coefficient| / 2pi)`` capped at ``2**20``."""
    scale = model.coefficient_scale(duration)
    wanted = int(np.ceil(64.0 * duration * scale / (2.0 * np.pi)))
    return min(MAX_STEPS, max(4096, wanted))


def _initial_state(initial, dim):
    if isinstance(initial, (int, np.integer)):
        if not 0 <= initial < dim:
            raise ValueError(f"initial state index {initial} out of range for dim {dim}")
        state = np.zeros(dim, dtype=complex)
        state[initial] = 1.0
        return state
    state = np.asarray(initial, dtype=complex)
    if state.shape != (dim,):
        raise ValueError(f"initial state shape {state.shape} != ({dim},)")
    norm = np.linalg.norm(state)
    if abs(norm - 1.0) > 1e-9:
        raise ValueError(f"initial state norm {norm} is not 1")
    return state


def _all_diagonal(model):
    return all(
        np.max(np.abs(op - np.diag(np.diag(op)))) == 0.0 for op, _ in model.terms
    )


def _propagate_diagonal(model, duration, steps, state, t0):
    # Diagonal terms commute at all times, so the midpoint-step product
    # collapses to a single exponential of the accumulated phase: identical
    # dynamics, evaluated without a per-step matrix loop.
    h = duration / steps
    mids = t0 + (np.arange(steps) + 0.5) * h
    diag_phase = np.zeros((steps, model.dim), dtype=float)
    for op, coeff in model.terms:
        d = np.real(np.diag(op))
        if callable(coeff):
            values = np.array([coeff(t) for t in mids], dtype=complex)
        else:
            values = np.full(steps, coeff, dtype=complex)
        diag_phase += np.real(np.outer(values, d))
    cumulative = np.vstack([np.zeros(model.dim), np.cumsum(diag_phase * h, axis=0)])
    amps = np.exp(-1.0j * cumulative) * state  # shape (steps+1, dim)
    populations = (np.abs(amps) ** 2).T
    coherence = amps[:, 0] * np.conj(amps[:, 1]) if model.dim >= 2 else np.zeros(steps + 1, complex)
    final_unitary = np.diag(np.exp(-1.0j * cumulative[-1]))
    times = t0 + np.linspace(0.0, duration, steps + 1)
    return PropagationResult(times, populations, coherence, final_unitary, amps[-1])


def propagate(model, duration, steps=None, initial=0, t0=0.0):
    """Evolve ``model`` over ``[t0, t0 + duration]`` from ``initial``.

    ``initial`` is a basis-state index or a normalized state vector; the
    default step count follows :func:`default_steps`.
    """
    if duration <= 0:
        raise ValueError(f"duration must be positive, got {duration}")
    if steps is None:
        steps = default_steps(model, duration)
    if steps < 8:
        raise ValueError(f"steps must be >= 8, got {steps}")
    state = _initial_state(initial, model.dim)

    if _all_diagonal(model):
        return _propagate_diagonal(model, duration, steps, state, t0)

    h = duration / steps
    dim = model.dim
    unitary = np.eye(dim, dtype=complex)
    populations = np.empty((dim, steps + 1))
    coherence = np.empty(steps + 1, dtype=complex)
    populations[:, 0] = np.abs(state) ** 2
    coherence[0] = state[0] * np.conj(state[1]) if dim >= 2 else 0.0

    constant = model.is_constant()
    step_unitary = None
    if constant:
        step_unitary = expm_hermitian_generator(model.constant_matrix(), h)
    psi = state
    for k in range(steps):
        if not constant:
            t_mid = t0 + (k + 0.5) * h
            step_unitary = expm_hermitian_generator(model.evaluate(t_mid), h)
        unitary = step_unitary @ unitary
        psi = step_unitary @ psi
        populations[:, k + 1] = np.abs(psi) ** 2
        coherence[k + 1] = psi[0] * np.conj(psi[1]) if dim >= 2 else 0.0

    times = t0 + np.linspace(0.0, duration, steps + 1)
    return PropagationResult(times, populations, coherence, unitary, psi)


def transition_probability(u, source, target):
    """``|<target| U |source>|**2`` for a unitary ``u``."""
    u = np.asarray(u, dtype=complex)
    require_unitary(u)
    dim = u.shape[0]
    if not (0 <= source < dim and 0 <= target < dim):
        raise IndexError(f"state indices ({source}, {target}) out of range for dim {dim}")
    return float(np.abs(u[target, source]) ** 2)


def leakage(result, comp_dim=2):
    """Final population outside the first ``comp_dim`` levels."""
    if comp_dim >= result.dim:
        raise ValueError(f"comp_dim {comp_dim} must be below model dim {result.dim}")
    return float(1.0 - np.sum(result.populations[:comp_dim, -1]))


def average_gate_fidelity(u, target, comp_dim=None):
    """Average gate fidelity of the computational block of ``u`` against ``target``.

    ``F = (|Tr(T^dag U_c)|^2 + d) / (d (d + 1))`` with ``U_c`` the top-left
    ``d x d`` block.  The block of a leaky unitary is not trace-preserving;
    this is the stated convention, not an approximation fix-up.
    """
    u = np.asarray(u, dtype=complex)
    target = np.asarray(target, dtype=complex)
    d = target.shape[0] if comp_dim is None else comp_dim
    require_unitary(target, what="target")
    block = u[:d, :d]
    overlap = np.abs(np.trace(dagger(target[:d, :d]) @ block)) ** 2
    return float((overlap + d) / (d * (d + 1)))
