"""Two-qubit cross-resonance constructions: target unitary, CNOT
decomposition, echo and active-cancellation schedules, the derivative-chain
CR schedule, and the idle-time ZZ echo.
"""

from dataclasses import dataclass, field

import numpy as np

from . import hamiltonians
from .envelopes import ComplexEnvelope, drag_quadrature, recursive_drag_cr
from .evolve import propagate
from .linalg import expm_hermitian_generator, global_phase_distance, pauli_product


@dataclass(frozen=True)
class Segment:
    """One schedule entry: a Hamiltonian evolution or an instantaneous gate."""

    duration: float
    model: object = None  # TimeDependentHamiltonian for evolutions
    unitary: np.ndarray = None  # for instantaneous gates
    label: str = ""
    line: str = "control"
    drive: object = None  # optional envelope backing, for timelines

    def __post_init__(self):
        if (self.model is None) == (self.unitary is None):
            raise ValueError("segment needs exactly one of model or unitary")
        if self.unitary is not None and self.duration != 0.0:
            raise ValueError("instantaneous segments must have zero duration")
        if self.duration < 0:
            raise ValueError("segment duration must be non-negative")


@dataclass
class GateSchedule:
    """Ordered pulse segments; the total unitary applies them first-to-last."""

    segments: list = field(default_factory=list)

    def append(self, segment):
        self.segments.append(segment)
        return self

    @property
    def duration(self):
        return sum(s.duration for s in self.segments)

    def segment_unitary(self, segment, steps=None):
        if segment.unitary is not None:
            return np.asarray(segment.unitary, dtype=complex)
        if segment.model.is_constant():
            return expm_hermitian_generator(segment.model.constant_matrix(), segment.duration)
        return propagate(segment.model, segment.duration, steps=steps).final_unitary

    def total_unitary(self, steps=None):
        dim = None
        for segment in self.segments:
            dim = segment.model.dim if segment.model is not None else segment.unitary.shape[0]
            break
        if dim is None:
            raise ValueError("schedule has no segments")
        total = np.eye(dim, dtype=complex)
        for segment in self.segments:
            total = self.segment_unitary(segment, steps=steps) @ total
        return total

    def timeline_rows(self, points_per_segment=16):
        """Rows ``(index, t_start, duration, line, t, I, Q)`` for plotting."""
        rows = []
        t_start = 0.0
        for idx, segment in enumerate(self.segments):
            if segment.drive is not None and segment.duration > 0:
                local = np.linspace(0.0, segment.duration, points_per_segment)
                for t in local:
                    value = segment.drive.value(t) if isinstance(segment.drive, ComplexEnvelope) else (
                        segment.drive.i(t) + 1.0j * segment.drive.q(t)
                    )
                    rows.append((idx, t_start, segment.duration, segment.line,
                                 t_start + t, float(np.real(value)), float(np.imag(value))))
            else:
                rows.append((idx, t_start, segment.duration, segment.line, t_start, 0.0, 0.0))
            t_start += segment.duration
        return rows


def control_rx(angle):
    """Instantaneous control-qubit rotation ``exp(-i angle (XxI) / 2)``."""
    return expm_hermitian_generator(pauli_product("XI"), angle / 2.0)


def cr_target(theta):
    """Conditional target rotation ``exp(-i theta/2 ZxX)`` written out."""
    c = np.cos(theta / 2.0)
    s = np.sin(theta / 2.0)
    return np.array(
        [
            [c, -1.0j * s, 0.0, 0.0],
            [-1.0j * s, c, 0.0, 0.0],
            [0.0, 0.0, c, 1.0j * s],
            [0.0, 0.0, 1.0j * s, c],
        ],
        dtype=complex,
    )


CNOT = np.array(
    [
        [1, 0, 0, 0],
        [0, 1, 0, 0],
        [0, 0, 0, 1],
        [0, 0, 1, 0],
    ],
    dtype=complex,
)


@dataclass(frozen=True)
class PhaseReport:
    """Global phase relating a constructed product to its target."""

    phase: complex
    angle: float
    distance: float


def cnot_from_cr():
    """CNOT from a -pi/2 conditional rotation plus two single-qubit gates.

    Multiplies ``(ZxI)_{pi/2} (IxX)_{pi/2} CR_{-pi/2}`` (rightmost first),
    verifies the product equals CNOT up to a global phase, and reports that
    phase.
    """
    zi_half = expm_hermitian_generator(pauli_product("ZI"), np.pi / 4.0)
    ix_half = expm_hermitian_generator(pauli_product("IX"), np.pi / 4.0)
    product = zi_half @ ix_half @ cr_target(-np.pi / 2.0)
    distance, phase = global_phase_distance(product, CNOT)
    if distance > 1e-10:
        raise RuntimeError(
            f"CNOT construction off by {distance:.3e} beyond a global phase"
        )
    return product, PhaseReport(phase=phase, angle=float(np.angle(phase)), distance=distance)


def _cancellation_term(model, cancel_amp, cancel_phase, sign):
    model.add(pauli_product("IX"), sign * cancel_amp * np.cos(cancel_phase) / 2.0)
    model.add(pauli_product("IY"), sign * cancel_amp * np.sin(cancel_phase) / 2.0)
    return model


def _cr_segment_model(c, sign, extra_iy=0.0, cancel=None):
    model = hamiltonians.cr_effective(c, sign=sign, extra_iy=extra_iy)
    if cancel is not None:
        amp, phase = cancel
        _cancellation_term(model, amp, phase, sign)
    return model


def echo_sequence(c, tau, pi_pulse="ideal", extra_iy=0.0):
    """Echoed CR drive: positive segment, control flip, negative segment, flip back.

    ``tau`` is the duration of each of the two CR segments, so with only the
    conditional term present the total is ``exp(-i tau w_zx ZxX)``.  Ideal
    pi pulses are instantaneous ``exp(-/+ i pi (XxI)/2)``; passing an
    envelope instead inserts shaped control-line rotations.
    """
    if tau <= 0:
        raise ValueError(f"tau must be positive, got {tau}")
    schedule = GateSchedule()
    schedule.append(Segment(tau, model=_cr_segment_model(c, +1, extra_iy), label="cr+", line="control"))
    if pi_pulse == "ideal":
        schedule.append(Segment(0.0, unitary=control_rx(np.pi), label="rx(pi)"))
        schedule.append(Segment(tau, model=_cr_segment_model(c, -1, extra_iy), label="cr-", line="control"))
        schedule.append(Segment(0.0, unitary=control_rx(-np.pi), label="rx(-pi)"))
    else:
        env = pi_pulse
        schedule.append(
            Segment(env.duration, model=hamiltonians.control_line_pulse(env, sign=1),
                    label="rx(pi) shaped", drive=env)
        )
        schedule.append(Segment(tau, model=_cr_segment_model(c, -1, extra_iy), label="cr-", line="control"))
        schedule.append(
            Segment(env.duration, model=hamiltonians.control_line_pulse(env, sign=-1),
                    label="rx(-pi) shaped", drive=env)
        )
    return schedule


def active_cancellation_schedule(c, cancel_amp, cancel_phase, tau, extra_iy=0.0):
    """Echo schedule with a simultaneous target-line cancellation tone.

    The tone ``cancel_amp (cos IX + sin IY)/2`` rides on the positive CR
    segment and flips sign with the drive on the negative segment.
    """
    if tau <= 0:
        raise ValueError(f"tau must be positive, got {tau}")
    schedule = GateSchedule()
    schedule.append(
        Segment(tau, model=_cr_segment_model(c, +1, extra_iy, cancel=(cancel_amp, cancel_phase)),
                label="cr+ac", line="control+target")
    )
    schedule.append(Segment(0.0, unitary=control_rx(np.pi), label="rx(pi)"))
    schedule.append(
        Segment(tau, model=_cr_segment_model(c, -1, extra_iy, cancel=(cancel_amp, cancel_phase)),
                label="cr-ac", line="control+target")
    )
    schedule.append(Segment(0.0, unitary=control_rx(-np.pi), label="rx(-pi)"))
    return schedule


def multiderivative_cr_schedule(
    base,
    d10,
    d21,
    d20,
    coefficient_map,
    cancel=None,
    cancel_detuning_drag=None,
    cr_detuning=0.0,
):
    """Single shaped CR drive built from the derivative-chain envelope.

    ``coefficient_map`` maps an instantaneous drive amplitude to
    :class:`~pulsekit.hamiltonians.CrCoefficients`; the chain's complex
    phase rotates the drive-linear target axes (ZX toward ZY, IX toward
    IY).  ``cancel`` is an optional target-line tone: an envelope that is
    given a derivative quadrature with ``cancel_detuning_drag`` (or passed
    through if already complex).  ``cr_detuning`` adds a constant IZ trim.
    """
    chain = recursive_drag_cr(base, d10, d21, d20)
    cancel_env = None
    if cancel is not None:
        if isinstance(cancel, ComplexEnvelope):
            cancel_env = cancel
        elif cancel_detuning_drag is not None:
            cancel_env = ComplexEnvelope.from_envelope(drag_quadrature(cancel, cancel_detuning_drag))
        else:
            cancel_env = ComplexEnvelope.from_envelope(cancel)

    def term(t, pick):
        value = chain.value(t)
        amplitude = abs(value)
        phase = np.angle(value) if amplitude > 0 else 0.0
        coeffs = coefficient_map(amplitude)
        if pick == "zx":
            return coeffs.w_zx * np.cos(phase) / 2.0
        if pick == "zy":
            return coeffs.w_zx * np.sin(phase) / 2.0
        if pick == "ix":
            return coeffs.w_ix * np.cos(phase) / 2.0
        if pick == "iy":
            return coeffs.w_ix * np.sin(phase) / 2.0
        if pick == "zi":
            return coeffs.w_zi / 2.0
        if pick == "zz":
            return coeffs.w_zz / 2.0
        if pick == "iz":
            return coeffs.w_iz / 2.0
        raise KeyError(pick)

    model = hamiltonians.TimeDependentHamiltonian(4)
    for label, pick in (
        ("ZX", "zx"), ("ZY", "zy"), ("IX", "ix"), ("IY", "iy"),
        ("ZI", "zi"), ("ZZ", "zz"), ("IZ", "iz"),
    ):
        model.add(pauli_product(label), lambda t, p=pick: term(t, p))
    if cr_detuning:
        model.add(pauli_product("IZ"), cr_detuning / 2.0)
    if cancel_env is not None:
        model.add(pauli_product("IX"), lambda t: cancel_env.i(t) / 2.0)
        model.add(pauli_product("IY"), lambda t: cancel_env.q(t) / 2.0)

    schedule = GateSchedule()
    schedule.append(
        Segment(base.duration, model=model, label="cr multiderivative",
                line="control+target", drive=chain)
    )
    return schedule


def idle_zz_echo(j, tau):
    """Spectator echo: free ZZ evolution, flip, repeat, flip back.

    Free segments evolve under ``H = j (ZxZ)``; the two control flips
    reverse the accumulated conditional phase, so the total is proportional
    to the identity.
    """
    if tau <= 0:
        raise ValueError(f"tau must be positive, got {tau}")
    zz = hamiltonians.constant_hamiltonian(j * pauli_product("ZZ"))
    schedule = GateSchedule()
    schedule.append(Segment(tau, model=zz, label="idle"))
    schedule.append(Segment(0.0, unitary=control_rx(np.pi), label="rx(pi)"))
    schedule.append(Segment(tau, model=zz, label="idle"))
    schedule.append(Segment(0.0, unitary=control_rx(np.pi), label="rx(pi)"))
    return schedule
