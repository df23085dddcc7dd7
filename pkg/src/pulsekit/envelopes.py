"""Pulse envelopes: basic shapes, DRAG quadratures, and the recursive CR chain.

An :class:`Envelope` is a real in-phase/quadrature pair ``(I(t), Q(t))``
supported on ``[0, duration]`` and zero outside; a :class:`ComplexEnvelope`
carries the complex baseband ``I(t) + i Q(t)``.  Amplitudes are angular
frequencies (rad per time unit).
"""

import warnings

import numpy as np

from .linalg import quad_integrate

_FD_STEP_FRACTION = 1e-6  # central-difference step for analytic backings


def _as_mask(t, duration):
    t = np.asarray(t, dtype=float)
    return t, (t >= 0.0) & (t <= duration)


class Envelope:
    """Real I/Q envelope on ``[0, duration]``; evaluation outside returns 0.

    ``i_fn``/``q_fn`` are callables accepting numpy arrays.  ``i_dot_fn``
    optionally supplies the analytic derivative of I; otherwise central
    differences of ``i`` are used.
    """

    def __init__(self, duration, i_fn, q_fn=None, i_dot_fn=None, label=""):
        if duration <= 0:
            raise ValueError(f"envelope duration must be positive, got {duration}")
        self.duration = float(duration)
        self._i_fn = i_fn
        self._q_fn = q_fn
        self._i_dot_fn = i_dot_fn
        self.label = label

    @property
    def has_quadrature(self):
        return self._q_fn is not None

    @classmethod
    def from_samples(cls, sample_period, i_samples, q_samples=None, label=""):
        """Envelope backed by uniform samples with linear interpolation.

        The derivative uses 2nd-order central differences with one-sided
        2nd-order stencils at the ends (``numpy.gradient``).
        """
        i_samples = np.asarray(i_samples, dtype=float)
        if i_samples.size < 3:
            raise ValueError("need at least 3 samples")
        duration = sample_period * (i_samples.size - 1)
        grid = np.linspace(0.0, duration, i_samples.size)
        i_dot = np.gradient(i_samples, sample_period)

        def i_fn(t):
            return np.interp(t, grid, i_samples)

        def i_dot_fn(t):
            return np.interp(t, grid, i_dot)

        q_fn = None
        if q_samples is not None:
            q_samples = np.asarray(q_samples, dtype=float)
            if q_samples.shape != i_samples.shape:
                raise ValueError("I and Q sample arrays must have equal length")

            def q_fn(t):
                return np.interp(t, grid, q_samples)

        env = cls(duration, i_fn, q_fn, i_dot_fn, label=label)
        env._grid = grid
        return env

    def i(self, t):
        t, mask = _as_mask(t, self.duration)
        values = np.where(mask, self._i_fn(t), 0.0)
        return float(values) if values.ndim == 0 else values

    def q(self, t):
        t, mask = _as_mask(t, self.duration)
        if self._q_fn is None:
            values = np.zeros_like(t)
        else:
            values = np.where(mask, self._q_fn(t), 0.0)
        return float(values) if values.ndim == 0 else values

    def i_derivative(self, t):
        t, mask = _as_mask(t, self.duration)
        if self._i_dot_fn is not None:
            values = np.where(mask, self._i_dot_fn(t), 0.0)
        else:
            h = _FD_STEP_FRACTION * self.duration
            values = np.where(mask, (self._i_fn(t + h) - self._i_fn(t - h)) / (2 * h), 0.0)
        return float(values) if values.ndim == 0 else values

    def sample_table(self, n=513):
        """``(t, I, Q)`` arrays for CSV serialization and resampling."""
        t = np.linspace(0.0, self.duration, n)
        return t, self.i(t), self.q(t)


class ComplexEnvelope:
    """Complex baseband ``value(t) = I(t) + i Q(t)`` on ``[0, duration]``."""

    def __init__(self, duration, value_fn, label="", meta=None):
        if duration <= 0:
            raise ValueError(f"envelope duration must be positive, got {duration}")
        self.duration = float(duration)
        self._value_fn = value_fn
        self.label = label
        self.meta = dict(meta or {})

    @classmethod
    def from_envelope(cls, env):
        return cls(env.duration, lambda t: env.i(t) + 1.0j * env.q(t), label=env.label)

    @classmethod
    def from_samples(cls, sample_period, values, label="", meta=None):
        values = np.asarray(values, dtype=complex)
        duration = sample_period * (values.size - 1)
        grid = np.linspace(0.0, duration, values.size)

        def value_fn(t):
            return np.interp(t, grid, values.real) + 1.0j * np.interp(t, grid, values.imag)

        env = cls(duration, value_fn, label=label, meta=meta)
        env._grid = grid
        env._values = values
        return env

    def value(self, t):
        t, mask = _as_mask(t, self.duration)
        values = np.where(mask, self._value_fn(t), 0.0 + 0.0j)
        return complex(values) if values.ndim == 0 else values

    def i(self, t):
        v = self.value(t)
        return v.real if isinstance(v, np.ndarray) else float(np.real(v))

    def q(self, t):
        v = self.value(t)
        return v.imag if isinstance(v, np.ndarray) else float(np.imag(v))

    def rotated(self, phase):
        """Frame update ``value -> value * exp(-i phase)``."""
        factor = np.exp(-1.0j * phase)
        return ComplexEnvelope(
            self.duration,
            lambda t: self._value_fn(t) * factor,
            label=self.label,
            meta=self.meta,
        )

    def sample_table(self, n=513):
        t = np.linspace(0.0, self.duration, n)
        v = self.value(t)
        return t, v.real, v.imag


def make_square(a0, duration):
    """Constant drive ``I(t) = a0`` over the pulse."""
    if duration <= 0:
        raise ValueError(f"duration must be positive, got {duration}")
    return Envelope(
        duration,
        lambda t: np.full_like(np.asarray(t, dtype=float), a0),
        i_dot_fn=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
        label="square",
    )


def make_triangular(a0, duration):
    """Symmetric triangle rising to ``a0`` at mid-pulse."""
    if duration <= 0:
        raise ValueError(f"duration must be positive, got {duration}")
    half = duration / 2.0

    def i_fn(t):
        t = np.asarray(t, dtype=float)
        return np.where(t <= half, 2.0 * a0 * t / duration, 2.0 * a0 * (duration - t) / duration)

    def i_dot_fn(t):
        t = np.asarray(t, dtype=float)
        return np.where(t <= half, 2.0 * a0 / duration, -2.0 * a0 / duration)

    return Envelope(duration, i_fn, i_dot_fn=i_dot_fn, label="triangular")


def make_gaussian(a0, sigma, duration=None, lifted=True):
    """Gaussian centered at mid-pulse, peak ``a0``, width ``sigma``.

    ``duration`` defaults to ``4 * sigma``.  The lifted variant subtracts the
    edge value and rescales so that ``I(0) = I(T) = 0`` with the peak still at
    ``a0``; the unlifted variant is the raw (truncated) Gaussian.
    """
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    duration = 4.0 * sigma if duration is None else duration
    if duration <= 0:
        raise ValueError(f"duration must be positive, got {duration}")
    center = duration / 2.0

    def bell(t):
        return np.exp(-((np.asarray(t, dtype=float) - center) ** 2) / (2.0 * sigma**2))

    def bell_dot(t):
        t = np.asarray(t, dtype=float)
        return -(t - center) / sigma**2 * bell(t)

    if not lifted:
        return Envelope(
            duration,
            lambda t: a0 * bell(t),
            i_dot_fn=lambda t: a0 * bell_dot(t),
            label="gaussian",
        )

    edge = float(np.exp(-(center**2) / (2.0 * sigma**2)))
    scale = a0 / (1.0 - edge)
    return Envelope(
        duration,
        lambda t: scale * (bell(t) - edge),
        i_dot_fn=lambda t: scale * bell_dot(t),
        label="gaussian-lifted",
    )


def make_flat_top_gaussian(a0, sigma, ramp, hold):
    """Lifted Gaussian rise over ``[0, ramp]``, hold at ``a0``, mirrored fall."""
    if ramp < 0 or hold < 0:
        raise ValueError("ramp and hold must be non-negative")
    if ramp == 0 and hold == 0:
        raise ValueError("flat-top envelope requires ramp > 0 or hold > 0")
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    duration = 2.0 * ramp + hold
    edge = float(np.exp(-(ramp**2) / (2.0 * sigma**2))) if ramp > 0 else 0.0
    scale = a0 / (1.0 - edge) if ramp > 0 else a0

    def _rise(u):
        # u measured from the pulse edge toward the plateau
        return scale * (np.exp(-((u - ramp) ** 2) / (2.0 * sigma**2)) - edge)

    def _rise_dot(u):
        return scale * (-(u - ramp) / sigma**2) * np.exp(-((u - ramp) ** 2) / (2.0 * sigma**2))

    def i_fn(t):
        t = np.asarray(t, dtype=float)
        rising = t < ramp
        falling = t > ramp + hold
        out = np.full_like(t, float(a0))
        out = np.where(rising, _rise(t), out)
        out = np.where(falling, _rise(duration - t), out)
        return out

    def i_dot_fn(t):
        t = np.asarray(t, dtype=float)
        rising = t < ramp
        falling = t > ramp + hold
        out = np.zeros_like(t)
        out = np.where(rising, _rise_dot(t), out)
        out = np.where(falling, -_rise_dot(duration - t), out)
        return out

    return Envelope(duration, i_fn, i_dot_fn=i_dot_fn, label="flat-top-gaussian")


def _smoothstep(u):
    """C-infinity monotone step 0 -> 1 on [0, 1]; all derivatives vanish at the ends."""
    u = np.asarray(u, dtype=float)
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        a = np.where(u > 0.0, np.exp(-1.0 / np.maximum(u, 1e-300)), 0.0)
        b = np.where(u < 1.0, np.exp(-1.0 / np.maximum(1.0 - u, 1e-300)), 0.0)
        out = np.where(u <= 0.0, 0.0, np.where(u >= 1.0, 1.0, a / (a + b)))
    return out


def _smoothstep_dot(u):
    u = np.asarray(u, dtype=float)
    inside = (u > 0.0) & (u < 1.0)
    uu = np.clip(u, 1e-12, 1.0 - 1e-12)
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        a = np.exp(-1.0 / uu)
        b = np.exp(-1.0 / (1.0 - uu))
        da = a / uu**2
        db = -b / (1.0 - uu) ** 2
        ds = (da * b - a * db) / (a + b) ** 2
    return np.where(inside, ds, 0.0)


def make_flat_top_smooth(a0, ramp, hold):
    """Flat-top with C-infinity ramps (value and every derivative zero at the edges).

    Suited as the base of the recursive derivative chain, whose corrections
    divide by the envelope near its zeros: the quasi-adiabatic condition
    holds all the way into the edges, unlike for lifted-Gaussian ramps.
    """
    if ramp <= 0 or hold < 0:
        raise ValueError("ramp must be positive and hold non-negative")
    duration = 2.0 * ramp + hold

    def i_fn(t):
        t = np.asarray(t, dtype=float)
        rising = t < ramp
        falling = t > ramp + hold
        out = np.full_like(t, float(a0))
        out = np.where(rising, a0 * _smoothstep(t / ramp), out)
        out = np.where(falling, a0 * _smoothstep((duration - t) / ramp), out)
        return out

    def i_dot_fn(t):
        t = np.asarray(t, dtype=float)
        rising = t < ramp
        falling = t > ramp + hold
        out = np.zeros_like(t)
        out = np.where(rising, a0 * _smoothstep_dot(t / ramp) / ramp, out)
        out = np.where(falling, -a0 * _smoothstep_dot((duration - t) / ramp) / ramp, out)
        return out

    return Envelope(duration, i_fn, i_dot_fn=i_dot_fn, label="flat-top-smooth")


def drag_quadrature(env, delta):
    """Attach the derivative quadrature ``Q(t) = -dI/dt / delta``."""
    if delta == 0:
        raise ZeroDivisionError("drag_quadrature requires a nonzero detuning")
    if env.has_quadrature:
        raise ValueError("input envelope already has a quadrature component")
    return Envelope(
        env.duration,
        env._i_fn,
        q_fn=lambda t: -env.i_derivative(t) / delta,
        i_dot_fn=env._i_dot_fn,
        label=(env.label + "+drag") if env.label else "drag",
    )


def area(env, panels=64):
    """Integral of the in-phase component over the pulse."""
    return float(quad_integrate(lambda t: env.i(t), 0.0, env.duration, panels))


def area_quadrature(env, panels=64):
    return float(quad_integrate(lambda t: env.q(t), 0.0, env.duration, panels))


def recursive_drag_cr(base, d10, d21, d20, samples=8192, phase_jump_tol=np.pi / 2):
    """Derivative-chain drive for the CR pulse from a non-negative base.

    Level 2 takes the principal square root of ``base**2 - 2i*base*dbase/d20``
    (two-photon correction); levels 1 and 0 apply plain derivative
    quadratures with ``d21`` and ``d10``.  The returned complex envelope is
    the final level; intermediate levels are available in ``meta['level2']``
    and ``meta['level1']``.

    A continuity monitor warns when the principal branch jumps by more than
    ``phase_jump_tol`` between adjacent samples.
    """
    for name, det in (("d10", d10), ("d21", d21), ("d20", d20)):
        if det == 0:
            raise ZeroDivisionError(f"detuning {name} must be nonzero")
    if base.has_quadrature:
        raise ValueError("base drive must be purely in-phase")

    t = np.linspace(0.0, base.duration, samples)
    dt = t[1] - t[0]
    w3 = np.asarray(base.i(t), dtype=float)
    scale = float(np.max(np.abs(w3))) or 1.0
    if np.min(w3) < -1e-12 * scale:
        raise ValueError("base drive must be non-negative")
    if abs(w3[0]) > 1e-9 * scale or abs(w3[-1]) > 1e-9 * scale:
        raise ValueError("base drive must vanish at its start and end times")
    w3_dot = np.asarray(base.i_derivative(t), dtype=float)

    radicand = w3.astype(complex) ** 2 - 2.0j * w3 * w3_dot / d20
    w2 = np.where(w3_dot == 0.0, w3.astype(complex), np.sqrt(radicand))

    live = np.abs(w2) > 1e-12 * scale
    if np.count_nonzero(live) > 1:
        angles = np.angle(w2[live])
        jumps = np.abs(np.angle(np.exp(1.0j * np.diff(angles))))
        if np.any(jumps > phase_jump_tol):
            warnings.warn(
                "principal-branch phase jump exceeds tolerance; the base "
                "ramp is not quasi-adiabatic",
                RuntimeWarning,
                stacklevel=2,
            )

    w2_dot = np.gradient(w2, dt)
    w1 = w2 - 1.0j * w2_dot / d21
    w1_dot = np.gradient(w1, dt)
    w_cr = w1 - 1.0j * w1_dot / d10

    meta = {
        "level2": ComplexEnvelope.from_samples(dt, w2, label="cr-chain-level2"),
        "level1": ComplexEnvelope.from_samples(dt, w1, label="cr-chain-level1"),
        "detunings": (d10, d21, d20),
    }
    return ComplexEnvelope.from_samples(dt, w_cr, label="cr-chain", meta=meta)
