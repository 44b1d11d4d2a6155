"""Reference signal generators.

``make_reference_signal`` builds the family of constant-moment test signals:
in each mode exactly one of the five ellipse-geometry rates (amplitude,
deformation, internal precession, nutation, azimuthal precession) is
nonzero, while the joint instantaneous frequency and bandwidth magnitude
are constant at prescribed targets.  The parameter paths are closed-form
solutions of the moment balance:

    omega = omega_phi + sqrt(1 - lam^2) (omega_theta + omega_alpha cos beta)
    upsilon^2 = (kappa'/kappa)^2 + lam'^2 / (4 (1 - lam^2))
              + lam^2 (omega_theta + omega_alpha cos beta)^2 + (normal term)

mode            varying path                   balance
--------------  -----------------------------  ---------------------------------
amplitude       kappa = kappa0 exp(u t)        omega_phi = wbar
deformation     lam = sin(2 u t + c)           omega_phi = wbar
internal_prec.  theta' = u / lam0              omega_phi = wbar - sqrt(1-lam0^2) theta'
nutation        beta' = u sqrt(2), lam = 0     omega_phi = wbar
azimuth         alpha' = u sqrt(2)/sin(beta0)  omega_phi = wbar - alpha' cos(beta0)
fixed_geometry  none                           omega_phi = wbar, upsilon = 0

``make_composite_seismic_like`` chains such segments with tapered
crossfades and optional seeded noise, mimicking a linearly polarized
arrival followed by a circularly polarized one.  Ground-truth parameter
paths and rates are returned alongside every generated signal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .analytic import AnalyticSignal3, RealSignal3
from .ellipse import EllipseRates, EllipseSeries, ellipse_synthesize

__all__ = [
    "MODES",
    "SynthSpec",
    "SynthResult",
    "SegmentTruth",
    "CompositeResult",
    "make_reference_signal",
    "make_composite_seismic_like",
    "make_smooth_path",
    "make_random_modulated",
    "OMEGA_BAR_DEFAULT",
    "UPSILON_DEFAULT",
]

MODES = (
    "amplitude",
    "internal_precession",
    "deformation",
    "nutation",
    "azimuth",
    "fixed_geometry",
)

OMEGA_BAR_DEFAULT = np.pi * 1e-2
UPSILON_DEFAULT = 2.5 * np.pi * 1e-4

_DESIGNATED_TERM = {
    "amplitude": "term_amplitude",
    "deformation": "term_deformation",
    "internal_precession": "term_precession",
    "nutation": "term_normal",
    "azimuth": "term_normal",
    "fixed_geometry": None,
}

# pole margins keeping beta away from 0/pi and lam away from 1
_BETA_MARGIN = 0.1
_LAM_SIN_LO = 0.05
_LAM_SIN_HI = np.pi / 2.0 - 0.15


@dataclass(frozen=True)
class SynthSpec:
    """Recipe for one reference signal.

    Base-state defaults are the constant-geometry schematic values
    (a=3, b=2, theta=pi/3, beta=pi/4, alpha=pi/6).  Circular modes
    (nutation, azimuth) use only the RMS amplitude of the base state;
    the internal-precession mode replaces the base shape with
    ``lambda_precession``.
    """

    n_samples: int
    mode: str
    omega_bar: float = OMEGA_BAR_DEFAULT
    upsilon: float = UPSILON_DEFAULT
    a0: float = 3.0
    b0: float = 2.0
    theta0: float = np.pi / 3.0
    phi0: float = 0.0
    alpha0: float = np.pi / 6.0
    beta0: float = np.pi / 4.0
    lambda_precession: float = 0.6
    dt: float = 1.0

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        if self.n_samples < 64:
            raise ValueError(f"need at least 64 samples, got {self.n_samples}")
        if not self.omega_bar > 0:
            raise ValueError("omega_bar must be positive")
        if self.upsilon < 0:
            raise ValueError("upsilon must be nonnegative")
        if not (self.a0 >= self.b0 >= 0):
            raise ValueError("need a0 >= b0 >= 0")
        if not 0 < self.lambda_precession < 1:
            raise ValueError("lambda_precession must lie in (0, 1)")

    @property
    def kappa0(self) -> float:
        return float(np.sqrt((self.a0**2 + self.b0**2) / 2.0))


@dataclass(frozen=True)
class SynthResult:
    """Generated signal plus exact ground-truth paths and rates."""

    signal: AnalyticSignal3
    truth: EllipseSeries
    truth_rates: EllipseRates
    designated_term: str | None


def _rates_from_constants(
    n: int,
    dkappa_rel=0.0,
    dlambda=None,
    omega_phi=0.0,
    omega_theta=0.0,
    omega_alpha=0.0,
    omega_beta=0.0,
) -> EllipseRates:
    def arr(v):
        return np.broadcast_to(np.asarray(v, dtype=float), (n,)).copy()

    return EllipseRates(
        dkappa_rel=arr(dkappa_rel),
        dlambda=arr(0.0 if dlambda is None else dlambda),
        omega_phi=arr(omega_phi),
        omega_theta=arr(omega_theta),
        omega_alpha=arr(omega_alpha),
        omega_beta=arr(omega_beta),
        degenerate=np.zeros(n, dtype=bool),
        circular=np.zeros(n, dtype=bool),
    )


def make_reference_signal(spec: SynthSpec) -> SynthResult:
    """Build one reference signal with constant joint moments.

    The returned analytic vector is the pointwise ellipse synthesis of the
    closed-form paths; its ground truth (parameter paths and exact rates)
    comes along for pipeline validation.  Mode/parameter combinations that
    would push ``lam`` out of [0, 1), ``beta`` onto a pole, or the orbital
    frequency to zero are rejected.
    """
    n, u, wbar = spec.n_samples, spec.upsilon, spec.omega_bar
    t = np.arange(n) * spec.dt
    kappa0 = spec.kappa0
    const = dict(theta=spec.theta0, alpha=spec.alpha0, beta=spec.beta0)

    if spec.mode == "fixed_geometry":
        a, b = spec.a0, spec.b0
        series = EllipseSeries.from_paths(
            a=np.full(n, a), b=np.full(n, b),
            phi=spec.phi0 + wbar * t, dt=spec.dt, **const,
        )
        rates = _rates_from_constants(n, omega_phi=wbar)

    elif spec.mode == "amplitude":
        growth = np.exp(u * t)
        series = EllipseSeries.from_paths(
            a=spec.a0 * growth, b=spec.b0 * growth,
            phi=spec.phi0 + wbar * t, dt=spec.dt, **const,
        )
        rates = _rates_from_constants(n, dkappa_rel=u, omega_phi=wbar)

    elif spec.mode == "internal_precession":
        lam = spec.lambda_precession
        omega_theta = u / lam
        omega_phi = wbar - np.sqrt(1.0 - lam**2) * omega_theta
        if omega_phi <= 0:
            raise ValueError(
                "internal precession absorbs the whole mean frequency; "
                "increase omega_bar or lambda_precession"
            )
        series = EllipseSeries.from_paths(
            a=np.full(n, kappa0 * np.sqrt(1.0 + lam)),
            b=np.full(n, kappa0 * np.sqrt(1.0 - lam)),
            theta=spec.theta0 + omega_theta * t,
            phi=spec.phi0 + omega_phi * t,
            alpha=spec.alpha0, beta=spec.beta0, dt=spec.dt,
        )
        rates = _rates_from_constants(
            n, omega_phi=omega_phi, omega_theta=omega_theta
        )

    elif spec.mode == "deformation":
        sweep = 2.0 * u * t[-1]
        window = _LAM_SIN_HI - _LAM_SIN_LO
        if sweep >= window:
            raise ValueError(
                "deformation sweep would drive the linearity out of (0, 1); "
                "reduce upsilon or n_samples"
            )
        c = _LAM_SIN_LO + 0.5 * (window - sweep)
        lam = np.sin(2.0 * u * t + c)
        series = EllipseSeries.from_paths(
            a=kappa0 * np.sqrt(1.0 + lam), b=kappa0 * np.sqrt(1.0 - lam),
            phi=spec.phi0 + wbar * t, dt=spec.dt, **const,
        )
        rates = _rates_from_constants(
            n, dlambda=2.0 * u * np.cos(2.0 * u * t + c), omega_phi=wbar
        )

    elif spec.mode == "nutation":
        omega_beta = np.sqrt(2.0) * u
        beta = spec.beta0 + omega_beta * t
        if beta[0] < _BETA_MARGIN or beta[-1] > np.pi - _BETA_MARGIN:
            raise ValueError(
                "nutation sweep reaches a beta pole; adjust beta0 or upsilon"
            )
        series = EllipseSeries.from_paths(
            a=np.full(n, kappa0), b=np.full(n, kappa0),
            theta=spec.theta0, phi=spec.phi0 + wbar * t,
            alpha=spec.alpha0, beta=beta, dt=spec.dt,
        )
        rates = _rates_from_constants(n, omega_phi=wbar, omega_beta=omega_beta)

    elif spec.mode == "azimuth":
        b0 = spec.beta0
        if min(abs(b0), abs(b0 - np.pi / 2.0), abs(b0 - np.pi)) < _BETA_MARGIN:
            raise ValueError("azimuth mode needs beta0 away from 0, pi/2, pi")
        omega_alpha = np.sqrt(2.0) * u / np.sin(b0)
        omega_phi = wbar - omega_alpha * np.cos(b0)
        if omega_phi <= 0:
            raise ValueError(
                "external precession absorbs the whole mean frequency; "
                "increase omega_bar or move beta0 toward pi/2"
            )
        series = EllipseSeries.from_paths(
            a=np.full(n, kappa0), b=np.full(n, kappa0),
            theta=spec.theta0, phi=spec.phi0 + omega_phi * t,
            alpha=spec.alpha0 + omega_alpha * t, beta=b0, dt=spec.dt,
        )
        rates = _rates_from_constants(
            n, omega_phi=omega_phi, omega_alpha=omega_alpha
        )

    else:  # pragma: no cover - guarded in SynthSpec
        raise ValueError(spec.mode)

    return SynthResult(
        signal=ellipse_synthesize(series),
        truth=series,
        truth_rates=rates,
        designated_term=_DESIGNATED_TERM[spec.mode],
    )


@dataclass(frozen=True)
class SegmentTruth:
    """Where a component segment landed in the composite record."""

    start: int
    stop: int
    interior: slice
    spec: SynthSpec
    truth: EllipseSeries
    n_hat_nominal: np.ndarray


@dataclass(frozen=True)
class CompositeResult:
    signal: RealSignal3
    segments: tuple[SegmentTruth, ...]
    noise_sigma: float


def make_composite_seismic_like(
    segments: Sequence[SynthSpec],
    snr_db: float | None = None,
    seed: int = 0,
    crossfade: int = 32,
) -> CompositeResult:
    """Concatenate reference segments with tapered overlaps plus noise.

    Consecutive segments overlap by ``crossfade`` samples blended with
    raised-cosine ramps.  If ``snr_db`` is given, white Gaussian noise is
    added with total power ``10**(-snr_db / 10)`` times the mean signal
    power (seeded, reproducible).  Each segment reports its sample range
    in the composite and an ``interior`` slice clear of the crossfades.
    """
    if not segments:
        raise ValueError("need at least one segment")
    dt = segments[0].dt
    if any(s.dt != dt for s in segments):
        raise ValueError("all segments must share the same dt")
    fade = int(crossfade)
    if fade < 0 or any(s.n_samples < 2 * fade + 8 for s in segments):
        raise ValueError("segments too short for the requested crossfade")

    results = [make_reference_signal(s) for s in segments]
    total = sum(s.n_samples for s in segments) - fade * (len(segments) - 1)
    out = np.zeros((total, 3))
    truths: list[SegmentTruth] = []
    offset = 0
    ramp = np.sin(0.5 * np.pi * (np.arange(fade) + 1) / (fade + 1)) ** 2
    for i, (spec, res) in enumerate(zip(segments, results)):
        chunk = res.signal.samples.real.copy()
        if fade and i > 0:
            chunk[:fade] *= ramp[:, None]
        if fade and i < len(segments) - 1:
            chunk[-fade:] *= ramp[::-1, None]
        out[offset:offset + spec.n_samples] += chunk
        lo = offset + (fade if i > 0 else 0)
        hi = offset + spec.n_samples - (fade if i < len(segments) - 1 else 0)
        n_hat = np.array(
            [
                np.sin(spec.alpha0) * np.sin(spec.beta0),
                -np.cos(spec.alpha0) * np.sin(spec.beta0),
                np.cos(spec.beta0),
            ]
        )
        truths.append(
            SegmentTruth(
                start=offset,
                stop=offset + spec.n_samples,
                interior=slice(lo, hi),
                spec=spec,
                truth=res.truth,
                n_hat_nominal=n_hat,
            )
        )
        offset += spec.n_samples - fade

    sigma = 0.0
    if snr_db is not None:
        p_signal = float(np.mean(np.sum(out**2, axis=1)))
        sigma = float(np.sqrt(p_signal * 10.0 ** (-snr_db / 10.0) / 3.0))
        out = out + np.random.default_rng(seed).normal(0.0, sigma, out.shape)
    return CompositeResult(
        signal=RealSignal3(out, dt=dt), segments=tuple(truths), noise_sigma=sigma
    )


def make_smooth_path(
    n_samples: int, duration: float, carrier: float = 0.025
) -> tuple[EllipseSeries, EllipseRates]:
    """Deterministic richly modulated path with exact closed-form rates.

    Every ellipse parameter varies smoothly (a few sinusoidal cycles over
    the record), with the linearity kept inside [0.3, 0.8] and the zenith
    angle away from its poles.  Intended for discretization-convergence
    studies: the same physical path can be sampled at any ``n_samples``
    for a given ``duration``.  ``carrier`` is the orbital rate in radians
    per time unit; the slow default keeps the carrier-induced derivative
    discretization error well below the geometry-rate scale even at
    modest ``n_samples``.
    """
    dt = duration / n_samples
    t = np.arange(n_samples) * dt
    base = 2.0 * np.pi / duration

    def trig(amp, cycles, phase):
        w = cycles * base
        return amp * np.sin(w * t + phase), amp * w * np.cos(w * t + phase)

    lk, dlk = trig(0.20, 4.0, 0.3)          # log-amplitude
    lam, dlam = trig(0.25, 5.0, 1.1)
    th, dth = trig(1.20, 4.0, 0.5)
    be, dbe = trig(0.45, 2.0, 2.0)
    al, dal = trig(1.00, 3.5, 4.0)
    ph, dph = trig(0.50, 6.0, 2.5)

    kappa = np.exp(lk)
    lam = 0.55 + lam
    theta = np.pi / 6.0 + th
    beta = np.pi / 4.0 + be
    alpha = np.pi / 6.0 + al
    phi = carrier * t + ph

    series = EllipseSeries.from_paths(
        a=kappa * np.sqrt(1.0 + lam),
        b=kappa * np.sqrt(1.0 - lam),
        theta=theta, phi=phi, alpha=alpha, beta=beta, dt=dt,
    )
    rates = EllipseRates(
        dkappa_rel=dlk, dlambda=dlam,
        omega_phi=carrier + dph, omega_theta=dth,
        omega_alpha=dal, omega_beta=dbe,
        degenerate=np.zeros(n_samples, dtype=bool),
        circular=np.zeros(n_samples, dtype=bool),
    )
    return series, rates


def make_random_modulated(n_samples: int, seed: int, dt: float = 1.0) -> AnalyticSignal3:
    """Seeded random smoothly modulated signal for statistical tests.

    A Gaussian envelope concentrates the energy away from the record ends
    (so finite-record spectral leakage is negligible); all ellipse
    parameters follow random low-order trigonometric paths with the
    linearity in [0.2, 0.7] and the zenith angle clear of its poles.
    """
    rng = np.random.default_rng(seed)
    t = np.arange(n_samples) * dt
    tau = (np.arange(n_samples) + 0.5) / n_samples

    def rough(amp: float, max_cycles: int = 4) -> np.ndarray:
        out = np.zeros(n_samples)
        for c in range(1, max_cycles + 1):
            out += rng.uniform(-1.0, 1.0) * np.sin(
                2.0 * np.pi * c * tau + rng.uniform(0.0, 2.0 * np.pi)
            )
        return amp * out / max_cycles

    envelope = np.exp(-0.5 * ((tau - 0.5) / 0.12) ** 2)
    kappa = envelope * np.exp(rough(0.15))
    lam = 0.45 + np.clip(rough(0.4), -0.25, 0.25)
    theta = rng.uniform(-0.5, 0.5) + rough(0.5)
    beta = np.pi / 4.0 + np.clip(rough(0.5), -0.35, 0.35)
    alpha = rng.uniform(-np.pi / 2, np.pi / 2) + rough(0.6)
    # carrier slow enough that the finite-difference phase-rate bias
    # (omega*dt)^4/30 stays orders of magnitude below 1e-3 relative
    carrier = rng.uniform(0.12, 0.18) / dt
    phi = carrier * t + rough(3.0)

    series = EllipseSeries.from_paths(
        a=kappa * np.sqrt(1.0 + lam),
        b=kappa * np.sqrt(1.0 - lam),
        theta=theta, phi=phi, alpha=alpha, beta=beta, dt=dt,
    )
    return ellipse_synthesize(series)
