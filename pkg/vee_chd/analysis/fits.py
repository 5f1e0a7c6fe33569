"""Rate, frequency, peak and width estimates read off computed curves."""

import logging
from typing import NamedTuple, Optional, Tuple

import numpy as np
from scipy.signal import find_peaks

from vee_chd.errors import ParameterError
from vee_chd.models import CorrelationSeries

logger = logging.getLogger(__name__)

FFT_LENGTH = 2 ** 16
PEAK_FLOOR = 1e-2
DECAY_FLOOR = 1e-14


class DampedOscillation(NamedTuple):
    frequency: float
    decay_rate: float


def _windowed(
    series: CorrelationSeries, window: Optional[Tuple[float, float]]
) -> Tuple[np.ndarray, np.ndarray]:
    tau, excess = series.tau, series.excess()
    if window is not None:
        lo, hi = window
        keep = (tau >= lo) & (tau <= hi)
        tau, excess = tau[keep], excess[keep]
    if tau.size < 5:
        raise ParameterError(f"fit window {window} holds only {tau.size} delays")
    return tau, excess


def _log_slope(times: np.ndarray, magnitudes: np.ndarray) -> float:
    slope, _ = np.polyfit(times, np.log(magnitudes), 1)
    return -float(slope)


def fit_damped_oscillation(
    series: CorrelationSeries, window: Optional[Tuple[float, float]] = None
) -> DampedOscillation:
    """Angular frequency and envelope decay rate of the transient in ``series``.

    The frequency is the largest peak of the zero-padded FFT above the
    resolution of the window; the decay rate comes from a straight-line fit
    of log|excess| at its local maxima.
    """
    tau, excess = _windowed(series, window)
    step = tau[1] - tau[0]
    span = tau[-1] - tau[0]
    spectrum = np.abs(np.fft.rfft(excess - excess.mean(), n=FFT_LENGTH))
    angular = 2.0 * np.pi * np.fft.rfftfreq(FFT_LENGTH, d=step)
    resolved = angular >= 2.0 * np.pi / span
    frequency = float(angular[resolved][np.argmax(spectrum[resolved])])

    magnitude = np.abs(excess)
    peaks, _ = find_peaks(magnitude, height=PEAK_FLOOR * magnitude.max())
    if peaks.size < 2:
        raise ParameterError(f"only {peaks.size} envelope maxima in the fit window")
    decay_rate = _log_slope(tau[peaks], magnitude[peaks])
    logger.debug(
        "oscillation fit: omega=%.4g, rate=%.4g over %d maxima", frequency, decay_rate, peaks.size
    )
    return DampedOscillation(frequency=frequency, decay_rate=decay_rate)


def fit_decay_rate(
    series: CorrelationSeries, window: Optional[Tuple[float, float]] = None
) -> float:
    """Exponential rate of |excess| over the window, by a log-linear fit."""
    tau, excess = _windowed(series, window)
    magnitude = np.abs(excess)
    keep = magnitude > DECAY_FLOOR
    if keep.sum() < 5:
        raise ParameterError("excess is below numerical resolution over the fit window")
    return _log_slope(tau[keep], magnitude[keep])


def peak_location(
    omega: np.ndarray,
    values: np.ndarray,
    lower: Optional[float] = None,
    upper: Optional[float] = None,
) -> float:
    """Abscissa of the maximum of ``values`` in [lower, upper], refined by a parabola."""
    omega = np.asarray(omega, dtype=float)
    values = np.asarray(values, dtype=float)
    mask = np.ones(omega.shape, dtype=bool)
    if lower is not None:
        mask &= omega >= lower
    if upper is not None:
        mask &= omega <= upper
    if not mask.any():
        raise ParameterError(f"no grid points in [{lower}, {upper}]")
    index = int(np.flatnonzero(mask)[np.argmax(values[mask])])
    if index == 0 or index == omega.size - 1:
        return float(omega[index])
    y0, y1, y2 = values[index - 1 : index + 2]
    curvature = y0 - 2.0 * y1 + y2
    if curvature == 0:
        return float(omega[index])
    step = omega[index + 1] - omega[index]
    return float(omega[index] + 0.5 * step * (y0 - y2) / curvature)


def half_width(omega: np.ndarray, values: np.ndarray, center: float = 0.0) -> float:
    """Half width at half maximum of the peak at ``center``, measured towards larger omega."""
    omega = np.asarray(omega, dtype=float)
    values = np.asarray(values, dtype=float)
    start = int(np.argmin(np.abs(omega - center)))
    if values[start] <= 0:
        raise ParameterError(f"no positive peak at omega={center:g}")
    half = 0.5 * values[start]
    below = np.flatnonzero(values[start:] < half)
    if below.size == 0:
        raise ParameterError("spectrum never falls to half its central value on the grid")
    j = start + int(below[0])
    x0, x1 = omega[j - 1], omega[j]
    y0, y1 = values[j - 1], values[j]
    crossing = x0 + (half - y0) * (x1 - x0) / (y1 - y0)
    return float(crossing - omega[start])
