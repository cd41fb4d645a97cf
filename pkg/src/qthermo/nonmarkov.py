"""Heat-based non-Markovianity quantification for the Ohmic dephasing qubit.

Detects the time intervals where the decoherence rate turns negative,
evaluates the heat recovered over them for the three differential heat
formulations, and maximizes over initial states both with the analytic
xy-plane pure-state candidate and with a brute grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dynamics import dephasing_factor, gamma_ohmic
from .numerics import gamma_function
from .thermo import Formulation

ROOT_TOL = 1e-13
SCAN_POINTS = 10_000
DEFAULT_TAU_MAX = 50.0
DEFAULT_GRID = (200, 200)

FLAG_HORIZON_TRUNCATED = "horizon-truncated"
FLAG_ARGMAX_DISCREPANCY = "grid-exceeds-analytic-candidate"


@dataclass(frozen=True)
class SignInterval:
    """One maximal interval [a, b] with non-positive decoherence rate;
    `clipped` marks an interval cut off at the scan horizon."""

    a: float
    b: float
    clipped: bool = False


@dataclass(frozen=True)
class NMReport:
    """Non-Markovianity measures at one ohmicity value."""

    s: float
    intervals: tuple
    N_Q: float          # ergotropy-based measure
    N_ent: float        # entropy-based measure
    N_std: float        # standard measure (structurally zero here)
    argmax_state: tuple  # (r0, theta0) maximizing the requested formulation
    witness_nonmonotonic_T: bool | None = None
    truncation_error: float = 0.0
    flags: tuple = ()


@dataclass(frozen=True)
class WitnessReport:
    """Outcome of the temperature-based non-Markovianity witness."""

    nonmonotonic: bool
    violation_intervals: tuple
    t_conv_detects: bool
    t_ent_detects: bool
    excluded_samples: int = 0


def _bisect_root(f, lo: float, hi: float, tol: float = ROOT_TOL) -> float:
    flo = f(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if hi - lo < tol:
            return mid
        if (flo <= 0.0) == (fm <= 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def negative_rate_intervals(s: float, tau_max: float = DEFAULT_TAU_MAX
                            ) -> list[SignInterval]:
    """Maximal intervals of non-positive decoherence rate on (0, tau_max].

    Endpoints are sign-change roots located by bisection on brackets from a
    dense scan; an interval still open at tau_max is clipped and marked.
    """
    if s <= 0.0:
        raise ValueError("ohmicity parameter s must be positive")
    if tau_max <= 0.0:
        raise ValueError("tau_max must be positive")
    taus = np.linspace(0.0, tau_max, SCAN_POINTS)
    vals = gamma_ohmic(taus, s)
    f = lambda x: gamma_ohmic(x, s)
    intervals: list[SignInterval] = []
    open_a: float | None = None
    # skip tau = 0 where the rate vanishes identically
    for i in range(1, SCAN_POINTS - 1):
        if vals[i] > 0.0 and vals[i + 1] <= 0.0 and open_a is None:
            open_a = _bisect_root(f, taus[i], taus[i + 1])
        elif vals[i] <= 0.0 and vals[i + 1] > 0.0 and open_a is not None:
            b = _bisect_root(f, taus[i], taus[i + 1])
            intervals.append(SignInterval(a=open_a, b=b))
            open_a = None
    if open_a is not None:
        intervals.append(SignInterval(a=open_a, b=tau_max, clipped=True))
    return intervals


def heat_Q_closed(tau: float, r0: float, theta0: float, s: float,
                  kappa: float = 2.0) -> float:
    """Accumulated ergotropy-based heat of the non-Markovian PD qubit,
    in units of the qubit frequency."""
    if not 0.0 <= r0 <= 1.0:
        raise ValueError("r0 must lie in [0, 1]")
    g = dephasing_factor(tau, s, kappa)
    return -r0 * (math.sqrt(math.cos(theta0) ** 2
                            + g * g * math.sin(theta0) ** 2) - 1.0)


def _radius(r0, theta0, g):
    """Bloch radius r(tau) on the (r0, theta0) grid for dephasing factor g."""
    return r0 * np.sqrt(np.cos(theta0) ** 2 + g * g * np.sin(theta0) ** 2)


def _interval_gains(f: Formulation, r0, theta0, g_a, g_b):
    """Per-interval recovered heat |Q(a) - Q(b)| for one formulation,
    vectorized over an (r0, theta0) grid."""
    if f is Formulation.STANDARD:
        # standard heat -h.dr accumulates nothing for z-constant dephasing
        return np.zeros(np.broadcast(r0, theta0).shape)
    if f is Formulation.ERGOTROPY_BASED:
        return np.abs(_radius(r0, theta0, g_a) - _radius(r0, theta0, g_b))
    # entropy-based: (U/r) dr with U = omega0 * z0 accumulates z0 ln r
    z0 = r0 * np.cos(theta0)
    ra = _radius(r0, theta0, g_a)
    rb = _radius(r0, theta0, g_b)
    with np.errstate(divide="ignore", invalid="ignore"):
        gains = np.abs(z0 * np.log(ra / rb))
    return np.where(r0 > 0.0, gains, 0.0)


def _truncation_bound(s: float, kappa: float, tau_max: float,
                      g_horizon: float) -> float:
    """Bound on the dephasing-factor tail beyond tau_max from the
    tau^(-s) envelope of the rate."""
    if s <= 1.0:
        return math.inf
    tail = gamma_function(s) * tau_max ** (1.0 - s) / (s - 1.0)
    return g_horizon * abs(math.expm1(kappa * tail))


def nm_measure(f: Formulation, s: float, tau_max: float = DEFAULT_TAU_MAX,
               kappa: float = 2.0, grid: tuple = DEFAULT_GRID) -> NMReport:
    """Heat-based non-Markovianity measure for one formulation.

    Maximizes the summed per-interval heat recovery over initial states two
    ways: the analytic xy-plane pure-state candidate and an (r0, theta0)
    grid.  For the ergotropy-based formulation a grid value exceeding the
    analytic candidate beyond grid resolution is flagged, not silently
    preferred.
    """
    f = Formulation(f)
    if f is Formulation.OPERATIONAL:
        raise ValueError("the operational formulation has no differential "
                         "heat to accumulate over rate-sign intervals")
    intervals = tuple(negative_rate_intervals(s, tau_max))
    flags: list[str] = []
    if not intervals:
        return NMReport(s=s, intervals=intervals, N_Q=0.0, N_ent=0.0,
                        N_std=0.0, argmax_state=(0.0, 0.0), flags=())

    g_pairs = [(dephasing_factor(iv.a, s, kappa),
                dephasing_factor(iv.b, s, kappa)) for iv in intervals]
    truncation = 0.0
    if any(iv.clipped for iv in intervals):
        flags.append(FLAG_HORIZON_TRUNCATED)
        truncation = _truncation_bound(s, kappa, tau_max, g_pairs[-1][1])

    r0g, t0g = np.meshgrid(np.linspace(0.0, 1.0, grid[0]),
                           np.linspace(0.0, math.pi, grid[1]),
                           indexing="ij")

    def total(which: Formulation, r0, theta0):
        acc = 0.0
        for g_a, g_b in g_pairs:
            acc = acc + _interval_gains(which, r0, theta0, g_a, g_b)
        return acc

    results = {}
    for which in (Formulation.ERGOTROPY_BASED, Formulation.ENTROPY_BASED,
                  Formulation.STANDARD):
        grid_vals = total(which, r0g, t0g)
        idx = np.unravel_index(int(np.argmax(grid_vals)), grid_vals.shape)
        grid_max = float(grid_vals[idx])
        grid_arg = (float(r0g[idx]), float(t0g[idx]))
        cand = float(total(which, 1.0, 0.5 * math.pi))
        if which is Formulation.ERGOTROPY_BASED:
            if grid_max > cand + 1e-6:
                flags.append(FLAG_ARGMAX_DISCREPANCY)
            value = max(grid_max, cand)
            arg = (1.0, 0.5 * math.pi) if cand >= grid_max else grid_arg
        else:
            value = max(grid_max, cand)
            arg = grid_arg if grid_max >= cand else (1.0, 0.5 * math.pi)
        results[which] = (value, arg)

    return NMReport(
        s=s, intervals=intervals,
        N_Q=results[Formulation.ERGOTROPY_BASED][0],
        N_ent=results[Formulation.ENTROPY_BASED][0],
        N_std=results[Formulation.STANDARD][0],
        argmax_state=results[f][1],
        truncation_error=truncation,
        flags=tuple(flags),
    )


def _monotonic_violations(times, values, rel_tol: float = 1e-9):
    """Reversal intervals of a scalar series against its dominant direction."""
    diffs = np.diff(values)
    scale = max(float(np.max(np.abs(values))), 1e-300)
    threshold = rel_tol * scale
    direction = 1.0 if float(np.sum(diffs)) >= 0.0 else -1.0
    against = direction * diffs < -threshold
    intervals = []
    start = None
    for i, bad in enumerate(against):
        if bad and start is None:
            start = i
        elif not bad and start is not None:
            intervals.append((float(times[start]), float(times[i])))
            start = None
    if start is not None:
        intervals.append((float(times[start]), float(times[-1])))
    return intervals


def temperature_witness(traj, field_fn=None) -> WitnessReport:
    """Non-Markovianity witness from the time series of the ergotropy-based
    temperature; the alternative temperatures are evaluated on the same data
    to confirm they stay silent for xy-plane dephasing."""
    from .thermo import ledger
    samples = ledger(traj, field_fn=field_fn, env=None, clausius=False)
    times = np.array([s.t for s in samples])
    t_ergo = np.array([s.T_ergo for s in samples])
    t_conv = np.array([s.T_conv for s in samples])
    t_ent = np.array([s.T_ent for s in samples])
    defined = np.isfinite(t_ergo)
    excluded = int(np.sum(~defined))
    violations = _monotonic_violations(times[defined], t_ergo[defined])

    def detects(series):
        ok = np.isfinite(series)
        if int(np.sum(ok)) < 3:
            return False
        vals = series[ok]
        if float(np.max(vals) - np.min(vals)) <= 1e-9 * max(
                1.0, float(np.max(np.abs(vals)))):
            return False
        return bool(_monotonic_violations(times[ok], vals))

    return WitnessReport(
        nonmonotonic=bool(violations),
        violation_intervals=tuple(violations),
        t_conv_detects=detects(t_conv),
        t_ent_detects=detects(t_ent),
        excluded_samples=excluded,
    )
