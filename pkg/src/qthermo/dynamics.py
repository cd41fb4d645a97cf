"""Channel models and trajectory generation.

Three qubit channels: generalized amplitude damping (GAD) against a thermal
reservoir, Markovian phase damping with a time-dependent field, and
non-Markovian phase damping with an Ohmic-family decoherence rate.

Time units are native to each channel: 1/omega0 for GAD, 1/omega for the
Markovian drive, and 1/omega_c (dimensionless tau) for the non-Markovian
channel, where omega0 is then expressed in units of omega_c.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field

import numpy as np

from . import opcore
from .errors import NumericsError
from .numerics import adaptive_simpson, gamma_function
from .opcore import (SIGMA_Z, check_density, check_hermitian, eig_hermitian,
                     field_to_hamiltonian, gibbs_state)
from .thermo import Environment

GAD = "gad"
PD_MARKOV = "pd_markov"
PD_NONMARKOV = "pd_nonmarkov"

TRACE_DRIFT_TOL = 1e-10
POSITIVITY_ABORT = 1e-8


@dataclass(frozen=True)
class ChannelSpec:
    """Parameters of one dynamical model.

    GAD uses omega0, gamma0, Te (k_B Te in energy units); Markovian PD uses
    omega0, gamma, omega; non-Markovian PD uses omega0 (in omega_c units),
    s, kappa.
    """

    kind: str
    omega0: float = 1.0
    gamma0: float = 1.0      # GAD bare rate
    Te: float = math.inf     # GAD environment temperature (k_B Te)
    gamma: float = 1.0       # Markovian PD dephasing rate
    omega: float = 1.0       # Markovian PD drive frequency
    s: float = 1.0           # ohmicity parameter
    omega_c: float = 1.0     # reservoir cutoff frequency
    kappa: float = 2.0       # dephasing exponent factor

    def __post_init__(self):
        if self.kind not in (GAD, PD_MARKOV, PD_NONMARKOV):
            raise ValueError(f"unknown channel kind {self.kind!r}")
        for name in ("omega0", "gamma0", "gamma", "omega", "omega_c", "kappa"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be non-negative")
        if not (self.Te > 0.0):
            raise ValueError("Te must be positive (or infinite)")
        if self.kind == PD_NONMARKOV and self.s <= 0.0:
            raise ValueError("ohmicity parameter s must be positive")

    @property
    def beta_e(self) -> float:
        return 0.0 if math.isinf(self.Te) else 1.0 / self.Te

    @property
    def planck_n(self) -> float:
        """Planck occupation at frequency omega0."""
        if math.isinf(self.Te):
            raise ValueError("Planck occupation undefined at infinite Te")
        return 1.0 / math.expm1(self.beta_e * self.omega0)

    @property
    def gamma_minus(self) -> float:
        return self.gamma0 * (self.planck_n + 1.0)

    @property
    def gamma_plus(self) -> float:
        return self.gamma0 * self.planck_n


def gad_spec(omega0=1.0, gamma0=1.0, Te=10.0) -> ChannelSpec:
    return ChannelSpec(kind=GAD, omega0=omega0, gamma0=gamma0, Te=Te)


def pd_markov_spec(omega0=1.0, gamma=1.0, omega=1.0) -> ChannelSpec:
    return ChannelSpec(kind=PD_MARKOV, omega0=omega0, gamma=gamma, omega=omega)


def pd_nonmarkov_spec(omega0=1.0, s=1.0, kappa=2.0, omega_c=1.0) -> ChannelSpec:
    return ChannelSpec(kind=PD_NONMARKOV, omega0=omega0, s=s, kappa=kappa,
                       omega_c=omega_c)


@dataclass
class Trajectory:
    """Time grid with qubit states and the instantaneous field vectors."""

    times: np.ndarray
    states: list
    fields: np.ndarray
    flags: list = dataclass_field(default_factory=list)

    def __post_init__(self):
        n = len(self.times)
        if not (len(self.states) == n and len(self.fields) == n):
            raise ValueError("times, states, and fields must have equal length")

    def bloch(self) -> np.ndarray:
        return np.array([opcore.density_to_bloch(s) for s in self.states])


def default_field(spec: ChannelSpec):
    """The local field h(t) each channel model assumes."""
    if spec.kind == GAD:
        h = np.array([0.0, 0.0, -0.5 * spec.omega0])
        return lambda t: h
    if spec.kind == PD_MARKOV:
        w0, w = spec.omega0, spec.omega
        return lambda t: np.array([0.0, 0.0, -0.5 * w0 * (1.0 - math.cos(w * t))])
    h = np.array([0.0, 0.0, -spec.omega0])
    return lambda t: h


def _dissipator(L: np.ndarray, rho: np.ndarray) -> np.ndarray:
    LdL = L.conj().T @ L
    return L @ rho @ L.conj().T - 0.5 * (LdL @ rho + rho @ LdL)


def lindblad_rhs(rho, H, spec: ChannelSpec, t: float = 0.0) -> np.ndarray:
    """Right-hand side of the master equation for one channel.

    GAD: emission/absorption ladder operators built from the eigenbasis of
    H with the 1/2-normalized convention, so the fixed point is the Gibbs
    state at Te.  PD kinds: sigma_z dephasing at the constant or the
    time-dependent Ohmic rate.
    """
    rho = np.asarray(rho, dtype=complex)
    H = np.asarray(H, dtype=complex)
    if rho.shape != (2, 2):
        raise ValueError("channel dynamics supports qubits only")
    rhs = -1j * (H @ rho - rho @ H)
    if spec.kind == GAD:
        levels = eig_hermitian(H, order="ascending")
        ground = levels.vectors[:, 0]
        excited = levels.vectors[:, 1]
        lower = np.outer(ground, excited.conj())
        rhs = rhs + spec.gamma_minus * _dissipator(lower, rho)
        rhs = rhs + spec.gamma_plus * _dissipator(lower.conj().T, rho)
    elif spec.kind == PD_MARKOV:
        rhs = rhs + spec.gamma * (SIGMA_Z @ rho @ SIGMA_Z - rho)
    else:
        rate = 0.5 * spec.kappa * gamma_ohmic(t, spec.s)
        rhs = rhs + rate * (SIGMA_Z @ rho @ SIGMA_Z - rho)
    return rhs


def integrate(spec: ChannelSpec, field_fn, rho0, t_max: float,
              dt: float = 1e-3) -> Trajectory:
    """Fixed-step RK4 integration of the channel master equation.

    field_fn: time -> field vector (None picks the channel default).  The
    grid is {0, dt, ..., t_max}; trace drift beyond 1e-10 per step or
    positivity loss beyond 1e-8 aborts with a diagnostic.
    """
    if dt <= 0.0 or t_max < dt:
        raise ValueError("need dt > 0 and t_max >= dt")
    if field_fn is None:
        field_fn = default_field(spec)
    rho = check_density(rho0).astype(complex)
    n_steps = int(round(t_max / dt))
    times = np.arange(n_steps + 1) * dt
    fields = np.array([np.asarray(field_fn(t), dtype=float) for t in times])
    hams = [field_to_hamiltonian(f) for f in fields]
    states = [rho.copy()]
    flags: list = []

    def rhs(t, y):
        return lindblad_rhs(y, field_to_hamiltonian(field_fn(t)), spec, t)

    for i in range(n_steps):
        t = times[i]
        k1 = lindblad_rhs(rho, hams[i], spec, t)
        k2 = rhs(t + 0.5 * dt, rho + 0.5 * dt * k1)
        k3 = rhs(t + 0.5 * dt, rho + 0.5 * dt * k2)
        k4 = lindblad_rhs(rho + dt * k3, hams[i + 1], spec, t + dt)
        rho = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        rho = 0.5 * (rho + rho.conj().T)
        tr = float(np.trace(rho).real)
        if abs(tr - 1.0) > TRACE_DRIFT_TOL:
            raise NumericsError(
                f"trace drift {tr - 1.0:.3e} at t = {t + dt:.6g}")
        r_vec = opcore.density_to_bloch(rho)
        r_norm = float(np.linalg.norm(r_vec))
        if r_norm > 1.0 + 2.0 * POSITIVITY_ABORT:
            raise NumericsError(
                f"positivity violation |r| = {r_norm} at t = {t + dt:.6g}; "
                "reduce the step size")
        if r_norm > 1.0:
            rho = opcore.bloch_to_density(r_vec / r_norm)
            flags.append(f"positivity-clipped at t = {t + dt:.6g}")
        states.append(rho.copy())
    return Trajectory(times=times, states=states, fields=fields, flags=flags)


def pd_markov_bloch(t: float, r0, spec: ChannelSpec) -> np.ndarray:
    """Closed-form Bloch vector of the Markovian PD channel with the
    cosine-ramp field."""
    r0 = np.asarray(r0, dtype=float)
    alpha = spec.omega0 * (spec.omega * t - math.sin(spec.omega * t)) / spec.omega
    decay = math.exp(-2.0 * t * spec.gamma)
    ca, sa = math.cos(alpha), math.sin(alpha)
    return np.array([
        decay * (r0[0] * ca - r0[1] * sa),
        decay * (r0[1] * ca + r0[0] * sa),
        r0[2],
    ])


def gamma_ohmic(tau, s: float):
    """Ohmic-family dephasing rate [1 + tau^2]^(-s/2) Gamma(s) sin(s arctan tau).

    tau is dimensionless (cutoff-frequency units); accepts scalars or arrays.
    """
    if s <= 0.0:
        raise ValueError("ohmicity parameter s must be positive")
    tau = np.asarray(tau, dtype=float)
    g = gamma_function(s)
    out = (1.0 + tau ** 2) ** (-0.5 * s) * g * np.sin(s * np.arctan(tau))
    return float(out) if out.ndim == 0 else out


def dephasing_factor(tau: float, s: float, kappa: float = 2.0) -> float:
    """Transverse scaling exp(-kappa * integral_0^tau gamma(tau', s) dtau')."""
    if tau < 0.0:
        raise ValueError("tau must be non-negative")
    integral = adaptive_simpson(lambda x: gamma_ohmic(x, s), 0.0, tau,
                                tol=1e-10)
    return math.exp(-kappa * integral)


def dephasing_factor_grid(taus, s: float, kappa: float = 2.0) -> np.ndarray:
    """Dephasing factor on a monotone tau grid via cumulative quadrature."""
    taus = np.asarray(taus, dtype=float)
    if np.any(np.diff(taus) <= 0.0) or taus[0] < 0.0:
        raise ValueError("tau grid must be non-negative and strictly increasing")
    f = lambda x: gamma_ohmic(x, s)
    cum = np.empty_like(taus)
    cum[0] = adaptive_simpson(f, 0.0, taus[0], tol=1e-12)
    for i in range(1, taus.shape[0]):
        cum[i] = cum[i - 1] + adaptive_simpson(f, taus[i - 1], taus[i],
                                               tol=1e-12)
    return np.exp(-kappa * cum)


def pd_nonmarkov_bloch(tau: float, r0, s: float,
                       kappa: float = 2.0) -> np.ndarray:
    """Closed-form Bloch vector of the non-Markovian PD channel."""
    r0 = np.asarray(r0, dtype=float)
    g = dephasing_factor(tau, s, kappa)
    return np.array([r0[0] * g, r0[1] * g, r0[2]])


def pd_markov_trajectory(spec: ChannelSpec, r0, t_max: float,
                         dt: float = 1e-3) -> Trajectory:
    """Trajectory from the analytic Markovian PD solution."""
    n_steps = int(round(t_max / dt))
    times = np.arange(n_steps + 1) * dt
    field_fn = default_field(spec)
    fields = np.array([field_fn(t) for t in times])
    states = [opcore.bloch_to_density(pd_markov_bloch(t, r0, spec))
              for t in times]
    return Trajectory(times=times, states=states, fields=fields)


def pd_nonmarkov_trajectory(spec: ChannelSpec, r0, tau_max: float,
                            dt: float = 1e-2) -> Trajectory:
    """Trajectory from the analytic non-Markovian PD solution."""
    r0 = np.asarray(r0, dtype=float)
    n_steps = int(round(tau_max / dt))
    times = np.arange(n_steps + 1) * dt
    gammas = np.empty_like(times)
    gammas[0] = 1.0
    gammas[1:] = dephasing_factor_grid(times[1:], spec.s, spec.kappa)
    field_fn = default_field(spec)
    fields = np.array([field_fn(t) for t in times])
    states = [opcore.bloch_to_density([r0[0] * g, r0[1] * g, r0[2]])
              for g in gammas]
    return Trajectory(times=times, states=states, fields=fields)


def fixed_point(spec: ChannelSpec, H=None) -> np.ndarray:
    """Stationary state of the channel: Gibbs at Te for GAD, I/2 for PD."""
    if spec.kind == GAD:
        if H is None:
            H = field_to_hamiltonian(default_field(spec)(0.0))
        return gibbs_state(check_hermitian(H), spec.beta_e)
    return np.eye(2, dtype=complex) / 2.0


def environment(spec: ChannelSpec, H=None) -> Environment:
    """Environment record for the entropy-production ledger."""
    if spec.kind == GAD:
        return Environment(T_e=spec.Te, rho_e=fixed_point(spec, H))
    return Environment(T_e=math.inf, rho_e=fixed_point(spec))
