"""Ergotropy, passive states, and the three temperature functionals.

General finite dimension throughout, with qubit closed forms used as fast
paths and cross-checks.  Temperatures are in units of (energy unit)/k_B
with k_B = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import opcore
from .opcore import (check_density, check_hermitian, covariance,
                     eig_hermitian)

PURE_LIMIT = 1e-12
MIXED_LIMIT = 1e-12

# flag labels attached to temperature values
FLAG_PURE_LIMIT = "pure-limit"
FLAG_MAXIMALLY_MIXED = "maximally-mixed"
FLAG_DIVERGENT = "nonanalytic/divergent"
FLAG_RANK_DEFICIENT = "rank-deficient"
FLAG_NO_ENERGY_SCALE = "no-energy-scale"
FLAG_NEAR_PURE = "near-pure"


@dataclass(frozen=True)
class PassiveDecomposition:
    """Passive state of rho with respect to H and the associated energies."""

    passive_state: np.ndarray
    passive_energy: float
    ergotropy: float
    internal_energy: float


@dataclass(frozen=True)
class TemperatureTriple:
    """Ergotropy-based, conventional, and entropy-based temperatures.

    Undefined or divergent entries are encoded as math.inf / math.nan with
    an entry in `flags` keyed by the field name.
    """

    t_ergo: float
    t_conv: float
    t_ent: float
    flags: dict = field(default_factory=dict)


def _decompose(rho, H):
    rho = check_density(rho)
    H = check_hermitian(H, name="Hamiltonian")
    if rho.shape != H.shape:
        raise ValueError("dimension mismatch between state and Hamiltonian")
    pops = eig_hermitian(rho, order="descending")
    levels = eig_hermitian(H, order="ascending")
    return rho, H, pops, levels


def passive_state(rho, H) -> PassiveDecomposition:
    """Populations of rho sorted descending over the energies of H ascending."""
    rho, H, pops, levels = _decompose(rho, H)
    r = np.clip(pops.values, 0.0, None)
    r = r / r.sum()
    rho_pi = (levels.vectors * r) @ levels.vectors.conj().T
    u = float(np.trace(rho @ H).real)
    u_pi = float(np.dot(r, levels.values))
    return PassiveDecomposition(
        passive_state=rho_pi,
        passive_energy=u_pi,
        ergotropy=u - u_pi,
        internal_energy=u,
    )


def ergotropy(rho, H) -> float:
    """Maximum energy extractable by a cyclic unitary: U(rho) - U(rho_pi)."""
    return passive_state(rho, H).ergotropy


def entropy_operator(rho) -> np.ndarray:
    """-ln rho on clipped eigenvalues (k_B = 1)."""
    spec = eig_hermitian(rho)
    logs = -np.log(np.clip(spec.values, opcore.LOG_CLIP, None))
    return (spec.vectors * logs) @ spec.vectors.conj().T


def passive_entropy_operator(rho, H) -> np.ndarray:
    """-ln rho_pi for the passive state of rho with respect to H."""
    return entropy_operator(passive_state(rho, H).passive_state)


def _population_spread(rho) -> float:
    vals = eig_hermitian(rho).values
    return float(vals[-1] - vals[0])


def temperature_ergotropy(rho, H) -> float:
    value, _ = temperature_ergotropy_flagged(rho, H)
    return value


def temperature_ergotropy_flagged(rho, H):
    """Cov(H, H) / Cov(H, sigma_pi); always >= 0.

    Returns (value, flag).  Pure and rank-deficient states give exactly 0
    with a pure-limit flag; the maximally mixed state gives math.inf.
    """
    rho, H, pops, levels = _decompose(rho, H)
    cov_hh = covariance(H, H)
    if cov_hh <= 0.0:
        raise ValueError("Hamiltonian proportional to identity: no energy scale")
    vals = np.clip(pops.values, 0.0, None)
    if vals[0] - vals[-1] < MIXED_LIMIT:
        return math.inf, FLAG_MAXIMALLY_MIXED
    if vals[0] > 1.0 - PURE_LIMIT:
        return 0.0, FLAG_PURE_LIMIT
    logs = -np.log(np.clip(vals, opcore.LOG_CLIP, None))
    sigma_pi = (levels.vectors * logs) @ levels.vectors.conj().T
    denom = covariance(H, sigma_pi)
    flag = FLAG_NEAR_PURE if vals[-1] < PURE_LIMIT else None
    return cov_hh / denom, flag


def temperature_conventional(rho, H) -> float:
    value, _ = temperature_conventional_flagged(rho, H)
    return value


def temperature_conventional_flagged(rho, H):
    """Cov(H, H) / Cov(H, sigma) with sigma = -ln rho.

    Returns (value, flag); rank-deficient states and vanishing Cov(H, sigma)
    are flagged with math.nan values.
    """
    rho, H, pops, _ = _decompose(rho, H)
    cov_hh = covariance(H, H)
    if cov_hh <= 0.0:
        raise ValueError("Hamiltonian proportional to identity: no energy scale")
    vals = pops.values
    if vals[-1] < PURE_LIMIT:
        return math.nan, FLAG_RANK_DEFICIENT
    sigma = entropy_operator(rho)
    denom = covariance(H, sigma)
    cov_ss = covariance(sigma, sigma)
    if denom * denom < 1e-24 * max(cov_hh * cov_ss, 1e-300):
        return math.nan, FLAG_DIVERGENT
    return cov_hh / denom, None


def temperature_entropy_based_qubit(r_vec, h_vec) -> float:
    value, _ = temperature_entropy_based_qubit_flagged(r_vec, h_vec)
    return value


def _atanh(r: float) -> float:
    return 0.5 * math.log((1.0 + r) / (1.0 - r))


def temperature_entropy_based_qubit_flagged(r_vec, h_vec):
    """Qubit closed form (h.r) / (r atanh r); sign follows sign(h.r)."""
    r_vec = np.asarray(r_vec, dtype=float)
    h_vec = np.asarray(h_vec, dtype=float)
    r = float(np.linalg.norm(r_vec))
    if r < MIXED_LIMIT:
        return math.inf, FLAG_MAXIMALLY_MIXED
    if r > 1.0 - PURE_LIMIT:
        return 0.0, FLAG_PURE_LIMIT
    hr = float(np.dot(h_vec, r_vec))
    return hr / (r * _atanh(r)), None


def temperature_ergotropy_qubit_flagged(r_vec, h_vec):
    """Qubit closed form h / atanh(r) for the ergotropy-based temperature."""
    r_vec = np.asarray(r_vec, dtype=float)
    h_vec = np.asarray(h_vec, dtype=float)
    r = float(np.linalg.norm(r_vec))
    h = float(np.linalg.norm(h_vec))
    if r < MIXED_LIMIT:
        return math.inf, FLAG_MAXIMALLY_MIXED
    if r > 1.0 - PURE_LIMIT:
        return 0.0, FLAG_PURE_LIMIT
    if h == 0.0:
        return 0.0, FLAG_NO_ENERGY_SCALE
    return h / _atanh(r), None


def temperature_conventional_qubit_flagged(r_vec, h_vec):
    """Qubit closed form h^2 r / [(h.r) atanh r] for the conventional temperature."""
    r_vec = np.asarray(r_vec, dtype=float)
    h_vec = np.asarray(h_vec, dtype=float)
    r = float(np.linalg.norm(r_vec))
    h = float(np.linalg.norm(h_vec))
    if r < MIXED_LIMIT:
        return math.inf, FLAG_MAXIMALLY_MIXED
    if r > 1.0 - PURE_LIMIT:
        return math.nan, FLAG_RANK_DEFICIENT
    hr = float(np.dot(h_vec, r_vec))
    if abs(hr) < 1e-12 * max(h * r, 1e-300):
        return math.nan, FLAG_DIVERGENT
    return h * h * r / (hr * _atanh(r)), None


def temperatures(rho, H) -> TemperatureTriple:
    """All three temperatures of a state, with flags for undefined entries.

    The entropy-based temperature has a closed form only for qubits; for
    d > 2 it is reported as nan with a flag.
    """
    t_ergo, f_ergo = temperature_ergotropy_flagged(rho, H)
    t_conv, f_conv = temperature_conventional_flagged(rho, H)
    rho_arr = opcore.as_operator(rho)
    flags = {}
    if rho_arr.shape == (2, 2):
        r_vec = opcore.density_to_bloch(rho_arr)
        H_arr = opcore.as_operator(H)
        h_vec = np.array([-float(np.trace(H_arr @ P).real) / 2.0
                          for P in opcore.PAULI])
        t_ent, f_ent = temperature_entropy_based_qubit_flagged(r_vec, h_vec)
    else:
        t_ent, f_ent = math.nan, "qubit-only"
    for key, f in (("t_ergo", f_ergo), ("t_conv", f_conv), ("t_ent", f_ent)):
        if f is not None:
            flags[key] = f
    return TemperatureTriple(t_ergo=t_ergo, t_conv=t_conv, t_ent=t_ent,
                             flags=flags)


def qubit_temperatures(r_vec, h_vec) -> TemperatureTriple:
    """Closed-form temperature triple from Bloch and field vectors."""
    t_ergo, f_ergo = temperature_ergotropy_qubit_flagged(r_vec, h_vec)
    t_conv, f_conv = temperature_conventional_qubit_flagged(r_vec, h_vec)
    t_ent, f_ent = temperature_entropy_based_qubit_flagged(r_vec, h_vec)
    flags = {}
    for key, f in (("t_ergo", f_ergo), ("t_conv", f_conv), ("t_ent", f_ent)):
        if f is not None:
            flags[key] = f
    return TemperatureTriple(t_ergo=t_ergo, t_conv=t_conv, t_ent=t_ent,
                             flags=flags)
