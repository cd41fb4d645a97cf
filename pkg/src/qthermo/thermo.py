"""Heat/work ledgers along trajectories for the four formulations, entropy
production, and finite-process operational splits.

All inexact differentials are discretized with midpoint (trapezoidal) rules,
so every per-step split closes the first law to machine precision and the
ledger error budget is O(dt^2) per step.  Positive heat means energy flowing
into the system's passive sector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple

import numpy as np

from . import ergo, opcore
from .ergo import passive_state
from .opcore import check_density, check_hermitian, eig_hermitian

OVERLAP_TIE_TOL = 1e-6

FLAG_AMBIGUOUS_MATCH = "eigenvector-match-ambiguous"


class Formulation(str, Enum):
    STANDARD = "standard"
    ENTROPY_BASED = "entropy_based"
    ERGOTROPY_BASED = "ergotropy_based"
    OPERATIONAL = "operational"


class SplitResult(NamedTuple):
    dq: float
    dw: float
    flag: str | None = None


@dataclass(frozen=True)
class ProcessEndpoints:
    """Endpoints of a finite process (rho_i, H_i) -> (rho_f, H_f)."""

    rho_i: np.ndarray
    rho_f: np.ndarray
    H_i: np.ndarray
    H_f: np.ndarray


class OperationalSplit(NamedTuple):
    q_op: float
    w_ad: float
    d_ergotropy: float


@dataclass(frozen=True)
class Environment:
    """Fixed point of the channel: temperature T_e (math.inf for unital
    channels) and the stationary state rho_e."""

    T_e: float
    rho_e: np.ndarray


@dataclass(frozen=True)
class ThermoSample:
    """Per-time record of energies, accumulated heats/works, temperatures,
    and entropy production.  Flagged temperature entries are nan/inf with a
    label in `flags`."""

    t: float
    U: float
    S: float
    E: float
    Q_std: float
    Q_ent: float
    Q_ergo: float
    Q_op: float
    W_std: float
    W_ent: float
    W_ergo: float
    W_passive: float
    W_ad: float
    T_ergo: float
    T_conv: float
    T_ent: float
    Sigma: float
    Sigma_passive: float
    dS_clausius: float
    residual_first_law: float
    flags: tuple = ()


def _trace_prod(A, B) -> float:
    return float(np.trace(A @ B).real)


def _match_by_overlap(spec_a, spec_b):
    """Pair eigenvectors across a step by maximal squared overlap.

    Returns (permutation, ambiguous) where permutation[i] is the b-index
    matched to a-index i.  Ambiguous when the two best available overlaps
    are closer than OVERLAP_TIE_TOL.
    """
    overlap = np.abs(spec_a.vectors.conj().T @ spec_b.vectors) ** 2
    d = overlap.shape[0]
    available = list(range(d))
    perm = np.empty(d, dtype=int)
    ambiguous = False
    for i in range(d):
        scores = overlap[i, available]
        order = np.argsort(-scores, kind="stable")
        if len(order) > 1 and scores[order[0]] - scores[order[1]] < OVERLAP_TIE_TOL:
            ambiguous = True
        perm[i] = available[order[0]]
        available.remove(perm[i])
    return perm, ambiguous


def differential_split(rho_a, rho_b, H_a, H_b,
                       formulation: Formulation) -> SplitResult:
    """Heat/work split of one small trajectory step for one formulation.

    Midpoint bars close the first law dQ + dW = dU exactly for every
    formulation.  The operational formulation is a finite-process notion;
    use operational_split for it.
    """
    formulation = Formulation(formulation)
    if formulation is Formulation.OPERATIONAL:
        raise ValueError("operational split is a finite-process notion; "
                         "use operational_split")
    rho_a = check_density(rho_a)
    rho_b = check_density(rho_b)
    H_a = check_hermitian(H_a, name="H_a")
    H_b = check_hermitian(H_b, name="H_b")
    H_bar = 0.5 * (H_a + H_b)
    dU = _trace_prod(rho_b, H_b) - _trace_prod(rho_a, H_a)
    if formulation is Formulation.STANDARD:
        dq = _trace_prod(rho_b - rho_a, H_bar)
        dw = _trace_prod(0.5 * (rho_a + rho_b), H_b - H_a)
        return SplitResult(dq, dw)
    if formulation is Formulation.ERGOTROPY_BASED:
        pa = passive_state(rho_a, H_a)
        pb = passive_state(rho_b, H_b)
        dq = _trace_prod(pb.passive_state - pa.passive_state, H_bar)
        dw = (_trace_prod(0.5 * (pa.passive_state + pb.passive_state),
                          H_b - H_a)
              + (pb.ergotropy - pa.ergotropy))
        return SplitResult(dq, dw)
    # entropy-based: heat from eigenvalue variations of rho
    spec_a = eig_hermitian(rho_a, order="descending")
    spec_b = eig_hermitian(rho_b, order="descending")
    perm, ambiguous = _match_by_overlap(spec_a, spec_b)
    dq = 0.0
    for i in range(spec_a.dim):
        proj = 0.5 * (spec_a.projector(i) + spec_b.projector(int(perm[i])))
        dq += (spec_b.values[perm[i]] - spec_a.values[i]) * _trace_prod(proj, H_bar)
    dw = dU - dq
    return SplitResult(dq, dw, FLAG_AMBIGUOUS_MATCH if ambiguous else None)


def operational_split(endpoints: ProcessEndpoints) -> OperationalSplit:
    """Finite-process split dU = Q_op + W_ad + dE via the auxiliary state
    built from final populations on initial energy levels."""
    rho_i = check_density(endpoints.rho_i)
    rho_f = check_density(endpoints.rho_f)
    H_i = check_hermitian(endpoints.H_i, name="H_i")
    H_f = check_hermitian(endpoints.H_f, name="H_f")
    if rho_i.shape != rho_f.shape or H_i.shape != rho_i.shape:
        raise ValueError("dimension mismatch in process endpoints")
    pi_split = passive_state(rho_i, H_i)
    pf_split = passive_state(rho_f, H_f)
    levels_i = eig_hermitian(H_i, order="ascending")
    pops_f = np.clip(eig_hermitian(rho_f, order="descending").values, 0.0, None)
    pi_m = (levels_i.vectors * pops_f) @ levels_i.vectors.conj().T
    q_op = _trace_prod(pi_m, H_i) - pi_split.passive_energy
    w_ad = pf_split.passive_energy - _trace_prod(pi_m, H_i)
    d_ergo = pf_split.ergotropy - pi_split.ergotropy
    return OperationalSplit(q_op, w_ad, d_ergo)


def entropy_production_step(rho_a, rho_b, H_a, H_b, T_e: float, rho_e):
    """Entropy production of one step: minus the change of relative entropy
    to the channel fixed point, plus its passive part.

    Returns (dSigma, dSigma_passive); math.inf on support violations.
    """
    rel_a = opcore.relative_entropy(rho_a, rho_e)
    rel_b = opcore.relative_entropy(rho_b, rho_e)
    pi_a = passive_state(rho_a, H_a).passive_state
    pi_b = passive_state(rho_b, H_b).passive_state
    rel_pa = opcore.relative_entropy(pi_a, rho_e)
    rel_pb = opcore.relative_entropy(pi_b, rho_e)
    d_sigma = math.inf if math.isinf(rel_a) or math.isinf(rel_b) \
        else rel_a - rel_b
    d_sigma_pi = math.inf if math.isinf(rel_pa) or math.isinf(rel_pb) \
        else rel_pa - rel_pb
    return d_sigma, d_sigma_pi


def _atanh_vec(r: np.ndarray) -> np.ndarray:
    return 0.5 * np.log((1.0 + r) / (1.0 - r))


def _unit(vectors: np.ndarray, norms: np.ndarray, fallback) -> np.ndarray:
    out = np.empty_like(vectors)
    tiny = norms < 1e-15
    safe = np.where(tiny, 1.0, norms)
    out[:] = vectors / safe[:, None]
    out[tiny] = fallback
    return out


def _field_directions(fields: np.ndarray, h: np.ndarray) -> np.ndarray:
    """Unit field directions; a vanishing field inherits the direction of
    the nearest sample with a defined one (continuity of the passive
    direction), falling back to +z only when the field vanishes throughout."""
    tiny = h < 1e-15
    safe = np.where(tiny, 1.0, h)
    hhat = fields / safe[:, None]
    bad = np.nonzero(tiny)[0]
    if bad.size:
        good = np.nonzero(~tiny)[0]
        if good.size == 0:
            hhat[bad] = np.array([0.0, 0.0, 1.0])
        else:
            for i in bad:
                hhat[i] = hhat[good[np.argmin(np.abs(good - i))]]
    return hhat


def passive_projected(traj):
    """Map every sample of a qubit trajectory to its passive state.

    The passive Bloch vector points along the local field direction with the
    same radius (toward the ground state of H = -h.sigma); for a vanishing
    field the +z convention of the degenerate eigenbasis is used.
    """
    from .dynamics import Trajectory
    bloch = np.array([opcore.density_to_bloch(s) for s in traj.states])
    fields = np.asarray(traj.fields, dtype=float)
    r = np.linalg.norm(bloch, axis=1)
    h = np.linalg.norm(fields, axis=1)
    hhat = _field_directions(fields, h)
    passive_bloch = np.clip(r, 0.0, 1.0)[:, None] * hhat
    states = [opcore.bloch_to_density(v) for v in passive_bloch]
    return Trajectory(times=np.asarray(traj.times, dtype=float),
                      states=states, fields=fields.copy(),
                      flags=list(getattr(traj, "flags", [])))


def ledger(traj, field_fn=None, env: Environment | None = None,
           clausius: bool = True) -> list[ThermoSample]:
    """Accumulate all four formulation ledgers along a qubit trajectory.

    `traj` needs attributes times, states (2x2 density matrices), fields
    (per-sample local field vectors); `field_fn`, when given, overrides the
    stored fields.  With `env` set, entropy production toward the fixed
    point rho_e is accumulated (pass T_e = math.inf with rho_e = I/2 for
    unital channels).
    """
    times = np.asarray(traj.times, dtype=float)
    n = times.shape[0]
    if n < 2:
        raise ValueError("ledger needs at least two samples")
    states = traj.states
    if states[0].shape != (2, 2):
        raise ValueError("ledger supports qubit trajectories only")
    if field_fn is not None:
        fields = np.array([np.asarray(field_fn(t), dtype=float) for t in times])
    else:
        fields = np.asarray(traj.fields, dtype=float)
    bloch = np.array([opcore.density_to_bloch(s) for s in states])

    r = np.linalg.norm(bloch, axis=1)
    h = np.linalg.norm(fields, axis=1)
    hr_dot = np.einsum("ij,ij->i", fields, bloch)
    U = -hr_dot
    E = U + h * r
    hhat = _field_directions(fields, h)
    rhat = _unit(bloch, r, np.array([0.0, 0.0, 1.0]))
    passive_bloch = r[:, None] * hhat

    r_clip = np.clip(r, 0.0, 1.0)
    p_plus = 0.5 * (1.0 + r_clip)
    p_minus = 0.5 * (1.0 - r_clip)
    with np.errstate(divide="ignore", invalid="ignore"):
        S = -(p_plus * np.log(np.clip(p_plus, opcore.LOG_CLIP, None))
              + p_minus * np.log(np.clip(p_minus, opcore.LOG_CLIP, None)))
    S = np.where(p_minus <= 0.0, 0.0, S)

    # per-step quantities (midpoint rules)
    h_bar = 0.5 * (fields[:-1] + fields[1:])
    dr_vec = bloch[1:] - bloch[:-1]
    dh_vec = fields[1:] - fields[:-1]
    r_bar = 0.5 * (bloch[:-1] + bloch[1:])
    dpv = passive_bloch[1:] - passive_bloch[:-1]
    pv_bar = 0.5 * (passive_bloch[:-1] + passive_bloch[1:])
    dU_step = U[1:] - U[:-1]
    dE_step = E[1:] - E[:-1]

    dq_std = -np.einsum("ij,ij->i", h_bar, dr_vec)
    dw_std = -np.einsum("ij,ij->i", r_bar, dh_vec)
    dq_ergo = -np.einsum("ij,ij->i", h_bar, dpv)
    dw_pass = -np.einsum("ij,ij->i", pv_bar, dh_vec)
    dw_ergo = dw_pass + dE_step
    rhat_bar = 0.5 * (rhat[:-1] + rhat[1:])
    dq_ent = -(r[1:] - r[:-1]) * np.einsum("ij,ij->i", h_bar, rhat_bar)
    dw_ent = dU_step - dq_ent
    step_ambiguous = (r[:-1] < 1e-12) | (r[1:] < 1e-12)

    Q_std = np.concatenate([[0.0], np.cumsum(dq_std)])
    W_std = np.concatenate([[0.0], np.cumsum(dw_std)])
    Q_ergo = np.concatenate([[0.0], np.cumsum(dq_ergo)])
    W_pass = np.concatenate([[0.0], np.cumsum(dw_pass)])
    W_ergo = np.concatenate([[0.0], np.cumsum(dw_ergo)])
    Q_ent = np.concatenate([[0.0], np.cumsum(dq_ent)])
    W_ent = np.concatenate([[0.0], np.cumsum(dw_ent)])

    # operational ledger: finite-process split from t = 0 to each sample
    Q_op = h[0] * (r_clip[0] - r_clip)
    W_ad = r_clip * (h[0] - h)
    W_op = W_ad + (E - E[0])

    # temperatures (qubit closed forms) with flags
    atanh_r = np.where(r_clip < 1.0, _atanh_vec(np.clip(r_clip, 0.0, 1.0 - 1e-16)),
                       math.inf)
    mixed = r < ergo.MIXED_LIMIT
    pure = r > 1.0 - ergo.PURE_LIMIT
    zero_field = h < 1e-15
    with np.errstate(divide="ignore", invalid="ignore"):
        T_ergo = h / atanh_r
        T_conv = h * h * r / (hr_dot * atanh_r)
        T_ent = hr_dot / (r * atanh_r)
    T_ergo = np.where(pure, 0.0, np.where(mixed, math.inf, T_ergo))
    T_ergo = np.where(zero_field & ~mixed, 0.0, T_ergo)
    conv_divergent = np.abs(hr_dot) < 1e-12 * np.maximum(h * r, 1e-300)
    T_conv = np.where(pure, math.nan, np.where(mixed, math.inf, T_conv))
    T_conv = np.where(conv_divergent & ~mixed & ~pure, math.nan, T_conv)
    T_ent = np.where(pure, 0.0, np.where(mixed, math.inf, T_ent))

    flags: list[list[str]] = [[] for _ in range(n)]
    for i in np.nonzero(mixed)[0]:
        flags[i].append("T:" + ergo.FLAG_MAXIMALLY_MIXED)
    for i in np.nonzero(pure)[0]:
        flags[i].append("T:" + ergo.FLAG_PURE_LIMIT)
    for i in np.nonzero(zero_field)[0]:
        flags[i].append("T:" + ergo.FLAG_NO_ENERGY_SCALE)
    for i in np.nonzero(conv_divergent & ~mixed & ~pure)[0]:
        flags[i].append("t_conv:" + ergo.FLAG_DIVERGENT)
    for i in np.nonzero(step_ambiguous)[0]:
        flags[i].append("step:" + FLAG_AMBIGUOUS_MATCH)
    # a sign change of h.r between neighbours marks the nonanalytic point of
    # the conventional temperature; flag the sample closer to the crossing
    cross = np.nonzero(hr_dot[:-1] * hr_dot[1:] < 0.0)[0]
    for i in cross:
        j = i if abs(hr_dot[i]) <= abs(hr_dot[i + 1]) else i + 1
        if "t_conv:" + ergo.FLAG_DIVERGENT not in flags[j]:
            flags[j].append("t_conv:" + ergo.FLAG_DIVERGENT)
        T_conv[j] = math.nan

    # entropy production toward the fixed point
    Sigma = np.zeros(n)
    Sigma_pi = np.zeros(n)
    if env is not None:
        rho_e = check_density(env.rho_e)
        e_vec = opcore.density_to_bloch(rho_e)
        e_norm = float(np.linalg.norm(e_vec))
        if e_norm >= 1.0:
            raise ValueError("environment fixed point must be full rank")
        c1 = 0.0 if e_norm < 1e-15 else 0.5 * math.log((1 + e_norm) / (1 - e_norm))
        ehat = e_vec / e_norm if e_norm >= 1e-15 else np.array([0.0, 0.0, 1.0])
        proj = bloch @ ehat
        proj_pi = passive_bloch @ ehat
        Sigma = (S - S[0]) + c1 * (proj - proj[0])
        Sigma_pi = (S - S[0]) + c1 * (proj_pi - proj_pi[0])

    # Clausius accumulation dS = dQ/T via the qubit closed form
    dS_cl = np.zeros(n)
    if clausius:
        steps = -0.5 * (atanh_r[:-1] + atanh_r[1:]) * (r_clip[1:] - r_clip[:-1])
        steps = np.where(np.isfinite(steps), steps, 0.0)
        dS_cl = np.concatenate([[0.0], np.cumsum(steps)])

    dU_acc = U - U[0]
    residual = np.max(np.abs(np.stack([
        dU_acc - Q_std - W_std,
        dU_acc - Q_ent - W_ent,
        dU_acc - Q_ergo - W_ergo,
        dU_acc - Q_op - W_op,
    ])), axis=0)

    samples = []
    for i in range(n):
        samples.append(ThermoSample(
            t=float(times[i]), U=float(U[i]), S=float(S[i]), E=float(E[i]),
            Q_std=float(Q_std[i]), Q_ent=float(Q_ent[i]),
            Q_ergo=float(Q_ergo[i]), Q_op=float(Q_op[i]),
            W_std=float(W_std[i]), W_ent=float(W_ent[i]),
            W_ergo=float(W_ergo[i]), W_passive=float(W_pass[i]),
            W_ad=float(W_ad[i]),
            T_ergo=float(T_ergo[i]), T_conv=float(T_conv[i]),
            T_ent=float(T_ent[i]),
            Sigma=float(Sigma[i]), Sigma_passive=float(Sigma_pi[i]),
            dS_clausius=float(dS_cl[i]),
            residual_first_law=float(residual[i]),
            flags=tuple(flags[i]),
        ))
    return samples
