"""Propagation of sampled pulses: Bloch vector, SO(3) and SU(2) lifts.

A pulse drives M' = Omega(t) x M.  The same motion lifts to the spin
half Schroedinger equation U' = -i H U with H = (Omega . sigma) / 2,
so the accumulated SU(2) propagator always covers the SO(3) rotation:
adjoint_map(U(t)) = R(t).

Each sampling interval is integrated with its field frozen at the
average of the endpoint samples and exponentiated exactly.  Every step
is therefore an exact rotation (orthogonality and unitarity hold to
roundoff for any step size) and the trajectory error is second order
in the sample spacing.  Static errors rescale the drive components by
(1 + alpha) and shift the third component by delta before stepping.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_SIGMA = np.array([
    [[0.0, 1.0], [1.0, 0.0]],
    [[0.0, -1.0j], [1.0j, 0.0]],
    [[1.0, 0.0], [0.0, -1.0]],
], dtype=complex)


@dataclass(frozen=True)
class ErrorParams:
    """Static drive miscalibration alpha and detuning offset delta."""

    alpha: float = 0.0
    delta: float = 0.0


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Bloch vector samples M (n, 3) at the pulse times."""

    times: np.ndarray
    M: np.ndarray


@dataclass(frozen=True, eq=False)
class PropagatorPath:
    """Accumulated propagators at the pulse times; R is (n, 3, 3) real,
    U is (n, 2, 2) complex, whichever the producing routine fills."""

    times: np.ndarray
    R: np.ndarray | None = None
    U: np.ndarray | None = None


@dataclass(frozen=True, eq=False)
class AxisAnglePath:
    """Rotation axis and angle of an accumulated propagator.

    angle lies in [0, 2 pi]; axis is unit and chosen continuously in t,
    so it may be the negative of the naive representative.  Samples
    whose rotation is too close to the identity (or a full turn) to
    define an axis carry the previous axis and a True degenerate flag.
    """

    times: np.ndarray
    axis: np.ndarray
    angle: np.ndarray
    degenerate: np.ndarray


def _effective_fields(pulse, err: ErrorParams):
    w = pulse.fields
    out = np.empty_like(w)
    out[:, 0] = (1.0 + err.alpha) * w[:, 0]
    out[:, 1] = (1.0 + err.alpha) * w[:, 1]
    out[:, 2] = w[:, 2] + err.delta
    return out


def _step_vectors(pulse, err: ErrorParams):
    """Rotation vector (axis times angle) of every sampling interval."""
    w = _effective_fields(pulse, err)
    dt = np.diff(pulse.times)
    return 0.5 * (w[1:] + w[:-1]) * dt[:, None]


def _axis_angle(phi_vec):
    phi = np.linalg.norm(phi_vec, axis=-1)
    safe = np.where(phi == 0.0, 1.0, phi)
    return phi_vec / safe[..., None], phi


def _so3_steps(phi_vec):
    axis, phi = _axis_angle(phi_vec)
    n1, n2, n3 = axis[..., 0], axis[..., 1], axis[..., 2]
    zeros = np.zeros_like(n1)
    K = np.stack([
        np.stack([zeros, -n3, n2], axis=-1),
        np.stack([n3, zeros, -n1], axis=-1),
        np.stack([-n2, n1, zeros], axis=-1),
    ], axis=-2)
    s = np.sin(phi)[..., None, None]
    c = (1.0 - np.cos(phi))[..., None, None]
    return np.eye(3) + s * K + c * (K @ K)


def _su2_steps(phi_vec):
    axis, phi = _axis_angle(phi_vec)
    a = np.cos(0.5 * phi)
    b = np.sin(0.5 * phi)
    n1, n2, n3 = axis[..., 0], axis[..., 1], axis[..., 2]
    U = np.empty(phi.shape + (2, 2), dtype=complex)
    U[..., 0, 0] = a - 1.0j * b * n3
    U[..., 0, 1] = -b * n2 - 1.0j * b * n1
    U[..., 1, 0] = b * n2 - 1.0j * b * n1
    U[..., 1, 1] = a + 1.0j * b * n3
    return U


def _scan_products(steps, identity):
    """All left-accumulated products: out[i] = steps[i-1] @ ... @ steps[0],
    with out[0] = identity.  Logarithmic number of vectorized passes."""
    n = len(steps)
    P = steps.copy()
    s = 1
    while s < n:
        head = P[s:] @ P[:-s]
        P[s:] = head
        s *= 2
    out = np.empty((n + 1,) + identity.shape, dtype=P.dtype)
    out[0] = identity
    out[1:] = P
    return out


def _reduce_product(steps, identity):
    """Final product steps[-1] @ ... @ steps[0] by pairwise reduction."""
    P = steps
    while len(P) > 1:
        half = P[1::2] @ P[0:2 * (len(P) // 2):2]
        if len(P) % 2:
            P = np.concatenate([half, P[-1:]])
        else:
            P = half
    return P[0] if len(P) else identity.copy()


def bloch_propagate(pulse, M0, err: ErrorParams = ErrorParams()) -> Trajectory:
    """Drive the vector M0 through the pulse.  Returns all samples."""
    M0 = np.asarray(M0, dtype=float)
    if M0.shape != (3,):
        raise ValueError("M0 must be a vector of shape (3,)")
    steps = _so3_steps(_step_vectors(pulse, err))
    M = np.empty((pulse.n_samples, 3))
    M[0] = M0
    for i, R in enumerate(steps):
        M[i + 1] = R @ M[i]
    return Trajectory(pulse.times, M)


def so3_propagate(pulse, err: ErrorParams = ErrorParams()) -> PropagatorPath:
    path = _scan_products(_so3_steps(_step_vectors(pulse, err)), np.eye(3))
    return PropagatorPath(pulse.times, R=path)


def su2_propagate(pulse, err: ErrorParams = ErrorParams()) -> PropagatorPath:
    path = _scan_products(_su2_steps(_step_vectors(pulse, err)),
                          np.eye(2, dtype=complex))
    return PropagatorPath(pulse.times, U=path)


def so3_final(pulse, err: ErrorParams = ErrorParams()):
    """Final rotation only; cheaper and rounds less than the full path."""
    return _reduce_product(_so3_steps(_step_vectors(pulse, err)), np.eye(3))


def su2_final(pulse, err: ErrorParams = ErrorParams()):
    return _reduce_product(_su2_steps(_step_vectors(pulse, err)),
                           np.eye(2, dtype=complex))


def adjoint_map(U):
    """SO(3) rotation covered by the SU(2) element U.  Batched."""
    U = np.asarray(U, dtype=complex)
    Ud = np.conj(np.swapaxes(U, -1, -2))
    R = np.empty(U.shape[:-2] + (3, 3))
    for j in range(3):
        M = U @ _SIGMA[j] @ Ud
        for i in range(3):
            R[..., i, j] = 0.5 * np.real(
                np.einsum("...ab,...ba->...", _SIGMA[i], M))
    return R


def gate_fidelity(U, V) -> float:
    """|tr(U^dag V)| / 2: equals 1 iff the gates agree up to global phase."""
    U = np.asarray(U, dtype=complex)
    V = np.asarray(V, dtype=complex)
    return float(0.5 * np.abs(np.trace(U.conj().T @ V)))


def axis_angle_path(upath: PropagatorPath, tol: float = 1e-12) -> AxisAnglePath:
    """Axis-angle reading of an SU(2) propagator path."""
    if upath.U is None:
        raise ValueError("axis_angle_path needs an SU(2) path")
    U = upath.U
    q = np.empty((len(U), 4))
    q[:, 0] = 0.5 * np.real(U[:, 0, 0] + U[:, 1, 1])
    q[:, 1] = 0.5 * np.real(1.0j * (U[:, 0, 1] + U[:, 1, 0]))
    q[:, 2] = 0.5 * np.real(U[:, 1, 0] - U[:, 0, 1])
    q[:, 3] = 0.5 * np.real(1.0j * (U[:, 0, 0] - U[:, 1, 1]))
    # keep the double cover continuous in time
    flips = np.cumprod(np.where(np.sum(q[1:] * q[:-1], axis=1) < 0.0, -1.0, 1.0))
    q[1:] *= flips[:, None]
    s = np.linalg.norm(q[:, 1:], axis=1)
    angle = 2.0 * np.arctan2(s, q[:, 0])
    degenerate = s < tol
    axis = np.empty((len(U), 3))
    axis[0] = (0.0, 0.0, 1.0) if degenerate[0] else q[0, 1:] / s[0]
    for i in range(1, len(U)):
        axis[i] = axis[i - 1] if degenerate[i] else q[i, 1:] / s[i]
    return AxisAnglePath(upath.times, axis, angle, degenerate)


def write_trajectory_csv(traj: Trajectory, path) -> None:
    data = np.column_stack([traj.times, traj.M])
    np.savetxt(path, data, delimiter=",", fmt="%.17g", comments="",
               header="t,M1,M2,M3")


def write_propagator_csv(ppath: PropagatorPath, path) -> None:
    """Row per time sample: R entries row-major, then Re/Im of each U entry."""
    cols = [np.asarray(ppath.times)]
    names = ["t"]
    if ppath.R is not None:
        for i in range(3):
            for j in range(3):
                cols.append(ppath.R[:, i, j])
                names.append(f"R{i + 1}{j + 1}")
    if ppath.U is not None:
        for i in range(2):
            for j in range(2):
                cols.append(np.real(ppath.U[:, i, j]))
                cols.append(np.imag(ppath.U[:, i, j]))
                names.append(f"ReU{i + 1}{j + 1}")
                names.append(f"ImU{i + 1}{j + 1}")
    np.savetxt(path, np.column_stack(cols), delimiter=",", fmt="%.17g",
               comments="", header=",".join(names))
