"""Haar sampling, proposal matrices and group-membership checks for SU(N) and SO(N)."""

from __future__ import annotations

import numpy as np

GROUPS = ("SU", "SO")


def _check(group: str, N: int) -> None:
    if group not in GROUPS:
        raise ValueError(f"group must be one of {GROUPS}, got {group!r}")
    if N < 2:
        raise ValueError(f"N must be at least 2, got {N}")


def haar_sample(group: str, N: int, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Haar-distributed element(s) of SU(N) or SO(N), always as complex128.

    Gaussian matrix, QR with the diagonal of R made positive (Haar on U(N) or O(N)),
    then a random N-th root of det^-1 (SU) or a column sign flip (SO).
    """
    _check(group, N)
    shape = (1 if size is None else size, N, N)
    if group == "SU":
        Z = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)
    else:
        Z = rng.standard_normal(shape)
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R, axis1=1, axis2=2)
    Q = Q * (d / np.abs(d))[:, None, :]
    det = np.linalg.det(Q)
    if group == "SU":
        k = rng.integers(0, N, size=shape[0])
        root = np.exp(-1j * (np.angle(det) + 2 * np.pi * k) / N)
        Q = Q * root[:, None, None]
    else:
        flip = det.real < 0
        Q[flip, :, 0] *= -1
    Q = Q.astype(np.complex128)
    return Q[0] if size is None else Q


def proposal_matrix(group: str, N: int, eps: float, rng: np.random.Generator) -> np.ndarray:
    """One random R: the identity except a 2x2 block on a uniform pair (U, V).

    SU: the rotation with entries sqrt(1-eps^2) +- i eps eta cos(theta) on the
    diagonal and +-eps e^{+-i phi} xi sin(theta) off it, theta and phi uniform.
    SO: a real Givens rotation with sine uniform on (-eps, eps).
    """
    _check(group, N)
    U, V = rng.choice(N, size=2, replace=False)
    R = np.eye(N, dtype=np.complex128)
    if group == "SU":
        eta, xi = rng.choice((-1, 1), size=2)
        theta, phi = rng.uniform(0, 2 * np.pi, size=2)
        c = np.sqrt(1 - eps * eps)
        R[U, U] = c + 1j * eps * eta * np.cos(theta)
        R[V, V] = c - 1j * eps * eta * np.cos(theta)
        R[U, V] = eps * np.exp(1j * phi) * xi * np.sin(theta)
        R[V, U] = -eps * np.exp(-1j * phi) * xi * np.sin(theta)
    else:
        s = eps * rng.uniform(-1, 1)
        c = np.sqrt(1 - s * s)
        R[U, U] = R[V, V] = c
        R[U, V], R[V, U] = s, -s
    return R


def membership_error(Q: np.ndarray, group: str) -> float:
    """Largest deviation from Q Q* = I, det Q = 1 (and Q real for SO), over a stack."""
    Q = np.asarray(Q)
    if Q.ndim == 2:
        Q = Q[None]
    N = Q.shape[-1]
    eye = np.eye(N)
    unit = np.abs(Q @ np.conj(np.swapaxes(Q, 1, 2)) - eye).max()
    det = np.abs(np.linalg.det(Q) - 1).max()
    err = max(unit, det)
    if group == "SO":
        err = max(err, np.abs(Q.imag).max())
    return float(err)


def project(Q: np.ndarray, group: str) -> np.ndarray:
    """Nearest group element by re-orthonormalization; used to remove rounding drift."""
    Qs = np.asarray(Q)
    single = Qs.ndim == 2
    if single:
        Qs = Qs[None]
    if group == "SO":
        Qs = Qs.real
    q, r = np.linalg.qr(Qs)
    d = np.diagonal(r, axis1=1, axis2=2)
    q = q * (d / np.abs(d))[:, None, :]
    if group == "SU":
        det = np.linalg.det(q)
        q = q * np.exp(-1j * np.angle(det) / q.shape[-1])[:, None, None]
    q = q.astype(np.complex128)
    return q[0] if single else q
