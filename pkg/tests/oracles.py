"""Brute-force reference computations, kept independent of the library paths."""
import itertools

import numpy as np

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


def shannon_bits(p):
    p = np.asarray(p, dtype=float).ravel()
    p = p[p > 1e-15]
    return float(-(p * np.log2(p)).sum())


def vn_bits(m):
    return shannon_bits(np.linalg.eigvalsh((m + m.conj().T) / 2))


def trace_out_last(m, dx):
    """Reduce a (2 dx) x (2 dx) matrix on X (x) Y to X by explicit summation."""
    out = np.zeros((dx, dx), dtype=complex)
    for i, j, y in itertools.product(range(dx), range(dx), range(2)):
        out[i, j] += m[2 * i + y, 2 * j + y]
    return out


def trace_out_first(m, dx):
    out = np.zeros((2, 2), dtype=complex)
    for a, b, x in itertools.product(range(2), range(2), range(dx)):
        out[a, b] += m[2 * x + a, 2 * x + b]
    return out


def projector(theta, phi, sign):
    n = (np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta))
    return (np.eye(2) + sign * (n[0] * SX + n[1] * SY + n[2] * SZ)) / 2


def j_brute(rho, theta, phi):
    """J for a state on X (x) Y with Y the last qubit, one basis at a time."""
    dx = rho.shape[0] // 2
    h_x = vn_bits(trace_out_last(rho, dx))
    cond = 0.0
    for sign in (1, -1):
        m = np.kron(np.eye(dx), projector(theta, phi, sign))
        post = m @ rho @ m
        p = np.trace(post).real
        if p > 1e-12:
            cond += p * vn_bits(trace_out_last(post, dx) / p)
    return h_x - cond


def j_grid_dense(rho, n_theta, n_phi):
    """J over the product grid theta in [0, pi] (inclusive), phi in [0, 2pi).

    Vectorized projector sandwich (1 (x) Pi) rho (1 (x) Pi); the index
    bookkeeping is done with an explicit reshape rather than the library's
    block trick.
    """
    dx = rho.shape[0] // 2
    theta = np.linspace(0, np.pi, n_theta)
    phi = 2 * np.pi * np.arange(n_phi) / n_phi
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    tt, pp = tt.ravel(), pp.ravel()
    nx, ny, nz = np.sin(tt) * np.cos(pp), np.sin(tt) * np.sin(pp), np.cos(tt)
    bloch = nx[:, None, None] * SX + ny[:, None, None] * SY + nz[:, None, None] * SZ
    h_x = vn_bits(trace_out_last(rho, dx))
    cond = np.zeros(tt.size)
    for sign in (1, -1):
        proj = (np.eye(2) + sign * bloch) / 2
        m = np.einsum("ij,kab->kiajb", np.eye(dx), proj).reshape(-1, 2 * dx, 2 * dx)
        post = m @ rho @ m
        red = np.trace(post.reshape(-1, dx, 2, dx, 2), axis1=2, axis2=4)
        p = np.trace(red, axis1=1, axis2=2).real
        lam = np.linalg.eigvalsh(red / np.where(p > 1e-12, p, 1)[:, None, None])
        lam = np.clip(lam, 1e-300, None)
        h = -np.sum(np.where(lam > 1e-12, lam * np.log2(lam), 0), axis=1)
        cond += np.where(p > 1e-12, p * h, 0)
    return (h_x - cond).reshape(n_theta, n_phi)
