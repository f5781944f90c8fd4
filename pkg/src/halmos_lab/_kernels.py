"""Structure-group Jacobi sweep kernels.

Matrices are stored as quaternion component stacks: a Hermitian quaternion
matrix is four real (N, N) arrays (w symmetric, x/y/z antisymmetric), with
the real class using only w and the complex class (w, x).  One sweep visits
every index pair once and applies the rotation that maximizes the joint
diagonal gain, which for 2x2 blocks is the top eigenvector of the
Cardoso-Souloumiac pencil; over the quaternions the pencil is 5x5
(Spin(5) = Sp(2)).

The sweep is the hot loop of the nearest-commuting search (O(d N^3) per
sweep).  A numba-compiled scalar version is used when available; setting
HALMOS_LAB_PURE_NUMPY=1 (or missing numba) selects a vectorized pure-numpy
path.  benchmarks/bench_jacobi.py compares the two.
"""

from __future__ import annotations

import math
import os

import numpy as np

PURE_NUMPY = os.environ.get("HALMOS_LAB_PURE_NUMPY", "") not in ("", "0")


def _pair_rotation(a, p, t, active, tol):
    """Optimal rotation parameters at pair (p, t), or None if below tol.

    Returns (ct, s, cs) with s = sin(theta) * conj(u) and cs = conj(s),
    both as 4-component quaternions.
    """
    d = a.shape[0]
    dim = 1 + active
    g = np.zeros((dim, dim))
    m = np.empty(dim)
    for r in range(d):
        m[0] = a[r, 0, p, p] - a[r, 0, t, t]
        for c in range(active):
            m[1 + c] = 2.0 * a[r, c, p, t]
        g += np.outer(m, m)
    _, v = np.linalg.eigh(g)
    top = v[:, dim - 1]
    if top[0] < 0:
        top = -top
    vec = top[1:]
    vn = math.sqrt(float(vec @ vec))
    theta = 0.5 * math.atan2(vn, float(top[0]))
    st = math.sin(theta)
    if abs(st) <= tol or vn == 0.0:
        return None
    ct = math.cos(theta)
    u = np.zeros(4)
    u[:active] = vec / vn
    s = st * np.array([u[0], -u[1], -u[2], -u[3]])
    cs = st * u
    return ct, s, cs


def _quat_left(s, col_w, col_x, col_y, col_z):
    """Quaternion product s * v applied to component vectors (left action)."""
    w = s[0] * col_w - s[1] * col_x - s[2] * col_y - s[3] * col_z
    x = s[0] * col_x + s[1] * col_w + s[2] * col_z - s[3] * col_y
    y = s[0] * col_y - s[1] * col_z + s[2] * col_w + s[3] * col_x
    z = s[0] * col_z + s[1] * col_y - s[2] * col_x + s[3] * col_w
    return w, x, y, z


def _quat_right(col_w, col_x, col_y, col_z, s):
    """Quaternion product v * s applied to component vectors (right action)."""
    w = col_w * s[0] - col_x * s[1] - col_y * s[2] - col_z * s[3]
    x = col_w * s[1] + col_x * s[0] + col_y * s[3] - col_z * s[2]
    y = col_w * s[2] - col_x * s[3] + col_y * s[0] + col_z * s[1]
    z = col_w * s[3] + col_x * s[2] - col_y * s[1] + col_z * s[0]
    return w, x, y, z


def _apply_rotation_numpy(mat, p, t, ct, s, cs):
    # rows: (row_p, row_t) <- (ct*row_p + cs*row_t, ct*row_t - s*row_p)
    rp = mat[:, p, :].copy()
    rt = mat[:, t, :].copy()
    aw, ax, ay, az = _quat_left(cs, rt[0], rt[1], rt[2], rt[3])
    bw, bx, by, bz = _quat_left(s, rp[0], rp[1], rp[2], rp[3])
    mat[0, p, :] = ct * rp[0] + aw
    mat[1, p, :] = ct * rp[1] + ax
    mat[2, p, :] = ct * rp[2] + ay
    mat[3, p, :] = ct * rp[3] + az
    mat[0, t, :] = ct * rt[0] - bw
    mat[1, t, :] = ct * rt[1] - bx
    mat[2, t, :] = ct * rt[2] - by
    mat[3, t, :] = ct * rt[3] - bz
    # cols: (col_p, col_t) <- (col_p*ct + col_t*s, col_t*ct - col_p*cs)
    cp = mat[:, :, p].copy()
    ctcol = mat[:, :, t].copy()
    aw, ax, ay, az = _quat_right(ctcol[0], ctcol[1], ctcol[2], ctcol[3], s)
    bw, bx, by, bz = _quat_right(cp[0], cp[1], cp[2], cp[3], cs)
    mat[0, :, p] = ct * cp[0] + aw
    mat[1, :, p] = ct * cp[1] + ax
    mat[2, :, p] = ct * cp[2] + ay
    mat[3, :, p] = ct * cp[3] + az
    mat[0, :, t] = ct * ctcol[0] - bw
    mat[1, :, t] = ct * ctcol[1] - bx
    mat[2, :, t] = ct * ctcol[2] - by
    mat[3, :, t] = ct * ctcol[3] - bz


def _apply_rotation_cols_numpy(q, p, t, ct, s, cs):
    cp = q[:, :, p].copy()
    ctcol = q[:, :, t].copy()
    aw, ax, ay, az = _quat_right(ctcol[0], ctcol[1], ctcol[2], ctcol[3], s)
    bw, bx, by, bz = _quat_right(cp[0], cp[1], cp[2], cp[3], cs)
    q[0, :, p] = ct * cp[0] + aw
    q[1, :, p] = ct * cp[1] + ax
    q[2, :, p] = ct * cp[2] + ay
    q[3, :, p] = ct * cp[3] + az
    q[0, :, t] = ct * ctcol[0] - bw
    q[1, :, t] = ct * ctcol[1] - bx
    q[2, :, t] = ct * ctcol[2] - by
    q[3, :, t] = ct * ctcol[3] - bz


def _sweep_numpy(a, q, active, tol):
    """One Jacobi sweep in place (vectorized updates); returns rotation count."""
    d, _, n, _ = a.shape
    rotations = 0
    for p in range(n - 1):
        for t in range(p + 1, n):
            rot = _pair_rotation(a, p, t, active, tol)
            if rot is None:
                continue
            ct, s, cs = rot
            for r in range(d):
                _apply_rotation_numpy(a[r], p, t, ct, s, cs)
            _apply_rotation_cols_numpy(q, p, t, ct, s, cs)
            rotations += 1
    return rotations


def offdiag_energy_numpy(a: np.ndarray) -> float:
    n = a.shape[2]
    mask = ~np.eye(n, dtype=bool)
    return float(np.sum(a[:, :, mask] ** 2))


# ---------------------------------------------------------------------------
# Scalar implementation, compiled with numba when available.
# ---------------------------------------------------------------------------

def _sweep_scalar(a, q, active, tol):
    d, _, n, _ = a.shape
    dim = 1 + active
    rotations = 0
    g = np.zeros((dim, dim))
    m = np.zeros(dim)
    for p in range(n - 1):
        for t in range(p + 1, n):
            for i in range(dim):
                for j in range(dim):
                    g[i, j] = 0.0
            for r in range(d):
                m[0] = a[r, 0, p, p] - a[r, 0, t, t]
                for c in range(active):
                    m[1 + c] = 2.0 * a[r, c, p, t]
                for i in range(dim):
                    for j in range(dim):
                        g[i, j] += m[i] * m[j]
            _, v = np.linalg.eigh(g)
            flip = -1.0 if v[0, dim - 1] < 0 else 1.0
            n0 = v[0, dim - 1] * flip
            vn2 = 0.0
            u0 = 0.0
            u1 = 0.0
            u2 = 0.0
            u3 = 0.0
            for c in range(active):
                uc = v[1 + c, dim - 1] * flip
                if c == 0:
                    u0 = uc
                elif c == 1:
                    u1 = uc
                elif c == 2:
                    u2 = uc
                else:
                    u3 = uc
                vn2 += uc * uc
            vn = math.sqrt(vn2)
            theta = 0.5 * math.atan2(vn, n0)
            st = math.sin(theta)
            if abs(st) <= tol or vn == 0.0:
                continue
            ct = math.cos(theta)
            u0 /= vn
            u1 /= vn
            u2 /= vn
            u3 /= vn
            s0, s1, s2, s3 = st * u0, -st * u1, -st * u2, -st * u3
            c0, c1, c2, c3 = st * u0, st * u1, st * u2, st * u3
            for r in range(d):
                _rot_rows(a[r], p, t, ct, s0, s1, s2, s3, c0, c1, c2, c3, n)
                _rot_cols(a[r], p, t, ct, s0, s1, s2, s3, c0, c1, c2, c3, n)
            _rot_cols(q, p, t, ct, s0, s1, s2, s3, c0, c1, c2, c3, n)
            rotations += 1
    return rotations


def _rot_rows(mat, p, t, ct, s0, s1, s2, s3, c0, c1, c2, c3, n):
    for k in range(n):
        pw, px, py, pz = mat[0, p, k], mat[1, p, k], mat[2, p, k], mat[3, p, k]
        tw, tx, ty, tz = mat[0, t, k], mat[1, t, k], mat[2, t, k], mat[3, t, k]
        aw = c0 * tw - c1 * tx - c2 * ty - c3 * tz
        ax = c0 * tx + c1 * tw + c2 * tz - c3 * ty
        ay = c0 * ty - c1 * tz + c2 * tw + c3 * tx
        az = c0 * tz + c1 * ty - c2 * tx + c3 * tw
        bw = s0 * pw - s1 * px - s2 * py - s3 * pz
        bx = s0 * px + s1 * pw + s2 * pz - s3 * py
        by = s0 * py - s1 * pz + s2 * pw + s3 * px
        bz = s0 * pz + s1 * py - s2 * px + s3 * pw
        mat[0, p, k] = ct * pw + aw
        mat[1, p, k] = ct * px + ax
        mat[2, p, k] = ct * py + ay
        mat[3, p, k] = ct * pz + az
        mat[0, t, k] = ct * tw - bw
        mat[1, t, k] = ct * tx - bx
        mat[2, t, k] = ct * ty - by
        mat[3, t, k] = ct * tz - bz


def _rot_cols(mat, p, t, ct, s0, s1, s2, s3, c0, c1, c2, c3, n):
    for k in range(n):
        pw, px, py, pz = mat[0, k, p], mat[1, k, p], mat[2, k, p], mat[3, k, p]
        tw, tx, ty, tz = mat[0, k, t], mat[1, k, t], mat[2, k, t], mat[3, k, t]
        aw = tw * s0 - tx * s1 - ty * s2 - tz * s3
        ax = tw * s1 + tx * s0 + ty * s3 - tz * s2
        ay = tw * s2 - tx * s3 + ty * s0 + tz * s1
        az = tw * s3 + tx * s2 - ty * s1 + tz * s0
        bw = pw * c0 - px * c1 - py * c2 - pz * c3
        bx = pw * c1 + px * c0 + py * c3 - pz * c2
        by = pw * c2 - px * c3 + py * c0 + pz * c1
        bz = pw * c3 + px * c2 - py * c1 + pz * c0
        mat[0, k, p] = ct * pw + aw
        mat[1, k, p] = ct * px + ax
        mat[2, k, p] = ct * py + ay
        mat[3, k, p] = ct * pz + az
        mat[0, k, t] = ct * tw - bw
        mat[1, k, t] = ct * tx - bx
        mat[2, k, t] = ct * ty - by
        mat[3, k, t] = ct * tz - bz


def _offdiag_scalar(a):
    d, comps, n, _ = a.shape
    total = 0.0
    for r in range(d):
        for c in range(comps):
            for i in range(n):
                for j in range(n):
                    if i != j:
                        v = a[r, c, i, j]
                        total += v * v
    return total


USING_NUMBA = False
jacobi_sweep = _sweep_numpy
offdiag_energy = offdiag_energy_numpy

if not PURE_NUMPY:
    try:
        import numba

        _rot_rows = numba.njit(cache=True)(_rot_rows)
        _rot_cols = numba.njit(cache=True)(_rot_cols)
        jacobi_sweep = numba.njit(cache=True)(_sweep_scalar)
        offdiag_energy = numba.njit(cache=True)(_offdiag_scalar)
        USING_NUMBA = True
    except ImportError:                             # pragma: no cover
        pass
