# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the optimizer's inner loop.

Mirrors kernels/_ref.py; see that file for the contract.
"""
import numpy as np

cimport numpy as cnp
from libc.math cimport cos, sin

cnp.import_array()

BACKEND = "cython"


cdef void _su_pose_c(double d_v, double theta_v, double d_su, double theta_su,
                     double a_su, double alpha_su,
                     double[3][3] R, double[3] t) noexcept nogil:
    cdef double cv = cos(theta_v), sv = sin(theta_v)
    cdef double cs = cos(theta_su), ss = sin(theta_su)
    cdef double ca = cos(alpha_su), sa = sin(alpha_su)
    # R = Rz(theta_v) @ Rx(alpha_su) @ Rz(theta_su)
    cdef double m00 = cs, m01 = -ss, m02 = 0.0
    cdef double m10 = ca * ss, m11 = ca * cs, m12 = -sa
    cdef double m20 = sa * ss, m21 = sa * cs, m22 = ca
    R[0][0] = cv * m00 - sv * m10
    R[0][1] = cv * m01 - sv * m11
    R[0][2] = cv * m02 - sv * m12
    R[1][0] = sv * m00 + cv * m10
    R[1][1] = sv * m01 + cv * m11
    R[1][2] = sv * m02 + cv * m12
    R[2][0] = m20
    R[2][1] = m21
    R[2][2] = m22
    # t = (0, 0, d_v) + Rz(theta_v) @ (a_su, -d_su*sa, d_su*ca)
    cdef double tx = a_su, ty = -d_su * sa, tz = d_su * ca
    t[0] = cv * tx - sv * ty
    t[1] = sv * tx + cv * ty
    t[2] = d_v + tz


def su_pose(params):
    cdef double[3][3] R
    cdef double[3] t
    _su_pose_c(params[0], params[1], params[2], params[3], params[4], params[5], R, t)
    R_out = np.empty((3, 3))
    t_out = np.empty(3)
    cdef double[:, ::1] Rv = R_out
    cdef double[::1] tv = t_out
    cdef int i, j
    for i in range(3):
        tv[i] = t[i]
        for j in range(3):
            Rv[i, j] = R[i][j]
    return R_out, t_out


def static_cost(angles, d_fixed, double[:, :, ::1] R_bn, double[:, ::1] a_meas,
                double[::1] g):
    cdef double[3][3] R
    cdef double[3] t
    _su_pose_c(d_fixed[0], angles[0], d_fixed[1], angles[1], d_fixed[2], angles[2],
               R, t)
    cdef Py_ssize_t P = R_bn.shape[0]
    cdef Py_ssize_t p, i, j
    cdef double[3] ak, b
    cdef double acc = 0.0, diff
    for p in range(P):
        for i in range(3):
            ak[i] = R[i][0] * a_meas[p, 0] + R[i][1] * a_meas[p, 1] + R[i][2] * a_meas[p, 2]
        for i in range(3):
            b[i] = R_bn[p, i, 0] * ak[0] + R_bn[p, i, 1] * ak[1] + R_bn[p, i, 2] * ak[2]
            diff = b[i] - g[i]
            acc += diff * diff
    return acc / P


def dynamic_cost(trans, angles, double[:, :, ::1] R_dn, double[:, ::1] t_dn,
                 double[:, :, ::1] R_bn, double[::1] qdot, double[::1] qddot,
                 double[:, ::1] a_meas, double[::1] g, double inv_p):
    cdef double[3][3] R_nk
    cdef double[3] t_nk
    _su_pose_c(trans[0], angles[0], trans[1], angles[1], trans[2], angles[2],
               R_nk, t_nk)
    cdef Py_ssize_t M = R_dn.shape[0]
    cdef Py_ssize_t m, i, j
    cdef double[3] r, motion, gk, pred
    cdef double[3][3] R_dk, R_bk
    cdef double w, a, acc = 0.0, diff, mx, my
    for m in range(M):
        for i in range(3):
            r[i] = t_dn[m, i]
            for j in range(3):
                r[i] += R_dn[m, i, j] * t_nk[j]
        for i in range(3):
            for j in range(3):
                R_dk[i][j] = (R_dn[m, i, 0] * R_nk[0][j]
                              + R_dn[m, i, 1] * R_nk[1][j]
                              + R_dn[m, i, 2] * R_nk[2][j])
                R_bk[i][j] = (R_bn[m, i, 0] * R_nk[0][j]
                              + R_bn[m, i, 1] * R_nk[1][j]
                              + R_bn[m, i, 2] * R_nk[2][j])
        w = qdot[m]
        a = qddot[m]
        # (0,0,w) x ((0,0,w) x r) + (0,0,a) x r
        mx = -w * w * r[0] - a * r[1]
        my = -w * w * r[1] + a * r[0]
        motion[0] = mx
        motion[1] = my
        motion[2] = 0.0
        for i in range(3):
            # transposed products: R^T @ v
            gk[i] = R_bk[0][i] * g[0] + R_bk[1][i] * g[1] + R_bk[2][i] * g[2]
            pred[i] = gk[i] + (R_dk[0][i] * motion[0]
                               + R_dk[1][i] * motion[1]
                               + R_dk[2][i] * motion[2])
            diff = a_meas[m, i] - pred[i]
            acc += diff * diff
    return acc * inv_p
