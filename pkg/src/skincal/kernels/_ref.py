"""Pure-numpy reference kernels for the optimizer's inner loop.

Both backends expose the same three functions; the compiled module in
_core.pyx mirrors this file operation-for-operation.
"""
import numpy as np

BACKEND = "python"


def su_pose(params):
    """(R, t) of the host-joint-to-SU transform from the six parameters.

    params = (d_v, theta_v, d_su, theta_su, a_su, alpha_su).
    """
    d_v, theta_v, d_su, theta_su, a_su, alpha_su = [float(p) for p in params]
    cv, sv = np.cos(theta_v), np.sin(theta_v)
    cs, ss = np.cos(theta_su), np.sin(theta_su)
    ca, sa = np.cos(alpha_su), np.sin(alpha_su)
    Rv = np.array([[cv, -sv, 0.0], [sv, cv, 0.0], [0.0, 0.0, 1.0]])
    Rx = np.array([[1.0, 0.0, 0.0], [0.0, ca, -sa], [0.0, sa, ca]])
    Rs = np.array([[cs, -ss, 0.0], [ss, cs, 0.0], [0.0, 0.0, 1.0]])
    R = Rv @ Rx @ Rs
    t_su = np.array([a_su, -d_su * sa, d_su * ca])
    t = np.array([0.0, 0.0, d_v]) + Rv @ t_su
    return R, t


def static_cost(angles, d_fixed, R_bn, a_meas, g):
    """Mean squared gravity-alignment residual over static poses.

    angles = (theta_v, theta_su, alpha_su); d_fixed = (d_v, d_su, a_su)
    has no effect on the value and is accepted for interface symmetry.
    """
    R_nk, _ = su_pose(
        (d_fixed[0], angles[0], d_fixed[1], angles[1], d_fixed[2], angles[2])
    )
    # b = R_bn @ R_nk @ a per pose
    b = np.einsum("pij,jk,pk->pi", R_bn, R_nk, a_meas)
    resid = b - g[None, :]
    return float(np.sum(resid * resid) / R_bn.shape[0])


def dynamic_cost(trans, angles, R_dn, t_dn, R_bn, qdot, qddot, a_meas, g, inv_p):
    """Dynamic acceleration residual, (1/P)-normalized over flattened samples.

    trans = (d_v, d_su, a_su), angles = (theta_v, theta_su, alpha_su).
    Per sample m the predicted reading is
        R_bk^T g + R_dk^T (qdot x (qdot x r) + qddot x r)
    with r the SU position in the excited joint's frame.
    """
    R_nk, t_nk = su_pose(
        (trans[0], angles[0], trans[1], angles[1], trans[2], angles[2])
    )
    r = np.einsum("mij,j->mi", R_dn, t_nk) + t_dn          # (M, 3)
    R_dk = np.einsum("mij,jk->mik", R_dn, R_nk)
    R_bk = np.einsum("mij,jk->mik", R_bn, R_nk)
    omega = np.zeros((r.shape[0], 3))
    omega[:, 2] = qdot
    alpha = np.zeros((r.shape[0], 3))
    alpha[:, 2] = qddot
    motion = np.cross(omega, np.cross(omega, r)) + np.cross(alpha, r)
    pred = np.einsum("mji,j->mi", R_bk, g) + np.einsum("mji,mj->mi", R_dk, motion)
    resid = a_meas - pred
    return float(np.sum(resid * resid) * inv_p)
