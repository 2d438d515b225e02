import numpy as np
import pytest

from skincal import DhRow, KinematicChain, default_chain

WIDE = (-2.0 * np.pi, 2.0 * np.pi)


@pytest.fixture
def zero_chain():
    """Two all-zero DH rows: every frame coincides with the base at q=0."""
    return KinematicChain((DhRow(0, 0, 0, 0, WIDE), DhRow(0, 0, 0, 0, WIDE)))


@pytest.fixture
def chain7():
    return default_chain()


# ---------------------------------------------------------------------------
# Independent oracles, kept free of the library's closed forms.


def elem_rot_x(a):
    c, s = np.cos(a), np.sin(a)
    M = np.eye(4)
    M[1, 1], M[1, 2], M[2, 1], M[2, 2] = c, -s, s, c
    return M


def elem_rot_z(a):
    c, s = np.cos(a), np.sin(a)
    M = np.eye(4)
    M[0, 0], M[0, 1], M[1, 0], M[1, 1] = c, -s, s, c
    return M


def elem_trans_x(a):
    M = np.eye(4)
    M[0, 3] = a
    return M


def elem_trans_z(d):
    M = np.eye(4)
    M[2, 3] = d
    return M


def dh_oracle(d, theta, a, alpha):
    """Product of the four elementary transforms, as a 4x4 matrix."""
    return elem_rot_x(alpha) @ elem_trans_x(a) @ elem_rot_z(theta) @ elem_trans_z(d)


def cross_oracle(u, v):
    """Scalar-by-scalar cross product, independent of numpy.cross."""
    return np.array(
        [
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        ]
    )
