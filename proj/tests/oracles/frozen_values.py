"""Independent numpy/scipy computation of the frozen values used by the C++ unit tests."""
import numpy as np
from scipy.spatial.transform import Rotation as R


def motion(delta, tau):
    # delta about +x, then tau about -y
    return R.from_rotvec(-tau * np.array([0, 1, 0])) * R.from_rotvec(delta * np.array([1, 0, 0]))


def cross_y_axis(p, d):
    # point of the 2D line p + t d with x = 0
    t = -p[0] / d[0]
    return p + t * d


def trace(c, alpha, delta, tau):
    A = np.zeros(3)
    B = np.array([c, 0, 0])
    tB = np.array([np.cos(alpha), -np.sin(alpha), 0])
    S0 = B + (-c / tB[0]) * tB
    S = R.from_rotvec(delta * np.array([1, 0, 0])).apply(S0)
    ry = R.from_rotvec(-tau * np.array([0, 1, 0]))
    Bp = ry.apply(B)[:2]
    Spp = ry.apply(S)[:2]
    Dp = cross_y_axis(Bp, Spp - Bp)
    return {
        "AS": np.linalg.norm(S - A),
        "AS_p": S[1],
        "SS_p": S[2],
        "SpSpp": -Spp[0],
        "AD_p": Dp[1],
        "DpSp": S[1] - Dp[1],
        "AB_p": np.linalg.norm(Bp),
    }


def observables(c, alpha, beta, phi, delta, tau):
    m = motion(delta, tau)
    A = np.zeros(3)
    B = m.apply(np.array([c, 0, 0]))
    tB = m.apply(np.array([np.cos(alpha), -np.sin(alpha), 0]))
    tA = m.apply(np.array([np.cos(beta), -np.sin(beta) * np.cos(phi), -np.sin(beta) * np.sin(phi)]))
    cp = B[0]
    D = cross_y_axis(B[:2], tB[:2])
    t = (cp - A[0]) / tA[0]
    E = A[:2] + t * tA[:2]
    return {"c_prime": cp, "d_prime": D[1], "e_prime": -E[1]}


if __name__ == "__main__":
    for k, v in trace(1.5, 0.6, 0.4, 0.7).items():
        print(f"trace {k} = {v:.17g}")
    for k, v in observables(1.5, 0.6, 0.8, 1.0, 0.4, 0.7).items():
        print(f"obs {k} = {v:.17g}")
