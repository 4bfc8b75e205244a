"""Independent scalar oracle for the frozen expected values in the unit tests.

Evaluated with mpmath at 40 digits, straight from the closed-form
expressions, without touching the C++ implementation.
Run: python3 tests/oracles/derive_values.py
"""
import mpmath as mp

mp.mp.dps = 40


def gaussian_rule(z, m, sigma):
    acc = mp.mpf(1)
    for zi, mi, si in zip(z, m, sigma):
        acc *= mp.e ** (-((zi - mi) ** 2) / si ** 2)
    return acc


def main():
    print("activation n=1 z=1 m=0 sigma=2:", mp.nstr(gaussian_rule([1], [0], [2]), 20))
    print("activation n=2 z=0 m=3 sigma=1:", mp.nstr(gaussian_rule([0, 0], [3, 3], [1, 1]), 20))
    u = 1 * gaussian_rule([1], [0], [2]) + (-2) * gaussian_rule([1], [1], [2])
    print("two-node u_fnn:", mp.nstr(u, 20))

    # center update: dt * eta_m * s * xi * gamma * 2 (z - m) / sigma^2
    g = gaussian_rule([1], [0], [2])
    dm = mp.mpf("1e-3") * mp.mpf("0.015") * mp.mpf("0.5") * 1 * g * 2 * (1 - 0) / 4
    print("center update:", mp.nstr(dm, 20))
    dxi = mp.mpf("1e-3") * mp.mpf("0.015") * mp.mpf("0.5") * g
    print("weight update (eta_xi=0.015):", mp.nstr(dxi, 20))

    # growth score at R=0, dt=0, err=E_th, gamma_max=0
    r_max, t_max, e_th = 25, mp.mpf("0.9e-3"), mp.mpf("1e-5")
    parts = (1 - mp.mpf(0) / r_max, 1 - mp.mpf(0) / t_max, e_th / e_th, 1)
    print("growth parts:", parts, "score:", parts[0] * parts[1] * parts[2] * parts[3])

    # sliding value n=2, k=(2,1), e=0.5, edot=-0.1, integral=0.3
    print("sliding value:", mp.mpf("-0.1") + 2 * mp.mpf("0.5") + 1 * mp.mpf("0.3"))
    # equivalent control h=1, fn=-1, xc''=0.5, k=(2,1), edot=0.1, e=0.2
    print("equivalent control:", (1 + mp.mpf("0.5") + 2 * mp.mpf("0.1") + 1 * mp.mpf("0.2")) / 1)
    # Lyapunov derivative estimates
    print("vdot decreasing:", (mp.mpf("0.125") - mp.mpf("0.5")) / mp.mpf("0.001"))
    print("vdot increasing:", (mp.mpf("0.5") - mp.mpf("0.125")) / mp.mpf("0.001"))

    # plant: fn = -x - 0.5 xdot at X=(1,0)
    print("plant accel:", -1 - mp.mpf("0.5") * 0)
    # decoupled joint: (tau - b qdot - g)/m
    print("joint accel:", (1 - mp.mpf("0.1") - mp.mpf("0.5")) / 2)
    # exp(-0.001)
    print("exp(-0.001):", mp.nstr(mp.e ** mp.mpf("-0.001"), 25))

    # affine IK instance A=[[1,2,0],[0,1,-1],[3,0,1]], c=(0.1,-0.2,0.3), p=(0.5,-1,2)
    A = mp.matrix([[1, 2, 0], [0, 1, -1], [3, 0, 1]])
    c = mp.matrix([0.1, -0.2, 0.3])
    p = mp.matrix([0.5, -1, 2])
    q = A * p + c
    print("affine ik:", [mp.nstr(v, 17) for v in q])


if __name__ == "__main__":
    main()
