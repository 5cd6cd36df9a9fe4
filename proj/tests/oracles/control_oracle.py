"""Independent reference values for the full-torus control (p = 1).

The field is band-limited to |k_i| <= 2, so plain grid quadrature on a
32^3 grid is exact. Prints values that the C++ tests freeze.
"""
import numpy as np
from scipy import integrate, optimize

N = 32
x = 2 * np.pi * np.arange(N) / N
k1d = np.fft.fftfreq(N, 1.0 / N)
K1, K2, K3 = np.meshgrid(k1d, k1d, k1d, indexing="ij")
KV = [K1, K2, K3]
KK = K1**2 + K2**2 + K3**2
KK_safe = np.where(KK == 0, 1, KK)
VOL = (2 * np.pi) ** 3


def s(t):
    return np.sin(t) + 0.5 * np.sin(2 * t)


def control(a):
    # centered coordinate xi = x - pi for the full-torus box
    X1, X2, X3 = np.meshgrid(x - np.pi, x - np.pi, x - np.pi, indexing="ij")
    w = (a[0] * (1 + np.cos(X1)) * s(X2) * s(X3)
         + a[1] * (1 + np.cos(X2)) * s(X1) * s(X3)
         + a[2] * (1 + np.cos(X3)) * s(X1) * s(X2))
    wh = np.fft.fftn(w) / N**3
    d = lambda i, j: np.real(np.fft.ifftn(-KV[i] * KV[j] * wh) * N**3)
    u = np.array([-d(1, 1) - d(2, 2), d(0, 1), d(0, 2)])
    uh = np.array([np.fft.fftn(c) / N**3 for c in u])
    return uh / norm(uh)


def norm(yh):
    return np.sqrt(VOL * np.sum(np.abs(yh) ** 2))


def heat(yh, t):
    return yh * np.exp(-KK * t)


def psi(yh):
    vh = 1j * np.array([KV[1] * yh[2] - KV[2] * yh[1],
                        KV[2] * yh[0] - KV[0] * yh[2],
                        KV[0] * yh[1] - KV[1] * yh[0]]) / KK_safe
    y = np.array([np.real(np.fft.ifftn(c) * N**3) for c in yh])
    total = 0.0
    for i in range(3):
        for j in range(3):
            dv = np.real(np.fft.ifftn(1j * KV[j] * vh[i]) * N**3)
            total += np.sum(y[j] * dv * y[i])
    return total * (2 * np.pi / N) ** 3


def phi(yh):
    n = norm(yh)
    return psi(yh) / n**2


if __name__ == "__main__":
    np.set_printoptions(precision=17)
    for a in [(-1, -1, 0), (1, 2, 3), (1, 1, 1)]:
        uh = control(a)
        print("psi(u)", a, repr(psi(uh)), "psi(S(0.1)u)", repr(psi(heat(uh, 0.1))))
    uh = control((-1, -1, 0))
    f = lambda t: phi(heat(uh, t))
    # integrand decays like e^{-t}; split the range at the transient
    g_inf = sum(integrate.quad(f, a, b, epsabs=1e-16, epsrel=1e-13, limit=200)[0]
                for a, b in [(0, 0.5), (0.5, 3), (3, 10), (10, 30)])
    print("g_inf", repr(g_inf))
    g = lambda t: integrate.quad(f, 0, t, epsabs=1e-16, epsrel=1e-13, limit=200)[0]
    t_star = optimize.brentq(lambda t: g(t) - g_inf / 2, 1e-6, 5, xtol=1e-14)
    print("t_star(mu=2/g_inf)", repr(t_star))
