"""High-precision reference implementations used only by the tests.

Everything here is written directly from the defining integrals and
mpmath's special functions, sharing no code with the package.
"""
import mpmath as mp

DPS = 30


def besselk(order, z):
    with mp.workdps(DPS):
        return complex(mp.besselk(order, mp.mpmathify(z)))


def g_nu(d, s, r):
    """Full-space kernel (2 pi)^(-d/2) (s/r)^lam K_lam(s r), lam = d/2 - 1."""
    with mp.workdps(DPS):
        s = mp.mpmathify(s)
        lam = mp.mpf(d) / 2 - 1
        return complex((2 * mp.pi) ** (-mp.mpf(d) / 2) * (s / r) ** lam * mp.besselk(lam, s * r))


def g_imp(d, beta, s, z):
    """Impedance correction from its integral over the vertical coordinate t.

    -2 beta (s/2pi)^(d/2) int_{z_d}^inf e^{-s beta (t - z_d)} K_lam(s mu) / mu^lam dt,
    mu = sqrt(|z'|^2 + t^2).
    """
    with mp.workdps(DPS):
        s = mp.mpmathify(s)
        beta = mp.mpf(beta)
        zd = mp.mpf(z[-1])
        om2 = mp.fsum(mp.mpf(v) ** 2 for v in z[:-1])
        lam = mp.mpf(d) / 2 - 1

        def f(t):
            m = mp.sqrt(om2 + t * t)
            return mp.exp(-s * beta * (t - zd)) * mp.besselk(lam, s * m) / m ** lam

        pts = [zd + k for k in (0, 0.5, 1, 2, 4, 8, 16)] + [mp.inf]
        val = mp.quad(f, pts)
        return complex(-2 * beta * (s / (2 * mp.pi)) ** (mp.mpf(d) / 2) * val)


def green(d, beta, s, x, y):
    with mp.workdps(DPS):
        dist = mp.sqrt(mp.fsum((mp.mpf(a) - b) ** 2 for a, b in zip(x, y)))
        z = [mp.mpf(a) - b for a, b in zip(x[:-1], y[:-1])] + [mp.mpf(x[-1]) + y[-1]]
        rr = mp.sqrt(mp.fsum(v * v for v in z))
        return g_nu(d, s, dist) + g_nu(d, s, rr) + g_imp(d, beta, s, z)


def g_imp_imag_axis(d, beta, k, z, dps=20):
    """Impedance correction at s = i k from the same t-integral, summed with quadosc.

    For s on the imaginary axis the integrand only decays algebraically and
    oscillates at rate k (beta + 1); slow (minutes per value).
    """
    with mp.workdps(dps):
        s = mp.mpc(0, k)
        beta = mp.mpf(beta)
        zd = mp.mpf(z[-1])
        om2 = mp.fsum(mp.mpf(v) ** 2 for v in z[:-1])
        lam = mp.mpf(d) / 2 - 1

        def f(t):
            m = mp.sqrt(om2 + t * t)
            return mp.exp(-s * beta * (t - zd)) * mp.besselk(lam, s * m) / m ** lam

        val = mp.quadosc(f, [zd, mp.inf], omega=k * (beta + 1))
        return complex(-2 * beta * (s / (2 * mp.pi)) ** (mp.mpf(d) / 2) * val)
