"""Independent high-precision route to the BBO constants frozen in test_dispersion.cpp.

Uses mpmath (50 digits): the matching angle from the index-ellipse equation,
group delays by analytic differentiation of k(omega), and the pump walk-off
from the closed-form Poynting angle tan(rho) = (n^2/2) (1/n_e^2 - 1/n_o^2) sin(2 theta).
"""
import mpmath as mp

mp.mp.dps = 50
C = mp.mpf("0.299792458")  # um/fs
L = mp.mpf(2000)           # um
LP = mp.mpf("0.515")
LS = 2 * LP
SO = [mp.mpf(x) for x in ("2.7359", "0.01878", "0.01822", "0.01354")]
SE = [mp.mpf(x) for x in ("2.3753", "0.01224", "0.01667", "0.01516")]


def n(coef, lam):
    a, b, c, d = coef
    return mp.sqrt(a + b / (lam**2 - c) - d * lam**2)


def ne_theta(lam, th):
    return 1 / mp.sqrt(mp.cos(th) ** 2 / n(SO, lam) ** 2 + mp.sin(th) ** 2 / n(SE, lam) ** 2)


def main():
    theta = mp.findroot(lambda th: ne_theta(LP, th) - n(SO, LS), mp.mpf("0.4"))
    ws = 2 * mp.pi * C / LS
    ks = lambda w: n(SO, 2 * mp.pi * C / w) * w / C
    kp = lambda w: ne_theta(2 * mp.pi * C / w, theta) * w / C
    k1s = mp.diff(ks, ws)
    k1p = mp.diff(kp, 2 * ws)
    k2s = mp.diff(ks, ws, 2)
    npump = ne_theta(LP, theta)
    tan_rho = npump**2 / 2 * (1 / n(SE, LP) ** 2 - 1 / n(SO, LP) ** 2) * mp.sin(2 * theta)
    # Optic axis tilted toward -x: the pump energy walks toward -x, dk_z/dq_x = -tan(rho).
    rho_p = -abs(tan_rho)
    print("n_o(1030 nm)      %.15f" % n(SO, LS))
    print("n_e(515 nm)       %.15f" % n(SE, LP))
    print("theta_c (deg)     %.10f" % mp.degrees(theta))
    print("k1_signal (fs/um) %.12f" % k1s)
    print("k1_pump (fs/um)   %.12f" % k1p)
    print("k2_signal (fs2/um) %.12e" % k2s)
    print("tau_gvm (fs)      %.8f" % (L * (k1s - k1p)))
    print("rho_p (deg)       %.10f" % mp.degrees(mp.atan(rho_p)))
    print("l_woff (um)       %.8f" % (L * rho_p))


if __name__ == "__main__":
    main()
