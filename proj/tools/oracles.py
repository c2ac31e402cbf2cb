#!/usr/bin/env python3
"""Reference values for the unit tests, computed independently of the C++ code.

Closed forms are evaluated with mpmath at 40 digits. Philox4x64-10 reference
blocks come from numpy's bit generator. Run with no arguments to print every
value that is frozen into tests/.
"""
import mpmath as mp
import numpy as np

mp.mp.dps = 40
TWO_PI = 2 * mp.pi


def ang(mhz):
    return TWO_PI * mp.mpf(mhz)


def alpha_tla(delta, gamma):
    return 1j * gamma / (gamma + 1j * delta)


def alpha_tll(delta, cdelta, omega, gamma, gamma_r):
    return 1j * gamma / (gamma + 1j * delta + omega**2 / (gamma_r + 1j * (delta + cdelta)))


def excitation(w, n, omega, delta, cdelta, gamma):
    num = n * w * omega**2
    return num / (num + (omega**2 - delta * (delta + cdelta)) ** 2 + delta**2 * gamma**2)


def main():
    rb, length, r = mp.mpf("14.68"), mp.mpf(1000), mp.mpf("0.5")
    rho = mp.mpf("1.5e8") * mp.mpf("1e-9")  # mm^-3 -> um^-3
    cells = mp.floor(length / (2 * rb))
    n_sa = rho * mp.pi * r**2 * 2 * rb
    print("cells", cells)
    print("n_sa", n_sa)

    omega, gamma, gamma_r = ang("2.5"), ang("3.0"), ang("0.010")
    a3 = alpha_tll(0, 0, omega, gamma, gamma_r)
    closed = gamma * gamma_r / (gamma * gamma_r + omega**2)
    print("Im alpha_tll(0)", mp.im(a3), "closed form", closed)

    p = excitation(ang("1.0") ** 2, n_sa, omega, 0, 0, gamma)
    print("P(zeta=1 MHz, delta=0)", p)
    print("P via resonant reduction", n_sa * ang(1) ** 2 / (n_sa * ang(1) ** 2 + omega**2))

    for od in (mp.mpf("43.5"), mp.mpf(5)):
        print("weak-probe T(0) OD", od, mp.exp(-od * mp.im(a3)))
    od_cell = mp.mpf("43.5") / cells
    print("g factor per cell, P=1, OD 43.5", mp.exp(-od_cell * (1 - mp.im(a3))))

    # Shared-blockade case probabilities for independent uniforms.
    for p1, p2 in ((mp.mpf("0.5"), mp.mpf("0.5")), (mp.mpf("0.3"), mp.mpf("0.8"))):
        print("cases", p1, p2, (1 - p1) * (1 - p2), p1 * (1 - p2) + p2 * (1 - p1), p1 * p2)

    # numpy advances the counter before producing its first block, so the
    # first four outputs correspond to counter {1, 0, 0, 0}.
    for key in ([0, 0], [42, 7], [0xFFFFFFFFFFFFFFFF, 0x123456789ABCDEF0]):
        bg = np.random.Philox(counter=np.zeros(4, dtype=np.uint64), key=np.array(key, dtype=np.uint64))
        print("philox key", [hex(k) for k in key], [hex(int(x)) for x in bg.random_raw(4)])


if __name__ == "__main__":
    main()
