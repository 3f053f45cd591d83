"""Pure numpy RK4 for psi' = -i (A + s B) psi; same contract as the compiled kernel."""

import numpy as np


def rk4_affine(psi0, a, b, s0, h, nsteps):
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    psi = np.array(psi0, dtype=np.complex128, copy=True)
    if a.shape != (psi.size, psi.size) or b.shape != a.shape:
        raise ValueError("matrix and state dimensions disagree")
    half = 0.5 * h
    for step in range(int(nsteps)):
        s = s0 + step * h
        k1 = -1j * ((a + s * b) @ psi)
        hm = a + (s + half) * b
        k2 = -1j * (hm @ (psi + half * k1))
        k3 = -1j * (hm @ (psi + half * k2))
        k4 = -1j * ((a + (s + h) * b) @ (psi + h * k3))
        psi = psi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return psi
