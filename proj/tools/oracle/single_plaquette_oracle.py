"""Reference implementation (dense/sparse NumPy) for the single-plaquette models.

Independent oracle used to freeze expected values for the C++ test suite.
Everything here is written directly from the operator definitions, with no
shared code with the C++ library, so agreement between the two is meaningful.

Conventions
-----------
* One periodic plaquette on a 2x2 torus: three rotator registers (r1, r2, r3)
  and, when matter is present, two string registers (rx, ry).
* Each register is truncated to r in [-l, l]; basis index i = r + l.
* Mixed-radix composite index with the first register most significant.
* P lowers: P|r> = |r-1>, annihilating |-l> (band matrix), or cyclically
  wrapping |-L> -> |L> for the full Z_{2L+1} group.
* The magnetic (dual) basis is related to the electric one by the discrete
  Fourier transform W with <j|W|k> = exp(+i 2 pi j k / N) / sqrt(N).
"""

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.special import polygamma


# ---------------------------------------------------------------------------
# Replacement coefficients: resummed Fourier coefficients that reproduce
# r and r^2 exactly on the integer grid r in [-L, L] of Z_{2L+1}.
# ---------------------------------------------------------------------------

def coeff_sin(L):
    """f^s_nu, nu = 1..2L  (index 0 of the returned array is nu=1)."""
    N = 2 * L + 1
    nu = np.arange(1, 2 * L + 1, dtype=float)
    return ((-1.0) ** (nu + 1) / (2.0 * np.pi)) * (
        polygamma(0, (N + nu) / (2.0 * N)) - polygamma(0, nu / (2.0 * N))
    )


def coeff_cos(L):
    """f^c_nu, nu = 1..2L."""
    N = 2 * L + 1
    nu = np.arange(1, 2 * L + 1, dtype=float)
    return ((-1.0) ** nu / (4.0 * np.pi ** 2)) * (
        polygamma(1, nu / (2.0 * N)) - polygamma(1, (N + nu) / (2.0 * N))
    )


# ---------------------------------------------------------------------------
# Single-register operators.
# ---------------------------------------------------------------------------

def lowering(l, cyclic=False):
    d = 2 * l + 1
    P = np.zeros((d, d))
    for i in range(1, d):
        P[i - 1, i] = 1.0
    if cyclic:
        P[d - 1, 0] = 1.0
    return P


def number_op(l):
    return np.diag(np.arange(-l, l + 1, dtype=float))


def trig_ops(l, L, cyclic):
    """(S, C): the dual-basis images of R and R^2 - L(L+1)/3.

    S = sum_nu f^s_nu (P^nu - P+^nu) / (2i),  C = sum_nu f^c_nu (P^nu + P+^nu)/2,
    built from the truncated band P (cyclic=False) or the full group shift.
    """
    fs, fc = coeff_sin(L), coeff_cos(L)
    P = lowering(l, cyclic)
    d = P.shape[0]
    S = np.zeros((d, d), dtype=complex)
    C = np.zeros((d, d), dtype=complex)
    Pnu = np.eye(d)
    for nu in range(1, 2 * L + 1):
        Pnu = Pnu @ P
        if not Pnu.any():
            break
        S += fs[nu - 1] * (Pnu - Pnu.conj().T) / 2j
        C += fc[nu - 1] * (Pnu + Pnu.conj().T) / 2.0
    return S, C


def dft_window(l, L):
    """(2l+1)x(2l+1) block of the Z_{2L+1} DFT, <j|W|k> = e^{i 2 pi jk/N}/sqrt(N)."""
    N = 2 * L + 1
    j = np.arange(-l, l + 1)
    return np.exp(1j * 2.0 * np.pi * np.outer(j, j) / N) / np.sqrt(N)


def kron3(a, b, c):
    return np.kron(np.kron(a, b), c)


def embed3(op, which, d):
    """Embed a one-register operator at position `which` of three registers."""
    eye = np.eye(d)
    mats = [eye, eye, eye]
    mats[which] = op
    return kron3(*mats)


# ---------------------------------------------------------------------------
# Pure-gauge Hamiltonians (three rotators).
# ---------------------------------------------------------------------------

def electric_hamiltonian(l, g2, cyclic=False, a=1.0):
    """H = H_E + H_B in the electric basis; rotator truncation r in [-l,l]."""
    d = 2 * l + 1
    r = np.arange(-l, l + 1, dtype=float)
    r1 = np.repeat(r, d * d)
    r2 = np.tile(np.repeat(r, d), d)
    r3 = np.tile(r, d * d)
    HE = 2.0 * g2 * (r1**2 + r2**2 + r3**2 - r2 * (r1 + r3))
    P = lowering(l, cyclic)
    P1, P2, P3 = (embed3(P, k, d) for k in range(3))
    B = P1 + P2 + P3 + P1 @ P2 @ P3
    HB = -(B + B.conj().T) / (2.0 * g2 * a * a)
    return np.diag(HE) + HB, np.diag(HE), HB


def magnetic_hamiltonian(l, L, g2, a=1.0):
    """H = H_E + H_B in the magnetic basis, window r in [-l,l] of Z_{2L+1}.

    For l == L nothing is cut, so the register operators keep the cyclic
    wrap and the build is exactly the Fourier image of the electric one.
    For l < L the band (non-cyclic) lowering operators are used.
    """
    if l > L:
        raise ValueError("window larger than group")
    cyclic = (l == L)
    d = 2 * l + 1
    N = 2 * L + 1
    th = 2.0 * np.pi / N
    S, C = trig_ops(l, L, cyclic)
    S1, S2, S3 = (embed3(S, k, d) for k in range(3))
    C1, C2, C3 = (embed3(C, k, d) for k in range(3))
    HE = 2.0 * g2 * (C1 + C2 + C3 - S2 @ (S1 + S3))
    r = np.arange(-l, l + 1, dtype=float)
    r1 = np.repeat(r, d * d)
    r2 = np.tile(np.repeat(r, d), d)
    r3 = np.tile(r, d * d)
    HBdiag = -(np.cos(th * r1) + np.cos(th * r2) + np.cos(th * r3)
               + np.cos(th * (r1 + r2 + r3))) / (g2 * a * a)
    return HE + np.diag(HBdiag), HE, np.diag(HBdiag)


def ground_state(H, sparse_threshold=1200):
    n = H.shape[0]
    if n <= sparse_threshold:
        w, v = np.linalg.eigh(H)
        return w[0], v[:, 0]
    Hs = sp.csr_matrix(H)
    w, v = spla.eigsh(Hs, k=1, which="SA", tol=0, maxiter=20000)
    return w[0], v[:, 0]


def plaquette(psi, HB, g2, a=1.0, volume=4.0):
    return float(np.real(-(g2 * a * a / volume) * (psi.conj() @ (HB @ psi))))


# ---------------------------------------------------------------------------
# Sparse variants for larger l (memory: dense (2l+1)^3 squared is too big).
# ---------------------------------------------------------------------------

def embed3_sp(op, which, d):
    op = sp.csr_matrix(op)
    left = sp.identity(d ** which, format="csr")
    right = sp.identity(d ** (2 - which), format="csr")
    return sp.kron(sp.kron(left, op, format="csr"), right, format="csr")


def electric_hamiltonian_sp(l, g2, cyclic=False, a=1.0):
    d = 2 * l + 1
    r = np.arange(-l, l + 1, dtype=float)
    r1 = np.repeat(r, d * d)
    r2 = np.tile(np.repeat(r, d), d)
    r3 = np.tile(r, d * d)
    HE = sp.diags(2.0 * g2 * (r1**2 + r2**2 + r3**2 - r2 * (r1 + r3)))
    P = sp.csr_matrix(lowering(l, cyclic))
    P1, P2, P3 = (embed3_sp(P, k, d) for k in range(3))
    B = P1 + P2 + P3 + P1 @ P2 @ P3
    HB = -(B + B.conj().T) / (2.0 * g2 * a * a)
    return (HE + HB).tocsr(), HE.tocsr(), HB.tocsr()


def magnetic_hamiltonian_sp(l, L, g2, a=1.0):
    if l > L:
        raise ValueError("window larger than group")
    d = 2 * l + 1
    N = 2 * L + 1
    th = 2.0 * np.pi / N
    S, C = trig_ops(l, L, l == L)
    S = sp.csr_matrix(S)
    C = sp.csr_matrix(C)
    S1, S2, S3 = (embed3_sp(S, k, d) for k in range(3))
    C1, C2, C3 = (embed3_sp(C, k, d) for k in range(3))
    HE = 2.0 * g2 * (C1 + C2 + C3 - S2 @ (S1 + S3))
    r = np.arange(-l, l + 1, dtype=float)
    r1 = np.repeat(r, d * d)
    r2 = np.tile(np.repeat(r, d), d)
    r3 = np.tile(r, d * d)
    HB = sp.diags((-(np.cos(th * r1) + np.cos(th * r2) + np.cos(th * r3)
                    + np.cos(th * (r1 + r2 + r3))) / (g2 * a * a)).astype(complex))
    return (HE + HB).tocsr(), HE.tocsr(), HB.tocsr()


def ground_state_sp(H, tol=0):
    w, v = spla.eigsh(H, k=1, which="SA", maxiter=40000, tol=tol)
    return w[0], v[:, 0]


def window_overlap(v_small, v_big, l_small, l_big):
    """|<v_small| Pi |v_big>| over the common window [-l_small, l_small]^3."""
    db = 2 * l_big + 1
    off = l_big - l_small
    ids = []
    for a_ in range(2 * l_small + 1):
        for b_ in range(2 * l_small + 1):
            for c_ in range(2 * l_small + 1):
                ids.append(((a_ + off) * db + (b_ + off)) * db + (c_ + off))
    return np.vdot(v_small, v_big[ids])
