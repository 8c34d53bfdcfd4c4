"""Cross-check for the four-site periodic cell with staggered fermions.

Builds the gauge+matter Hamiltonian in both representations with scipy and
reports spectra, charge conservation and plaquette values used to pin the
C++ test expectations.
"""
import numpy as np
import scipy.sparse as sp
from single_plaquette_oracle import lowering, trig_ops, ground_state_sp, coeff_sin, coeff_cos

I2 = sp.identity(2, format='csr')
SZ = sp.csr_matrix(np.diag([1.0, -1.0]))
SM = sp.csr_matrix(np.array([[0.0, 1.0], [0.0, 0.0]]))  # |0><1| annihilate
NUM = sp.csr_matrix(np.diag([0.0, 1.0]))

def kron_list(ops):
    out = ops[0]
    for o in ops[1:]:
        out = sp.kron(out, o, format='csr')
    return out

def fermion_ops():
    # Jordan-Wigner chain over the four sites in snake order
    # order positions: 1=(0,0), 2=(0,1), 3=(1,1), 4=(1,0)
    psis = []
    for k in range(4):
        ops = [SZ]*k + [SM] + [I2]*(3-k)
        psis.append(kron_list(ops))
    ns = []
    for k in range(4):
        ops = [I2]*k + [NUM] + [I2]*(3-k)
        ns.append(kron_list(ops))
    return psis, ns

def embed(op_reg, which, d, nf=16):
    # five registers x fermions; which in 0..4 selects register, 5 selects fermion factor
    mats = []
    for k in range(5):
        mats.append(op_reg if k == which else sp.identity(d, format='csr'))
    mats.append(sp.identity(nf, format='csr'))
    return kron_list(mats)

def embed_f(op_f, d):
    return kron_list([sp.identity(d, format='csr')]*5 + [op_f])

def embed_pair(op_reg, which, op_f, d):
    mats = []
    for k in range(5):
        mats.append(op_reg if k == which else sp.identity(d, format='csr'))
    mats.append(op_f)
    return kron_list(mats)

def build_matter(l, L, g2, m, kappa, rep, cyclic=False):
    d = 2*l + 1
    psis, ns = fermion_ops()
    q = [ns[0], ns[1] - sp.identity(16, format='csr'), ns[2], ns[3] - sp.identity(16, format='csr')]
    # charge labels by lattice site: q00=q[0], q01=q[1], q11=q[2], q10=q[3]
    q00, q01, q11, q10 = q
    if rep == 'e':
        r = sp.csr_matrix(np.diag(np.arange(-l, l+1, dtype=float)))
        r2 = r @ r
        P = sp.csr_matrix(lowering(l, cyclic=cyclic))
        Y = [embed(r, k, d) for k in range(5)]       # linear field ops
        X = [embed(r2, k, d) for k in range(5)]      # squared field ops
        Pj = [embed(P, k, d) for k in range(3)]
        Px, Py = embed(P, 3, d), embed(P, 4, d)
        ins = [sp.identity(d**5*16, format='csr'), Px, Pj[0], Pj[1].conj().T @ Px,
               sp.identity(d**5*16, format='csr'), Py,
               sp.identity(d**5*16, format='csr'), Pj[1].conj().T @ Pj[2].conj().T @ Py]
        hb_op = -(Pj[0] + Pj[1] + Pj[2] + (Pj[0] @ Pj[1] @ Pj[2]).conj().T)
        HB = (hb_op + hb_op.conj().T) * (1.0/(2*g2))
    else:
        S, C = trig_ops(l, L, cyclic=(l == L))
        S = sp.csr_matrix(S); C = sp.csr_matrix(C)
        th = 2*np.pi/(2*L+1)
        rr = np.arange(-l, l+1, dtype=float)
        ph = sp.csr_matrix(np.diag(np.exp(-1j*th*rr)))   # image of the lowering op
        Y = [embed(S, k, d) for k in range(5)]
        X = [embed(C, k, d) for k in range(5)]
        Pj = [embed(ph, k, d) for k in range(3)]
        Px, Py = embed(ph, 3, d), embed(ph, 4, d)
        ins = [sp.identity(d**5*16, format='csr'), Px, Pj[0], Pj[1].conj().T @ Px,
               sp.identity(d**5*16, format='csr'), Py,
               sp.identity(d**5*16, format='csr'), Pj[1].conj().T @ Pj[2].conj().T @ Py]
        c1 = np.cos(th*rr)
        diag3 = np.add.outer(np.add.outer(c1, c1), c1)
        rsum = np.add.outer(np.add.outer(rr, rr), rr)
        diag3 = diag3 + np.cos(th*rsum)
        hb3 = sp.csr_matrix(np.diag(-diag3.reshape(-1)/(1.0*g2)))
        HB = kron_list([hb3, sp.identity(d, format='csr'), sp.identity(d, format='csr'), sp.identity(16, format='csr')])
    R1, R2, R3, Rx, Ry = Y
    Q00, Q01, Q11, Q10 = (embed_f(x, d) for x in (q00, q01, q11, q10))
    HE = g2 * (2.0*(X[0] + X[1] + X[2] - R2 @ (R1 + R3))
               + X[3] + X[4]
               + (R1 + R2 - R3) @ Rx
               - (R1 - R2 - R3) @ Ry
               - (Q10 @ (R1 + Rx) + Q01 @ (R2 - R1 + Ry) + Q11 @ (2.0*R1 - R2 + Rx))
               + 0.5*(Q10 @ Q10 + Q01 @ Q01 + 2.0*Q11 @ (Q10 + Q11)))
    HM = m * embed_f(ns[0] - ns[1] + ns[2] - ns[3], d)
    hops = [(psis[0].conj().T @ psis[3], ins[0]), (psis[0].conj().T @ psis[3], ins[1]),
            (psis[1].conj().T @ psis[2], ins[2]), (psis[1].conj().T @ psis[2], ins[3]),
            (psis[0].conj().T @ psis[1], ins[4]), (psis[0].conj().T @ psis[1], ins[5]),
            (psis[3].conj().T @ psis[2], ins[6]), (psis[3].conj().T @ psis[2], ins[7])]
    HK = sp.csr_matrix((d**5*16, d**5*16), dtype=complex)
    for fop, insertion in hops:
        term = insertion @ embed_f(fop, d)
        HK = HK + kappa*(term + term.conj().T)
    H = (HE + HB + HM + HK).tocsr()
    Qtot = Q00 + Q01 + Q11 + Q10
    return H, HB, Qtot

if __name__ == '__main__':
    import sys
    g2 = 0.5; m = 10.0; kappa = 10.0; l = 1
    He, HBe, Qe = build_matter(l, l, g2, m, kappa, 'e')
    Hb, HBb, Qb = build_matter(l, l, g2, m, kappa, 'b')
    print("dim:", He.shape[0])
    print("herm e:", abs((He - He.conj().T)).max(), " herm b:", abs((Hb - Hb.conj().T)).max())
    print("charge comm e:", abs((He @ Qe - Qe @ He)).max(), " b:", abs((Hb @ Qb - Qb @ Hb)).max())
    shift = (8.0/3.0)*g2*l*(l+1)
    from scipy.linalg import eigvalsh
    we = np.sort(eigvalsh(He.toarray()))[:40]
    wb = np.sort(eigvalsh(Hb.toarray()))[:40] + shift
    print("duality l=L spectra residual (lowest 40):", np.abs(we - wb).max())
    for ginv2 in (0.2, 0.5, 1.0, 2.0, 3.0, 5.0, 10.0):
        g2 = 1.0/ginv2
        H, HB, Q = build_matter(l, l, g2, m, kappa, 'e')
        w, v = ground_state_sp(H)
        box = -g2*np.real(np.vdot(v, HB @ v))/4.0
        print("electric l=1 g^-2=%-4g E0=%.8f box=%.7f <Q>=%.3e" % (ginv2, w, box, np.real(np.vdot(v, Q @ v))), flush=True)
