#pragma once

#include "lgt/core.hpp"

namespace lgt {

/// Ladder operator that lowers one flux register: P|r> = |r-1>.
/// Non-cyclic: the bottom state is annihilated (strictly sub-diagonal band).
/// Cyclic: wraps |−l> to |l> and is unitary.
SparseCx lowering_op(int l, bool cyclic);

/// Band part of the cyclic ladder on a [-L, L] register: matrix elements
/// |r-1><r| kept only for r in [1-l, l], everything else dropped.
SparseCx lowering_band_window(int l, int L);

/// Cyclic ladder on [-L, L] with just the wrap element |L><-L| removed.
SparseCx lowering_wrap_removed(int L);

/// diag(-l..l)
SparseCx flux_op(int l);

/// diag(r^2), r = -l..l
SparseCx flux_squared_op(int l);

/// diag(exp(-i 2 pi r / (2L+1))), r = -l..l: image of the lowering operator
/// in the basis where it is diagonal.
SparseCx clock_phase_op(int l, int L);

/// Trigonometric ladder expansion representing the linear flux operator in
/// the conjugate basis; built from powers of `P`.  With the cyclic ladder at
/// l == L this equals the exact conjugate-basis image of flux_op.
SparseCx conjugate_flux_op(int l, int L, bool cyclic);

/// Same for the squared flux operator; the constant part L(L+1)/3 of the
/// spectrum is not representable by ladder powers and is dropped (tracked by
/// the builders as an explicit energy offset).
SparseCx conjugate_flux_squared_op(int l, int L, bool cyclic);

/// Variants of the conjugate-basis operators built from an arbitrary ladder
/// matrix on a [-W, W] register (used by the truncation diagnostics).
SparseCx conjugate_flux_from_ladder(const SparseCx& ladder, int L);
SparseCx conjugate_flux_squared_from_ladder(const SparseCx& ladder, int L);

/// Centered window of the discrete Fourier transform of the cyclic group
/// with 2L+1 elements: entries exp(+i 2 pi j k/(2L+1)) / sqrt(2L+1) for
/// j, k = -l..l.  Square and unitary when l == L.
DenseCx dft_window(int l, int L);

/// op acting on register `which` of `count` registers with `levels` states
/// each, identity elsewhere; optionally a trailing factor of dimension
/// `tail_dim` (e.g. a matter space) is appended.
SparseCx embed_register(const SparseCx& op, int which, int count, int levels,
                        std::int64_t tail_dim = 1);

/// Kronecker product (a is the most significant factor).
SparseCx kron(const SparseCx& a, const SparseCx& b);

SparseCx sparse_identity(std::int64_t dim);

}  // namespace lgt
