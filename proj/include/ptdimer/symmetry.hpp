#pragma once

#include <array>
#include <stdexcept>

#include "ptdimer/fock.hpp"

namespace ptdimer {

/// Thrown by split_sz when a matrix has weight outside the declared Sz
/// blocks. Operator-built Hamiltonians never violate the layout, so this
/// signals a defect upstream, not user error.
class BlockStructureError : public std::runtime_error {
public:
    explicit BlockStructureError(const std::string& what) : std::runtime_error(what) {}
};

/// The three Sz sectors of a dimer Hamiltonian: two 1x1 blocks (labels 1 and
/// 6) and the 4x4 block over labels {2,3,4,5} where the nontrivial spectrum
/// lives.
struct SzBlocks {
    cplx plus_one;
    std::array<cplx, 16> zero; // row-major over labels {2,3,4,5}
    cplx minus_one;

    const cplx& zero_at(int r, int c) const {
        return zero.at(static_cast<size_t>(r) * 4 + static_cast<size_t>(c));
    }
};

SzBlocks split_sz(const HamiltonianMatrix& h);
HamiltonianMatrix reassemble(const SzBlocks& blocks);

/// Matrix of the site-swap parity over the six basis kets, with the
/// fermionic reordering signs that fall out of the canonical operator
/// ordering. With this convention P|1> = -|1>, P|6> = -|6>, P|2> = +|5>,
/// P|3> = -|4>, and P squares to +1.
std::array<double, 36> parity_matrix();

/// Spectral PT signature: true iff every coefficient of the Sz=0 block's
/// characteristic polynomial has |imaginary part| < tol. Real coefficients
/// force the spectrum to be closed under complex conjugation.
bool check_pt_characteristic(const HamiltonianMatrix& h, double tol);

/// Explicit similarity form of the PT check. Time reversal is antiunitary;
/// on this operator basis it conjugates entries and reverses operator order
/// (matrix transpose); plain entrywise conjugation alone would flip the
/// sign of the dissipative hopping instead of preserving it. The test is
/// therefore  || P H^dagger P^-1 - H ||_max < tol  with P the parity above.
bool check_pt_similarity(const HamiltonianMatrix& h, double tol);

} // namespace ptdimer
