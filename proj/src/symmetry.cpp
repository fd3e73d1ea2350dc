#include "ptdimer/symmetry.hpp"

#include <bit>
#include <cmath>

#include "ptdimer/detail/poly.hpp"

namespace ptdimer {

namespace {

bool in_zero_block(int label) { return label >= 2 && label <= 5; }

bool same_block(int a, int b) {
    if (a == b) return true;
    return in_zero_block(a) && in_zero_block(b);
}

} // namespace

SzBlocks split_sz(const HamiltonianMatrix& h) {
    for (int i = 1; i <= 6; ++i)
        for (int j = 1; j <= 6; ++j)
            if (!same_block(i, j) && h.entry(i, j) != 0.0)
                throw BlockStructureError("split_sz: nonzero entry (" + std::to_string(i) + "," +
                                          std::to_string(j) + ") crosses Sz blocks");
    SzBlocks b;
    b.plus_one = h.entry(1, 1);
    b.minus_one = h.entry(6, 6);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            b.zero[static_cast<size_t>(r) * 4 + static_cast<size_t>(c)] = h.entry(r + 2, c + 2);
    return b;
}

HamiltonianMatrix reassemble(const SzBlocks& blocks) {
    std::array<cplx, 36> e{};
    e[0] = blocks.plus_one;
    e[35] = blocks.minus_one;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            e[static_cast<size_t>(r + 1) * 6 + static_cast<size_t>(c + 1)] =
                blocks.zero_at(r, c);
    return HamiltonianMatrix(e);
}

std::array<double, 36> parity_matrix() {
    std::array<double, 36> p{};
    for (int ket = 1; ket <= 6; ++ket) {
        // Rebuild the ket's defining product with sites swapped, applying the
        // swapped creation operators in the original order (rightmost first);
        // the reordering sign comes out of the algebra.
        const FullState orig = embed(StateVector::basis(ket));
        unsigned mask = 0;
        for (unsigned m = 0; m < FullState::dim; ++m)
            if (orig.amp(m) != 0.0) mask = m;
        std::array<int, FullState::n_modes> modes{};
        int count = 0;
        for (int m = 0; m < FullState::n_modes; ++m)
            if (mask & (1u << m)) modes[static_cast<size_t>(count++)] = m;
        FullState image = FullState::vacuum();
        for (int k = count - 1; k >= 0; --k) {
            const int swapped = modes[static_cast<size_t>(k)] ^ 2; // site 1 <-> site 2
            const int site = swapped >= 2 ? 1 : 2;
            const Spin spin = (swapped % 2 == 0) ? Spin::down : Spin::up;
            image = apply_creation(image, site, spin);
        }
        const StateVector v = project_n2(image);
        for (int bra = 1; bra <= 6; ++bra)
            p[static_cast<size_t>(bra - 1) * 6 + static_cast<size_t>(ket - 1)] =
                v.amp(bra).real();
    }
    return p;
}

bool check_pt_characteristic(const HamiltonianMatrix& h, double tol) {
    if (!(tol > 0)) throw std::invalid_argument("check_pt_characteristic: tol must be > 0");
    const SzBlocks b = split_sz(h);
    const detail::CPoly cp = detail::char_poly(std::span<const cplx>(b.zero), 4);
    for (const cplx& c : detail::poly_coeffs(cp))
        if (std::abs(c.imag()) >= tol) return false;
    return true;
}

bool check_pt_similarity(const HamiltonianMatrix& h, double tol) {
    if (!(tol > 0)) throw std::invalid_argument("check_pt_similarity: tol must be > 0");
    const std::array<double, 36> p = parity_matrix();
    // m = P * conj(h)^T * P; P is its own inverse.
    std::array<cplx, 36> hdag{};
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            hdag[static_cast<size_t>(i) * 6 + static_cast<size_t>(j)] =
                std::conj(h.entry(j + 1, i + 1));
    std::array<cplx, 36> tmp{};
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            cplx s = 0;
            for (int k = 0; k < 6; ++k)
                s += p[static_cast<size_t>(i) * 6 + static_cast<size_t>(k)] *
                     hdag[static_cast<size_t>(k) * 6 + static_cast<size_t>(j)];
            tmp[static_cast<size_t>(i) * 6 + static_cast<size_t>(j)] = s;
        }
    double worst = 0;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            cplx s = 0;
            for (int k = 0; k < 6; ++k)
                s += tmp[static_cast<size_t>(i) * 6 + static_cast<size_t>(k)] *
                     p[static_cast<size_t>(k) * 6 + static_cast<size_t>(j)];
            worst = std::max(worst, std::abs(s - h.entry(i + 1, j + 1)));
        }
    return worst < tol;
}

} // namespace ptdimer
