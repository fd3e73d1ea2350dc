#include "ptdimer/fock.hpp"

#include <bit>

namespace ptdimer {

namespace {

// Occupation masks of the six N=2 kets, by basis label 1..6.
constexpr std::array<unsigned, 6> kBasisMask = {
    0b1010u, // |1> = |up, up>
    0b0011u, // |2> = |0, updown>
    0b1001u, // |3> = |up, down>
    0b0110u, // |4> = |down, up>
    0b1100u, // |5> = |updown, 0>
    0b0101u, // |6> = |down, down>
};

int label_of_mask(unsigned mask) {
    for (int i = 0; i < 6; ++i)
        if (kBasisMask[static_cast<size_t>(i)] == mask) return i + 1;
    return 0;
}

constexpr std::array<FockState, 6> kBasis = {{
    {1, FockState::SiteOcc::up, FockState::SiteOcc::up, +1},
    {2, FockState::SiteOcc::empty, FockState::SiteOcc::updown, 0},
    {3, FockState::SiteOcc::up, FockState::SiteOcc::down, 0},
    {4, FockState::SiteOcc::down, FockState::SiteOcc::up, 0},
    {5, FockState::SiteOcc::updown, FockState::SiteOcc::empty, 0},
    {6, FockState::SiteOcc::down, FockState::SiteOcc::down, -1},
}};

// dest += coeff * src, skipping exact zeros so untouched amplitudes stay +0.0.
void add_scaled(FullState& dest, const FullState& src, cplx coeff) {
    for (unsigned m = 0; m < FullState::dim; ++m) {
        const cplx a = src.amp(m);
        if (a != 0.0) dest.amp(m) += coeff * a;
    }
}

// c+_{cs,spin} c_{as,spin}
FullState one_body(const FullState& state, int create_site, int annihilate_site, Spin spin) {
    return apply_creation(apply_annihilation(state, annihilate_site, spin), create_site, spin);
}

// n_{site,up} n_{site,down}
FullState double_occupancy(const FullState& state, int site) {
    return one_body(one_body(state, site, site, Spin::down), site, site, Spin::up);
}

} // namespace

int mode_index(int site, Spin spin) {
    if (site != 1 && site != 2) throw std::invalid_argument("mode_index: site must be 1 or 2");
    return (site == 2 ? 0 : 2) + (spin == Spin::down ? 0 : 1);
}

FockState fock_state(int index) {
    if (index < 1 || index > 6) throw std::invalid_argument("fock_state: index must be 1..6");
    return kBasis[static_cast<size_t>(index - 1)];
}

const std::array<FockState, 6>& fock_basis() { return kBasis; }

StateVector StateVector::basis(int index) {
    StateVector v;
    v.amp(index) = 1.0;
    return v;
}

double StateVector::norm2() const {
    double n = 0;
    for (const cplx& a : amp_) n += std::norm(a);
    return n;
}

bool StateVector::is_zero() const {
    for (const cplx& a : amp_)
        if (a != 0.0) return false;
    return true;
}

StateVector& StateVector::operator+=(const StateVector& o) {
    for (size_t i = 0; i < amp_.size(); ++i) amp_[i] += o.amp_[i];
    return *this;
}

StateVector& StateVector::operator-=(const StateVector& o) {
    for (size_t i = 0; i < amp_.size(); ++i) amp_[i] -= o.amp_[i];
    return *this;
}

StateVector& StateVector::operator*=(cplx s) {
    for (cplx& a : amp_) a *= s;
    return *this;
}

cplx inner(const StateVector& a, const StateVector& b) {
    cplx r = 0;
    for (int i = 1; i <= 6; ++i) r += std::conj(a.amp(i)) * b.amp(i);
    return r;
}

FullState FullState::vacuum() { return basis_mask(0); }

FullState FullState::basis_mask(unsigned mask) {
    FullState s;
    s.amp(mask) = 1.0;
    return s;
}

double FullState::norm2() const {
    double n = 0;
    for (const cplx& a : amp_) n += std::norm(a);
    return n;
}

bool FullState::is_zero() const {
    for (const cplx& a : amp_)
        if (a != 0.0) return false;
    return true;
}

FullState& FullState::operator+=(const FullState& o) {
    for (unsigned m = 0; m < dim; ++m) amp_[m] += o.amp_[m];
    return *this;
}

FullState& FullState::operator-=(const FullState& o) {
    for (unsigned m = 0; m < dim; ++m) amp_[m] -= o.amp_[m];
    return *this;
}

FullState& FullState::operator*=(cplx s) {
    for (cplx& a : amp_) a *= s;
    return *this;
}

cplx inner(const FullState& a, const FullState& b) {
    cplx r = 0;
    for (unsigned m = 0; m < FullState::dim; ++m) r += std::conj(a.amp(m)) * b.amp(m);
    return r;
}

FullState apply_creation(const FullState& state, int site, Spin spin) {
    const int m = mode_index(site, spin);
    const unsigned bit = 1u << m;
    const unsigned below = bit - 1;
    FullState out;
    for (unsigned mask = 0; mask < FullState::dim; ++mask) {
        const cplx a = state.amp(mask);
        if (a == 0.0 || (mask & bit)) continue;
        const bool odd = std::popcount(mask & below) & 1;
        out.amp(mask | bit) += odd ? -a : a;
    }
    return out;
}

FullState apply_annihilation(const FullState& state, int site, Spin spin) {
    const int m = mode_index(site, spin);
    const unsigned bit = 1u << m;
    const unsigned below = bit - 1;
    FullState out;
    for (unsigned mask = 0; mask < FullState::dim; ++mask) {
        const cplx a = state.amp(mask);
        if (a == 0.0 || !(mask & bit)) continue;
        const bool odd = std::popcount(mask & below) & 1;
        out.amp(mask & ~bit) += odd ? -a : a;
    }
    return out;
}

FullState embed(const StateVector& v) {
    FullState s;
    for (int i = 1; i <= 6; ++i) s.amp(kBasisMask[static_cast<size_t>(i - 1)]) = v.amp(i);
    return s;
}

StateVector project_n2(const FullState& s) {
    StateVector v;
    for (unsigned mask = 0; mask < FullState::dim; ++mask) {
        const cplx a = s.amp(mask);
        if (a == 0.0) continue;
        const int label = label_of_mask(mask);
        if (label == 0)
            throw SectorError("project_n2: amplitude on mask " + std::to_string(mask) +
                              " (N=" + std::to_string(std::popcount(mask)) +
                              ") leaves the six-ket N=2 basis");
        v.amp(label) = a;
    }
    return v;
}

StateVector apply_creation(const StateVector& v, int site, Spin spin) {
    return project_n2(apply_creation(embed(v), site, spin));
}

StateVector apply_annihilation(const StateVector& v, int site, Spin spin) {
    return project_n2(apply_annihilation(embed(v), site, spin));
}

cplx HamiltonianMatrix::trace() const {
    cplx t = 0;
    for (int i = 1; i <= 6; ++i) t += entry(i, i);
    return t;
}

bool HamiltonianMatrix::is_hermitian(double tol) const {
    for (int i = 1; i <= 6; ++i)
        for (int j = 1; j <= 6; ++j)
            if (std::abs(entry(i, j) - std::conj(entry(j, i))) > tol) return false;
    return true;
}

HamiltonianMatrix HamiltonianMatrix::with_entry(int bra, int ket, cplx value) const {
    std::array<cplx, 36> e = entries_;
    e.at(static_cast<size_t>(bra - 1) * 6 + static_cast<size_t>(ket - 1)) = value;
    return HamiltonianMatrix(e);
}

HamiltonianMatrix build_hamiltonian(const DimerParams& params) {
    std::array<cplx, 36> entries{};
    for (int ket = 1; ket <= 6; ++ket) {
        const FullState in = embed(StateVector::basis(ket));
        FullState acc;
        for (Spin s : {Spin::up, Spin::down}) {
            add_scaled(acc, one_body(in, 1, 1, s), params.eps_plus());
            add_scaled(acc, one_body(in, 2, 2, s), params.eps_minus());
            add_scaled(acc, one_body(in, 1, 2, s), params.t_plus());
            add_scaled(acc, one_body(in, 2, 1, s), params.t_minus());
        }
        add_scaled(acc, double_occupancy(in, 1), params.u());
        add_scaled(acc, double_occupancy(in, 2), params.u());
        const StateVector col = project_n2(acc);
        for (int bra = 1; bra <= 6; ++bra)
            entries[static_cast<size_t>(bra - 1) * 6 + static_cast<size_t>(ket - 1)] = col.amp(bra);
    }
    return HamiltonianMatrix(entries, params);
}

} // namespace ptdimer
