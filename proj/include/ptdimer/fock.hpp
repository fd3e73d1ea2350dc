#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>

#include "ptdimer/params.hpp"

namespace ptdimer {

enum class Spin { up, down };

/// The four single-particle modes (site, spin) are ordered by their position
/// in a canonical ket-building product of creation operators:
///
///     |occupied set> = c+_{2dn} c+_{2up} c+_{1dn} c+_{1up} |0>   (present factors only)
///
/// i.e. site-1 operators stand rightmost (act first on the vacuum) and,
/// within one site, the up operator acts first. mode_index returns the
/// left-to-right slot: 2dn=0, 2up=1, 1dn=2, 1up=3. Anticommutation signs are
/// transposition counts against this ordering.
int mode_index(int site, Spin spin);

/// Thrown when a state cannot be represented in the six-ket N=2 basis.
class SectorError : public std::runtime_error {
public:
    explicit SectorError(const std::string& what) : std::runtime_error(what) {}
};

/// One of the six N=2 basis kets, written |site-1 content, site-2 content>:
///   |1>=|up,up>  |2>=|0,updown>  |3>=|up,down>
///   |4>=|down,up>  |5>=|updown,0>  |6>=|down,down>
struct FockState {
    enum class SiteOcc { empty, up, down, updown };
    int index;                       // basis label, 1..6
    SiteOcc site1;
    SiteOcc site2;
    int sz;                          // total spin projection: +1, 0 or -1
};

FockState fock_state(int index);
const std::array<FockState, 6>& fock_basis();

/// Complex amplitude vector over the six N=2 basis kets. Indexed by the
/// 1-based basis label.
class StateVector {
public:
    StateVector() = default;
    static StateVector basis(int index);

    const cplx& amp(int index) const { return amp_.at(static_cast<size_t>(index - 1)); }
    cplx& amp(int index) { return amp_.at(static_cast<size_t>(index - 1)); }

    double norm2() const;
    bool is_zero() const;

    StateVector& operator+=(const StateVector& o);
    StateVector& operator-=(const StateVector& o);
    StateVector& operator*=(cplx s);
    friend StateVector operator+(StateVector a, const StateVector& b) { return a += b; }
    friend StateVector operator-(StateVector a, const StateVector& b) { return a -= b; }
    friend StateVector operator*(cplx s, StateVector v) { return v *= s; }

private:
    std::array<cplx, 6> amp_{};
};

// <a|b>, conjugate-linear in the first argument.
cplx inner(const StateVector& a, const StateVector& b);

/// Amplitude vector over the full 16-state two-site Fock space, indexed by
/// the occupation bitmask (bit m set = mode m occupied). Creation and
/// annihilation act exactly here; the N=2 view is a projection.
class FullState {
public:
    static constexpr int n_modes = 4;
    static constexpr unsigned dim = 16;

    FullState() = default;
    static FullState vacuum();
    static FullState basis_mask(unsigned mask);

    const cplx& amp(unsigned mask) const { return amp_.at(mask); }
    cplx& amp(unsigned mask) { return amp_.at(mask); }

    double norm2() const;
    bool is_zero() const;

    FullState& operator+=(const FullState& o);
    FullState& operator-=(const FullState& o);
    FullState& operator*=(cplx s);
    friend FullState operator+(FullState a, const FullState& b) { return a += b; }
    friend FullState operator-(FullState a, const FullState& b) { return a -= b; }
    friend FullState operator*(cplx s, FullState v) { return v *= s; }

private:
    std::array<cplx, dim> amp_{};
};

cplx inner(const FullState& a, const FullState& b);

// c+_{site,spin} and c_{site,spin} on the full space. Acting on an occupied
// (resp. empty) slot contributes nothing; the sign is -1 per transposition
// needed to restore the canonical operator ordering.
FullState apply_creation(const FullState& state, int site, Spin spin);
FullState apply_annihilation(const FullState& state, int site, Spin spin);

// Embedding of the N=2 basis into the full space and the projection back.
// project_n2 raises SectorError if any amplitude lies outside the six-ket
// sector; compositions that conserve particle number never trigger it.
FullState embed(const StateVector& v);
StateVector project_n2(const FullState& s);

// Single-operator convenience on the N=2 view: embeds, applies, projects.
// Any nonzero result of a lone c+ or c leaves the N=2 sector, so these
// return the zero vector (Pauli blocking) or raise SectorError; use the
// FullState overloads to compose c+c pairs.
StateVector apply_creation(const StateVector& v, int site, Spin spin);
StateVector apply_annihilation(const StateVector& v, int site, Spin spin);

/// Dense 6x6 operator matrix over the N=2 basis, with the Sz block layout
/// {1}, {2,3,4,5}, {6} tagged Sz = +1, 0, -1. entry(bra, ket) uses the
/// 1-based basis labels.
class HamiltonianMatrix {
public:
    static constexpr std::array<int, 1> sz_plus_labels = {1};
    static constexpr std::array<int, 4> sz_zero_labels = {2, 3, 4, 5};
    static constexpr std::array<int, 1> sz_minus_labels = {6};

    explicit HamiltonianMatrix(const std::array<cplx, 36>& entries,
                               std::optional<DimerParams> params = std::nullopt)
        : entries_(entries), params_(std::move(params)) {}

    const cplx& entry(int bra, int ket) const {
        return entries_.at(static_cast<size_t>(bra - 1) * 6 + static_cast<size_t>(ket - 1));
    }
    const std::array<cplx, 36>& raw() const noexcept { return entries_; }

    cplx trace() const;
    bool is_hermitian(double tol) const;

    // The parameters the matrix was built from, if any. A matrix edited via
    // with_entry no longer corresponds to a parameter set and carries none.
    const std::optional<DimerParams>& params() const noexcept { return params_; }

    HamiltonianMatrix with_entry(int bra, int ket, cplx value) const;

private:
    std::array<cplx, 36> entries_;
    std::optional<DimerParams> params_;
};

/// Assembles the dimer Hamiltonian by applying its second-quantized terms
///
///   sum_s [ eps+ c+_{1s}c_{1s} + eps- c+_{2s}c_{2s}
///           + t+ c+_{1s}c_{2s} + t- c+_{2s}c_{1s} ]
///   + U (n_{1up}n_{1dn} + n_{2up}n_{2dn})
///
/// to each basis ket through the operator algebra above; nothing is
/// transcribed from a printed matrix.
HamiltonianMatrix build_hamiltonian(const DimerParams& params);

} // namespace ptdimer
