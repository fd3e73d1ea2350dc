#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>

#include "ptdimer/fock.hpp"

using namespace ptdimer;

namespace {

// The printed dimer matrix with gain/loss diagonal and t+- hopping; its
// specializations (lambda=gamma=U=0 etc.) are the fixtures the operator
// build must reproduce entry for entry.
HamiltonianMatrix printed_matrix(const DimerParams& p) {
    std::array<cplx, 36> e{};
    auto at = [&](int i, int j) -> cplx& {
        return e[static_cast<size_t>(i - 1) * 6 + static_cast<size_t>(j - 1)];
    };
    const cplx diag = p.eps_plus() + p.eps_minus();
    at(1, 1) = diag;
    at(2, 2) = p.eps_minus() + p.eps_minus() + p.u();
    at(3, 3) = diag;
    at(4, 4) = diag;
    at(5, 5) = p.eps_plus() + p.eps_plus() + p.u();
    at(6, 6) = diag;
    at(2, 3) = p.t_minus();
    at(2, 4) = -p.t_minus();
    at(3, 2) = p.t_plus();
    at(3, 5) = p.t_minus();
    at(4, 2) = -p.t_plus();
    at(4, 5) = -p.t_minus();
    at(5, 3) = p.t_plus();
    at(5, 4) = -p.t_plus();
    return HamiltonianMatrix(e);
}

void check_equal(const HamiltonianMatrix& a, const HamiltonianMatrix& b) {
    for (int i = 1; i <= 6; ++i)
        for (int j = 1; j <= 6; ++j) {
            CAPTURE(i);
            CAPTURE(j);
            CHECK(a.entry(i, j) == b.entry(i, j));
        }
}

std::mt19937_64 rng(20240817u);

DimerParams random_params(double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    return {d(rng), d(rng), d(rng), d(rng), d(rng)};
}

} // namespace

TEST_CASE("basis labels follow the ket list") {
    using Occ = FockState::SiteOcc;
    const auto& b = fock_basis();
    CHECK(b[0].site1 == Occ::up);
    CHECK(b[0].site2 == Occ::up);
    CHECK(b[1].site1 == Occ::empty);
    CHECK(b[1].site2 == Occ::updown);
    CHECK(b[2].site1 == Occ::up);
    CHECK(b[2].site2 == Occ::down);
    CHECK(b[3].site1 == Occ::down);
    CHECK(b[3].site2 == Occ::up);
    CHECK(b[4].site1 == Occ::updown);
    CHECK(b[4].site2 == Occ::empty);
    CHECK(b[5].site1 == Occ::down);
    CHECK(b[5].site2 == Occ::down);
    CHECK(b[0].sz == 1);
    CHECK(b[5].sz == -1);
    for (int i = 2; i <= 5; ++i) CHECK(fock_state(i).sz == 0);
    CHECK_THROWS_AS(fock_state(0), std::invalid_argument);
    CHECK_THROWS_AS(fock_state(7), std::invalid_argument);
}

TEST_CASE("creation on the vacuum reproduces the ordering convention") {
    const FullState vac = FullState::vacuum();

    // c+_{2dn} c+_{1up} |vac> = +|3>
    FullState s = apply_creation(apply_creation(vac, 1, Spin::up), 2, Spin::down);
    StateVector v = project_n2(s);
    CHECK(v.amp(3) == cplx(1.0));
    CHECK(v.norm2() == 1.0);

    // reversing the two operators flips the sign: c+_{1up} c+_{2dn} |vac> = -|3>
    s = apply_creation(apply_creation(vac, 2, Spin::down), 1, Spin::up);
    v = project_n2(s);
    CHECK(v.amp(3) == cplx(-1.0));

    // c+_{1dn} c+_{2up} |vac> creates |down, up>, reordered: -|4>
    s = apply_creation(apply_creation(vac, 2, Spin::up), 1, Spin::down);
    v = project_n2(s);
    CHECK(v.amp(4) == cplx(-1.0));

    // Pauli exclusion through the N=2 interface
    CHECK(apply_creation(StateVector::basis(3), 1, Spin::up).is_zero());
}

TEST_CASE("annihilation examples") {
    // c_{2dn} |0,updown> = +|0,up>: a single N=1 ket in the full space
    const FullState s = apply_annihilation(embed(StateVector::basis(2)), 2, Spin::down);
    const unsigned up2_mask = 1u << mode_index(2, Spin::up);
    CHECK(s.amp(up2_mask) == cplx(1.0));
    CHECK(s.norm2() == 1.0);

    // ... and c+_{1dn} c_{2dn} |2> = -|4>, the boxed reduction
    const StateVector v = project_n2(apply_creation(s, 1, Spin::down));
    CHECK(v.amp(4) == cplx(-1.0));

    // annihilating an empty slot gives the zero vector
    CHECK(apply_annihilation(StateVector::basis(2), 1, Spin::up).is_zero());

    // a nonzero single-operator result leaves the sector
    CHECK_THROWS_AS(apply_annihilation(StateVector::basis(2), 2, Spin::down), SectorError);
}

TEST_CASE("canonical anticommutation relations on every basis ket") {
    const std::array<std::pair<int, Spin>, 4> modes = {
        {{1, Spin::up}, {1, Spin::down}, {2, Spin::up}, {2, Spin::down}}};
    for (unsigned mask = 0; mask < FullState::dim; ++mask) {
        const FullState ket = FullState::basis_mask(mask);
        for (const auto& [sa, pa] : modes) {
            for (const auto& [sb, pb] : modes) {
                // {c+_a, c+_b} = 0
                FullState anti = apply_creation(apply_creation(ket, sb, pb), sa, pa);
                anti += apply_creation(apply_creation(ket, sa, pa), sb, pb);
                CHECK(anti.is_zero());
                // {c_a, c+_b} = delta_ab
                FullState mixed = apply_annihilation(apply_creation(ket, sb, pb), sa, pa);
                mixed += apply_creation(apply_annihilation(ket, sa, pa), sb, pb);
                const bool diag = sa == sb && pa == pb;
                for (unsigned m = 0; m < FullState::dim; ++m)
                    CHECK(mixed.amp(m) == (diag ? ket.amp(m) : cplx(0.0)));
            }
        }
    }
}

TEST_CASE("operator build reproduces the printed matrices exactly") {
    std::uniform_real_distribution<double> d(-5.0, 5.0);
    for (int draw = 0; draw < 100; ++draw) {
        const double eps = d(rng), t = d(rng), lam = d(rng), gam = d(rng), u = d(rng);
        // noninteracting symmetric dimer
        check_equal(build_hamiltonian({eps, t, 0, 0, 0}), printed_matrix({eps, t, 0, 0, 0}));
        // asymmetric hopping
        check_equal(build_hamiltonian({eps, t, lam, 0, 0}), printed_matrix({eps, t, lam, 0, 0}));
        // asymmetric hopping + interaction
        check_equal(build_hamiltonian({eps, t, lam, 0, u}), printed_matrix({eps, t, lam, 0, u}));
        // full gain/loss case
        check_equal(build_hamiltonian({eps, t, lam, gam, u}),
                    printed_matrix({eps, t, lam, gam, u}));
    }
}

TEST_CASE("reference points of the printed matrices") {
    // symmetric dimer: diagonal 2*eps, +-t pattern on the Sz=0 rows
    const HamiltonianMatrix h0 = build_hamiltonian({0.5, 1, 0, 0, 0});
    for (int i = 1; i <= 6; ++i) CHECK(h0.entry(i, i) == cplx(1.0));
    CHECK(h0.entry(2, 3) == cplx(1.0));
    CHECK(h0.entry(2, 4) == cplx(-1.0));
    CHECK(h0.entry(3, 5) == cplx(1.0));
    CHECK(h0.entry(4, 5) == cplx(-1.0));
    CHECK(h0.entry(1, 2) == cplx(0.0));

    // asymmetric hopping: t- above, t+ below
    const HamiltonianMatrix h1 = build_hamiltonian({0.5, 1, 0.5, 0, 0});
    CHECK(h1.entry(2, 3) == cplx(0.5));
    CHECK(h1.entry(3, 2) == cplx(1.5));
    CHECK(h1.entry(2, 4) == cplx(-0.5));
    CHECK(h1.entry(4, 2) == cplx(-1.5));

    // gain/loss diagonal: (1, 3-0.6i, 1, 1, 3+0.6i, 1)
    const HamiltonianMatrix h3 = build_hamiltonian({0.5, 1, 0, 0.3, 2});
    CHECK(h3.entry(1, 1) == cplx(1.0));
    CHECK(h3.entry(2, 2).real() == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(h3.entry(2, 2).imag() == doctest::Approx(-0.6).epsilon(1e-15));
    CHECK(h3.entry(5, 5).real() == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(h3.entry(5, 5).imag() == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(h3.entry(3, 3) == cplx(1.0));
}

TEST_CASE("hermiticity holds exactly when lambda = gamma = 0 and fails otherwise") {
    for (int draw = 0; draw < 50; ++draw) {
        const DimerParams p = random_params(-3, 3);
        const DimerParams herm{p.epsilon(), p.t(), 0, 0, p.u()};
        CHECK(build_hamiltonian(herm).is_hermitian(0.0));
        if (p.lambda() != 0.0)
            CHECK_FALSE(build_hamiltonian({p.epsilon(), p.t(), p.lambda(), 0, p.u()})
                            .is_hermitian(1e-12 * std::abs(p.lambda())));
        if (p.gamma() != 0.0)
            CHECK_FALSE(build_hamiltonian({p.epsilon(), p.t(), 0, p.gamma(), p.u()})
                            .is_hermitian(1e-12 * std::abs(p.gamma())));
    }
}

TEST_CASE("trace identity: 12 eps + 2 U") {
    for (int draw = 0; draw < 1000; ++draw) {
        const DimerParams p = random_params(-5, 5);
        const cplx tr = build_hamiltonian(p).trace();
        CHECK(std::abs(tr - cplx(12.0 * p.epsilon() + 2.0 * p.u())) < 1e-12);
    }
}

TEST_CASE("derived parameter accessors") {
    const DimerParams p{0.5, 1.0, 0.25, 0.125, 2.0};
    CHECK(p.t_plus() == 1.25);
    CHECK(p.t_minus() == 0.75);
    CHECK(p.eps_plus() == cplx(0.5, 0.125));
    CHECK(p.eps_minus() == cplx(0.5, -0.125));
    CHECK_THROWS_AS(DimerParams(0, std::numeric_limits<double>::infinity(), 0, 0, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(DimerParams(std::nan(""), 1, 0, 0, 0), std::invalid_argument);
}

TEST_CASE("state vector algebra") {
    StateVector a = StateVector::basis(2);
    const StateVector b = StateVector::basis(3);
    a += b;
    a *= cplx(0, 1);
    CHECK(a.amp(2) == cplx(0, 1));
    CHECK(a.amp(3) == cplx(0, 1));
    CHECK(a.norm2() == 2.0);
    CHECK(inner(b, a) == cplx(0, 1));
    const StateVector c = a - cplx(0, 1) * StateVector::basis(2);
    CHECK(c.amp(2) == cplx(0.0));
}
