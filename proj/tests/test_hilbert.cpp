#include "doctest.h"

#include "stapghz/hilbert.hpp"
#include "stapghz/model.hpp"

#include <random>

using namespace stap;
using namespace stap::hilbert;

TEST_CASE("basis dimension") {
    CHECK(enumerate_basis(1).dim() == 108);
    CHECK(enumerate_basis(2).dim() == 243);
    CHECK_THROWS_AS(StateSpace(0), std::invalid_argument);
}

TEST_CASE("index map round trip") {
    const auto space = enumerate_basis(2);
    const BasisState s{{Level::f, Level::gl, Level::gr}, 0, 0};
    const auto i = space.index(s);
    CHECK(space.state(i) == s);
    for (std::size_t k = 0; k < space.dim(); ++k) {
        REQUIRE(space.index(space.state(k)) == k);
    }
    CHECK_FALSE(space.find(BasisState{{Level::gr, Level::gl, Level::gr}, 0, 0}).has_value());
    CHECK_THROWS_AS(space.index(BasisState{{Level::f, Level::gl, Level::gr}, 3, 0}),
                    std::out_of_range);
}

TEST_CASE("basis ordering is lexicographic") {
    const auto space = enumerate_basis(1);
    CHECK(space.state(0) == BasisState{{Level::f, Level::gl, Level::f}, 0, 0});
    CHECK(space.state(1) == BasisState{{Level::f, Level::gl, Level::f}, 0, 1});
    CHECK(space.state(2) == BasisState{{Level::f, Level::gl, Level::f}, 1, 0});
    CHECK(space.state(4) == BasisState{{Level::f, Level::gl, Level::gr}, 0, 0});
    CHECK(space.state(107) == BasisState{{Level::e, Level::e, Level::e}, 1, 1});
    for (const auto& s : space.states()) {
        for (int a = 0; a < 3; ++a) {
            REQUIRE(atom_has_level(a + 1, s.atoms[static_cast<std::size_t>(a)]));
        }
    }
}

TEST_CASE("annihilator") {
    const auto space = enumerate_basis(2);
    const auto al = annihilator(space, Mode::left);
    const BasisState one{{Level::f, Level::gl, Level::gr}, 1, 0};
    const BasisState zero{{Level::f, Level::gl, Level::gr}, 0, 0};
    const Ket out = al * Ket::basis(space, one);
    CHECK(std::abs(out.amplitudes(static_cast<Eigen::Index>(space.index(zero))) - 1.0) < 1e-15);
    CHECK(out.norm() == doctest::Approx(1.0));
    CHECK((al * Ket::basis(space, zero)).norm() == 0.0);

    const BasisState two{{Level::f, Level::gl, Level::gr}, 2, 0};
    CHECK((al * Ket::basis(space, two)).norm() == doctest::Approx(std::sqrt(2.0)));

    // [a, a†] = 1 below the truncation edge
    const Matrix c = commutator(al, al.adjoint()).matrix();
    for (std::size_t k = 0; k < space.dim(); ++k) {
        const auto i = static_cast<Eigen::Index>(k);
        if (space.state(k).n_left < 2) {
            REQUIRE(std::abs(c(i, i) - 1.0) < 1e-14);
        }
    }
}

TEST_CASE("atomic transitions") {
    const auto space = enumerate_basis(1);
    const auto ef = atomic_transition(space, 1, Level::f, Level::e);
    const auto fe = atomic_transition(space, 1, Level::e, Level::f);
    CHECK(max_abs(ef.adjoint().matrix() - fe.matrix()) == 0.0);
    CHECK(max_abs((ef * ef).matrix()) == 0.0);
    CHECK(max_abs(ef.adjoint().adjoint().matrix() - ef.matrix()) == 0.0);

    const auto psi = model::single_excitation_basis(space);
    CHECK(std::abs(psi[1].amplitudes.dot((ef * psi[0]).amplitudes) - 1.0) < 1e-15);

    CHECK_THROWS_AS(atomic_transition(space, 1, Level::gr, Level::e), std::domain_error);
    CHECK_THROWS_AS(atomic_transition(space, 4, Level::f, Level::e), std::domain_error);
}

TEST_CASE("expectation values") {
    const auto space = enumerate_basis(1);
    const auto psi = model::single_excitation_basis(space);
    const auto rho = DensityMatrix::pure(psi[0]);
    CHECK(std::abs(expectation(Operator::identity(space.dim()), rho) - 1.0) < 1e-15);

    const Operator proj(psi[0].amplitudes * psi[0].amplitudes.adjoint(), true);
    CHECK(std::abs(expectation(proj, psi[0]) - 1.0) < 1e-15);

    std::mt19937 rng(7);
    std::normal_distribution<double> n;
    Matrix a(space.dim(), space.dim());
    Vector v(space.dim());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        v(i) = Complex(n(rng), n(rng));
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            a(i, j) = Complex(n(rng), n(rng));
        }
    }
    const Operator h(Matrix(a + a.adjoint()), true);
    CHECK(std::abs(expectation(h, Ket(v).normalized()).imag()) < 1e-12);
}

TEST_CASE("operator rejects non-Hermitian input flagged Hermitian") {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = 1.0;
    CHECK_THROWS_AS(Operator(m, true), std::invalid_argument);
    CHECK_NOTHROW(Operator(m, false));
}

TEST_CASE("density matrix validation") {
    const auto space = enumerate_basis(1);
    auto rho = DensityMatrix::pure(model::single_excitation_basis(space)[3]);
    CHECK_NOTHROW(rho.validate());
    CHECK(rho.min_eigenvalue() > -1e-12);
    rho.rho *= 1.1;
    CHECK_THROWS(rho.validate());
}

TEST_CASE("time-dependent operator") {
    Matrix a = Matrix::Zero(2, 2);
    a(0, 1) = 1.0;
    a(1, 0) = 1.0;
    TimeDependentOperator h(2, 3.0);
    h.add_term([](double t) { return Complex(t * t); }, a);
    CHECK(std::abs(h.matrix(2.0)(0, 1) - 4.0) < 1e-15);
    CHECK_THROWS_AS(h.matrix(3.5), std::domain_error);
    CHECK_NOTHROW(h.matrix(3.0 + 1e-12));

    Matrix in = Matrix::Identity(2, 2);
    Matrix out;
    h.apply_left(1.5, in, out);
    CHECK(max_abs(out - h.matrix(1.5)) < 1e-15);
    h.apply_right(1.5, in, out);
    CHECK(max_abs(out - h.matrix(1.5)) < 1e-15);

    auto g = TimeDependentOperator::from_function(2, 2.0, [a](double t) { return Matrix(t * a); });
    const auto sum = h + g;
    CHECK(sum.t_final() == 2.0);
    CHECK(std::abs(sum.matrix(1.0)(1, 0) - 2.0) < 1e-15);
}
