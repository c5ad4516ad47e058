#include "oracles.hpp"

#include "decohere/core.hpp"
#include "decohere/errors.hpp"

#include <doctest.h>

#include <string>

using namespace decohere;

TEST_SUITE("core") {

TEST_CASE("decoherence params enforce 0 < tau1 <= tau2") {
    CHECK_NOTHROW(DecoherenceParams(0.1, 0.1));
    CHECK_NOTHROW(DecoherenceParams(0.05, 0.1, 2.0));
    try {
        DecoherenceParams(0.2, 0.1);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("tau1 <= tau2") != std::string::npos);
    }
    CHECK_THROWS_AS(DecoherenceParams(0.0, 0.1), ValidationError);
    CHECK_THROWS_AS(DecoherenceParams(-1.0, 0.1), ValidationError);
    CHECK_THROWS_AS(DecoherenceParams(0.1, 0.1, 0.0), ValidationError);
    CHECK_THROWS_AS(DecoherenceParams(0.1, INFINITY), ValidationError);
    CHECK_THROWS_AS(DecoherenceParams(NAN, 0.1), ValidationError);
    CHECK(DecoherenceParams(0.1, 0.5).shape(5.0) == doctest::Approx(10.0));
}

TEST_CASE("diagonalize a diagonal Hamiltonian") {
    Matrix h = Matrix::Zero(2, 2);
    h(1, 1) = 1.0;
    const auto spec = diagonalize_hamiltonian(h);
    CHECK(spec.eigenvalues()(0) == doctest::Approx(0.0));
    CHECK(spec.eigenvalues()(1) == doctest::Approx(1.0));
    REQUIRE(spec.basis_transform().has_value());
    const Matrix& u = *spec.basis_transform();
    CHECK(oracle::max_abs(u.cwiseAbs() - Matrix::Identity(2, 2).cwiseAbs()) < 1e-14);
}

TEST_CASE("diagonalize Pauli x") {
    Matrix h = Matrix::Zero(2, 2);
    h(0, 1) = h(1, 0) = 1.0;
    const auto spec = diagonalize_hamiltonian(h);
    CHECK(spec.eigenvalues()(0) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(spec.eigenvalues()(1) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("diagonalize random Hermitian: reconstruction and unitarity") {
    oracle::Gen gen(11);
    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::Index n = gen.integer(1, 8);
        const Matrix h = gen.hermitian(n, gen.log_uniform(1e-3, 1e3));
        const auto spec = diagonalize_hamiltonian(h);
        const Matrix& u = *spec.basis_transform();
        const Matrix rebuilt = u * spec.eigenvalues().cast<cplx>().asDiagonal() * u.adjoint();
        CHECK(oracle::max_abs(rebuilt - h) <= 1e-9 * h.norm());
        CHECK(oracle::max_abs(u.adjoint() * u - Matrix::Identity(n, n)) <= 1e-12);
        for (Eigen::Index k = 1; k < n; ++k) {
            CHECK(spec.eigenvalues()(k - 1) <= spec.eigenvalues()(k));
        }
        CHECK(oracle::max_abs(spec.matrix(Basis::input) - h) <= 1e-9 * h.norm());
    }
}

TEST_CASE("non-Hermitian Hamiltonian is rejected") {
    Matrix h = Matrix::Zero(2, 2);
    h(0, 1) = 1.0;
    CHECK_THROWS_AS(diagonalize_hamiltonian(h), ValidationError);
    CHECK_THROWS_AS(diagonalize_hamiltonian(Matrix::Zero(2, 3)), ValidationError);
}

TEST_CASE("eigenvalue lists are sorted with a permutation back to input order") {
    const auto spec = SpectralHamiltonian::from_eigenvalues({3.0, -1.0, 2.0});
    CHECK(spec.eigenvalues()(0) == -1.0);
    CHECK(spec.eigenvalues()(1) == 2.0);
    CHECK(spec.eigenvalues()(2) == 3.0);
    CHECK(spec.order() == std::vector<std::size_t>{1, 2, 0});
    CHECK_THROWS_AS(SpectralHamiltonian::from_eigenvalues({}), ValidationError);
    CHECK_THROWS_AS(SpectralHamiltonian::from_eigenvalues({1.0, NAN}), ValidationError);
}

TEST_CASE("bohr frequencies: worked values") {
    const DecoherenceParams p1(0.1, 0.1, 1.0);
    const auto f = bohr_frequencies(SpectralHamiltonian::from_eigenvalues({0.0, 1.0}), p1);
    CHECK(f(0, 0) == 0.0);
    CHECK(f(0, 1) == -1.0);
    CHECK(f(1, 0) == 1.0);
    CHECK(f(1, 1) == 0.0);

    const auto deg = bohr_frequencies(SpectralHamiltonian::from_eigenvalues({2.0, 2.0}), DecoherenceParams(0.1, 0.1, 7.0));
    CHECK(deg.omegas.cwiseAbs().maxCoeff() == 0.0);

    const auto f3 = bohr_frequencies(SpectralHamiltonian::from_eigenvalues({0.0, 1.0, 3.0}), DecoherenceParams(0.1, 0.1, 2.0));
    CHECK(f3(2, 0) == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("bohr frequencies: near-degenerate levels give exact zero") {
    const DecoherenceParams p(0.1, 0.1);
    const auto f = bohr_frequencies(SpectralHamiltonian::from_eigenvalues({1.0, 1.0 + 1e-13, 2.0}), p);
    CHECK(f(0, 1) == 0.0);
    CHECK(f(1, 0) == 0.0);
    CHECK(f(2, 0) != 0.0);
}

TEST_CASE("bohr frequencies: exact antisymmetry (property)") {
    oracle::Gen gen(12);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = gen.integer(1, 10);
        std::vector<double> e(static_cast<std::size_t>(n));
        for (auto& x : e) {
            x = gen.normal() * gen.log_uniform(1e-3, 1e6);
        }
        const DecoherenceParams p(0.1, 0.2, gen.log_uniform(0.1, 10.0));
        const auto f = bohr_frequencies(SpectralHamiltonian::from_eigenvalues(e), p);
        for (int a = 0; a < n; ++a) {
            CHECK(f(a, a) == 0.0);
            for (int b = 0; b < n; ++b) {
                CHECK(f(a, b) + f(b, a) == 0.0);
            }
        }
    }
}

TEST_CASE("validate density matrix: worked examples") {
    CHECK_NOTHROW(validate_density_matrix(0.5 * Matrix::Identity(2, 2)));

    Matrix bad_trace = Matrix::Zero(2, 2);
    bad_trace(0, 0) = 0.6;
    bad_trace(1, 1) = 0.5;
    try {
        validate_density_matrix(bad_trace);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("trace") != std::string::npos);
        CHECK(msg.find("1.1") != std::string::npos);
    }

    Matrix bad_pos = Matrix::Constant(2, 2, 0.6);
    bad_pos(0, 0) = bad_pos(1, 1) = 0.5;
    try {
        validate_density_matrix(bad_pos);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("positiv") != std::string::npos);
        CHECK(msg.find("-0.1") != std::string::npos);
    }

    Matrix bad_herm = 0.5 * Matrix::Identity(2, 2);
    bad_herm(0, 1) = 0.1;
    try {
        validate_density_matrix(bad_herm);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("Hermiticity") != std::string::npos);
    }
    CHECK_THROWS_AS(validate_density_matrix(Matrix::Zero(2, 3)), ValidationError);
}

TEST_CASE("validate density matrix accepts V diag(p) V^dagger (property)") {
    oracle::Gen gen(13);
    for (int trial = 0; trial < 300; ++trial) {
        const Eigen::Index n = gen.integer(1, 12);
        const Matrix v = gen.unitary(n);
        const auto p = gen.probabilities(n);
        Eigen::VectorXcd d(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            d(i) = p[static_cast<std::size_t>(i)];
        }
        Matrix rho = v * d.asDiagonal() * v.adjoint();
        rho = 0.5 * (rho + rho.adjoint());
        CHECK_NOTHROW(validate_density_matrix(rho));
    }
}

TEST_CASE("energy basis round trip (property)") {
    oracle::Gen gen(14);
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index n = gen.integer(1, 8);
        const DensityMatrix rho = validate_density_matrix(gen.density(n));
        SpectralHamiltonian spec = trial % 2 == 0 ? diagonalize_hamiltonian(gen.hermitian(n)) : [&] {
            std::vector<double> e(static_cast<std::size_t>(n));
            for (auto& x : e) {
                x = gen.normal();
            }
            return SpectralHamiltonian::from_eigenvalues(e);
        }();
        const DensityMatrix e = to_energy_basis(rho, spec);
        CHECK(e.basis() == Basis::energy);
        const DensityMatrix back = from_energy_basis(e, spec);
        CHECK(back.basis() == Basis::input);
        CHECK(oracle::max_abs(back.entries() - rho.entries()) <= 1e-12);
        // The energy-basis Hamiltonian is diagonal with sorted energies.
        const Matrix he = spec.matrix(Basis::energy);
        CHECK(oracle::max_abs(he - Matrix(spec.eigenvalues().cast<cplx>().asDiagonal())) == 0.0);
    }
}

TEST_CASE("from_eigenvalues permutation maps input states to energy states") {
    const auto spec = SpectralHamiltonian::from_eigenvalues({1.0, 0.0});
    Matrix rho = Matrix::Zero(2, 2);
    rho(0, 0) = 1.0;  // input state 0 has energy 1, the highest
    const DensityMatrix e = to_energy_basis(validate_density_matrix(rho), spec);
    CHECK(e.entries()(1, 1).real() == 1.0);
    CHECK(e.entries()(0, 0).real() == 0.0);
}

TEST_CASE("vectorization is column-major and invertible") {
    Matrix m(2, 2);
    m << cplx(1, 0), cplx(2, 0), cplx(3, 0), cplx(4, 0);
    const Vector v = vectorize(m);
    CHECK(v(0) == cplx(1, 0));
    CHECK(v(1) == cplx(3, 0));
    CHECK(v(2) == cplx(2, 0));
    CHECK(unvectorize(v, 2) == m);
    CHECK_THROWS_AS(unvectorize(v, 3), ValidationError);
}

TEST_CASE("unitary conjugation superoperator") {
    oracle::Gen gen(15);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index n = gen.integer(1, 5);
        const Matrix u = gen.unitary(n);
        const Matrix rho = gen.density(n);
        const Superoperator s = Superoperator::unitary_conjugation(u);
        CHECK(oracle::max_abs(s.apply(rho) - u * rho * u.adjoint()) <= 1e-13);
        CHECK(s.is_trace_preserving());
    }
    CHECK(Superoperator::identity(3).apply(Matrix::Identity(3, 3)) == Matrix::Identity(3, 3));
    Matrix scaled = 2.0 * Matrix::Identity(4, 4);
    CHECK_FALSE(Superoperator(scaled).is_trace_preserving());
    CHECK_THROWS_AS(Superoperator(Matrix::Identity(3, 3)), ValidationError);
}

TEST_CASE("residual helpers") {
    Matrix m = Matrix::Identity(2, 2);
    m(0, 1) = cplx(0.0, 1.0);
    CHECK(hermiticity_residual(m) == doctest::Approx(1.0));
    CHECK(oracle::max_abs(hermitian_part(m) - hermitian_part(m).adjoint()) == 0.0);
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = -0.25;
    d(1, 1) = 1.25;
    CHECK(min_eigenvalue(d) == doctest::Approx(-0.25));
}

}  // TEST_SUITE
