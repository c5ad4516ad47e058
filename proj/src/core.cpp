#include "decohere/core.hpp"

#include "decohere/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace decohere {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

DecoherenceParams::DecoherenceParams(double tau1, double tau2, double hbar)
    : tau1_(tau1), tau2_(tau2), hbar_(hbar) {
    if (!positive_finite(tau1)) {
        throw ValidationError("tau1 must be a positive finite time");
    }
    if (!positive_finite(tau2)) {
        throw ValidationError("tau2 must be a positive finite time");
    }
    if (!positive_finite(hbar)) {
        throw ValidationError("hbar must be a positive finite action");
    }
    if (tau1 > tau2) {
        std::ostringstream os;
        os << "tau1 <= tau2 required (tau1 = " << tau1 << ", tau2 = " << tau2 << ")";
        throw ValidationError(os.str());
    }
}

// ------------------------------ SpectralHamiltonian --------------------------

SpectralHamiltonian::SpectralHamiltonian(RealVector eigenvalues, std::vector<std::size_t> order,
                                         std::optional<Matrix> transform)
    : eigenvalues_(std::move(eigenvalues)), order_(std::move(order)), transform_(std::move(transform)) {}

SpectralHamiltonian SpectralHamiltonian::from_eigenvalues(const std::vector<double>& energies) {
    if (energies.empty()) {
        throw ValidationError("Hamiltonian needs at least one eigenvalue");
    }
    for (double e : energies) {
        if (!std::isfinite(e)) {
            throw ValidationError("eigenvalues must be finite");
        }
    }
    std::vector<std::size_t> order(energies.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return energies[a] < energies[b]; });
    RealVector sorted(idx(energies.size()));
    for (std::size_t k = 0; k < order.size(); ++k) {
        sorted(idx(k)) = energies[order[k]];
    }
    return SpectralHamiltonian(std::move(sorted), std::move(order), std::nullopt);
}

Matrix SpectralHamiltonian::to_energy_basis(const Matrix& input) const {
    const auto n = idx(dim());
    if (input.rows() != n || input.cols() != n) {
        throw ValidationError("to_energy_basis: dimension mismatch");
    }
    if (transform_) {
        return transform_->adjoint() * input * (*transform_);
    }
    Matrix out(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
            out(a, b) = input(idx(order_[static_cast<std::size_t>(a)]), idx(order_[static_cast<std::size_t>(b)]));
        }
    }
    return out;
}

Matrix SpectralHamiltonian::from_energy_basis(const Matrix& energy) const {
    const auto n = idx(dim());
    if (energy.rows() != n || energy.cols() != n) {
        throw ValidationError("from_energy_basis: dimension mismatch");
    }
    if (transform_) {
        return (*transform_) * energy * transform_->adjoint();
    }
    Matrix out(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
            out(idx(order_[static_cast<std::size_t>(a)]), idx(order_[static_cast<std::size_t>(b)])) = energy(a, b);
        }
    }
    return out;
}

Matrix SpectralHamiltonian::matrix(Basis basis) const {
    Matrix diag = eigenvalues_.cast<cplx>().asDiagonal();
    return basis == Basis::energy ? diag : from_energy_basis(diag);
}

SpectralHamiltonian diagonalize_hamiltonian(const Matrix& h) {
    if (h.rows() != h.cols() || h.rows() == 0) {
        throw ValidationError("Hamiltonian must be a non-empty square matrix");
    }
    if (!h.allFinite()) {
        throw ValidationError("Hamiltonian entries must be finite");
    }
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    const double residual = hermiticity_residual(h);
    if (residual > 1e-10 * scale) {
        std::ostringstream os;
        os << "Hamiltonian is not Hermitian (max |H - H^dagger| = " << residual << ")";
        throw ValidationError(os.str());
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(h));
    if (solver.info() != Eigen::Success) {
        throw NumericError("Hamiltonian eigensolver did not converge");
    }
    std::vector<std::size_t> order(static_cast<std::size_t>(h.rows()));
    std::iota(order.begin(), order.end(), std::size_t{0});
    return SpectralHamiltonian(solver.eigenvalues(), std::move(order), solver.eigenvectors());
}

FrequencyMatrix bohr_frequencies(const SpectralHamiltonian& spec, const DecoherenceParams& params) {
    const auto& e = spec.eigenvalues();
    const auto n = e.size();
    const double degeneracy_tol = 1e-12 * std::max(1.0, e.cwiseAbs().maxCoeff());
    RealMatrix omegas = RealMatrix::Zero(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = a + 1; b < n; ++b) {
            const double gap = e(a) - e(b);
            const double w = std::abs(gap) <= degeneracy_tol ? 0.0 : gap / params.hbar();
            omegas(a, b) = w;
            omegas(b, a) = -w;
        }
    }
    return FrequencyMatrix{std::move(omegas)};
}

// ------------------------------ DensityMatrix ---------------------------------

DensityMatrix DensityMatrix::trusted(Matrix entries, Basis basis) {
    return DensityMatrix(std::move(entries), basis);
}

double hermiticity_residual(const Matrix& m) {
    if (m.size() == 0) {
        return 0.0;
    }
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const Matrix& hermitian) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(hermitian), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericError("eigensolver did not converge while checking positivity");
    }
    return solver.eigenvalues()(0);
}

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

DensityMatrix validate_density_matrix(const Matrix& m, Basis basis) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw ValidationError("density matrix must be a non-empty square matrix");
    }
    if (!m.allFinite()) {
        throw ValidationError("density matrix entries must be finite");
    }
    std::ostringstream problems;
    const double herm = hermiticity_residual(m);
    if (herm > kHermitianTol) {
        problems << "; Hermiticity violated (max |rho - rho^dagger| = " << herm << ")";
    }
    const double trace = m.trace().real();
    if (std::abs(trace - 1.0) > kTraceTol) {
        problems << "; trace violated (Tr rho = " << trace << ")";
    }
    const double lowest = min_eigenvalue(m);
    if (lowest < -kPositivityTol) {
        problems << "; positivity violated (min eigenvalue = " << lowest << ")";
    }
    const std::string msg = problems.str();
    if (!msg.empty()) {
        throw ValidationError("invalid density matrix" + msg.substr(1));
    }
    return DensityMatrix::trusted(m, basis);
}

DensityMatrix to_energy_basis(const DensityMatrix& rho, const SpectralHamiltonian& spec) {
    if (rho.basis() == Basis::energy) {
        return rho;
    }
    return DensityMatrix::trusted(hermitian_part(spec.to_energy_basis(rho.entries())), Basis::energy);
}

DensityMatrix from_energy_basis(const DensityMatrix& rho, const SpectralHamiltonian& spec) {
    if (rho.basis() == Basis::input) {
        return rho;
    }
    return DensityMatrix::trusted(hermitian_part(spec.from_energy_basis(rho.entries())), Basis::input);
}

// ------------------------------ Superoperator ---------------------------------

Superoperator::Superoperator(Matrix matrix) : matrix_(std::move(matrix)), dim_(0) {
    if (matrix_.rows() != matrix_.cols()) {
        throw ValidationError("superoperator matrix must be square");
    }
    const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(matrix_.rows()))));
    if (n == 0 || idx(n * n) != matrix_.rows()) {
        throw ValidationError("superoperator size must be N^2 x N^2");
    }
    dim_ = n;
}

Superoperator Superoperator::unitary_conjugation(const Matrix& u) {
    const auto n = u.rows();
    Matrix s(n * n, n * n);
    const Matrix uc = u.conjugate();
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
            s.block(a * n, b * n, n, n) = uc(a, b) * u;
        }
    }
    return Superoperator(std::move(s));
}

Superoperator Superoperator::identity(std::size_t dim) {
    const auto n2 = idx(dim * dim);
    return Superoperator(Matrix::Identity(n2, n2));
}

Matrix Superoperator::apply(const Matrix& rho) const {
    if (rho.rows() != idx(dim_) || rho.cols() != idx(dim_)) {
        throw ValidationError("superoperator: dimension mismatch");
    }
    return unvectorize(matrix_ * vectorize(rho), dim_);
}

bool Superoperator::is_trace_preserving(double tol) const {
    const Vector id = vectorize(Matrix::Identity(idx(dim_), idx(dim_)));
    const Eigen::RowVectorXcd image = id.adjoint() * matrix_;
    return (image - id.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

Vector vectorize(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

Matrix unvectorize(const Vector& v, std::size_t dim) {
    if (v.size() != idx(dim * dim)) {
        throw ValidationError("unvectorize: size mismatch");
    }
    return Eigen::Map<const Matrix>(v.data(), idx(dim), idx(dim));
}

}  // namespace decohere
