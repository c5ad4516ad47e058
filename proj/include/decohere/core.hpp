// core.hpp: Domain types shared by all modules: decoherence parameters, the
// spectral (energy-basis) description of a Hamiltonian, validated density
// matrices, Bohr frequency matrices and superoperators.
//
// Everything here is immutable after construction. Evolution happens in the
// energy basis; SpectralHamiltonian carries the transform back to the basis the
// caller supplied.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace decohere {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPositivityTol = 1e-10;

// The two characteristic times and the action constant.
// tau1 is the width of each evolution event, tau2 the mean interval between
// events (the cronon). 0 < tau1 <= tau2 is enforced.
class DecoherenceParams {
public:
    DecoherenceParams(double tau1, double tau2, double hbar = 1.0);

    double tau1() const noexcept { return tau1_; }
    double tau2() const noexcept { return tau2_; }
    double hbar() const noexcept { return hbar_; }

    // Number of events (Gamma shape) after elapsed time t.
    double shape(double t) const noexcept { return t / tau2_; }

private:
    double tau1_;
    double tau2_;
    double hbar_;
};

enum class Basis { input, energy };

class SpectralHamiltonian {
public:
    // Diagonal Hamiltonian given by its energies in input order. The energy basis
    // is the same set of states, sorted by energy.
    static SpectralHamiltonian from_eigenvalues(const std::vector<double>& energies);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(eigenvalues_.size()); }

    // Energies in non-decreasing order.
    const RealVector& eigenvalues() const noexcept { return eigenvalues_; }

    // order()[k] is the input-basis index of the k-th energy eigenstate when the
    // Hamiltonian was given as a list of energies; identity otherwise.
    const std::vector<std::size_t>& order() const noexcept { return order_; }

    // Columns are energy eigenvectors expressed in the input basis, if the
    // Hamiltonian was given as a matrix.
    const std::optional<Matrix>& basis_transform() const noexcept { return transform_; }

    // Operators and density matrices share the same transform rule.
    Matrix to_energy_basis(const Matrix& input) const;
    Matrix from_energy_basis(const Matrix& energy) const;

    // Hamiltonian as a matrix in either basis.
    Matrix matrix(Basis basis) const;

private:
    friend SpectralHamiltonian diagonalize_hamiltonian(const Matrix& h);

    SpectralHamiltonian(RealVector eigenvalues, std::vector<std::size_t> order,
                        std::optional<Matrix> transform);

    RealVector eigenvalues_;
    std::vector<std::size_t> order_;
    std::optional<Matrix> transform_;
};

class DensityMatrix {
public:
    const Matrix& entries() const noexcept { return entries_; }
    Basis basis() const noexcept { return basis_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(entries_.rows()); }

    // Skips validation. Used by propagators whose outputs are density matrices by
    // construction; callers outside the library should use validate_density_matrix.
    static DensityMatrix trusted(Matrix entries, Basis basis);

private:
    DensityMatrix(Matrix entries, Basis basis) : entries_(std::move(entries)), basis_(basis) {}

    Matrix entries_;
    Basis basis_;
};

// Bohr frequencies omega_nm = (E_n - E_m)/hbar in the energy basis.
struct FrequencyMatrix {
    RealMatrix omegas;

    std::size_t dim() const noexcept { return static_cast<std::size_t>(omegas.rows()); }
    double operator()(std::size_t n, std::size_t m) const {
        return omegas(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
    }
};

// Linear map on column-major vectorized N x N matrices.
class Superoperator {
public:
    explicit Superoperator(Matrix matrix);

    // vec(U rho U^dagger) = (conj(U) kron U) vec(rho)
    static Superoperator unitary_conjugation(const Matrix& u);
    static Superoperator identity(std::size_t dim);

    const Matrix& matrix() const noexcept { return matrix_; }
    std::size_t dim() const noexcept { return dim_; }

    Matrix apply(const Matrix& rho) const;
    bool is_trace_preserving(double tol = 1e-10) const;

private:
    Matrix matrix_;
    std::size_t dim_;
};

Vector vectorize(const Matrix& m);
Matrix unvectorize(const Vector& v, std::size_t dim);

// Throws ValidationError if h is not Hermitian within 1e-10 (relative to its
// largest entry), NumericError if the eigensolver fails.
SpectralHamiltonian diagonalize_hamiltonian(const Matrix& h);

FrequencyMatrix bohr_frequencies(const SpectralHamiltonian& spec, const DecoherenceParams& params);

// Checks Hermiticity (1e-12), unit trace (1e-12) and positivity (-1e-10). On
// failure the ValidationError message lists every violated invariant together
// with its measured residual.
DensityMatrix validate_density_matrix(const Matrix& m, Basis basis = Basis::input);

// Residuals used by validation, exposed for tests and reports.
double hermiticity_residual(const Matrix& m);
double min_eigenvalue(const Matrix& hermitian);

DensityMatrix to_energy_basis(const DensityMatrix& rho, const SpectralHamiltonian& spec);
DensityMatrix from_energy_basis(const DensityMatrix& rho, const SpectralHamiltonian& spec);

// (m + m^dagger)/2
Matrix hermitian_part(const Matrix& m);

}  // namespace decohere
