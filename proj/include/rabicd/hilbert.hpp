#pragma once

#include <complex>

#include <Eigen/Dense>

namespace rabicd {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr double kHermitianTol = 1e-12;

// Truncated single-mode Fock space; n is the highest retained photon number.
class FockSpace {
public:
    explicit FockSpace(int cutoff);

    int cutoff() const { return n_; }
    int field_dim() const { return n_ + 1; }
    int dim() const { return 2 * (n_ + 1); }

    bool operator==(const FockSpace&) const = default;

private:
    int n_;
};

// Square complex matrix with validated Hermiticity flags.
class OperatorMatrix {
public:
    OperatorMatrix() = default;
    explicit OperatorMatrix(Mat m);

    // Validates that m is Hermitian up to a relative tolerance and symmetrizes it.
    static OperatorMatrix hermitian(Mat m, double rel_tol = 1e-10);

    const Mat& matrix() const { return m_; }
    int dim() const { return static_cast<int>(m_.rows()); }
    bool is_hermitian() const { return hermitian_; }
    bool is_anti_hermitian() const { return anti_hermitian_; }
    double hermiticity_defect() const;

    cplx operator()(int i, int j) const { return m_(i, j); }
    OperatorMatrix adjoint() const { return OperatorMatrix(m_.adjoint()); }

    friend OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b);
    friend OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b);
    friend OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b);
    friend OperatorMatrix operator*(cplx s, const OperatorMatrix& a);
    friend OperatorMatrix operator*(double s, const OperatorMatrix& a);

private:
    Mat m_;
    bool hermitian_ = false;
    bool anti_hermitian_ = false;
};

// Normalized complex state vector.
class StateVector {
public:
    StateVector() = default;
    // Throws DomainError if the norm deviates from 1 by more than 1e-10.
    explicit StateVector(Vec v);
    static StateVector normalized(Vec v);

    const Vec& amplitudes() const { return v_; }
    int dim() const { return static_cast<int>(v_.size()); }
    cplx operator[](int i) const { return v_(i); }

private:
    Vec v_;
};

Mat identity(int dim);
Mat commutator(const Mat& a, const Mat& b);
Mat kron(const Mat& a, const Mat& b);
double max_abs_diff(const Mat& a, const Mat& b);

// Field operators, dimension n+1.
OperatorMatrix annihilation(const FockSpace& space);
OperatorMatrix creation(const FockSpace& space);
OperatorMatrix number_operator(const FockSpace& space);

// Qubit operators in the sigma_z eigenbasis, index 0 = up.
OperatorMatrix pauli_x();
OperatorMatrix pauli_y();
OperatorMatrix pauli_z();
OperatorMatrix qubit_identity();

// Kronecker product with the qubit factor on the left.
OperatorMatrix embed(const OperatorMatrix& qubit_op, const OperatorMatrix& field_op);

// exp(alpha (a^dag - a)) on the field space; requires alpha^2 <= n/4.
OperatorMatrix displacement(double alpha, const FockSpace& space);
Vec coherent_state(double alpha, const FockSpace& space);
void check_displacement_cutoff(double alpha, const FockSpace& space);

// sigma_z (-1)^{a^dag a} on the composite space.
OperatorMatrix parity(const FockSpace& space);
// Diagonal of parity as +-1 integers.
Eigen::VectorXi parity_diagonal(const FockSpace& space);

double spectral_norm(const Mat& a);
double spectral_norm(const OperatorMatrix& a);

// Composite basis index for spin s (0 up, 1 down) and photon number m.
inline int basis_index(const FockSpace& space, int s, int m) { return s * space.field_dim() + m; }
Vec basis_state(const FockSpace& space, int s, int m);

}  // namespace rabicd
