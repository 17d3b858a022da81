#include "rabicd/hilbert.hpp"

#include <cmath>

#include "rabicd/errors.hpp"

namespace rabicd {

FockSpace::FockSpace(int cutoff) : n_(cutoff) {
    if (cutoff < 1) throw DomainError("Fock cutoff must be >= 1, got " + std::to_string(cutoff));
}

namespace {

double anti_defect(const Mat& m) { return m.rows() == 0 ? 0.0 : (m + m.adjoint()).cwiseAbs().maxCoeff(); }

void require_square(const Mat& m) {
    if (m.rows() != m.cols()) throw DimensionMismatch("operator matrix must be square");
}

void require_same(const OperatorMatrix& a, const OperatorMatrix& b) {
    if (a.dim() != b.dim()) {
        throw DimensionMismatch("operator dimensions differ: " + std::to_string(a.dim()) + " vs " +
                                std::to_string(b.dim()));
    }
}

}  // namespace

OperatorMatrix::OperatorMatrix(Mat m) : m_(std::move(m)) {
    require_square(m_);
    hermitian_ = hermiticity_defect() <= kHermitianTol;
    anti_hermitian_ = anti_defect(m_) <= kHermitianTol;
}

OperatorMatrix OperatorMatrix::hermitian(Mat m, double rel_tol) {
    require_square(m);
    if (m.rows() > 0) {
        const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
        const double defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
        if (defect > rel_tol * scale) {
            throw NotHermitian("matrix is not Hermitian (defect " + std::to_string(defect) + ")");
        }
    }
    Mat sym = 0.5 * (m + m.adjoint());
    return OperatorMatrix(std::move(sym));
}

double OperatorMatrix::hermiticity_defect() const {
    return m_.rows() == 0 ? 0.0 : (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
}

OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) {
    require_same(a, b);
    return OperatorMatrix(a.m_ + b.m_);
}

OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b) {
    require_same(a, b);
    return OperatorMatrix(a.m_ - b.m_);
}

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
    require_same(a, b);
    return OperatorMatrix(a.m_ * b.m_);
}

OperatorMatrix operator*(cplx s, const OperatorMatrix& a) { return OperatorMatrix(s * a.m_); }
OperatorMatrix operator*(double s, const OperatorMatrix& a) { return OperatorMatrix(s * a.m_); }

StateVector::StateVector(Vec v) : v_(std::move(v)) {
    const double norm = v_.norm();
    if (std::abs(norm - 1.0) > 1e-10) {
        throw DomainError("state vector is not normalized (norm " + std::to_string(norm) + ")");
    }
}

StateVector StateVector::normalized(Vec v) {
    const double norm = v.norm();
    if (norm == 0.0) throw DomainError("cannot normalize the zero vector");
    return StateVector(v / norm);
}

Mat identity(int dim) { return Mat::Identity(dim, dim); }

Mat commutator(const Mat& a, const Mat& b) { return a * b - b * a; }

Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

double max_abs_diff(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("max_abs_diff: shape mismatch");
    return a.rows() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

OperatorMatrix annihilation(const FockSpace& space) {
    const int dim = space.field_dim();
    Mat a = Mat::Zero(dim, dim);
    for (int m = 0; m + 1 < dim; ++m) a(m, m + 1) = std::sqrt(static_cast<double>(m + 1));
    return OperatorMatrix(std::move(a));
}

OperatorMatrix creation(const FockSpace& space) { return annihilation(space).adjoint(); }

OperatorMatrix number_operator(const FockSpace& space) {
    const int dim = space.field_dim();
    Mat n = Mat::Zero(dim, dim);
    for (int m = 0; m < dim; ++m) n(m, m) = m;
    return OperatorMatrix(std::move(n));
}

OperatorMatrix pauli_x() {
    Mat s(2, 2);
    s << 0, 1, 1, 0;
    return OperatorMatrix(std::move(s));
}

OperatorMatrix pauli_y() {
    Mat s(2, 2);
    s << 0, cplx(0, -1), cplx(0, 1), 0;
    return OperatorMatrix(std::move(s));
}

OperatorMatrix pauli_z() {
    Mat s(2, 2);
    s << 1, 0, 0, -1;
    return OperatorMatrix(std::move(s));
}

OperatorMatrix qubit_identity() { return OperatorMatrix(identity(2)); }

OperatorMatrix embed(const OperatorMatrix& qubit_op, const OperatorMatrix& field_op) {
    if (qubit_op.dim() != 2) throw DimensionMismatch("embed: qubit operator must be 2x2");
    if (field_op.dim() < 2) throw DimensionMismatch("embed: field operator must have dimension >= 2");
    return OperatorMatrix(kron(qubit_op.matrix(), field_op.matrix()));
}

void check_displacement_cutoff(double alpha, const FockSpace& space) {
    if (4.0 * alpha * alpha > space.cutoff() * (1.0 + 1e-12)) {
        throw CutoffTooSmall("displacement |alpha|^2 <= n/4 violated for alpha = " + std::to_string(alpha),
                             static_cast<int>(std::ceil(4.0 * alpha * alpha)));
    }
}

OperatorMatrix displacement(double alpha, const FockSpace& space) {
    check_displacement_cutoff(alpha, space);
    const Mat a = annihilation(space).matrix();
    // K = i alpha (a^dag - a) is Hermitian and exp(-iK) = exp(alpha (a^dag - a)).
    const Mat k = cplx(0, alpha) * (a.adjoint() - a);
    Eigen::SelfAdjointEigenSolver<Mat> es(k);
    const Vec phases = (cplx(0, -1) * es.eigenvalues().cast<cplx>()).array().exp();
    return OperatorMatrix(es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint());
}

Vec coherent_state(double alpha, const FockSpace& space) {
    return displacement(alpha, space).matrix().col(0);
}

Eigen::VectorXi parity_diagonal(const FockSpace& space) {
    const int nf = space.field_dim();
    Eigen::VectorXi d(space.dim());
    for (int s = 0; s < 2; ++s) {
        for (int m = 0; m < nf; ++m) d(s * nf + m) = (s == 0 ? 1 : -1) * (m % 2 == 0 ? 1 : -1);
    }
    return d;
}

OperatorMatrix parity(const FockSpace& space) {
    return OperatorMatrix(parity_diagonal(space).cast<cplx>().asDiagonal().toDenseMatrix());
}

double spectral_norm(const Mat& a) {
    if (a.rows() == 0) return 0.0;
    Eigen::JacobiSVD<Mat> svd(a);
    return svd.singularValues()(0);
}

double spectral_norm(const OperatorMatrix& a) {
    if (a.is_hermitian()) {
        Eigen::SelfAdjointEigenSolver<Mat> es(a.matrix(), Eigen::EigenvaluesOnly);
        return es.eigenvalues().cwiseAbs().maxCoeff();
    }
    return spectral_norm(a.matrix());
}

Vec basis_state(const FockSpace& space, int s, int m) {
    Vec v = Vec::Zero(space.dim());
    v(basis_index(space, s, m)) = 1.0;
    return v;
}

}  // namespace rabicd
