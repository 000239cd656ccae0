#include "deco/fock.hpp"
#include "deco/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace deco {

fock_space::fock_space(int n_modes, int cutoff) : n_modes_(n_modes), cutoff_(cutoff) {
    if (n_modes < 1 || n_modes > 2)
        throw std::invalid_argument("fock space supports 1 or 2 modes");
    if (cutoff < 2) throw std::invalid_argument("cutoff must be at least 2");
    dim_ = 1;
    stride_.resize(n_modes);
    for (int k = 0; k < n_modes; ++k) {
        stride_[k] = dim_;
        dim_ *= cutoff;
    }
    if (dim_ > 1 << 20) throw std::invalid_argument("fock dimension too large");
}

int fock_space::occupation(Eigen::Index state, int mode) const {
    return static_cast<int>((state / stride_[mode]) % cutoff_);
}

Eigen::MatrixXcd fock_space::annihilate(int mode) const {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim_, dim_);
    for (Eigen::Index i = 0; i < dim_; ++i) {
        int n = occupation(i, mode);
        if (n >= 1) a(i - stride_[mode], i) = std::sqrt(static_cast<double>(n));
    }
    return a;
}

Eigen::VectorXd fock_space::number_diagonal(int mode) const {
    Eigen::VectorXd d(dim_);
    for (Eigen::Index i = 0; i < dim_; ++i) d(i) = occupation(i, mode);
    return d;
}

Eigen::VectorXd fock_space::energy_diagonal(const std::vector<double>& omegas) const {
    if (static_cast<int>(omegas.size()) != n_modes_)
        throw std::invalid_argument("one frequency per mode required");
    Eigen::VectorXd d = Eigen::VectorXd::Zero(dim_);
    for (Eigen::Index i = 0; i < dim_; ++i)
        for (int k = 0; k < n_modes_; ++k) d(i) += omegas[k] * occupation(i, k);
    return d;
}

Eigen::MatrixXcd fock_space::field_operator(const std::vector<double>& couplings) const {
    if (static_cast<int>(couplings.size()) != n_modes_)
        throw std::invalid_argument("one coupling per mode required");
    Eigen::MatrixXcd phi = Eigen::MatrixXcd::Zero(dim_, dim_);
    for (Eigen::Index i = 0; i < dim_; ++i) {
        for (int k = 0; k < n_modes_; ++k) {
            int n = occupation(i, k);
            if (n >= 1) {
                double v = couplings[k] * std::sqrt(static_cast<double>(n));
                phi(i - stride_[k], i) += v;
                phi(i, i - stride_[k]) += v;
            }
        }
    }
    return phi;
}

Eigen::VectorXcd fock_space::vacuum() const {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim_);
    v(0) = 1.0;
    return v;
}

std::vector<Eigen::Index> fock_space::levels_upto(int level) const {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < dim_; ++i) {
        bool ok = true;
        for (int k = 0; k < n_modes_; ++k)
            if (occupation(i, k) > level) {
                ok = false;
                break;
            }
        if (ok) idx.push_back(i);
    }
    return idx;
}

Eigen::MatrixXcd displacement(const Eigen::VectorXcd& amplitudes, const fock_space& fock) {
    if (amplitudes.size() != fock.n_modes())
        throw std::invalid_argument("one amplitude per mode required");
    double norm2 = amplitudes.squaredNorm();
    if (norm2 > fock.cutoff() / 4.0)
        throw truncation_error("displacement amplitude too large for the Fock cutoff");

    Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(fock.dim(), fock.dim());
    for (int k = 0; k < fock.n_modes(); ++k) {
        Eigen::MatrixXcd a = fock.annihilate(k);
        gen += amplitudes(k) * a.adjoint() - std::conj(amplitudes(k)) * a;
    }
    // gen is anti-Hermitian; i·gen is Hermitian, exp(gen) = V e^{-i d} V†.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es;
    es.compute((std::complex<double>(0.0, 1.0) * gen).eval());
    Eigen::VectorXcd phase(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < phase.size(); ++i)
        phase(i) = std::exp(std::complex<double>(0.0, -es.eigenvalues()(i)));
    return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
}

double operator_norm(const Eigen::MatrixXcd& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es;
    es.compute((m.adjoint() * m).eval(), Eigen::EigenvaluesOnly);
    double top = es.eigenvalues().maxCoeff();
    return top > 0.0 ? std::sqrt(top) : 0.0;
}

double subblock_norm(const Eigen::MatrixXcd& m, const fock_space& fock, int level) {
    auto idx = fock.levels_upto(level);
    Eigen::MatrixXcd sub(idx.size(), idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r)
        for (std::size_t c = 0; c < idx.size(); ++c) sub(r, c) = m(idx[r], idx[c]);
    return operator_norm(sub);
}

} // namespace deco
