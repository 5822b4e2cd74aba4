// estimation.hpp - classical and quantum Fisher information, SLDs, QFIM,
// compatibility diagnostics and singular-QFIM helpers

#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "critmet/numerics.hpp"

namespace critmet::estimation {

using PureState = CVec;

// rho = sum_i p_i |psi_i><psi_i|, psi_i = basis.col(i)
struct SpectralState {
    Vec populations;
    CMat basis;
};

// dpopulations[i] = d p_i; overlaps(m, n) = <psi_m | d psi_n>
struct StateDerivative {
    Vec dpopulations;
    CMat overlaps;
};

struct FisherMatrix {
    std::vector<std::string> labels;
    Mat entries;
};

struct ClassicalFisher {
    double value = 0.0;
    bool divergent = false;  // a vanishing outcome carried a finite derivative
};

struct SpectralQfi {
    double population_term = 0.0;
    double basis_term = 0.0;
    double total = 0.0;
};

struct ZeroMode {
    double eigenvalue;
    Vec vector;
};

inline constexpr double kPairFloor = 1e-14;

inline void validate(const SpectralState& s) {
    const auto n = s.populations.size();
    if (n < 1 || s.basis.rows() != n || s.basis.cols() != n)
        throw ValidationError("SpectralState: basis must be square and match the population count");
    if (s.populations.minCoeff() < -1e-12) throw ValidationError("SpectralState: negative population");
    if (std::abs(s.populations.sum() - 1.0) > 1e-10) throw ValidationError("SpectralState: populations do not sum to 1");
    const CMat g = s.basis.adjoint() * s.basis;
    if ((g - CMat::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-10)
        throw ValidationError("SpectralState: basis is not orthonormal");
}

inline void validate(const SpectralState& s, const StateDerivative& d) {
    const auto n = s.populations.size();
    if (d.dpopulations.size() != n || d.overlaps.rows() != n || d.overlaps.cols() != n)
        throw ValidationError("StateDerivative: dimensions do not match the state");
}

inline CMat density_matrix(const SpectralState& s) {
    return s.basis * s.populations.cast<cplx>().asDiagonal() * s.basis.adjoint();
}

inline SpectralState from_pure(const PureState& psi) {
    // complete psi to an orthonormal basis with psi as the first column
    const auto n = psi.size();
    CMat q = CMat::Identity(n, n);
    q.col(0) = psi;
    Eigen::HouseholderQR<CMat> qr(q);
    CMat basis = qr.householderQ();
    const cplx ph = basis.col(0).dot(psi);  // <b0|psi>
    basis.col(0) *= ph / std::abs(ph);
    SpectralState s;
    s.populations = Vec::Zero(n);
    s.populations[0] = 1.0;
    s.basis = basis;
    return s;
}

// <psi_m| d rho |psi_n> = delta_mn dp_n + (p_n - p_m) <psi_m|d psi_n>
inline CMat drho_eigenbasis(const SpectralState& s, const StateDerivative& d) {
    const auto n = s.populations.size();
    CMat out(n, n);
    for (Eigen::Index m = 0; m < n; ++m)
        for (Eigen::Index k = 0; k < n; ++k)
            out(m, k) = (m == k) ? cplx(d.dpopulations[k]) : (s.populations[k] - s.populations[m]) * d.overlaps(m, k);
    return out;
}

inline CMat drho(const SpectralState& s, const StateDerivative& d) {
    return s.basis * drho_eigenbasis(s, d) * s.basis.adjoint();
}

inline ClassicalFisher classical_fisher(const std::vector<double>& probs, const std::vector<double>& dprobs,
                                        double floor = kPairFloor) {
    if (probs.size() != dprobs.size()) throw ValidationError("classical_fisher: length mismatch");
    double total = 0.0;
    for (double p : probs) {
        if (p < 0.0) throw DomainError("classical_fisher: negative probability");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-8) throw ValidationError("classical_fisher: probabilities must sum to 1");
    ClassicalFisher out;
    for (size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] > floor) {
            out.value += dprobs[i] * dprobs[i] / probs[i];
        } else if (std::abs(dprobs[i]) > 1e-8) {
            out.divergent = true;
        }
    }
    return out;
}

inline double qfi_pure(const PureState& psi, const CVec& dpsi) {
    if (psi.size() != dpsi.size()) throw ValidationError("qfi_pure: length mismatch");
    const cplx ov = psi.dot(dpsi);
    return 4.0 * (dpsi.squaredNorm() - std::norm(ov));
}

inline SpectralQfi qfi_spectral(const SpectralState& s, const StateDerivative& d) {
    validate(s);
    validate(s, d);
    const auto n = s.populations.size();
    SpectralQfi out;
    for (Eigen::Index k = 0; k < n; ++k) {
        const double p = s.populations[k];
        // the pair floor governs the basis term only; tiny thermal populations still carry (dp)^2/p
        if (p > 0.0) out.population_term += d.dpopulations[k] * d.dpopulations[k] / p;
    }
    for (Eigen::Index m = 0; m < n; ++m) {
        for (Eigen::Index k = 0; k < n; ++k) {
            if (m == k) continue;
            const double sum = s.populations[k] + s.populations[m];
            if (sum <= kPairFloor) continue;
            const double diff = s.populations[k] - s.populations[m];
            out.basis_term += 2.0 * diff * diff / sum * std::norm(d.overlaps(m, k));
        }
    }
    out.total = out.population_term + out.basis_term;
    return out;
}

// spectral-form SLD; drho is given in the computational basis
inline CMat sld(const SpectralState& s, const CMat& drho_comp) {
    validate(s);
    const auto n = s.populations.size();
    if (drho_comp.rows() != n || drho_comp.cols() != n) throw ValidationError("sld: drho dimension mismatch");
    if ((drho_comp - drho_comp.adjoint()).cwiseAbs().maxCoeff() > 1e-10) throw ValidationError("sld: drho is not Hermitian");
    if (std::abs(drho_comp.trace()) > 1e-10) throw ValidationError("sld: drho is not traceless");
    const CMat dd = s.basis.adjoint() * drho_comp * s.basis;
    CMat l = CMat::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const double sum = s.populations[i] + s.populations[j];
            if (sum > kPairFloor) {
                l(j, i) = 2.0 * dd(j, i) / sum;
            } else if (std::abs(dd(j, i)) > 1e-8) {
                throw DomainError("sld: drho has weight on an unsupported pair of eigenvectors");
            }
        }
    }
    return s.basis * l * s.basis.adjoint();
}

inline FisherMatrix qfim(const SpectralState& s, const std::vector<StateDerivative>& derivs,
                         std::vector<std::string> labels = {}) {
    if (derivs.empty()) throw ValidationError("qfim: need at least one derivative");
    validate(s);
    for (const auto& d : derivs) validate(s, d);
    const auto dim = static_cast<Eigen::Index>(derivs.size());
    const auto n = s.populations.size();
    std::vector<CMat> dd;
    for (const auto& d : derivs) dd.push_back(drho_eigenbasis(s, d));
    Mat f = Mat::Zero(dim, dim);
    for (Eigen::Index a = 0; a < dim; ++a) {
        for (Eigen::Index b = a; b < dim; ++b) {
            double acc = 0.0;
            for (Eigen::Index k = 0; k < n; ++k) {
                for (Eigen::Index l = 0; l < n; ++l) {
                    const double sum = s.populations[k] + s.populations[l];
                    if (sum <= kPairFloor) continue;
                    acc += 2.0 * (dd[a](k, l) * dd[b](l, k)).real() / sum;
                }
            }
            f(a, b) = f(b, a) = acc;
        }
    }
    if (labels.empty())
        for (Eigen::Index a = 0; a < dim; ++a) labels.push_back("theta" + std::to_string(a));
    if (static_cast<Eigen::Index>(labels.size()) != dim) throw ValidationError("qfim: label count mismatch");
    return {std::move(labels), f};
}

// Im Tr(rho [L1, L2]); the trace itself is purely imaginary
inline double compatibility_trace(const SpectralState& s, const CMat& l1, const CMat& l2) {
    const auto n = s.populations.size();
    if (l1.rows() != n || l2.rows() != n || l1.cols() != n || l2.cols() != n)
        throw ValidationError("compatibility_trace: dimension mismatch");
    const CMat rho = density_matrix(s);
    return (rho * (l1 * l2 - l2 * l1)).trace().imag();
}

// largest |eigenvalue| of (1/2)Tr(rho[L_i,L_j]) I^{-1}, computed as the spectral norm of
// the real antisymmetric I^{-1/2} D I^{-1/2}, D_ij = (1/2) Im Tr(rho[L_i,L_j])
inline double quantumness_r(const SpectralState& s, const std::vector<CMat>& slds, const FisherMatrix& f) {
    const auto d = static_cast<Eigen::Index>(slds.size());
    if (f.entries.rows() != d || f.entries.cols() != d) throw ValidationError("quantumness_r: QFIM size mismatch");
    if (d == 1) return 0.0;
    const auto es = numerics::eigh_symmetric(f.entries);
    const double lmax = es.values.maxCoeff();
    if (!(lmax > 0.0) || es.values.minCoeff() <= 1e-10 * lmax)
        throw DomainError("quantumness_r: QFIM is singular; inspect qfim_zero_modes instead");
    Mat dm = Mat::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = i + 1; j < d; ++j) {
            dm(i, j) = 0.5 * compatibility_trace(s, slds[static_cast<size_t>(i)], slds[static_cast<size_t>(j)]);
            dm(j, i) = -dm(i, j);
        }
    const Mat isqrt = es.vectors * es.values.cwiseSqrt().cwiseInverse().asDiagonal() * es.vectors.transpose();
    const Mat k = isqrt * dm * isqrt;
    const Mat ktk = k.transpose() * k;
    const auto ks = numerics::eigh_symmetric(0.5 * (ktk + ktk.transpose()));
    return std::sqrt(std::max(0.0, ks.values.maxCoeff()));
}

inline double snr(double dsignal, double variance, long repetitions = 1) {
    if (!(variance > 0.0)) throw DomainError("snr: variance must be positive");
    if (repetitions < 1) throw ValidationError("snr: repetitions must be positive");
    return static_cast<double>(repetitions) * dsignal * dsignal / variance;
}

inline std::vector<ZeroMode> qfim_zero_modes(const FisherMatrix& f, double tol = 1e-10) {
    const auto es = numerics::eigh_symmetric(f.entries);
    const double lmax = std::max(0.0, es.values.maxCoeff());
    std::vector<ZeroMode> out;
    for (Eigen::Index k = 0; k < es.values.size(); ++k)
        if (es.values[k] <= tol * lmax) out.push_back({es.values[k], es.vectors.col(k)});
    return out;
}

// J C J^T with C the pseudoinverse covariance
inline double effective_variance(const Mat& pinv, const Vec& jacobian) {
    if (pinv.rows() != jacobian.size() || pinv.cols() != jacobian.size())
        throw ValidationError("effective_variance: jacobian length must match the matrix dimension");
    return jacobian.dot(pinv * jacobian);
}

} // namespace critmet::estimation
