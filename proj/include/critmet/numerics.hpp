// numerics.hpp - dense symmetric eigensolver, pseudoinverse, complex digamma,
// finite differences, power-law fits and a fixed-step RK4 propagator

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "critmet/errors.hpp"

namespace critmet {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

namespace numerics {

struct EigenSystem {
    Vec values;   // ascending
    Mat vectors;  // columns
};

struct FitResult {
    double exponent = 0.0;   // slope
    double prefactor = 0.0;  // exp(intercept) for log-log, intercept for linear
    double r_squared = 0.0;
};

inline double symmetry_residual(const Mat& a) {
    double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    return (a - a.transpose()).cwiseAbs().maxCoeff() / scale;
}

namespace detail {

// Householder reduction to tridiagonal form. On return z holds the accumulated
// orthogonal transform, d the diagonal and e the subdiagonal (e[0] = 0).
inline void tridiagonalize(Mat& z, Vec& d, Vec& e) {
    const int n = static_cast<int>(z.rows());
    d.resize(n);
    e.resize(n);
    for (int i = n - 1; i > 0; --i) {
        const int l = i - 1;
        double h = 0.0;
        if (l > 0) {
            double scale = 0.0;
            for (int k = 0; k <= l; ++k) scale += std::abs(z(i, k));
            if (scale == 0.0) {
                e[i] = z(i, l);
            } else {
                for (int k = 0; k <= l; ++k) {
                    z(i, k) /= scale;
                    h += z(i, k) * z(i, k);
                }
                double f = z(i, l);
                double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                z(i, l) = f - g;
                f = 0.0;
                for (int j = 0; j <= l; ++j) {
                    z(j, i) = z(i, j) / h;
                    g = 0.0;
                    for (int k = 0; k <= j; ++k) g += z(j, k) * z(i, k);
                    for (int k = j + 1; k <= l; ++k) g += z(k, j) * z(i, k);
                    e[j] = g / h;
                    f += e[j] * z(i, j);
                }
                const double hh = f / (h + h);
                for (int j = 0; j <= l; ++j) {
                    f = z(i, j);
                    e[j] = g = e[j] - hh * f;
                    for (int k = 0; k <= j; ++k) z(j, k) -= (f * e[k] + g * z(i, k));
                }
            }
        } else {
            e[i] = z(i, l);
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for (int i = 0; i < n; ++i) {
        const int l = i - 1;
        if (d[i] != 0.0) {
            for (int j = 0; j <= l; ++j) {
                double g = 0.0;
                for (int k = 0; k <= l; ++k) g += z(i, k) * z(k, j);
                for (int k = 0; k <= l; ++k) z(k, j) -= g * z(k, i);
            }
        }
        d[i] = z(i, i);
        z(i, i) = 1.0;
        for (int j = 0; j <= l; ++j) z(j, i) = z(i, j) = 0.0;
    }
}

// implicit-shift QL on the tridiagonal (d, e), rotating the columns of z
inline void tridiagonal_ql(Vec& d, Vec& e, Mat& z, int max_sweeps = 60) {
    const int n = static_cast<int>(d.size());
    for (int i = 1; i < n; ++i) e[i - 1] = e[i];
    if (n > 0) e[n - 1] = 0.0;
    const double eps = std::numeric_limits<double>::epsilon();
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == max_sweeps)
                    throw NumericalError("eigh_symmetric: QL iteration did not converge for a " +
                                         std::to_string(n) + "x" + std::to_string(n) + " matrix");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    e[i + 1] = (r = std::hypot(f, g));
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    d[i + 1] = g + (p = s * r);
                    g = c * r - b;
                    for (int k = 0; k < n; ++k) {
                        f = z(k, i + 1);
                        z(k, i + 1) = s * z(k, i) + c * f;
                        z(k, i) = c * z(k, i) - s * f;
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

} // namespace detail

// Largest-magnitude component made positive; exact ties go to the first index.
inline void fix_sign(Eigen::Ref<Vec> v) {
    Eigen::Index best = 0;
    double amax = -1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double a = std::abs(v[i]);
        if (a > amax * (1.0 + 1e-12)) {
            amax = a;
            best = i;
        }
    }
    if (v[best] < 0.0) v = -v;
}

inline EigenSystem eigh_symmetric(const Mat& a) {
    if (a.rows() != a.cols() || a.rows() < 1)
        throw ValidationError("eigh_symmetric: matrix must be square with dim >= 1");
    if (!a.allFinite()) throw ValidationError("eigh_symmetric: non-finite entries");
    if (symmetry_residual(a) > 1e-12) throw ValidationError("eigh_symmetric: matrix is not symmetric");

    const Eigen::Index n = a.rows();
    Mat z = 0.5 * (a + a.transpose());
    Vec d, e;
    detail::tridiagonalize(z, d, e);
    detail::tridiagonal_ql(d, e, z);

    std::vector<Eigen::Index> order(static_cast<size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
    std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return d[x] < d[y]; });

    EigenSystem out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        out.values[k] = d[order[static_cast<size_t>(k)]];
        out.vectors.col(k) = z.col(order[static_cast<size_t>(k)]);
        fix_sign(out.vectors.col(k));
    }
    return out;
}

inline Mat pseudoinverse_psd(const Mat& a, double rank_tol = 1e-10) {
    if (rank_tol <= 0.0) throw ValidationError("pseudoinverse_psd: rank_tol must be positive");
    const auto es = eigh_symmetric(a);
    const double lmax = std::max(std::abs(es.values.minCoeff()), std::abs(es.values.maxCoeff()));
    Mat out = Mat::Zero(a.rows(), a.cols());
    if (lmax == 0.0) return out;
    for (Eigen::Index k = 0; k < es.values.size(); ++k) {
        const double lam = es.values[k];
        if (lam < -rank_tol * lmax)
            throw DomainError("pseudoinverse_psd: matrix is not PSD (eigenvalue " + std::to_string(lam) + ")");
        if (lam > rank_tol * lmax) out += (1.0 / lam) * es.vectors.col(k) * es.vectors.col(k).transpose();
    }
    return out;
}

// psi(z) for complex z: reflection for Re z < 0, upward recurrence to Re z >= 8,
// then the asymptotic Bernoulli series
inline cplx digamma(cplx z) {
    constexpr double pi = std::numbers::pi;
    if (std::abs(z.imag()) < 1e-14 && z.real() <= 0.0 && std::abs(z.real() - std::round(z.real())) < 1e-14)
        throw DomainError("digamma: pole at non-positive integer " + std::to_string(z.real()));
    if (z.real() < 0.0) {
        // psi(z) = psi(1 - z) - pi cot(pi z)
        return digamma(1.0 - z) - pi * std::cos(pi * z) / std::sin(pi * z);
    }
    cplx acc = 0.0;
    while (z.real() < 8.0) {
        acc -= 1.0 / z;
        z += 1.0;
    }
    // B_{2k} / (2k) for k = 1..10
    static constexpr double coef[] = {
        1.0 / 12.0,         -1.0 / 120.0,       1.0 / 252.0,         -1.0 / 240.0,
        1.0 / 132.0,        -691.0 / 32760.0,   1.0 / 12.0,          -3617.0 / 8160.0,
        43867.0 / 14364.0,  -174611.0 / 6600.0,
    };
    const cplx w = 1.0 / (z * z);
    cplx series = 0.0;
    cplx wk = w;
    for (double c : coef) {
        series += c * wk;
        wk *= w;
    }
    return acc + std::log(z) - 0.5 / z - series;
}

inline double digamma(double x) { return digamma(cplx(x, 0.0)).real(); }

template <class F>
double central_diff(F&& f, double x, double h) {
    if (!(h > 0.0)) throw ValidationError("central_diff: step must be positive");
    const double fp = f(x + h);
    const double fm = f(x - h);
    if (!std::isfinite(fp) || !std::isfinite(fm))
        throw NumericalError("central_diff: non-finite function value near x = " + std::to_string(x));
    return (fp - fm) / (2.0 * h);
}

// central difference with one Richardson step: (4 D(h/2) - D(h)) / 3
template <class F>
double richardson_diff(F&& f, double x, double h) {
    const double d1 = central_diff(f, x, h);
    const double d2 = central_diff(f, x, 0.5 * h);
    return (4.0 * d2 - d1) / 3.0;
}

inline FitResult linear_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw ValidationError("linear_fit: length mismatch");
    if (xs.size() < 3) throw ValidationError("linear_fit: need at least 3 points");
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0.0) throw DomainError("linear_fit: all x values are equal");
    FitResult r;
    r.exponent = sxy / sxx;
    r.prefactor = my - r.exponent * mx;
    if (syy == 0.0) {
        r.r_squared = 1.0;
    } else {
        double ssr = 0.0;
        for (size_t i = 0; i < xs.size(); ++i) {
            const double res = ys[i] - (r.prefactor + r.exponent * xs[i]);
            ssr += res * res;
        }
        r.r_squared = std::clamp(1.0 - ssr / syy, 0.0, 1.0);
    }
    return r;
}

inline FitResult loglog_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw ValidationError("loglog_fit: length mismatch");
    if (xs.size() < 3) throw ValidationError("loglog_fit: need at least 3 points");
    std::vector<double> lx, ly;
    for (size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) throw DomainError("loglog_fit: data must be positive");
        lx.push_back(std::log(xs[i]));
        ly.push_back(std::log(ys[i]));
    }
    auto r = linear_fit(lx, ly);
    r.prefactor = std::exp(r.prefactor);
    return r;
}

// max row sum of |h|; bounds the spectral norm from above
inline double norm_bound(const CMat& h) {
    if (h.size() == 0) return 0.0;
    return h.cwiseAbs().rowwise().sum().maxCoeff();
}

// i d/dt psi = H psi with fixed-step RK4; renormalized once at the end
inline CVec propagate_schrodinger(const CMat& h, const CVec& psi0, double t, double dt) {
    if (h.rows() != h.cols() || h.rows() != psi0.size())
        throw ValidationError("propagate_schrodinger: dimension mismatch");
    if (!(dt > 0.0)) throw ConfigError("propagate_schrodinger: dt must be positive");
    if (t < 0.0) throw ValidationError("propagate_schrodinger: t must be non-negative");
    if (dt * norm_bound(h) > 0.1)
        throw ConfigError("propagate_schrodinger: dt*|H| = " + std::to_string(dt * norm_bound(h)) +
                          " exceeds 0.1; use a smaller dt");
    if (t == 0.0) return psi0;
    const auto steps = static_cast<long>(std::ceil(t / dt - 1e-12));
    const double step = t / static_cast<double>(steps);
    const cplx mi(0.0, -1.0);
    CVec psi = psi0;
    CVec k1, k2, k3, k4;
    for (long s = 0; s < steps; ++s) {
        k1 = mi * (h * psi);
        k2 = mi * (h * (psi + 0.5 * step * k1));
        k3 = mi * (h * (psi + 0.5 * step * k2));
        k4 = mi * (h * (psi + step * k3));
        psi += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    const double nrm = psi.norm();
    if (!(nrm > 0.0) || !std::isfinite(nrm)) throw NumericalError("propagate_schrodinger: state blew up");
    return psi / nrm;
}

// C = cos(sqrt(q) t), S = sin(sqrt(q) t)/sqrt(q), continued to q < 0 as cosh/sinh,
// with q-derivatives. A power series is used when |q| t^2 is small.
struct OscKernel {
    double c, s, dc_dq, ds_dq;
};

inline OscKernel osc_kernel(double q, double t) {
    OscKernel k{};
    const double z = q * t * t;
    if (std::abs(z) < 0.5) {
        // C = sum (-z)^j / (2j)!,  S = t sum (-z)^j / (2j+1)!
        double term_c = 1.0, term_s = t;
        double c = 0.0, s = 0.0, ds = 0.0;
        for (int j = 0; j < 40; ++j) {
            c += term_c;
            s += term_s;
            const double a = static_cast<double>(2 * j + 1);
            const double b = static_cast<double>(2 * j + 2);
            term_c *= -z / (a * b);
            term_s *= -z / (b * (b + 1.0));
        }
        // dC/dq = -t S / 2 exactly; dS/dq = sum_{j>=1} j (-1)^j q^{j-1} t^{2j+1}/(2j+1)!
        const double dc = -0.5 * t * s;
        double coeff = -t * t * t / 6.0;
        for (int j = 1; j < 40; ++j) {
            ds += static_cast<double>(j) * coeff;
            const double a = static_cast<double>(2 * j + 2);
            const double b = static_cast<double>(2 * j + 3);
            coeff *= -z / (a * b);
        }
        k.c = c;
        k.s = s;
        k.dc_dq = dc;
        k.ds_dq = ds;
        return k;
    }
    if (q > 0.0) {
        const double r = std::sqrt(q);
        k.c = std::cos(r * t);
        k.s = std::sin(r * t) / r;
    } else {
        const double r = std::sqrt(-q);
        k.c = std::cosh(r * t);
        k.s = std::sinh(r * t) / r;
    }
    k.dc_dq = -0.5 * t * k.s;
    k.ds_dq = (t * k.c - k.s) / (2.0 * q);
    return k;
}

} // namespace numerics
} // namespace critmet
