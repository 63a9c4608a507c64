#pragma once

// Small dense complex matrix kernels for the rank-one groups U(1), SU(2), U(2).
// Every matrix in the engine is at most 2x2, so storage is dynamic-size with a
// 2x2 maximum and lives on the stack.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>

namespace sdr {

template <typename Scalar>
using SmallMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 2, 2>;

using Complex = std::complex<double>;
using Mat = SmallMatrix<double>;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kPi = std::numbers::pi;

/// 1/(2 pi i)
inline const Complex kInv2PiI = 1.0 / (2.0 * kPi * kI);

template <typename Scalar = double>
SmallMatrix<Scalar> identity_matrix(int n) {
    return SmallMatrix<Scalar>::Identity(n, n);
}

/// Pauli matrix sigma_k, k in {1, 2, 3}.
template <typename Scalar = double>
SmallMatrix<Scalar> pauli(int k) {
    using C = std::complex<Scalar>;
    SmallMatrix<Scalar> s = SmallMatrix<Scalar>::Zero(2, 2);
    switch (k) {
        case 1: s(0, 1) = C(1); s(1, 0) = C(1); break;
        case 2: s(0, 1) = C(0, -1); s(1, 0) = C(0, 1); break;
        case 3: s(0, 0) = C(1); s(1, 1) = C(-1); break;
        default: break;
    }
    return s;
}

template <typename DerivedA, typename DerivedB>
auto commutator(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
    return (a * b - b * a).eval();
}

/// tr(a b) without forming the product.
template <typename DerivedA, typename DerivedB>
auto trace_of_product(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
    return (a.transpose().cwiseProduct(b)).sum();
}

namespace detail {

// Entire functions of x = delta^2 used by the closed-form 2x2 exponential:
//   c0(x) = cosh(sqrt x),  s1(x) = sinh(sqrt x)/sqrt x,  s1'(x).
template <typename Scalar>
struct ExpCoefficients {
    std::complex<Scalar> c0, s1, ds1;
};

template <typename Scalar>
ExpCoefficients<Scalar> exp_coefficients(std::complex<Scalar> x) {
    using C = std::complex<Scalar>;
    if (std::abs(x) < Scalar(1)) {
        // Taylor series; 14 terms leave a remainder far below double epsilon for |x| < 1.
        C c0(0), s1(0), ds1(0), pw(1);
        Scalar fact_even = 1;  // (2k)!
        Scalar fact_odd = 1;   // (2k+1)!
        for (int k = 0; k < 14; ++k) {
            if (k > 0) {
                fact_even *= Scalar(2 * k - 1) * Scalar(2 * k);
                fact_odd *= Scalar(2 * k) * Scalar(2 * k + 1);
            }
            c0 += pw / fact_even;
            s1 += pw / fact_odd;
            // d/dx x^(k+1)/(2k+3)! = (k+1) x^k/(2k+3)!
            ds1 += Scalar(k + 1) * pw / (fact_odd * Scalar(2 * k + 2) * Scalar(2 * k + 3));
            pw *= x;
        }
        return {c0, s1, ds1};
    }
    const C d = std::sqrt(x);
    const C c0 = std::cosh(d);
    const C s1 = std::sinh(d) / d;
    return {c0, s1, (c0 - s1) / (Scalar(2) * x)};
}

}  // namespace detail

/// Matrix exponential of a 1x1 or 2x2 complex matrix in closed form.
template <typename Scalar>
SmallMatrix<Scalar> expm(const SmallMatrix<Scalar>& m) {
    if (m.rows() == 1) {
        SmallMatrix<Scalar> r(1, 1);
        r(0, 0) = std::exp(m(0, 0));
        return r;
    }
    const auto c = m.trace() / Scalar(2);
    const SmallMatrix<Scalar> n = m - c * identity_matrix<Scalar>(2);
    const auto x = trace_of_product(n, n) / Scalar(2);
    const auto k = detail::exp_coefficients<Scalar>(x);
    return (std::exp(c) * (k.c0 * identity_matrix<Scalar>(2) + k.s1 * n)).eval();
}

/// Directional derivative d/ds expm(m + s e) at s = 0, exact.
template <typename Scalar>
SmallMatrix<Scalar> dexpm(const SmallMatrix<Scalar>& m, const SmallMatrix<Scalar>& e) {
    if (m.rows() == 1) {
        SmallMatrix<Scalar> r(1, 1);
        r(0, 0) = std::exp(m(0, 0)) * e(0, 0);
        return r;
    }
    const auto id = identity_matrix<Scalar>(2);
    const auto c = m.trace() / Scalar(2);
    const auto dc = e.trace() / Scalar(2);
    const SmallMatrix<Scalar> n = m - c * id;
    const SmallMatrix<Scalar> dn = e - dc * id;
    const auto x = trace_of_product(n, n) / Scalar(2);
    const auto dx = trace_of_product(n, dn);
    const auto k = detail::exp_coefficients<Scalar>(x);
    const SmallMatrix<Scalar> core = k.c0 * id + k.s1 * n;
    const SmallMatrix<Scalar> dcore = (k.s1 / Scalar(2)) * dx * id + k.ds1 * dx * n + k.s1 * dn;
    return (std::exp(c) * (dc * core + dcore)).eval();
}

template <typename Derived>
double anti_hermitian_residual(const Eigen::MatrixBase<Derived>& a) {
    return (a + a.adjoint()).norm();
}

template <typename Derived>
double unitarity_residual(const Eigen::MatrixBase<Derived>& g) {
    using Plain = typename Derived::PlainObject;
    return (g.adjoint() * g - Plain::Identity(g.rows(), g.cols())).norm();
}

}  // namespace sdr
