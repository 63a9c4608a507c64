#include "sdr/matgroups.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sdr {

std::string_view to_string(GroupKind kind) {
    switch (kind) {
        case GroupKind::SU2: return "SU2";
        case GroupKind::U2: return "U2";
        case GroupKind::PU2: return "PU2";
        case GroupKind::U1: return "U1";
    }
    return "?";
}

int matrix_dim(GroupKind kind) { return kind == GroupKind::U1 ? 1 : 2; }

int algebra_dim(GroupKind kind) {
    switch (kind) {
        case GroupKind::U1: return 1;
        case GroupKind::U2: return 4;
        default: return 3;
    }
}

GroupSpec::GroupSpec(std::initializer_list<GroupKind> kinds) {
    for (auto k : kinds) factors.push_back({k, 1});
}

GroupSpec GroupSpec::power(FactorSpec factor, int count) {
    return GroupSpec(std::vector<FactorSpec>(static_cast<std::size_t>(std::max(count, 0)), factor));
}

bool GroupSpec::has_loops() const {
    return std::any_of(factors.begin(), factors.end(), [](const FactorSpec& f) { return f.is_loop(); });
}

std::string GroupSpec::describe() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (i) os << "x";
        if (factors[i].is_loop()) os << "L";
        os << to_string(factors[i].kind);
        if (factors[i].is_loop()) os << "[" << factors[i].samples << "]";
    }
    if (factors.empty()) os << "pt";
    return os.str();
}

GroupSpec concat(const GroupSpec& a, const GroupSpec& b) {
    std::vector<FactorSpec> f = a.factors;
    f.insert(f.end(), b.factors.begin(), b.factors.end());
    return GroupSpec(std::move(f));
}

GroupPoint make_point(const GroupSpec& spec, std::vector<Mat> mats) {
    if (spec.size() != mats.size()) throw std::invalid_argument("make_point: factor count mismatch");
    GroupPoint p{spec, {}};
    p.factors.reserve(mats.size());
    for (std::size_t i = 0; i < mats.size(); ++i) {
        if (spec[i].is_loop()) throw std::invalid_argument("make_point: loop factors need sampled values");
        p.factors.emplace_back(std::move(mats[i]));
    }
    return p;
}

TangentVector make_tangent(std::vector<Mat> mats) {
    TangentVector v;
    v.factors.reserve(mats.size());
    for (auto& m : mats) v.factors.emplace_back(std::move(m));
    return v;
}

GroupPoint identity_point(const GroupSpec& spec) {
    GroupPoint p{spec, {}};
    for (const auto& f : spec.factors) {
        const int n = matrix_dim(f.kind);
        if (f.is_loop()) {
            p.factors.emplace_back(std::vector<Mat>(f.samples, identity_matrix(n)),
                                   std::vector<Mat>(f.samples, Mat::Zero(n, n)));
        } else {
            p.factors.emplace_back(identity_matrix(n));
        }
    }
    return p;
}

namespace {

FactorValue zero_like(const FactorValue& f) {
    FactorValue z;
    const auto n = f.values.front().rows();
    z.values.assign(f.values.size(), Mat::Zero(n, n));
    if (f.has_rates()) z.rates.assign(f.rates.size(), Mat::Zero(n, n));
    return z;
}

void require_same_layout(const GroupSpec& a, const GroupSpec& b, const char* what) {
    if (!(a == b)) throw std::invalid_argument(std::string(what) + ": group spec mismatch " + a.describe() + " vs " + b.describe());
}

}  // namespace

TangentVector zero_tangent(const GroupPoint& at) {
    TangentVector v;
    for (const auto& f : at.factors) v.factors.push_back(zero_like(f));
    return v;
}

std::vector<Mat> algebra_basis(GroupKind kind) {
    if (kind == GroupKind::U1) {
        Mat m(1, 1);
        m(0, 0) = kI;
        return {m};
    }
    std::vector<Mat> basis;
    for (int k = 1; k <= 3; ++k) basis.push_back(kI * pauli(k));
    if (kind == GroupKind::U2) basis.push_back(kI * identity_matrix(2));
    return basis;
}

double membership_residual(GroupKind kind, const Mat& g) {
    if (g.rows() != matrix_dim(kind) || g.cols() != matrix_dim(kind)) return std::numeric_limits<double>::infinity();
    double r = unitarity_residual(g);
    if (kind == GroupKind::SU2 || kind == GroupKind::PU2) r = std::max(r, std::abs(g.determinant() - 1.0));
    return r;
}

double membership_residual(const GroupPoint& p) {
    double r = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (const auto& m : p.factors[i].values) r = std::max(r, membership_residual(p.spec[i].kind, m));
    return r;
}

bool is_member(const GroupPoint& p, double tol) { return membership_residual(p) < tol; }

double tangent_residual(const GroupPoint& at, const TangentVector& v) {
    double r = 0;
    for (std::size_t i = 0; i < at.size(); ++i) {
        const auto kind = at.spec[i].kind;
        for (std::size_t j = 0; j < at.factors[i].samples(); ++j) {
            const Mat a = at.factors[i].values[j].adjoint() * v.factors[i].values[j];
            r = std::max(r, anti_hermitian_residual(a));
            if (kind == GroupKind::SU2 || kind == GroupKind::PU2) r = std::max(r, std::abs(a.trace()));
        }
    }
    return r;
}

Mat sample_factor(GroupKind kind, Rng& rng) {
    if (kind == GroupKind::U1) {
        Mat m(1, 1);
        m(0, 0) = std::polar(1.0, rng.uniform(0.0, 2.0 * kPi));
        return m;
    }
    // Uniform unit quaternion a0 + i(a1 s1 + a2 s2 + a3 s3).
    double a[4];
    double norm = 0;
    do {
        norm = 0;
        for (double& x : a) {
            x = rng.normal();
            norm += x * x;
        }
    } while (norm < 1e-20);
    norm = std::sqrt(norm);
    for (double& x : a) x /= norm;
    Mat g(2, 2);
    g << Complex(a[0], a[3]), Complex(a[2], a[1]), Complex(-a[2], a[1]), Complex(a[0], -a[3]);
    if (kind == GroupKind::U2) g *= std::polar(1.0, rng.uniform(0.0, 2.0 * kPi));
    return g;
}

Mat sample_algebra(GroupKind kind, Rng& rng) {
    const auto basis = algebra_basis(kind);
    Mat a = Mat::Zero(basis.front().rows(), basis.front().cols());
    for (const auto& b : basis) a += rng.normal() * b;
    return a;
}

GroupPoint sample_point(const GroupSpec& spec, Rng& rng) {
    std::vector<Mat> mats;
    for (const auto& f : spec.factors) {
        if (f.is_loop()) throw std::invalid_argument("sample_point: loop factors are sampled by the loop space module");
        mats.push_back(sample_factor(f.kind, rng));
    }
    return make_point(spec, std::move(mats));
}

TangentVector sample_tangent(const GroupPoint& at, Rng& rng) {
    std::vector<Mat> mats;
    for (std::size_t i = 0; i < at.size(); ++i) {
        if (at.spec[i].is_loop()) throw std::invalid_argument("sample_tangent: loop factors are sampled by the loop space module");
        mats.push_back(at.mat(i) * sample_algebra(at.spec[i].kind, rng));
    }
    return make_tangent(std::move(mats));
}

FactorValue multiply(const FactorValue& a, const FactorValue& b) {
    FactorValue r;
    const std::size_t n = std::max(a.samples(), b.samples());
    r.values.reserve(n);
    // An ordinary factor times a loop broadcasts the constant over samples.
    auto at = [](const std::vector<Mat>& v, std::size_t j) -> const Mat& { return v.size() == 1 ? v.front() : v[j]; };
    for (std::size_t j = 0; j < n; ++j) r.values.push_back(at(a.values, j) * at(b.values, j));
    if (a.has_rates() || b.has_rates()) {
        r.rates.reserve(n);
        for (std::size_t j = 0; j < n; ++j) {
            Mat d = Mat::Zero(r.values[j].rows(), r.values[j].cols());
            if (a.has_rates()) d += at(a.rates, j) * at(b.values, j);
            if (b.has_rates()) d += at(a.values, j) * at(b.rates, j);
            r.rates.push_back(d);
        }
    }
    return r;
}

FactorValue multiply_tangent(const FactorValue& ga, const FactorValue& xa, const FactorValue& gb,
                             const FactorValue& xb) {
    FactorValue r;
    const std::size_t n = ga.samples();
    r.values.reserve(n);
    for (std::size_t j = 0; j < n; ++j) r.values.push_back(xa.values[j] * gb.values[j] + ga.values[j] * xb.values[j]);
    if (ga.has_rates()) {
        r.rates.reserve(n);
        for (std::size_t j = 0; j < n; ++j) {
            r.rates.push_back(xa.rates[j] * gb.values[j] + xa.values[j] * gb.rates[j] + ga.rates[j] * xb.values[j] +
                              ga.values[j] * xb.rates[j]);
        }
    }
    return r;
}

FactorValue inverse(const FactorValue& a) {
    FactorValue r;
    r.values.reserve(a.samples());
    for (const auto& m : a.values) r.values.push_back(m.adjoint());
    if (a.has_rates()) {
        // (g^{-1})' = -g^{-1} g' g^{-1}
        for (std::size_t j = 0; j < a.samples(); ++j) r.rates.push_back(-r.values[j] * a.rates[j] * r.values[j]);
    }
    return r;
}

GroupPoint multiply(const GroupPoint& a, const GroupPoint& b) {
    require_same_layout(a.spec, b.spec, "multiply");
    GroupPoint r{a.spec, {}};
    for (std::size_t i = 0; i < a.size(); ++i) r.factors.push_back(multiply(a.factors[i], b.factors[i]));
    return r;
}

GroupPoint inverse(const GroupPoint& a) {
    GroupPoint r{a.spec, {}};
    for (const auto& f : a.factors) r.factors.push_back(inverse(f));
    return r;
}

Complex central_ratio(const Mat& a, const Mat& b, double tol) {
    const Mat q = b.adjoint() * a;
    const Complex u = q(0, 0);
    if ((q - u * identity_matrix(q.rows())).norm() > tol) return {std::nan(""), std::nan("")};
    return u;
}

bool projective_equal(const GroupPoint& a, const GroupPoint& b, double tol) {
    require_same_layout(a.spec, b.spec, "projective_equal");
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.factors[i].samples(); ++j) {
            const Complex u = central_ratio(a.factors[i].values[j], b.factors[i].values[j], tol);
            if (std::isnan(u.real()) || std::abs(std::abs(u) - 1.0) > tol) return false;
        }
    }
    return true;
}

namespace {

template <typename Op>
TangentVector combine(const TangentVector& a, const TangentVector& b, Op op) {
    if (a.size() != b.size()) throw std::invalid_argument("tangent arithmetic: factor count mismatch");
    TangentVector r;
    r.factors.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        FactorValue f;
        for (std::size_t j = 0; j < a.factors[i].samples(); ++j)
            f.values.push_back(op(a.factors[i].values[j], b.factors[i].values[j]));
        for (std::size_t j = 0; j < a.factors[i].rates.size(); ++j)
            f.rates.push_back(op(a.factors[i].rates[j], b.factors[i].rates[j]));
        r.factors.push_back(std::move(f));
    }
    return r;
}

}  // namespace

TangentVector operator+(const TangentVector& a, const TangentVector& b) {
    return combine(a, b, [](const Mat& x, const Mat& y) -> Mat { return x + y; });
}

TangentVector operator-(const TangentVector& a, const TangentVector& b) {
    return combine(a, b, [](const Mat& x, const Mat& y) -> Mat { return x - y; });
}

TangentVector operator*(double s, const TangentVector& a) {
    TangentVector r = a;
    for (auto& f : r.factors) {
        for (auto& m : f.values) m *= s;
        for (auto& m : f.rates) m *= s;
    }
    return r;
}

AlgebraVector left_trivialize(const GroupPoint& at, const TangentVector& v) {
    AlgebraVector a;
    a.factors.reserve(at.size());
    for (std::size_t i = 0; i < at.size(); ++i) {
        const auto& g = at.factors[i];
        const auto& x = v.factors[i];
        FactorValue f;
        f.values.reserve(g.samples());
        for (std::size_t j = 0; j < g.samples(); ++j) f.values.push_back(g.values[j].adjoint() * x.values[j]);
        if (g.has_rates()) {
            // (g^{-1} X)' = -g^{-1} g' g^{-1} X + g^{-1} X'
            for (std::size_t j = 0; j < g.samples(); ++j) {
                const Mat gi = g.values[j].adjoint();
                f.rates.push_back(-gi * g.rates[j] * f.values[j] + gi * x.rates[j]);
            }
        }
        a.factors.push_back(std::move(f));
    }
    return a;
}

TangentVector translate(const GroupPoint& at, const AlgebraVector& a) {
    TangentVector v;
    v.factors.reserve(at.size());
    for (std::size_t i = 0; i < at.size(); ++i) {
        const auto& g = at.factors[i];
        const auto& alg = a.factors[i];
        FactorValue f;
        f.values.reserve(g.samples());
        for (std::size_t j = 0; j < g.samples(); ++j) f.values.push_back(g.values[j] * alg.values[j]);
        if (g.has_rates()) {
            for (std::size_t j = 0; j < g.samples(); ++j)
                f.rates.push_back(g.rates[j] * alg.values[j] + g.values[j] * alg.rates[j]);
        }
        v.factors.push_back(std::move(f));
    }
    return v;
}

GroupPoint flow(const GroupPoint& p, const AlgebraVector& a, double s) {
    GroupPoint r{p.spec, {}};
    r.factors.reserve(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        const auto& g = p.factors[i];
        const auto& alg = a.factors[i];
        FactorValue f;
        f.values.reserve(g.samples());
        std::vector<Mat> e;
        e.reserve(g.samples());
        for (std::size_t j = 0; j < g.samples(); ++j) {
            e.push_back(expm<double>(s * alg.values[j]));
            f.values.push_back(g.values[j] * e.back());
        }
        if (g.has_rates()) {
            for (std::size_t j = 0; j < g.samples(); ++j) {
                const Mat de = dexpm<double>(s * alg.values[j], s * alg.rates[j]);
                f.rates.push_back(g.rates[j] * e[j] + g.values[j] * de);
            }
        }
        r.factors.push_back(std::move(f));
    }
    return r;
}

TangentVector bracket(const GroupPoint& at, const TangentVector& x, const TangentVector& y) {
    const AlgebraVector a = left_trivialize(at, x);
    const AlgebraVector b = left_trivialize(at, y);
    AlgebraVector c;
    for (std::size_t i = 0; i < at.size(); ++i) {
        FactorValue f;
        for (std::size_t j = 0; j < a.factors[i].samples(); ++j)
            f.values.push_back(commutator(a.factors[i].values[j], b.factors[i].values[j]));
        for (std::size_t j = 0; j < a.factors[i].rates.size(); ++j) {
            f.rates.push_back(commutator(a.factors[i].rates[j], b.factors[i].values[j]) +
                              commutator(a.factors[i].values[j], b.factors[i].rates[j]));
        }
        c.factors.push_back(std::move(f));
    }
    return translate(at, c);
}

namespace {

double factor_difference(const std::vector<FactorValue>& a, const std::vector<FactorValue>& b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double r = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].samples() != b[i].samples()) return std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < a[i].samples(); ++j)
            r = std::max(r, (a[i].values[j] - b[i].values[j]).cwiseAbs().maxCoeff());
        if (a[i].rates.size() == b[i].rates.size()) {
            for (std::size_t j = 0; j < a[i].rates.size(); ++j)
                r = std::max(r, (a[i].rates[j] - b[i].rates[j]).cwiseAbs().maxCoeff());
        }
    }
    return r;
}

}  // namespace

double max_abs_difference(const GroupPoint& a, const GroupPoint& b) {
    if (!(a.spec == b.spec)) return std::numeric_limits<double>::infinity();
    return factor_difference(a.factors, b.factors);
}

double max_abs_difference(const TangentVector& a, const TangentVector& b) {
    return factor_difference(a.factors, b.factors);
}

Mat CircleAction::embed(Complex z) const {
    Mat e = Mat::Zero(2, 2);
    if (orientation_ == 0) return identity_matrix(2);
    const Complex zo = orientation_ > 0 ? z : std::conj(z);
    e(0, 0) = zo;
    e(1, 1) = std::conj(zo);
    return e;
}

GroupPoint CircleAction::act(Complex z, const GroupPoint& g) const {
    GroupPoint r = g;
    if (is_trivial()) return r;
    const Mat e = embed(z);
    const Mat ei = e.adjoint();
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r.spec[i].kind == GroupKind::U1) continue;
        for (auto& m : r.factors[i].values) m = e * m * ei;
        for (auto& m : r.factors[i].rates) m = e * m * ei;
    }
    return r;
}

TangentVector CircleAction::push(Complex z, Complex w, const GroupPoint& g, const TangentVector& x) const {
    TangentVector r = x;
    if (is_trivial()) return r;
    const Mat e = embed(z);
    const Mat ei = e.adjoint();
    // dE = E K with K = o (z^{-1} w) sigma_3, so d(E g E^{-1}) = E([K, g] + X) E^{-1}.
    const Mat k = static_cast<double>(orientation_) * (w / z) * pauli(3);
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (g.spec[i].kind == GroupKind::U1) continue;
        const auto& gv = g.factors[i];
        auto& xv = r.factors[i];
        for (std::size_t j = 0; j < gv.samples(); ++j) xv.values[j] = e * (commutator(k, gv.values[j]) + xv.values[j]) * ei;
        for (std::size_t j = 0; j < gv.rates.size(); ++j) xv.rates[j] = e * (commutator(k, gv.rates[j]) + xv.rates[j]) * ei;
    }
    return r;
}

}  // namespace sdr
