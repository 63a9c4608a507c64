#include "sdr/forms.hpp"

#include <bit>
#include <stdexcept>
#include <utility>

namespace sdr {

Complex DifferentialForm::operator()(const GroupPoint& p, std::span<const TangentVector> v) const {
    if (static_cast<int>(v.size()) != degree)
        throw std::invalid_argument("form evaluation: expected " + std::to_string(degree) + " tangents, got " +
                                    std::to_string(v.size()));
    return eval(p, v);
}

DifferentialForm zero_form(const GroupSpec& domain, int degree) {
    return {domain, degree, [](const GroupPoint&, std::span<const TangentVector>) { return Complex(0); }};
}

DifferentialForm function_form(const GroupSpec& domain, std::function<Complex(const GroupPoint&)> f) {
    return {domain, 0, [f = std::move(f)](const GroupPoint& p, std::span<const TangentVector>) { return f(p); }};
}

namespace {

void require_compatible(const DifferentialForm& a, const DifferentialForm& b, const char* what) {
    if (!(a.domain == b.domain)) throw std::invalid_argument(std::string(what) + ": domain mismatch");
    if (a.degree != b.degree) throw std::invalid_argument(std::string(what) + ": degree mismatch");
}

}  // namespace

DifferentialForm operator+(const DifferentialForm& a, const DifferentialForm& b) {
    require_compatible(a, b, "form sum");
    return {a.domain, a.degree,
            [a = a.eval, b = b.eval](const GroupPoint& p, std::span<const TangentVector> v) { return a(p, v) + b(p, v); }};
}

DifferentialForm operator-(const DifferentialForm& a, const DifferentialForm& b) {
    require_compatible(a, b, "form difference");
    return {a.domain, a.degree,
            [a = a.eval, b = b.eval](const GroupPoint& p, std::span<const TangentVector> v) { return a(p, v) - b(p, v); }};
}

DifferentialForm operator-(const DifferentialForm& a) { return Complex(-1) * a; }

DifferentialForm operator*(Complex s, const DifferentialForm& a) {
    return {a.domain, a.degree,
            [s, a = a.eval](const GroupPoint& p, std::span<const TangentVector> v) { return s * a(p, v); }};
}

SmoothMap identity_map(const GroupSpec& spec) {
    return {spec, spec, [](const GroupPoint& p) { return p; },
            [](const GroupPoint&, const TangentVector& v) { return v; }};
}

SmoothMap compose(const SmoothMap& outer, const SmoothMap& inner) {
    if (!(outer.source == inner.target)) throw std::invalid_argument("compose: domain mismatch");
    return {inner.source, outer.target,
            [o = outer.apply, i = inner.apply](const GroupPoint& p) { return o(i(p)); },
            [oa = outer.push, ia = inner.apply, ip = inner.push](const GroupPoint& p, const TangentVector& v) {
                return oa(ia(p), ip(p, v));
            }};
}

TangentVector numerical_push(const SmoothMap& f, const GroupPoint& p, const TangentVector& v, DerivativeOptions opts) {
    const AlgebraVector a = left_trivialize(p, v);
    auto central = [&](double h) {
        const GroupPoint plus = f.apply(flow(p, a, h));
        const GroupPoint minus = f.apply(flow(p, a, -h));
        std::vector<Mat> r;
        for (std::size_t i = 0; i < plus.size(); ++i) {
            if (plus.spec[i].is_loop()) throw std::invalid_argument("numerical_push: loop factors unsupported");
            r.push_back((plus.mat(i) - minus.mat(i)) / (2.0 * h));
        }
        return r;
    };
    std::vector<Mat> d = central(opts.fd_step);
    if (opts.richardson) {
        const std::vector<Mat> half = central(opts.fd_step / 2);
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = (4.0 * half[i] - d[i]) / 3.0;
    }
    return make_tangent(std::move(d));
}

MatrixOneForm maurer_cartan(const GroupSpec& domain, std::size_t factor) {
    if (factor >= domain.size()) throw std::invalid_argument("maurer_cartan: factor index out of range");
    return {domain, [factor](const GroupPoint& p, const TangentVector& v) -> Mat {
                return p.mat(factor).adjoint() * v.mat(factor);
            }};
}

DifferentialForm trace_form(const MatrixOneForm& w) {
    return {w.domain, 1,
            [e = w.eval](const GroupPoint& p, std::span<const TangentVector> v) { return e(p, v[0]).trace(); }};
}

Complex chern_simons_normalization() { return kInv2PiI * kInv2PiI * (-1.0 / 6.0); }

DifferentialForm trace_cubed_form(const GroupSpec& domain, std::size_t factor, Complex normalization) {
    const MatrixOneForm mc = maurer_cartan(domain, factor);
    return {domain, 3, [mc = mc.eval, normalization](const GroupPoint& p, std::span<const TangentVector> v) {
                const Mat a = mc(p, v[0]);
                const Mat b = mc(p, v[1]);
                const Mat c = mc(p, v[2]);
                // Cyclicity of the trace folds the six permutations into two orbits.
                const Complex even = trace_of_product(a * b, c);
                const Complex odd = trace_of_product(a * c, b);
                return normalization * 3.0 * (even - odd);
            }};
}

DifferentialForm chern_c22(ChernVariant variant, GroupKind kind) {
    const Complex n2 = kInv2PiI * kInv2PiI * 0.5;
    const GroupSpec domain{kind, kind};
    return {domain, 2, [variant, n2](const GroupPoint& p, std::span<const TangentVector> v) {
                const Mat& h1 = p.mat(0);
                const Mat& h2 = p.mat(1);
                const Mat& x1 = v[0].mat(0);
                const Mat& y1 = v[0].mat(1);
                const Mat& x2 = v[1].mat(0);
                const Mat& y2 = v[1].mat(1);
                const Mat left = h2.adjoint() * h1.adjoint();
                Complex value = n2 * (trace_of_product(left * x1, y2) - trace_of_product(left * x2, y1));
                if (variant == ChernVariant::U) {
                    const Complex a1 = trace_of_product(h1.adjoint(), x1);
                    const Complex a2 = trace_of_product(h1.adjoint(), x2);
                    const Complex b1 = trace_of_product(h2.adjoint(), y1);
                    const Complex b2 = trace_of_product(h2.adjoint(), y2);
                    value -= n2 * (a1 * b2 - a2 * b1);
                }
                return value;
            }};
}

DifferentialForm pullback(const SmoothMap& f, const DifferentialForm& w) {
    if (!(f.target == w.domain))
        throw std::invalid_argument("pullback: map target " + f.target.describe() + " does not match form domain " +
                                    w.domain.describe());
    return {f.source, w.degree,
            [apply = f.apply, push = f.push, e = w.eval](const GroupPoint& p, std::span<const TangentVector> v) {
                std::vector<TangentVector> pushed;
                pushed.reserve(v.size());
                for (const auto& x : v) pushed.push_back(push(p, x));
                return e(apply(p), pushed);
            }};
}

DifferentialForm exterior_derivative(const DifferentialForm& w, DerivativeOptions opts) {
    return {w.domain, w.degree + 1, [e = w.eval, opts](const GroupPoint& p, std::span<const TangentVector> v) {
                const std::size_t n = v.size();
                std::vector<AlgebraVector> alg;
                alg.reserve(n);
                for (const auto& x : v) alg.push_back(left_trivialize(p, x));

                Complex sum = 0;
                std::vector<TangentVector> args;
                args.reserve(n);
                for (std::size_t i = 0; i < n; ++i) {
                    auto along = [&](double s) {
                        const GroupPoint q = flow(p, alg[i], s);
                        args.clear();
                        for (std::size_t j = 0; j < n; ++j)
                            if (j != i) args.push_back(translate(q, alg[j]));
                        return e(q, args);
                    };
                    auto central = [&](double h) { return (along(h) - along(-h)) / (2.0 * h); };
                    const Complex d = opts.richardson
                                          ? (4.0 * central(opts.fd_step / 2) - central(opts.fd_step)) / 3.0
                                          : central(opts.fd_step);
                    sum += (i % 2 == 0 ? 1.0 : -1.0) * d;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    for (std::size_t j = i + 1; j < n; ++j) {
                        args.clear();
                        args.push_back(bracket(p, v[i], v[j]));
                        for (std::size_t l = 0; l < n; ++l)
                            if (l != i && l != j) args.push_back(v[l]);
                        sum += ((i + j) % 2 == 0 ? 1.0 : -1.0) * e(p, args);
                    }
                }
                return sum;
            }};
}

DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b) {
    if (!(a.domain == b.domain)) throw std::invalid_argument("wedge: domain mismatch");
    const int da = a.degree;
    const int db = b.degree;
    // (da, db)-shuffles as bitmasks over da + db slots, with their signs.
    std::vector<std::pair<unsigned, double>> shuffles;
    const unsigned total = static_cast<unsigned>(da + db);
    for (unsigned mask = 0; mask < (1u << total); ++mask) {
        if (std::popcount(mask) != da) continue;
        int inversions = 0;
        for (unsigned i = 0; i < total; ++i)
            if (mask & (1u << i))
                for (unsigned j = 0; j < i; ++j)
                    if (!(mask & (1u << j))) ++inversions;
        shuffles.emplace_back(mask, inversions % 2 == 0 ? 1.0 : -1.0);
    }
    return {a.domain, da + db,
            [ea = a.eval, eb = b.eval, shuffles, total](const GroupPoint& p, std::span<const TangentVector> v) {
                Complex sum = 0;
                std::vector<TangentVector> left, right;
                for (const auto& [mask, sign] : shuffles) {
                    left.clear();
                    right.clear();
                    for (unsigned i = 0; i < total; ++i) (mask & (1u << i) ? left : right).push_back(v[i]);
                    sum += sign * ea(p, left) * eb(p, right);
                }
                return sum;
            }};
}

DifferentialForm random_form(const GroupSpec& domain, int degree, Rng& rng) {
    if (domain.has_loops()) throw std::invalid_argument("random_form: ordinary factors only");
    struct OneForm {
        std::vector<Mat> linear, invariant, coefficient;
    };
    struct Term {
        Complex c0;
        std::vector<Mat> scalar;
        std::vector<OneForm> ones;
    };
    auto random_matrix = [&](int n) {
        Mat m(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) m(r, c) = Complex(rng.normal(), rng.normal()) * 0.5;
        return m;
    };
    std::vector<Term> terms(2);
    for (auto& t : terms) {
        t.c0 = Complex(rng.normal(), rng.normal());
        for (const auto& f : domain.factors) t.scalar.push_back(random_matrix(matrix_dim(f.kind)));
        t.ones.resize(static_cast<std::size_t>(degree));
        for (auto& o : t.ones) {
            for (const auto& f : domain.factors) {
                const int n = matrix_dim(f.kind);
                o.linear.push_back(random_matrix(n));
                o.invariant.push_back(random_matrix(n));
                o.coefficient.push_back(random_matrix(n));
            }
        }
    }
    return {domain, degree, [terms, degree](const GroupPoint& p, std::span<const TangentVector> v) {
                Complex sum = 0;
                for (const auto& t : terms) {
                    Complex f = t.c0;
                    for (std::size_t i = 0; i < p.size(); ++i) f += trace_of_product(t.scalar[i], p.mat(i));
                    if (degree == 0) {
                        sum += f;
                        continue;
                    }
                    Eigen::MatrixXcd m(degree, degree);
                    for (int l = 0; l < degree; ++l) {
                        const auto& o = t.ones[static_cast<std::size_t>(l)];
                        for (int j = 0; j < degree; ++j) {
                            Complex a = 0;
                            for (std::size_t i = 0; i < p.size(); ++i) {
                                const Mat& x = v[static_cast<std::size_t>(j)].mat(i);
                                a += trace_of_product(o.linear[i], x) +
                                     trace_of_product(o.invariant[i], p.mat(i).adjoint() * x) *
                                         trace_of_product(o.coefficient[i], p.mat(i));
                            }
                            m(l, j) = a;
                        }
                    }
                    sum += f * m.determinant();
                }
                return sum;
            }};
}

double linearity_residual(const DifferentialForm& w, const GroupPoint& p, std::span<const TangentVector> v,
                          const TangentVector& extra, std::size_t slot, double a, double b) {
    std::vector<TangentVector> args(v.begin(), v.end());
    const Complex wx = w(p, args);
    args[slot] = extra;
    const Complex wy = w(p, args);
    args[slot] = a * v[slot] + b * extra;
    const Complex wc = w(p, args);
    return std::abs(wc - a * wx - b * wy) / (1.0 + std::abs(wx) + std::abs(wy));
}

double alternation_residual(const DifferentialForm& w, const GroupPoint& p, std::span<const TangentVector> v,
                            std::size_t i, std::size_t j) {
    std::vector<TangentVector> args(v.begin(), v.end());
    const Complex w0 = w(p, args);
    std::swap(args[i], args[j]);
    return std::abs(w0 + w(p, args));
}

}  // namespace sdr
