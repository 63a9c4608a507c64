#pragma once

// Randomized residual probing. Probe i of a named check always draws from the
// stream (seed, name, i), and results are max-reduced, so reports do not
// depend on how probes are spread over workers.

#include "sdr/forms.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sdr {

struct ProbeSampler {
    std::function<GroupPoint(const GroupSpec&, Rng&)> point;
    std::function<TangentVector(const GroupPoint&, Rng&)> tangent;
};

/// Haar-like points and Gaussian Lie-algebra tangents on ordinary factors.
ProbeSampler group_sampler();

struct ProbeOptions {
    std::uint64_t seed = 1;
    int count = 200;
    int workers = 1;
};

/// Probe counts, derivative steps and tolerances shared by the identity checks.
struct CheckSettings {
    ProbeOptions probes;
    DerivativeOptions derivative{1e-4, true};
    /// Used wherever a finite difference is applied to an FD-backed form.
    DerivativeOptions nested = kNestedDerivative;
    double tol_exact = 1e-12;
    double tol_algebraic = 1e-10;
    double tol_lift = 1e-9;
    double tol_fd = 1e-6;
};

/// Max of residual(rng_i) over i < count; NaN counts as +inf.
double probe_max(const ProbeOptions& opts, std::string_view stream, const std::function<double(Rng&)>& residual);

/// Max |w(p; v_1..v_k)| over random probes.
double form_max_abs(const DifferentialForm& w, const ProbeSampler& sampler, const ProbeOptions& opts,
                    std::string_view stream);

/// Evidence for one frozen sign constant: the residual of the identity under
/// each choice of sign.
struct SignEvidence {
    std::string name;
    int frozen = 0;
    /// The sign whose residual is below tolerance, or 0 when neither or both are.
    int probed = 0;
    double residual_plus = 0;
    double residual_minus = 0;
    double tolerance = 0;

    bool ok() const { return probed != 0 && probed == frozen; }
    /// Only the other sign passes.
    bool contradicts() const { return probed != 0 && probed != frozen; }
    /// Both choices pass, so this identity cannot tell the signs apart.
    bool undecided() const { return residual_plus < tolerance && residual_minus < tolerance; }
};

SignEvidence probe_sign(std::string name, int frozen, double tolerance, const std::function<double(int)>& residual);

struct ResidualReport {
    std::string identity;
    std::string anchor;
    int probes = 0;
    double max_residual = 0;
    double tolerance = 0;
    std::vector<SignEvidence> signs;
    /// Residual of a deliberately broken variant; it has to exceed the tolerance.
    std::optional<double> control_residual;
    /// Reported but not counted towards the exit status.
    bool informational = false;
    std::string note;

    bool pass() const { return max_residual < tolerance; }
    bool control_ok() const { return !control_residual || *control_residual > tolerance; }
    bool signs_ok() const;
    /// pass, control and signs together; informational rows always count as ok.
    bool ok() const { return informational || (pass() && control_ok() && signs_ok()); }
};

/// Attaches sign evidence to a row; evidence where both signs pass is only
/// mentioned in the note.
void attach_sign(ResidualReport& r, SignEvidence e);

}  // namespace sdr
