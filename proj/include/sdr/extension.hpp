#pragma once

// The central extension U(2) -> PU(2) as a principal U(1)-bundle, with
// connections, the natural section of the alternating tensor bundle over G^2,
// the degree-3 DD cocycle built from them, and the circle-equivariant tau.
//
// PU(2) points are carried by SU(2) representatives; forms on PU(2) must be
// invariant under g -> -g, X -> -X. Lifts to U(2) are the representatives
// themselves, optionally shifted by a central phase (point lifts) and by a
// vertical vector (tangent lifts) to probe lift independence.

#include "sdr/nerve.hpp"
#include "sdr/signs.hpp"

namespace sdr {

struct LiftChoice {
    /// Point lift g -> g exp(i Re tr(phase g)).
    Mat phase = Mat::Zero(2, 2);
    /// Tangent lift v -> ghat g^{-1} v + Re tr(vertical g^{-1} v) ghat iI.
    Mat vertical = Mat::Zero(2, 2);

    static LiftChoice canonical() { return {}; }
    static LiftChoice random(Rng& rng, bool shift_points, bool shift_tangents);
};

struct CentralExtensionModel {
    GroupSpec total{GroupKind::U2};
    GroupSpec base{GroupKind::PU2};
    /// ghat -> ghat / sqrt(det ghat), exact differential.
    SmoothMap project;
    /// theta, or theta + pi^* alpha for a twisted model.
    DifferentialForm connection;
    std::optional<DifferentialForm> twist;

    bool flat() const { return !twist.has_value(); }
    Mat embed_center(Complex u) const;
    Mat lift(const Mat& g, const LiftChoice& c = {}) const;
    Mat lift_tangent(const Mat& g, const Mat& v, const Mat& ghat, const LiftChoice& c = {}) const;
    /// Factorwise lifts from base^n to total^n.
    GroupPoint lift(const GroupPoint& p, const LiftChoice& c = {}) const;
    TangentVector lift_tangent(const GroupPoint& p, const GroupPoint& phat, const TangentVector& v,
                               const LiftChoice& c = {}) const;
    /// pi x ... x pi from total^n to base^n.
    SmoothMap project_power(int n) const;
};

/// alpha_g(gA) = i Re tr(s g s g^{-1}) Im tr(s A), s = sigma_axis.
DifferentialForm default_twist_form(int axis = 3);

/// Throws std::invalid_argument when the twist is not invariant under the
/// representative flip or is numerically closed.
CentralExtensionModel build_u2_over_pu2(bool flat, std::optional<DifferentialForm> twist = std::nullopt,
                                        std::uint64_t seed = 1);

/// pi(lift g) = g, theta(ghat iI) = i, theta invariant under right center action.
std::vector<ResidualReport> model_invariants(const CentralExtensionModel& ext, const CheckSettings& s);

/// c1 with pi^* c1 = (-1/2 pi i) d theta, evaluated through lifts.
DifferentialForm curvature_on_base(const CentralExtensionModel& ext, const LiftChoice& lift = {},
                                   DerivativeOptions opts = {});

/// chi_nt = s_nt^*(delta theta) on G x G.
DifferentialForm nat_section_delta_pullback(const CentralExtensionModel& ext, const LiftChoice& lift = {});

/// (e0 - e1 + e2)^* theta on Ghat x Ghat.
DifferentialForm total_delta_connection(const CentralExtensionModel& ext);

/// Layers c1 at (1,0,2) and section_sign (-1/2 pi i) chi_nt at (2,0,1).
TotalCochain dd_cocycle(const CentralExtensionModel& ext, DerivativeOptions opts = {},
                        int section_sign = signs::kDDSection);

/// Prop-style identities: d'c1 against d chi_nt, d'chi_nt = 0, dc1 = 0,
/// each from the total differential of dd_cocycle, with sign evidence.
std::vector<ResidualReport> dd_cocycle_check(const CentralExtensionModel& ext, const CheckSettings& s);

/// Center shifts of point lifts (exact) and vertical shifts of tangent lifts.
std::vector<ResidualReport> lift_independence_check(const CentralExtensionModel& ext, const CheckSettings& s);

/// Product of central ratios pairing the twelve lifts in the alternating
/// tensor of s_nt over (g1, g2, g3); 1 in the canonical trivialization.
Complex delta_section_discrepancy(const CentralExtensionModel& ext, const GroupPoint& g3, const LiftChoice& lift);
ResidualReport delta_section_check(const CentralExtensionModel& ext, const CheckSettings& s);

/// The direct Ghat x Ghat evaluation against (pi x pi)^* chi_nt, and
/// horizontality under vertical insertions.
std::vector<ResidualReport> behrend_xu_check(const CentralExtensionModel& ext, const CheckSettings& s);

struct SectionTwist {
    std::function<Complex(const Mat&)> psi;

    /// phi(g1, g2) = psi(g2) psi(g1 g2)^{-1} psi(g1)
    Complex phi(const Mat& g1, const Mat& g2) const;
    /// Largest |delta phi - 1| over probes on G^3.
    double cocycle_residual(const ProbeOptions& opts) const;
};

SectionTwist constant_section_twist();
/// psi(g) = exp(i kappa Re tr(sigma_3 g sigma_3 g^{-1})).
SectionTwist conjugation_phase_twist(double kappa = 0.7);

/// s^*(delta theta) = s_nt^*(delta theta) + d log phi for s = s_nt phi, and the
/// cocycle change as a total coboundary of (-1/2 pi i) psi^{-1} d psi.
std::vector<ResidualReport> twist_section_check(const CentralExtensionModel& ext, const SectionTwist& twist,
                                                const CheckSettings& s);

/// cocycle(theta') - cocycle(theta) = s D[(-1/2 pi i) alpha], theta' = theta + pi^* alpha,
/// with a doubled delta-alpha layer as the negative control.
ResidualReport connection_independence_check(const CentralExtensionModel& flat, const CentralExtensionModel& twisted,
                                             const CheckSettings& s);

struct EquivariantExtensionModel {
    CentralExtensionModel ext;
    CircleAction action = CircleAction::adjoint();

    NerveContext nerve() const { return {FactorSpec{GroupKind::PU2}, action}; }
};

/// tau((g, z); (v, w)) = (-1/2 pi i)[-theta_ghat(vhat) + theta_c(dc(vhat, w))], c = E(z)^o ghat E(z)^-o,
/// on level (1, 1) of the bisimplicial nerve.
DifferentialForm equivariant_tau(const EquivariantExtensionModel& eq, int orientation = signs::kTauOrientation,
                                 const LiftChoice& lift = {});

/// The three tau conditions with probed signs. Condition (ii) is reported twice:
/// with the probed sign, and as an informational row with the sign +1.
std::vector<ResidualReport> tau_conditions(const EquivariantExtensionModel& eq, const CheckSettings& s);

/// Layers c1, kDDSection (-1/2 pi i) chi_nt and tau_sign tau; D of it vanishes.
TotalCochain triple_cocycle(const EquivariantExtensionModel& eq, DerivativeOptions opts = {},
                            int tau_sign = signs::kTauLayer);
/// One row per layer of D(triple_cocycle), each with the tau_layer evidence.
std::vector<ResidualReport> triple_cocycle_check(const EquivariantExtensionModel& eq, const CheckSettings& s);

}  // namespace sdr
