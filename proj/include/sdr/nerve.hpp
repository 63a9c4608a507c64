#pragma once

// Nerves of (loop) groups and their bisimplicial extension by a circle acting
// by conjugation. Level (p, q) is G^p x (S^1)^q, group slots first.
//
// Face maps:
//   horizontal  e_i(g_1..g_p)     = (g_2..g_p) | (..g_i g_{i+1}..) | (g_1..g_{p-1})
//   vertical    e_i(g, z_1..z_q)  = (g, z_2..z_q) | (g, ..z_i z_{i+1}..) | (z_q g z_q^{-1}, z_1..z_{q-1})
//
// Cochains live in Omega^{p,q,r} = Omega^r(level(p, q)) with
//   d'   = sum_i (-1)^i e_i^*                (horizontal)
//   d''  = (-1)^p sum_i (-1)^i (e_i^v)^*    (circle direction)
//   d''' = (-1)^{p+q} d                     (exterior derivative)
// The plain double complex is the q = 0 slice without d''.

#include "sdr/probe.hpp"
#include "sdr/signs.hpp"

#include <compare>
#include <map>
#include <optional>

namespace sdr {

struct NerveContext {
    FactorSpec slot;
    /// Present for the bisimplicial (triple complex) nerve.
    std::optional<CircleAction> circle;

    GroupSpec level(int p, int q = 0) const;
    bool bisimplicial() const { return circle.has_value(); }
};

enum class FaceDirection { Horizontal, Vertical };

/// Face e_i out of level (p, q): horizontal 0 <= i <= p, vertical 0 <= i <= q.
SmoothMap face_map(const NerveContext& ctx, int p, int q, FaceDirection dir, int i);
/// Horizontal degeneracy s_i out of level (p, q): inserts the identity after g_i.
SmoothMap degeneracy_map(const NerveContext& ctx, int p, int q, int i);

struct CochainIndex {
    int p = 0;
    int q = 0;
    int r = 0;

    int total() const { return p + q + r; }
    auto operator<=>(const CochainIndex&) const = default;
};

std::string to_string(const CochainIndex& idx);

DifferentialForm d_horizontal(const NerveContext& ctx, CochainIndex at, const DifferentialForm& w);
DifferentialForm d_circle(const NerveContext& ctx, CochainIndex at, const DifferentialForm& w);
DifferentialForm d_vertical_form(CochainIndex at, const DifferentialForm& w, DerivativeOptions opts = {});

struct CochainLayer {
    DifferentialForm form;
    /// True once any finite-difference derivative entered the layer.
    bool fd_backed = false;
};

class TotalCochain {
public:
    explicit TotalCochain(NerveContext ctx) : ctx_(std::move(ctx)) {}

    /// Adds a layer; the form must live on level (p, q) with degree r, and
    /// all layers must share one total degree.
    void set(CochainIndex idx, DifferentialForm form, bool fd_backed = false);
    /// Adds to an existing layer or creates it.
    void accumulate(CochainIndex idx, const DifferentialForm& form, bool fd_backed);

    const NerveContext& context() const { return ctx_; }
    const std::map<CochainIndex, CochainLayer>& layers() const { return layers_; }
    std::optional<int> total_degree() const;
    const DifferentialForm& at(CochainIndex idx) const;

    friend TotalCochain operator+(const TotalCochain& a, const TotalCochain& b);
    friend TotalCochain operator-(const TotalCochain& a, const TotalCochain& b);
    friend TotalCochain operator*(Complex s, const TotalCochain& a);

private:
    NerveContext ctx_;
    std::map<CochainIndex, CochainLayer> layers_;
};

/// D = d' + d'' + d''' applied layerwise and collected by target index.
/// FD-backed layers are differentiated with `nested`.
TotalCochain total_differential(const TotalCochain& c, DerivativeOptions opts = {},
                                DerivativeOptions nested = kNestedDerivative);

struct CocycleTolerances {
    double algebraic = 1e-10;
    double fd = 1e-6;
};

/// One report per layer: max |layer| over random probes, judged against the
/// algebraic or the finite-difference tolerance.
std::vector<ResidualReport> check_zero(const TotalCochain& c, const ProbeSampler& sampler, const ProbeOptions& opts,
                                       CocycleTolerances tol, std::string_view stream);

/// check_zero(total_differential(c)).
std::vector<ResidualReport> check_cocycle(const TotalCochain& c, const ProbeSampler& sampler,
                                          const ProbeOptions& opts, CocycleTolerances tol = {},
                                          DerivativeOptions dopts = {}, DerivativeOptions nested = kNestedDerivative);

/// C13 at (1,0,3) and cross_sign C22 at (2,0,2) on the nerve of SU(2), or of
/// U(2) with the trace-product correction.
TotalCochain second_chern_cocycle(ChernVariant variant, int cross_sign);

/// dC13 = 0, d'C13 + s d''C22 = 0 (sign evidence, dropped-C22 control) and d'C22 = 0.
std::vector<ResidualReport> second_chern_check(ChernVariant variant, const CheckSettings& s);

/// e_i e_j = e_{j-1} e_i (i < j) for horizontal faces up to level max_level and,
/// on a bisimplicial nerve, for vertical faces and mixed pairs; one row each.
std::vector<ResidualReport> simplicial_identities_check(const NerveContext& ctx, int max_level, const CheckSettings& s);

/// D o D = 0 on a random total cochain, one row per target layer.
std::vector<ResidualReport> differential_squares_check(const NerveContext& ctx, const CheckSettings& s);

}  // namespace sdr
