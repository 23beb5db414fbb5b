#pragma once

// Colony influence field and lifecycle.
//
// Field:  Phi(x) = sum_k p_k(x) * [A exp(-d^2 / 2 sigma_a^2)
//                                  - B exp(-d^2 / 2 sigma_r^2)]
// where p_k is the communication success probability: 1 inside the reliable
// range R_k, exponential decay beyond. Only active colonies contribute.

#include <numbers>
#include <vector>

#include "noah/core.hpp"

namespace noah {

struct ColonySet {
    std::vector<Colony> colonies;
    int next_id = 0;

    std::size_t active_count() const {
        std::size_t n = 0;
        for (const auto& c : colonies)
            if (c.active) ++n;
        return n;
    }
};

/// Eq-style link model: certain within comm_range, exponential decay beyond.
/// Continuous at the range boundary.
inline double comm_probability(const Colony& colony, const Vec& x,
                               const NoahParams& params) {
    const double d = distance(x, colony.location);
    if (d <= colony.comm_range) return 1.0;
    return std::exp(-params.attenuation_alpha * (d - colony.comm_range));
}

/// Field value over the active colonies. sigma_a / sigma_r are fractions of
/// the box extent.
inline double field_value(const ColonySet& set, const Vec& x,
                          const NoahParams& params, const Box& box) {
    const double sa = box.scale(params.sigma_a);
    const double sr = box.scale(params.sigma_r);
    double phi = 0.0;
    for (const Colony& c : set.colonies) {
        if (!c.active) continue;
        const double d2 = [&] {
            double s = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double dd = x[i] - c.location[i];
                s += dd * dd;
            }
            return s;
        }();
        const double ga = params.A * std::exp(-d2 / (2.0 * sa * sa));
        const double gr = params.B * std::exp(-d2 / (2.0 * sr * sr));
        phi += comm_probability(c, x, params) * (ga - gr);
    }
    return phi;
}

/// Analytic gradient of the field. The communication factor is differentiated
/// on its smooth outer branch; on the sphere d = R_k the inner branch (zero
/// slope) is used, so the result is total and finite everywhere.
inline Vec field_gradient(const ColonySet& set, const Vec& x,
                          const NoahParams& params, const Box& box) {
    const double sa = box.scale(params.sigma_a);
    const double sr = box.scale(params.sigma_r);
    Vec g = Vec::zeros(x.size());
    for (const Colony& c : set.colonies) {
        if (!c.active) continue;
        Vec dv = x - c.location;
        const double d2 = dv.squared_norm();
        const double d = std::sqrt(d2);
        const double ga = params.A * std::exp(-d2 / (2.0 * sa * sa));
        const double gr = params.B * std::exp(-d2 / (2.0 * sr * sr));
        double pk = 1.0;
        Vec dpk = Vec::zeros(x.size());
        if (d > c.comm_range) {
            pk = std::exp(-params.attenuation_alpha * (d - c.comm_range));
            dpk = (-params.attenuation_alpha * pk / d) * dv;
        }
        // d/dx of the Gaussian pair: -(ga/sa^2 - gr/sr^2) * (x - c)
        const Vec dgauss = (-(ga / (sa * sa) - gr / (sr * sr))) * dv;
        g += dpk * (ga - gr) + pk * dgauss;
    }
    return g;
}

/// New colony at the settling agent's position. Strength rewards the agent's
/// fitness rank within the pre-settlement population, normalised to [0, 1].
inline Colony& spawn_colony(ColonySet& set, const Vec& x,
                            std::span<const double> population_fitness,
                            std::size_t agent_index, const NoahParams& params,
                            const Box& box, int iteration) {
    std::vector<double> neg(population_fitness.size());
    for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -population_fitness[i];
    Colony c;
    c.location = x;
    c.strength = params.alpha0 + params.alpha1 * normalized_rank(neg, agent_index);
    c.comm_range = box.scale(params.comm_range_default);
    c.created_at = iteration;
    c.active = true;
    c.id = set.next_id++;
    set.colonies.push_back(std::move(c));
    return set.colonies.back();
}

/// Local crowding of one position: neighbours within r_settle (self included)
/// divided by the settlement volume (area in 2D, ball volume in general d).
inline double settlement_volume(double r_settle_abs, std::size_t dim) {
    // unit-ball volume * r^d; pi r^2 in 2D, 4/3 pi r^3 in 3D
    double unit = 1.0;
    switch (dim) {
        case 1: unit = 2.0; break;
        case 2: unit = std::numbers::pi; break;
        case 3: unit = 4.0 / 3.0 * std::numbers::pi; break;
        default: {
            unit = std::pow(std::numbers::pi, double(dim) / 2.0) /
                   std::tgamma(double(dim) / 2.0 + 1.0);
        }
    }
    return unit * std::pow(r_settle_abs, double(dim));
}

inline double local_crowding(const std::vector<Agent>& agents, const Vec& x,
                             double r_settle_abs) {
    std::size_t count = 0;
    for (const Agent& a : agents)
        if (distance(a.position, x) <= r_settle_abs) ++count;
    return double(count) / settlement_volume(r_settle_abs, x.size());
}

/// Strength reinforcement: for each active colony, agents within 2*sigma_a
/// (free and settled alike) contribute their mean fitness rank minus a
/// crowding penalty, gated by the mean communication probability. With no
/// one in range the strength simply decays.
inline void update_strengths(ColonySet& set, const std::vector<Agent>& agents,
                             std::span<const double> fitness,
                             const NoahParams& params, const Box& box) {
    const double reach = 2.0 * box.scale(params.sigma_a);
    const double r_settle_abs = box.scale(params.r_settle);
    std::vector<double> neg(fitness.size());
    for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -fitness[i];
    const auto ranks = rank_ascending(neg);
    const double denom = fitness.size() > 1 ? double(fitness.size() - 1) : 1.0;

    for (Colony& c : set.colonies) {
        if (!c.active) continue;
        double rank_sum = 0.0, crowd_sum = 0.0, comm_sum = 0.0;
        std::size_t n_near = 0;
        for (std::size_t i = 0; i < agents.size(); ++i) {
            if (distance(agents[i].position, c.location) > reach) continue;
            ++n_near;
            rank_sum += fitness.size() > 1 ? double(ranks[i] - 1) / denom : 0.5;
            crowd_sum += local_crowding(agents, agents[i].position, r_settle_abs);
            comm_sum += comm_probability(c, agents[i].position, params);
        }
        if (n_near == 0) {
            c.strength *= (1.0 - params.mu);
            continue;
        }
        const double reinforcement =
            (comm_sum / double(n_near)) *
            (rank_sum / double(n_near) - params.nu * crowd_sum / double(n_near));
        c.strength = (1.0 - params.mu) * c.strength + params.mu * reinforcement;
    }
}

/// Deactivates active colonies with strength strictly below tau. The anchored
/// agent itself stays frozen; only the field and communication role end.
inline int cull(ColonySet& set, const NoahParams& params) {
    int n = 0;
    for (Colony& c : set.colonies) {
        if (c.active && c.strength < params.tau) {
            c.active = false;
            ++n;
        }
    }
    return n;
}

}  // namespace noah
