#pragma once

// The four comparison methods. All return the engine's RunResult schema with
// a method tag, mirror the NOAH budget (n_agents, max_iterations), and are
// deterministic given the seed.
//
// Mobile methods (PSO, VFA) are advected by the ambient current exactly like
// the engine's drift term (position += gamma * U); static placers (CVT,
// Greedy) ignore the flow.

#include <string>
#include <vector>

#include "noah/core.hpp"
#include "noah/engine.hpp"
#include "noah/flow.hpp"
#include "noah/objectives.hpp"

namespace noah {

struct BaselineConfig {
    // pso
    double pso_inertia = 0.7;
    double pso_cognitive = 1.5;
    double pso_social = 1.5;
    // cvt
    int cvt_lloyd_iterations = 50;
    int cvt_samples_per_step = 10000;
    // vfa (threshold is a fraction of the box extent)
    double vfa_threshold = 0.15;
    double vfa_attraction = 0.05;
    double vfa_repulsion = 0.8;
    double vfa_descent = 0.1;
    // greedy (fraction of the box extent)
    double greedy_min_separation = 0.1;
};

namespace detail {

inline void reflect_into_box(Vec& x, Vec& v, const Box& box) {
    for (std::size_t j = 0; j < x.size(); ++j) {
        while (x[j] < box.lo || x[j] > box.hi) {
            if (x[j] < box.lo)
                x[j] = 2.0 * box.lo - x[j];
            else
                x[j] = 2.0 * box.hi - x[j];
            v[j] = -v[j];
        }
    }
}

inline RunResult make_result(const std::string& method, const Objective& objective,
                             const FlowField& flow, const NoahParams& params,
                             std::uint64_t seed) {
    RunResult r;
    r.method = method;
    r.objective = objective.name();
    r.flow = flow.describe();
    r.seed = seed;
    r.n_agents = params.n_agents;
    r.max_iterations = params.max_iterations;
    r.termination = "max_iterations";
    return r;
}

}  // namespace detail

/// Canonical global-best PSO with the engine's velocity cap and current
/// advection. Personal and global bests update as soon as a particle moves.
inline RunResult run_pso(const Objective& objective, const FlowField& flow,
                         const NoahParams& params, const BaselineConfig& cfg,
                         std::uint64_t seed) {
    validate(params);
    const Box& box = objective.box();
    const std::size_t dim = box.dim;
    const double v_max_abs = box.scale(params.v_max);
    const int n = params.n_agents;
    RngStream rng(seed);
    RunResult r = detail::make_result("pso", objective, flow, params, seed);

    std::vector<Vec> x(n), v(n, Vec::zeros(dim)), pbest(n);
    std::vector<double> pbest_f(n);
    for (int i = 0; i < n; ++i) {
        x[i] = rng.uniform_in(box);
        pbest[i] = x[i];
        pbest_f[i] = objective.evaluate(x[i]);
        ++r.evaluations_fitness;
        if (pbest_f[i] < r.best_fitness) {
            r.best_fitness = pbest_f[i];
            r.best_position = x[i];
        }
    }
    r.trace.push_back({0, r.best_fitness, n, 0});

    for (int t = 1; t <= params.max_iterations; ++t) {
        for (int i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < dim; ++j) {
                const double r1 = rng.uniform01();
                const double r2 = rng.uniform01();
                v[i][j] = cfg.pso_inertia * v[i][j] +
                          cfg.pso_cognitive * r1 * (pbest[i][j] - x[i][j]) +
                          cfg.pso_social * r2 * (r.best_position[j] - x[i][j]);
            }
            v[i] = clip_velocity(v[i], v_max_abs);
            x[i] += v[i];
            x[i] += params.gamma * flow.sample(box.clamp(x[i]));
            detail::reflect_into_box(x[i], v[i], box);
            const double f = objective.evaluate(x[i]);
            ++r.evaluations_fitness;
            if (f < pbest_f[i]) {
                pbest_f[i] = f;
                pbest[i] = x[i];
            }
            if (f < r.best_fitness) {
                r.best_fitness = f;
                r.best_position = x[i];
            }
        }
        r.trace.push_back({t, r.best_fitness, n, 0});
    }
    r.anchor_positions = x;
    return r;
}

/// Lloyd's algorithm under uniform density: generators move to the Monte
/// Carlo centroid of their Voronoi cell each step. Generators are evaluated
/// after every relaxation step and the best value is tracked.
inline RunResult run_cvt(const Objective& objective, const FlowField& flow,
                         const NoahParams& params, const BaselineConfig& cfg,
                         std::uint64_t seed) {
    validate(params);
    const Box& box = objective.box();
    const int n = params.n_agents;
    RngStream rng(seed);
    RunResult r = detail::make_result("cvt", objective, flow, params, seed);

    std::vector<Vec> gen(n);
    for (int i = 0; i < n; ++i) {
        gen[i] = rng.uniform_in(box);
        const double f = objective.evaluate(gen[i]);
        ++r.evaluations_fitness;
        if (f < r.best_fitness) {
            r.best_fitness = f;
            r.best_position = gen[i];
        }
    }
    r.trace.push_back({0, r.best_fitness, 0, 0});

    std::vector<Vec> centroid(n, Vec::zeros(box.dim));
    std::vector<std::size_t> hits(n);
    for (int it = 1; it <= cfg.cvt_lloyd_iterations; ++it) {
        for (int k = 0; k < n; ++k) {
            centroid[k] = Vec::zeros(box.dim);
            hits[k] = 0;
        }
        for (int s = 0; s < cfg.cvt_samples_per_step; ++s) {
            const Vec p = rng.uniform_in(box);
            int nearest = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (int k = 0; k < n; ++k) {
                const double d = distance(p, gen[k]);
                if (d < best_d) {
                    best_d = d;
                    nearest = k;
                }
            }
            centroid[nearest] += p;
            ++hits[nearest];
        }
        for (int k = 0; k < n; ++k) {
            if (hits[k] == 0) continue;  // empty cell keeps its generator
            gen[k] = (1.0 / double(hits[k])) * centroid[k];
            const double f = objective.evaluate(gen[k]);
            ++r.evaluations_fitness;
            if (f < r.best_fitness) {
                r.best_fitness = f;
                r.best_position = gen[k];
            }
        }
        r.trace.push_back({it, r.best_fitness, 0, 0});
    }
    r.anchor_positions = gen;
    return r;
}

/// Virtual force deployment: pairwise repulsion inside the threshold
/// distance, mild attraction beyond it, plus a small fitness-descent nudge.
inline RunResult run_vfa(const Objective& objective, const FlowField& flow,
                         const NoahParams& params, const BaselineConfig& cfg,
                         std::uint64_t seed) {
    validate(params);
    const Box& box = objective.box();
    const std::size_t dim = box.dim;
    const double v_max_abs = box.scale(params.v_max);
    const double threshold = box.scale(cfg.vfa_threshold);
    const int n = params.n_agents;
    RngStream rng(seed);
    RunResult r = detail::make_result("vfa", objective, flow, params, seed);

    std::vector<Vec> x(n);
    for (int i = 0; i < n; ++i) {
        x[i] = rng.uniform_in(box);
        const double f = objective.evaluate(x[i]);
        ++r.evaluations_fitness;
        if (f < r.best_fitness) {
            r.best_fitness = f;
            r.best_position = x[i];
        }
    }
    r.trace.push_back({0, r.best_fitness, n, 0});

    std::vector<Vec> force(n, Vec::zeros(dim));
    for (int t = 1; t <= params.max_iterations; ++t) {
        for (int i = 0; i < n; ++i) {
            Vec f_i = Vec::zeros(dim);
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                Vec d = x[j] - x[i];
                const double dist = std::max(d.norm(), 1e-9);
                d *= 1.0 / dist;
                if (dist < threshold)
                    f_i += (-cfg.vfa_repulsion * (threshold - dist) / threshold) * d;
                else
                    f_i += (cfg.vfa_attraction * (dist - threshold)) * d;
            }
            f_i += (-cfg.vfa_descent) *
                   gradient_surrogate(objective, x[i], params.fd_step);
            r.evaluations_gradient += 2 * long(dim);
            force[i] = clip_velocity(f_i, v_max_abs);
        }
        for (int i = 0; i < n; ++i) {
            x[i] += force[i];
            x[i] += params.gamma * flow.sample(box.clamp(x[i]));
            detail::reflect_into_box(x[i], force[i], box);
            const double f = objective.evaluate(x[i]);
            ++r.evaluations_fitness;
            if (f < r.best_fitness) {
                r.best_fitness = f;
                r.best_position = x[i];
            }
        }
        r.trace.push_back({t, r.best_fitness, n, 0});
    }
    r.anchor_positions = x;
    return r;
}

/// Exhaustive evaluation of a uniform grid sized to the run budget, then a
/// greedy sweep picking the best points subject to a minimum separation.
/// Fully deterministic; the seed is accepted for interface symmetry.
inline RunResult run_greedy(const Objective& objective, const FlowField& flow,
                            const NoahParams& params, const BaselineConfig& cfg,
                            std::uint64_t seed) {
    validate(params);
    const Box& box = objective.box();
    const std::size_t dim = box.dim;
    const long budget = long(params.n_agents) * long(params.max_iterations);
    if (budget <= 0) throw std::invalid_argument("no candidates");
    const long per_axis = std::max<long>(1, long(std::floor(std::pow(double(budget), 1.0 / double(dim)))));
    RunResult r = detail::make_result("greedy", objective, flow, params, seed);

    std::vector<Vec> pts;
    std::vector<double> vals;
    std::vector<long> idx(dim, 0);
    const long total = [&] {
        long t = 1;
        for (std::size_t j = 0; j < dim; ++j) t *= per_axis;
        return t;
    }();
    pts.reserve(total);
    vals.reserve(total);
    for (long flat = 0; flat < total; ++flat) {
        long rem = flat;
        Vec p(dim);
        for (std::size_t j = 0; j < dim; ++j) {
            const long k = rem % per_axis;
            rem /= per_axis;
            p[j] = per_axis == 1
                       ? 0.5 * (box.lo + box.hi)
                       : box.lo + box.extent() * double(k) / double(per_axis - 1);
        }
        pts.push_back(p);
        vals.push_back(objective.evaluate(p));
        ++r.evaluations_fitness;
        if (vals.back() < r.best_fitness) {
            r.best_fitness = vals.back();
            r.best_position = pts.back();
        }
    }

    const auto ranks = rank_ascending(vals);
    std::vector<std::size_t> order(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) order[ranks[i] - 1] = i;
    const double min_sep = box.scale(cfg.greedy_min_separation);
    std::vector<Vec> picks;
    for (std::size_t pos = 0; pos < order.size() && int(picks.size()) < params.n_agents;
         ++pos) {
        const Vec& cand = pts[order[pos]];
        bool ok = true;
        for (const Vec& p : picks)
            if (distance(p, cand) < min_sep) {
                ok = false;
                break;
            }
        if (ok) picks.push_back(cand);
    }
    // Separation can exhaust the grid; fill the remainder with the best
    // unpicked points so exactly n placements are returned.
    for (std::size_t pos = 0; pos < order.size() && int(picks.size()) < params.n_agents;
         ++pos) {
        const Vec& cand = pts[order[pos]];
        bool dup = false;
        for (const Vec& p : picks)
            if (p == cand) {
                dup = true;
                break;
            }
        if (!dup) picks.push_back(cand);
    }
    r.anchor_positions = picks;
    r.trace.push_back({0, r.best_fitness, 0, 0});
    return r;
}

inline RunResult run_baseline(const std::string& method, const Objective& objective,
                              const FlowField& flow, const NoahParams& params,
                              const BaselineConfig& cfg, std::uint64_t seed) {
    if (method == "pso") return run_pso(objective, flow, params, cfg, seed);
    if (method == "cvt") return run_cvt(objective, flow, params, cfg, seed);
    if (method == "vfa") return run_vfa(objective, flow, params, cfg, seed);
    if (method == "greedy") return run_greedy(objective, flow, params, cfg, seed);
    throw std::invalid_argument("unknown method '" + method +
                                "' (valid: noah, pso, cvt, vfa, greedy)");
}

}  // namespace noah
