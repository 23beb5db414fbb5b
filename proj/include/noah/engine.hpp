#pragma once

// The optimiser proper. Each iteration runs three phases:
//
//   1. drift       free agents move under inertia, Gaussian exploration,
//                  the negated gradient surrogate, the ambient current and
//                  the colony field gradient; settled agents stay frozen
//   2. anchoring   every free agent may irreversibly settle at its current
//                  (just evaluated) position, spawning a colony
//   3. communication   colony strengths are reinforced or decay; weak
//                  colonies are culled but their anchored agents remain
//
// Determinism contract: one RNG stream per run, consumed in a fixed order
// (initial positions agent-by-agent component-by-component, then per
// iteration: one noise vector per free agent in id order, then one uniform
// per free agent in id order). Reruns with the same seed are bit-identical.

#include <limits>
#include <string>
#include <vector>

#include "noah/colony.hpp"
#include "noah/core.hpp"
#include "noah/flow.hpp"
#include "noah/objectives.hpp"

namespace noah {

struct SettlementFeatures {
    double fitness_advantage = 0.0;   // neighbourhood mean fitness minus own
    double advantage_rank = 0.0;      // rank of the advantage in [0, 1]
    double colony_distance = 0.0;     // absolute distance to nearest active colony
    double shear = 0.0;               // flow shear at the agent
    double crowding = 0.0;            // raw local density, agents per volume
    double crowding_normalized = 0.0; // crowding / max crowding this iteration
    double energy = 0.0;              // remaining energy fraction
};

struct PhaseReport {
    int free_agents = 0;   // after the step
    int settlements = 0;
    int culls = 0;
    double best_fitness = 0.0;
};

struct TraceRow {
    int iteration = 0;
    double best_fitness = 0.0;
    int free_agents = 0;
    int active_colonies = 0;
};

struct ColonySnapshot {
    int id = 0;
    Vec location;
    double strength = 0.0;
    bool active = true;
};

struct RunResult {
    std::string method;
    std::string objective;
    std::string flow;
    std::uint64_t seed = 0;
    int n_agents = 0;
    int max_iterations = 0;
    double best_fitness = std::numeric_limits<double>::infinity();
    Vec best_position;
    std::vector<TraceRow> trace;
    std::vector<Colony> colonies;                          // every colony ever spawned
    std::vector<std::vector<ColonySnapshot>> colony_history;  // per iteration
    std::vector<int> settlement_times;                     // -1 if never settled
    std::vector<Vec> anchor_positions;                     // settled agents / placements
    std::string termination;                               // all_anchored | max_iterations
    long evaluations_fitness = 0;
    long evaluations_gradient = 0;
};

struct SwarmState {
    std::vector<Agent> agents;
    ColonySet colonies;
    std::vector<double> fitness;   // last evaluation per agent
    int iteration = 0;
    double best_fitness = std::numeric_limits<double>::infinity();
    Vec best_position;
    RngStream rng;
    long evaluations_fitness = 0;
    long evaluations_gradient = 0;
    std::vector<int> settlement_times;

    int free_count() const {
        int n = 0;
        for (const auto& a : agents)
            if (!a.settled) ++n;
        return n;
    }
};

/// Eq.-6 sum without the velocity cap. The noise vector is passed in so the
/// caller owns the draw order.
inline Vec velocity_update_raw(const Agent& agent, const Objective& objective,
                               const FlowField& flow, const ColonySet& colonies,
                               const NoahParams& params, const Box& box,
                               const Vec& noise) {
    Vec v = params.omega * agent.velocity;
    v += params.eta * noise;
    v += (-params.beta) * gradient_surrogate(objective, agent.position, params.fd_step);
    v += params.gamma * flow.sample(agent.position);
    v += params.delta * field_gradient(colonies, agent.position, params, box);
    return v;
}

inline Vec clip_velocity(Vec v, double v_max_abs) {
    const double n = v.norm();
    if (n > v_max_abs && n > 0.0) v *= v_max_abs / n;
    return v;
}

inline Vec velocity_update(const Agent& agent, const Objective& objective,
                           const FlowField& flow, const ColonySet& colonies,
                           const NoahParams& params, const Box& box, const Vec& noise) {
    return clip_velocity(
        velocity_update_raw(agent, objective, flow, colonies, params, box, noise),
        box.scale(params.v_max));
}

/// Applies the tentative velocity with the settled-agent freeze prefactor,
/// then the boundary rule, then the energy drain.
inline void state_update(Agent& agent, const Vec& tentative, const NoahParams& params,
                         const Box& box) {
    if (agent.settled) return;  // (1 - a) prefactor: settled agents stay fixed
    agent.velocity = tentative;
    agent.position += tentative;
    for (std::size_t j = 0; j < agent.position.size(); ++j) {
        double& x = agent.position[j];
        switch (params.boundary_mode) {
            case BoundaryMode::reflect:
                while (x < box.lo || x > box.hi) {
                    if (x < box.lo)
                        x = 2.0 * box.lo - x;
                    else
                        x = 2.0 * box.hi - x;
                    agent.velocity[j] = -agent.velocity[j];
                }
                break;
            case BoundaryMode::wrap: {
                const double e = box.extent();
                x = box.lo + std::fmod(std::fmod(x - box.lo, e) + e, e);
                break;
            }
            case BoundaryMode::clamp:
                if (x < box.lo) {
                    x = box.lo;
                    agent.velocity[j] = 0.0;
                } else if (x > box.hi) {
                    x = box.hi;
                    agent.velocity[j] = 0.0;
                }
                break;
        }
    }
    agent.energy_current =
        std::max(0.0, agent.energy_current - params.energy_drain * agent.velocity.norm());
}

/// Raw per-agent features against a consistent population snapshot. The two
/// population-relative entries (advantage_rank, crowding_normalized) are
/// filled by settlement_features_all.
inline SettlementFeatures settlement_features(
    std::size_t agent_index, const std::vector<Agent>& agents,
    std::span<const double> fitness, const ColonySet& colonies, const FlowField& flow,
    const NoahParams& params, const Box& box) {
    const Agent& agent = agents[agent_index];
    const double r_neigh_abs = box.scale(params.r_neigh);
    const double r_settle_abs = box.scale(params.r_settle);

    SettlementFeatures f;
    // neighbourhood mean fitness, self included
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t j = 0; j < agents.size(); ++j) {
        if (distance(agents[j].position, agent.position) <= r_neigh_abs) {
            sum += fitness[j];
            ++n;
        }
    }
    f.fitness_advantage = sum / double(n) - fitness[agent_index];

    double dmin = std::numeric_limits<double>::infinity();
    for (const Colony& c : colonies.colonies)
        if (c.active) dmin = std::min(dmin, distance(agent.position, c.location));
    f.colony_distance = std::isfinite(dmin) ? dmin : box.scale(params.d0);

    f.shear = shear(flow, agent.position, box, params.fd_step);
    f.crowding = local_crowding(agents, agent.position, r_settle_abs);
    f.energy = agent.energy_max > 0.0 ? agent.energy_current / agent.energy_max : 0.0;
    return f;
}

/// Features for every currently free agent (indices returned alongside),
/// with the advantage ranked across the free population and crowding
/// normalised by this iteration's maximum.
inline std::vector<SettlementFeatures> settlement_features_all(
    const std::vector<std::size_t>& free_indices, const std::vector<Agent>& agents,
    std::span<const double> fitness, const ColonySet& colonies, const FlowField& flow,
    const NoahParams& params, const Box& box) {
    std::vector<SettlementFeatures> feats;
    feats.reserve(free_indices.size());
    std::vector<double> advantages;
    advantages.reserve(free_indices.size());
    double max_crowding = 0.0;
    for (std::size_t idx : free_indices) {
        feats.push_back(
            settlement_features(idx, agents, fitness, colonies, flow, params, box));
        advantages.push_back(feats.back().fitness_advantage);
        max_crowding = std::max(max_crowding, feats.back().crowding);
    }
    for (std::size_t k = 0; k < feats.size(); ++k) {
        feats[k].advantage_rank = normalized_rank(advantages, k);
        feats[k].crowding_normalized =
            max_crowding > 0.0 ? feats[k].crowding / max_crowding : 0.0;
    }
    return feats;
}

/// Logistic settlement probability over the five features.
inline double settlement_probability(const SettlementFeatures& f,
                                     const NoahParams& params, const Box& box) {
    const double logit = params.lambda1 * f.advantage_rank +
                         params.lambda2 * f.colony_distance / box.scale(params.d0) -
                         params.lambda3 * f.shear / params.kappa0 -
                         params.lambda4 * f.crowding_normalized +
                         params.lambda5 * f.energy;
    return 1.0 / (1.0 + std::exp(-logit));
}

inline SwarmState init_state(const Objective& objective, const NoahParams& params,
                             std::uint64_t seed) {
    validate(params);
    const Box& box = objective.box();
    SwarmState s;
    s.rng = RngStream(seed);
    s.agents.resize(params.n_agents);
    for (int i = 0; i < params.n_agents; ++i) {
        Agent& a = s.agents[i];
        a.position = s.rng.uniform_in(box);
        a.velocity = Vec::zeros(box.dim);
        a.settled = false;
        a.energy_current = a.energy_max = 1.0;
        a.id = i;
    }
    s.fitness.resize(params.n_agents);
    for (int i = 0; i < params.n_agents; ++i) {
        s.fitness[i] = objective.evaluate(s.agents[i].position);
        ++s.evaluations_fitness;
        if (s.fitness[i] < s.best_fitness) {
            s.best_fitness = s.fitness[i];
            s.best_position = s.agents[i].position;
        }
    }
    s.settlement_times.assign(params.n_agents, -1);
    return s;
}

inline PhaseReport step(SwarmState& state, const Objective& objective,
                        const FlowField& flow, const NoahParams& params) {
    const Box& box = objective.box();
    const std::size_t dim = box.dim;
    PhaseReport report;

    // Phase 1: drift. Move every free agent, then evaluate its new position.
    for (Agent& agent : state.agents) {
        if (agent.settled) continue;
        const Vec noise = state.rng.normal_vec(dim);
        const Vec tentative = velocity_update(agent, objective, flow, state.colonies,
                                              params, box, noise);
        state.evaluations_gradient += 2 * long(dim);
        state_update(agent, tentative, params, box);
    }
    for (std::size_t i = 0; i < state.agents.size(); ++i) {
        if (state.agents[i].settled) continue;
        state.fitness[i] = objective.evaluate(state.agents[i].position);
        ++state.evaluations_fitness;
        if (state.fitness[i] < state.best_fitness) {
            state.best_fitness = state.fitness[i];
            state.best_position = state.agents[i].position;
        }
    }

    // Phase 2: anchoring. Features are computed against an immutable snapshot
    // (colonies spawned this step do not influence this step's decisions).
    std::vector<std::size_t> free_indices;
    for (std::size_t i = 0; i < state.agents.size(); ++i)
        if (!state.agents[i].settled) free_indices.push_back(i);
    const auto feats = settlement_features_all(free_indices, state.agents, state.fitness,
                                               state.colonies, flow, params, box);
    for (std::size_t k = 0; k < free_indices.size(); ++k) {
        const double p = settlement_probability(feats[k], params, box);
        const double u = state.rng.uniform01();
        if (u < p) {
            Agent& agent = state.agents[free_indices[k]];
            agent.settled = true;
            agent.velocity = Vec::zeros(dim);
            state.settlement_times[free_indices[k]] = state.iteration + 1;
            spawn_colony(state.colonies, agent.position, state.fitness, free_indices[k],
                         params, box, state.iteration + 1);
            ++report.settlements;
        }
    }

    // Phase 3: communication. Reinforce or decay strengths, cull the weak.
    update_strengths(state.colonies, state.agents, state.fitness, params, box);
    report.culls = cull(state.colonies, params);

    ++state.iteration;
    report.free_agents = state.free_count();
    report.best_fitness = state.best_fitness;
    return report;
}

inline RunResult run(const Objective& objective, const FlowField& flow,
                     const NoahParams& params, std::uint64_t seed) {
    SwarmState state = init_state(objective, params, seed);

    RunResult r;
    r.method = "noah";
    r.objective = objective.name();
    r.flow = flow.describe();
    r.seed = seed;
    r.n_agents = params.n_agents;
    r.max_iterations = params.max_iterations;
    r.trace.push_back({0, state.best_fitness, state.free_count(), 0});
    r.termination = "max_iterations";

    for (int t = 1; t <= params.max_iterations; ++t) {
        const PhaseReport rep = step(state, objective, flow, params);
        r.trace.push_back({t, rep.best_fitness, rep.free_agents,
                           int(state.colonies.active_count())});
        std::vector<ColonySnapshot> snap;
        snap.reserve(state.colonies.colonies.size());
        for (const Colony& c : state.colonies.colonies)
            snap.push_back({c.id, c.location, c.strength, c.active});
        r.colony_history.push_back(std::move(snap));
        if (rep.free_agents == 0) {
            r.termination = "all_anchored";
            break;
        }
    }

    r.best_fitness = state.best_fitness;
    r.best_position = state.best_position;
    r.colonies = state.colonies.colonies;
    r.settlement_times = state.settlement_times;
    for (const Agent& a : state.agents)
        if (a.settled) r.anchor_positions.push_back(a.position);
    r.evaluations_fitness = state.evaluations_fitness;
    r.evaluations_gradient = state.evaluations_gradient;
    return r;
}

}  // namespace noah
