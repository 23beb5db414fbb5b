#pragma once

// Benchmark objectives and the derivative-free gradient surrogate.
//
// All benchmarks use their canonical constants (Rastrigin A=10; Ackley a=20,
// b=0.2, c=2*pi; Rosenbrock a=1, b=100) on a configurable box, 2D by default.
// The mission objective is a weighted template over pluggable component maps.

#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <utility>

#include "noah/core.hpp"

namespace noah {

using ScalarMap = std::function<double(const Vec&)>;

struct MissionSpec {
    double w1 = 1.0, w2 = 1.0, w3 = 1.0, w4 = 1.0;
    ScalarMap energy;    // cost, weighted +w1
    ScalarMap risk;      // cost, weighted +w2
    ScalarMap coverage;  // reward, weighted -w3
    ScalarMap info_gain; // reward, weighted -w4
    ScalarMap penalties; // additive
};

class Objective {
public:
    enum class Kind { rastrigin, ackley, rosenbrock, anchoring_bowl, mission };

    struct Optimum {
        Vec location;
        double value;
    };

    static Objective rastrigin(Box box = {-2.0, 2.0, 2}) {
        return Objective(Kind::rastrigin, box, Optimum{Vec::zeros(box.dim), 0.0});
    }
    static Objective ackley(Box box = {-2.0, 2.0, 2}) {
        return Objective(Kind::ackley, box, Optimum{Vec::zeros(box.dim), 0.0});
    }
    static Objective rosenbrock(Box box = {-2.0, 2.0, 2}) {
        return Objective(Kind::rosenbrock, box, Optimum{Vec(box.dim, 1.0), 0.0});
    }
    /// ||x||^2 - 1 with minimum -1 at the origin.
    static Objective anchoring_bowl(Box box = {-2.0, 2.0, 2}) {
        return Objective(Kind::anchoring_bowl, box, Optimum{Vec::zeros(box.dim), -1.0});
    }
    /// Component maps default to constant zero.
    static Objective mission(MissionSpec spec, Box box = {-2.0, 2.0, 2}) {
        Objective o(Kind::mission, box, std::nullopt);
        o.mission_ = std::make_shared<MissionSpec>(std::move(spec));
        return o;
    }

    static Objective by_name(const std::string& name, Box box = {-2.0, 2.0, 2}) {
        if (name == "rastrigin") return rastrigin(box);
        if (name == "ackley") return ackley(box);
        if (name == "rosenbrock") return rosenbrock(box);
        if (name == "anchoring_bowl") return anchoring_bowl(box);
        if (name == "mission") return mission(MissionSpec{}, box);
        throw std::invalid_argument(
            "unknown objective '" + name +
            "' (valid: anchoring_bowl, rastrigin, ackley, rosenbrock, mission)");
    }

    Kind kind() const { return kind_; }
    const Box& box() const { return box_; }
    const std::optional<Optimum>& known_optimum() const { return optimum_; }

    std::string name() const {
        switch (kind_) {
            case Kind::rastrigin: return "rastrigin";
            case Kind::ackley: return "ackley";
            case Kind::rosenbrock: return "rosenbrock";
            case Kind::anchoring_bowl: return "anchoring_bowl";
            case Kind::mission: return "mission";
        }
        return "?";
    }

    double evaluate(const Vec& x) const {
        switch (kind_) {
            case Kind::anchoring_bowl:
                return x.squared_norm() - 1.0;
            case Kind::rastrigin: {
                double s = 10.0 * double(x.size());
                for (std::size_t i = 0; i < x.size(); ++i)
                    s += x[i] * x[i] - 10.0 * std::cos(2.0 * std::numbers::pi * x[i]);
                return s;
            }
            case Kind::ackley: {
                const double d = double(x.size());
                double sq = 0.0, cs = 0.0;
                for (std::size_t i = 0; i < x.size(); ++i) {
                    sq += x[i] * x[i];
                    cs += std::cos(2.0 * std::numbers::pi * x[i]);
                }
                return -20.0 * std::exp(-0.2 * std::sqrt(sq / d)) - std::exp(cs / d) +
                       20.0 + std::numbers::e;
            }
            case Kind::rosenbrock: {
                double s = 0.0;
                for (std::size_t i = 0; i + 1 < x.size(); ++i) {
                    const double a = x[i + 1] - x[i] * x[i];
                    const double b = 1.0 - x[i];
                    s += 100.0 * a * a + b * b;
                }
                return s;
            }
            case Kind::mission: {
                const MissionSpec& m = *mission_;
                auto ev = [&](const ScalarMap& f) { return f ? f(x) : 0.0; };
                return m.w1 * ev(m.energy) + m.w2 * ev(m.risk) - m.w3 * ev(m.coverage) -
                       m.w4 * ev(m.info_gain) + ev(m.penalties);
            }
        }
        return 0.0;
    }

private:
    Objective(Kind k, Box box, std::optional<Optimum> opt)
        : kind_(k), box_(box), optimum_(std::move(opt)) {}

    Kind kind_;
    Box box_;
    std::optional<Optimum> optimum_;
    std::shared_ptr<const MissionSpec> mission_;
};

/// Central finite differences per axis with probe points clamped to the box,
/// which degrades to a one-sided difference at a face.
inline Vec gradient_surrogate(const Objective& obj, const Vec& x, double h) {
    const Box& box = obj.box();
    Vec g(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        Vec xp = x, xm = x;
        xp[j] = std::min(box.hi, x[j] + h);
        xm[j] = std::max(box.lo, x[j] - h);
        const double span = xp[j] - xm[j];
        g[j] = span > 0.0 ? (obj.evaluate(xp) - obj.evaluate(xm)) / span : 0.0;
    }
    return g;
}

}  // namespace noah
