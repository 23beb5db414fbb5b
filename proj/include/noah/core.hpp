#pragma once

// Core domain types shared by every module: vectors, the search box,
// agents, colonies, the tuning parameter set and the seeded RNG stream.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace noah {

class Vec {
public:
    Vec() = default;
    explicit Vec(std::size_t dim, double value = 0.0) : v_(dim, value) {}
    Vec(std::initializer_list<double> init) : v_(init) {}

    static Vec zeros(std::size_t dim) { return Vec(dim); }

    std::size_t size() const { return v_.size(); }
    double& operator[](std::size_t i) { return v_[i]; }
    double operator[](std::size_t i) const { return v_[i]; }
    const std::vector<double>& data() const { return v_; }

    Vec& operator+=(const Vec& o) {
        for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
        return *this;
    }
    Vec& operator*=(double s) {
        for (double& x : v_) x *= s;
        return *this;
    }
    friend Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
    friend Vec operator*(double s, Vec a) { return a *= s; }
    friend Vec operator*(Vec a, double s) { return a *= s; }
    friend bool operator==(const Vec& a, const Vec& b) { return a.v_ == b.v_; }

    double squared_norm() const {
        double s = 0.0;
        for (double x : v_) s += x * x;
        return s;
    }
    double norm() const { return std::sqrt(squared_norm()); }

    bool is_finite() const {
        for (double x : v_)
            if (!std::isfinite(x)) return false;
        return true;
    }

private:
    std::vector<double> v_;
};

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double distance(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

/// Axis-aligned search box [lo, hi]^dim. Radius-type parameters are given
/// as fractions of the box extent; scale() converts them to absolute units.
struct Box {
    double lo = 0.0;
    double hi = 1.0;
    std::size_t dim = 2;

    double extent() const { return hi - lo; }
    double scale(double fraction) const { return fraction * extent(); }

    Vec center() const { return Vec(dim, 0.5 * (lo + hi)); }

    bool contains(const Vec& x) const {
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i] < lo || x[i] > hi) return false;
        return true;
    }
    Vec clamp(Vec x) const {
        for (std::size_t i = 0; i < x.size(); ++i)
            x[i] = std::min(hi, std::max(lo, x[i]));
        return x;
    }
};

struct Agent {
    Vec position;
    Vec velocity;
    bool settled = false;
    double energy_current = 1.0;
    double energy_max = 1.0;
    int id = 0;
};

struct Colony {
    Vec location;      // fixed at creation
    double strength = 0.0;
    double comm_range = 0.0;  // absolute units
    int created_at = 0;
    bool active = true;
    int id = 0;
};

enum class BoundaryMode { reflect, wrap, clamp };

inline std::string to_string(BoundaryMode m) {
    switch (m) {
        case BoundaryMode::reflect: return "reflect";
        case BoundaryMode::wrap: return "wrap";
        case BoundaryMode::clamp: return "clamp";
    }
    return "reflect";
}

inline BoundaryMode boundary_mode_from_string(const std::string& s) {
    if (s == "reflect") return BoundaryMode::reflect;
    if (s == "wrap") return BoundaryMode::wrap;
    if (s == "clamp") return BoundaryMode::clamp;
    throw std::invalid_argument("unknown boundary mode: " + s);
}

/// Full tuning set. Movement weights and logit weights are dimensionless;
/// sigma_a, sigma_r, comm_range_default, d0, r_neigh, r_settle and v_max are
/// fractions of the box extent.
struct NoahParams {
    // movement weights
    double omega = 0.9;   // inertia
    double eta = 0.3;     // exploration noise
    double beta = 0.8;    // gradient following
    double gamma = 0.6;   // current adaptation
    double delta = 0.4;   // colony field influence

    // settlement logit weights
    double lambda1 = 2.0;  // fitness advantage rank
    double lambda2 = 1.0;  // colony distance
    double lambda3 = 0.5;  // flow shear
    double lambda4 = 1.0;  // crowding
    double lambda5 = 1.0;  // energy

    // colony lifecycle
    double alpha0 = 1.0;  // base strength of a new colony
    double alpha1 = 0.5;  // fitness-rank bonus
    double mu = 0.1;      // strength learning rate
    double nu = 0.5;      // crowding penalty in reinforcement
    double tau = 0.1;     // cull threshold

    // colony influence field
    double A = 0.5;
    double B = 0.3;
    double sigma_a = 0.5;
    double sigma_r = 0.15;
    double comm_range_default = 0.3;  // R_k for new colonies
    double attenuation_alpha = 3.0;

    // settlement feature normalisers
    double d0 = 0.25;
    double kappa0 = 1.0;
    double r_neigh = 0.15;
    double r_settle = 0.1;

    // agent energy and motion
    double energy_drain = 0.005;
    double v_max = 0.3;
    double fd_step = 1e-3;
    BoundaryMode boundary_mode = BoundaryMode::reflect;

    // run shape
    int n_agents = 20;
    int max_iterations = 50;
};

inline NoahParams default_params() { return NoahParams{}; }

/// Throws std::invalid_argument when a parameter combination is unusable.
inline void validate(const NoahParams& p) {
    auto require = [](bool ok, const char* msg) {
        if (!ok) throw std::invalid_argument(std::string("invalid params: ") + msg);
    };
    require(p.sigma_a > p.sigma_r, "sigma_a must exceed sigma_r");
    require(p.sigma_r > 0.0, "sigma_r must be positive");
    require(p.A > 0.0 && p.B > 0.0, "field amplitudes must be positive");
    require(p.comm_range_default > 0.0, "comm_range_default must be positive");
    require(p.attenuation_alpha > 0.0, "attenuation_alpha must be positive");
    require(p.mu > 0.0 && p.mu <= 1.0, "mu must lie in (0, 1]");
    require(p.nu >= 0.0, "nu must be non-negative");
    require(p.d0 > 0.0, "d0 must be positive");
    require(p.kappa0 > 0.0, "kappa0 must be positive");
    require(p.r_neigh > 0.0, "r_neigh must be positive");
    require(p.r_settle > 0.0, "r_settle must be positive");
    require(p.energy_drain >= 0.0, "energy_drain must be non-negative");
    require(p.v_max > 0.0, "v_max must be positive");
    require(p.fd_step > 0.0, "fd_step must be positive");
    require(p.n_agents >= 1, "n_agents must be at least 1");
    require(p.max_iterations >= 0, "max_iterations must be non-negative");
}

/// Deterministic random stream: same seed gives a bit-identical sequence of
/// uniforms and normals on the same build. Normals come from a hand-rolled
/// Marsaglia polar transform so the sequence does not depend on the standard
/// library's distribution internals.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed = 0) : seed_(seed) { reset(); }

    std::uint64_t seed() const { return seed_; }

    void reset() {
        state_ = splitmix(seed_ + 0x9e3779b97f4a7c15ULL);
        inc_ = splitmix(state_) | 1ULL;
        spare_valid_ = false;
    }

    /// Uniform in [0, 1).
    double uniform01() { return double(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Standard normal draw.
    double normal() {
        if (spare_valid_) {
            spare_valid_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        spare_valid_ = true;
        return u * m;
    }

    Vec normal_vec(std::size_t dim) {
        Vec x(dim);
        for (std::size_t i = 0; i < dim; ++i) x[i] = normal();
        return x;
    }

    Vec uniform_in(const Box& box) {
        Vec x(box.dim);
        for (std::size_t i = 0; i < box.dim; ++i) x[i] = uniform(box.lo, box.hi);
        return x;
    }

private:
    // xorshift* core seeded through splitmix64
    static std::uint64_t splitmix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }
    std::uint64_t next() {
        std::uint64_t x = state_;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        state_ = x;
        return (x + inc_) * 0x2545f4914f6cdd1dULL;
    }

    std::uint64_t seed_ = 0;
    std::uint64_t state_ = 0;
    std::uint64_t inc_ = 0;
    double spare_ = 0.0;
    bool spare_valid_ = false;
};

/// Ascending ranks 1..N, ties broken by the lower index.
/// Throws std::invalid_argument on non-finite input.
inline std::vector<int> rank_ascending(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("invalid fitness: empty input");
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument("invalid fitness");
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<int> ranks(values.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos)
        ranks[order[pos]] = static_cast<int>(pos) + 1;
    return ranks;
}

/// Rank of element i mapped to [0, 1]; 0.5 for a singleton population.
inline double normalized_rank(std::span<const double> values, std::size_t i) {
    const auto ranks = rank_ascending(values);
    if (values.size() == 1) return 0.5;
    return double(ranks[i] - 1) / double(values.size() - 1);
}

}  // namespace noah
