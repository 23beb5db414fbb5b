#pragma once

// Ambient current models U(x) and the flow-shear feature kappa(x).
//
// Kinds:
//   zero      U = 0 everywhere
//   uniform   constant vector
//   circular  unit-normalised rotation about a center: constant speed,
//             direction tangential; shear falls off as 1/r
//   vortex    rigid rotation about a center: speed grows linearly with
//             radius, shear is constant over the whole box
//   grid      bilinear interpolation of sampled 2D currents

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "noah/core.hpp"

namespace noah {

class FlowField {
public:
    enum class Kind { zero, uniform, circular, vortex, grid };

    static FlowField zero(std::size_t dim) {
        FlowField f;
        f.kind_ = Kind::zero;
        f.dim_ = dim;
        return f;
    }

    static FlowField uniform(Vec v) {
        FlowField f;
        f.kind_ = Kind::uniform;
        f.dim_ = v.size();
        f.uniform_ = std::move(v);
        return f;
    }

    /// Constant-speed rotation: speed * (-(x2-c2), x1-c1) / max(||x-c||, eps).
    static FlowField circular(Vec center, double speed) {
        if (center.size() != 2) throw std::invalid_argument("circular flow requires d = 2");
        FlowField f;
        f.kind_ = Kind::circular;
        f.dim_ = 2;
        f.center_ = std::move(center);
        f.speed_ = speed;
        return f;
    }

    /// Rigid rotation: speed * (-(x2-c2), x1-c1) / half_extent. Tangential
    /// speed equals `speed` at radius half_extent and vanishes at the center.
    static FlowField vortex(Vec center, double speed, double half_extent) {
        if (center.size() != 2) throw std::invalid_argument("vortex flow requires d = 2");
        if (half_extent <= 0.0) throw std::invalid_argument("vortex half_extent must be positive");
        FlowField f;
        f.kind_ = Kind::vortex;
        f.dim_ = 2;
        f.center_ = std::move(center);
        f.speed_ = speed;
        f.half_extent_ = half_extent;
        return f;
    }

    /// nx-by-ny node grid spanning `box`, with u/v velocity components given
    /// row-major (x fastest). Queries outside coverage clamp to the edge.
    static FlowField grid(const Box& box, std::size_t nx, std::size_t ny,
                          std::vector<double> u, std::vector<double> v) {
        if (box.dim != 2) throw std::invalid_argument("grid flow requires d = 2");
        if (nx < 2 || ny < 2) throw std::invalid_argument("grid flow needs at least 2x2 nodes");
        if (u.size() != nx * ny || v.size() != nx * ny)
            throw std::invalid_argument("grid flow sample count mismatch");
        FlowField f;
        f.kind_ = Kind::grid;
        f.dim_ = 2;
        f.grid_box_ = box;
        f.nx_ = nx;
        f.ny_ = ny;
        f.u_ = std::move(u);
        f.v_ = std::move(v);
        return f;
    }

    Kind kind() const { return kind_; }
    std::size_t dim() const { return dim_; }

    Vec sample(const Vec& x) const {
        switch (kind_) {
            case Kind::zero:
                return Vec::zeros(dim_);
            case Kind::uniform:
                return uniform_;
            case Kind::circular: {
                const double dx = x[0] - center_[0];
                const double dy = x[1] - center_[1];
                const double r = std::max(std::sqrt(dx * dx + dy * dy), 1e-9);
                return Vec{-speed_ * dy / r, speed_ * dx / r};
            }
            case Kind::vortex: {
                const double dx = x[0] - center_[0];
                const double dy = x[1] - center_[1];
                return Vec{-speed_ * dy / half_extent_, speed_ * dx / half_extent_};
            }
            case Kind::grid:
                return sample_grid(x);
        }
        return Vec::zeros(dim_);
    }

    std::string describe() const {
        std::ostringstream os;
        switch (kind_) {
            case Kind::zero: os << "zero"; break;
            case Kind::uniform:
                os << "uniform(";
                for (std::size_t i = 0; i < uniform_.size(); ++i)
                    os << (i ? "," : "") << uniform_[i];
                os << ")";
                break;
            case Kind::circular:
                os << "circular(center=(" << center_[0] << "," << center_[1]
                   << "), speed=" << speed_ << ", unit-normalised rotation)";
                break;
            case Kind::vortex:
                os << "vortex(center=(" << center_[0] << "," << center_[1]
                   << "), speed=" << speed_ << " at half-extent " << half_extent_
                   << ", rigid rotation)";
                break;
            case Kind::grid:
                os << "grid(" << nx_ << "x" << ny_ << ")";
                break;
        }
        return os.str();
    }

private:
    Vec sample_grid(const Vec& x) const {
        const double fx = (x[0] - grid_box_.lo) / grid_box_.extent() * double(nx_ - 1);
        const double fy = (x[1] - grid_box_.lo) / grid_box_.extent() * double(ny_ - 1);
        const double cx = std::min(std::max(fx, 0.0), double(nx_ - 1));
        const double cy = std::min(std::max(fy, 0.0), double(ny_ - 1));
        const std::size_t i0 = std::min(std::size_t(cx), nx_ - 2);
        const std::size_t j0 = std::min(std::size_t(cy), ny_ - 2);
        const double tx = cx - double(i0);
        const double ty = cy - double(j0);
        auto at = [&](const std::vector<double>& a, std::size_t i, std::size_t j) {
            return a[j * nx_ + i];
        };
        auto lerp2 = [&](const std::vector<double>& a) {
            const double a00 = at(a, i0, j0), a10 = at(a, i0 + 1, j0);
            const double a01 = at(a, i0, j0 + 1), a11 = at(a, i0 + 1, j0 + 1);
            return (1 - tx) * (1 - ty) * a00 + tx * (1 - ty) * a10 +
                   (1 - tx) * ty * a01 + tx * ty * a11;
        };
        return Vec{lerp2(u_), lerp2(v_)};
    }

    Kind kind_ = Kind::zero;
    std::size_t dim_ = 2;
    Vec uniform_;
    Vec center_;
    double speed_ = 0.0;
    double half_extent_ = 1.0;
    Box grid_box_;
    std::size_t nx_ = 0, ny_ = 0;
    std::vector<double> u_, v_;
};

inline Vec sample_flow(const FlowField& field, const Vec& x) { return field.sample(x); }

/// Frobenius norm of the Jacobian of U at x. Constant fields are exact;
/// the rest use central finite differences with probe points clamped to the
/// box (one-sided at a face).
inline double shear(const FlowField& field, const Vec& x, const Box& box,
                    double fd_step) {
    if (field.kind() == FlowField::Kind::zero ||
        field.kind() == FlowField::Kind::uniform)
        return 0.0;
    const std::size_t d = x.size();
    double sum = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        Vec xp = x, xm = x;
        xp[j] = std::min(box.hi, x[j] + fd_step);
        xm[j] = std::max(box.lo, x[j] - fd_step);
        const double span = xp[j] - xm[j];
        if (span <= 0.0) continue;
        const Vec up = field.sample(xp);
        const Vec um = field.sample(xm);
        for (std::size_t i = 0; i < d; ++i) {
            const double dij = (up[i] - um[i]) / span;
            sum += dij * dij;
        }
    }
    return std::sqrt(sum);
}

/// Loads a grid field from CSV rows (x, y, u, v). The x/y values must form a
/// complete rectangular lattice; anything else is rejected.
inline FlowField load_flow_grid_csv(const std::string& path, const Box& box) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open flow grid: " + path);
    std::map<std::pair<double, double>, std::pair<double, double>> cells;
    std::set<double> xs, ys;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        double x, y, u, v;
        char c1, c2, c3;
        if (!(ls >> x >> c1 >> y >> c2 >> u >> c3 >> v) || c1 != ',' || c2 != ',' || c3 != ',')
            throw std::runtime_error("malformed flow grid row: " + line);
        cells[{x, y}] = {u, v};
        xs.insert(x);
        ys.insert(y);
    }
    const std::size_t nx = xs.size(), ny = ys.size();
    if (nx < 2 || ny < 2) throw std::runtime_error("flow grid needs at least 2x2 nodes");
    if (cells.size() != nx * ny)
        throw std::runtime_error("flow grid coverage is not rectangular");
    std::vector<double> xv(xs.begin(), xs.end()), yv(ys.begin(), ys.end());
    std::vector<double> u(nx * ny), v(nx * ny);
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i < nx; ++i) {
            const auto it = cells.find({xv[i], yv[j]});
            if (it == cells.end())
                throw std::runtime_error("flow grid coverage is not rectangular");
            u[j * nx + i] = it->second.first;
            v[j * nx + i] = it->second.second;
        }
    return FlowField::grid(box, nx, ny, std::move(u), std::move(v));
}

}  // namespace noah
