#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "domain.hpp"
#include "geometry.hpp"

namespace wsndeploy {

struct GridResolution {
    std::size_t nx = 100;
    std::size_t ny = 100;
};

/// Weighted point set standing in for the sensor density over the region:
/// every integral of g(w) f(w) dw becomes sum_k g(points[k]) * weights[k].
struct DiscretizedField {
    std::vector<Point2> points;
    std::vector<double> weights;
    GridResolution resolution;

    std::size_t size() const { return points.size(); }

    double total_mass() const {
        double m = 0.0;
        for (double w : weights) m += w;
        return m;
    }
};

/// Midpoint-rule quadrature on a regular grid over the region's bounding box.
/// Cell centres outside the polygon are dropped; boundary points are kept.
inline DiscretizedField discretize(std::span<const Point2> region, const DensitySpec& density,
                                   GridResolution res) {
    if (res.nx < 2 || res.ny < 2) {
        throw invalid_parameter("grid: resolution must be at least 2x2");
    }
    if (region.size() < 3) {
        throw invalid_parameter("region_m: need at least three vertices");
    }
    const double region_area = area(region);
    const BoundingBox box = bounding_box(region);
    if (!(region_area > 0.0) || !(box.width() > 0.0) || !(box.height() > 0.0)) {
        throw invalid_parameter("region_m: degenerate region with zero area");
    }

    const double dx = box.width() / static_cast<double>(res.nx);
    const double dy = box.height() / static_cast<double>(res.ny);
    const double cell = dx * dy;
    // Boundary tolerance scaled to the region so on-edge centres survive rounding.
    const double tol = 1e-12 * (box.width() + box.height()) * (box.width() + box.height());

    DiscretizedField field;
    field.resolution = res;
    field.points.reserve(res.nx * res.ny);
    field.weights.reserve(res.nx * res.ny);
    for (std::size_t iy = 0; iy < res.ny; ++iy) {
        for (std::size_t ix = 0; ix < res.nx; ++ix) {
            const Point2 p{box.lo.x + (static_cast<double>(ix) + 0.5) * dx,
                           box.lo.y + (static_cast<double>(iy) + 0.5) * dy};
            if (!contains(region, p, tol)) continue;
            field.points.push_back(p);
            field.weights.push_back(density_at(density, region_area, p) * cell);
        }
    }
    if (field.points.empty() || !(field.total_mass() > 0.0)) {
        throw invalid_parameter("grid: no positive-mass grid points inside the region");
    }
    return field;
}

struct CellStats {
    double volume = 0.0;
    std::optional<Point2> centroid; // absent when volume is zero
};

/// Volume and centroid of the cell formed by all points owned by `n`.
inline CellStats cell_stats(const DiscretizedField& field, std::span<const std::size_t> owner, std::size_t n) {
    if (owner.size() != field.size()) {
        throw invalid_parameter("assignment: length must equal the number of field points");
    }
    double v = 0.0;
    Point2 moment;
    for (std::size_t k = 0; k < field.size(); ++k) {
        if (owner[k] != n) continue;
        v += field.weights[k];
        moment += field.weights[k] * field.points[k];
    }
    CellStats stats{v, std::nullopt};
    if (v > 0.0) stats.centroid = moment * (1.0 / v);
    return stats;
}

/// All cell stats in one sweep; same summation order as cell_stats.
inline std::vector<CellStats> all_cell_stats(const DiscretizedField& field, std::span<const std::size_t> owner,
                                             std::size_t num_cells) {
    if (owner.size() != field.size()) {
        throw invalid_parameter("assignment: length must equal the number of field points");
    }
    std::vector<double> vol(num_cells, 0.0);
    std::vector<Point2> moment(num_cells);
    for (std::size_t k = 0; k < field.size(); ++k) {
        const std::size_t n = owner[k];
        if (n >= num_cells) throw invalid_parameter("assignment: owner index out of range");
        vol[n] += field.weights[k];
        moment[n] += field.weights[k] * field.points[k];
    }
    std::vector<CellStats> out(num_cells);
    for (std::size_t n = 0; n < num_cells; ++n) {
        out[n].volume = vol[n];
        if (vol[n] > 0.0) out[n].centroid = moment[n] * (1.0 / vol[n]);
    }
    return out;
}

} // namespace wsndeploy
