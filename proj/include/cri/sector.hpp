#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "cri/core_types.hpp"
#include "cri/risk.hpp"

namespace cri {

inline constexpr int kSectorCount = 8;

// Exact unit vectors for the sector centers d*pi/4, so antipodal fields
// cancel to zero exactly.
inline constexpr double kSqrt1_2 = 0.7071067811865476;
inline constexpr std::array<double, kSectorCount> kSectorCos{1.0, kSqrt1_2,  0.0, -kSqrt1_2,
                                                             -1.0, -kSqrt1_2, 0.0, kSqrt1_2};
inline constexpr std::array<double, kSectorCount> kSectorSin{0.0, kSqrt1_2,  1.0, kSqrt1_2,
                                                             0.0, -kSqrt1_2, -1.0, -kSqrt1_2};

/// Center angle of sector d, wrapped to (-pi, pi].
inline double sector_center(int d) { return wrap_angle(d * std::numbers::pi / 4.0); }

/// Eight-sector body-frame risk map with its fused scalar summary.
struct SectorField {
    std::array<double, kSectorCount> R{};
    std::array<double, kSectorCount> theta{};
    double r_vector{0.0};
    double r_max{0.0};
    double cri_final_raw{0.0};
    double cri_final{0.0};
    int dominant_sector{0};
    double theta_star{0.0};
    double r_star{0.0};
};

/// Sector index for a bearing in (-pi, pi]. Sector d spans
/// (theta_d - pi/8, theta_d + pi/8], sector 0 centered on the forward axis.
inline int assign_sector(double bearing) {
    const double step = std::numbers::pi / 4.0;
    int d = static_cast<int>(std::ceil(bearing / step - 0.5)) % kSectorCount;
    if (d < 0) d += kSectorCount;
    return d;
}

/// Per-sector maximum of the object risks; empty sectors stay at zero.
inline SectorField aggregate(const std::vector<ObjectRisk>& objects) {
    SectorField field;
    for (int d = 0; d < kSectorCount; ++d) field.theta[d] = sector_center(d);
    for (const auto& obj : objects) {
        const int d = assign_sector(obj.bearing);
        field.R[d] = std::max(field.R[d], obj.cri);
    }
    return field;
}

/// Vector-max fusion: blends the sector-risk vector magnitude with the peak
/// sector risk and identifies the dominant direction (ties go to the lowest
/// index, so frontal threats win).
inline SectorField fuse(SectorField field, double beta) {
    if (!(beta >= 0.0 && beta <= 1.0)) throw std::domain_error("fuse: beta must be in [0, 1]");
    for (int d = 0; d < kSectorCount; ++d) field.theta[d] = sector_center(d);
    double cx = 0.0, cy = 0.0;
    for (int d = 0; d < kSectorCount; ++d) {
        cx += field.R[d] * kSectorCos[d];
        cy += field.R[d] * kSectorSin[d];
    }
    field.r_vector = std::hypot(cx, cy);
    field.dominant_sector = 0;
    for (int d = 1; d < kSectorCount; ++d)
        if (field.R[d] > field.R[field.dominant_sector]) field.dominant_sector = d;
    field.r_max = field.R[field.dominant_sector];
    field.cri_final_raw = beta * field.r_vector + (1.0 - beta) * field.r_max;
    field.cri_final = std::min(1.0, field.cri_final_raw);
    field.theta_star = field.theta[field.dominant_sector];
    field.r_star = field.R[field.dominant_sector];
    return field;
}

inline SectorField build_sector_field(const std::vector<ObjectRisk>& objects, double beta) {
    return fuse(aggregate(objects), beta);
}

}  // namespace cri
