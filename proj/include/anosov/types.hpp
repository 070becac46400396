#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

namespace anosov {

struct Vec2 {
    double x{};
    double y{};

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
    Vec2 normalized() const {
        double n = norm();
        return {x / n, y / n};
    }
};

// A point of the plane and a based direction share the same layout.
using PlanePoint = Vec2;

inline double sup_dist(Vec2 a, Vec2 b) {
    return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y));
}

// Row-major 2x2 derivative of a plane map.
struct Jacobian2 {
    double a11{1}, a12{0}, a21{0}, a22{1};

    Vec2 apply(Vec2 v) const { return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y}; }
    double det() const { return a11 * a22 - a12 * a21; }
    Jacobian2 inverse() const {
        double d = det();
        return {a22 / d, -a12 / d, -a21 / d, a11 / d};
    }
    Jacobian2 mul(const Jacobian2& o) const {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }
};

inline double sup_dist(const Jacobian2& a, const Jacobian2& b) {
    double m = std::abs(a.a11 - b.a11);
    m = std::max(m, std::abs(a.a12 - b.a12));
    m = std::max(m, std::abs(a.a21 - b.a21));
    m = std::max(m, std::abs(a.a22 - b.a22));
    return m;
}

enum class Bundle { Unstable, Stable, Untagged };

struct TangentVector {
    PlanePoint base;
    Vec2 dir;
    Bundle bundle = Bundle::Untagged;
};

enum class RegionId { A, B, Dblend, Ctranslate, Goutside, Rinside, SigmaSide, OffDomain };

inline const char* region_name(RegionId r) {
    switch (r) {
        case RegionId::A: return "A";
        case RegionId::B: return "B";
        case RegionId::Dblend: return "Dblend";
        case RegionId::Ctranslate: return "Ctranslate";
        case RegionId::Goutside: return "Goutside";
        case RegionId::Rinside: return "Rinside";
        case RegionId::SigmaSide: return "SigmaSide";
        case RegionId::OffDomain: return "OffDomain";
    }
    return "?";
}

struct OrbitSegment {
    std::vector<PlanePoint> points;
    int start_index = 0;
};

// Numeric failure carrying the offending point.
class numeric_error : public std::runtime_error {
  public:
    numeric_error(const std::string& what, Vec2 where)
        : std::runtime_error(what + " at (" + std::to_string(where.x) + ", " +
                             std::to_string(where.y) + ")"),
          where_(where) {}
    Vec2 where() const { return where_; }

  private:
    Vec2 where_;
};

// Cubic smoothstep and its helpers; S(0)=S'(0)=S'(1)=0, S(1)=1.
inline double smoothstep(double u) { return u * u * (3.0 - 2.0 * u); }
inline double smoothstep_deriv(double u) { return 6.0 * u * (1.0 - u); }
// Antiderivative of smoothstep with T(0)=0; T(1)=1/2.
inline double smoothstep_integral(double u) { return u * u * u - 0.5 * u * u * u * u; }

inline std::uint64_t bit_key(double v) {
    std::uint64_t k;
    static_assert(sizeof(k) == sizeof(v));
    std::memcpy(&k, &v, sizeof(k));
    return k;
}

}  // namespace anosov
