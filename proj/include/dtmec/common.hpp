#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace dtmec {

// 3-D point in meters. Ground nodes sit at z = 0, the UAV at z = H.
struct Location {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend bool operator==(const Location& a, const Location& b) {
        return a.x == b.x && a.y == b.y && a.z == b.z;
    }
};

inline double horizontal_distance(const Location& a, const Location& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

inline double sq(double v) { return v * v; }

// Maps an angle into (-pi, pi].
inline double wrap_angle(double a) {
    const double pi = M_PI;
    double r = std::fmod(a + pi, 2.0 * pi);
    if (r <= 0.0) r += 2.0 * pi;
    return r - pi;
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

// Contract violations (bad arguments, broken invariants) throw this;
// routine infeasibility is reported through result values instead.
class ModelError : public std::runtime_error {
  public:
    explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace dtmec
