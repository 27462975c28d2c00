#pragma once

#include <array>
#include <cmath>

namespace covpath {

struct Vec2 {
    double x{0.0};
    double y{0.0};
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

struct Vec3 {
    double x{0.0};
    double y{0.0};
    double z{0.0};
};

/// Row-major 3x3 matrix, used for body/inertial rotations.
struct Mat3 {
    std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

    double operator()(int r, int c) const { return m[static_cast<std::size_t>(3 * r + c)]; }
    double& operator()(int r, int c) { return m[static_cast<std::size_t>(3 * r + c)]; }

    static Mat3 identity() { return {}; }
    static Mat3 rotation_z(double yaw);
    static Mat3 rotation_y(double pitch);
    static Mat3 rotation_x(double roll);

    Mat3 transposed() const;
};

Mat3 operator*(const Mat3& a, const Mat3& b);
Vec3 operator*(const Mat3& a, const Vec3& v);

/// Frobenius check that rotation*rotation^T = I and det = +1.
bool is_rotation(const Mat3& r, double tol = 1e-9);

/// 2D pose; psi is the yaw about +z, normalized to (-pi, pi].
struct Pose2D {
    double x{0.0};
    double y{0.0};
    double psi{0.0};

    Vec2 position() const { return {x, y}; }
};

/// Normalize an angle to (-pi, pi].
double wrap_angle(double a);

/// Magnitude of the wrapped difference a - b, in [0, pi].
double yaw_error(double a, double b);

struct Tolerance {
    double position{0.05};  // meters
    double yaw{0.08};       // radians
    double timeout{10.0};   // seconds

    void validate() const;
};

/// True iff the planar distance and the wrapped yaw error are both within
/// tolerance (boundary inclusive).
bool at_destination(const Pose2D& pose, const Pose2D& goal, const Tolerance& tol);

}  // namespace covpath
