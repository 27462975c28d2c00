#include "covpath/geometry.hpp"

#include <cmath>

#include "covpath/errors.hpp"

namespace covpath {

Mat3 Mat3::rotation_z(double yaw) {
    const double c = std::cos(yaw), s = std::sin(yaw);
    Mat3 r;
    r.m = {c, -s, 0, s, c, 0, 0, 0, 1};
    return r;
}

Mat3 Mat3::rotation_y(double pitch) {
    const double c = std::cos(pitch), s = std::sin(pitch);
    Mat3 r;
    r.m = {c, 0, s, 0, 1, 0, -s, 0, c};
    return r;
}

Mat3 Mat3::rotation_x(double roll) {
    const double c = std::cos(roll), s = std::sin(roll);
    Mat3 r;
    r.m = {1, 0, 0, 0, c, -s, 0, s, c};
    return r;
}

Mat3 Mat3::transposed() const {
    Mat3 t;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) t(r, c) = (*this)(c, r);
    return t;
}

Mat3 operator*(const Mat3& a, const Mat3& b) {
    Mat3 out;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            double acc = 0.0;
            for (int k = 0; k < 3; ++k) acc += a(r, k) * b(k, c);
            out(r, c) = acc;
        }
    return out;
}

Vec3 operator*(const Mat3& a, const Vec3& v) {
    return {a(0, 0) * v.x + a(0, 1) * v.y + a(0, 2) * v.z,
            a(1, 0) * v.x + a(1, 1) * v.y + a(1, 2) * v.z,
            a(2, 0) * v.x + a(2, 1) * v.y + a(2, 2) * v.z};
}

bool is_rotation(const Mat3& r, double tol) {
    const Mat3 ident = Mat3::identity();
    const Mat3 rtr = r.transposed() * r;
    for (int i = 0; i < 9; ++i) {
        if (std::abs(rtr.m[static_cast<std::size_t>(i)] - ident.m[static_cast<std::size_t>(i)]) >
            tol)
            return false;
    }
    const double det = r(0, 0) * (r(1, 1) * r(2, 2) - r(1, 2) * r(2, 1)) -
                       r(0, 1) * (r(1, 0) * r(2, 2) - r(1, 2) * r(2, 0)) +
                       r(0, 2) * (r(1, 0) * r(2, 1) - r(1, 1) * r(2, 0));
    return std::abs(det - 1.0) <= tol;
}

double wrap_angle(double a) {
    if (a > -M_PI && a <= M_PI) return a;  // keep in-range values bit exact
    constexpr double two_pi = 2.0 * M_PI;
    double r = std::fmod(a + M_PI, two_pi);
    if (r <= 0.0) r += two_pi;
    return r - M_PI;
}

double yaw_error(double a, double b) { return std::abs(wrap_angle(a - b)); }

void Tolerance::validate() const {
    if (!(position > 0.0) || !(yaw > 0.0) || !(timeout > 0.0))
        throw InvalidArgumentError("tolerance fields must be strictly positive");
}

bool at_destination(const Pose2D& pose, const Pose2D& goal, const Tolerance& tol) {
    const double planar = std::hypot(pose.x - goal.x, pose.y - goal.y);
    return planar <= tol.position && yaw_error(pose.psi, goal.psi) <= tol.yaw;
}

}  // namespace covpath
