#include "polyorb/ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <boost/numeric/odeint.hpp>

namespace polyorb {

namespace {

constexpr double kAxisTol = 1e-12;

void check_settings(const IntegratorSettings& s) {
    if (!(s.rel_tol > 0.0) || !(s.abs_tol > 0.0))
        throw std::invalid_argument("integrator tolerances must be positive");
    if (!(s.max_step > 0.0) || !(s.init_step > 0.0))
        throw std::invalid_argument("integrator step bounds must be positive");
    if (s.order != 8)
        throw std::invalid_argument("only the embedded 7(8) method is provided");
}

// Generic adaptive driver around the embedded 7(8) pair.  try_step shrinks dt
// on rejection; we give up once dt is below the resolution of t itself.
template <std::size_t N, class Sys, class Obs>
void drive(Sys sys, std::array<double, N>& x, double t_end, const IntegratorSettings& s,
           Obs&& observe) {
    check_settings(s);
    observe(0.0, x);
    if (t_end == 0.0) return;

    namespace od = boost::numeric::odeint;
    using state_t = std::array<double, N>;
    auto ctrl = od::make_controlled(s.abs_tol, s.rel_tol, od::runge_kutta_fehlberg78<state_t>());

    const double dir = t_end > 0.0 ? 1.0 : -1.0;
    const double eps = std::numeric_limits<double>::epsilon();
    double t = 0.0;
    double dt = dir * std::min({s.init_step, s.max_step, std::abs(t_end)});
    int rejections = 0;

    while (dir * (t_end - t) > 0.0) {
        if (dir * dt > dir * (t_end - t)) dt = t_end - t;
        const double t_before = t;
        if (ctrl.try_step(sys, x, t, dt) == od::fail) {
            if (++rejections > 400 || std::abs(dt) < 64.0 * eps * std::max(1.0, std::abs(t)))
                throw StepSizeUnderflow(t);
            continue;
        }
        rejections = 0;
        if (t == t_before) break;  // step below time resolution; we are at t_end up to roundoff
        if (std::abs(dt) > s.max_step) dt = dir * s.max_step;
        observe(t, x);
    }
}

struct PhaseSys {
    const NBodyField* f;
    void operator()(const std::array<double, 6>& x, std::array<double, 6>& dxdt, double) const {
        Eigen::Map<const Vec6> xm(x.data());
        Eigen::Map<Vec6> dm(dxdt.data());
        dm.head<3>() = xm.tail<3>();
        dm.tail<3>() = f->gradient(xm.head<3>());
    }
};

// Phase state plus the 36 entries of the fundamental matrix (column-major).
struct VarSys {
    const NBodyField* f;
    void operator()(const std::array<double, 42>& x, std::array<double, 42>& dxdt, double) const {
        Eigen::Map<const Vec6> xm(x.data());
        Eigen::Map<const Mat6> mm(x.data() + 6);
        Eigen::Map<Vec6> dxm(dxdt.data());
        Eigen::Map<Mat6> dmm(dxdt.data() + 6);
        const Eigen::Vector3d u = xm.head<3>();
        dxm.head<3>() = xm.tail<3>();
        dxm.tail<3>() = f->gradient(u);
        const Eigen::Matrix3d h = f->hessian(u);
        dmm.topRows<3>() = mm.bottomRows<3>();
        dmm.bottomRows<3>() = h * mm.topRows<3>();
    }
};

}  // namespace

NBodyField::NBodyField(const RotationGroup& group) {
    a_.reserve(group.elements.size());
    for (const auto& r : group.elements) {
        if ((r - Eigen::Matrix3d::Identity()).norm() < 1e-9) continue;
        a_.push_back(r - Eigen::Matrix3d::Identity());
    }
    if (a_.size() + 1 != group.elements.size())
        throw std::invalid_argument("group must contain the identity exactly once");
}

double NBodyField::potential(const Eigen::Vector3d& u) const {
    double s = 0.0;
    for (const auto& a : a_) {
        const double d = (a * u).norm();
        if (d < kAxisTol) throw OnAxis();
        s += 1.0 / d;
    }
    return 0.5 * s;
}

Eigen::Vector3d NBodyField::gradient(const Eigen::Vector3d& u) const {
    Eigen::Vector3d g = Eigen::Vector3d::Zero();
    for (const auto& a : a_) {
        const Eigen::Vector3d w = a * u;
        const double d = w.norm();
        if (d < kAxisTol) throw OnAxis();
        g -= a.transpose() * w / (d * d * d);
    }
    return 0.5 * g;
}

Eigen::Matrix3d NBodyField::hessian(const Eigen::Vector3d& u) const {
    Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
    for (const auto& a : a_) {
        const Eigen::Vector3d w = a * u;
        const double d = w.norm();
        if (d < kAxisTol) throw OnAxis();
        const double d3 = d * d * d;
        const Eigen::Matrix3d core =
            Eigen::Matrix3d::Identity() / d3 - 3.0 * (w * w.transpose()) / (d3 * d * d);
        h -= a.transpose() * core * a;
    }
    return 0.5 * h;
}

double NBodyField::separation(const Eigen::Vector3d& u) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& a : a_) best = std::min(best, (a * u).norm());
    return best;
}

Vec6 vector_field(const NBodyField& field, const Vec6& x) {
    Vec6 dx;
    dx.head<3>() = x.tail<3>();
    dx.tail<3>() = field.gradient(x.head<3>());
    return dx;
}

Mat6 vector_field_jacobian(const NBodyField& field, const Vec6& x) {
    Mat6 j = Mat6::Zero();
    j.topRightCorner<3, 3>() = Eigen::Matrix3d::Identity();
    j.bottomLeftCorner<3, 3>() = field.hessian(x.head<3>());
    return j;
}

Vec6 flow(const NBodyField& field, const Vec6& x0, double t, const IntegratorSettings& settings) {
    return flow(field, x0, t, settings, StepObserver());
}

Vec6 flow(const NBodyField& field, const Vec6& x0, double t, const IntegratorSettings& settings,
          const StepObserver& observe) {
    std::array<double, 6> x;
    Eigen::Map<Vec6>(x.data()) = x0;
    auto obs = [&](double tk, const std::array<double, 6>& xk) {
        if (observe) observe(tk, Eigen::Map<const Vec6>(xk.data()));
    };
    drive<6>(PhaseSys{&field}, x, t, settings, obs);
    return Eigen::Map<const Vec6>(x.data());
}

VariationalState flow_with_variation(const NBodyField& field, const Vec6& x0, double t,
                                     const IntegratorSettings& settings) {
    std::array<double, 42> x;
    Eigen::Map<Vec6>(x.data()) = x0;
    Eigen::Map<Mat6>(x.data() + 6) = Mat6::Identity();
    drive<42>(VarSys{&field}, x, t, settings, [](double, const std::array<double, 42>&) {});
    VariationalState out;
    out.x = Eigen::Map<const Vec6>(x.data());
    out.m = Eigen::Map<const Mat6>(x.data() + 6);
    return out;
}

double energy(const NBodyField& field, const Vec6& x) {
    return 0.5 * x.tail<3>().squaredNorm() - field.potential(x.head<3>());
}

Mat6 phase_symmetry(const Eigen::Matrix3d& r) {
    Mat6 s = Mat6::Zero();
    s.topLeftCorner<3, 3>() = r;
    s.bottomRightCorner<3, 3>() = r;
    return s;
}

Mat6 symplectic_form() {
    Mat6 j = Mat6::Zero();
    j.topRightCorner<3, 3>() = Eigen::Matrix3d::Identity();
    j.bottomLeftCorner<3, 3>() = -Eigen::Matrix3d::Identity();
    return j;
}

}  // namespace polyorb
