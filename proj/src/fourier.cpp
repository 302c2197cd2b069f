#include "polyorb/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace polyorb {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kCollisionTol = 1e-8;

// c(k, n) = cos(2 pi k n / grid), s(k, n) = sin(2 pi k n / grid)
struct TrigTable {
    Eigen::MatrixXd c, s;
};

TrigTable make_table(int order, int grid) {
    TrigTable t;
    t.c.resize(order + 1, grid);
    t.s.resize(order + 1, grid);
    const double w = 2.0 * kPi / grid;
    for (int k = 0; k <= order; ++k)
        for (int n = 0; n < grid; ++n) {
            const double ang = w * static_cast<double>((static_cast<long long>(k) * n) % grid);
            t.c(k, n) = std::cos(ang);
            t.s(k, n) = std::sin(ang);
        }
    return t;
}

Eigen::Matrix3Xd grid_positions(const FourierLoop& loop, const TrigTable& tab) {
    Eigen::Matrix3Xd ah = loop.a;
    ah.col(0) *= 0.5;
    return ah * tab.c + loop.b * tab.s;
}

Eigen::Matrix3Xd grid_accelerations(const FourierLoop& loop, const TrigTable& tab) {
    const int f = loop.order();
    Eigen::Matrix3Xd aw = loop.a, bw = loop.b;
    for (int k = 0; k <= f; ++k) {
        const double w2 = std::pow(2.0 * kPi * k / loop.period, 2);
        aw.col(k) *= w2;
        bw.col(k) *= w2;
    }
    return -(aw * tab.c) - (bw * tab.s);
}

double clearance_of(const std::vector<Eigen::Vector3d>& axes, const Eigen::Vector3d& u) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& n : axes) best = std::min(best, (u - n.dot(u) * n).norm());
    return best;
}

// U and its gradient across the grid; throws once a node is too close to an
// axis.  grad may be null when only the potential sum is needed.
double grid_potential(const NBodyField& field, const std::vector<Eigen::Vector3d>& axes,
                      const Eigen::Matrix3Xd& pts, Eigen::Matrix3Xd* grad) {
    double sum = 0.0;
    for (int n = 0; n < pts.cols(); ++n) {
        const Eigen::Vector3d u = pts.col(n);
        const double d = clearance_of(axes, u);
        if (d < kCollisionTol) throw NearCollision(d);
        sum += field.potential(u);
        if (grad) grad->col(n) = field.gradient(u);
    }
    return sum;
}

int grid_size(int requested, int order) {
    const int dflt = 8 * std::max(order, 1);
    if (requested == 0) return dflt;
    if (requested < dflt) throw std::invalid_argument("quadrature grid must have >= 8F nodes");
    return requested;
}

FourierLoop transform_samples(const Eigen::Matrix3Xd& x, int order, double period) {
    const int ns = static_cast<int>(x.cols());
    const TrigTable tab = make_table(order, ns);
    FourierLoop loop;
    loop.period = period;
    loop.a = (2.0 / ns) * (x * tab.c.transpose());
    loop.b = (2.0 / ns) * (x * tab.s.transpose());
    loop.b.col(0).setZero();
    return loop;
}

}  // namespace

Eigen::Vector3d FourierLoop::position(double t) const {
    const double w = 2.0 * kPi / period;
    Eigen::Vector3d u = 0.5 * a.col(0);
    for (int k = 1; k <= order(); ++k)
        u += a.col(k) * std::cos(w * k * t) + b.col(k) * std::sin(w * k * t);
    return u;
}

Eigen::Vector3d FourierLoop::velocity(double t) const {
    const double w = 2.0 * kPi / period;
    Eigen::Vector3d v = Eigen::Vector3d::Zero();
    for (int k = 1; k <= order(); ++k)
        v += w * k * (-a.col(k) * std::sin(w * k * t) + b.col(k) * std::cos(w * k * t));
    return v;
}

Eigen::Vector3d FourierLoop::acceleration(double t) const {
    const double w = 2.0 * kPi / period;
    Eigen::Vector3d acc = Eigen::Vector3d::Zero();
    for (int k = 1; k <= order(); ++k)
        acc -= w * k * w * k * (a.col(k) * std::cos(w * k * t) + b.col(k) * std::sin(w * k * t));
    return acc;
}

Vec6 FourierLoop::phase(double t) const {
    Vec6 x;
    x.head<3>() = position(t);
    x.tail<3>() = velocity(t);
    return x;
}

double LoopGradient::max_norm() const {
    return std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
}

std::vector<Eigen::Vector3d> axis_directions(const RotationGroup& group) {
    std::vector<Eigen::Vector3d> axes;
    for (const auto& p : compute_poles(group)) {
        Eigen::Vector3d d = p.dir;
        for (int i = 0; i < 3; ++i) {
            if (std::abs(d[i]) > 1e-9) {
                if (d[i] < 0) d = -d;
                break;
            }
        }
        bool seen = false;
        for (const auto& q : axes) seen = seen || (q - d).norm() < 1e-6;
        if (!seen) axes.push_back(d);
    }
    return axes;
}

LoopAction::LoopAction(const RotationGroup& group)
    : field_(group), axes_(axis_directions(group)) {}

double LoopAction::clearance(const Eigen::Vector3d& u) const { return clearance_of(axes_, u); }

double LoopAction::loop_clearance(const FourierLoop& loop, int grid_points) const {
    const int ng = grid_size(grid_points, loop.order());
    const Eigen::Matrix3Xd pts = grid_positions(loop, make_table(loop.order(), ng));
    double best = std::numeric_limits<double>::infinity();
    for (int n = 0; n < ng; ++n) best = std::min(best, clearance_of(axes_, pts.col(n)));
    return best;
}

double kinetic_action(const FourierLoop& loop) {
    double s = 0.0;
    for (int k = 1; k <= loop.order(); ++k)
        s += kPi * k * kPi * k * (loop.a.col(k).squaredNorm() + loop.b.col(k).squaredNorm());
    return s / loop.period;
}

LoopGradient kinetic_gradient(const FourierLoop& loop) {
    LoopGradient g;
    g.a = Eigen::Matrix3Xd::Zero(3, loop.a.cols());
    g.b = Eigen::Matrix3Xd::Zero(3, loop.b.cols());
    for (int k = 1; k <= loop.order(); ++k) {
        const double kin = 2.0 * kPi * k * kPi * k / loop.period;
        g.a.col(k) = kin * loop.a.col(k);
        g.b.col(k) = kin * loop.b.col(k);
    }
    return g;
}

double LoopAction::discrete_action(const FourierLoop& loop, int grid_points) const {
    const int ng = grid_size(grid_points, loop.order());
    const Eigen::Matrix3Xd pts = grid_positions(loop, make_table(loop.order(), ng));
    const double pot = grid_potential(field_, axes_, pts, nullptr);
    return kinetic_action(loop) + loop.period / ng * pot;
}

LoopGradient LoopAction::action_gradient(const FourierLoop& loop, int grid_points) const {
    const int ng = grid_size(grid_points, loop.order());
    const TrigTable tab = make_table(loop.order(), ng);
    const Eigen::Matrix3Xd pts = grid_positions(loop, tab);
    Eigen::Matrix3Xd gu(3, ng);
    grid_potential(field_, axes_, pts, &gu);

    const double t = loop.period;
    LoopGradient g;
    g.a = (t / ng) * (gu * tab.c.transpose());
    g.a.col(0) *= 0.5;
    g.b = (t / ng) * (gu * tab.s.transpose());
    g.b.col(0).setZero();
    for (int k = 1; k <= loop.order(); ++k) {
        const double kin = 2.0 * kPi * k * kPi * k / t;
        g.a.col(k) += kin * loop.a.col(k);
        g.b.col(k) += kin * loop.b.col(k);
    }
    return g;
}

double LoopAction::residual_acceleration(const FourierLoop& loop, int grid_points) const {
    const int ng = grid_size(grid_points, loop.order());
    const TrigTable tab = make_table(loop.order(), ng);
    const Eigen::Matrix3Xd pts = grid_positions(loop, tab);
    const Eigen::Matrix3Xd acc = grid_accelerations(loop, tab);
    double worst = 0.0;
    for (int n = 0; n < ng; ++n) {
        const double d = clearance_of(axes_, pts.col(n));
        if (d < kCollisionTol) throw NearCollision(d);
        worst = std::max(worst, (acc.col(n) - field_.gradient(pts.col(n))).norm());
    }
    return worst;
}

double pl_scale(const Polyhedron& poly, const NBodyField& field, const std::vector<int>& nu,
                double period) {
    const int l = static_cast<int>(nu.size());
    const double ell = poly.edge_length;
    // time-average of U over the unit loop, trapezoid nodes aligned to the
    // vertices so every subinterval lies in a single edge
    const int ns = l * std::max(1, (2048 + l - 1) / l);
    double ubar = 0.0;
    for (int n = 0; n < ns; ++n)
        ubar += field.potential(pl_position(poly, nu, 1.0, 1.0, static_cast<double>(n) / ns));
    ubar /= ns;
    return std::cbrt(ubar * period * period / (l * ell * l * ell));
}

Eigen::Vector3d pl_position(const Polyhedron& poly, const std::vector<int>& nu, double scale,
                            double period, double t) {
    const int l = static_cast<int>(nu.size());
    double s = std::fmod(t / period, 1.0) * l;
    if (s < 0) s += l;
    int j = static_cast<int>(s);
    if (j >= l) j -= l;
    const double frac = s - j;
    const Eigen::Vector3d va = poly.vertices[nu[j]];
    const Eigen::Vector3d vb = poly.vertices[nu[(j + 1) % l]];
    return scale * ((1.0 - frac) * va + frac * vb);
}

FourierLoop init_from_sequence(const Polyhedron& poly, const NBodyField& field,
                               const std::vector<int>& nu, int order, double period) {
    if (order < 1) throw std::invalid_argument("truncation order must be positive");
    const int l = static_cast<int>(nu.size());
    const double lam = pl_scale(poly, field, nu, period);
    const int ns = l * std::max(1, (8 * order + l - 1) / l);
    Eigen::Matrix3Xd x(3, ns);
    for (int n = 0; n < ns; ++n)
        x.col(n) = pl_position(poly, nu, lam, period, period * n / ns);
    return transform_samples(x, order, period);
}

ChoreographyConstraint class_constraint(const Polyhedron& poly, const std::vector<int>& nu,
                                        int shifts) {
    const int l = static_cast<int>(nu.size());
    if (shifts <= 0 || l % shifts != 0)
        throw std::invalid_argument("shift count must divide the sequence length");
    const int ks = l / shifts;
    const int idx = poly.pair_to_element.at({nu[0], nu[ks % l]});
    return {poly.rot.elements[idx], shifts};
}

namespace {

// image of the coefficients under "advance time by T/shifts, then undo the
// rotation"; constraint holds iff this is the identity on the loop
FourierLoop constraint_map(const FourierLoop& loop, const ChoreographyConstraint& c) {
    FourierLoop out = loop;
    const Eigen::Matrix3d rt = c.element.transpose();
    for (int k = 0; k <= loop.order(); ++k) {
        const double th = 2.0 * kPi * k / c.shifts;
        const Eigen::Vector3d ak = loop.a.col(k), bk = loop.b.col(k);
        out.a.col(k) = rt * (std::cos(th) * ak + std::sin(th) * bk);
        out.b.col(k) = rt * (std::cos(th) * bk - std::sin(th) * ak);
    }
    out.b.col(0).setZero();
    return out;
}

}  // namespace

double choreography_defect(const FourierLoop& loop, const ChoreographyConstraint& c) {
    const FourierLoop m = constraint_map(loop, c);
    return std::max((loop.a - m.a).cwiseAbs().maxCoeff(), (loop.b - m.b).cwiseAbs().maxCoeff());
}

void choreography_project(FourierLoop& loop, const ChoreographyConstraint& c) {
    FourierLoop acc = loop, cur = loop;
    for (int j = 1; j < c.shifts; ++j) {
        cur = constraint_map(cur, c);
        acc.a += cur.a;
        acc.b += cur.b;
    }
    loop.a = acc.a / c.shifts;
    loop.b = acc.b / c.shifts;
}

FourierLoop resample(const FourierLoop& loop, int new_order) {
    if (new_order < 1) throw std::invalid_argument("truncation order must be positive");
    const int ns = 8 * std::max(new_order, loop.order());
    Eigen::Matrix3Xd x = grid_positions(loop, make_table(loop.order(), ns));
    return transform_samples(x, new_order, loop.period);
}

double relaxation_step_scale(int k, double period, double delta) {
    const double kk = kPi * std::max(k, 1);
    return period * delta / (2.0 * kk * kk);
}

RelaxationResult relax(const LoopAction& act, const FourierLoop& init,
                       const RelaxationSettings& settings,
                       const ChoreographyConstraint* constraint) {
    if (!(settings.delta > 0) || !(settings.stop_increment > 0) || !(settings.stop_residual > 0))
        throw std::invalid_argument("relaxation thresholds must be positive");
    if (settings.max_iters <= 0 || settings.project_every <= 0)
        throw std::invalid_argument("relaxation counts must be positive");

    const int f = init.order();
    const double t = init.period;
    const int ng = grid_size(settings.grid_points, f);
    const TrigTable tab = make_table(f, ng);

    const auto eval_action = [&](const FourierLoop& loop) {
        const Eigen::Matrix3Xd pts = grid_positions(loop, tab);
        return kinetic_action(loop) + t / ng * grid_potential(act.field(), act.axes(), pts, nullptr);
    };

    // gradient plus the residual acceleration of the same evaluation
    const auto eval_gradient = [&](const FourierLoop& loop, double& residual) {
        const Eigen::Matrix3Xd pts = grid_positions(loop, tab);
        Eigen::Matrix3Xd gu(3, ng);
        grid_potential(act.field(), act.axes(), pts, &gu);
        const Eigen::Matrix3Xd acc = grid_accelerations(loop, tab);
        residual = 0.0;
        for (int n = 0; n < ng; ++n) residual = std::max(residual, (acc.col(n) - gu.col(n)).norm());

        LoopGradient g;
        g.a = (t / ng) * (gu * tab.c.transpose());
        g.a.col(0) *= 0.5;
        g.b = (t / ng) * (gu * tab.s.transpose());
        g.b.col(0).setZero();
        for (int k = 1; k <= f; ++k) {
            const double kin = 2.0 * kPi * k * kPi * k / t;
            g.a.col(k) += kin * loop.a.col(k);
            g.b.col(k) += kin * loop.b.col(k);
        }
        return g;
    };

    FourierLoop x = init;
    if (constraint) choreography_project(x, *constraint);

    RelaxationDiagnostics diag;
    double a_cur = eval_action(x);
    diag.action_history.push_back(a_cur);
    double delta = settings.delta;

    for (int iter = 1; iter <= settings.max_iters; ++iter) {
        diag.iterations = iter;
        double residual = 0.0;
        const LoopGradient g = eval_gradient(x, residual);
        diag.final_residual = residual;
        if (residual < settings.stop_residual) {
            diag.converged = true;
            break;
        }

        FourierLoop trial = x;
        double inc = 0.0;
        int halvings = 0;
        for (;;) {
            trial = x;
            inc = 0.0;
            for (int k = 0; k <= f; ++k) {
                const double dt_k = relaxation_step_scale(k, t, delta);
                trial.a.col(k) -= dt_k * g.a.col(k);
                inc = std::max(inc, dt_k * g.a.col(k).cwiseAbs().maxCoeff());
                if (k > 0) {
                    trial.b.col(k) -= dt_k * g.b.col(k);
                    inc = std::max(inc, dt_k * g.b.col(k).cwiseAbs().maxCoeff());
                }
            }
            const double a_try = eval_action(trial);
            if (a_try <= a_cur + 1e-12 * std::max(1.0, std::abs(a_cur))) {
                a_cur = a_try;
                break;
            }
            delta *= 0.5;
            if (++halvings > 60) throw Diverged();
        }
        x = trial;
        diag.action_history.push_back(a_cur);
        diag.final_increment = inc;

        if (constraint && iter % settings.project_every == 0) {
            choreography_project(x, *constraint);
            a_cur = eval_action(x);
        }
        if (inc < settings.stop_increment) {
            diag.converged = true;
            break;
        }
        delta = std::min(delta * 1.5, settings.delta);
    }

    diag.delta_used = delta;
    diag.min_clearance = act.loop_clearance(x, ng);
    return {x, diag};
}

}  // namespace polyorb
