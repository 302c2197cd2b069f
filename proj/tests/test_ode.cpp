#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "polyorb/geometry.hpp"
#include "polyorb/ode.hpp"

using namespace polyorb;

namespace {

Vec6 make_x(double a, double b, double c, double d, double e, double f) {
    Vec6 x;
    x << a, b, c, d, e, f;
    return x;
}

const Vec6 kArcT = make_x(0.23, 0.61, 1.02, 0.7, -0.3, 0.1);
const Vec6 kArcO = make_x(0.35, 0.55, 0.95, -0.5, 1.3, -0.2);

}  // namespace

TEST_CASE("potential derivatives match finite differences") {
    for (Group g : {Group::T, Group::O, Group::I}) {
        NBodyField f(generate_group(g));
        for (const Eigen::Vector3d& u :
             {Eigen::Vector3d(0.23, 0.61, 1.02), Eigen::Vector3d(-0.42, 0.88, 0.31)}) {
            const Eigen::Vector3d grad = f.gradient(u);
            const double h = 1e-5;
            for (int i = 0; i < 3; ++i) {
                Eigen::Vector3d up = u, dn = u;
                up[i] += h;
                dn[i] -= h;
                const double fd = (f.potential(up) - f.potential(dn)) / (2 * h);
                CHECK(std::abs(grad[i] - fd) <= 1e-7 * std::max(1.0, std::abs(fd)));
            }
            const Eigen::Matrix3d hess = f.hessian(u);
            CHECK((hess - hess.transpose()).cwiseAbs().maxCoeff() < 1e-12);
            for (int j = 0; j < 3; ++j) {
                Eigen::Vector3d up = u, dn = u;
                up[j] += h;
                dn[j] -= h;
                const Eigen::Vector3d fd = (f.gradient(up) - f.gradient(dn)) / (2 * h);
                for (int i = 0; i < 3; ++i)
                    CHECK(std::abs(hess(i, j) - fd[i]) <= 1e-5 * std::max(1.0, std::abs(fd[i])));
            }
        }
    }
}

TEST_CASE("vector field and its Jacobian have Hamiltonian block structure") {
    NBodyField f(generate_group(Group::T));
    const Vec6 x = kArcT;
    const Vec6 dx = vector_field(f, x);
    CHECK((dx.head<3>() - x.tail<3>()).norm() == 0.0);
    CHECK((dx.tail<3>() - f.gradient(x.head<3>())).norm() == 0.0);

    const Mat6 j = vector_field_jacobian(f, x);
    CHECK((j.topLeftCorner<3, 3>()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((j.bottomRightCorner<3, 3>()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((j.topRightCorner<3, 3>() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((j.bottomLeftCorner<3, 3>() - f.hessian(x.head<3>())).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("field is equivariant under every group element") {
    for (Group g : {Group::T, Group::O, Group::I}) {
        auto grp = generate_group(g);
        NBodyField f(grp);
        const Vec6 x = kArcT;
        const Vec6 fx = vector_field(f, x);
        const double e0 = energy(f, x);
        const Eigen::Matrix3d h0 = f.hessian(x.head<3>());
        for (const auto& r : grp.elements) {
            const Mat6 s = phase_symmetry(r);
            const Vec6 sx = s * x;
            CHECK((vector_field(f, sx) - s * fx).norm() <= 1e-10 * (1.0 + fx.norm()));
            CHECK(std::abs(energy(f, sx) - e0) <= 1e-12 * std::abs(e0));
            const Eigen::Matrix3d hr = f.hessian(sx.head<3>());
            CHECK((hr - r * h0 * r.transpose()).cwiseAbs().maxCoeff() <=
                  1e-9 * (1.0 + h0.cwiseAbs().maxCoeff()));
        }
    }
}

TEST_CASE("potential is singular on rotation axes") {
    NBodyField ft(generate_group(Group::T));
    CHECK_THROWS_AS(ft.potential(Eigen::Vector3d(0.9, 0.0, 0.0)), OnAxis);
    CHECK_THROWS_AS(ft.gradient(Eigen::Vector3d(0.5, 0.5, 0.5)), OnAxis);
    NBodyField fo(generate_group(Group::O));
    CHECK_THROWS_AS(vector_field(fo, make_x(0, 0, 0.7, 0, 0, 0)), OnAxis);

    // approach a 3-fold axis: the force blows up like the inverse square of
    // the offset
    const Eigen::Vector3d axis = Eigen::Vector3d(1, 1, 1).normalized();
    const Eigen::Vector3d perp = Eigen::Vector3d(1, -1, 0).normalized();
    double prev = 0.0;
    for (double eps : {1e-2, 1e-4, 1e-7}) {
        const double gn = ft.gradient(axis + eps * perp).norm();
        CHECK(gn > prev);
        prev = gn;
    }
    CHECK(prev > 1e12);
}

TEST_CASE("zero-time flow is the identity") {
    NBodyField f(generate_group(Group::T));
    const Vec6 x1 = flow(f, kArcT, 0.0);
    CHECK((x1 - kArcT).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("flow composes over subintervals and reverses in time") {
    NBodyField f(generate_group(Group::T));
    const Vec6 whole = flow(f, kArcT, 0.8);
    const Vec6 split = flow(f, flow(f, kArcT, 0.3), 0.5);
    CHECK((whole - split).norm() < 1e-10);

    const Vec6 back = flow(f, flow(f, kArcT, 0.5), -0.5);
    CHECK((back - kArcT).norm() < 1e-10);
}

TEST_CASE("flow commutes with the symmetry action") {
    auto grp = generate_group(Group::O);
    NBodyField f(grp);
    const Vec6 ref = flow(f, kArcO, 0.4);
    for (int k : {1, 7, 15}) {
        const Mat6 s = phase_symmetry(grp.elements[k]);
        const Vec6 moved = flow(f, s * kArcO, 0.4);
        CHECK((moved - s * ref).norm() < 1e-9);
    }
}

TEST_CASE("energy is conserved along collision-free arcs") {
    NBodyField ft(generate_group(Group::T));
    double min_sep = 1e9;
    const double e0 = energy(ft, kArcT);
    const Vec6 x1 = flow(ft, kArcT, 0.8, {}, [&](double, const Vec6& x) {
        min_sep = std::min(min_sep, ft.separation(x.head<3>()));
    });
    REQUIRE(min_sep > 0.15);  // the arc is genuinely collision-free
    CHECK(std::abs(energy(ft, x1) - e0) < 1e-9 * std::abs(e0));

    NBodyField fo(generate_group(Group::O));
    const double eo = energy(fo, kArcO);
    const Vec6 y1 = flow(fo, kArcO, 0.5);
    CHECK(std::abs(energy(fo, y1) - eo) < 1e-9 * std::abs(eo));
}

TEST_CASE("energy of a rest state at potential one half") {
    NBodyField f(generate_group(Group::I));
    const Eigen::Vector3d u(0.23, 0.61, 1.02);
    const double lam = 2.0 * f.potential(u);  // U scales as 1/|u|
    Vec6 x = Vec6::Zero();
    x.head<3>() = lam * u;
    CHECK(std::abs(energy(f, x) + 0.5) < 1e-12);
}

TEST_CASE("step observer brackets the trajectory") {
    NBodyField f(generate_group(Group::T));
    std::vector<double> times;
    Vec6 last = Vec6::Zero();
    const Vec6 x1 = flow(f, kArcT, 0.8, {}, [&](double t, const Vec6& x) {
        times.push_back(t);
        last = x;
    });
    REQUIRE(times.size() > 5);
    CHECK(times.front() == 0.0);
    CHECK(std::is_sorted(times.begin(), times.end()));
    CHECK(std::abs(times.back() - 0.8) < 1e-12);
    CHECK((last - x1).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("fundamental matrix solves the variational equation") {
    NBodyField f(generate_group(Group::T));

    const VariationalState v0 = flow_with_variation(f, kArcT, 0.0);
    CHECK((v0.m - Mat6::Identity()).cwiseAbs().maxCoeff() == 0.0);

    const double t = 0.15;
    const VariationalState v = flow_with_variation(f, kArcT, t);
    CHECK((v.x - flow(f, kArcT, t)).norm() < 1e-11);

    const double h = 1e-6;
    for (int j = 0; j < 6; ++j) {
        Vec6 up = kArcT, dn = kArcT;
        up[j] += h;
        dn[j] -= h;
        const Vec6 col = (flow(f, up, t) - flow(f, dn, t)) / (2 * h);
        for (int i = 0; i < 6; ++i)
            CHECK(std::abs(v.m(i, j) - col[i]) <= 1e-5 * std::max(1.0, std::abs(col[i])));
    }

    CHECK(std::abs(v.m.determinant() - 1.0) < 1e-10);
    const Mat6 jj = symplectic_form();
    CHECK((v.m.transpose() * jj * v.m - jj).cwiseAbs().maxCoeff() < 1e-6);

    NBodyField fo(generate_group(Group::O));
    const VariationalState w = flow_with_variation(fo, kArcO, 0.12);
    for (int j = 0; j < 6; ++j) {
        Vec6 up = kArcO, dn = kArcO;
        up[j] += h;
        dn[j] -= h;
        const Vec6 col = (flow(fo, up, 0.12) - flow(fo, dn, 0.12)) / (2 * h);
        for (int i = 0; i < 6; ++i)
            CHECK(std::abs(w.m(i, j) - col[i]) <= 1e-5 * std::max(1.0, std::abs(col[i])));
    }
    CHECK((w.m.transpose() * jj * w.m - jj).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("collision course raises step size underflow") {
    NBodyField f(generate_group(Group::T));
    const Vec6 c0 = make_x(0.8, 0.002, 0.0, 0.0, -0.05, 0.0);
    bool threw = false;
    try {
        flow(f, c0, 1.0);
    } catch (const StepSizeUnderflow& e) {
        threw = true;
        CHECK(e.t < 0.01);
    }
    CHECK(threw);
}

TEST_CASE("integrator settings are validated") {
    NBodyField f(generate_group(Group::T));
    IntegratorSettings bad;
    bad.rel_tol = 0.0;
    CHECK_THROWS_AS(flow(f, kArcT, 0.1, bad), std::invalid_argument);
    IntegratorSettings order;
    order.order = 7;
    CHECK_THROWS_AS(flow(f, kArcT, 0.1, order), std::invalid_argument);
}
