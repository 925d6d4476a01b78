#include <doctest.h>

#include <cmath>

#include "ksreg/maps.hpp"
#include "ksreg/observables.hpp"
#include "ksreg/sampling.hpp"

using namespace ksreg;

TEST_CASE("levi-civita examples") {
    const PhasePoint4 id = lc_map({1, 0}, {0, 0});
    CHECK(id.x[0] == doctest::Approx(1.0));
    CHECK(id.x[1] == doctest::Approx(0.0));
    CHECK(id.y.norm() == doctest::Approx(0.0));

    const PhasePoint4 pt = lc_map({1, 2}, {2, 0});
    CHECK(pt.x[0] == doctest::Approx(-3.0));
    CHECK(pt.x[1] == doctest::Approx(4.0));
    CHECK(pt.y[0] == doctest::Approx(0.2));
    CHECK(pt.y[1] == doctest::Approx(0.4));

    CHECK_THROWS_AS(lc_map({0, 0}, {1, 1}), std::domain_error);
}

TEST_CASE("levi-civita variants square the modulus") {
    Rng rng(21);
    for (int t = 0; t < 200; ++t) {
        const Vector2d q{rng.uniform(-2, 2), rng.uniform(-2, 2)};
        if (q.norm() < 1e-3) continue;
        const Vector2d p{rng.uniform(-2, 2), rng.uniform(-2, 2)};
        for (LCVariant v : {LCVariant::plus_one, LCVariant::minus_one, LCVariant::plus_i,
                            LCVariant::minus_i}) {
            const PhasePoint4 pt = lc_map(q, p, v);
            CHECK(pt.x.norm() ==
                  doctest::Approx(q.squaredNorm()).epsilon(1e-13));
        }
    }
    // Printed component patterns of the alternatives.
    const Vector2d q{0.8, -0.5}, p{0.0, 0.0};
    const double q1 = q[0], q2 = q[1];
    CHECK(lc_map(q, p, LCVariant::minus_one).x[0] == doctest::Approx(q2 * q2 - q1 * q1));
    CHECK(lc_map(q, p, LCVariant::plus_i).x[0] == doctest::Approx(-2 * q1 * q2));
    CHECK(lc_map(q, p, LCVariant::plus_i).x[1] == doctest::Approx(q1 * q1 - q2 * q2));
    CHECK(lc_map(q, p, LCVariant::minus_i).x[0] == doctest::Approx(2 * q1 * q2));
}

TEST_CASE("ks_point examples and hopf norm") {
    const Quat e1{1, 0, 0, 0};
    CHECK((ks_point(e1).coeffs() - Vector4d(0, 0, 0, 1)).cwiseAbs().maxCoeff() < 1e-15);

    const Quat q{1, 1, 1, 1};
    const Quat img = ks_point(q);
    CHECK((img.coeffs() - Vector4d(0, 0, 4, 0)).cwiseAbs().maxCoeff() < 1e-14);

    Rng rng(22);
    for (int t = 0; t < 200; ++t) {
        Vector4d v;
        for (int i = 0; i < 4; ++i) v[i] = rng.uniform(-2, 2);
        if (v.norm() < 0.1) continue;
        const Quat qq = Quat::from_coeffs(v);
        for (int sign : {+1, -1})
            for (Axis axis : {Axis::i, Axis::j, Axis::k}) {
                const Quat im = ks_point(qq, {axis, sign});
                CHECK(std::abs(im.w) < 1e-13 * norm_squared(qq));
                CHECK(norm(im) == doctest::Approx(norm_squared(qq)).epsilon(1e-12));
            }
    }
    CHECK_THROWS_AS(ks_point(Quat::zero()), std::domain_error);
}

TEST_CASE("ks_map componentwise examples") {
    const KsImage a = ks_map({Quat{1, 0, 0, 0}, Quat{0, 0, 2, 0}});
    CHECK((a.x - Vector3d(0, 0, 1)).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((a.y - Vector3d(-1, 0, 0)).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(a.real_defect == doctest::Approx(0.0));

    const KsImage b = ks_map({Quat{1, 0, 0, 0}, Quat{0, 0, 0, 2}});
    CHECK(b.real_defect == doctest::Approx(-1.0));

    const KsImage c = ks_map({Quat{0.3, -1.1, 0.5, 2.0}, Quat::zero()});
    CHECK(c.y.norm() == doctest::Approx(0.0));
    CHECK(c.real_defect == doctest::Approx(0.0));

    CHECK_THROWS_AS(ks_map({Quat::zero(), Quat{1, 0, 0, 0}}), std::domain_error);
}

TEST_CASE("ks real defect equals Xi0 over 2|q|^2") {
    Rng rng(23);
    for (int t = 0; t < 200; ++t) {
        const PhasePoint8 z = sample_phase8(rng);
        const KsImage img = ks_map(z);
        CHECK(img.real_defect ==
              doctest::Approx(eval(ObservableId::xi0, z) / (2 * norm_squared(z.q)))
                  .epsilon(1e-12));
    }
}

TEST_CASE("chi actions") {
    const PhasePoint8 z{Quat{1, 0, 0, 0}, Quat::zero()};
    const PhasePoint8 rotated = chi_action(0, M_PI_2, z);
    CHECK((rotated.q.coeffs() - Vector4d(0, 0, 0, 1)).cwiseAbs().maxCoeff() < 1e-15);

    Rng rng(24);
    for (int t = 0; t < 100; ++t) {
        const PhasePoint8 w = sample_phase8(rng);
        const double a = rng.uniform(-3, 3), b = rng.uniform(-3, 3);
        for (int which : {0, 1}) {
            CHECK((chi_action(which, 0.0, w).flat() - w.flat()).cwiseAbs().maxCoeff() <
                  1e-15);
            const Vector8d lhs = chi_action(which, a, chi_action(which, b, w)).flat();
            const Vector8d rhs = chi_action(which, a + b, w).flat();
            CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-13 * std::max(1.0, rhs.norm()));
        }
        // KS image is constant along chi0 orbits.
        const KsImage base = ks_map(w), moved = ks_map(chi_action(0, a, w));
        CHECK((base.x - moved.x).cwiseAbs().maxCoeff() <
              1e-12 * std::max(1.0, base.x.norm()));
    }
    CHECK_THROWS_AS(chi_action(2, 0.1, z), std::invalid_argument);
}

TEST_CASE("index-swapped form collapses chi1 orbits") {
    Rng rng(25);
    for (int t = 0; t < 100; ++t) {
        const PhasePoint8 z = sample_phase8(rng);
        const double a = rng.uniform(0, 2 * M_PI);
        const KsImage base = ks_map(z, {}, KsForm::index_swapped);
        const KsImage moved = ks_map(chi_action(1, a, z), {}, KsForm::index_swapped);
        CHECK((base.x - moved.x).cwiseAbs().maxCoeff() <
              1e-12 * std::max(1.0, base.x.norm()));
        CHECK((base.y - moved.y).cwiseAbs().maxCoeff() <
              1e-12 * std::max(1.0, base.y.norm()));
    }
}

TEST_CASE("ks_preimage round trip, constraint, and gauge") {
    Rng rng(26);
    for (int t = 0; t < 200; ++t) {
        Vector3d x{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
        if (x.head<2>().norm() < 0.1 || x.norm() < 0.1) continue;
        const Vector3d y{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
        const double psi = rng.uniform(0.1, 2 * M_PI - 0.1);
        const PhasePoint8 z = ks_preimage(x, y, psi);
        CHECK(std::abs(eval(ObservableId::xi0, z)) < 1e-12 * std::max(1.0, z.flat().norm()));
        const KsImage img = ks_map(z);
        const double sc = std::max(1.0, std::max(x.norm(), y.norm()));
        CHECK((img.x - x).cwiseAbs().maxCoeff() < 1e-10 * sc);
        CHECK((img.y - y).cwiseAbs().maxCoeff() < 1e-10 * sc);
    }
}

TEST_CASE("preimages at different gauges lie on one chi0 orbit") {
    const Vector3d x{0.7, -1.1, 0.4}, y{0.2, 0.5, -0.3};
    const double psi1 = 0.9, psi2 = 2.1;
    const PhasePoint8 z1 = ks_preimage(x, y, psi1);
    const PhasePoint8 z2 = ks_preimage(x, y, psi2);
    // A psi shift of delta moves the point by chi0(-delta/2).
    const PhasePoint8 moved = chi_action(0, -(psi2 - psi1) / 2, z1);
    CHECK((moved.flat() - z2.flat()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("ks_preimage domain") {
    CHECK_THROWS_AS(ks_preimage({0, 0, 0}, {1, 0, 0}, 0), std::domain_error);
    CHECK_THROWS_AS(ks_preimage({0, 0, 1}, {1, 0, 0}, 0), std::domain_error);
}

TEST_CASE("ks gradients match central differences") {
    Rng rng(27);
    for (int t = 0; t < 20; ++t) {
        PhasePoint8 z = sample_phase8(rng);
        if (norm(z.q) < 0.5) continue;
        const auto gx = ks_position_gradients(z);
        const auto gy = ks_momentum_gradients(z);
        for (int c = 0; c < 3; ++c) {
            const ScalarField fx = [c](const PhasePoint8& p) { return ks_map(p).x[c]; };
            const ScalarField fy = [c](const PhasePoint8& p) { return ks_map(p).y[c]; };
            CHECK((gx[c] - numerical_gradient(fx, z)).cwiseAbs().maxCoeff() < 1e-7);
            CHECK((gy[c] - numerical_gradient(fy, z)).cwiseAbs().maxCoeff() < 1e-6);
        }
    }
}

TEST_CASE("defining vector parsing") {
    CHECK(DefiningVector::parse("+k").axis == Axis::k);
    CHECK(DefiningVector::parse("-i").sign == -1);
    CHECK(DefiningVector::parse("-j").str() == "-j");
    CHECK_THROWS_AS(DefiningVector::parse("k"), std::invalid_argument);
    CHECK_THROWS_AS(DefiningVector::parse("+x"), std::invalid_argument);
    CHECK_THROWS_AS(lc_variant_from_string("2"), std::invalid_argument);
}

TEST_CASE("ks components match their explicit quadratic forms") {
    Rng rng(28);
    for (int t = 0; t < 200; ++t) {
        const PhasePoint8 z = sample_phase8(rng);
        const double q1 = z.q.w, q2 = z.q.x, q3 = z.q.y, q4 = z.q.z;
        const double p1 = z.p.w, p2 = z.p.x, p3 = z.p.y, p4 = z.p.z;
        const double r2 = norm_squared(z.q);

        const Quat pos = ks_point(z.q);
        CHECK(pos.x == doctest::Approx(2 * (q2 * q4 - q1 * q3)).epsilon(1e-13));
        CHECK(pos.y == doctest::Approx(2 * (q1 * q2 + q3 * q4)).epsilon(1e-13));
        CHECK(pos.z ==
              doctest::Approx(q1 * q1 - q2 * q2 - q3 * q3 + q4 * q4).epsilon(1e-13));

        const KsImage img = ks_map(z);
        CHECK(img.real_defect * 2 * r2 ==
              doctest::Approx(p1 * q4 - p4 * q1 + p2 * q3 - p3 * q2).epsilon(1e-12));
        CHECK(img.y[0] * 2 * r2 ==
              doctest::Approx(p4 * q2 + p2 * q4 - p1 * q3 - p3 * q1).epsilon(1e-12));
        CHECK(img.y[1] * 2 * r2 ==
              doctest::Approx(p2 * q1 + p1 * q2 + p4 * q3 + p3 * q4).epsilon(1e-12));
        CHECK(img.y[2] * 2 * r2 ==
              doctest::Approx(p1 * q1 - p2 * q2 - p3 * q3 + p4 * q4).epsilon(1e-12));
    }
}

TEST_CASE("printed rotation matrices, entry by entry") {
    const double a = 0.3, c = std::cos(a), s = std::sin(a);
    Matrix4d r0;
    r0 << c, 0, 0, -s,
          0, c, -s, 0,
          0, s, c, 0,
          s, 0, 0, c;
    CHECK((chi_matrix(0, a) - r0).cwiseAbs().maxCoeff() == 0.0);
    Matrix4d r1;
    r1 << c, 0, 0, -s,
          0, c, s, 0,
          0, -s, c, 0,
          s, 0, 0, c;
    CHECK((chi_matrix(1, a) - r1).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("each defining vector pairs with one left-momentum component") {
    // The y-quaternion's scalar part for axis a is -rho_a (corrected, the
    // left-multiplication momentum) over 2|q|^2, so every KS variant carries
    // its own bilinear constraint.
    Rng rng(29);
    const ObservableId rho[3] = {ObservableId::rho1, ObservableId::rho2, ObservableId::rho3};
    for (int t = 0; t < 100; ++t) {
        const PhasePoint8 z = sample_phase8(rng);
        const double r2 = norm_squared(z.q);
        for (int sign : {+1, -1})
            for (int a = 0; a < 3; ++a) {
                const KsImage img = ks_map(z, {static_cast<Axis>(a), sign});
                const double expected =
                    -sign * eval(rho[a], z, Convention::corrected) / (2 * r2);
                CHECK(img.real_defect == doctest::Approx(expected).epsilon(1e-12));
            }
    }
}

TEST_CASE("fiber collapse holds per axis for the matching left rotation") {
    Rng rng(30);
    for (int t = 0; t < 100; ++t) {
        const PhasePoint8 z = sample_phase8(rng);
        const double alpha = rng.uniform(0, 2 * M_PI);
        for (Axis axis : {Axis::i, Axis::j, Axis::k}) {
            const Quat rot = rotor(axis, alpha);
            const PhasePoint8 moved{mul(rot, z.q), mul(rot, z.p)};
            const KsImage base = ks_map(z, {axis, +1});
            const KsImage after = ks_map(moved, {axis, +1});
            const double sc = std::max(1.0, std::max(base.x.norm(), base.y.norm()));
            CHECK((base.x - after.x).cwiseAbs().maxCoeff() < 1e-12 * sc);
            CHECK((base.y - after.y).cwiseAbs().maxCoeff() < 1e-12 * sc);
        }
    }
}

TEST_CASE("levi-civita lift components match their closed forms") {
    Rng rng(31);
    for (int t = 0; t < 200; ++t) {
        const Vector2d q{rng.uniform(-2, 2), rng.uniform(-2, 2)};
        if (q.norm() < 0.05) continue;
        const Vector2d p{rng.uniform(-2, 2), rng.uniform(-2, 2)};
        const double q1 = q[0], q2 = q[1], p1 = p[0], p2 = p[1];
        const double d = 2 * (q1 * q1 + q2 * q2);
        const PhasePoint4 pt = lc_map(q, p);
        CHECK(pt.x[0] == doctest::Approx(q1 * q1 - q2 * q2).epsilon(1e-13));
        CHECK(pt.x[1] == doctest::Approx(2 * q1 * q2).epsilon(1e-13));
        CHECK(pt.y[0] == doctest::Approx((q1 * p1 - q2 * p2) / d).epsilon(1e-12));
        CHECK(pt.y[1] == doctest::Approx((q1 * p2 + q2 * p1) / d).epsilon(1e-12));
    }
}

TEST_CASE("levi-civita lift is symplectic (finite-difference route)") {
    Rng rng(32);
    const Matrix4d omega = symplectic_matrix<2>();
    double worst = 0;
    for (int t = 0; t < 50; ++t) {
        Vector4d at;
        for (int i = 0; i < 4; ++i) at[i] = rng.uniform(-2, 2);
        if (at.head<2>().norm() < 0.5) continue;
        Matrix4d jac;
        for (int j = 0; j < 4; ++j) {
            const double h = 5e-6 * std::max(1.0, std::abs(at[j]));
            Vector4d hp = at, hm = at;
            hp[j] += h;
            hm[j] -= h;
            const PhasePoint4 fp = lc_map(hp.head<2>(), hp.tail<2>());
            const PhasePoint4 fm = lc_map(hm.head<2>(), hm.tail<2>());
            jac.col(j) = (fp.flat() - fm.flat()) / (2 * h);
        }
        worst = std::max(worst,
                         (jac.transpose() * omega * jac - omega).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-9);
}
