#include "ksreg/sampling.hpp"

#include <cmath>
#include <stdexcept>

namespace ksreg {

Manifold manifold_from_string(const std::string& name) {
    if (name == "phase8") return Manifold::phase8;
    if (name == "xi0-zero") return Manifold::xi0_zero;
    if (name == "xi1-zero") return Manifold::xi1_zero;
    if (name == "euler-domain") return Manifold::euler_domain;
    if (name == "andoyer-domain") return Manifold::andoyer_domain;
    throw std::invalid_argument("unknown manifold: " + name);
}

std::string manifold_name(Manifold m) {
    switch (m) {
        case Manifold::phase8: return "phase8";
        case Manifold::xi0_zero: return "xi0-zero";
        case Manifold::xi1_zero: return "xi1-zero";
        case Manifold::euler_domain: return "euler-domain";
        default: return "andoyer-domain";
    }
}

PhasePoint8 sample_phase8(Rng& rng) {
    while (true) {
        Vector8d v;
        for (int i = 0; i < 8; ++i) v[i] = rng.uniform(-2.0, 2.0);
        if (v.head<4>().norm() >= 0.1) return PhasePoint8::from_flat(v);
    }
}

PhasePoint8 sample_xi_zero(Rng& rng, int which) {
    PhasePoint8 z = sample_phase8(rng);
    Vector4d q = z.q.coeffs(), p = z.p.coeffs();
    // xi0 = p1 q4 - p4 q1 + p2 q3 - p3 q2 = c . p with c = ( q4,  q3, -q2, -q1)
    // xi1 = p1 q4 - p4 q1 + p3 q2 - p2 q3 = c . p with c = ( q4, -q3,  q2, -q1)
    Vector4d c;
    if (which == 0)
        c << q[3], q[2], -q[1], -q[0];
    else
        c << q[3], -q[2], q[1], -q[0];
    int pivot;
    c.cwiseAbs().maxCoeff(&pivot);  // |c|_inf >= |q|/2 >= 0.05, always solvable
    double rest = c.dot(p) - c[pivot] * p[pivot];
    p[pivot] = -rest / c[pivot];
    z.p = Quat::from_coeffs(p);
    return z;
}

Vector8d sample_euler_domain(Rng& rng) {
    Vector8d v;
    v[0] = rng.uniform(0.3, 2.0);                        // rho
    v[1] = rng.uniform(0.05, 2 * M_PI - 0.05);           // phi
    v[2] = std::acos(rng.uniform(-0.95, 0.95));          // theta, sin(theta) > 0.05
    v[3] = rng.uniform(0.05, 2 * M_PI - 0.05);           // psi
    for (int i = 4; i < 8; ++i) v[i] = rng.uniform(-2.0, 2.0);
    return v;
}

Vector8d sample_andoyer_domain(Rng& rng) {
    Vector8d v;
    v[0] = rng.uniform(0.3, 2.0);                        // rho
    v[1] = rng.uniform(0.05, 2 * M_PI - 0.05);           // lambda
    v[2] = rng.uniform(0.05, 2 * M_PI - 0.05);           // mu
    v[3] = rng.uniform(0.05, 2 * M_PI - 0.05);           // nu
    v[4] = rng.uniform(-1.5, 1.5);                       // P
    v[6] = rng.uniform(0.3, 2.0);                        // M
    v[5] = rng.uniform(-0.95, 0.95) * v[6];              // Lambda
    v[7] = rng.uniform(-0.95, 0.95) * v[6];              // N
    return v;
}

std::vector<Vector8d> sample_manifold(Manifold m, int count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Vector8d> rows;
    rows.reserve(count);
    for (int i = 0; i < count; ++i) {
        switch (m) {
            case Manifold::phase8: rows.push_back(sample_phase8(rng).flat()); break;
            case Manifold::xi0_zero: rows.push_back(sample_xi_zero(rng, 0).flat()); break;
            case Manifold::xi1_zero: rows.push_back(sample_xi_zero(rng, 1).flat()); break;
            case Manifold::euler_domain: rows.push_back(sample_euler_domain(rng)); break;
            case Manifold::andoyer_domain: rows.push_back(sample_andoyer_domain(rng)); break;
        }
    }
    return rows;
}

std::vector<std::string> manifold_header(Manifold m) {
    switch (m) {
        case Manifold::euler_domain:
            return {"rho", "phi", "theta", "psi", "P", "Phi", "Theta", "Psi"};
        case Manifold::andoyer_domain:
            return {"rho", "lambda", "mu", "nu", "P", "Lambda", "M", "N"};
        default:
            return {"q1", "q2", "q3", "q4", "p1", "p2", "p3", "p4"};
    }
}

}  // namespace ksreg
