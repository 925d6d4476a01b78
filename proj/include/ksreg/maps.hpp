#pragma once

#include <array>
#include <string>

#include "ksreg/types.hpp"

namespace ksreg {

// Unit pure quaternion +/-i, +/-j, +/-k inserted in q^* (.) q. The six values
// enumerate the equivalent KS definitions that differ by index permutation.
struct DefiningVector {
    Axis axis = Axis::k;
    int sign = +1;

    Quat quat() const { return Quat::unit(axis, sign); }
    static DefiningVector parse(const std::string& s);  // "+k", "-i", ...
    std::string str() const;
};

// Two published forms of the KS map. `standard` conjugates the quaternion as
// given; `index_swapped` first swaps components 1 and 4 of q and p, which is
// the matrix-era variant. standard collapses chi0 orbits, index_swapped
// collapses chi1 orbits.
enum class KsForm { standard, index_swapped };

// Multiplier inserted in the planar square map x = q * m * q.
enum class LCVariant { plus_one, minus_one, plus_i, minus_i };
LCVariant lc_variant_from_string(const std::string& s);

// Planar Levi-Civita transformation with its cotangent lift. Requires |q| > 0.
PhasePoint4 lc_map(const Vector2d& q2, const Vector2d& p2,
                   LCVariant variant = LCVariant::plus_one);

// Position half of the KS map: q^* (dv) q as a quaternion. The scalar part is
// analytically zero; callers get the full quaternion (tests assert the
// residue stays below 1e-13 |q|^2).
Quat ks_point(const Quat& q, DefiningVector dv = {}, KsForm form = KsForm::standard);

struct KsImage {
    Vector3d x;
    Vector3d y;
    // Scalar part of q^* dv p / (2|q|^2). For dv = +k this equals
    // Xi0 / (2|q|^2); it vanishes exactly on the constraint manifold, and is
    // returned so callers can test membership instead of silently truncating.
    double real_defect = 0;
};

// Full KS transformation x = q^* dv q, y = q^* dv p / (2 q^* q). Requires q != 0.
KsImage ks_map(const PhasePoint8& z, DefiningVector dv = {}, KsForm form = KsForm::standard);

// S^1 actions chi_0, chi_1: the same rotation matrix applied to q and p.
// Composition law chi(a) chi(b) = chi(a+b) holds exactly.
PhasePoint8 chi_action(int which, double alpha, const PhasePoint8& z);
Matrix4d chi_matrix(int which, double alpha);

// Gauge-fixed section of the KS map: returns z with Xi0(z) = 0,
// ks_map(z, +k) = (x, y), and Euler fiber angle psi = gauge_psi.
// Rejects |x| = 0 and the chart-singular axis x1 = x2 = 0.
PhasePoint8 ks_preimage(const Vector3d& x, const Vector3d& y, double gauge_psi = 0.0);

// Analytic gradients of the KS image components as scalar fields on T*H_0,
// ordered (d/dq1..q4, d/dp1..p4). Index 0..2 labels the Cartesian component.
std::array<Vector8d, 3> ks_position_gradients(const PhasePoint8& z, DefiningVector dv = {});
std::array<Vector8d, 3> ks_momentum_gradients(const PhasePoint8& z, DefiningVector dv = {});

}  // namespace ksreg
