#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ksreg/types.hpp"

namespace ksreg {

// Seeded generator with a platform-independent uniform double mapping, so any
// fixed seed reproduces byte-identical sample streams everywhere.
class Rng {
   public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform01() { return (engine_() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform01(); }
    std::uint64_t raw() { return engine_(); }

   private:
    std::mt19937_64 engine_;
};

enum class Manifold { phase8, xi0_zero, xi1_zero, euler_domain, andoyer_domain };

Manifold manifold_from_string(const std::string& name);  // throws on unknown name
std::string manifold_name(Manifold m);

// Generic phase point: coordinates uniform in [-2,2]^8, rejecting |q| < 0.1.
PhasePoint8 sample_phase8(Rng& rng);

// Phase point with the bilinear constraint solved exactly: one momentum
// component is pivoted on the largest |q| coefficient, so |Xi| stays at
// rounding level.
PhasePoint8 sample_xi_zero(Rng& rng, int which);  // which in {0, 1}

// Chart samples staying clear of the singular sets (sin theta > 0.05, rho
// away from 0, |Lambda|,|N| strictly inside [-M, M]).
Vector8d sample_euler_domain(Rng& rng);    // (rho,phi,theta,psi,P,Phi,Theta,Psi)
Vector8d sample_andoyer_domain(Rng& rng);  // (rho,lambda,mu,nu,P,Lambda,M,N)

// Row layout for CSV export of `count` samples of the given manifold.
std::vector<Vector8d> sample_manifold(Manifold m, int count, std::uint64_t seed);
std::vector<std::string> manifold_header(Manifold m);

}  // namespace ksreg
