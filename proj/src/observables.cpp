#include "ksreg/observables.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ksreg/sampling.hpp"

namespace ksreg {

namespace {

// Every bilinear observable here has the shape B(q,p) = p . (L q) for a
// constant 4x4 matrix L, so eval and gradients share one code path.
using Mat4 = Eigen::Matrix4d;

Mat4 left_mult_matrix(Axis a) {
    // Matrix of q -> a*q acting on coefficients (w,x,y,z).
    Mat4 L = Mat4::Zero();
    switch (a) {
        case Axis::i:
            L(0, 1) = -1; L(1, 0) = 1; L(2, 3) = -1; L(3, 2) = 1;
            break;
        case Axis::j:
            L(0, 2) = -1; L(1, 3) = 1; L(2, 0) = 1; L(3, 1) = -1;
            break;
        default:  // k
            L(0, 3) = -1; L(1, 2) = -1; L(2, 1) = 1; L(3, 0) = 1;
            break;
    }
    return L;
}

Mat4 right_mult_matrix(Axis a) {
    // Matrix of q -> q*a acting on coefficients (w,x,y,z).
    Mat4 L = Mat4::Zero();
    switch (a) {
        case Axis::i:
            L(0, 1) = -1; L(1, 0) = 1; L(2, 3) = 1; L(3, 2) = -1;
            break;
        case Axis::j:
            L(0, 2) = -1; L(1, 3) = -1; L(2, 0) = 1; L(3, 1) = 1;
            break;
        default:  // k
            L(0, 3) = -1; L(1, 2) = 1; L(2, 1) = -1; L(3, 0) = 1;
            break;
    }
    return L;
}

// xi0 = p1 q4 - p4 q1 + p2 q3 - p3 q2   (twin-bilinear)
Mat4 xi0_matrix() {
    Mat4 L = Mat4::Zero();
    L(0, 3) = 1; L(1, 2) = 1; L(2, 1) = -1; L(3, 0) = -1;
    return L;
}

// xi1 = p1 q4 - p4 q1 + p3 q2 - p2 q3   (bilinear)
Mat4 xi1_matrix() {
    Mat4 L = Mat4::Zero();
    L(0, 3) = 1; L(1, 2) = -1; L(2, 1) = 1; L(3, 0) = -1;
    return L;
}

struct BilinearForms {
    Mat4 rho[3], sigma[3], xi0, xi1;
};

const BilinearForms& forms(Convention conv) {
    static const BilinearForms printed = [] {
        BilinearForms f;
        // Published component formulas:
        // rho1 = p2q1 - p1q2 + p4q3 - p3q4  == p.(i q)
        // rho2 = p3q1 - p1q3 + p4q2 - p2q4  == p.(q j)
        // rho3 = xi1
        // sigma1 = p1q2 - p2q1 + p3q4 - p4q3 == -p.(i q)
        // sigma2 = p1q3 - p3q1 + p4q2 - p2q4 == -p.(j q)
        // sigma3 = xi0
        f.rho[0] = left_mult_matrix(Axis::i);
        f.rho[1] = right_mult_matrix(Axis::j);
        f.rho[2] = xi1_matrix();
        f.sigma[0] = -left_mult_matrix(Axis::i);
        f.sigma[1] = -left_mult_matrix(Axis::j);
        f.sigma[2] = xi0_matrix();
        f.xi0 = xi0_matrix();
        f.xi1 = xi1_matrix();
        return f;
    }();
    static const BilinearForms corrected = [] {
        BilinearForms f;
        for (int a = 0; a < 3; ++a) {
            f.rho[a] = left_mult_matrix(static_cast<Axis>(a));
            f.sigma[a] = right_mult_matrix(static_cast<Axis>(a));
        }
        f.xi0 = xi0_matrix();
        f.xi1 = xi1_matrix();
        return f;
    }();
    return conv == Convention::printed ? printed : corrected;
}

const Mat4* bilinear_matrix(ObservableId id, Convention conv) {
    const BilinearForms& f = forms(conv);
    switch (id) {
        case ObservableId::rho1: return &f.rho[0];
        case ObservableId::rho2: return &f.rho[1];
        case ObservableId::rho3: return &f.rho[2];
        case ObservableId::sigma1: return &f.sigma[0];
        case ObservableId::sigma2: return &f.sigma[1];
        case ObservableId::sigma3: return &f.sigma[2];
        case ObservableId::xi0: return &f.xi0;
        case ObservableId::xi1: return &f.xi1;
        default: return nullptr;
    }
}

void require_finite(const PhasePoint8& z) {
    const Vector8d v = z.flat();
    if (!v.allFinite()) throw std::invalid_argument("observables: non-finite phase point");
}

}  // namespace

const std::array<ObservableId, kObservableBasisSize>& observable_basis() {
    static const std::array<ObservableId, kObservableBasisSize> basis = {
        ObservableId::tau1, ObservableId::tau2, ObservableId::tau3,
        ObservableId::rho1, ObservableId::rho2, ObservableId::rho3,
        ObservableId::sigma1, ObservableId::sigma2, ObservableId::sigma3,
        ObservableId::xi0, ObservableId::xi1};
    return basis;
}

std::string observable_name(ObservableId id) {
    switch (id) {
        case ObservableId::tau1: return "tau1";
        case ObservableId::tau2: return "tau2";
        case ObservableId::tau3: return "tau3";
        case ObservableId::rho1: return "rho1";
        case ObservableId::rho2: return "rho2";
        case ObservableId::rho3: return "rho3";
        case ObservableId::sigma1: return "sigma1";
        case ObservableId::sigma2: return "sigma2";
        case ObservableId::sigma3: return "sigma3";
        case ObservableId::xi0: return "xi0";
        case ObservableId::xi1: return "xi1";
        case ObservableId::centralizerM: return "M";
    }
    return "?";
}

double eval(ObservableId id, const PhasePoint8& z, Convention conv) {
    require_finite(z);
    const Vector4d q = z.q.coeffs(), p = z.p.coeffs();
    switch (id) {
        case ObservableId::tau1: return q.dot(p);
        case ObservableId::tau2: return 0.5 * (q.squaredNorm() - p.squaredNorm());
        case ObservableId::tau3: return 0.5 * (q.squaredNorm() + p.squaredNorm());
        case ObservableId::centralizerM: {
            const double radicand =
                q.squaredNorm() * p.squaredNorm() - q.dot(p) * q.dot(p);
            // Cauchy-Schwarz keeps the radicand >= 0; clamp rounding residue.
            return 0.5 * std::sqrt(std::max(0.0, radicand));
        }
        default: {
            const Mat4* L = bilinear_matrix(id, conv);
            return p.dot((*L) * q);
        }
    }
}

Vector8d gradient(ObservableId id, const PhasePoint8& z, Convention conv) {
    require_finite(z);
    const Vector4d q = z.q.coeffs(), p = z.p.coeffs();
    Vector8d g;
    switch (id) {
        case ObservableId::tau1:
            g << p, q;
            return g;
        case ObservableId::tau2:
            g << q, -p;
            return g;
        case ObservableId::tau3:
            g << q, p;
            return g;
        case ObservableId::centralizerM: {
            const double m = eval(ObservableId::centralizerM, z, conv);
            if (m <= 0)
                throw std::domain_error("centralizerM gradient undefined at M = 0");
            const double t1 = q.dot(p);
            Vector4d gq = (p.squaredNorm() * q - t1 * p) / (4.0 * m);
            Vector4d gp = (q.squaredNorm() * p - t1 * q) / (4.0 * m);
            g << gq, gp;
            return g;
        }
        default: {
            const Mat4* L = bilinear_matrix(id, conv);
            g << L->transpose() * p, (*L) * q;
            return g;
        }
    }
}

Vector8d numerical_gradient(const ScalarField& f, const PhasePoint8& z) {
    require_finite(z);
    const double cbrt_eps = std::cbrt(std::numeric_limits<double>::epsilon());
    Vector8d v = z.flat(), g;
    for (int i = 0; i < 8; ++i) {
        const double h = cbrt_eps * std::max(1.0, std::abs(v[i]));
        Vector8d vp = v, vm = v;
        vp[i] += h;
        vm[i] -= h;
        g[i] = (f(PhasePoint8::from_flat(vp)) - f(PhasePoint8::from_flat(vm))) / (2 * h);
    }
    return g;
}

double poisson_bracket(const Vector8d& gf, const Vector8d& gg) {
    return gf.head<4>().dot(gg.tail<4>()) - gf.tail<4>().dot(gg.head<4>());
}

double poisson_bracket(ObservableId f, ObservableId g, const PhasePoint8& z, Convention conv) {
    return poisson_bracket(gradient(f, z, conv), gradient(g, z, conv));
}

double poisson_bracket(const ScalarField& f, const ScalarField& g, const PhasePoint8& z) {
    return poisson_bracket(numerical_gradient(f, z), numerical_gradient(g, z));
}

const ClosureFit& BracketTable::fit(ObservableId f, ObservableId g) const {
    for (const ClosureFit& c : fits)
        if ((c.f == f && c.g == g) || (c.f == g && c.g == f)) return c;
    throw std::invalid_argument("bracket table: no fit for requested pair");
}

BracketTable bracket_table(const PhasePoint8& z, Convention conv, unsigned seed, int aux_points) {
    require_finite(z);
    const auto& basis = observable_basis();
    const int n = kObservableBasisSize;

    BracketTable table;
    table.convention = conv;
    table.sample_point = z.flat();

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            table.entries(i, j) = poisson_bracket(basis[i], basis[j], z, conv);
    table.antisymmetry_defect =
        (table.entries + table.entries.transpose()).cwiseAbs().maxCoeff();

    for (int k = 0; k < n; ++k) {
        const double m = eval(ObservableId::centralizerM, z, conv);
        table.centralizer_brackets[k] =
            m > 0 ? poisson_bracket(ObservableId::centralizerM, basis[k], z, conv)
                  : std::numeric_limits<double>::quiet_NaN();
    }

    // Least-squares closure: express each bracket function as a linear
    // combination of the basis, sampled over reproducible auxiliary points.
    Rng rng(seed);
    std::vector<PhasePoint8> pts(aux_points);
    for (auto& pt : pts) {
        Vector8d v;
        for (int i = 0; i < 8; ++i) v[i] = rng.uniform(-2.0, 2.0);
        pt = PhasePoint8::from_flat(v);
    }
    Eigen::MatrixXd A(aux_points, n);
    for (int r = 0; r < aux_points; ++r)
        for (int c = 0; c < n; ++c) A(r, c) = eval(basis[c], pts[r], conv);
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);

    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            Eigen::VectorXd b(aux_points);
            for (int r = 0; r < aux_points; ++r)
                b[r] = poisson_bracket(basis[i], basis[j], pts[r], conv);
            ClosureFit fit;
            fit.f = basis[i];
            fit.g = basis[j];
            fit.bracket_at_sample = table.entries(i, j);
            fit.coefficients = qr.solve(b);
            fit.residual = std::sqrt((A * fit.coefficients - b).squaredNorm() / aux_points);
            table.fits.push_back(fit);
        }
    }
    return table;
}

std::string BracketTable::to_json() const {
    std::ostringstream os;
    os.precision(17);
    os << "{\"format_version\":1,\"convention\":\""
       << (convention == Convention::printed ? "printed" : "corrected") << "\",\"basis\":[";
    const auto& basis = observable_basis();
    for (int i = 0; i < kObservableBasisSize; ++i)
        os << (i ? "," : "") << '"' << observable_name(basis[i]) << '"';
    os << "],\"sample_point\":[";
    for (int i = 0; i < 8; ++i) os << (i ? "," : "") << sample_point[i];
    os << "],\"entries\":[";
    for (int i = 0; i < kObservableBasisSize; ++i) {
        os << (i ? ",[" : "[");
        for (int j = 0; j < kObservableBasisSize; ++j)
            os << (j ? "," : "") << entries(i, j);
        os << "]";
    }
    os << "],\"antisymmetry_defect\":" << antisymmetry_defect << ",\"centralizer_brackets\":[";
    for (int i = 0; i < kObservableBasisSize; ++i)
        os << (i ? "," : "") << centralizer_brackets[i];
    os << "],\"closure_fits\":[";
    bool first = true;
    for (const ClosureFit& f : fits) {
        os << (first ? "{" : ",{") << "\"pair\":[\"" << observable_name(f.f) << "\",\""
           << observable_name(f.g) << "\"],\"coefficients\":[";
        for (int i = 0; i < kObservableBasisSize; ++i)
            os << (i ? "," : "") << f.coefficients[i];
        os << "],\"residual\":" << f.residual << "}";
        first = false;
    }
    os << "]}";
    return os.str();
}

}  // namespace ksreg
