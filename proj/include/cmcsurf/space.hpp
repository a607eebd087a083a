#pragma once

#include <array>
#include <complex>
#include <string_view>

namespace cmcsurf {

using Complex = std::complex<double>;

enum class SpaceKind { BergerSphere, Sl2R };

std::string_view to_string(SpaceKind kind);

// Ambient homogeneous space E(kappa, tau). Berger spheres have kappa > 0,
// Sl(2,R) has kappa < 0; tau is the bundle curvature.
struct SpaceParams {
    SpaceKind kind = SpaceKind::BergerSphere;
    double kappa = 4.0;
    double tau = 1.0;

    // 4 tau^2 / kappa, the ratio every frame formula is written in.
    double bundle_ratio() const { return 4.0 * tau * tau / kappa; }
    // kappa - 4 tau^2; never zero for a valid space.
    double deviation() const { return kappa - 4.0 * tau * tau; }
    // +1 on the sphere |z|^2 + |w|^2 = 1, -1 on the quadric |z|^2 - |w|^2 = 1.
    double quadric_sign() const { return kind == SpaceKind::BergerSphere ? 1.0 : -1.0; }
    bool is_berger() const { return kind == SpaceKind::BergerSphere; }

    // Throws DomainError unless tau != 0, kappa != 4 tau^2 and sign(kappa)
    // matches the kind.
    void validate() const;
};

SpaceParams make_space(SpaceKind kind, double kappa, double tau);
SpaceParams berger(double kappa, double tau);
SpaceParams sl2r(double kappa, double tau);

struct AmbientPoint {
    Complex z;
    Complex w;
};

// Tangent vector in ambient C^2 coordinates, attached to a base point.
struct AmbientVector {
    Complex dz;
    Complex dw;
};

AmbientVector operator+(const AmbientVector& a, const AmbientVector& b);
AmbientVector operator-(const AmbientVector& a, const AmbientVector& b);
AmbientVector operator*(double c, const AmbientVector& a);

inline constexpr double kQuadricTolerance = 1e-12;
inline constexpr double kTangencyTolerance = 1e-10;

// |z|^2 + |w|^2 - 1 (Berger) or |z|^2 - |w|^2 - 1 (Sl2R).
double quadric_residual(const AmbientPoint& p, const SpaceParams& sp);

// Validating constructor; throws DomainError if off the quadric.
AmbientPoint make_point(Complex z, Complex w, const SpaceParams& sp);

struct Frame {
    AmbientVector e1;
    AmbientVector e2;
    AmbientVector v;
};

enum FrameIndex : int { kE1 = 0, kE2 = 1, kV = 2 };

// Global frame {E1, E2, V}.  V = (iz, iw) in both spaces.
Frame frame_at(const AmbientPoint& p, const SpaceParams& sp);

// Squared lengths g(E1,E1), g(E2,E2), g(V,V).
std::array<double, 3> frame_norms2(const SpaceParams& sp);

// Normal component of v to the quadric at p (zero for tangent vectors).
double tangency_residual(const AmbientVector& v, const AmbientPoint& p, const SpaceParams& sp);

// Re-projects v onto T_p when within kTangencyTolerance; throws otherwise.
AmbientVector project_tangent(const AmbientVector& v, const AmbientPoint& p, const SpaceParams& sp);

// Coefficients of a tangent vector in the frame {E1, E2, V}.
std::array<double, 3> frame_coefficients(const AmbientVector& v, const AmbientPoint& p,
                                         const SpaceParams& sp);
AmbientVector from_frame(const std::array<double, 3>& c, const AmbientPoint& p, const SpaceParams& sp);

// Left-invariant metric g(u, v) at p.
double metric_eval(const AmbientVector& u, const AmbientVector& v, const AmbientPoint& p,
                   const SpaceParams& sp);

// Same metric written directly in frame coefficients.
double metric_frame(const std::array<double, 3>& a, const std::array<double, 3>& b, const SpaceParams& sp);

// Unit vertical Killing field: (kappa/4tau) V on Berger, -(kappa/4tau) V on Sl2R.
AmbientVector killing_field(const AmbientPoint& p, const SpaceParams& sp);
double killing_coefficient(const SpaceParams& sp);

// A connection coefficient of the form constant + multiple * (4 tau^2 / kappa).
// Kept symbolic so callers can differentiate in (kappa, tau) if needed.
struct Coefficient {
    int constant = 0;
    int ratio_multiple = 0;

    double value(const SpaceParams& sp) const { return constant + ratio_multiple * sp.bundle_ratio(); }
    bool is_zero() const { return constant == 0 && ratio_multiple == 0; }
    friend bool operator==(const Coefficient&, const Coefficient&) = default;
};

using CoefficientTriple = std::array<Coefficient, 3>;

// nabla_{A} B for A, B in {E1, E2, V}, each as a triple of frame coefficients.
class ConnectionTable {
public:
    ConnectionTable(SpaceParams sp, std::array<std::array<CoefficientTriple, 3>, 3> entries)
        : sp_(sp), entries_(entries) {}

    const CoefficientTriple& operator()(int a, int b) const { return entries_[a][b]; }
    std::array<double, 3> evaluate(int a, int b) const;

    // nabla_X Y for constant-coefficient fields X, Y.
    std::array<double, 3> contract(const std::array<double, 3>& x, const std::array<double, 3>& y) const;

    const SpaceParams& space() const { return sp_; }

private:
    SpaceParams sp_;
    std::array<std::array<CoefficientTriple, 3>, 3> entries_;
};

ConnectionTable connection_table(const SpaceParams& sp);

} // namespace cmcsurf
