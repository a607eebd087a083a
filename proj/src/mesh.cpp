#include "cmcsurf/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <map>
#include <numbers>
#include <numeric>

#include "cmcsurf/closed_forms.hpp"
#include "cmcsurf/errors.hpp"

namespace cmcsurf {

namespace {

constexpr double kPi = std::numbers::pi;
using Vec3 = std::array<double, 3>;

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec3 cross3(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

void push(Mesh& m, const AmbientPoint& p, const SpaceParams& sp) {
    m.r4.push_back(p);
    m.v.push_back(chart_point(p, sp));
}

// Quad grid of rings x segments, periodic in the segment index.
void stitch_rings(Mesh& m, int first, int rings, int segments, bool wrap_rings) {
    const int last = wrap_rings ? rings : rings - 1;
    for (int i = 0; i < last; ++i) {
        const int a = first + i * segments;
        const int b = first + ((i + 1) % rings) * segments;
        for (int j = 0; j < segments; ++j) {
            const int j1 = (j + 1) % segments;
            m.f.push_back({a + j, b + j, b + j1});
            m.f.push_back({a + j, b + j1, a + j1});
        }
    }
}

void require_resolution(int rings, int segments) {
    if (rings < 3 || segments < 3) throw DomainError("meshes need at least 3 rings and 3 segments");
}

// Moller-Trumbore segment test; true on a proper crossing of the interior.
bool segment_hits(const Vec3& p, const Vec3& q, const Vec3& a, const Vec3& b, const Vec3& c) {
    constexpr double eps = 1e-12;
    const Vec3 d = sub(q, p);
    const Vec3 e1 = sub(b, a), e2 = sub(c, a);
    const Vec3 h = cross3(d, e2);
    const double det = dot3(e1, h);
    if (std::abs(det) < eps * (1.0 + dot3(d, d))) return false;
    const double inv = 1.0 / det;
    const Vec3 s = sub(p, a);
    const double u = inv * dot3(s, h);
    if (u <= eps || u >= 1.0 - eps) return false;
    const Vec3 qv = cross3(s, e1);
    const double v = inv * dot3(d, qv);
    if (v <= eps || u + v >= 1.0 - eps) return false;
    const double t = inv * dot3(e2, qv);
    return t > eps && t < 1.0 - eps;
}

} // namespace

std::array<double, 3> chart_point(const AmbientPoint& p, const SpaceParams& sp) {
    if (sp.is_berger()) {
        const double den = 1.0 + p.z.real();
        if (den < 1e-9) throw GeometryError("surface passes through the projection pole (-1, 0)");
        return {p.z.imag() / den, p.w.real() / den, p.w.imag() / den};
    }
    const double r = std::abs(p.z);
    const double th = std::arg(p.z);
    const Complex q = p.w / r;  // inside the unit disc
    const double R = 2.0 + q.real();
    return {R * std::cos(th), R * std::sin(th), q.imag()};
}

Mesh sphere_mesh(double H, const SpaceParams& sp, int rings, int segments) {
    require_resolution(rings, segments);
    const SphereProfile prof = sphere_profile(H, sp);
    const double a = prof.a;
    Mesh m;
    // Axis points at x = -a and x = +a.
    push(m, {std::exp(Complex{0.0, prof.y0}), 0.0}, sp);
    for (int i = 1; i < rings; ++i) {
        const double x = -a + 2.0 * a * i / rings;
        for (int j = 0; j < segments; ++j) {
            const double t = -kPi + 2.0 * kPi * j / segments;
            push(m, sphere_immersion(x, t, H, sp), sp);
        }
    }
    push(m, {std::exp(Complex{0.0, -prof.y0}), 0.0}, sp);
    const int n_ring = rings - 1;
    const int first = 1;
    const int south = static_cast<int>(m.v.size()) - 1;
    for (int j = 0; j < segments; ++j) {
        const int j1 = (j + 1) % segments;
        m.f.push_back({0, first + j1, first + j});
    }
    stitch_rings(m, first, n_ring, segments, false);
    const int lastring = first + (n_ring - 1) * segments;
    for (int j = 0; j < segments; ++j) {
        const int j1 = (j + 1) % segments;
        m.f.push_back({south, lastring + j, lastring + j1});
    }
    return m;
}

Mesh great_sphere_mesh(const SpaceParams& sp, int rings, int segments) {
    require_resolution(rings, segments);
    sp.validate();
    if (!sp.is_berger()) throw DomainError("the great sphere lives in Berger spheres");
    Mesh m;
    push(m, {1.0, 0.0}, sp);
    for (int i = 1; i < rings; ++i) {
        const double u = kPi * i / rings;
        for (int j = 0; j < segments; ++j)
            push(m, {std::cos(u), std::sin(u) * std::exp(Complex{0.0, 2.0 * kPi * j / segments})}, sp);
    }
    push(m, {-1.0, 0.0}, sp);
    const int south = static_cast<int>(m.v.size()) - 1;
    for (int j = 0; j < segments; ++j) m.f.push_back({0, 1 + (j + 1) % segments, 1 + j});
    stitch_rings(m, 1, rings - 1, segments, false);
    const int lastring = 1 + (rings - 2) * segments;
    for (int j = 0; j < segments; ++j) m.f.push_back({south, lastring + j, lastring + (j + 1) % segments});
    return m;
}

Mesh torus_mesh(double r, const SpaceParams& sp, int rings, int segments) {
    require_resolution(rings, segments);
    sp.validate();
    if (!sp.is_berger()) throw DomainError("Clifford tori are available for Berger spheres only");
    if (!(r > 0.0 && r < 1.0)) throw DomainError(fmt::format("torus radius must lie in (0, 1), got {}", r));
    const double rr = std::sqrt(1.0 - r * r);
    Mesh m;
    for (int i = 0; i < rings; ++i) {
        const double u = 2.0 * kPi * i / rings;
        for (int j = 0; j < segments; ++j) {
            const double v = 2.0 * kPi * j / segments;
            push(m, {r * std::exp(Complex{0.0, u}), rr * std::exp(Complex{0.0, v})}, sp);
        }
    }
    stitch_rings(m, 0, rings, segments, true);
    return m;
}

Mesh profile_mesh(const ProfileCurve& curve, bool closed, int rings, int segments) {
    require_resolution(rings, segments);
    const auto& smp = curve.samples;
    if (smp.size() < 2) throw DomainError("profile has fewer than two samples");
    const SpaceParams& sp = curve.sp;
    const double s0 = smp.front().s, s1 = smp.back().s;
    const int n = closed ? rings : rings + 1;
    Mesh m;
    std::size_t k = 0;
    for (int i = 0; i < n; ++i) {
        const double s = s0 + (s1 - s0) * i / rings;
        while (k + 1 < smp.size() && smp[k + 1].s <= s) ++k;
        // Linear interpolation in (x, y) between neighbouring samples.
        const ProfileState& A = smp[k];
        const ProfileState& B = smp[std::min(k + 1, smp.size() - 1)];
        const double w = B.s > A.s ? std::clamp((s - A.s) / (B.s - A.s), 0.0, 1.0) : 0.0;
        const double x = A.x + w * (B.x - A.x), y = A.y + w * (B.y - A.y);
        for (int j = 0; j < segments; ++j) {
            const double t = 2.0 * kPi * j / segments;
            const Complex et = std::exp(Complex{0.0, t}), ey = std::exp(Complex{0.0, y});
            if (sp.is_berger())
                push(m, {std::cos(x) * ey, std::sin(x) * et}, sp);
            else
                push(m, {std::cosh(x) * ey, std::sinh(x) * et}, sp);
        }
    }
    stitch_rings(m, 0, n, segments, closed);
    return m;
}

int euler_characteristic(const Mesh& m) {
    std::map<std::pair<int, int>, int> edges;
    for (const auto& f : m.f)
        for (int e = 0; e < 3; ++e) {
            int a = f[e], b = f[(e + 1) % 3];
            if (a > b) std::swap(a, b);
            ++edges[{a, b}];
        }
    return static_cast<int>(m.v.size()) - static_cast<int>(edges.size()) + static_cast<int>(m.f.size());
}

IntersectionReport self_intersections(const Mesh& m, std::size_t max_pairs) {
    struct Box {
        Vec3 lo, hi;
        int tri;
    };
    std::vector<Box> boxes;
    boxes.reserve(m.f.size());
    for (int i = 0; i < static_cast<int>(m.f.size()); ++i) {
        Box b{m.v[m.f[i][0]], m.v[m.f[i][0]], i};
        for (int c = 1; c < 3; ++c)
            for (int d = 0; d < 3; ++d) {
                b.lo[d] = std::min(b.lo[d], m.v[m.f[i][c]][d]);
                b.hi[d] = std::max(b.hi[d], m.v[m.f[i][c]][d]);
            }
        boxes.push_back(b);
    }
    std::sort(boxes.begin(), boxes.end(), [](const Box& a, const Box& b) { return a.lo[0] < b.lo[0]; });
    IntersectionReport rep;
    auto share = [&](int a, int b) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (m.f[a][i] == m.f[b][j]) return true;
        return false;
    };
    auto crosses = [&](int a, int b) {
        const auto& A = m.f[a];
        const auto& B = m.f[b];
        for (int e = 0; e < 3; ++e) {
            if (segment_hits(m.v[A[e]], m.v[A[(e + 1) % 3]], m.v[B[0]], m.v[B[1]], m.v[B[2]])) return true;
            if (segment_hits(m.v[B[e]], m.v[B[(e + 1) % 3]], m.v[A[0]], m.v[A[1]], m.v[A[2]])) return true;
        }
        return false;
    };
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        for (std::size_t j = i + 1; j < boxes.size() && boxes[j].lo[0] <= boxes[i].hi[0]; ++j) {
            const Box& a = boxes[i];
            const Box& b = boxes[j];
            if (a.hi[1] < b.lo[1] || b.hi[1] < a.lo[1] || a.hi[2] < b.lo[2] || b.hi[2] < a.lo[2]) continue;
            if (share(a.tri, b.tri)) continue;
            if (crosses(a.tri, b.tri)) {
                rep.self_intersecting = true;
                if (++rep.pairs >= max_pairs) return rep;
            }
        }
    }
    return rep;
}

void write_obj(std::ostream& os, const Mesh& m, const Metadata& meta) {
    for (const auto& [k, v] : meta.entries) os << "# " << k << ": " << v << '\n';
    os << "# vertices: " << m.v.size() << ", faces: " << m.f.size() << '\n';
    for (std::size_t i = 0; i < m.v.size(); ++i) {
        const AmbientPoint& p = m.r4[i];
        os << "# r4 " << format_number(p.z.real()) << ' ' << format_number(p.z.imag()) << ' '
           << format_number(p.w.real()) << ' ' << format_number(p.w.imag()) << '\n';
        os << "v " << format_number(m.v[i][0]) << ' ' << format_number(m.v[i][1]) << ' '
           << format_number(m.v[i][2]) << '\n';
    }
    for (const auto& f : m.f) os << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
}

void write_obj(const std::string& path, const Mesh& m, const Metadata& meta) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DomainError("cannot open " + path + " for writing");
    write_obj(f, m, meta);
}

} // namespace cmcsurf
