#pragma once

#include <vector>

#include "rigidgas/vec2.hpp"

namespace rigidgas {

enum class BodyKind { disk, ellipse, fourier };

struct BodySpec {
    BodyKind kind = BodyKind::disk;
    double radius = 1.0;        // disk
    double a = 0.5, b = 0.3;    // ellipse semi-axes
    // fourier: h(phi) = c0 + sum_k (a_k cos k phi + b_k sin k phi),
    // stored as [c0, a1, b1, a2, b2, ...]
    std::vector<double> coeffs;
    int quadrature_order = 512;

    static BodySpec disk(double R, int order = 512);
    static BodySpec ellipse(double a, double b, int order = 512);
    static BodySpec fourier(std::vector<double> coeffs, int order = 512);

    bool operator==(const BodySpec&) const = default;
};

struct SupportJet {
    double h, dh, d2h;
};

struct BoundaryPoint {
    Vec2 r;        // body-frame boundary point
    Vec2 n;        // outward unit normal, equals (cos phi, sin phi)
    double kappa;  // curvature 1/(h + h'')
    double dh;     // h'(phi) = r . n_perp
};

struct Mat2 {
    double xx = 0, xy = 0, yy = 0;
    double trace() const { return xx + yy; }
    double det() const { return xx * yy - xy * xy; }
};

// Strictly convex body described by its support function about the centroid.
class SupportBody {
public:
    explicit SupportBody(const BodySpec& spec);

    SupportJet jet(double phi) const;
    double rho(double phi) const;  // radius of curvature h + h''

    const BodySpec& spec() const { return spec_; }
    int quadrature_order() const { return spec_.quadrature_order; }
    BodyKind kind() const { return spec_.kind; }
    // translation subtracted from the raw support function to centre the body
    Vec2 centroid_shift() const { return shift_; }
    double rho_min() const { return rho_min_; }

private:
    SupportJet raw_jet(double phi) const;

    BodySpec spec_;
    Vec2 shift_;
    double rho_min_ = 0.0;
};

SupportBody make_support_body(const BodySpec& spec);
BoundaryPoint boundary(const SupportBody& body, double phi);

struct ShapeConstants {
    double alpha = 0.0;
    double L = 0.0, L_alpha = 0.0;
    double kappa_min = 0.0, kappa_max = 0.0;
    double r_max = 0.0, r_max_alpha = 0.0;
    double dh_max = 0.0;   // max |h'|
    double rho_alpha_max = 0.0;
    double area = 0.0;
    double I = 0.0;
    double K = 0.0, K_alpha = 0.0;
    Mat2 N, N_alpha;
    Vec2 Gamma, Gamma_alpha;
    Vec2 closure_n;        // quadrature of n dsigma_alpha (should vanish)
    double closure_r = 0;  // quadrature of r_alpha_perp . n dsigma_alpha (should vanish)
};

ShapeConstants shape_constants(const SupportBody& body, double alpha);

struct DistanceResult {
    double d;    // signed distance in world units
    double phi;  // body-frame normal angle of the closest support point
};

// Signed distance from p (relative to the body centre, world frame) to
// scale * R_theta * (body grown by `offset` in body units).
// `hint` warm-starts the closest-point search.
DistanceResult signed_distance(const SupportBody& body, double theta, double scale, Vec2 p,
                               double offset = 0.0, const double* hint = nullptr);

}  // namespace rigidgas
