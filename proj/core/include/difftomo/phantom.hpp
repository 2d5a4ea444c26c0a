#ifndef DIFFTOMO_PHANTOM_HPP
#define DIFFTOMO_PHANTOM_HPP

#include <string>
#include <variant>
#include <vector>

#include "difftomo/field.hpp"

namespace dt
{
    struct DiskShape     { point2 center; double radius; };
    struct EllipseShape  { point2 center; double semi_x1; double semi_x2; double tilt; };
    struct HeartShape    { point2 center; double scale; };
    struct PolygonShape  { std::vector<point2> vertices; };

    struct Primitive
    {
        std::variant<DiskShape, EllipseShape, HeartShape, PolygonShape> shape;
        double amplitude = 0.0;   // value of f at omega/2pi = 1

        bool contains(point2 x) const;
        // radius of a centered disk guaranteed to contain the primitive
        double extent() const;
        Primitive rotated(double alpha) const;  // primitive for f(R_alpha x)
    };

    // Later primitives overwrite earlier ones where they overlap.
    struct SceneSpec
    {
        std::vector<Primitive> primitives;

        double extent() const;
        SceneSpec rotated(double alpha) const;
        std::string to_json() const;
        static SceneSpec from_json(const std::string& text);
    };

    // Canonical desk-scale phantoms (ellipse + disk + heart, and a scene of
    // small mixed shapes). `contrast` is the amplitude of the embedded
    // shapes; the enclosing ellipse stays at 0.25.
    SceneSpec phantom_ellipse_heart(double contrast = 0.5);
    SceneSpec phantom_small_shapes(double contrast = 0.5);

    RealField disk_potential(double radius, double amplitude, const Grid& grid);
    RealField render_scene(const SceneSpec& spec, const Grid& grid);

    // c(x) = sqrt(omega^2 / (k0^2 + f)), k0 = omega / c0. Throws when
    // k0^2 + f <= 0 anywhere.
    RealField potential_to_speed(const RealField& f, double omega, double c0);
    // f(x) = (omega/c)^2 - (omega/c0)^2; exact inverse of the above.
    RealField speed_to_potential(const RealField& c, double omega, double c0);

    // Samples f(R_alpha x) by bilinear interpolation; points landing outside
    // the grid read 0.
    RealField rotate_potential(const RealField& f, double alpha);

    // Shared bilinear sampling (0 outside the grid).
    double bilinear(const RealField& f, double x1, double x2);
    cplx bilinear(const ComplexField& f, double x1, double x2);
}

#endif
