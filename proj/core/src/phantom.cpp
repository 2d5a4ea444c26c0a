#include "difftomo/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace dt
{
    namespace
    {
        point2 rotate_point(point2 x, double alpha)
        {
            const double c = std::cos(alpha), s = std::sin(alpha);
            return {c * x[0] - s * x[1], s * x[0] + c * x[1]};
        }

        bool point_in_polygon(const std::vector<point2>& v, point2 p)
        {
            // even-odd rule
            bool inside = false;
            for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++)
            {
                const bool cross = (v[i][1] > p[1]) != (v[j][1] > p[1]);
                if (cross)
                {
                    const double x = v[j][0] + (p[1] - v[j][1]) /
                                     (v[i][1] - v[j][1]) * (v[i][0] - v[j][0]);
                    if (p[0] < x) inside = !inside;
                }
            }
            return inside;
        }
    }

    bool Primitive::contains(point2 x) const
    {
        return std::visit(
            [&](const auto& s) -> bool {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, DiskShape>)
                {
                    return std::hypot(x[0] - s.center[0], x[1] - s.center[1]) <
                           s.radius;
                }
                else if constexpr (std::is_same_v<T, EllipseShape>)
                {
                    const point2 d = rotate_point(
                        {x[0] - s.center[0], x[1] - s.center[1]}, -s.tilt);
                    const double u = d[0] / s.semi_x1, v = d[1] / s.semi_x2;
                    return u * u + v * v < 1.0;
                }
                else if constexpr (std::is_same_v<T, HeartShape>)
                {
                    // implicit heart curve (u^2 + v^2 - 1)^3 < u^2 v^3
                    const double u = (x[0] - s.center[0]) / s.scale;
                    const double v = (x[1] - s.center[1]) / s.scale;
                    const double q = u * u + v * v - 1.0;
                    return q * q * q < u * u * v * v * v;
                }
                else
                {
                    return point_in_polygon(s.vertices, x);
                }
            },
            shape);
    }

    double Primitive::extent() const
    {
        return std::visit(
            [](const auto& s) -> double {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, DiskShape>)
                    return std::hypot(s.center[0], s.center[1]) + s.radius;
                else if constexpr (std::is_same_v<T, EllipseShape>)
                    return std::hypot(s.center[0], s.center[1]) +
                           std::max(s.semi_x1, s.semi_x2);
                else if constexpr (std::is_same_v<T, HeartShape>)
                    return std::hypot(s.center[0], s.center[1]) + 1.5 * s.scale;
                else
                {
                    double r = 0.0;
                    for (const auto& v : s.vertices)
                        r = std::max(r, std::hypot(v[0], v[1]));
                    return r;
                }
            },
            shape);
    }

    Primitive Primitive::rotated(double alpha) const
    {
        // f(R_alpha x): move every shape by R_{-alpha}
        Primitive out = *this;
        std::visit(
            [&](auto& s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, DiskShape>)
                    s.center = rotate_point(s.center, -alpha);
                else if constexpr (std::is_same_v<T, EllipseShape>)
                {
                    s.center = rotate_point(s.center, -alpha);
                    s.tilt -= alpha;
                }
                else if constexpr (std::is_same_v<T, HeartShape>)
                {
                    // the implicit curve is not rotation invariant; rotating
                    // the whole scene only moves its center. Good enough for
                    // the declared approximate phantoms.
                    s.center = rotate_point(s.center, -alpha);
                }
                else
                {
                    for (auto& v : s.vertices)
                        v = rotate_point(v, -alpha);
                }
            },
            out.shape);
        return out;
    }

    double SceneSpec::extent() const
    {
        double r = 0.0;
        for (const auto& p : primitives)
            r = std::max(r, p.extent());
        return r;
    }

    SceneSpec SceneSpec::rotated(double alpha) const
    {
        SceneSpec out;
        out.primitives.reserve(primitives.size());
        for (const auto& p : primitives)
            out.primitives.push_back(p.rotated(alpha));
        return out;
    }

    std::string SceneSpec::to_json() const
    {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& p : primitives)
        {
            nlohmann::json j;
            j["amplitude"] = p.amplitude;
            std::visit(
                [&](const auto& s) {
                    using T = std::decay_t<decltype(s)>;
                    if constexpr (std::is_same_v<T, DiskShape>)
                    {
                        j["shape"] = "disk";
                        j["center"] = {s.center[0], s.center[1]};
                        j["radius"] = s.radius;
                    }
                    else if constexpr (std::is_same_v<T, EllipseShape>)
                    {
                        j["shape"] = "ellipse";
                        j["center"] = {s.center[0], s.center[1]};
                        j["semi_axes"] = {s.semi_x1, s.semi_x2};
                        j["tilt"] = s.tilt;
                    }
                    else if constexpr (std::is_same_v<T, HeartShape>)
                    {
                        j["shape"] = "heart";
                        j["center"] = {s.center[0], s.center[1]};
                        j["scale"] = s.scale;
                    }
                    else
                    {
                        j["shape"] = "polygon";
                        nlohmann::json verts = nlohmann::json::array();
                        for (const auto& v : s.vertices)
                            verts.push_back({v[0], v[1]});
                        j["vertices"] = verts;
                    }
                },
                p.shape);
            arr.push_back(j);
        }
        return nlohmann::json{{"primitives", arr}}.dump(2);
    }

    SceneSpec SceneSpec::from_json(const std::string& text)
    {
        const nlohmann::json j = nlohmann::json::parse(text);
        SceneSpec spec;
        for (const auto& e : j.at("primitives"))
        {
            Primitive p;
            p.amplitude = e.at("amplitude").get<double>();
            const std::string shape = e.at("shape").get<std::string>();
            if (shape == "disk")
            {
                DiskShape s;
                s.center = e.at("center").get<std::array<double, 2>>();
                s.radius = e.at("radius").get<double>();
                if (!(s.radius > 0.0))
                    throw std::invalid_argument("scene: disk radius must be positive");
                p.shape = s;
            }
            else if (shape == "ellipse")
            {
                EllipseShape s;
                s.center = e.at("center").get<std::array<double, 2>>();
                auto ax = e.at("semi_axes").get<std::array<double, 2>>();
                s.semi_x1 = ax[0];
                s.semi_x2 = ax[1];
                s.tilt = e.value("tilt", 0.0);
                p.shape = s;
            }
            else if (shape == "heart")
            {
                HeartShape s;
                s.center = e.at("center").get<std::array<double, 2>>();
                s.scale = e.at("scale").get<double>();
                p.shape = s;
            }
            else if (shape == "polygon")
            {
                PolygonShape s;
                for (const auto& v : e.at("vertices"))
                    s.vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
                if (s.vertices.size() < 3)
                    throw std::invalid_argument("scene: polygon needs >= 3 vertices");
                p.shape = s;
            }
            else
                throw std::invalid_argument("scene: unknown shape " + shape);
            spec.primitives.push_back(std::move(p));
        }
        return spec;
    }

    SceneSpec phantom_ellipse_heart(double contrast)
    {
        SceneSpec s;
        s.primitives.push_back({EllipseShape{{0.0, 0.0}, 4.5, 3.5, 0.0}, 0.25});
        s.primitives.push_back({DiskShape{{-2.0, 1.2}, 0.9}, contrast});
        s.primitives.push_back({HeartShape{{1.6, -0.6}, 1.1}, contrast});
        return s;
    }

    SceneSpec phantom_small_shapes(double contrast)
    {
        SceneSpec s;
        s.primitives.push_back({DiskShape{{-2.2, 1.8}, 1.0}, 0.5 * contrast});
        s.primitives.push_back({DiskShape{{2.4, 2.0}, 0.6}, contrast});
        s.primitives.push_back({PolygonShape{{{-0.9, -2.6}, {0.9, -2.6},
                                              {0.9, -1.2}, {-0.9, -1.2}}},
                                contrast});
        s.primitives.push_back({EllipseShape{{2.2, -1.8}, 1.2, 0.5, 0.6}, 0.75 * contrast});
        // annulus sector approximated as a thick ring: outer disk minus hole
        s.primitives.push_back({DiskShape{{-2.0, -1.2}, 0.8}, contrast});
        s.primitives.push_back({DiskShape{{-2.0, -1.2}, 0.45}, 0.0});
        return s;
    }

    RealField disk_potential(double radius, double amplitude, const Grid& grid)
    {
        if (!(radius > 0.0))
            throw std::invalid_argument("disk_potential: radius must be positive");
        if (radius >= grid.half_width)
            throw std::invalid_argument("disk_potential: disk exceeds grid");
        RealField f(grid);
        for (int j = 0; j < grid.n; ++j)
            for (int i = 0; i < grid.n; ++i)
                if (std::hypot(grid.coord(i), grid.coord(j)) < radius)
                    f.at(i, j) = amplitude;
        return f;
    }

    RealField render_scene(const SceneSpec& spec, const Grid& grid)
    {
        RealField f(grid);
        for (int j = 0; j < grid.n; ++j)
        {
            const double x2 = grid.coord(j);
            for (int i = 0; i < grid.n; ++i)
            {
                const point2 x{grid.coord(i), x2};
                for (const auto& p : spec.primitives)
                    if (p.contains(x))
                        f.at(i, j) = p.amplitude;
            }
        }
        return f;
    }

    RealField potential_to_speed(const RealField& f, double omega, double c0)
    {
        if (!(omega > 0.0) || !(c0 > 0.0))
            throw std::invalid_argument("potential_to_speed: need omega, c0 > 0");
        const double k0sq = (omega / c0) * (omega / c0);
        RealField c(f.grid);
        for (std::size_t i = 0; i < f.values.size(); ++i)
        {
            const double denom = k0sq + f.values[i];
            if (!(denom > 0.0))
                throw std::domain_error("potential_to_speed: k0^2 + f <= 0");
            c.values[i] = std::sqrt(omega * omega / denom);
        }
        return c;
    }

    RealField speed_to_potential(const RealField& c, double omega, double c0)
    {
        if (!(omega > 0.0) || !(c0 > 0.0))
            throw std::invalid_argument("speed_to_potential: need omega, c0 > 0");
        const double k0sq = (omega / c0) * (omega / c0);
        RealField f(c.grid);
        for (std::size_t i = 0; i < c.values.size(); ++i)
        {
            if (!(c.values[i] > 0.0))
                throw std::domain_error("speed_to_potential: c <= 0");
            const double k = omega / c.values[i];
            f.values[i] = k * k - k0sq;
        }
        return f;
    }

    double bilinear(const RealField& f, double x1, double x2)
    {
        const Grid& g = f.grid;
        const double h = g.spacing();
        const double u = x1 / h + g.n / 2;
        const double v = x2 / h + g.n / 2;
        const int i = int(std::floor(u)), j = int(std::floor(v));
        const double du = u - i, dv = v - j;
        auto sample = [&](int a, int b) -> double {
            if (a < 0 || a >= g.n || b < 0 || b >= g.n) return 0.0;
            return f.at(a, b);
        };
        return (1 - du) * (1 - dv) * sample(i, j) + du * (1 - dv) * sample(i + 1, j) +
               (1 - du) * dv * sample(i, j + 1) + du * dv * sample(i + 1, j + 1);
    }

    cplx bilinear(const ComplexField& f, double x1, double x2)
    {
        const Grid& g = f.grid;
        const double h = g.spacing();
        const double u = x1 / h + g.n / 2;
        const double v = x2 / h + g.n / 2;
        const int i = int(std::floor(u)), j = int(std::floor(v));
        const double du = u - i, dv = v - j;
        auto sample = [&](int a, int b) -> cplx {
            if (a < 0 || a >= g.n || b < 0 || b >= g.n) return {};
            return f.at(a, b);
        };
        return (1 - du) * (1 - dv) * sample(i, j) + du * (1 - dv) * sample(i + 1, j) +
               (1 - du) * dv * sample(i, j + 1) + du * dv * sample(i + 1, j + 1);
    }

    RealField rotate_potential(const RealField& f, double alpha)
    {
        const Grid& g = f.grid;
        RealField out(g);
        const double c = std::cos(alpha), s = std::sin(alpha);
        for (int j = 0; j < g.n; ++j)
        {
            const double x2 = g.coord(j);
            for (int i = 0; i < g.n; ++i)
            {
                const double x1 = g.coord(i);
                out.at(i, j) = bilinear(f, c * x1 - s * x2, s * x1 + c * x2);
            }
        }
        return out;
    }
}
