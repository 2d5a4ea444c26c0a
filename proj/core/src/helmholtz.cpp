#include "difftomo/helmholtz.hpp"

#include <cmath>
#include <stdexcept>

namespace dt
{
    namespace
    {
        bool is_boundary(int i, int j, int n)
        {
            return i == 0 || j == 0 || i == n - 1 || j == n - 1;
        }
    }

    MediumOperator::MediumOperator(RealField wavenumber, double omega)
        : k_(std::move(wavenumber)), omega_(omega)
    {
        const Grid& g = k_.grid;
        if (g.n < 4)
            throw std::invalid_argument("helmholtz: grid too small");
        double kmax = 0.0;
        for (double kv : k_.values)
        {
            if (!(kv > 0.0))
                throw std::invalid_argument("helmholtz: wavenumber must be positive");
            kmax = std::max(kmax, kv);
        }
        const double ppw = 2.0 * M_PI / (kmax * g.spacing());
        if (ppw < 5.0)
            throw std::invalid_argument(
                "helmholtz: fewer than 5 points per wavelength");
        warn_ = ppw < 10.0;

        const double h = g.spacing();
        const double inv_h = 1.0 / h, inv_h2 = inv_h * inv_h;
        const int n = g.n;

        std::vector<Eigen::Triplet<cplx>> trip;
        trip.reserve(5 * g.size());
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
            {
                const int row = int(g.index(i, j));
                const double kv = k_.at(i, j);
                if (!is_boundary(i, j, n))
                {
                    trip.emplace_back(row, row, cplx{4.0 * inv_h2 - kv * kv, 0.0});
                    trip.emplace_back(row, int(g.index(i - 1, j)), cplx{-inv_h2, 0.0});
                    trip.emplace_back(row, int(g.index(i + 1, j)), cplx{-inv_h2, 0.0});
                    trip.emplace_back(row, int(g.index(i, j - 1)), cplx{-inv_h2, 0.0});
                    trip.emplace_back(row, int(g.index(i, j + 1)), cplx{-inv_h2, 0.0});
                    continue;
                }
                // boundary row: sum of face conditions (u_C - u_in)/h - i k u_C
                cplx diag{};
                auto face = [&](int ii, int jj) {
                    diag += cplx{inv_h, -kv};
                    trip.emplace_back(row, int(g.index(ii, jj)), cplx{-inv_h, 0.0});
                };
                if (i == 0) face(1, j);
                if (i == n - 1) face(n - 2, j);
                if (j == 0) face(i, 1);
                if (j == n - 1) face(i, n - 2);
                trip.emplace_back(row, row, diag);
            }

        matrix_.resize(int(g.size()), int(g.size()));
        matrix_.setFromTriplets(trip.begin(), trip.end());
        matrix_.makeCompressed();
    }

    double MediumOperator::points_per_wavelength() const
    {
        double kmax = 0.0;
        for (double kv : k_.values) kmax = std::max(kmax, kv);
        return 2.0 * M_PI / (kmax * k_.grid.spacing());
    }

    void MediumOperator::factorize() const
    {
        if (lu_) return;
        auto lu = std::make_shared<Eigen::SparseLU<SpMat>>();
        lu->compute(matrix_);
        if (lu->info() != Eigen::Success)
            throw std::runtime_error("helmholtz: sparse LU factorization failed");
        lu_ = std::move(lu);
    }

    MediumOperator::Vec MediumOperator::solve(const Vec& rhs) const
    {
        if (rhs.size() != matrix_.rows())
            throw std::invalid_argument("helmholtz: rhs size mismatch");
        factorize();
        Vec x = lu_->solve(rhs);
        const double rhs_norm = rhs.norm();
        if (rhs_norm > 0.0 &&
            (matrix_ * x - rhs).norm() > 1e-8 * rhs_norm)
            throw std::runtime_error("helmholtz: solve residual above 1e-8");
        return x;
    }

    MediumOperator::Vec MediumOperator::solve_adjoint(const Vec& rhs) const
    {
        if (rhs.size() != matrix_.rows())
            throw std::invalid_argument("helmholtz: rhs size mismatch");
        factorize();
        Vec x = lu_->adjoint().solve(rhs);
        const double rhs_norm = rhs.norm();
        if (rhs_norm > 0.0 &&
            (matrix_.adjoint() * x - rhs).norm() > 1e-8 * rhs_norm)
            throw std::runtime_error("helmholtz: adjoint solve residual above 1e-8");
        return x;
    }

    MediumOperator assemble(const RealField& wavenumber, double omega)
    {
        return MediumOperator(wavenumber, omega);
    }

    MediumOperator assemble_homogeneous(const Grid& grid, double k0)
    {
        return MediumOperator(RealField(grid, k0), k0);
    }

    Eigen::VectorXcd rhs_plane_wave_contrast(const RealField& f, double k0)
    {
        const Grid& g = f.grid;
        Eigen::VectorXcd b = Eigen::VectorXcd::Zero(Eigen::Index(g.size()));
        for (int j = 1; j < g.n - 1; ++j)
        {
            const double x2 = g.coord(j);
            const cplx e{std::cos(k0 * x2), std::sin(k0 * x2)};
            for (int i = 1; i < g.n - 1; ++i)
                b[Eigen::Index(g.index(i, j))] = f.at(i, j) * e;
        }
        return b;
    }

    Eigen::VectorXcd rhs_for(const SourceSpec& source, const Grid& grid)
    {
        if (source.kind == SourceSpec::Kind::plane_wave)
            throw std::invalid_argument(
                "rhs_for: plane waves use rhs_plane_wave_contrast");
        Eigen::VectorXcd b = Eigen::VectorXcd::Zero(Eigen::Index(grid.size()));
        const double h = grid.spacing();
        auto add_delta = [&](point2 x) {
            const int i = int(std::lround(x[0] / h)) + grid.n / 2;
            const int j = int(std::lround(x[1] / h)) + grid.n / 2;
            if (i < 1 || i >= grid.n - 1 || j < 1 || j >= grid.n - 1)
                throw std::invalid_argument(
                    "rhs_for: source position outside the grid interior");
            b[Eigen::Index(grid.index(i, j))] += 1.0 / (h * h);
        };
        if (source.kind == SourceSpec::Kind::point)
            add_delta(source.origin);
        else
            for (const auto& p : source.positions)
                add_delta(p);
        return b;
    }

    ComplexField plane_wave(const Grid& grid, double k0)
    {
        ComplexField u(grid);
        for (int j = 0; j < grid.n; ++j)
        {
            const cplx e{std::cos(k0 * grid.coord(j)),
                         std::sin(k0 * grid.coord(j))};
            for (int i = 0; i < grid.n; ++i)
                u.at(i, j) = e;
        }
        return u;
    }

    ComplexField scattered_from_total(const ComplexField& u_tot,
                                      const ComplexField& u_inc, cplx alpha)
    {
        if (u_tot.grid != u_inc.grid)
            throw std::invalid_argument("scattered_from_total: grid mismatch");
        ComplexField out(u_tot.grid);
        for (std::size_t i = 0; i < out.values.size(); ++i)
            out.values[i] = alpha * (u_tot.values[i] - u_inc.values[i]);
        return out;
    }

    cplx calibrate_incident(const Trace& u_inc_trace, double k0)
    {
        const std::size_t m = u_inc_trace.values.size();
        if (m == 0)
            throw std::invalid_argument("calibrate_incident: empty trace");
        const std::size_t lo = m / 4, hi = m - m / 4;
        cplx num{};
        double den = 0.0;
        for (std::size_t j = lo; j < hi; ++j)
        {
            num += std::conj(u_inc_trace.values[j]);
            den += std::norm(u_inc_trace.values[j]);
        }
        if (den == 0.0)
            throw std::invalid_argument(
                "calibrate_incident: zero incident trace on the central half");
        const double phase = k0 * u_inc_trace.height;
        return cplx{std::cos(phase), std::sin(phase)} * num / den;
    }

    Trace sample_receivers(const ComplexField& field,
                           const std::vector<double>& receiver_x, double r_M)
    {
        const Grid& g = field.grid;
        Trace tr;
        tr.receiver_x = receiver_x;
        tr.height = r_M;
        tr.values.reserve(receiver_x.size());
        for (double x1 : receiver_x)
        {
            if (std::abs(x1) > g.half_width || std::abs(r_M) > g.half_width)
                throw std::invalid_argument(
                    "sample_receivers: receiver outside the grid");
            tr.values.push_back(bilinear(field, x1, r_M));
        }
        return tr;
    }

    namespace
    {
        // potential at angular frequency omega from a scene whose amplitudes
        // are declared at omega = 2 pi
        RealField scene_potential(const SceneSpec& scene, const Grid& grid,
                                  double omega)
        {
            RealField f = render_scene(scene, grid);
            const double s = (omega / (2.0 * M_PI)) * (omega / (2.0 * M_PI));
            for (double& v : f.values) v *= s;
            return f;
        }

        std::uint64_t trace_seed(std::uint64_t base, int a, int k, int kind)
        {
            // splitmix-style hash keeps the streams independent
            std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (std::uint64_t(a) * 8192 + std::uint64_t(k) * 8 + std::uint64_t(kind) + 1);
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            return z ^ (z >> 31);
        }
    }

    ForwardResult forward_dataset(const ForwardMedium& medium,
                                  const AcquisitionConfig& acq,
                                  const ForwardOptions& opts)
    {
        acq.validate();
        if (opts.rotate_acquisition &&
            acq.source.kind != SourceSpec::Kind::plane_wave)
            throw std::invalid_argument(
                "forward_dataset: rotate_acquisition supports plane waves only");

        const Grid& grid = opts.grid;
        const auto receiver_x = uniform_receivers(acq.l_M, acq.n_receivers);

        ForwardResult result;
        result.total.acquisition = acq;
        result.total.kind = DatasetKind::total;
        result.scattered.acquisition = acq;
        result.scattered.kind = DatasetKind::scattered;
        result.incident.acquisition = acq;
        result.incident.kind = DatasetKind::incident;

        for (int a = 0; a < acq.n_angles; ++a)
        {
            const double alpha = acq.angle(a);

            for (int k = 0; k < int(acq.wavenumbers.size()); ++k)
            {
                const double k0 = acq.wavenumbers[k];
                const double omega = k0 * acq.c0;

                // potential of the rotated medium at this frequency
                RealField f(grid);
                if (const auto* scene = std::get_if<SceneSpec>(&medium))
                {
                    f = scene_potential(
                        opts.rotate_acquisition ? *scene : scene->rotated(alpha),
                        grid, omega);
                }
                else
                {
                    const RealField& f0 = std::get<RealField>(medium);
                    if (f0.grid != grid)
                        throw std::invalid_argument(
                            "forward_dataset: potential grid mismatch");
                    f = opts.rotate_acquisition ? f0 : rotate_potential(f0, alpha);
                    // sampled potentials also declare amplitudes at omega = 2 pi
                    const double s = (omega / (2.0 * M_PI)) * (omega / (2.0 * M_PI));
                    for (double& v : f.values) v *= s;
                }

                RealField kfield(grid);
                for (std::size_t p = 0; p < kfield.values.size(); ++p)
                {
                    const double k2 = k0 * k0 + f.values[p];
                    if (!(k2 > 0.0))
                        throw std::domain_error(
                            "forward_dataset: k0^2 + f <= 0 in the medium");
                    kfield.values[p] = std::sqrt(k2);
                }
                MediumOperator op(std::move(kfield), omega);

                Trace tr_tot, tr_sc, tr_inc;
                if (acq.source.kind == SourceSpec::Kind::plane_wave)
                {
                    const point2 dir =
                        opts.rotate_acquisition
                            ? point2{-std::sin(alpha), std::cos(alpha)}
                            : point2{0.0, 1.0};
                    // u_inc = e^{i k0 d.x}; (-Delta - k^2) u_sc = f u_inc
                    ComplexField u_inc(grid);
                    Eigen::VectorXcd b =
                        Eigen::VectorXcd::Zero(Eigen::Index(grid.size()));
                    for (int j = 0; j < grid.n; ++j)
                        for (int i = 0; i < grid.n; ++i)
                        {
                            const double ph = k0 * (dir[0] * grid.coord(i) +
                                                    dir[1] * grid.coord(j));
                            u_inc.at(i, j) = cplx{std::cos(ph), std::sin(ph)};
                            if (i > 0 && j > 0 && i < grid.n - 1 && j < grid.n - 1)
                                b[Eigen::Index(grid.index(i, j))] =
                                    f.at(i, j) * u_inc.at(i, j);
                        }
                    const Eigen::VectorXcd x = op.solve(b);
                    ComplexField u_sc(grid);
                    for (std::size_t p = 0; p < u_sc.values.size(); ++p)
                        u_sc.values[p] = x[Eigen::Index(p)];

                    auto receiver_point = [&](double x1) {
                        if (!opts.rotate_acquisition) return point2{x1, acq.r_M};
                        const double c = std::cos(alpha), s = std::sin(alpha);
                        return point2{c * x1 - s * acq.r_M,
                                      s * x1 + c * acq.r_M};
                    };
                    tr_inc.receiver_x = receiver_x;
                    tr_inc.height = acq.r_M;
                    tr_sc = tr_tot = tr_inc;
                    for (double x1 : receiver_x)
                    {
                        const point2 rp = receiver_point(x1);
                        if (std::abs(rp[0]) > grid.half_width ||
                            std::abs(rp[1]) > grid.half_width)
                            throw std::invalid_argument(
                                "forward_dataset: receiver outside the grid");
                        const cplx vi{std::cos(k0 * (dir[0] * rp[0] + dir[1] * rp[1])),
                                      std::sin(k0 * (dir[0] * rp[0] + dir[1] * rp[1]))};
                        const cplx vs = bilinear(u_sc, rp[0], rp[1]);
                        tr_inc.values.push_back(vi);
                        tr_sc.values.push_back(vs);
                        tr_tot.values.push_back(vi + vs);
                    }
                }
                else
                {
                    const Eigen::VectorXcd b = rhs_for(acq.source, grid);
                    const Eigen::VectorXcd x_tot = op.solve(b);
                    MediumOperator bg = assemble_homogeneous(grid, k0);
                    const Eigen::VectorXcd x_inc = bg.solve(b);

                    ComplexField u_tot(grid), u_inc(grid);
                    for (std::size_t p = 0; p < u_tot.values.size(); ++p)
                    {
                        u_tot.values[p] = x_tot[Eigen::Index(p)];
                        u_inc.values[p] = x_inc[Eigen::Index(p)];
                    }
                    tr_tot = sample_receivers(u_tot, receiver_x, acq.r_M);
                    tr_inc = sample_receivers(u_inc, receiver_x, acq.r_M);
                    const cplx alpha_cal = calibrate_incident(tr_inc, k0);
                    tr_sc = tr_tot;
                    for (std::size_t p = 0; p < tr_sc.values.size(); ++p)
                        tr_sc.values[p] =
                            alpha_cal * (tr_tot.values[p] - tr_inc.values[p]);
                }

                if (acq.snr_db)
                {
                    tr_tot = add_noise(tr_tot, *acq.snr_db,
                                       trace_seed(acq.seed, a, k, 0));
                    tr_sc = add_noise(tr_sc, *acq.snr_db,
                                      trace_seed(acq.seed, a, k, 1));
                }

                result.total.traces.emplace(std::pair{a, k}, std::move(tr_tot));
                result.scattered.traces.emplace(std::pair{a, k}, std::move(tr_sc));
                result.incident.traces.emplace(std::pair{a, k}, std::move(tr_inc));
            }
        }
        return result;
    }
}
