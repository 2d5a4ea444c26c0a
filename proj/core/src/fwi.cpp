#include "difftomo/fwi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "difftomo/helmholtz.hpp"
#include "difftomo/phantom.hpp"

namespace dt
{
    void FwiConfig::validate() const
    {
        if (frequencies.empty())
            throw std::invalid_argument("fwi: need at least one frequency");
        for (std::size_t i = 0; i < frequencies.size(); ++i)
        {
            if (!(frequencies[i] > 0.0))
                throw std::invalid_argument("fwi: frequencies must be positive");
            if (i > 0 && frequencies[i] <= frequencies[i - 1])
                throw std::invalid_argument("fwi: frequencies must be ascending");
        }
        if (iters_per_frequency < 1)
            throw std::invalid_argument("fwi: iters_per_frequency must be >= 1");
        if (initial_speed.values.empty())
            throw std::invalid_argument("fwi: initial speed field is empty");
        for (double c : initial_speed.values)
            if (!(c > 0.0))
                throw std::invalid_argument("fwi: initial speed must be positive");
        acquisition.validate();
        if (acquisition.source.kind == SourceSpec::Kind::plane_wave)
            throw std::invalid_argument("fwi: point or line sources only");
        if (!(armijo_c1 > 0.0) || max_line_search < 1 ||
            !(initial_step_fraction > 0.0))
            throw std::invalid_argument("fwi: bad line-search parameters");
        if (gradient_smoothing < 0.0)
            throw std::invalid_argument("fwi: gradient_smoothing must be >= 0");
    }

    namespace
    {
        struct BilinearStencil
        {
            int i, j;
            double du, dv;
        };

        BilinearStencil stencil_at(const Grid& g, double x1, double x2)
        {
            const double h = g.spacing();
            const double u = x1 / h + g.n / 2;
            const double v = x2 / h + g.n / 2;
            BilinearStencil s;
            s.i = int(std::floor(u));
            s.j = int(std::floor(v));
            s.du = u - s.i;
            s.dv = v - s.j;
            return s;
        }

        // c_alpha = c0_ref + B_alpha (c - c0_ref) with zero fill outside;
        // linear in c, so the gradient chain is B_alpha^T exactly.
        RealField rotate_speed(const RealField& c, double alpha, double c_bg)
        {
            const Grid& g = c.grid;
            RealField out(g, c_bg);
            const double ca = std::cos(alpha), sa = std::sin(alpha);
            for (int j = 0; j < g.n; ++j)
            {
                const double x2 = g.coord(j);
                for (int i = 0; i < g.n; ++i)
                {
                    const double x1 = g.coord(i);
                    const auto s = stencil_at(g, ca * x1 - sa * x2,
                                              sa * x1 + ca * x2);
                    double acc = 0.0;
                    auto tap = [&](int a, int b, double w) {
                        if (a >= 0 && a < g.n && b >= 0 && b < g.n)
                            acc += w * (c.at(a, b) - c_bg);
                    };
                    tap(s.i, s.j, (1 - s.du) * (1 - s.dv));
                    tap(s.i + 1, s.j, s.du * (1 - s.dv));
                    tap(s.i, s.j + 1, (1 - s.du) * s.dv);
                    tap(s.i + 1, s.j + 1, s.du * s.dv);
                    out.at(i, j) = c_bg + acc;
                }
            }
            return out;
        }

        // transpose of the resampling above: scatter grad_rot back
        RealField rotate_speed_adjoint(const RealField& grad_rot, double alpha)
        {
            const Grid& g = grad_rot.grid;
            RealField out(g);
            const double ca = std::cos(alpha), sa = std::sin(alpha);
            for (int j = 0; j < g.n; ++j)
            {
                const double x2 = g.coord(j);
                for (int i = 0; i < g.n; ++i)
                {
                    const double v = grad_rot.at(i, j);
                    if (v == 0.0) continue;
                    const double x1 = g.coord(i);
                    const auto s = stencil_at(g, ca * x1 - sa * x2,
                                              sa * x1 + ca * x2);
                    auto tap = [&](int a, int b, double w) {
                        if (a >= 0 && a < g.n && b >= 0 && b < g.n)
                            out.at(a, b) += w * v;
                    };
                    tap(s.i, s.j, (1 - s.du) * (1 - s.dv));
                    tap(s.i + 1, s.j, s.du * (1 - s.dv));
                    tap(s.i, s.j + 1, (1 - s.du) * s.dv);
                    tap(s.i + 1, s.j + 1, s.du * s.dv);
                }
            }
            return out;
        }

        int boundary_faces(int i, int j, int n)
        {
            int faces = 0;
            if (i == 0 || i == n - 1) ++faces;
            if (j == 0 || j == n - 1) ++faces;
            return faces;
        }

        // map each config frequency to the matching wavenumber index of the
        // acquisition (omega = k0 c0)
        std::vector<int> frequency_indices(const FwiConfig& cfg,
                                           const AcquisitionConfig& acq)
        {
            std::vector<int> idx;
            for (double omega : cfg.frequencies)
            {
                int found = -1;
                for (int k = 0; k < int(acq.wavenumbers.size()); ++k)
                    if (std::abs(acq.wavenumbers[k] * acq.c0 - omega) <
                        1e-9 * omega)
                        found = k;
                if (found < 0)
                    throw std::invalid_argument(
                        "fwi: frequency not present in the dataset");
                idx.push_back(found);
            }
            return idx;
        }

        struct AngleEval
        {
            double misfit = 0.0;
            RealField grad_rot;   // gradient w.r.t. the rotated speed
        };

        // one (angle, frequency) forward solve; optionally the adjoint solve
        AngleEval evaluate_angle(const RealField& c_rot, double omega,
                                 const AcquisitionConfig& acq, const Trace& d,
                                 bool want_gradient)
        {
            const Grid& g = c_rot.grid;
            RealField k(g);
            for (std::size_t p = 0; p < k.values.size(); ++p)
            {
                if (!(c_rot.values[p] > 0.0))
                    throw std::domain_error("fwi: nonpositive speed");
                k.values[p] = omega / c_rot.values[p];
            }
            MediumOperator op(std::move(k), omega);
            const Eigen::VectorXcd b = rhs_for(acq.source, g);
            const Eigen::VectorXcd u = op.solve(b);

            ComplexField uf(g);
            for (std::size_t p = 0; p < uf.values.size(); ++p)
                uf.values[p] = u[Eigen::Index(p)];
            const auto receiver_x = uniform_receivers(acq.l_M, acq.n_receivers);
            const Trace ru = sample_receivers(uf, receiver_x, acq.r_M);

            const double w = 2.0 * acq.l_M / acq.n_receivers;
            AngleEval ev;
            std::vector<cplx> rho(ru.values.size());
            for (std::size_t p = 0; p < rho.size(); ++p)
            {
                rho[p] = ru.values[p] - d.values[p];
                ev.misfit += 0.5 * w * std::norm(rho[p]);
            }
            if (!want_gradient) return ev;

            // adjoint source: w R^T rho scattered through the bilinear
            // sampling weights
            Eigen::VectorXcd adj_rhs =
                Eigen::VectorXcd::Zero(Eigen::Index(g.size()));
            for (std::size_t p = 0; p < rho.size(); ++p)
            {
                const auto s = stencil_at(g, receiver_x[p], acq.r_M);
                auto tap = [&](int a, int bb, double wt) {
                    if (a >= 0 && a < g.n && bb >= 0 && bb < g.n)
                        adj_rhs[Eigen::Index(g.index(a, bb))] +=
                            w * wt * rho[p];
                };
                tap(s.i, s.j, (1 - s.du) * (1 - s.dv));
                tap(s.i + 1, s.j, s.du * (1 - s.dv));
                tap(s.i, s.j + 1, (1 - s.du) * s.dv);
                tap(s.i + 1, s.j + 1, s.du * s.dv);
            }
            const Eigen::VectorXcd lambda = op.solve_adjoint(adj_rhs);

            // dJ/dc_p = -Re(conj(lambda_p) dA_pp/dc_p u_p)
            ev.grad_rot = RealField(g);
            for (int j = 0; j < g.n; ++j)
                for (int i = 0; i < g.n; ++i)
                {
                    const std::size_t p = g.index(i, j);
                    const double cp = c_rot.values[p];
                    const int faces = boundary_faces(i, j, g.n);
                    cplx dApp;
                    if (faces == 0)
                        dApp = cplx{2.0 * omega * omega / (cp * cp * cp), 0.0};
                    else
                        dApp = cplx{0.0, faces * omega / (cp * cp)};
                    ev.grad_rot.values[p] =
                        -std::real(std::conj(lambda[Eigen::Index(p)]) * dApp *
                                   u[Eigen::Index(p)]);
                }
            return ev;
        }

        void apply_window(RealField& grad, std::optional<double> radius)
        {
            if (!radius) return;
            const Grid& g = grad.grid;
            for (int j = 0; j < g.n; ++j)
                for (int i = 0; i < g.n; ++i)
                    if (std::hypot(g.coord(i), g.coord(j)) > *radius)
                        grad.at(i, j) = 0.0;
        }

        double background_speed(const FwiConfig& cfg)
        {
            return cfg.acquisition.c0;
        }

        // separable Gaussian blur with sigma in length units (zero padding)
        void smooth_field(RealField& f, double sigma)
        {
            if (!(sigma > 0.0)) return;
            const Grid& g = f.grid;
            const double sp = sigma / g.spacing();  // sigma in pixels
            const int half = std::max(1, int(std::ceil(4.0 * sp)));
            std::vector<double> kernel(2 * half + 1);
            double ksum = 0.0;
            for (int t = -half; t <= half; ++t)
                ksum += kernel[t + half] = std::exp(-0.5 * t * t / (sp * sp));
            for (double& kv : kernel) kv /= ksum;

            RealField tmp(g);
            for (int j = 0; j < g.n; ++j)
                for (int i = 0; i < g.n; ++i)
                {
                    double acc = 0.0;
                    for (int t = -half; t <= half; ++t)
                        if (i + t >= 0 && i + t < g.n)
                            acc += kernel[t + half] * f.at(i + t, j);
                    tmp.at(i, j) = acc;
                }
            for (int j = 0; j < g.n; ++j)
                for (int i = 0; i < g.n; ++i)
                {
                    double acc = 0.0;
                    for (int t = -half; t <= half; ++t)
                        if (j + t >= 0 && j + t < g.n)
                            acc += kernel[t + half] * tmp.at(i, j + t);
                    f.at(i, j) = acc;
                }
        }

        // shared evaluation over the requested wavenumber indices
        double misfit_and_gradient(const RealField& c, const Dataset& data,
                                   const FwiConfig& cfg,
                                   const std::vector<int>& k_indices,
                                   RealField* gradient)
        {
            const AcquisitionConfig& acq = data.acquisition;
            const double c_bg = background_speed(cfg);
            double total = 0.0;
            if (gradient) *gradient = RealField(c.grid);
            for (int a = 0; a < acq.n_angles; ++a)
            {
                const double alpha = acq.angle(a);
                const RealField c_rot = rotate_speed(c, alpha, c_bg);
                for (int k : k_indices)
                {
                    const double omega = acq.wavenumbers[k] * acq.c0;
                    AngleEval ev = evaluate_angle(c_rot, omega, acq,
                                                  data.trace(a, k),
                                                  gradient != nullptr);
                    total += ev.misfit;
                    if (gradient)
                    {
                        const RealField back =
                            rotate_speed_adjoint(ev.grad_rot, alpha);
                        for (std::size_t p = 0; p < gradient->values.size(); ++p)
                            gradient->values[p] += back.values[p];
                    }
                }
            }
            if (gradient) apply_window(*gradient, cfg.window_radius);
            return total;
        }
    }

    double fwi_misfit(const RealField& c, const Dataset& data,
                      const FwiConfig& config)
    {
        config.validate();
        data.validate();
        const auto idx = frequency_indices(config, data.acquisition);
        return misfit_and_gradient(c, data, config, idx, nullptr);
    }

    RealField fwi_gradient(const RealField& c, const Dataset& data,
                           const FwiConfig& config, double* misfit_out)
    {
        config.validate();
        data.validate();
        const auto idx = frequency_indices(config, data.acquisition);
        RealField grad;
        const double J = misfit_and_gradient(c, data, config, idx, &grad);
        if (misfit_out) *misfit_out = J;
        return grad;
    }

    std::vector<double> nlcg_direction(NlcgState& state,
                                       const std::vector<double>& gradient)
    {
        std::vector<double> dir(gradient.size());
        if (state.fresh || state.prev_gradient.size() != gradient.size())
        {
            for (std::size_t i = 0; i < gradient.size(); ++i)
                dir[i] = -gradient[i];
        }
        else
        {
            double num = 0.0, den = 0.0;
            for (std::size_t i = 0; i < gradient.size(); ++i)
            {
                num += gradient[i] * (gradient[i] - state.prev_gradient[i]);
                den += state.prev_gradient[i] * state.prev_gradient[i];
            }
            const double beta = den > 0.0 ? std::max(0.0, num / den) : 0.0;
            double descent = 0.0;
            for (std::size_t i = 0; i < gradient.size(); ++i)
            {
                dir[i] = -gradient[i] + beta * state.prev_direction[i];
                descent += dir[i] * gradient[i];
            }
            if (descent >= 0.0)  // restart on loss of descent
                for (std::size_t i = 0; i < gradient.size(); ++i)
                    dir[i] = -gradient[i];
        }
        state.prev_gradient = gradient;
        state.prev_direction = dir;
        state.fresh = false;
        return dir;
    }

    std::string FwiReport::to_json() const
    {
        nlohmann::json j;
        j["misfit_history"] = misfit_history;
        j["frequency_blocks"] = frequency_blocks;
        j["notes"] = notes;
        j["completed"] = completed;
        return j.dump(2);
    }

    FwiResult fwi_run(const FwiConfig& config, const Dataset& data,
                      const std::function<void(int, double)>& progress)
    {
        config.validate();
        data.validate();
        (void)frequency_indices(config, data.acquisition);

        FwiResult result;
        result.speed = config.initial_speed;
        RealField& c = result.speed;
        int global_iter = 0;

        for (double omega : config.frequencies)
        {
            FwiConfig one = config;
            one.frequencies = {omega};
            const auto idx = frequency_indices(one, data.acquisition);

            // search-direction preconditioner: Gaussian smoothing (SPD, so
            // -M g stays a descent direction), window re-applied after it
            const auto precondition = [&](const RealField& gf) {
                RealField pg = gf;
                smooth_field(pg, config.gradient_smoothing);
                apply_window(pg, config.window_radius);
                return pg;
            };

            NlcgState state;
            RealField grad;
            double J = misfit_and_gradient(c, data, one, idx, &grad);
            result.report.misfit_history.push_back(J);
            RealField pgrad = precondition(grad);

            int block_iters = 0;
            double last_move = 0.0;  // max displacement of the last accepted step
            for (int it = 0; it < config.iters_per_frequency; ++it)
            {
                std::vector<double> dir = nlcg_direction(state, pgrad.values);
                double gd = 0.0, dmax = 0.0;
                const auto rate = [&] {
                    gd = 0.0;
                    dmax = 0.0;
                    for (std::size_t p = 0; p < dir.size(); ++p)
                    {
                        gd += grad.values[p] * dir[p];
                        dmax = std::max(dmax, std::abs(dir[p]));
                    }
                };
                rate();
                if (gd >= 0.0 && dmax > 0.0)
                {
                    // conjugacy lost against the true gradient: restart on
                    // the preconditioned steepest-descent direction
                    for (std::size_t p = 0; p < dir.size(); ++p)
                        dir[p] = -pgrad.values[p];
                    state.prev_direction = dir;
                    rate();
                }
                if (dmax == 0.0)
                {
                    result.report.notes.push_back("zero gradient at omega " +
                                                  std::to_string(omega));
                    break;
                }

                // Trial displacement: grow from the last accepted step so the
                // optimizer can escape a flat start; the Armijo backtracking
                // below shrinks it again when it overshoots.
                const auto [cmin, cmax] =
                    std::minmax_element(c.values.begin(), c.values.end());
                double range = *cmax - *cmin;
                if (range <= 0.0) range = 0.01 * *cmax;
                const double seed_move =
                    config.initial_step_fraction * range;
                const double move = last_move > 0.0
                    ? std::max(4.0 * last_move, seed_move)
                    : seed_move;
                double step = move / dmax;

                bool accepted = false;
                RealField trial(c.grid);
                for (int ls = 0; ls < config.max_line_search; ++ls)
                {
                    trial = c;
                    for (std::size_t p = 0; p < trial.values.size(); ++p)
                        trial.values[p] += step * dir[p];
                    bool positive = true;
                    for (double cv : trial.values)
                        if (!(cv > 0.0)) { positive = false; break; }
                    double Jt = std::numeric_limits<double>::infinity();
                    if (positive)
                    {
                        // an overshooting trial can push the local wavelength
                        // below the solver's resolution limit; treat that as
                        // a rejected step, not a hard failure
                        try
                        {
                            Jt = misfit_and_gradient(trial, data, one, idx,
                                                     nullptr);
                        }
                        catch (const std::exception&)
                        {
                        }
                    }
                    if (positive && Jt <= J + config.armijo_c1 * step * gd)
                    {
                        c = trial;
                        J = Jt;
                        last_move = step * dmax;
                        accepted = true;
                        break;
                    }
                    step *= 0.5;
                }
                if (!accepted)
                {
                    result.report.notes.push_back(
                        "line search failed at omega " + std::to_string(omega) +
                        ", iteration " + std::to_string(it));
                    break;
                }

                ++block_iters;
                ++global_iter;
                result.report.misfit_history.push_back(J);
                if (progress) progress(global_iter, J);
                if (it + 1 < config.iters_per_frequency)
                {
                    J = misfit_and_gradient(c, data, one, idx, &grad);
                    pgrad = precondition(grad);
                }
            }
            result.report.frequency_blocks.push_back(block_iters);
        }

        const double omega_ref = config.reference_omega > 0.0
            ? config.reference_omega
            : config.frequencies.back();
        result.potential =
            speed_to_potential(c, omega_ref, config.acquisition.c0);
        return result;
    }
}
