#include "difftomo/recipe.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "difftomo/fdt.hpp"
#include "difftomo/fwi.hpp"
#include "difftomo/greens.hpp"
#include "difftomo/io.hpp"
#include "json_detail.hpp"

namespace dt
{
    namespace
    {
        std::string method_name(ReconMethod m)
        {
            switch (m)
            {
                case ReconMethod::born: return "born";
                case ReconMethod::rytov: return "rytov";
                case ReconMethod::fwi: return "fwi";
            }
            throw std::logic_error("unreachable method");
        }

        ReconMethod method_from_name(const std::string& s)
        {
            if (s == "born") return ReconMethod::born;
            if (s == "rytov") return ReconMethod::rytov;
            if (s == "fwi") return ReconMethod::fwi;
            throw std::invalid_argument("unknown reconstruction method: " + s);
        }

        nlohmann::json grid_to_json(const Grid& g)
        {
            return {{"half_width", g.half_width}, {"n", g.n}};
        }

        Grid grid_from_json(const nlohmann::json& j)
        {
            return make_grid(j.at("half_width").get<double>(),
                             j.at("n").get<int>());
        }

        // the scene declares amplitudes at omega = 2 pi; reconstructions are
        // reported at the same reference frequency
        constexpr double reference_omega = 2.0 * M_PI;

        NdftMethod pick_ndft_method(const CoverageSet& samples, const Grid& g)
        {
            // gridding needs |y| h < pi; otherwise fall back to the direct sum
            return samples.max_norm() * g.spacing() < 0.99 * M_PI
                ? NdftMethod::gridding
                : NdftMethod::direct;
        }
    }

    std::string ExperimentRecipe::to_json() const
    {
        nlohmann::json j;
        j["name"] = name;
        j["phantom"] = nlohmann::json::parse(phantom.to_json());
        j["acquisition"] = detail::acquisition_to_json(acquisition);
        j["solver_grid"] = grid_to_json(solver_grid);
        j["method"] = method_name(method);
        j["recon_grid"] = grid_to_json(recon_grid);
        j["cg_iterations"] = cg_iterations;
        if (!fwi_frequencies.empty()) j["fwi_frequencies"] = fwi_frequencies;
        j["fwi_iterations"] = fwi_iterations;
        if (fwi_window_radius) j["fwi_window_radius"] = *fwi_window_radius;
        if (fwi_gradient_smoothing > 0.0)
            j["fwi_gradient_smoothing"] = fwi_gradient_smoothing;
        if (psnr_window) j["psnr_window"] = *psnr_window;
        if (!compare_models.empty()) j["compare_models"] = compare_models;
        return j.dump(2);
    }

    ExperimentRecipe ExperimentRecipe::from_json(const std::string& text)
    {
        const nlohmann::json j = nlohmann::json::parse(text);
        ExperimentRecipe r;
        r.name = j.at("name").get<std::string>();
        r.phantom = SceneSpec::from_json(j.at("phantom").dump());
        r.acquisition = detail::acquisition_from_json(j.at("acquisition"));
        r.solver_grid = grid_from_json(j.at("solver_grid"));
        r.method = method_from_name(j.value("method", "born"));
        if (j.contains("recon_grid"))
        {
            r.recon_grid = grid_from_json(j.at("recon_grid"));
        }
        else
        {
            // half_width = l_M makes the grid's k-space resolution
            // 2 pi / (2 l_M) match the k1 sample spacing pi / l_M, which keeps
            // the CGNE system well determined; n keeps the largest coverage
            // radius sqrt(2) kmax inside the gridding range |y| h < pi
            double kmax = 0.0;
            for (double k0 : r.acquisition.wavenumbers)
                kmax = std::max(kmax, k0);
            const double l_M = r.acquisition.l_M;
            int n = int(std::ceil(2.0 * l_M * std::sqrt(2.0) * kmax /
                                  (0.9 * M_PI)));
            n += n % 2;
            r.recon_grid = make_grid(l_M, std::max(16, n));
        }
        r.cg_iterations = j.value("cg_iterations", 20);
        if (j.contains("fwi_frequencies"))
            r.fwi_frequencies = j.at("fwi_frequencies").get<std::vector<double>>();
        r.fwi_iterations = j.value("fwi_iterations", 50);
        if (j.contains("fwi_window_radius"))
            r.fwi_window_radius = j.at("fwi_window_radius").get<double>();
        r.fwi_gradient_smoothing = j.value("fwi_gradient_smoothing", 0.0);
        if (j.contains("psnr_window"))
            r.psnr_window = j.at("psnr_window").get<double>();
        if (j.contains("compare_models"))
            r.compare_models =
                j.at("compare_models").get<std::vector<std::string>>();
        r.acquisition.validate();
        return r;
    }

    ExperimentRecipe ExperimentRecipe::load(const std::filesystem::path& path)
    {
        std::ifstream is(path);
        if (!is)
            throw std::runtime_error("cannot open recipe " + path.string());
        std::string text((std::istreambuf_iterator<char>(is)),
                         std::istreambuf_iterator<char>());
        return from_json(text);
    }

    std::string ReconReport::to_json() const
    {
        nlohmann::json j;
        j["recipe"] = recipe;
        j["method"] = method;
        if (psnr_db) j["psnr_db"] = *psnr_db;
        j["iterations"] = iterations;
        j["history"] = history;
        return j.dump(2);
    }

    void run_forward(const ExperimentRecipe& recipe,
                     const std::filesystem::path& out_dir)
    {
        std::filesystem::create_directories(out_dir);
        ForwardOptions opts;
        opts.grid = recipe.solver_grid;
        const ForwardResult fr =
            forward_dataset(recipe.phantom, recipe.acquisition, opts);
        write_dataset(out_dir / "total", fr.total);
        write_dataset(out_dir / "scattered", fr.scattered);
        write_dataset(out_dir / "incident", fr.incident);

        write_field(out_dir / "ground_truth.fld",
                    render_scene(recipe.phantom, recipe.recon_grid));

        nlohmann::json diag;
        diag["recipe"] = recipe.name;
        diag["solver_grid"] = grid_to_json(recipe.solver_grid);
        double kmax = 0.0;
        for (double k0 : recipe.acquisition.wavenumbers)
            kmax = std::max(kmax, k0);
        diag["points_per_wavelength"] =
            2.0 * M_PI / (kmax * recipe.solver_grid.spacing());
        std::ofstream os(out_dir / "forward_manifest.json");
        os << diag.dump(2) << "\n";
        if (!os)
            throw std::runtime_error("write failed: " + out_dir.string());
    }

    namespace
    {
        Dataset born_equivalent_from(const Dataset& total,
                                     const Dataset& incident)
        {
            Dataset out;
            out.acquisition = total.acquisition;
            out.kind = DatasetKind::born_equivalent;
            for (const auto& [key, tr_tot] : total.traces)
            {
                const Trace& tr_inc = incident.trace(key.first, key.second);
                const double k0 =
                    total.acquisition.wavenumbers[key.second];
                Trace born = rytov_to_born(tr_tot, tr_inc);
                const cplx alpha = calibrate_incident(tr_inc, k0);
                for (cplx& v : born.values) v *= alpha;
                out.traces.emplace(key, std::move(born));
            }
            return out;
        }

        RealField scaled_truth(const SceneSpec& scene, const Grid& grid)
        {
            return render_scene(scene, grid);  // amplitudes at omega = 2 pi
        }
    }

    ReconReport run_reconstruct(const ExperimentRecipe& recipe,
                                const std::filesystem::path& data_dir,
                                const std::filesystem::path& out_dir)
    {
        std::filesystem::create_directories(out_dir);
        ReconReport report;
        report.recipe = recipe.name;
        report.method = method_name(recipe.method);

        RealField recon;
        if (recipe.method == ReconMethod::fwi)
        {
            const Dataset total = read_dataset(data_dir / "total");
            FwiConfig cfg;
            cfg.acquisition = total.acquisition;
            if (!recipe.fwi_frequencies.empty())
                cfg.frequencies = recipe.fwi_frequencies;
            else
            {
                for (double k0 : total.acquisition.wavenumbers)
                    cfg.frequencies.push_back(k0 * total.acquisition.c0);
                std::sort(cfg.frequencies.begin(), cfg.frequencies.end());
            }
            cfg.iters_per_frequency = recipe.fwi_iterations;
            cfg.initial_speed =
                RealField(recipe.solver_grid, total.acquisition.c0);
            cfg.window_radius = recipe.fwi_window_radius;
            cfg.gradient_smoothing = recipe.fwi_gradient_smoothing;
            cfg.reference_omega = reference_omega;
            const FwiResult fwi = fwi_run(cfg, total);
            recon = fwi.potential;
            report.history = fwi.report.misfit_history;
            report.iterations = int(fwi.report.misfit_history.size()) - 1;
            std::ofstream os(out_dir / "fwi_report.json");
            os << fwi.report.to_json() << "\n";
        }
        else
        {
            Dataset data;
            if (recipe.method == ReconMethod::born)
            {
                data = read_dataset(data_dir / "scattered");
            }
            else
            {
                const Dataset total = read_dataset(data_dir / "total");
                const Dataset incident = read_dataset(data_dir / "incident");
                data = born_equivalent_from(total, incident);
            }
            const CoverageSet samples = fdt_samples(data);
            const CgneResult cg =
                cgne_invert(samples, recipe.recon_grid, recipe.cg_iterations,
                            pick_ndft_method(samples, recipe.recon_grid));
            recon = cg.reconstruction;
            // the samples carry F f / k0^2 = c0^2 F s with s = 1/c^2 - 1/c0^2,
            // so the iterate recovers c0^2 s; f at the reference frequency is
            // omega_ref^2 s
            const double scale =
                (reference_omega / recipe.acquisition.c0) *
                (reference_omega / recipe.acquisition.c0);
            for (double& v : recon.values) v *= scale;
            report.history = cg.residual_norms;
            report.iterations = recipe.cg_iterations;
        }

        write_field(out_dir / "recon.fld", recon);

        const RealField truth = scaled_truth(recipe.phantom, recon.grid);
        try
        {
            report.psnr_db = psnr(truth, recon, recipe.psnr_window);
        }
        catch (const std::invalid_argument&)
        {
            report.psnr_db.reset();
        }

        std::ofstream os(out_dir / "report.json");
        os << report.to_json() << "\n";
        if (!os)
            throw std::runtime_error("write failed: " + out_dir.string());
        return report;
    }

    void run_compare_forward(const ExperimentRecipe& recipe,
                             const std::filesystem::path& out_csv)
    {
        const AcquisitionConfig& acq = recipe.acquisition;
        const Grid& grid = recipe.solver_grid;
        const double k0 = acq.wavenumbers.front();
        const double omega = k0 * acq.c0;
        const auto receiver_x = uniform_receivers(acq.l_M, acq.n_receivers);

        // f_ref declares amplitudes at omega = 2 pi; f_omega is the
        // potential at the compared frequency
        const RealField f_ref = render_scene(recipe.phantom, grid);
        RealField f_omega = f_ref;
        const double fscale = (omega / (2.0 * M_PI)) * (omega / (2.0 * M_PI));
        for (double& v : f_omega.values) v *= fscale;

        std::vector<std::string> models = recipe.compare_models;
        if (models.empty())
            models = {"pde-scattered", "born-pde", "born-convolution",
                      "line-source", "point-source"};

        std::vector<std::pair<std::string, Trace>> columns;
        std::vector<std::pair<std::string, cplx>> calibrations;

        for (const std::string& model : models)
        {
            AcquisitionConfig one = acq;
            one.n_angles = 1;
            one.wavenumbers = {k0};
            one.snr_db.reset();
            ForwardOptions opts;
            opts.grid = grid;

            if (model == "pde-scattered")
            {
                one.source = SourceSpec::plane();
                const ForwardResult fr = forward_dataset(f_ref, one, opts);
                columns.emplace_back(model, fr.scattered.trace(0, 0));
            }
            else if (model == "born-pde")
            {
                // background operator applied to the contrast source
                MediumOperator bg = assemble_homogeneous(grid, k0);
                const Eigen::VectorXcd u =
                    bg.solve(rhs_plane_wave_contrast(f_omega, k0));
                ComplexField uf(grid);
                for (std::size_t p = 0; p < uf.values.size(); ++p)
                    uf.values[p] = u[Eigen::Index(p)];
                columns.emplace_back(
                    model, sample_receivers(uf, receiver_x, acq.r_M));
            }
            else if (model == "born-convolution")
            {
                std::vector<point2> pts;
                pts.reserve(receiver_x.size());
                for (double x1 : receiver_x)
                    pts.push_back({x1, acq.r_M});
                const std::vector<cplx> vals = born_convolution(f_omega, k0, pts);
                Trace tr;
                tr.receiver_x = receiver_x;
                tr.height = acq.r_M;
                tr.values = vals;
                columns.emplace_back(model, std::move(tr));
            }
            else if (model == "line-source" || model == "point-source")
            {
                const double x2_src = -acq.r_M;
                if (model == "line-source")
                {
                    const double extent = 0.95 * grid.half_width;
                    const double wavelength = 2.0 * M_PI / k0;
                    const int n_sim = std::max(
                        2, int(std::ceil(2.0 * extent / (wavelength / 8.0))));
                    one.source = SourceSpec::line_at(x2_src, extent, n_sim);
                }
                else
                {
                    one.source = SourceSpec::point_at({0.0, x2_src});
                }
                const ForwardResult fr = forward_dataset(f_ref, one, opts);
                columns.emplace_back(model, fr.scattered.trace(0, 0));
                calibrations.emplace_back(
                    model, calibrate_incident(fr.incident.trace(0, 0), k0));
            }
            else
            {
                throw std::invalid_argument("compare-forward: unknown model " +
                                            model);
            }
        }

        std::ofstream os(out_csv);
        if (!os)
            throw std::runtime_error("cannot open " + out_csv.string());
        os.precision(17);
        for (const auto& [model, alpha] : calibrations)
            os << "# calibration " << model << ' ' << alpha.real() << ' '
               << alpha.imag() << '\n';
        os << "x1";
        for (const auto& [model, tr] : columns)
            os << ',' << model << "_re," << model << "_im";
        os << '\n';
        for (std::size_t j = 0; j < receiver_x.size(); ++j)
        {
            os << receiver_x[j];
            for (const auto& [model, tr] : columns)
                os << ',' << tr.values[j].real() << ',' << tr.values[j].imag();
            os << '\n';
        }
        if (!os)
            throw std::runtime_error("write failed: " + out_csv.string());
    }
}
