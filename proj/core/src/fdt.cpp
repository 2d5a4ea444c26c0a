#include "difftomo/fdt.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <fftw3.h>

namespace dt
{
    double kappa(double k1, double k0)
    {
        if (!(k0 > 0.0))
            throw std::invalid_argument("kappa: k0 must be positive");
        if (std::abs(k1) > k0)
            throw std::domain_error("kappa: |k1| > k0 is evanescent");
        return std::sqrt(k0 * k0 - k1 * k1);
    }

    Spectrum trace_dft(const Trace& trace, double l_M)
    {
        const int m = int(trace.values.size());
        if (m < 2 || m % 2 != 0)
            throw std::invalid_argument("trace_dft: need even m >= 2");
        if (!(l_M > 0.0))
            throw std::invalid_argument("trace_dft: l_M must be positive");
        if (int(trace.receiver_x.size()) != m)
            throw std::invalid_argument("trace_dft: receiver/value size mismatch");
        const double hx = 2.0 * l_M / m;
        for (int j = 0; j < m; ++j)
            if (std::abs(trace.receiver_x[j] - (j - m / 2) * hx) > 1e-9 * l_M)
                throw std::invalid_argument(
                    "trace_dft: receivers are not the uniform grid (2 l_M/m) I_m");

        // x_j k1_l = (2 pi/m)(j - m/2)(l - m/2); pull the half shifts out of
        // the plain DFT: multiply input by (-1)^j, output by (-1)^l e^{-i pi m/2}
        std::vector<cplx> in(m), out(m);
        for (int j = 0; j < m; ++j)
            in[j] = (j % 2 == 0 ? 1.0 : -1.0) * trace.values[j];
        fftw_plan plan = fftw_plan_dft_1d(
            m, reinterpret_cast<fftw_complex*>(in.data()),
            reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD,
            FFTW_ESTIMATE);
        fftw_execute(plan);
        fftw_destroy_plan(plan);

        static const cplx quarter_turns[4] = {
            {1.0, 0.0}, {0.0, -1.0}, {-1.0, 0.0}, {0.0, 1.0}};
        const cplx shift = quarter_turns[(m / 2) % 4];  // e^{-i pi m/2}
        const double scale = hx / std::sqrt(2.0 * M_PI);

        Spectrum sp;
        sp.k1.resize(m);
        sp.values.resize(m);
        for (int l = 0; l < m; ++l)
        {
            sp.k1[l] = (l - m / 2) * M_PI / l_M;
            sp.values[l] =
                scale * shift * (l % 2 == 0 ? 1.0 : -1.0) * out[l];
        }
        return sp;
    }

    double CoverageSet::max_norm() const
    {
        double r = 0.0;
        for (const auto& s : samples)
            r = std::max(r, std::hypot(s.y[0], s.y[1]));
        return r;
    }

    void CoverageSet::write_csv(const std::filesystem::path& path) const
    {
        std::ofstream os(path);
        if (!os) throw std::runtime_error("cannot open " + path.string());
        os << "y1,y2,re,im,angle_index,k0,k1_index\n";
        os.precision(17);
        for (const auto& s : samples)
            os << s.y[0] << ',' << s.y[1] << ',' << s.value.real() << ','
               << s.value.imag() << ',' << s.angle_index << ',' << s.k0 << ','
               << s.k1_index << '\n';
        if (!os) throw std::runtime_error("write failed: " + path.string());
    }

    namespace
    {
        void append_samples(CoverageSet& set, const Spectrum* sp, double k0,
                            double alpha, int angle_index, double r_M,
                            std::size_t m)
        {
            const double ca = std::cos(alpha), sa = std::sin(alpha);
            for (std::size_t l = 0; l < m; ++l)
            {
                const double k1 = sp->k1[l];
                if (std::abs(k1) >= k0 * (1.0 - evanescent_cutoff)) continue;
                const double kp = kappa(k1, k0);
                KSpaceSample s;
                const double u1 = k1, u2 = kp - k0;
                s.y = {ca * u1 - sa * u2, sa * u1 + ca * u2};
                s.angle_index = angle_index;
                s.k0 = k0;
                s.k1_index = int(l) - int(m) / 2;
                // k0^2 F f = -i sqrt(2/pi) kappa e^{-i kappa r_M} F1 u
                const cplx factor =
                    cplx{0.0, -1.0} * std::sqrt(2.0 / M_PI) * kp *
                    cplx{std::cos(kp * r_M), -std::sin(kp * r_M)} /
                    (k0 * k0);
                s.value = factor * sp->values[l];
                set.samples.push_back(s);
            }
        }
    }

    CoverageSet fdt_samples(const Dataset& dataset)
    {
        dataset.validate();
        if (dataset.kind != DatasetKind::born_equivalent &&
            dataset.kind != DatasetKind::scattered)
            throw std::invalid_argument(
                "fdt_samples: need scattered or born-equivalent traces");
        const AcquisitionConfig& acq = dataset.acquisition;

        CoverageSet set;
        for (const auto& [key, tr] : dataset.traces)
        {
            const auto [a, k] = key;
            const double k0 = acq.wavenumbers[k];
            const Spectrum sp = trace_dft(tr, acq.l_M);
            append_samples(set, &sp, k0, acq.angle(a), a, acq.r_M,
                           sp.values.size());
        }
        return set;
    }

    CoverageSet coverage_geometry(const std::vector<double>& wavenumbers,
                                  const std::vector<double>& angles, int m,
                                  double l_M)
    {
        if (m < 2 || m % 2 != 0)
            throw std::invalid_argument("coverage_geometry: need even m >= 2");
        if (!(l_M > 0.0))
            throw std::invalid_argument("coverage_geometry: l_M must be positive");
        CoverageSet set;
        for (double k0 : wavenumbers)
        {
            if (!(k0 > 0.0))
                throw std::invalid_argument(
                    "coverage_geometry: wavenumbers must be positive");
            for (std::size_t a = 0; a < angles.size(); ++a)
            {
                const double ca = std::cos(angles[a]), sa = std::sin(angles[a]);
                for (int l = 0; l < m; ++l)
                {
                    const double k1 = (l - m / 2) * M_PI / l_M;
                    if (std::abs(k1) >= k0 * (1.0 - evanescent_cutoff))
                        continue;
                    const double u2 = kappa(k1, k0) - k0;
                    KSpaceSample s;
                    s.y = {ca * k1 - sa * u2, sa * k1 + ca * u2};
                    s.angle_index = int(a);
                    s.k0 = k0;
                    s.k1_index = l - m / 2;
                    set.samples.push_back(s);
                }
            }
        }
        return set;
    }

    bool interval_coverage_contains(point2 y, double kmin, double kmax)
    {
        if (!(kmin > 0.0) || !(kmax >= kmin))
            throw std::invalid_argument(
                "interval_coverage_contains: need 0 < kmin <= kmax");
        const double r2 = y[0] * y[0] + y[1] * y[1];
        if (r2 == 0.0) return true;
        // y on the circle of radius k0 about (0, -k0) iff k0 = -|y|^2/(2 y2)
        if (!(y[1] < 0.0)) return false;
        const double k0 = -r2 / (2.0 * y[1]);
        return k0 >= kmin && k0 <= kmax;
    }

    std::vector<double> unwrap_1d(const std::vector<double>& phases)
    {
        std::vector<double> out(phases.size());
        double offset = 0.0;
        for (std::size_t j = 0; j < phases.size(); ++j)
        {
            if (j > 0)
            {
                double d = phases[j] - phases[j - 1];
                while (d > M_PI) { d -= 2.0 * M_PI; offset -= 2.0 * M_PI; }
                while (d <= -M_PI) { d += 2.0 * M_PI; offset += 2.0 * M_PI; }
            }
            out[j] = phases[j] + offset;
        }
        return out;
    }

    Trace rytov_to_born(const Trace& total, const Trace& incident)
    {
        if (total.values.size() != incident.values.size() ||
            total.receiver_x != incident.receiver_x)
            throw std::invalid_argument("rytov_to_born: trace mismatch");

        const std::size_t m = total.values.size();
        std::vector<cplx> ratio(m);
        std::vector<double> phase(m);
        for (std::size_t j = 0; j < m; ++j)
        {
            if (incident.values[j] == cplx{})
                throw std::domain_error("rytov_to_born: incident trace has a zero");
            ratio[j] = total.values[j] / incident.values[j];
            if (ratio[j] == cplx{})
                throw std::domain_error(
                    "rytov_to_born: vanishing total/incident ratio");
            phase[j] = std::arg(ratio[j]);
        }
        const std::vector<double> unwrapped = unwrap_1d(phase);

        Trace out = total;
        for (std::size_t j = 0; j < m; ++j)
            out.values[j] = incident.values[j] *
                            cplx{std::log(std::abs(ratio[j])), unwrapped[j]};
        return out;
    }
}
