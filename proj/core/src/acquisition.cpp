#include "difftomo/acquisition.hpp"

#include <cmath>
#include <stdexcept>

namespace dt
{
    SourceSpec SourceSpec::point_at(point2 x0)
    {
        SourceSpec s;
        s.kind = Kind::point;
        s.origin = x0;
        return s;
    }

    SourceSpec SourceSpec::line_at(double x2, double extent, int n_sim)
    {
        if (n_sim < 1)
            throw std::invalid_argument("line source: N_sim must be >= 1");
        SourceSpec s;
        s.kind = Kind::line;
        s.positions.reserve(n_sim);
        for (int j = 0; j < n_sim; ++j)
        {
            const double x1 = n_sim == 1
                ? 0.0
                : -extent + 2.0 * extent * j / (n_sim - 1);
            s.positions.push_back({x1, x2});
        }
        return s;
    }

    double AcquisitionConfig::angle(int a) const
    {
        return 2.0 * M_PI * a / n_angles;
    }

    std::vector<double> AcquisitionConfig::angles() const
    {
        std::vector<double> out(n_angles);
        for (int a = 0; a < n_angles; ++a)
            out[a] = angle(a);
        return out;
    }

    void AcquisitionConfig::validate() const
    {
        if (n_angles < 1)
            throw std::invalid_argument("acquisition: n_angles must be >= 1");
        if (wavenumbers.empty())
            throw std::invalid_argument("acquisition: need at least one wavenumber");
        for (double k0 : wavenumbers)
            if (!(k0 > 0.0))
                throw std::invalid_argument("acquisition: wavenumbers must be positive");
        if (!(c0 > 0.0))
            throw std::invalid_argument("acquisition: c0 must be positive");
        if (!(l_M > 0.0))
            throw std::invalid_argument("acquisition: l_M must be positive");
        if (n_receivers < 1)
            throw std::invalid_argument("acquisition: need at least one receiver");
    }

    std::string to_string(DatasetKind k)
    {
        switch (k)
        {
            case DatasetKind::total: return "total";
            case DatasetKind::scattered: return "scattered";
            case DatasetKind::incident: return "incident";
            case DatasetKind::born_equivalent: return "born-equivalent";
        }
        throw std::logic_error("unreachable dataset kind");
    }

    DatasetKind dataset_kind_from_string(const std::string& s)
    {
        if (s == "total") return DatasetKind::total;
        if (s == "scattered") return DatasetKind::scattered;
        if (s == "incident") return DatasetKind::incident;
        if (s == "born-equivalent") return DatasetKind::born_equivalent;
        throw std::invalid_argument("unknown dataset kind: " + s);
    }

    const Trace& Dataset::trace(int a, int k) const
    {
        auto it = traces.find({a, k});
        if (it == traces.end())
            throw std::out_of_range("dataset: missing trace");
        return it->second;
    }

    void Dataset::validate() const
    {
        acquisition.validate();
        const std::size_t expected =
            std::size_t(acquisition.n_angles) * acquisition.wavenumbers.size();
        if (traces.size() != expected)
            throw std::invalid_argument("dataset: trace count does not match acquisition");
        for (const auto& [key, tr] : traces)
        {
            if (key.first < 0 || key.first >= acquisition.n_angles ||
                key.second < 0 || key.second >= int(acquisition.wavenumbers.size()))
                throw std::invalid_argument("dataset: trace key outside acquisition");
            if (tr.values.size() != tr.receiver_x.size())
                throw std::invalid_argument("dataset: trace length mismatch");
        }
    }
}
