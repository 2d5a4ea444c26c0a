#ifndef DIFFTOMO_ACQUISITION_HPP
#define DIFFTOMO_ACQUISITION_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "difftomo/field.hpp"

namespace dt
{
    struct SourceSpec
    {
        enum class Kind { plane_wave, point, line };
        Kind kind = Kind::plane_wave;
        point2 origin{0.0, 0.0};               // point source position
        std::vector<point2> positions;         // line source positions

        static SourceSpec plane() { return {}; }
        static SourceSpec point_at(point2 x0);
        // n_sim equispaced points on x1 in [-extent, extent] at fixed x2.
        static SourceSpec line_at(double x2, double extent, int n_sim);
    };

    struct AcquisitionConfig
    {
        int n_angles = 1;                      // equispaced on [0, 2pi)
        std::vector<double> wavenumbers;       // k0 = omega / c0, all > 0
        double c0 = 1.0;
        SourceSpec source;
        double r_M = 10.0;                     // measurement line height
        double l_M = 10.0;                     // receiver half-extent
        int n_receivers = 200;
        std::optional<double> snr_db;
        std::uint64_t seed = 0;

        double angle(int a) const;
        std::vector<double> angles() const;
        void validate() const;                 // throws std::invalid_argument
    };

    enum class DatasetKind { total, scattered, incident, born_equivalent };

    std::string to_string(DatasetKind k);
    DatasetKind dataset_kind_from_string(const std::string& s);

    // One trace per (angle index, wavenumber index) declared in `acquisition`.
    struct Dataset
    {
        AcquisitionConfig acquisition;
        DatasetKind kind = DatasetKind::total;
        // key: (angle index, wavenumber index)
        std::map<std::pair<int, int>, Trace> traces;

        const Trace& trace(int a, int k) const;
        void validate() const;
    };
}

#endif
