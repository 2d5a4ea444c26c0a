#ifndef DIFFTOMO_IO_HPP
#define DIFFTOMO_IO_HPP

#include <filesystem>
#include <string>
#include <variant>

#include "difftomo/acquisition.hpp"
#include "difftomo/field.hpp"

namespace dt
{
    // Field file layout (little endian):
    //   bytes  0..11  magic "DIFFTOMOFLD\0"
    //   bytes 12..15  uint32 version (currently 1)
    //   r_s     float64
    //   N       uint32
    //   kind    uint8 (real = 0, complex = 1)
    //   payload N^2 float64 (real) or 2 N^2 float64 interleaved re/im,
    //           row-major with x2 as the slow axis.
    void write_field(const std::filesystem::path& path, const RealField& f);
    void write_field(const std::filesystem::path& path, const ComplexField& f);

    using AnyField = std::variant<RealField, ComplexField>;
    AnyField read_field(const std::filesystem::path& path);
    RealField read_real_field(const std::filesystem::path& path);
    ComplexField read_complex_field(const std::filesystem::path& path);

    // Dataset directory: manifest.json (acquisition parameters, kind, angle
    // and k0 lists, blob references) plus one binary blob per (angle, k0)
    // holding m complex float64.
    void write_dataset(const std::filesystem::path& dir, const Dataset& ds);
    Dataset read_dataset(const std::filesystem::path& dir);

    // 8-bit grayscale PGM of the centered square window (side `window` in
    // length units, or the full grid). Values are mapped linearly from
    // [lo, hi] to [0, 255] with std::lround and clamping, so the midpoint
    // of the range maps to 128.
    void write_pgm(const std::filesystem::path& path, const RealField& f,
                   double lo, double hi,
                   std::optional<double> window = std::nullopt);
}

#endif
