#include "difftomo/io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "json_detail.hpp"

namespace dt
{
    namespace
    {
        constexpr std::array<char, 12> field_magic = {
            'D', 'I', 'F', 'F', 'T', 'O', 'M', 'O', 'F', 'L', 'D', '\0'};
        constexpr std::uint32_t field_version = 1;

        void put_u32(std::ostream& os, std::uint32_t v)
        {
            char b[4] = {char(v & 0xff), char((v >> 8) & 0xff),
                         char((v >> 16) & 0xff), char((v >> 24) & 0xff)};
            os.write(b, 4);
        }

        std::uint32_t get_u32(std::istream& is)
        {
            unsigned char b[4];
            is.read(reinterpret_cast<char*>(b), 4);
            return std::uint32_t(b[0]) | (std::uint32_t(b[1]) << 8) |
                   (std::uint32_t(b[2]) << 16) | (std::uint32_t(b[3]) << 24);
        }

        void put_f64(std::ostream& os, double v)
        {
            // host is little endian; documented in the format comment
            os.write(reinterpret_cast<const char*>(&v), 8);
        }

        double get_f64(std::istream& is)
        {
            double v;
            is.read(reinterpret_cast<char*>(&v), 8);
            return v;
        }

        void write_header(std::ostream& os, const Grid& g, std::uint8_t kind)
        {
            os.write(field_magic.data(), field_magic.size());
            put_u32(os, field_version);
            put_f64(os, g.half_width);
            put_u32(os, std::uint32_t(g.n));
            os.put(char(kind));
        }

        std::pair<Grid, std::uint8_t> read_header(std::istream& is,
                                                  const std::filesystem::path& path)
        {
            std::array<char, 12> magic{};
            is.read(magic.data(), magic.size());
            if (!is || magic != field_magic)
                throw std::runtime_error("field file: bad magic in " + path.string());
            if (get_u32(is) != field_version)
                throw std::runtime_error("field file: unsupported version in " +
                                         path.string());
            const double r_s = get_f64(is);
            const std::uint32_t n = get_u32(is);
            const std::uint8_t kind = std::uint8_t(is.get());
            if (!is)
                throw std::runtime_error("field file: truncated header in " +
                                         path.string());
            if (!(r_s > 0.0) || n < 2 || n % 2 != 0 || kind > 1)
                throw std::runtime_error("field file: invalid header in " +
                                         path.string());
            return {make_grid(r_s, int(n)), kind};
        }
    }

    void write_field(const std::filesystem::path& path, const RealField& f)
    {
        std::ofstream os(path, std::ios::binary);
        if (!os) throw std::runtime_error("cannot open " + path.string());
        write_header(os, f.grid, 0);
        os.write(reinterpret_cast<const char*>(f.values.data()),
                 std::streamsize(f.values.size() * sizeof(double)));
        if (!os) throw std::runtime_error("write failed: " + path.string());
    }

    void write_field(const std::filesystem::path& path, const ComplexField& f)
    {
        std::ofstream os(path, std::ios::binary);
        if (!os) throw std::runtime_error("cannot open " + path.string());
        write_header(os, f.grid, 1);
        os.write(reinterpret_cast<const char*>(f.values.data()),
                 std::streamsize(f.values.size() * sizeof(cplx)));
        if (!os) throw std::runtime_error("write failed: " + path.string());
    }

    AnyField read_field(const std::filesystem::path& path)
    {
        std::ifstream is(path, std::ios::binary);
        if (!is) throw std::runtime_error("cannot open " + path.string());
        auto [grid, kind] = read_header(is, path);
        if (kind == 0)
        {
            RealField f(grid);
            is.read(reinterpret_cast<char*>(f.values.data()),
                    std::streamsize(f.values.size() * sizeof(double)));
            if (std::size_t(is.gcount()) != f.values.size() * sizeof(double))
                throw std::runtime_error("field file: truncated payload in " +
                                         path.string());
            return f;
        }
        ComplexField f(grid);
        is.read(reinterpret_cast<char*>(f.values.data()),
                std::streamsize(f.values.size() * sizeof(cplx)));
        if (std::size_t(is.gcount()) != f.values.size() * sizeof(cplx))
            throw std::runtime_error("field file: truncated payload in " +
                                     path.string());
        return f;
    }

    RealField read_real_field(const std::filesystem::path& path)
    {
        AnyField f = read_field(path);
        if (auto* r = std::get_if<RealField>(&f)) return std::move(*r);
        throw std::runtime_error("expected real field in " + path.string());
    }

    ComplexField read_complex_field(const std::filesystem::path& path)
    {
        AnyField f = read_field(path);
        if (auto* c = std::get_if<ComplexField>(&f)) return std::move(*c);
        throw std::runtime_error("expected complex field in " + path.string());
    }

    namespace detail
    {
        nlohmann::json acquisition_to_json(const AcquisitionConfig& acq)
        {
            nlohmann::json j;
            j["n_angles"] = acq.n_angles;
            j["wavenumbers"] = acq.wavenumbers;
            j["c0"] = acq.c0;
            j["r_M"] = acq.r_M;
            j["l_M"] = acq.l_M;
            j["n_receivers"] = acq.n_receivers;
            if (acq.snr_db) j["snr_db"] = *acq.snr_db;
            j["seed"] = acq.seed;
            switch (acq.source.kind)
            {
                case SourceSpec::Kind::plane_wave:
                    j["source"] = {{"kind", "plane"}};
                    break;
                case SourceSpec::Kind::point:
                    j["source"] = {{"kind", "point"},
                                   {"x0", {acq.source.origin[0], acq.source.origin[1]}}};
                    break;
                case SourceSpec::Kind::line:
                {
                    nlohmann::json pos = nlohmann::json::array();
                    for (const auto& p : acq.source.positions)
                        pos.push_back({p[0], p[1]});
                    j["source"] = {{"kind", "line"}, {"positions", pos}};
                    break;
                }
            }
            return j;
        }

        AcquisitionConfig acquisition_from_json(const nlohmann::json& j)
        {
            AcquisitionConfig acq;
            acq.n_angles = j.at("n_angles").get<int>();
            acq.wavenumbers = j.at("wavenumbers").get<std::vector<double>>();
            acq.c0 = j.at("c0").get<double>();
            acq.r_M = j.at("r_M").get<double>();
            acq.l_M = j.at("l_M").get<double>();
            acq.n_receivers = j.at("n_receivers").get<int>();
            if (j.contains("snr_db")) acq.snr_db = j.at("snr_db").get<double>();
            acq.seed = j.value("seed", std::uint64_t(0));
            const auto& src = j.at("source");
            const std::string kind = src.at("kind").get<std::string>();
            if (kind == "plane")
                acq.source = SourceSpec::plane();
            else if (kind == "point")
            {
                auto x0 = src.at("x0").get<std::array<double, 2>>();
                acq.source = SourceSpec::point_at(x0);
            }
            else if (kind == "line")
            {
                if (src.contains("positions"))
                {
                    acq.source.kind = SourceSpec::Kind::line;
                    for (const auto& p : src.at("positions"))
                        acq.source.positions.push_back(
                            {p.at(0).get<double>(), p.at(1).get<double>()});
                }
                else
                {
                    // compact authoring form: uniform points on a segment
                    acq.source = SourceSpec::line_at(
                        src.at("height").get<double>(),
                        src.at("extent").get<double>(),
                        src.at("count").get<int>());
                }
            }
            else
                throw std::runtime_error("unknown source kind: " + kind);
            return acq;
        }
    }

    void write_dataset(const std::filesystem::path& dir, const Dataset& ds)
    {
        ds.validate();
        std::filesystem::create_directories(dir);

        nlohmann::json manifest;
        manifest["format"] = "difftomo-dataset";
        manifest["version"] = 1;
        manifest["kind"] = to_string(ds.kind);
        manifest["acquisition"] = detail::acquisition_to_json(ds.acquisition);

        nlohmann::json entries = nlohmann::json::array();
        for (const auto& [key, tr] : ds.traces)
        {
            const auto [a, k] = key;
            const std::string name =
                "trace_a" + std::to_string(a) + "_k" + std::to_string(k) + ".bin";
            std::ofstream os(dir / name, std::ios::binary);
            if (!os) throw std::runtime_error("cannot open " + (dir / name).string());
            os.write(reinterpret_cast<const char*>(tr.values.data()),
                     std::streamsize(tr.values.size() * sizeof(cplx)));
            entries.push_back({{"angle_index", a},
                               {"k_index", k},
                               {"angle", ds.acquisition.angle(a)},
                               {"k0", ds.acquisition.wavenumbers[k]},
                               {"file", name}});
        }
        manifest["traces"] = entries;

        std::ofstream os(dir / "manifest.json");
        os << manifest.dump(2) << "\n";
        if (!os) throw std::runtime_error("write failed: " + dir.string());
    }

    Dataset read_dataset(const std::filesystem::path& dir)
    {
        std::ifstream is(dir / "manifest.json");
        if (!is)
            throw std::runtime_error("cannot open manifest in " + dir.string());
        nlohmann::json manifest = nlohmann::json::parse(is);
        if (manifest.value("format", "") != "difftomo-dataset")
            throw std::runtime_error("not a dataset manifest: " + dir.string());

        Dataset ds;
        ds.kind = dataset_kind_from_string(manifest.at("kind").get<std::string>());
        ds.acquisition = detail::acquisition_from_json(manifest.at("acquisition"));

        const auto receiver_x =
            uniform_receivers(ds.acquisition.l_M, ds.acquisition.n_receivers);
        for (const auto& e : manifest.at("traces"))
        {
            const int a = e.at("angle_index").get<int>();
            const int k = e.at("k_index").get<int>();
            Trace tr;
            tr.receiver_x = receiver_x;
            tr.height = ds.acquisition.r_M;
            tr.values.resize(receiver_x.size());
            const auto path = dir / e.at("file").get<std::string>();
            std::ifstream blob(path, std::ios::binary);
            if (!blob) throw std::runtime_error("cannot open " + path.string());
            blob.read(reinterpret_cast<char*>(tr.values.data()),
                      std::streamsize(tr.values.size() * sizeof(cplx)));
            if (std::size_t(blob.gcount()) != tr.values.size() * sizeof(cplx))
                throw std::runtime_error("truncated trace blob: " + path.string());
            ds.traces.emplace(std::pair{a, k}, std::move(tr));
        }
        ds.validate();
        return ds;
    }

    void write_pgm(const std::filesystem::path& path, const RealField& f,
                   double lo, double hi, std::optional<double> window)
    {
        if (!(hi > lo))
            throw std::invalid_argument("write_pgm: need hi > lo");
        const Grid& g = f.grid;
        int i0 = 0, i1 = g.n;
        if (window)
        {
            if (*window > 2.0 * g.half_width + g.spacing())
                throw std::invalid_argument("write_pgm: window larger than grid");
            const double half = *window / 2.0;
            while (i0 < g.n && g.coord(i0) < -half) ++i0;
            while (i1 > i0 && g.coord(i1 - 1) > half) --i1;
        }
        const int w = i1 - i0;
        if (w <= 0) throw std::invalid_argument("write_pgm: empty window");

        std::ofstream os(path, std::ios::binary);
        if (!os) throw std::runtime_error("cannot open " + path.string());
        os << "P5\n" << w << " " << w << "\n255\n";
        // top row = largest x2
        for (int j = i1 - 1; j >= i0; --j)
            for (int i = i0; i < i1; ++i)
            {
                long v = std::lround(255.0 * (f.at(i, j) - lo) / (hi - lo));
                v = std::clamp(v, 0L, 255L);
                os.put(char(static_cast<unsigned char>(v)));
            }
        if (!os) throw std::runtime_error("write failed: " + path.string());
    }
}
