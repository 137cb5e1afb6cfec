#ifndef SPHEREWAVE_IO_HPP
#define SPHEREWAVE_IO_HPP

// Text formats and seeded test-signal generation. All files are versioned,
// line-oriented and written with 17 significant digits so a write/read
// round trip is lossless.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "frame.hpp"
#include "wavelet.hpp"

namespace spherewave {

namespace detail {

inline std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

[[noreturn]] inline void parse_fail(const std::string& path, std::size_t line, const std::string& what)
{
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

// Uniform double in [-1, 1) from the generator's raw bits; identical on
// every platform, unlike the distributions in <random>.
inline double uniform_pm1(std::mt19937_64& rng) { return 2.0 * ((rng() >> 11) * 0x1p-53) - 1.0; }

} // namespace detail

// ---------------------------------------------------------------- signals

// Seeded band-limited test signal: independent uniform complex coefficients
// on every index of degree <= max_degree, normalized to unit energy.
inline CoefficientVector random_signal(int d, int max_degree, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    CoefficientVector f(d);
    for (int n = 0; n <= max_degree; ++n) {
        for (const auto& idx : enumerate_indices(d, n)) {
            const double re = detail::uniform_pm1(rng);
            const double im = detail::uniform_pm1(rng);
            f.set(idx, {re, im});
        }
    }
    const double norm = std::sqrt(f.norm2());
    if (norm > 0.0) f *= 1.0 / norm;
    return f;
}

// ----------------------------------------------------- coefficient files

inline void write_coeffs(const CoefficientVector& f, const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_coeffs: cannot open " + path);
    out << "spherewave-coeffs v1\n";
    out << "d " << f.dim() << " maxdeg " << f.max_degree() << "\n";
    for (const auto& [idx, v] : f.entries()) {
        out << idx.n;
        for (int k : idx.k) out << ' ' << k;
        out << ' ' << detail::format_double(v.real()) << ' ' << detail::format_double(v.imag()) << "\n";
    }
    if (!out) throw std::runtime_error("write_coeffs: write failed for " + path);
}

inline CoefficientVector read_coeffs(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_coeffs: cannot open " + path);
    std::string line;
    std::size_t lineno = 0;
    auto next_line = [&](bool required) {
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty() && line[0] != '#') return true;
        }
        if (required) detail::parse_fail(path, lineno, "unexpected end of file");
        return false;
    };
    next_line(true);
    if (line != "spherewave-coeffs v1") detail::parse_fail(path, lineno, "unrecognized header");
    next_line(true);
    int d = 0, maxdeg = 0;
    {
        std::istringstream hs(line);
        std::string kd, km;
        if (!(hs >> kd >> d >> km >> maxdeg) || kd != "d" || km != "maxdeg" || d < 3)
            detail::parse_fail(path, lineno, "malformed dimension header");
    }
    CoefficientVector f(d);
    while (next_line(false)) {
        std::istringstream rs(line);
        std::vector<std::string> tok;
        std::string t;
        while (rs >> t) tok.push_back(t);
        if (tok.size() != static_cast<std::size_t>(d + 1)) detail::parse_fail(path, lineno, "malformed row");
        HarmonicIndex idx;
        idx.d = d;
        idx.k.resize(d - 2);
        char* end = nullptr;
        auto to_int = [&](const std::string& s) {
            const long v = std::strtol(s.c_str(), &end, 10);
            if (end != s.c_str() + s.size()) detail::parse_fail(path, lineno, "malformed row");
            return static_cast<int>(v);
        };
        auto to_double = [&](const std::string& s) {
            const double v = std::strtod(s.c_str(), &end);
            if (end != s.c_str() + s.size()) detail::parse_fail(path, lineno, "malformed row");
            return v;
        };
        idx.n = to_int(tok[0]);
        for (int i = 0; i < d - 2; ++i) idx.k[i] = to_int(tok[1 + i]);
        const double re = to_double(tok[d - 1]);
        const double im = to_double(tok[d]);
        try {
            validate_index(idx);
        } catch (const std::exception& e) {
            detail::parse_fail(path, lineno, e.what());
        }
        if (idx.n > maxdeg) detail::parse_fail(path, lineno, "degree exceeds declared maximum");
        if (f.get(idx) != cplx(0.0)) detail::parse_fail(path, lineno, "duplicate index");
        f.set(idx, {re, im});
    }
    return f;
}

// ---------------------------------------------------- frame coefficients

inline void write_frame_coeffs(const FrameCoefficients& c, const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_frame_coeffs: cannot open " + path);
    out << "spherewave-frame-coeffs v1\n";
    out << "Jmax " << c.max_scale() << "\n";
    out << "0 0 " << detail::format_double(c.scale0().real()) << ' ' << detail::format_double(c.scale0().imag())
        << "\n";
    for (int j = 1; j <= c.max_scale(); ++j) {
        const auto& sc = c.at_scale(j);
        for (std::size_t i = 0; i < sc.size(); ++i) {
            if (sc[i] == cplx(0.0)) continue;
            out << j << ' ' << i << ' ' << detail::format_double(sc[i].real()) << ' '
                << detail::format_double(sc[i].imag()) << "\n";
        }
    }
    if (!out) throw std::runtime_error("write_frame_coeffs: write failed for " + path);
}

inline FrameCoefficients read_frame_coeffs(const Frame& fr, const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_frame_coeffs: cannot open " + path);
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line) || line != "spherewave-frame-coeffs v1")
        detail::parse_fail(path, ++lineno, "unrecognized header");
    ++lineno;
    int jmax = 0;
    if (!std::getline(in, line)) detail::parse_fail(path, ++lineno, "unexpected end of file");
    ++lineno;
    {
        std::istringstream hs(line);
        std::string kj;
        if (!(hs >> kj >> jmax) || kj != "Jmax") detail::parse_fail(path, lineno, "malformed header");
    }
    if (jmax != fr.max_scale()) detail::parse_fail(path, lineno, "scale count does not match the frame");
    FrameCoefficients c(fr);
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream rs(line);
        int j;
        std::size_t idx;
        double re, im;
        if (!(rs >> j >> idx >> re >> im)) detail::parse_fail(path, lineno, "malformed row");
        if (j < 0 || j > jmax) detail::parse_fail(path, lineno, "scale out of range");
        if (idx >= fr.atom_count(j)) detail::parse_fail(path, lineno, "atom index out of range");
        c.set(j, idx, {re, im});
    }
    return c;
}

// ------------------------------------------------------------ frame files

inline const char* profile_name(ProfileKind k)
{
    switch (k) {
        case ProfileKind::Zonal: return "zonal";
        case ProfileKind::SymmetricOptimal: return "optimal";
        case ProfileKind::CustomD3: return "customd3";
        case ProfileKind::CustomSymmetric: return "customsym";
    }
    return "?";
}

// Frame description: parameters (plus any custom directionality tables) in
// the header, then the realized grids (azimuth counts, latitude
// nodes/weights, stabilizer nodes/weights) as auditable rows. The file is
// self-contained: read_frame reconstructs the frame from the header and
// verifies the grid rows against the reconstruction.
inline void write_frame(const Frame& fr, const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_frame: cannot open " + path);
    out << "spherewave-frame v1\n";
    out << "d " << fr.dim() << " K " << fr.order() << " Jmax " << fr.max_scale() << " filter "
        << (fr.filter().kind == FilterKind::SmoothBump ? "bump" : "spline") << " q " << fr.filter().q << " profile "
        << profile_name(fr.profile().kind()) << "\n";
    const auto& prof = fr.profile();
    if (prof.kind() == ProfileKind::CustomD3) {
        out << "profiletable d3 " << prof.K() << "\n";
        for (int n = 1; n <= prof.K(); ++n)
            for (int k = -n; k <= n; ++k)
                out << n << ' ' << k << ' ' << detail::format_double(prof.d3_value(n, k).real()) << ' '
                    << detail::format_double(prof.d3_value(n, k).imag()) << "\n";
    } else if (prof.kind() == ProfileKind::CustomSymmetric) {
        out << "profiletable sym " << prof.K() << "\n";
        for (int n = 1; n <= prof.K(); ++n)
            for (int m = 0; m <= n; ++m) out << n << ' ' << m << ' ' << detail::format_double(prof.sym_value(n, m)) << "\n";
    }
    for (int j = 1; j <= fr.max_scale(); ++j) {
        const FrameScale& sc = fr.scale(j);
        out << "scale " << j << " azimuth " << sc.positions.azimuth_count() << " atoms " << sc.atom_count() << "\n";
        const auto& lats = sc.positions.latitude_rules();
        for (std::size_t lev = 0; lev < lats.size(); ++lev) {
            out << "lat " << lev + 2 << " nodes " << lats[lev].nodes.size() << "\n";
            for (std::size_t i = 0; i < lats[lev].nodes.size(); ++i)
                out << detail::format_double(lats[lev].nodes[i]) << ' '
                    << detail::format_double(lats[lev].weights[i]) << "\n";
        }
        if (sc.directions.kind() == DirectionalRule::Kind::so2) {
            out << "dir so2 nodes " << sc.directions.count() << "\n";
            for (std::size_t m = 0; m < sc.directions.count(); ++m)
                out << detail::format_double(sc.directions.angle(m)) << ' '
                    << detail::format_double(sc.directions.weight(m)) << "\n";
        } else {
            out << "dir sphere nodes " << sc.directions.count() << "\n";
            for (std::size_t m = 0; m < sc.directions.count(); ++m) {
                const auto p = sc.directions.direction(m).cartesian();
                for (double v : p) out << detail::format_double(v) << ' ';
                out << detail::format_double(sc.directions.weight(m)) << "\n";
            }
        }
    }
    if (!out) throw std::runtime_error("write_frame: write failed for " + path);
}

// Reconstruct a frame from its description file. The grids in the file are
// compared against the rebuilt frame; any mismatch is an error, so a loaded
// frame is guaranteed to be the one that produced the file.
inline Frame read_frame(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_frame: cannot open " + path);
    std::string line;
    std::size_t lineno = 0;
    auto next = [&]() {
        if (!std::getline(in, line)) detail::parse_fail(path, lineno + 1, "unexpected end of file");
        ++lineno;
    };
    next();
    if (line != "spherewave-frame v1") detail::parse_fail(path, lineno, "unrecognized header");
    next();
    int d = 0, K = 0, jmax = 0, q = 0;
    std::string filter_name, prof_name;
    {
        std::istringstream hs(line);
        std::string t1, t2, t3, t4, t5, t6;
        if (!(hs >> t1 >> d >> t2 >> K >> t3 >> jmax >> t4 >> filter_name >> t5 >> q >> t6 >> prof_name) ||
            t1 != "d" || t2 != "K" || t3 != "Jmax" || t4 != "filter" || t5 != "q" || t6 != "profile")
            detail::parse_fail(path, lineno, "malformed frame header");
    }
    const FilterProfile filt = filter_name == "bump" ? FilterProfile::smooth_bump() : FilterProfile::spline(q);
    DirectionalProfile prof = DirectionalProfile::zonal();
    if (prof_name == "optimal") {
        prof = optimal_profile(d, K);
    } else if (prof_name == "customd3" || prof_name == "customsym") {
        next();
        std::istringstream ts(line);
        std::string tag, kind;
        int tk = 0;
        if (!(ts >> tag >> kind >> tk) || tag != "profiletable" || tk != K)
            detail::parse_fail(path, lineno, "missing profile table");
        if (kind == "d3") {
            std::vector<std::vector<cplx>> rows(K);
            for (int n = 1; n <= K; ++n) rows[n - 1].assign(2 * n + 1, cplx(0.0));
            for (int n = 1; n <= K; ++n)
                for (int k = -n; k <= n; ++k) {
                    next();
                    std::istringstream rs(line);
                    int rn, rk;
                    double re, im;
                    if (!(rs >> rn >> rk >> re >> im) || rn != n || rk != k)
                        detail::parse_fail(path, lineno, "malformed profile row");
                    rows[n - 1][k + n] = {re, im};
                }
            prof = DirectionalProfile::custom_d3(K, std::move(rows));
        } else {
            std::vector<std::vector<double>> rows(K);
            for (int n = 1; n <= K; ++n) rows[n - 1].assign(n + 1, 0.0);
            for (int n = 1; n <= K; ++n)
                for (int m = 0; m <= n; ++m) {
                    next();
                    std::istringstream rs(line);
                    int rn, rm;
                    double v;
                    if (!(rs >> rn >> rm >> v) || rn != n || rm != m)
                        detail::parse_fail(path, lineno, "malformed profile row");
                    rows[n - 1][m] = v;
                }
            prof = DirectionalProfile::custom_symmetric(d, K, std::move(rows));
        }
    } else if (prof_name != "zonal") {
        detail::parse_fail(path, lineno, "unrecognized profile kind " + prof_name);
    }
    Frame fr(d, K, jmax, filt, prof);
    // verify the recorded grids against the reconstruction
    auto expect_close = [&](double a, double b) {
        if (std::abs(a - b) > 1e-12) detail::parse_fail(path, lineno, "grid row does not match the reconstruction");
    };
    for (int j = 1; j <= jmax; ++j) {
        const FrameScale& sc = fr.scale(j);
        next();
        {
            std::istringstream ss(line);
            std::string t1, t2, t3;
            int rj, ra;
            std::size_t atoms;
            if (!(ss >> t1 >> rj >> t2 >> ra >> t3 >> atoms) || t1 != "scale" || rj != j ||
                ra != sc.positions.azimuth_count() || atoms != sc.atom_count())
                detail::parse_fail(path, lineno, "scale header does not match the reconstruction");
        }
        const auto& lats = sc.positions.latitude_rules();
        for (std::size_t lev = 0; lev < lats.size(); ++lev) {
            next(); // "lat <level> nodes <count>"
            for (std::size_t i = 0; i < lats[lev].nodes.size(); ++i) {
                next();
                std::istringstream rs(line);
                double node, w;
                if (!(rs >> node >> w)) detail::parse_fail(path, lineno, "malformed latitude row");
                expect_close(node, lats[lev].nodes[i]);
                expect_close(w, lats[lev].weights[i]);
            }
        }
        next(); // "dir ..."
        for (std::size_t m = 0; m < sc.directions.count(); ++m) {
            next();
            std::istringstream rs(line);
            if (sc.directions.kind() == DirectionalRule::Kind::so2) {
                double ang, w;
                if (!(rs >> ang >> w)) detail::parse_fail(path, lineno, "malformed direction row");
                expect_close(ang, sc.directions.angle(m));
                expect_close(w, sc.directions.weight(m));
            } else {
                const auto pt = sc.directions.direction(m).cartesian();
                double v;
                for (double c : pt) {
                    if (!(rs >> v)) detail::parse_fail(path, lineno, "malformed direction row");
                    expect_close(v, c);
                }
                if (!(rs >> v)) detail::parse_fail(path, lineno, "malformed direction row");
                expect_close(v, sc.directions.weight(m));
            }
        }
    }
    return fr;
}

// ------------------------------------------------------------ grid output

inline void write_csv_grid(const std::vector<double>& t, const std::vector<double>& phi,
                           const std::vector<double>& values, const std::string& path)
{
    if (values.size() != t.size() * phi.size()) throw std::invalid_argument("write_csv_grid: size mismatch");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_csv_grid: cannot open " + path);
    out << "t,phi,value\n";
    for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = 0; j < phi.size(); ++j)
            out << detail::format_double(t[i]) << ',' << detail::format_double(phi[j]) << ','
                << detail::format_double(values[i * phi.size() + j]) << "\n";
    if (!out) throw std::runtime_error("write_csv_grid: write failed for " + path);
}

// Binary P5 image; values in [-1, 1] map linearly to [0, 255].
inline void write_pgm_grid(std::size_t rows, std::size_t cols, const std::vector<double>& values,
                           const std::string& path)
{
    if (values.size() != rows * cols) throw std::invalid_argument("write_pgm_grid: size mismatch");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_pgm_grid: cannot open " + path);
    out << "P5\n" << cols << ' ' << rows << "\n255\n";
    for (double v : values) {
        const double clamped = std::max(-1.0, std::min(1.0, v));
        const int byte = static_cast<int>(std::lround((clamped + 1.0) * 0.5 * 255.0));
        out.put(static_cast<char>(byte));
    }
    if (!out) throw std::runtime_error("write_pgm_grid: write failed for " + path);
}

// ---------------------------------------------------------- profile files

inline void write_profile(const DirectionalProfile& p, int d, const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_profile: cannot open " + path);
    out << "spherewave-profile v1\n";
    out << "d " << d << " K " << p.K() << "\n";
    if (p.kind() == ProfileKind::CustomD3) {
        for (int n = 1; n <= p.K(); ++n)
            for (int k = -n; k <= n; ++k)
                out << n << ' ' << k << ' ' << detail::format_double(p.d3_value(n, k).real()) << ' '
                    << detail::format_double(p.d3_value(n, k).imag()) << "\n";
    } else {
        for (int n = 1; n <= p.K(); ++n)
            for (int m = 0; m <= n; ++m) out << n << ' ' << m << ' ' << detail::format_double(p.sym_value(n, m)) << "\n";
    }
    if (!out) throw std::runtime_error("write_profile: write failed for " + path);
}

inline DirectionalProfile read_profile(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_profile: cannot open " + path);
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line) || line != "spherewave-profile v1")
        detail::parse_fail(path, ++lineno, "unrecognized header");
    ++lineno;
    if (!std::getline(in, line)) detail::parse_fail(path, ++lineno, "unexpected end of file");
    ++lineno;
    int d = 0, K = 0;
    {
        std::istringstream hs(line);
        std::string kd, kk;
        if (!(hs >> kd >> d >> kk >> K) || kd != "d" || kk != "K" || d < 3 || K < 1)
            detail::parse_fail(path, lineno, "malformed profile header");
    }
    if (d == 3) {
        std::vector<std::vector<cplx>> rows(K);
        for (int n = 1; n <= K; ++n) rows[n - 1].assign(2 * n + 1, cplx(0.0));
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty() || line[0] == '#') continue;
            std::istringstream rs(line);
            int n, k;
            double re, im;
            if (!(rs >> n >> k >> re >> im)) detail::parse_fail(path, lineno, "malformed row");
            if (n < 1 || n > K || std::abs(k) > n) detail::parse_fail(path, lineno, "row out of range");
            rows[n - 1][k + n] = {re, im};
        }
        try {
            return DirectionalProfile::custom_d3(K, std::move(rows));
        } catch (const std::exception& e) {
            detail::parse_fail(path, lineno, e.what());
        }
    }
    std::vector<std::vector<double>> rows(K);
    for (int n = 1; n <= K; ++n) rows[n - 1].assign(n + 1, 0.0);
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream rs(line);
        int n, m;
        double v;
        if (!(rs >> n >> m >> v)) detail::parse_fail(path, lineno, "malformed row");
        if (n < 1 || n > K || m < 0 || m > n) detail::parse_fail(path, lineno, "row out of range");
        rows[n - 1][m] = v;
    }
    try {
        return DirectionalProfile::custom_symmetric(d, K, std::move(rows));
    } catch (const std::exception& e) {
        detail::parse_fail(path, lineno, e.what());
    }
}

} // namespace spherewave

#endif
