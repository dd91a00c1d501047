#include "sysgeo/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace sysgeo {

namespace {

std::string trimmed(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

[[noreturn]] void fail(const std::filesystem::path& path, int line, const std::string& what) {
    std::ostringstream os;
    os << path.string() << ": line " << line << ": " << what;
    throw std::runtime_error(os.str());
}

void write_double(std::ostream& os, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
}

}  // namespace

Profile read_profile_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open profile file: " + path.string());

    std::string line;
    int lineno = 0;
    // header
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trimmed(line);
        if (t.empty() || t[0] == '#') continue;
        if (t != "y,phi") fail(path, lineno, "expected header 'y,phi'");
        break;
    }

    std::vector<double> ys, phis;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trimmed(line);
        if (t.empty() || t[0] == '#') continue;
        const auto comma = t.find(',');
        if (comma == std::string::npos) fail(path, lineno, "expected 'y,phi' row");
        double y, phi;
        try {
            std::size_t used = 0;
            y = std::stod(t.substr(0, comma), &used);
            phi = std::stod(t.substr(comma + 1), &used);
        } catch (const std::exception&) {
            fail(path, lineno, "cannot parse numbers");
        }
        if (!std::isfinite(y) || !std::isfinite(phi)) fail(path, lineno, "non-finite value");
        if (ys.empty() && y != 0.0) fail(path, lineno, "first row must have y = 0");
        if (!ys.empty() && !(y > ys.back())) fail(path, lineno, "y values must be strictly increasing");
        if (!(phi > 0.0)) fail(path, lineno, "phi values must be positive");
        ys.push_back(y);
        phis.push_back(phi);
    }
    if (ys.size() < 2) fail(path, lineno, "need at least 2 data rows");
    const double beta = ys.back();
    return Profile::sampled(beta, std::move(ys), std::move(phis));
}

void write_profile_csv(const std::filesystem::path& path, const Profile& profile, int n) {
    if (n < 2) throw std::invalid_argument("need at least 2 samples");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << "y,phi\n";
    const double beta = profile.beta();
    for (int i = 0; i < n; ++i) {
        const double y = beta * i / (n - 1);
        write_double(out, y);
        out << ',';
        write_double(out, profile.value(y));
        out << '\n';
    }
}

void write_curve_csv(const std::filesystem::path& path, const CurvePolyline& curve) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << "# deck_word k=" << curve.word().k << " m=" << curve.word().m << '\n';
    out << "x,y\n";
    for (const auto& p : curve.vertices()) {
        write_double(out, p.x());
        out << ',';
        write_double(out, p.y());
        out << '\n';
    }
}

void write_curve_csv_3d(const std::filesystem::path& path, const CurvePolyline& curve,
                        const std::function<Point3(const Point2&)>& chart,
                        const std::string& header_comment) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << "# deck_word k=" << curve.word().k << " m=" << curve.word().m << '\n';
    if (!header_comment.empty()) out << "# " << header_comment << '\n';
    out << "x,y,z\n";
    for (const auto& p : curve.vertices()) {
        const Point3 q = chart(p);
        write_double(out, q.x());
        out << ',';
        write_double(out, q.y());
        out << ',';
        write_double(out, q.z());
        out << '\n';
    }
}

}  // namespace sysgeo
