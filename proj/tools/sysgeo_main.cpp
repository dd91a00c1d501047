#include "sysgeo/geometry.hpp"
#include "sysgeo/io.hpp"
#include "sysgeo/manifest.hpp"
#include "sysgeo/measure.hpp"
#include "sysgeo/optimal.hpp"
#include "sysgeo/projections.hpp"
#include "sysgeo/systole.hpp"
#include "sysgeo/verify.hpp"
#include "sysgeo/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

// exit codes: 0 pass, 1 check failure, 2 usage/parse error
constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

fs::path default_out_dir() {
    if (const char* env = std::getenv("SYSGEO_OUT_DIR")) return fs::path(env);
    return fs::path(".");
}

std::string fmt15(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

void emit(const std::string& text, const std::string& out_file) {
    if (out_file.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(out_file);
    if (!out) throw std::runtime_error("cannot open for writing: " + out_file);
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
}

struct GridFlags {
    std::string grid = "256x256";
    int stencil = 16;
    int kmax = 4;
    int mmax = 2;

    void attach(CLI::App* cmd) {
        cmd->add_option("--grid", grid, "grid resolution NXxNY")->capture_default_str();
        cmd->add_option("--stencil", stencil, "direction stencil")
            ->check(CLI::IsMember({8, 16, 32}))
            ->capture_default_str();
        cmd->add_option("--kmax", kmax, "largest horizontal winding searched")
            ->capture_default_str();
        cmd->add_option("--mmax", mmax, "largest vertical winding searched")
            ->capture_default_str();
    }

    sysgeo::GridConfig parse() const {
        const auto x = grid.find('x');
        if (x == std::string::npos) throw CLI::ValidationError("--grid", "expected NXxNY");
        sysgeo::GridConfig g;
        try {
            g.nx = std::stoi(grid.substr(0, x));
            g.ny = std::stoi(grid.substr(x + 1));
        } catch (const std::exception&) {
            throw CLI::ValidationError("--grid", "expected NXxNY");
        }
        g.stencil = static_cast<sysgeo::Stencil>(stencil);
        g.k_max = kmax;
        g.m_max = mmax;
        sysgeo::validate(g);
        return g;
    }

    json to_json() const {
        return {{"grid", grid}, {"stencil", stencil}, {"kmax", kmax}, {"mmax", mmax}};
    }
};

sysgeo::SurfaceSpec parse_surface(const std::string& name, double beta) {
    if (name == "mobius") return sysgeo::SurfaceSpec::mobius(beta);
    if (name == "klein") return sysgeo::SurfaceSpec::klein(beta);
    throw CLI::ValidationError("--surface", "expected 'mobius' or 'klein'");
}

// ---------------------------------------------------------------------------
// constants
// ---------------------------------------------------------------------------

int cmd_constants(bool as_json, const std::string& out_file) {
    const auto [b0, b1] = sysgeo::constants();
    const double vals[6] = {b0,
                            b1,
                            kPi / 4.0,
                            2.0 * std::sqrt(2.0) / kPi,
                            std::sqrt(3.0) / 2.0,
                            2.0 / kPi};
    const char* names[6] = {"beta0",           "beta1",
                            "pi_over_4",       "alpha_sys_klein",
                            "alpha_sys_torus", "alpha_sys_projective_plane"};
    const char* notes[6] = {"ln(1+sqrt(2))",
                            "ln(2+sqrt(3))",
                            "thin/round-flat Klein threshold",
                            "2*sqrt(2)/pi, minimal systolic area of the Klein bottle",
                            "sqrt(3)/2, minimal systolic area of the torus",
                            "2/pi, minimal systolic area of the projective plane"};
    if (as_json) {
        sysgeo::RunManifest manifest{"constants", {{"json", true}}, sysgeo::kVersion,
                                     sysgeo::RunManifest::now_utc()};
        json j{{"manifest", manifest.to_json()}};
        for (int i = 0; i < 6; ++i) j["constants"][names[i]] = vals[i];
        emit(j.dump(2), out_file);
    } else {
        std::ostringstream os;
        for (int i = 0; i < 6; ++i)
            os << names[i] << " = " << fmt15(vals[i]) << "   # " << notes[i] << '\n';
        emit(os.str(), out_file);
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// alpha-curve
// ---------------------------------------------------------------------------

int cmd_alpha_curve(const std::string& surface_name, double beta_min, double beta_max,
                    double step, const std::string& out_file) {
    if (!(beta_min > 0.0) || !(beta_max > beta_min) || !(step > 0.0))
        throw CLI::ValidationError("--beta-min/--beta-max/--step",
                                   "need 0 < beta-min < beta-max and step > 0");
    std::ostringstream os;
    os << "beta,case,s_beta,sys,area,alpha_sys\n";
    for (int i = 0;; ++i) {
        const double beta = beta_min + i * step;
        if (beta > beta_max + 1e-9 * step) break;
        const auto s = sysgeo::optimal_summary(parse_surface(surface_name, beta));
        os << fmt15(beta) << ',' << to_string(s.case_tag) << ',';
        if (s.s_beta) os << fmt15(*s.s_beta);
        os << ',' << fmt15(s.sys) << ',' << fmt15(s.area) << ',' << fmt15(s.alpha_sys) << '\n';
    }
    emit(os.str(), out_file);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// defect
// ---------------------------------------------------------------------------

int cmd_defect(const std::string& surface_name, double beta, const std::string& profile_file,
               const GridFlags& gf, const std::string& out_file,
               const std::string& witness_file) {
    const auto surface = parse_surface(surface_name, beta);
    const sysgeo::Profile phi = sysgeo::read_profile_csv(profile_file);
    if (std::abs(phi.beta() - beta) > 1e-9 * std::max(1.0, beta))
        throw std::runtime_error("profile file ends at y=" + std::to_string(phi.beta()) +
                                 ", which does not match --beta");
    const auto grid = gf.parse();
    const auto est = sysgeo::systole_estimate(surface, phi, grid);
    const auto report = sysgeo::defect_report(surface, phi, est);

    sysgeo::RunManifest manifest{
        "defect",
        {{"surface", surface_name}, {"beta", beta}, {"profile", profile_file},
         {"flags", gf.to_json()}},
        sysgeo::kVersion,
        sysgeo::RunManifest::now_utc()};
    json j{{"manifest", manifest.to_json()},
           {"report", json::parse(sysgeo::defect_report_json(report))},
           {"systole_witness",
            {{"word_k", est.word.k},
             {"word_m", est.word.m},
             {"grid", {est.grid.first, est.grid.second}},
             {"note", est.discretization_note}}}};
    emit(j.dump(2), out_file);
    if (!witness_file.empty()) sysgeo::write_curve_csv(witness_file, est.witness);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

int cmd_verify(const GridFlags& gf, const std::string& suite_grid, int trials, int lemma_trials,
               std::uint64_t seed, double tol, const std::string& out_file) {
    sysgeo::verify::VerifyOptions opts;
    opts.fine_grid = gf.parse();
    {
        GridFlags sf = gf;
        sf.grid = suite_grid;
        opts.suite_grid = sf.parse();
    }
    opts.trials = std::max(1, trials);
    opts.lemma_trials = std::max(1, lemma_trials);
    opts.seed = seed;
    if (tol > 0.0) opts.sys_rel_tol = tol;

    const auto results = sysgeo::verify::run_acceptance(opts, &std::cout);
    bool all = true;
    for (const auto& r : results) all = all && r.pass;

    sysgeo::RunManifest manifest{"verify",
                                 {{"flags", gf.to_json()},
                                  {"suite_grid", suite_grid},
                                  {"trials", opts.trials},
                                  {"lemma_trials", opts.lemma_trials},
                                  {"seed", opts.seed},
                                  {"sys_rel_tol", opts.sys_rel_tol}},
                                 sysgeo::kVersion,
                                 sysgeo::RunManifest::now_utc()};
    json j{{"manifest", manifest.to_json()},
           {"summary", json::parse(sysgeo::verify::summary_json(results, opts))}};
    if (!out_file.empty()) emit(j.dump(2), out_file);
    std::cout << (all ? "all checks passed" : "CHECK FAILURES PRESENT") << std::endl;
    return all ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// export-curves
// ---------------------------------------------------------------------------

int cmd_export_curves(double beta, const std::vector<double>& taus, int resolution,
                      const std::string& out_dir_flag) {
    const fs::path dir = out_dir_flag.empty() ? default_out_dir() : fs::path(out_dir_flag);
    fs::create_directories(dir);
    const auto surface = sysgeo::SurfaceSpec::mobius(beta);
    const auto g0 = sysgeo::phi0_profile(beta);
    for (double tau : taus) {
        const auto gamma = sysgeo::pu_curve(beta, tau, resolution);
        const double len = sysgeo::curve_length(surface, g0, gamma);
        std::ostringstream tag;
        tag << "tau_" << tau;
        {
            std::ostringstream name;
            name << "gamma_" << tag.str() << ".csv";
            const fs::path p = dir / name.str();
            sysgeo::write_curve_csv(p, gamma);
            std::ofstream app(p, std::ios::app);
            app << "# length_g0," << fmt15(len) << '\n';
        }
        {
            std::ostringstream name;
            name << "gamma_sphere_" << tag.str() << ".csv";
            // the curve spans x in [0, pi]; slide it into the chart window
            // [-pi/2, pi/2] with the x-translation isometry
            sysgeo::write_curve_csv_3d(
                dir / name.str(), gamma,
                [beta](const sysgeo::Point2& p) {
                    return sysgeo::sphere_chart(beta, {p.x() - kPi / 2, p.y()});
                },
                "round-sphere image, length_g0," + fmt15(len));
        }
        std::cout << "tau=" << tau << "  length_g0=" << fmt15(len) << '\n';
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// export-profile
// ---------------------------------------------------------------------------

int cmd_export_profile(const std::string& surface_name, double beta, int samples,
                       const std::string& out_file) {
    const sysgeo::Profile p = surface_name == "mobius" ? sysgeo::mobius_optimal(beta)
                                                       : sysgeo::klein_optimal(beta);
    sysgeo::write_profile_csv(out_file, p, samples);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"systolic geometry toolkit for flat Mobius strips and Klein bottles"};
    app.require_subcommand(1);

    // constants
    auto* c_const = app.add_subcommand("constants", "print the named constants");
    bool const_json = false;
    std::string const_out;
    c_const->add_flag("--json", const_json, "emit JSON with a run manifest");
    c_const->add_option("--out", const_out, "output file (default stdout)");

    // alpha-curve
    auto* c_curve = app.add_subcommand("alpha-curve",
                                       "CSV table of the optimal systolic area over widths");
    std::string curve_surface = "klein", curve_out;
    double beta_min = 0.2, beta_max = 3.0, step = 1e-3;
    c_curve->add_option("--surface", curve_surface)->check(CLI::IsMember({"mobius", "klein"}));
    c_curve->add_option("--beta-min", beta_min)->capture_default_str();
    c_curve->add_option("--beta-max", beta_max)->capture_default_str();
    c_curve->add_option("--step", step)->capture_default_str();
    c_curve->add_option("--out", curve_out, "output file (default stdout)");

    // defect
    auto* c_defect = app.add_subcommand("defect", "defect report for a profile file");
    std::string d_surface = "klein", d_profile, d_out, d_witness;
    double d_beta = 1.0;
    GridFlags d_grid;
    c_defect->add_option("--surface", d_surface)->check(CLI::IsMember({"mobius", "klein"}));
    c_defect->add_option("--beta", d_beta)->required();
    c_defect->add_option("--profile", d_profile, "profile CSV (header y,phi)")->required();
    d_grid.attach(c_defect);
    c_defect->add_option("--out", d_out, "output file (default stdout)");
    c_defect->add_option("--witness-out", d_witness, "write the systole witness polyline CSV");

    // verify
    auto* c_verify = app.add_subcommand("verify", "run the full verification suite");
    GridFlags v_grid;
    std::string v_suite_grid = "128x128", v_out;
    int v_trials = 100, v_lemma_trials = 1000;
    std::uint64_t v_seed = 0;
    double v_tol = 0.0;
    v_grid.attach(c_verify);
    c_verify->add_option("--suite-grid", v_suite_grid, "grid for the randomized suites")
        ->capture_default_str();
    c_verify->add_option("--trials", v_trials, "random profiles per width")
        ->capture_default_str();
    c_verify->add_option("--lemma-trials", v_lemma_trials)->capture_default_str();
    c_verify->add_option("--seed", v_seed)->capture_default_str();
    c_verify->add_option("--tol", v_tol, "systole discretization tolerance override");
    c_verify->add_option("--out", v_out, "JSON summary file");

    // export-curves
    auto* c_exp = app.add_subcommand("export-curves",
                                     "Pu curves in strip and sphere coordinates");
    double e_beta = 1.0;
    std::vector<double> e_taus;
    int e_res = 512;
    std::string e_dir;
    c_exp->add_option("--beta", e_beta)->required();
    c_exp->add_option("--taus", e_taus, "comma-separated heights")->required()->delimiter(',');
    c_exp->add_option("--resolution", e_res)->capture_default_str();
    c_exp->add_option("--out-dir", e_dir, "default $SYSGEO_OUT_DIR or .");

    // export-profile
    auto* c_prof = app.add_subcommand("export-profile",
                                      "sample an optimal profile to a CSV file");
    std::string p_surface = "klein", p_out;
    double p_beta = 1.0;
    int p_samples = 2048;
    c_prof->add_option("--surface", p_surface)->check(CLI::IsMember({"mobius", "klein"}));
    c_prof->add_option("--beta", p_beta)->required();
    c_prof->add_option("--samples", p_samples)->capture_default_str();
    c_prof->add_option("--out", p_out)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*c_const) return cmd_constants(const_json, const_out);
        if (*c_curve) return cmd_alpha_curve(curve_surface, beta_min, beta_max, step, curve_out);
        if (*c_defect) return cmd_defect(d_surface, d_beta, d_profile, d_grid, d_out, d_witness);
        if (*c_verify)
            return cmd_verify(v_grid, v_suite_grid, v_trials, v_lemma_trials, v_seed, v_tol,
                              v_out);
        if (*c_exp) return cmd_export_curves(e_beta, e_taus, e_res, e_dir);
        if (*c_prof) return cmd_export_profile(p_surface, p_beta, p_samples, p_out);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitUsage;
    }
    return kExitUsage;
}
