// Command-line driver: load chart or atlas files, run the verification and
// cohomology suites, and emit machine-readable plus text reports.
//
// Exit codes: 0 all checks pass, 1 at least one exact check failed,
// 2 input error.

#include <filesystem>
#include <iostream>

#include "CLI11.hpp"

#include "kdr/suites.hpp"

using namespace kdr;
namespace fs = std::filesystem;

namespace {

std::string stem_of(const std::string& path) {
    return fs::path(path).stem().string();
}

int emit(const Report& rep, const std::string& outdir, const std::string& stem, bool quiet) {
    fs::create_directories(outdir);
    rep.write(outdir, stem);
    if (!quiet) std::cout << rep.text();
    return rep.failures() == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact Koszul-De Rham cohomology of polynomial chart models"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string outdir = "reports";
    bool quiet = false;
    app.add_option("--out", outdir, "report output directory");
    app.add_flag("--quiet", quiet, "suppress the text report on stdout");

    auto* verify = app.add_subcommand("verify", "run the exact identity suite");
    std::string verify_file;
    int samples = 200;
    uint64_t seed = 1;
    verify->add_option("file", verify_file)->required();
    verify->add_option("--samples", samples);
    verify->add_option("--seed", seed);

    auto* coh = app.add_subcommand("cohomology", "Koszul cohomology tables");
    std::string coh_file;
    int pmax = -1, smax = -1, deg = 10;
    coh->add_option("file", coh_file)->required();
    coh->add_option("--pmax", pmax);
    coh->add_option("--smax", smax);
    coh->add_option("--deg", deg);

    auto* cech = app.add_subcommand("cech", "atlas lifting and total complex checks");
    std::string cech_file;
    int cech_deg = 10, cech_pmax = -1;
    cech->add_option("file", cech_file)->required();
    cech->add_option("--deg", cech_deg);
    cech->add_option("--pmax", cech_pmax);

    auto* milnor = app.add_subcommand("milnor", "Milnor number of a polynomial");
    std::string milnor_poly, milnor_vars;
    milnor->add_option("poly", milnor_poly)->required();
    milnor->add_option("--vars", milnor_vars)->required();

    auto* glue = app.add_subcommand("glue", "compare two presentations of the same model");
    std::string glue_a, glue_b;
    int glue_p = 1, glue_s = 1, glue_deg = 10;
    glue->add_option("fileA", glue_a)->required();
    glue->add_option("fileB", glue_b)->required();
    glue->add_option("--p", glue_p);
    glue->add_option("--s", glue_s);
    glue->add_option("--deg", glue_deg);

    auto* report = app.add_subcommand("report", "aggregate report files in a directory");
    std::string report_dir;
    report->add_option("dir", report_dir)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) {
            auto spec = load_spec(verify_file);
            Report rep = verify_suite(spec, verify_file, samples, seed);
            return emit(rep, outdir, "verify_" + stem_of(verify_file), quiet);
        }
        if (coh->parsed()) {
            auto spec = load_spec(coh_file);
            if (!std::holds_alternative<Chart>(spec))
                throw InputError("cohomology expects a chart file");
            const Chart& chart = std::get<Chart>(spec);
            auto ctx_pmax = pmax >= 0 ? pmax : chart.m();
            auto ctx_smax = smax >= 0 ? smax : chart.m() + chart.l();
            Report rep = cohomology_suite(chart, coh_file, ctx_pmax, ctx_smax, deg);
            return emit(rep, outdir, "cohomology_" + stem_of(coh_file), quiet);
        }
        if (cech->parsed()) {
            auto spec = load_spec(cech_file);
            if (!std::holds_alternative<AtlasSpec>(spec))
                throw InputError("cech expects an atlas file");
            Report rep = cech_suite(std::get<AtlasSpec>(spec), cech_file, cech_deg, cech_pmax);
            return emit(rep, outdir, "cech_" + stem_of(cech_file), quiet);
        }
        if (milnor->parsed()) {
            std::vector<std::string> vars;
            std::string cur;
            for (char c : milnor_vars) {
                if (c == ',') { if (!cur.empty()) vars.push_back(cur); cur.clear(); }
                else cur.push_back(c);
            }
            if (!cur.empty()) vars.push_back(cur);
            auto ring = make_ring(vars);
            Polynomial phi = parse_poly(ring, milnor_poly);
            auto mu = milnor_number(phi);
            if (mu) std::cout << *mu << "\n";
            else std::cout << "infinite\n";
            return 0;
        }
        if (glue->parsed()) {
            auto sa = load_spec(glue_a);
            auto sb = load_spec(glue_b);
            if (!std::holds_alternative<Chart>(sa) || !std::holds_alternative<Chart>(sb))
                throw InputError("glue expects two chart files");
            Report rep = glue_suite(std::get<Chart>(sa), std::get<Chart>(sb),
                                    glue_a + " vs " + glue_b, glue_p, glue_s, glue_deg);
            return emit(rep, outdir, "glue_" + stem_of(glue_a) + "_" + stem_of(glue_b), quiet);
        }
        if (report->parsed()) {
            Json summary;
            summary["files"] = Json::array();
            long long checks = 0, failures = 0;
            std::vector<std::string> paths;
            for (auto& entry : fs::directory_iterator(report_dir))
                if (entry.path().extension() == ".json" &&
                    entry.path().filename() != "summary.json")
                    paths.push_back(entry.path().string());
            std::sort(paths.begin(), paths.end());
            for (auto& p : paths) {
                Json j = load_json_file(p);
                if (!j.contains("summary")) continue;
                Json row;
                row["file"] = fs::path(p).filename().string();
                row["checks"] = j["summary"]["checks"];
                row["failures"] = j["summary"]["failures"];
                checks += j["summary"]["checks"].get<long long>();
                failures += j["summary"]["failures"].get<long long>();
                summary["files"].push_back(row);
            }
            summary["checks"] = checks;
            summary["failures"] = failures;
            fs::create_directories(report_dir);
            std::ofstream js(report_dir + "/summary.json");
            js << summary.dump(2) << "\n";
            std::ofstream tx(report_dir + "/summary.txt");
            tx << "reports: " << summary["files"].size() << ", checks: " << checks
               << ", failures: " << failures << "\n";
            if (!quiet) std::cout << summary.dump(2) << "\n";
            return failures == 0 ? 0 : 1;
        }
    } catch (const InputError& ex) {
        std::cerr << "input error: " << ex.what() << "\n";
        return 2;
    } catch (const ParseError& ex) {
        std::cerr << "input error: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 2;
}
