// rilab: norms in interpolation spaces and verification reports.
//
//   rilab norm --space theta.json --fn chi:0.5 --grid 12
//   rilab verify holmstedt --case R_x0 --corpus standard --n 512,1024
//   rilab verify reiteration --case ThmR_interior --theta 0.5
//   rilab verify identity --name ultra-as-theta
//   rilab reiterate --case ThmL_x1 --theta 0.25
//
// Exit codes: 0 ok, 1 input error, 2 inadmissible space, 3 verification
// window or stability over threshold.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "rilab/corpus.hpp"
#include "rilab/holmstedt.hpp"
#include "rilab/identities.hpp"
#include "rilab/json_io.hpp"
#include "rilab/kfunctional.hpp"
#include "rilab/reiteration.hpp"
#include "rilab/report.hpp"
#include "rilab/spaces.hpp"

namespace fs = std::filesystem;
using namespace rilab;

namespace {

constexpr int kOk = 0, kInput = 1, kInadmissible = 2, kOverThreshold = 3;

struct RunConfig {
    std::string space_path;
    std::string fn;
    std::vector<int> log2n;
    std::vector<std::size_t> n;
    double t_min = 1e-8;
    double t_max = 0.0;  // 0: 1e8 on the full line, 1 on (0,1)
    std::string corpus = "standard";
    std::string out = ".";
    unsigned jobs = 1;
    double window_max = 100.0;
    double stability_max = 0.10;
    std::string case_id;
    std::string name;
    double theta = 0.5;
};

std::vector<std::size_t> grid_sizes(const RunConfig& c, std::vector<std::size_t> fallback) {
    std::vector<std::size_t> out;
    for (int k : c.log2n) {
        if (k < 8 || k > 20) throw InputError("--grid takes log2 n between 8 and 20, got " + std::to_string(k));
        out.push_back(std::size_t{1} << k);
    }
    for (std::size_t n : c.n) {
        if (n < 256 || n > (std::size_t{1} << 20) || (n & (n - 1)) != 0)
            throw InputError("--n takes powers of two between 256 and 2^20, got " + std::to_string(n));
        out.push_back(n);
    }
    return out.empty() ? fallback : out;
}

Json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
}

void print_checklist(const Admissibility& a) {
    std::cout << "admissible: " << (a.admissible ? "yes" : "no") << "\n";
    for (const auto& c : a.conditions)
        std::cout << "  [" << (c.finite ? "ok" : "divergent") << "] " << c.name << " = " << format_double(c.value)
                  << "\n";
    if (!a.reason.empty()) std::cout << "  reason: " << a.reason << "\n";
}

int cmd_norm(const RunConfig& c) {
    if (c.space_path.empty() || c.fn.empty()) throw InputError("norm needs --space and --fn");
    const SpaceDescriptor D = space_from_json(read_json(c.space_path));
    const auto sizes = grid_sizes(c, {std::size_t{1} << 12});
    if (sizes.size() != 1) throw InputError("norm takes a single grid size");
    const double t_max = c.t_max > 0.0 ? c.t_max : (D.setting == Setting::UnitInterval ? 1.0 : 1e8);
    const Grid g = Grid::geometric(c.t_min, t_max, sizes.front());
    const Admissibility adm = check_admissible(D);
    std::cout << "space: " << D.name() << "\n";
    if (!adm.admissible) {
        print_checklist(adm);
        return kInadmissible;
    }
    const GridFunction fstar = parse_function(c.fn).sample(g);
    const NormValue v = norm_in_space(k_peetre(fstar), D);
    std::cout << "norm: " << (v.divergent ? std::string("inf") : format_double(v.value)) << "\n";
    print_checklist(adm);
    return kOk;
}

int write_report(const EquivalenceReport& r, const RunConfig& c, const std::string& stem) {
    fs::create_directories(c.out);
    const fs::path base = fs::path(c.out) / stem;
    {
        std::ofstream csv(base.string() + ".csv", std::ios::binary);
        if (!csv) throw InputError("cannot write " + base.string() + ".csv");
        csv << report_csv(r);
    }
    Json j = report_json(r);
    j["window_max"] = c.window_max;
    j["stability_max"] = c.stability_max;
    const bool pass = r.passes(c.window_max, c.stability_max);
    j["pass"] = pass;
    {
        std::ofstream js(base.string() + ".json", std::ios::binary);
        if (!js) throw InputError("cannot write " + base.string() + ".json");
        js << j.dump(2) << "\n";
    }
    std::cout << r.case_id << ": window " << format_double(r.window) << ", refined " << format_double(r.window_refined)
              << ", stability " << format_double(r.stability) << " -> " << (pass ? "PASS" : "FAIL") << "\n";
    for (const auto& n : r.notes) std::cout << "  note: " << n << "\n";
    std::cout << "  wrote " << base.string() << ".csv and .json\n";
    return pass ? kOk : kOverThreshold;
}

HarnessOptions harness(const RunConfig& c) {
    HarnessOptions o;
    o.sizes = grid_sizes(c, o.sizes);
    o.t_min = c.t_min;
    if (c.t_max > 0.0) o.t_max = c.t_max;
    o.jobs = c.jobs;
    return o;
}

int cmd_verify_holmstedt(const RunConfig& c) {
    const HolmstedtCase k = parse_holmstedt_case(c.case_id);
    auto r = verify_holmstedt(k, HolmstedtParams{}, named_corpus(c.corpus), harness(c));
    return write_report(r, c, "holmstedt_" + c.case_id);
}

int cmd_verify_reiteration(const RunConfig& c) {
    const ReiterationCase k = parse_reiteration_case(c.case_id);
    ReiterationParams rp;
    rp.theta = c.theta;
    if (c.theta == 0.0 || c.theta == 1.0) rp.E = RiSpace::Linf();
    auto r = verify_reiteration(k, rp, named_corpus(c.corpus), harness(c));
    return write_report(r, c, "reiteration_" + c.case_id + "_theta" + format_double(c.theta));
}

int cmd_verify_identity(const RunConfig& c, bool corpus_given) {
    IdentityOptions o;
    o.sizes = grid_sizes(c, o.sizes);
    o.t_min = c.t_min;
    o.jobs = c.jobs;
    if (corpus_given) o.corpus = named_corpus(c.corpus);
    IdentityParams p;
    p.theta = c.theta;
    auto r = verify_identity(c.name, o, p);
    return write_report(r, c, "identity_" + c.name);
}

int cmd_reiterate(const RunConfig& c) {
    ReiterationParams rp;
    rp.theta = c.theta;
    if (c.theta == 0.0 || c.theta == 1.0) rp.E = RiSpace::Linf();
    const ReiterationResult res = reiterate(parse_reiteration_case(c.case_id), rp);
    Json j;
    j["case"] = c.case_id;
    j["theta"] = c.theta;
    j["theta_tilde"] = res.derived.theta_tilde;
    j["rho"] = {{"gamma", res.derived.rho.gamma}, {"factor", to_json(res.derived.rho.factor)}};
    j["B"] = to_json(res.derived.B);
    j["rule"] = res.derived.rule;
    j["space"] = to_json(res.space);
    Json hyp = Json::array();
    for (const auto& h : res.hypotheses) hyp.push_back({{"name", h.name}, {"finite", h.finite}});
    j["hypotheses"] = hyp;
    std::cout << j.dump(2) << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rilab: norms in real interpolation spaces and equivalence reports"};
    app.require_subcommand(1);
    RunConfig c;

    auto grid_opts = [&](CLI::App* s) {
        s->add_option("--grid", c.log2n, "log2 of the grid size (list allowed)")->delimiter(',');
        s->add_option("--n", c.n, "grid sizes (powers of two)")->delimiter(',');
        s->add_option("--tmin", c.t_min, "smallest grid point");
        s->add_option("--tmax", c.t_max, "largest grid point");
    };
    auto verify_opts = [&](CLI::App* s) {
        grid_opts(s);
        s->add_option("--corpus", c.corpus, "standard | chi | spec;spec;...");
        s->add_option("--out", c.out, "output directory");
        s->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
        s->add_option("--window-max", c.window_max, "largest acceptable window");
        s->add_option("--stability-max", c.stability_max, "largest acceptable relative window change");
    };

    auto* norm = app.add_subcommand("norm", "norm of f in a space descriptor");
    norm->add_option("--space", c.space_path, "descriptor JSON")->required();
    norm->add_option("--fn", c.fn, "chi:a | pow:r | powlog:r,m | log:m | csv:PATH")->required();
    grid_opts(norm);

    auto* verify = app.add_subcommand("verify", "run a verification harness");
    verify->require_subcommand(1);
    auto* vh = verify->add_subcommand("holmstedt", "Holmstedt-type K-functional formulas");
    vh->add_option("--case", c.case_id)->required();
    verify_opts(vh);
    auto* vr = verify->add_subcommand("reiteration", "reiteration identities");
    vr->add_option("--case", c.case_id)->required();
    vr->add_option("--theta", c.theta)->check(CLI::Range(0.0, 1.0));
    verify_opts(vr);
    auto* vi = verify->add_subcommand("identity", "identities for spaces on (0,1)");
    vi->add_option("--name", c.name)->required();
    vi->add_option("--theta", c.theta)->check(CLI::Range(0.0, 1.0));
    verify_opts(vi);

    auto* rei = app.add_subcommand("reiterate", "print the reiterated descriptor");
    rei->add_option("--case", c.case_id)->required();
    rei->add_option("--theta", c.theta)->check(CLI::Range(0.0, 1.0));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kInput;
    }

    try {
        if (*norm) return cmd_norm(c);
        if (*vh) return cmd_verify_holmstedt(c);
        if (*vr) return cmd_verify_reiteration(c);
        if (*vi) return cmd_verify_identity(c, vi->count("--corpus") > 0);
        if (*rei) return cmd_reiterate(c);
    } catch (const InadmissibleError& e) {
        std::cerr << "inadmissible: " << e.what() << "\n";
        return kInadmissible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    }
    return kInput;
}
