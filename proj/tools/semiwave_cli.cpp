#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "semiwave/catalog.hpp"
#include "semiwave/parse.hpp"
#include "semiwave/replay.hpp"
#include "semiwave/solver.hpp"

namespace fs = std::filesystem;
using namespace semiwave;

namespace {

void write_file(const fs::path& path, const std::string& text)
{
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

int cmd_verify(const std::string& scope, const std::string& sigma, int jobs, std::string out_path)
{
    CheckOptions opt;
    if (sigma == "plus") opt.sigma_branches = {1};
    else if (sigma == "minus") opt.sigma_branches = {-1};
    std::vector<RowResult> results;
    try {
        results = verify_scope(scope, opt, jobs);
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    bool refuted = false;
    for (const RowResult& r : results) {
        std::cout << r.row_id << " " << verdict_name(r.verdict);
        const SideCondition& side = r.side.empty() && !r.reports.empty() ? r.reports.front().side : r.side;
        if (!side.empty()) std::cout << " [" << side_condition_str(side) << "]";
        if (r.corrected) std::cout << " (corrected: " << verdict_name(*r.corrected) << ")";
        std::cout << "\n";
        refuted = refuted || !r.ok();
    }
    if (out_path.empty()) out_path = "reports/" + scope + ".json";
    write_file(out_path, to_json(results) + "\n");
    std::cout << "report: " << out_path << "\n";
    return refuted ? 1 : 0;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir)
{
    RunConfig cfg;
    try {
        std::ifstream in(config_path);
        if (!in) throw std::invalid_argument("cannot read config " + config_path);
        std::stringstream ss;
        ss << in.rdbuf();
        cfg = parse_run_config(ss.str());
        RadialProblem(cfg.params, Grid(cfg.R_outer, cfg.N, cfg.params.m));
        for (const std::string& id : cfg.monitors) monitor_law(id);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    RunResult res;
    try {
        res = run(cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    const std::string stem = fs::path(config_path).stem().string();
    const fs::path csv = fs::path(out_dir) / (stem + ".csv");
    const fs::path js = fs::path(out_dir) / (stem + ".json");
    write_file(csv, to_csv(res));
    write_file(js, summary_json(res) + "\n");
    if (res.completed()) {
        std::cout << "completed T = " << cfg.T_final << " in " << res.trajectory.steps << " steps\n";
        for (const DriftRecord& d : res.drift) std::cout << "  drift " << d.law << " " << d.drift << "\n";
    } else {
        std::cout << "blowup at t = " << res.trajectory.blowup_time << "\n";
    }
    std::cout << "wrote " << csv.string() << ", " << js.string() << "\n";
    return res.completed() ? 0 : 1;
}

void list_powers_for(const Catalog& cat, const std::string& name, const std::optional<Coeff>& m)
{
    static const std::pair<PowerKind, const char*> kinds[] = {
        {PowerKind::Conformal, "conformal"},
        {PowerKind::EnergyCritical, "energy-critical"},
        {PowerKind::L2Critical, "L2-critical"},
        {PowerKind::Dilation, "dilation"},
        {PowerKind::HsCritical, "Hs-critical"},
    };
    std::cout << name << "\n";
    for (const auto& [kind, label] : kinds) {
        const CatalogRow* row = nullptr;
        try {
            row = &cat.power_row(name, kind);
        } catch (const std::exception&) {
            continue;
        }
        std::cout << "  " << label << " p = " << row->text("p") << " (" << row->full_id() << ")";
        if (m) {
            try {
                if (kind == PowerKind::HsCritical)
                    std::cout << "  at m = " << m->str() << ": s=0 -> " << cat.special_power(name, kind, *m, Coeff(0)).str()
                              << ", s=1 -> " << cat.special_power(name, kind, *m, Coeff(1)).str();
                else
                    std::cout << "  at m = " << m->str() << ": " << cat.special_power(name, kind, *m).str();
            } catch (const std::exception& e) {
                std::cout << "  at m = " << m->str() << ": " << e.what();
            }
        }
        std::cout << "\n";
    }
}

int cmd_list(const std::string& what, const std::string& equation, const std::string& m_text)
{
    const Catalog& cat = Catalog::instance();
    if (what == "equations") {
        for (const std::string& name : Catalog::equation_names()) {
            const EquationSpec eq = cat.get_equation(name).eq;
            std::cout << name << " " << eq_class_name(eq.cls) << (eq.complex ? " complex" : " real") << "\n";
        }
        return 0;
    }
    if (what == "tables") {
        for (const std::string& t : cat.table_ids()) std::cout << t << " " << cat.list_table(t).size() << " rows\n";
        return 0;
    }
    std::optional<Coeff> m;
    if (!m_text.empty()) {
        try {
            m = parse_nf(m_text).constant_value();
        } catch (const std::exception& e) {
            std::cerr << "error: --m " << e.what() << "\n";
            return 2;
        }
    }
    const auto& names = Catalog::equation_names();
    if (!equation.empty()) {
        if (std::find(names.begin(), names.end(), equation) == names.end()) {
            std::cerr << "error: unknown equation " << equation << "\n";
            return 2;
        }
        list_powers_for(cat, equation, m);
        return 0;
    }
    for (const std::string& name : names) list_powers_for(cat, name, m);
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"semiwave: symmetry, conservation and simulation tools for radial semilinear wave equations"};
    app.require_subcommand(1);

    std::string scope = "all", sigma = "both", out_path;
    int jobs = 1;
    auto* verify = app.add_subcommand("verify", "Replay catalog rows");
    verify->add_option("--scope", scope, "all, T<n> or T<n>.row<k>");
    verify->add_option("--sigma", sigma, "both, plus or minus")->check(CLI::IsMember({"both", "plus", "minus"}));
    verify->add_option("--jobs", jobs, "Rows verified in parallel")->check(CLI::PositiveNumber);
    verify->add_option("--out", out_path, "JSON report path (default reports/<scope>.json)");

    std::string config_path, out_dir = ".";
    auto* simulate = app.add_subcommand("simulate", "Run the radial solver");
    simulate->add_option("--config", config_path, "Run configuration")->required();
    simulate->add_option("--out", out_dir, "Output directory");

    std::string what, equation, m_text;
    auto* list = app.add_subcommand("list", "Print catalog contents");
    list->add_option("what", what)->required()->check(CLI::IsMember({"equations", "tables", "powers"}));
    list->add_option("--equation", equation);
    list->add_option("--m", m_text, "Rational m, e.g. 3 or 3/2");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    try {
        if (*verify) return cmd_verify(scope, sigma, jobs, out_path);
        if (*simulate) return cmd_simulate(config_path, out_dir);
        return cmd_list(what, equation, m_text);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
