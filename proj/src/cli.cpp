#include "hybrid/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "hybrid/config_io.hpp"
#include "hybrid/eigen_analysis.hpp"
#include "hybrid/errors.hpp"
#include "hybrid/spectra.hpp"
#include "hybrid/transition.hpp"
#include "io_util.hpp"

namespace hybrid {

namespace {

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string config;
    std::string out;
    std::string pgm;
    unsigned threads = 1;
    bool quiet = false;
    std::vector<std::string> zones;
    std::string param;
    double lo = 0;
    double hi = 0;
    std::string axis1;
    std::string axis2;
    std::string table;
};

std::pair<double, double> parse_pgm_range(const std::string& text) {
    const auto parts = io::split(text, ',');
    if (parts.size() != 2) throw UsageError("--pgm expects FLOOR,CEIL");
    const double floor_db = io::parse_double(parts[0]);
    const double ceil_db = io::parse_double(parts[1]);
    if (!(floor_db < ceil_db)) throw UsageError("--pgm: FLOOR must be below CEIL");
    return {floor_db, ceil_db};
}

// "A-B:gamma=start:stop:count"
RegimeAxis parse_axis(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw UsageError("axis must look like A-B:gamma=START:STOP:COUNT");
    RegimeAxis axis;
    axis.selector = parse_selector(text.substr(0, eq));
    const auto parts = io::split(text.substr(eq + 1), ':');
    if (parts.size() != 3) throw UsageError("axis range must be START:STOP:COUNT");
    axis.start = io::parse_double(parts[0]);
    axis.stop = io::parse_double(parts[1]);
    const double count = io::parse_double(parts[2]);
    if (count < 1 || count != std::floor(count)) throw UsageError("axis COUNT must be a positive integer");
    axis.count = static_cast<std::size_t>(count);
    return axis;
}

ZoneSpec parse_zone(const SystemConfig& config, const std::string& text) {
    const auto dash = text.find('-');
    if (dash == std::string::npos) throw UsageError("zone must look like A-B");
    return identify_zone(config, text.substr(0, dash), text.substr(dash + 1));
}

SystemConfig load(const Options& opt) {
    if (opt.config.empty()) throw UsageError("--config is required");
    return load_config(resolve_config_path(opt.config));
}

std::string pgm_path_for(const std::string& out) {
    std::filesystem::path p(out);
    p.replace_extension(".pgm");
    return p.string();
}

int cmd_spectrum(const Options& opt, std::ostream& out, std::ostream& err) {
    const SystemConfig config = load(opt);
    std::optional<std::pair<double, double>> range;
    if (!opt.pgm.empty()) {
        range = parse_pgm_range(opt.pgm);
        if (opt.out.empty()) throw UsageError("--pgm needs --out (the image is written next to the CSV)");
    }
    const SpectrumGrid grid = sweep_spectrum(config, opt.threads);
    if (opt.out.empty()) {
        export_csv(grid, out);
    } else {
        export_csv(grid, std::filesystem::path(opt.out));
        if (range) export_pgm(grid, std::filesystem::path(pgm_path_for(opt.out)), range->first, range->second);
        if (!opt.quiet) {
            err << "wrote " << grid.field_values.size() << "x" << grid.freq_values.size() << " spectrum to "
                << opt.out << (range ? " and " + pgm_path_for(opt.out) : std::string()) << '\n';
        }
    }
    return kOk;
}

int cmd_eigen(const Options& opt, std::ostream& out, std::ostream& err) {
    const SystemConfig config = load(opt);
    const BranchSet branches = eigen_sweep(config, opt.threads);
    if (opt.out.empty()) {
        export_branches_csv(branches, out);
    } else {
        export_branches_csv(branches, std::filesystem::path(opt.out));
        if (!opt.quiet) err << "wrote " << branches.branch_count() << " branches to " << opt.out << '\n';
    }
    return kOk;
}

int cmd_classify(const Options& opt, std::ostream& out, std::ostream&) {
    const SystemConfig config = load(opt);
    std::vector<ZoneSpec> zones;
    if (opt.zones.empty()) {
        zones = crossing_zones(config);
    } else {
        for (const auto& z : opt.zones) zones.push_back(parse_zone(config, z));
    }
    const BranchSet branches = eigen_sweep(config, opt.threads);
    for (const auto& zone : zones) {
        const ZoneReport r = classify_zone(branches, zone);
        out << zone.label() << ": real=" << to_string(*r.real_class) << " imag=" << to_string(*r.imag_class)
            << '\n';
    }
    return kOk;
}

int cmd_boundary(const Options& opt, std::ostream& out, std::ostream&) {
    const SystemConfig config = load(opt);
    if (opt.param.empty()) throw UsageError("--param is required");
    if (opt.zones.size() != 1) throw UsageError("boundary needs exactly one --zone");
    const ParamSelector selector = parse_selector(opt.param);
    const ZoneSpec zone = parse_zone(config, opt.zones.front());
    const TransitionResult r = find_transition(config, selector, opt.lo, opt.hi, zone);
    out << std::setprecision(9) << "param=" << selector.label() << " zone=" << zone.label()
        << " critical=" << r.critical << " bracket=[" << r.lo << "," << r.hi << "] tolerance=" << r.tolerance
        << " threshold=" << kTransitionThreshold << '\n';
    return kOk;
}

int cmd_map(const Options& opt, std::ostream& out, std::ostream& err) {
    const SystemConfig config = load(opt);
    if (opt.axis1.empty() || opt.axis2.empty()) throw UsageError("map needs --axis1 and --axis2");
    if (opt.zones.size() != 1) throw UsageError("map needs exactly one --zone");
    const RegimeAxis a1 = parse_axis(opt.axis1);
    const RegimeAxis a2 = parse_axis(opt.axis2);
    const ZoneSpec zone = parse_zone(config, opt.zones.front());
    const RegimeMap map = regime_map(config, a1, a2, zone, opt.threads);
    if (opt.out.empty()) {
        export_regime_csv(map, out);
    } else {
        export_regime_csv(map, std::filesystem::path(opt.out));
        if (!opt.quiet) err << "wrote " << map.labels.size() << " cells to " << opt.out << '\n';
    }
    return kOk;
}

int cmd_reproduce(const Options& opt, std::ostream& out, std::ostream&) {
    std::vector<ReproductionRow> rows;
    try {
        rows = reproduction_rows(opt.table);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    bool all_pass = true;
    for (const auto& row : rows) {
        const SystemConfig config = load_config(preset_directory() / row.preset);
        const ZoneSpec zone = identify_zone(config, row.tunable, row.fixed);
        const ZoneReport r = classify_zone(eigen_sweep(config, opt.threads), zone);
        const bool pass = to_string(*r.real_class) == row.real_class && to_string(*r.imag_class) == row.imag_class;
        all_pass = all_pass && pass;
        out << (pass ? "PASS" : "FAIL") << ' ' << opt.table << " row " << row.row << ' ' << zone.label()
            << ": real=" << to_string(*r.real_class) << " imag=" << to_string(*r.imag_class)
            << " (expected real=" << row.real_class << " imag=" << row.imag_class << ")\n";
    }
    return all_pass ? kOk : kFail;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"N-mode hybrid system transmission and level attraction/repulsion analysis", "hybridmodes"};
    app.require_subcommand(1);
    Options opt;

    const auto common = [&opt](CLI::App* sub) {
        sub->add_option("--config", opt.config, "system description (JSON path or bundled preset name)")
            ->required();
        sub->add_option("--threads", opt.threads, "worker threads")->check(CLI::Range(1u, 1024u));
        sub->add_flag("--quiet", opt.quiet, "suppress progress messages");
    };

    auto* spectrum = app.add_subcommand("spectrum", "S21 over the field/frequency grid as CSV");
    common(spectrum);
    spectrum->add_option("--out", opt.out, "CSV destination (stdout if omitted)");
    spectrum->add_option("--pgm", opt.pgm, "also write a PGM heatmap of 20log10|1+S21|, range FLOOR,CEIL dB");

    auto* eigen = app.add_subcommand("eigen", "tracked eigenvalue branches as CSV");
    common(eigen);
    eigen->add_option("--out", opt.out, "CSV destination (stdout if omitted)");

    auto* classify = app.add_subcommand("classify", "classify every mode crossing");
    common(classify);
    classify->add_option("--zone", opt.zones, "restrict to zone A-B (repeatable)");

    auto* boundary = app.add_subcommand("boundary", "bisect a coupling for the attraction/repulsion boundary");
    common(boundary);
    boundary->add_option("--param", opt.param, "coupling to vary, A-B:gamma or A-B:j")->required();
    boundary->add_option("--lo", opt.lo, "bracket start, GHz")->required();
    boundary->add_option("--hi", opt.hi, "bracket end, GHz")->required();
    boundary->add_option("--zone", opt.zones, "zone A-B")->required();

    auto* map = app.add_subcommand("map", "regime labels over a two-parameter grid as CSV");
    common(map);
    map->add_option("--axis1", opt.axis1, "A-B:gamma=START:STOP:COUNT")->required();
    map->add_option("--axis2", opt.axis2, "A-B:gamma=START:STOP:COUNT")->required();
    map->add_option("--zone", opt.zones, "zone A-B")->required();
    map->add_option("--out", opt.out, "CSV destination (stdout if omitted)");

    auto* reproduce = app.add_subcommand("reproduce", "check the bundled table presets against their labels");
    reproduce->add_option("table", opt.table, "table1 or table2")->required();
    reproduce->add_option("--threads", opt.threads, "worker threads")->check(CLI::Range(1u, 1024u));
    reproduce->add_flag("--quiet", opt.quiet, "suppress progress messages");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        if (spectrum->parsed()) return cmd_spectrum(opt, out, err);
        if (eigen->parsed()) return cmd_eigen(opt, out, err);
        if (classify->parsed()) return cmd_classify(opt, out, err);
        if (boundary->parsed()) return cmd_boundary(opt, out, err);
        if (map->parsed()) return cmd_map(opt, out, err);
        if (reproduce->parsed()) return cmd_reproduce(opt, out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kUsage;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFail;
    }
    return kUsage;
}

}  // namespace hybrid
