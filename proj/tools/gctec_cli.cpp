// Command-line front end: gain / sweep / safety / compare.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gctec/gctec.hpp"

namespace {

using namespace gctec;

struct CliOptions {
    std::string config_path;
    std::string path_sel;
    std::string freq_arg;
    std::string sweep_arg;
    std::string out_dir;
    bool plot = false;
    bool strict = false;
};

std::vector<double> parse_freq_arg(const std::string& arg) {
    // "<Hz>" or "<start>:<stop>:<count>" (log-spaced)
    const auto c1 = arg.find(':');
    if (c1 == std::string::npos) {
        try {
            return {std::stod(arg)};
        } catch (const std::exception&) {
            throw ValidationError("--freq: not a number: '" + arg + "'");
        }
    }
    const auto c2 = arg.find(':', c1 + 1);
    if (c2 == std::string::npos)
        throw ValidationError("--freq range wants start:stop:count");
    try {
        const double start = std::stod(arg.substr(0, c1));
        const double stop = std::stod(arg.substr(c1 + 1, c2 - c1 - 1));
        const int count = std::stoi(arg.substr(c2 + 1));
        if (!(start > 0.0) || !(stop > start) || count < 2)
            throw ValidationError("--freq range must satisfy 0 < start < stop, count >= 2");
        std::vector<double> f(count);
        for (int k = 0; k < count; ++k)
            f[k] = start * std::pow(stop / start, static_cast<double>(k) / (count - 1));
        return f;
    } catch (const ValidationError&) {
        throw;
    } catch (const std::exception&) {
        throw ValidationError("--freq: malformed range '" + arg + "'");
    }
}

RunConfig load_run_config(const CliOptions& opt) {
    RunConfig cfg = opt.config_path.empty() ? RunConfig{} : parse_config(opt.config_path);
    if (!opt.path_sel.empty()) {
        resolve_paths(opt.path_sel);
        cfg.path = opt.path_sel;
    }
    if (!opt.out_dir.empty()) cfg.out_dir = opt.out_dir;
    if (opt.plot) cfg.plot = true;
    if (opt.strict) cfg.strict = true;
    if (!opt.sweep_arg.empty()) {
        // "param=start:stop:count"
        const auto eq = opt.sweep_arg.find('=');
        if (eq == std::string::npos)
            throw ValidationError("--sweep wants param=start:stop:count");
        const std::string param = opt.sweep_arg.substr(0, eq);
        const std::string rest = opt.sweep_arg.substr(eq + 1);
        const auto c1 = rest.find(':');
        const auto c2 = rest.find(':', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw ValidationError("--sweep wants param=start:stop:count");
        sweep_param_from_name(param);
        try {
            cfg.sweep_param = param;
            cfg.sweep_start = std::stod(rest.substr(0, c1));
            cfg.sweep_stop = std::stod(rest.substr(c1 + 1, c2 - c1 - 1));
            cfg.sweep_count = std::stoi(rest.substr(c2 + 1));
        } catch (const std::exception&) {
            throw ValidationError("--sweep: malformed '" + opt.sweep_arg + "'");
        }
        cfg.sweep_log = (param == "frequency");
        cfg.has_sweep = true;
    }
    return cfg;
}

void warn_band(const std::vector<double>& freqs, bool strict) {
    for (double f : freqs) {
        if (!in_validity_band(f)) {
            char buf[128];
            std::snprintf(buf, sizeof(buf),
                          "warning: %g Hz is outside the 50 kHz - 2 MHz validity band", f);
            if (strict) throw ValidationError(buf);
            std::cerr << buf << "\n";
        }
    }
}

void write_metadata(const RunConfig& cfg, const std::string& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw IoError("cannot open '" + file + "' for writing");
    out << serialize_config(cfg).dump(2) << "\n";
}

void maybe_plot(const RunConfig& cfg, const std::vector<CsvRow>& rows, bool log_x,
                const std::string& x_label, const std::string& file, bool use_param) {
    if (!cfg.plot) return;
    if (rows.empty()) {
        if (cfg.strict) throw IoError("plot requested but result is empty");
        std::cerr << "warning: plot skipped, empty result\n";
        return;
    }
    std::vector<PlotSeries> series;
    for (const auto& r : rows) {
        PlotSeries* s = nullptr;
        for (auto& e : series)
            if (e.label == r.path) s = &e;
        if (!s) {
            series.push_back({r.path, {}, {}});
            s = &series.back();
        }
        s->x.push_back(use_param ? r.param_value : r.frequency_hz);
        s->y.push_back(r.gain_db);
    }
    PlotStyle style;
    style.x_label = x_label;
    style.log_x = log_x;
    emit_plot(series, style, file);
}

int cmd_gain(const CliOptions& opt) {
    RunConfig cfg = load_run_config(opt);
    auto model = build_model(cfg);
    std::vector<double> freqs = opt.freq_arg.empty()
                                    ? std::vector<double>{cfg.freq_hz}
                                    : parse_freq_arg(opt.freq_arg);
    warn_band(freqs, cfg.strict);
    std::vector<GainPoint> points;
    for (double f : freqs)
        for (const auto& p : resolve_paths(cfg.path)) {
            auto g = model.geom;
            g.tx_layer = p.tx;
            g.rx_layer = p.rx;
            points.push_back(channel_gain(model.table, model.stack, g, model.elec, f));
        }
    std::filesystem::create_directories(cfg.out_dir);
    const auto rows = csv_rows(points);
    write_csv(rows, cfg.out_dir + "/gain.csv");
    write_metadata(cfg, cfg.out_dir + "/gain.meta.json");
    if (freqs.size() > 1)
        maybe_plot(cfg, rows, true, "frequency (Hz)", cfg.out_dir + "/gain.svg", false);
    for (const auto& p : points)
        std::printf("%12.1f Hz  %s  %8.2f dB  %7.2f deg\n", p.frequency, p.path.c_str(),
                    p.gain_db, p.phase_deg);
    return 0;
}

int cmd_sweep(const CliOptions& opt) {
    RunConfig cfg = load_run_config(opt);
    if (!cfg.has_sweep)
        throw ConfigError("sweep: no sweep given (use --sweep or the config sweep section)");
    auto spec = build_sweep(cfg);
    if (spec.param != SweepParam::frequency) warn_band({spec.freq_hz}, cfg.strict);
    const auto result = run_sweep(spec);
    std::filesystem::create_directories(cfg.out_dir);
    const auto rows = csv_rows(result);
    write_csv(rows, cfg.out_dir + "/sweep.csv");
    write_metadata(cfg, cfg.out_dir + "/sweep.meta.json");
    maybe_plot(cfg, rows, spec.param == SweepParam::frequency,
               sweep_param_name(spec.param), cfg.out_dir + "/sweep.svg", true);
    std::printf("%zu records written to %s/sweep.csv\n", result.records.size(),
                cfg.out_dir.c_str());
    return 0;
}

int cmd_safety(const CliOptions& opt) {
    RunConfig cfg = load_run_config(opt);
    auto model = build_model(cfg);
    const double freq = opt.freq_arg.empty() ? cfg.freq_hz : parse_freq_arg(opt.freq_arg).at(0);
    auto g = model.geom;
    for (const auto& p : resolve_paths(cfg.path == "all" ? "ss" : cfg.path)) {
        g.tx_layer = p.tx;
        g.rx_layer = p.rx;
    }
    const auto rep = safety_report(model.table, model.stack, g, model.elec, freq,
                                   cfg.drive_ma * 1e-3, cfg.contact_limit_ma * 1e-3,
                                   cfg.density_limit_ma_per_m2 * 1e-3);
    std::filesystem::create_directories(cfg.out_dir);
    json j;
    j["frequency_hz"] = rep.frequency_hz;
    j["contact_current_ma"] = rep.contact_current * 1e3;
    j["contact_current_limit_ma"] = rep.contact_current_limit * 1e3;
    j["contact_density_ma_per_m2"] = rep.contact_density * 1e3;
    j["density_limit_ma_per_m2"] = rep.density_limit * 1e3;
    j["conduction_fraction"] = rep.conduction_fraction;
    j["displacement_fraction"] = rep.displacement_fraction;
    json ratios;
    for (const auto& r : rep.conduction_ratios) ratios[r.name] = r.ratio;
    j["conduction_ratios"] = ratios;
    j["max_conduction_dominant_freq_hz"] = rep.max_dominant_freq_hz;
    j["low_frequency_flag"] = rep.low_frequency_flag;
    j["verdict"] = rep.pass ? "pass" : "fail";
    j["reasons"] = rep.reasons;
    j["config"] = serialize_config(cfg);
    std::ofstream out(cfg.out_dir + "/safety.json", std::ios::binary);
    if (!out) throw IoError("cannot open safety.json for writing");
    out << j.dump(2) << "\n";
    std::printf("verdict: %s\n", rep.pass ? "pass" : "fail");
    for (const auto& r : rep.reasons) std::printf("  - %s\n", r.c_str());
    return 0;
}

int cmd_compare(const CliOptions& opt) {
    RunConfig cfg = load_run_config(opt);
    auto model = build_model(cfg);
    std::vector<double> freqs = opt.freq_arg.empty()
                                    ? std::vector<double>{cfg.freq_hz}
                                    : parse_freq_arg(opt.freq_arg);
    warn_band(freqs, cfg.strict);
    auto points = path_comparison(model, freqs);
    std::filesystem::create_directories(cfg.out_dir);
    const auto rows = csv_rows(points);
    write_csv(rows, cfg.out_dir + "/compare.csv");
    write_metadata(cfg, cfg.out_dir + "/compare.meta.json");
    for (const auto& p : points)
        std::printf("%12.1f Hz  %s  %8.2f dB  %7.2f deg\n", p.frequency, p.path.c_str(),
                    p.gain_db, p.phase_deg);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Galvanic-coupled intra-body channel model (tissue equivalent circuit)"};
    app.require_subcommand(1);
    CliOptions opt;
    for (auto* sub : {app.add_subcommand("gain", "Channel gain/phase at one or more frequencies"),
                      app.add_subcommand("sweep", "One-factor parameter sweep"),
                      app.add_subcommand("safety", "Safety limit checks"),
                      app.add_subcommand("compare", "Four-path comparison table")}) {
        sub->add_option("--config", opt.config_path, "Run configuration file (JSON)");
        sub->add_option("--path", opt.path_sel, "Path selection: ss|sm|ms|mm|all");
        sub->add_option("--freq", opt.freq_arg, "Frequency in Hz, or start:stop:count");
        sub->add_option("--sweep", opt.sweep_arg, "Sweep override: param=start:stop:count");
        sub->add_option("--out", opt.out_dir, "Output directory");
        sub->add_flag("--plot", opt.plot, "Also emit an SVG plot");
        sub->add_flag("--strict", opt.strict, "Treat warnings as errors");
    }
    CLI11_PARSE(app, argc, argv);
    try {
        if (app.got_subcommand("gain")) return cmd_gain(opt);
        if (app.got_subcommand("sweep")) return cmd_sweep(opt);
        if (app.got_subcommand("safety")) return cmd_safety(opt);
        if (app.got_subcommand("compare")) return cmd_compare(opt);
    } catch (const gctec::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const gctec::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const gctec::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const gctec::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const gctec::SingularityError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const gctec::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
