#include "advactive/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <locale>
#include <sstream>

#include <json.hpp>

#include "advactive/errors.hpp"

namespace advactive {
namespace {

using nlohmann::json;

std::string hex64(std::uint64_t v) {
    std::array<char, 17> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + 16, v, 16);
    std::string s(buf.data(), end);
    return std::string(16 - s.size(), '0') + s;
}

std::string shortest(double v) {
    std::array<char, 32> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), end);
}

json config_json(const ExperimentConfig& c) {
    return json{
        {"dataset",
         {{"task", to_string(c.dataset.task)},
          {"pool_per_class", c.dataset.pool_per_class},
          {"labeled_per_class", c.dataset.labeled_per_class},
          {"validation_per_class", c.dataset.validation_per_class},
          {"test_positive", c.dataset.test_positive},
          {"test_negative", c.dataset.test_negative},
          {"seed", c.dataset.seed}}},
        {"strategy",
         {{"kind", to_string(c.strategy.kind)},
          {"mix_probability", c.strategy.mix_probability},
          {"companion", to_string(c.strategy.companion)}}},
        {"attack",
         {{"enabled", c.attack.enabled},
          {"injections_per_round", c.attack.injections_per_round},
          {"source", to_string(c.attack.source)}}},
        {"solver", {{"c", c.solver.c}, {"tolerance", c.solver.tolerance}, {"max_epochs", c.solver.max_epochs}}},
        {"budget", c.budget},
        {"trials", c.trials},
        {"master_seed", c.master_seed},
        {"output_dir", c.output_dir},
        {"mnist_images", c.mnist_images},
        {"mnist_labels", c.mnist_labels},
    };
}

ExperimentConfig config_from(const json& j) {
    ExperimentConfig c;
    const auto& d = j.at("dataset");
    c.dataset.task = task_from_string(d.at("task").get<std::string>());
    c.dataset.pool_per_class = d.at("pool_per_class").get<std::size_t>();
    c.dataset.labeled_per_class = d.at("labeled_per_class").get<std::size_t>();
    c.dataset.validation_per_class = d.at("validation_per_class").get<std::size_t>();
    c.dataset.test_positive = d.at("test_positive").get<std::size_t>();
    c.dataset.test_negative = d.at("test_negative").get<std::size_t>();
    c.dataset.seed = d.at("seed").get<std::uint64_t>();
    const auto& s = j.at("strategy");
    c.strategy.kind = strategy_from_string(s.at("kind").get<std::string>());
    c.strategy.mix_probability = s.at("mix_probability").get<double>();
    c.strategy.companion = companion_from_string(s.at("companion").get<std::string>());
    const auto& a = j.at("attack");
    c.attack.enabled = a.at("enabled").get<bool>();
    c.attack.injections_per_round = a.at("injections_per_round").get<std::size_t>();
    c.attack.source = candidate_source_from_string(a.at("source").get<std::string>());
    const auto& v = j.at("solver");
    c.solver.c = v.at("c").get<double>();
    c.solver.tolerance = v.at("tolerance").get<double>();
    c.solver.max_epochs = v.at("max_epochs").get<std::size_t>();
    c.budget = j.at("budget").get<std::size_t>();
    c.trials = j.at("trials").get<std::size_t>();
    c.master_seed = j.at("master_seed").get<std::uint64_t>();
    c.output_dir = j.at("output_dir").get<std::string>();
    c.mnist_images = j.at("mnist_images").get<std::string>();
    c.mnist_labels = j.at("mnist_labels").get<std::string>();
    return c;
}

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    return cells;
}

double parse_double(const std::string& s, const std::filesystem::path& path) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw Error("malformed number '" + s + "' in " + path.string());
    return v;
}

}  // namespace

std::string format_fixed(double value, int digits) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::fixed, digits);
    if (ec != std::errc{}) throw ValidationError("value out of range for fixed formatting");
    return std::string(buf.data(), end);
}

std::string config_to_json(const ExperimentConfig& config) { return config_json(config).dump(2); }

ExperimentConfig config_from_json(std::string_view text) {
    try {
        return config_from(json::parse(text));
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed experiment config: ") + e.what());
    }
}

std::string curve_csv(const ErrorCurve& curve) {
    std::string out = "query,mean_test_error";
    for (std::size_t t = 0; t < curve.per_trial.size(); ++t) out += ",trial_" + std::to_string(t);
    out += '\n';
    for (std::size_t q = 0; q < curve.mean.size(); ++q) {
        out += std::to_string(q) + ',' + format_fixed(curve.mean[q]);
        for (const auto& trial : curve.per_trial) out += ',' + format_fixed(trial[q]);
        out += '\n';
    }
    return out;
}

std::string trial_csv(const TrialRecord& record) {
    std::string out =
        "round,test_error,chosen_id,provenance,branch,oracle_label,injected_id,attack_skipped,labeled_size,"
        "unlabeled_size,model_hash\n";
    for (const auto& ev : record.rounds) {
        out += std::to_string(ev.round) + ',' + format_fixed(ev.test_error) + ',';
        if (ev.chosen) {
            out += std::to_string(*ev.chosen) + ',' + std::string(to_string(ev.chosen_provenance)) + ',' +
                   std::string(to_string(ev.branch)) + ',';
        } else {
            out += ",,,";
        }
        out += (ev.oracle_label ? std::string(to_string(*ev.oracle_label)) : std::string()) + ',';
        out += (ev.injected ? std::to_string(*ev.injected) : std::string()) + ',';
        out += std::string(ev.attack_skipped ? "1" : "0") + ',' + std::to_string(ev.labeled_size) + ',' +
               std::to_string(ev.unlabeled_size) + ',' + hex64(ev.model_hash) + '\n';
    }
    return out;
}

std::string metadata_json(const ExperimentResult& result) {
    json trials = json::array();
    for (const auto& t : result.trials)
        trials.push_back({{"index", t.trial_index}, {"seed", t.seed}, {"exhausted", t.exhausted}});
    json meta{
        {"version", kVersion},
        {"config", config_json(result.config)},
        {"label", strategy_label(result.config.strategy)},
        {"trials", trials},
        {"oracle", {{"kind", to_string(result.oracle_kind)}, {"fingerprint", hex64(result.oracle_fingerprint)}}},
        {"conventions",
         {{"pixel_scaling", "bytes / 255"},
          {"class_labels", "digit 5 -> +1, digit 6 -> -1; synthetic mean (2,0) -> +1"},
          {"validation_set", "fixed per trial; sigmoid refit after every retrain"},
          {"full_oracle_training_set", "pool and test samples"},
          {"mnist_test_source", "remaining 5/6 digits of the supplied files, disjoint from the pool"},
          {"tie_rule", "zero margin -> +1; selection ties -> lowest index"}}},
    };
    return meta.dump(2) + "\n";
}

void write_text(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw Error("failed writing " + path.string());
}

void write_results(const ExperimentResult& result, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error("cannot create " + dir.string() + ": " + ec.message());
    write_text(dir / "curve.csv", curve_csv(result.curve));
    write_text(dir / "meta.json", metadata_json(result));
    for (const auto& t : result.trials)
        write_text(dir / ("trial_" + std::to_string(t.trial_index) + ".csv"), trial_csv(t));
}

std::string strategy_label(const StrategyConfig& strategy) {
    if (strategy.kind != StrategyKind::mixed) return std::string(to_string(strategy.kind));
    return "mixed-" + std::string(to_string(strategy.companion)) + " p=" + shortest(strategy.mix_probability);
}

std::string render_svg(std::span<const NamedCurve> curves) {
    if (curves.empty()) throw ValidationError("no curves to plot");

    constexpr double width = 720.0;
    constexpr double height = 420.0;
    constexpr double left = 64.0;
    constexpr double right = 190.0;
    constexpr double top = 24.0;
    constexpr double bottom = 56.0;
    constexpr std::array<const char*, 8> palette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                 "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

    std::size_t max_len = 1;
    double max_err = 0.0;
    for (const auto& c : curves) {
        max_len = std::max(max_len, c.values.size());
        for (double v : c.values) max_err = std::max(max_err, v);
    }
    const double x_max = static_cast<double>(std::max<std::size_t>(max_len - 1, 1));
    double y_max = std::max(0.05, std::ceil(max_err / 0.05) * 0.05);
    if (y_max < max_err) y_max += 0.05;

    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;
    auto px = [&](double q) { return format_fixed(left + q / x_max * plot_w, 2); };
    auto py = [&](double e) { return format_fixed(top + (1.0 - e / y_max) * plot_h, 2); };

    std::ostringstream svg;
    svg.imbue(std::locale::classic());
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    svg << "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n";
    svg << "<line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(x_max) << "\" y2=\"" << py(0) << "\"/>\n";
    svg << "<line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(0) << "\" y2=\"" << py(y_max) << "\"/>\n";
    svg << "</g>\n";

    const int y_ticks = 5;
    for (int k = 0; k <= y_ticks; ++k) {
        const double e = y_max * k / y_ticks;
        svg << "<line x1=\"" << format_fixed(left - 4, 2) << "\" y1=\"" << py(e) << "\" x2=\"" << px(0) << "\" y2=\""
            << py(e) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << format_fixed(left - 8, 2) << "\" y=\"" << py(e) << "\" text-anchor=\"end\" "
            << "dominant-baseline=\"middle\">" << format_fixed(e, 3) << "</text>\n";
    }
    const double x_step = std::max(1.0, std::ceil(x_max / 10.0));
    for (double q = 0.0; q <= x_max + 1e-9; q += x_step) {
        svg << "<line x1=\"" << px(q) << "\" y1=\"" << py(0) << "\" x2=\"" << px(q) << "\" y2=\""
            << format_fixed(top + plot_h + 4, 2) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << px(q) << "\" y=\"" << format_fixed(top + plot_h + 18, 2) << "\" text-anchor=\"middle\">"
            << static_cast<long>(q) << "</text>\n";
    }
    svg << "<text x=\"" << format_fixed(left + plot_w / 2, 2) << "\" y=\"" << format_fixed(height - 12, 2)
        << "\" text-anchor=\"middle\">query number</text>\n";
    svg << "<text x=\"16\" y=\"" << format_fixed(top + plot_h / 2, 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << format_fixed(top + plot_h / 2, 2) << ")\">mean test error</text>\n";

    for (std::size_t i = 0; i < curves.size(); ++i) {
        const char* color = palette[i % palette.size()];
        svg << "<polyline class=\"curve\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t q = 0; q < curves[i].values.size(); ++q) {
            if (q) svg << ' ';
            svg << px(static_cast<double>(q)) << ',' << py(curves[i].values[q]);
        }
        svg << "\"/>\n";
        const double ly = top + 10.0 + 18.0 * static_cast<double>(i);
        svg << "<line x1=\"" << format_fixed(width - right + 12, 2) << "\" y1=\"" << format_fixed(ly, 2) << "\" x2=\""
            << format_fixed(width - right + 36, 2) << "\" y2=\"" << format_fixed(ly, 2) << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        svg << "<text class=\"legend\" x=\"" << format_fixed(width - right + 42, 2) << "\" y=\"" << format_fixed(ly, 2)
            << "\" dominant-baseline=\"middle\">" << xml_escape(curves[i].name) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

NamedCurve load_curve(const std::filesystem::path& dir) {
    const auto csv_path = dir / "curve.csv";
    std::ifstream in(csv_path);
    if (!in) throw Error("cannot open " + csv_path.string());
    NamedCurve curve;
    std::string line;
    if (!std::getline(in, line) || line.rfind("query,mean_test_error", 0) != 0)
        throw Error("missing curve.csv header in " + csv_path.string());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() < 2) throw Error("short row in " + csv_path.string());
        curve.values.push_back(parse_double(cells[1], csv_path));
    }

    curve.name = dir.filename().string();
    if (curve.name.empty()) curve.name = dir.parent_path().filename().string();
    std::ifstream meta_in(dir / "meta.json");
    if (meta_in) {
        try {
            const json meta = json::parse(meta_in);
            curve.name = meta.at("label").get<std::string>();
            if (meta.at("config").at("attack").at("enabled").get<bool>()) curve.name += " (attack)";
        } catch (const json::exception&) {
            // keep the directory name
        }
    }
    return curve;
}

}  // namespace advactive
