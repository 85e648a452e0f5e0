#include "blurkit/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace blurkit {

namespace {

struct KeyBinding {
    ConfigKey meta;
    std::function<void(ToolConfig&, const std::string&)> apply;
};

int to_int(const std::string& v) {
    std::size_t pos = 0;
    const int out = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return out;
}

double to_double(const std::string& v) {
    std::size_t pos = 0;
    const double out = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return out;
}

bool to_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "off" || v == "no") return false;
    throw std::invalid_argument("not a boolean");
}

const std::vector<KeyBinding>& bindings() {
    static const std::vector<KeyBinding> table = [] {
        std::vector<KeyBinding> t;
        auto add_int = [&t](const char* sec, const char* key, const char* def, const char* help,
                            std::function<void(ToolConfig&, int)> set) {
            t.push_back({{sec, key, KeyType::Int, def, help},
                         [set](ToolConfig& c, const std::string& v) { set(c, to_int(v)); }});
        };
        auto add_dbl = [&t](const char* sec, const char* key, const char* def, const char* help,
                            std::function<void(ToolConfig&, double)> set) {
            t.push_back({{sec, key, KeyType::Double, def, help},
                         [set](ToolConfig& c, const std::string& v) { set(c, to_double(v)); }});
        };
        auto add_bool = [&t](const char* sec, const char* key, const char* def, const char* help,
                             std::function<void(ToolConfig&, bool)> set) {
            t.push_back({{sec, key, KeyType::Bool, def, help},
                         [set](ToolConfig& c, const std::string& v) { set(c, to_bool(v)); }});
        };

        add_int("dct", "patch", "8", "DCT patch side length",
                [](ToolConfig& c, int v) { c.pipeline.dct.patch = v; });
        add_dbl("dct", "sigma_blur", "1.0", "re-blur Gaussian std-dev",
                [](ToolConfig& c, double v) { c.pipeline.dct.sigma_blur = v; });
        add_dbl("dct", "ratio_guard", "0.0001", "division guard for the coefficient ratio",
                [](ToolConfig& c, double v) { c.pipeline.dct.ratio_guard = v; });
        add_bool("dct", "ratio_bands", "true",
                 "band-weight the ratio vector (false: magnitudes of the patch vector)",
                 [](ToolConfig& c, bool v) { c.pipeline.dct.ratio_bands = v; });
        add_int("dct", "band_low", "0", "low/mid band split, 1-based; 0 = ceil(n/3)+1",
                [](ToolConfig& c, int v) { c.pipeline.dct.dcr.band_low = v; });
        add_int("dct", "band_high", "0", "mid/high band split, 1-based; 0 = ceil(2n/3)+1",
                [](ToolConfig& c, int v) { c.pipeline.dct.dcr.band_high = v; });
        add_dbl("dct", "weight_low", "1.0", "low-band weight",
                [](ToolConfig& c, double v) { c.pipeline.dct.dcr.weight_low = v; });
        add_dbl("dct", "weight_mid", "1.0", "mid-band weight",
                [](ToolConfig& c, double v) { c.pipeline.dct.dcr.weight_mid = v; });
        add_dbl("dct", "weight_high", "1.0", "high-band weight",
                [](ToolConfig& c, double v) { c.pipeline.dct.dcr.weight_high = v; });
        add_dbl("dct", "map_gain", "0.4", "logistic mapping gain",
                [](ToolConfig& c, double v) { c.pipeline.dct.dcr.map_gain = v; });
        add_dbl("dct", "map_base", "2.718281828459045", "logistic mapping base",
                [](ToolConfig& c, double v) { c.pipeline.dct.dcr.map_base = v; });
        add_int("dct", "descriptor_order", "3", "max coefficient order kept as refine descriptors",
                [](ToolConfig& c, int v) { c.pipeline.dct.descriptor_order = v; });
        add_bool("dct", "refine", "true", "non-local map refinement on/off",
                 [](ToolConfig& c, bool v) { c.pipeline.dct.refine = v; });
        add_int("dct", "min_window", "5", "small refine search window (odd)",
                [](ToolConfig& c, int v) { c.pipeline.dct.refine_params.min_window = v; });
        add_int("dct", "max_window", "11", "large refine search window (odd)",
                [](ToolConfig& c, int v) { c.pipeline.dct.refine_params.max_window = v; });
        add_dbl("dct", "filter_strength", "10.0", "descriptor-distance scale of refine weights",
                [](ToolConfig& c, double v) { c.pipeline.dct.refine_params.filter_strength = v; });
        add_dbl("dct", "min_weight", "0.5", "blend weight of the small-window estimate",
                [](ToolConfig& c, double v) { c.pipeline.dct.refine_params.min_weight = v; });
        add_dbl("dct", "max_weight", "0.5", "blend weight of the large-window estimate",
                [](ToolConfig& c, double v) { c.pipeline.dct.refine_params.max_weight = v; });
        add_bool("dct", "threshold", "true", "double-threshold stage on/off",
                 [](ToolConfig& c, bool v) { c.pipeline.dct.threshold = v; });
        add_dbl("dct", "th1", "0.7", "upper (keep-sharp) threshold",
                [](ToolConfig& c, double v) { c.pipeline.dct.th1 = v; });
        add_dbl("dct", "th2", "-1.0", "lower (keep-blur) threshold; -1 = 0.4*th1",
                [](ToolConfig& c, double v) { c.pipeline.dct.th2 = v; });

        add_dbl("pcnn", "beta", "0.2", "linking strength",
                [](ToolConfig& c, double v) { c.pipeline.pcnn.beta = v; });
        add_dbl("pcnn", "link_gain", "1.0", "linking input amplitude",
                [](ToolConfig& c, double v) { c.pipeline.pcnn.link_gain = v; });
        add_dbl("pcnn", "link_decay", "0.7", "linking leak rate",
                [](ToolConfig& c, double v) { c.pipeline.pcnn.link_decay = v; });
        add_dbl("pcnn", "theta_gain", "20.0", "threshold kick after a pulse",
                [](ToolConfig& c, double v) { c.pipeline.pcnn.theta_gain = v; });
        add_dbl("pcnn", "theta_decay", "0.2", "threshold leak rate",
                [](ToolConfig& c, double v) { c.pipeline.pcnn.theta_decay = v; });
        add_int("pcnn", "max_iters", "50", "iteration cap",
                [](ToolConfig& c, int v) { c.pipeline.pcnn.max_iters = v; });
        add_bool("pcnn", "adapt", "true", "derive theta_init/theta_floor from the stimulus",
                 [](ToolConfig& c, bool v) { c.pipeline.pcnn_adapt = v; });

        add_bool("segment", "bilateral", "false", "bilateral prefilter on/off",
                 [](ToolConfig& c, bool v) { c.pipeline.bilateral = v; });
        add_dbl("segment", "bilateral_sigma_spatial", "2.0", "bilateral spatial std-dev",
                [](ToolConfig& c, double v) { c.pipeline.bilateral_sigma_spatial = v; });
        add_dbl("segment", "bilateral_sigma_range", "0.1", "bilateral range std-dev",
                [](ToolConfig& c, double v) { c.pipeline.bilateral_sigma_range = v; });
        add_dbl("segment", "wave_ratio", "0.5",
                "candidate waves need mean stimulus >= ratio * max stimulus",
                [](ToolConfig& c, double v) { c.pipeline.wave_ratio = v; });
        add_dbl("segment", "wave_floor", "-1.0",
                "absolute mean-stimulus floor for candidate waves; -1 = th1",
                [](ToolConfig& c, double v) { c.pipeline.wave_floor = v; });
        add_int("segment", "max_waves", "0", "cap on accepted waves; 0 = unlimited",
                [](ToolConfig& c, int v) { c.pipeline.max_waves = v; });
        add_int("segment", "area_threshold", "-1",
                "keep components larger than this; -1 = 0.1% of pixels",
                [](ToolConfig& c, int v) { c.pipeline.area_threshold = v; });

        add_dbl("eval", "alpha_sq", "0.3", "F-measure weight on precision",
                [](ToolConfig& c, double v) { c.alpha_sq = v; });
        return t;
    }();
    return table;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

const std::vector<ConfigKey>& config_registry() {
    static const std::vector<ConfigKey> keys = [] {
        std::vector<ConfigKey> out;
        for (const auto& b : bindings()) out.push_back(b.meta);
        return out;
    }();
    return keys;
}

ToolConfig parse_config_text(const std::string& text) {
    ToolConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw FormatError("config line " + std::to_string(line_no) +
                                  ": unterminated section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            const auto& reg = bindings();
            const bool known = std::any_of(reg.begin(), reg.end(), [&](const KeyBinding& b) {
                return b.meta.section == section;
            });
            if (!known) {
                throw FormatError("config line " + std::to_string(line_no) + ": unknown section [" +
                                  section + "]");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw FormatError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty()) {
            throw FormatError("config line " + std::to_string(line_no) +
                              ": key outside any [section]");
        }
        const auto& reg = bindings();
        const auto it = std::find_if(reg.begin(), reg.end(), [&](const KeyBinding& b) {
            return b.meta.section == section && b.meta.key == key;
        });
        if (it == reg.end()) {
            throw FormatError("config line " + std::to_string(line_no) + ": unknown key " + section +
                              "." + key);
        }
        try {
            it->apply(cfg, value);
        } catch (const std::exception&) {
            throw FormatError("config line " + std::to_string(line_no) + ": invalid value '" +
                              value + "' for " + section + "." + key);
        }
    }
    return cfg;
}

ToolConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string config_help() {
    std::ostringstream out;
    std::string section;
    for (const auto& k : config_registry()) {
        if (k.section != section) {
            section = k.section;
            out << "[" << section << "]\n";
        }
        char line[160];
        std::snprintf(line, sizeof(line), "  %-24s = %-20s %s\n", k.key.c_str(),
                      k.default_value.c_str(), k.description.c_str());
        out << line;
    }
    return out.str();
}

}  // namespace blurkit
