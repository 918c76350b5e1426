#include "fcot/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fcot {

namespace {

std::string trim(const std::string& s) {
    const size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

ConfigMap ConfigMap::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    ConfigMap cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const size_t eq = t.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("config: missing '=' at " + path + ":" +
                                     std::to_string(lineno));
        }
        cfg.set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    return cfg;
}

void ConfigMap::set(const std::string& key, const std::string& value) {
    if (key.empty()) throw std::invalid_argument("config: empty key");
    values_[key] = value;
}

void ConfigMap::set_pair(const std::string& pair) {
    const size_t eq = pair.find('=');
    if (eq == std::string::npos) {
        throw std::invalid_argument("config: expected key=value, got '" + pair + "'");
    }
    set(trim(pair.substr(0, eq)), trim(pair.substr(eq + 1)));
}

double ConfigMap::get_double(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) {
        throw std::invalid_argument("config: '" + key + "' is not a number: " + it->second);
    }
    return v;
}

int ConfigMap::get_int(const std::string& key, int fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    size_t pos = 0;
    const int v = std::stoi(it->second, &pos);
    if (pos != it->second.size()) {
        throw std::invalid_argument("config: '" + key + "' is not an integer: " + it->second);
    }
    return v;
}

unsigned ConfigMap::get_unsigned(const std::string& key, unsigned fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    const unsigned long v = std::stoul(it->second);
    return static_cast<unsigned>(v);
}

bool ConfigMap::get_bool(const std::string& key, bool fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    const std::string& s = it->second;
    if (s == "1" || s == "true" || s == "on" || s == "yes") return true;
    if (s == "0" || s == "false" || s == "off" || s == "no") return false;
    throw std::invalid_argument("config: '" + key + "' is not a boolean: " + s);
}

std::string ConfigMap::get_string(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

std::string ConfigMap::canonical_text() const {
    std::ostringstream out;
    for (const auto& [k, v] : values_) out << k << " = " << v << "\n";
    return out.str();
}

uint64_t config_hash(const ConfigMap& cfg) {
    const std::string text = cfg.canonical_text();
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

void apply_seed_env(ConfigMap& cfg) {
    if (const char* env = std::getenv("FCOT_SEED")) {
        cfg.set("seed", env);
    }
}

namespace {

void check_known_keys(const ConfigMap& cfg, const std::set<std::string>& prefixes,
                      const std::set<std::string>& known) {
    for (const auto& [key, value] : cfg.entries()) {
        const size_t dot = key.find('.');
        const std::string prefix = dot == std::string::npos ? key : key.substr(0, dot);
        if (prefixes.count(prefix) == 0) continue;  // other component's section
        if (known.count(key) == 0) {
            throw std::invalid_argument("config: unknown key '" + key + "'");
        }
    }
}

}  // namespace

TrackerConfig make_tracker_config(const ConfigMap& cfg) {
    static const std::set<std::string> known = {
        "seed",
        "backbone.feature_channels", "backbone.seed", "backbone.search_area_factor",
        "backbone.search_size", "backbone.separate_reg_features", "backbone.reg_seed_offset",
        "rmg.eta", "rmg.lambda_reg", "rmg.rect_iters_init", "rmg.rect_iters_update",
        "rmg.update_interval", "rmg.half_update", "rmg.pool_samples_per_bin",
        "rmg.vicinity_radius", "rmg.kernel", "rmg.memory_capacity", "rmg.generator_seed",
        "cls.alpha", "cls.beta", "cls.sigma_factor", "cls.eta", "cls.iters_init",
        "cls.iters_update", "cls.update_interval", "cls.memory_capacity", "cls.kernel",
        "tracker.peak_threshold",
    };
    check_known_keys(cfg, {"seed", "backbone", "rmg", "cls", "tracker"}, known);

    TrackerConfig t;
    t.seed = cfg.get_unsigned("seed", t.seed);
    t.backbone.feature_channels = cfg.get_int("backbone.feature_channels", t.backbone.feature_channels);
    t.backbone.seed = cfg.get_unsigned("backbone.seed", t.backbone.seed);
    t.backbone.search_area_factor =
        cfg.get_double("backbone.search_area_factor", t.backbone.search_area_factor);
    t.backbone.search_size = cfg.get_int("backbone.search_size", t.backbone.search_size);
    t.backbone.separate_reg_features =
        cfg.get_bool("backbone.separate_reg_features", t.backbone.separate_reg_features);
    t.backbone.reg_seed_offset = cfg.get_unsigned("backbone.reg_seed_offset", t.backbone.reg_seed_offset);

    t.rmg.eta = cfg.get_double("rmg.eta", t.rmg.eta);
    t.rmg.lambda_reg = cfg.get_double("rmg.lambda_reg", t.rmg.lambda_reg);
    t.rmg.rect_iters_init = cfg.get_int("rmg.rect_iters_init", t.rmg.rect_iters_init);
    t.rmg.rect_iters_update = cfg.get_int("rmg.rect_iters_update", t.rmg.rect_iters_update);
    t.rmg.update_interval = cfg.get_int("rmg.update_interval", t.rmg.update_interval);
    t.rmg.half_update = cfg.get_bool("rmg.half_update", t.rmg.half_update);
    t.rmg.pool_samples_per_bin = cfg.get_int("rmg.pool_samples_per_bin", t.rmg.pool_samples_per_bin);
    t.rmg.vicinity_radius = cfg.get_int("rmg.vicinity_radius", t.rmg.vicinity_radius);
    t.rmg.kernel = cfg.get_int("rmg.kernel", t.rmg.kernel);
    t.rmg.memory_capacity = cfg.get_int("rmg.memory_capacity", t.rmg.memory_capacity);
    t.rmg.generator_seed = cfg.get_unsigned("rmg.generator_seed", t.rmg.generator_seed);

    t.cls.alpha = cfg.get_double("cls.alpha", t.cls.alpha);
    t.cls.beta = cfg.get_double("cls.beta", t.cls.beta);
    t.cls.sigma_factor = cfg.get_double("cls.sigma_factor", t.cls.sigma_factor);
    t.cls.eta = cfg.get_double("cls.eta", t.cls.eta);
    t.cls.iters_init = cfg.get_int("cls.iters_init", t.cls.iters_init);
    t.cls.iters_update = cfg.get_int("cls.iters_update", t.cls.iters_update);
    t.cls.update_interval = cfg.get_int("cls.update_interval", t.cls.update_interval);
    t.cls.memory_capacity = cfg.get_int("cls.memory_capacity", t.cls.memory_capacity);
    t.cls.kernel = cfg.get_int("cls.kernel", t.cls.kernel);

    t.peak_threshold = cfg.get_double("tracker.peak_threshold", t.peak_threshold);
    t.validate();
    return t;
}

SynthSpec make_synth_spec(const ConfigMap& cfg) {
    static const std::set<std::string> known = {
        "seed",
        "synth.frames", "synth.canvas_h", "synth.canvas_w", "synth.shape", "synth.target_w",
        "synth.target_h", "synth.texture_seed", "synth.translation_amplitude", "synth.scale_drift",
        "synth.aspect_rate", "synth.aspect_period", "synth.distractors",
        "synth.distractor_similarity", "synth.occluders", "synth.occluder_duty",
        "synth.noise_sigma",
    };
    check_known_keys(cfg, {"seed", "synth"}, known);

    SynthSpec s;
    s.seed = cfg.get_unsigned("seed", s.seed);
    s.frames = cfg.get_int("synth.frames", s.frames);
    s.canvas_h = cfg.get_int("synth.canvas_h", s.canvas_h);
    s.canvas_w = cfg.get_int("synth.canvas_w", s.canvas_w);
    const std::string shape = cfg.get_string("synth.shape", "rectangle");
    if (shape == "rectangle") {
        s.shape = SynthSpec::Shape::kRectangle;
    } else if (shape == "ellipse") {
        s.shape = SynthSpec::Shape::kEllipse;
    } else {
        throw std::invalid_argument("config: synth.shape must be rectangle or ellipse");
    }
    s.target_w = cfg.get_double("synth.target_w", s.target_w);
    s.target_h = cfg.get_double("synth.target_h", s.target_h);
    s.texture_seed = cfg.get_unsigned("synth.texture_seed", s.texture_seed);
    s.translation_amplitude = cfg.get_double("synth.translation_amplitude", s.translation_amplitude);
    s.scale_drift = cfg.get_double("synth.scale_drift", s.scale_drift);
    s.aspect_rate = cfg.get_double("synth.aspect_rate", s.aspect_rate);
    s.aspect_period = cfg.get_double("synth.aspect_period", s.aspect_period);
    s.distractors = cfg.get_int("synth.distractors", s.distractors);
    s.distractor_similarity = cfg.get_double("synth.distractor_similarity", s.distractor_similarity);
    s.occluders = cfg.get_int("synth.occluders", s.occluders);
    s.occluder_duty = cfg.get_double("synth.occluder_duty", s.occluder_duty);
    s.noise_sigma = cfg.get_double("synth.noise_sigma", s.noise_sigma);
    s.validate();
    return s;
}

}  // namespace fcot
