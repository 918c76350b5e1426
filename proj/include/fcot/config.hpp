#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "fcot/synth.hpp"
#include "fcot/tracker.hpp"

namespace fcot {

// Line-oriented "key = value" configuration with dotted keys. '#' starts a
// comment. Later assignments win.
class ConfigMap {
public:
    static ConfigMap from_file(const std::string& path);

    void set(const std::string& key, const std::string& value);

    // Parses "key=value" (as passed to --set).
    void set_pair(const std::string& pair);

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    unsigned get_unsigned(const std::string& key, unsigned fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;

    const std::map<std::string, std::string>& entries() const { return values_; }

    // Sorted "key = value" lines; the canonical form behind config_hash.
    std::string canonical_text() const;

private:
    std::map<std::string, std::string> values_;
};

// FNV-1a over the canonical text.
uint64_t config_hash(const ConfigMap& cfg);

// Builders reject unknown keys under their own prefixes (typo guard) and
// ignore the other component's sections. The FCOT_SEED environment variable,
// when set, overrides the "seed" key for both.
TrackerConfig make_tracker_config(const ConfigMap& cfg);
SynthSpec make_synth_spec(const ConfigMap& cfg);

// Applies FCOT_SEED (if present in the environment) to `cfg`.
void apply_seed_env(ConfigMap& cfg);

}  // namespace fcot
