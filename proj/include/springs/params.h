#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace springs {

/// Parameter values typed by their manifest defaults. Keys outside the defaults
/// are rejected.
class ParamSet {
public:
    ParamSet() = default;
    explicit ParamSet(nlohmann::json defaults);

    /// Parses `text` as the type of the default (number, integer, string or list).
    void set(const std::string& key, const std::string& text);
    void set(const std::string& key, const nlohmann::json& value);
    /// "key=value"
    void assign(const std::string& assignment);

    bool has(const std::string& key) const { return values_.contains(key); }
    double number(const std::string& key) const;
    int integer(const std::string& key) const;
    std::string text(const std::string& key) const;
    std::vector<double> list(const std::string& key) const;
    /// Comma-separated words of a string parameter.
    std::vector<std::string> words(const std::string& key) const;

    std::vector<std::string> keys() const;
    const nlohmann::json& values() const { return values_; }

private:
    const nlohmann::json& at(const std::string& key) const;
    void check_key(const std::string& key) const;

    nlohmann::json values_ = nlohmann::json::object();
};

/// Closest valid key by edit distance, empty when nothing is near.
std::string closest_key(std::string_view key, const std::vector<std::string>& valid);

struct ExperimentManifest {
    std::string name;
    ParamSet params;
    std::filesystem::path output_dir;
};

/// Frozen default manifest (the JSON under manifests/ compiled into the library).
const nlohmann::json& manifest_document(const std::string& name);
std::vector<std::string> manifest_names();

/// Defaults for `name` with output under default_output_dir(name).
ExperimentManifest default_manifest(const std::string& name);

/// {"name": ..., "overrides": {...}, "output_dir": ...}; output_dir is optional.
ExperimentManifest read_manifest(const std::filesystem::path& path);

/// $SPRINGS_OUTPUT_DIR/<name>, or out/<name> when the variable is unset.
std::filesystem::path default_output_dir(const std::string& name);

}  // namespace springs
