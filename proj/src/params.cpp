#include <springs/params.h>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

#include <springs/errors.h>

namespace springs {

namespace detail {
// Generated from manifests/*.json at configure time.
extern const std::pair<std::string_view, std::string_view> kManifests[];
extern const std::size_t kManifestCount;
}  // namespace detail

namespace {

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto comma = s.find(',', start);
        const auto end = comma == std::string_view::npos ? s.size() : comma;
        std::string item = trim(s.substr(start, end - start));
        if (!item.empty()) out.push_back(std::move(item));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

double parse_double(const std::string& key, const std::string& text)
{
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ConfigError("parameter '" + key + "' expects a number, got '" + text + "'");
    }
    return v;
}

long long parse_integer(const std::string& key, const std::string& text)
{
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ConfigError("parameter '" + key + "' expects an integer, got '" + text + "'");
    }
    return v;
}

std::size_t edit_distance(std::string_view a, std::string_view b)
{
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t up = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
            diag = up;
        }
    }
    return row[b.size()];
}

std::string join(const std::vector<std::string>& items)
{
    std::string out;
    for (const auto& s : items) {
        if (!out.empty()) out += ", ";
        out += s;
    }
    return out;
}

const std::map<std::string, nlohmann::json>& manifest_table()
{
    static const std::map<std::string, nlohmann::json> table = [] {
        std::map<std::string, nlohmann::json> t;
        for (std::size_t i = 0; i < detail::kManifestCount; ++i) {
            const auto& [name, text] = detail::kManifests[i];
            t.emplace(std::string(name), nlohmann::json::parse(text));
        }
        return t;
    }();
    return table;
}

}  // namespace

ParamSet::ParamSet(nlohmann::json defaults) : values_(std::move(defaults))
{
    if (!values_.is_object()) throw ConfigError("parameter defaults must be an object");
}

void ParamSet::check_key(const std::string& key) const
{
    if (values_.contains(key)) return;
    const auto valid = keys();
    std::string msg = "unknown parameter '" + key + "'";
    const std::string near = closest_key(key, valid);
    if (!near.empty()) msg += "; did you mean '" + near + "'?";
    msg += " valid keys: " + join(valid);
    throw ConfigError(msg);
}

void ParamSet::set(const std::string& key, const std::string& text)
{
    check_key(key);
    nlohmann::json& slot = values_[key];
    const std::string t = trim(text);
    if (slot.is_number_integer()) {
        slot = parse_integer(key, t);
    } else if (slot.is_number()) {
        slot = parse_double(key, t);
    } else if (slot.is_boolean()) {
        if (t != "true" && t != "false") throw ConfigError("parameter '" + key + "' expects true or false");
        slot = t == "true";
    } else if (slot.is_array()) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& item : split(t)) arr.push_back(parse_double(key, item));
        slot = std::move(arr);
    } else {
        slot = t;
    }
}

void ParamSet::set(const std::string& key, const nlohmann::json& value)
{
    check_key(key);
    nlohmann::json& slot = values_[key];
    const bool ok = (slot.is_number_integer() && value.is_number_integer()) ||
                    (slot.is_number_float() && value.is_number()) ||
                    (slot.is_boolean() && value.is_boolean()) ||
                    (slot.is_string() && value.is_string()) ||
                    (slot.is_array() && value.is_array() &&
                     std::all_of(value.begin(), value.end(), [](const auto& v) { return v.is_number(); }));
    if (!ok) {
        throw ConfigError("parameter '" + key + "' expects " + slot.type_name() + ", got " + value.type_name());
    }
    slot = slot.is_number_float() ? nlohmann::json(value.get<double>()) : value;
}

void ParamSet::assign(const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key=value, got '" + assignment + "'");
    set(trim(std::string_view(assignment).substr(0, eq)), assignment.substr(eq + 1));
}

const nlohmann::json& ParamSet::at(const std::string& key) const
{
    check_key(key);
    return values_.at(key);
}

double ParamSet::number(const std::string& key) const
{
    const auto& v = at(key);
    if (!v.is_number()) throw ConfigError("parameter '" + key + "' is not a number");
    return v.get<double>();
}

int ParamSet::integer(const std::string& key) const
{
    const auto& v = at(key);
    if (!v.is_number_integer()) throw ConfigError("parameter '" + key + "' is not an integer");
    return v.get<int>();
}

std::string ParamSet::text(const std::string& key) const
{
    const auto& v = at(key);
    if (!v.is_string()) throw ConfigError("parameter '" + key + "' is not a string");
    return v.get<std::string>();
}

std::vector<double> ParamSet::list(const std::string& key) const
{
    const auto& v = at(key);
    if (!v.is_array()) throw ConfigError("parameter '" + key + "' is not a list");
    return v.get<std::vector<double>>();
}

std::vector<std::string> ParamSet::words(const std::string& key) const
{
    return split(text(key));
}

std::vector<std::string> ParamSet::keys() const
{
    std::vector<std::string> out;
    for (const auto& [k, v] : values_.items()) out.push_back(k);
    return out;
}

std::string closest_key(std::string_view key, const std::vector<std::string>& valid)
{
    std::string best;
    std::size_t best_d = std::max<std::size_t>(2, key.size() / 3) + 1;
    for (const auto& v : valid) {
        const std::size_t d = edit_distance(key, v);
        if (d < best_d) {
            best_d = d;
            best = v;
        }
    }
    return best;
}

const nlohmann::json& manifest_document(const std::string& name)
{
    const auto& table = manifest_table();
    const auto it = table.find(name);
    if (it == table.end()) {
        std::string msg = "unknown experiment '" + name + "'";
        const auto names = manifest_names();
        const std::string near = closest_key(name, names);
        if (!near.empty()) msg += "; did you mean '" + near + "'?";
        throw ConfigError(msg + " known: " + join(names));
    }
    return it->second;
}

std::vector<std::string> manifest_names()
{
    std::vector<std::string> out;
    for (const auto& [name, doc] : manifest_table()) out.push_back(name);
    return out;
}

ExperimentManifest default_manifest(const std::string& name)
{
    const auto& doc = manifest_document(name);
    return {name, ParamSet(doc.at("params")), default_output_dir(name)};
}

ExperimentManifest read_manifest(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open manifest " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("manifest " + path.string() + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("name") || !doc["name"].is_string()) {
        throw ConfigError("manifest " + path.string() + " needs a string field 'name'");
    }
    for (const auto& [k, v] : doc.items()) {
        if (k != "name" && k != "overrides" && k != "output_dir") {
            throw ConfigError("manifest " + path.string() + ": unknown field '" + k +
                              "'; valid fields: name, overrides, output_dir");
        }
    }
    ExperimentManifest m = default_manifest(doc["name"].get<std::string>());
    if (doc.contains("overrides")) {
        if (!doc["overrides"].is_object()) throw ConfigError("manifest field 'overrides' must be an object");
        for (const auto& [k, v] : doc["overrides"].items()) m.params.set(k, v);
    }
    if (doc.contains("output_dir")) m.output_dir = doc["output_dir"].get<std::string>();
    return m;
}

std::filesystem::path default_output_dir(const std::string& name)
{
    const char* env = std::getenv("SPRINGS_OUTPUT_DIR");
    const std::filesystem::path base = env && *env ? std::filesystem::path(env) : std::filesystem::path("out");
    return base / name;
}

}  // namespace springs
