#include "optomech/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <string_view>

#include "optomech/constants.hpp"
#include "optomech/errors.hpp"

namespace optomech {

PhysicalParams reference_params() {
    using constants::hz_to_rads;
    PhysicalParams p;
    p.omega_M = hz_to_rads(947e3);
    p.gamma = hz_to_rads(140.0);
    p.mass = 145e-12;
    p.cavity_length = 25e-3;
    p.omega_c = hz_to_rads(5.26e14);
    p.omega_L = hz_to_rads(2.82e14);
    p.kappa = hz_to_rads(14000.0);
    p.temperature = 1e-4;
    p.squeezing_r = 1.0;
    p.hopping_lambda = 0.2 * p.kappa;
    p.drive = Cooperativity{32.11};
    p.detuning = -p.omega_M;
    return p;
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

struct Entry {
    double value;
    int line;
};

class KeyTable {
public:
    explicit KeyTable(std::string source) : source_(std::move(source)) {}

    void insert(std::string key, double value, int line) {
        if (!entries_.emplace(key, Entry{value, line}).second) fail(line, "duplicate key '" + key + "'");
    }

    std::optional<double> take(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return std::nullopt;
        const double v = it->second.value;
        entries_.erase(it);
        return v;
    }

    // A frequency given as <name>_hz or <name>_rads, converted to rad/s.
    std::optional<double> take_frequency(const std::string& name) {
        const bool has_hz = entries_.count(name + "_hz") > 0;
        const bool has_rads = entries_.count(name + "_rads") > 0;
        if (has_hz && has_rads)
            fail(entries_.at(name + "_rads").line, "both " + name + "_hz and " + name + "_rads given");
        if (has_hz) return constants::hz_to_rads(*take(name + "_hz"));
        return take(name + "_rads");
    }

    int line_of(const std::string& key) const { return entries_.at(key).line; }
    bool contains(const std::string& key) const { return entries_.count(key) > 0; }

    void reject_leftovers() const {
        if (!entries_.empty()) {
            const auto& [key, e] = *entries_.begin();
            fail(e.line, "unknown key '" + key + "'");
        }
    }

    [[noreturn]] void fail(int line, const std::string& msg) const {
        throw ConfigError(source_ + ":" + std::to_string(line) + ": " + msg);
    }

private:
    std::string source_;
    std::map<std::string, Entry> entries_;
};

}  // namespace

PhysicalParams apply_config(PhysicalParams p, std::istream& in, const std::string& source) {
    KeyTable table(source);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line(raw);
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) table.fail(line_no, "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view text = trim(line.substr(eq + 1));
        if (key.empty()) table.fail(line_no, "missing key");
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
            table.fail(line_no, "cannot parse value for '" + key + "'");
        table.insert(key, value, line_no);
    }

    const bool has_gamma = table.contains("gamma_hz") || table.contains("gamma_rads");
    if (auto v = table.take_frequency("omega_M")) p.omega_M = *v;
    if (auto v = table.take_frequency("gamma")) p.gamma = *v;
    if (auto v = table.take_frequency("kappa")) p.kappa = *v;
    if (auto v = table.take_frequency("omega_c")) p.omega_c = *v;
    if (auto v = table.take_frequency("omega_L")) p.omega_L = *v;
    if (auto v = table.take_frequency("detuning")) p.detuning = *v;
    if (auto v = table.take("mass")) p.mass = *v;
    if (auto v = table.take("cavity_length")) p.cavity_length = *v;
    if (auto v = table.take("temperature")) p.temperature = *v;
    if (auto v = table.take("squeezing_r")) p.squeezing_r = *v;

    if (table.contains("gamma_over_kappa")) {
        if (has_gamma)
            table.fail(table.line_of("gamma_over_kappa"), "gamma given twice (gamma_over_kappa)");
        p.gamma = *table.take("gamma_over_kappa") * p.kappa;
    }

    const bool has_lambda = table.contains("hopping_lambda_hz") || table.contains("hopping_lambda_rads");
    if (table.contains("xi")) {
        if (has_lambda) table.fail(table.line_of("xi"), "hopping given twice (xi and hopping_lambda)");
        p.hopping_lambda = *table.take("xi") * p.kappa;
    } else if (auto v = table.take_frequency("hopping_lambda")) {
        p.hopping_lambda = *v;
    }

    if (table.contains("pump_power") && table.contains("cooperativity"))
        table.fail(table.line_of("cooperativity"), "drive given twice: supply exactly one of pump_power, cooperativity");
    if (auto v = table.take("pump_power")) p.drive = PumpPower{*v};
    if (auto v = table.take("cooperativity")) p.drive = Cooperativity{*v};

    table.reject_leftovers();
    return p;
}

PhysicalParams load_config(const std::filesystem::path& path, const PhysicalParams& base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    return apply_config(base, in, path.string());
}

}  // namespace optomech
