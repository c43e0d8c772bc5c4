#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "billiards/spectrum.hpp"

namespace billiards {

inline constexpr const char* tool_version = "0.1.0";

/// Raised for malformed configuration text or flags.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::uint64_t fnv1a(const std::string& text, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t value);

/// Flat `key = value` text with `[section]` headers. Keys are stored as "section.key".
class Config {
public:
    static Config parse(const std::string& text);
    static Config load(const std::filesystem::path& path);

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;
    std::string get(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    long get_int(const std::string& key, long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    /// Canonical text: sections in key order, one `key = value` per line.
    std::string serialize() const;
    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

/// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

/// Comment header carried by every output: tool version, command, seed, input hash, config.
std::string provenance_header(const std::string& command, const Config& config, std::uint64_t seed,
                              const std::string& input_hash);

/// Writes to a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

/// Header lines, the column row, then rows at full precision.
std::string csv_text(const std::string& header, const CsvTable& table);
CsvTable parse_csv(const std::string& text);

struct PlotSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    /// "line" or "points".
    std::string style = "line";
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
};

/// Polyline rendering of the series; output depends only on the inputs.
std::string svg_plot(const PlotSpec& spec, const std::vector<PlotSeries>& series);

/// Identity of a cached spectrum: shape, class, solver settings and energy cutoff.
struct CacheKey {
    std::string shape;
    std::string symmetry;
    std::string solver;
    double tolerance = 0.0;
    double eps_max = 0.0;
    /// Level-count target; 0 for energy-cutoff spectra.
    std::size_t count = 0;

    std::string canonical() const;
    std::string hash() const;
};

/// Directory of spectra keyed by CacheKey. A corrupt entry is reported and treated as a miss.
class SpectrumCache {
public:
    explicit SpectrumCache(std::filesystem::path dir);

    /// `flag` if non-empty, else $BILLIARDS_CACHE_DIR, else `fallback`.
    static std::filesystem::path resolve_dir(const std::string& flag,
                                             const std::filesystem::path& fallback);

    std::optional<Spectrum> load(const CacheKey& key, std::vector<std::string>* warnings = nullptr) const;
    void store(const CacheKey& key, const Spectrum& spectrum) const;
    std::filesystem::path path_for(const CacheKey& key) const;
    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path dir_;
};

}  // namespace billiards
