#include "billiards/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace billiards {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, sep)) out.push_back(item);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

double parse_number(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        throw ConfigError(what + ": expected a number, got '" + text + "'");
    return value;
}

std::string fixed(double v, int digits) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::uint64_t fnv1a(const std::string& text, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t value) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << value;
    return os.str();
}

Config Config::parse(const std::string& text) {
    Config cfg;
    std::string section;
    std::istringstream is(text);
    std::string line;
    int number = 0;
    while (std::getline(is, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3)
                throw ConfigError("config line " + std::to_string(number) + ": bad section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(number) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError("config line " + std::to_string(number) + ": empty key");
        cfg.set(section.empty() ? key : section + "." + key, trim(line.substr(eq + 1)));
    }
    return cfg;
}

Config Config::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return parse(os.str());
}

void Config::set(const std::string& key, const std::string& value) { values_[key] = value; }

bool Config::has(const std::string& key) const { return values_.count(key) > 0; }

std::string Config::get(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : parse_number(it->second, key);
}

long Config::get_int(const std::string& key, long fallback) const {
    const double v = get_double(key, static_cast<double>(fallback));
    if (v != std::floor(v)) throw ConfigError(key + ": expected an integer");
    return static_cast<long>(v);
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    const std::string& v = it->second;
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError(key + ": expected a boolean, got '" + v + "'");
}

std::string Config::serialize() const {
    std::ostringstream os;
    std::string current;
    bool first = true;
    for (const auto& [key, value] : values_) {
        const auto dot = key.find('.');
        const std::string section = dot == std::string::npos ? "" : key.substr(0, dot);
        const std::string name = dot == std::string::npos ? key : key.substr(dot + 1);
        if (first || section != current) {
            if (!section.empty()) os << "[" << section << "]\n";
            current = section;
            first = false;
        }
        os << name << " = " << value << "\n";
    }
    return os.str();
}

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

std::string provenance_header(const std::string& command, const Config& config, std::uint64_t seed,
                              const std::string& input_hash) {
    std::ostringstream os;
    os << "# billiards " << tool_version << "\n";
    os << "# command: " << command << "\n";
    os << "# seed: " << seed << "\n";
    os << "# input_hash: " << input_hash << "\n";
    os << "# config:\n";
    std::istringstream lines(config.serialize());
    std::string line;
    while (std::getline(lines, line)) os << "#   " << line << "\n";
    return os.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const auto tmp = path.string() + ".tmp" + hex64(fnv1a(content)).substr(0, 8);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string csv_text(const std::string& header, const CsvTable& table) {
    std::ostringstream os;
    os << header;
    for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
    os << "\n";
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size()) throw ContractViolation("csv row width mismatch");
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_double(row[i]);
        os << "\n";
    }
    return os.str();
}

CsvTable parse_csv(const std::string& text) {
    CsvTable table;
    std::istringstream is(text);
    std::string line;
    bool have_columns = false;
    while (std::getline(is, line)) {
        if (line.empty() || line.front() == '#') continue;
        const auto cells = split(line, ',');
        if (!have_columns) {
            table.columns = cells;
            have_columns = true;
            continue;
        }
        if (cells.size() != table.columns.size()) throw ConfigError("csv row width mismatch");
        std::vector<double> row;
        for (const auto& c : cells) {
            const std::string t = trim(c);
            if (t == "nan") row.push_back(std::nan(""));
            else if (t == "inf") row.push_back(HUGE_VAL);
            else if (t == "-inf") row.push_back(-HUGE_VAL);
            else row.push_back(parse_number(t, "csv cell"));
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::string svg_plot(const PlotSpec& spec, const std::vector<PlotSeries>& series) {
    constexpr double width = 720, height = 440, left = 80, right = 160, top = 40, bottom = 60;
    static const char* palette[] = {"#000000", "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e"};
    auto tx = [&](double v) { return spec.log_x ? std::log10(v) : v; };
    auto ty = [&](double v) { return spec.log_y ? std::log10(v) : v; };
    auto usable = [&](double x, double y) {
        return std::isfinite(x) && std::isfinite(y) && (!spec.log_x || x > 0) && (!spec.log_y || y > 0);
    };
    double x0 = HUGE_VAL, x1 = -HUGE_VAL, y0 = HUGE_VAL, y1 = -HUGE_VAL;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!usable(s.x[i], s.y[i])) continue;
            x0 = std::min(x0, tx(s.x[i]));
            x1 = std::max(x1, tx(s.x[i]));
            y0 = std::min(y0, ty(s.y[i]));
            y1 = std::max(y1, ty(s.y[i]));
        }
    if (!(x1 > x0)) { x0 = std::isfinite(x0) ? x0 - 1 : 0; x1 = x0 + 2; }
    if (!(y1 > y0)) { y0 = std::isfinite(y0) ? y0 - 1 : 0; y1 = y0 + 2; }
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;
    const double pw = width - left - right, ph = height - top - bottom;
    auto px = [&](double v) { return left + (tx(v) - x0) / (x1 - x0) * pw; };
    auto py = [&](double v) { return top + ph - (ty(v) - y0) / (y1 - y0) * ph; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
       << escape_xml(spec.title) << "</text>\n";
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double fx = x0 + (x1 - x0) * t / 4.0, fy = y0 + (y1 - y0) * t / 4.0;
        const double sx = left + pw * t / 4.0, sy = top + ph - ph * t / 4.0;
        const double lx = spec.log_x ? std::pow(10.0, fx) : fx;
        const double ly = spec.log_y ? std::pow(10.0, fy) : fy;
        os << "<text x=\"" << fixed(sx, 1) << "\" y=\"" << top + ph + 18
           << "\" text-anchor=\"middle\">" << format_double(std::stod(fixed(lx, 3))) << "</text>\n";
        os << "<text x=\"" << left - 6 << "\" y=\"" << fixed(sy + 4, 1) << "\" text-anchor=\"end\">"
           << format_double(std::stod(fixed(ly, 3))) << "</text>\n";
    }
    os << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 18 << "\" text-anchor=\"middle\">"
       << escape_xml(spec.x_label) << (spec.log_x ? " (log)" : "") << "</text>\n";
    os << "<text x=\"18\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
       << top + ph / 2 << ")\">" << escape_xml(spec.y_label) << (spec.log_y ? " (log)" : "")
       << "</text>\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = palette[k % 6];
        if (s.style == "points") {
            for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i)
                if (usable(s.x[i], s.y[i]))
                    os << "<rect x=\"" << fixed(px(s.x[i]) - 3, 2) << "\" y=\"" << fixed(py(s.y[i]) - 3, 2)
                       << "\" width=\"6\" height=\"6\" fill=\"" << color << "\"/>\n";
        } else {
            os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" points=\"";
            bool first = true;
            for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
                if (!usable(s.x[i], s.y[i])) continue;
                os << (first ? "" : " ") << fixed(px(s.x[i]), 2) << "," << fixed(py(s.y[i]), 2);
                first = false;
            }
            os << "\"/>\n";
        }
        const double ly = top + 14 + 18.0 * k;
        os << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << ly - 4 << "\" x2=\"" << left + pw + 32
           << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << left + pw + 38 << "\" y=\"" << ly << "\">" << escape_xml(s.name)
           << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string CacheKey::canonical() const {
    return "shape=" + shape + ";symmetry=" + symmetry + ";solver=" + solver +
           ";tolerance=" + format_double(tolerance) + ";eps_max=" + format_double(eps_max) +
           ";count=" + std::to_string(count);
}

std::string CacheKey::hash() const { return hex64(fnv1a(canonical())); }

SpectrumCache::SpectrumCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::filesystem::path SpectrumCache::resolve_dir(const std::string& flag,
                                                 const std::filesystem::path& fallback) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("BILLIARDS_CACHE_DIR"); env && *env) return env;
    return fallback;
}

std::filesystem::path SpectrumCache::path_for(const CacheKey& key) const {
    return dir_ / ("spectrum-" + key.hash() + ".txt");
}

void SpectrumCache::store(const CacheKey& key, const Spectrum& spectrum) const {
    std::ostringstream body;
    body << "key " << key.canonical() << "\n";
    body << "shape " << (spectrum.shape.kind() == ShapeKind::ellipse ? "ellipse" : "rectangle") << " "
         << format_double(spectrum.shape.a()) << " " << format_double(spectrum.shape.b()) << "\n";
    body << "symmetry " << spectrum.symmetry_name() << "\n";
    body << "meta " << (spectrum.meta.solver.empty() ? "-" : spectrum.meta.solver) << " "
         << spectrum.meta.basis_size << " " << format_double(spectrum.meta.k_cut) << " "
         << format_double(spectrum.meta.tolerance) << " "
         << format_double(spectrum.meta.max_relative_change) << " " << spectrum.meta.removed << "\n";
    body << "count " << spectrum.eigenvalues.size() << "\n";
    for (std::size_t i = 0; i < spectrum.eigenvalues.size(); ++i)
        body << format_double(spectrum.eigenvalues[i]) << " " << (spectrum.converged[i] ? 1 : 0) << "\n";
    const std::string text = body.str();
    write_file_atomic(path_for(key), text + "checksum " + hex64(fnv1a(text)) + "\n");
}

std::optional<Spectrum> SpectrumCache::load(const CacheKey& key, std::vector<std::string>* warnings) const {
    const auto path = path_for(key);
    if (!std::filesystem::exists(path)) return std::nullopt;
    auto corrupt = [&](const std::string& why) -> std::optional<Spectrum> {
        if (warnings) warnings->push_back("cache entry " + path.string() + " is corrupt (" + why + "); rebuilding");
        return std::nullopt;
    };
    std::string text;
    try {
        text = read_file(path);
    } catch (const std::exception& e) {
        return corrupt(e.what());
    }
    const auto mark = text.rfind("checksum ");
    if (mark == std::string::npos) return corrupt("missing checksum");
    const std::string body = text.substr(0, mark);
    if (trim(text.substr(mark + 9)) != hex64(fnv1a(body))) return corrupt("checksum mismatch");

    std::istringstream is(body);
    std::string tag, line;
    Spectrum s;
    try {
        std::getline(is, line);
        if (line != "key " + key.canonical()) return corrupt("key mismatch");
        std::string kind, a, b;
        is >> tag >> kind >> a >> b;
        if (tag != "shape") return corrupt("shape line");
        s.shape = kind == "ellipse" ? BilliardShape::ellipse(std::stod(a), std::stod(b))
                                    : BilliardShape::rectangle(std::stod(a), std::stod(b));
        std::string sym;
        is >> tag >> sym;
        if (tag != "symmetry") return corrupt("symmetry line");
        if (sym != "merged") s.symmetry = SymmetryClass::parse(sym);
        std::string solver, kcut, tol, change;
        is >> tag >> solver >> s.meta.basis_size >> kcut >> tol >> change >> s.meta.removed;
        if (tag != "meta") return corrupt("meta line");
        s.meta.solver = solver == "-" ? "" : solver;
        s.meta.k_cut = std::stod(kcut);
        s.meta.tolerance = std::stod(tol);
        s.meta.max_relative_change = std::stod(change);
        std::size_t count = 0;
        is >> tag >> count;
        if (tag != "count") return corrupt("count line");
        s.eigenvalues.resize(count);
        s.converged.resize(count);
        for (std::size_t i = 0; i < count; ++i) {
            std::string value;
            int flag = 0;
            if (!(is >> value >> flag)) return corrupt("truncated levels");
            s.eigenvalues[i] = std::stod(value);
            s.converged[i] = flag == 1;
        }
    } catch (const std::exception& e) {
        return corrupt(e.what());
    }
    s.converged_count = 0;
    while (s.converged_count < s.converged.size() && s.converged[s.converged_count]) ++s.converged_count;
    return s;
}

}  // namespace billiards
