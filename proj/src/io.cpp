#include "treeca/io.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "treeca/errors.hpp"

namespace treeca::io {

namespace {

template <typename T>
T required(const nlohmann::json& doc, const char* field) {
    if (!doc.is_object() || !doc.contains(field)) throw ParseError(std::string("missing field '") + field + "'");
    try {
        return doc.at(field).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("field '") + field + "': " + e.what());
    }
}

std::string_view trim(std::string_view s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string_view::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

// Splits `line` into exactly two whitespace-separated tokens.
std::pair<std::string_view, std::string_view> two_tokens(std::string_view line, std::size_t line_no) {
    const auto gap = line.find_first_of(" \t");
    if (gap == std::string_view::npos) {
        throw ParseError("line " + std::to_string(line_no) + ": expected two fields");
    }
    const auto first = line.substr(0, gap);
    const auto second = trim(line.substr(gap));
    if (second.empty() || second.find_first_of(" \t") != std::string_view::npos) {
        throw ParseError("line " + std::to_string(line_no) + ": expected two fields");
    }
    return {first, second};
}

template <typename T>
T parse_number(std::string_view text, std::size_t line_no) {
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ParseError("line " + std::to_string(line_no) + ": bad number '" + std::string(text) + "'");
    }
    return value;
}

// Calls fn(line_no, content) for every non-blank, non-comment line.
template <typename F>
void for_each_line(std::string_view text, F&& fn) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto end = text.find('\n', pos);
        std::string_view line = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (!line.empty()) fn(line_no, line);
        if (end == std::string_view::npos) break;
        pos = end + 1;
    }
}

}  // namespace

nlohmann::json rule_to_json(const Rule& rule) {
    nlohmann::json table = nlohmann::json::array();
    for (std::uint64_t i = 0; i < rule.space().size(); ++i) {
        table.push_back({{"ball", rule.space().to_string(i)}, {"out", rule.output(i)}});
    }
    return {{"k", rule.params().k},
            {"alphabet_size", rule.alphabet().size},
            {"radius", rule.radius()},
            {"table", std::move(table)}};
}

Rule rule_from_json(const nlohmann::json& doc, const Limits& limits) {
    const TreeParams params{required<int>(doc, "k")};
    const Alphabet alphabet{required<int>(doc, "alphabet_size")};
    const int radius = required<int>(doc, "radius");
    const BallSpace space(params, alphabet, radius, limits);
    const auto& table = doc.at("table");
    if (!table.is_array()) throw ParseError("'table' must be an array");
    std::vector<Symbol> outputs(static_cast<std::size_t>(space.size()), 0);
    std::vector<bool> filled(outputs.size(), false);
    for (const auto& entry : table) {
        const auto text = required<std::string>(entry, "ball");
        const auto out = required<long long>(entry, "out");
        const std::uint64_t index = space.parse(text);
        if (filled[static_cast<std::size_t>(index)]) throw ParseError("duplicate table entry for ball '" + text + "'");
        if (out < 0 || !alphabet.contains(static_cast<Symbol>(out))) {
            throw ParseError("output " + std::to_string(out) + " for ball '" + text + "' outside the alphabet");
        }
        filled[static_cast<std::size_t>(index)] = true;
        outputs[static_cast<std::size_t>(index)] = static_cast<Symbol>(out);
    }
    for (std::size_t i = 0; i < filled.size(); ++i) {
        if (!filled[i]) throw ParseError("missing table entry for ball '" + space.to_string(i) + "'");
    }
    return Rule(params, alphabet, radius, std::move(outputs), limits);
}

std::string format_config(const FiniteConfig& x) {
    std::string out;
    for (const auto& [v, s] : x.cells()) out += v.text() + " " + std::to_string(s) + "\n";
    return out;
}

FiniteConfig parse_config(std::string_view text, const TreeParams& params, const Alphabet& alphabet) {
    FiniteConfig x(params, alphabet);
    VertexSet seen;
    for_each_line(text, [&](std::size_t line_no, std::string_view line) {
        const auto [word, symbol] = two_tokens(line, line_no);
        Vertex v;
        try {
            v = Vertex::parse(word);
            check_address(params, v);
        } catch (const AddressError& e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
        if (!seen.insert(v).second) throw ParseError("line " + std::to_string(line_no) + ": vertex listed twice");
        const auto s = parse_number<Symbol>(symbol, line_no);
        if (!alphabet.contains(s)) throw ParseError("line " + std::to_string(line_no) + ": symbol outside the alphabet");
        x.set(v, s);
    });
    return x;
}

std::string format_trajectory(const Trajectory& traj) {
    std::string out;
    for (std::size_t n = 0; n < traj.states.size(); ++n) {
        out += "## step " + std::to_string(n) + "\n";
        out += format_config(traj.states[n]);
    }
    return out;
}

nlohmann::json trajectory_to_json(const Trajectory& traj) {
    nlohmann::json steps = nlohmann::json::array();
    for (std::size_t n = 0; n < traj.states.size(); ++n) {
        nlohmann::json cells = nlohmann::json::object();
        for (const auto& [v, s] : traj.states[n].cells()) cells[v.text()] = s;
        nlohmann::json radius = traj.support_radius[n] ? nlohmann::json(*traj.support_radius[n]) : nlohmann::json();
        steps.push_back({{"step", n}, {"cells", std::move(cells)}, {"support_radius", std::move(radius)}});
    }
    return {{"steps", std::move(steps)}};
}

nlohmann::json oned_rule_to_json(const OneDimRule& rule) {
    nlohmann::json table = nlohmann::json::array();
    for (std::uint64_t i = 0; i < rule.table().size(); ++i) {
        std::string window;
        for (Symbol s : rule.window_at(i)) window += std::to_string(s);
        table.push_back({{"window", window}, {"out", rule.table()[static_cast<std::size_t>(i)]}});
    }
    return {{"alphabet_size", rule.alphabet().size}, {"radius", rule.radius()}, {"table", std::move(table)}};
}

OneDimRule oned_rule_from_json(const nlohmann::json& doc) {
    const Alphabet alphabet{required<int>(doc, "alphabet_size")};
    alphabet.validate();
    if (alphabet.size > 10) throw ParseError("1D rule files use one digit per cell; alphabet must be at most 10");
    const int radius = required<int>(doc, "radius");
    if (radius < 0) throw ParseError("negative radius");
    std::uint64_t windows = 1;
    for (int i = 0; i < 2 * radius + 1; ++i) {
        windows *= static_cast<std::uint64_t>(alphabet.size);
        if (windows > (std::uint64_t{1} << 32)) throw CapacityError("1D window space too large");
    }
    std::vector<Symbol> table(static_cast<std::size_t>(windows), 0);
    std::vector<bool> filled(table.size(), false);
    const OneDimRule probe(alphabet, radius, table);
    for (const auto& entry : doc.at("table")) {
        const auto window = required<std::string>(entry, "window");
        const auto out = required<long long>(entry, "out");
        if (window.size() != static_cast<std::size_t>(2 * radius + 1)) throw ParseError("window '" + window + "' has the wrong length");
        std::vector<Symbol> cells;
        for (char c : window) {
            if (c < '0' || c > '9' || !alphabet.contains(static_cast<Symbol>(c - '0'))) {
                throw ParseError("window '" + window + "' has a symbol outside the alphabet");
            }
            cells.push_back(static_cast<Symbol>(c - '0'));
        }
        if (out < 0 || !alphabet.contains(static_cast<Symbol>(out))) throw ParseError("output outside the alphabet");
        const auto index = static_cast<std::size_t>(probe.window_index(cells));
        if (filled[index]) throw ParseError("duplicate table entry for window '" + window + "'");
        filled[index] = true;
        table[index] = static_cast<Symbol>(out);
    }
    for (std::size_t i = 0; i < filled.size(); ++i) {
        if (!filled[i]) throw ParseError("missing table entry for window " + std::to_string(i));
    }
    return OneDimRule(alphabet, radius, std::move(table));
}

std::string format_oned_config(const OneDimConfig& x) {
    std::string out;
    for (const auto& [i, s] : x.cells()) out += std::to_string(i) + " " + std::to_string(s) + "\n";
    return out;
}

OneDimConfig parse_oned_config(std::string_view text, const Alphabet& alphabet) {
    OneDimConfig x(alphabet);
    std::set<std::int64_t> seen;
    for_each_line(text, [&](std::size_t line_no, std::string_view line) {
        const auto [level, symbol] = two_tokens(line, line_no);
        const auto i = parse_number<std::int64_t>(level, line_no);
        if (!seen.insert(i).second) throw ParseError("line " + std::to_string(line_no) + ": level listed twice");
        const auto s = parse_number<Symbol>(symbol, line_no);
        if (!alphabet.contains(s)) throw ParseError("line " + std::to_string(line_no) + ": symbol outside the alphabet");
        x.set(i, s);
    });
    return x;
}

nlohmann::json automorphism_to_json(const AutomorphismDescription& g) {
    nlohmann::json perms = nlohmann::json::object();
    for (const auto& [u, perm] : g.permutations) perms[u.text()] = perm;
    return {{"anchor_image", g.anchor_image.text()}, {"depth", g.depth}, {"permutations", std::move(perms)}};
}

AutomorphismDescription automorphism_from_json(const nlohmann::json& doc) {
    AutomorphismDescription g;
    g.anchor_image = Vertex::parse(required<std::string>(doc, "anchor_image"));
    g.depth = required<int>(doc, "depth");
    if (doc.contains("permutations")) {
        for (const auto& [key, perm] : doc.at("permutations").items()) {
            g.permutations.emplace(Vertex::parse(key), perm.get<std::vector<int>>());
        }
    }
    return g;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write '" + path.string() + "'");
    out << text;
}

nlohmann::json read_json(const std::filesystem::path& path) {
    try {
        return nlohmann::json::parse(read_text(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("'" + path.string() + "': " + e.what());
    }
}

}  // namespace treeca::io
