#include "dualcx/snc_config.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace dualcx {

namespace {

struct Token {
    std::string text;
    int col = 0;
};

std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        if (line[i] == '#') break;
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        if (line[i] == '[' || line[i] == ']' || line[i] == ';') {
            tokens.push_back({std::string(1, line[i]), static_cast<int>(i) + 1});
            ++i;
            continue;
        }
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
               line[i] != '[' && line[i] != ']' && line[i] != ';' && line[i] != '#')
            ++i;
        tokens.push_back({std::string(line.substr(start, i - start)),
                          static_cast<int>(start) + 1});
    }
    return tokens;
}

class TokenCursor {
public:
    TokenCursor(int line, std::vector<Token> tokens)
        : line_(line), tokens_(std::move(tokens)) {}

    bool done() const { return pos_ >= tokens_.size(); }
    int line() const { return line_; }
    int col() const {
        if (pos_ < tokens_.size()) return tokens_[pos_].col;
        return tokens_.empty() ? 1 : tokens_.back().col + 1;
    }

    const Token& peek() const {
        if (done()) throw ParseError(line_, col(), "unexpected end of line");
        return tokens_[pos_];
    }
    Token next() {
        Token t = peek();
        ++pos_;
        return t;
    }
    void expect(const std::string& text) {
        Token t = next();
        if (t.text != text)
            throw ParseError(line_, t.col, "expected '" + text + "', got '" + t.text + "'");
    }
    int next_int(const std::string& what, long long lo, long long hi) {
        Token t = next();
        long long value = 0;
        try {
            std::size_t used = 0;
            value = std::stoll(t.text, &used);
            if (used != t.text.size()) throw std::invalid_argument(t.text);
        } catch (const std::exception&) {
            throw ParseError(line_, t.col, "expected integer for " + what + ", got '" +
                                               t.text + "'");
        }
        if (value < lo || value > hi)
            throw ParseError(line_, t.col,
                             what + " " + std::to_string(value) + " out of range [" +
                                 std::to_string(lo) + ", " + std::to_string(hi) + "]");
        return static_cast<int>(value);
    }
    void end_of_line() {
        if (!done())
            throw ParseError(line_, peek().col, "trailing input '" + peek().text + "'");
    }

private:
    int line_;
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

constexpr long long kMaxInt = 1000000;

}  // namespace

SncConfig parse_config(std::string_view text) {
    SncConfig config;
    std::vector<TokenCursor> lines;
    {
        int line_no = 0;
        std::size_t start = 0;
        while (start <= text.size()) {
            std::size_t end = text.find('\n', start);
            std::string_view line = text.substr(
                start, end == std::string_view::npos ? std::string_view::npos
                                                     : end - start);
            ++line_no;
            auto tokens = tokenize(line);
            if (!tokens.empty()) lines.emplace_back(line_no, std::move(tokens));
            if (end == std::string_view::npos) break;
            start = end + 1;
        }
    }

    if (lines.empty()) throw ParseError(1, 1, "empty input, expected 'snc <name>'");
    std::size_t at = 0;

    TokenCursor& header = lines[at++];
    header.expect("snc");
    config.name = header.next().text;
    header.end_of_line();

    if (at >= lines.size()) throw ParseError(header.line() + 1, 1, "expected 'dim <n>'");
    TokenCursor& dim_line = lines[at++];
    dim_line.expect("dim");
    config.ambient_dim = dim_line.next_int("dim", 0, kMaxInt);
    dim_line.end_of_line();

    if (at >= lines.size())
        throw ParseError(dim_line.line() + 1, 1, "expected 'divisors <N>'");
    TokenCursor& div_line = lines[at++];
    div_line.expect("divisors");
    config.num_divisors = div_line.next_int("divisors", 0, kMaxInt);
    div_line.end_of_line();

    std::map<std::pair<std::vector<int>, int>, int> seen;  // -> line number
    std::vector<int> stratum_lines;
    for (; at < lines.size(); ++at) {
        TokenCursor& cur = lines[at];
        cur.expect("cell");
        int k = cur.next_int("cell dimension", 0, kMaxInt);
        Stratum stratum;
        int labels_col = cur.col();
        cur.expect("[");
        while (!cur.done() && cur.peek().text != "]")
            stratum.labels.push_back(cur.next_int("label", 1, config.num_divisors));
        cur.expect("]");
        if (static_cast<int>(stratum.labels.size()) != k + 1)
            throw ParseError(cur.line(), labels_col,
                             "cell " + std::to_string(k) + " needs " +
                                 std::to_string(k + 1) + " labels, got " +
                                 std::to_string(stratum.labels.size()));
        for (std::size_t s = 0; s + 1 < stratum.labels.size(); ++s)
            if (stratum.labels[s] >= stratum.labels[s + 1])
                throw ParseError(cur.line(), labels_col, "labels not strictly increasing");
        stratum.component = cur.next_int("component", 1, kMaxInt);
        if (k > 0) {
            cur.expect(";");
            cur.expect("facets");
            for (int s = 0; s <= k; ++s)
                stratum.facet_components.push_back(
                    cur.next_int("facet component", 1, kMaxInt));
        }
        cur.end_of_line();

        auto key = std::make_pair(stratum.labels, stratum.component);
        auto [it, fresh] = seen.try_emplace(key, cur.line());
        if (!fresh)
            throw ParseError(cur.line(), 1,
                             "duplicate stratum id (also on line " +
                                 std::to_string(it->second) + ")");
        stratum_lines.push_back(cur.line());
        config.strata.push_back(std::move(stratum));
    }

    // Referential integrity, reported against the referencing line.
    std::map<int, int> depth1_per_label;
    for (std::size_t i = 0; i < config.strata.size(); ++i) {
        const Stratum& s = config.strata[i];
        if (s.depth() == 1 && ++depth1_per_label[s.labels[0]] > 1)
            throw ParseError(stratum_lines[i], 1,
                             "divisor " + std::to_string(s.labels[0]) +
                                 " has more than one depth-1 stratum");
    }
    for (std::size_t i = 0; i < config.strata.size(); ++i) {
        const Stratum& s = config.strata[i];
        for (int pos = 0; pos < static_cast<int>(s.facet_components.size()); ++pos) {
            std::vector<int> sub = s.labels;
            sub.erase(sub.begin() + pos);
            if (!seen.count({sub, s.facet_components[pos]}))
                throw ParseError(stratum_lines[i], 1,
                                 "dangling stratum reference: facet " +
                                     std::to_string(pos) + " names component " +
                                     std::to_string(s.facet_components[pos]) +
                                     " of a missing stratum");
        }
    }
    return config;
}

namespace {

std::string stratum_name(const Stratum& s) {
    std::string out = "[";
    for (std::size_t i = 0; i < s.labels.size(); ++i) {
        if (i) out += " ";
        out += std::to_string(s.labels[i]);
    }
    return out + "]^" + std::to_string(s.component);
}

}  // namespace

ValidationReport validate(const SncConfig& config) {
    ValidationReport report;
    auto add = [&report](std::string msg) {
        report.violations.push_back({std::move(msg), {}});
    };

    std::map<std::pair<std::vector<int>, int>, int> index;
    std::map<int, int> depth1_count;
    for (const auto& s : config.strata) {
        if (s.labels.empty()) {
            add("stratum with empty label tuple");
            continue;
        }
        for (std::size_t i = 0; i + 1 < s.labels.size(); ++i)
            if (s.labels[i] >= s.labels[i + 1]) add("labels not strictly increasing");
        for (int lab : s.labels)
            if (lab < 1 || lab > config.num_divisors)
                add("label " + std::to_string(lab) + " out of range in " + stratum_name(s));
        auto key = std::make_pair(s.labels, s.component);
        if (!index.try_emplace(key, 1).second)
            add("duplicate stratum id " + stratum_name(s));
        if (s.depth() == 1) ++depth1_count[s.labels[0]];
        if (static_cast<int>(s.facet_components.size()) !=
            (s.depth() == 1 ? 0 : s.depth()))
            add("stratum " + stratum_name(s) + " has wrong facet count");
    }
    for (const auto& [label, n] : depth1_count)
        if (n > 1)
            add("divisor " + std::to_string(label) + " has " + std::to_string(n) +
                " depth-1 strata, expected exactly one");
    for (const auto& s : config.strata) {
        if (s.depth() <= 1) continue;
        for (int pos = 0; pos < s.depth(); ++pos) {
            std::vector<int> sub = s.labels;
            sub.erase(sub.begin() + pos);
            if (static_cast<int>(s.facet_components.size()) <= pos) break;
            auto key = std::make_pair(sub, s.facet_components[pos]);
            if (index.find(key) == index.end())
                add("dangling stratum reference: " + stratum_name(s) + " facet " +
                    std::to_string(pos) + " names missing " +
                    stratum_name(Stratum{sub, s.facet_components[pos], {}}));
        }
    }
    return report;
}

DeltaComplex build_dual_complex(const SncConfig& config) {
    ValidationReport config_report = validate(config);
    if (!config_report.ok()) throw ValidationError(std::move(config_report));

    DeltaComplex complex;
    complex.num_divisors = config.num_divisors;
    complex.ambient_dim = config.ambient_dim;

    int max_depth = 0;
    for (const auto& s : config.strata) max_depth = std::max(max_depth, s.depth());
    complex.cells.resize(static_cast<std::size_t>(std::max(max_depth, 0)));

    std::map<std::pair<std::vector<int>, int>, CellId> ids;
    for (const auto& s : config.strata) {
        const int d = s.depth() - 1;
        CellId id{d, static_cast<int>(complex.cells[d].size())};
        Cell cell;
        cell.labels = s.labels;
        cell.component = s.component;
        complex.cells[d].push_back(std::move(cell));
        ids[{s.labels, s.component}] = id;
    }
    for (const auto& s : config.strata) {
        if (s.depth() <= 1) continue;
        const CellId id = ids.at({s.labels, s.component});
        Cell& cell = complex.cells[id.dim][id.index];
        for (int pos = 0; pos < s.depth(); ++pos) {
            std::vector<int> sub = s.labels;
            sub.erase(sub.begin() + pos);
            cell.facets.push_back(ids.at({sub, s.facet_components[pos]}));
        }
    }

    ValidationReport report = validate(complex);
    if (!report.ok()) throw ValidationError(std::move(report));
    return complex;
}

std::string serialize_config(const SncConfig& config) {
    std::ostringstream os;
    os << "snc " << config.name << "\n";
    os << "dim " << config.ambient_dim << "\n";
    os << "divisors " << config.num_divisors << "\n";
    for (const auto& s : config.strata) {
        os << "cell " << s.depth() - 1 << " [";
        for (std::size_t i = 0; i < s.labels.size(); ++i) {
            if (i) os << " ";
            os << s.labels[i];
        }
        os << "] " << s.component;
        if (s.depth() > 1) {
            os << " ; facets";
            for (int j : s.facet_components) os << " " << j;
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace dualcx
