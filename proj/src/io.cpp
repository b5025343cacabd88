#include "hicluster/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "hicluster/errors.hpp"

namespace hicluster {

namespace {

/// Whitespace-separated tokens with byte offsets.
class Scanner {
  public:
    explicit Scanner(std::string_view text) : text_(text) {}

    bool at_end() {
        skip();
        return pos_ >= text_.size();
    }
    std::size_t offset() const { return pos_; }

    std::string_view word(const char* what) {
        skip();
        if (pos_ >= text_.size()) throw ParseError(std::string("expected ") + what + ", found end of input", pos_);
        const std::size_t start = pos_;
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        last_ = start;
        return text_.substr(start, pos_ - start);
    }

    /// Rest of the current line (after skipping leading blanks and newlines).
    std::string_view rest() {
        skip();
        last_ = pos_;
        std::string_view r = text_.substr(pos_);
        pos_ = text_.size();
        return r;
    }

    template <typename T>
    T integer(const char* what) {
        const std::string_view w = word(what);
        T value{};
        auto res = std::from_chars(w.data(), w.data() + w.size(), value);
        if (res.ec != std::errc() || res.ptr != w.data() + w.size()) {
            throw ParseError(std::string("expected ") + what + ", got '" + std::string(w) + "'", last_);
        }
        return value;
    }

    double real(const char* what) {
        const std::string_view w = word(what);
        double value = 0.0;
        auto res = std::from_chars(w.data(), w.data() + w.size(), value);
        if (res.ec != std::errc() || res.ptr != w.data() + w.size() || !std::isfinite(value)) {
            throw ParseError(std::string("expected ") + what + ", got '" + std::string(w) + "'", last_);
        }
        return value;
    }

    void keyword(std::string_view expected) {
        const std::string_view w = word("header");
        if (w != expected) {
            throw ParseError("expected '" + std::string(expected) + "', got '" + std::string(w) + "'", last_);
        }
    }

    Mode mode() {
        const std::string_view w = word("mode");
        if (w == "sim") return Mode::similarity;
        if (w == "dis") return Mode::dissimilarity;
        throw ParseError("mode must be 'sim' or 'dis', got '" + std::string(w) + "'", last_);
    }

    [[noreturn]] void fail_last(const std::string& what) const { throw ParseError(what, last_); }

  private:
    void skip() {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t last_ = 0;
};

void version(Scanner& s) {
    if (s.integer<int>("format version") != 1) s.fail_last("unsupported format version");
}

}  // namespace

std::string format_graph(const WeightedGraph& g) {
    const int n = static_cast<int>(g.size());
    std::string body;
    std::size_t m = 0;
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            const double w = g.weight(u, v);
            if (w == 0.0) continue;
            ++m;
            body += std::to_string(u);
            body += ' ';
            body += std::to_string(v);
            body += ' ';
            body += format_real(w);
            body += '\n';
        }
    }
    return "hicluster-graph 1 " + std::to_string(n) + " " + std::to_string(m) + " " +
           std::string(to_string(g.mode())) + "\n" + body;
}

WeightedGraph parse_graph(std::string_view text) {
    Scanner s(text);
    s.keyword("hicluster-graph");
    version(s);
    const auto n = s.integer<std::size_t>("vertex count");
    if (n > 1u << 16) s.fail_last("vertex count too large");
    const auto m = s.integer<std::size_t>("edge count");
    if (m > n * (n - (n ? 1 : 0)) / 2) s.fail_last("more edges than vertex pairs");
    WeightedGraph g(n, s.mode());
    std::vector<char> seen(n * n, 0);
    for (std::size_t e = 0; e < m; ++e) {
        const auto u = s.integer<int>("edge endpoint");
        const auto v = s.integer<int>("edge endpoint");
        if (u < 0 || v < 0 || static_cast<std::size_t>(v) >= n || u >= v) {
            s.fail_last("edge endpoints must satisfy 0 <= u < v < n");
        }
        const double w = s.real("edge weight");
        if (w < 0) s.fail_last("edge weight must be nonnegative");
        char& flag = seen[static_cast<std::size_t>(u) * n + static_cast<std::size_t>(v)];
        if (flag) s.fail_last("duplicate edge " + std::to_string(u) + " " + std::to_string(v));
        flag = 1;
        g.set_weight(u, v, w);
    }
    if (!s.at_end()) throw ParseError("unexpected content after the last edge", s.offset());
    return g;
}

std::string format_gentree(const GeneratingTree& gt) {
    gt.validate();
    return "hicluster-gentree 1 " + std::string(to_string(gt.mode)) + "\n" +
           serialize_tree(gt.tree, gt.node_weight) + "\n";
}

GeneratingTree parse_gentree(std::string_view text) {
    Scanner s(text);
    s.keyword("hicluster-gentree");
    version(s);
    const Mode mode = s.mode();
    const std::size_t start = s.offset();
    const std::string_view body = s.rest();
    ParsedTree parsed;
    try {
        parsed = parse_tree(body);
    } catch (const ParseError& e) {
        throw ParseError(std::string("in tree: ") + e.what(), start + e.offset());
    }
    GeneratingTree gt;
    gt.mode = mode;
    gt.tree = std::move(parsed.tree);
    gt.node_weight.assign(gt.tree.node_count(), 0.0);
    for (NodeId id : gt.tree.internal_nodes()) {
        if (!parsed.weights[id]) throw ParseError("internal node without ':W' weight", start);
        gt.node_weight[id] = *parsed.weights[id];
    }
    if (!gt.tree.spans_vertices(gt.tree.leaf_count())) {
        throw ParseError("tree leaves must be exactly 0..n-1", start);
    }
    try {
        gt.validate();
    } catch (const InvalidArgument& e) {
        throw ParseError(e.what(), start);
    }
    return gt;
}

std::string format_cost_function(const CostFunction& cf) {
    std::string out = "hicluster-g 1 " + std::to_string(cf.n_max()) + "\n";
    for (std::size_t i = 1; i < cf.n_max(); ++i) {
        out += format_real(cf.g(i, 1));
        out += '\n';
    }
    return out;
}

CostFunction parse_cost_function(std::string_view text) {
    Scanner s(text);
    s.keyword("hicluster-g");
    version(s);
    const auto n_max = s.integer<std::size_t>("n_max");
    if (n_max < 2) s.fail_last("n_max must be at least 2");
    if (n_max > 1u << 16) s.fail_last("n_max too large");
    std::vector<double> base;
    base.reserve(n_max);
    while (!s.at_end()) {
        const double b = s.real("base value");
        if (!(b > 0)) s.fail_last("base values must be positive");
        base.push_back(b);
    }
    if (base.size() + 1 < n_max) {
        throw ParseError("need " + std::to_string(n_max - 1) + " base values, got " + std::to_string(base.size()),
                         s.offset());
    }
    return CostFunction::from_base_sequence(std::move(base), n_max, "file");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write '" + path + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw InvalidArgument("write to '" + path + "' failed");
}

std::uint64_t content_hash(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string content_hash_hex(std::string_view bytes) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(content_hash(bytes)));
    return buf;
}

}  // namespace hicluster
