#include "hicluster/hsbm.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "hicluster/random.hpp"

namespace hicluster {

void HsbmParams::validate() const {
    if (k < 1) throw HsbmParamError("k", "need at least one class");
    if (n < 1) throw HsbmParamError("n", "need at least one vertex");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw HsbmParamError("alpha", "must lie in (0, 1]");
    if (f.size() != k) throw HsbmParamError("f", "expected " + std::to_string(k) + " values");
    if (p.size() != k) throw HsbmParamError("p", "expected " + std::to_string(k) + " values");
    double total = 0.0;
    for (double fi : f) {
        if (!(fi > 0.0 && fi <= 1.0)) throw HsbmParamError("f", "class probabilities must lie in (0, 1]");
        total += fi;
    }
    if (std::abs(total - 1.0) > 1e-12) throw HsbmParamError("f", "class probabilities must sum to 1");
    for (double pi : p)
        if (!(pi > 0.0 && pi <= 1.0)) throw HsbmParamError("p", "within probabilities must lie in (0, 1]");
    if (top_tree.tree.leaf_count() != k || !top_tree.tree.spans_vertices(k)) {
        throw HsbmParamError("top_tree", "leaves must be exactly 0..k-1");
    }
    if (top_tree.mode != Mode::similarity) throw HsbmParamError("top_tree", "must be a similarity tree");
    try {
        top_tree.validate();
    } catch (const InvalidArgument& e) {
        throw HsbmParamError("top_tree", e.what());
    }
    for (NodeId id : top_tree.tree.internal_nodes()) {
        const double w = top_tree.node_weight[id];
        if (!(w >= 0.0 && w < 1.0)) throw HsbmParamError("top_tree", "weights must lie in [0, 1)");
    }
    for (std::size_t i = 0; i < k && k > 1; ++i) {
        const NodeId parent = top_tree.tree.parent(top_tree.tree.leaf_node(static_cast<int>(i)));
        if (!(p[i] > top_tree.node_weight[parent])) {
            throw HsbmParamError("p", "p[" + std::to_string(i) + "] must exceed the weight of its parent in top_tree");
        }
    }
    if (alpha * *std::max_element(p.begin(), p.end()) > 1.0) throw HsbmParamError("alpha", "alpha * max p exceeds 1");
}

double edge_probability(const HsbmParams& params, int a, int b) {
    if (a == b) return params.alpha * params.p[a];
    return params.alpha * params.top_tree.node_weight[params.top_tree.tree.lca(a, b)];
}

namespace {

std::vector<double> probability_table(const HsbmParams& params) {
    const std::size_t k = params.k;
    std::vector<double> t(k * k);
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b)
            t[a * k + b] = edge_probability(params, static_cast<int>(a), static_cast<int>(b));
    return t;
}

void check_labels(const HsbmParams& params, std::span<const int> labels) {
    if (labels.empty()) throw InvalidArgument("hsbm: no vertices");
    for (int c : labels)
        if (c < 0 || static_cast<std::size_t>(c) >= params.k) throw InvalidArgument("hsbm: label out of range");
}

}  // namespace

HsbmSample sample_with_labels(const HsbmParams& params, std::span<const int> labels, std::uint64_t seed) {
    params.validate();
    check_labels(params, labels);
    const std::size_t n = labels.size();
    const std::vector<double> prob = probability_table(params);
    HsbmSample out;
    out.graph = WeightedGraph(n, Mode::similarity);
    out.labels.assign(labels.begin(), labels.end());
    out.counts.assign(params.k, 0);
    for (int c : labels) ++out.counts[c];
    Rng rng(seed);
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) {
            const double q = prob[static_cast<std::size_t>(labels[u]) * params.k + labels[v]];
            if (rng.bernoulli(q)) out.graph.set_weight(static_cast<int>(u), static_cast<int>(v), 1.0);
        }
    }
    return out;
}

HsbmSample sample(const HsbmParams& params) {
    params.validate();
    Rng rng(derive_seed(params.seed, 0));
    std::vector<int> labels(params.n);
    for (int& c : labels) {
        const double u = rng.uniform();
        double cum = 0.0;
        c = static_cast<int>(params.k - 1);
        for (std::size_t i = 0; i < params.k; ++i) {
            cum += params.f[i];
            if (u < cum) {
                c = static_cast<int>(i);
                break;
            }
        }
    }
    return sample_with_labels(params, labels, derive_seed(params.seed, 1));
}

std::vector<int> expected_labels(const HsbmParams& params) {
    params.validate();
    const std::size_t k = params.k;
    std::vector<std::size_t> size(k);
    std::vector<std::pair<double, std::size_t>> rem(k);
    std::size_t used = 0;
    for (std::size_t i = 0; i < k; ++i) {
        const double exact = static_cast<double>(params.n) * params.f[i];
        size[i] = static_cast<std::size_t>(std::floor(exact));
        used += size[i];
        rem[i] = {exact - std::floor(exact), i};
    }
    std::stable_sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t j = 0; used < params.n; ++j, ++used) ++size[rem[j % k].second];
    std::vector<int> labels;
    labels.reserve(params.n);
    for (std::size_t i = 0; i < k; ++i) labels.insert(labels.end(), size[i], static_cast<int>(i));
    return labels;
}

ExpectedGraph expected_graph(const HsbmParams& params, std::span<const int> labels) {
    params.validate();
    check_labels(params, labels);
    const std::size_t n = labels.size();
    const std::vector<double> prob = probability_table(params);
    ExpectedGraph out;
    out.graph = WeightedGraph(n, Mode::similarity);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v)
            out.graph.set_weight(static_cast<int>(u), static_cast<int>(v),
                                 prob[static_cast<std::size_t>(labels[u]) * params.k + labels[v]]);

    std::vector<VertexSet> members(params.k);
    for (std::size_t v = 0; v < n; ++v) members[labels[v]].push_back(static_cast<int>(v));

    const ClusterTree& top = params.top_tree.tree;
    TreeBuilder b;
    std::vector<double> weight;
    std::vector<NodeId> built(top.node_count(), kNoNode);
    for (NodeId id : top.postorder()) {
        const TreeNode& nd = top.node(id);
        if (nd.is_leaf()) {
            const VertexSet& m = members[nd.label];
            if (m.empty()) continue;
            const ClusterTree sub = balanced_tree(m);
            built[id] = b.graft(sub);
            weight.resize(weight.size() + sub.node_count(), params.alpha * params.p[nd.label]);
            continue;
        }
        const NodeId l = built[nd.left], r = built[nd.right];
        if (l != kNoNode && r != kNoNode) {
            built[id] = b.join(l, r);
            weight.push_back(params.alpha * params.top_tree.node_weight[id]);
        } else {
            built[id] = l != kNoNode ? l : r;
        }
    }
    out.tree.mode = Mode::similarity;
    out.tree.tree = std::move(b).build(built[top.root()]);
    out.tree.node_weight = std::move(weight);
    return out;
}

Projection spectral_project(const WeightedGraph& g, std::size_t k, std::uint64_t seed, std::size_t max_iterations) {
    const std::size_t n = g.size();
    if (k < 1 || k > n) throw InvalidArgument("spectral_project: need 1 <= k <= n");
    const auto ni = static_cast<Eigen::Index>(n), ki = static_cast<Eigen::Index>(k);
    Eigen::MatrixXd a(ni, ni);
    for (Eigen::Index u = 0; u < ni; ++u)
        for (Eigen::Index v = 0; v < ni; ++v) a(u, v) = g.weight(static_cast<int>(u), static_cast<int>(v));

    Rng rng(seed);
    Eigen::MatrixXd q(ni, ki);
    for (Eigen::Index c = 0; c < ki; ++c)
        for (Eigen::Index r = 0; r < ni; ++r) q(r, c) = rng.normal();
    auto orthonormalize = [&](const Eigen::MatrixXd& z) {
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(z);
        return Eigen::MatrixXd(qr.householderQ() * Eigen::MatrixXd::Identity(ni, ki));
    };
    q = orthonormalize(q);

    Projection out;
    Eigen::MatrixXd z = a * q;
    Eigen::MatrixXd h;
    for (out.iterations = 0;; ++out.iterations) {
        h = q.transpose() * z;
        const double scale = z.norm();
        out.residual = scale > 0 ? (z - q * h).norm() / scale : 0.0;
        if (out.residual <= kProjectionTolerance) {
            out.converged = true;
            break;
        }
        if (out.iterations >= max_iterations) break;
        q = orthonormalize(z);
        z = a * q;
    }
    out.basis = q;
    out.points = z;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (h + h.transpose()), Eigen::EigenvaluesOnly);
    out.ritz = es.eigenvalues();
    const double top = out.ritz.cwiseAbs().maxCoeff();
    out.rank = 0;
    for (Eigen::Index i = 0; i < out.ritz.size(); ++i)
        if (top > 0 && std::abs(out.ritz(i)) > 1e-10 * top) ++out.rank;
    out.rank_deficient = out.rank < k;
    return out;
}

std::vector<VertexSet> geometric_single_linkage(const Eigen::MatrixXd& points, std::size_t k, std::uint64_t seed) {
    const auto n = static_cast<std::size_t>(points.rows());
    if (n == 0) throw InvalidArgument("geometric_single_linkage: no points");
    if (k < 1 || k > n) throw InvalidArgument("geometric_single_linkage: need 1 <= k <= n");

    // Prim on the complete Euclidean graph (squared lengths order the same way).
    struct Edge {
        int u, v;
        double len;
    };
    std::vector<Edge> mst;
    mst.reserve(n - 1);
    std::vector<char> done(n, 0);
    std::vector<double> best(n, std::numeric_limits<double>::infinity());
    std::vector<int> from(n, -1);
    std::size_t cur = 0;
    done[0] = 1;
    for (std::size_t step = 1; step < n; ++step) {
        std::size_t next = n;
        for (std::size_t v = 0; v < n; ++v) {
            if (done[v]) continue;
            const double d = (points.row(static_cast<Eigen::Index>(v)) - points.row(static_cast<Eigen::Index>(cur))).squaredNorm();
            if (d < best[v]) {
                best[v] = d;
                from[v] = static_cast<int>(cur);
            }
            if (next == n || best[v] < best[next]) next = v;
        }
        done[next] = 1;
        mst.push_back({from[next], static_cast<int>(next), best[next]});
        cur = next;
    }
    Rng rng(seed);
    rng.shuffle(std::span<Edge>(mst));
    std::stable_sort(mst.begin(), mst.end(), [](const Edge& a, const Edge& b) { return a.len > b.len; });

    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = k - 1; i < mst.size(); ++i) parent[find(mst[i].u)] = find(mst[i].v);

    std::vector<int> slot(n, -1);
    std::vector<VertexSet> clusters;
    for (std::size_t v = 0; v < n; ++v) {
        const int r = find(static_cast<int>(v));
        if (slot[r] < 0) {
            slot[r] = static_cast<int>(clusters.size());
            clusters.emplace_back();
        }
        clusters[slot[r]].push_back(static_cast<int>(v));
    }
    return clusters;
}

ClusterTree merge_clusters(const WeightedGraph& g, const std::vector<VertexSet>& clusters) {
    const std::size_t k = clusters.size();
    if (k == 0) throw InvalidArgument("merge_clusters: no clusters");
    std::vector<double> cross(k * k, 0.0);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            cross[i * k + j] = cross[j * k + i] = cut_weight(g, clusters[i], clusters[j]);
    std::vector<double> size(k);
    TreeBuilder b;
    std::vector<NodeId> node(k);
    std::vector<std::size_t> active(k);
    for (std::size_t i = 0; i < k; ++i) {
        size[i] = static_cast<double>(clusters[i].size());
        node[i] = b.graft(balanced_tree(clusters[i]));
        active[i] = i;
    }
    while (active.size() > 1) {
        std::size_t bi = 0, bj = 1;
        double best = -1.0;
        for (std::size_t x = 0; x < active.size(); ++x)
            for (std::size_t y = x + 1; y < active.size(); ++y) {
                const std::size_t i = active[x], j = active[y];
                const double d = cross[i * k + j] / (size[i] * size[j]);
                if (d > best) {
                    best = d;
                    bi = x;
                    bj = y;
                }
            }
        const std::size_t i = active[bi], j = active[bj];
        for (std::size_t m : active) {
            if (m == i || m == j) continue;
            cross[i * k + m] = cross[m * k + i] = cross[i * k + m] + cross[j * k + m];
        }
        size[i] += size[j];
        node[i] = b.join(node[i], node[j]);
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(bj));
    }
    return std::move(b).build(node[active.front()]).canonical();
}

std::size_t default_repetitions(std::size_t k, std::size_t n) {
    if (n < 2) return 1;
    const double r = std::ceil(2.0 * static_cast<double>(k) * std::log(static_cast<double>(n)));
    return std::max<std::size_t>(1, static_cast<std::size_t>(r));
}

RecoveryResult recover_tree(const WeightedGraph& g, std::size_t k, const CostFunction& cf, std::size_t repetitions,
                            std::uint64_t seed) {
    const std::size_t n = g.size();
    if (k < 1 || k > n) throw InvalidArgument("recover_tree: need 1 <= k <= n");
    if (repetitions == 0) repetitions = default_repetitions(k, n);
    const Projection proj = spectral_project(g, k);
    RecoveryResult out;
    out.projection_rank = proj.rank;
    out.rank_deficient = proj.rank_deficient;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < repetitions; ++r) {
        std::vector<VertexSet> clusters = geometric_single_linkage(proj.points, k, derive_seed(seed, r));
        ClusterTree t = merge_clusters(g, clusters);
        RepetitionStats st;
        st.cost = evaluate(cf, g, t).total;
        for (const VertexSet& c : clusters) st.cluster_sizes.push_back(c.size());
        if (st.cost < best) {
            best = st.cost;
            out.best_repetition = r;
            out.tree = std::move(t);
            out.clusters = std::move(clusters);
        }
        out.repetitions.push_back(std::move(st));
    }
    return out;
}

bool same_partition(const std::vector<VertexSet>& clusters, std::span<const int> labels) {
    std::size_t covered = 0;
    std::vector<int> cluster_of_label;
    for (std::size_t ci = 0; ci < clusters.size(); ++ci) {
        if (clusters[ci].empty()) return false;
        const int lab = labels[clusters[ci].front()];
        for (int v : clusters[ci]) {
            if (v < 0 || static_cast<std::size_t>(v) >= labels.size() || labels[v] != lab) return false;
        }
        if (static_cast<std::size_t>(lab) >= cluster_of_label.size()) cluster_of_label.resize(lab + 1, -1);
        if (cluster_of_label[lab] != -1) return false;
        cluster_of_label[lab] = static_cast<int>(ci);
        covered += clusters[ci].size();
    }
    return covered == labels.size();
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<double> parse_list(std::string_view value, std::size_t offset) {
    std::string buf(value);
    for (char& c : buf)
        if (c == ',' || c == '[' || c == ']') c = ' ';
    std::vector<double> out;
    std::size_t i = 0;
    while (i < buf.size()) {
        while (i < buf.size() && std::isspace(static_cast<unsigned char>(buf[i]))) ++i;
        if (i >= buf.size()) break;
        double x = 0.0;
        auto res = std::from_chars(buf.data() + i, buf.data() + buf.size(), x);
        if (res.ec != std::errc() || !std::isfinite(x)) throw ParseError("expected a number", offset + i);
        i = static_cast<std::size_t>(res.ptr - buf.data());
        if (i < buf.size() && !std::isspace(static_cast<unsigned char>(buf[i]))) {
            throw ParseError("expected a number", offset + i);
        }
        out.push_back(x);
    }
    return out;
}

template <typename T>
T parse_scalar(std::string_view value, std::size_t offset) {
    T x{};
    auto res = std::from_chars(value.data(), value.data() + value.size(), x);
    if (res.ec != std::errc() || res.ptr != value.data() + value.size()) throw ParseError("bad value", offset);
    return x;
}

}  // namespace

HsbmParams parse_hsbm_config(std::string_view text) {
    HsbmParams params;
    bool have_k = false, have_n = false, have_alpha = false, have_f = false, have_p = false, have_top = false;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        const std::size_t line_start = pos;
        pos = eol + 1;
        if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        if (trim(line).empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_start);
        const std::string_view key = trim(line.substr(0, eq));
        std::string_view raw = line.substr(eq + 1);
        const std::size_t lead = std::min(raw.size(), raw.find_first_not_of(" \t"));
        const std::size_t value_offset = line_start + eq + 1 + lead;
        std::string_view value = trim(raw);
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        if (key == "k") {
            params.k = parse_scalar<std::size_t>(value, value_offset);
            have_k = true;
        } else if (key == "n") {
            params.n = parse_scalar<std::size_t>(value, value_offset);
            have_n = true;
        } else if (key == "alpha") {
            params.alpha = parse_scalar<double>(value, value_offset);
            have_alpha = true;
        } else if (key == "seed") {
            params.seed = parse_scalar<std::uint64_t>(value, value_offset);
        } else if (key == "f") {
            params.f = parse_list(value, value_offset);
            have_f = true;
        } else if (key == "p") {
            params.p = parse_list(value, value_offset);
            have_p = true;
        } else if (key == "top_tree") {
            ParsedTree parsed;
            try {
                parsed = parse_tree(value);
            } catch (const ParseError& e) {
                throw ParseError(std::string("top_tree: ") + e.what(), value_offset + e.offset());
            }
            params.top_tree.tree = std::move(parsed.tree);
            params.top_tree.mode = Mode::similarity;
            params.top_tree.node_weight.assign(params.top_tree.tree.node_count(), 0.0);
            for (NodeId id : params.top_tree.tree.internal_nodes()) {
                if (!parsed.weights[id]) throw ParseError("top_tree: internal node without ':W'", value_offset);
                params.top_tree.node_weight[id] = *parsed.weights[id];
            }
            have_top = true;
        } else {
            throw ParseError("unknown key '" + std::string(key) + "'", line_start);
        }
    }
    const std::pair<bool, const char*> required[] = {{have_k, "k"}, {have_n, "n"}, {have_alpha, "alpha"},
                                                     {have_f, "f"}, {have_p, "p"}, {have_top, "top_tree"}};
    for (const auto& [have, name] : required)
        if (!have) throw ParseError(std::string("missing key '") + name + "'", text.size());
    params.validate();
    return params;
}

std::string format_hsbm_config(const HsbmParams& params) {
    auto list = [](const std::vector<double>& xs) {
        std::string s = "[";
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (i) s += ", ";
            s += format_real(xs[i]);
        }
        return s + "]";
    };
    std::string out;
    out += "k = " + std::to_string(params.k) + "\n";
    out += "n = " + std::to_string(params.n) + "\n";
    out += "alpha = " + format_real(params.alpha) + "\n";
    out += "f = " + list(params.f) + "\n";
    out += "p = " + list(params.p) + "\n";
    out += "top_tree = " + serialize_tree(params.top_tree.tree, params.top_tree.node_weight) + "\n";
    out += "seed = " + std::to_string(params.seed) + "\n";
    return out;
}

}  // namespace hicluster
