#include "pvc/planted_model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace pvc {

void ModelParams::validate() const {
    if (n < 1) throw std::invalid_argument("model: n must be at least 1");
    if (k > n)
        throw std::invalid_argument("model: core size k=" + std::to_string(k) +
                                    " exceeds n=" + std::to_string(n));
    if (!(p > 0.0 && p <= 1.0))
        throw std::invalid_argument("model: p=" + std::to_string(p) + " outside (0, 1]");
}

PlantedInstance sample_instance(const ModelParams& params) {
    Rng rng(params.seed, 0);
    return sample_instance(params, rng);
}

PlantedInstance sample_instance(const ModelParams& params, Rng& rng) {
    params.validate();
    const std::size_t n = params.n;
    const std::size_t k = params.k;

    std::vector<Vertex> order(n);
    std::iota(order.begin(), order.end(), Vertex{0});
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + rng.uniform_below(n - i);
        std::swap(order[i], order[j]);
    }
    Bitset core(n);
    for (std::size_t i = 0; i < k; ++i) core.set(order[i]);

    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(
        params.p * static_cast<double>(k * n - k * (k + 1) / 2) * 1.1 + 16));
    for (std::size_t c = core.find_first(); c < n; c = core.find_next(c + 1)) {
        for (std::size_t v = 0; v < n; ++v) {
            if (v == c || (core.test(v) && v < c)) continue;
            if (rng.bernoulli(params.p)) edges.emplace_back(static_cast<Vertex>(c), static_cast<Vertex>(v));
        }
    }
    return PlantedInstance{Graph(n, edges), std::move(core), params};
}

std::size_t heavy_subset_size(std::size_t n, std::size_t k, double delta) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("delta must lie in (0, 1)");
    return static_cast<std::size_t>(std::floor(delta * static_cast<double>(n - k)));
}

bool is_delta_heavy(const PlantedInstance& inst, double delta) {
    const std::size_t n = inst.n();
    const std::size_t k = inst.core.count();
    if (k == 0) throw std::invalid_argument("delta-heaviness needs a non-empty core");
    if (k == n) throw std::invalid_argument("delta-heaviness needs a non-empty fringe");
    const std::size_t fringe_size = n - k;
    const std::size_t s = heavy_subset_size(n, k, delta);
    if (s == 0)
        throw std::invalid_argument("delta-heaviness subset size floor(delta*(n-k)) is zero");

    const Bitset fringe = inst.fringe();
    const double threshold = std::log(static_cast<double>(n));
    const std::size_t excluded = fringe_size - s;
    for (std::size_t v = inst.core.find_first(); v < n; v = inst.core.find_next(v + 1)) {
        const std::size_t d = fringe_degree(inst.graph, static_cast<Vertex>(v), fringe);
        const std::size_t worst = d > excluded ? d - excluded : 0;
        if (static_cast<double>(worst) < threshold) return false;
    }
    return true;
}

namespace {

// Branch-and-bound over local vertex masks. `adj[i]` is the neighbourhood of local vertex i.
class MaskIndependentSet {
public:
    explicit MaskIndependentSet(std::vector<std::uint64_t> adj) : adj_(std::move(adj)) {}

    std::size_t solve(std::uint64_t candidates) {
        best_ = 0;
        search(candidates, 0);
        return best_;
    }

private:
    void search(std::uint64_t p, std::size_t size) {
        // Vertices of degree <= 1 within p belong to some maximum independent set.
        bool reduced = true;
        while (reduced && p != 0) {
            reduced = false;
            for (std::uint64_t rest = p; rest != 0; rest &= rest - 1) {
                const int v = std::countr_zero(rest);
                if (((p >> v) & 1U) == 0) continue;
                const std::uint64_t nbrs = adj_[v] & p;
                if (std::popcount(nbrs) <= 1) {
                    p &= ~(nbrs | (std::uint64_t{1} << v));
                    ++size;
                    reduced = true;
                }
            }
        }
        if (p == 0) {
            best_ = std::max(best_, size);
            return;
        }
        if (size + static_cast<std::size_t>(std::popcount(p)) <= best_) return;

        int pivot = -1;
        int pivot_degree = -1;
        for (std::uint64_t rest = p; rest != 0; rest &= rest - 1) {
            const int v = std::countr_zero(rest);
            const int d = std::popcount(adj_[v] & p);
            if (d > pivot_degree) {
                pivot = v;
                pivot_degree = d;
            }
        }
        const std::uint64_t bit = std::uint64_t{1} << pivot;
        search(p & ~(adj_[pivot] | bit), size + 1);
        search(p & ~bit, size);
    }

    std::vector<std::uint64_t> adj_;
    std::size_t best_ = 0;
};

}  // namespace

std::size_t max_independent_set(const Graph& g, const Bitset& restrict,
                                const IndependentSetOptions& options) {
    if (restrict.size() != g.num_vertices())
        throw std::invalid_argument("restriction set size does not match the graph");
    const std::vector<Vertex> local = restrict.indices();
    const std::size_t limit = options.allow_large ? std::size_t{64} : options.exact_limit;
    if (local.size() > limit || local.size() > 64) {
        throw std::invalid_argument("independent set: " + std::to_string(local.size()) +
                                    " vertices exceed the exact-mode limit of " +
                                    std::to_string(std::min<std::size_t>(limit, 64)));
    }
    std::vector<std::uint64_t> adj(local.size(), 0);
    for (std::size_t i = 0; i < local.size(); ++i)
        for (std::size_t j = 0; j < local.size(); ++j)
            if (g.has_edge(local[i], local[j])) adj[i] |= std::uint64_t{1} << j;
    const std::uint64_t all =
        local.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << local.size()) - 1;
    return MaskIndependentSet(std::move(adj)).solve(all);
}

std::size_t max_core_independent_set(const PlantedInstance& inst,
                                     const IndependentSetOptions& options) {
    return max_independent_set(inst.graph, inst.core, options);
}

double core_independent_set_bound(std::size_t k, double p) {
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in (0, 1]");
    if (k == 0) throw std::invalid_argument("bound needs k >= 1");
    return (1.0 + 2.0 / p) * std::log(static_cast<double>(k)) + 1.0;
}

double small_k_density_threshold(double delta) {
    if (!(delta > std::exp(-1.0) && delta < 1.0))
        throw std::invalid_argument("delta must lie strictly inside (1/e, 1)");
    return std::sqrt((1.0 - std::log(delta)) / 2.0);
}

void write_instance(std::ostream& out, const PlantedInstance& inst) {
    write_edge_list(out, inst.graph);
    out << "core:";
    for (Vertex v : inst.core.indices()) out << ' ' << v;
    out << '\n';
}

InstanceFile read_instance(std::istream& in) {
    InstanceFile file{read_edge_list(in), std::nullopt};
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        constexpr std::string_view kTag = "core:";
        if (line.compare(0, kTag.size(), kTag) != 0)
            throw std::runtime_error("instance: unexpected trailing line '" + line + "'");
        const std::size_t n = file.graph.num_vertices();
        Bitset core(n);
        std::istringstream row(line.substr(kTag.size()));
        long long v;
        while (row >> v) {
            if (v < 0 || static_cast<std::size_t>(v) >= n)
                throw std::runtime_error("instance: core vertex " + std::to_string(v) + " out of range");
            core.set(static_cast<std::size_t>(v));
        }
        if (!row.eof()) throw std::runtime_error("instance: malformed core line '" + line + "'");
        file.core = std::move(core);
    }
    return file;
}

std::string params_to_json(const ModelParams& params) {
    nlohmann::ordered_json j;
    j["model"] = "planted-vertex-cover";
    j["n"] = params.n;
    j["k"] = params.k;
    j["p"] = params.p;
    j["seed"] = params.seed;
    return j.dump(2) + "\n";
}

ModelParams params_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    ModelParams params;
    params.n = j.at("n").get<std::size_t>();
    params.k = j.at("k").get<std::size_t>();
    params.p = j.at("p").get<double>();
    params.seed = j.at("seed").get<std::uint64_t>();
    params.validate();
    return params;
}

}  // namespace pvc
