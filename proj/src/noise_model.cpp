#include "luf/noise_model.hpp"

#include <algorithm>
#include <iterator>
#include <stdexcept>

namespace luf {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

template <typename Id>
std::vector<Id> sorted_unique(std::vector<Id> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(a) ^ (b + 0x632be59bd9b4e019ULL));
}

double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  const std::uint64_t h = splitmix64(mix_seed(seed, stream) ^ splitmix64(counter));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

ErrorPattern sample_error(const CodeGraph& g, const NoiseParams& params,
                          std::uint64_t sample_index) {
  if (!(params.p >= 0.0 && params.p <= 1.0) || !(params.q >= 0.0 && params.q <= 1.0)) {
    throw std::invalid_argument("flip probabilities must lie in [0, 1]");
  }
  ErrorPattern out;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const double prob = g.edge(e).kind == EdgeKind::Horizontal ? params.p : params.q;
    if (prob <= 0.0) continue;
    if (counter_uniform(params.seed, sample_index, e) < prob) out.edges.push_back(e);
  }
  return out;
}

Syndrome syndrome_of(const CodeGraph& g, const std::vector<EdgeId>& edges) {
  std::vector<std::uint8_t> parity(g.num_nodes(), 0);
  for (EdgeId e : edges) {
    parity[g.edge(e).lo] ^= 1;
    parity[g.edge(e).hi] ^= 1;
  }
  Syndrome s;
  for (NodeId v = static_cast<NodeId>(g.num_boundary()); v < g.num_nodes(); ++v) {
    if (parity[v]) s.defects.push_back(v);
  }
  return s;
}

template <typename Id>
std::vector<Id> symmetric_difference(const std::vector<Id>& a, const std::vector<Id>& b) {
  std::vector<Id> out;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

template std::vector<std::uint32_t> symmetric_difference(const std::vector<std::uint32_t>&,
                                                         const std::vector<std::uint32_t>&);

ErrorPattern make_error(std::vector<EdgeId> edges) { return {sorted_unique(std::move(edges))}; }

Syndrome make_syndrome(std::vector<NodeId> defects) {
  return {sorted_unique(std::move(defects))};
}

}  // namespace luf
