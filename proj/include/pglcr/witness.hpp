#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pglcr/gf.hpp"
#include "pglcr/metric.hpp"
#include "pglcr/projline.hpp"

namespace pglcr {

// Delta = {y in GF(q^2) : y^{q+1} = -1}, sorted by field index.
struct DeltaSet {
  std::vector<gf::Element> elems;

  // Position of y in elems, nullopt when y is not in Delta.
  std::optional<std::size_t> position(gf::Element y) const;
};

// Throws InvalidArgument for even q. Computes Delta as rho * {z : z^{q+1} = 1}
// and by a scan of the whole field; CheckFailure if the two disagree.
DeltaSet build_delta(const gf::FieldTower& t, gf::Element rho);

// The construction Omega --sigma--> Delta --h--> Delta --tau--> Omega with
// sigma(x) = (x + rho) / (1 - rho x), sigma(inf) = -1/rho,
// tau(y) = (y - rho) / (1 + rho y), tau(-1/rho) = inf, h(y) = y^3.
//
// Lemma checks run while building and throw CheckFailure on the first
// counterexample. Immutable afterwards.
class WitnessContext {
public:
  struct Options {
    std::uint32_t rho_selector = 0;
    // Exponent of h. Anything other than 3 is experimental.
    std::uint32_t exponent = 3;
  };

  // Needs q odd. The witness permutation is built only when h permutes Delta,
  // which the construction guarantees for q = 1 (mod 3).
  WitnessContext(const ProjectiveLine& line, Options options);
  explicit WitnessContext(const ProjectiveLine& line) : WitnessContext(line, Options{}) {}

  const ProjectiveLine& line() const { return *line_; }
  const gf::FieldTower& tower() const { return line_->tower(); }
  gf::Element rho() const { return rho_; }
  std::uint32_t rho_selector() const { return rho_selector_; }
  std::uint32_t exponent() const { return exponent_; }
  const DeltaSet& delta() const { return delta_; }

  gf::Element sigma(PointIndex x) const;
  PointIndex tau(gf::Element y) const;
  // y^exponent for y in Delta; throws InvalidArgument otherwise.
  gf::Element power_on_delta(gf::Element y) const;

  // Lookup tables built from sigma and tau.
  const std::vector<gf::Element>& sigma_map() const { return sigma_map_; }
  const std::vector<PointIndex>& tau_map() const { return tau_map_; } // by Delta position

  bool h_is_permutation() const { return h_bijective_; }
  bool has_witness() const { return witness_.has_value(); }
  // x -> tau(h(sigma(x))). Throws InvalidArgument when unavailable.
  const Permutation& witness() const;

private:
  const ProjectiveLine* line_;
  gf::Element rho_;
  std::uint32_t rho_selector_;
  std::uint32_t exponent_;
  DeltaSet delta_;
  std::vector<gf::Element> sigma_map_;
  std::vector<PointIndex> tau_map_;
  bool h_bijective_ = false;
  std::optional<Permutation> witness_;
};

gf::Element cube_on_delta(const WitnessContext& ctx, gf::Element y);

// Builds the witness for q = 1 (mod 6); throws InvalidArgument otherwise.
Permutation build_witness(const WitnessContext& ctx);

// |{x in Omega : witness(x) = g(x)}| from the permutation of g.
std::size_t coincidence_count(const WitnessContext& ctx, std::span<const PointIndex> g_row);
// |{y in Delta : y^3 = sigma(g(tau(y)))}| evaluated with field arithmetic for g.
std::size_t delta_coincidence_count(const WitnessContext& ctx, const MobiusMap& g);

struct LemmaStatus {
  bool checked = false;
  bool pass = false;
  std::string detail;
};

// Independent re-checks of the three lemmas on a built context.
LemmaStatus check_lemma1(const WitnessContext& ctx);
LemmaStatus check_lemma2(const WitnessContext& ctx);
LemmaStatus check_lemma3(const WitnessContext& ctx);

struct CertificateReport {
  std::uint32_t q = 0, p = 0, f = 0;
  std::uint32_t rho_selector = 0;
  std::uint32_t rho_index = 0;
  LemmaStatus lemma1, lemma2, lemma3;
  std::size_t group_order = 0;
  // histogram[k] = number of g with exactly k coincidences with the witness
  std::vector<std::uint64_t> coincidence_histogram;
  std::size_t max_coincidence = 0;
  bool delta_side_checked = false;
  std::size_t witness_distance = 0;
  std::size_t argmin_index = 0;
  Triple argmin_triple{};
  std::size_t lower_bound = 0; // q - 3
  std::string conclusion;
  bool pass = false;
};

struct CertifyOptions {
  unsigned threads = 1;
  // Compare the Omega-side and Delta-side counts for every g. Costs roughly
  // ten field operations per point per group element.
  bool delta_side = true;
};

// Runs every check; throws CheckFailure with the first counterexample.
CertificateReport certify(const WitnessContext& ctx, const GroupTable& group,
                          const CertifyOptions& options);

} // namespace pglcr
